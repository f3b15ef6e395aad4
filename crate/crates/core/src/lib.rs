//! Pollution-free approximation of eigenvalues in spectral gaps.
//!
//! A Galerkin discretization of a self-adjoint operator produces a spectral
//! window: the span of discrete eigenvectors whose eigenvalues fall in an
//! interval. Inside gaps of the essential spectrum that window is usually
//! contaminated by spurious eigenvectors. This crate filters the window with
//! the orthogonal projection onto a fixed coarse reference space, keeps the
//! eigenvectors of the compressed projector that stay away from zero, and
//! runs Rayleigh-Ritz on what is left.
//!
//! * [`linalg`] dense Hermitian kernels
//! * [`galerkin`] pencils, Galerkin eigenproblems and spectral windows
//! * [`filter`] the projector filter, selection policies, refinement sweeps
//! * [`models`] three worked operators with nested trial spaces
//! * [`cli`] command-line front end and report writers

pub mod cli;
pub mod error;
pub mod filter;
pub mod galerkin;
pub mod linalg;
pub mod models;

pub use error::{Error, Result};
