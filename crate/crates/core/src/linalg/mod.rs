//! Dense Hermitian linear algebra: eigendecompositions, Cholesky, and the set
//! and subspace distances used to measure spectral approximation quality.

mod cholesky;
mod distance;
mod eigen;
mod hermitian;

use ndarray::Array2;
use num_complex::Complex64;

pub use cholesky::{cholesky, CholeskyFactor};
pub use distance::{hausdorff_distance, subspace_gap, symmetric_gap, RealSet};
pub use eigen::{generalized_eig, hermitian_eig, EigDecomposition, DEFAULT_TOL, SWEEPS_PER_DIM};
pub use hermitian::{HermitianMatrix, HERMITIAN_TOL};

pub(crate) use cholesky::cholesky_with_floor;

/// Conjugate transpose, in standard layout.
pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[(j, i)].conj())
}

/// Promotes a real matrix to complex.
pub fn complexify(a: &Array2<f64>) -> Array2<Complex64> {
    a.mapv(|x| Complex64::new(x, 0.0))
}
