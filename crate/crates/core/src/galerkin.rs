//! Trial spaces as matrix pencils, the Galerkin eigenproblem, and spectral
//! windows.

use std::fmt;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{cholesky, generalized_eig, EigDecomposition, HermitianMatrix, DEFAULT_TOL};

/// Stiffness and mass matrices of a quadratic form and the ambient inner
/// product on a trial basis: `stiffness[(j, k)] = a[phi_k, phi_j]`,
/// `mass[(j, k)] = <phi_k, phi_j>`.
#[derive(Debug, Clone)]
pub struct Pencil {
    stiffness: HermitianMatrix,
    mass: HermitianMatrix,
    label: String,
}

impl Pencil {
    pub fn new(
        stiffness: HermitianMatrix,
        mass: HermitianMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if stiffness.dim() != mass.dim() {
            return Err(Error::DimensionMismatch {
                context: "pencil",
                expected: stiffness.dim(),
                found: mass.dim(),
            });
        }
        cholesky(&mass)?;
        Ok(Self {
            stiffness,
            mass,
            label: label.into(),
        })
    }

    pub fn stiffness(&self) -> &HermitianMatrix {
        &self.stiffness
    }

    pub fn mass(&self) -> &HermitianMatrix {
        &self.mass
    }

    pub fn dim(&self) -> usize {
        self.mass.dim()
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Closed interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    pub fn lower(&self) -> f64 {
        self.a
    }

    pub fn upper(&self) -> f64 {
        self.b
    }

    pub fn contains(&self, x: f64) -> bool {
        self.a <= x && x <= self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Galerkin eigenpairs with eigenvalue in an interval.
#[derive(Debug, Clone)]
pub struct GalerkinWindow {
    /// Eigenvalues in the interval, ascending.
    pub mu: Vec<f64>,
    /// `dim x d_n` coefficients, columns mass-orthonormal.
    pub basis: Array2<Complex64>,
    pub parent: String,
    pub interval: Interval,
}

impl GalerkinWindow {
    /// Window dimension, counted with multiplicity.
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }
}

/// Full Galerkin spectrum `sigma(A, L_n)` of a pencil.
pub fn solve_galerkin(p: &Pencil) -> Result<EigDecomposition> {
    generalized_eig(&p.stiffness, &p.mass, DEFAULT_TOL)
}

/// Keeps the eigenpairs with `a <= mu <= b`. The comparison is exact on the
/// computed values; choose interval endpoints with a safety margin.
pub fn spectral_window(
    spec: &EigDecomposition,
    delta: Interval,
    parent: impl Into<String>,
) -> GalerkinWindow {
    let keep: Vec<usize> = spec
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| delta.contains(mu))
        .map(|(j, _)| j)
        .collect();
    GalerkinWindow {
        mu: keep.iter().map(|&j| spec.values[j]).collect(),
        basis: spec.vectors.select(Axis(1), &keep),
        parent: parent.into(),
        interval: delta,
    }
}

/// Gram matrix `A + (1 - m_shift) M` of the energy inner product.
///
/// `m_shift` must not exceed the smallest Galerkin eigenvalue, otherwise the
/// result need not be positive definite. Solves the pencil to check; use
/// [`a_gram_with_spectrum`] when the spectrum is already known.
pub fn a_gram(p: &Pencil, m_shift: f64) -> Result<HermitianMatrix> {
    let spec = solve_galerkin(p)?;
    a_gram_with_spectrum(p, &spec, m_shift)
}

pub fn a_gram_with_spectrum(
    p: &Pencil,
    spec: &EigDecomposition,
    m_shift: f64,
) -> Result<HermitianMatrix> {
    let minimum = spec.values.first().copied().unwrap_or(f64::INFINITY);
    let slack = 1e-12 * minimum.abs().max(1.0);
    if !(m_shift <= minimum + slack) {
        return Err(Error::ShiftTooLarge {
            shift: m_shift,
            minimum,
        });
    }
    p.stiffness.add_scaled(1.0 - m_shift, &p.mass)
}

/// Default energy shift when `min sigma(A)` is unknown: the smallest Galerkin
/// eigenvalue minus one.
pub fn default_shift(spec: &EigDecomposition) -> f64 {
    spec.values.first().copied().unwrap_or(0.0) - 1.0
}
