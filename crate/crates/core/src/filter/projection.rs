use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::galerkin::GalerkinWindow;
use crate::linalg::{adjoint, cholesky_with_floor, complexify, CholeskyFactor, HermitianMatrix};

/// Pivot floor, relative to the largest Gram diagonal, for a usable reference basis.
const DEGENERACY_FLOOR: f64 = 1e-13;

/// A fixed finite-dimensional subspace nested in the fine trial space.
///
/// The basis is stored as fine-basis coefficient columns `B = T*`, where `T`
/// is the inclusion matrix (row `p` of `T` expresses reference vector `p` in
/// the fine basis, conjugated; all supported constructions are real).
#[derive(Debug, Clone)]
pub struct ReferenceSubspace {
    basis: Array2<Complex64>,
    gram: HermitianMatrix,
    factor: CholeskyFactor,
    label: String,
}

impl ReferenceSubspace {
    /// Builds `L` from an inclusion matrix `T` (`dim_L x dim_n`) and the fine
    /// mass matrix; the Gram matrix is `T M T*`.
    pub fn nested(
        inclusion: &Array2<f64>,
        fine_mass: &HermitianMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        Self::from_basis(adjoint(&complexify(inclusion)), fine_mass, label)
    }

    /// Builds `L` from coefficient columns in the fine basis.
    pub fn from_basis(
        basis: Array2<Complex64>,
        fine_mass: &HermitianMatrix,
        label: impl Into<String>,
    ) -> Result<Self> {
        if basis.nrows() != fine_mass.dim() {
            return Err(Error::DimensionMismatch {
                context: "reference subspace",
                expected: fine_mass.dim(),
                found: basis.nrows(),
            });
        }
        if basis.ncols() == 0 {
            return Err(Error::DegenerateReference);
        }
        let gram = fine_mass.congruence(&basis)?;
        let factor = cholesky_with_floor(&gram, DEGENERACY_FLOOR)
            .map_err(|_| Error::DegenerateReference)?;
        Ok(Self {
            basis,
            gram,
            factor,
            label: label.into(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn fine_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Array2<Complex64> {
        &self.basis
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// Matrix of `Q_n P` on the window in its orthonormal basis:
/// `S[(j, i)] = <P u_i, u_j>`, i.e. `S = C* G⁻¹ C` with `C = B* M U`.
///
/// Assembled as `X* X` with `X = R⁻¹ C` and `R R* = G`, so `S` is positive
/// semidefinite by construction.
pub fn projection_matrix(
    window: &GalerkinWindow,
    reference: &ReferenceSubspace,
    fine_mass: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    let n = fine_mass.dim();
    for found in [window.basis.nrows(), reference.fine_dim()] {
        if found != n {
            return Err(Error::DimensionMismatch {
                context: "projection matrix",
                expected: n,
                found,
            });
        }
    }
    let mu = fine_mass.as_array().dot(&window.basis);
    let mut x = adjoint(&reference.basis).dot(&mu);
    reference.factor.solve_lower_in_place(&mut x);
    Ok(HermitianMatrix::symmetrized(adjoint(&x).dot(&x)))
}
