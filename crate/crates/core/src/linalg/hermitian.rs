use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative asymmetry accepted by [`HermitianMatrix::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense complex Hermitian matrix, stored row-major.
///
/// Construction symmetrizes the input, so `self[(j, k)] == conj(self[(k, j)])`
/// holds bit-for-bit and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: Array2<Complex64>,
}

impl HermitianMatrix {
    /// Checks that `a` is Hermitian to [`HERMITIAN_TOL`] relative to its largest entry,
    /// then symmetrizes it.
    pub fn new(a: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = a.dim();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let scale = max_abs(a.view());
        let mut worst = 0.0_f64;
        for j in 0..rows {
            for k in j..rows {
                worst = worst.max((a[(j, k)] - a[(k, j)].conj()).norm());
            }
        }
        let asymmetry = if scale > 0.0 { worst / scale } else { 0.0 };
        if asymmetry > HERMITIAN_TOL || !asymmetry.is_finite() {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::symmetrized(a))
    }

    pub fn from_real(a: Array2<f64>) -> Result<Self> {
        Self::new(a.mapv(|x| Complex64::new(x, 0.0)))
    }

    /// Replaces `a` by `(a + a*) / 2` without checking how far from Hermitian it was.
    /// Used for products that are Hermitian in exact arithmetic.
    pub fn symmetrized(mut a: Array2<Complex64>) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "symmetrized needs a square matrix");
        for j in 0..n {
            a[(j, j)] = Complex64::new(a[(j, j)].re, 0.0);
            for k in (j + 1)..n {
                let avg = (a[(j, k)] + a[(k, j)].conj()) * 0.5;
                a[(j, k)] = avg;
                a[(k, j)] = avg.conj();
            }
        }
        Self { data: a }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            data: Array2::eye(n),
        }
    }

    pub fn from_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        let mut a = Array2::zeros((n, n));
        for (j, &v) in values.iter().enumerate() {
            a[(j, j)] = Complex64::new(v, 0.0);
        }
        Self { data: a }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn view(&self) -> ArrayView2<'_, Complex64> {
        self.data.view()
    }

    pub fn as_array(&self) -> &Array2<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> Array2<Complex64> {
        self.data
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(self.data.view())
    }

    /// Frobenius norm, an upper bound for the spectral norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|j| self.data[(j, j)].re).sum()
    }

    /// `B* H B` for a coefficient matrix `B` with `dim` rows.
    pub fn congruence(&self, b: &Array2<Complex64>) -> Result<HermitianMatrix> {
        if b.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "congruence",
                expected: self.dim(),
                found: b.nrows(),
            });
        }
        let hb = self.data.dot(b);
        Ok(Self::symmetrized(super::adjoint(b).dot(&hb)))
    }

    /// `self + factor * other`, both Hermitian with `factor` real.
    pub fn add_scaled(&self, factor: f64, other: &HermitianMatrix) -> Result<HermitianMatrix> {
        if other.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "add_scaled",
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::symmetrized(&self.data + &(&other.data * factor)))
    }
}

impl std::ops::Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.data[idx]
    }
}

fn max_abs(a: ArrayView2<'_, Complex64>) -> f64 {
    a.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let a = array![[c(1.0, 1e-15), c(2.0, 1.0)], [c(2.0, -1.0 + 1e-14), c(3.0, 0.0)]];
        let h = HermitianMatrix::new(a).unwrap();
        assert_eq!(h[(0, 0)].im, 0.0);
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = array![[c(1.0, 0.0), c(2.0, 0.0)], [c(2.5, 0.0), c(3.0, 0.0)]];
        assert!(matches!(
            HermitianMatrix::new(a),
            Err(Error::NotHermitian { .. })
        ));
        let rect = Array2::<Complex64>::zeros((2, 3));
        assert!(matches!(
            HermitianMatrix::new(rect),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn congruence_with_identity_is_noop() {
        let h = HermitianMatrix::new(array![[c(2.0, 0.0), c(0.0, 1.0)], [c(0.0, -1.0), c(5.0, 0.0)]])
            .unwrap();
        let same = h.congruence(&Array2::eye(2)).unwrap();
        assert_eq!(same, h);
        assert_eq!(h.trace(), 7.0);
    }
}
