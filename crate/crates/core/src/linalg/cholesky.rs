use ndarray::Array2;
use num_complex::Complex64;

use super::HermitianMatrix;
use crate::error::{Error, Result};

/// Lower-triangular factor `R` with `R R* = M`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    lower: Array2<Complex64>,
}

/// Factorizes a Hermitian positive definite matrix.
///
/// The loop order is fixed, so repeated runs on the same input give the same
/// factor bit-for-bit.
pub fn cholesky(m: &HermitianMatrix) -> Result<CholeskyFactor> {
    factorize(m, 0.0)
}

/// Like [`cholesky`] but also rejects pivots at or below `rel_floor` times the
/// largest diagonal entry. Used as a numerical rank test on Gram matrices.
pub(crate) fn cholesky_with_floor(m: &HermitianMatrix, rel_floor: f64) -> Result<CholeskyFactor> {
    factorize(m, rel_floor)
}

fn factorize(m: &HermitianMatrix, rel_floor: f64) -> Result<CholeskyFactor> {
    let n = m.dim();
    let a = m.as_array();
    let diag_max = (0..n).fold(0.0_f64, |acc, j| acc.max(a[(j, j)].re));
    let floor = rel_floor * diag_max;
    let mut l = Array2::<Complex64>::zeros((n, n));
    for j in 0..n {
        let mut pivot = a[(j, j)].re;
        for k in 0..j {
            pivot -= l[(j, k)].norm_sqr();
        }
        if !(pivot > floor) || !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let ljj = pivot.sqrt();
        l[(j, j)] = Complex64::new(ljj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(CholeskyFactor { lower: l })
}

impl CholeskyFactor {
    pub fn lower(&self) -> &Array2<Complex64> {
        &self.lower
    }

    pub fn into_lower(self) -> Array2<Complex64> {
        self.lower
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// Solves `R X = B` in place.
    pub fn solve_lower_in_place(&self, b: &mut Array2<Complex64>) {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let cols = b.ncols();
        let data = b
            .as_slice_mut()
            .expect("right-hand side must be in standard layout");
        for i in 0..n {
            let (head, tail) = data.split_at_mut(i * cols);
            let row_i = &mut tail[..cols];
            for k in 0..i {
                let lik = self.lower[(i, k)];
                if lik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_k = &head[k * cols..(k + 1) * cols];
                for (x, &y) in row_i.iter_mut().zip(row_k) {
                    *x -= lik * y;
                }
            }
            let inv = 1.0 / self.lower[(i, i)].re;
            row_i.iter_mut().for_each(|x| *x *= inv);
        }
    }

    /// Solves `R* X = B` in place.
    pub fn solve_upper_in_place(&self, b: &mut Array2<Complex64>) {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let cols = b.ncols();
        let data = b
            .as_slice_mut()
            .expect("right-hand side must be in standard layout");
        for i in (0..n).rev() {
            let (head, tail) = data.split_at_mut((i + 1) * cols);
            let row_i = &mut head[i * cols..];
            for k in (i + 1)..n {
                let uik = self.lower[(k, i)].conj();
                if uik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row_k = &tail[(k - i - 1) * cols..(k - i) * cols];
                for (x, &y) in row_i.iter_mut().zip(row_k) {
                    *x -= uik * y;
                }
            }
            let inv = 1.0 / self.lower[(i, i)].re;
            row_i.iter_mut().for_each(|x| *x *= inv);
        }
    }

    /// `R⁻¹ H R⁻*`, the standard-form matrix of the pencil `(H, R R*)`.
    pub fn reduce(&self, h: &HermitianMatrix) -> HermitianMatrix {
        let mut y = h.as_array().clone();
        self.solve_lower_in_place(&mut y);
        // R⁻¹ H R⁻* is Hermitian, so it equals (R⁻¹ (R⁻¹ H)*).
        let mut z = super::adjoint(&y);
        self.solve_lower_in_place(&mut z);
        HermitianMatrix::symmetrized(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn identity_and_diagonal() {
        let r = cholesky(&HermitianMatrix::identity(3)).unwrap();
        assert_eq!(r.lower(), &Array2::<Complex64>::eye(3));
        let r = cholesky(&HermitianMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(r.lower()[(0, 0)].re, 2.0);
        assert_eq!(r.lower()[(1, 1)].re, 3.0);
        assert_eq!(r.lower()[(1, 0)].norm(), 0.0);
    }

    #[test]
    fn two_by_two_multiplies_back() {
        let m = HermitianMatrix::from_real(array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let r = cholesky(&m).unwrap();
        let l = r.lower();
        assert_abs_diff_eq!(l[(0, 0)].re, 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(l[(1, 0)].re, 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(l[(1, 1)].re, 1.5f64.sqrt(), epsilon = 1e-15);
        let back = l.dot(&crate::linalg::adjoint(l));
        for (x, y) in back.iter().zip(m.as_array().iter()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn non_positive_pivot_reports_index() {
        let m = HermitianMatrix::from_real(array![[1.0, 2.0], [2.0, 1.0]]).unwrap();
        match cholesky(&m) {
            Err(Error::NotPositiveDefinite { index, .. }) => assert_eq!(index, 1),
            other => panic!("unexpected {other:?}"),
        }
        let msg = cholesky(&m).unwrap_err().to_string();
        assert!(msg.contains("mass matrix not positive definite"));
    }

    #[test]
    fn reproducible_bit_for_bit() {
        let m = HermitianMatrix::new(array![
            [Complex64::new(4.0, 0.0), Complex64::new(1.0, 0.5)],
            [Complex64::new(1.0, -0.5), Complex64::new(3.0, 0.0)]
        ])
        .unwrap();
        assert_eq!(cholesky(&m).unwrap(), cholesky(&m).unwrap());
    }
}
