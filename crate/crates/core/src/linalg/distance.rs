use ndarray::Array2;
use num_complex::Complex64;

use super::cholesky::cholesky_with_floor;
use super::{adjoint, hermitian_eig, HermitianMatrix, DEFAULT_TOL};
use crate::error::{Error, Result};

/// Pivot floor (relative to the largest Gram diagonal) below which a basis is
/// considered rank deficient.
const RANK_FLOOR: f64 = 1e-13;

/// Finite multiset of reals, possibly empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RealSet {
    pub values: Vec<f64>,
}

impl RealSet {
    pub fn new(values: impl Into<Vec<f64>>) -> Self {
        Self {
            values: values.into(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `sup_{x in self} dist(x, other)`.
    fn excess_over(&self, other: &RealSet) -> f64 {
        self.values
            .iter()
            .map(|&x| {
                other
                    .values
                    .iter()
                    .map(|&y| (x - y).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

impl From<Vec<f64>> for RealSet {
    fn from(values: Vec<f64>) -> Self {
        Self { values }
    }
}

pub fn hausdorff_distance(x: &RealSet, y: &RealSet) -> Result<f64> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok(x.excess_over(y).max(y.excess_over(x)))
}

/// Gap `sup_{u in span U, |u| = 1} dist(u, span V)` in the inner product with
/// Gram matrix `g`.
///
/// Both bases are first made `g`-orthonormal; the gap is then the largest
/// singular value of the residual `(I - Pi_V) Q_U`, which avoids the
/// cancellation in `1 - cos^2` for nearly coincident spans.
pub fn subspace_gap(
    u: &Array2<Complex64>,
    v: &Array2<Complex64>,
    g: &HermitianMatrix,
) -> Result<f64> {
    let n = g.dim();
    for (basis, name) in [(u, "U"), (v, "V")] {
        if basis.nrows() != n {
            return Err(Error::DimensionMismatch {
                context: "subspace_gap",
                expected: n,
                found: basis.nrows(),
            });
        }
        if basis.ncols() == 0 {
            return Err(Error::RankDeficient { argument: name });
        }
    }
    let qu = orthonormalize(u, g, "U")?;
    let qv = orthonormalize(v, g, "V")?;
    let gqu = g.as_array().dot(&qu);
    let coeffs = adjoint(&qv).dot(&gqu);
    let resid = &qu - &qv.dot(&coeffs);
    let gram = g.congruence(&resid)?;
    let top = hermitian_eig(&gram, DEFAULT_TOL)?
        .values
        .last()
        .copied()
        .unwrap_or(0.0);
    Ok(top.max(0.0).sqrt().min(1.0))
}

/// Symmetric gap `max(delta(U, V), delta(V, U))`.
pub fn symmetric_gap(
    u: &Array2<Complex64>,
    v: &Array2<Complex64>,
    g: &HermitianMatrix,
) -> Result<f64> {
    Ok(subspace_gap(u, v, g)?.max(subspace_gap(v, u, g)?))
}

/// Returns `B R⁻*` where `R R* = B* G B`, a `G`-orthonormal basis of span `B`.
pub(crate) fn orthonormalize(
    b: &Array2<Complex64>,
    g: &HermitianMatrix,
    argument: &'static str,
) -> Result<Array2<Complex64>> {
    let gram = g.congruence(b)?;
    let r = cholesky_with_floor(&gram, RANK_FLOOR)
        .map_err(|_| Error::RankDeficient { argument })?;
    // Q = B R⁻*  <=>  Q* = R⁻¹ B*
    let mut qt = adjoint(b);
    r.solve_lower_in_place(&mut qt);
    Ok(adjoint(&qt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    fn col(entries: &[f64]) -> Array2<Complex64> {
        Array2::from_shape_fn((entries.len(), 1), |(i, _)| Complex64::new(entries[i], 0.0))
    }

    #[test]
    fn hausdorff_examples() {
        let d = |x: &[f64], y: &[f64]| {
            hausdorff_distance(&RealSet::new(x.to_vec()), &RealSet::new(y.to_vec())).unwrap()
        };
        assert_eq!(d(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(d(&[0.0], &[1.0, 3.0]), 3.0);
        assert_abs_diff_eq!(d(&[1.0, 2.0], &[1.1]), 0.9, epsilon = 1e-15);
    }

    #[test]
    fn hausdorff_rejects_empty() {
        let err = hausdorff_distance(&RealSet::default(), &RealSet::new(vec![1.0])).unwrap_err();
        assert_eq!(err.to_string(), "Hausdorff undefined for empty set");
    }

    #[test]
    fn gap_examples() {
        let g = HermitianMatrix::identity(2);
        let e1 = col(&[1.0, 0.0]);
        let e2 = col(&[0.0, 1.0]);
        let diag = col(&[1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()]);
        assert_abs_diff_eq!(subspace_gap(&e1, &e1, &g).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(subspace_gap(&e1, &e2, &g).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            subspace_gap(&e1, &diag, &g).unwrap(),
            1.0 / 2f64.sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn gap_is_not_symmetric() {
        let g = HermitianMatrix::identity(3);
        let small = col(&[1.0, 0.0, 0.0]);
        let big = array![[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]].mapv(|x| Complex64::new(x, 0.0));
        assert_abs_diff_eq!(subspace_gap(&small, &big, &g).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(subspace_gap(&big, &small, &g).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn weighted_gram_changes_angle() {
        // in the inner product diag(1, 3), e1 and e1 + e2 have cos^2 = 1/4
        let g = HermitianMatrix::from_diagonal(&[1.0, 3.0]);
        let gap = subspace_gap(&col(&[1.0, 0.0]), &col(&[1.0, 1.0]), &g).unwrap();
        assert_abs_diff_eq!(gap, (0.75f64).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn rank_deficiency_names_argument() {
        let g = HermitianMatrix::identity(2);
        let good = col(&[1.0, 0.0]);
        let bad = array![[1.0, 2.0], [1.0, 2.0]].mapv(|x| Complex64::new(x, 0.0));
        assert_eq!(
            subspace_gap(&bad, &good, &g),
            Err(Error::RankDeficient { argument: "U" })
        );
        assert_eq!(
            subspace_gap(&good, &bad, &g),
            Err(Error::RankDeficient { argument: "V" })
        );
    }
}
