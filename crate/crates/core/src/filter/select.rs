use std::fmt;
use std::str::FromStr;

use ndarray::{s, Array2};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianMatrix, DEFAULT_TOL};

/// Eigenvalues of `S` below this are the zero cluster.
pub const ZERO_FLOOR: f64 = 1e-8;

/// Slack allowed outside `[0, 1]` before clamping.
pub const UNIT_SLACK: f64 = 1e-10;

/// How to pick the filtered subspace from the eigenvalues of `S`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Policy {
    /// Keep eigenvalues `>= t`. With `t = gamma / 2` this is the textbook rule.
    Threshold(f64),
    /// Keep the `d` largest.
    ExpectedDim(usize),
    /// Split at the largest ratio between consecutive eigenvalues.
    #[default]
    AutoGap,
}

impl Policy {
    pub fn threshold(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidPolicy(format!(
                "threshold must lie in [0, 1], got {t}"
            )));
        }
        Ok(Policy::Threshold(t))
    }

    pub fn expected_dim(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidPolicy("expected dimension must be positive".into()));
        }
        Ok(Policy::ExpectedDim(d))
    }

    /// `[gamma/2, 1]` for a known `gamma`.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        Self::threshold(gamma / 2.0)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Threshold(t) => write!(f, "threshold={t}"),
            Policy::ExpectedDim(d) => write!(f, "dim={d}"),
            Policy::AutoGap => f.write_str("auto"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "auto" {
            return Ok(Policy::AutoGap);
        }
        let bad = || Error::InvalidPolicy(format!("expected auto | dim=D | threshold=T, got {s:?}"));
        let (key, value) = s.split_once('=').ok_or_else(bad)?;
        match key {
            "dim" => Policy::expected_dim(value.parse().map_err(|_| bad())?),
            "threshold" => Policy::threshold(value.parse().map_err(|_| bad())?),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Policy {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Spectrum of `S` and the selected eigenvectors spanning the filtered subspace.
#[derive(Debug, Clone)]
pub struct FilterSelection {
    /// All eigenvalues of `S`, descending, clamped to `[0, 1]`.
    pub sigma_p: Vec<f64>,
    /// Selected eigenvectors of `S` (`d_n x d`), orthonormal.
    pub vectors: Array2<Complex64>,
    pub d: usize,
    /// Smallest kept eigenvalue, `None` when nothing was kept.
    pub gamma_est: Option<f64>,
    pub policy: Policy,
}

impl FilterSelection {
    /// The kept eigenvalues, `sigma_p[..d]`.
    pub fn head(&self) -> &[f64] {
        &self.sigma_p[..self.d]
    }

    /// Kept eigenvalues above the zero floor.
    pub fn nonzero_head_count(&self) -> usize {
        self.head().iter().filter(|&&s| s >= ZERO_FLOOR).count()
    }
}

pub fn filter_eigs(s: &HermitianMatrix, policy: Policy) -> Result<FilterSelection> {
    let n = s.dim();
    let eig = hermitian_eig(s, DEFAULT_TOL)?;
    debug_assert!(eig
        .values
        .iter()
        .all(|&x| (-UNIT_SLACK..=1.0 + UNIT_SLACK).contains(&x)));
    // ascending -> descending; reversing keeps the solver's deterministic tie order per value
    let sigma_p: Vec<f64> = eig.values.iter().rev().map(|&x| x.clamp(0.0, 1.0)).collect();
    let d = match policy {
        Policy::Threshold(t) => sigma_p.iter().take_while(|&&x| x >= t).count(),
        Policy::ExpectedDim(d) => {
            if d > n {
                return Err(Error::WindowTooSmall {
                    window: n,
                    requested: d,
                });
            }
            d
        }
        Policy::AutoGap => auto_gap_split(&sigma_p),
    };
    let mut vectors = Array2::zeros((n, d));
    for k in 0..d {
        vectors
            .slice_mut(s![.., k])
            .assign(&eig.vectors.slice(s![.., n - 1 - k]));
    }
    Ok(FilterSelection {
        gamma_est: d.checked_sub(1).map(|last| sigma_p[last]),
        sigma_p,
        vectors,
        d,
        policy,
    })
}

/// Number of leading values kept by the ratio-gap rule.
///
/// Denominators are floored at [`ZERO_FLOOR`] and a virtual zero follows the
/// last value, so a window without a zero cluster selects everything. The
/// first maximal ratio wins.
fn auto_gap_split(desc: &[f64]) -> usize {
    match desc.first() {
        None => return 0,
        Some(&top) if top < ZERO_FLOOR => return 0,
        _ => {}
    }
    let mut best = (0, f64::NEG_INFINITY);
    for i in 0..desc.len() {
        let next = desc.get(i + 1).copied().unwrap_or(0.0);
        let ratio = desc[i] / next.max(ZERO_FLOOR);
        if ratio > best.1 {
            best = (i + 1, ratio);
        }
    }
    best.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn diag(values: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_diagonal(values)
    }

    #[test]
    fn auto_gap_splits_before_zero_cluster() {
        // ratios 2.5, 0.4/1e-8, then the sub-floor tail
        let sel = filter_eigs(&diag(&[1.0, 0.4, 1e-12]), Policy::AutoGap).unwrap();
        assert_eq!(sel.d, 2);
        assert_eq!(sel.head(), &[1.0, 0.4]);
        assert_eq!(sel.gamma_est, Some(0.4));
        assert_abs_diff_eq!(sel.vectors[(1, 1)].norm(), 1.0);
    }

    #[test]
    fn expected_dim_keeps_largest() {
        let sel = filter_eigs(&diag(&[0.4, 1.0, 1e-12]), Policy::ExpectedDim(1)).unwrap();
        assert_eq!(sel.d, 1);
        assert_eq!(sel.head(), &[1.0]);
        assert_abs_diff_eq!(sel.vectors[(1, 0)].norm(), 1.0);
        let err = filter_eigs(&diag(&[0.4, 1.0]), Policy::ExpectedDim(3)).unwrap_err();
        assert_eq!(err.to_string(), "window smaller than requested dimension (2 < 3)");
    }

    #[test]
    fn threshold_policy() {
        let sel = filter_eigs(&diag(&[0.9, 0.05, 0.3]), Policy::Threshold(0.2)).unwrap();
        assert_eq!(sel.head(), &[0.9, 0.3]);
        let none = filter_eigs(&diag(&[0.1]), Policy::Threshold(0.2)).unwrap();
        assert_eq!(none.d, 0);
        assert_eq!(none.gamma_est, None);
    }

    #[test]
    fn auto_gap_all_below_floor_is_empty() {
        let sel = filter_eigs(&diag(&[1e-10, 1e-12]), Policy::AutoGap).unwrap();
        assert_eq!(sel.d, 0);
        assert_eq!(sel.vectors.dim(), (2, 0));
    }

    #[test]
    fn auto_gap_without_zero_cluster_selects_everything() {
        let sel = filter_eigs(&HermitianMatrix::identity(4), Policy::AutoGap).unwrap();
        assert_eq!(sel.d, 4);
        let sel = filter_eigs(&diag(&[0.9, 0.6, 0.5]), Policy::AutoGap).unwrap();
        assert_eq!(sel.d, 3);
    }

    #[test]
    fn clamps_to_unit_interval() {
        let sel = filter_eigs(&diag(&[1.0 + 1e-12, -1e-13]), Policy::AutoGap).unwrap();
        assert_eq!(sel.sigma_p, vec![1.0, 0.0]);
    }

    #[test]
    fn policy_parsing() {
        assert_eq!("auto".parse::<Policy>().unwrap(), Policy::AutoGap);
        assert_eq!("dim=2".parse::<Policy>().unwrap(), Policy::ExpectedDim(2));
        assert_eq!(
            "threshold=0.05".parse::<Policy>().unwrap(),
            Policy::Threshold(0.05)
        );
        for bad in ["dim=0", "dim=x", "threshold=2", "gap", ""] {
            assert!(bad.parse::<Policy>().is_err(), "{bad}");
        }
        assert_eq!(Policy::ExpectedDim(3).to_string(), "dim=3");
        assert_eq!(Policy::from_gamma(0.4).unwrap(), Policy::Threshold(0.2));
    }
}
