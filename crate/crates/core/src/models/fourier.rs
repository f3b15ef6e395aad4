//! Truncated Fourier bases on `(-pi, pi)` for a sawtooth multiplication
//! operator with a rank-one perturbation.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Strength of the rank-one term `c <u, v_0> v_0`.
pub const COUPLING: f64 = 10.0;

/// Symbol of the multiplication operator; `a(0)` is the left branch.
pub fn sawtooth(x: f64) -> f64 {
    if x <= 0.0 {
        -2.0 * PI - x
    } else {
        2.0 * PI - x
    }
}

/// `d_m = (2 pi)^-1 integral a(x) e^{imx} dx` in closed form.
pub fn fourier_coefficient(m: i64) -> Complex64 {
    if m == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(0.0, (2.0 - sign) / m as f64)
}

/// `A[(p, q)] = d_{j - l} + c delta_{j0} delta_{l0}` for modes
/// `j = p - k`, `l = q - k`; the mass matrix is the identity.
pub fn stiffness(k: usize) -> Array2<Complex64> {
    let n = 2 * k + 1;
    let mut a = Array2::from_shape_fn((n, n), |(p, q)| fourier_coefficient(p as i64 - q as i64));
    a[(k, k)] += COUPLING;
    a
}

/// Zero-padded identity keeping the modes shared with the coarse space.
pub fn inclusion(coarse: usize, fine: usize) -> Result<Array2<f64>> {
    if coarse > fine {
        return Err(Error::NotNested {
            coarse: (2 * coarse + 1).to_string(),
            fine: (2 * fine + 1).to_string(),
        });
    }
    let mut t = Array2::zeros((2 * coarse + 1, 2 * fine + 1));
    for p in 0..(2 * coarse + 1) {
        t[(p, p + fine - coarse)] = 1.0;
    }
    Ok(t)
}

/// `1 + (c / 2 pi) integral dx / (a(x) - lambda)`, whose zeros off the
/// essential spectrum are the eigenvalues.
pub fn secular(lambda: f64) -> f64 {
    let ln = |x: f64| x.abs().ln();
    1.0 + COUPLING / (2.0 * PI)
        * (ln(PI + lambda) - ln(2.0 * PI + lambda) + ln(2.0 * PI - lambda) - ln(PI - lambda))
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    debug_assert!(flo * f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The eigenvalues in the gap `(-pi, pi)` and above `2 pi`.
pub fn eigenvalues() -> [f64; 2] {
    [bisect(secular, -3.0, -0.5), bisect(secular, 2.0 * PI + 0.01, 20.0)]
}
