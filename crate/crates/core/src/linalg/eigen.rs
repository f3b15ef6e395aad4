//! Dense Hermitian eigensolver.
//!
//! The matrix is reduced to real symmetric tridiagonal form with complex
//! Householder reflectors `H = I - tau v v*` (the subdiagonal comes out real),
//! the tridiagonal is diagonalized by implicit QL with Wilkinson-type shifts,
//! and the rotations are accumulated in a real matrix that is mapped back
//! through the reflectors at the end. No randomization anywhere, so the output
//! depends only on the input bits.

use ndarray::Array2;
use num_complex::Complex64;

use super::{cholesky, HermitianMatrix};
use crate::error::{Error, Result};

/// Default relative tolerance for eigensolves.
pub const DEFAULT_TOL: f64 = 1e-10;

/// QL iteration cap, in units of the matrix dimension.
pub const SWEEPS_PER_DIM: usize = 64;

/// Eigenpairs sorted by ascending eigenvalue.
///
/// Column `j` of `vectors` belongs to `values[j]`. The columns are orthonormal
/// in the inner product of the problem that produced them (Euclidean for
/// [`hermitian_eig`], `M`-weighted for [`generalized_eig`]).
#[derive(Debug, Clone, PartialEq)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    pub vectors: Array2<Complex64>,
}

impl EigDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    // off[i] couples diag[i] and diag[i + 1]; off[n - 1] is scratch.
    off: Vec<f64>,
    reflectors: Vec<Reflector>,
}

struct Reflector {
    // acts on rows `start..n`
    start: usize,
    tau: Complex64,
    v: Vec<Complex64>,
}

pub fn hermitian_eig(h: &HermitianMatrix, tol: f64) -> Result<EigDecomposition> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidTolerance(tol));
    }
    let n = h.dim();
    if n == 0 {
        return Ok(EigDecomposition {
            values: Vec::new(),
            vectors: Array2::zeros((0, 0)),
        });
    }
    let mut t = tridiagonalize(h);
    // zt[j] is column j of the accumulated rotation matrix
    let mut zt: Vec<Vec<f64>> = (0..n)
        .map(|j| {
            let mut col = vec![0.0; n];
            col[j] = 1.0;
            col
        })
        .collect();
    implicit_ql(&mut t.diag, &mut t.off, &mut zt, h.frobenius_norm(), tol)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| t.diag[a].total_cmp(&t.diag[b]));
    let values: Vec<f64> = order.iter().map(|&j| t.diag[j]).collect();

    let mut vectors = Array2::<Complex64>::zeros((n, n));
    for (col, &j) in order.iter().enumerate() {
        for (i, &z) in zt[j].iter().enumerate() {
            vectors[(i, col)] = Complex64::new(z, 0.0);
        }
    }
    drop(zt);
    apply_reflectors(&t.reflectors, &mut vectors);
    normalize_phases(&mut vectors);
    Ok(EigDecomposition { values, vectors })
}

/// Solves `A u = mu M u` for Hermitian `A` and Hermitian positive definite `M`
/// through the Cholesky reduction `R⁻¹ A R⁻*`. Returned vectors are
/// `M`-orthonormal.
pub fn generalized_eig(
    a: &HermitianMatrix,
    m: &HermitianMatrix,
    tol: f64,
) -> Result<EigDecomposition> {
    if a.dim() != m.dim() {
        return Err(Error::DimensionMismatch {
            context: "generalized_eig",
            expected: a.dim(),
            found: m.dim(),
        });
    }
    let r = cholesky(m)?;
    let reduced = r.reduce(a);
    let EigDecomposition {
        values,
        mut vectors,
    } = hermitian_eig(&reduced, tol)?;
    r.solve_upper_in_place(&mut vectors);
    normalize_phases(&mut vectors);
    Ok(EigDecomposition { values, vectors })
}

fn tridiagonalize(h: &HermitianMatrix) -> Tridiagonal {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.as_array().iter().copied().collect();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut reflectors = Vec::with_capacity(n.saturating_sub(1));
    let zero = Complex64::new(0.0, 0.0);

    for k in 0..n.saturating_sub(1) {
        let start = k + 1;
        let m = n - start;
        // column k below the diagonal, read from row k by Hermitian symmetry
        let x: Vec<Complex64> = (start..n).map(|i| a[k * n + i].conj()).collect();
        let alpha = x[0];
        let tail_sq: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();

        diag[k] = a[k * n + k].re;
        if tail_sq == 0.0 && alpha.im == 0.0 {
            off[k] = alpha.re;
            continue;
        }
        let norm = (alpha.norm_sqr() + tail_sq).sqrt();
        let beta = if alpha.re >= 0.0 { -norm } else { norm };
        let tau = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        let mut v = Vec::with_capacity(m);
        v.push(Complex64::new(1.0, 0.0));
        v.extend(x[1..].iter().map(|&z| z * scale));
        off[k] = beta;

        // p = tau * A22 v
        let mut p = vec![zero; m];
        for (r, pr) in p.iter_mut().enumerate() {
            let row = &a[(start + r) * n + start..(start + r + 1) * n];
            let mut s = zero;
            for (&arc, &vc) in row.iter().zip(&v) {
                s += arc * vc;
            }
            *pr = tau * s;
        }
        // w = p - (|tau|^2 v*A v / 2) v, with v*A v = (v* p) / tau
        let vp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let half = -0.5 * (tau.conj() * vp).re;
        let w: Vec<Complex64> = p.iter().zip(&v).map(|(&pi, &vi)| pi + vi * half).collect();

        // A22 -= v w* + w v*
        for r in 0..m {
            let (vr, wr) = (v[r], w[r]);
            let row = &mut a[(start + r) * n + start..(start + r + 1) * n];
            for ((arc, &vc), &wc) in row.iter_mut().zip(&v).zip(&w) {
                *arc -= vr * wc.conj() + wr * vc.conj();
            }
        }
        // row/column k now hold beta e1; keep A consistent for later reads
        a[k * n + start] = Complex64::new(beta, 0.0);
        a[start * n + k] = Complex64::new(beta, 0.0);
        for i in (start + 1)..n {
            a[k * n + i] = zero;
            a[i * n + k] = zero;
        }
        reflectors.push(Reflector { start, tau, v });
    }
    diag[n - 1] = a[(n - 1) * n + n - 1].re;
    off[n - 1] = 0.0;
    Tridiagonal {
        diag,
        off,
        reflectors,
    }
}

/// Implicit QL on a real symmetric tridiagonal matrix, accumulating the
/// rotations into the columns `zt`.
fn implicit_ql(
    d: &mut [f64],
    e: &mut [f64],
    zt: &mut [Vec<f64>],
    scale: f64,
    tol: f64,
) -> Result<()> {
    let n = d.len();
    let cap = SWEEPS_PER_DIM * n.max(1);
    let mut iterations = 0usize;
    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            if iterations >= cap {
                let off_diagonal = e[..n - 1].iter().map(|x| x * x).sum::<f64>().sqrt();
                // converged to the requested accuracy even if not to machine precision
                if off_diagonal <= tol * scale.max(f64::MIN_POSITIVE) {
                    return Ok(());
                }
                return Err(Error::NoConvergence {
                    iterations,
                    off_diagonal,
                });
            }
            iterations += 1;

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early_exit = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early_exit = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                let (lo, hi) = zt.split_at_mut(i + 1);
                let (zi, zi1) = (&mut lo[i], &mut hi[0]);
                for (a, b) in zi.iter_mut().zip(zi1.iter_mut()) {
                    let f = *b;
                    *b = s * *a + c * f;
                    *a = c * *a - s * f;
                }
            }
            if early_exit {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// `V <- H_0 H_1 ... H_{n-2} V`.
fn apply_reflectors(reflectors: &[Reflector], v: &mut Array2<Complex64>) {
    let cols = v.ncols();
    let data = v.as_slice_mut().expect("standard layout");
    let mut w = vec![Complex64::new(0.0, 0.0); cols];
    for refl in reflectors.iter().rev() {
        w.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (r, &vr) in refl.v.iter().enumerate() {
            let row = &data[(refl.start + r) * cols..(refl.start + r + 1) * cols];
            let vc = vr.conj();
            for (wj, &x) in w.iter_mut().zip(row) {
                *wj += vc * x;
            }
        }
        for (r, &vr) in refl.v.iter().enumerate() {
            let coef = refl.tau * vr;
            let row = &mut data[(refl.start + r) * cols..(refl.start + r + 1) * cols];
            for (x, &wj) in row.iter_mut().zip(&w) {
                *x -= coef * wj;
            }
        }
    }
}

/// Rotates every column so that its first entry of (near-)largest modulus is
/// real and positive.
pub(crate) fn normalize_phases(v: &mut Array2<Complex64>) {
    for mut col in v.columns_mut() {
        let largest = col.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if largest == 0.0 {
            continue;
        }
        let pivot = col
            .iter()
            .find(|z| z.norm() >= largest * (1.0 - 1e-10))
            .copied()
            .expect("some entry attains the maximum");
        let phase = pivot.conj() / pivot.norm();
        col.mapv_inplace(|z| z * phase);
    }
}
