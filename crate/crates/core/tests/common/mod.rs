#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_filter::galerkin::{solve_galerkin, Interval, Pencil};
use spectral_filter::linalg::HermitianMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut impl Rng, rows: usize, cols: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((rows, cols), |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn adjoint(a: &Array2<Complex64>) -> Array2<Complex64> {
    a.t().mapv(|z| z.conj())
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let b = random_complex(rng, n, n);
    HermitianMatrix::symmetrized(&b + &adjoint(&b))
}

pub fn random_hpd(rng: &mut impl Rng, n: usize) -> HermitianMatrix {
    let b = random_complex(rng, n, n);
    let mut m = b.dot(&adjoint(&b));
    for i in 0..n {
        m[(i, i)] += Complex64::new(0.5, 0.0);
    }
    HermitianMatrix::symmetrized(m)
}

/// Random pencil, reference basis and an interval holding at least one
/// Galerkin eigenvalue.
pub struct Instance {
    pub pencil: Pencil,
    pub reference: Array2<Complex64>,
    pub delta: Interval,
}

pub fn random_instance(rng: &mut impl Rng, max_dim: usize) -> Instance {
    let n = rng.random_range(1..=max_dim);
    let pencil = Pencil::new(random_hermitian(rng, n), random_hpd(rng, n), "random").unwrap();
    let m = rng.random_range(1..=n);
    let reference = random_complex(rng, n, m);
    let mu = solve_galerkin(&pencil).unwrap().values;
    let i = rng.random_range(0..n);
    let j = rng.random_range(i..n);
    let delta = Interval::new(mu[i] - 1e-6, mu[j] + 1e-6).unwrap();
    Instance {
        pencil,
        reference,
        delta,
    }
}

/// `<x, y>_G = y* G x` for column vectors.
pub fn inner(g: &Array2<Complex64>, x: &[Complex64], y: &[Complex64]) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..y.len() {
            s += y[i].conj() * g[(i, j)] * x[j];
        }
    }
    s
}

/// Twice-iterated modified Gram-Schmidt in the `g` inner product.
pub fn gram_schmidt(b: &Array2<Complex64>, g: &Array2<Complex64>) -> Vec<Vec<Complex64>> {
    let mut q: Vec<Vec<Complex64>> = Vec::new();
    for col in b.columns() {
        let mut v: Vec<Complex64> = col.to_vec();
        for _ in 0..2 {
            for p in &q {
                let c = inner(g, &v, p);
                for (vi, pi) in v.iter_mut().zip(p) {
                    *vi -= c * pi;
                }
            }
        }
        let norm = inner(g, &v, &v).re.sqrt();
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    q
}
