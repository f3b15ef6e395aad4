//! The three worked operators, their nested trial spaces and known spectra.
//!
//! * `model1`: sawtooth multiplication plus `10 <u, v_0> v_0` on `L^2(-pi, pi)`,
//!   Fourier modes `v_{-k}..v_k`.
//! * `model2`: the block operator `(-d^2, -d; d, 2)` on `(0, 1)`, P1 elements,
//!   Dirichlet times free.
//! * `model3`: a three-component magnetohydrodynamic block operator, P1
//!   elements, Dirichlet times free times free.

pub mod fem;
pub mod fourier;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::filter::TrialFamily;
use crate::galerkin::{Interval, Pencil};
use crate::linalg::HermitianMatrix;
use fem::{Pairing, Space, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Model1,
    Model2,
    Model3,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Model1 => "model1",
            Model::Model2 => "model2",
            Model::Model3 => "model3",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "model1" => Ok(Model::Model1),
            "model2" => Ok(Model::Model2),
            "model3" => Ok(Model::Model3),
            _ => Err(Error::InvalidRefinement(format!("unknown model {s:?}"))),
        }
    }
}

/// Trial-space parameter: `k` Fourier modes each side (`n = 2k + 1`), or a
/// mesh with `N` cells (`h = 1/N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Refinement {
    Modes(usize),
    Mesh(usize),
}

impl Refinement {
    /// Fourier space of dimension `n` (odd).
    pub fn from_n(n: usize) -> Result<Self> {
        if n.is_multiple_of(2) {
            return Err(Error::InvalidRefinement(format!("n must be odd, got {n}")));
        }
        Ok(Refinement::Modes((n - 1) / 2))
    }

    /// Parses `"1/N"` as a mesh.
    pub fn parse_mesh(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRefinement(format!("expected h as 1/N, got {s:?}"));
        let n = s
            .trim()
            .strip_prefix("1/")
            .ok_or_else(bad)?
            .parse::<usize>()
            .map_err(|_| bad())?;
        fem::check_cells(n)?;
        Ok(Refinement::Mesh(n))
    }
}

impl fmt::Display for Refinement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refinement::Modes(k) => write!(f, "{}", 2 * k + 1),
            Refinement::Mesh(n) => write!(f, "1/{n}"),
        }
    }
}

const MODEL2: [Space; 2] = [Space::Dirichlet, Space::Free];
const MODEL3: [Space; 3] = [Space::Dirichlet, Space::Free, Space::Free];

/// Fourier pencil with `2k + 1` modes.
pub fn model1_assemble(k: usize) -> Pencil {
    let n = 2 * k + 1;
    Pencil::new(
        HermitianMatrix::symmetrized(fourier::stiffness(k)),
        HermitianMatrix::identity(n),
        Refinement::Modes(k).to_string(),
    )
    .expect("identity mass")
}

fn term(test: usize, trial: usize, pairing: Pairing, coefficient: fn(f64) -> Complex64) -> Term {
    Term {
        test,
        trial,
        pairing,
        coefficient,
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn fem_pencil(spaces: &[Space], cells: usize, terms: &[Term]) -> Result<Pencil> {
    fem::check_cells(cells)?;
    let a = fem::assemble(spaces, cells, terms);
    Pencil::new(
        HermitianMatrix::new(a)?,
        fem::mass(spaces, cells),
        Refinement::Mesh(cells).to_string(),
    )
}

/// `a[(u,w),(v,z)] = (u',v') + (w,v') + (u',z) + 2(w,z)`.
pub fn model2_assemble(cells: usize) -> Result<Pencil> {
    use Pairing::*;
    fem_pencil(
        &MODEL2,
        cells,
        &[
            term(0, 0, DerivDeriv, |_| re(1.0)),
            term(0, 1, ValueDeriv, |_| re(1.0)),
            term(1, 0, DerivValue, |_| re(1.0)),
            term(1, 1, ValueValue, |_| re(2.0)),
        ],
    )
}

/// `upsilon_a^2`
pub fn alfven(x: f64) -> f64 {
    7.0 / 8.0 - x / 2.0
}

/// `upsilon_s^2`
pub fn sound(x: f64) -> f64 {
    1.0 / 8.0 + x / 2.0
}

/// `k_perp = k_par = 1`.
pub const K_PERP: f64 = 1.0;
pub const K_PAR: f64 = 1.0;
/// `k^2 = k_perp^2 + k_par^2`.
pub const K_SQUARED: f64 = K_PERP * K_PERP + K_PAR * K_PAR;

/// Weak form of the three-component operator; the first component vanishes
/// at both ends.
pub fn model3_assemble(cells: usize) -> Result<Pencil> {
    use Pairing::*;
    fem_pencil(
        &MODEL3,
        cells,
        &[
            term(0, 0, DerivDeriv, |x| re(alfven(x) + sound(x))),
            term(0, 0, ValueValue, |x| re(K_SQUARED * alfven(x))),
            term(0, 1, ValueDeriv, |x| Complex64::new(0.0, K_PERP * (alfven(x) + sound(x)))),
            term(0, 1, ValueValue, |_| Complex64::new(0.0, K_PERP)),
            term(1, 0, DerivValue, |x| Complex64::new(0.0, -K_PERP * (alfven(x) + sound(x)))),
            term(1, 0, ValueValue, |_| Complex64::new(0.0, -K_PERP)),
            term(0, 2, ValueDeriv, |x| Complex64::new(0.0, K_PAR * sound(x))),
            term(0, 2, ValueValue, |_| Complex64::new(0.0, K_PAR)),
            term(2, 0, DerivValue, |x| Complex64::new(0.0, -K_PAR * sound(x))),
            term(2, 0, ValueValue, |_| Complex64::new(0.0, -K_PAR)),
            term(1, 1, ValueValue, |x| {
                re(K_SQUARED * alfven(x) + K_PERP * K_PERP * sound(x))
            }),
            term(1, 2, ValueValue, |x| re(K_PERP * K_PAR * sound(x))),
            term(2, 1, ValueValue, |x| re(K_PERP * K_PAR * sound(x))),
            term(2, 2, ValueValue, |x| re(K_PAR * K_PAR * sound(x))),
        ],
    )
}

/// Closed band of essential spectrum; `lower == upper` for a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Band {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Root of the secular equation of the rank-one perturbation.
    SecularEquation,
    /// Explicit formula for the eigenvalues.
    ClosedForm,
    /// Known only to a few digits from earlier computations.
    Approximate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KnownEigenvalue {
    pub value: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceData {
    pub essential: Vec<Band>,
    pub eigenvalues: Vec<KnownEigenvalue>,
}

impl ReferenceData {
    pub fn in_interval(&self, delta: Interval) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|e| e.value)
            .filter(|&v| delta.contains(v))
            .collect()
    }
}

/// `lambda_k^+-` of the two-component operator.
pub fn model2_eigenvalue(k: u32, plus: bool) -> f64 {
    let q = (k as f64 * PI).powi(2);
    let root = ((q + 2.0).powi(2) - 4.0 * q).sqrt();
    if plus {
        (2.0 + q + root) / 2.0
    } else {
        (2.0 + q - root) / 2.0
    }
}

/// Largest `k` listed for the two model-2 eigenvalue sequences.
pub const MODEL2_MODES: u32 = 10;

pub fn reference_spectrum(model: Model) -> ReferenceData {
    let band = |lower, upper| Band { lower, upper };
    let known = |value, source| KnownEigenvalue { value, source };
    match model {
        Model::Model1 => ReferenceData {
            essential: vec![band(-2.0 * PI, -PI), band(PI, 2.0 * PI)],
            eigenvalues: fourier::eigenvalues()
                .into_iter()
                .map(|v| known(v, Source::SecularEquation))
                .collect(),
        },
        Model::Model2 => {
            let mut eigenvalues = vec![known(2.0, Source::ClosedForm)];
            for k in 1..=MODEL2_MODES {
                for plus in [false, true] {
                    eigenvalues.push(known(model2_eigenvalue(k, plus), Source::ClosedForm));
                }
            }
            ReferenceData {
                essential: vec![band(1.0, 1.0)],
                eigenvalues,
            }
        }
        Model::Model3 => ReferenceData {
            essential: vec![band(7.0 / 64.0, 0.25), band(3.0 / 8.0, 7.0 / 8.0)],
            eigenvalues: vec![known(0.279, Source::Approximate), known(1.734, Source::Approximate)],
        },
    }
}

fn spaces(model: Model) -> &'static [Space] {
    match model {
        Model::Model1 => &[],
        Model::Model2 => &MODEL2,
        Model::Model3 => &MODEL3,
    }
}

impl Model {
    pub fn check(self, level: Refinement) -> Result<()> {
        match (self, level) {
            (Model::Model1, Refinement::Modes(_)) => Ok(()),
            (Model::Model2 | Model::Model3, Refinement::Mesh(n)) => fem::check_cells(n),
            _ => Err(Error::InvalidRefinement(format!(
                "{level} is not a trial space of {self}"
            ))),
        }
    }

    /// Dimension of the trial space.
    pub fn dim(self, level: Refinement) -> Result<usize> {
        self.check(level)?;
        Ok(match level {
            Refinement::Modes(k) => 2 * k + 1,
            Refinement::Mesh(n) => fem::layout(spaces(self), n).0,
        })
    }
}

/// Nodal interpolants of the exact model-2 eigenfunctions with eigenvalue in
/// `delta`, or `None` when `delta` meets the essential spectrum.
pub fn model2_exact_eigenspace(cells: usize, delta: Interval) -> Option<Array2<Complex64>> {
    if delta.contains(1.0) {
        return None;
    }
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let (dim, offsets) = fem::layout(&MODEL2, cells);
    if delta.contains(2.0) {
        let mut v = vec![0.0; dim];
        v[offsets[1]..].fill(1.0);
        columns.push(v);
    }
    // lambda_k^+ grows like k^2 pi^2 and lambda_k^- stays below 1
    for k in 1..=MODEL2_MODES {
        for plus in [false, true] {
            let lambda = model2_eigenvalue(k, plus);
            if !delta.contains(lambda) {
                continue;
            }
            let w = k as f64 * PI;
            let mut v = fem::interpolate(Space::Dirichlet, cells, |x| (w * x).sin());
            v.extend(fem::interpolate(Space::Free, cells, |x| {
                w * (w * x).cos() / (lambda - 2.0)
            }));
            columns.push(v);
        }
    }
    if delta.upper() > model2_eigenvalue(MODEL2_MODES + 1, true) || columns.is_empty() {
        return None;
    }
    Some(Array2::from_shape_fn((dim, columns.len()), |(i, j)| {
        re(columns[j][i])
    }))
}

impl TrialFamily for Model {
    type Level = Refinement;

    fn pencil(&self, level: &Refinement) -> Result<Pencil> {
        self.check(*level)?;
        match (self, *level) {
            (Model::Model1, Refinement::Modes(k)) => Ok(model1_assemble(k)),
            (Model::Model2, Refinement::Mesh(n)) => model2_assemble(n),
            (Model::Model3, Refinement::Mesh(n)) => model3_assemble(n),
            _ => unreachable!("checked above"),
        }
    }

    fn inclusion(&self, coarse: &Refinement, fine: &Refinement) -> Result<Array2<f64>> {
        self.check(*coarse)?;
        self.check(*fine)?;
        match (*coarse, *fine) {
            (Refinement::Modes(c), Refinement::Modes(f)) => fourier::inclusion(c, f),
            (Refinement::Mesh(c), Refinement::Mesh(f)) => fem::prolongation(spaces(*self), c, f),
            _ => unreachable!("checked above"),
        }
    }

    fn refine(&self, level: &Refinement) -> Refinement {
        match *level {
            Refinement::Modes(k) => Refinement::Modes(k + 1),
            Refinement::Mesh(n) => Refinement::Mesh(2 * n),
        }
    }

    fn reference_eigenvalues(&self, delta: Interval) -> Vec<f64> {
        reference_spectrum(*self).in_interval(delta)
    }

    fn exact_eigenspace(&self, level: &Refinement, delta: Interval) -> Option<Array2<Complex64>> {
        match (self, *level) {
            (Model::Model2, Refinement::Mesh(n)) => model2_exact_eigenspace(n, delta),
            _ => None,
        }
    }
}

/// Inclusion matrix `T` with `(coarse basis) = T (fine basis)`.
pub fn inclusion_matrix(model: Model, coarse: Refinement, fine: Refinement) -> Result<Array2<f64>> {
    model.inclusion(&coarse, &fine)
}
