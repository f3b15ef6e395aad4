use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::{filter_eigs, projection_matrix, FilterSelection, Policy, ReferenceSubspace};
use crate::error::{Error, Result};
use crate::galerkin::{solve_galerkin, spectral_window, GalerkinWindow, Interval, Pencil};
use crate::linalg::{adjoint, hermitian_eig, EigDecomposition, HermitianMatrix, DEFAULT_TOL};

/// Rayleigh-Ritz values and vectors on the filtered subspace.
#[derive(Debug, Clone)]
pub struct RitzResult {
    /// Ascending, inside `[min mu, max mu]`.
    pub values: Vec<f64>,
    /// Fine-basis coefficients (`dim_n x d`), mass-orthonormal.
    pub vectors: Array2<Complex64>,
}

/// Ritz pairs of the pencil on `span(U W)`.
///
/// `U` is mass-orthonormal and diagonalizes the stiffness on the window, so the
/// compressed problem is the standard one for `W* diag(mu) W`.
pub fn ritz_values(window: &GalerkinWindow, selection: &FilterSelection) -> Result<RitzResult> {
    if selection.d == 0 {
        return Err(Error::EmptySelection);
    }
    let w = &selection.vectors;
    if w.nrows() != window.dim() {
        return Err(Error::DimensionMismatch {
            context: "ritz values",
            expected: window.dim(),
            found: w.nrows(),
        });
    }
    let mut dw = w.clone();
    for (mut row, &mu) in dw.rows_mut().into_iter().zip(&window.mu) {
        row.mapv_inplace(|z| z * mu);
    }
    let compressed = HermitianMatrix::symmetrized(adjoint(w).dot(&dw));
    let eig = hermitian_eig(&compressed, DEFAULT_TOL)?;
    let (lo, hi) = window
        .mu
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &m| {
            (lo.min(m), hi.max(m))
        });
    let values = eig.values.iter().map(|&x| x.clamp(lo, hi)).collect();
    let vectors = window.basis.dot(&w.dot(&eig.vectors));
    Ok(RitzResult { values, vectors })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    /// No Galerkin eigenvalue in the interval at this refinement.
    EmptyWindow,
    /// The policy kept no eigenvector of `S`.
    EmptySelection,
}

/// Every intermediate of one filtered solve.
#[derive(Debug, Clone)]
pub struct FilteredSolve {
    pub spectrum: EigDecomposition,
    pub window: GalerkinWindow,
    pub projection: Option<HermitianMatrix>,
    pub selection: Option<FilterSelection>,
    pub ritz: Option<RitzResult>,
    pub status: SolveStatus,
}

impl FilteredSolve {
    pub fn sigma_p(&self) -> &[f64] {
        self.selection
            .as_ref()
            .map(|s| s.sigma_p.as_slice())
            .unwrap_or(&[])
    }

    pub fn ritz_values(&self) -> &[f64] {
        self.ritz.as_ref().map(|r| r.values.as_slice()).unwrap_or(&[])
    }
}

/// Galerkin solve, window, projector matrix, selection, Rayleigh-Ritz.
pub fn filtered_solve(
    pencil: &Pencil,
    delta: Interval,
    reference: &ReferenceSubspace,
    policy: Policy,
) -> Result<FilteredSolve> {
    let spectrum = solve_galerkin(pencil)?;
    let window = spectral_window(&spectrum, delta, pencil.label());
    if window.is_empty() {
        return Ok(FilteredSolve {
            spectrum,
            window,
            projection: None,
            selection: None,
            ritz: None,
            status: SolveStatus::EmptyWindow,
        });
    }
    let s = projection_matrix(&window, reference, pencil.mass())?;
    let selection = filter_eigs(&s, policy)?;
    let (ritz, status) = if selection.d == 0 {
        (None, SolveStatus::EmptySelection)
    } else {
        (Some(ritz_values(&window, &selection)?), SolveStatus::Solved)
    };
    Ok(FilteredSolve {
        spectrum,
        window,
        projection: Some(s),
        selection: Some(selection),
        ritz,
        status,
    })
}
