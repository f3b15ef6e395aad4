//! Refinement sweeps: run the filter along a schedule of trial spaces, watch
//! the nonzero head of `sigma(P, L_n(Delta))` settle, and upgrade the
//! reference space when the head collapses or saturates.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use serde::Serialize;

use super::{filtered_solve, FilteredSolve, Policy, ReferenceSubspace, SolveStatus};
use crate::error::{Error, Result};
use crate::galerkin::{a_gram_with_spectrum, default_shift, Interval, Pencil};
use crate::linalg::{hausdorff_distance, symmetric_gap, RealSet};

/// Default absolute tolerance for head stabilization.
pub const DEFAULT_STABILIZATION_TOL: f64 = 0.01;

/// Safety bound on reference upgrades in one sweep.
const MAX_ESCALATIONS: usize = 64;

/// A nested family of trial spaces.
pub trait TrialFamily {
    type Level: Clone + PartialEq + fmt::Display;

    fn pencil(&self, level: &Self::Level) -> Result<Pencil>;

    /// `T` with `(coarse basis) = T (fine basis)`; errors when not nested.
    fn inclusion(&self, coarse: &Self::Level, fine: &Self::Level) -> Result<Array2<f64>>;

    /// The next larger trial space, used when the reference is upgraded.
    fn refine(&self, level: &Self::Level) -> Self::Level;

    /// Known eigenvalues in `delta`, for reference distances.
    fn reference_eigenvalues(&self, _delta: Interval) -> Vec<f64> {
        Vec::new()
    }

    /// Fine-basis coefficients of an exact eigenspace for `delta`, if known.
    fn exact_eigenspace(&self, _level: &Self::Level, _delta: Interval) -> Option<Array2<Complex64>> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferencePolicy<L> {
    Fixed(L),
    Escalate { start: L, max: L },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub stabilization_tol: f64,
    pub diagnostics: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            stabilization_tol: DEFAULT_STABILIZATION_TOL,
            diagnostics: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapDiagnostics {
    /// Symmetric gap of the filtered subspace to the exact eigenspace, mass metric.
    pub delta: f64,
    /// Same in the energy metric.
    pub delta_a: f64,
    /// Energy shift used for `delta_a`.
    pub shift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub refinement: String,
    pub reference: String,
    pub status: SolveStatus,
    pub dim_window: usize,
    pub galerkin_in_window: Vec<f64>,
    /// Descending.
    pub sigma_p: Vec<f64>,
    pub d_selected: usize,
    pub gamma_est: Option<f64>,
    pub ritz_values: Vec<f64>,
    pub pollution_flag: bool,
    pub dist_to_reference: Option<f64>,
    pub gap_diagnostics: Option<GapDiagnostics>,
}

impl SweepRecord {
    pub fn head(&self) -> &[f64] {
        &self.sigma_p[..self.d_selected]
    }

    pub fn nonzero_head_count(&self) -> usize {
        self.head()
            .iter()
            .filter(|&&s| s >= super::ZERO_FLOOR)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EscalationReason {
    /// No selected eigenvalue of `S` survived the zero floor.
    Collapsed,
    /// As many nonzero eigenvalues as the reference dimension.
    Saturated,
    NotStabilized,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Escalation {
    pub from: String,
    pub to: String,
    pub reason: EscalationReason,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepStatus {
    Stabilized { head_count: usize },
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    /// Records of the final pass, in schedule order.
    pub records: Vec<SweepRecord>,
    pub escalations: Vec<Escalation>,
    pub status: SweepStatus,
    pub reference: String,
    pub reference_dim: usize,
}

/// Builds a sweep record from a filtered solve.
pub fn summarize<F: TrialFamily>(
    family: &F,
    level: &F::Level,
    reference_label: &str,
    pencil: &Pencil,
    delta: Interval,
    solve: &FilteredSolve,
    diagnostics: bool,
) -> Result<SweepRecord> {
    let selection = solve.selection.as_ref();
    let ritz_values = solve.ritz_values().to_vec();
    let known = family.reference_eigenvalues(delta);
    let dist_to_reference = if known.is_empty() || ritz_values.is_empty() {
        None
    } else {
        Some(hausdorff_distance(
            &RealSet::new(ritz_values.clone()),
            &RealSet::new(known),
        )?)
    };
    let gap_diagnostics = match (&solve.ritz, diagnostics) {
        (Some(ritz), true) => match family.exact_eigenspace(level, delta) {
            Some(exact) => {
                let shift = default_shift(&solve.spectrum);
                let energy = a_gram_with_spectrum(pencil, &solve.spectrum, shift)?;
                Some(GapDiagnostics {
                    delta: symmetric_gap(&ritz.vectors, &exact, pencil.mass())?,
                    delta_a: symmetric_gap(&ritz.vectors, &exact, &energy)?,
                    shift,
                })
            }
            None => None,
        },
        _ => None,
    };
    Ok(SweepRecord {
        refinement: level.to_string(),
        reference: reference_label.to_string(),
        status: solve.status,
        dim_window: solve.window.dim(),
        galerkin_in_window: solve.window.mu.clone(),
        sigma_p: solve.sigma_p().to_vec(),
        d_selected: selection.map_or(0, |s| s.d),
        gamma_est: selection.and_then(|s| s.gamma_est),
        ritz_values,
        pollution_flag: false,
        dist_to_reference,
        gap_diagnostics,
    })
}

/// Runs the filter along `schedule`.
///
/// A pass stabilizes when its last two records keep the same positive number
/// of nonzero head values and those values moved by less than the tolerance.
/// Under [`ReferencePolicy::Escalate`] a pass whose head collapsed, saturated
/// the reference dimension, or did not stabilize triggers an upgrade of the
/// reference to the next trial space and the schedule is rerun. Saturation is
/// accepted when it matches the dimension of a [`Policy::ExpectedDim`].
pub fn sweep<F: TrialFamily>(
    family: &F,
    delta: Interval,
    schedule: &[F::Level],
    reference_policy: &ReferencePolicy<F::Level>,
    policy: Policy,
    options: SweepOptions,
) -> Result<SweepReport> {
    let first = schedule
        .first()
        .ok_or_else(|| Error::InvalidRefinement("empty schedule".into()))?;
    // strictly refining
    for pair in schedule.windows(2) {
        if pair[0] == pair[1] {
            return Err(Error::InvalidRefinement(format!("{} repeated in schedule", pair[0])));
        }
        family.inclusion(&pair[0], &pair[1])?;
    }

    let (mut reference, max) = match reference_policy {
        ReferencePolicy::Fixed(r) => (r.clone(), None),
        ReferencePolicy::Escalate { start, max } => (start.clone(), Some(max.clone())),
    };
    let pencils = schedule
        .iter()
        .map(|level| family.pencil(level))
        .collect::<Result<Vec<_>>>()?;
    let mut escalations = Vec::new();

    loop {
        family.inclusion(&reference, first)?;
        let mut records = Vec::with_capacity(schedule.len());
        let mut reference_dim = 0;
        for (level, pencil) in schedule.iter().zip(&pencils) {
            let t = family.inclusion(&reference, level)?;
            let label = reference.to_string();
            let subspace = ReferenceSubspace::nested(&t, pencil.mass(), label.clone())?;
            reference_dim = subspace.dim();
            let solve = filtered_solve(pencil, delta, &subspace, policy)?;
            records.push(summarize(
                family,
                level,
                &label,
                pencil,
                delta,
                &solve,
                options.diagnostics,
            )?);
        }

        let verdict = assess(&records, reference_dim, options.stabilization_tol);
        let label = reference.to_string();
        let done = |records, status, escalations| {
            Ok(finish(records, status, policy, escalations, label.clone(), reference_dim))
        };
        let Some(max) = &max else {
            return match verdict {
                Verdict::Stable(head_count) => {
                    done(records, SweepStatus::Stabilized { head_count }, escalations)
                }
                Verdict::Unstable(_) => done(records, SweepStatus::Undetermined, escalations),
            };
        };
        let reason = match verdict {
            Verdict::Stable(head_count)
                if head_count < reference_dim || policy == Policy::ExpectedDim(head_count) =>
            {
                return done(records, SweepStatus::Stabilized { head_count }, escalations)
            }
            Verdict::Stable(_) => EscalationReason::Saturated,
            Verdict::Unstable(reason) => reason,
        };
        let next = family.refine(&reference);
        let exhausted = reference == *max
            || escalations.len() >= MAX_ESCALATIONS
            || (next != *max && family.inclusion(&next, max).is_err())
            || family.inclusion(&next, first).is_err();
        if exhausted {
            return done(records, SweepStatus::Undetermined, escalations);
        }
        escalations.push(Escalation {
            from: label.clone(),
            to: next.to_string(),
            reason,
        });
        reference = next;
    }
}

fn finish(
    mut records: Vec<SweepRecord>,
    status: SweepStatus,
    policy: Policy,
    escalations: Vec<Escalation>,
    reference: String,
    reference_dim: usize,
) -> SweepReport {
    let d_reference = match (status, policy) {
        (SweepStatus::Stabilized { head_count }, _) => Some(head_count),
        (SweepStatus::Undetermined, Policy::ExpectedDim(d)) => Some(d),
        _ => None,
    };
    for r in &mut records {
        r.pollution_flag = r.dim_window > d_reference.unwrap_or(r.d_selected);
    }
    SweepReport {
        records,
        escalations,
        status,
        reference,
        reference_dim,
    }
}

enum Verdict {
    Stable(usize),
    Unstable(EscalationReason),
}

fn assess(records: &[SweepRecord], reference_dim: usize, tol: f64) -> Verdict {
    let Some(last) = records.last() else {
        return Verdict::Unstable(EscalationReason::NotStabilized);
    };
    let count = last.nonzero_head_count();
    if count == 0 {
        return Verdict::Unstable(EscalationReason::Collapsed);
    }
    let Some(prev) = records.len().checked_sub(2).map(|i| &records[i]) else {
        return Verdict::Unstable(EscalationReason::NotStabilized);
    };
    let settled = prev.nonzero_head_count() == count
        && prev.head()[..count]
            .iter()
            .zip(&last.head()[..count])
            .all(|(a, b)| (a - b).abs() < tol);
    if !settled {
        return Verdict::Unstable(EscalationReason::NotStabilized);
    }
    debug_assert!(count <= reference_dim);
    Verdict::Stable(count)
}

/// `dim L_n(Delta) > d_reference` per record: the dimension criterion for
/// spectral pollution.
pub fn pollution_flags(report: &SweepReport, d_reference: i64) -> Result<Vec<bool>> {
    if d_reference <= 0 {
        return Err(Error::InvalidReferenceDimension(d_reference));
    }
    let d = d_reference as usize;
    Ok(report.records.iter().map(|r| r.dim_window > d).collect())
}
