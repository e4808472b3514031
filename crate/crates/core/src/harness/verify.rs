use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BoundConstants, ModelKind, TrialRecord};
use crate::bounds::V0;
use crate::measurement::FREQUENCY_SLACK;

/// Slack for `error ≤ bound`, so that a bound of exactly zero still covers
/// a solver that stops at round-off rather than at zero error.
pub const COVERAGE_ATOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellCoverage {
    pub model: ModelKind,
    pub m: usize,
    /// `η / f(x*)`.
    pub eta_ratio: f64,
    pub trials: usize,
    /// Trials whose bound hypotheses held.
    pub applicable: usize,
    pub covered: usize,
    /// `covered / applicable`; `None` when no trial was applicable.
    pub coverage: Option<f64>,
    /// Probability the bound is stated to hold with, clamped at 0.
    pub confidence: f64,
    /// Coverage fell below `confidence − 0.05`.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CoverageSummary {
    pub cells: Vec<CellCoverage>,
    pub flagged: usize,
}

impl CoverageSummary {
    /// Smallest coverage over cells with at least one applicable trial.
    pub fn min_coverage(&self) -> Option<f64> {
        self.cells
            .iter()
            .filter_map(|c| c.coverage)
            .min_by(f64::total_cmp)
    }
}

/// Stated confidence of the bound attached to `model` at `m` measurements.
pub fn stated_confidence(model: ModelKind, m: usize, bc: &BoundConstants) -> f64 {
    let m = m as f64;
    let p = match model {
        ModelKind::Cls => 1.0 - 6.0 * (-bc.u * bc.u).exp(),
        ModelKind::Clad => 1.0 - 6.0 * (-m * bc.lad_u * bc.lad_u / 2.0).exp(),
        ModelKind::Cnls => {
            1.0 - 2.0 * (-bc.u * bc.u).exp() - 2.0 * (-V0 * V0 * m / 8.0).exp()
        }
    };
    p.max(0.0)
}

pub fn verify_bounds(records: &[TrialRecord]) -> CoverageSummary {
    verify_bounds_with(records, &BoundConstants::default())
}

/// Per `(model, m, η/f(x*))` cell, the fraction of applicable trials with
/// `error ≤ bound`. Cells appear in the order first seen.
pub fn verify_bounds_with(records: &[TrialRecord], bc: &BoundConstants) -> CoverageSummary {
    let mut index: HashMap<(ModelKind, usize, i64), usize> = HashMap::new();
    let mut cells: Vec<CellCoverage> = Vec::new();
    for r in records {
        let ratio = if r.f_star > 0.0 { r.eta / r.f_star } else { r.eta };
        let key = (r.model, r.m, (ratio * 1e6).round() as i64);
        let i = *index.entry(key).or_insert_with(|| {
            cells.push(CellCoverage {
                model: r.model,
                m: r.m,
                eta_ratio: ratio,
                trials: 0,
                applicable: 0,
                covered: 0,
                coverage: None,
                confidence: stated_confidence(r.model, r.m, bc),
                flagged: false,
            });
            cells.len() - 1
        });
        let c = &mut cells[i];
        c.trials += 1;
        if let Some(b) = r.bound_value {
            c.applicable += 1;
            if r.error <= b + COVERAGE_ATOL {
                c.covered += 1;
            }
        }
    }
    let mut flagged = 0;
    for c in &mut cells {
        if c.applicable > 0 {
            let cov = c.covered as f64 / c.applicable as f64;
            c.coverage = Some(cov);
            c.flagged = cov < c.confidence - FREQUENCY_SLACK;
            flagged += c.flagged as usize;
        }
    }
    CoverageSummary { cells, flagged }
}
