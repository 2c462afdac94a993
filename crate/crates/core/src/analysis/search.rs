//! Search over weight assignments for the instance with the largest
//! grid-to-reference cost ratio.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tessellation::{CellIndex, Instance, Tessellation};

use super::harness::{evaluate, HarnessConfig, RatioReport};
use super::THEOREM_RATIO;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub m: usize,
    pub n: usize,
    pub palette: Vec<f64>,
    /// Maximum number of assignments to evaluate.
    pub budget: usize,
    pub seed: u64,
    pub harness: HarnessConfig,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: Instance,
    pub best_report: RatioReport,
    pub evaluated: usize,
    /// Every assignment was evaluated. When false the budget was smaller than
    /// the assignment space and a seeded random sample was drawn instead.
    pub exhaustive: bool,
    /// Assignments whose ratio exceeded `√2+1` (plus 1e-6). Any entry here
    /// means a bug somewhere in the pipeline.
    pub violations: Vec<usize>,
}

impl SearchOutcome {
    pub fn best_ratio(&self) -> f64 {
        self.best_report.ratio
    }
}

fn assignment(index: u128, cells: usize, palette: &[f64]) -> Vec<f64> {
    let base = palette.len() as u128;
    let mut rest = index;
    (0..cells)
        .map(|_| {
            let w = palette[(rest % base) as usize];
            rest /= base;
            w
        })
        .collect()
}

/// Corner-to-corner query `(1,1) → (m,n)` over weight assignments drawn from
/// `palette`: exhaustive when `|palette|^(m·n) ≤ budget`, otherwise `budget`
/// seeded samples. The first assignment attaining the maximum ratio wins.
pub fn worst_case_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let (m, n) = (cfg.m, cfg.n);
    if cfg.palette.is_empty() {
        return Err(Error::Validation("empty weight palette".into()));
    }
    if let Some(w) = cfg.palette.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::Validation(format!("palette weight {w} is invalid")));
    }
    if cfg.budget == 0 {
        return Err(Error::Validation("budget must be positive".into()));
    }
    let cells = m
        .checked_mul(n)
        .filter(|&c| c >= 2)
        .ok_or_else(|| Error::Validation(format!("{m}x{n} grid has no distinct corners")))?;
    let goal = CellIndex::new(m, n);
    let start = CellIndex::new(1, 1);

    let space = u32::try_from(cells)
        .ok()
        .and_then(|c| (cfg.palette.len() as u128).checked_pow(c));
    let exhaustive = matches!(space, Some(s) if s <= cfg.budget as u128);
    let assignments: Vec<Vec<f64>> = if exhaustive {
        (0..space.unwrap())
            .map(|idx| assignment(idx, cells, &cfg.palette))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.budget)
            .map(|_| {
                (0..cells)
                    .map(|_| cfg.palette[rng.gen_range(0..cfg.palette.len())])
                    .collect()
            })
            .collect()
    };

    let reports: Vec<Result<RatioReport>> = assignments
        .par_iter()
        .enumerate()
        .map(|(i, weights)| {
            let inst = Instance::new(Tessellation::new(m, n, weights.clone())?, start, goal)?;
            Ok(evaluate(&format!("#{i}"), &inst, &cfg.harness)?.report)
        })
        .collect();

    let mut best: Option<(usize, RatioReport)> = None;
    let mut violations = Vec::new();
    for (i, r) in reports.into_iter().enumerate() {
        let r = r?;
        if r.ratio > THEOREM_RATIO + 1e-6 {
            violations.push(i);
        }
        if best.as_ref().map_or(true, |(_, b)| r.ratio > b.ratio) {
            best = Some((i, r));
        }
    }
    let (bi, best_report) = best.expect("at least one assignment");
    let best = Instance::new(
        Tessellation::new(m, n, assignments[bi].clone())?,
        start,
        goal,
    )?;
    Ok(SearchOutcome {
        best,
        best_report,
        evaluated: assignments.len(),
        exhaustive,
        violations,
    })
}
