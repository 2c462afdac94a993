//! Per-instance comparison of the grid optimum with the reference solver.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::Result;
use crate::geometry::clip_lengths;
use crate::grid::{grid_dijkstra, GridPath};
use crate::steiner::{
    converge_with_cap, RefSolution, DEFAULT_LEVEL, DEFAULT_NODE_CAP, DEFAULT_REL_TOL,
};
use crate::tessellation::{CellIndex, Instance};

use super::certificate::{per_cell_certificate, CellCertificate};
use super::lemma_path::{construct_lemma_path, LemmaPath};
use super::level_set::check_v_half_connectivity;
use super::{DEFAULT_A, THEOREM_RATIO};

/// Absolute slack on the `grid ≤ (√2+1)·ref` check.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct HarnessConfig {
    pub max_level: u32,
    pub rel_tol: f64,
    pub a: f64,
    pub node_cap: usize,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        Self {
            max_level: DEFAULT_LEVEL,
            rel_tol: DEFAULT_REL_TOL,
            a: DEFAULT_A,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub instance: String,
    pub m: usize,
    pub n: usize,
    pub a: f64,
    pub grid_cost: f64,
    pub ref_cost: f64,
    pub ref_level: u32,
    pub ratio: f64,
    pub bound_ok: bool,
    pub cert_ok: bool,
    pub k_components: usize,
    pub n_bridges: usize,
    /// Largest per-cell ratio among the certificates.
    pub max_cell_ratio: f64,
    /// The grid path beat the reference cost, so the reference is not yet
    /// close enough to the continuous optimum.
    pub oracle_unconverged: bool,
    pub v_half_connected: bool,
    /// Failure of the lemma-path stage, if any.
    pub error: Option<String>,
}

impl RatioReport {
    pub const CSV_HEADER: &'static str =
        "instance,m,n,a,grid_cost,ref_cost,ref_level,ratio,bound_ok,cert_ok,k_components,n_bridges";

    pub fn csv_row(&self) -> String {
        use crate::fmt_num;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.m,
            self.n,
            fmt_num(self.a),
            fmt_num(self.grid_cost),
            fmt_num(self.ref_cost),
            self.ref_level,
            fmt_num(self.ratio),
            self.bound_ok,
            self.cert_ok,
            self.k_components,
            self.n_bridges
        )
    }
}

/// Everything computed for one instance.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub report: RatioReport,
    pub grid: GridPath,
    pub reference: RefSolution,
    pub lemma: Option<LemmaPath>,
    pub certificates: BTreeMap<CellIndex, CellCertificate>,
}

pub fn evaluate(id: &str, inst: &Instance, cfg: &HarnessConfig) -> Result<Evaluation> {
    let (t, q) = (&inst.tess, &inst.query);
    let grid = grid_dijkstra(t, q)?;
    let reference = converge_with_cap(t, q, cfg.max_level, cfg.rel_tol, cfg.node_cap)?;
    let breakdown = clip_lengths(t, &reference.polyline)?;

    let ratio = if reference.cost > 0.0 {
        grid.cost / reference.cost
    } else if grid.cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    let bound_ok = grid.cost <= THEOREM_RATIO * reference.cost + BOUND_TOL;

    let (lemma, error) = match construct_lemma_path(t, q, &reference.polyline, cfg.a) {
        Ok(lp) => (Some(lp), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let certificates = lemma
        .as_ref()
        .map(|lp| per_cell_certificate(&lp.path, &lp.breakdown, cfg.a))
        .unwrap_or_default();
    let cert_ok = lemma.is_some() && certificates.values().all(|c| c.ok);
    let max_cell_ratio = certificates.values().map(|c| c.ratio).fold(0.0, f64::max);
    let (k_components, n_bridges) = lemma
        .as_ref()
        .map(|lp| (lp.decomposition.k(), lp.decomposition.bridges.len()))
        .unwrap_or((0, 0));

    let report = RatioReport {
        instance: id.to_string(),
        m: t.width(),
        n: t.height(),
        a: cfg.a,
        grid_cost: grid.cost,
        ref_cost: reference.cost,
        ref_level: reference.level,
        ratio,
        bound_ok,
        cert_ok,
        k_components,
        n_bridges,
        max_cell_ratio,
        oracle_unconverged: ratio < 1.0 - 1e-9,
        v_half_connected: check_v_half_connectivity(&breakdown),
        error,
    };
    Ok(Evaluation {
        report,
        grid,
        reference,
        lemma,
        certificates,
    })
}

fn failed_report(id: &str, inst: &Instance, cfg: &HarnessConfig, err: String) -> RatioReport {
    RatioReport {
        instance: id.to_string(),
        m: inst.tess.width(),
        n: inst.tess.height(),
        a: cfg.a,
        grid_cost: f64::NAN,
        ref_cost: f64::NAN,
        ref_level: 0,
        ratio: f64::NAN,
        bound_ok: false,
        cert_ok: false,
        k_components: 0,
        n_bridges: 0,
        max_cell_ratio: f64::NAN,
        oracle_unconverged: false,
        v_half_connected: false,
        error: Some(err),
    }
}

/// Evaluates every instance (in parallel on the current rayon pool); reports
/// come back in input order and per-instance failures are recorded, not thrown.
pub fn ratio_harness(instances: &[(String, Instance)], cfg: &HarnessConfig) -> Vec<RatioReport> {
    instances
        .par_iter()
        .map(|(id, inst)| match evaluate(id, inst, cfg) {
            Ok(e) => e.report,
            Err(e) => failed_report(id, inst, cfg, e.to_string()),
        })
        .collect()
}
