//! Weighted-region shortest paths on square tessellations.
//!
//! The crate computes shortest paths on the 8-neighbour cell-center grid
//! graph, a Steiner-point reference solution for the continuous problem, and
//! the analysis that relates the two: level sets of clip lengths, component
//! bridging, the constructed comparison path and per-cell ratio certificates.

pub mod analysis;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod instances;
pub mod render;
pub mod steiner;
pub mod tessellation;

pub use analysis::{
    check_v_half_connectivity, construct_lemma_path, decompose, level_set, per_cell_certificate,
    ratio_bound, ratio_harness, worst_case_search, CellCase, CellCertificate,
    ComponentDecomposition, LevelSet, RatioReport, SearchOutcome, DEFAULT_A, THEOREM_RATIO,
};
pub use error::{Error, Result};
pub use geometry::{clip_lengths, path_cost, CostBreakdown, Polyline};
pub use grid::{edge_weight, grid_dijkstra, grid_path_breakdown, octile_cost, GridGraph, GridPath};
pub use render::{render_svg, RenderSpec};
pub use steiner::{converge, ref_shortest_path, RefSolution, SteinerConfig};
pub use tessellation::{CellIndex, Instance, Point, Query, Tessellation};

/// Rounds to 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Formats a number with at most 9 significant digits, shortest form.
pub fn fmt_num(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        "0".to_string()
    } else {
        r.to_string()
    }
}
