//! Machinery relating grid-graph paths to a reference continuous path.
//!
//! Given a reference polyline and a threshold `a`, [`level_set`] keeps the
//! cells where the polyline's clip length is at least `a`, [`decompose`] splits
//! those cells into 4-connected components in traversal order and finds the
//! diagonal bridges between consecutive components, [`construct_lemma_path`]
//! stitches a grid path from them, and [`per_cell_certificate`] checks the
//! per-cell length ratio against `max{1/a, √2/(1−a)}`.

mod certificate;
mod decompose;
mod harness;
mod lemma_path;
mod level_set;
mod search;

pub use certificate::{per_cell_certificate, ratio_bound, CellCase, CellCertificate};
pub use decompose::{decompose, Bridge, ComponentDecomposition, ComponentVisit};
pub use harness::{evaluate, ratio_harness, Evaluation, HarnessConfig, RatioReport};
pub use lemma_path::{construct_lemma_path, LemmaPath};
pub use level_set::{check_v_half_connectivity, level_set, LevelSet, V_HALF_SLACK};
pub use search::{worst_case_search, SearchConfig, SearchOutcome};

/// `√2 + 1`, the guaranteed ratio between grid and continuous optimum.
pub const THEOREM_RATIO: f64 = std::f64::consts::SQRT_2 + 1.0;

/// `1/(1+√2)`, the threshold at which `max{1/a, √2/(1−a)}` is smallest.
pub const DEFAULT_A: f64 = 1.0 / (1.0 + std::f64::consts::SQRT_2);
