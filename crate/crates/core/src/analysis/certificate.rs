use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::fmt;

use crate::geometry::CostBreakdown;
use crate::grid::{edge_kind, EdgeKind, GridPath};
use crate::tessellation::CellIndex;

/// Slack added to the per-cell bound when checking certificates.
pub const CERT_TOL: f64 = 1e-6;

/// Shape of the grid path inside one cell.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum CellCase {
    /// Straight through along an axis, `‖P_xy‖ = 1`.
    Straight,
    /// Axis-aligned right-angle turn at the center, `‖P_xy‖ = 1`.
    Turn,
    /// One diagonal and one axis half-edge, `‖P_xy‖ = (1+√2)/2`.
    Mixed,
    /// Straight through along a diagonal, `‖P_xy‖ = √2`.
    DiagonalStraight,
    /// Two diagonal half-edges at a right angle, `‖P_xy‖ = √2`.
    DiagonalTurn,
    /// Start/goal cells and repeated visits.
    Other,
}

impl CellCase {
    pub fn tag(self) -> &'static str {
        match self {
            CellCase::Straight => "(i)",
            CellCase::Turn => "(ii)",
            CellCase::Mixed => "(iii)",
            CellCase::DiagonalStraight => "(iv)",
            CellCase::DiagonalTurn => "(v)",
            CellCase::Other => "other",
        }
    }
}

impl fmt::Display for CellCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CellCertificate {
    pub case: CellCase,
    /// `‖P_xy‖`
    pub path_length: f64,
    /// `‖π_xy‖`
    pub ref_length: f64,
    pub ratio: f64,
    pub ok: bool,
}

/// `max{1/a, √2/(1−a)}`.
pub fn ratio_bound(a: f64) -> f64 {
    (1.0 / a).max(SQRT_2 / (1.0 - a))
}

fn classify(prev: CellIndex, at: CellIndex, next: CellIndex) -> CellCase {
    let d = |p: CellIndex, q: CellIndex| (q.x as i64 - p.x as i64, q.y as i64 - p.y as i64);
    let (d_in, d_out) = (d(prev, at), d(at, next));
    match (edge_kind(prev, at), edge_kind(at, next)) {
        (Some(EdgeKind::Straight), Some(EdgeKind::Straight)) if d_in == d_out => CellCase::Straight,
        (Some(EdgeKind::Straight), Some(EdgeKind::Straight)) => CellCase::Turn,
        (Some(EdgeKind::Diagonal), Some(EdgeKind::Diagonal)) if d_in == d_out => {
            CellCase::DiagonalStraight
        }
        (Some(EdgeKind::Diagonal), Some(EdgeKind::Diagonal)) => CellCase::DiagonalTurn,
        (Some(_), Some(_)) => CellCase::Mixed,
        _ => CellCase::Other,
    }
}

/// Ratio `‖P_xy‖ / ‖π_xy‖` for every cell on `gp`, classified by how the path
/// crosses the cell and checked against [`ratio_bound`]`(a)`.
pub fn per_cell_certificate(
    gp: &GridPath,
    b: &CostBreakdown,
    a: f64,
) -> BTreeMap<CellIndex, CellCertificate> {
    let bound = ratio_bound(a);
    let v = &gp.vertices;
    let mut cases: BTreeMap<CellIndex, CellCase> = BTreeMap::new();
    for (i, &c) in v.iter().enumerate() {
        let case = if i == 0 || i + 1 == v.len() {
            CellCase::Other
        } else {
            classify(v[i - 1], c, v[i + 1])
        };
        cases
            .entry(c)
            .and_modify(|e| *e = CellCase::Other)
            .or_insert(case);
    }
    cases
        .into_iter()
        .map(|(c, case)| {
            let path_length = gp.per_cell.get(&c).copied().unwrap_or(0.0);
            let ref_length = b.length(c);
            let ratio = if path_length == 0.0 {
                0.0
            } else if ref_length == 0.0 {
                f64::INFINITY
            } else {
                path_length / ref_length
            };
            let ok = ratio <= bound + CERT_TOL;
            (
                c,
                CellCertificate {
                    case,
                    path_length,
                    ref_length,
                    ratio,
                    ok,
                },
            )
        })
        .collect()
}
