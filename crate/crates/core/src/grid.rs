//! The 8-neighbour cell-center grid graph.
//!
//! The graph is implicit: vertices are cells, neighbours are computed from the
//! indices, and edge weights are derived from the two endpoint cell weights.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::f64::consts::SQRT_2;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::tessellation::{CellIndex, Query, Tessellation};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Straight,
    Diagonal,
}

impl EdgeKind {
    /// Length of the half-edge inside each endpoint cell.
    pub fn half_length(self) -> f64 {
        match self {
            EdgeKind::Straight => 0.5,
            EdgeKind::Diagonal => SQRT_2 / 2.0,
        }
    }
}

pub fn edge_kind(c1: CellIndex, c2: CellIndex) -> Option<EdgeKind> {
    match (c1.x.abs_diff(c2.x), c1.y.abs_diff(c2.y)) {
        (1, 0) | (0, 1) => Some(EdgeKind::Straight),
        (1, 1) => Some(EdgeKind::Diagonal),
        _ => None,
    }
}

/// `½(α+α′)` for a horizontal or vertical edge, `(√2/2)(α+α′)` for a diagonal one.
pub fn edge_weight(t: &Tessellation, c1: CellIndex, c2: CellIndex) -> Result<f64> {
    t.check(c1)?;
    t.check(c2)?;
    let kind = edge_kind(c1, c2).ok_or(Error::NotAdjacent(c1, c2))?;
    Ok(kind.half_length() * (t.weight(c1) + t.weight(c2)))
}

/// `√2·min(dx,dy) + |dx−dy|`: the optimal cost between two cells of a
/// uniform unit-weight grid.
pub fn octile_cost(dx: usize, dy: usize) -> f64 {
    SQRT_2 * dx.min(dy) as f64 + dx.abs_diff(dy) as f64
}

#[derive(Copy, Clone, Debug)]
pub struct GridGraph<'a> {
    tess: &'a Tessellation,
}

impl<'a> GridGraph<'a> {
    pub fn new(tess: &'a Tessellation) -> Self {
        Self { tess }
    }

    pub fn tessellation(&self) -> &'a Tessellation {
        self.tess
    }

    /// Neighbours of `c` in lexicographic `(x, y)` order.
    pub fn neighbors(&self, c: CellIndex) -> impl Iterator<Item = CellIndex> + 'a {
        let t = self.tess;
        (-1i64..=1)
            .flat_map(|dx| (-1i64..=1).map(move |dy| (dx, dy)))
            .filter(|&d| d != (0, 0))
            .filter_map(move |(dx, dy)| {
                let x = c.x as i64 + dx;
                let y = c.y as i64 + dy;
                (x >= 1 && y >= 1 && x <= t.width() as i64 && y <= t.height() as i64)
                    .then(|| CellIndex::new(x as usize, y as usize))
            })
    }

    pub fn weight(&self, c1: CellIndex, c2: CellIndex) -> Result<f64> {
        edge_weight(self.tess, c1, c2)
    }

    /// Label-setting search from `q.start` to `q.goal`. At equal tentative
    /// cost the lexicographically smaller cell is settled first, and labels
    /// are only replaced on strict improvement, so the result is reproducible.
    pub fn shortest_path(&self, q: &Query) -> Result<GridPath> {
        let t = self.tess;
        t.check(q.start)?;
        t.check(q.goal)?;
        let mut dist = vec![f64::INFINITY; t.len()];
        let mut pred: Vec<Option<CellIndex>> = vec![None; t.len()];
        let mut settled = vec![false; t.len()];
        let mut heap = BinaryHeap::new();

        dist[t.slot(q.start)] = 0.0;
        heap.push(Label {
            cost: 0.0,
            cell: q.start,
        });

        while let Some(Label { cost, cell }) = heap.pop() {
            let slot = t.slot(cell);
            if settled[slot] {
                continue;
            }
            settled[slot] = true;
            if cell == q.goal {
                break;
            }
            let alpha = t.weight(cell);
            for next in self.neighbors(cell) {
                let ns = t.slot(next);
                if settled[ns] {
                    continue;
                }
                let kind = edge_kind(cell, next).expect("neighbours are adjacent");
                let cand = cost + kind.half_length() * (alpha + t.weight(next));
                if cand < dist[ns] {
                    dist[ns] = cand;
                    pred[ns] = Some(cell);
                    heap.push(Label {
                        cost: cand,
                        cell: next,
                    });
                }
            }
        }

        let mut vertices = vec![q.goal];
        let mut cur = q.goal;
        while let Some(p) = pred[t.slot(cur)] {
            vertices.push(p);
            cur = p;
        }
        debug_assert_eq!(cur, q.start, "grid graph is connected");
        vertices.reverse();
        grid_path_breakdown(t, vertices)
    }
}

pub fn grid_dijkstra(t: &Tessellation, q: &Query) -> Result<GridPath> {
    GridGraph::new(t).shortest_path(q)
}

#[derive(Copy, Clone, Debug)]
struct Label {
    cost: f64,
    cell: CellIndex,
}

impl PartialEq for Label {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Label {}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Label {
    // BinaryHeap is a max-heap: invert so the cheapest, then smallest cell, pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.cell.cmp(&self.cell))
    }
}

/// A walk on the grid graph with its cost and per-cell decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct GridPath {
    pub vertices: Vec<CellIndex>,
    pub cost: f64,
    /// `‖P_xy‖`: half of every incident edge's length, summed per cell.
    pub per_cell: BTreeMap<CellIndex, f64>,
}

#[derive(Deserialize)]
struct JsonGridPath {
    vertices: Vec<[usize; 2]>,
}

impl GridPath {
    pub fn edges(&self) -> impl Iterator<Item = (CellIndex, CellIndex)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    /// `Σ α_xy ‖P_xy‖`, the per-cell view of the cost.
    pub fn decomposed_cost(&self, t: &Tessellation) -> f64 {
        self.per_cell.iter().map(|(c, l)| t.weight(*c) * l).sum()
    }

    pub fn to_json(&self) -> String {
        let vertices: Vec<String> = self
            .vertices
            .iter()
            .map(|c| format!("[{},{}]", c.x, c.y))
            .collect();
        format!(
            "{{\"vertices\":[{}],\"cost\":{}}}",
            vertices.join(","),
            crate::fmt_num(self.cost)
        )
    }

    /// Reads the vertex list and recomputes cost and decomposition against `t`.
    pub fn from_json(t: &Tessellation, text: &str) -> Result<Self> {
        let raw: JsonGridPath = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        grid_path_breakdown(
            t,
            raw.vertices
                .into_iter()
                .map(|[x, y]| CellIndex::new(x, y))
                .collect(),
        )
    }
}

/// Cost and per-cell decomposition of a vertex walk. The cost is accumulated
/// as `½·Σ(α+α′)` over straight edges plus `(√2/2)·Σ(α+α′)` over diagonal
/// ones, which on a uniform grid reproduces `α·octile_cost` bit for bit.
pub fn grid_path_breakdown(t: &Tessellation, vertices: Vec<CellIndex>) -> Result<GridPath> {
    if vertices.is_empty() {
        return Err(Error::NotAPath("empty vertex list".into()));
    }
    for &c in &vertices {
        if !t.contains(c) {
            return Err(Error::NotAPath(format!("vertex {c} is outside the grid")));
        }
    }
    let mut straight = 0.0;
    let mut diagonal = 0.0;
    let mut per_cell = BTreeMap::new();
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let kind = edge_kind(a, b)
            .ok_or_else(|| Error::NotAPath(format!("{a} and {b} are not adjacent")))?;
        let sum = t.weight(a) + t.weight(b);
        match kind {
            EdgeKind::Straight => straight += sum,
            EdgeKind::Diagonal => diagonal += sum,
        }
        *per_cell.entry(a).or_insert(0.0) += kind.half_length();
        *per_cell.entry(b).or_insert(0.0) += kind.half_length();
    }
    let cost = 0.5 * straight + SQRT_2 / 2.0 * diagonal;
    let path = GridPath {
        vertices,
        cost,
        per_cell,
    };
    debug_assert!(
        (path.cost - path.decomposed_cost(t)).abs() <= 1e-9 * path.cost.max(1.0),
        "decomposition identity"
    );
    Ok(path)
}
