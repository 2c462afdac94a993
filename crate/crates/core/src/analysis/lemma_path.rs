//! Grid path built from a level-set decomposition: horizontal/vertical moves
//! inside each component, diagonal bridges between consecutive ones.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{clip_lengths, CostBreakdown, Polyline};
use crate::grid::{edge_kind, grid_path_breakdown, EdgeKind, GridPath};
use crate::tessellation::{CellIndex, Query, Tessellation};

use super::decompose::{decompose, hv_neighbours, ComponentDecomposition};
use super::level_set::{level_set, LevelSet};

#[derive(Clone, Debug)]
pub struct LemmaPath {
    pub path: GridPath,
    pub breakdown: CostBreakdown,
    pub level_set: LevelSet,
    pub decomposition: ComponentDecomposition,
}

impl LemmaPath {
    /// Re-checks the structural guarantees of the construction: every vertex
    /// lies in the level set, and every diagonal edge is a recorded bridge
    /// whose two off-diagonal cells are outside the level set.
    pub fn check_conditions(&self) -> std::result::Result<(), String> {
        for &v in &self.path.vertices {
            if !self.level_set.contains(v) {
                return Err(format!("vertex {v} is outside V_a"));
            }
        }
        for (a, b) in self.path.edges() {
            if edge_kind(a, b) != Some(EdgeKind::Diagonal) {
                continue;
            }
            let recorded = self
                .decomposition
                .bridges
                .iter()
                .any(|br| (br.from, br.to) == (a, b) || (br.from, br.to) == (b, a));
            if !recorded {
                return Err(format!("diagonal edge {a}-{b} is not a bridge"));
            }
            for off in [CellIndex::new(a.x, b.y), CellIndex::new(b.x, a.y)] {
                if self.level_set.contains(off) {
                    return Err(format!("diagonal edge {a}-{b} has {off} inside V_a"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the comparison grid path for the reference polyline `poly` at
/// threshold `a`.
pub fn construct_lemma_path(
    t: &Tessellation,
    q: &Query,
    poly: &Polyline,
    a: f64,
) -> Result<LemmaPath> {
    let (s, g) = (q.start_point(), q.goal_point());
    if poly.first().dist(s) > 1e-9 || poly.last().dist(g) > 1e-9 {
        return Err(Error::Validation(
            "reference polyline must run from the start center to the goal center".into(),
        ));
    }
    let breakdown = clip_lengths(t, poly)?;
    let levels = level_set(&breakdown, a)?;
    for c in [q.start, q.goal] {
        if !levels.contains(c) {
            return Err(Error::Validation(format!(
                "endpoint cell {c} has clip length {} below a = {a}",
                breakdown.length(c)
            )));
        }
    }
    let dec = decompose(t, &levels, poly)?;

    let mut walk = Vec::new();
    let mut entry = q.start;
    for (i, visit) in dec.sequence.iter().enumerate() {
        let exit = match dec.bridges.get(i) {
            Some(b) => b.from,
            None => q.goal,
        };
        let leg = hv_path(&dec, visit.component, entry, exit)?;
        walk.extend(leg);
        if let Some(b) = dec.bridges.get(i) {
            entry = b.to;
        }
    }

    let vertices = erase_loops(walk);
    let path = grid_path_breakdown(t, vertices)?;
    Ok(LemmaPath {
        path,
        breakdown,
        level_set: levels,
        decomposition: dec,
    })
}

/// Breadth-first search restricted to one component, neighbours tried east,
/// north, west, south.
fn hv_path(
    dec: &ComponentDecomposition,
    component: usize,
    from: CellIndex,
    to: CellIndex,
) -> Result<Vec<CellIndex>> {
    if dec.label(from) != Some(component) || dec.label(to) != Some(component) {
        return Err(Error::NoHvPath(from, to));
    }
    let mut pred: HashMap<CellIndex, CellIndex> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    pred.insert(from, from);
    while let Some(c) = queue.pop_front() {
        if c == to {
            break;
        }
        for nb in hv_neighbours(c) {
            if dec.label(nb) == Some(component) && !pred.contains_key(&nb) {
                pred.insert(nb, c);
                queue.push_back(nb);
            }
        }
    }
    if !pred.contains_key(&to) {
        return Err(Error::NoHvPath(from, to));
    }
    let mut out = vec![to];
    let mut cur = to;
    while cur != from {
        cur = pred[&cur];
        out.push(cur);
    }
    out.reverse();
    Ok(out)
}

/// Chronological loop erasure: whenever a vertex recurs, the cycle since its
/// previous occurrence is cut out. Adjacency of consecutive vertices survives.
fn erase_loops(walk: Vec<CellIndex>) -> Vec<CellIndex> {
    let mut out: Vec<CellIndex> = Vec::with_capacity(walk.len());
    let mut at: HashMap<CellIndex, usize> = HashMap::new();
    for v in walk {
        if let Some(&i) = at.get(&v) {
            for dropped in out.drain(i + 1..) {
                at.remove(&dropped);
            }
        } else {
            at.insert(v, out.len());
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::DEFAULT_A;
    use crate::tessellation::Point;

    fn c(x: usize, y: usize) -> CellIndex {
        CellIndex::new(x, y)
    }

    fn poly(pts: &[(f64, f64)]) -> Polyline {
        Polyline::new(pts.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn straight_corridor() {
        let t = Tessellation::uniform(4, 3, 1.0).unwrap();
        let q = Query::new(&t, c(1, 2), c(4, 2)).unwrap();
        let lp = construct_lemma_path(&t, &q, &poly(&[(0.5, 1.5), (3.5, 1.5)]), DEFAULT_A).unwrap();
        assert_eq!(lp.path.vertices, vec![c(1, 2), c(2, 2), c(3, 2), c(4, 2)]);
        assert!(lp
            .path
            .edges()
            .all(|(a, b)| edge_kind(a, b) == Some(EdgeKind::Straight)));
        lp.check_conditions().unwrap();
    }

    #[test]
    fn diagonal_bridge() {
        let t = Tessellation::uniform(2, 2, 1.0).unwrap();
        let q = Query::new(&t, c(1, 1), c(2, 2)).unwrap();
        let lp = construct_lemma_path(&t, &q, &poly(&[(0.5, 0.5), (1.5, 1.5)]), DEFAULT_A).unwrap();
        assert_eq!(lp.path.vertices, vec![c(1, 1), c(2, 2)]);
        lp.check_conditions().unwrap();
    }

    #[test]
    fn loops_are_erased() {
        let w = vec![c(1, 1), c(2, 1), c(2, 2), c(2, 1), c(3, 1)];
        assert_eq!(erase_loops(w), vec![c(1, 1), c(2, 1), c(3, 1)]);
        let w = vec![c(1, 1), c(2, 1), c(1, 1), c(1, 2)];
        assert_eq!(erase_loops(w), vec![c(1, 1), c(1, 2)]);
    }

    #[test]
    fn polyline_must_join_query_centers() {
        let t = Tessellation::uniform(3, 1, 1.0).unwrap();
        let q = Query::new(&t, c(1, 1), c(3, 1)).unwrap();
        let err = construct_lemma_path(&t, &q, &poly(&[(0.5, 0.5), (2.0, 0.5)]), DEFAULT_A);
        assert!(matches!(err, Err(Error::Validation(_))));
        let err = construct_lemma_path(&t, &q, &poly(&[(0.5, 0.5), (2.5, 0.5)]), 0.7);
        assert_eq!(err.unwrap_err(), Error::BadThreshold(0.7));
    }
}
