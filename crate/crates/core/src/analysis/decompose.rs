//! Component decomposition of a level set along a reference polyline.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{pieces, touch_sequence, Polyline};
use crate::tessellation::{CellIndex, Tessellation};

use super::level_set::LevelSet;

/// A contiguous stretch of the traversal spent in one component.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentVisit {
    pub component: usize,
    /// First member cell of the component met on this stretch.
    pub entry: CellIndex,
    /// Last member cell of the component met on this stretch.
    pub exit: CellIndex,
    /// Index range of the polyline pieces covered by the stretch.
    pub first_piece: usize,
    pub last_piece: usize,
}

/// Diagonal grid edge joining two consecutive components at a lattice corner.
#[derive(Clone, Debug, PartialEq)]
pub struct Bridge {
    pub from: CellIndex,
    pub to: CellIndex,
    /// The shared corner as an integer lattice point.
    pub corner: (usize, usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentDecomposition {
    m: usize,
    /// Component label of every member cell, `None` for non-members. Labels
    /// are assigned in order of first traversal, untouched components last.
    labels: Vec<Option<usize>>,
    /// Cells of each component, row-major.
    pub components: Vec<Vec<CellIndex>>,
    /// `H_1, …, H_k` in traversal order; a component may recur.
    pub sequence: Vec<ComponentVisit>,
    /// `bridges[i]` joins `sequence[i]` to `sequence[i + 1]`.
    pub bridges: Vec<Bridge>,
}

impl ComponentDecomposition {
    pub fn label(&self, c: CellIndex) -> Option<usize> {
        if c.x == 0 || c.y == 0 || c.x > self.m {
            return None;
        }
        self.labels
            .get((c.y - 1) * self.m + c.x - 1)
            .copied()
            .flatten()
    }

    pub fn k(&self) -> usize {
        self.sequence.len()
    }

    /// Horizontal and vertical adjacencies among members.
    pub fn h_edges(&self) -> Vec<(CellIndex, CellIndex)> {
        let mut out = Vec::new();
        for comp in &self.components {
            for &c in comp {
                for nb in [CellIndex::new(c.x + 1, c.y), CellIndex::new(c.x, c.y + 1)] {
                    if self.label(nb).is_some() {
                        out.push((c, nb));
                    }
                }
            }
        }
        out
    }
}

/// 4-neighbours in the fixed order east, north, west, south.
pub(crate) fn hv_neighbours(c: CellIndex) -> impl Iterator<Item = CellIndex> {
    [(1i64, 0i64), (0, 1), (-1, 0), (0, -1)]
        .into_iter()
        .filter_map(move |(dx, dy)| {
            let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
            (x >= 1 && y >= 1).then(|| CellIndex::new(x as usize, y as usize))
        })
}

pub fn decompose(
    t: &Tessellation,
    ls: &LevelSet,
    poly: &Polyline,
) -> Result<ComponentDecomposition> {
    let m = t.width();
    let slot = |c: CellIndex| (c.y - 1) * m + c.x - 1;
    let ps = pieces(t, poly)?;
    let mut labels: Vec<Option<usize>> = vec![None; t.len()];
    let mut components: Vec<Vec<CellIndex>> = Vec::new();

    let mut flood = |seed: CellIndex, labels: &mut Vec<Option<usize>>| {
        let id = components.len();
        let mut cells = vec![seed];
        labels[slot(seed)] = Some(id);
        let mut queue = VecDeque::from([seed]);
        while let Some(c) = queue.pop_front() {
            for nb in hv_neighbours(c) {
                if ls.contains(nb) && labels[slot(nb)].is_none() {
                    labels[slot(nb)] = Some(id);
                    cells.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        cells.sort_by_key(|c| (c.y, c.x));
        components.push(cells);
    };

    for p in &ps {
        let c = p.credited;
        if ls.contains(c) && labels[slot(c)].is_none() {
            flood(c, &mut labels);
        }
    }
    for c in ls.members() {
        if labels[slot(c)].is_none() {
            flood(c, &mut labels);
        }
    }

    let mut sequence: Vec<ComponentVisit> = Vec::new();
    for (i, p) in ps.iter().enumerate() {
        let Some(id) = labels[slot(p.credited)] else {
            continue;
        };
        match sequence.last_mut() {
            Some(v) if v.component == id => {
                v.exit = p.credited;
                v.last_piece = i;
            }
            _ => sequence.push(ComponentVisit {
                component: id,
                entry: p.credited,
                exit: p.credited,
                first_piece: i,
                last_piece: i,
            }),
        }
    }
    if sequence.is_empty() {
        return Err(Error::Validation(
            "reference polyline never enters a level-set cell".into(),
        ));
    }

    let touches = touch_sequence(t, poly)?;
    let mut bridges = Vec::with_capacity(sequence.len() - 1);
    for (step, pair) in sequence.windows(2).enumerate() {
        let (a, b) = (&pair[0], &pair[1]);
        // touch_sequence interleaves: 2p = start of piece p, 2p+1 = piece p.
        let window = (2 * a.last_piece + 1, 2 * b.first_piece + 1);
        let bridge = find_bridge(t, &labels, &touches, window, a.component, b.component).ok_or(
            Error::BridgeNotFound {
                from: a.component,
                to: b.component,
                step,
            },
        )?;
        bridges.push(bridge);
    }

    Ok(ComponentDecomposition {
        m,
        labels,
        components,
        sequence,
        bridges,
    })
}

/// The four cells around lattice corner `(cx, cy)` that exist in `t`.
fn block(t: &Tessellation, (cx, cy): (usize, usize)) -> [Option<CellIndex>; 4] {
    let cell = |x: usize, y: usize| {
        let c = CellIndex::new(x, y);
        (x >= 1 && y >= 1 && t.contains(c)).then_some(c)
    };
    [
        cell(cx, cy),
        cell(cx + 1, cy),
        cell(cx, cy + 1),
        cell(cx + 1, cy + 1),
    ]
}

/// Whether some maximal run of consecutive touch sets, each confined to the
/// 2×2 block around `corner` and overlapping `window`, meets at least three of
/// the block's cells.
pub(crate) fn passes_three_of_four(
    t: &Tessellation,
    touches: &[Vec<CellIndex>],
    corner: (usize, usize),
    window: (usize, usize),
) -> bool {
    let cells = block(t, corner);
    let index_of = |c: &CellIndex| cells.iter().position(|b| b.as_ref() == Some(c));
    let mut i = 0;
    while i < touches.len() {
        if touches[i].is_empty() || !touches[i].iter().all(|c| index_of(c).is_some()) {
            i += 1;
            continue;
        }
        let start = i;
        let mut seen = [false; 4];
        while i < touches.len()
            && !touches[i].is_empty()
            && touches[i].iter().all(|c| index_of(c).is_some())
        {
            for c in &touches[i] {
                seen[index_of(c).expect("confined to block")] = true;
            }
            i += 1;
        }
        let end = i - 1;
        let overlaps = start <= window.1 && end >= window.0;
        if overlaps && seen.iter().filter(|s| **s).count() >= 3 {
            return true;
        }
    }
    false
}

fn find_bridge(
    t: &Tessellation,
    labels: &[Option<usize>],
    touches: &[Vec<CellIndex>],
    window: (usize, usize),
    from: usize,
    to: usize,
) -> Option<Bridge> {
    let m = t.width();
    let label = |c: CellIndex| labels[(c.y - 1) * m + c.x - 1];
    let mut tried = HashSet::new();
    for set in &touches[window.0..=window.1.min(touches.len() - 1)] {
        for c in set {
            for corner in [
                (c.x - 1, c.y - 1),
                (c.x, c.y - 1),
                (c.x - 1, c.y),
                (c.x, c.y),
            ] {
                if !tried.insert(corner) {
                    continue;
                }
                let [ll, lr, ul, ur] = block(t, corner);
                for (p, q) in [(ll, ur), (ur, ll), (lr, ul), (ul, lr)] {
                    let (Some(p), Some(q)) = (p, q) else {
                        continue;
                    };
                    if label(p) != Some(from) || label(q) != Some(to) {
                        continue;
                    }
                    let off = [CellIndex::new(p.x, q.y), CellIndex::new(q.x, p.y)];
                    if off.iter().any(|&o| label(o).is_some()) {
                        continue;
                    }
                    if passes_three_of_four(t, touches, corner, window) {
                        return Some(Bridge {
                            from: p,
                            to: q,
                            corner,
                        });
                    }
                }
            }
        }
    }
    None
}
