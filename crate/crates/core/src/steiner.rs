//! Steiner-point reference solver.
//!
//! At level `j` every unit cell side carries interior points at the dyadic
//! positions `i/2^j`, in addition to the lattice corners, so the point set at
//! level `j` is contained in the one at level `j+1` and the optimum can only
//! improve as the level grows. Inside each cell every pair of its boundary
//! points (plus the start or goal center when the cell hosts one) is joined by
//! a straight chord. A chord along a cell side pays the cheaper of the two
//! cells sharing that side, which mirrors how [`crate::geometry`] attributes
//! boundary-resident length.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{clip_lengths, Polyline};
use crate::tessellation::{CellIndex, Point, Query, Tessellation};

pub const MAX_LEVEL: u32 = 7;
pub const DEFAULT_NODE_CAP: usize = 2_000_000;
pub const DEFAULT_LEVEL: u32 = 5;
pub const DEFAULT_REL_TOL: f64 = 1e-4;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct SteinerConfig {
    pub level: u32,
    pub node_cap: usize,
}

impl Default for SteinerConfig {
    fn default() -> Self {
        Self {
            level: DEFAULT_LEVEL,
            node_cap: DEFAULT_NODE_CAP,
        }
    }
}

impl SteinerConfig {
    pub fn at_level(level: u32) -> Self {
        Self {
            level,
            ..Self::default()
        }
    }
}

/// Number of nodes the Steiner graph of an `m × n` grid has at `level`.
pub fn node_count(m: usize, n: usize, level: u32) -> usize {
    let interior = (1usize << level.min(63)) - 1;
    let corners = (m + 1) * (n + 1);
    let sides = m * (n + 1) + (m + 1) * n;
    corners + interior.saturating_mul(sides) + 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct RefSolution {
    pub polyline: Polyline,
    /// Weighted cost of `polyline` as evaluated by the clipping code.
    pub cost: f64,
    /// Shortest-path distance in the Steiner graph; agrees with `cost` up to
    /// rounding.
    pub search_cost: f64,
    pub level: u32,
}

impl RefSolution {
    pub fn to_json(&self) -> String {
        let points: Vec<String> = self
            .polyline
            .points()
            .iter()
            .map(|p| format!("[{},{}]", crate::fmt_num(p.x), crate::fmt_num(p.y)))
            .collect();
        format!(
            "{{\"level\":{},\"cost\":{},\"points\":[{}]}}",
            self.level,
            crate::fmt_num(self.cost),
            points.join(",")
        )
    }

    /// Reads the `points` of a solution file (or a bare polyline file).
    pub fn polyline_from_json(text: &str) -> Result<Polyline> {
        Polyline::from_json(text)
    }
}

const BOTTOM: u8 = 1;
const TOP: u8 = 2;
const LEFT: u8 = 4;
const RIGHT: u8 = 8;

/// Boundary node of a cell: node id plus the sides of that cell it lies on.
#[derive(Copy, Clone)]
struct Member {
    node: u32,
    sides: u8,
}

struct SteinerGraph<'a> {
    tess: &'a Tessellation,
    pos: Vec<Point>,
    /// Boundary nodes of each cell (row-major cell slots).
    cell_nodes: Vec<Vec<Member>>,
    /// Per cell slot: weight paid along [bottom, top, left, right].
    side_weight: Vec<[f64; 4]>,
    /// Cells incident to each node, with the node's side mask in that cell.
    node_cells: Vec<Vec<(u32, u8)>>,
    source: u32,
    target: u32,
}

impl<'a> SteinerGraph<'a> {
    fn build(t: &'a Tessellation, q: &Query, level: u32) -> Self {
        let (m, n) = (t.width(), t.height());
        let k = (1usize << level) - 1;
        let scale = (1u64 << level) as f64;
        let corner_id = |i: usize, j: usize| j * (m + 1) + i;
        let corners = (m + 1) * (n + 1);
        let hbase = corners;
        let vbase = hbase + k * m * (n + 1);
        let h_id = |i: usize, j: usize, s: usize| hbase + (j * m + i) * k + s;
        let v_id = |i: usize, j: usize, s: usize| vbase + (i * n + j) * k + s;
        let total = vbase + k * (m + 1) * n + 2;

        let mut pos = vec![Point::default(); total];
        for j in 0..=n {
            for i in 0..=m {
                pos[corner_id(i, j)] = Point::new(i as f64, j as f64);
            }
        }
        for j in 0..=n {
            for i in 0..m {
                for s in 0..k {
                    pos[h_id(i, j, s)] = Point::new(i as f64 + (s + 1) as f64 / scale, j as f64);
                }
            }
        }
        for i in 0..=m {
            for j in 0..n {
                for s in 0..k {
                    pos[v_id(i, j, s)] = Point::new(i as f64, j as f64 + (s + 1) as f64 / scale);
                }
            }
        }
        let source = (total - 2) as u32;
        let target = (total - 1) as u32;
        pos[source as usize] = q.start_point();
        pos[target as usize] = q.goal_point();

        let mut cell_nodes = Vec::with_capacity(t.len());
        let mut side_weight = Vec::with_capacity(t.len());
        let mut node_cells: Vec<Vec<(u32, u8)>> = vec![Vec::new(); total];
        for slot in 0..t.len() {
            let c = t.cell_at_slot(slot);
            let (i0, j0) = (c.x - 1, c.y - 1);
            let alpha = t.weight(c);
            let side = |dx: i64, dy: i64| {
                let nb = CellIndex::new((c.x as i64 + dx) as usize, (c.y as i64 + dy) as usize);
                t.get(nb).map_or(alpha, |w| alpha.min(w))
            };
            side_weight.push([side(0, -1), side(0, 1), side(-1, 0), side(1, 0)]);

            let mut members = Vec::with_capacity(4 * k + 5);
            members.push(Member {
                node: corner_id(i0, j0) as u32,
                sides: BOTTOM | LEFT,
            });
            members.push(Member {
                node: corner_id(i0 + 1, j0) as u32,
                sides: BOTTOM | RIGHT,
            });
            members.push(Member {
                node: corner_id(i0, j0 + 1) as u32,
                sides: TOP | LEFT,
            });
            members.push(Member {
                node: corner_id(i0 + 1, j0 + 1) as u32,
                sides: TOP | RIGHT,
            });
            for s in 0..k {
                members.push(Member {
                    node: h_id(i0, j0, s) as u32,
                    sides: BOTTOM,
                });
                members.push(Member {
                    node: h_id(i0, j0 + 1, s) as u32,
                    sides: TOP,
                });
                members.push(Member {
                    node: v_id(i0, j0, s) as u32,
                    sides: LEFT,
                });
                members.push(Member {
                    node: v_id(i0 + 1, j0, s) as u32,
                    sides: RIGHT,
                });
            }
            if c == q.start {
                members.push(Member {
                    node: source,
                    sides: 0,
                });
            }
            if c == q.goal {
                members.push(Member {
                    node: target,
                    sides: 0,
                });
            }
            for mem in &members {
                node_cells[mem.node as usize].push((slot as u32, mem.sides));
            }
            cell_nodes.push(members);
        }

        Self {
            tess: t,
            pos,
            cell_nodes,
            side_weight,
            node_cells,
            source,
            target,
        }
    }

    fn shortest_path(&self) -> (f64, Vec<u32>) {
        let total = self.pos.len();
        let mut dist = vec![f64::INFINITY; total];
        let mut pred = vec![u32::MAX; total];
        let mut done = vec![false; total];
        let mut heap = BinaryHeap::new();
        dist[self.source as usize] = 0.0;
        heap.push(Entry {
            cost: 0.0,
            node: self.source,
        });

        while let Some(Entry { cost, node }) = heap.pop() {
            let u = node as usize;
            if done[u] {
                continue;
            }
            done[u] = true;
            if node == self.target {
                break;
            }
            let pu = self.pos[u];
            for &(slot, mask_u) in &self.node_cells[u] {
                let slot = slot as usize;
                let alpha = self.tess.weights()[slot];
                let sides = &self.side_weight[slot];
                for mem in &self.cell_nodes[slot] {
                    let v = mem.node as usize;
                    if v == u || done[v] {
                        continue;
                    }
                    let shared = mask_u & mem.sides;
                    let w = if shared != 0 {
                        sides[shared.trailing_zeros() as usize]
                    } else {
                        alpha
                    };
                    let pv = self.pos[v];
                    let (dx, dy) = (pv.x - pu.x, pv.y - pu.y);
                    let cand = cost + w * (dx * dx + dy * dy).sqrt();
                    if cand < dist[v] {
                        dist[v] = cand;
                        pred[v] = node;
                        heap.push(Entry {
                            cost: cand,
                            node: mem.node,
                        });
                    }
                }
            }
        }

        let mut route = vec![self.target];
        let mut cur = self.target;
        while cur != self.source {
            cur = pred[cur as usize];
            debug_assert_ne!(cur, u32::MAX, "Steiner graph is connected");
            route.push(cur);
        }
        route.reverse();
        (dist[self.target as usize], route)
    }
}

#[derive(Copy, Clone)]
struct Entry {
    cost: f64,
    node: u32,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

pub fn ref_shortest_path(t: &Tessellation, q: &Query, cfg: &SteinerConfig) -> Result<RefSolution> {
    if !t.contains(q.start) || !t.contains(q.goal) || q.start == q.goal {
        return Err(Error::InvalidQuery(format!(
            "{} -> {} on a {}x{} grid",
            q.start,
            q.goal,
            t.width(),
            t.height()
        )));
    }
    let nodes = node_count(t.width(), t.height(), cfg.level);
    if cfg.level > MAX_LEVEL || nodes > cfg.node_cap {
        return Err(Error::LevelTooLarge {
            level: cfg.level,
            nodes,
            cap: cfg.node_cap,
        });
    }
    let graph = SteinerGraph::build(t, q, cfg.level);
    let (search_cost, route) = graph.shortest_path();
    let polyline = Polyline::new(route.iter().map(|&v| graph.pos[v as usize]).collect())?;
    let cost = clip_lengths(t, &polyline)?.total_cost;
    Ok(RefSolution {
        polyline,
        cost,
        search_cost,
        level: cfg.level,
    })
}

/// Refines level by level from 0 until two successive costs agree to within
/// `rel_tol` (relative) or `max_level` is reached; returns the last solution.
pub fn converge(t: &Tessellation, q: &Query, max_level: u32, rel_tol: f64) -> Result<RefSolution> {
    converge_with_cap(t, q, max_level, rel_tol, DEFAULT_NODE_CAP)
}

pub fn converge_with_cap(
    t: &Tessellation,
    q: &Query,
    max_level: u32,
    rel_tol: f64,
    node_cap: usize,
) -> Result<RefSolution> {
    if rel_tol.is_nan() || rel_tol <= 0.0 {
        return Err(Error::Validation(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let cfg = |level| SteinerConfig { level, node_cap };
    let mut best = ref_shortest_path(t, q, &cfg(0))?;
    for level in 1..=max_level {
        let next = ref_shortest_path(t, q, &cfg(level))?;
        let gap = (best.cost - next.cost).abs();
        let converged = gap <= rel_tol * next.cost.abs() || gap == 0.0;
        best = next;
        if converged {
            break;
        }
    }
    Ok(best)
}
