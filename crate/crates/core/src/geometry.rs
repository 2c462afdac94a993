//! Clipping polylines against the unit grid and evaluating weighted cost.
//!
//! Every segment is cut at its crossings with the integer grid lines. A piece
//! strictly inside a cell is credited to the cell holding its midpoint. A piece
//! lying on a grid line is credited once, to the cheaper of the two cells it
//! separates (the lower/left one on a tie).

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::tessellation::{CellIndex, Point, Tessellation};

/// Tolerance, in coordinate units, for "lies on a grid line" and for merging
/// nearly coincident crossing parameters.
pub const GRID_EPS: f64 = 1e-12;

/// An ordered list of at least two points.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct JsonPolyline {
    points: Vec<[f64; 2]>,
}

impl Polyline {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Validation(format!(
                "a polyline needs at least two points, got {}",
                points.len()
            )));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite polyline point ({}, {})",
                p.x, p.y
            )));
        }
        Ok(Self { points })
    }

    /// The polyline through the centers of the given cells.
    pub fn through_centers(cells: &[CellIndex]) -> Result<Self> {
        Self::new(
            cells
                .iter()
                .map(|c| Point::new(c.x as f64 - 0.5, c.y as f64 - 0.5))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn first(&self) -> Point {
        self.points[0]
    }

    pub fn last(&self) -> Point {
        self.points[self.points.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn euclidean_length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    pub fn check_bounds(&self, t: &Tessellation) -> Result<()> {
        match self.points.iter().find(|p| !t.in_bounds(**p)) {
            Some(p) => Err(t.out_of_bounds(*p)),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        let points: Vec<String> = self
            .points
            .iter()
            .map(|p| format!("[{},{}]", crate::fmt_num(p.x), crate::fmt_num(p.y)))
            .collect();
        format!("{{\"points\":[{}]}}", points.join(","))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: JsonPolyline = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::new(
            raw.points
                .into_iter()
                .map(|[x, y]| Point::new(x, y))
                .collect(),
        )
    }
}

/// A maximal sub-interval of one polyline segment that stays inside a single
/// closed cell (or on a single grid-line edge).
#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub segment: usize,
    pub start: Point,
    pub end: Point,
    pub length: f64,
    /// The cell the piece's length is attributed to.
    pub credited: CellIndex,
    /// Every cell whose closed square contains the piece: one cell for an
    /// interior piece, up to two for a piece on a grid line.
    pub touching: Vec<CellIndex>,
}

/// Splits the polyline into positive-length pieces in traversal order.
pub fn pieces(t: &Tessellation, poly: &Polyline) -> Result<Vec<Piece>> {
    poly.check_bounds(t)?;
    let mut out = Vec::new();
    for (i, (a, b)) in poly.segments().enumerate() {
        segment_pieces(t, i, a, b, &mut out);
    }
    Ok(out)
}

fn crossings(lo: f64, hi: f64, origin: f64, delta: f64, params: &mut Vec<f64>) {
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut k = lo.floor() + 1.0;
    while k < hi {
        params.push((k - origin) / delta);
        k += 1.0;
    }
}

fn segment_pieces(t: &Tessellation, segment: usize, a: Point, b: Point, out: &mut Vec<Piece>) {
    let total = a.dist(b);
    if total == 0.0 {
        return;
    }
    let mut params = vec![0.0, 1.0];
    crossings(a.x, b.x, a.x, b.x - a.x, &mut params);
    crossings(a.y, b.y, a.y, b.y - a.y, &mut params);
    params.sort_by(f64::total_cmp);
    params.dedup_by(|later, earlier| (*later - *earlier).abs() < GRID_EPS);
    // dedup keeps the earlier value; make sure the far end is exactly 1.
    if let Some(last) = params.last_mut() {
        *last = 1.0;
    }

    for w in params.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let start = a.lerp(b, t0);
        let end = a.lerp(b, t1);
        let length = total * (t1 - t0);
        if length <= 0.0 {
            continue;
        }
        let mid = a.lerp(b, 0.5 * (t0 + t1));
        let touching = if let Some(k) = common_line(start.x, end.x) {
            line_neighbours(k, t.width(), axis(mid.y, t.height()))
                .map(|(x, y)| CellIndex::new(x, y))
                .collect::<Vec<_>>()
        } else if let Some(k) = common_line(start.y, end.y) {
            line_neighbours(k, t.height(), axis(mid.x, t.width()))
                .map(|(y, x)| CellIndex::new(x, y))
                .collect::<Vec<_>>()
        } else {
            vec![CellIndex::new(
                axis(mid.x, t.width()),
                axis(mid.y, t.height()),
            )]
        };
        let credited = touching
            .iter()
            .copied()
            .reduce(|best, c| {
                if t.weight(c) < t.weight(best) {
                    c
                } else {
                    best
                }
            })
            .expect("every piece touches a cell");
        out.push(Piece {
            segment,
            start,
            end,
            length,
            credited,
            touching,
        });
    }
}

/// Integer grid line shared by two coordinates, if both lie on it.
fn common_line(u: f64, v: f64) -> Option<i64> {
    let k = u.round();
    ((u - k).abs() < GRID_EPS && (v - k).abs() < GRID_EPS).then_some(k as i64)
}

/// Cells on either side of grid line `k` along an axis of `len` cells, paired
/// with the fixed cross-axis index.
fn line_neighbours(k: i64, len: usize, cross: usize) -> impl Iterator<Item = (usize, usize)> {
    [k, k + 1]
        .into_iter()
        .filter(move |&i| i >= 1 && i <= len as i64)
        .map(move |i| (i as usize, cross))
}

fn axis(v: f64, len: usize) -> usize {
    ((v.floor().max(0.0) as usize) + 1).min(len)
}

/// Cells whose closed square contains `p`: one, two on an edge, up to four at a
/// lattice corner.
pub fn cells_touching_point(t: &Tessellation, p: Point) -> Vec<CellIndex> {
    let along = |v: f64, len: usize| -> Vec<usize> {
        let k = v.round();
        if (v - k).abs() < GRID_EPS {
            let k = k as i64;
            [k, k + 1]
                .into_iter()
                .filter(|&i| i >= 1 && i <= len as i64)
                .map(|i| i as usize)
                .collect()
        } else {
            vec![axis(v, len)]
        }
    };
    let xs = along(p.x, t.width());
    let ys = along(p.y, t.height());
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            out.push(CellIndex::new(x, y));
        }
    }
    out
}

/// Traversal order of the closed cells met by the polyline: alternating point
/// touches (piece endpoints) and piece touches. A corner crossing therefore
/// shows up as a single entry containing all the cells around that corner.
pub fn touch_sequence(t: &Tessellation, poly: &Polyline) -> Result<Vec<Vec<CellIndex>>> {
    let ps = pieces(t, poly)?;
    let mut seq = Vec::with_capacity(2 * ps.len() + 1);
    for p in &ps {
        seq.push(cells_touching_point(t, p.start));
        seq.push(p.touching.clone());
    }
    match ps.last() {
        Some(p) => seq.push(cells_touching_point(t, p.end)),
        None => seq.push(cells_touching_point(t, poly.first())),
    }
    Ok(seq)
}

/// Per-cell clip lengths `‖π_xy‖` and the weighted total `C(π)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CostBreakdown {
    m: usize,
    n: usize,
    lengths: Vec<f64>,
    pub total_cost: f64,
}

impl CostBreakdown {
    pub fn width(&self) -> usize {
        self.m
    }

    pub fn height(&self) -> usize {
        self.n
    }

    /// Clip length of a cell; zero for cells the path never enters.
    pub fn length(&self, c: CellIndex) -> f64 {
        if (1..=self.m).contains(&c.x) && (1..=self.n).contains(&c.y) {
            self.lengths[(c.y - 1) * self.m + (c.x - 1)]
        } else {
            0.0
        }
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Cells with positive clip length, row-major.
    pub fn per_cell(&self) -> impl Iterator<Item = (CellIndex, f64)> + '_ {
        let m = self.m;
        self.lengths
            .iter()
            .enumerate()
            .filter(|(_, l)| **l > 0.0)
            .map(move |(i, l)| (CellIndex::new(i % m + 1, i / m + 1), *l))
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// `x,y,length,weight,contribution` rows for visited cells plus a `total` row.
    pub fn to_csv(&self, t: &Tessellation) -> String {
        let mut out = String::from("x,y,length,weight,contribution\n");
        for (c, len) in self.per_cell() {
            let w = t.weight(c);
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                c.x,
                c.y,
                crate::fmt_num(len),
                crate::fmt_num(w),
                crate::fmt_num(w * len)
            ));
        }
        out.push_str(&format!(
            "total,,{},,{}\n",
            crate::fmt_num(self.total_length()),
            crate::fmt_num(self.total_cost)
        ));
        out
    }
}

pub fn clip_lengths(t: &Tessellation, poly: &Polyline) -> Result<CostBreakdown> {
    let mut lengths = vec![0.0; t.len()];
    for p in pieces(t, poly)? {
        lengths[t.slot(p.credited)] += p.length;
    }
    let total_cost = lengths.iter().zip(t.weights()).map(|(l, w)| l * w).sum();
    Ok(CostBreakdown {
        m: t.width(),
        n: t.height(),
        lengths,
        total_cost,
    })
}

pub fn path_cost(t: &Tessellation, poly: &Polyline) -> Result<f64> {
    Ok(clip_lengths(t, poly)?.total_cost)
}
