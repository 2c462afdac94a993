//! Square tessellations, cell indexing and the instance file formats.
//!
//! Cell `(x, y)` covers the closed square `[x-1, x] × [y-1, y]`; the lower-left
//! cell is `(1, 1)`. Weights are stored row-major with row `y = 1` first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One-based cell index: column `x`, row `y`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub x: usize,
    pub y: usize,
}

impl CellIndex {
    pub const fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for CellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(usize, usize)> for CellIndex {
    fn from((x, y): (usize, usize)) -> Self {
        Self { x, y }
    }
}

/// A point in tessellation coordinates (one unit per cell side).
#[derive(Copy, Clone, Debug, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (other.x - self.x).hypot(other.y - self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// An `m × n` grid of unit cells carrying non-negative finite weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Tessellation {
    m: usize,
    n: usize,
    weights: Vec<f64>,
}

impl Tessellation {
    pub fn new(m: usize, n: usize, weights: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Validation(format!(
                "dimensions must be positive, got {m}x{n}"
            )));
        }
        if m.checked_mul(n) != Some(weights.len()) {
            return Err(Error::Validation(format!(
                "expected {} weights for a {m}x{n} grid, got {}",
                m.saturating_mul(n),
                weights.len()
            )));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !w.is_finite() || **w < 0.0)
        {
            let c = CellIndex::new(i % m + 1, i / m + 1);
            return Err(Error::Validation(format!(
                "weight {w} of cell {c} is not a finite non-negative number"
            )));
        }
        Ok(Self { m, n, weights })
    }

    pub fn uniform(m: usize, n: usize, weight: f64) -> Result<Self> {
        Self::new(m, n, vec![weight; m.saturating_mul(n)])
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn height(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn contains(&self, c: CellIndex) -> bool {
        (1..=self.m).contains(&c.x) && (1..=self.n).contains(&c.y)
    }

    pub fn check(&self, c: CellIndex) -> Result<()> {
        if self.contains(c) {
            Ok(())
        } else {
            Err(Error::Index {
                cell: c,
                m: self.m,
                n: self.n,
            })
        }
    }

    /// Row-major slot of a valid cell.
    #[inline]
    pub fn slot(&self, c: CellIndex) -> usize {
        debug_assert!(self.contains(c));
        (c.y - 1) * self.m + (c.x - 1)
    }

    #[inline]
    pub fn cell_at_slot(&self, slot: usize) -> CellIndex {
        CellIndex::new(slot % self.m + 1, slot / self.m + 1)
    }

    /// Weight of a valid cell. Panics on an out-of-range index.
    #[inline]
    pub fn weight(&self, c: CellIndex) -> f64 {
        assert!(self.contains(c), "cell {c} outside {}x{}", self.m, self.n);
        self.weights[self.slot(c)]
    }

    pub fn get(&self, c: CellIndex) -> Option<f64> {
        self.contains(c).then(|| self.weights[self.slot(c)])
    }

    pub fn with_weight(mut self, c: CellIndex, w: f64) -> Result<Self> {
        self.check(c)?;
        if !w.is_finite() || w < 0.0 {
            return Err(Error::Validation(format!(
                "weight {w} is not a finite non-negative number"
            )));
        }
        let slot = self.slot(c);
        self.weights[slot] = w;
        Ok(self)
    }

    /// All cells in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.weights.len()).map(|i| self.cell_at_slot(i))
    }

    pub fn cell_center(&self, c: CellIndex) -> Result<Point> {
        self.check(c)?;
        Ok(Point::new(c.x as f64 - 0.5, c.y as f64 - 0.5))
    }

    /// Cell whose half-open square `[x-1, x) × [y-1, y)` contains `p`; points on
    /// the top or right outer boundary belong to the last cell along that axis.
    pub fn cell_of_point(&self, p: Point) -> Result<CellIndex> {
        if !self.in_bounds(p) {
            return Err(self.out_of_bounds(p));
        }
        Ok(CellIndex::new(
            axis_cell(p.x, self.m),
            axis_cell(p.y, self.n),
        ))
    }

    pub fn in_bounds(&self, p: Point) -> bool {
        p.is_finite()
            && (0.0..=self.m as f64).contains(&p.x)
            && (0.0..=self.n as f64).contains(&p.y)
    }

    pub(crate) fn out_of_bounds(&self, p: Point) -> Error {
        Error::OutOfBounds {
            x: p.x,
            y: p.y,
            m: self.m,
            n: self.n,
        }
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_weight(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }
}

fn axis_cell(v: f64, len: usize) -> usize {
    ((v.floor() as usize) + 1).min(len)
}

/// A start/goal pair of distinct cells; the path runs between their centers.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub start: CellIndex,
    pub goal: CellIndex,
}

impl Query {
    pub fn new(t: &Tessellation, start: CellIndex, goal: CellIndex) -> Result<Self> {
        for c in [start, goal] {
            if !t.contains(c) {
                return Err(Error::Validation(format!(
                    "query cell {c} is outside the {}x{} tessellation",
                    t.width(),
                    t.height()
                )));
            }
        }
        if start == goal {
            return Err(Error::Validation(format!(
                "start and goal must differ, both are {start}"
            )));
        }
        Ok(Self { start, goal })
    }

    pub fn start_point(&self) -> Point {
        Point::new(self.start.x as f64 - 0.5, self.start.y as f64 - 0.5)
    }

    pub fn goal_point(&self) -> Point {
        Point::new(self.goal.x as f64 - 0.5, self.goal.y as f64 - 0.5)
    }
}

/// A validated tessellation together with its query.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub tess: Tessellation,
    pub query: Query,
}

#[derive(Serialize, Deserialize)]
struct JsonInstance {
    m: usize,
    n: usize,
    weights: Vec<f64>,
    start: [usize; 2],
    goal: [usize; 2],
}

impl Instance {
    pub fn new(tess: Tessellation, start: CellIndex, goal: CellIndex) -> Result<Self> {
        let query = Query::new(&tess, start, goal)?;
        Ok(Self { tess, query })
    }

    /// Parses either the line-oriented `.wrp` format or the JSON variant; the
    /// JSON form is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_wrp(text)
        }
    }

    pub fn parse_wrp(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (lno, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        })?;
        let dims = parse_fields::<usize>(header, lno)?;
        let [m, n] = dims[..] else {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected `m n`, got {} fields", dims.len()),
            });
        };
        if m == 0 || n == 0 {
            return Err(Error::Validation(format!(
                "dimensions must be positive, got {m}x{n}"
            )));
        }

        let mut weights = Vec::with_capacity(m.saturating_mul(n));
        for row in 1..=n {
            let (lno, line) = lines.next().ok_or(Error::Parse {
                line: lno + row,
                msg: format!("missing weight row {row}"),
            })?;
            let vals = parse_fields::<f64>(line, lno)?;
            if vals.len() != m {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("row {row} has {} weights, expected {m}", vals.len()),
                });
            }
            weights.extend(vals);
        }

        let (lno, qline) = lines.next().ok_or(Error::Parse {
            line: lno + n + 1,
            msg: "missing query line `s sx sy g gx gy`".into(),
        })?;
        let toks: Vec<&str> = qline.split_whitespace().collect();
        if toks.len() != 6 || toks[0] != "s" || toks[3] != "g" {
            return Err(Error::Parse {
                line: lno,
                msg: format!("expected `s sx sy g gx gy`, got `{qline}`"),
            });
        }
        let idx = |s: &str| {
            s.parse::<usize>().map_err(|e| Error::Parse {
                line: lno,
                msg: format!("bad cell index `{s}`: {e}"),
            })
        };
        let start = CellIndex::new(idx(toks[1])?, idx(toks[2])?);
        let goal = CellIndex::new(idx(toks[4])?, idx(toks[5])?);

        if let Some((lno, extra)) = lines.next() {
            return Err(Error::Parse {
                line: lno,
                msg: format!("unexpected trailing content `{extra}`"),
            });
        }

        Self::new(Tessellation::new(m, n, weights)?, start, goal)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let raw: JsonInstance = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let tess = Tessellation::new(raw.m, raw.n, raw.weights)?;
        Self::new(
            tess,
            CellIndex::new(raw.start[0], raw.start[1]),
            CellIndex::new(raw.goal[0], raw.goal[1]),
        )
    }

    /// Serializes to the `.wrp` text format. Weights use the shortest decimal
    /// form that reads back to the same value.
    pub fn to_wrp(&self) -> String {
        let t = &self.tess;
        let mut out = format!("{} {}\n", t.width(), t.height());
        for row in t.weights().chunks(t.width()) {
            let line: Vec<String> = row.iter().map(|w| w.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        let (s, g) = (self.query.start, self.query.goal);
        out.push_str(&format!("s {} {} g {} {}\n", s.x, s.y, g.x, g.y));
        out
    }

    pub fn to_json(&self) -> String {
        let raw = JsonInstance {
            m: self.tess.width(),
            n: self.tess.height(),
            weights: self.tess.weights().to_vec(),
            start: [self.query.start.x, self.query.start.y],
            goal: [self.query.goal.x, self.query.goal.y],
        };
        serde_json::to_string(&raw).expect("instance serializes")
    }
}

fn parse_fields<T>(line: &str, lno: usize) -> Result<Vec<T>>
where
    T: std::str::FromStr,
    T::Err: fmt::Display,
{
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|e| Error::Parse {
                line: lno,
                msg: format!("bad number `{tok}`: {e}"),
            })
        })
        .collect()
}
