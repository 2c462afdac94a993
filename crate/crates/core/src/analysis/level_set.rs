use crate::error::{Error, Result};
use crate::geometry::CostBreakdown;
use crate::tessellation::CellIndex;

/// Absorbs clipping round-off when comparing clip lengths to a threshold.
const MEMBER_TOL: f64 = 1e-9;

/// Slack subtracted from ½ by [`check_v_half_connectivity`].
pub const V_HALF_SLACK: f64 = 0.02;

/// Cells whose clip length is at least `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSet {
    a: f64,
    m: usize,
    n: usize,
    members: Vec<bool>,
}

impl LevelSet {
    #[cfg(test)]
    pub(crate) fn from_members(m: usize, n: usize, a: f64, members: Vec<bool>) -> Self {
        assert_eq!(members.len(), m * n);
        Self { a, m, n, members }
    }

    pub fn threshold(&self) -> f64 {
        self.a
    }

    pub fn width(&self) -> usize {
        self.m
    }

    pub fn height(&self) -> usize {
        self.n
    }

    pub fn contains(&self, c: CellIndex) -> bool {
        (1..=self.m).contains(&c.x)
            && (1..=self.n).contains(&c.y)
            && self.members[(c.y - 1) * self.m + c.x - 1]
    }

    pub fn members(&self) -> impl Iterator<Item = CellIndex> + '_ {
        let m = self.m;
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| CellIndex::new(i % m + 1, i / m + 1))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn level_set(b: &CostBreakdown, a: f64) -> Result<LevelSet> {
    if !(0.0..=0.5).contains(&a) {
        return Err(Error::BadThreshold(a));
    }
    Ok(LevelSet {
        a,
        m: b.width(),
        n: b.height(),
        members: b.lengths().iter().map(|&l| l >= a - MEMBER_TOL).collect(),
    })
}

/// Whether the cells with clip length at least `½ − V_HALF_SLACK` induce a
/// connected subgraph of the 8-neighbour grid graph.
pub fn check_v_half_connectivity(b: &CostBreakdown) -> bool {
    let ls = level_set(b, 0.5 - V_HALF_SLACK).expect("threshold in range");
    let members: Vec<CellIndex> = ls.members().collect();
    let Some(&first) = members.first() else {
        return true;
    };
    let mut seen = vec![false; ls.members.len()];
    let slot = |c: CellIndex| (c.y - 1) * ls.m + c.x - 1;
    let mut stack = vec![first];
    seen[slot(first)] = true;
    let mut reached = 1;
    while let Some(c) = stack.pop() {
        for dx in -1i64..=1 {
            for dy in -1i64..=1 {
                let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
                if x < 1 || y < 1 {
                    continue;
                }
                let nb = CellIndex::new(x as usize, y as usize);
                if ls.contains(nb) && !seen[slot(nb)] {
                    seen[slot(nb)] = true;
                    reached += 1;
                    stack.push(nb);
                }
            }
        }
    }
    reached == members.len()
}
