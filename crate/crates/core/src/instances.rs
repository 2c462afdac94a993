//! Built-in and randomly generated instances.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tessellation::{CellIndex, Instance, Tessellation};

/// Weight of impassable cells: large but finite, so every search stays total.
pub const OBSTACLE_WEIGHT: f64 = 1e9;

/// 10×7 terrain with open ground (1), rough ground (2) and near-walls (100);
/// start in the bottom-left cell, goal at `(10, 2)`.
pub fn terrain_10x7() -> Instance {
    #[rustfmt::skip]
    const ROUGH: [(usize, usize); 17] = [
        (2, 3), (3, 3), (2, 4), (3, 4), (2, 5), (3, 5),
        (4, 3), (5, 3), (6, 3), (5, 2), (7, 2), (7, 3), (7, 4),
        (4, 6), (5, 6), (6, 6), (7, 6),
    ];
    #[rustfmt::skip]
    const WALL: [(usize, usize); 13] = [
        (2, 1), (3, 1), (2, 2), (3, 2),
        (8, 1), (8, 2), (8, 3), (8, 4), (8, 5),
        (9, 2), (9, 3), (9, 4), (9, 5),
    ];
    let mut weights = vec![1.0; 70];
    for (x, y) in ROUGH {
        weights[(y - 1) * 10 + x - 1] = 2.0;
    }
    for (x, y) in WALL {
        weights[(y - 1) * 10 + x - 1] = 100.0;
    }
    let t = Tessellation::new(10, 7, weights).expect("valid weights");
    Instance::new(t, CellIndex::new(1, 1), CellIndex::new(10, 2)).expect("valid query")
}

/// Parameters for [`random_instance`].
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub width: RangeInclusive<usize>,
    pub height: RangeInclusive<usize>,
    pub palette: Vec<f64>,
}

impl Default for RandomSpec {
    fn default() -> Self {
        Self {
            width: 4..=20,
            height: 4..=20,
            palette: vec![1.0, 2.0, 5.0, 100.0],
        }
    }
}

/// Uniformly random dimensions, weights and distinct start/goal cells.
pub fn random_instance<R: Rng>(rng: &mut R, spec: &RandomSpec) -> Instance {
    let m = rng.gen_range(spec.width.clone());
    let n = rng.gen_range(spec.height.clone());
    assert!(m * n >= 2, "need two distinct cells");
    let weights = (0..m * n)
        .map(|_| spec.palette[rng.gen_range(0..spec.palette.len())])
        .collect();
    let t = Tessellation::new(m, n, weights).expect("palette weights are valid");
    let pick = |rng: &mut R| CellIndex::new(rng.gen_range(1..=m), rng.gen_range(1..=n));
    let start = pick(rng);
    let mut goal = pick(rng);
    while goal == start {
        goal = pick(rng);
    }
    Instance::new(t, start, goal).expect("distinct in-range cells")
}

/// `count` reproducible instances, named `rand-<seed>-<i>`.
pub fn random_suite(seed: u64, count: usize, spec: &RandomSpec) -> Vec<(String, Instance)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| (format!("rand-{seed}-{i}"), random_instance(&mut rng, spec)))
        .collect()
}
