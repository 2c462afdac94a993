//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::f64::consts::SQRT_2;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tessera_core::analysis::{evaluate, Evaluation, HarnessConfig, SearchConfig};
use tessera_core::instances::{random_suite, terrain_10x7, RandomSpec};
use tessera_core::{
    check_v_half_connectivity, clip_lengths, construct_lemma_path, grid_dijkstra,
    ref_shortest_path, worst_case_search, CellIndex, Instance, Polyline, SteinerConfig,
    Tessellation, DEFAULT_A, THEOREM_RATIO,
};

const HARNESS_SEED: u64 = 2024;
/// Best ratio of the exhaustive 3×3 search over {1, 100}, corner to corner.
const WORST_3X3_RATIO: f64 = 1.20165402;

struct Verdict {
    id: u32,
    ok: bool,
    detail: String,
}

fn verdict(id: u32, ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        id,
        ok,
        detail: detail.into(),
    }
}

fn harness_suite() -> Vec<(String, Instance)> {
    let mut suite = random_suite(HARNESS_SEED, 200, &RandomSpec::default());
    suite.push(("terrain".into(), terrain_10x7()));
    suite
}

fn evaluations(suite: &[(String, Instance)]) -> Vec<Evaluation> {
    suite
        .par_iter()
        .map(|(id, inst)| evaluate(id, inst, &HarnessConfig::default()).expect("evaluation"))
        .collect()
}

/// Grid edge weight straight from the definition.
fn edge(t: &Tessellation, a: CellIndex, b: CellIndex) -> f64 {
    let sum = t.weight(a) + t.weight(b);
    if a.x != b.x && a.y != b.y {
        SQRT_2 / 2.0 * sum
    } else {
        sum / 2.0
    }
}

fn king_neighbours(t: &Tessellation, c: CellIndex) -> Vec<CellIndex> {
    let mut out = Vec::new();
    for dx in -1i64..=1 {
        for dy in -1i64..=1 {
            let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
            if (dx, dy) != (0, 0)
                && x >= 1
                && y >= 1
                && x <= t.width() as i64
                && y <= t.height() as i64
            {
                out.push(CellIndex::new(x as usize, y as usize));
            }
        }
    }
    out
}

/// Cheapest simple path by enumerating all of them.
fn enumerate_min(t: &Tessellation, s: CellIndex, g: CellIndex) -> f64 {
    fn dfs(
        t: &Tessellation,
        at: CellIndex,
        g: CellIndex,
        seen: &mut Vec<CellIndex>,
        cost: f64,
        best: &mut f64,
    ) {
        if at == g {
            *best = best.min(cost);
            return;
        }
        for nb in king_neighbours(t, at) {
            if !seen.contains(&nb) {
                seen.push(nb);
                dfs(t, nb, g, seen, cost + edge(t, at, nb), best);
                seen.pop();
            }
        }
    }
    let mut best = f64::INFINITY;
    dfs(t, s, g, &mut vec![s], 0.0, &mut best);
    best
}

fn criterion_1(evals: &[Evaluation]) -> Verdict {
    let bad: Vec<_> = evals
        .iter()
        .filter(|e| e.grid.cost > THEOREM_RATIO * e.reference.cost + 1e-9)
        .map(|e| e.report.instance.clone())
        .collect();
    let worst = evals
        .iter()
        .map(|e| e.grid.cost / e.reference.cost)
        .fold(0.0, f64::max);
    verdict(
        1,
        bad.is_empty(),
        format!(
            "{} instances, max ratio {worst:.6}, violations {bad:?}",
            evals.len()
        ),
    )
}

fn criterion_2() -> Verdict {
    let suite = random_suite(7, 50, &RandomSpec::default());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;
    for i in 0..1000 {
        let t = &suite[i % suite.len()].1.tess;
        let mut at = CellIndex::new(rng.gen_range(1..=t.width()), rng.gen_range(1..=t.height()));
        let mut walk = vec![at];
        for _ in 0..rng.gen_range(1..=40) {
            let nbs = king_neighbours(t, at);
            at = nbs[rng.gen_range(0..nbs.len())];
            walk.push(at);
        }
        let edges: f64 = walk.windows(2).map(|w| edge(t, w[0], w[1])).sum();
        let clipped = clip_lengths(t, &Polyline::through_centers(&walk).unwrap())
            .unwrap()
            .total_cost;
        worst = worst.max((edges - clipped).abs());
    }
    verdict(
        2,
        worst <= 1e-9,
        format!("1000 walks, max deviation {worst:.3e}"),
    )
}

fn criterion_3() -> Verdict {
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for alpha in [1.0, 2.0] {
        let t = Tessellation::uniform(16, 16, alpha).unwrap();
        let cells: Vec<CellIndex> = t.cells().collect();
        let (bad, n): (usize, usize) = cells
            .par_iter()
            .map(|&s| {
                let mut bad = 0;
                for &g in &cells {
                    if s == g {
                        continue;
                    }
                    let inst = Instance::new(t.clone(), s, g).unwrap();
                    let cost = grid_dijkstra(&inst.tess, &inst.query).unwrap().cost;
                    let (dx, dy) = (s.x.abs_diff(g.x) as f64, s.y.abs_diff(g.y) as f64);
                    if cost != alpha * (SQRT_2 * dx.min(dy) + (dx - dy).abs()) {
                        bad += 1;
                    }
                }
                (bad, cells.len() - 1)
            })
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        mismatches += bad;
        checked += n;
    }
    verdict(
        3,
        mismatches == 0,
        format!("{checked} queries (α ∈ {{1, 2}}), {mismatches} not bit-identical"),
    )
}

fn criterion_4() -> Verdict {
    let (s, g) = (CellIndex::new(1, 1), CellIndex::new(3, 3));
    let worst = (0u32..512)
        .into_par_iter()
        .map(|mask| {
            let w = (0..9)
                .map(|i| if mask >> i & 1 == 1 { 100.0 } else { 1.0 })
                .collect();
            let t = Tessellation::new(3, 3, w).unwrap();
            let inst = Instance::new(t, s, g).unwrap();
            let d = grid_dijkstra(&inst.tess, &inst.query).unwrap().cost;
            (d - enumerate_min(&inst.tess, s, g)).abs()
        })
        .reduce(|| 0.0, f64::max);
    verdict(
        4,
        worst <= 1e-9,
        format!("512 assignments, max deviation {worst:.3e}"),
    )
}

fn criterion_5(suite: &[(String, Instance)], evals: &[Evaluation]) -> Verdict {
    let mut failures = Vec::new();
    for e in evals {
        let Some(lp) = &e.lemma else {
            failures.push(format!(
                "{}: {}",
                e.report.instance,
                e.report.error.clone().unwrap_or_default()
            ));
            continue;
        };
        let in_va = |c: CellIndex| lp.breakdown.length(c) >= DEFAULT_A - 1e-9;
        let mut ok = lp.check_conditions().is_ok();
        for w in lp.path.vertices.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a.x != b.x && a.y != b.y {
                ok &= !in_va(CellIndex::new(a.x, b.y)) && !in_va(CellIndex::new(b.x, a.y));
            }
        }
        ok &= lp.path.vertices.iter().all(|&v| in_va(v));
        if !ok {
            failures.push(e.report.instance.clone());
        }
    }
    // The converged polylines may stop short of level 5; rebuild at level 5 too.
    let fine: Vec<String> = suite
        .par_iter()
        .filter_map(|(id, inst)| {
            let sol =
                ref_shortest_path(&inst.tess, &inst.query, &SteinerConfig::at_level(5)).unwrap();
            match construct_lemma_path(&inst.tess, &inst.query, &sol.polyline, DEFAULT_A) {
                Ok(lp) if lp.check_conditions().is_ok() => None,
                Ok(_) => Some(format!("{id} (level 5)")),
                Err(e) => Some(format!("{id} (level 5): {e}")),
            }
        })
        .collect();
    failures.extend(fine);
    verdict(
        5,
        failures.is_empty(),
        format!(
            "{} instances, converged and level-5 polylines at a = {DEFAULT_A:.9}, failures {failures:?}",
            evals.len()
        ),
    )
}

fn criterion_6(evals: &[Evaluation]) -> Verdict {
    let cells: Vec<f64> = evals
        .iter()
        .flat_map(|e| e.certificates.values().map(|c| c.ratio))
        .collect();
    let worst = cells.iter().copied().fold(0.0, f64::max);
    let missing = evals.iter().filter(|e| e.certificates.is_empty()).count();
    verdict(
        6,
        missing == 0 && worst <= THEOREM_RATIO + 1e-6,
        format!("{} cell certificates, max ratio {worst:.6}", cells.len()),
    )
}

fn criterion_7() -> Verdict {
    let suite = random_suite(77, 20, &RandomSpec::default());
    let rises: usize = suite
        .par_iter()
        .map(|(_, inst)| {
            let costs: Vec<f64> = (1..=5)
                .map(|l| {
                    ref_shortest_path(&inst.tess, &inst.query, &SteinerConfig::at_level(l))
                        .unwrap()
                        .cost
                })
                .collect();
            costs.windows(2).filter(|w| w[1] > w[0] + 1e-12).count()
        })
        .sum();

    let closed: Vec<(Instance, f64)> = vec![
        (
            Instance::new(
                Tessellation::uniform(8, 8, 1.0).unwrap(),
                CellIndex::new(1, 1),
                CellIndex::new(8, 8),
            )
            .unwrap(),
            7.0 * SQRT_2,
        ),
        (
            Instance::new(
                Tessellation::uniform(16, 16, 2.0).unwrap(),
                CellIndex::new(1, 1),
                CellIndex::new(13, 4),
            )
            .unwrap(),
            2.0 * 153f64.sqrt(),
        ),
        (
            Instance::new(
                Tessellation::uniform(1, 5, 3.0).unwrap(),
                CellIndex::new(1, 1),
                CellIndex::new(1, 5),
            )
            .unwrap(),
            12.0,
        ),
        (
            Instance::new(
                Tessellation::new(3, 1, vec![1.0, 100.0, 1.0]).unwrap(),
                CellIndex::new(1, 1),
                CellIndex::new(3, 1),
            )
            .unwrap(),
            101.0,
        ),
    ];
    let worst = closed
        .iter()
        .map(|(inst, exact)| {
            let c = ref_shortest_path(&inst.tess, &inst.query, &SteinerConfig::at_level(5))
                .unwrap()
                .cost;
            (c - exact).abs()
        })
        .fold(0.0, f64::max);
    verdict(
        7,
        rises == 0 && worst <= 1e-6,
        format!("20 instances, {rises} level increases; closed forms max deviation {worst:.3e}"),
    )
}

fn criterion_8() -> Verdict {
    let out = worst_case_search(&SearchConfig {
        m: 3,
        n: 3,
        palette: vec![1.0, 100.0],
        budget: 512,
        seed: 0,
        harness: HarnessConfig::default(),
    })
    .unwrap();
    let r = out.best_ratio();
    let ok = out.exhaustive
        && out.evaluated == 512
        && (1.0..=THEOREM_RATIO).contains(&r)
        && (r - WORST_3X3_RATIO).abs() <= 1e-6;
    verdict(
        8,
        ok,
        format!("best ratio {r:.8} (regression {WORST_3X3_RATIO})"),
    )
}

fn criterion_9(suite: &[(String, Instance)], evals: &[Evaluation]) -> Verdict {
    let mut failed = Vec::new();
    for ((id, inst), e) in suite.iter().zip(evals) {
        let b = clip_lengths(&inst.tess, &e.reference.polyline).unwrap();
        if !check_v_half_connectivity(&b) {
            failed.push(id.clone());
            let dump = std::env::temp_dir().join(format!("tessera-vhalf-{id}.wrp"));
            let _ = fs::write(&dump, inst.to_wrp());
        }
    }
    let share = 1.0 - failed.len() as f64 / suite.len() as f64;
    verdict(
        9,
        share >= 0.99,
        format!("{:.1}% connected, failures {failed:?}", share * 100.0),
    )
}

fn run(bin: &str, args: &[&str], dir: &Path) -> Vec<u8> {
    let out = Command::new(bin)
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn criterion_10() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_tessera");
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("terrain.wrp"), terrain_10x7().to_wrp()).unwrap();
    fs::write(d.join("list.txt"), "terrain.wrp\n").unwrap();

    let runs: Vec<(Vec<&str>, Vec<&str>)> = vec![
        (
            vec!["solve-grid", "--in", "terrain.wrp", "--out", "g.json"],
            vec!["g.json"],
        ),
        (
            vec![
                "solve-ref",
                "--in",
                "terrain.wrp",
                "--out",
                "r.json",
                "--breakdown",
                "b.csv",
            ],
            vec!["r.json", "b.csv"],
        ),
        (
            vec![
                "lemma-path",
                "--in",
                "terrain.wrp",
                "--out",
                "l.json",
                "--certificates",
                "c.csv",
            ],
            vec!["l.json", "c.csv"],
        ),
        (
            vec!["ratio", "--in", "terrain.wrp", "--out", "ratio.csv"],
            vec!["ratio.csv"],
        ),
        (
            vec!["sweep", "--in", "list.txt", "--out", "m.csv"],
            vec!["m.csv"],
        ),
        (
            vec![
                "sweep", "--random", "12", "--seed", "5", "--jobs", "3", "--out", "s.csv",
            ],
            vec!["s.csv"],
        ),
        (
            vec![
                "search-worst",
                "--m",
                "3",
                "--n",
                "2",
                "--palette",
                "1,2,100",
                "--budget",
                "40",
                "--seed",
                "9",
                "--out",
                "w.wrp",
            ],
            vec!["w.wrp"],
        ),
        (
            vec![
                "render",
                "--in",
                "terrain.wrp",
                "--grid",
                "g.json",
                "--ref",
                "r.json",
                "--out",
                "p.svg",
            ],
            vec!["p.svg"],
        ),
    ];
    let mut differing = Vec::new();
    for (args, files) in &runs {
        let first_out = run(bin, args, d);
        let first: Vec<Vec<u8>> = files.iter().map(|f| fs::read(d.join(f)).unwrap()).collect();
        let second_out = run(bin, args, d);
        let second: Vec<Vec<u8>> = files.iter().map(|f| fs::read(d.join(f)).unwrap()).collect();
        if first_out != second_out || first != second {
            differing.push(args[0]);
        }
    }
    verdict(
        10,
        differing.is_empty(),
        format!(
            "{} invocations run twice, differing {differing:?}",
            runs.len()
        ),
    )
}

#[test]
fn acceptance() {
    let suite = harness_suite();
    let evals = evaluations(&suite);
    let verdicts = vec![
        criterion_1(&evals),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(&suite, &evals),
        criterion_6(&evals),
        criterion_7(),
        criterion_8(),
        criterion_9(&suite, &evals),
        criterion_10(),
    ];
    // Written to the raw handle so the lines show up without --nocapture.
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for v in &verdicts {
        let tag = if v.ok { "PASS" } else { "FAIL" };
        writeln!(out, "acceptance {:>2}: {tag}  {}", v.id, v.detail).unwrap();
    }
    drop(out);
    let failed: Vec<u32> = verdicts.iter().filter(|v| !v.ok).map(|v| v.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
