use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use tessera_core::analysis::{evaluate, HarnessConfig};
use tessera_core::instances::{random_suite, terrain_10x7, RandomSpec};
use tessera_core::{
    clip_lengths, grid_dijkstra, ref_shortest_path, CellIndex, Instance, Polyline, SteinerConfig,
};

fn square(size: usize) -> Instance {
    let spec = RandomSpec {
        width: size..=size,
        height: size..=size,
        ..RandomSpec::default()
    };
    let (_, inst) = random_suite(size as u64, 1, &spec).pop().unwrap();
    Instance::new(inst.tess, CellIndex::new(1, 1), CellIndex::new(size, size)).unwrap()
}

fn grid(c: &mut Criterion) {
    let mut g = c.benchmark_group("grid_dijkstra");
    for size in [16, 64, 256] {
        let inst = square(size);
        g.bench_with_input(BenchmarkId::from_parameter(size), &inst, |b, inst| {
            b.iter(|| grid_dijkstra(&inst.tess, &inst.query).unwrap())
        });
    }
    g.finish();
}

fn clipping(c: &mut Criterion) {
    let inst = square(64);
    let path = grid_dijkstra(&inst.tess, &inst.query).unwrap();
    let poly = Polyline::through_centers(&path.vertices).unwrap();
    c.bench_function("clip_lengths/64", |b| {
        b.iter(|| clip_lengths(&inst.tess, black_box(&poly)).unwrap())
    });
}

fn reference(c: &mut Criterion) {
    let mut g = c.benchmark_group("ref_shortest_path");
    g.sample_size(10);
    let inst = square(16);
    for level in [1, 3, 5] {
        g.bench_with_input(BenchmarkId::new("16x16", level), &level, |b, &level| {
            b.iter(|| {
                ref_shortest_path(&inst.tess, &inst.query, &SteinerConfig::at_level(level)).unwrap()
            })
        });
    }
    g.finish();
}

fn harness(c: &mut Criterion) {
    let inst = terrain_10x7();
    let cfg = HarnessConfig::default();
    c.bench_function("evaluate/terrain", |b| {
        b.iter(|| evaluate("terrain", &inst, &cfg).unwrap())
    });
}

criterion_group!(benches, grid, clipping, reference, harness);
criterion_main!(benches);
