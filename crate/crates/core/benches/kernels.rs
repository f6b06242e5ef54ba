use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use expheat::heat::{apply_semigroup, SemigroupPlan};
use expheat::orlicz::{luxemburg_norm, OrliczSpec};
use expheat::solver::{integrate, TimeGrid};
use expheat::{Grid, GridFunction};

fn bump(grid: Grid) -> GridFunction {
    GridFunction::from_fn(grid, |x| {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        0.5 * (-r2).exp()
    })
    .unwrap()
}

fn pools() -> Vec<(String, rayon::ThreadPool)> {
    let default = rayon::current_num_threads();
    [("single", 1), ("default", default)]
        .into_iter()
        .map(|(label, n)| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap();
            (format!("{label}-{n}-threads"), pool)
        })
        .collect()
}

fn luxemburg(c: &mut Criterion) {
    let u = bump(Grid::new(3, 6.0, 64).unwrap());
    let spec = OrliczSpec::full(2.0).unwrap();
    let mut group = c.benchmark_group("luxemburg_norm_64cubed");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| luxemburg_norm(black_box(&u), &spec).unwrap()))
        });
    }
    group.finish();
}

fn semigroup(c: &mut Criterion) {
    let u = bump(Grid::new(3, 6.0, 64).unwrap());
    let mut group = c.benchmark_group("heat_semigroup_64cubed");
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| apply_semigroup(black_box(&u), 0.5).unwrap()))
        });
    }
    group.finish();
}

fn duhamel(c: &mut Criterion) {
    let grid = Grid::new(1, 8.0, 1024).unwrap();
    let plan = SemigroupPlan::new(grid);
    let tg = TimeGrid::geometric(1e-3, 4.0, 1.1).unwrap();
    let sources: Vec<GridFunction> = tg
        .times()
        .iter()
        .map(|t| bump(grid).scaled((-t).exp()))
        .collect();
    let mut group = c.benchmark_group("duhamel_integrate_1024");
    group.sample_size(20);
    for (name, pool) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| integrate(&plan, &tg, black_box(&sources)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, luxemburg, semigroup, duhamel);
criterion_main!(benches);
