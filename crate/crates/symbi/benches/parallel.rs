use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use symbi::caratheodory::{car_solve_with, rho_grid, CarOptions};
use symbi::kobayashi::{solve_many, KobOptions};
use symbi::par::map_slice;
use symbi::verify::family_datum;
use symbi::{Datum, Exec};

const POLICIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn datums(n: usize) -> Vec<Datum> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    (0..n).map(|j| family_datum(&mut rng, j % 5).1).collect()
}

fn circle_scan(c: &mut Criterion) {
    let d = datums(1)[0];
    let mut g = c.benchmark_group("rho_grid_65536");
    for (name, exec) in POLICIES {
        g.bench_function(name, |b| b.iter(|| rho_grid(black_box(&d), 65536, exec).unwrap()));
    }
    g.finish();
}

fn car_batch(c: &mut Criterion) {
    let ds = datums(200);
    let mut g = c.benchmark_group("car_batch");
    for (name, exec) in POLICIES {
        // the outer loop carries the policy; each solve stays sequential
        let opts = CarOptions { exec: Exec::Sequential, ..CarOptions::default() };
        g.bench_with_input(BenchmarkId::new(name, ds.len()), &ds, |b, ds| {
            b.iter(|| map_slice(exec, ds, |d| car_solve_with(d, &opts).map(|s| s.value)))
        });
    }
    g.finish();
}

fn kob_batch(c: &mut Criterion) {
    let ds = datums(50);
    let mut g = c.benchmark_group("kobayashi_batch");
    g.sample_size(10);
    for (name, exec) in POLICIES {
        let opts = KobOptions { car: CarOptions { exec: Exec::Sequential, ..CarOptions::default() }, ..KobOptions::default() };
        g.bench_with_input(BenchmarkId::new(name, ds.len()), &ds, |b, ds| b.iter(|| solve_many(ds, &opts, exec)));
    }
    g.finish();
}

criterion_group!(benches, circle_scan, car_batch, kob_batch);
criterion_main!(benches);
