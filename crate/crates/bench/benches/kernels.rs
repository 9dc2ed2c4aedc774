use criterion::{criterion_group, criterion_main, Criterion};
use iwasawa_core::lambda_ring::{involution, InvolutionMap};
use iwasawa_core::linalg::solve;
use iwasawa_core::tower_sim::corpus::{corpus_run, CorpusConfig};
use iwasawa_core::{build_tower, IwasawaPoly, PrimeConfig, TowerSpec};
use std::hint::black_box;

fn howell(c: &mut Criterion) {
    let ring = PrimeConfig::new(3, 8).unwrap();
    let gens: Vec<Vec<u64>> = (0..12u64).map(|i| (0..12u64).map(|j| (i * 7 + j * j * 3 + 1) % 6561).collect()).collect();
    let target: Vec<u64> = (0..12u64).map(|j| (j * 3) % 6561).collect();
    c.bench_function("howell_solve_12x12", |b| b.iter(|| solve(ring, black_box(&gens), black_box(&target))));
}

fn involutions(c: &mut Criterion) {
    let cfg = PrimeConfig::new(3, 12).unwrap();
    let f = IwasawaPoly::from_ints(cfg, &[5, -2, 7, 1, 0, 4, 3, -1, 2]);
    c.bench_function("involution_horner_n3", |b| b.iter(|| involution(black_box(&f), 3).unwrap()));
    let map = InvolutionMap::new(cfg, 3).unwrap();
    c.bench_function("involution_table_n3", |b| b.iter(|| map.apply(black_box(&f)).unwrap()));
}

fn towers(c: &mut Criterion) {
    c.bench_function("tower_t2_plus_3t_plus_3_h5", |b| {
        b.iter(|| build_tower(black_box(&TowerSpec::poly(3, vec![3, 3, 1], 5))).unwrap())
    });
    let mut g = c.benchmark_group("corpus");
    g.sample_size(10);
    g.bench_function("p3_50_towers", |b| {
        b.iter(|| {
            let mut cfg = CorpusConfig::new(3, 50, 4, 42);
            cfg.horizon = 5;
            corpus_run(&cfg).unwrap()
        })
    });
    g.finish();
}

criterion_group!(benches, howell, involutions, towers);
criterion_main!(benches);
