use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use coreduality::analysis::{
    check_concurrency, is_core_imputation, verify_complementarity, DualFace,
};
use coreduality::fixtures;
use coreduality::formulations::{build_dual, incidence_matrix, is_totally_unimodular};
use coreduality::generate::random_instance;
use coreduality::lp::solve;
use coreduality::oracle::{characteristic_function, enumerate_optima};
use coreduality::{Caps, GameKind, Imputation};

fn lp(c: &mut Criterion) {
    let mut group = c.benchmark_group("dual_lp");
    for kind in [GameKind::Assignment, GameKind::HoffmanKruskal, GameKind::GeneralMatching] {
        let g = random_instance(kind, 3, 10);
        let lp = build_dual(&g);
        group.bench_with_input(BenchmarkId::from_parameter(kind.keyword()), &lp, |b, lp| {
            b.iter(|| solve(black_box(lp)))
        });
    }
    group.finish();
    let g = random_instance(GameKind::BMatching, 5, 10);
    c.bench_function("optimal_face_sample", |b| {
        b.iter(|| DualFace::new(&g).unwrap().sample(&g, 8, 1).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let caps = Caps::default();
    let g = random_instance(GameKind::BMatching, 11, 10);
    c.bench_function("enumerate_optima", |b| {
        b.iter(|| enumerate_optima(black_box(&g), &caps).unwrap())
    });
    c.bench_function("characteristic_function", |b| {
        b.iter(|| characteristic_function(black_box(&g), &caps).unwrap())
    });
}

fn analysis(c: &mut Criterion) {
    let caps = Caps::default();
    let g = fixtures::seven_vertex();
    let imp = Imputation::external(fixtures::by_name("seven_vertex").unwrap().imputation.unwrap());
    c.bench_function("core_check_seven_vertex", |b| {
        b.iter(|| is_core_imputation(&g, black_box(&imp), &caps).unwrap())
    });
    c.bench_function("concurrency_seven_vertex", |b| {
        b.iter(|| check_concurrency(black_box(&g), &caps).unwrap())
    });
    let h = random_instance(GameKind::HoffmanKruskal, 7, 10);
    c.bench_function("complementarity_hk", |b| {
        b.iter(|| verify_complementarity(black_box(&h), &caps).unwrap())
    });
    let m = incidence_matrix(&random_instance(GameKind::Assignment, 2, 10));
    c.bench_function("tum_incidence", |b| {
        b.iter(|| is_totally_unimodular(black_box(&m), 10).unwrap())
    });
}

criterion_group!(benches, lp, oracle, analysis);
criterion_main!(benches);
