use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use itlag::cobordism::{orientation_check, CobordismPresentation, FlatLocalSystem};
use itlag::homlin::diagram::{holim, Diagram};
use itlag::lag::compose;
use itlag::shape::nerve::nerve;
use itlag::shape::shapes::sp_uple_circ;
use itlag::span_nondeg::fold_criteria;
use itlag::spine::{check_family, PFamily};
use itlag_bench::{fold_cone, lagrangian_pair};

fn shapes(c: &mut Criterion) {
    let p = sp_uple_circ(4);
    c.bench_function("nerve homology Sp^4 punctured", |b| b.iter(|| nerve(black_box(&p)).reduced_homology()));
    let a = itlag::homlin::complex::RationalComplex::concentrated(0, 2);
    let d = Diagram::constant(&sp_uple_circ(3), &a);
    c.bench_function("holim constant over Sp^3 punctured", |b| b.iter(|| holim(black_box(&d)).complex.homology()));
}

fn criteria(c: &mut Criterion) {
    let d = fold_cone(3, 1);
    c.bench_function("fold criteria n=3", |b| b.iter(|| fold_criteria(black_box(&d)).unwrap()));
}

fn lagrangians(c: &mut Criterion) {
    let (c1, c2) = lagrangian_pair(1, 2);
    c.bench_function("compose and check Lagrangian", |b| {
        b.iter(|| compose(black_box(&c1), black_box(&c2)).unwrap().is_lagrangian().unwrap())
    });
}

fn geometry(c: &mut Criterion) {
    let family = PFamily::new(vec![1, 1], 1);
    c.bench_function("spine family j=(1,1) l=1", |b| b.iter(|| check_family(black_box(&family)).unwrap()));
    let cyl = CobordismPresentation::bundled("cylinder").unwrap();
    let e = FlatLocalSystem::trivial(1);
    c.bench_function("orientation check cylinder", |b| b.iter(|| orientation_check(black_box(&cyl), &e).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = shapes, criteria, lagrangians, geometry
}
criterion_main!(benches);
