use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use prolong_core::lie::groups::group_by_name;
use prolong_core::{
    exp, infinitesimal_rank, prolong, verify, ProlongedBundle, Sampler, StarElement, Suite, VerifyOptions,
};

fn lie(c: &mut Criterion) {
    let so3 = group_by_name("so3").unwrap();
    let se2 = group_by_name("se2").unwrap();
    let mut s = Sampler::new(1);
    let x3 = s.algebra_element(&so3);
    let xe = s.algebra_element(&se2);
    c.bench_function("exp/so3-rodrigues", |b| b.iter(|| exp(black_box(&x3)).unwrap()));
    c.bench_function("exp/se2-series", |b| b.iter(|| exp(black_box(&xe)).unwrap()));

    let p = StarElement::new(s.algebra_element(&so3), s.group_element(&so3).unwrap()).unwrap();
    let q = StarElement::new(s.algebra_element(&so3), s.group_element(&so3).unwrap()).unwrap();
    c.bench_function("star/multiply-so3", |b| b.iter(|| black_box(&p).multiply(black_box(&q)).unwrap()));
    c.bench_function("star/inverse-so3", |b| b.iter(|| black_box(&p).inverse()));
}

fn bundle(c: &mut Criterion) {
    let bundle = ProlongedBundle::from_catalog("sphere", None).unwrap();
    let mut s = Sampler::new(2);
    let k = bundle.space().random_subgroup_element(&mut s).unwrap();
    let p = bundle.random_point_in_chart(&mut s).unwrap();
    let q = bundle.prolonged_action(&p, &k).unwrap();
    let rep = bundle.representation();
    c.bench_function("prolong/sphere-so2", |b| b.iter(|| prolong(rep, k.a(), k.g()).unwrap()));
    c.bench_function("bundle/prolonged-action", |b| b.iter(|| bundle.prolonged_action(&p, &k).unwrap()));
    c.bench_function("bundle/are-equivalent", |b| b.iter(|| bundle.are_equivalent(&p, &q)));
    c.bench_function("bundle/canonicalize", |b| b.iter(|| bundle.canonicalize(&q).unwrap()));

    let label = bundle.bundle_projection(&p).unwrap();
    let so3 = bundle.space().big_group().clone();
    c.bench_function("star/infinitesimal-rank-sphere", |b| {
        b.iter(|| infinitesimal_rank(black_box(&label), &so3, 1e-5).unwrap())
    });
}

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify");
    group.sample_size(10);
    for suite in [Suite::ProlongationHomomorphism, Suite::Equivalence] {
        let options = VerifyOptions::new("sphere", suite, 100, 3);
        group.bench_function(suite.name(), |b| b.iter(|| verify(&options).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, lie, bundle, suites);
criterion_main!(benches);
