use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ruledsurf::{
    canonical_code, catalog, confluence_oracle, contract_canonically, reverse, standardize,
    WeightedGraph, Zigzag,
};

fn bench_canonical(c: &mut Criterion) {
    let e = catalog::danilov_gizatullin(7, 3);
    let g = e.graph().clone();
    c.bench_function("canonical_code dg(7,3)", |b| b.iter(|| canonical_code(black_box(&g))));
}

fn bench_standardize(c: &mut Criterion) {
    let g = WeightedGraph::chain(&[1, 0, -3, -1, -2]);
    c.bench_function("standardize [[1,0,-3,-1,-2]]", |b| b.iter(|| standardize(black_box(&g))));
    let g = WeightedGraph::chain(&[0, 0, -3, 1]);
    c.bench_function("confluence_oracle [[0,0,-3,1]]", |b| {
        b.iter(|| confluence_oracle(black_box(&g), 3, 10))
    });
}

fn bench_reverse(c: &mut Criterion) {
    let z = Zigzag::new(vec![0, 0, -2, -3, -4, -5, -2, -3]).unwrap();
    c.bench_function("reverse length 8", |b| b.iter(|| reverse(black_box(&z))));
}

fn bench_contraction(c: &mut Criterion) {
    let e = catalog::danilov_gizatullin(7, 3);
    c.bench_function("contract_canonically dg(7,3)", |b| {
        b.iter(|| contract_canonically(black_box(&e)))
    });
}

criterion_group!(benches, bench_canonical, bench_standardize, bench_reverse, bench_contraction);
criterion_main!(benches);
