use criterion::{black_box, criterion_group, criterion_main, Criterion};

use qlab::{reduced_homology, smith_normal_form};
use qlab_bench::{boundary, commuting_complex, commuting_graph};

fn graphs(c: &mut Criterion) {
    c.bench_function("commuting graph Σ11 p=2 a=2", |b| {
        b.iter(|| commuting_graph(black_box(11), 2, 2))
    });
    c.bench_function("commuting graph Σ9 p=3 a=1", |b| {
        b.iter(|| commuting_graph(black_box(9), 3, 1))
    });
}

fn complexes(c: &mut Criterion) {
    c.bench_function("clique complex Σ11 p=2 a=1 d=2", |b| {
        b.iter(|| commuting_complex(black_box(11), 2, 1, 2))
    });
}

fn smith(c: &mut Criterion) {
    let mut group = c.benchmark_group("smith form");
    group.sample_size(10);
    let d7 = boundary(7, 2, 1, 2);
    group.bench_function("∂2 Σ7 p=2 a=1", |b| {
        b.iter(|| smith_normal_form(black_box(&d7), false).unwrap())
    });
    let d11 = boundary(11, 2, 1, 2);
    group.bench_function("∂2 Σ11 p=2 a=1", |b| {
        b.iter(|| smith_normal_form(black_box(&d11), false).unwrap())
    });
    let d11t = boundary(11, 2, 1, 1);
    group.bench_function("∂1 Σ11 p=2 a=1 with transforms", |b| {
        b.iter(|| smith_normal_form(black_box(&d11t), true).unwrap())
    });
    group.finish();
}

fn homology(c: &mut Criterion) {
    let mut group = c.benchmark_group("reduced homology");
    group.sample_size(10);
    let cx = commuting_complex(8, 2, 1, 2);
    group.bench_function("H̃1 Σ8 p=2 a=1", |b| {
        b.iter(|| reduced_homology(black_box(&cx), 1).unwrap())
    });
    group.finish();
}

criterion_group!(benches, graphs, complexes, smith, homology);
criterion_main!(benches);
