use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use ontomvn_bench::{perturbed, taxonomy};
use ontomvn_core::ontology::{parse_ontology, serialize_ontology};
use ontomvn_core::reasoner::classify_ontology;
use ontomvn_core::versioning::semantic_diff;

fn classification(c: &mut Criterion) {
    let mut group = c.benchmark_group("classify");
    for n in [50, 200, 800] {
        let o = taxonomy(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &o, |b, o| {
            b.iter(|| classify_ontology(black_box(o)).unwrap())
        });
    }
    group.finish();
}

fn diff(c: &mut Criterion) {
    let base = taxonomy(200);
    let working = perturbed(&base);
    c.bench_function("semantic_diff/200", |b| {
        b.iter(|| semantic_diff(black_box(&working), black_box(&base)))
    });
}

fn round_trip(c: &mut Criterion) {
    let text = serialize_ontology(&taxonomy(800));
    c.bench_function("parse/800", |b| b.iter(|| parse_ontology(black_box(&text)).unwrap()));
}

criterion_group!(benches, classification, diff, round_trip);
criterion_main!(benches);
