use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fibercalc::catalog::lookup;
use fibercalc::{canonical_form, compute_invariants, dedekind_sum, dedekind_sum_direct, dual_fiber, enumerate_fibers, SearchBounds};

fn arithmetic(c: &mut Criterion) {
    c.bench_function("dedekind_sum 99991/100003", |b| {
        b.iter(|| dedekind_sum(black_box(99_991), black_box(100_003)).unwrap())
    });
    c.bench_function("dedekind_sum_direct 17/1009", |b| {
        b.iter(|| dedekind_sum_direct(black_box(17), black_box(1009)).unwrap())
    });
}

fn fibers(c: &mut Criterion) {
    let e1 = lookup("thm1.3/1").unwrap().graph;
    let e9 = lookup("thm1.3/9").unwrap().graph;
    let ii_star = lookup("kodaira/II*").unwrap().graph;
    c.bench_function("canonical_form II*", |b| b.iter(|| canonical_form(black_box(&ii_star))));
    c.bench_function("compute_invariants entry 1", |b| b.iter(|| compute_invariants(black_box(&e1)).unwrap()));
    c.bench_function("dual_fiber entry 9", |b| b.iter(|| dual_fiber(black_box(&e9), None).unwrap()));
}

fn search(c: &mut Criterion) {
    let bounds = SearchBounds::new(2..=2, 6, 6);
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("g=2 V<=6 mult<=6", |b| b.iter(|| enumerate_fibers(black_box(&bounds)).unwrap()));
    g.finish();
}

criterion_group!(benches, arithmetic, fibers, search);
criterion_main!(benches);
