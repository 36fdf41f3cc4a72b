use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpinj::classifier::classify_all;
use fpinj::homology::ext;
use fpinj::purity::is_pure_rep_ses;
use fpinj::zn::{hom_group, present};
use fpinj_bench::{modulus, rep_pair, rep_ses, square_matrix};
use std::hint::black_box;

fn presentations(c: &mut Criterion) {
    let mut g = c.benchmark_group("present");
    for n in [8u64, 36, 720] {
        for size in [4usize, 8, 16] {
            let md = modulus(n);
            let a = square_matrix(7, size, n);
            g.bench_with_input(BenchmarkId::new(format!("Z/{n}"), size), &a, |b, a| {
                b.iter(|| present(&md, black_box(a)))
            });
        }
    }
    g.finish();
}

fn hom_groups(c: &mut Criterion) {
    let md = modulus(36);
    let m = present(&md, &square_matrix(1, 6, 36)).module;
    let n = present(&md, &square_matrix(2, 6, 36)).module;
    c.bench_function("hom_group Z/36 rank 6", |b| b.iter(|| hom_group(black_box(&m), black_box(&n))));
}

fn representations(c: &mut Criterion) {
    let md = modulus(4);
    let mut g = c.benchmark_group("representations");
    for v in [3usize, 5] {
        let (x, y) = rep_pair(11, v, &md);
        g.bench_with_input(BenchmarkId::new("ext1", v), &(x.clone(), y), |b, (x, y)| b.iter(|| ext(x, y, 1)));
        g.bench_with_input(BenchmarkId::new("classify_all", v), &x, |b, x| b.iter(|| classify_all(x, false)));
        let eta = rep_ses(13, v, &md);
        g.bench_with_input(BenchmarkId::new("purity", v), &eta, |b, eta| b.iter(|| is_pure_rep_ses(eta)));
    }
    g.finish();
}

criterion_group!(benches, presentations, hom_groups, representations);
criterion_main!(benches);
