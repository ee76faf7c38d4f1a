use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use svcert_bench::{line_times_plane, random_int_matrix, sextic_veronese_surface, two_cubes};
use svcert_core::{contact, embedding, multiindex, terracini, AffinePoint};

fn bench_exact_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("exact_rank");
    for (rows, cols) in [(12, 16), (30, 36), (54, 56)] {
        let m = random_int_matrix(1, rows, cols, 50);
        group.bench_function(format!("{rows}x{cols}"), |b| {
            b.iter(|| black_box(m.rank()));
        });
    }
    group.finish();
}

fn bench_kernel_basis(c: &mut Criterion) {
    let m = random_int_matrix(2, 12, 72, 50);
    c.bench_function("kernel_basis_12x72", |b| {
        b.iter(|| black_box(m.kernel_basis()));
    });
}

fn bench_enumeration(c: &mut Criterion) {
    let fmt = two_cubes();
    c.bench_function("index_tuples_two_cubes", |b| {
        b.iter(|| black_box(fmt.index_tuples().unwrap().len()));
    });
    c.bench_function("ball_radius_2_two_cubes", |b| {
        let center = fmt.diagonal_tuple(0).unwrap();
        b.iter(|| black_box(multiindex::ball(&center, 2, &fmt).unwrap().len()));
    });
}

fn bench_terracini(c: &mut Criterion) {
    let fmt = sextic_veronese_surface();
    let cfg = terracini::sample_config(&fmt, 9, 0).unwrap();
    c.bench_function("terracini_rank_v26_h9", |b| {
        b.iter(|| black_box(terracini::terracini_rank(&fmt, &cfg).unwrap()));
    });
}

fn bench_osculating(c: &mut Criterion) {
    let fmt = two_cubes();
    let cfg = terracini::sample_config(&fmt, 1, 0).unwrap();
    let p: &AffinePoint = &cfg.points()[0];
    c.bench_function("osculating_order_2_two_cubes", |b| {
        b.iter(|| black_box(embedding::osculating_cone_basis(&fmt, p, 2).unwrap().rank()));
    });
}

fn bench_contact_checks(c: &mut Criterion) {
    let fmt = line_times_plane();
    c.bench_function("hs_twd_line_times_plane_s6", |b| {
        b.iter(|| black_box(contact::hs_twd_check(&fmt, 1, 6, 0, 1).unwrap().certified()));
    });
    let v26 = sextic_veronese_surface();
    c.bench_function("wd_attempt_v26_h9", |b| {
        b.iter(|| black_box(contact::wd_check(&v26, 9, 0, 1).unwrap().kernel_dims.len()));
    });
}

criterion_group!(
    benches,
    bench_exact_rank,
    bench_kernel_basis,
    bench_enumeration,
    bench_terracini,
    bench_osculating,
    bench_contact_checks
);
criterion_main!(benches);
