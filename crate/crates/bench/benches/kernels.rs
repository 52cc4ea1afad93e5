use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_rational::Rational64;

use ldpclab::ensembles::sample_ldpc;
use ldpclab::fourier::{fourier_transform, ComplexDistribution};
use ldpclab::gvdistance::phi;
use ldpclab::linalg::rref;
use ldpclab::{FieldSpec, LdpcEnsembleParams, RowDistribution};

fn field_mul(c: &mut Criterion) {
    let f = FieldSpec::new(2, 8).unwrap();
    c.bench_function("gf256_mul_all_pairs", |b| {
        b.iter(|| {
            let mut acc = 0u32;
            for x in 0..256 {
                for y in 0..256 {
                    acc ^= f.mul(black_box(x), y);
                }
            }
            acc
        })
    });
}

fn linear_algebra(c: &mut Criterion) {
    let f = FieldSpec::new(3, 1).unwrap();
    let params = LdpcEnsembleParams::new(&f, 120, 6, Rational64::new(1, 2)).unwrap();
    let h = sample_ldpc(&params, 1).parity_check().clone();
    c.bench_function("rref_f3_60x120", |b| b.iter(|| rref(black_box(&h))));

    let f2 = FieldSpec::new(2, 1).unwrap();
    let small = LdpcEnsembleParams::new(&f2, 32, 4, Rational64::new(1, 2)).unwrap();
    let code = sample_ldpc(&small, 2);
    c.bench_function("min_distance_f2_n32_k16", |b| b.iter(|| black_box(&code).min_distance().unwrap()));
}

fn transforms(c: &mut Criterion) {
    let f = FieldSpec::new(2, 2).unwrap();
    let third = Rational64::new(1, 3);
    let tau = RowDistribution::new(&f, 3, vec![(vec![1, 0, 2], third), (vec![0, 3, 1], third), (vec![2, 2, 0], third)]).unwrap();
    let p = ComplexDistribution::from_row_distribution(&tau).unwrap();
    c.bench_function("fourier_f4_ell3", |b| b.iter(|| fourier_transform(black_box(&p)).unwrap()));
    c.bench_function("phi_grid_q2_s6", |b| {
        b.iter(|| (1..50).map(|i| phi(i as f64 / 100.0, 2, 6).unwrap().0).sum::<f64>())
    });
}

criterion_group!(benches, field_mul, linear_algebra, transforms);
criterion_main!(benches);
