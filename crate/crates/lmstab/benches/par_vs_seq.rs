//! Compares the rayon data-parallel paths against the sequential fallback:
//! the twisted-sections window of a kernel module and a batch of
//! certifications. Build with default features so both paths exist.

use criterion::{criterion_group, criterion_main, Criterion};
use lmstab::certify::{certify, CertifyOptions, CertifyTarget, Status};
use lmstab::field::FieldSpec;
use lmstab::lm;

const GF: FieldSpec = FieldSpec::Fp(32003);

fn bench_h0_window(c: &mut Criterion) {
    let inst = lm::sample_lm(GF, 2, 3, 1, 2, 7).expect("sampling succeeds");
    let mut group = c.benchmark_group("h0_window");
    group.bench_function("seq", |b| b.iter(|| inst.kernel.h0_window_seq(0, 10)));
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| b.iter(|| inst.kernel.h0_window_par(0, 10)));
    group.finish();
}

fn certify_one(seed: u64) -> Status {
    let inst = lm::sample_lm(GF, 2, 2, 1, 2, seed).expect("sampling succeeds");
    certify(CertifyTarget::Lm(&inst), &CertifyOptions::default())
        .expect("certification succeeds")
        .status
}

fn bench_batch_certify(c: &mut Criterion) {
    let seeds: Vec<u64> = (0..8).collect();
    let mut group = c.benchmark_group("batch_certify");
    group.sample_size(10);
    group.bench_function("seq", |b| {
        b.iter(|| lmstab::par::map_seq(seeds.clone(), certify_one))
    });
    #[cfg(feature = "parallel")]
    group.bench_function("par", |b| {
        b.iter(|| lmstab::par::map_par(seeds.clone(), certify_one))
    });
    group.finish();
}

criterion_group!(benches, bench_h0_window, bench_batch_certify);
criterion_main!(benches);
