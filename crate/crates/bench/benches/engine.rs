use criterion::{criterion_group, criterion_main, Criterion};
use g2kummer_core::crystal::Crystal;
use g2kummer_core::g2::G2Model;
use g2kummer_core::monodromy::{family_at_angle, invariant_subspace, InvariantSpace};
use g2kummer_core::spectral::{OperatorBlock, SpectralOperator, TwistedModeBasis};

fn bench_quotient_enumeration(c: &mut Criterion) {
    let crystal = Crystal::builtin();
    c.bench_function("quotient_enumerate_56", |b| {
        b.iter(|| crystal.quotient_enumerate().unwrap().len())
    });
}

fn bench_presentation(c: &mut Criterion) {
    let crystal = Crystal::builtin();
    c.bench_function("verify_presentation_exact", |b| {
        b.iter(|| crystal.verify_presentation().all_pass())
    });
}

fn bench_invariant_svd(c: &mut Criterion) {
    let crystal = Crystal::builtin();
    let point = family_at_angle(0.7);
    let mut group = c.benchmark_group("invariants");
    group.sample_size(10);
    group.bench_function("one_form_adjoint_637", |b| {
        b.iter(|| {
            invariant_subspace(&point, &crystal, InvariantSpace::OneFormAdjoint)
                .unwrap()
                .basis
                .len()
        })
    });
    group.finish();
}

fn bench_spectral_assembly(c: &mut Criterion) {
    let crystal = Crystal::builtin();
    let model = G2Model::new(&crystal).unwrap();
    let point = family_at_angle(0.7);
    let basis = TwistedModeBasis::new(&crystal, &point, &model).unwrap();
    let mut group = c.benchmark_group("spectral");
    group.sample_size(10);
    group.bench_function("assemble_linearised_n1", |b| {
        b.iter(|| {
            SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1).kernel_dim(1e-8)
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_quotient_enumeration,
    bench_presentation,
    bench_invariant_svd,
    bench_spectral_assembly
);
criterion_main!(benches);
