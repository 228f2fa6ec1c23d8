//! Acceptance suite: every headline claim of the engine, pinned at its
//! stated tolerance, one test per criterion with a printed verdict line.
//!
//! Runtime limits are asserted against the optimized build; unoptimized
//! builds (debug assertions on) get a fixed grace factor so `cargo test`
//! stays meaningful in either profile.

use g2kummer_core::contraction::ContractionFamily;
use g2kummer_core::crystal::Crystal;
use g2kummer_core::dolbeault::{star_identity_suite, BlockModel, StarOmega};
use g2kummer_core::flatfam::{deep_tube_grid, tube_grid, ChartPoint, FlatFamily};
use g2kummer_core::g2::G2Model;
use g2kummer_core::linalg;
use g2kummer_core::monodromy::{
    eigen_multiset_b, family_at_angle, family_exact, invariant_subspace,
    nondegeneracy_constant, reference_invariant_vector, stacked_sigma_min, theta_grid,
    verify_descends, InvariantSpace,
};
use g2kummer_core::quiver::{
    is_generic, is_generic_recursive, lift_criterion, solve_moment, QuiverRep, StabilityParam,
};
use g2kummer_core::rational::{rat_frac, Rat};
use g2kummer_core::semilinear::C64;
use g2kummer_core::spectral::{
    z2_eigenvalue_on_kernel, OperatorBlock, SpectralOperator, TwistedModeBasis,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::{Mutex, MutexGuard};
use std::time::Instant;

/// The runtime limits are per criterion; run them one at a time regardless
/// of the harness thread count so wall-clock measurements are honest.
static SERIAL: Mutex<()> = Mutex::new(());

fn serial() -> MutexGuard<'static, ()> {
    SERIAL.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn time_limit(seconds: f64) -> f64 {
    if cfg!(debug_assertions) {
        seconds * 4.0
    } else {
        seconds
    }
}

fn verdict(criterion: &str, pass: bool, elapsed: f64, limit: f64) {
    let mark = if pass && elapsed <= limit { "PASS" } else { "FAIL" };
    println!("[{mark}] {criterion} ({elapsed:.2}s, limit {limit:.0}s)");
    assert!(pass, "{criterion} failed");
    assert!(elapsed <= limit, "{criterion} exceeded {limit}s: {elapsed:.2}s");
}

/// Sixteen θ samples off the real axis (and with θ⁴ ≠ 1).
fn sixteen_thetas() -> Vec<f64> {
    theta_grid(16)
}

#[test]
fn criterion_01_presentation_and_quotient() {
    let _guard = serial();
    let t0 = Instant::now();
    let c = Crystal::builtin();
    let report = c.verify_presentation();
    let classes = c.quotient_enumerate().expect("enumeration");
    let pass = report.all_pass() && report.count() >= 27 && classes.len() == 56;
    verdict(
        "criterion 1: presentation relations exact and quotient order 56",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(1.0),
    );
}

#[test]
fn criterion_02_representation_family() {
    let _guard = serial();
    let t0 = Instant::now();
    let c = Crystal::builtin();
    let mut pass = true;
    for f in theta_grid(64) {
        let p = family_at_angle(f);
        let checks = verify_descends(&p, &c, false).expect("descends");
        pass &= checks.iter().all(|x| x.holds);
        // eigenvalue multiset {1×6, −1×4, θ×2, θ̄×2}
        let multi = eigen_multiset_b(&p).expect("multiset");
        let find = |z: C64| multi.iter().find(|(l, _)| (*l - z).norm() < 1e-9).map(|x| x.1);
        pass &= find(C64::new(1.0, 0.0)) == Some(6)
            && find(C64::new(-1.0, 0.0)) == Some(4)
            && find(p.theta) == Some(2)
            && find(p.theta.conj()) == Some(2);
    }
    // exact verification at θ = i and θ = ζ₇
    for (k, n) in [(1i64, 4u32), (1, 7)] {
        let p = family_exact(k, n);
        let checks = verify_descends(&p, &c, true).expect("exact descends");
        pass &= checks.iter().all(|x| x.holds && x.exact);
    }
    verdict(
        "criterion 2: θ-family descends on the 64-grid and exactly at i, ζ₇; eigen multiset 6/4/2/2",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(5.0),
    );
}

#[test]
fn criterion_03_invariant_dimensions() {
    let _guard = serial();
    let t0 = Instant::now();
    let c = Crystal::builtin();
    let reference = reference_invariant_vector();
    let mut pass = true;
    for f in sixteen_thetas() {
        let p = family_at_angle(f);
        let adj = invariant_subspace(&p, &c, InvariantSpace::Adjoint).expect("adjoint");
        let one = invariant_subspace(&p, &c, InvariantSpace::OneFormAdjoint).expect("tensor");
        pass &= adj.basis.is_empty();
        pass &= one.basis.len() == 1
            && linalg::angle_mod_sign(&one.basis[0], &reference) < 1e-8;
    }
    let at_one = invariant_subspace(&family_at_angle(0.0), &c, InvariantSpace::Adjoint)
        .expect("θ = 1 adjoint");
    pass &= !at_one.basis.is_empty();
    verdict(
        "criterion 3: invariant dims (0, 1) with the stated generator off the real axis; jump at θ = 1",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(30.0),
    );
}

#[test]
fn criterion_04_spectral_oracle_agreement() {
    let _guard = serial();
    let t0 = Instant::now();
    let c = Crystal::builtin();
    let model = G2Model::new(&c).expect("model");
    let mut pass = true;
    for (i, f) in sixteen_thetas().into_iter().enumerate() {
        let p = family_at_angle(f);
        let basis = TwistedModeBasis::new(&c, &p, &model).expect("mode basis");
        // deeper truncation on one sample guards the assembly; kernel claims
        // hold from the zero modes on for flat data
        let n = if i == 0 { 2 } else { 1 };
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, n);
        let opstar = SpectralOperator::assemble(&basis, OperatorBlock::Adjoint, 1);
        let sections = SpectralOperator::assemble(&basis, OperatorBlock::Sections, 1);
        let alg_adj =
            invariant_subspace(&p, &c, InvariantSpace::Adjoint).expect("adjoint").basis.len();
        let alg_one = invariant_subspace(&p, &c, InvariantSpace::OneFormAdjoint)
            .expect("tensor")
            .basis
            .len();
        pass &= op.kernel_dim(1e-8) == 1 && op.kernel_dim(1e-8) == alg_one;
        pass &= opstar.kernel_dim(1e-8) == 1;
        pass &= sections.kernel_dim(1e-8) == 0 && sections.kernel_dim(1e-8) == alg_adj;
        let z2 = z2_eigenvalue_on_kernel(&basis, &opstar, 1e-8);
        pass &= matches!(z2, Some(l) if (l + 1.0).abs() < 1e-8);
    }
    verdict(
        "criterion 4: spectral kernel/cokernel dims equal algebraic fixed points; ℤ₂ acts by −1 on the cokernel",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(60.0),
    );
}

#[test]
fn criterion_05_flat_family_checks() {
    let _guard = serial();
    let t0 = Instant::now();
    let fam = FlatFamily::new(0.25).expect("family");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = 0.7;
    let tube = tube_grid(fam.cutoff.kappa, &mut rng);
    let pts: Vec<ChartPoint> = tube.iter().map(|&(s, z)| ChartPoint::Tube { s, z }).collect();
    let bracket = fam.curvature_bracket_max(f, &pts);
    let r1 = fam.curvature_fd_residual(f, 5e-5, &tube);
    let r2 = fam.curvature_fd_residual(f, 2.5e-5, &tube);
    let r3 = fam.curvature_fd_residual(f, 1.25e-5, &tube);
    let ratios_ok = (r1 / r2 - 4.0).abs() < 0.5 && (r2 / r3 - 4.0).abs() < 0.5;
    let deep = deep_tube_grid(fam.cutoff.kappa, &mut rng);
    let deep_resid = fam.deep_tube_residual(f, &deep);
    let deep_small: Vec<(f64, [f64; 6])> = deep
        .iter()
        .filter(|(_, z)| z.iter().map(|x| x * x).sum::<f64>().sqrt() < 0.4 * fam.cutoff.kappa)
        .cloned()
        .collect();
    let mut dil: f64 = 0.0;
    for lambda in [1.5, 2.0, 3.0] {
        dil = dil.max(fam.dilation_residual(f, lambda, &deep_small));
    }
    let z2 = fam.z2_invariance_residual(f, &tube);
    let pass =
        bracket == 0.0 && ratios_ok && deep_resid < 1e-12 && dil < 1e-12 && z2 < 1e-10;
    verdict(
        "criterion 5: curvature bracket exactly zero, dA residual O(h²), deep-tube form, dilation and ℤ₂ invariance",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(30.0),
    );
}

#[test]
fn criterion_06_non_tangency() {
    let _guard = serial();
    let t0 = Instant::now();
    let fam = FlatFamily::new(0.25).expect("family");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let coclosed = fam.harmonic_coclosure_residual();
    let norm2 = fam.harmonic_norm_squared();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let pairing = fam.nontangency_pairing(0.7, &mut rng, 3).expect("pairing");
        worst = worst.max(pairing.abs());
    }
    let pass = coclosed == 0.0 && norm2 > 0.0 && (norm2 - 7.0).abs() < 1e-12 && worst < 1e-6;
    verdict(
        "criterion 6: derivative's constant part is coclosed, has norm² = 7, and is L²-orthogonal to 50 exact directions",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(30.0),
    );
}

#[test]
fn criterion_07_dolbeault_suite() {
    let _guard = serial();
    let t0 = Instant::now();
    let star = StarOmega::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let report = star_identity_suite(&star, 1000, &mut rng).expect("star identities");
    let mut pass = report.iter().all(|(_, r)| *r < 1e-12);
    let model = BlockModel::new().expect("block model");
    let mut conj_worst: f64 = 0.0;
    let mut fact_worst: f64 = 0.0;
    for sigma in -2i64..=2 {
        for _ in 0..40 {
            let nu: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-2i64..=2) as f64);
            let block = model.block_operator(sigma as f64, &nu);
            let conj = model.conjugated_de_rham(sigma as f64, &nu);
            conj_worst = conj_worst.max((block - conj).map(|x| x.norm()).max());
            fact_worst = fact_worst.max(model.factorization_residual(sigma as f64, &nu));
        }
    }
    pass &= conj_worst < 1e-10 && fact_worst < 1e-10;
    verdict(
        "criterion 7: star identities to 1e−12; block operator matches conjugated de Rham and L L* = −∂s² + 2Δ to 1e−10",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(60.0),
    );
}

#[test]
fn criterion_08_contraction_lemma() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let affine = ContractionFamily::new(1, f64::INFINITY, 0.5, |f, b| {
        DVector::from_vec(vec![b[0] / 2.0 + f])
    });
    let cosine = ContractionFamily::new(1, f64::INFINITY, 1.0 / 3.0, |f, b| {
        DVector::from_vec(vec![(b[0].cos() + f) / 3.0])
    });
    let coupled = ContractionFamily::new(2, f64::INFINITY, 0.55, |f, b| {
        DVector::from_vec(vec![0.4 * (b[1] + f).sin(), 0.4 * (b[0] - 2.0 * f).cos()])
    });
    let mut pass = true;
    for fam in [&affine, &cosine, &coupled] {
        for f in [0.25, 1.3] {
            let analytic = fam.fix_derivative(f, 1e-13).expect("derivative");
            let fd = fam.fix_derivative_fd(f, 1e-13, 1e-5).expect("fd");
            pass &= (analytic.clone() - &fd).norm() / fd.norm().max(1e-12) < 1e-6;
            let c = fam
                .measure_constant(f, 1000, &mut rng)
                .max(fam.fix_point(f, 1e-13).expect("fix").measured_constant);
            let df = fam.parameter_derivative_norm(f, 1e-13).expect("param norm");
            pass &= c < 1.0 && analytic.norm() <= (1.0 - c).recip() * df + 1e-9;
        }
    }
    verdict(
        "criterion 8: fixed-point derivative matches finite differences and obeys the (1−c)⁻¹ bound",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(5.0),
    );
}

#[test]
fn criterion_09_quiver_quotient() {
    let _guard = serial();
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pass = true;
    // genericity against the independent oracle on 10⁴ random parameters
    for _ in 0..10_000 {
        let mut v: Vec<Rat> = (0..6)
            .map(|_| rat_frac(rng.gen_range(-255i64..=255), rng.gen_range(1i64..=16)))
            .collect();
        let last = -v.iter().sum::<Rat>();
        v.push(last);
        let zeta = StabilityParam::new(std::array::from_fn(|i| v[i].clone())).unwrap();
        pass &= is_generic(&zeta) == is_generic_recursive(&zeta);
    }
    // the optimizer reaches both residuals below 1e−8 within 10⁴ iterations
    let zeta = StabilityParam::new([
        rat_frac(1, 10),
        rat_frac(1, 10),
        rat_frac(1, 10),
        rat_frac(1, 10),
        rat_frac(1, 10),
        rat_frac(1, 10),
        rat_frac(-6, 10),
    ])
    .unwrap();
    let seed = {
        let mut s = QuiverRep::orbit_model([
            C64::new(0.7, 0.1),
            C64::new(0.2, -0.3),
            C64::new(0.1, 0.4),
        ]);
        for j in 0..3 {
            for q in 0..7 {
                s.entries[j][q] +=
                    C64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            }
        }
        s
    };
    let (_, diag) = solve_moment(&zeta, &seed, 10_000);
    pass &= diag.converged
        && diag.moment_residual < 1e-8
        && diag.commutation_residual < 1e-8
        && diag.iterations <= 10_000;
    // central inversion fixes every stability parameter
    let minus_id = -DMatrix::<C64>::identity(3, 3);
    for _ in 0..100 {
        let mut v: Vec<Rat> =
            (0..6).map(|_| rat_frac(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=8))).collect();
        let last = -v.iter().sum::<Rat>();
        v.push(last);
        let z = StabilityParam::new(std::array::from_fn(|i| v[i].clone())).unwrap();
        pass &= lift_criterion(&minus_id, &z).unwrap_or(false);
    }
    verdict(
        "criterion 9: genericity matches the exhaustive oracle on 10⁴ samples; moment solve converges; −id always lifts",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(120.0),
    );
}

#[test]
fn criterion_10_nondegeneracy_constants() {
    let _guard = serial();
    let t0 = Instant::now();
    let c = Crystal::builtin();
    let mut pass = true;
    // finite on a compact grid away from the degenerate parameters
    for k in 0..8 {
        let f = 0.3 + 2.5 * k as f64 / 7.0;
        match nondegeneracy_constant(&family_at_angle(f), &c) {
            Ok(v) => pass &= v.is_finite() && v > 0.0,
            Err(_) => pass = false,
        }
    }
    // divergence within |f| < 1e−2 of the origin: σ_min < 1e−3, decreasing
    let mut sigmas = Vec::new();
    for f in [1e-2, 1e-3, 1e-4] {
        sigmas.push(stacked_sigma_min(&family_at_angle(f), &c).expect("σ"));
    }
    pass &= sigmas.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-3;
    pass &= sigmas.windows(2).all(|w| w[1] < w[0]);
    verdict(
        "criterion 10: nondegeneracy constant finite on the compact grid, divergent at the origin",
        pass,
        t0.elapsed().as_secs_f64(),
        time_limit(30.0),
    );
}
