//! The verification suites behind each subcommand. Every check records the
//! claim it verifies, the measured numbers, and the tolerance; suites are
//! deterministic given the configuration and seed.

use g2kummer_core::contraction::ContractionFamily;
use g2kummer_core::crystal::Crystal;
use g2kummer_core::dolbeault::{
    hym_predicate, random_primitive_one_one, star_identity_suite, BlockModel, StarOmega,
};
use g2kummer_core::flatfam::{deep_tube_grid, tube_grid, ChartPoint, FlatFamily};
use g2kummer_core::g2::{
    self, insertion_identity_residual, kaehler_form, phi_model, preserves_phi, preserves_psi,
    psi_model, quadratic_term, quotient_rotations, G2Model, LieForm, PointSample,
};
use g2kummer_core::linalg;
use g2kummer_core::monodromy::{
    self, commutant_verdict, eigen_multiset_b, family_at_angle, family_exact,
    invariant_subspace, nondegeneracy_constant, reference_invariant_vector, stacked_sigma_min,
    verify_descends, InvariantSpace,
};
use g2kummer_core::quiver::{
    self, commutation_residual, is_generic, is_generic_recursive, lift_criterion, moment_map,
    solve_moment, QuiverRep, StabilityParam,
};
use g2kummer_core::rational::rat_frac;
use g2kummer_core::semilinear::C64;
use g2kummer_core::spectral::{
    z2_eigenvalue_on_kernel, OperatorBlock, SpectralOperator, TwistedModeBasis,
};
use g2kummer_core::Check;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{RunConfig, ThetaSpec};

fn check_tol(id: &str, anchor: &str, measured: f64, tol: f64) -> Check {
    Check::new(id, anchor, measured <= tol)
        .with_tolerance(tol)
        .with_measured("residual", json!(measured))
}

fn check_eq<T: PartialEq + serde::Serialize>(id: &str, anchor: &str, got: T, expect: T) -> Check {
    Check::new(id, anchor, got == expect)
        .with_measured("got", json!(got))
        .with_measured("expected", json!(expect))
}

pub fn group_suite(_cfg: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let report = c.verify_presentation();
    checks.push(
        Check::new(
            "group.relations",
            "every relation of the presentation holds as an exact matrix identity",
            report.all_pass(),
        )
        .with_measured("relations_checked", json!(report.count()))
        .with_measured(
            "failed",
            json!(report
                .checks
                .iter()
                .filter(|r| !r.holds)
                .map(|r| r.name.clone())
                .collect::<Vec<_>>()),
        ),
    );
    match c.quotient_enumerate() {
        Ok(classes) => {
            checks.push(check_eq(
                "group.quotient_order",
                "the lattice quotient has exactly 56 classes",
                classes.len(),
                56,
            ));
            let id_rot = classes
                .iter()
                .filter(|x| g2kummer_core::rational::mat_is_identity(&x.rotation))
                .count();
            checks.push(check_eq(
                "group.identity_class",
                "exactly one class has identity rotation",
                id_rot,
                1,
            ));
            // normal-form round trip over every class
            let mut ok = true;
            for cls in &classes {
                match c.normal_form(cls) {
                    Ok(nf) => ok &= &c.eval_word(&nf.word()) == cls,
                    Err(_) => ok = false,
                }
            }
            checks.push(Check::new(
                "group.normal_form_round_trip",
                "normal forms evaluate back to their class representatives exactly",
                ok,
            ));
        }
        Err(e) => {
            checks.push(
                Check::new("group.quotient_order", "BFS enumeration", false)
                    .with_measured("error", json!(e.to_string())),
            );
        }
    }
    match c.singular_strata() {
        Ok(strata) => {
            checks.push(check_eq(
                "group.stratum_count",
                "the singular set has one connected component",
                strata.len(),
                1,
            ));
            if let Some(s) = strata.first() {
                checks.push(check_eq(
                    "group.isotropy_order",
                    "the stratum isotropy is cyclic of order seven",
                    s.isotropy_order,
                    7,
                ));
                let angles_expected = vec![rat_frac(1, 7), rat_frac(2, 7), rat_frac(4, 7)];
                checks.push(
                    Check::new(
                        "group.transverse_angles",
                        "transverse rotation angles are (1/7, 2/7, 4/7) of a turn",
                        s.angles == angles_expected,
                    )
                    .with_measured(
                        "angles",
                        json!(s
                            .angles
                            .iter()
                            .map(g2kummer_core::rational::format_rat)
                            .collect::<Vec<_>>()),
                    ),
                );
                checks.push(check_tol(
                    "group.lattice_step",
                    "the lattice step along the axis is √7",
                    (s.lattice_step - 7f64.sqrt()).abs(),
                    1e-12,
                ));
            }
        }
        Err(e) => checks.push(
            Check::new("group.stratum_count", "singular strata", false)
                .with_measured("error", json!(e.to_string())),
        ),
    }
    checks
}

pub fn forms_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xF0);
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let model = match G2Model::new(&c) {
        Ok(m) => m,
        Err(e) => {
            checks.push(
                Check::new("forms.model", "model construction", false)
                    .with_measured("error", json!(e.to_string())),
            );
            return checks;
        }
    };
    checks.push(check_tol(
        "forms.hodge_pair",
        "the coassociative form is the Hodge dual of the associative form",
        model.phi_std.hodge_star().sub(&model.psi_std).norm_max(),
        1e-14,
    ));
    let seven = model.phi_std.wedge(&model.psi_std).coeff(0b1111111);
    checks.push(check_tol(
        "forms.normalization",
        "φ ∧ ψ = 7 vol",
        (seven - 7.0).abs(),
        1e-13,
    ));
    let mut worst: f64 = 0.0;
    match quotient_rotations(&c) {
        Ok(rots) => {
            for r in rots {
                worst = worst.max(model.phi_std.pullback(&r).sub(&model.phi_std).norm_max());
            }
            checks.push(check_tol(
                "forms.group_invariance",
                "the associative form is preserved by all 56 rotation classes",
                worst,
                1e-11,
            ));
        }
        Err(e) => checks.push(
            Check::new("forms.group_invariance", "invariance", false)
                .with_measured("error", json!(e.to_string())),
        ),
    }
    let minus = -DMatrix::<f64>::identity(7, 7);
    let parity = preserves_psi(&model, &minus).unwrap_or(false)
        && !preserves_phi(&model, &minus).unwrap_or(true);
    checks.push(Check::new(
        "forms.stabiliser_parity",
        "central inversion preserves ψ but not φ",
        parity,
    ));
    let mut insertion_worst: f64 = 0.0;
    for _ in 0..1000 {
        let a = g2::random_lie_form(7, 4, 1, &mut rng);
        let xi = g2::random_lie_form(7, 4, 7, &mut rng);
        insertion_worst = insertion_worst.max(insertion_identity_residual(&a, &xi));
    }
    checks.push(check_tol(
        "forms.insertion_identity",
        "insertion against the sharp vector equals the starred bracket",
        insertion_worst,
        1e-12,
    ));
    // quadratic term homogeneity
    let psi = psi_model();
    let p = PointSample {
        a: g2::random_lie_form(7, 4, 1, &mut rng),
        xi: g2::random_lie_form(7, 4, 7, &mut rng),
    };
    let q = quadratic_term(&p, &psi);
    let lam = 1.3;
    let scaled = PointSample { a: p.a.scale(lam), xi: p.xi.scale(lam) };
    let qs = quadratic_term(&scaled, &psi);
    checks.push(check_tol(
        "forms.quadratic_homogeneity",
        "the quadratic term is homogeneous of degree two",
        qs.0.sub(&q.0.scale(lam * lam)).norm_max(),
        1e-12,
    ));
    let q0 = quadratic_term(
        &PointSample { a: LieForm::zero(7, 4), xi: p.xi.clone() },
        &psi,
    );
    checks.push(check_tol(
        "forms.quadratic_vanishes",
        "the quadratic term vanishes at zero one-form input",
        q0.0.norm_max().max(q0.1.norm_max()),
        0.0,
    ));
    let _ = phi_model();
    let _ = kaehler_form(6, 0);
    checks
}

fn resolve_thetas(cfg: &RunConfig) -> Vec<(String, ThetaSpec)> {
    cfg.thetas
        .iter()
        .map(|t| (t.label(), t.clone()))
        .collect()
}

pub fn rep_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let reference = reference_invariant_vector();
    for (label, spec) in resolve_thetas(cfg) {
        match spec {
            ThetaSpec::Exact { k, n } => {
                let p = family_exact(k, n);
                match verify_descends(&p, &c, true) {
                    Ok(rep) => {
                        checks.push(Check::new(
                            format!("rep.descends[{label}]"),
                            "generator images satisfy every relation exactly over the cyclotomic field",
                            rep.iter().all(|x| x.holds),
                        ));
                    }
                    Err(e) => checks.push(
                        Check::new(format!("rep.descends[{label}]"), "exact descent", false)
                            .with_measured("error", json!(e.to_string())),
                    ),
                }
            }
            ThetaSpec::Angle(f) => {
                let p = family_at_angle(f);
                let excluded = (C64::new(f.cos(), f.sin()) - C64::new(1.0, 0.0)).norm() < 1e-6
                    || (C64::new(f.cos(), f.sin()) + C64::new(1.0, 0.0)).norm() < 1e-6;
                match verify_descends(&p, &c, false) {
                    Ok(rep) => {
                        let worst = rep.iter().map(|x| x.residual).fold(0.0, f64::max);
                        checks.push(check_tol(
                            &format!("rep.descends[{label}]"),
                            "generator images satisfy every presentation relation",
                            worst,
                            1e-12,
                        ));
                    }
                    Err(e) => checks.push(
                        Check::new(format!("rep.descends[{label}]"), "descent", false)
                            .with_measured("error", json!(e.to_string())),
                    ),
                }
                if let Ok(multi) = eigen_multiset_b(&p) {
                    let th = p.theta;
                    let find = |z: C64| {
                        multi
                            .iter()
                            .find(|(l, _)| (*l - z).norm() < 1e-9)
                            .map(|x| x.1)
                            .unwrap_or(0)
                    };
                    let expected = find(C64::new(1.0, 0.0)) == 6
                        && find(C64::new(-1.0, 0.0)) == 4
                        && find(th) >= 2
                        && find(th.conj()) >= 2;
                    checks.push(Check::new(
                        format!("rep.eigen_multiset[{label}]"),
                        "eigenvalues of the involution-type image are 1×6, −1×4, θ×2, conj(θ)×2",
                        expected,
                    ));
                }
                if excluded {
                    checks.push(
                        Check::new(
                            format!("rep.invariants[{label}]"),
                            "invariant dimensions (recorded baseline; θ = ±1 excluded from the claims)",
                            true,
                        )
                        .indeterminate()
                        .with_measured("warning", json!("θ on the real axis: dimension claims do not apply")),
                    );
                    continue;
                }
                match (
                    invariant_subspace(&p, &c, InvariantSpace::Adjoint),
                    invariant_subspace(&p, &c, InvariantSpace::OneFormAdjoint),
                ) {
                    (Ok(adj), Ok(one)) => {
                        let angle_ok = one.basis.len() == 1
                            && linalg::angle_mod_sign(&one.basis[0], &reference) < 1e-8;
                        checks.push(check_eq(
                            &format!("rep.adjoint_invariants[{label}]"),
                            "the adjoint action has no invariants off the real axis",
                            adj.basis.len(),
                            0,
                        ));
                        checks.push(Check::new(
                            format!("rep.one_form_invariants[{label}]"),
                            "the tensor action has a single invariant line spanned by Σ eᵢ⊗eᵢ∧fᵢ",
                            angle_ok,
                        ));
                        if !adj.borderline.is_empty() || !one.borderline.is_empty() {
                            checks.push(
                                Check::new(
                                    format!("rep.guard_band[{label}]"),
                                    "singular values inside the guard band are reported",
                                    true,
                                )
                                .indeterminate()
                                .with_measured("borderline", json!(adj.borderline)),
                            );
                        }
                    }
                    _ => checks.push(Check::new(
                        format!("rep.invariants[{label}]"),
                        "invariant subspaces",
                        false,
                    )),
                }
                if let Ok(ct) = nondegeneracy_constant(&p, &c) {
                    checks.push(
                        Check::new(
                            format!("rep.nondegeneracy[{label}]"),
                            "the quantitative constant is finite and positive off the real axis",
                            ct.is_finite() && ct > 0.0,
                        )
                        .with_measured("c_theta", json!(ct)),
                    );
                }
                if let Ok(verdict) = commutant_verdict(&p) {
                    checks.push(Check::new(
                        format!("rep.commutant[{label}]"),
                        "the only orthogonal unit-determinant commutant elements are ±id",
                        verdict,
                    ));
                }
                if let Ok(z2) = monodromy::z2_lift_check(&p, &c) {
                    checks.push(Check::new(
                        format!("rep.z2_lift[{label}]"),
                        "point inversion lifts through componentwise conjugation",
                        z2.all_pass(),
                    ));
                }
            }
        }
    }
    checks
}

pub fn family_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xFA);
    let mut checks = Vec::new();
    let fam = match FlatFamily::new(cfg.kappa) {
        Ok(f) => f,
        Err(e) => {
            checks.push(
                Check::new("family.setup", "family construction", false)
                    .with_measured("error", json!(e.to_string())),
            );
            return checks;
        }
    };
    let f = cfg.family_parameter;
    let samples: Vec<[f64; 7]> =
        (0..100).map(|_| std::array::from_fn(|_| rng.gen_range(-2.0..2.0))).collect();
    match fam.gauge_equivariance_residual(f, &samples) {
        Ok(r) => checks.push(check_tol(
            "family.gauge_equivariance",
            "the unitary gauge intertwines the monodromy endpoints (half-angle convention)",
            r,
            1e-12,
        )),
        Err(e) => checks.push(
            Check::new("family.gauge_equivariance", "gauge", false)
                .with_measured("error", json!(e.to_string())),
        ),
    }
    let deep = deep_tube_grid(fam.cutoff.kappa, &mut rng);
    checks.push(check_tol(
        "family.deep_tube_form",
        "the deep-tube form is (f/√7)·diag(i,i,i,−i,i,i,i)·ds",
        fam.deep_tube_residual(f, &deep),
        1e-12,
    ));
    checks.push(check_tol(
        "family.chart_overlap",
        "bulk and tube chart expressions agree on the overlap annulus",
        fam.chart_overlap_residual(f, 80, &mut rng),
        1e-10,
    ));
    let tube = tube_grid(fam.cutoff.kappa, &mut rng);
    let pts: Vec<ChartPoint> =
        tube.iter().map(|&(s, z)| ChartPoint::Tube { s, z }).collect();
    checks.push(check_tol(
        "family.curvature_bracket",
        "the curvature bracket term vanishes identically for diagonal values",
        fam.curvature_bracket_max(f, &pts),
        0.0,
    ));
    let r1 = fam.curvature_fd_residual(f, 5e-5, &tube);
    let r2 = fam.curvature_fd_residual(f, 2.5e-5, &tube);
    let r3 = fam.curvature_fd_residual(f, 1.25e-5, &tube);
    let ratio_ok = (r1 / r2 - 4.0).abs() < 0.5 && (r2 / r3 - 4.0).abs() < 0.5;
    checks.push(
        Check::new(
            "family.curvature_order",
            "the finite-difference curvature residual is second order in the stencil",
            ratio_ok,
        )
        .with_measured("ratios", json!([r1 / r2, r2 / r3])),
    );
    let deep_small: Vec<(f64, [f64; 6])> = deep
        .iter()
        .filter(|(_, z)| z.iter().map(|x| x * x).sum::<f64>().sqrt() < 0.4 * fam.cutoff.kappa)
        .cloned()
        .collect();
    let mut dil_worst: f64 = 0.0;
    for lambda in [1.5, 2.0, 3.0] {
        dil_worst = dil_worst.max(fam.dilation_residual(f, lambda, &deep_small));
    }
    checks.push(check_tol(
        "family.dilation_invariance",
        "the deep-tube form is invariant under radial dilations",
        dil_worst,
        1e-12,
    ));
    checks.push(check_tol(
        "family.z2_invariance",
        "the family is invariant under point inversion with fiber conjugation",
        fam.z2_invariance_residual(f, &tube),
        1e-10,
    ));
    checks.push(check_tol(
        "family.derivative_decomposition",
        "the parameter derivative splits into the constant form plus an exact potential",
        fam.derivative_decomposition_residual(f, &tube),
        1e-8,
    ));
    checks.push(check_tol(
        "family.harmonic_coclosed",
        "the constant part of the derivative is coclosed",
        fam.harmonic_coclosure_residual(),
        0.0,
    ));
    checks.push(check_tol(
        "family.harmonic_norm",
        "the constant part has norm² = 7 per unit volume",
        (fam.harmonic_norm_squared() - 7.0).abs(),
        1e-12,
    ));
    let mut pairing_worst: f64 = 0.0;
    for _ in 0..cfg.tangency_samples {
        match fam.nontangency_pairing(f, &mut rng, 3) {
            Ok(p) => pairing_worst = pairing_worst.max(p.abs()),
            Err(e) => {
                checks.push(
                    Check::new("family.non_tangency", "pairing", false)
                        .with_measured("error", json!(e.to_string())),
                );
                return checks;
            }
        }
    }
    checks.push(check_tol(
        "family.non_tangency",
        "the derivative's constant part is orthogonal to every exact direction",
        pairing_worst,
        1e-6,
    ));
    let four_pi = 4.0 * std::f64::consts::PI;
    checks.push(check_tol(
        "family.affine_period",
        "the family is affine in the parameter",
        fam.gauge_period_residual(f, four_pi, &pts)
            .max(fam.second_derivative_residual(f, &tube)),
        1e-8,
    ));
    let equiv = fam.monodromies_equivalent(f, f + four_pi).unwrap_or(false)
        && fam.monodromies_equivalent(f, -f).unwrap_or(false)
        && !fam.monodromies_equivalent(f, f + 0.5).unwrap_or(true);
    checks.push(Check::new(
        "family.monodromy_periodicity",
        "monodromy equivalence classes are parameters equal up to sign modulo 4π",
        equiv,
    ));
    checks
}

pub fn dolbeault_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xD0);
    let mut checks = Vec::new();
    let star = StarOmega::new();
    match star_identity_suite(&star, 1000, &mut rng) {
        Ok(report) => {
            for (name, resid) in report {
                let tol = if name.contains("mode identity") { 1e-10 } else { 1e-12 };
                checks.push(check_tol(
                    &format!("dolbeault.star[{}]", name.split(' ').next().unwrap_or("id")),
                    &name,
                    resid,
                    tol,
                ));
            }
        }
        Err(e) => checks.push(
            Check::new("dolbeault.star", "identity suite", false)
                .with_measured("error", json!(e.to_string())),
        ),
    }
    match BlockModel::new() {
        Ok(model) => {
            let n = cfg.modes.max(1);
            let mut conj_worst: f64 = 0.0;
            let mut fact_worst: f64 = 0.0;
            for _ in 0..80 {
                let sigma = rng.gen_range(-n..=n) as f64;
                let nu: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-n..=n) as f64);
                let block = model.block_operator(sigma, &nu);
                let conj = model.conjugated_de_rham(sigma, &nu);
                conj_worst = conj_worst.max((block - conj).map(|x| x.norm()).max());
                fact_worst = fact_worst.max(model.factorization_residual(sigma, &nu));
            }
            checks.push(check_tol(
                "dolbeault.block_identification",
                "the block operator equals the conjugated de Rham operator",
                conj_worst,
                1e-10,
            ));
            checks.push(check_tol(
                "dolbeault.factorization",
                "L L* equals −∂_s² + 2Δ blockwise",
                fact_worst,
                1e-10,
            ));
            checks.push(check_eq(
                "dolbeault.trivial_kernel",
                "with trivial monodromy the kernel is the constant modes with full fiber",
                model.trivial_monodromy_kernel(1),
                8,
            ));
        }
        Err(e) => checks.push(
            Check::new("dolbeault.block_identification", "block model", false)
                .with_measured("error", json!(e.to_string())),
        ),
    }
    let mut hym_ok = true;
    for _ in 0..50 {
        let f6 = random_primitive_one_one(&mut rng);
        hym_ok &= hym_predicate(&f6).map(|v| v == (true, true)).unwrap_or(false);
        let mut f7 = g2kummer_core::g2::Form::zero(7);
        for (mask, c) in f6.terms() {
            f7.add_term(mask << 1, *c);
        }
        hym_ok &= f7.wedge(&psi_model()).norm_max() < 1e-12;
    }
    checks.push(Check::new(
        "dolbeault.hym_instanton",
        "primitive (1,1) curvature samples satisfy both predicate routes and kill ψ",
        hym_ok,
    ));
    checks
}

pub fn spectral_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let model = match G2Model::new(&c) {
        Ok(m) => m,
        Err(e) => {
            checks.push(
                Check::new("spectral.setup", "model", false)
                    .with_measured("error", json!(e.to_string())),
            );
            return checks;
        }
    };
    for (label, spec) in resolve_thetas(cfg) {
        let ThetaSpec::Angle(f) = spec else { continue };
        let th = C64::new(f.cos(), f.sin());
        if (th * th * th * th - C64::new(1.0, 0.0)).norm() < 1e-6 {
            checks.push(
                Check::new(
                    format!("spectral.skipped[{label}]"),
                    "orbit assembly requires θ⁴ ≠ 1",
                    true,
                )
                .indeterminate(),
            );
            continue;
        }
        let p = family_at_angle(f);
        let basis = match TwistedModeBasis::new(&c, &p, &model) {
            Ok(b) => b,
            Err(e) => {
                checks.push(
                    Check::new(format!("spectral.basis[{label}]"), "mode basis", false)
                        .with_measured("error", json!(e.to_string())),
                );
                continue;
            }
        };
        let n = cfg.modes;
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, n);
        let opstar = SpectralOperator::assemble(&basis, OperatorBlock::Adjoint, n);
        let sections = SpectralOperator::assemble(&basis, OperatorBlock::Sections, n);
        let alg_adj = invariant_subspace(&p, &c, InvariantSpace::Adjoint)
            .map(|x| x.basis.len())
            .unwrap_or(usize::MAX);
        let alg_one = invariant_subspace(&p, &c, InvariantSpace::OneFormAdjoint)
            .map(|x| x.basis.len())
            .unwrap_or(usize::MAX);
        checks.push(check_eq(
            &format!("spectral.kernel[{label}]"),
            "the spectral kernel dimension equals the algebraic fixed-point dimension",
            op.kernel_dim(1e-8),
            alg_one,
        ));
        checks.push(check_eq(
            &format!("spectral.cokernel[{label}]"),
            "the adjoint kernel is one-dimensional",
            opstar.kernel_dim(1e-8),
            1,
        ));
        checks.push(check_eq(
            &format!("spectral.sections[{label}]"),
            "the section kernel matches the adjoint invariants (irreducibility)",
            sections.kernel_dim(1e-8),
            alg_adj,
        ));
        let z2 = z2_eigenvalue_on_kernel(&basis, &opstar, 1e-8);
        checks.push(
            Check::new(
                format!("spectral.z2_cokernel[{label}]"),
                "point inversion acts by −1 on the cokernel generator",
                matches!(z2, Some(l) if (l + 1.0).abs() < 1e-8),
            )
            .with_measured("eigenvalue", json!(z2)),
        );
        let localized = op
            .kernel_vectors(1e-8)
            .iter()
            .all(|(nu, _, _)| nu.iter().all(|x| x.abs() < 1e-9));
        checks.push(Check::new(
            format!("spectral.localization[{label}]"),
            "kernel vectors live on the zero-frequency modes",
            localized,
        ));
        let gap = op.spectral_gap(1e-8);
        checks.push(
            Check::new(
                format!("spectral.gap[{label}]"),
                "the spectral gap is positive (recorded as a regression baseline)",
                gap > 0.0 && gap.is_finite(),
            )
            .with_measured("gap", json!(gap)),
        );
    }
    checks
}

pub fn quiver_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x15);
    let mut checks = Vec::new();
    let zeta_gen = StabilityParam::from_i64([1, 1, 1, 1, 1, 1, -6]).unwrap();
    checks.push(Check::new(
        "quiver.generic_example",
        "the all-ones parameter is generic",
        is_generic(&zeta_gen),
    ));
    checks.push(Check::new(
        "quiver.degenerate_examples",
        "zero entries and the zero parameter are non-generic",
        !is_generic(&StabilityParam::from_i64([1, -1, 0, 0, 0, 0, 0]).unwrap())
            && !is_generic(&StabilityParam::from_i64([0; 7]).unwrap()),
    ));
    let mut agree = true;
    let mut generic_count = 0usize;
    for _ in 0..cfg.genericity_samples {
        let mut v: Vec<g2kummer_core::rational::Rat> = (0..6)
            .map(|_| rat_frac(rng.gen_range(-255i64..=255), rng.gen_range(1i64..=16)))
            .collect();
        let last = -v.iter().sum::<g2kummer_core::rational::Rat>();
        v.push(last);
        let zeta = StabilityParam::new(std::array::from_fn(|i| v[i].clone())).unwrap();
        let a = is_generic(&zeta);
        agree &= a == is_generic_recursive(&zeta);
        generic_count += a as usize;
    }
    checks.push(
        Check::new(
            "quiver.genericity_oracle",
            "subset-sum enumeration agrees with the recursive oracle on random parameters",
            agree,
        )
        .with_measured("generic_fraction", json!(generic_count as f64 / cfg.genericity_samples as f64)),
    );
    // the solve at ζ = (1,…,1,−6)/10
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
                s.entries[j][q] += C64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
            }
        }
        s
    };
    let (b, diag) = solve_moment(&zeta, &seed, 10_000);
    checks.push(
        Check::new(
            "quiver.moment_solve",
            "gradient descent reaches both residuals below 1e−8 within the iteration budget",
            diag.converged,
        )
        .with_measured("iterations", json!(diag.iterations))
        .with_measured("moment_residual", json!(diag.moment_residual))
        .with_measured("commutation_residual", json!(diag.commutation_residual)),
    );
    checks.push(
        Check::new(
            "quiver.jacobian_rank",
            "the combined constraint Jacobian has the baseline rank at the solved point",
            quiver::constraint_jacobian_rank(&b, 1e-4) == 30,
        )
        .with_measured("baseline", json!(30)),
    );
    let minus_id = -DMatrix::<C64>::identity(3, 3);
    let mut lift_ok = true;
    for _ in 0..20 {
        let mut v: Vec<g2kummer_core::rational::Rat> =
            (0..6).map(|_| rat_frac(rng.gen_range(-9i64..=9), 1)).collect();
        let last = -v.iter().sum::<g2kummer_core::rational::Rat>();
        v.push(last);
        let z = StabilityParam::new(std::array::from_fn(|i| v[i].clone())).unwrap();
        lift_ok &= lift_criterion(&minus_id, &z).unwrap_or(false);
    }
    checks.push(Check::new(
        "quiver.lift_minus_id",
        "central inversion acts trivially on characters, so every parameter lifts",
        lift_ok,
    ));
    let orbit = QuiverRep::orbit_model([C64::new(0.8, 0.0), C64::new(0.1, 0.2), C64::new(0.0, 0.5)]);
    checks.push(check_tol(
        "quiver.orbit_model",
        "regular-representation orbit models commute with zero moment",
        commutation_residual(&orbit)
            .max(moment_map(&orbit).iter().map(|x| x.abs()).fold(0.0, f64::max)),
        1e-12,
    ));
    let _ = DVector::<f64>::zeros(1);
    checks
}

pub fn contraction_suite(cfg: &RunConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xC0);
    let mut checks = Vec::new();
    // family 1: affine with closed form
    let affine = ContractionFamily::new(1, f64::INFINITY, 0.5, |f, b| {
        DVector::from_vec(vec![b[0] / 2.0 + f])
    });
    let fx = affine.fix_point(0.3, 1e-12);
    let d = affine.fix_derivative(0.3, 1e-12);
    checks.push(Check::new(
        "contraction.affine",
        "the affine family has fixed point 2f and derivative 2",
        matches!((fx, d), (Ok(p), Ok(dv)) if (p.point[0] - 0.6).abs() < 1e-10 && (dv[0] - 2.0).abs() < 1e-7),
    ));
    // family 2 and 3: derivative matches finite differences to relative 1e−6
    let cosine = ContractionFamily::new(1, f64::INFINITY, 1.0 / 3.0, |f, b| {
        DVector::from_vec(vec![(b[0].cos() + f) / 3.0])
    });
    let coupled = ContractionFamily::new(2, f64::INFINITY, 0.55, |f, b| {
        DVector::from_vec(vec![0.4 * (b[1] + f).sin(), 0.4 * (b[0] - 2.0 * f).cos()])
    });
    let mut fd_ok = true;
    let mut bound_ok = true;
    for (name, fam) in [("affine", &affine), ("cosine", &cosine), ("coupled", &coupled)] {
        for f in [0.25, 1.1] {
            let (Ok(an), Ok(fd)) =
                (fam.fix_derivative(f, 1e-13), fam.fix_derivative_fd(f, 1e-13, 1e-5))
            else {
                fd_ok = false;
                continue;
            };
            let rel = (an.clone() - &fd).norm() / fd.norm().max(1e-12);
            fd_ok &= rel < 1e-6;
            let c = fam
                .measure_constant(f, 500, &mut rng)
                .max(fam.fix_point(f, 1e-13).map(|x| x.measured_constant).unwrap_or(1.0));
            let df = fam.parameter_derivative_norm(f, 1e-13).unwrap_or(f64::INFINITY);
            bound_ok &= c < 1.0 && an.norm() <= (1.0 - c).recip() * df + 1e-9;
            let _ = name;
        }
    }
    checks.push(Check::new(
        "contraction.derivative_fd",
        "the fixed-point derivative matches finite differences to relative 1e−6",
        fd_ok,
    ));
    checks.push(Check::new(
        "contraction.derivative_bound",
        "the derivative obeys the (1 − c)⁻¹ bound with measured constants",
        bound_ok,
    ));
    checks
}

pub fn poincare_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let (Ok(model), Ok(fam)) = (G2Model::new(&c), FlatFamily::new(cfg.kappa)) else {
        return vec![Check::new("family.poincare", "setup", false)];
    };
    let p = family_at_angle(1.3);
    let Ok(basis) = TwistedModeBasis::new(&c, &p, &model) else {
        return vec![Check::new("family.poincare", "mode basis", false)];
    };
    let mut values = Vec::new();
    for rho in [cfg.kappa / 8.0, cfg.kappa / 4.0, cfg.kappa / 2.0] {
        match fam.poincare_sigma_min(&basis, rho, 2) {
            Ok(s) => values.push(s),
            Err(e) => {
                checks.push(
                    Check::new("family.poincare", "discrete constant", false)
                        .with_measured("error", json!(e.to_string())),
                );
                return checks;
            }
        }
    }
    let spread = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - values.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(
        Check::new(
            "family.poincare",
            "the discrete section operator has positive smallest singular value, stable across tube radii",
            values.iter().all(|s| *s > 0.0) && spread < 0.5 * values[0].max(1e-12) + 1e-9,
        )
        .with_measured("sigma_min", json!(values)),
    );
    checks
}

/// The nondegeneracy-constant sweep (finite on a compact grid, divergent at
/// the real axis), recorded as baselines.
pub fn constants_checks(cfg: &RunConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    let c = Crystal::builtin();
    let mut finite_ok = true;
    let mut values = Vec::new();
    for k in 0..8 {
        let f = 0.3 + 2.5 * k as f64 / 7.0;
        match nondegeneracy_constant(&family_at_angle(f), &c) {
            Ok(v) => {
                finite_ok &= v.is_finite() && v > 0.0;
                values.push(v);
            }
            Err(_) => finite_ok = false,
        }
    }
    checks.push(
        Check::new(
            "constants.finite_grid",
            "the nondegeneracy constant is finite on a compact grid away from the real axis",
            finite_ok,
        )
        .with_measured("values", json!(values)),
    );
    let mut near = Vec::new();
    for f in [1e-2, 1e-3, 1e-4] {
        if let Ok(s) = stacked_sigma_min(&family_at_angle(f), &c) {
            near.push(s);
        }
    }
    let divergent =
        near.iter().cloned().fold(f64::INFINITY, f64::min) < 1e-3 && near.windows(2).all(|w| w[1] < w[0]);
    checks.push(
        Check::new(
            "constants.divergence_at_origin",
            "σ_min collapses below 1e−3 within 1e−2 of the degenerate parameter",
            divergent,
        )
        .with_measured("sigma_min", json!(near)),
    );
    let _ = cfg;
    checks
}
