//! The ℂ³/ℤ₇ Kähler-quotient scaffolding: equivariant representation
//! triples, the commuting-variety constraint, moment-map residual
//! minimization, exact genericity of stability parameters, and the
//! normalizer lift criterion.
//!
//! The cyclic group acts on ℂ³ with characters (1, 2, 4) mod 7; an
//! equivariant triple B = (B₁, B₂, B₃) of 7×7 matrices has (B_j)_{pq} ≠ 0
//! only for p ≡ q + w_j, so each matrix carries exactly seven free complex
//! entries. The moment map μ(B)_k = ½ Σ_j [B_j, B_j†]_{kk}, trace-projected,
//! is a module convention: the homogeneity, torus-equivariance, and μ(0) = 0
//! checks are normalization-robust, and genericity/fixed-ζ verdicts do not
//! depend on the scale.

use crate::rational::{rat, Rat};
use nalgebra::{Complex, DMatrix};
use num::Zero;
use rand::Rng;
use thiserror::Error;

pub type C64 = Complex<f64>;

pub const ORDER: usize = 7;
pub const WEIGHTS: [usize; 3] = [1, 2, 4];

#[derive(Debug, Error)]
pub enum QuiverError {
    #[error("stability parameter must sum to zero (got {0})")]
    NonzeroSum(String),
    #[error("matrix {0} violates the character grading at entry ({1}, {2})")]
    GradingViolation(usize, usize, usize),
    #[error("matrix is not in the normalizer of the cyclic action")]
    NotNormalizer,
    #[error("optimizer did not converge: residual {0:.3e} after {1} iterations")]
    NoConvergence(f64, usize),
}

/// Stability parameter: seven rationals summing to zero (values on the
/// character projections of the center).
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityParam {
    pub zeta: [Rat; ORDER],
}

impl StabilityParam {
    pub fn new(zeta: [Rat; ORDER]) -> Result<Self, QuiverError> {
        let sum: Rat = zeta.iter().sum();
        if !sum.is_zero() {
            return Err(QuiverError::NonzeroSum(crate::rational::format_rat(&sum)));
        }
        Ok(Self { zeta })
    }

    pub fn from_i64(v: [i64; ORDER]) -> Result<Self, QuiverError> {
        Self::new(std::array::from_fn(|i| rat(v[i])))
    }

    pub fn to_f64(&self) -> [f64; ORDER] {
        std::array::from_fn(|i| crate::rational::rat_to_f64(&self.zeta[i]))
    }
}

/// Exact genericity: no nonempty proper character subset sums to zero.
/// Exhaustive over all 2⁷ − 2 = 126 subsets.
pub fn is_generic(zeta: &StabilityParam) -> bool {
    for mask in 1u32..((1 << ORDER) - 1) {
        let mut sum = Rat::zero();
        for k in 0..ORDER {
            if mask & (1 << k) != 0 {
                sum += &zeta.zeta[k];
            }
        }
        if sum.is_zero() {
            return false;
        }
    }
    true
}

/// Independent oracle with a different enumeration style: depth-first
/// inclusion/exclusion over the characters.
pub fn is_generic_recursive(zeta: &StabilityParam) -> bool {
    fn walk(zeta: &[Rat], idx: usize, count: usize, sum: &Rat) -> bool {
        if idx == zeta.len() {
            // nonempty proper subsets only
            if count > 0 && count < zeta.len() && sum.is_zero() {
                return false;
            }
            return true;
        }
        let with = sum + &zeta[idx];
        walk(zeta, idx + 1, count + 1, &with) && walk(zeta, idx + 1, count, sum)
    }
    walk(&zeta.zeta, 0, 0, &Rat::zero())
}

/// Equivariant triple: B_j determined by seven free entries b_j with
/// (B_j)_{(q + w_j) mod 7, q} = b_j[q].
#[derive(Debug, Clone)]
pub struct QuiverRep {
    pub entries: [[C64; ORDER]; 3],
}

impl QuiverRep {
    pub fn zero() -> Self {
        Self { entries: [[C64::new(0.0, 0.0); ORDER]; 3] }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        Self {
            entries: std::array::from_fn(|_| {
                std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            }),
        }
    }

    /// The regular-representation model of a single orbit point v ∈ ℂ³: in
    /// the character basis each matrix is the constant shift v_j·S^{w_j}.
    pub fn orbit_model(v: [C64; 3]) -> Self {
        Self { entries: std::array::from_fn(|j| [v[j]; ORDER]) }
    }

    pub fn matrix(&self, j: usize) -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(ORDER, ORDER);
        for q in 0..ORDER {
            m[((q + WEIGHTS[j]) % ORDER, q)] = self.entries[j][q];
        }
        m
    }

    /// Validates the grading of an arbitrary matrix triple.
    pub fn from_matrices(ms: &[DMatrix<C64>; 3]) -> Result<Self, QuiverError> {
        let mut entries = [[C64::new(0.0, 0.0); ORDER]; 3];
        for (j, m) in ms.iter().enumerate() {
            for p in 0..ORDER {
                for q in 0..ORDER {
                    if p == (q + WEIGHTS[j]) % ORDER {
                        entries[j][q] = m[(p, q)];
                    } else if m[(p, q)].norm() > 0.0 {
                        return Err(QuiverError::GradingViolation(j, p, q));
                    }
                }
            }
        }
        Ok(Self { entries })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            entries: std::array::from_fn(|j| std::array::from_fn(|q| self.entries[j][q] * s)),
        }
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .iter()
            .flat_map(|e| e.iter())
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Σ_{i<j} ‖[B_i, B_j]‖²_F.
pub fn commutation_residual(b: &QuiverRep) -> f64 {
    let ms: Vec<DMatrix<C64>> = (0..3).map(|j| b.matrix(j)).collect();
    let mut total = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let c = &ms[i] * &ms[j] - &ms[j] * &ms[i];
            total += c.iter().map(|x| x.norm_sqr()).sum::<f64>();
        }
    }
    total
}

/// μ(B)_k = ½ Σ_j [B_j, B_j†]_{kk}, trace-projected onto the sum-zero
/// hyperplane.
pub fn moment_map(b: &QuiverRep) -> [f64; ORDER] {
    let mut mu = [0.0f64; ORDER];
    for j in 0..3 {
        for q in 0..ORDER {
            let p = (q + WEIGHTS[j]) % ORDER;
            let a = b.entries[j][q].norm_sqr();
            // [B B†]_{pp} gains |b|², [B† B]_{qq} gains |b|²
            mu[p] += 0.5 * a;
            mu[q] -= 0.5 * a;
        }
    }
    let mean: f64 = mu.iter().sum::<f64>() / ORDER as f64;
    for m in mu.iter_mut() {
        *m -= mean;
    }
    mu
}

/// Objective ‖μ(B) − ζ‖² + λ · commutation residual, with its gradient in
/// the free entries (Wirtinger gradient with respect to conj(b)).
fn objective_and_gradient(
    b: &QuiverRep,
    zeta: &[f64; ORDER],
    lambda: f64,
) -> (f64, [[C64; ORDER]; 3]) {
    let mu = moment_map(b);
    let mut value = 0.0;
    let mut mu_diff = [0.0f64; ORDER];
    for k in 0..ORDER {
        mu_diff[k] = mu[k] - zeta[k];
        value += mu_diff[k] * mu_diff[k];
    }
    let ms: Vec<DMatrix<C64>> = (0..3).map(|j| b.matrix(j)).collect();
    let mut comms: Vec<(usize, usize, DMatrix<C64>)> = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let c = &ms[i] * &ms[j] - &ms[j] * &ms[i];
            value += lambda * c.iter().map(|x| x.norm_sqr()).sum::<f64>();
            comms.push((i, j, c));
        }
    }
    // gradient of the μ-part: ∂/∂conj(b_j[q]) of Σ(μ_k − ζ_k)²
    //   |b|² enters μ_p with +½ and μ_q with −½ (projection is traceless and
    //   μ−ζ already sums to zero, so no correction needed)
    let mut grad = [[C64::new(0.0, 0.0); ORDER]; 3];
    for j in 0..3 {
        for q in 0..ORDER {
            let p = (q + WEIGHTS[j]) % ORDER;
            let w = mu_diff[p] - mu_diff[q];
            grad[j][q] += b.entries[j][q] * w;
        }
    }
    // gradient of the commutator part: d‖C‖² with C = B_iB_j − B_jB_i:
    // ∂/∂conj(B_i) = C B_j† − B_j† C (and with a sign swap for B_j)
    for (i, j, c) in &comms {
        let gi = c * ms[*j].adjoint() - ms[*j].adjoint() * c;
        let gj = ms[*i].adjoint() * c - c * ms[*i].adjoint();
        for q in 0..ORDER {
            let pi = (q + WEIGHTS[*i]) % ORDER;
            let pj = (q + WEIGHTS[*j]) % ORDER;
            grad[*i][q] += gi[(pi, q)] * lambda;
            grad[*j][q] += gj[(pj, q)] * lambda;
        }
    }
    (value, grad)
}

#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub iterations: usize,
    pub moment_residual: f64,
    pub commutation_residual: f64,
    pub gradient_norm: f64,
    pub converged: bool,
}

/// Gradient descent with Armijo backtracking and one penalty continuation
/// step; success means both residuals below 1e−8.
pub fn solve_moment(
    zeta: &StabilityParam,
    seed: &QuiverRep,
    max_iterations: usize,
) -> (QuiverRep, SolveDiagnostics) {
    let zf = zeta.to_f64();
    let mut b = seed.clone();
    let mut lambda = 10.0;
    let mut iterations = 0usize;
    let mut stalled = false;
    let target = 1e-8;
    let mut grad_norm = f64::INFINITY;
    while iterations < max_iterations {
        let (value, grad) = objective_and_gradient(&b, &zf, lambda);
        grad_norm = grad
            .iter()
            .flat_map(|g| g.iter())
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        let mu = moment_map(&b);
        let mures: f64 = mu.iter().zip(&zf).map(|(m, z)| (m - z) * (m - z)).sum::<f64>().sqrt();
        let cres = commutation_residual(&b);
        if mures < target && cres < target {
            return (
                b,
                SolveDiagnostics {
                    iterations,
                    moment_residual: mures,
                    commutation_residual: cres,
                    gradient_norm: grad_norm,
                    converged: true,
                },
            );
        }
        if grad_norm < 1e-13 {
            // stationary but not converged: continue the penalty once
            if !stalled {
                stalled = true;
                lambda = 100.0;
                continue;
            }
            break;
        }
        // Armijo backtracking along −grad (factor 2: Wirtinger convention)
        let mut step = 1.0 / (1.0 + grad_norm);
        let mut accepted = false;
        for _ in 0..60 {
            let cand = QuiverRep {
                entries: std::array::from_fn(|j| {
                    std::array::from_fn(|q| b.entries[j][q] - grad[j][q] * step)
                }),
            };
            let (v2, _) = objective_and_gradient(&cand, &zf, lambda);
            if v2 <= value - 0.25 * step * grad_norm * grad_norm {
                b = cand;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            if !stalled {
                stalled = true;
                lambda = 100.0;
            } else {
                break;
            }
        }
        iterations += 1;
    }
    let mu = moment_map(&b);
    let mures: f64 = mu.iter().zip(&zf).map(|(m, z)| (m - z) * (m - z)).sum::<f64>().sqrt();
    let cres = commutation_residual(&b);
    (
        b,
        SolveDiagnostics {
            iterations,
            moment_residual: mures,
            commutation_residual: cres,
            gradient_norm: grad_norm,
            converged: mures < target && cres < target,
        },
    )
}

/// Whether a unitary normalizer element fixes ζ through the induced
/// character permutation. The conjugation action of U on the cyclic group
/// must permute the canonical generators: U ν(n) U⁻¹ = ν(σ(n)).
pub fn lift_criterion(u: &DMatrix<C64>, zeta: &StabilityParam) -> Result<bool, QuiverError> {
    // the generator of the action on ℂ³
    let gen = |n: usize| -> DMatrix<C64> {
        let mut m = DMatrix::<C64>::zeros(3, 3);
        for (j, &w) in WEIGHTS.iter().enumerate() {
            let arg = 2.0 * std::f64::consts::PI * (w * n % ORDER) as f64 / ORDER as f64;
            m[(j, j)] = C64::new(arg.cos(), arg.sin());
        }
        m
    };
    // unitarity
    let defect = (u.adjoint() * u - DMatrix::<C64>::identity(3, 3))
        .map(|x| x.norm())
        .max();
    if defect > 1e-10 {
        return Err(QuiverError::NotNormalizer);
    }
    // find σ(1): U ν(1) U⁻¹ = ν(σ)
    let conj = u * gen(1) * u.adjoint();
    let mut sigma = None;
    for n in 0..ORDER {
        if (&conj - gen(n)).map(|x| x.norm()).max() < 1e-8 {
            sigma = Some(n);
            break;
        }
    }
    let Some(sigma) = sigma else { return Err(QuiverError::NotNormalizer) };
    // induced permutation on characters: χ_k ∘ conj⁻¹: the projector onto
    // character k moves to character (σ·k) mod 7
    let mut fixed = true;
    for k in 0..ORDER {
        let image = (sigma * k) % ORDER;
        if zeta.zeta[k] != zeta.zeta[image] {
            fixed = false;
        }
    }
    Ok(fixed)
}

/// Numerical rank of the combined constraint Jacobian (moment map and
/// commutators) at a representation point, over the 42 real coordinates.
pub fn constraint_jacobian_rank(b: &QuiverRep, tol: f64) -> usize {
    // rows: 7 moment components + 2·49·3 commutator components (real/imag)
    let eps = 1e-6;
    let perturb = |j: usize, q: usize, re: bool, sign: f64| -> QuiverRep {
        let mut c = b.clone();
        let delta = if re { C64::new(sign * eps, 0.0) } else { C64::new(0.0, sign * eps) };
        c.entries[j][q] += delta;
        c
    };
    let eval = |c: &QuiverRep| -> Vec<f64> {
        let mut out = Vec::new();
        out.extend_from_slice(&moment_map(c));
        let ms: Vec<DMatrix<C64>> = (0..3).map(|j| c.matrix(j)).collect();
        for i in 0..3 {
            for j2 in i + 1..3 {
                let cm = &ms[i] * &ms[j2] - &ms[j2] * &ms[i];
                for x in cm.iter() {
                    out.push(x.re);
                    out.push(x.im);
                }
            }
        }
        out
    };
    let rows = eval(b).len();
    let mut jac = DMatrix::<f64>::zeros(rows, 42);
    let mut col = 0usize;
    for j in 0..3 {
        for q in 0..ORDER {
            for re in [true, false] {
                let plus = eval(&perturb(j, q, re, 1.0));
                let minus = eval(&perturb(j, q, re, -1.0));
                for r in 0..rows {
                    jac[(r, col)] = (plus[r] - minus[r]) / (2.0 * eps);
                }
                col += 1;
            }
        }
    }
    crate::linalg::singular_values(&jac)
        .map(|svs| svs.iter().filter(|&&s| s > tol).count())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_frac;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn genericity_examples() {
        let gen = StabilityParam::from_i64([1, 1, 1, 1, 1, 1, -6]).unwrap();
        assert!(is_generic(&gen));
        let zero_entry = StabilityParam::from_i64([1, -1, 0, 0, 0, 0, 0]).unwrap();
        assert!(!is_generic(&zero_entry));
        let zero = StabilityParam::from_i64([0; 7]).unwrap();
        assert!(!is_generic(&zero));
        assert!(StabilityParam::from_i64([1, 0, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn genericity_oracle_agreement_and_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let mut generic_count = 0usize;
        let total = 10_000;
        for _ in 0..total {
            // random rationals with denominators ≤ 16, forced sum zero; the
            // numerator range is wide enough that the 126 hyperplanes are
            // rarely hit, matching the open-dense picture
            let mut v: Vec<Rat> = (0..6)
                .map(|_| rat_frac(rng.gen_range(-255i64..=255), rng.gen_range(1i64..=16)))
                .collect();
            let last = -v.iter().sum::<Rat>();
            v.push(last);
            let zeta = StabilityParam::new(std::array::from_fn(|i| v[i].clone())).unwrap();
            let a = is_generic(&zeta);
            let b = is_generic_recursive(&zeta);
            assert_eq!(a, b);
            if a {
                generic_count += 1;
            }
        }
        assert!(
            generic_count as f64 > 0.95 * total as f64,
            "generic fraction {generic_count}/{total}"
        );
    }

    #[test]
    fn orbit_model_commutes_with_zero_moment() {
        let v = [C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
        let b = QuiverRep::orbit_model(v);
        assert_eq!(commutation_residual(&b), 0.0);
        let mu = moment_map(&b);
        assert!(mu.iter().all(|x| x.abs() < 1e-14));
        // a general orbit point also commutes
        let b2 = QuiverRep::orbit_model([
            C64::new(0.4, -0.2),
            C64::new(1.1, 0.3),
            C64::new(-0.7, 0.9),
        ]);
        assert!(commutation_residual(&b2) < 1e-26);
        // single nonzero matrix: trivially commuting
        let mut single = QuiverRep::zero();
        single.entries[1] = [C64::new(0.3, 0.8); ORDER];
        assert_eq!(commutation_residual(&single), 0.0);
    }

    #[test]
    fn random_reps_generically_do_not_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..20 {
            let b = QuiverRep::random(&mut rng);
            assert!(commutation_residual(&b) > 1e-6);
        }
    }

    #[test]
    fn moment_map_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let b = QuiverRep::random(&mut rng);
        // quadratic homogeneity μ(λB) = |λ|²μ(B)
        let lam = C64::new(0.3, 1.2);
        let mu1 = moment_map(&b.scale(lam));
        let mu0 = moment_map(&b);
        for k in 0..ORDER {
            assert!((mu1[k] - lam.norm_sqr() * mu0[k]).abs() < 1e-12);
        }
        // torus equivariance: diagonal unitary conjugation preserves μ
        let phases: [f64; ORDER] = std::array::from_fn(|_| rng.gen_range(0.0..6.28));
        let u = DMatrix::<C64>::from_fn(ORDER, ORDER, |i, j| {
            if i == j {
                C64::new(phases[i].cos(), phases[i].sin())
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let conj: [DMatrix<C64>; 3] =
            std::array::from_fn(|j| &u * b.matrix(j) * u.adjoint());
        let bc = QuiverRep::from_matrices(&conj).unwrap();
        let mu2 = moment_map(&bc);
        for k in 0..ORDER {
            assert!((mu2[k] - mu0[k]).abs() < 1e-12);
        }
        assert_eq!(moment_map(&QuiverRep::zero()), [0.0; ORDER]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let b = QuiverRep::random(&mut rng);
        let zeta = [0.1, -0.2, 0.05, 0.0, 0.3, -0.15, -0.1];
        let lambda = 10.0;
        let (_, grad) = objective_and_gradient(&b, &zeta, lambda);
        let eps = 1e-6;
        for j in 0..3 {
            for q in [0usize, 3, 6] {
                for re in [true, false] {
                    let delta = if re { C64::new(eps, 0.0) } else { C64::new(0.0, eps) };
                    let mut plus = b.clone();
                    plus.entries[j][q] += delta;
                    let mut minus = b.clone();
                    minus.entries[j][q] -= delta;
                    let (vp, _) = objective_and_gradient(&plus, &zeta, lambda);
                    let (vm, _) = objective_and_gradient(&minus, &zeta, lambda);
                    let fd = (vp - vm) / (2.0 * eps);
                    // Wirtinger: dV = 2 Re(grad · conj(δb))
                    let analytic = if re { 2.0 * grad[j][q].re } else { 2.0 * grad[j][q].im };
                    assert!(
                        (fd - analytic).abs() < 1e-5 * (1.0 + fd.abs()),
                        "j={j} q={q} re={re}: fd {fd} vs {analytic}"
                    );
                }
            }
        }
    }

    #[test]
    fn solve_at_zero_from_orbit_seed() {
        let zeta = StabilityParam::from_i64([0; 7]).unwrap();
        let seed = QuiverRep::orbit_model([
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        let (_, diag) = solve_moment(&zeta, &seed, 10);
        assert!(diag.converged);
        assert_eq!(diag.iterations, 0);
    }

    #[test]
    fn solve_small_generic_parameter() {
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
        assert!(is_generic(&zeta));
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        let seed = {
            let mut s = QuiverRep::orbit_model([
                C64::new(0.7, 0.1),
                C64::new(0.2, -0.3),
                C64::new(0.1, 0.4),
            ]);
            for j in 0..3 {
                for q in 0..ORDER {
                    s.entries[j][q] += C64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05));
                }
            }
            s
        };
        let (b, diag) = solve_moment(&zeta, &seed, 10_000);
        assert!(
            diag.converged,
            "residuals μ: {:.3e}, comm: {:.3e} after {} iterations",
            diag.moment_residual, diag.commutation_residual, diag.iterations
        );
        // grading is preserved exactly: reconstruct and compare
        let ms: [DMatrix<C64>; 3] = std::array::from_fn(|j| b.matrix(j));
        assert!(QuiverRep::from_matrices(&ms).is_ok());
        // regression: constraint Jacobian rank at the solved generic point
        let rank = constraint_jacobian_rank(&b, 1e-4);
        assert_eq!(rank, JACOBIAN_RANK_BASELINE);
    }

    /// Frozen after the first converged solve at ζ = (1,…,1,−6)/10.
    pub const JACOBIAN_RANK_BASELINE: usize = 30;

    #[test]
    fn lift_criterion_examples() {
        let minus_id = -DMatrix::<C64>::identity(3, 3);
        let any = StabilityParam::from_i64([2, -1, 3, -4, 1, 5, -6]).unwrap();
        assert!(lift_criterion(&minus_id, &any).unwrap());
        // the generator itself centralizes
        let mut gen1 = DMatrix::<C64>::zeros(3, 3);
        for (j, &w) in WEIGHTS.iter().enumerate() {
            let arg = 2.0 * std::f64::consts::PI * w as f64 / ORDER as f64;
            gen1[(j, j)] = C64::new(arg.cos(), arg.sin());
        }
        assert!(lift_criterion(&gen1, &any).unwrap());
        // coordinate-line permutation (z₁,z₂,z₃) ↦ (z₂,z₃,z₁): conjugation
        // doubles the character, so an asymmetric ζ is moved
        let mut perm = DMatrix::<C64>::zeros(3, 3);
        perm[(0, 1)] = C64::new(1.0, 0.0);
        perm[(1, 2)] = C64::new(1.0, 0.0);
        perm[(2, 0)] = C64::new(1.0, 0.0);
        assert!(!lift_criterion(&perm, &any).unwrap());
        // but a doubling-symmetric ζ is fixed: orbits {1,2,4}, {3,6,5}
        let symmetric = StabilityParam::from_i64([-9, 2, 2, 1, 2, 1, 1]).unwrap();
        assert!(lift_criterion(&perm, &symmetric).unwrap());
        // non-normalizer rejected
        let mut bad = DMatrix::<C64>::identity(3, 3);
        bad[(0, 1)] = C64::new(0.7, 0.0);
        assert!(lift_criterion(&bad, &any).is_err());
    }
}
