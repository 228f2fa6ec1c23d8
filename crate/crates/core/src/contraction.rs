//! Fixed points of parametrized contraction families, the derivative of the
//! fixed-point map, and its quantitative bound.
//!
//! A family is an evaluator E(f, b) mapping a closed ball of ℝⁿ to itself for
//! each parameter f; the fixed point is found by iteration, the measured
//! contraction constant is estimated over sampled pairs plus the iterate
//! trajectory, and the derivative (DFix)_f = (I − ∂_B E)⁻¹ ∂_F E is compared
//! against finite differences of the fixed point itself.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("iterate left the ball at step {step}: |b| = {norm:.3e} > {radius:.3e}")]
    Divergence { step: usize, norm: f64, radius: f64 },
    #[error("iteration did not converge in {0} steps")]
    NoConvergence(usize),
    #[error("I − ∂_B E is ill-conditioned (condition {0:.3e})")]
    IllConditioned(f64),
    #[error("measured contraction constant {0:.4} is not below one")]
    NotContractive(f64),
}

/// A family of self-maps of the closed ball of radius `radius` in ℝⁿ.
pub struct ContractionFamily<'a> {
    pub dim: usize,
    pub radius: f64,
    pub claimed_constant: f64,
    pub eval: Box<dyn Fn(f64, &DVector<f64>) -> DVector<f64> + 'a>,
}

#[derive(Debug)]
pub struct FixResult {
    pub point: DVector<f64>,
    pub iterations: usize,
    pub measured_constant: f64,
}

impl<'a> ContractionFamily<'a> {
    pub fn new(
        dim: usize,
        radius: f64,
        claimed_constant: f64,
        eval: impl Fn(f64, &DVector<f64>) -> DVector<f64> + 'a,
    ) -> Self {
        Self { dim, radius, claimed_constant, eval: Box::new(eval) }
    }

    /// Lipschitz constant measured over random pairs in the ball.
    pub fn measure_constant(&self, f: f64, samples: usize, rng: &mut impl Rng) -> f64 {
        let mut worst = 0.0f64;
        let bound = if self.radius.is_finite() { self.radius } else { 1.0 };
        for _ in 0..samples {
            let b1 = random_ball_point(self.dim, bound, rng);
            let b2 = random_ball_point(self.dim, bound, rng);
            let d = (&b1 - &b2).norm();
            if d < 1e-12 {
                continue;
            }
            let e1 = (self.eval)(f, &b1);
            let e2 = (self.eval)(f, &b2);
            worst = worst.max((e1 - e2).norm() / d);
        }
        worst
    }

    /// Iterates to the fixed point within `tol`, guarding the ball and the
    /// iteration budget log(tol)/log(C) + margin.
    pub fn fix_point(&self, f: f64, tol: f64) -> Result<FixResult, ContractionError> {
        let c = self.claimed_constant;
        let budget = if c < 1.0 {
            ((tol.ln() / c.ln()).ceil() as usize).saturating_add(64)
        } else {
            return Err(ContractionError::NotContractive(c));
        };
        let mut b = DVector::<f64>::zeros(self.dim);
        let mut measured: f64 = 0.0;
        let mut prev_step = f64::INFINITY;
        for step in 0..budget {
            let next = (self.eval)(f, &b);
            if next.norm() > self.radius * (1.0 + 1e-12) {
                return Err(ContractionError::Divergence {
                    step,
                    norm: next.norm(),
                    radius: self.radius,
                });
            }
            let step_size = (&next - &b).norm();
            if prev_step.is_finite() && prev_step > 1e-6 && step_size > 1e-9 {
                measured = measured.max(step_size / prev_step);
            }
            if step_size <= tol {
                let residual = ((self.eval)(f, &next) - &next).norm();
                if residual <= tol {
                    return Ok(FixResult { point: next, iterations: step + 1, measured_constant: measured });
                }
            }
            prev_step = step_size;
            b = next;
        }
        Err(ContractionError::NoConvergence(budget))
    }

    /// (DFix)_f = (I − ∂_B E)⁻¹ ∂_F E at (f, b_f), partial derivatives by
    /// 5-point central differences with Richardson extrapolation.
    pub fn fix_derivative(&self, f: f64, tol: f64) -> Result<DVector<f64>, ContractionError> {
        let fixed = self.fix_point(f, tol)?;
        let b = &fixed.point;
        let n = self.dim;
        let h = 1e-4;
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            let col = five_point_vec(|t| {
                let mut bb = b.clone();
                bb[j] += t;
                (self.eval)(f, &bb)
            }, h);
            jac.set_column(j, &col);
        }
        let df = five_point_vec(|t| (self.eval)(f + t, b), h);
        let a = DMatrix::<f64>::identity(n, n) - jac;
        let svs = crate::linalg::singular_values(&a).map_err(|_| ContractionError::IllConditioned(f64::INFINITY))?;
        let cond = svs.first().unwrap_or(&1.0) / svs.last().unwrap_or(&1.0).max(1e-300);
        if cond > 1e12 {
            return Err(ContractionError::IllConditioned(cond));
        }
        a.lu().solve(&df).ok_or(ContractionError::IllConditioned(f64::INFINITY))
    }

    /// Norm of ∂_F E at the fixed point (for the derivative bound).
    pub fn parameter_derivative_norm(&self, f: f64, tol: f64) -> Result<f64, ContractionError> {
        let fixed = self.fix_point(f, tol)?;
        Ok(five_point_vec(|t| (self.eval)(f + t, &fixed.point), 1e-4).norm())
    }

    /// Finite-difference derivative of f ↦ b_f for cross-checking.
    pub fn fix_derivative_fd(&self, f: f64, tol: f64, h: f64) -> Result<DVector<f64>, ContractionError> {
        let plus = self.fix_point(f + h, tol)?.point;
        let minus = self.fix_point(f - h, tol)?.point;
        Ok((plus - minus) / (2.0 * h))
    }
}

/// 5-point central difference with one Richardson step.
fn five_point_vec(g: impl Fn(f64) -> DVector<f64>, h: f64) -> DVector<f64> {
    let d = |h: f64| {
        (g(-2.0 * h) - g(2.0 * h) + (g(h) - g(-h)) * 8.0) / (12.0 * h)
    };
    let d1 = d(h);
    let d2 = d(h / 2.0);
    (d2.clone() * 16.0 - d1) / 15.0
}

fn random_ball_point(dim: usize, radius: f64, rng: &mut impl Rng) -> DVector<f64> {
    loop {
        let v = DVector::<f64>::from_fn(dim, |_, _| rng.gen_range(-1.0..1.0));
        if v.norm() <= 1.0 {
            return v * radius;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn affine_family_closed_form() {
        // E(f, b) = b/2 + f on ℝ: fixed point 2f, derivative 2
        let fam = ContractionFamily::new(1, f64::INFINITY, 0.5, |f, b| {
            DVector::from_vec(vec![b[0] / 2.0 + f])
        });
        let fx = fam.fix_point(0.3, 1e-12).unwrap();
        assert!((fx.point[0] - 0.6).abs() < 1e-10);
        assert!(fx.measured_constant <= 0.5 + 1e-8);
        let d = fam.fix_derivative(0.3, 1e-12).unwrap();
        assert!((d[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn cosine_family_matches_bisection() {
        // E(f, b) = (cos b + f)/3: fixed point solves 3b − cos b − f = 0
        let fam = ContractionFamily::new(1, f64::INFINITY, 1.0 / 3.0, |f, b| {
            DVector::from_vec(vec![(b[0].cos() + f) / 3.0])
        });
        for f in [0.0, 0.4, 1.5] {
            let fx = fam.fix_point(f, 1e-13).unwrap();
            // independent bisection oracle
            let g = |b: f64| 3.0 * b - b.cos() - f;
            let (mut lo, mut hi) = (-2.0, 2.0);
            assert!(g(lo) < 0.0 && g(hi) > 0.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((fx.point[0] - lo).abs() < 1e-10, "f = {f}");
            // derivative against finite differences
            let d = fam.fix_derivative(f, 1e-13).unwrap();
            let fd = fam.fix_derivative_fd(f, 1e-13, 1e-5).unwrap();
            assert!((d[0] - fd[0]).abs() / fd[0].abs() < 1e-6);
        }
    }

    #[test]
    fn quadratic_toy_with_ball_radius() {
        // E(f, b) = −(Q(R b) + e(f)) with Q quadratic, ‖R‖ ≤ c, small data:
        // the fixed point stays within twice the data norm
        let n = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let r = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-0.3..0.3));
        let c = crate::linalg::singular_values(&r).unwrap()[0];
        let e_norm = 0.02;
        let radius = 2.0 * c.max(1.0) * e_norm;
        let fam = ContractionFamily::new(n, radius, 0.5, move |f, b| {
            let rb = &r * b;
            let q = DVector::<f64>::from_fn(n, |i, _| rb[i] * rb[(i + 1) % n]);
            let e = DVector::<f64>::from_fn(n, |i, _| e_norm * f * ((i + 1) as f64) / n as f64);
            -(q + e)
        });
        let fx = fam.fix_point(0.9, 1e-12).unwrap();
        assert!(fx.point.norm() <= radius + 1e-12);
        assert!(fx.measured_constant < 0.5);
    }

    #[test]
    fn divergence_is_reported() {
        let fam = ContractionFamily::new(1, 1.0, 0.9, |_f, b| {
            DVector::from_vec(vec![2.0 * b[0] + 1.0])
        });
        match fam.fix_point(0.0, 1e-10) {
            Err(ContractionError::Divergence { .. }) => {}
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn derivative_bound_with_measured_constants() {
        // ‖DFix‖ ≤ (1 − c_f)⁻¹ ‖∂_F E‖
        let fam = ContractionFamily::new(1, f64::INFINITY, 1.0 / 3.0, |f, b| {
            DVector::from_vec(vec![(b[0].cos() + f) / 3.0])
        });
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        for f in [0.2, 1.0, 2.5] {
            let d = fam.fix_derivative(f, 1e-13).unwrap().norm();
            let c = fam.measure_constant(f, 1000, &mut rng).max(
                fam.fix_point(f, 1e-13).unwrap().measured_constant,
            );
            assert!(c < 1.0);
            let df = fam.parameter_derivative_norm(f, 1e-13).unwrap();
            assert!(d <= (1.0 - c).recip() * df + 1e-9, "bound fails at f = {f}");
        }
    }

    #[test]
    fn continuity_modulus_across_parameters() {
        // ‖b_{f₁} − b_{f₂}‖ ≤ (1 − C)⁻¹ ‖E_{f₁}(b_{f₁}) − E_{f₂}(b_{f₁})‖
        let fam = ContractionFamily::new(2, f64::INFINITY, 0.55, |f, b| {
            DVector::from_vec(vec![
                0.4 * (b[1] + f).sin(),
                0.4 * (b[0] - 2.0 * f).cos(),
            ])
        });
        for (f1, f2) in [(0.1, 0.3), (1.0, 1.4), (2.0, 2.05)] {
            let b1 = fam.fix_point(f1, 1e-13).unwrap().point;
            let b2 = fam.fix_point(f2, 1e-13).unwrap().point;
            let rhs = ((fam.eval)(f1, &b1) - (fam.eval)(f2, &b1)).norm();
            assert!((&b1 - &b2).norm() <= rhs / (1.0 - 0.55) + 1e-10);
        }
    }

    #[test]
    fn second_derivative_is_grid_stable() {
        let fam = ContractionFamily::new(1, f64::INFINITY, 1.0 / 3.0, |f, b| {
            DVector::from_vec(vec![(b[0].cos() + f * f / 4.0) / 3.0])
        });
        let f = 0.8;
        let second = |h: f64| {
            let p = fam.fix_point(f + h, 1e-13).unwrap().point[0];
            let z = fam.fix_point(f, 1e-13).unwrap().point[0];
            let m = fam.fix_point(f - h, 1e-13).unwrap().point[0];
            (p - 2.0 * z + m) / (h * h)
        };
        let s1 = second(1e-3);
        let s2 = second(5e-4);
        assert!((s1 - s2).abs() / s1.abs().max(1e-12) < 1e-3, "{s1} vs {s2}");
    }
}
