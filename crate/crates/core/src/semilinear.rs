//! Semilinear maps w ↦ Aw + B·conj(w) on ℂ⁷, generic over an exact or
//! floating scalar with conjugation. Carriers for the monodromy generators
//! and their 14×14 realifications.

use crate::cyclotomic::Cyclotomic;
use nalgebra::{Complex, DMatrix};
use thiserror::Error;

pub type C64 = Complex<f64>;

#[derive(Debug, Error)]
pub enum SemilinearError {
    #[error("map is not monomial (row {0} has {1} nonzero entries); cannot invert exactly")]
    NotMonomial(usize, usize),
    #[error("scalar is not invertible")]
    NotInvertible,
}

/// Scalar ring with conjugation, enough for semilinear arithmetic.
pub trait ConjScalar: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Inverse of a unit-modulus element (conjugate for the float case).
    fn unit_inverse(&self) -> Self;
    fn to_c64(&self) -> C64;
    /// Exact or near-exact equality.
    fn equals(&self, other: &Self) -> bool;
}

impl ConjScalar for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.norm() == 0.0
    }
    fn unit_inverse(&self) -> Self {
        Complex::conj(self)
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn equals(&self, other: &Self) -> bool {
        (self - other).norm() < 1e-12
    }
}

impl ConjScalar for Cyclotomic {
    fn zero() -> Self {
        // order is contextual; zero of order 1 is absorbed on first add
        Cyclotomic::zero(1)
    }
    fn one() -> Self {
        Cyclotomic::one(1)
    }
    fn add(&self, other: &Self) -> Self {
        lift_pair(self, other, Cyclotomic::add)
    }
    fn sub(&self, other: &Self) -> Self {
        lift_pair(self, other, Cyclotomic::sub)
    }
    fn mul(&self, other: &Self) -> Self {
        lift_pair(self, other, Cyclotomic::mul)
    }
    fn neg(&self) -> Self {
        Cyclotomic::neg(self)
    }
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn unit_inverse(&self) -> Self {
        // for monomials ζ^k the conjugate is the inverse
        Cyclotomic::conj(self)
    }
    fn to_c64(&self) -> C64 {
        self.to_complex()
    }
    fn equals(&self, other: &Self) -> bool {
        lift_pair(self, other, |a, b| Cyclotomic::sub(a, b)).is_zero()
    }
}

/// Rescale order-1 placeholders (from `zero()`, `one()`) onto the partner's
/// cyclotomic order before applying an operation.
fn lift_pair(
    a: &Cyclotomic,
    b: &Cyclotomic,
    op: impl Fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic,
) -> Cyclotomic {
    let order = a.order.max(b.order);
    let lift = |x: &Cyclotomic| -> Cyclotomic {
        if x.order == order {
            x.clone()
        } else {
            assert_eq!(x.order, 1, "mixed cyclotomic orders");
            let mut y = Cyclotomic::zero(order);
            if !Cyclotomic::is_zero(x) {
                y = Cyclotomic::from_rat(order, x.reduced()[0].clone());
            }
            y
        }
    };
    op(&lift(a), &lift(b))
}

pub const N: usize = 7;

pub type Mat7<S> = [[S; N]; N];

pub fn mat7_zero<S: ConjScalar>() -> Mat7<S> {
    std::array::from_fn(|_| std::array::from_fn(|_| S::zero()))
}

pub fn mat7_identity<S: ConjScalar>() -> Mat7<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { S::one() } else { S::zero() }))
}

fn mat7_mul<S: ConjScalar>(a: &Mat7<S>, b: &Mat7<S>) -> Mat7<S> {
    let mut c = mat7_zero::<S>();
    for i in 0..N {
        for k in 0..N {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..N {
                if !b[k][j].is_zero() {
                    c[i][j] = c[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    c
}

fn mat7_conj<S: ConjScalar>(a: &Mat7<S>) -> Mat7<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].conj()))
}

fn mat7_add<S: ConjScalar>(a: &Mat7<S>, b: &Mat7<S>) -> Mat7<S> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j].add(&b[i][j])))
}


/// w ↦ A·w + B·conj(w) on ℂ⁷.
#[derive(Debug, Clone)]
pub struct SemilinearMap<S: ConjScalar> {
    pub linear: Mat7<S>,
    pub antilinear: Mat7<S>,
}

impl<S: ConjScalar> SemilinearMap<S> {
    pub fn identity() -> Self {
        Self { linear: mat7_identity(), antilinear: mat7_zero() }
    }

    /// Componentwise conjugation w ↦ conj(w).
    pub fn conjugation() -> Self {
        Self { linear: mat7_zero(), antilinear: mat7_identity() }
    }

    pub fn compose(&self, other: &Self) -> Self {
        // (A₁, B₁)∘(A₂, B₂) = (A₁A₂ + B₁·conj(B₂), A₁B₂ + B₁·conj(A₂))
        let a = mat7_add(
            &mat7_mul(&self.linear, &other.linear),
            &mat7_mul(&self.antilinear, &mat7_conj(&other.antilinear)),
        );
        let b = mat7_add(
            &mat7_mul(&self.linear, &other.antilinear),
            &mat7_mul(&self.antilinear, &mat7_conj(&other.linear)),
        );
        Self { linear: a, antilinear: b }
    }

    /// Exact inverse for monomial maps (one nonzero unit entry per row).
    pub fn monomial_inverse(&self) -> Result<Self, SemilinearError> {
        let mut linear = mat7_zero::<S>();
        let mut antilinear = mat7_zero::<S>();
        for i in 0..N {
            let lin: Vec<usize> = (0..N).filter(|&j| !self.linear[i][j].is_zero()).collect();
            let anti: Vec<usize> = (0..N).filter(|&j| !self.antilinear[i][j].is_zero()).collect();
            match (lin.len(), anti.len()) {
                (1, 0) => {
                    let j = lin[0];
                    linear[j][i] = self.linear[i][j].unit_inverse();
                }
                (0, 1) => {
                    // out_i = u·conj(z_j) ⇒ z_j = conj(u⁻¹)·conj(out_i)
                    let j = anti[0];
                    antilinear[j][i] = self.antilinear[i][j].unit_inverse().conj();
                }
                (l, a) => return Err(SemilinearError::NotMonomial(i, l + a)),
            }
        }
        Ok(Self { linear, antilinear })
    }

    pub fn pow(&self, e: i64) -> Result<Self, SemilinearError> {
        let base = if e < 0 { self.monomial_inverse()? } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        Ok(acc)
    }

    pub fn is_identity(&self) -> bool {
        self.residual_vs(&Self::identity()) && true
    }

    fn residual_vs(&self, other: &Self) -> bool {
        (0..N).all(|i| {
            (0..N).all(|j| {
                self.linear[i][j].equals(&other.linear[i][j])
                    && self.antilinear[i][j].equals(&other.antilinear[i][j])
            })
        })
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.residual_vs(other)
    }

    /// Max entrywise deviation from another map, in the complex embedding.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..N {
            for j in 0..N {
                worst = worst
                    .max(self.linear[i][j].to_c64().sub(&other.linear[i][j].to_c64()).norm())
                    .max(
                        self.antilinear[i][j]
                            .to_c64()
                            .sub(&other.antilinear[i][j].to_c64())
                            .norm(),
                    );
            }
        }
        worst
    }

    pub fn to_complex(&self) -> SemilinearMap<C64> {
        SemilinearMap {
            linear: std::array::from_fn(|i| std::array::from_fn(|j| self.linear[i][j].to_c64())),
            antilinear: std::array::from_fn(|i| {
                std::array::from_fn(|j| self.antilinear[i][j].to_c64())
            }),
        }
    }
}

impl SemilinearMap<C64> {
    /// Real 14×14 matrix on (e₁..e₇, f₁..f₇) with ℂ⁷ ∋ w = x + iy.
    pub fn realify(&self) -> DMatrix<f64> {
        let mut m = DMatrix::<f64>::zeros(14, 14);
        for i in 0..N {
            for j in 0..N {
                let a = self.linear[i][j];
                let b = self.antilinear[i][j];
                m[(i, j)] = a.re + b.re;
                m[(i, j + 7)] = -a.im + b.im;
                m[(i + 7, j)] = a.im + b.im;
                m[(i + 7, j + 7)] = a.re - b.re;
            }
        }
        m
    }

    pub fn apply(&self, w: &[C64; N]) -> [C64; N] {
        std::array::from_fn(|i| {
            let mut s = C64::new(0.0, 0.0);
            for j in 0..N {
                s += self.linear[i][j] * w[j] + self.antilinear[i][j] * w[j].conj();
            }
            s
        })
    }

    /// Eigenvalues of the realification for diagonal maps: a linear entry u
    /// contributes {u, ū}, an antilinear entry of modulus 1 contributes
    /// {+1, −1}. Errors for non-diagonal maps.
    pub fn diagonal_eigenvalues(&self) -> Result<Vec<C64>, SemilinearError> {
        let mut out = Vec::with_capacity(14);
        for i in 0..N {
            let offdiag = (0..N).any(|j| {
                j != i && (!self.linear[i][j].is_zero() || !self.antilinear[i][j].is_zero())
            });
            let lin = !self.linear[i][i].is_zero();
            let anti = !self.antilinear[i][i].is_zero();
            if offdiag || (lin && anti) {
                return Err(SemilinearError::NotMonomial(i, 2));
            }
            if lin {
                let u = self.linear[i][i];
                out.push(u);
                out.push(u.conj());
            } else if anti {
                let m = self.antilinear[i][i].norm();
                out.push(C64::new(m, 0.0));
                out.push(C64::new(-m, 0.0));
            } else {
                return Err(SemilinearError::NotInvertible);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Cyclotomic;

    fn theta(f: f64) -> C64 {
        C64::new(f.cos(), f.sin())
    }

    #[test]
    fn compose_and_inverse_float() {
        // w ↦ θ·conj(w) in slot 0, identity elsewhere
        let mut m = SemilinearMap::<C64>::identity();
        m.linear[0][0] = C64::new(0.0, 0.0);
        m.antilinear[0][0] = theta(0.7);
        let inv = m.monomial_inverse().unwrap();
        assert!(m.compose(&inv).is_identity());
        assert!(inv.compose(&m).is_identity());
        // conjugation squares to the identity
        let r0 = SemilinearMap::<C64>::conjugation();
        assert!(r0.compose(&r0).is_identity());
    }

    #[test]
    fn realification_is_orthogonal() {
        let mut m = SemilinearMap::<C64>::identity();
        m.linear[2][2] = C64::new(0.0, 0.0);
        m.antilinear[2][2] = theta(1.3);
        m.linear[5][5] = theta(-0.4);
        let r = m.realify();
        let defect = (r.transpose() * &r - DMatrix::<f64>::identity(14, 14)).abs().max();
        assert!(defect < 1e-14);
    }

    #[test]
    fn realification_matches_apply() {
        let mut m = SemilinearMap::<C64>::identity();
        m.linear[0][0] = C64::new(0.0, 0.0);
        m.antilinear[0][3] = theta(0.9);
        m.linear[3][0] = C64::new(1.0, 0.0);
        m.linear[3][3] = C64::new(0.0, 0.0);
        let w: [C64; 7] = std::array::from_fn(|i| C64::new(i as f64, 1.0 - i as f64));
        let out = m.apply(&w);
        let r = m.realify();
        let mut v = DMatrix::<f64>::zeros(14, 1);
        for i in 0..7 {
            v[(i, 0)] = w[i].re;
            v[(i + 7, 0)] = w[i].im;
        }
        let rv = r * v;
        for i in 0..7 {
            assert!((rv[(i, 0)] - out[i].re).abs() < 1e-14);
            assert!((rv[(i + 7, 0)] - out[i].im).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_cyclotomic_composition() {
        // i·conj ∘ i·conj = identity·(i·conj(i)) = 1
        let i4 = Cyclotomic::root_power(4, 1);
        let mut m = SemilinearMap::<Cyclotomic> {
            linear: mat7_zero(),
            antilinear: mat7_zero(),
        };
        for k in 0..7 {
            m.antilinear[k][k] = i4.clone();
        }
        let sq = m.compose(&m);
        assert!(sq.is_identity());
    }

    #[test]
    fn diagonal_eigenvalues_structure() {
        let th = theta(0.7);
        let mut m = SemilinearMap::<C64>::identity();
        m.linear[0][0] = C64::new(0.0, 0.0);
        m.antilinear[0][0] = th;
        m.linear[1][1] = th;
        let ev = m.diagonal_eigenvalues().unwrap();
        assert_eq!(ev.len(), 14);
        let ones = ev.iter().filter(|z| (*z - C64::new(1.0, 0.0)).norm() < 1e-12).count();
        let minus = ev.iter().filter(|z| (*z + C64::new(1.0, 0.0)).norm() < 1e-12).count();
        let th_count = ev.iter().filter(|z| (*z - th).norm() < 1e-12).count();
        // five identity slots give {1,1} each, the antilinear slot gives ±1,
        // the θ-slot gives {θ, θ̄}
        assert_eq!(ones, 11);
        assert_eq!(minus, 1);
        assert_eq!(th_count, 1);
    }
}
