//! Exact arithmetic in cyclotomic fields ℚ(ζ_n).
//!
//! Elements are stored as rational coefficient vectors on the powers
//! ζ⁰…ζ^{n−1} (the group-algebra picture), so multiplication is cyclic
//! convolution and conjugation is index reversal. Canonicalization for
//! equality and zero tests reduces modulo the n-th cyclotomic polynomial.

use crate::rational::{format_rat, Rat};
use nalgebra::Complex;
use num::{One, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    pub order: u32,
    /// Coefficients of ζ⁰…ζ^{n−1}; not reduced.
    coeffs: Vec<Rat>,
}

/// Monic integer polynomial, ascending coefficients.
fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Quotient of a by monic b.
fn poly_div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = a.to_vec();
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    if rem.len() <= db {
        return vec![Rat::zero()];
    }
    let mut quot = vec![Rat::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - db] = c.clone();
        for (j, bj) in b.iter().enumerate() {
            let sub = &c * bj;
            rem[i - db + j] -= sub;
        }
    }
    debug_assert!(rem.iter().all(Rat::is_zero));
    quot
}

/// The n-th cyclotomic polynomial, ascending coefficients.
pub fn cyclotomic_polynomial(n: u32) -> Vec<Rat> {
    // x^n − 1 divided by the product of Φ_d over proper divisors d of n.
    let mut xn1 = vec![Rat::zero(); n as usize + 1];
    xn1[0] = -Rat::one();
    xn1[n as usize] = Rat::one();
    let mut divisor = vec![Rat::one()];
    for d in 1..n {
        if n % d == 0 {
            divisor = poly_mul(&divisor, &cyclotomic_polynomial(d));
        }
    }
    poly_div_exact(&xn1, &divisor)
}

impl Cyclotomic {
    pub fn zero(order: u32) -> Self {
        Self { order, coeffs: vec![Rat::zero(); order as usize] }
    }

    pub fn one(order: u32) -> Self {
        Self::root_power(order, 0)
    }

    /// ζ^k (k taken mod n).
    pub fn root_power(order: u32, k: i64) -> Self {
        let mut c = Self::zero(order);
        let idx = k.rem_euclid(order as i64) as usize;
        c.coeffs[idx] = Rat::one();
        c
    }

    pub fn from_rat(order: u32, r: Rat) -> Self {
        let mut c = Self::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        Self {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order, other.order);
        let n = self.order as usize;
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[(i + j) % n] += a * b;
                }
            }
        }
        Self { order: self.order, coeffs: out }
    }

    /// Complex conjugation: ζ ↦ ζ^{n−1}.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[(n - i) % n] = a.clone();
        }
        Self { order: self.order, coeffs: out }
    }

    /// Canonical residue mod Φ_n (degree < φ(n)).
    pub fn reduced(&self) -> Vec<Rat> {
        let phi = cyclotomic_polynomial(self.order);
        let deg = phi.len() - 1;
        let mut rem = self.coeffs.clone();
        for i in (deg..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            for (j, pj) in phi.iter().enumerate() {
                let sub = &c * pj;
                rem[i - deg + j] -= sub;
            }
        }
        rem.truncate(deg);
        rem
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(Rat::is_zero)
    }

    pub fn equals(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    pub fn to_complex(&self) -> Complex<f64> {
        let n = self.order as f64;
        let mut z = Complex::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let arg = 2.0 * std::f64::consts::PI * k as f64 / n;
            z += Complex::new(arg.cos(), arg.sin()) * crate::rational::rat_to_f64(c);
        }
        z
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| if k == 0 { format_rat(c) } else { format!("{}ζ^{}", format_rat(c), k) })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn cyclotomic_polynomials() {
        // Φ₄ = x² + 1
        let p4 = cyclotomic_polynomial(4);
        assert_eq!(p4, vec![rat(1), rat(0), rat(1)]);
        // Φ₇ = 1 + x + … + x⁶
        let p7 = cyclotomic_polynomial(7);
        assert_eq!(p7, vec![rat(1); 7]);
    }

    #[test]
    fn root_of_unity_relations() {
        let z = Cyclotomic::root_power(7, 1);
        let mut p = Cyclotomic::one(7);
        for _ in 0..7 {
            p = p.mul(&z);
        }
        assert!(p.equals(&Cyclotomic::one(7)));
        // 1 + ζ + … + ζ⁶ = 0
        let mut s = Cyclotomic::zero(7);
        for k in 0..7 {
            s = s.add(&Cyclotomic::root_power(7, k));
        }
        assert!(s.is_zero());
        // conj(ζ)·ζ = 1
        assert!(z.conj().mul(&z).equals(&Cyclotomic::one(7)));
    }

    #[test]
    fn gaussian_integers() {
        let i = Cyclotomic::root_power(4, 1);
        assert!(i.mul(&i).equals(&Cyclotomic::from_rat(4, rat(-1))));
        let z = i.to_complex();
        assert!((z.re).abs() < 1e-15 && (z.im - 1.0).abs() < 1e-15);
    }
}
