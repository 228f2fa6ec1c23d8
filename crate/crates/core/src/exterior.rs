//! Sparse exterior algebra on ℝⁿ (n ≤ 12) over a generic scalar.
//!
//! Basis k-forms are indexed by bitmasks; the metric is the standard
//! Euclidean one and the orientation is e₁∧…∧e_n = +vol. Scalars are `f64`
//! or `Complex<f64>`; coefficients are stored sparsely.

use nalgebra::{Complex, DMatrix};
use num::traits::MulAdd;
use num::{One, Zero};
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Scalar requirements for form coefficients.
pub trait Coeff:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + AddAssign
    + MulAdd<Output = Self>
    + std::fmt::Debug
    + 'static
{
    fn from_f64(x: f64) -> Self;
    fn abs_norm(&self) -> f64;
}

impl Coeff for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn abs_norm(&self) -> f64 {
        self.abs()
    }
}

impl Coeff for Complex<f64> {
    fn from_f64(x: f64) -> Self {
        Complex::new(x, 0.0)
    }
    fn abs_norm(&self) -> f64 {
        self.norm()
    }
}

/// Sign of reordering the concatenation (a, b) of two disjoint index sets
/// into ascending order: (−1)^{#{(i,j) ∈ a×b : i > j}}.
pub fn merge_sign(a: u32, b: u32) -> i32 {
    let mut sign = 1i32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        // indices in `a` strictly greater than j
        let higher = (a >> (j + 1)).count_ones();
        if higher % 2 == 1 {
            sign = -sign;
        }
        bb &= bb - 1;
    }
    sign
}

/// A graded element of Λ*(ℝⁿ)*, coefficients over basis masks.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiVector<S: Coeff> {
    pub dim: usize,
    coeffs: BTreeMap<u32, S>,
}

impl<S: Coeff> MultiVector<S> {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= 12);
        Self { dim, coeffs: BTreeMap::new() }
    }

    pub fn term(dim: usize, mask: u32, coeff: S) -> Self {
        let mut m = Self::zero(dim);
        m.add_term(mask, coeff);
        m
    }

    pub fn scalar(dim: usize, value: S) -> Self {
        Self::term(dim, 0, value)
    }

    /// The basis 1-form dyⁱ (0-based index).
    pub fn one_form(dim: usize, i: usize) -> Self {
        Self::term(dim, 1 << i, S::one())
    }

    /// Volume form dy¹∧…∧dyⁿ.
    pub fn volume(dim: usize) -> Self {
        Self::term(dim, (1u32 << dim) - 1, S::one())
    }

    pub fn add_term(&mut self, mask: u32, coeff: S) {
        debug_assert!(mask < (1 << self.dim));
        let entry = self.coeffs.entry(mask).or_insert_with(S::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&mask);
        }
    }

    pub fn coeff(&self, mask: u32) -> S {
        self.coeffs.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.coeffs.iter().map(|(&m, c)| (m, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn grades(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self.coeffs.keys().map(|m| m.count_ones()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Restriction to homogeneous degree k.
    pub fn grade(&self, k: u32) -> Self {
        Self {
            dim: self.dim,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(&m, c)| (m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = Self::zero(self.dim);
        for (m, c) in self.terms() {
            out.add_term(m, c.clone() * s.clone());
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                if m1 & m2 != 0 {
                    continue;
                }
                let sign = merge_sign(m1, m2);
                let prod = c1.clone() * c2.clone();
                out.add_term(m1 | m2, if sign < 0 { -prod } else { prod });
            }
        }
        out
    }

    /// Euclidean Hodge star with orientation e₁∧…∧e_n = +vol.
    pub fn hodge_star(&self) -> Self {
        let full = (1u32 << self.dim) - 1;
        let mut out = Self::zero(self.dim);
        for (m, c) in self.terms() {
            let comp = full & !m;
            let sign = merge_sign(m, comp);
            out.add_term(comp, if sign < 0 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Interior product ι_v with a vector (components in the scalar ring).
    pub fn insert(&self, v: &[S]) -> Self {
        assert_eq!(v.len(), self.dim);
        let mut out = Self::zero(self.dim);
        for (m, c) in self.terms() {
            let mut mm = m;
            let mut pos = 0u32;
            while mm != 0 {
                let i = mm.trailing_zeros();
                if !v[i as usize].is_zero() {
                    let prod = v[i as usize].clone() * c.clone();
                    out.add_term(m & !(1 << i), if pos % 2 == 1 { -prod } else { prod });
                }
                pos += 1;
                mm &= mm - 1;
            }
        }
        out
    }

    /// Pullback (g*η)(v₁,…,v_k) = η(gv₁,…,gv_k) via Cauchy–Binet minors.
    pub fn pullback(&self, g: &DMatrix<S>) -> Self {
        assert_eq!(g.nrows(), self.dim);
        assert_eq!(g.ncols(), self.dim);
        let mut out = Self::zero(self.dim);
        for (mask_i, c) in self.terms() {
            let rows = mask_indices(mask_i);
            let k = rows.len();
            if k == 0 {
                out.add_term(0, c.clone());
                continue;
            }
            for mask_j in masks_of_grade(self.dim, k as u32) {
                let cols = mask_indices(mask_j);
                let minor = submatrix_det(g, &rows, &cols);
                if minor.is_zero() {
                    continue;
                }
                out.add_term(mask_j, c.clone() * minor);
            }
        }
        out
    }

    /// ⟨·,·⟩ with orthonormal basis masks; conjugation is not applied, so for
    /// complex scalars this is the bilinear pairing.
    pub fn dot(&self, other: &Self) -> S {
        let mut s = S::zero();
        for (m, c) in self.terms() {
            s += c.clone() * other.coeff(m);
        }
        s
    }

    pub fn norm_max(&self) -> f64 {
        self.coeffs.values().map(|c| c.abs_norm()).fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, -c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Coeff>(&self, f: impl Fn(&S) -> T) -> MultiVector<T> {
        let mut out = MultiVector::<T>::zero(self.dim);
        for (m, c) in self.terms() {
            let fc = f(c);
            if !fc.is_zero() {
                out.add_term(m, fc);
            }
        }
        out
    }
}

pub fn mask_indices(mask: u32) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

pub fn masks_of_grade(dim: usize, k: u32) -> Vec<u32> {
    (0u32..(1 << dim)).filter(|m| m.count_ones() == k).collect()
}

/// Laplace-expansion determinant of the (rows × cols) submatrix; sizes ≤ 7.
fn submatrix_det<S: Coeff>(g: &DMatrix<S>, rows: &[usize], cols: &[usize]) -> S {
    debug_assert_eq!(rows.len(), cols.len());
    fn expand<S: Coeff>(g: &DMatrix<S>, rows: &[usize], cols: &[usize]) -> S {
        match rows.len() {
            0 => S::one(),
            1 => g[(rows[0], cols[0])].clone(),
            _ => {
                let mut det = S::zero();
                let rest = &rows[1..];
                for (j, &c) in cols.iter().enumerate() {
                    let entry = g[(rows[0], c)].clone();
                    if entry.is_zero() {
                        continue;
                    }
                    let minor_cols: Vec<usize> =
                        cols.iter().enumerate().filter(|&(jj, _)| jj != j).map(|(_, &cc)| cc).collect();
                    let minor = expand(g, rest, &minor_cols);
                    let signed = if j % 2 == 1 { -(entry * minor) } else { entry * minor };
                    det += signed;
                }
                det
            }
        }
    }
    expand(g, rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F = MultiVector<f64>;

    fn dmat_from(g: [[f64; 3]; 3]) -> DMatrix<f64> {
        DMatrix::from_fn(3, 3, |i, j| g[i][j])
    }

    #[test]
    fn wedge_basis_and_sign() {
        let dx = F::one_form(3, 0);
        let dy = F::one_form(3, 1);
        let dxdy = dx.wedge(&dy);
        assert_eq!(dxdy.coeff(0b011), 1.0);
        let dydx = dy.wedge(&dx);
        assert_eq!(dydx.coeff(0b011), -1.0);
        assert!(dx.wedge(&dx).is_zero());
    }

    #[test]
    fn hodge_star_dim7_squares_to_identity() {
        for k in 0..=7u32 {
            for m in masks_of_grade(7, k) {
                let f = F::term(7, m, 1.0);
                let ss = f.hodge_star().hodge_star();
                assert_eq!(ss, f, "mask {m:b}");
            }
        }
    }

    #[test]
    fn hodge_star_dim6_sign() {
        // ** = (−1)^{k(6−k)} in six dimensions
        for k in 0..=6u32 {
            let sign = if (k * (6 - k)) % 2 == 0 { 1.0} else { -1.0 };
            for m in masks_of_grade(6, k) {
                let f = F::term(6, m, 1.0);
                let ss = f.hodge_star().hodge_star();
                assert_eq!(ss, f.scale(&sign), "mask {m:b}");
            }
        }
    }

    #[test]
    fn insertion_is_antiderivation_on_basis() {
        let v = [1.0, 2.0, 3.0];
        let f = F::one_form(3, 0).wedge(&F::one_form(3, 1));
        // ι_v(dx∧dy) = v₀ dy − v₁ dx
        let got = f.insert(&v);
        assert_eq!(got.coeff(0b010), 1.0);
        assert_eq!(got.coeff(0b001), -2.0);
    }

    #[test]
    fn pullback_by_identity_and_composition() {
        let id = DMatrix::<f64>::identity(3, 3);
        let g = dmat_from([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.5], [0.0, 2.0, 1.0]]);
        let h = dmat_from([[1.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.3, 0.0, 2.0]]);
        let f = F::term(3, 0b011, 2.0).add(&F::term(3, 0b101, -1.0)).add(&F::one_form(3, 2));
        assert_eq!(f.pullback(&id), f);
        // (gh)* = h* ∘ g*
        let gh = &g * &h;
        let lhs = f.pullback(&gh);
        let rhs = f.pullback(&g).pullback(&h);
        for m in 0..8u32 {
            assert!((lhs.coeff(m) - rhs.coeff(m)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn wedge_associative_and_graded_commutative(
            a_terms in proptest::collection::vec((0u32..128, -4i32..5), 1..4),
            b_terms in proptest::collection::vec((0u32..128, -4i32..5), 1..4),
            c_terms in proptest::collection::vec((0u32..128, -4i32..5), 1..4),
        ) {
            let build = |ts: &[(u32, i32)], grade: u32| {
                let mut f = F::zero(7);
                for &(m, c) in ts {
                    if m.count_ones() == grade {
                        f.add_term(m, c as f64);
                    }
                }
                f
            };
            // homogeneous pieces so graded commutativity is crisp
            for (ka, kb) in [(1u32, 2u32), (2, 3), (1, 1), (3, 2)] {
                let a = build(&a_terms, ka);
                let b = build(&b_terms, kb);
                let c = build(&c_terms, 1);
                let assoc_l = a.wedge(&b).wedge(&c);
                let assoc_r = a.wedge(&b.wedge(&c));
                prop_assert!(assoc_l.sub(&assoc_r).norm_max() < 1e-13);
                let sign = if (ka * kb) % 2 == 0 { 1.0 } else { -1.0 };
                let comm = a.wedge(&b).sub(&b.wedge(&a).scale(&sign));
                prop_assert!(comm.norm_max() < 1e-13);
            }
        }

        #[test]
        fn star_preserves_norm(m in 0u32..128) {
            let f = F::term(7, m, 1.0);
            let sf = f.hodge_star();
            prop_assert_eq!(sf.dot(&sf), 1.0);
            // η ∧ *η = |η|² vol
            let wedge = f.wedge(&sf);
            prop_assert_eq!(wedge.coeff(0b1111111), 1.0);
        }
    }
}
