//! The model G₂-structure on ℝ⁷ = ℝ ⊕ ℂ³, its coassociative form, pullback
//! and stabiliser checks, and the algebraic pieces of the instanton map.
//!
//! Split coordinates are ordered (s, x₁, y₁, x₂, y₂, x₃, y₃); the associative
//! form is φ = ds∧ω + Im Ω with ω = Σ dxⱼ∧dyⱼ and Ω = dz₁∧dz₂∧dz₃. The
//! standard-coordinate expression of φ₀ on ℝ⁷ is derived by pushing the model
//! form through the adapted frame of the crystallographic group; a residual
//! phase on the holomorphic volume form is calibrated so that the pushed form
//! is exactly invariant under the non-cyclic generator. The frame is
//! positively oriented and the Hodge star uses e₁∧…∧e₇ = +vol throughout.

use crate::crystal::Crystal;
use crate::exterior::{mask_indices, masks_of_grade, MultiVector};
use crate::rational::rat_to_f64;
use nalgebra::{Complex, DMatrix};
use std::collections::BTreeMap;
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type Form = MultiVector<f64>;
pub type CForm = MultiVector<C64>;

#[derive(Debug, Error)]
pub enum G2Error {
    #[error("input matrix is not orthogonal within 1e-12 (residual {0:.3e})")]
    NonOrthogonal(f64),
    #[error("phase calibration failed: invariance residual {0:.3e}")]
    PhaseSolveFailed(f64),
    #[error("frame verification failed: {0}")]
    FrameInconsistent(String),
    #[error(transparent)]
    Crystal(#[from] crate::crystal::CrystalError),
}

/// Kähler form ω = Σ dxⱼ∧dyⱼ with plane j at indices (offset+2j, offset+2j+1).
pub fn kaehler_form(dim: usize, offset: usize) -> Form {
    let mut w = Form::zero(dim);
    for j in 0..3 {
        w = w.add(&Form::one_form(dim, offset + 2 * j).wedge(&Form::one_form(dim, offset + 2 * j + 1)));
    }
    w
}

/// Holomorphic volume form Ω = dz₁∧dz₂∧dz₃ as a complex multivector.
pub fn holomorphic_volume(dim: usize, offset: usize) -> CForm {
    let i = C64::new(0.0, 1.0);
    let mut omega = CForm::scalar(dim, C64::new(1.0, 0.0));
    for j in 0..3 {
        let dz = CForm::one_form(dim, offset + 2 * j)
            .add(&CForm::one_form(dim, offset + 2 * j + 1).scale(&i));
        omega = omega.wedge(&dz);
    }
    omega
}

pub fn re_part(f: &CForm) -> Form {
    f.map_coeffs(|c| c.re)
}

pub fn im_part(f: &CForm) -> Form {
    f.map_coeffs(|c| c.im)
}

pub fn conj_form(f: &CForm) -> CForm {
    f.map_coeffs(|c| c.conj())
}

/// φ = ds∧ω + Im Ω in split coordinates.
pub fn phi_model() -> Form {
    let ds = Form::one_form(7, 0);
    ds.wedge(&kaehler_form(7, 1)).add(&im_part(&holomorphic_volume(7, 1)))
}

/// ψ = ½ ω∧ω + ds∧Re Ω in split coordinates.
pub fn psi_model() -> Form {
    let ds = Form::one_form(7, 0);
    let w = kaehler_form(7, 1);
    w.wedge(&w).scale(&0.5).add(&ds.wedge(&re_part(&holomorphic_volume(7, 1))))
}

/// Exact invariant k-forms under a set of signed-permutation pullbacks:
/// orbit analysis with sign tracking, no floating point.
fn monomial_invariant_forms(rotations: &[&crate::rational::RatMat], k: u32) -> Option<Vec<Form>> {
    use crate::rational::{rat, Rat};
    use num::Zero;
    // Each rotation must be a signed permutation: g*(dyⁱ) = ±dy^{σ(i)}.
    let mut maps: Vec<Vec<(usize, i32)>> = Vec::new();
    for r in rotations {
        let mut per_index = Vec::with_capacity(7);
        for row in r.iter() {
            let mut hit = None;
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    if *x == rat(1) {
                        hit = Some((j, 1i32));
                    } else if *x == rat(-1) {
                        hit = Some((j, -1));
                    } else {
                        return None;
                    }
                }
            }
            per_index.push(hit?);
        }
        maps.push(per_index);
    }
    let _ = Rat::zero();
    // Pullback of a basis mask: image mask plus a sign from coefficients and
    // the reordering of indices.
    let image = |map: &[(usize, i32)], mask: u32| -> (u32, i32) {
        let mut out = 0u32;
        let mut sign = 1i32;
        let mut items: Vec<usize> = Vec::new();
        for i in mask_indices(mask) {
            let (j, s) = map[i];
            sign *= s;
            items.push(j);
        }
        // parity of the sort permutation
        for a in 0..items.len() {
            for b in a + 1..items.len() {
                if items[a] > items[b] {
                    sign = -sign;
                }
            }
        }
        for j in items {
            out |= 1 << j;
        }
        (out, sign)
    };
    // Union-find with relative signs over the grade-k masks.
    let masks = masks_of_grade(7, k);
    let pos: std::collections::HashMap<u32, usize> =
        masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let n = masks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut rel_sign: Vec<i32> = vec![1; n]; // sign relative to parent
    let mut dead: Vec<bool> = vec![false; n];
    fn find(parent: &mut Vec<usize>, rel: &mut Vec<i32>, i: usize) -> (usize, i32) {
        if parent[i] == i {
            return (i, 1);
        }
        let (root, s) = find(parent, rel, parent[i]);
        parent[i] = root;
        rel[i] *= s;
        (root, rel[i])
    }
    for map in &maps {
        for (i, &m) in masks.iter().enumerate() {
            let (im, s) = image(map, m);
            let j = pos[&im];
            // invariance: coeff_image · s = coeff_source  (g*(Σc e) = Σ c e)
            let (ri, si) = find(&mut parent, &mut rel_sign, i);
            let (rj, sj) = find(&mut parent, &mut rel_sign, j);
            if ri == rj {
                if si != sj * s {
                    dead[ri] = true;
                }
            } else {
                parent[rj] = ri;
                rel_sign[rj] = si * s * sj; // so that sign(j→root_i) is consistent
            }
        }
    }
    // collect orbits
    let mut orbit_members: std::collections::HashMap<usize, Vec<(usize, i32)>> =
        std::collections::HashMap::new();
    for i in 0..n {
        let (r, s) = find(&mut parent, &mut rel_sign, i);
        orbit_members.entry(r).or_default().push((i, s));
    }
    let mut out = Vec::new();
    let mut roots: Vec<usize> = orbit_members.keys().cloned().collect();
    roots.sort_unstable();
    for r in roots {
        if dead[r] {
            continue;
        }
        let mut f = Form::zero(7);
        for &(i, s) in &orbit_members[&r] {
            f.add_term(masks[i], s as f64);
        }
        out.push(f);
    }
    Some(out)
}

/// The (±6)-definiteness certificate of a 3-form: the Gram matrix of
/// B(u,v) := (ι_u φ)∧(ι_v φ)∧φ on the standard basis must be 6s·I for a sign
/// s; returns s.
fn g2_orientation_sign(phi: &Form) -> Result<f64, G2Error> {
    let vol_mask = 0b1111111u32;
    let mut sign = 0.0f64;
    for i in 0..7 {
        let mut ei = vec![0.0f64; 7];
        ei[i] = 1.0;
        for j in 0..7 {
            let mut ej = vec![0.0f64; 7];
            ej[j] = 1.0;
            let b = phi.insert(&ei).wedge(&phi.insert(&ej)).wedge(phi).coeff(vol_mask);
            let expect = if i == j { 6.0 } else { 0.0 };
            if i == j {
                if (b.abs() - expect).abs() > 1e-12 {
                    return Err(G2Error::FrameInconsistent(format!(
                        "nondegeneracy defect: B(e{i},e{i}) = {b}"
                    )));
                }
                if sign == 0.0 {
                    sign = b.signum();
                } else if sign != b.signum() {
                    return Err(G2Error::FrameInconsistent("indefinite 3-form".into()));
                }
            } else if b.abs() > 1e-12 {
                return Err(G2Error::FrameInconsistent(format!(
                    "non-diagonal G₂ bilinear: B(e{i},e{j}) = {b}"
                )));
            }
        }
    }
    Ok(sign)
}

/// The adapted frame together with the standard-coordinate forms.
#[derive(Debug, Clone)]
pub struct G2Model {
    /// Columns are the frame vectors b₁..b₇ (orthogonal, det +1), with the
    /// first complex plane rotated so that φ₀ pulls back to the plain model
    /// form through the frame.
    pub frame: DMatrix<f64>,
    /// The Γ-invariant associative form in standard coordinates: integer ±1
    /// coefficients, exact.
    pub phi_std: Form,
    /// ψ₀ = *φ₀ in standard coordinates, exact.
    pub psi_std: Form,
    /// Phase that was absorbed into the frame (radians).
    pub phase: f64,
}

impl G2Model {
    pub fn new(crystal: &Crystal) -> Result<Self, G2Error> {
        // φ₀: the unique Γ-invariant 3-form, computed exactly from the
        // signed-permutation orbit structure and normalized to |φ|² = 7 with
        // positive orientation (the coefficients come out ±1).
        let invariants =
            monomial_invariant_forms(&[&crystal.alpha.rotation, &crystal.beta.rotation], 3)
                .ok_or_else(|| {
                    G2Error::FrameInconsistent("rotations are not signed permutations".into())
                })?;
        if invariants.len() != 1 {
            return Err(G2Error::FrameInconsistent(format!(
                "invariant 3-form space has dimension {}",
                invariants.len()
            )));
        }
        let mut phi_std = invariants.into_iter().next().unwrap();
        if phi_std.terms().any(|(_, c)| c.abs() != 1.0) {
            return Err(G2Error::FrameInconsistent("non-unit invariant coefficients".into()));
        }
        if g2_orientation_sign(&phi_std)? < 0.0 {
            phi_std = phi_std.scale(&-1.0);
        }
        let psi_std = phi_std.hodge_star();
        // Frame: positively oriented eigenframe, with the first complex plane
        // rotated so that the pullback of φ₀ through the frame is exactly the
        // model form ds∧ω + Im Ω.
        let basis = crystal.adapted_basis()?;
        let frame0 = DMatrix::<f64>::from_fn(7, 7, |i, j| basis.frame[(i, j)]);
        let in_frame = phi_std.pullback(&frame0);
        let ds_w = Form::one_form(7, 0).wedge(&kaehler_form(7, 1));
        let im_o = im_part(&holomorphic_volume(7, 1));
        let re_o = re_part(&holomorphic_volume(7, 1));
        // in_frame = ds∧ω + cosΨ·ImΩ + sinΨ·ReΩ: project onto the phase circle.
        let target = in_frame.sub(&ds_w);
        let (mut c, mut s) = (0.0f64, 0.0f64);
        let (mut n1, mut n2) = (0.0f64, 0.0f64);
        for &mask in &masks_of_grade(7, 3) {
            c += target.coeff(mask) * im_o.coeff(mask);
            n1 += im_o.coeff(mask) * im_o.coeff(mask);
            s += target.coeff(mask) * re_o.coeff(mask);
            n2 += re_o.coeff(mask) * re_o.coeff(mask);
        }
        c /= n1;
        s /= n2;
        let defect = target.sub(&im_o.scale(&c)).sub(&re_o.scale(&s)).norm_max();
        let unit_defect = (c * c + s * s - 1.0).abs();
        if defect > 1e-12 || unit_defect > 1e-10 {
            return Err(G2Error::PhaseSolveFailed(defect.max(unit_defect)));
        }
        let phase = s.atan2(c);
        // Rotate the first plane by −Ψ: pullback through B·D_{−Ψ} then sees
        // Im(e^{i·0}Ω).
        let mut frame = frame0.clone();
        for i in 0..7 {
            let (b2, b3) = (frame0[(i, 1)], frame0[(i, 2)]);
            frame[(i, 1)] = c * b2 - s * b3;
            frame[(i, 2)] = s * b2 + c * b3;
        }
        let model = Self { frame, phi_std, psi_std, phase };
        model.verify()?;
        Ok(model)
    }

    fn verify(&self) -> Result<(), G2Error> {
        let hodge_defect = self.phi_std.hodge_star().sub(&self.psi_std).norm_max();
        let in_frame_phi = self.phi_std.pullback(&self.frame).sub(&phi_model()).norm_max();
        let in_frame_psi = self.psi_std.pullback(&self.frame).sub(&psi_model()).norm_max();
        let worst = hodge_defect.max(in_frame_phi).max(in_frame_psi);
        if worst > 1e-12 {
            return Err(G2Error::FrameInconsistent(format!(
                "model-form verification defect {worst:.3e}"
            )));
        }
        Ok(())
    }
}

fn orthogonality_residual(g: &DMatrix<f64>) -> f64 {
    let p = g.transpose() * g;
    let id = DMatrix::<f64>::identity(g.nrows(), g.ncols());
    (p - id).abs().max()
}

/// Tolerance-1e-10 test whether g*φ₀ = φ₀. Rejects non-orthogonal input.
pub fn preserves_phi(model: &G2Model, g: &DMatrix<f64>) -> Result<bool, G2Error> {
    let res = orthogonality_residual(g);
    if res > 1e-12 {
        return Err(G2Error::NonOrthogonal(res));
    }
    Ok(model.phi_std.pullback(g).sub(&model.phi_std).norm_max() <= 1e-10)
}

/// Tolerance-1e-10 test whether g*ψ₀ = ψ₀. Rejects non-orthogonal input.
pub fn preserves_psi(model: &G2Model, g: &DMatrix<f64>) -> Result<bool, G2Error> {
    let res = orthogonality_residual(g);
    if res > 1e-12 {
        return Err(G2Error::NonOrthogonal(res));
    }
    Ok(model.psi_std.pullback(g).sub(&model.psi_std).norm_max() <= 1e-10)
}

/// Form with values in a matrix Lie algebra (antisymmetric n×n fibers).
#[derive(Debug, Clone, PartialEq)]
pub struct LieForm {
    pub dim: usize,
    pub fiber: usize,
    pub coeffs: BTreeMap<u32, DMatrix<f64>>,
}

impl LieForm {
    pub fn zero(dim: usize, fiber: usize) -> Self {
        Self { dim, fiber, coeffs: BTreeMap::new() }
    }

    pub fn add_term(&mut self, mask: u32, value: DMatrix<f64>) {
        debug_assert_eq!(value.nrows(), self.fiber);
        let entry = self
            .coeffs
            .entry(mask)
            .or_insert_with(|| DMatrix::<f64>::zeros(self.fiber, self.fiber));
        *entry += value;
        if entry.abs().max() == 0.0 {
            self.coeffs.remove(&mask);
        }
    }

    pub fn coeff(&self, mask: u32) -> DMatrix<f64> {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| DMatrix::<f64>::zeros(self.fiber, self.fiber))
    }

    pub fn grade(&self, k: u32) -> Self {
        Self {
            dim: self.dim,
            fiber: self.fiber,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(m, _)| m.count_ones() == k)
                .map(|(&m, v)| (m, v.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            fiber: self.fiber,
            coeffs: self.coeffs.iter().map(|(&m, v)| (m, v * s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&m, v) in &other.coeffs {
            out.add_term(m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn norm_max(&self) -> f64 {
        self.coeffs.values().map(|v| v.abs().max()).fold(0.0, f64::max)
    }

    /// Max antisymmetry defect of the fibers.
    pub fn antisymmetry_defect(&self) -> f64 {
        self.coeffs
            .values()
            .map(|v| (v + v.transpose()).abs().max())
            .fold(0.0, f64::max)
    }

    /// Pointwise ℓ²-style norm: sqrt(Σ_masks ⟨X_m, X_m⟩) with the fiber inner
    /// product ⟨X,Y⟩ = −tr(XY)/2.
    pub fn norm_l2(&self) -> f64 {
        self.coeffs.values().map(|v| -0.5 * (v * v).trace()).sum::<f64>().sqrt()
    }

    /// Graded wedge with Lie bracket on fibers: [a ∧ b].
    pub fn wedge_bracket(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.fiber);
        for (&m1, x) in &self.coeffs {
            for (&m2, y) in &other.coeffs {
                if m1 & m2 != 0 {
                    continue;
                }
                let sign = crate::exterior::merge_sign(m1, m2) as f64;
                out.add_term(m1 | m2, (x * y - y * x) * sign);
            }
        }
        out
    }

    /// Wedge with a scalar form.
    pub fn wedge_scalar(&self, form: &Form) -> Self {
        let mut out = Self::zero(self.dim, self.fiber);
        for (&m1, x) in &self.coeffs {
            for (m2, c) in form.terms() {
                if m1 & m2 != 0 {
                    continue;
                }
                let sign = crate::exterior::merge_sign(m1, m2) as f64;
                out.add_term(m1 | m2, x * (*c * sign));
            }
        }
        out
    }

    /// Fiberwise Hodge star.
    pub fn hodge_star(&self) -> Self {
        let full = (1u32 << self.dim) - 1;
        let mut out = Self::zero(self.dim, self.fiber);
        for (&m, x) in &self.coeffs {
            let comp = full & !m;
            let sign = crate::exterior::merge_sign(m, comp) as f64;
            out.add_term(comp, x * sign);
        }
        out
    }

    /// [i_{a♯}, ξ]: interior product over the form indices of `a` (a 1-form)
    /// with the Lie bracket of fibers.
    pub fn insert_bracket(a: &Self, xi: &Self) -> Self {
        let mut out = Self::zero(xi.dim, xi.fiber);
        for (&ma, x) in &a.coeffs {
            debug_assert_eq!(ma.count_ones(), 1);
            let i = ma.trailing_zeros();
            for (&m, z) in &xi.coeffs {
                if m & (1 << i) == 0 {
                    continue;
                }
                // position of i inside m
                let pos = (m & ((1 << i) - 1)).count_ones();
                let sign = if pos % 2 == 1 { -1.0 } else { 1.0 };
                out.add_term(m & !(1 << i), (x * z - z * x) * sign);
            }
        }
        out
    }

    /// Pullback of the form indices by a linear map, fibers untouched.
    pub fn pullback_form(&self, g: &DMatrix<f64>) -> Self {
        let mut out = Self::zero(self.dim, self.fiber);
        for (&m, x) in &self.coeffs {
            let scalar = Form::term(self.dim, m, 1.0).pullback(g);
            for (m2, c) in scalar.terms() {
                out.add_term(m2, x * *c);
            }
        }
        out
    }

    /// Fiber conjugation X ↦ U X U⁻¹ (U orthogonal).
    pub fn conjugate_fiber(&self, u: &DMatrix<f64>) -> Self {
        let ut = u.transpose();
        Self {
            dim: self.dim,
            fiber: self.fiber,
            coeffs: self.coeffs.iter().map(|(&m, x)| (m, u * x * &ut)).collect(),
        }
    }
}

/// A pointwise sample for the instanton map: 1-form and 7-form parts with
/// antisymmetric fibers.
#[derive(Debug, Clone)]
pub struct PointSample {
    pub a: LieForm,
    pub xi: LieForm,
}

impl PointSample {
    pub fn check_valid(&self) -> Result<(), G2Error> {
        let d = self.a.antisymmetry_defect().max(self.xi.antisymmetry_defect());
        if d > 1e-14 {
            return Err(G2Error::FrameInconsistent(format!("fiber antisymmetry defect {d:.3e}")));
        }
        Ok(())
    }

    pub fn norm(&self) -> f64 {
        (self.a.norm_l2().powi(2) + self.xi.norm_l2().powi(2)).sqrt()
    }
}

/// Residual of the insertion identity [i_{a♯}, ξ] = *[a ∧ *ξ], both sides
/// expanded independently over index masks.
pub fn insertion_identity_residual(a: &LieForm, xi: &LieForm) -> f64 {
    let lhs = LieForm::insert_bracket(a, xi);
    let rhs = a.wedge_bracket(&xi.hodge_star()).hodge_star();
    lhs.sub(&rhs).norm_max()
}

/// Q(a, ξ) = (½[a∧a]∧ψ + [i_{a♯}, ξ], 0): the quadratic part of the
/// instanton map, independent of the base connection.
pub fn quadratic_term(p: &PointSample, psi: &Form) -> (LieForm, LieForm) {
    let first = p
        .a
        .wedge_bracket(&p.a)
        .scale(0.5)
        .wedge_scalar(psi)
        .add(&LieForm::insert_bracket(&p.a, &p.xi));
    (first, LieForm::zero(p.a.dim, p.a.fiber))
}

/// Algebraic (zeroth-order) part of d*_B η = … ± *[B∧*η] on a k-form η:
/// the bracket term (−1)^k *[B ∧ *η].
pub fn dstar_algebraic(b: &LieForm, eta: &LieForm, k: u32) -> LieForm {
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    b.wedge_bracket(&eta.hodge_star()).hodge_star().scale(sign)
}

/// Pointwise algebraic instanton map for constant fields: all derivative
/// terms vanish and only bracket terms survive. `b` is the base connection
/// value at the point.
pub fn upsilon_algebraic(
    b: &LieForm,
    p: &PointSample,
    psi: &Form,
) -> (LieForm, LieForm) {
    let total = b.add(&p.a);
    let curv = total.wedge_bracket(&total).scale(0.5);
    let first = curv.wedge_scalar(psi).sub(&dstar_algebraic(&total, &p.xi, 7));
    let second = dstar_algebraic(b, &p.a, 1);
    (first, second)
}

/// Pointwise algebraic linearisation matching [`upsilon_algebraic`].
pub fn linearisation_algebraic(
    b: &LieForm,
    p: &PointSample,
    psi: &Form,
) -> (LieForm, LieForm) {
    let first = b
        .wedge_bracket(&p.a)
        .wedge_scalar(psi)
        .sub(&dstar_algebraic(b, &p.xi, 7));
    let second = dstar_algebraic(b, &p.a, 1);
    (first, second)
}

/// ℤ₂ pullback on Lie-algebra valued forms: (y ↦ −y) on the form indices and
/// Ad_U on the fibers.
pub fn z2_pullback(form: &LieForm, u: &DMatrix<f64>) -> LieForm {
    let mut out = LieForm::zero(form.dim, form.fiber);
    let ut = u.transpose();
    for (&m, x) in &form.coeffs {
        let parity = if m.count_ones() % 2 == 1 { -1.0 } else { 1.0 };
        out.add_term(m, (u * x * &ut) * parity);
    }
    out
}

/// Random antisymmetric fiber.
pub fn random_antisymmetric(n: usize, rng: &mut impl rand::Rng) -> DMatrix<f64> {
    let raw = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    (&raw - raw.transpose()) * 0.5
}

/// Random Lie-algebra valued form of homogeneous grade.
pub fn random_lie_form(dim: usize, fiber: usize, k: u32, rng: &mut impl rand::Rng) -> LieForm {
    let mut f = LieForm::zero(dim, fiber);
    for m in masks_of_grade(dim, k) {
        f.add_term(m, random_antisymmetric(fiber, rng));
    }
    f
}

/// The 56 rotation parts of the quotient classes as f64 matrices.
pub fn quotient_rotations(crystal: &Crystal) -> Result<Vec<DMatrix<f64>>, G2Error> {
    let classes = crystal.quotient_enumerate()?;
    Ok(classes
        .iter()
        .map(|c| DMatrix::<f64>::from_fn(7, 7, |i, j| rat_to_f64(&c.rotation[i][j])))
        .collect())
}

pub use crate::exterior::masks_of_grade as form_masks_of_grade;

#[allow(unused_imports)]
use mask_indices as _;
