//! Fourier-truncated twisted Hodge–de Rham operators over the flat orbifold,
//! the brute-force oracle for kernel/cokernel dimensions of the linearised
//! instanton operator at the flat connections.
//!
//! Sections of the adjoint bundle pull back to the ℤ⁷-cover torus as fields
//! twisted by the translation monodromies. Simultaneously diagonalizing the
//! seven commuting monodromies splits the complexified fiber 𝔰𝔬ℝ(ℂ⁷)⊗ℂ into
//! 91 eigenlines with frequency offsets μ ∈ [0,1)⁷; modes are pairs (k, line)
//! with frequency ν = k + μ. The residual order-56 quotient group permutes
//! modes, so operators restrict to invariants orbit by orbit: a mode orbit
//! with stabilizer H contributes the H-invariant subspace of the small
//! per-mode component space, and the operator acts there by its single-mode
//! matrix. Truncation is by |ν|_∞, which signed permutations preserve
//! exactly, so the group action is closed on the truncated mode set.

use crate::crystal::{Crystal, IsometryElement};
use crate::exterior::MultiVector;
use crate::g2::{Form, G2Model};
use crate::monodromy::{adjoint_matrix, so_basis, RepFamilyPoint};
use crate::rational::{rat_to_f64, DIM};
use crate::semilinear::{C64, SemilinearMap};
use nalgebra::{DMatrix, DVector};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("translation monodromies do not diagonalize on the structured lines (residual {0:.3e})")]
    LineMismatch(f64),
    #[error("eigenvalue collision within a block (θ⁴ = 1); orbit assembly needs simple eigenlines")]
    DegenerateTheta,
    #[error("group action does not permute the eigenlines (overlap {0:.3e})")]
    NotMonomialOnLines(f64),
    #[error(transparent)]
    Monodromy(#[from] crate::monodromy::MonodromyError),
    #[error(transparent)]
    Crystal(#[from] crate::crystal::CrystalError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

/// One simultaneous eigenline of the translation monodromies.
#[derive(Debug, Clone)]
pub struct EigenLine {
    /// Complex combination of the orthonormal real 𝔰𝔬-basis (91 entries).
    pub vector: DVector<C64>,
    /// Frequency offsets in [0, 1)⁷.
    pub mu: [f64; 7],
}

/// A quotient-group element together with its action on modes and lines.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub rotation: [[f64; 7]; 7],
    pub translation: [f64; 7],
    pub det: f64,
    /// Ad maps line ℓ to `line_perm[ℓ]` with scalar `line_scale[ℓ]`.
    pub line_perm: Vec<usize>,
    pub line_scale: Vec<C64>,
    /// Pullback coefficient matrix on dy-components: row c, column d gives
    /// the dy^c-coefficient of (γ⁻¹)*dy^d.
    pub comp_one_form: [[f64; 7]; 7],
}

/// The twisted mode data for one θ: eigenlines, group actions, and the
/// component machinery shared by all truncations.
pub struct TwistedModeBasis {
    pub lines: Vec<EigenLine>,
    pub group: Vec<GroupAction>,
    /// The ℤ₂ generator (point inversion with fiber conjugation), same format.
    pub z2: GroupAction,
    pub psi: Form,
}

fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 - 1e-12 {
        0.0
    } else {
        f
    }
}

/// Small complex nullspace by Gaussian elimination with partial pivoting.
pub fn complex_kernel(m: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        // find pivot
        let (mut best, mut best_val) = (r, 0.0);
        for rr in r..rows {
            if a[(rr, c)].norm() > best_val {
                best = rr;
                best_val = a[(rr, c)].norm();
            }
        }
        if best_val <= tol {
            continue;
        }
        a.swap_rows(r, best);
        let inv = C64::new(1.0, 0.0) / a[(r, c)];
        for cc in c..cols {
            a[(r, cc)] *= inv;
        }
        for rr in 0..rows {
            if rr != r && a[(rr, c)].norm() > 0.0 {
                let f = a[(rr, c)];
                for cc in c..cols {
                    let sub = f * a[(r, cc)];
                    a[(rr, cc)] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut kernel = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = DVector::<C64>::zeros(cols);
        v[free] = C64::new(1.0, 0.0);
        for (rr, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[(rr, free)];
        }
        let n = v.norm();
        kernel.push(v.unscale(n));
    }
    kernel
}

/// Gram–Schmidt orthonormal basis of the range of a (projector-like) matrix.
fn range_basis(p: &DMatrix<C64>, tol: f64) -> Vec<DVector<C64>> {
    let mut basis: Vec<DVector<C64>> = Vec::new();
    for j in 0..p.ncols() {
        let mut v = p.column(j).into_owned();
        for b in &basis {
            let proj = b.dotc(&v);
            v -= b * proj;
        }
        if v.norm() > tol {
            let n = v.norm();
            basis.push(v.unscale(n));
        }
    }
    basis
}

impl TwistedModeBasis {
    pub fn new(
        crystal: &Crystal,
        point: &RepFamilyPoint<C64>,
        model: &G2Model,
    ) -> Result<Self, SpectralError> {
        // Translation monodromies f_θ(T_i): diagonal complex-linear maps.
        let mut trans: Vec<SemilinearMap<C64>> = Vec::with_capacity(7);
        for j in 0..DIM {
            let w = crystal.word_for_unit_translation(j)?;
            trans.push(point.eval_word(&w)?);
        }
        let diag: Vec<[C64; 7]> = trans
            .iter()
            .map(|t| std::array::from_fn(|k| t.linear[k][k]))
            .collect();
        // structured eigenlines of all Ad_{T_i} on 𝔰𝔬ℝ(ℂ⁷)⊗ℂ
        let basis = so_basis();
        let idx = |p: usize, q: usize| -> usize {
            basis.iter().position(|&(a, b)| (a, b) == (p.min(q), p.max(q))).unwrap()
        };
        let sgn = |p: usize, q: usize| -> f64 {
            if p < q {
                1.0
            } else {
                -1.0
            }
        };
        // element u∧v as a 91-vector with u, v basis indices of ℝ¹⁴
        let wedge_vec = |p: usize, q: usize| -> DVector<C64> {
            let mut v = DVector::<C64>::zeros(91);
            v[idx(p, q)] = C64::new(sgn(p, q), 0.0);
            v
        };
        let ad_mats: Vec<DMatrix<f64>> = trans.iter().map(adjoint_matrix).collect();
        let mut lines: Vec<EigenLine> = Vec::new();
        // diagonal rotation lines e_j∧f_j: μ = 0
        for j in 0..7 {
            lines.push(EigenLine { vector: wedge_vec(j, 7 + j), mu: [0.0; 7] });
        }
        // blocks (j,k), j<k: four lines with eigenvalues λ_jλ̄_k, λ̄_jλ_k,
        // λ_jλ_k, λ̄_jλ̄_k under each translation
        for j in 0..7 {
            for k in j + 1..7 {
                let span = [
                    wedge_vec(j, k),
                    wedge_vec(j, 7 + k),
                    wedge_vec(7 + j, k),
                    wedge_vec(7 + j, 7 + k),
                ];
                // Ad restricted to the block, as a complex 4×4 per translation
                let restrict = |ad: &DMatrix<f64>| -> DMatrix<C64> {
                    DMatrix::<C64>::from_fn(4, 4, |r, c| {
                        let mut s = 0.0;
                        for e in 0..91 {
                            if span[r].as_slice()[e].norm() > 0.0 {
                                // project Ad(span[c]) onto span[r]
                                let mut val = 0.0;
                                for e2 in 0..91 {
                                    val += ad[(e, e2)] * span[c].as_slice()[e2].re;
                                }
                                s += span[r].as_slice()[e].re * val;
                            }
                        }
                        C64::new(s, 0.0)
                    })
                };
                let blocks: Vec<DMatrix<C64>> = ad_mats.iter().map(restrict).collect();
                let eigenvalue_sets: [Vec<C64>; 4] = [
                    (0..7).map(|i| diag[i][j] * diag[i][k].conj()).collect::<Vec<_>>().try_into().unwrap(),
                    (0..7).map(|i| (diag[i][j] * diag[i][k].conj()).conj()).collect::<Vec<_>>().try_into().unwrap(),
                    (0..7).map(|i| diag[i][j] * diag[i][k]).collect::<Vec<_>>().try_into().unwrap(),
                    (0..7).map(|i| (diag[i][j] * diag[i][k]).conj()).collect::<Vec<_>>().try_into().unwrap(),
                ];
                // collision guard within the block
                for a in 0..4 {
                    for b in a + 1..4 {
                        let same = (0..7)
                            .all(|i| (eigenvalue_sets[a][i] - eigenvalue_sets[b][i]).norm() < 1e-9);
                        if same {
                            return Err(SpectralError::DegenerateTheta);
                        }
                    }
                }
                for evs in &eigenvalue_sets {
                    // stacked (M_i − λ_i) on the 4-dim block
                    let mut stack = DMatrix::<C64>::zeros(28, 4);
                    for (i, m) in blocks.iter().enumerate() {
                        let shifted = m - DMatrix::<C64>::identity(4, 4) * evs[i];
                        stack.view_mut((4 * i, 0), (4, 4)).copy_from(&shifted);
                    }
                    let kern = complex_kernel(&stack, 1e-9);
                    if kern.len() != 1 {
                        return Err(SpectralError::DegenerateTheta);
                    }
                    let coeff = &kern[0];
                    let mut vector = DVector::<C64>::zeros(91);
                    for (c, s) in span.iter().enumerate() {
                        vector += s.map(|x| x * coeff[c]);
                    }
                    let mu: [f64; 7] = std::array::from_fn(|i| {
                        frac(evs[i].arg() / (2.0 * std::f64::consts::PI))
                    });
                    lines.push(EigenLine { vector, mu });
                }
            }
        }
        debug_assert_eq!(lines.len(), 91);
        // verify simultaneous diagonalization
        let mut worst: f64 = 0.0;
        for line in &lines {
            for (i, ad) in ad_mats.iter().enumerate() {
                let image = apply_real_to_complex(ad, &line.vector);
                let lam = C64::new(0.0, 2.0 * std::f64::consts::PI * line.mu[i]).exp();
                let resid = (&image - line.vector.map(|x| x * lam)).norm();
                worst = worst.max(resid);
            }
        }
        if worst > 1e-12 {
            return Err(SpectralError::LineMismatch(worst));
        }
        // group actions for the 56 class representatives
        let table = crystal.coset_table()?;
        let mut group = Vec::new();
        for (rep, (b_bits, a_exp)) in table {
            let word = crate::crystal::NormalForm {
                t_exponents: [0; 7],
                b_bits,
                a_exponent: a_exp,
            }
            .word();
            // lattice residue between the class representative and the word
            let coset = crystal.eval_word(&word);
            let resid = rep.compose(&coset.inverse());
            let tvec: [i64; 7] = std::array::from_fn(|i| {
                let r = &resid.translation[i];
                debug_assert!(r.denom() == &num::BigInt::from(1));
                r.numer().to_string().parse().unwrap()
            });
            let full_word = crystal.word_for_translation(&tvec)?.concat(&word);
            let image = point.eval_word(&full_word)?;
            group.push(make_action(&rep, &image, &lines)?);
        }
        // ℤ₂ generator: point inversion with componentwise conjugation
        let z2 = {
            let minus = IsometryElement {
                rotation: {
                    let mut m = crate::rational::mat_identity();
                    for (i, row) in m.iter_mut().enumerate() {
                        row[i] = -row[i].clone();
                    }
                    m
                },
                translation: crate::rational::vec_zero(),
            };
            make_action(&minus, &SemilinearMap::<C64>::conjugation(), &lines)?
        };
        Ok(Self { lines, group, z2, psi: model.psi_std.clone() })
    }
}

fn apply_real_to_complex(m: &DMatrix<f64>, v: &DVector<C64>) -> DVector<C64> {
    DVector::from_fn(m.nrows(), |i, _| {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..m.ncols() {
            s += v[j] * m[(i, j)];
        }
        s
    })
}

fn make_action(
    iso: &IsometryElement,
    image: &SemilinearMap<C64>,
    lines: &[EigenLine],
) -> Result<GroupAction, SpectralError> {
    let rotation: [[f64; 7]; 7] =
        std::array::from_fn(|i| std::array::from_fn(|j| rat_to_f64(&iso.rotation[i][j])));
    let translation: [f64; 7] = std::array::from_fn(|i| rat_to_f64(&iso.translation[i]));
    let rot = DMatrix::<f64>::from_fn(7, 7, |i, j| rotation[i][j]);
    let det = rot.clone().lu().determinant();
    let ad = adjoint_matrix(image);
    let mut line_perm = Vec::with_capacity(lines.len());
    let mut line_scale = Vec::with_capacity(lines.len());
    for line in lines {
        let img = apply_real_to_complex(&ad, &line.vector);
        // find the unique line proportional to the image
        let mut found = None;
        for (l2, cand) in lines.iter().enumerate() {
            let overlap = cand.vector.dotc(&img);
            if overlap.norm() > 1.0 - 1e-8 {
                found = Some((l2, overlap));
                break;
            }
        }
        let Some((l2, scale)) = found else {
            let best = lines
                .iter()
                .map(|c| c.vector.dotc(&img).norm())
                .fold(0.0f64, f64::max);
            return Err(SpectralError::NotMonomialOnLines(best));
        };
        line_perm.push(l2);
        line_scale.push(scale);
    }
    // component transform: (γ⁻¹)* on dy-basis
    let rinv = rot.transpose();
    let mut comp_one_form = [[0.0f64; 7]; 7];
    for d in 0..7 {
        let pb = MultiVector::<f64>::one_form(7, d).pullback(&rinv);
        for (c, row) in comp_one_form.iter_mut().enumerate() {
            row[d] = pb.coeff(1 << c);
        }
    }
    Ok(GroupAction { rotation, translation, det, line_perm, line_scale, comp_one_form })
}

/// Which operator to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorBlock {
    /// L: Ω¹⊕Ω⁷ → Ω⁶⊕Ω⁰ (components 0..6 = dy^c / *(dy^c), 7 = vol / scalar).
    Linearised,
    /// L*: Ω⁶⊕Ω⁰ → Ω¹⊕Ω⁷.
    Adjoint,
    /// d_A on sections: Ω⁰ → Ω¹.
    Sections,
}

impl OperatorBlock {
    fn dims(self) -> (usize, usize) {
        match self {
            OperatorBlock::Linearised => (8, 8),
            OperatorBlock::Adjoint => (8, 8),
            OperatorBlock::Sections => (1, 7),
        }
    }
}

/// Per-mode matrix of the linearised operator at frequency ν (factor 2π
/// absorbed: d acts as 2πi ν∧·).
pub fn mode_matrix(block: OperatorBlock, nu: &[f64; 7], psi: &Form) -> DMatrix<C64> {
    match block {
        OperatorBlock::Linearised => {
            let mut m = DMatrix::<C64>::zeros(8, 8);
            let tpi = C64::new(0.0, 2.0 * std::f64::consts::PI);
            // column: input component; rows: output components
            for d in 0..7 {
                // input a = dy^d: ψ∧(2πi ν∧dy^d) decomposed on *(dy^c)
                let mut two = MultiVector::<C64>::zero(7);
                for (c, &v) in nu.iter().enumerate() {
                    if v != 0.0 {
                        two = two.add(
                            &MultiVector::<C64>::one_form(7, c)
                                .wedge(&MultiVector::<C64>::one_form(7, d))
                                .scale(&(tpi * v)),
                        );
                    }
                }
                let psic = psi.map_coeffs(|x| C64::new(*x, 0.0));
                let six = two.wedge(&psic);
                for c in 0..7 {
                    // coefficient on *(dy^c)
                    let star = MultiVector::<C64>::one_form(7, c).hodge_star();
                    m[(c, d)] = six.dot(&star);
                }
                // d* a contribution to the scalar slot: −*(2πi ν∧*a)
                let star_a = MultiVector::<C64>::one_form(7, d).hodge_star();
                let mut seven = MultiVector::<C64>::zero(7);
                for (c, &v) in nu.iter().enumerate() {
                    if v != 0.0 {
                        seven = seven.add(
                            &MultiVector::<C64>::one_form(7, c).wedge(&star_a).scale(&(tpi * v)),
                        );
                    }
                }
                m[(7, d)] = -seven.hodge_star().coeff(0);
            }
            // input ξ = vol: output −d*ξ on the 6-form slots:
            // d*|Ω⁷ = −*d*, so −d*ξ = +*(2πi ν∧*ξ) with *ξ the scalar 1
            for c in 0..7 {
                let one = MultiVector::<C64>::one_form(7, c)
                    .scale(&(C64::new(0.0, 2.0 * std::f64::consts::PI) * nu[c]));
                let starred = one.hodge_star();
                let star_c = MultiVector::<C64>::one_form(7, c).hodge_star();
                m[(c, 7)] += starred.dot(&star_c);
            }
            m
        }
        OperatorBlock::Adjoint => {
            // L* = * L * blockwise; with orthonormal component bases this is
            // the conjugate transpose of the mode matrix at the same ν.
            mode_matrix(OperatorBlock::Linearised, nu, psi).adjoint()
        }
        OperatorBlock::Sections => {
            let tpi = C64::new(0.0, 2.0 * std::f64::consts::PI);
            DMatrix::<C64>::from_fn(7, 1, |c, _| tpi * nu[c])
        }
    }
}

/// Component transform matrices of a group element on the in/out spaces of a
/// block. Unitary; includes the determinant twist on top-degree components.
fn comp_matrix(action: &GroupAction, comps: usize) -> DMatrix<C64> {
    match comps {
        8 => {
            // (dy-components, top) with the top twisted by det
            let mut m = DMatrix::<C64>::zeros(8, 8);
            for c in 0..7 {
                for d in 0..7 {
                    m[(c, d)] = C64::new(action.comp_one_form[c][d], 0.0);
                }
            }
            m[(7, 7)] = C64::new(action.det, 0.0);
            m
        }
        7 => DMatrix::<C64>::from_fn(7, 7, |c, d| C64::new(action.comp_one_form[c][d], 0.0)),
        1 => DMatrix::<C64>::from_fn(1, 1, |_, _| C64::new(1.0, 0.0)),
        _ => unreachable!(),
    }
}

/// Six-form components on the η_c = *(dy^c) basis transform with an extra
/// determinant factor relative to the one-forms.
fn comp_matrix_out(action: &GroupAction, block: OperatorBlock) -> DMatrix<C64> {
    match block {
        OperatorBlock::Linearised => {
            let mut m = comp_matrix(action, 8);
            for c in 0..7 {
                for d in 0..7 {
                    m[(c, d)] *= action.det;
                }
            }
            // scalar slot untwisted
            m[(7, 7)] = C64::new(1.0, 0.0);
            m
        }
        OperatorBlock::Adjoint => comp_matrix(action, 8),
        OperatorBlock::Sections => comp_matrix(action, 7),
    }
}

fn comp_matrix_in(action: &GroupAction, block: OperatorBlock) -> DMatrix<C64> {
    match block {
        OperatorBlock::Linearised => comp_matrix(action, 8),
        OperatorBlock::Adjoint => comp_matrix_out(action, OperatorBlock::Linearised),
        OperatorBlock::Sections => comp_matrix(action, 1),
    }
}

/// One orbit of modes with the operator restricted to invariants.
#[derive(Debug)]
pub struct OrbitBlock {
    pub rep: ([i64; 7], usize),
    pub frequency: [f64; 7],
    pub orbit_size: usize,
    pub invariant_in: usize,
    pub invariant_out: usize,
    pub matrix: DMatrix<C64>,
    /// Orthonormal bases of the invariant in/out spaces at the
    /// representative; `None` means the full component space (free orbit).
    pub basis_in: Option<Vec<DVector<C64>>>,
    pub basis_out: Option<Vec<DVector<C64>>>,
}

pub struct SpectralOperator {
    pub block: OperatorBlock,
    pub truncation: i64,
    pub orbits: Vec<OrbitBlock>,
}

type ModeKey = ([i64; 7], usize);

/// Applies a group action to a mode key: returns the image key and the
/// scalar factor (phase × line scale) the coefficient picks up.
fn act_on_mode(
    action: &GroupAction,
    lines: &[EigenLine],
    key: &ModeKey,
) -> (ModeKey, C64) {
    let (k, l) = key;
    let nu: [f64; 7] = std::array::from_fn(|i| k[i] as f64 + lines[*l].mu[i]);
    let nu2: [f64; 7] = std::array::from_fn(|i| {
        (0..7).map(|j| action.rotation[i][j] * nu[j]).sum()
    });
    let l2 = action.line_perm[*l];
    let k2: [i64; 7] = std::array::from_fn(|i| (nu2[i] - lines[l2].mu[i]).round() as i64);
    // consistency of the frequency bookkeeping
    debug_assert!(
        (0..7).all(|i| (k2[i] as f64 + lines[l2].mu[i] - nu2[i]).abs() < 1e-6),
        "mode image off-lattice"
    );
    let phase_arg: f64 = -2.0
        * std::f64::consts::PI
        * (0..7).map(|i| nu2[i] * action.translation[i]).sum::<f64>();
    let phase = C64::new(0.0, phase_arg).exp() * action.line_scale[*l];
    ((k2, l2), phase)
}

impl SpectralOperator {
    /// Assembles the operator on the Γ-invariant subspace of modes with
    /// |ν|_∞ ≤ N + 1/2. Modes are enumerated per line with per-coordinate
    /// pruning, so the scan touches only admissible frequencies.
    pub fn assemble(
        basis: &TwistedModeBasis,
        block: OperatorBlock,
        truncation: i64,
    ) -> SpectralOperator {
        let n = truncation;
        let cap = n as f64 + 0.5 + 1e-9;
        let (in_dim, out_dim) = block.dims();
        let mut orbits = Vec::new();
        let mut visited: HashMap<ModeKey, ()> = HashMap::new();
        // the mode matrix is linear in ν: precompute the direction matrices
        let directions: Vec<DMatrix<C64>> = (0..7)
            .map(|c| {
                let mut e = [0.0f64; 7];
                e[c] = 1.0;
                mode_matrix(block, &e, &basis.psi)
            })
            .collect();
        for (l, line) in basis.lines.iter().enumerate() {
            let per_coord: Vec<Vec<i64>> = (0..7)
                .map(|i| {
                    (-(n + 1)..=(n + 1))
                        .filter(|&k| (k as f64 + line.mu[i]).abs() <= cap)
                        .collect()
                })
                .collect();
            let mut kvec = [0i64; 7];
            enumerate_pruned(&per_coord, 0, &mut kvec, &mut |k| {
                process_mode(
                    basis,
                    block,
                    (*k, l),
                    in_dim,
                    out_dim,
                    &directions,
                    &mut visited,
                    &mut orbits,
                );
            });
        }
        SpectralOperator { block, truncation, orbits }
    }

    /// Total kernel dimension over the invariant subspace.
    pub fn kernel_dim(&self, tol: f64) -> usize {
        self.orbits
            .iter()
            .map(|o| {
                if o.invariant_in == 0 {
                    return 0;
                }
                if o.invariant_out == 0 {
                    return o.invariant_in;
                }
                let svd = o.matrix.clone().svd(false, false);
                let small = svd.singular_values.iter().filter(|&&s| s < tol).count();
                o.invariant_in.saturating_sub(o.matrix.nrows().min(o.matrix.ncols()))
                    + small.min(o.invariant_in)
            })
            .sum()
    }

    /// Smallest nonzero singular value over all orbit blocks.
    pub fn spectral_gap(&self, tol: f64) -> f64 {
        let mut gap = f64::INFINITY;
        for o in &self.orbits {
            if o.invariant_in == 0 || o.invariant_out == 0 {
                continue;
            }
            let svd = o.matrix.clone().svd(false, false);
            for &s in svd.singular_values.iter() {
                if s >= tol {
                    gap = gap.min(s);
                }
            }
        }
        gap
    }

    /// Kernel vectors, with their orbit frequencies.
    pub fn kernel_vectors(&self, tol: f64) -> Vec<([f64; 7], ([i64; 7], usize), DVector<C64>)> {
        let mut out = Vec::new();
        for o in &self.orbits {
            if o.invariant_in == 0 {
                continue;
            }
            let kern = if o.invariant_out == 0 {
                (0..o.invariant_in)
                    .map(|i| {
                        let mut v = DVector::<C64>::zeros(o.invariant_in);
                        v[i] = C64::new(1.0, 0.0);
                        v
                    })
                    .collect()
            } else {
                complex_kernel(&o.matrix, tol)
            };
            for v in kern {
                // lift from invariant coordinates to the component space
                let lifted = match &o.basis_in {
                    None => v,
                    Some(cols) => {
                        let mut lifted = DVector::<C64>::zeros(cols[0].nrows());
                        for (c, b) in cols.iter().enumerate() {
                            lifted += b * v[c];
                        }
                        lifted
                    }
                };
                out.push((o.frequency, o.rep, lifted));
            }
        }
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn process_mode(
    basis: &TwistedModeBasis,
    block: OperatorBlock,
    key: ModeKey,
    in_dim: usize,
    out_dim: usize,
    directions: &[DMatrix<C64>],
    visited: &mut HashMap<ModeKey, ()>,
    orbits: &mut Vec<OrbitBlock>,
) {
    if visited.contains_key(&key) {
        return;
    }
    let (k, l) = key;
    let nu: [f64; 7] = std::array::from_fn(|i| k[i] as f64 + basis.lines[l].mu[i]);
    // orbit expansion
    let mut members: Vec<ModeKey> = vec![key];
    let mut stab: Vec<usize> = Vec::new();
    for (gi, g) in basis.group.iter().enumerate() {
        let (img, _) = act_on_mode(g, &basis.lines, &key);
        if img == key {
            stab.push(gi);
        } else if !members.contains(&img) {
            members.push(img);
        }
    }
    for m in &members {
        visited.insert(*m, ());
    }
    let mut lmat = DMatrix::<C64>::zeros(out_dim, in_dim);
    for (c, d) in directions.iter().enumerate() {
        if nu[c] != 0.0 {
            lmat += d * C64::new(nu[c], 0.0);
        }
    }
    if stab.is_empty() {
        // free orbit: the invariant space is the full component space at the
        // representative and the operator is the single-mode matrix
        orbits.push(OrbitBlock {
            rep: key,
            frequency: nu,
            orbit_size: members.len(),
            invariant_in: in_dim,
            invariant_out: out_dim,
            matrix: lmat,
            basis_in: None,
            basis_out: None,
        });
        return;
    }
    // invariant restriction at the representative
    let (p_in, p_out) = stab_projectors(basis, block, &key, &stab, in_dim, out_dim);
    let basis_in = range_basis(&p_in, 1e-8);
    let basis_out = range_basis(&p_out, 1e-8);
    if basis_in.is_empty() && basis_out.is_empty() {
        return;
    }
    let mut matrix = DMatrix::<C64>::zeros(basis_out.len(), basis_in.len());
    for (col, bi) in basis_in.iter().enumerate() {
        let img = &lmat * bi;
        for (row, bo) in basis_out.iter().enumerate() {
            matrix[(row, col)] = bo.dotc(&img);
        }
    }
    orbits.push(OrbitBlock {
        rep: key,
        frequency: nu,
        orbit_size: members.len(),
        invariant_in: basis_in.len(),
        invariant_out: basis_out.len(),
        matrix,
        basis_in: Some(basis_in),
        basis_out: Some(basis_out),
    });
}

fn enumerate_pruned(
    per_coord: &[Vec<i64>],
    pos: usize,
    k: &mut [i64; 7],
    f: &mut impl FnMut(&[i64; 7]),
) {
    if pos == 7 {
        f(k);
        return;
    }
    for &v in &per_coord[pos] {
        k[pos] = v;
        enumerate_pruned(per_coord, pos + 1, k, f);
    }
}

fn stab_projectors(
    basis: &TwistedModeBasis,
    block: OperatorBlock,
    key: &ModeKey,
    stab: &[usize],
    in_dim: usize,
    out_dim: usize,
) -> (DMatrix<C64>, DMatrix<C64>) {
    let p_in = DMatrix::<C64>::identity(in_dim, in_dim);
    let p_out = DMatrix::<C64>::identity(out_dim, out_dim);
    if stab.is_empty() {
        return (p_in, p_out);
    }
    // the stabilizer includes the identity class; average over all of it
    let mut p_in = DMatrix::<C64>::zeros(in_dim, in_dim);
    let mut p_out = DMatrix::<C64>::zeros(out_dim, out_dim);
    let total = stab.len() as f64;
    for &gi in stab {
        let g = &basis.group[gi];
        let (_, phase) = act_on_mode(g, &basis.lines, key);
        p_in += comp_matrix_in(g, block) * phase;
        p_out += comp_matrix_out(g, block) * phase;
    }
    let p_in = p_in.unscale(total);
    let p_out = p_out.unscale(total);
    // projector sanity
    debug_assert!((&p_in * &p_in - &p_in).map(|x| x.norm()).max() < 1e-8);
    (p_in, p_out)
}

/// The ℤ₂ eigenvalue on a one-dimensional kernel at frequency 0 (other
/// frequencies pair up and carry no single eigenvalue).
pub fn z2_eigenvalue_on_kernel(
    basis: &TwistedModeBasis,
    op: &SpectralOperator,
    tol: f64,
) -> Option<f64> {
    let kerns = op.kernel_vectors(tol);
    let zero: Vec<_> = kerns
        .iter()
        .filter(|(nu, _, _)| nu.iter().all(|x| x.abs() < 1e-9))
        .collect();
    if zero.len() != 1 {
        return None;
    }
    let (_, key, v) = zero[0];
    // the ℤ₂ action must fix the ν = 0 mode (it sends ν ↦ −ν)
    let (img, phase) = act_on_mode(&basis.z2, &basis.lines, key);
    if img != *key {
        return None;
    }
    let u = comp_matrix_in(&basis.z2, op.block) * phase;
    let image = &u * v;
    let lam = v.dotc(&image);
    Some(lam.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{family_at_angle, InvariantSpace};

    fn setup(f: f64) -> (Crystal, TwistedModeBasis) {
        let c = Crystal::builtin();
        let model = G2Model::new(&c).unwrap();
        let p = family_at_angle(f);
        let basis = TwistedModeBasis::new(&c, &p, &model).unwrap();
        (c, basis)
    }

    #[test]
    fn lines_diagonalize_translations() {
        let (_c, basis) = setup(0.7);
        assert_eq!(basis.lines.len(), 91);
        // seven lines with μ = 0 (the diagonal rotations)
        let zero_mu = basis
            .lines
            .iter()
            .filter(|l| l.mu.iter().all(|x| x.abs() < 1e-12))
            .count();
        assert_eq!(zero_mu, 7);
    }

    #[test]
    fn group_action_closure_on_modes() {
        let (_c, basis) = setup(0.7);
        // |ν|_∞ is exactly preserved; check image keys stay in the truncated
        // set for a sample of modes
        let n = 1i64;
        let cap = n as f64 + 0.5 + 1e-9;
        for l in (0..91).step_by(13) {
            for k0 in [-1i64, 0, 1] {
                let key = ([k0, 0, 1, -1, 0, 1, 0], l);
                let nu: [f64; 7] =
                    std::array::from_fn(|i| key.0[i] as f64 + basis.lines[l].mu[i]);
                if nu.iter().any(|x| x.abs() > cap) {
                    continue;
                }
                for g in &basis.group {
                    let (img, phase) = act_on_mode(g, &basis.lines, &key);
                    let nu2: [f64; 7] =
                        std::array::from_fn(|i| img.0[i] as f64 + basis.lines[img.1].mu[i]);
                    assert!(nu2.iter().all(|x| x.abs() <= cap));
                    assert!((phase.norm() - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn kernel_dims_match_algebraic_fixed_points() {
        let (c, basis) = setup(0.7);
        let p = family_at_angle(0.7);
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1);
        assert_eq!(op.kernel_dim(1e-8), 1);
        let opstar = SpectralOperator::assemble(&basis, OperatorBlock::Adjoint, 1);
        assert_eq!(opstar.kernel_dim(1e-8), 1);
        let sections = SpectralOperator::assemble(&basis, OperatorBlock::Sections, 1);
        assert_eq!(sections.kernel_dim(1e-8), 0);
        // cross-check with the stacked-invariance oracle
        let adj = crate::monodromy::invariant_subspace(&p, &c, InvariantSpace::Adjoint).unwrap();
        assert_eq!(sections.kernel_dim(1e-8), adj.basis.len());
        let one =
            crate::monodromy::invariant_subspace(&p, &c, InvariantSpace::OneFormAdjoint).unwrap();
        assert_eq!(op.kernel_dim(1e-8), one.basis.len());
    }

    #[test]
    fn kernel_localizes_at_zero_frequency() {
        let (_c, basis) = setup(1.1);
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1);
        for (nu, _, _) in op.kernel_vectors(1e-8) {
            assert!(nu.iter().all(|x| x.abs() < 1e-9));
        }
    }

    #[test]
    fn z2_acts_by_minus_one_on_cokernel() {
        let (_c, basis) = setup(0.7);
        let opstar = SpectralOperator::assemble(&basis, OperatorBlock::Adjoint, 1);
        let lam = z2_eigenvalue_on_kernel(&basis, &opstar, 1e-8).unwrap();
        assert!((lam + 1.0).abs() < 1e-8, "ℤ₂ eigenvalue {lam}");
        // and +1 on the kernel
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1);
        let lam = z2_eigenvalue_on_kernel(&basis, &op, 1e-8).unwrap();
        assert!((lam - 1.0).abs() < 1e-8);
    }

    #[test]
    fn mode_operator_adjointness() {
        let (_c, basis) = setup(0.9);
        let nu = [0.3, -1.2, 0.7, 0.0, 0.4, -0.1, 1.0];
        let l = mode_matrix(OperatorBlock::Linearised, &nu, &basis.psi);
        let lstar = mode_matrix(OperatorBlock::Adjoint, &nu, &basis.psi);
        assert!((l.adjoint() - lstar).map(|x| x.norm()).max() < 1e-10);
    }

    #[test]
    fn spectral_gap_positive_and_closing_towards_one() {
        // θ⁴ = 1 is excluded by the orbit assembly; stay generic
        let (_c, basis) = setup(1.3);
        let op = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1);
        let gap = op.spectral_gap(1e-8);
        assert!(gap > 0.0 && gap.is_finite());
        // sweep towards θ = 1: 56-invariant gap shrinks
        let mut gaps = Vec::new();
        for f in [1.0, 0.5, 0.25, 0.125] {
            let (_c2, b2) = setup(f);
            let o2 = SpectralOperator::assemble(&b2, OperatorBlock::Linearised, 0);
            gaps.push(o2.spectral_gap(1e-8));
        }
        for w in gaps.windows(2) {
            assert!(w[1] < w[0], "gap not decreasing: {gaps:?}");
        }
    }

    #[test]
    fn gap_stable_under_truncation_refinement() {
        let (_c, basis) = setup(0.7);
        let g1 = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 1).spectral_gap(1e-8);
        let g2 = SpectralOperator::assemble(&basis, OperatorBlock::Linearised, 2).spectral_gap(1e-8);
        assert!(g2 <= g1 + 1e-12);
        assert!((g1 - g2).abs() <= 0.05 * g1, "gap moved: {g1} → {g2}");
    }
}
