//! Exact arithmetic for the crystallographic group Γ < O(7)⋉ℝ⁷.
//!
//! Γ is generated by a seven-fold signed rotation `a`, an involution-type
//! affine map `b` with half-integer shifts, and a unit translation `t`. All
//! arithmetic is over exact rationals: relation checks are matrix identities,
//! never tolerance tests. The ℤ⁷-quotient is enumerated by BFS (order 56),
//! elements get a normal form `t₀^{i₀}…t₆^{i₆} b₀^{j₀}b₁^{j₁}b₂^{j₂} a^{k}`,
//! and the singular stratum of ℝ⁷/Γ is reconstructed from exact fixed-locus
//! solves. Floating point appears only in [`adapted_basis`], where √7 and the
//! eigenframe of the rotation are irrational.

use crate::rational::*;
use num::{BigInt, One, Signed, Zero};
use serde::Deserialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CrystalError {
    #[error("element is not in the group (no ℤ⁷-class match or non-integer residue)")]
    NotInGroup,
    #[error("BFS state cap {0} exceeded; generator set does not define a cocompact group")]
    BfsCapExceeded(usize),
    #[error("generator `{0}`: {1}")]
    BadGenerator(String, String),
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("rotation is not a signed permutation with a single 7-cycle")]
    UnsupportedRotationShape,
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// An exact element (R, v) of O(7)⋉ℝ⁷ acting by y ↦ Ry + v.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IsometryElement {
    pub rotation: RatMat,
    pub translation: RatVec,
}

impl IsometryElement {
    pub fn identity() -> Self {
        Self { rotation: mat_identity(), translation: vec_zero() }
    }

    pub fn translation_by(v: RatVec) -> Self {
        Self { rotation: mat_identity(), translation: v }
    }

    /// (R_g R_h, R_g v_h + v_g): `self` applied after `other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self {
            rotation: mat_mul(&self.rotation, &other.rotation),
            translation: vec_add(&mat_vec(&self.rotation, &other.translation), &self.translation),
        }
    }

    pub fn inverse(&self) -> Self {
        let rot_inv = mat_transpose(&self.rotation);
        Self { translation: vec_neg(&mat_vec(&rot_inv, &self.translation)), rotation: rot_inv }
    }

    pub fn apply(&self, y: &RatVec) -> RatVec {
        vec_add(&mat_vec(&self.rotation, y), &self.translation)
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        mat_is_identity(&self.rotation) && vec_is_zero(&self.translation)
    }

    /// Exact invariants: RᵀR = I and det R ∈ {±1}.
    pub fn check_valid(&self) -> Result<(), String> {
        let rt = mat_transpose(&self.rotation);
        if !mat_is_identity(&mat_mul(&rt, &self.rotation)) {
            return Err("rotation is not exactly orthogonal".into());
        }
        let d = mat_det(&self.rotation);
        if d != rat(1) && d != rat(-1) {
            return Err(format!("determinant is {}, not ±1", format_rat(&d)));
        }
        Ok(())
    }

    /// Canonical representative of the ℤ⁷-coset: translation reduced to [0,1)⁷.
    pub fn class_rep(&self) -> Self {
        Self { rotation: self.rotation.clone(), translation: vec_fract(&self.translation) }
    }
}

impl fmt::Display for IsometryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(R, {})", DisplayVec(&self.translation))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    A,
    B,
    T,
}

impl Gen {
    fn symbol(self) -> char {
        match self {
            Gen::A => 'a',
            Gen::B => 'b',
            Gen::T => 't',
        }
    }
}

/// A word in the generators: sequence of (symbol, nonzero exponent).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroupWord(pub Vec<(Gen, i64)>);

impl GroupWord {
    pub fn new(letters: impl IntoIterator<Item = (Gen, i64)>) -> Self {
        Self(letters.into_iter().collect()).normalized()
    }

    /// Merges adjacent equal symbols and drops zero exponents.
    pub fn normalized(&self) -> Self {
        let mut out: Vec<(Gen, i64)> = Vec::new();
        for &(g, e) in &self.0 {
            if e == 0 {
                continue;
            }
            match out.last_mut() {
                Some((lg, le)) if *lg == g => {
                    *le += e;
                    if *le == 0 {
                        out.pop();
                    }
                }
                _ => out.push((g, e)),
            }
        }
        Self(out)
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&(g, e)| (g, -e)).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v).normalized()
    }

    /// a^i · w · a^{-i}
    pub fn conjugate_by_a(&self, i: i64) -> Self {
        GroupWord(vec![(Gen::A, i)]).concat(self).concat(&GroupWord(vec![(Gen::A, -i)]))
    }

    /// [x, y] = x y x⁻¹ y⁻¹
    pub fn commutator(x: &Self, y: &Self) -> Self {
        x.concat(y).concat(&x.inverse()).concat(&y.inverse())
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(g, e)| if e == 1 { g.symbol().to_string() } else { format!("{}^{}", g.symbol(), e) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Derived symbols: `t_i = aⁱ t a⁻ⁱ` and `b_i = aⁱ b a⁻ⁱ`.
pub fn t_i(i: i64) -> GroupWord {
    GroupWord(vec![(Gen::T, 1)]).conjugate_by_a(i)
}

pub fn b_i(i: i64) -> GroupWord {
    GroupWord(vec![(Gen::B, 1)]).conjugate_by_a(i)
}

fn pow_word(w: &GroupWord, n: i64) -> GroupWord {
    let base = if n < 0 { w.inverse() } else { w.clone() };
    let mut acc = GroupWord::default();
    for _ in 0..n.unsigned_abs() {
        acc = acc.concat(&base);
    }
    acc
}

/// Parses words like `"b^2 t1^-1 t3^-1"`. Tokens are `a`, `b`, `t`, or the
/// derived `t0..t6`, `b0..b6`, each with an optional `^k` exponent.
pub fn parse_word(s: &str) -> Result<GroupWord, CrystalError> {
    let mut out = GroupWord::default();
    for tok in s.split_whitespace() {
        let (name, exp) = match tok.split_once('^') {
            None => (tok, 1i64),
            Some((n, e)) => (n, e.parse::<i64>().map_err(|_| CrystalError::BadWord(s.into()))?),
        };
        let base = match name {
            "a" => GroupWord(vec![(Gen::A, 1)]),
            "b" => GroupWord(vec![(Gen::B, 1)]),
            "t" => GroupWord(vec![(Gen::T, 1)]),
            _ => {
                let (head, idx) = name.split_at(1);
                let i: i64 = idx.parse().map_err(|_| CrystalError::BadWord(s.into()))?;
                match head {
                    "t" => t_i(i),
                    "b" => b_i(i),
                    _ => return Err(CrystalError::BadWord(s.into())),
                }
            }
        };
        out = out.concat(&pow_word(&base, exp));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationFamily {
    SevenFold,
    Square,
    BWithBi,
    Product,
    BWithTi,
    Translations,
}

#[derive(Debug, Clone)]
pub struct Relation {
    pub family: RelationFamily,
    pub name: String,
    pub lhs: GroupWord,
    pub rhs: GroupWord,
}

#[derive(Debug, Clone)]
pub struct RelationCheck {
    pub name: String,
    pub family: RelationFamily,
    pub holds: bool,
}

#[derive(Debug, Clone)]
pub struct PresentationReport {
    pub checks: Vec<RelationCheck>,
}

impl PresentationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
    pub fn count(&self) -> usize {
        self.checks.len()
    }
}

/// Normal form `t₀^{i₀}…t₆^{i₆} b₀^{j₀}b₁^{j₁}b₂^{j₂} a^{k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub t_exponents: [i64; 7],
    pub b_bits: [u8; 3],
    pub a_exponent: u8,
}

impl NormalForm {
    pub fn word(&self) -> GroupWord {
        let mut w = GroupWord::default();
        for (i, &e) in self.t_exponents.iter().enumerate() {
            w = w.concat(&pow_word(&t_i(i as i64), e));
        }
        for (i, &bit) in self.b_bits.iter().enumerate() {
            if bit == 1 {
                w = w.concat(&b_i(i as i64));
            }
        }
        w = w.concat(&pow_word(&GroupWord(vec![(Gen::A, 1)]), self.a_exponent as i64));
        w
    }
}

/// An affine fixed-point set { point + span(basis) }, possibly empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocus {
    pub point: RatVec,
    pub basis: Vec<RatVec>,
}

/// One connected component of the singular set of ℝ⁷/Γ.
#[derive(Debug, Clone)]
pub struct Stratum {
    /// Unit vector along the fixed axis (floating; the length is irrational).
    pub axis_dir: [f64; 7],
    /// A rational point on the axis.
    pub base_point: RatVec,
    /// Primitive integer vector spanning the axis direction.
    pub axis_primitive: [i64; 7],
    /// Order of the pointwise isotropy group of the axis.
    pub isotropy_order: usize,
    /// Transverse rotation angles of the isotropy generator, as fractions of 2π.
    pub angles: Vec<Rat>,
    /// Minimal translation length along the axis inside the lattice.
    pub lattice_step: f64,
    /// A word realizing that minimal translation.
    pub step_word: GroupWord,
}

/// The group with its three generators and presentation relations.
#[derive(Debug, Clone)]
pub struct Crystal {
    pub alpha: IsometryElement,
    pub beta: IsometryElement,
    pub tau: IsometryElement,
    pub relations: Vec<Relation>,
    /// BFS state cap guarding against malformed generator input.
    pub bfs_cap: usize,
}

/// JSON wire format for loading generators and relations.
#[derive(Debug, Deserialize)]
pub struct GroupSpec {
    pub generators: HashMap<String, GeneratorSpec>,
    #[serde(default)]
    pub relations: Vec<String>,
}

#[derive(Debug, Deserialize)]
pub struct GeneratorSpec {
    pub rotation: Vec<Vec<String>>,
    pub translation: Vec<String>,
}

impl Crystal {
    /// The built-in group: a seven-fold signed rotation, a half-shift
    /// involution-type map, and the first unit translation.
    pub fn builtin() -> Self {
        let alpha = IsometryElement {
            // y ↦ (y₂, y₃, y₇, −y₆, −y₄, y₁, y₅)
            rotation: mat_from_i64([
                [0, 1, 0, 0, 0, 0, 0],
                [0, 0, 1, 0, 0, 0, 0],
                [0, 0, 0, 0, 0, 0, 1],
                [0, 0, 0, 0, 0, -1, 0],
                [0, 0, 0, -1, 0, 0, 0],
                [1, 0, 0, 0, 0, 0, 0],
                [0, 0, 0, 0, 1, 0, 0],
            ]),
            translation: vec_zero(),
        };
        let beta = IsometryElement {
            // y ↦ (1/2 − y₁, 1/2 − y₂, −y₃, −y₄, 1/2 + y₅, 1/2 + y₆, y₇)
            rotation: mat_from_i64([
                [-1, 0, 0, 0, 0, 0, 0],
                [0, -1, 0, 0, 0, 0, 0],
                [0, 0, -1, 0, 0, 0, 0],
                [0, 0, 0, -1, 0, 0, 0],
                [0, 0, 0, 0, 1, 0, 0],
                [0, 0, 0, 0, 0, 1, 0],
                [0, 0, 0, 0, 0, 0, 1],
            ]),
            translation: [
                rat_frac(1, 2),
                rat_frac(1, 2),
                rat(0),
                rat(0),
                rat_frac(1, 2),
                rat_frac(1, 2),
                rat(0),
            ],
        };
        let tau = IsometryElement::translation_by(vec_from_i64([1, 0, 0, 0, 0, 0, 0]));
        Self { alpha, beta, tau, relations: builtin_relations(), bfs_cap: 10_000 }
    }

    /// Loads generators (and optionally extra relations) from the JSON format.
    pub fn from_spec(spec: &GroupSpec) -> Result<Self, CrystalError> {
        let get = |name: &str| -> Result<IsometryElement, CrystalError> {
            let g = spec
                .generators
                .get(name)
                .ok_or_else(|| CrystalError::BadGenerator(name.into(), "missing".into()))?;
            if g.rotation.len() != DIM || g.translation.len() != DIM {
                return Err(CrystalError::BadGenerator(name.into(), "wrong dimensions".into()));
            }
            let mut rotation = mat_zero();
            for (i, row) in g.rotation.iter().enumerate() {
                if row.len() != DIM {
                    return Err(CrystalError::BadGenerator(name.into(), "wrong row length".into()));
                }
                for (j, s) in row.iter().enumerate() {
                    rotation[i][j] = parse_rat(s)?;
                }
            }
            let mut translation = vec_zero();
            for (i, s) in g.translation.iter().enumerate() {
                translation[i] = parse_rat(s)?;
            }
            let iso = IsometryElement { rotation, translation };
            iso.check_valid().map_err(|e| CrystalError::BadGenerator(name.into(), e))?;
            Ok(iso)
        };
        let alpha = get("a")?;
        let beta = get("b")?;
        let tau = get("t")?;
        let relations = if spec.relations.is_empty() {
            builtin_relations()
        } else {
            spec.relations
                .iter()
                .map(|s| {
                    Ok(Relation {
                        family: RelationFamily::Translations,
                        name: s.clone(),
                        lhs: parse_word(s)?,
                        rhs: GroupWord::default(),
                    })
                })
                .collect::<Result<Vec<_>, CrystalError>>()?
        };
        Ok(Self { alpha, beta, tau, relations, bfs_cap: 10_000 })
    }

    pub fn from_json(json: &str) -> Result<Self, CrystalError> {
        let spec: GroupSpec = serde_json::from_str(json)
            .map_err(|e| CrystalError::BadGenerator("json".into(), e.to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn generator(&self, g: Gen) -> &IsometryElement {
        match g {
            Gen::A => &self.alpha,
            Gen::B => &self.beta,
            Gen::T => &self.tau,
        }
    }

    /// Exact product of generator matrices under a↦α, b↦β, t↦τ₁.
    pub fn eval_word(&self, w: &GroupWord) -> IsometryElement {
        let mut acc = IsometryElement::identity();
        for &(g, e) in &w.0 {
            acc = acc.compose(&self.generator(g).pow(e));
        }
        acc
    }

    /// Checks every relation as an exact matrix identity.
    pub fn verify_presentation(&self) -> PresentationReport {
        let checks = self
            .relations
            .iter()
            .map(|r| RelationCheck {
                name: r.name.clone(),
                family: r.family,
                holds: self.eval_word(&r.lhs) == self.eval_word(&r.rhs),
            })
            .collect();
        PresentationReport { checks }
    }

    /// BFS over generators from the identity, reducing translations mod ℤ⁷.
    /// Returns the distinct ℤ⁷-coset representatives in visit order.
    pub fn quotient_enumerate(&self) -> Result<Vec<IsometryElement>, CrystalError> {
        let gens: Vec<IsometryElement> = [&self.alpha, &self.beta, &self.tau]
            .iter()
            .flat_map(|g| [(*g).clone(), g.inverse()])
            .collect();
        let start = IsometryElement::identity();
        let mut seen: HashSet<IsometryElement> = HashSet::new();
        let mut order: Vec<IsometryElement> = Vec::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        order.push(start.clone());
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for g in &gens {
                let next = g.compose(&cur).class_rep();
                if seen.insert(next.clone()) {
                    if seen.len() > self.bfs_cap {
                        return Err(CrystalError::BfsCapExceeded(self.bfs_cap));
                    }
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(order)
    }

    /// Map from ℤ⁷-class representative to the (b-bits, a-exponent) indexing
    /// the coset in the normal form. Derived from the BFS rather than from a
    /// rewriting system.
    pub fn coset_table(&self) -> Result<HashMap<IsometryElement, ([u8; 3], u8)>, CrystalError> {
        let classes = self.quotient_enumerate()?;
        let expected = classes.len();
        let mut table = HashMap::new();
        for j0 in 0..=1u8 {
            for j1 in 0..=1u8 {
                for j2 in 0..=1u8 {
                    for k in 0..7u8 {
                        let nf = NormalForm {
                            t_exponents: [0; 7],
                            b_bits: [j0, j1, j2],
                            a_exponent: k,
                        };
                        let rep = self.eval_word(&nf.word()).class_rep();
                        table.insert(rep, ([j0, j1, j2], k));
                    }
                }
            }
        }
        if table.len() != expected {
            return Err(CrystalError::NotInGroup);
        }
        Ok(table)
    }

    /// For coordinate `j`, the word `a^m t^{±1} a^{-m}` that translates by e_j.
    pub fn word_for_unit_translation(&self, j: usize) -> Result<GroupWord, CrystalError> {
        let mut v = vec_zero();
        v[0] = Rat::one();
        for m in 0..DIM as i64 {
            let img = mat_vec(&self.alpha.pow(m).rotation, &v);
            for (c, x) in img.iter().enumerate() {
                if c == j {
                    if *x == rat(1) {
                        return Ok(pow_word(&GroupWord(vec![(Gen::T, 1)]), 1).conjugate_by_a(m));
                    }
                    if *x == rat(-1) {
                        return Ok(pow_word(&GroupWord(vec![(Gen::T, -1)]), 1).conjugate_by_a(m));
                    }
                }
            }
        }
        Err(CrystalError::UnsupportedRotationShape)
    }

    /// Word realizing translation by an integer vector.
    pub fn word_for_translation(&self, v: &[i64; 7]) -> Result<GroupWord, CrystalError> {
        let mut w = GroupWord::default();
        for (j, &e) in v.iter().enumerate() {
            if e != 0 {
                w = w.concat(&pow_word(&self.word_for_unit_translation(j)?, e));
            }
        }
        Ok(w)
    }

    /// Unique normal form of `g ∈ Γ`; errors with `NotInGroup` otherwise.
    pub fn normal_form(&self, g: &IsometryElement) -> Result<NormalForm, CrystalError> {
        let table = self.coset_table()?;
        let (b_bits, a_exponent) =
            *table.get(&g.class_rep()).ok_or(CrystalError::NotInGroup)?;
        let coset =
            self.eval_word(&NormalForm { t_exponents: [0; 7], b_bits, a_exponent }.word());
        let residue = g.compose(&coset.inverse());
        if !mat_is_identity(&residue.rotation) || !vec_is_integer(&residue.translation) {
            return Err(CrystalError::NotInGroup);
        }
        // Express the integer translation in the basis u_m = R_a^m e₁.
        let mut t_exponents = [0i64; 7];
        let mut v = vec_zero();
        v[0] = Rat::one();
        for (m, slot) in t_exponents.iter_mut().enumerate() {
            let u = mat_vec(&self.alpha.pow(m as i64).rotation, &v);
            // u is a signed unit vector; its coefficient is ⟨residue, u⟩.
            let c = vec_dot(&residue.translation, &u);
            debug_assert!(c.denom().is_one());
            *slot = c.numer().to_string().parse().map_err(|_| CrystalError::NotInGroup)?;
        }
        let nf = NormalForm { t_exponents, b_bits, a_exponent };
        debug_assert_eq!(&self.eval_word(&nf.word()), g);
        Ok(nf)
    }

    /// Solves (R − I)x = −v exactly. Empty solution set ⇒ `None`.
    pub fn fixed_locus(g: &IsometryElement) -> Option<FixedLocus> {
        let mut a = g.rotation.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= Rat::one();
        }
        let b = vec_neg(&g.translation);
        solve_affine(&a, &b).map(|(point, basis)| FixedLocus { point, basis })
    }

    /// Whether some lattice translate τ_v·g (v ∈ ℤ⁷) has a fixed point, and
    /// if so one such translate.
    pub fn class_fixed_translate(&self, g: &IsometryElement) -> Option<IsometryElement> {
        // (R−I)x = −(v_g + v) is solvable iff (v_g + v) ⊥ ker(R−I) (R orthogonal).
        let mut a = g.rotation.clone();
        for (i, row) in a.iter_mut().enumerate() {
            row[i] -= Rat::one();
        }
        let kernel = match solve_affine(&a, &vec_zero()) {
            Some((_, basis)) => basis,
            None => return None,
        };
        if kernel.is_empty() {
            return Some(g.clone()); // full-rank: always solvable with v = 0
        }
        // Integer v with ⟨k_j, v⟩ = −⟨k_j, v_g⟩ for each kernel basis vector.
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut rhs: Vec<BigInt> = Vec::new();
        for k in &kernel {
            let mut lcm = BigInt::one();
            let c = -vec_dot(k, &g.translation);
            for x in k.iter().chain(std::iter::once(&c)) {
                lcm = num::integer::lcm(lcm, x.denom().clone());
            }
            rows.push(k.iter().map(|x| (x * Rat::from_integer(lcm.clone())).numer().clone()).collect());
            let crow = &c * Rat::from_integer(lcm.clone());
            if !crow.denom().is_one() {
                return None;
            }
            rhs.push(crow.numer().clone());
        }
        let v = solve_integer(&rows, &rhs)?;
        let shift: RatVec = std::array::from_fn(|i| Rat::from_integer(v[i].clone()));
        Some(IsometryElement::translation_by(shift).compose(g))
    }

    /// Enumerates quotient classes with nonempty fixed loci, merges
    /// Γ-translates of fixed lines, and reports strata.
    pub fn singular_strata(&self) -> Result<Vec<Stratum>, CrystalError> {
        let classes = self.quotient_enumerate()?;
        // Fixed lines of non-identity-rotation classes, as (point, primitive dir).
        let mut lines: Vec<(RatVec, [i64; 7])> = Vec::new();
        for cls in &classes {
            if mat_is_identity(&cls.rotation) {
                continue;
            }
            let Some(elem) = self.class_fixed_translate(cls) else { continue };
            let Some(locus) = Self::fixed_locus(&elem) else { continue };
            if locus.basis.len() != 1 {
                return Err(CrystalError::UnsupportedRotationShape);
            }
            lines.push((locus.point, primitive_direction(&locus.basis[0])));
        }
        // Union-find over Γ-equivalence of lines in the quotient.
        let n = lines.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..n {
            for j in i + 1..n {
                if find(&mut parent, i) != find(&mut parent, j)
                    && self.lines_equivalent(&lines[i], &lines[j], &classes)
                {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        let mut strata = Vec::new();
        for root in roots {
            strata.push(self.stratum_from_line(&lines[root], &classes)?);
        }
        Ok(strata)
    }

    /// Whether γτ_v maps line₁ onto line₂ for some class γ and v ∈ ℤ⁷.
    fn lines_equivalent(
        &self,
        l1: &(RatVec, [i64; 7]),
        l2: &(RatVec, [i64; 7]),
        classes: &[IsometryElement],
    ) -> bool {
        for g in classes {
            let rd1 = mat_vec(&g.rotation, &std::array::from_fn(|i| rat(l1.1[i])));
            let d2: RatVec = std::array::from_fn(|i| rat(l2.1[i]));
            let same = (0..DIM).all(|i| rd1[i] == d2[i]);
            let opp = (0..DIM).all(|i| rd1[i] == -&d2[i]);
            if !same && !opp {
                continue;
            }
            // Need p₂ − (R p₁ + v_g) ∈ ℤ⁷ + ℚ d₂; with d₂ entries ±1 this means
            // all d₂ᵢ wᵢ share one fractional part.
            let w = vec_sub(&l2.0, &g.apply(&l1.0));
            if l2.1.iter().any(|&e| e.abs() != 1) {
                // General direction: solve the lattice condition directly.
                if self.line_shift_solvable(&w, &l2.1) {
                    return true;
                }
                continue;
            }
            let fracs: Vec<Rat> =
                (0..DIM).map(|i| rat_fract(&(&w[i] * rat(l2.1[i])))).collect();
            if fracs.windows(2).all(|p| p[0] == p[1]) {
                return true;
            }
        }
        false
    }

    /// ∃ z ∈ ℤ⁷, s ∈ ℚ with w = z + s·d.
    fn line_shift_solvable(&self, w: &RatVec, d: &[i64; 7]) -> bool {
        // Eliminate s using the first nonzero coordinate of d, then require
        // integrality of the rest.
        let Some(p) = d.iter().position(|&e| e != 0) else {
            return vec_is_integer(w);
        };
        // s = (w_p − z_p)/d_p for z_p ∈ ℤ: test all residues via denominators.
        // w_i − s d_i ∈ ℤ ⇒ d_p w_i − d_i w_p ∈ d_p ℤ + d_i ℤ … keep it simple:
        // scan z_p over one denominator period of w_p.
        let den: i64 = w[p].denom().to_string().parse().unwrap_or(1);
        let dp = d[p];
        for k in 0..(den * dp.abs()) {
            let zp = w[p].floor() - rat(k);
            let s = (&w[p] - &zp) / rat(dp);
            if (0..DIM).all(|i| {
                let zi = &w[i] - &s * rat(d[i]);
                zi.denom().is_one()
            }) {
                return true;
            }
        }
        false
    }

    fn stratum_from_line(
        &self,
        line: &(RatVec, [i64; 7]),
        classes: &[IsometryElement],
    ) -> Result<Stratum, CrystalError> {
        let (point, dir) = line;
        let d_rat: RatVec = std::array::from_fn(|i| rat(dir[i]));
        // Pointwise isotropy: classes with a translate fixing the line pointwise.
        let mut isotropy: Vec<IsometryElement> = Vec::new();
        for g in classes {
            if !mat_eq(
                &{
                    let rd = mat_vec(&g.rotation, &d_rat);
                    let mut m = mat_zero();
                    m[0] = rd;
                    m
                },
                &{
                    let mut m = mat_zero();
                    m[0] = d_rat.clone();
                    m
                },
            ) {
                continue;
            }
            // v := p − Rp − v_g must be an integer vector.
            let v = vec_sub(&vec_sub(point, &mat_vec(&g.rotation, point)), &g.translation);
            if vec_is_integer(&v) {
                isotropy.push(IsometryElement::translation_by(v).compose(g));
            }
        }
        let order = isotropy.len();
        // Generator: an isotropy element of full order whose transverse angle
        // set is the frame-positive choice.
        let gen = isotropy
            .iter()
            .find(|g| {
                !g.is_identity() && {
                    let mut p = (*g).clone();
                    let mut ord = 1;
                    while !p.is_identity() && ord <= order {
                        p = p.compose(g);
                        ord += 1;
                    }
                    ord == order
                }
            })
            .cloned()
            .ok_or(CrystalError::UnsupportedRotationShape)?;
        let angles = signed_cycle_angles(&gen.rotation)?;
        // Minimal lattice translation along the axis: multiples of the
        // primitive direction.
        let norm2: i64 = dir.iter().map(|&x| x * x).sum();
        let step = (norm2 as f64).sqrt();
        let step_word = self.word_for_translation(dir)?;
        let nrm = step;
        Ok(Stratum {
            axis_dir: std::array::from_fn(|i| dir[i] as f64 / nrm),
            base_point: point.clone(),
            axis_primitive: *dir,
            isotropy_order: order,
            angles,
            lattice_step: step,
            step_word,
        })
    }

    /// Orthonormal frame (b₁,…,b₇): b₁ along the fixed axis of the seven-fold
    /// rotation, the rest spanning its eigenplanes so that the rotation acts
    /// by the angle set returned by [`signed_cycle_angles`]. Columns of the
    /// returned matrix are the frame vectors.
    pub fn adapted_basis(&self) -> Result<AdaptedBasis, CrystalError> {
        adapted_basis_for(&self.alpha.rotation)
    }
}

#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    /// Columns are b₁..b₇. Positively oriented (det = +1).
    pub frame: nalgebra::SMatrix<f64, 7, 7>,
    /// Transverse rotation angles of the canonical isotropy generator, as
    /// fractions of 2π, one per complex plane.
    pub angles: [Rat; 3],
    /// The power of the input rotation that acts by `angles` in this frame.
    /// With the orientation fixed at e₁∧…∧e₇ = +vol, exactly one of the two
    /// generators of the cyclic group attains the canonical angle set in a
    /// positively oriented frame.
    pub adapted_power: i64,
}

/// Scales a rational direction to a primitive integer vector with positive
/// leading entry.
fn primitive_direction(v: &RatVec) -> [i64; 7] {
    let mut lcm = BigInt::one();
    for x in v.iter() {
        lcm = num::integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> =
        v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).numer().clone()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = num::integer::gcd(g, x.clone());
    }
    if g.is_zero() {
        g = BigInt::one();
    }
    let mut out = [0i64; 7];
    for (o, x) in out.iter_mut().zip(ints.iter()) {
        *o = (x / &g).to_string().parse().unwrap();
    }
    if let Some(&first) = out.iter().find(|&&x| x != 0) {
        if first < 0 {
            for o in out.iter_mut() {
                *o = -*o;
            }
        }
    }
    out
}

/// Integer solvability of K x = c over ℤ, returning one solution.
/// Column-echelon reduction with unimodular bookkeeping.
pub fn solve_integer(k_rows: &[Vec<BigInt>], c: &[BigInt]) -> Option<Vec<BigInt>> {
    let m = k_rows.len();
    if m == 0 {
        return Some(vec![BigInt::zero(); DIM]);
    }
    let n = k_rows[0].len();
    // Work on columns: K (m×n), U (n×n) with K·U maintained.
    let mut k: Vec<Vec<BigInt>> = k_rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect(); // u[row][col]
    let mut pivot_col = 0usize;
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for row in 0..m {
        if pivot_col >= n {
            break;
        }
        // gcd-reduce the row across columns pivot_col..n
        loop {
            let mut nonzero: Vec<usize> =
                (pivot_col..n).filter(|&j| !k[row][j].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let j = nonzero[0];
                k.iter_mut().for_each(|r| r.swap(pivot_col, j));
                u.iter_mut().for_each(|r| r.swap(pivot_col, j));
                break;
            }
            // subtract multiples of the column with the smallest |entry|
            nonzero.sort_by_key(|&j| k[row][j].abs());
            let jmin = nonzero[0];
            for &j in &nonzero[1..] {
                let q = &k[row][j] / &k[row][jmin];
                if q.is_zero() {
                    continue;
                }
                for r in 0..m {
                    let sub = &q * &k[r][jmin];
                    k[r][j] -= sub;
                }
                for r in 0..n {
                    let sub = &q * &u[r][jmin];
                    u[r][j] -= sub;
                }
            }
            // If no progress was possible (all quotients zero), force one step.
            if (pivot_col..n).filter(|&j| !k[row][j].is_zero()).count() == nonzero.len() {
                let j = nonzero[1];
                let q = BigInt::one();
                for r in 0..m {
                    let sub = &q * &k[r][jmin];
                    k[r][j] -= sub;
                }
                for r in 0..n {
                    let sub = &q * &u[r][jmin];
                    u[r][j] -= sub;
                }
            }
        }
        if !k[row][pivot_col].is_zero() {
            pivots.push((row, pivot_col));
            pivot_col += 1;
        }
    }
    // Back-substitute in echelon form: columns are lower-triangular per pivot rows.
    let mut y = vec![BigInt::zero(); n];
    let mut resid: Vec<BigInt> = c.to_vec();
    for &(row, col) in &pivots {
        let piv = &k[row][col];
        let r = &resid[row];
        if (r % piv).is_zero() {
            let q = r / piv;
            for i in 0..m {
                let sub = &q * &k[i][col];
                resid[i] -= sub;
            }
            y[col] = q;
        } else {
            return None;
        }
    }
    if resid.iter().any(|r| !r.is_zero()) {
        return None;
    }
    // x = U y
    let x: Vec<BigInt> =
        (0..n).map(|i| (0..n).map(|j| &u[i][j] * &y[j]).sum::<BigInt>()).collect();
    Some(x)
}

/// Transverse eigen-angles of the canonical generator of the cyclic group
/// spanned by a signed 7-cycle rotation, as fractions k/7 of a full turn.
/// The canonical set is the one attained in a positively oriented frame.
pub fn signed_cycle_angles(rotation: &RatMat) -> Result<Vec<Rat>, CrystalError> {
    let basis = adapted_basis_for(rotation)?;
    Ok(basis.angles.to_vec())
}

fn single_generator_frame(
    rotation: &RatMat,
) -> Result<nalgebra::SMatrix<f64, 7, 7>, CrystalError> {
    use nalgebra::SMatrix;
    // Verify signed-permutation shape and extract the cycle through e₁.
    for row in rotation.iter() {
        let nonzero: Vec<&Rat> = row.iter().filter(|x| !x.is_zero()).collect();
        if nonzero.len() != 1 || (*nonzero[0] != rat(1) && *nonzero[0] != rat(-1)) {
            return Err(CrystalError::UnsupportedRotationShape);
        }
    }
    let mut orbit: Vec<RatVec> = Vec::with_capacity(7);
    let mut v = vec_zero();
    v[0] = Rat::one();
    for _ in 0..7 {
        orbit.push(v.clone());
        v = mat_vec(rotation, &v);
    }
    if v != orbit[0] {
        return Err(CrystalError::UnsupportedRotationShape);
    }
    let orbit_f: Vec<[f64; 7]> =
        orbit.iter().map(|w| std::array::from_fn(|i| rat_to_f64(&w[i]))).collect();
    // Axis: Σ_m R^m e₁, normalized, leading entry positive.
    let mut axis = [0.0f64; 7];
    for w in &orbit_f {
        for i in 0..7 {
            axis[i] += w[i];
        }
    }
    let axis_norm = axis.iter().map(|x| x * x).sum::<f64>().sqrt();
    if axis_norm < 1e-9 {
        return Err(CrystalError::UnsupportedRotationShape);
    }
    let lead = *axis.iter().find(|x| x.abs() > 1e-9).unwrap();
    let sgn = if lead < 0.0 { -1.0 } else { 1.0 };
    for a in axis.iter_mut() {
        *a *= sgn / axis_norm;
    }
    // Eigenvector for λ = ζ₇^k: u = Σ_m λ^{-m} R^m e₁; the plane
    // (Re u, −Im u) realizes in-frame rotation by +2πk/7.
    let plane = |k: i64| -> ([f64; 7], [f64; 7]) {
        let mut re = [0.0f64; 7];
        let mut im = [0.0f64; 7];
        for (m, w) in orbit_f.iter().enumerate() {
            let phi = -2.0 * std::f64::consts::PI * (k * m as i64) as f64 / 7.0;
            let (s, c) = phi.sin_cos();
            for i in 0..7 {
                re[i] += c * w[i];
                im[i] += s * w[i];
            }
        }
        let nr = re.iter().map(|x| x * x).sum::<f64>().sqrt();
        let ni = im.iter().map(|x| x * x).sum::<f64>().sqrt();
        for i in 0..7 {
            re[i] /= nr;
            im[i] /= -ni;
        }
        (re, im)
    };
    let mut frame = SMatrix::<f64, 7, 7>::zeros();
    for i in 0..7 {
        frame[(i, 0)] = axis[i];
    }
    for (p, &k) in [1i64, 2, 4].iter().enumerate() {
        let (x, y) = plane(k);
        for i in 0..7 {
            frame[(i, 1 + 2 * p)] = x[i];
            frame[(i, 2 + 2 * p)] = y[i];
        }
    }
    Ok(frame)
}

/// Closed-form eigenframe of a signed 7-cycle rotation; no iterative
/// eigensolver involved. The frame is positively oriented, so it realizes
/// the canonical angle set (2π/7, 4π/7, 8π/7) for exactly one of the two
/// generators of the cyclic group; `adapted_power` records which.
pub fn adapted_basis_for(rotation: &RatMat) -> Result<AdaptedBasis, CrystalError> {
    let angles = [rat_frac(1, 7), rat_frac(2, 7), rat_frac(4, 7)];
    for (rot, power) in [(rotation.clone(), 1i64), (mat_transpose(rotation), -1)] {
        let frame = single_generator_frame(&rot)?;
        if frame.determinant() > 0.0 {
            return Ok(AdaptedBasis { frame, angles, adapted_power: power });
        }
    }
    Err(CrystalError::UnsupportedRotationShape)
}

fn builtin_relations() -> Vec<Relation> {
    use RelationFamily::*;
    let mut rels = Vec::new();
    let a = GroupWord(vec![(Gen::A, 1)]);
    let b = GroupWord(vec![(Gen::B, 1)]);
    rels.push(Relation {
        family: SevenFold,
        name: "a^7 = 1".into(),
        lhs: pow_word(&a, 7),
        rhs: GroupWord::default(),
    });
    rels.push(Relation {
        family: Square,
        name: "b^2 = t1 t3".into(),
        lhs: pow_word(&b, 2),
        rhs: t_i(1).concat(&t_i(3)),
    });
    let rhs_bbi: [(i64, GroupWord); 6] = [
        (1, t_i(6).concat(&t_i(2).inverse()).concat(&t_i(3)).concat(&t_i(1))),
        (2, t_i(0).concat(&t_i(5).inverse()).concat(&t_i(2).inverse()).concat(&t_i(1))),
        (3, t_i(6).inverse().concat(&t_i(2).inverse()).concat(&t_i(3)).concat(&t_i(1))),
        (4, t_i(0).inverse().concat(&t_i(6)).concat(&t_i(5).inverse()).concat(&t_i(3))),
        (5, t_i(0).concat(&t_i(6).inverse()).concat(&t_i(5).inverse()).concat(&t_i(3))),
        (6, t_i(0).inverse().concat(&t_i(5).inverse()).concat(&t_i(2).inverse()).concat(&t_i(1))),
    ];
    for (i, rhs) in rhs_bbi {
        rels.push(Relation {
            family: BWithBi,
            name: format!("[b, b{i}]"),
            lhs: GroupWord::commutator(&b, &b_i(i)),
            rhs,
        });
    }
    rels.push(Relation {
        family: Product,
        name: "b0 b1 = t1 t2^-1 b3".into(),
        lhs: b_i(0).concat(&b_i(1)),
        rhs: t_i(1).concat(&t_i(2).inverse()).concat(&b_i(3)),
    });
    let rhs_bti: [(i64, GroupWord); 7] = [
        (0, pow_word(&t_i(0), -2)),
        (1, GroupWord::default()),
        (2, pow_word(&t_i(2), -2)),
        (3, GroupWord::default()),
        (4, GroupWord::default()),
        (5, pow_word(&t_i(5), -2)),
        (6, pow_word(&t_i(6), -2)),
    ];
    for (i, rhs) in rhs_bti {
        rels.push(Relation {
            family: BWithTi,
            name: format!("[b, t{i}]"),
            lhs: GroupWord::commutator(&b, &t_i(i)),
            rhs,
        });
    }
    for i in 0..7 {
        for j in i + 1..7 {
            rels.push(Relation {
                family: Translations,
                name: format!("[t{i}, t{j}]"),
                lhs: GroupWord::commutator(&t_i(i), &t_i(j)),
                rhs: GroupWord::default(),
            });
        }
    }
    rels
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> Crystal {
        Crystal::builtin()
    }

    #[test]
    fn generators_are_valid_isometries() {
        let c = g();
        for iso in [&c.alpha, &c.beta, &c.tau] {
            iso.check_valid().unwrap();
        }
        assert_eq!(mat_det(&c.alpha.rotation), rat(1));
        assert_eq!(mat_det(&c.beta.rotation), rat(1));
    }

    #[test]
    fn compose_identity_and_inverse() {
        let c = g();
        let id = IsometryElement::identity();
        assert_eq!(id.compose(&c.alpha), c.alpha);
        assert!(c.alpha.compose(&c.alpha.inverse()).is_identity());
    }

    #[test]
    fn beta_squared_is_a_pure_translation() {
        let c = g();
        let b2 = c.beta.compose(&c.beta);
        assert!(mat_is_identity(&b2.rotation));
        // b² translates by e₅ + e₆, which in the conjugated basis is t₁t₃.
        assert_eq!(b2.translation, vec_from_i64([0, 0, 0, 0, 1, 1, 0]));
        let rhs = c.eval_word(&t_i(1).concat(&t_i(3)));
        assert_eq!(b2, rhs);
    }

    #[test]
    fn eval_word_examples() {
        let c = g();
        assert!(c.eval_word(&parse_word("a^7").unwrap()).is_identity());
        assert!(c.eval_word(&GroupWord::default()).is_identity());
        let comm = c.eval_word(&GroupWord::commutator(
            &GroupWord(vec![(Gen::B, 1)]),
            &GroupWord(vec![(Gen::T, 1)]),
        ));
        let t_minus2 = c.tau.pow(-2);
        assert_eq!(comm, t_minus2);
    }

    #[test]
    fn presentation_holds_and_perturbation_fails() {
        let c = g();
        let report = c.verify_presentation();
        assert!(report.all_pass(), "failed: {:?}", report.checks.iter().filter(|x| !x.holds).collect::<Vec<_>>());
        assert_eq!(report.count(), 37);
        // perturbed relation b² = t₁t₂ must fail
        let lhs = c.eval_word(&pow_word(&GroupWord(vec![(Gen::B, 1)]), 2));
        let rhs = c.eval_word(&t_i(1).concat(&t_i(2)));
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn quotient_has_order_56() {
        let c = g();
        let classes = c.quotient_enumerate().unwrap();
        assert_eq!(classes.len(), 56);
        let with_id_rotation =
            classes.iter().filter(|x| mat_is_identity(&x.rotation)).count();
        assert_eq!(with_id_rotation, 1);
        // closure under generator action
        let set: HashSet<IsometryElement> = classes.iter().cloned().collect();
        for cls in &classes {
            for gen in [&c.alpha, &c.beta, &c.tau] {
                assert!(set.contains(&gen.compose(cls).class_rep()));
            }
        }
    }

    #[test]
    fn normal_form_round_trip() {
        let c = g();
        assert_eq!(
            c.normal_form(&IsometryElement::identity()).unwrap(),
            NormalForm { t_exponents: [0; 7], b_bits: [0, 0, 0], a_exponent: 0 }
        );
        let b2 = c.beta.compose(&c.beta);
        let nf = c.normal_form(&b2).unwrap();
        assert_eq!(nf.t_exponents, [0, 1, 0, 1, 0, 0, 0]);
        assert_eq!(nf.b_bits, [0, 0, 0]);
        assert_eq!(nf.a_exponent, 0);
        // not in Γ: quarter translation
        let bad = IsometryElement::translation_by([
            rat_frac(1, 4),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
        ]);
        assert!(matches!(c.normal_form(&bad), Err(CrystalError::NotInGroup)));
    }

    #[test]
    fn fixed_loci_of_generators() {
        let c = g();
        let fa = Crystal::fixed_locus(&c.alpha).unwrap();
        assert_eq!(fa.basis.len(), 1);
        assert_eq!(primitive_direction(&fa.basis[0]), [1, 1, 1, -1, 1, 1, 1]);
        assert!(Crystal::fixed_locus(&c.tau).is_none());
        assert!(Crystal::fixed_locus(&c.beta).is_none());
    }

    #[test]
    fn one_stratum_with_seven_fold_isotropy() {
        let c = g();
        let strata = c.singular_strata().unwrap();
        assert_eq!(strata.len(), 1);
        let s = &strata[0];
        assert_eq!(s.isotropy_order, 7);
        assert_eq!(s.angles, vec![rat_frac(1, 7), rat_frac(2, 7), rat_frac(4, 7)]);
        assert!((s.lattice_step - 7f64.sqrt()).abs() < 1e-12);
        // the realizing word translates by the primitive axis vector
        let step = c.eval_word(&s.step_word);
        assert!(mat_is_identity(&step.rotation));
        let expect: RatVec = std::array::from_fn(|i| rat(s.axis_primitive[i]));
        assert_eq!(step.translation, expect);
        assert_eq!(s.axis_primitive.iter().map(|x| x * x).sum::<i64>(), 7);
    }

    #[test]
    fn adapted_basis_is_orthonormal_and_block_rotates() {
        let c = g();
        let basis = c.adapted_basis().unwrap();
        let frame = basis.frame;
        let gram = frame.transpose() * frame;
        let id = nalgebra::SMatrix::<f64, 7, 7>::identity();
        assert!((gram - id).abs().max() < 1e-12);
        assert!(frame.determinant() > 0.0);
        // b₁ is the claimed axis
        let b1 = frame.column(0);
        let expected = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0].map(|x: f64| x / 7f64.sqrt());
        for i in 0..7 {
            assert!((b1[i] - expected[i]).abs() < 1e-14);
        }
        // the canonical generator in the frame: blocks by 2π/7, 4π/7, 8π/7
        let adapted = c.alpha.pow(basis.adapted_power);
        let mut rot = nalgebra::SMatrix::<f64, 7, 7>::zeros();
        for i in 0..7 {
            for j in 0..7 {
                rot[(i, j)] = rat_to_f64(&adapted.rotation[i][j]);
            }
        }
        let in_frame = frame.transpose() * rot * frame;
        let mut expect = nalgebra::SMatrix::<f64, 7, 7>::zeros();
        expect[(0, 0)] = 1.0;
        for (p, k) in [1.0f64, 2.0, 4.0].iter().enumerate() {
            let phi = 2.0 * std::f64::consts::PI * k / 7.0;
            let (s, cph) = phi.sin_cos();
            let o = 1 + 2 * p;
            expect[(o, o)] = cph;
            expect[(o, o + 1)] = -s;
            expect[(o + 1, o)] = s;
            expect[(o + 1, o + 1)] = cph;
        }
        assert!((in_frame - expect).abs().max() < 1e-12, "residual {}", (in_frame - expect).abs().max());
    }

    #[test]
    fn json_round_trip_matches_builtin() {
        let c = g();
        let json = r#"{
            "generators": {
                "a": {"rotation": [["0","1","0","0","0","0","0"],["0","0","1","0","0","0","0"],["0","0","0","0","0","0","1"],["0","0","0","0","0","-1","0"],["0","0","0","-1","0","0","0"],["1","0","0","0","0","0","0"],["0","0","0","0","1","0","0"]], "translation": ["0","0","0","0","0","0","0"]},
                "b": {"rotation": [["-1","0","0","0","0","0","0"],["0","-1","0","0","0","0","0"],["0","0","-1","0","0","0","0"],["0","0","0","-1","0","0","0"],["0","0","0","0","1","0","0"],["0","0","0","0","0","1","0"],["0","0","0","0","0","0","1"]], "translation": ["1/2","1/2","0","0","1/2","1/2","0"]},
                "t": {"rotation": [["1","0","0","0","0","0","0"],["0","1","0","0","0","0","0"],["0","0","1","0","0","0","0"],["0","0","0","1","0","0","0"],["0","0","0","0","1","0","0"],["0","0","0","0","0","1","0"],["0","0","0","0","0","0","1"]], "translation": ["1","0","0","0","0","0","0"]}
            },
            "relations": ["a^7", "b^2 t3^-1 t1^-1"]
        }"#;
        let loaded = Crystal::from_json(json).unwrap();
        assert_eq!(loaded.alpha, c.alpha);
        assert_eq!(loaded.beta, c.beta);
        assert_eq!(loaded.tau, c.tau);
        assert!(loaded.verify_presentation().all_pass());
    }

    #[test]
    fn bfs_cap_guards_bad_generators() {
        let mut c = g();
        // irrational-free but non-crystallographic: shift by 1/3 along e₁ only
        c.tau = IsometryElement::translation_by([
            rat_frac(1, 3),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
            rat(0),
        ]);
        c.bfs_cap = 60; // classes of the altered group exceed this quickly
        assert!(matches!(c.quotient_enumerate(), Err(CrystalError::BfsCapExceeded(_))));
    }

    #[test]
    fn integer_solver_small_cases() {
        use num::BigInt;
        let k = vec![vec![
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(-1),
            BigInt::from(1),
            BigInt::from(1),
            BigInt::from(1),
        ]];
        let c = vec![BigInt::from(3)];
        let x = solve_integer(&k, &c).unwrap();
        let dot: BigInt = k[0].iter().zip(&x).map(|(a, b)| a * b).sum();
        assert_eq!(dot, BigInt::from(3));
        // unsolvable: even row, odd target
        let k2 = vec![vec![BigInt::from(2); 7]];
        let c2 = vec![BigInt::from(3)];
        assert!(solve_integer(&k2, &c2).is_none());
    }
}
