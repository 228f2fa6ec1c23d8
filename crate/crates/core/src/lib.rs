//! Verification and computation engine for the flat G₂-orbifold ℝ⁷/Γ of the
//! generalised Kummer construction with ℤ₇ singular stratum.
//!
//! The crate mechanizes every finite-dimensional object in that setting:
//!
//! * [`crystal`] — exact rational arithmetic for the crystallographic group Γ,
//!   its presentation, the order-56 quotient, normal forms, fixed loci, and
//!   the singular stratum.
//! * [`exterior`] / [`g2`] — exterior algebra on ℝ⁷, the model G₂-structure
//!   and coassociative form, and the algebraic pieces of the instanton map.
//! * [`semilinear`] / [`monodromy`] — the θ-family of SO(14) monodromies,
//!   relation checks (floating and exact cyclotomic), invariant subspaces,
//!   the quantitative nondegeneracy constant, and the ℤ₂-lift algebra.
//! * [`flatfam`] — the explicit family of flat connections, its gauge and
//!   cutoff structure, gluing-region matching, dilation invariance,
//!   non-tangency to gauge orbits, and a discrete Poincaré constant.
//! * [`dolbeault`] — the anticomplex Hodge star, its identity suite, the
//!   Dolbeault block model of the linearised instanton operator, and the
//!   Hermitian Yang–Mills predicate.
//! * [`spectral`] — Fourier-truncated twisted operators over the orbifold as
//!   a brute-force kernel/cokernel oracle.
//! * [`contraction`] — fixed points of parametrized contraction families and
//!   the derivative-of-fixed-point formula.
//! * [`quiver`] — the ℂ³/ℤ₇ moment-map quotient scaffolding: equivariant
//!   representations, genericity of stability parameters, residual
//!   minimization, and group-lift criteria.
//!
//! All group arithmetic is exact; floating point enters only where an
//! irrational quantity forces it (√7, eigenframes, spectra). Every value is
//! immutable after construction and every operation is pure, so the whole
//! API is re-entrant.

pub mod contraction;
pub mod crystal;
pub mod cyclotomic;
pub mod dolbeault;
pub mod exterior;
pub mod flatfam;
pub mod g2;
pub mod linalg;
pub mod monodromy;
pub mod quiver;
pub mod rational;
pub mod report;
pub mod semilinear;
pub mod spectral;

pub use report::{Check, CheckStatus, Report};
