//! Dense numerical helpers: nullspaces with a guard band around the rank
//! threshold, smallest singular values via QR reduction, and complex
//! nullities. Built on nalgebra's SVD/QR; no iterative eigensolvers.

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

pub type C64 = Complex<f64>;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("SVD failed to converge")]
    SvdFailed,
}

/// Rank decision threshold and the band reported as indeterminate instead of
/// silently classified.
#[derive(Debug, Clone, Copy)]
pub struct RankPolicy {
    pub threshold: f64,
    pub guard_low: f64,
    pub guard_high: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        Self { threshold: 1e-9, guard_low: 1e-11, guard_high: 1e-7 }
    }
}

#[derive(Debug, Clone)]
pub struct Nullspace {
    /// Orthonormal basis of the numerical kernel (right singular vectors).
    pub basis: Vec<DVector<f64>>,
    /// Singular values inside the guard band, reported not classified.
    pub borderline: Vec<f64>,
    /// Smallest singular value overall.
    pub smallest: f64,
    /// Smallest singular value above the threshold (the spectral gap).
    pub gap: f64,
}

/// Singular values of a (possibly tall) matrix, descending. QR-reduces tall
/// input first; the values-only SVD path is used throughout because nalgebra's
/// vector-computing path mis-scales singular values on rank-deficient input.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>, LinalgError> {
    let n = m.ncols();
    let square = if m.nrows() > n { m.clone().qr().r() } else { m.clone() };
    let svd = square.try_svd(false, false, f64::EPSILON, 10_000).ok_or(LinalgError::SvdFailed)?;
    let mut s: Vec<f64> = svd.singular_values.iter().cloned().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

/// Kernel of a matrix. Singular values come from the values-only SVD; the
/// kernel basis is the trailing Q-columns of a column-pivoted QR of Mᵀ, which
/// avoids the unreliable singular-vector path. Residuals are verified.
pub fn nullspace(m: &DMatrix<f64>, policy: RankPolicy) -> Result<Nullspace, LinalgError> {
    let n = m.ncols();
    let svs = singular_values(m)?;
    let mut borderline = Vec::new();
    let mut smallest = f64::INFINITY;
    let mut gap = f64::INFINITY;
    let mut kernel_dim = 0usize;
    for &s in &svs {
        smallest = smallest.min(s);
        if s < policy.threshold {
            kernel_dim += 1;
        } else {
            gap = gap.min(s);
        }
        if s > policy.guard_low && s < policy.guard_high {
            borderline.push(s);
        }
    }
    // svs has length min(nrows, ncols); wide matrices have at least
    // ncols − nrows more kernel directions.
    if m.nrows() < n {
        kernel_dim += n - m.nrows();
    }
    let mut basis = Vec::new();
    if kernel_dim > 0 {
        let qr = m.transpose().col_piv_qr();
        let q = qr.q(); // n × min(n, nrows)
        let rank = n - kernel_dim;
        if q.ncols() < n {
            // complete Q to a full orthonormal basis of ℝⁿ
            let full = complete_orthonormal(&q);
            for k in rank..n {
                basis.push(full.column(k).into_owned());
            }
        } else {
            for k in rank..n {
                basis.push(q.column(k).into_owned());
            }
        }
        // verification: each basis vector must be annihilated at the scale of
        // the retained singular values
        let scale = svs.first().cloned().unwrap_or(1.0).max(1.0);
        for b in &basis {
            let residual = (m * b).norm();
            if residual > policy.threshold * scale * 10.0 {
                return Err(LinalgError::SvdFailed);
            }
        }
    }
    Ok(Nullspace { basis, borderline, smallest, gap })
}

/// Extends the orthonormal columns of `q` to a full orthonormal basis.
fn complete_orthonormal(q: &DMatrix<f64>) -> DMatrix<f64> {
    let n = q.nrows();
    let mut cols: Vec<DVector<f64>> = (0..q.ncols()).map(|j| q.column(j).into_owned()).collect();
    let mut e = 0usize;
    while cols.len() < n {
        let mut v = DVector::<f64>::zeros(n);
        v[e % n] = 1.0;
        e += 1;
        for c in &cols {
            let proj = c.dot(&v);
            v -= c * proj;
        }
        if v.norm() > 1e-8 {
            let vn = v.normalize();
            cols.push(vn);
        }
    }
    DMatrix::from_columns(&cols)
}

pub fn smallest_singular_value(m: &DMatrix<f64>) -> Result<f64, LinalgError> {
    let n = m.ncols();
    let square = if m.nrows() > n { m.clone().qr().r() } else { m.clone() };
    let svd = square.try_svd(false, false, f64::EPSILON, 10_000).ok_or(LinalgError::SvdFailed)?;
    Ok(svd.singular_values.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Nullity of a complex matrix at the given tolerance.
pub fn complex_nullity(m: &DMatrix<C64>, tol: f64) -> Result<usize, LinalgError> {
    let svd = m.clone().try_svd(false, false, f64::EPSILON, 10_000).ok_or(LinalgError::SvdFailed)?;
    Ok(svd.singular_values.iter().filter(|&&s| s < tol).count())
}

/// Stacks matrices vertically.
pub fn vstack(mats: &[DMatrix<f64>]) -> DMatrix<f64> {
    let cols = mats[0].ncols();
    let rows: usize = mats.iter().map(|m| m.nrows()).sum();
    let mut out = DMatrix::<f64>::zeros(rows, cols);
    let mut r0 = 0;
    for m in mats {
        out.view_mut((r0, 0), (m.nrows(), cols)).copy_from(m);
        r0 += m.nrows();
    }
    out
}

/// Angle between two vectors modulo sign, in radians. Computed from the
/// perpendicular component, which stays accurate for small angles where
/// acos(1 − ε) loses half the precision.
pub fn angle_mod_sign(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let an = a / a.norm();
    let bn = b / b.norm();
    let dot = an.dot(&bn);
    let aligned = if dot < 0.0 { -bn } else { bn };
    let perp = (&an - &aligned).norm();
    // chord length to angle; exact enough over the small-angle range used here
    2.0 * (perp / 2.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_projector() {
        // rank-1 projector on ℝ³: kernel dim 2
        let v = DVector::from_vec(vec![1.0, 2.0, 2.0]).normalize();
        let p = &v * v.transpose();
        let ns = nullspace(&p, RankPolicy::default()).unwrap();
        assert_eq!(ns.basis.len(), 2);
        assert!((ns.gap - 1.0).abs() < 1e-12);
        for b in &ns.basis {
            assert!(v.dot(b).abs() < 1e-12);
        }
    }

    #[test]
    fn tall_qr_reduction_agrees() {
        let m = DMatrix::<f64>::from_fn(30, 5, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0);
        let direct = m.clone().svd(false, false);
        let viaqr = smallest_singular_value(&m).unwrap();
        let dmin = direct.singular_values.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((viaqr - dmin).abs() < 1e-10);
    }

    #[test]
    fn guard_band_reports_borderline() {
        let mut m = DMatrix::<f64>::identity(4, 4);
        m[(3, 3)] = 1e-9; // inside (1e-11, 1e-7)
        let ns = nullspace(&m, RankPolicy::default()).unwrap();
        assert_eq!(ns.borderline.len(), 1);
    }
}
