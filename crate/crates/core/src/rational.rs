//! Exact rational scalars, 7-vectors, and 7×7 matrices.
//!
//! Everything here is arbitrary-precision and exact; these are the carriers
//! for all crystallographic group arithmetic.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("cannot parse `{0}` as a rational (expected `p` or `p/q`)")]
    Parse(String),
    #[error("singular system: no exact solution")]
    Singular,
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` with optional sign.
pub fn parse_rat(s: &str) -> Result<Rat, RationalError> {
    let s = s.trim();
    let mk_err = || RationalError::Parse(s.to_string());
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(Rat::from_integer).map_err(|_| mk_err()),
        Some((p, q)) => {
            let p = p.trim().parse::<BigInt>().map_err(|_| mk_err())?;
            let q = q.trim().parse::<BigInt>().map_err(|_| mk_err())?;
            if q.is_zero() {
                return Err(mk_err());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Renders a rational as `p` or `p/q`, the wire format used in JSON reports.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Good enough for the magnitudes appearing here (small fractions).
    let nf: f64 = n.to_string().parse().unwrap_or(f64::NAN);
    let df: f64 = d.to_string().parse().unwrap_or(f64::NAN);
    nf / df
}

/// Fractional part in `[0, 1)`.
pub fn rat_fract(r: &Rat) -> Rat {
    let f = r.fract();
    if f.is_negative() {
        f + Rat::one()
    } else {
        f
    }
}

pub const DIM: usize = 7;

pub type RatVec = [Rat; DIM];
pub type RatMat = [[Rat; DIM]; DIM];

pub fn vec_zero() -> RatVec {
    std::array::from_fn(|_| Rat::zero())
}

pub fn vec_from_i64(v: [i64; DIM]) -> RatVec {
    std::array::from_fn(|i| rat(v[i]))
}

pub fn vec_add(a: &RatVec, b: &RatVec) -> RatVec {
    std::array::from_fn(|i| &a[i] + &b[i])
}

pub fn vec_sub(a: &RatVec, b: &RatVec) -> RatVec {
    std::array::from_fn(|i| &a[i] - &b[i])
}

pub fn vec_neg(a: &RatVec) -> RatVec {
    std::array::from_fn(|i| -&a[i])
}

pub fn vec_dot(a: &RatVec, b: &RatVec) -> Rat {
    let mut s = Rat::zero();
    for i in 0..DIM {
        s += &a[i] * &b[i];
    }
    s
}

pub fn vec_is_zero(a: &RatVec) -> bool {
    a.iter().all(Rat::is_zero)
}

pub fn vec_is_integer(a: &RatVec) -> bool {
    a.iter().all(|x| x.denom().is_one())
}

/// Componentwise fractional part, the representative in `[0, 1)⁷`.
pub fn vec_fract(a: &RatVec) -> RatVec {
    std::array::from_fn(|i| rat_fract(&a[i]))
}

pub fn mat_identity() -> RatMat {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Rat::one() } else { Rat::zero() }))
}

pub fn mat_zero() -> RatMat {
    std::array::from_fn(|_| vec_zero())
}

pub fn mat_from_i64(m: [[i64; DIM]; DIM]) -> RatMat {
    std::array::from_fn(|i| std::array::from_fn(|j| rat(m[i][j])))
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let mut c = mat_zero();
    for i in 0..DIM {
        for k in 0..DIM {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..DIM {
                if !b[k][j].is_zero() {
                    c[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    c
}

pub fn mat_vec(a: &RatMat, v: &RatVec) -> RatVec {
    std::array::from_fn(|i| {
        let mut s = Rat::zero();
        for j in 0..DIM {
            if !a[i][j].is_zero() {
                s += &a[i][j] * &v[j];
            }
        }
        s
    })
}

pub fn mat_transpose(a: &RatMat) -> RatMat {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].clone()))
}

pub fn mat_eq(a: &RatMat, b: &RatMat) -> bool {
    (0..DIM).all(|i| (0..DIM).all(|j| a[i][j] == b[i][j]))
}

pub fn mat_is_identity(a: &RatMat) -> bool {
    mat_eq(a, &mat_identity())
}

/// Exact determinant by fraction-free Gaussian elimination.
pub fn mat_det(a: &RatMat) -> Rat {
    let mut m: Vec<Vec<Rat>> = a.iter().map(|r| r.to_vec()).collect();
    let mut det = Rat::one();
    for col in 0..DIM {
        let pivot = (col..DIM).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else { return Rat::zero() };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        det *= m[col][col].clone();
        let inv = m[col][col].recip();
        for r in col + 1..DIM {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] * &inv;
            for c in col..DIM {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

/// Exact solution set of `A x = b`: a particular solution and a kernel basis,
/// or `None` when the system is inconsistent.
pub fn solve_affine(a: &RatMat, b: &RatVec) -> Option<(RatVec, Vec<RatVec>)> {
    // Reduced row echelon form of the augmented system.
    let mut m: Vec<Vec<Rat>> = (0..DIM)
        .map(|i| {
            let mut row: Vec<Rat> = a[i].to_vec();
            row.push(b[i].clone());
            row
        })
        .collect();
    let ncols = DIM + 1;
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..DIM {
        let Some(p) = (row..DIM).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(p, row);
        let inv = m[row][col].recip();
        for c in col..ncols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..DIM {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let sub = &f * &m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == DIM {
            break;
        }
    }
    // Inconsistency: zero row with nonzero rhs.
    for r in row..DIM {
        if !m[r][DIM].is_zero() {
            return None;
        }
    }
    let mut particular = vec_zero();
    for (r, &col) in pivots.iter().enumerate() {
        particular[col] = m[r][DIM].clone();
    }
    let free: Vec<usize> = (0..DIM).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec_zero();
            v[fc] = Rat::one();
            for (r, &col) in pivots.iter().enumerate() {
                v[col] = -m[r][fc].clone();
            }
            v
        })
        .collect();
    Some((particular, basis))
}

pub struct DisplayVec<'a>(pub &'a RatVec);

impl fmt::Display for DisplayVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rat).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["1/2", "-3/4", "0", "7", "-2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn determinant_of_identity_and_swap() {
        assert_eq!(mat_det(&mat_identity()), rat(1));
        let mut m = mat_identity();
        m.swap(0, 1);
        assert_eq!(mat_det(&m), rat(-1));
    }

    #[test]
    fn solve_full_rank() {
        let a = mat_identity();
        let b = vec_from_i64([1, 2, 3, 4, 5, 6, 7]);
        let (x, kernel) = solve_affine(&a, &b).unwrap();
        assert_eq!(x, b);
        assert!(kernel.is_empty());
    }

    #[test]
    fn solve_inconsistent() {
        let a = mat_zero();
        let b = vec_from_i64([1, 0, 0, 0, 0, 0, 0]);
        assert!(solve_affine(&a, &b).is_none());
    }

    #[test]
    fn solve_underdetermined_kernel() {
        let mut a = mat_zero();
        a[0][0] = rat(1);
        let b = vec_zero();
        let (x, kernel) = solve_affine(&a, &b).unwrap();
        assert!(vec_is_zero(&x));
        assert_eq!(kernel.len(), 6);
    }
}
