//! Square integer matrices and their exact rational inverses.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{int, is_integer, IntVec, RatVec, Rational};
use crate::error::{Error, Result};

/// Eigenvalue moduli closer than this to 1 make a `d >= 3` expansivity test
/// indeterminate.
pub const EXPANSIVE_MARGIN: f64 = 1e-9;

/// A `d × d` integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.rows()
    }
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Dimension("matrix has no rows".into()));
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::Dimension(format!(
                "matrix is not square: {dim} rows but a row of length {}",
                bad.len()
            )));
        }
        Ok(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn scalar(value: i64) -> Self {
        Self { dim: 1, entries: vec![value] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.dim).map(<[i64]>::to_vec).collect()
    }

    /// The single entry of a `1 × 1` matrix.
    pub fn as_scalar(&self) -> Option<i64> {
        (self.dim == 1).then(|| self.entries[0])
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.get(i, j);
            }
        }
        Self { dim: d, entries }
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<IntVec> {
        self.check_len(v.len())?;
        (0..self.dim)
            .map(|i| {
                (0..self.dim).try_fold(0i64, |acc, j| {
                    self.get(i, j)
                        .checked_mul(v[j])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow("integer matrix-vector product"))
                })
            })
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rational]) -> Result<RatVec> {
        self.check_len(v.len())?;
        Ok((0..self.dim)
            .map(|i| (0..self.dim).fold(Rational::zero(), |acc, j| acc + &v[j] * BigInt::from(self.get(i, j))))
            .collect())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::Dimension(format!("vector of length {len} for a {0}x{0} matrix", self.dim)));
        }
        Ok(())
    }

    fn to_big(&self) -> Vec<Vec<BigInt>> {
        self.rows().into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()
    }

    /// Characteristic polynomial `det(xI - M)`, coefficients from the
    /// constant term up (monic, length `d + 1`). Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let d = self.dim;
        let a = self.to_big();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        // m holds M_k; starts at the zero matrix
        let mut m = vec![vec![BigInt::zero(); d]; d];
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I
            let mut next = vec![vec![BigInt::zero(); d]; d];
            for i in 0..d {
                for j in 0..d {
                    let mut s = BigInt::zero();
                    for t in 0..d {
                        s += &a[i][t] * &m[t][j];
                    }
                    if i == j {
                        s += &coeffs[d - k + 1];
                    }
                    next[i][j] = s;
                }
            }
            m = next;
            // c_{d-k} = -tr(A M_k) / k
            let mut tr = BigInt::zero();
            for i in 0..d {
                for t in 0..d {
                    tr += &a[i][t] * &m[t][i];
                }
            }
            coeffs[d - k] = -tr / BigInt::from(k);
        }
        coeffs
    }

    pub fn det(&self) -> BigInt {
        let p = self.char_poly();
        if self.dim.is_multiple_of(2) {
            p[0].clone()
        } else {
            -p[0].clone()
        }
    }

    /// Exact inverse over the rationals.
    pub fn inverse(&self) -> Result<RatMatrix> {
        let d = self.dim;
        let mut aug: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..2 * d)
                    .map(|j| {
                        if j < d {
                            int(self.get(i, j))
                        } else if j - d == i {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !aug[r][col].is_zero()).ok_or(Error::Singular)?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= &factor * p;
                    }
                }
            }
        }
        Ok(RatMatrix { dim: d, entries: aug.into_iter().flat_map(|row| row.into_iter().skip(d)).collect() })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j) as f64)
    }

    /// Smallest eigenvalue modulus, computed numerically.
    pub fn min_eigen_modulus(&self) -> f64 {
        if let Some(r) = self.as_scalar() {
            return (r as f64).abs();
        }
        self.to_f64().complex_eigenvalues().iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    /// True iff every eigenvalue has modulus strictly greater than 1.
    ///
    /// Exact for `d <= 2`. For `d >= 3` the determinant and the rational
    /// roots `±1` are tested exactly first; the remaining cases fall back to
    /// numerical eigenvalues and report moduli within [`EXPANSIVE_MARGIN`]
    /// of 1 as indeterminate.
    pub fn is_expansive(&self) -> Result<bool> {
        match self.dim {
            1 => Ok(self.entries[0].abs() > 1),
            2 => {
                let det =
                    self.get(0, 0) as i128 * self.get(1, 1) as i128 - self.get(0, 1) as i128 * self.get(1, 0) as i128;
                let tr = self.get(0, 0) as i128 + self.get(1, 1) as i128;
                // Jury conditions for the reciprocal polynomial
                Ok(det.abs() > 1 && tr.abs() < det.abs() + det.signum())
            }
            _ => {
                let p = self.char_poly();
                if p[0].abs() <= BigInt::one() {
                    return Ok(false);
                }
                let at_one: BigInt = p.iter().sum();
                let at_minus_one: BigInt =
                    p.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.clone() } else { -c.clone() }).sum();
                if at_one.is_zero() || at_minus_one.is_zero() {
                    return Ok(false);
                }
                let min_modulus = self.min_eigen_modulus();
                if min_modulus > 1.0 + EXPANSIVE_MARGIN {
                    Ok(true)
                } else if min_modulus < 1.0 - EXPANSIVE_MARGIN {
                    Ok(false)
                } else {
                    Err(Error::IndeterminateExpansivity { min_modulus, margin: EXPANSIVE_MARGIN })
                }
            }
        }
    }

    /// True iff `M^{-1}(v_i - v_j)` is never an integer vector for `i != j`.
    pub fn incongruent_mod(&self, vectors: &[IntVec]) -> Result<bool> {
        let inv = self.inverse()?;
        for v in vectors {
            self.check_len(v.len())?;
        }
        for (i, a) in vectors.iter().enumerate() {
            for b in &vectors[i + 1..] {
                let diff: IntVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
                if inv.mul_int_vec(&diff).iter().all(is_integer) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn det_i64(&self) -> Result<i64> {
        self.det().to_i64().ok_or(Error::Overflow("determinant"))
    }
}

/// A square matrix of exact rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.dim + j]
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVec {
        (0..self.dim).map(|i| (0..self.dim).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j])).collect()
    }

    pub fn mul_int_vec(&self, v: &[i64]) -> RatVec {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * BigInt::from(v[j])))
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d).map(|k| self.get(k % d, k / d).clone()).collect();
        Self { dim: d, entries }
    }
}
