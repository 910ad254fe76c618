//! Affine iterated function systems `τ_b(x) = R^{-1}(x + b)` and their
//! equal-weight invariant measures, accessed through the mask `m_B`, the
//! Fourier transform `μ̂` and finite-level atomic approximations.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::algebra::matrix::RatMatrix;
use crate::algebra::rational::{dot_int, exp_2pi_i, fmt_ratio, int, int_vec_to_rat, to_f64};
use crate::algebra::{CycloExpression, IntMatrix, IntVec, RatVec, Rational};
use crate::error::{Error, Result};

/// Default cap on the number of atoms of a level measure.
pub const DEFAULT_ATOM_BUDGET: u128 = 1_000_000;

/// Minimum number of factors used by [`IfsSystem::mu_hat`].
pub const MIN_PRODUCT_FACTORS: usize = 8;

const MAX_PRODUCT_FACTORS: usize = 100_000;

/// A validated affine IFS with an expansive integer matrix `R` and an
/// integer digit set `B` containing 0 whose elements are incongruent
/// modulo `R ℤ^d` (a certificate of the no-overlap condition).
#[derive(Debug, Clone, PartialEq)]
pub struct IfsSystem {
    matrix: IntMatrix,
    digits: Vec<IntVec>,
    inverse: RatMatrix,
    transpose_inverse: RatMatrix,
}

impl IfsSystem {
    pub fn new(matrix: IntMatrix, digits: Vec<IntVec>) -> Result<Self> {
        let d = matrix.dim();
        if digits.is_empty() {
            return Err(Error::Empty("digit set"));
        }
        if let Some(bad) = digits.iter().find(|b| b.len() != d) {
            return Err(Error::Dimension(format!("digit {bad:?} has dimension {} but R is {d}x{d}", bad.len())));
        }
        if !matrix.is_expansive()? {
            return Err(Error::NotExpansive);
        }
        if !digits.iter().any(|b| b.iter().all(|&x| x == 0)) {
            return Err(Error::MissingZeroDigit);
        }
        let mut seen = BTreeSet::new();
        for b in &digits {
            if !seen.insert(b) {
                return Err(Error::DuplicateDigit(b.clone()));
            }
        }
        let inverse = matrix.inverse()?;
        for (i, a) in digits.iter().enumerate() {
            for b in &digits[i + 1..] {
                let diff: IntVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
                if inverse.mul_int_vec(&diff).iter().all(|x| x.denom().is_one()) {
                    return Err(Error::CongruentDigits(a.clone(), b.clone()));
                }
            }
        }
        let transpose_inverse = inverse.transpose();
        Ok(Self { matrix, digits, inverse, transpose_inverse })
    }

    /// One-dimensional convenience constructor.
    pub fn new_1d(r: i64, digits: &[i64]) -> Result<Self> {
        Self::new(IntMatrix::scalar(r), digits.iter().map(|&b| vec![b]).collect())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn digits(&self) -> &[IntVec] {
        &self.digits
    }

    /// `N = |B|`.
    pub fn n_digits(&self) -> usize {
        self.digits.len()
    }

    /// Scalar `R` when `d = 1`.
    pub fn scalar(&self) -> Option<i64> {
        self.matrix.as_scalar()
    }

    /// Position of the zero digit in `B`.
    pub fn zero_index(&self) -> usize {
        self.digits.iter().position(|b| b.iter().all(|&x| x == 0)).expect("validated")
    }

    /// Scalar digits for `d = 1`.
    pub fn digits_1d(&self) -> Option<Vec<i64>> {
        (self.dim() == 1).then(|| self.digits.iter().map(|b| b[0]).collect())
    }

    pub fn inverse(&self) -> &RatMatrix {
        &self.inverse
    }

    /// `(R^T)^{-1}`.
    pub fn transpose_inverse(&self) -> &RatMatrix {
        &self.transpose_inverse
    }

    /// `g_l(t) = (R^T)^{-1}(t - l)`.
    pub fn dual_step(&self, t: &[Rational], label: &[i64]) -> RatVec {
        let shifted: RatVec = t.iter().zip(label).map(|(x, &l)| x - BigInt::from(l)).collect();
        self.transpose_inverse.mul_vec(&shifted)
    }

    /// `τ_b(x) = R^{-1}(x + b)`.
    pub fn contract(&self, x: &[Rational], digit: &[i64]) -> RatVec {
        let shifted: RatVec = x.iter().zip(digit).map(|(x, &b)| x + BigInt::from(b)).collect();
        self.inverse.mul_vec(&shifted)
    }

    /// `m_B(t) = (1/N) Σ_b e^{2πi b·t}`.
    pub fn mask(&self, t: &[f64]) -> Complex64 {
        let sum: Complex64 = self
            .digits
            .iter()
            .map(|b| {
                let phase: f64 = b.iter().zip(t).map(|(&bi, &ti)| bi as f64 * ti).sum();
                Complex64::from_polar(1.0, TAU * phase)
            })
            .sum();
        sum / self.n_digits() as f64
    }

    /// `m_B` at a rational point, with every phase `b·t` reduced modulo 1
    /// exactly before evaluation.
    pub fn mask_rational(&self, t: &[Rational]) -> Complex64 {
        let sum: Complex64 = self.digits.iter().map(|b| exp_2pi_i(&dot_int(b, t))).sum();
        sum / self.n_digits() as f64
    }

    /// Exact test for `m_B(t) = 0` at a rational point.
    pub fn mask_vanishes_exact(&self, t: &[Rational]) -> Result<bool> {
        if t.len() != self.dim() {
            return Err(Error::Dimension(format!("point of dimension {} for d = {}", t.len(), self.dim())));
        }
        let phases: Vec<Rational> = self.digits.iter().map(|b| dot_int(b, t)).collect();
        Ok(CycloExpression::from_angles(phases.iter().map(|p| (p, 1)))?.is_zero())
    }

    /// `|m_B(t)| = 1` at a rational point, i.e. `t·b ∈ ℤ` for every digit.
    pub fn is_extreme_point(&self, t: &[Rational]) -> bool {
        self.digits.iter().all(|b| dot_int(b, t).denom().is_one())
    }

    /// `μ̂(t) = Π_{n≥1} m_B((R^T)^{-n} t)`, truncated once the tail bound
    /// `C Σ_{m>n} |(R^T)^{-m} t|` with `C = 2π Σ_b |b| / N` drops below
    /// `tol / 2`, and never before [`MIN_PRODUCT_FACTORS`] factors.
    pub fn mu_hat(&self, t: &[f64], tol: f64) -> Result<Complex64> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
        }
        if t.len() != self.dim() {
            return Err(Error::Dimension(format!("point of dimension {} for d = {}", t.len(), self.dim())));
        }
        let rho = self.matrix.min_eigen_modulus();
        let c = TAU * self.digits.iter().map(|b| norm_i(b)).sum::<f64>() / self.n_digits() as f64;
        let step = self.transpose_inverse_f64();
        let mut x = DVector::from_column_slice(t);
        let mut product = Complex64::new(1.0, 0.0);
        for n in 1..=MAX_PRODUCT_FACTORS {
            x = &step * x;
            product *= self.mask(x.as_slice());
            let tail = c * x.norm() / (rho - 1.0);
            if n >= MIN_PRODUCT_FACTORS && tail <= tol / 2.0 {
                return Ok(product);
            }
            if product == Complex64::zero() && n >= MIN_PRODUCT_FACTORS {
                return Ok(product);
            }
        }
        Ok(product)
    }

    fn transpose_inverse_f64(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| to_f64(self.transpose_inverse.get(i, j)))
    }

    /// Certifies `μ̂(t) = 0` by finding an exactly vanishing factor
    /// `m_B((R^T)^{-n} t)` with `n ≤ depth`. `false` is inconclusive.
    pub fn mu_hat_is_zero_exact(&self, t: &[Rational], depth: usize) -> Result<bool> {
        if depth == 0 {
            return Err(Error::InvalidArgument("depth must be at least 1".into()));
        }
        let mut x: RatVec = t.to_vec();
        for _ in 0..depth {
            x = self.transpose_inverse.mul_vec(&x);
            if self.mask_vanishes_exact(&x)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// The level-`k` measure `δ_{R^{-k}(B + RB + … + R^{k-1}B)}`: `N^k`
    /// atoms of mass `N^{-k}`, sorted by position.
    pub fn level_measure(&self, k: usize, budget: u128) -> Result<AtomicMeasure> {
        if k == 0 {
            return Err(Error::InvalidArgument("level must be at least 1".into()));
        }
        let needed = checked_pow(self.n_digits() as u128, k).ok_or(Error::Overflow("atom count"))?;
        if needed > budget {
            return Err(Error::Resource { what: "level measure atoms", needed, budget });
        }
        let zero = vec![Rational::zero(); self.dim()];
        let mut points = vec![zero];
        for _ in 0..k {
            points = points
                .iter()
                .flat_map(|x| self.digits.iter().map(move |b| (x, b)))
                .map(|(x, b)| self.contract(x, b))
                .collect();
        }
        points.sort();
        let mass = Rational::new(BigInt::one(), BigInt::from(needed));
        let atoms = points.into_iter().map(|point| Atom { point, mass: mass.clone() }).collect();
        AtomicMeasure::new(atoms)
    }

    /// Bounding box of the attractor `X_B`.
    pub fn attractor_box(&self) -> AttractorBox {
        if let (Some(r), Some(b)) = (self.scalar(), self.digits_1d()) {
            let lo = *b.iter().min().expect("non-empty");
            let hi = *b.iter().max().expect("non-empty");
            if r >= 2 {
                let s = int(r - 1);
                return AttractorBox::Exact { lower: int(lo) / &s, upper: int(hi) / s };
            }
            // R <= -2: split Σ R^{-k} b_k into even and odd k.
            let a = r.abs();
            let denom = int(a * a - 1);
            let lower = (int(lo) - int(hi) * BigInt::from(a)) / &denom;
            let upper = (int(hi) - int(lo) * BigInt::from(a)) / denom;
            return AttractorBox::Exact { lower, upper };
        }
        let d = self.dim();
        let inv = DMatrix::from_fn(d, d, |i, j| to_f64(self.inverse.get(i, j)));
        let digits: Vec<DVector<f64>> =
            self.digits.iter().map(|b| DVector::from_iterator(d, b.iter().map(|&x| x as f64))).collect();
        let max_digit = self.digits.iter().map(|b| norm_i(b)).fold(0.0, f64::max);
        let rho = self.matrix.min_eigen_modulus();
        let mut power = inv.clone();
        let mut bounds = vec![(0.0f64, 0.0f64); d];
        for _ in 0..MAX_PRODUCT_FACTORS {
            for (i, bound) in bounds.iter_mut().enumerate() {
                let images = digits.iter().map(|b| (&power * b)[i]);
                bound.0 += images.clone().fold(f64::INFINITY, f64::min);
                bound.1 += images.fold(f64::NEG_INFINITY, f64::max);
            }
            power = &power * &inv;
            if power.norm() * max_digit < 1e-15 {
                break;
            }
        }
        let pad = power.norm() * max_digit * rho / (rho - 1.0);
        AttractorBox::Numeric(bounds.into_iter().map(|(lo, hi)| (lo - pad, hi + pad)).collect())
    }
}

fn norm_i(v: &[i64]) -> f64 {
    v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt()
}

pub(crate) fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

/// Interval hull of the attractor.
#[derive(Debug, Clone, PartialEq)]
pub enum AttractorBox {
    /// Exact interval for `d = 1`.
    Exact { lower: Rational, upper: Rational },
    /// Per-coordinate numeric bounds for `d > 1`.
    Numeric(Vec<(f64, f64)>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub point: RatVec,
    pub mass: Rational,
}

/// Finite probability measure with rational atoms and masses.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Empty("atomic measure"));
        }
        let total: Rational = atoms.iter().map(|a| &a.mass).sum();
        if !total.is_one() {
            return Err(Error::InvalidArgument(format!("masses sum to {total}, not 1")));
        }
        if atoms.iter().any(|a| a.mass <= Rational::zero()) {
            return Err(Error::InvalidArgument("atom masses must be positive".into()));
        }
        let distinct: BTreeSet<&RatVec> = atoms.iter().map(|a| &a.point).collect();
        if distinct.len() != atoms.len() {
            return Err(Error::InvalidArgument("atoms must be pairwise distinct".into()));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `∫ e^{2πi t·x} dδ(x)`.
    pub fn fourier(&self, t: &[f64]) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| {
                let phase: f64 = a.point.iter().zip(t).map(|(x, &ti)| to_f64(x) * ti).sum();
                to_f64(&a.mass) * Complex64::from_polar(1.0, TAU * phase)
            })
            .sum()
    }

    /// CSV with one row per atom: point components then mass, all as
    /// exact `p/q` strings.
    pub fn to_csv(&self) -> String {
        let d = self.atoms[0].point.len();
        let mut out = String::new();
        let header: Vec<String> = (0..d).map(|i| format!("x{i}")).chain(["mass".to_string()]).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for a in &self.atoms {
            let mut row: Vec<String> = a.point.iter().map(fmt_ratio).collect();
            row.push(fmt_ratio(&a.mass));
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Exact image of an integer vector under `R^{-1}`; handy in tests.
pub fn apply_inverse(sys: &IfsSystem, v: &[i64]) -> RatVec {
    sys.inverse.mul_vec(&int_vec_to_rat(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn jp() -> IfsSystem {
        IfsSystem::new_1d(4, &[0, 2]).unwrap()
    }

    fn r6() -> IfsSystem {
        IfsSystem::new_1d(6, &[0, 2, 4]).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(IfsSystem::new_1d(4, &[0, 2]).is_ok());
        assert!(IfsSystem::new_1d(2, &[0, 1]).is_ok());
        assert_eq!(IfsSystem::new_1d(3, &[0, 3]), Err(Error::CongruentDigits(vec![0], vec![3])));
        assert_eq!(IfsSystem::new_1d(1, &[0]), Err(Error::NotExpansive));
        assert_eq!(IfsSystem::new_1d(4, &[1, 2]), Err(Error::MissingZeroDigit));
        assert_eq!(IfsSystem::new_1d(4, &[0, 2, 2]), Err(Error::DuplicateDigit(vec![2])));
        assert_eq!(IfsSystem::new_1d(4, &[]), Err(Error::Empty("digit set")));
        let m = IntMatrix::from_rows(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert!(matches!(IfsSystem::new(m, vec![vec![0]]), Err(Error::Dimension(_))));
    }

    #[test]
    fn mask_values() {
        assert!((jp().mask(&[0.0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(jp().mask(&[0.25]).norm() < 1e-15);
        assert!(r6().mask(&[1.0 / 6.0]).norm() < 1e-15);
    }

    #[test]
    fn exact_mask_zeros() {
        assert!(jp().mask_vanishes_exact(&[rat(1, 4)]).unwrap());
        assert!(!jp().mask_vanishes_exact(&[rat(1, 2)]).unwrap());
        assert!(r6().mask_vanishes_exact(&[rat(5, 6)]).unwrap());
        assert!(!r6().mask_vanishes_exact(&[rat(1, 2)]).unwrap());
        assert!(jp().mask_vanishes_exact(&[rat(1, 4), rat(0, 1)]).is_err());
    }

    #[test]
    fn mu_hat_values() {
        let sys = jp();
        assert!((sys.mu_hat(&[0.0], 1e-12).unwrap() - 1.0).norm() < 1e-12);
        assert!(sys.mu_hat(&[1.0], 1e-12).unwrap().norm() < 1e-12);
        assert!(sys.mu_hat(&[4.0], 1e-12).unwrap().norm() < 1e-12);
        assert!(sys.mu_hat(&[1.0], 0.0).is_err());
        assert!(sys.mu_hat(&[1.0], -1.0).is_err());
    }

    #[test]
    fn exact_mu_hat_zeros() {
        assert!(jp().mu_hat_is_zero_exact(&[int(1)], 3).unwrap());
        assert!(!jp().mu_hat_is_zero_exact(&[int(0)], 10).unwrap());
        assert!(r6().mu_hat_is_zero_exact(&[int(-4)], 5).unwrap());
        assert!(jp().mu_hat_is_zero_exact(&[int(1)], 0).is_err());
    }

    #[test]
    fn level_measures() {
        let m = jp().level_measure(1, DEFAULT_ATOM_BUDGET).unwrap();
        let pts: Vec<Rational> = m.atoms().iter().map(|a| a.point[0].clone()).collect();
        assert_eq!(pts, vec![int(0), rat(1, 2)]);
        assert!(m.atoms().iter().all(|a| a.mass == rat(1, 2)));

        let m = jp().level_measure(2, DEFAULT_ATOM_BUDGET).unwrap();
        let pts: Vec<Rational> = m.atoms().iter().map(|a| a.point[0].clone()).collect();
        assert_eq!(pts, vec![int(0), rat(1, 8), rat(1, 2), rat(5, 8)]);
        assert!(m.atoms().iter().all(|a| a.mass == rat(1, 4)));

        let m = IfsSystem::new_1d(2, &[0, 1]).unwrap().level_measure(3, DEFAULT_ATOM_BUDGET).unwrap();
        let pts: Vec<Rational> = m.atoms().iter().map(|a| a.point[0].clone()).collect();
        assert_eq!(pts, (0..8).map(|j| rat(j, 8)).collect::<Vec<_>>());
    }

    #[test]
    fn level_measure_budget() {
        let err = jp().level_measure(11, 1024).unwrap_err();
        assert_eq!(err, Error::Resource { what: "level measure atoms", needed: 2048, budget: 1024 });
    }

    #[test]
    fn attractor_boxes() {
        assert_eq!(jp().attractor_box(), AttractorBox::Exact { lower: int(0), upper: rat(2, 3) });
        let lebesgue = IfsSystem::new_1d(2, &[0, 1]).unwrap();
        assert_eq!(lebesgue.attractor_box(), AttractorBox::Exact { lower: int(0), upper: int(1) });
        assert_eq!(r6().attractor_box(), AttractorBox::Exact { lower: int(0), upper: rat(4, 5) });
        let neg = IfsSystem::new_1d(-2, &[0, 1]).unwrap();
        assert_eq!(neg.attractor_box(), AttractorBox::Exact { lower: rat(-2, 3), upper: rat(1, 3) });
    }

    #[test]
    fn numeric_box_contains_level_atoms() {
        let m = IntMatrix::from_rows(vec![vec![2, 1], vec![0, 3]]).unwrap();
        let sys = IfsSystem::new(m, vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let AttractorBox::Numeric(bounds) = sys.attractor_box() else { panic!("expected numeric box") };
        for a in sys.level_measure(6, DEFAULT_ATOM_BUDGET).unwrap().atoms() {
            for (x, (lo, hi)) in a.point.iter().zip(&bounds) {
                let x = to_f64(x);
                assert!(*lo - 1e-12 <= x && x <= *hi + 1e-12);
            }
        }
    }

    #[test]
    fn csv_export() {
        let csv = jp().level_measure(1, DEFAULT_ATOM_BUDGET).unwrap().to_csv();
        assert_eq!(csv, "x0,mass\n0/1,1/2\n1/2,1/2\n");
    }
}
