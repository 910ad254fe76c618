//! Frame candidates `(R, B, L, α)`: the matrix `T`, its isometry test and
//! the conditions equivalent to or implied by it.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::cyclo::weighted_angles_vanish;
use crate::algebra::rational::{dot_int, exp_2pi_i, fmt_short, int_vec_to_rat, to_f64};
use crate::algebra::{CycloExpression, IntVec, RatVec, Rational};
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

/// Default tolerance for matrix identities in max norm.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest residue box searched when deciding universal infeasibility.
const RESIDUE_SEARCH_LIMIT: u128 = 1_000_000;

/// A frame weight `α_l`.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    /// Arbitrary complex value.
    Complex { re: f64, im: f64 },
    /// `√ratio · e^{2πi·phase}`, which keeps `|α|² = ratio` exact.
    Sqrt { ratio: Rational, phase: Rational },
    /// Zero weight introduced by padding a label set.
    Padded,
}

impl Weight {
    pub fn one() -> Self {
        Weight::Sqrt { ratio: Rational::one(), phase: Rational::zero() }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Weight::Complex { re, im }
    }

    /// `1/√n`.
    pub fn sqrt_recip(n: i64) -> Self {
        Self::sqrt(Rational::new(BigInt::one(), BigInt::from(n)))
    }

    pub fn sqrt(ratio: Rational) -> Self {
        Weight::Sqrt { ratio, phase: Rational::zero() }
    }

    pub fn sqrt_with_phase(ratio: Rational, phase: Rational) -> Self {
        Weight::Sqrt { ratio, phase }
    }

    pub fn value(&self) -> Complex64 {
        match self {
            Weight::Complex { re, im } => Complex64::new(*re, *im),
            Weight::Sqrt { ratio, phase } => exp_2pi_i(phase) * to_f64(ratio).sqrt(),
            Weight::Padded => Complex64::zero(),
        }
    }

    /// `|α|²` when it is known exactly: square-root forms, padding, and
    /// complex inputs whose parts are dyadic with small denominators.
    pub fn norm_sq_exact(&self) -> Option<Rational> {
        match self {
            Weight::Sqrt { ratio, .. } => Some(ratio.clone()),
            Weight::Padded => Some(Rational::zero()),
            Weight::Complex { re, im } => {
                let re = short_dyadic(*re)?;
                let im = short_dyadic(*im)?;
                Some(&re * &re + &im * &im)
            }
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match self.norm_sq_exact() {
            Some(r) => to_f64(&r),
            None => self.value().norm_sqr(),
        }
    }

    pub fn is_padded(&self) -> bool {
        matches!(self, Weight::Padded)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Weight::Padded => true,
            Weight::Sqrt { ratio, .. } => ratio.is_zero(),
            Weight::Complex { re, im } => *re == 0.0 && *im == 0.0,
        }
    }

    fn is_exactly_one(&self) -> bool {
        match self {
            Weight::Sqrt { ratio, phase } => ratio.is_one() && phase.denom().is_one(),
            Weight::Complex { re, im } => *re == 1.0 && *im == 0.0,
            Weight::Padded => false,
        }
    }
}

fn short_dyadic(x: f64) -> Option<Rational> {
    let r = Rational::from_float(x)?;
    (r.denom().bits() <= 17).then_some(r)
}

/// `(R, B)` together with labels `L ∋ 0` and weights `α_l`, `α_0 = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCandidate {
    sys: IfsSystem,
    labels: Vec<IntVec>,
    weights: Vec<Weight>,
}

impl FrameCandidate {
    pub fn new(sys: IfsSystem, labels: Vec<IntVec>, weights: Vec<Weight>) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::WeightCount { labels: labels.len(), weights: weights.len() });
        }
        if labels.is_empty() {
            return Err(Error::Empty("label set"));
        }
        let d = sys.dim();
        if let Some(bad) = labels.iter().find(|l| l.len() != d) {
            return Err(Error::Dimension(format!("label {bad:?} has dimension {} but d = {d}", bad.len())));
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let zero = labels.iter().position(|l| l.iter().all(|&x| x == 0)).ok_or(Error::MissingZeroLabel)?;
        if !weights[zero].is_exactly_one() {
            return Err(Error::ZeroLabelWeight(format!("{:?}", weights[zero])));
        }
        for (l, w) in labels.iter().zip(&weights) {
            if w.is_zero() && !w.is_padded() {
                return Err(Error::ZeroWeight(l.clone()));
            }
            if let Weight::Complex { re, im } = w {
                if !re.is_finite() || !im.is_finite() {
                    return Err(Error::InvalidArgument(format!("non-finite weight for label {l:?}")));
                }
            }
            if let Weight::Sqrt { ratio, .. } = w {
                if ratio.is_negative() {
                    return Err(Error::InvalidArgument(format!("negative |α|² for label {l:?}")));
                }
            }
        }
        Ok(Self { sys, labels, weights })
    }

    /// One-dimensional convenience constructor.
    pub fn new_1d(r: i64, digits: &[i64], labels: &[i64], weights: Vec<Weight>) -> Result<Self> {
        let sys = IfsSystem::new_1d(r, digits)?;
        Self::new(sys, labels.iter().map(|&l| vec![l]).collect(), weights)
    }

    pub fn system(&self) -> &IfsSystem {
        &self.sys
    }

    pub fn labels(&self) -> &[IntVec] {
        &self.labels
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    /// `M = |L|`, padded labels included.
    pub fn n_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn zero_index(&self) -> usize {
        self.labels.iter().position(|l| l.iter().all(|&x| x == 0)).expect("validated")
    }

    /// Indices of labels with non-zero weight.
    pub fn active(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.labels.len()).filter(|&i| !self.weights[i].is_zero())
    }

    pub fn has_padding(&self) -> bool {
        self.weights.iter().any(Weight::is_padded)
    }

    /// Exact `|α_l|²` for every label, if all are exact.
    pub fn norm_sq_exact(&self) -> Option<Vec<Rational>> {
        self.weights.iter().map(Weight::norm_sq_exact).collect()
    }

    /// Scalar labels for `d = 1`.
    pub fn labels_1d(&self) -> Option<Vec<i64>> {
        (self.sys.dim() == 1).then(|| self.labels.iter().map(|l| l[0]).collect())
    }

    /// Exact phase `((R^T)^{-1} l)·b` (in turns).
    pub fn phase(&self, label: &[i64], digit: &[i64]) -> Rational {
        dot_int(digit, &self.sys.transpose_inverse().mul_vec(&int_vec_to_rat(label)))
    }

    /// `T_{l,b} = N^{-1/2} e^{2πi ((R^T)^{-1} l)·b} α_l`, rows in label order
    /// and columns in digit order.
    pub fn t_matrix(&self) -> DMatrix<Complex64> {
        let n = self.sys.n_digits();
        let scale = 1.0 / (n as f64).sqrt();
        DMatrix::from_fn(self.labels.len(), n, |i, j| {
            exp_2pi_i(&self.phase(&self.labels[i], &self.sys.digits()[j])) * self.weights[i].value() * scale
        })
    }

    /// `‖T*T − I‖_max ≤ tol`.
    pub fn check_isometry(&self, tol: f64) -> Result<DeviationReport> {
        check_tol(tol)?;
        let t = self.t_matrix();
        let gram = t.adjoint() * &t;
        let dev = max_identity_deviation(&gram);
        Ok(DeviationReport { ok: dev <= tol, max_deviation: dev })
    }

    /// Parseval test on `L²(δ_{R^{-1}B})`, assembled from `|α_l|²` and atom
    /// differences alone. The exact verdict is filled in when all `|α_l|²`
    /// are exact.
    pub fn check_parseval_on_delta(&self, tol: f64) -> Result<DeltaParsevalReport> {
        check_tol(tol)?;
        let n = self.sys.n_digits();
        let atoms: Vec<RatVec> =
            self.sys.digits().iter().map(|b| self.sys.inverse().mul_vec(&int_vec_to_rat(b))).collect();
        let norms: Vec<f64> = self.weights.iter().map(Weight::norm_sq).collect();
        let frame = DMatrix::from_fn(n, n, |i, j| {
            let diff: RatVec = atoms[i].iter().zip(&atoms[j]).map(|(a, b)| a - b).collect();
            let sum: Complex64 = self.labels.iter().zip(&norms).map(|(l, &w)| exp_2pi_i(&dot_int(l, &diff)) * w).sum();
            sum / n as f64
        });
        let dev = max_identity_deviation(&frame);
        let exact = match self.norm_sq_exact() {
            None => None,
            Some(w) => Some(self.delta_parseval_exact(&atoms, &w)?),
        };
        Ok(DeltaParsevalReport { ok: dev <= tol, max_deviation: dev, exact })
    }

    fn delta_parseval_exact(&self, atoms: &[RatVec], w: &[Rational]) -> Result<bool> {
        let total: Rational = w.iter().sum();
        if total != Rational::from_integer(BigInt::from(self.sys.n_digits())) {
            return Ok(false);
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                let diff: RatVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
                let terms: Vec<(Rational, Rational)> =
                    self.labels.iter().zip(w).map(|(l, w)| (dot_int(l, &diff), w.clone())).collect();
                if !weighted_angles_vanish(&terms)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// `(𝓡f)(t) = Σ_l |α_l|² |m_B(g_l t)|² f(g_l t)` on a finite rational
    /// grid. Transitions with exactly zero weight are skipped; every other
    /// image must lie on the grid.
    pub fn transfer_apply(&self, f: &SampledFunction) -> Result<SampledFunction> {
        let mut missing = BTreeSet::new();
        let mut out = BTreeMap::new();
        for t in f.values.keys() {
            let mut acc = 0.0;
            for i in self.active() {
                let target = self.sys.dual_step(t, &self.labels[i]);
                if self.sys.mask_vanishes_exact(&target)? {
                    continue;
                }
                match f.values.get(&target) {
                    Some(v) => acc += self.weights[i].norm_sq() * self.sys.mask_rational(&target).norm_sqr() * v,
                    None => {
                        missing.insert(target);
                    }
                }
            }
            out.insert(t.clone(), acc);
        }
        if !missing.is_empty() {
            let names = missing.iter().map(|p| format_point(p)).collect();
            return Err(Error::GridNotClosed(names));
        }
        Ok(SampledFunction { values: out })
    }

    /// Transfer operator at a real point for a function given as a closure.
    pub fn transfer_at(&self, t: &[f64], f: impl Fn(&[f64]) -> f64) -> f64 {
        let step = self.transpose_inverse_f64();
        self.active()
            .map(|i| {
                let shifted: Vec<f64> = t.iter().zip(&self.labels[i]).map(|(x, &l)| x - l as f64).collect();
                let target: Vec<f64> =
                    (0..t.len()).map(|r| (0..t.len()).map(|c| step[(r, c)] * shifted[c]).sum()).collect();
                self.weights[i].norm_sq() * self.sys.mask(&target).norm_sqr() * f(&target)
            })
            .sum()
    }

    /// `|𝓡1(t) − 1|`.
    pub fn transfer_one_deviation(&self, t: &[f64]) -> f64 {
        (self.transfer_at(t, |_| 1.0) - 1.0).abs()
    }

    fn transpose_inverse_f64(&self) -> DMatrix<f64> {
        let d = self.sys.dim();
        let m = self.sys.transpose_inverse();
        DMatrix::from_fn(d, d, |i, j| to_f64(m.get(i, j)))
    }

    /// Necessary condition: every label `l ≠ 0` with `α_l ≠ 0` must satisfy
    /// `Σ_b e^{2πi ((R^T)^{-1} l)·b} = 0`, decided exactly.
    pub fn exponential_sum_condition(&self) -> Result<ExponentialSumReport> {
        let mut per_label = Vec::with_capacity(self.labels.len());
        for (l, w) in self.labels.iter().zip(&self.weights) {
            let vacuous = w.is_zero() || l.iter().all(|&x| x == 0);
            let passes = vacuous || self.digit_sum_vanishes(l)?;
            per_label.push(LabelVerdict { label: l.clone(), passes, vacuous });
        }
        let feasible = per_label.iter().all(|v| v.passes);
        let universally_infeasible = !self.any_label_possible()?;
        Ok(ExponentialSumReport { per_label, feasible, universally_infeasible })
    }

    fn digit_sum_vanishes(&self, label: &[i64]) -> Result<bool> {
        let phases: Vec<Rational> = self.sys.digits().iter().map(|b| self.phase(label, b)).collect();
        Ok(CycloExpression::from_angles(phases.iter().map(|p| (p, 1)))?.is_zero())
    }

    /// Whether any integer vector at all satisfies the exponential-sum
    /// condition. The sum only depends on `l` modulo `R^T ℤ^d`, and the box
    /// `[0, |det R|)^d` contains a full residue system.
    fn any_label_possible(&self) -> Result<bool> {
        let d = self.sys.dim();
        let det = self.sys.matrix().det().abs();
        let side = det.to_i64().ok_or(Error::Overflow("determinant"))?;
        let count = crate::ifs::checked_pow(side as u128, d).ok_or(Error::Overflow("residue box"))?;
        if count > RESIDUE_SEARCH_LIMIT {
            return Err(Error::Resource { what: "residue classes", needed: count, budget: RESIDUE_SEARCH_LIMIT });
        }
        let mut l = vec![0i64; d];
        loop {
            if l.iter().any(|&x| x != 0) && self.digit_sum_vanishes(&l)? {
                return Ok(true);
            }
            let mut pos = 0;
            while pos < d {
                l[pos] += 1;
                if l[pos] < side {
                    break;
                }
                l[pos] = 0;
                pos += 1;
            }
            if pos == d {
                return Ok(false);
            }
        }
    }

    /// `l ~ l′` iff `(l′ − l)·R^{-1}b ∈ ℤ` for every digit `b`.
    pub fn congruent(&self, a: &[i64], b: &[i64]) -> bool {
        let diff: IntVec = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.sys
            .digits()
            .iter()
            .all(|digit| dot_int(&diff, &self.sys.inverse().mul_vec(&int_vec_to_rat(digit))).denom().is_one())
    }

    /// Partition of the non-zero-weight labels into classes `[l]`, with the
    /// bounds `N ≤ #[L]` and `Σ_{l∈[l_0]} |α_l|² ≤ 1`.
    pub fn congruence_report(&self) -> CongruenceReport {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in self.active() {
            match classes.iter_mut().find(|c| self.congruent(&self.labels[c[0]], &self.labels[i])) {
                Some(c) => c.push(i),
                None => classes.push(vec![i]),
            }
        }
        let class_sums = classes
            .iter()
            .map(|c| {
                let numeric: f64 = c.iter().map(|&i| self.weights[i].norm_sq()).sum();
                let exact: Option<Rational> = c.iter().map(|&i| self.weights[i].norm_sq_exact()).sum();
                let at_most_one = match &exact {
                    Some(e) => e <= &Rational::one(),
                    None => numeric <= 1.0 + 1e-12,
                };
                ClassSum { numeric, exact, at_most_one }
            })
            .collect();
        let classes: Vec<Vec<IntVec>> =
            classes.into_iter().map(|c| c.into_iter().map(|i| self.labels[i].clone()).collect()).collect();
        CongruenceReport { n_le_card: self.sys.n_digits() <= classes.len(), classes, class_sums }
    }

    /// Sufficient condition for completeness in `d = 1`: for every
    /// non-zero label `l`, `[l] ∩ L` differs from `{l′ ∈ L : l′ ≡ l mod R}`.
    pub fn residue_separation(&self) -> Result<bool> {
        let r = self.sys.scalar().ok_or_else(|| Error::Unsupported("residue separation needs d = 1".into()))?;
        let active: Vec<i64> = self.active().map(|i| self.labels[i][0]).collect();
        Ok(active.iter().filter(|&&l| l != 0).all(|&l| {
            let class: BTreeSet<i64> = active.iter().copied().filter(|&m| self.congruent(&[l], &[m])).collect();
            let residue: BTreeSet<i64> = active.iter().copied().filter(|&m| (m - l).rem_euclid(r.abs()) == 0).collect();
            class != residue
        }))
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")))
    }
}

pub(crate) fn max_identity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((m[(i, j)] - target).norm());
        }
    }
    dev
}

pub(crate) fn format_point(p: &[Rational]) -> String {
    if p.len() == 1 {
        fmt_short(&p[0])
    } else {
        format!("({})", p.iter().map(fmt_short).collect::<Vec<_>>().join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationReport {
    pub ok: bool,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeltaParsevalReport {
    pub ok: bool,
    pub max_deviation: f64,
    /// Exact verdict, present when every `|α_l|²` is exact.
    pub exact: Option<bool>,
}

/// Function values on a finite set of rational points.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampledFunction {
    pub values: BTreeMap<RatVec, f64>,
}

impl SampledFunction {
    pub fn constant(points: impl IntoIterator<Item = RatVec>, value: f64) -> Self {
        Self { values: points.into_iter().map(|p| (p, value)).collect() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelVerdict {
    pub label: IntVec,
    pub passes: bool,
    /// `l = 0` or a zero weight.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialSumReport {
    pub per_label: Vec<LabelVerdict>,
    /// Every listed label passes.
    pub feasible: bool,
    /// No non-zero integer label can pass, whatever `L` is.
    pub universally_infeasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassSum {
    pub numeric: f64,
    pub exact: Option<Rational>,
    pub at_most_one: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceReport {
    pub classes: Vec<Vec<IntVec>>,
    pub n_le_card: bool,
    pub class_sums: Vec<ClassSum>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn ex52() -> FrameCandidate {
        FrameCandidate::new_1d(
            4,
            &[0, 2],
            &[0, 3, 9],
            vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)],
        )
        .unwrap()
    }

    fn ex511() -> FrameCandidate {
        FrameCandidate::new_1d(
            6,
            &[0, 2, 4],
            &[0, 1, 5, 20],
            vec![Weight::one(), Weight::one(), Weight::sqrt(rat(1, 3)), Weight::sqrt(rat(2, 3))],
        )
        .unwrap()
    }

    fn two_cycle() -> FrameCandidate {
        FrameCandidate::new_1d(
            2,
            &[0, 1],
            &[0, 1, 3],
            vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)],
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        let w = || vec![Weight::one(), Weight::one()];
        assert_eq!(FrameCandidate::new_1d(4, &[0, 2], &[1, 3], w()), Err(Error::MissingZeroLabel));
        assert_eq!(FrameCandidate::new_1d(4, &[0, 2], &[0, 0], w()), Err(Error::DuplicateLabel(vec![0])));
        assert_eq!(FrameCandidate::new_1d(4, &[0, 2], &[0], w()), Err(Error::WeightCount { labels: 1, weights: 2 }));
        assert!(matches!(
            FrameCandidate::new_1d(4, &[0, 2], &[0, 1], vec![Weight::sqrt_recip(2), Weight::one()]),
            Err(Error::ZeroLabelWeight(_))
        ));
        assert_eq!(
            FrameCandidate::new_1d(4, &[0, 2], &[0, 1], vec![Weight::one(), Weight::complex(0.0, 0.0)]),
            Err(Error::ZeroWeight(vec![1]))
        );
        assert!(FrameCandidate::new_1d(4, &[0, 2], &[0, 1], vec![Weight::one(), Weight::Padded]).is_ok());
    }

    #[test]
    fn t_matrix_entries() {
        let t = ex52().t_matrix();
        let h = 0.5f64.sqrt();
        let expect = [[h, h], [0.5, -0.5], [0.5, -0.5]];
        for (i, row) in expect.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert!((t[(i, j)] - Complex64::new(v, 0.0)).norm() < 1e-15);
            }
        }
        let single = FrameCandidate::new_1d(4, &[0, 2], &[0], vec![Weight::one()]).unwrap().t_matrix();
        assert_eq!(single.shape(), (1, 2));
        assert!(single.iter().all(|z| (z - Complex64::new(h, 0.0)).norm() < 1e-15));
        let t = two_cycle().t_matrix();
        assert!((t[(1, 1)] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((t[(2, 1)] - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn isometry() {
        let r = ex52().check_isometry(DEFAULT_TOL).unwrap();
        assert!(r.ok && r.max_deviation < 1e-12);
        assert!(ex511().check_isometry(DEFAULT_TOL).unwrap().ok);
        assert!(two_cycle().check_isometry(DEFAULT_TOL).unwrap().ok);
        let single = FrameCandidate::new_1d(4, &[0, 2], &[0], vec![Weight::one()]).unwrap();
        let r = single.check_isometry(DEFAULT_TOL).unwrap();
        assert!(!r.ok && (r.max_deviation - 0.5).abs() < 1e-12);
        assert!(ex52().check_isometry(0.0).is_err());
    }

    #[test]
    fn parseval_on_delta() {
        for c in [ex52(), ex511(), two_cycle()] {
            let r = c.check_parseval_on_delta(DEFAULT_TOL).unwrap();
            assert!(r.ok);
            assert_eq!(r.exact, Some(true));
        }
        let single = FrameCandidate::new_1d(4, &[0, 2], &[0], vec![Weight::one()]).unwrap();
        let r = single.check_parseval_on_delta(DEFAULT_TOL).unwrap();
        assert!(!r.ok);
        assert_eq!(r.exact, Some(false));
    }

    #[test]
    fn transfer_fixes_one() {
        let c = ex52();
        let f = SampledFunction::constant([vec![int(0)]], 1.0);
        let g = c.transfer_apply(&f).unwrap();
        assert!((g.values[&vec![int(0)]] - 1.0).abs() < 1e-15);
        let zero = SampledFunction::constant([vec![int(0)]], 0.0);
        assert_eq!(c.transfer_apply(&zero).unwrap().values[&vec![int(0)]], 0.0);
        for t in [0.3, -1.7, 12.25] {
            assert!(c.transfer_one_deviation(&[t]) < 1e-12);
        }
    }

    #[test]
    fn transfer_reports_missing_points() {
        let c = ex52();
        let f = SampledFunction::constant([vec![int(-1)]], 1.0);
        match c.transfer_apply(&f) {
            Err(Error::GridNotClosed(missing)) => assert!(missing == vec!["-5/2".to_string()]),
            other => panic!("expected missing grid points, got {other:?}"),
        }
    }

    #[test]
    fn exponential_sum() {
        let c = FrameCandidate::new_1d(3, &[0, 2], &[0, 1], vec![Weight::one(), Weight::one()]).unwrap();
        let r = c.exponential_sum_condition().unwrap();
        assert!(!r.feasible && r.universally_infeasible);
        let r = ex52().exponential_sum_condition().unwrap();
        assert!(r.feasible && !r.universally_infeasible);
        assert!(r.per_label[0].vacuous && r.per_label[0].passes);
        assert!(r.per_label[1].passes);
    }

    #[test]
    fn congruence() {
        let r = ex52().congruence_report();
        assert_eq!(r.classes, vec![vec![vec![0]], vec![vec![3], vec![9]]]);
        assert!(r.n_le_card);
        assert!(r.class_sums.iter().all(|s| s.exact == Some(Rational::one()) && s.at_most_one));
        let r = two_cycle().congruence_report();
        assert_eq!(r.classes, vec![vec![vec![0]], vec![vec![1], vec![3]]]);
        let single = FrameCandidate::new_1d(4, &[0, 2], &[0], vec![Weight::one()]).unwrap();
        assert!(!single.congruence_report().n_le_card);
    }

    #[test]
    fn separation() {
        assert!(ex52().residue_separation().unwrap());
        let c = FrameCandidate::new_1d(
            4,
            &[0, 2],
            &[0, 3, 15],
            vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)],
        )
        .unwrap();
        assert!(!c.residue_separation().unwrap());
    }

    #[test]
    fn weights() {
        assert_eq!(Weight::complex(0.5, 0.5).norm_sq_exact(), Some(rat(1, 2)));
        assert_eq!(Weight::complex(0.5f64.sqrt(), 0.0).norm_sq_exact(), None);
        assert_eq!(Weight::sqrt_with_phase(rat(1, 3), rat(1, 4)).norm_sq_exact(), Some(rat(1, 3)));
        assert!((Weight::sqrt_with_phase(int(1), rat(1, 4)).value() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
