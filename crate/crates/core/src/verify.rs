//! The frame set itself: frequency words `Ω(L)`, exact finite-level
//! Parseval checks, Bessel partial sums, orthogonality certificates and
//! base-`R` representations of integers by label words.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::SubAssign;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::algebra::cyclo::weighted_angles_vanish;
use crate::algebra::rational::{dot_int, exp_2pi_i, int_vec_to_rat, to_f64};
use crate::algebra::{IntVec, RatVec, Rational};
use crate::candidate::{max_identity_deviation, FrameCandidate, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::families::is_lebesgue_system;
use crate::ifs::checked_pow;

/// Largest `atoms × words` matrix assembled by [`level_k_parseval`].
pub const MAX_FRAME_ENTRIES: u128 = 100_000_000;

/// Largest number of atom pairs examined by the exact level-k certificate.
pub const MAX_EXACT_PAIRS: u128 = 10_000_000;

/// Truncation tolerance used for `μ̂` inside Bessel sums.
pub const BESSEL_MU_TOL: f64 = 1e-14;

/// A word `l_0 … l_k` of `Ω(L)` with `λ = l_0 + R^T l_1 + … + (R^T)^k l_k`
/// and weight `Π α_{l_i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyAtom {
    pub word: Vec<IntVec>,
    pub frequency: IntVec,
    pub weight: Complex64,
    /// `Π |α_{l_i}|²`, when exact.
    pub weight_norm_sq: Option<Rational>,
}

fn active(c: &FrameCandidate) -> Vec<usize> {
    c.active().collect()
}

/// Index tuples in lexicographic order.
fn tuples(m: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (m as u128).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut t = vec![0; len];
        for slot in t.iter_mut().rev() {
            *slot = (code % m as u128) as usize;
            code /= m as u128;
        }
        t
    })
}

/// `Σ_j (R^T)^j l_j` by Horner's rule, with overflow checks.
fn frequency(c: &FrameCandidate, word: &[usize]) -> Result<IntVec> {
    let rt = c.system().matrix().transpose();
    let mut acc = vec![0i64; c.system().dim()];
    for &i in word.iter().rev() {
        let scaled = rt.mul_vec(&acc)?;
        acc = scaled
            .iter()
            .zip(&c.labels()[i])
            .map(|(a, &l)| a.checked_add(l).ok_or(Error::Overflow("frequency")))
            .collect::<Result<_>>()?;
    }
    Ok(acc)
}

fn atom(c: &FrameCandidate, word: &[usize]) -> Result<FrequencyAtom> {
    let weight = word.iter().map(|&i| c.weights()[i].value()).product();
    let weight_norm_sq = word.iter().map(|&i| c.weights()[i].norm_sq_exact()).product();
    Ok(FrequencyAtom {
        word: word.iter().map(|&i| c.labels()[i].clone()).collect(),
        frequency: frequency(c, word)?,
        weight,
        weight_norm_sq,
    })
}

/// Number of words of `Ω(L)` of length at most `max_len`.
pub fn frequency_word_count(m: usize, max_len: usize) -> Option<u128> {
    let m = m as u128;
    (0..max_len).try_fold(1u128, |acc, k| {
        checked_pow(m, k).and_then(|p| p.checked_mul(m.saturating_sub(1))).and_then(|x| acc.checked_add(x))
    })
}

/// All words of `Ω(L)` up to `max_len`, in length-lexicographic order
/// (labels compared by their position in `L`). Zero-weight labels are
/// skipped.
pub fn frequency_words(c: &FrameCandidate, max_len: usize, budget: u128) -> Result<Vec<FrequencyAtom>> {
    let act = active(c);
    let needed = frequency_word_count(act.len(), max_len).ok_or(Error::Overflow("word count"))?;
    if needed > budget {
        return Err(Error::Resource { what: "frequency words", needed, budget });
    }
    let zero = c.zero_index();
    let mut out = vec![FrequencyAtom {
        word: vec![],
        frequency: vec![0; c.system().dim()],
        weight: Complex64::new(1.0, 0.0),
        weight_norm_sq: Some(Rational::one()),
    }];
    for len in 1..=max_len {
        for t in tuples(act.len(), len) {
            let word: Vec<usize> = t.iter().map(|&j| act[j]).collect();
            if word[len - 1] != zero {
                out.push(atom(c, &word)?);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelReport {
    pub k: usize,
    pub atoms: usize,
    pub words: usize,
    /// `‖S − I‖_max` for the numerically assembled frame operator.
    pub deviation: f64,
    pub ok: bool,
    /// Exact verdict from the product formula, when all `|α_l|²` are exact.
    pub exact: Option<bool>,
}

/// Frame operator of `{√(N^{-k}) (Π α) e_λ}` over all `M^k` words of
/// length exactly `k` on the level-`k` atomic measure, compared with the
/// identity. Alongside the numeric check, the exact route uses
/// `S_{x,y} = N^{-k} Π_{j<k} Σ_l |α_l|² e^{2πi l·R^j (x−y)}`.
pub fn level_k_parseval(c: &FrameCandidate, k: usize, budget: u128) -> Result<LevelReport> {
    let measure = c.system().level_measure(k, budget)?;
    let act = active(c);
    let n_words = checked_pow(act.len() as u128, k).ok_or(Error::Overflow("word count"))?;
    if n_words > budget {
        return Err(Error::Resource { what: "level words", needed: n_words, budget });
    }
    let entries = n_words * measure.len() as u128;
    if entries > MAX_FRAME_ENTRIES {
        return Err(Error::Resource { what: "frame matrix entries", needed: entries, budget: MAX_FRAME_ENTRIES });
    }
    let scale = (1.0 / measure.len() as f64).sqrt();
    let words: Vec<(IntVec, Complex64)> = tuples(act.len(), k)
        .map(|t| {
            let word: Vec<usize> = t.iter().map(|&j| act[j]).collect();
            let w: Complex64 = word.iter().map(|&i| c.weights()[i].value()).product();
            Ok((frequency(c, &word)?, w * scale))
        })
        .collect::<Result<_>>()?;
    let atoms = measure.atoms();
    let v = DMatrix::from_fn(atoms.len(), words.len(), |a, w| {
        exp_2pi_i(&dot_int(&words[w].0, &atoms[a].point)) * words[w].1
    });
    let frame = &v * v.adjoint();
    let deviation = max_identity_deviation(&frame);
    let points: Vec<&RatVec> = atoms.iter().map(|a| &a.point).collect();
    let exact = level_k_exact(c, &points, k)?;
    Ok(LevelReport { k, atoms: atoms.len(), words: words.len(), deviation, ok: deviation <= DEFAULT_TOL, exact })
}

fn level_k_exact(c: &FrameCandidate, points: &[&RatVec], k: usize) -> Result<Option<bool>> {
    let Some(norms) = c.norm_sq_exact() else { return Ok(None) };
    let pairs = (points.len() as u128).pow(2);
    if pairs > MAX_EXACT_PAIRS {
        return Ok(None);
    }
    let total: Rational = norms.iter().sum();
    if total != Rational::from_integer(BigInt::from(c.system().n_digits())) {
        return Ok(Some(false));
    }
    let mut diffs = BTreeSet::new();
    for (i, x) in points.iter().enumerate() {
        for y in &points[i + 1..] {
            diffs.insert(x.iter().zip(y.iter()).map(|(a, b)| a - b).collect::<RatVec>());
        }
    }
    let r = c.system().matrix();
    for delta in diffs {
        let mut shifted = delta;
        let mut vanished = false;
        for _ in 0..k {
            let terms: Vec<(Rational, Rational)> =
                c.labels().iter().zip(&norms).map(|(l, w)| (dot_int(l, &shifted), w.clone())).collect();
            if weighted_angles_vanish(&terms)? {
                vanished = true;
                break;
            }
            shifted = r.mul_rat_vec(&shifted)?;
        }
        if !vanished {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}

/// Cumulative `Σ_{|ω| ≤ len} |Π α|² |μ̂(t − λ_ω)|²` for `len = 0..=max_len`.
pub fn bessel_partial_sum(c: &FrameCandidate, t: &[f64], max_len: usize, budget: u128) -> Result<Vec<f64>> {
    let words = frequency_words(c, max_len, budget)?;
    let mut by_len = vec![0.0; max_len + 1];
    for w in &words {
        let arg: Vec<f64> = t.iter().zip(&w.frequency).map(|(x, &l)| x - l as f64).collect();
        let norm = w.weight_norm_sq.as_ref().map(to_f64).unwrap_or_else(|| w.weight.norm_sqr());
        by_len[w.word.len()] += norm * c.system().mu_hat(&arg, BESSEL_MU_TOL)?.norm_sqr();
    }
    let mut acc = 0.0;
    Ok(by_len
        .into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect())
}

/// Exact certificate that `e_w` is orthogonal to every frame vector with a
/// word of length at most `max_len`: each `μ̂(w − λ)` has a vanishing factor
/// within `depth` steps.
pub fn orthogonality_witness(
    c: &FrameCandidate,
    w: &[Rational],
    max_len: usize,
    depth: usize,
    budget: u128,
) -> Result<bool> {
    for atom in frequency_words(c, max_len, budget)? {
        let point: RatVec = w.iter().zip(int_vec_to_rat(&atom.frequency)).map(|(a, l)| a - l).collect();
        if !c.system().mu_hat_is_zero_exact(&point, depth)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    pub word: Vec<i64>,
    pub weight_norm_sq: f64,
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationReport {
    pub n: i64,
    /// Words of length at most the requested bound, length-lexicographic.
    pub words: Vec<Representation>,
    /// Longer representations exist beyond the listed ones.
    pub truncated: bool,
    /// `Σ |α_{l_0} ⋯ α_{l_k}|²` over all representations, exact when every
    /// `|α_l|²` is.
    pub weighted_sum: Option<Rational>,
    pub weighted_sum_f64: f64,
    /// The sum diverges: some loop of representations carries weight ≥ 1.
    pub diverges: bool,
    pub equals_one: bool,
    /// `R = N, B = {0,…,N−1}`, where the sum is 1 for admissible weights.
    pub lebesgue_family: bool,
}

/// All words `l_0 … l_k ∈ Ω(L)` with `l_0 + R l_1 + … + R^k l_k = n`, in
/// `d = 1`.
///
/// The set of representations can be infinite (a loop `m = l + R m`), so
/// the total weight is computed as the least solution of
/// `U(m) = [m ∈ L∖{0}] |α_m|² + Σ_{R | m−l} |α_l|² U((m−l)/R)` on the finite
/// set of reachable states, restricted to states from which a word can be
/// completed. Words are listed up to `max_len`.
pub fn enumerate_representations(
    c: &FrameCandidate,
    n: i64,
    max_len: usize,
    budget: u128,
) -> Result<RepresentationReport> {
    let r = c.system().scalar().ok_or_else(|| Error::Unsupported("representations need d = 1".into()))?;
    let labels: Vec<(usize, i64)> = c.active().map(|i| (i, c.labels()[i][0])).collect();
    let step = |m: i64| -> Result<Vec<(usize, i64)>> {
        labels
            .iter()
            .filter_map(|&(i, l)| {
                let diff = match m.checked_sub(l) {
                    Some(d) => d,
                    None => return Some(Err(Error::Overflow("representation state"))),
                };
                (diff % r == 0).then_some(Ok((i, diff / r)))
            })
            .collect()
    };
    let terminal = |m: i64| labels.iter().find(|&&(_, l)| l == m && m != 0).map(|&(i, _)| i);

    let mut edges: BTreeMap<i64, Vec<(usize, i64)>> = BTreeMap::new();
    let mut queue = VecDeque::from([n]);
    while let Some(m) = queue.pop_front() {
        if edges.contains_key(&m) {
            continue;
        }
        let next = step(m)?;
        queue.extend(next.iter().map(|&(_, s)| s).filter(|s| !edges.contains_key(s)));
        edges.insert(m, next);
        if edges.len() as u128 > budget {
            return Err(Error::Resource { what: "representation states", needed: edges.len() as u128, budget });
        }
    }

    let mut productive: BTreeSet<i64> = edges.keys().copied().filter(|&m| terminal(m).is_some()).collect();
    loop {
        let grow: Vec<i64> = edges
            .iter()
            .filter(|(m, es)| !productive.contains(m) && es.iter().any(|(_, s)| productive.contains(s)))
            .map(|(&m, _)| m)
            .collect();
        if grow.is_empty() {
            break;
        }
        productive.extend(grow);
    }

    let states: Vec<i64> = productive.iter().copied().collect();
    let pos: BTreeMap<i64, usize> = states.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let base = if n == 0 { Rational::one() } else { Rational::zero() };
    let solution = match c.norm_sq_exact() {
        Some(norms) => solve_exact(&states, &pos, &edges, &norms, &terminal)
            .map(|u| pos.get(&n).map(|&i| u[i].clone()).unwrap_or_else(Rational::zero) + &base)
            .map(|u| (to_f64(&u), Some(u))),
        None => {
            let norms: Vec<f64> = c.weights().iter().map(|w| w.norm_sq()).collect();
            solve_numeric(&states, &pos, &edges, &norms, &terminal)
                .map(|u| (pos.get(&n).map(|&i| u[i]).unwrap_or(0.0) + to_f64(&base), None))
        }
    };
    let (diverges, weighted_sum, weighted_sum_f64) = match solution {
        Some((f, exact)) => (false, exact, f),
        None => (true, None, f64::INFINITY),
    };

    let mut words = Vec::new();
    let mut truncated = false;
    if n == 0 {
        words.push(Representation { word: vec![], weight_norm_sq: 1.0, exact: Some(Rational::one()) });
    }
    let mut stack: Vec<(i64, Vec<usize>)> = vec![(n, vec![])];
    while let Some((m, prefix)) = stack.pop() {
        if !productive.contains(&m) {
            continue;
        }
        if prefix.len() == max_len {
            truncated = true;
            continue;
        }
        for &(i, s) in &edges[&m] {
            let mut word = prefix.clone();
            word.push(i);
            if s == 0 && c.labels()[i][0] != 0 {
                let exact: Option<Rational> = word.iter().map(|&j| c.weights()[j].norm_sq_exact()).product();
                let numeric = word.iter().map(|&j| c.weights()[j].norm_sq()).product();
                words.push(Representation {
                    word: word.iter().map(|&j| c.labels()[j][0]).collect(),
                    weight_norm_sq: numeric,
                    exact,
                });
                if words.len() as u128 > budget {
                    return Err(Error::Resource { what: "representation words", needed: words.len() as u128, budget });
                }
            }
            stack.push((s, word));
        }
    }
    let order: BTreeMap<i64, usize> = c.labels().iter().enumerate().map(|(i, l)| (l[0], i)).collect();
    words.sort_by_key(|w| (w.word.len(), w.word.iter().map(|l| order[l]).collect::<Vec<_>>()));

    let equals_one = match &weighted_sum {
        Some(s) => s.is_one(),
        None => !diverges && (weighted_sum_f64 - 1.0).abs() <= 1e-12,
    };
    Ok(RepresentationReport {
        n,
        words,
        truncated,
        weighted_sum,
        weighted_sum_f64,
        diverges,
        equals_one,
        lebesgue_family: is_lebesgue_system(c.system()),
    })
}

type Edges = BTreeMap<i64, Vec<(usize, i64)>>;

/// Rows `I − A` of the productive states with right-hand sides `c` and
/// `1`.
fn assemble<T>(
    states: &[i64],
    pos: &BTreeMap<i64, usize>,
    edges: &Edges,
    norms: &[T],
    terminal: &dyn Fn(i64) -> Option<usize>,
) -> Vec<Vec<T>>
where
    T: Clone + Zero + One + for<'a> SubAssign<&'a T>,
{
    let size = states.len();
    let mut m = vec![vec![T::zero(); size + 2]; size];
    for (row, &s) in states.iter().enumerate() {
        m[row][row] = T::one();
        m[row][size + 1] = T::one();
        if let Some(i) = terminal(s) {
            m[row][size] = norms[i].clone();
        }
        for &(i, t) in &edges[&s] {
            if let Some(&col) = pos.get(&t) {
                m[row][col] -= &norms[i];
            }
        }
    }
    m
}

/// Least solution of `U = c + A U` over ℚ, or `None` when it is infinite.
///
/// For non-negative `A` the spectral radius is below 1 exactly when
/// `(I − A) x = 1` has a solution with `x > 0`; then `U = (I − A)^{-1} c`.
fn solve_exact(
    states: &[i64],
    pos: &BTreeMap<i64, usize>,
    edges: &Edges,
    norms: &[Rational],
    terminal: &dyn Fn(i64) -> Option<usize>,
) -> Option<Vec<Rational>> {
    let size = states.len();
    let mut m = assemble(states, pos, edges, norms, terminal);
    for col in 0..size {
        let pivot = (col..size).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x /= &p;
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    if m.iter().any(|row| !row[size + 1].is_positive()) {
        return None;
    }
    Some(m.into_iter().map(|row| row[size].clone()).collect())
}

/// Floating-point counterpart of [`solve_exact`] for inexact weights.
fn solve_numeric(
    states: &[i64],
    pos: &BTreeMap<i64, usize>,
    edges: &Edges,
    norms: &[f64],
    terminal: &dyn Fn(i64) -> Option<usize>,
) -> Option<Vec<f64>> {
    let size = states.len();
    let m = assemble(states, pos, edges, norms, terminal);
    let lhs = DMatrix::from_fn(size, size, |i, j| m[i][j]);
    let rhs = DMatrix::from_fn(size, 2, |i, j| m[i][size + j]);
    let sol = lhs.lu().solve(&rhs)?;
    if (0..size).any(|i| sol[(i, 1)].is_nan() || sol[(i, 1)] <= 0.0 || !sol[(i, 0)].is_finite()) {
        return None;
    }
    Some((0..size).map(|i| sol[(i, 0)]).collect())
}

/// `l_0 + R l_1 + … + R^k l_k`, or `None` on overflow.
pub fn word_value(r: i64, word: &[i64]) -> Option<i64> {
    word.iter().rev().try_fold(0i64, |acc, &l| acc.checked_mul(r)?.checked_add(l))
}

/// `Σ` of listed word weights, exact when possible.
pub fn listed_sum(words: &[Representation]) -> Option<Rational> {
    words.iter().map(|w| w.exact.clone()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};
    use crate::candidate::Weight;
    use crate::families::make_integer_base_family;
    use crate::ifs::DEFAULT_ATOM_BUDGET;

    fn half() -> Vec<Weight> {
        vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)]
    }

    fn ex52() -> FrameCandidate {
        FrameCandidate::new_1d(4, &[0, 2], &[0, 3, 9], half()).unwrap()
    }

    fn ex58() -> FrameCandidate {
        FrameCandidate::new_1d(4, &[0, 2], &[0, 3, 15], half()).unwrap()
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

    fn lebesgue3() -> FrameCandidate {
        make_integer_base_family(
            3,
            &[vec![0, 3], vec![-1]],
            &[vec![Weight::sqrt_recip(2), Weight::sqrt_recip(2)], vec![Weight::one()]],
        )
        .unwrap()
    }

    fn freqs(c: &FrameCandidate, len: usize) -> Vec<i64> {
        frequency_words(c, len, DEFAULT_ATOM_BUDGET).unwrap().iter().map(|w| w.frequency[0]).collect()
    }

    #[test]
    fn words() {
        assert_eq!(freqs(&ex52(), 0), vec![0]);
        assert_eq!(freqs(&ex52(), 1), vec![0, 3, 9]);
        let mut two = freqs(&ex52(), 2)[3..].to_vec();
        two.sort();
        assert_eq!(two, vec![12, 15, 21, 36, 39, 45]);
        assert_eq!(frequency_word_count(3, 2), Some(9));
        assert_eq!(frequency_words(&ex52(), 5, DEFAULT_ATOM_BUDGET).unwrap().len(), 1 + 2 + 6 + 18 + 54 + 162);
        assert!(matches!(frequency_words(&ex52(), 30, 1000), Err(Error::Resource { .. })));
    }

    #[test]
    fn level_k() {
        for k in 1..=3 {
            let r = level_k_parseval(&ex52(), k, DEFAULT_ATOM_BUDGET).unwrap();
            assert!(r.ok, "k = {k}: deviation {}", r.deviation);
            assert_eq!(r.exact, Some(true));
        }
        let single = FrameCandidate::new_1d(4, &[0, 2], &[0], vec![Weight::one()]).unwrap();
        let r = level_k_parseval(&single, 1, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(!r.ok);
        assert_eq!(r.exact, Some(false));
        assert!(matches!(level_k_parseval(&ex52(), 12, 1000), Err(Error::Resource { .. })));
    }

    #[test]
    fn bessel() {
        let s = bessel_partial_sum(&ex52(), &[0.0], 4, DEFAULT_ATOM_BUDGET).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-12);
        assert!(s.iter().all(|&x| x <= 1.0 + 1e-9));
        let s = bessel_partial_sum(&ex58(), &[-1.0], 4, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(s.iter().all(|&x| x < 1e-20));
        let s = bessel_partial_sum(&ex52(), &[1.0 / 3.0], 7, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(s.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.iter().all(|&x| x <= 1.0 + 1e-9));
    }

    #[test]
    fn witnesses() {
        assert!(orthogonality_witness(&ex58(), &[int(-1)], 4, 6, DEFAULT_ATOM_BUDGET).unwrap());
        assert!(!orthogonality_witness(&ex52(), &[int(0)], 4, 6, DEFAULT_ATOM_BUDGET).unwrap());
        let sub = FrameCandidate::new_1d(
            6,
            &[0, 2, 4],
            &[0, 5, 20],
            vec![Weight::one(), Weight::sqrt(rat(1, 2)), Weight::sqrt(rat(1, 2))],
        )
        .unwrap();
        assert!(orthogonality_witness(&sub, &[int(1)], 3, 6, DEFAULT_ATOM_BUDGET).unwrap());
    }

    #[test]
    fn representations() {
        let r = enumerate_representations(&lebesgue3(), 0, 6, DEFAULT_ATOM_BUDGET).unwrap();
        assert_eq!(r.words.len(), 1);
        assert!(r.words[0].word.is_empty());
        assert_eq!(r.weighted_sum, Some(Rational::one()));

        let c = make_integer_base_family(3, &[vec![0], vec![-1]], &[vec![Weight::one()], vec![Weight::one()]]).unwrap();
        let r = enumerate_representations(&c, 2, 6, DEFAULT_ATOM_BUDGET).unwrap();
        assert_eq!(r.words.iter().map(|w| w.word.clone()).collect::<Vec<_>>(), vec![vec![-1, 1]]);
        assert!(r.equals_one && r.lebesgue_family);

        let r = enumerate_representations(&lebesgue3(), 1, 6, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(r.words.iter().any(|w| w.word == vec![1]));
        assert!(r.equals_one);
        for w in &r.words {
            assert_eq!(word_value(3, &w.word), Some(1));
        }

        let r = enumerate_representations(&ex52(), 15, 6, DEFAULT_ATOM_BUDGET).unwrap();
        assert_eq!(r.words.iter().map(|w| w.word.clone()).collect::<Vec<_>>(), vec![vec![3, 3]]);
        assert_eq!(r.weighted_sum, Some(rat(1, 4)));
        assert!(!r.equals_one && !r.lebesgue_family);
    }

    #[test]
    fn looping_representations_are_summed() {
        // −5 = 10 + 3·(−5) gives infinitely many words
        let r = enumerate_representations(&lebesgue3(), -5, 8, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(r.truncated);
        assert_eq!(r.weighted_sum, Some(Rational::one()));
        assert_eq!(listed_sum(&r.words).map(|s| s < Rational::one()), Some(true));
    }

    #[test]
    fn level_k_for_three_digits() {
        let r = level_k_parseval(&ex511(), 2, DEFAULT_ATOM_BUDGET).unwrap();
        assert!(r.ok && r.exact == Some(true));
    }
}
