//! Exact vanishing test for sums of roots of unity.
//!
//! A sum `Σ m_r ζ_q^r` vanishes iff `Σ m_r x^r` is divisible by the
//! cyclotomic polynomial `Φ_q`. Since `Φ_q(x) = Φ_{rad q}(x^{q / rad q})`,
//! the test splits the exponents by their residue modulo `q / rad q` and only
//! ever divides by `Φ_{rad q}`, which keeps the polynomials small even when
//! `q` is a large power such as `6^8`.

use std::collections::{BTreeMap, HashMap};

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::rational::{common_denominator, frac, Rational};
use crate::error::{Error, Result};

/// `Σ multiplicity(r) · ζ_q^r` with `ζ_q = e^{2πi/q}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycloExpression {
    order: u64,
    terms: BTreeMap<u64, u64>,
}

impl CycloExpression {
    pub fn new(order: u64, terms: BTreeMap<u64, u64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("root of unity order must be positive".into()));
        }
        if let Some((&r, _)) = terms.iter().find(|(&r, _)| r >= order) {
            return Err(Error::InvalidArgument(format!("residue {r} not below order {order}")));
        }
        if terms.values().any(|&m| m == 0) {
            return Err(Error::InvalidArgument("multiplicities must be at least 1".into()));
        }
        Ok(Self { order, terms })
    }

    /// Collects exponents (reduced modulo `order`) into multiplicities.
    pub fn from_exponents(order: u64, exponents: impl IntoIterator<Item = i64>) -> Result<Self> {
        Self::from_weighted(order, exponents.into_iter().map(|e| (e, 1)))
    }

    pub fn from_weighted(order: u64, terms: impl IntoIterator<Item = (i64, u64)>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidArgument("root of unity order must be positive".into()));
        }
        let mut map = BTreeMap::new();
        for (e, m) in terms {
            if m == 0 {
                continue;
            }
            let r = e.rem_euclid(order as i64) as u64;
            *map.entry(r).or_insert(0) += m;
        }
        Ok(Self { order, terms: map })
    }

    /// Builds `Σ w_j e^{2πiθ_j}` for rational angles θ_j (in turns) and
    /// positive integer weights.
    pub fn from_angles<'a>(angles: impl IntoIterator<Item = (&'a Rational, u64)>) -> Result<Self> {
        let reduced: Vec<(Rational, u64)> = angles.into_iter().map(|(t, w)| (frac(t), w)).collect();
        let q = common_denominator(reduced.iter().map(|(t, _)| t));
        let order = q.to_u64().ok_or(Error::Overflow("root of unity order"))?;
        let terms = reduced
            .iter()
            .map(|(t, w)| {
                let e = (t * Rational::from_integer(q.clone())).to_integer();
                e.to_i64().map(|e| (e, *w)).ok_or(Error::Overflow("root of unity exponent"))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_weighted(order, terms)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<u64, u64> {
        &self.terms
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let q = self.order;
        let rad = radical(q);
        let stride = q / rad;
        let mut parts: BTreeMap<u64, Vec<i128>> = BTreeMap::new();
        for (&r, &m) in &self.terms {
            let poly = parts.entry(r % stride).or_insert_with(|| vec![0; rad as usize]);
            poly[(r / stride) as usize] += m as i128;
        }
        let phi = cyclotomic_poly(rad);
        parts.values().all(|p| poly_rem_monic(p, &phi).iter().all(|c| *c == 0))
    }

    /// Floating-point value of the sum.
    pub fn eval(&self) -> num_complex::Complex64 {
        self.terms
            .iter()
            .map(|(&r, &m)| {
                m as f64 * num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * r as f64 / self.order as f64)
            })
            .sum()
    }
}

/// Exact zero test for `Σ w_j e^{2πiθ_j}` with non-negative rational
/// weights; returns `true` for an empty or all-zero-weight sum.
pub fn weighted_angles_vanish(terms: &[(Rational, Rational)]) -> Result<bool> {
    let live: Vec<&(Rational, Rational)> = terms.iter().filter(|(_, w)| !w.is_zero()).collect();
    if live.iter().any(|(_, w)| w < &Rational::zero()) {
        return Err(Error::InvalidArgument("weights must be non-negative".into()));
    }
    let scale = common_denominator(live.iter().map(|(_, w)| w));
    let scaled = live
        .iter()
        .map(|(t, w)| {
            let m = (w * Rational::from_integer(scale.clone())).to_integer();
            m.to_u64().map(|m| (t, m)).ok_or(Error::Overflow("weight multiplicity"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CycloExpression::from_angles(scaled)?.is_zero())
}

/// Product of the distinct prime factors of `n`.
pub fn radical(mut n: u64) -> u64 {
    let mut rad = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            rad *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rad *= n;
    }
    rad
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `Φ_n`, coefficients from the constant term up.
///
/// Computed by dividing `x^n - 1` by `Φ_e` for every proper divisor `e`,
/// memoised over the divisors of `n`.
pub fn cyclotomic_poly(n: u64) -> Vec<i128> {
    assert!(n > 0, "cyclotomic polynomial of order 0");
    let mut memo: HashMap<u64, Vec<i128>> = HashMap::new();
    for d in divisors(n) {
        let mut p = vec![0i128; d as usize + 1];
        p[0] = -1;
        p[d as usize] = 1;
        for e in divisors(d) {
            if e < d {
                p = poly_div_exact(&p, &memo[&e]);
            }
        }
        memo.insert(d, p);
    }
    memo.remove(&n).expect("n divides itself")
}

fn poly_div_exact(num: &[i128], monic: &[i128]) -> Vec<i128> {
    let (q, r) = poly_divmod_monic(num, monic);
    debug_assert!(r.iter().all(|c| *c == 0), "inexact cyclotomic division");
    q
}

fn poly_divmod_monic(num: &[i128], monic: &[i128]) -> (Vec<i128>, Vec<i128>) {
    let dn = monic.len() - 1;
    let mut rem = num.to_vec();
    if rem.len() <= dn {
        return (vec![0], rem);
    }
    let mut quot = vec![0i128; rem.len() - dn];
    for k in (dn..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        quot[k - dn] = c;
        for (j, m) in monic.iter().enumerate() {
            rem[k - dn + j] -= c * m;
        }
    }
    rem.truncate(dn);
    (quot, rem)
}

fn poly_rem_monic(num: &[i128], monic: &[i128]) -> Vec<i128> {
    poly_divmod_monic(num, monic).1
}

/// gcd of all entries (0 for an empty input).
pub fn gcd_all(xs: impl IntoIterator<Item = i64>) -> i64 {
    xs.into_iter().fold(0i64, |g, x| g.gcd(&x))
}
