//! Closed-form admissibility tests for one-dimensional systems with two or
//! three digits, and the integer-base family over `R = N, B = {0,…,N−1}`.

use num_traits::One;

use crate::algebra::Rational;
use crate::candidate::{FrameCandidate, Weight};
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

const SUM_TOL: f64 = 1e-12;

/// Conditions (i)–(v) of the two- or three-digit characterisation.
/// (i)–(iv) are equivalent to `T` being an isometry; adding (v) makes the
/// frame complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilyVerdict {
    pub i: bool,
    pub ii: bool,
    pub iii: bool,
    pub iv: bool,
    pub v: bool,
}

impl FamilyVerdict {
    /// (i)–(iv): the isometry condition in closed form.
    pub fn isometry(&self) -> bool {
        self.i && self.ii && self.iii && self.iv
    }

    /// (i)–(v): sufficient for a Parseval frame on the full measure.
    pub fn parseval_sufficient(&self) -> bool {
        self.isometry() && self.v
    }
}

/// `n = p^k · m` with `p ∤ m`; returns `(k, m)`. `n` must be non-zero.
fn split_power(mut n: i128, p: i128) -> (u32, i128) {
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    (k, n)
}

fn scalar_data(c: &FrameCandidate, digits: usize) -> Result<(i64, Vec<i64>, Vec<usize>)> {
    let sys = c.system();
    let r = sys.scalar().ok_or_else(|| Error::Unsupported("family checks need d = 1".into()))?;
    if sys.n_digits() != digits {
        return Err(Error::InvalidArgument(format!("expected {digits} digits, found {}", sys.n_digits())));
    }
    let nonzero_digits = sys.digits().iter().map(|b| b[0]).filter(|&b| b != 0).collect();
    let labels = c.active().filter(|&i| c.labels()[i][0] != 0).collect();
    Ok((r, nonzero_digits, labels))
}

fn sums_to_one(c: &FrameCandidate, idx: impl Iterator<Item = usize> + Clone) -> bool {
    let exact: Option<Rational> = idx.clone().map(|i| c.weights()[i].norm_sq_exact()).sum();
    match exact {
        Some(e) => e.is_one(),
        None => (idx.map(|i| c.weights()[i].norm_sq()).sum::<f64>() - 1.0).abs() <= SUM_TOL,
    }
}

/// Two digits `B = {0, b}`.
pub fn check_two_digit_family(c: &FrameCandidate) -> Result<FamilyVerdict> {
    let (r, digits, nz) = scalar_data(c, 2)?;
    let label = |i: usize| c.labels()[i][0] as i128;
    let (alpha, r_odd) = split_power(r as i128, 2);
    let (beta, q) = split_power(digits[0] as i128, 2);
    let i = alpha >= 1;
    let ii = i && beta < alpha;
    let iii = ii
        && nz.iter().all(|&j| {
            let (gamma, s) = split_power(label(j), 2);
            gamma == alpha - 1 - beta && (q * s) % r_odd == 0
        });
    let iv = sums_to_one(c, nz.iter().copied());
    let v = nz.iter().any(|&a| nz.iter().any(|&b| (label(a) - label(b)) % r as i128 != 0));
    Ok(FamilyVerdict { i, ii, iii, iv, v })
}

/// Three digits `B = {0, b_1, b_2}`. The class of a label is the residue
/// modulo 3 of its 3-free part `s_l`.
pub fn check_three_digit_family(c: &FrameCandidate) -> Result<FamilyVerdict> {
    let (r, digits, nz) = scalar_data(c, 3)?;
    let label = |i: usize| c.labels()[i][0] as i128;
    let (alpha, r3) = split_power(r as i128, 3);
    let (beta1, q1) = split_power(digits[0] as i128, 3);
    let (beta2, q2) = split_power(digits[1] as i128, 3);
    let i = alpha >= 1;
    let ii = i && beta1 == beta2 && beta1 < alpha && (q1 - q2).rem_euclid(3) != 0;
    let iii = ii
        && nz.iter().all(|&j| {
            let (gamma, s) = split_power(label(j), 3);
            gamma == alpha - 1 - beta1 && (q1 * s) % r3 == 0 && (q2 * s) % r3 == 0
        });
    let class = |j: usize| split_power(label(j), 3).1.rem_euclid(3);
    let ones = nz.iter().copied().filter(|&j| class(j) == 1);
    let twos = nz.iter().copied().filter(|&j| class(j) == 2);
    let iv = sums_to_one(c, ones.clone()) && sums_to_one(c, twos.clone());
    let separated = |set: Vec<usize>| set.iter().any(|&a| set.iter().any(|&b| (label(a) - label(b)) % r as i128 != 0));
    let v = separated(ones.collect()) && separated(twos.collect());
    Ok(FamilyVerdict { i, ii, iii, iv, v })
}

/// Builds `L = {0} ∪ (1 + N L_1) ∪ … ∪ ((N−1) + N L_{N−1})` over
/// `R = N, B = {0,…,N−1}`, with `α_{i+Nl}` taken from `weights[i−1]`.
pub fn make_integer_base_family(n: i64, subsets: &[Vec<i64>], weights: &[Vec<Weight>]) -> Result<FrameCandidate> {
    if n < 3 {
        return Err(Error::Precondition(format!("integer-base family needs N >= 3, got {n}")));
    }
    let expected = (n - 1) as usize;
    if subsets.len() != expected || weights.len() != expected {
        return Err(Error::Precondition(format!(
            "need {expected} label sets and weight lists, got {} and {}",
            subsets.len(),
            weights.len()
        )));
    }
    let mut labels = vec![vec![0]];
    let mut alphas = vec![Weight::one()];
    for (idx, (set, ws)) in subsets.iter().zip(weights).enumerate() {
        let i = idx as i64 + 1;
        let name = format!("L_{i}");
        if set.is_empty() {
            return Err(Error::Precondition(format!("{name} is empty")));
        }
        if set.len() != ws.len() {
            return Err(Error::Precondition(format!("{name} has {} labels but {} weights", set.len(), ws.len())));
        }
        let anchor = if i == n - 1 { -1 } else { 0 };
        if !set.contains(&anchor) {
            return Err(Error::Precondition(format!("{name} must contain {anchor}")));
        }
        if ws.iter().any(Weight::is_zero) {
            return Err(Error::Precondition(format!("{name} has a zero weight")));
        }
        let exact: Option<Rational> = ws.iter().map(Weight::norm_sq_exact).sum();
        let ok = match exact {
            Some(e) => e.is_one(),
            None => (ws.iter().map(Weight::norm_sq).sum::<f64>() - 1.0).abs() <= SUM_TOL,
        };
        if !ok {
            return Err(Error::Precondition(format!("weights on {name} do not have squared norms summing to 1")));
        }
        for (&l, w) in set.iter().zip(ws) {
            let label = l.checked_mul(n).and_then(|x| x.checked_add(i)).ok_or(Error::Overflow("family label"))?;
            labels.push(vec![label]);
            alphas.push(w.clone());
        }
    }
    let digits: Vec<i64> = (0..n).collect();
    FrameCandidate::new(IfsSystem::new_1d(n, &digits)?, labels, alphas)
}

/// `R = N, B = {0,…,N−1}`: the family whose invariant measure is Lebesgue
/// measure on `[0, 1]`.
pub fn is_lebesgue_system(sys: &IfsSystem) -> bool {
    match (sys.scalar(), sys.digits_1d()) {
        (Some(r), Some(mut b)) if r >= 2 => {
            b.sort_unstable();
            b.len() == r as usize && b.iter().enumerate().all(|(i, &x)| x == i as i64)
        }
        _ => false,
    }
}

/// `α_0 = 1` and `|α_l|² = 1/k` on each of the `k` non-zero labels.
pub fn uniform_weights(labels: &[i64]) -> Vec<Weight> {
    let k = labels.iter().filter(|&&l| l != 0).count() as i64;
    labels.iter().map(|&l| if l == 0 { Weight::one() } else { Weight::sqrt_recip(k) }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;

    fn cand(r: i64, b: &[i64], l: &[i64], w: Vec<Weight>) -> FrameCandidate {
        FrameCandidate::new_1d(r, b, l, w).unwrap()
    }

    #[test]
    fn two_digit_examples() {
        let v = check_two_digit_family(&cand(4, &[0, 2], &[0, 3, 9], uniform_weights(&[0, 3, 9]))).unwrap();
        assert_eq!(v, FamilyVerdict { i: true, ii: true, iii: true, iv: true, v: true });
        let v = check_two_digit_family(&cand(3, &[0, 2], &[0, 1], uniform_weights(&[0, 1]))).unwrap();
        assert!(!v.i && !v.isometry());
        let v = check_two_digit_family(&cand(4, &[0, 2], &[0, 3, 15], uniform_weights(&[0, 3, 15]))).unwrap();
        assert!(v.isometry() && !v.v);
        let three = cand(6, &[0, 2, 4], &[0], vec![Weight::one()]);
        assert!(check_two_digit_family(&three).is_err());
    }

    #[test]
    fn three_digit_examples() {
        let c = cand(
            6,
            &[0, 2, 4],
            &[0, 1, 5, 20],
            vec![Weight::one(), Weight::one(), Weight::sqrt(rat(1, 3)), Weight::sqrt(rat(2, 3))],
        );
        let v = check_three_digit_family(&c).unwrap();
        assert_eq!(v, FamilyVerdict { i: true, ii: true, iii: true, iv: true, v: false });

        let c = cand(9, &[0, 3, 6], &[0, 1, 2], vec![Weight::one(); 3]);
        let v = check_three_digit_family(&c).unwrap();
        assert!(v.i && v.ii && v.iii && v.iv);

        let c = cand(6, &[0, 1, 2], &[0, 2, 4], vec![Weight::one(); 3]);
        let v = check_three_digit_family(&c).unwrap();
        assert!(v.ii);
    }

    #[test]
    fn integer_base_family() {
        let c = make_integer_base_family(3, &[vec![0], vec![-1]], &[vec![Weight::one()], vec![Weight::one()]]).unwrap();
        assert_eq!(c.labels_1d().unwrap(), vec![0, 1, -1]);
        assert!(c.check_isometry(1e-10).unwrap().ok);

        let c = make_integer_base_family(
            3,
            &[vec![0, 3], vec![-1]],
            &[vec![Weight::sqrt_recip(2), Weight::sqrt_recip(2)], vec![Weight::one()]],
        )
        .unwrap();
        assert_eq!(c.labels_1d().unwrap(), vec![0, 1, 10, -1]);
        assert!(c.check_isometry(1e-10).unwrap().ok);

        let err = make_integer_base_family(3, &[vec![], vec![-1]], &[vec![], vec![Weight::one()]]).unwrap_err();
        assert_eq!(err, Error::Precondition("L_1 is empty".into()));
        let err = make_integer_base_family(3, &[vec![1], vec![-1]], &[vec![Weight::one()], vec![Weight::one()]]);
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("L_1")));
        let err = make_integer_base_family(
            3,
            &[vec![0, 3], vec![-1]],
            &[vec![Weight::one(), Weight::one()], vec![Weight::one()]],
        );
        assert!(matches!(err, Err(Error::Precondition(m)) if m.contains("L_1")));
    }

    #[test]
    fn lebesgue_detection() {
        assert!(is_lebesgue_system(&IfsSystem::new_1d(3, &[0, 1, 2]).unwrap()));
        assert!(is_lebesgue_system(&IfsSystem::new_1d(3, &[2, 0, 1]).unwrap()));
        assert!(!is_lebesgue_system(&IfsSystem::new_1d(4, &[0, 2]).unwrap()));
    }
}
