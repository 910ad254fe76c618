//! Exact rationals and the small helpers the rest of the crate leans on.

use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always kept in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

/// Integer vector (digits, labels, frequencies).
pub type IntVec = Vec<i64>;

/// Exact rational vector (points of the dual space).
pub type RatVec = Vec<Rational>;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn int_vec_to_rat(v: &[i64]) -> RatVec {
    v.iter().map(|&x| int(x)).collect()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

pub fn dot_int(a: &[i64], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (&x, y)| acc + y * BigInt::from(x))
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratio::to_f64 only fails on overflow of both parts; fall back to
        // a scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// `e^{2πiθ}` with θ reduced modulo 1 in exact arithmetic before the
/// conversion to floating point.
pub fn exp_2pi_i(theta: &Rational) -> Complex64 {
    let reduced = frac(theta);
    if reduced.is_zero() {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::from_polar(1.0, TAU * to_f64(&reduced))
}

/// Formats as `p/q`, including integers (`3/1`).
pub fn fmt_ratio(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Compact human form: `p` for integers, `p/q` otherwise.
pub fn fmt_short(x: &Rational) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        fmt_ratio(x)
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        let q: BigInt = q.trim().parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, fracpart)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), fracpart);
        let n: BigInt = digits.parse().map_err(|_| Error::Parse(format!("bad decimal {s:?}")))?;
        let scale = num_traits::pow(BigInt::from(10), fracpart.len());
        let r = Rational::new(n, scale);
        return Ok(if negative { -r } else { r });
    }
    let n: BigInt = s.parse().map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from_integer(n))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn abs_max(xs: &[i64]) -> i64 {
    xs.iter().map(|x| x.abs()).max().unwrap_or(0)
}

pub fn rat_abs(x: &Rational) -> Rational {
    x.abs()
}
