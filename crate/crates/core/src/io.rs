//! JSON form of systems and candidates.
//!
//! ```json
//! {"schema": 1,
//!  "ifs": {"R": [[4]], "B": [[0], [2]]},
//!  "L": [[0], [3], [9]],
//!  "alpha": [{"sqrt": "1"}, {"sqrt_recip": 2}, {"sqrt_recip": 2}],
//!  "witness": ["-1"]}
//! ```
//!
//! In one dimension `R` may be a plain integer and `B`, `L` flat integer
//! lists. Weights are `{"re", "im"}`, `{"sqrt_recip": n}`,
//! `{"sqrt": "p/q", "phase": "p/q"}` (`√(p/q)·e^{2πi·phase}`),
//! `{"padded": true}` or a bare number. Output is always the nested form.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::algebra::rational::{fmt_short, parse_rational};
use crate::algebra::{IntMatrix, IntVec, RatVec, Rational};
use crate::candidate::{FrameCandidate, Weight};
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

pub const SCHEMA_VERSION: u64 = 1;

/// A candidate file with its optional declared orthogonality witness.
#[derive(Debug, Clone)]
pub struct CandidateFile {
    pub candidate: FrameCandidate,
    pub witness: Option<RatVec>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn as_int(v: &Value, what: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(format!("{what}: expected an integer, got {v}")))
}

/// A vector given either as an array of integers or, in `d = 1`, a bare
/// integer.
fn int_vec(v: &Value, what: &str) -> Result<IntVec> {
    match v {
        Value::Array(xs) => xs.iter().map(|x| as_int(x, what)).collect(),
        _ => Ok(vec![as_int(v, what)?]),
    }
}

fn int_vecs(v: &Value, what: &str) -> Result<Vec<IntVec>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("{what}: expected an array")))?
        .iter()
        .map(|x| int_vec(x, what))
        .collect()
}

fn rational(v: &Value, what: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(_) => Ok(Rational::from_integer(BigInt::from(as_int(v, what)?))),
        _ => Err(parse_err(format!("{what}: expected a rational string or integer, got {v}"))),
    }
}

fn rat_str(x: &Rational) -> Value {
    Value::String(fmt_short(x))
}

pub fn ifs_from_json(v: &Value) -> Result<IfsSystem> {
    let r = v.get("R").ok_or_else(|| parse_err("ifs: missing \"R\""))?;
    let matrix = match r {
        Value::Array(rows) => IntMatrix::from_rows(rows.iter().map(|row| int_vec(row, "R")).collect::<Result<_>>()?)?,
        _ => IntMatrix::scalar(as_int(r, "R")?),
    };
    let digits = int_vecs(v.get("B").ok_or_else(|| parse_err("ifs: missing \"B\""))?, "B")?;
    IfsSystem::new(matrix, digits)
}

pub fn ifs_to_json(sys: &IfsSystem) -> Value {
    json!({ "R": sys.matrix().rows(), "B": sys.digits() })
}

pub fn weight_from_json(v: &Value) -> Result<Weight> {
    if let Some(x) = v.as_f64() {
        return Ok(match v.as_i64() {
            Some(n) => {
                let phase = if n < 0 { Rational::new(BigInt::one(), BigInt::from(2)) } else { Rational::zero() };
                Weight::sqrt_with_phase(Rational::from_integer(BigInt::from(n) * BigInt::from(n)), phase)
            }
            None => Weight::complex(x, 0.0),
        });
    }
    let obj = v.as_object().ok_or_else(|| parse_err(format!("weight: unrecognised form {v}")))?;
    if obj.get("padded").and_then(Value::as_bool) == Some(true) {
        return Ok(Weight::Padded);
    }
    if let Some(n) = obj.get("sqrt_recip") {
        let n = as_int(n, "sqrt_recip")?;
        if n <= 0 {
            return Err(parse_err(format!("sqrt_recip must be positive, got {n}")));
        }
        return Ok(Weight::sqrt_recip(n));
    }
    if let Some(r) = obj.get("sqrt") {
        let ratio = rational(r, "sqrt")?;
        if ratio.is_negative() {
            return Err(parse_err("sqrt: ratio must be non-negative"));
        }
        let phase = obj.get("phase").map(|p| rational(p, "phase")).transpose()?.unwrap_or_else(Rational::zero);
        return Ok(Weight::sqrt_with_phase(ratio, phase));
    }
    if obj.contains_key("re") || obj.contains_key("im") {
        let part = |k: &str| -> Result<f64> {
            obj.get(k)
                .map(|x| x.as_f64().ok_or_else(|| parse_err(format!("weight {k}: expected a number"))))
                .transpose()
                .map(|x| x.unwrap_or(0.0))
        };
        return Ok(Weight::complex(part("re")?, part("im")?));
    }
    Err(parse_err(format!("weight: unrecognised form {v}")))
}

pub fn weight_to_json(w: &Weight) -> Value {
    match w {
        Weight::Complex { re, im } => json!({ "re": re, "im": im }),
        Weight::Padded => json!({ "padded": true }),
        Weight::Sqrt { ratio, phase } => {
            let recip = ratio.denom().to_i64().filter(|&q| q > 1 && ratio.numer().is_one());
            if let (Some(q), true) = (recip, phase.is_zero()) {
                json!({ "sqrt_recip": q })
            } else if phase.is_zero() {
                json!({ "sqrt": fmt_short(ratio) })
            } else {
                json!({ "sqrt": fmt_short(ratio), "phase": fmt_short(phase) })
            }
        }
    }
}

fn point_from_json(v: &Value) -> Result<RatVec> {
    match v {
        Value::Array(xs) => xs.iter().map(|x| rational(x, "witness")).collect(),
        _ => Ok(vec![rational(v, "witness")?]),
    }
}

pub fn parse_candidate_value(v: &Value) -> Result<CandidateFile> {
    if let Some(s) = v.get("schema") {
        if s.as_u64() != Some(SCHEMA_VERSION) {
            return Err(parse_err(format!("unsupported schema {s}, expected {SCHEMA_VERSION}")));
        }
    }
    let sys = ifs_from_json(v.get("ifs").ok_or_else(|| parse_err("missing \"ifs\""))?)?;
    let labels = int_vecs(v.get("L").ok_or_else(|| parse_err("missing \"L\""))?, "L")?;
    let weights = v
        .get("alpha")
        .ok_or_else(|| parse_err("missing \"alpha\""))?
        .as_array()
        .ok_or_else(|| parse_err("alpha: expected an array"))?
        .iter()
        .map(weight_from_json)
        .collect::<Result<Vec<_>>>()?;
    let witness = v.get("witness").filter(|w| !w.is_null()).map(point_from_json).transpose()?;
    let candidate = FrameCandidate::new(sys, labels, weights)?;
    if let Some(w) = &witness {
        if w.len() != candidate.system().dim() {
            return Err(Error::Dimension(format!(
                "witness has {} coordinates, expected {}",
                w.len(),
                candidate.system().dim()
            )));
        }
    }
    Ok(CandidateFile { candidate, witness })
}

/// Parses candidate JSON text. Syntax errors are reported as `Parse`;
/// structurally valid input that violates a domain rule keeps its own error.
pub fn parse_candidate(text: &str) -> Result<CandidateFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    parse_candidate_value(&v)
}

pub fn candidate_to_json(c: &FrameCandidate, witness: Option<&[Rational]>) -> Value {
    let mut v = json!({
        "schema": SCHEMA_VERSION,
        "ifs": ifs_to_json(c.system()),
        "L": c.labels(),
        "alpha": c.weights().iter().map(weight_to_json).collect::<Vec<_>>(),
    });
    if let Some(w) = witness {
        v["witness"] = Value::Array(w.iter().map(rat_str).collect());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    #[test]
    fn lenient_one_dimensional_input() {
        let f = parse_candidate(
            r#"{"ifs": {"R": 4, "B": [0, 2]}, "L": [0, 3, 9],
                "alpha": [1, {"sqrt_recip": 2}, {"re": 0.7071067811865476, "im": 0}], "witness": -1}"#,
        )
        .unwrap();
        assert_eq!(f.candidate.labels_1d().unwrap(), vec![0, 3, 9]);
        assert_eq!(f.witness, Some(vec![int(-1)]));
        assert!(f.candidate.check_isometry(1e-10).unwrap().ok);
    }

    #[test]
    fn round_trip() {
        let text = r#"{"schema": 1, "ifs": {"R": [[2, 1], [0, 2]], "B": [[0, 0], [1, 0]]},
            "L": [[0, 0], [1, 0]],
            "alpha": [{"sqrt": "1"}, {"sqrt": "1/3", "phase": "1/4"}], "witness": ["1/2", "0"]}"#;
        let f = parse_candidate(text).unwrap();
        let out = candidate_to_json(&f.candidate, f.witness.as_deref());
        let again = parse_candidate_value(&out).unwrap();
        assert_eq!(again.candidate.labels(), f.candidate.labels());
        assert_eq!(again.candidate.weights(), f.candidate.weights());
        assert_eq!(again.witness, Some(vec![rat(1, 2), int(0)]));
        assert_eq!(out["alpha"][1], json!({"sqrt": "1/3", "phase": "1/4"}));
        assert_eq!(weight_to_json(&Weight::sqrt_recip(2)), json!({"sqrt_recip": 2}));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_candidate("{"), Err(Error::Parse(_))));
        assert!(matches!(parse_candidate(r#"{"ifs": {"R": 4}}"#), Err(Error::Parse(_))));
        assert!(matches!(
            parse_candidate(r#"{"schema": 2, "ifs": {"R": 4, "B": [0, 2]}, "L": [0], "alpha": [1]}"#),
            Err(Error::Parse(_))
        ));
        assert_eq!(
            parse_candidate(r#"{"ifs": {"R": 4, "B": [0, 2]}, "L": [3], "alpha": [1]}"#).unwrap_err(),
            Error::MissingZeroLabel
        );
        assert!(matches!(
            parse_candidate(r#"{"ifs": {"R": 4, "B": [0, 2]}, "L": [0], "alpha": [{"sqrt_recip": 0}]}"#),
            Err(Error::Parse(_))
        ));
    }
}
