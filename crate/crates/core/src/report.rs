//! JSON renderings of check results, shared by the command line and the
//! Python bindings. Rationals are rendered as `"p/q"` strings.

use serde_json::{json, Value};

use crate::algebra::rational::fmt_short;
use crate::algebra::{IntVec, Rational};
use crate::candidate::{CongruenceReport, ExponentialSumReport};
use crate::dilation::{DilationReport, WordProjection};
use crate::dynamics::{Cycle, Edge, ParsevalVerdict};
use crate::error::Error;
use crate::families::FamilyVerdict;
use crate::verify::{FrequencyAtom, LevelReport, RepresentationReport};

pub fn rational(x: &Rational) -> Value {
    Value::String(fmt_short(x))
}

pub fn points(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rational).collect())
}

/// `3` in one dimension, `[1;0]` otherwise.
pub fn vector_text(v: &[i64]) -> String {
    match v {
        [x] => x.to_string(),
        _ => format!("[{}]", v.iter().map(i64::to_string).collect::<Vec<_>>().join(";")),
    }
}

pub fn word_text(word: &[IntVec]) -> String {
    word.iter().map(|l| vector_text(l)).collect::<Vec<_>>().join(" ")
}

pub fn error_code(e: &Error) -> &'static str {
    match e {
        Error::Dimension(_) => "dimension_mismatch",
        Error::Singular => "singular_matrix",
        Error::Overflow(_) => "overflow",
        Error::IndeterminateExpansivity { .. } => "indeterminate_expansivity",
        Error::NotExpansive => "not_expansive",
        Error::MissingZeroDigit => "missing_zero_digit",
        Error::DuplicateDigit(_) => "duplicate_digit",
        Error::CongruentDigits(..) => "congruent_digits",
        Error::Empty(_) => "empty_set",
        Error::MissingZeroLabel => "missing_zero_label",
        Error::DuplicateLabel(_) => "duplicate_label",
        Error::ZeroLabelWeight(_) => "zero_label_weight",
        Error::ZeroWeight(_) => "zero_weight",
        Error::WeightCount { .. } => "weight_count",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::Precondition(_) => "precondition",
        Error::Unsupported(_) => "unsupported",
        Error::Resource { .. } => "resource",
        Error::GridNotClosed(_) => "grid_not_closed",
        Error::Parse(_) => "parse",
    }
}

pub fn reason(code: &str, message: impl Into<String>) -> Value {
    json!({ "code": code, "message": message.into() })
}

pub fn exponential_sum(r: &ExponentialSumReport) -> Value {
    json!({
        "feasible": r.feasible,
        "universally_infeasible": r.universally_infeasible,
        "labels": r.per_label.iter().map(|v| json!({
            "label": v.label,
            "passes": v.passes,
            "vacuous": v.vacuous,
        })).collect::<Vec<_>>(),
    })
}

pub fn congruence(r: &CongruenceReport) -> Value {
    json!({
        "n_le_card": r.n_le_card,
        "classes": r.classes.iter().zip(&r.class_sums).map(|(c, s)| json!({
            "labels": c,
            "weight_sum": s.numeric,
            "weight_sum_exact": s.exact.as_ref().map(rational),
            "at_most_one": s.at_most_one,
        })).collect::<Vec<_>>(),
    })
}

pub fn family(kind: &str, v: &FamilyVerdict) -> Value {
    json!({
        "kind": kind,
        "i": v.i, "ii": v.ii, "iii": v.iii, "iv": v.iv, "v": v.v,
        "isometry": v.isometry(),
        "parseval_sufficient": v.parseval_sufficient(),
    })
}

pub fn edge(e: &Edge) -> Value {
    json!({ "source": rational(&e.source), "label": e.label, "target": rational(&e.target), "weight": e.weight })
}

pub fn cycle(c: &Cycle) -> Value {
    json!({ "points": points(&c.points), "digits": c.digits })
}

pub fn verdict(v: &ParsevalVerdict, cycles: &[Cycle]) -> Value {
    json!({
        "status": v.status.as_str(),
        "witness": v.witness.as_ref().map(rational),
        "certificate": v.certificate,
        "minimal_sets": v.report.minimal_sets.iter().map(|s| points(s)).collect::<Vec<_>>(),
        "internal_edges": v.report.internal_edges.iter()
            .map(|es| es.iter().map(edge).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "candidate_count": v.report.candidate_count,
        "eliminated": points(&v.report.eliminated),
        "extreme_cycles": cycles.iter().map(cycle).collect::<Vec<_>>(),
    })
}

pub fn level(r: &LevelReport) -> Value {
    json!({
        "k": r.k,
        "atoms": r.atoms,
        "words": r.words,
        "deviation": r.deviation,
        "ok": r.ok,
        "exact": r.exact,
    })
}

pub fn frequency_atom(a: &FrequencyAtom) -> Value {
    json!({
        "word": a.word,
        "frequency": a.frequency,
        "weight": [a.weight.re, a.weight.im],
        "weight_norm_sq": a.weight_norm_sq.as_ref().map(rational),
    })
}

pub fn representations(r: &RepresentationReport) -> Value {
    json!({
        "n": r.n,
        "words": r.words.iter().map(|w| json!({
            "word": w.word,
            "weight_norm_sq": w.weight_norm_sq,
            "weight_norm_sq_exact": w.exact.as_ref().map(rational),
        })).collect::<Vec<_>>(),
        "truncated": r.truncated,
        "weighted_sum": r.weighted_sum.as_ref().map(rational),
        "weighted_sum_f64": if r.diverges { Value::Null } else { json!(r.weighted_sum_f64) },
        "diverges": r.diverges,
        "equals_one": r.equals_one,
        "lebesgue_family": r.lebesgue_family,
    })
}

pub fn dilation(r: &DilationReport) -> Value {
    serde_json::to_value(r).unwrap_or(Value::Null)
}

pub fn projection(word: &[usize], p: &WordProjection) -> Value {
    json!({
        "word": word,
        "frequency": p.frequency,
        "coefficient": [p.coefficient.re, p.coefficient.im],
        "quadrature_deviation": p.quadrature_deviation,
    })
}
