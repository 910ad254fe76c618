//! One-dimensional transition dynamics `t → g_l(t) = (t − l)/R` and the
//! decision procedure for finite minimal invariant sets.
//!
//! A transition is possible when `α_l m_B(g_l t) ≠ 0`, decided exactly.
//! Minimal finite invariant sets consist of points `t` with `t·b ∈ ℤ` for all
//! digits that lie in `[−max L/(R−1), −min L/(R−1)]`; on that finite set we
//! discard every point from which some possible transition escapes, then
//! read off the bottom strongly connected components.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use serde_json::{json, Value};

use crate::algebra::cyclo::gcd_all;
use crate::algebra::rational::{fmt_short, int};
use crate::algebra::Rational;
use crate::candidate::{FrameCandidate, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

/// Cap on the number of candidate points.
pub const MAX_CANDIDATE_POINTS: u128 = 1_000_000;

/// Cap on the number of enumerated cycles.
pub const MAX_CYCLES: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub label: i64,
    pub target: Rational,
    /// `|α_l|² |m_B(g_l t)|²`.
    pub weight: f64,
}

fn scalar_r(sys: &IfsSystem) -> Result<i64> {
    let r = sys
        .scalar()
        .ok_or_else(|| Error::Unsupported(format!("transition dynamics need d = 1, got d = {}", sys.dim())))?;
    if r < 2 {
        return Err(Error::Unsupported(format!("transition dynamics need R >= 2, got R = {r}")));
    }
    Ok(r)
}

fn g(t: &Rational, label: i64, r: i64) -> Rational {
    (t - int(label)) / int(r)
}

/// Active labels and their `|α_l|²`, for `d = 1`.
fn active_labels(c: &FrameCandidate) -> Vec<(i64, f64)> {
    c.active().map(|i| (c.labels()[i][0], c.weights()[i].norm_sq())).collect()
}

/// Possible one-step transitions from `t`.
pub fn transition_targets(c: &FrameCandidate, t: &Rational) -> Result<Vec<Transition>> {
    let sys = c.system();
    if sys.dim() != 1 {
        return Err(Error::Unsupported(format!("transition dynamics need d = 1, got d = {}", sys.dim())));
    }
    let r = sys.scalar().expect("d = 1");
    let mut out = Vec::new();
    for (label, w) in active_labels(c) {
        let target = g(t, label, r);
        let point = [target.clone()];
        if sys.mask_vanishes_exact(&point)? {
            continue;
        }
        let weight = w * sys.mask_rational(&point).norm_sqr();
        out.push(Transition { label, target, weight });
    }
    Ok(out)
}

/// `Σ_l |α_l|² |m_B(g_l t)|²` over every label, possible or not.
pub fn transition_weight_total(c: &FrameCandidate, t: &Rational) -> Result<f64> {
    let sys = c.system();
    let r = sys.scalar().ok_or_else(|| Error::Unsupported("transition dynamics need d = 1".into()))?;
    Ok(active_labels(c).into_iter().map(|(l, w)| w * sys.mask_rational(&[g(t, l, r)]).norm_sqr()).sum())
}

/// Rationals in `[−max L/(R−1), −min L/(R−1)]` with `t·b ∈ ℤ` for every
/// digit, in increasing order.
pub fn candidate_points_for(sys: &IfsSystem, labels: &[i64]) -> Result<Vec<Rational>> {
    let r = scalar_r(sys)?;
    let (Some(&lmin), Some(&lmax)) = (labels.iter().min(), labels.iter().max()) else {
        return Err(Error::Empty("label set"));
    };
    let lo = int(-lmax) / int(r - 1);
    let hi = int(-lmin) / int(r - 1);
    let gcd = gcd_all(sys.digits().iter().map(|b| b[0]));
    if gcd == 0 {
        return if lo == hi {
            Ok(vec![lo])
        } else {
            Err(Error::Unsupported("digit set {0} leaves the candidate set unbounded".into()))
        };
    }
    let scale = BigInt::from(gcd);
    let first = (&lo * &scale).ceil().to_integer();
    let last = (&hi * &scale).floor().to_integer();
    let count = (&last - &first + BigInt::from(1)).to_u128().unwrap_or(0);
    if count > MAX_CANDIDATE_POINTS {
        return Err(Error::Resource { what: "candidate points", needed: count, budget: MAX_CANDIDATE_POINTS });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut k = first;
    while k <= last {
        out.push(Rational::new(k.clone(), scale.clone()));
        k += BigInt::from(1);
    }
    Ok(out)
}

pub fn candidate_points(c: &FrameCandidate) -> Result<Vec<Rational>> {
    let labels: Vec<i64> = active_labels(c).into_iter().map(|(l, _)| l).collect();
    candidate_points_for(c.system(), &labels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub source: Rational,
    pub label: i64,
    pub target: Rational,
    pub weight: f64,
}

/// Possible transitions out of every candidate point.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    /// Candidate points, then any targets outside them.
    pub nodes: Vec<Rational>,
    pub candidates: BTreeSet<Rational>,
    pub edges: Vec<Edge>,
}

impl TransitionGraph {
    pub fn build(c: &FrameCandidate) -> Result<Self> {
        let points = candidate_points(c)?;
        let candidates: BTreeSet<Rational> = points.iter().cloned().collect();
        let mut nodes = points.clone();
        let mut extra = BTreeSet::new();
        let mut edges = Vec::new();
        for t in &points {
            for tr in transition_targets(c, t)? {
                if !candidates.contains(&tr.target) {
                    extra.insert(tr.target.clone());
                }
                edges.push(Edge { source: t.clone(), label: tr.label, target: tr.target, weight: tr.weight });
            }
        }
        nodes.extend(extra);
        Ok(Self { nodes, candidates, edges })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph transitions {\n");
        for n in &self.nodes {
            let style = if self.candidates.contains(n) { "" } else { " [style=dashed]" };
            let _ = writeln!(out, "  \"{}\"{};", fmt_short(n), style);
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{} ({:.6})\"];",
                fmt_short(&e.source),
                fmt_short(&e.target),
                e.label,
                e.weight
            );
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "nodes": self.nodes.iter().map(|n| json!({
                "point": fmt_short(n),
                "candidate": self.candidates.contains(n),
            })).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| json!({
                "source": fmt_short(&e.source),
                "label": e.label,
                "target": fmt_short(&e.target),
                "weight": e.weight,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSetReport {
    /// Each set sorted increasingly; `{0}` first when present.
    pub minimal_sets: Vec<Vec<Rational>>,
    pub trivial_only: bool,
    /// Point of smallest modulus in the first non-trivial set.
    pub witness: Option<Rational>,
    /// Possible transitions inside each reported set.
    pub internal_edges: Vec<Vec<Edge>>,
    pub candidate_count: usize,
    /// Candidate points discarded because some transition leaves the
    /// candidate set, directly or after further transitions.
    pub eliminated: Vec<Rational>,
}

pub fn find_minimal_invariant_sets(c: &FrameCandidate) -> Result<InvariantSetReport> {
    let graph = TransitionGraph::build(c)?;
    let mut out: BTreeMap<&Rational, Vec<&Edge>> = BTreeMap::new();
    for e in &graph.edges {
        out.entry(&e.source).or_default().push(e);
    }
    let mut escaped: BTreeSet<&Rational> = graph.nodes.iter().filter(|n| !graph.candidates.contains(*n)).collect();
    loop {
        let newly: Vec<&Rational> = graph
            .candidates
            .iter()
            .filter(|t| !escaped.contains(t))
            .filter(|t| out.get(t).is_some_and(|es| es.iter().any(|e| escaped.contains(&e.target))))
            .collect();
        if newly.is_empty() {
            break;
        }
        escaped.extend(newly);
    }
    let survivors: Vec<&Rational> = graph.candidates.iter().filter(|t| !escaped.contains(t)).collect();
    let mut dg: DiGraph<&Rational, ()> = DiGraph::new();
    let index: BTreeMap<&Rational, NodeIndex> = survivors.iter().map(|&t| (t, dg.add_node(t))).collect();
    for &t in &survivors {
        for e in out.get(t).into_iter().flatten() {
            dg.add_edge(index[t], index[&e.target], ());
        }
    }
    let mut sets: Vec<Vec<Rational>> = tarjan_scc(&dg)
        .into_iter()
        .filter(|comp| {
            let members: BTreeSet<NodeIndex> = comp.iter().copied().collect();
            comp.iter().all(|&n| dg.neighbors(n).all(|m| members.contains(&m)))
        })
        .map(|comp| {
            let mut pts: Vec<Rational> = comp.into_iter().map(|n| dg[n].clone()).collect();
            pts.sort();
            pts
        })
        .collect();
    let zero = vec![Rational::zero()];
    sets.sort_by(|a, b| (a != &zero, a).cmp(&(b != &zero, b)));
    let witness = sets
        .iter()
        .find(|s| **s != zero)
        .and_then(|s| s.iter().min_by(|x, y| (x.abs(), (*x).clone()).cmp(&(y.abs(), (*y).clone()))).cloned());
    let internal_edges = sets
        .iter()
        .map(|s| {
            let members: BTreeSet<&Rational> = s.iter().collect();
            graph.edges.iter().filter(|e| members.contains(&e.source)).cloned().collect()
        })
        .collect();
    let eliminated = graph.candidates.iter().filter(|t| escaped.contains(t)).cloned().collect();
    Ok(InvariantSetReport {
        trivial_only: sets == vec![zero],
        minimal_sets: sets,
        witness,
        internal_edges,
        candidate_count: graph.candidates.len(),
        eliminated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Parseval,
    Incomplete,
}

impl VerdictStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictStatus::Parseval => "Parseval",
            VerdictStatus::Incomplete => "Incomplete",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsevalVerdict {
    pub status: VerdictStatus,
    pub witness: Option<Rational>,
    pub certificate: String,
    pub report: InvariantSetReport,
}

/// Completeness verdict in `d = 1`: the frame is Parseval on `L²(μ)` iff
/// `{0}` is the only finite minimal invariant set. Otherwise `e_c` is
/// orthogonal to every frame vector for `c` in a non-trivial set.
pub fn th2_verdict(c: &FrameCandidate) -> Result<ParsevalVerdict> {
    scalar_r(c.system())?;
    if !c.check_isometry(DEFAULT_TOL)?.ok {
        return Err(Error::Precondition("conditions (i)/(ii) not established: T is not an isometry".into()));
    }
    let report = find_minimal_invariant_sets(c)?;
    let show = |s: &[Rational]| s.iter().map(fmt_short).collect::<Vec<_>>().join(", ");
    let (status, certificate) = if report.trivial_only {
        let cert = format!(
            "only finite minimal invariant set is {{0}}; {} candidate points, {} eliminated by escaping transitions",
            report.candidate_count,
            report.eliminated.len()
        );
        (VerdictStatus::Parseval, cert)
    } else {
        let set = report.minimal_sets.iter().find(|s| **s != [Rational::zero()]).expect("non-trivial set");
        let w = report.witness.as_ref().expect("witness");
        let cert = format!(
            "non-trivial minimal invariant set {{{}}}; e_c is orthogonal to every frame vector for c = {}",
            show(set),
            fmt_short(w)
        );
        (VerdictStatus::Incomplete, cert)
    };
    Ok(ParsevalVerdict { status, witness: report.witness.clone(), certificate, report })
}

/// A periodic orbit `t_0 → t_1 → … → t_0` of the maps `g_l`, with
/// `digits[i]` taking `t_i` to `t_{i+1}`; starts at its smallest point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub points: Vec<Rational>,
    pub digits: Vec<i64>,
}

/// All cycles of the maps `g_l`, `l ∈ labels`, on which `|m_B| = 1`.
/// Every such cycle lies in the candidate set, so the search is finite.
pub fn extreme_cycles(sys: &IfsSystem, labels: &[i64]) -> Result<Vec<Cycle>> {
    let r = scalar_r(sys)?;
    let points = candidate_points_for(sys, labels)?;
    let pos: BTreeMap<&Rational, usize> = points.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let adj: Vec<Vec<(usize, i64)>> =
        points.iter().map(|t| labels.iter().filter_map(|&l| pos.get(&g(t, l, r)).map(|&j| (j, l))).collect()).collect();
    let mut cycles = Vec::new();
    for start in 0..points.len() {
        let mut path = vec![start];
        let mut digits = Vec::new();
        let mut on_path = vec![false; points.len()];
        on_path[start] = true;
        let mut stack = vec![0usize];
        while let Some(next) = stack.last_mut() {
            let v = *path.last().expect("non-empty path");
            if *next >= adj[v].len() {
                stack.pop();
                on_path[v] = false;
                path.pop();
                digits.pop();
                continue;
            }
            let (w, l) = adj[v][*next];
            *next += 1;
            if w == start {
                let mut ds = digits.clone();
                ds.push(l);
                cycles.push(Cycle { points: path.iter().map(|&i| points[i].clone()).collect(), digits: ds });
                if cycles.len() > MAX_CYCLES {
                    return Err(Error::Resource {
                        what: "cycles",
                        needed: cycles.len() as u128,
                        budget: MAX_CYCLES as u128,
                    });
                }
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                digits.push(l);
                stack.push(0);
            }
        }
    }
    cycles.sort();
    Ok(cycles)
}

/// For each point of an invariant set, checks that its possible digits
/// share one residue class modulo `R` and returns the total `|α_l|²` of
/// that class (which is 1 for an isometry).
pub fn residue_class_weights(c: &FrameCandidate, set: &[Rational]) -> Result<Vec<f64>> {
    let r = scalar_r(c.system())?;
    let labels = active_labels(c);
    set.iter()
        .map(|t| {
            let possible = transition_targets(c, t)?;
            let first =
                possible.first().ok_or_else(|| Error::Precondition(format!("no transition from {}", fmt_short(t))))?;
            let residue = first.label.mod_floor(&r);
            if possible.iter().any(|p| p.label.mod_floor(&r) != residue) {
                return Err(Error::Precondition(format!(
                    "possible digits from {} are not congruent mod R",
                    fmt_short(t)
                )));
            }
            Ok(labels.iter().filter(|(l, _)| l.mod_floor(&r) == residue).map(|(_, w)| w).sum())
        })
        .collect()
}
