//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::Command;
use std::time::{Duration, Instant};

use fracframes::algebra::rational::{int, rat};
use fracframes::candidate::Weight;
use fracframes::dynamics::VerdictStatus;
use fracframes::{
    bessel_partial_sum, check_three_digit_family, check_two_digit_family, enumerate_representations, extreme_cycles,
    level_k_parseval, make_integer_base_family, orthogonality_witness, th2_verdict, DilationSystem, FrameCandidate,
    Rational, DEFAULT_ATOM_BUDGET,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn jp_candidate() -> FrameCandidate {
    FrameCandidate::new_1d(4, &[0, 2], &[0, 3, 9], vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)])
        .unwrap()
}

fn three_digit_candidate() -> FrameCandidate {
    FrameCandidate::new_1d(
        6,
        &[0, 2, 4],
        &[0, 1, 5, 20],
        vec![Weight::one(), Weight::one(), Weight::sqrt(rat(1, 3)), Weight::sqrt(rat(2, 3))],
    )
    .unwrap()
}

fn has_cycle(cycles: &[fracframes::dynamics::Cycle], points: &[Rational]) -> bool {
    cycles.iter().any(|c| c.points == points)
}

fn admissibility() -> Check {
    let c = jp_candidate();
    let iso = lib(c.check_isometry(1e-12))?;
    ensure!(iso.ok && iso.max_deviation < 1e-12, "isometry deviation {:e}", iso.max_deviation);
    let v = lib(th2_verdict(&c))?;
    ensure!(v.status == VerdictStatus::Parseval, "verdict {}", v.status.as_str());
    ensure!(v.report.minimal_sets == vec![vec![int(0)]], "minimal sets {:?}", v.report.minimal_sets);
    Ok(format!("deviation {:.1e}, verdict Parseval, invariant sets {{0}}", iso.max_deviation))
}

fn incompleteness() -> Check {
    let c = FrameCandidate::new_1d(
        4,
        &[0, 2],
        &[0, 3, 15],
        vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)],
    )
    .unwrap();
    let v = lib(th2_verdict(&c))?;
    ensure!(v.status == VerdictStatus::Incomplete, "verdict {}", v.status.as_str());
    let nontrivial: Vec<_> = v.report.minimal_sets.iter().filter(|s| **s != [int(0)]).collect();
    ensure!(nontrivial == [&vec![int(-4), int(-1)]], "minimal sets {:?}", v.report.minimal_sets);
    ensure!(lib(orthogonality_witness(&c, &[int(-1)], 4, 8, DEFAULT_ATOM_BUDGET))?, "no certificate for e_{{-1}}");
    Ok("minimal set {-4, -1}, verdict Incomplete, e_{-1} certified orthogonal".into())
}

fn two_cycle() -> Check {
    let c = FrameCandidate::new_1d(
        2,
        &[0, 1],
        &[0, 1, 3],
        vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)],
    )
    .unwrap();
    let v = lib(th2_verdict(&c))?;
    let idx = v.report.minimal_sets.iter().position(|s| *s == [int(-2), int(-1)]);
    let idx = idx.ok_or_else(|| format!("minimal sets {:?}", v.report.minimal_sets))?;
    let mut edges: Vec<(Rational, i64, Rational)> =
        v.report.internal_edges[idx].iter().map(|e| (e.source.clone(), e.label, e.target.clone())).collect();
    edges.sort();
    let expected = vec![(int(-2), 0, int(-1)), (int(-1), 1, int(-1)), (int(-1), 3, int(-2))];
    ensure!(edges == expected, "transitions {:?}", edges);
    Ok("minimal set {-2, -1} with transitions by digits 1, 3, 0".into())
}

fn three_digit() -> Check {
    let c = three_digit_candidate();
    let f = lib(check_three_digit_family(&c))?;
    ensure!(f.i && f.ii && f.iii && f.iv && !f.v, "family verdict {:?}", f);
    let v = lib(th2_verdict(&c))?;
    ensure!(v.status == VerdictStatus::Parseval && v.report.trivial_only, "verdict {}", v.status.as_str());
    let sys = c.system();
    let cycles_015 = lib(extreme_cycles(sys, &[0, 1, 5]))?;
    ensure!(has_cycle(&cycles_015, &[int(-1)]), "{{0,1,5}}: no cycle {{-1}} in {:?}", cycles_015);
    let cycles_0120 = lib(extreme_cycles(sys, &[0, 1, 20]))?;
    ensure!(has_cycle(&cycles_0120, &[int(-4)]), "{{0,1,20}}: no cycle {{-4}} in {:?}", cycles_0120);
    // With three digits a frame needs at least three labels, and a square T
    // is an isometry only if every |α_l| = 1, so unit weights decide it.
    for labels in [vec![0, 5, 20], vec![0, 1], vec![0, 5], vec![0, 20], vec![0]] {
        let sub = lib(FrameCandidate::new_1d(6, &[0, 2, 4], &labels, vec![Weight::one(); labels.len()]))?;
        let iso = lib(sub.check_isometry(1e-10))?;
        ensure!(!iso.ok, "{:?} passes the isometry test", labels);
    }
    Ok("(i)-(iv) true, (v) false, Parseval; every proper label subset fails".into())
}

fn level_k() -> Check {
    let mut worst = 0.0f64;
    for (c, n) in [(jp_candidate(), 4usize), (three_digit_candidate(), 3)] {
        for k in 1..=4 {
            let r = lib(level_k_parseval(&c, k, DEFAULT_ATOM_BUDGET))?;
            ensure!(r.atoms <= n.pow(4), "k = {k}: {} atoms", r.atoms);
            ensure!(r.deviation <= 1e-10, "k = {k}: deviation {:e}", r.deviation);
            ensure!(r.exact != Some(false), "k = {k}: exact check failed");
            worst = worst.max(r.deviation);
        }
    }
    Ok(format!("k = 1..4, max deviation {worst:.1e}"))
}

fn middle_third() -> Check {
    let c = lib(FrameCandidate::new_1d(3, &[0, 2], &[0, 1], vec![Weight::one(), Weight::one()]))?;
    let r = lib(c.exponential_sum_condition())?;
    ensure!(r.universally_infeasible, "a non-zero label was not ruled out");
    let out =
        lib(Command::new(env!("CARGO_BIN_EXE_fracframes")).args(["validate", &fixture("middle_third.json")]).output())?;
    ensure!(out.status.code() == Some(1), "exit code {:?}", out.status.code());
    let report: serde_json::Value = lib(serde_json::from_slice(&out.stdout))?;
    let codes: Vec<&str> =
        report["reasons"].as_array().into_iter().flatten().filter_map(|r| r["code"].as_str()).collect();
    ensure!(codes.contains(&"exponential_sum_infeasible"), "reasons {:?}", codes);
    Ok("no non-zero label possible; exit 1 with reason exponential_sum_infeasible".into())
}

fn dilation() -> Check {
    let c = jp_candidate();
    let d = lib(DilationSystem::build(&c, None))?;
    let a = lib(d.build_a_matrix())?;
    let r = d.report(&a);
    ensure!(r.unitarity_deviation <= 1e-12, "unitarity deviation {:e}", r.unitarity_deviation);
    let first_row_ones = (0..a.entries.ncols()).all(|j| a.entries[(0, j)].re == 1.0 && a.entries[(0, j)].im == 0.0);
    ensure!(first_row_ones, "first row is not exactly one");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [1.0, h, h, 0.0];
    ensure!(r.row_means.len() == expected.len(), "{} rows", r.row_means.len());
    for (i, (&(re, im), want)) in r.row_means.iter().zip(expected).enumerate() {
        ensure!((re - want).abs() <= 1e-12 && im.abs() <= 1e-12, "row {i} mean {re} + {im}i, expected {want}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let len = rng.gen_range(1..=3);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..d.size())).collect();
        let p = lib(d.project_cuntz_word(&a, &word, 5))?;
        ensure!(p.quadrature_deviation <= 1e-8, "word {:?}: deviation {:e}", word, p.quadrature_deviation);
        worst = worst.max(p.quadrature_deviation);
    }
    Ok(format!("unitarity {:.1e}, row means within 1e-12, 20 words within {worst:.1e}", r.unitarity_deviation))
}

fn representations() -> Check {
    let c = lib(make_integer_base_family(
        3,
        &[vec![0, 3], vec![-1]],
        &[vec![Weight::sqrt_recip(2), Weight::sqrt_recip(2)], vec![Weight::one()]],
    ))?;
    let one = int(1);
    for n in -50..=50 {
        let r = lib(enumerate_representations(&c, n, 6, DEFAULT_ATOM_BUDGET))?;
        ensure!(r.weighted_sum.as_ref() == Some(&one), "n = {n}: sum {:?}", r.weighted_sum);
    }
    Ok("exact weighted sum 1 for all |n| <= 50".into())
}

/// Small one-dimensional candidates: half built to satisfy the two-digit
/// isometry conditions, half unconstrained.
fn random_corpus(rng: &mut ChaCha8Rng, count: usize) -> Vec<FrameCandidate> {
    let mut out = Vec::new();
    while out.len() < count {
        let c = if out.len() % 2 == 0 {
            let a = rng.gen_range(1..=3u32);
            let r = [1i64, 3, 5, -1, -3][rng.gen_range(0..5)];
            let q = [1i64, 3, 5, -1][rng.gen_range(0..4)];
            let beta = rng.gen_range(0..a);
            let big_r = 2i64.pow(a) * r;
            let b = 2i64.pow(beta) * q;
            let step = (r / num_gcd(r, q)).abs();
            let scale = 2i64.pow(a - 1 - beta);
            let mut labels = vec![0];
            for _ in 0..rng.gen_range(1..=3) {
                let l = scale * step * (2 * rng.gen_range(-6i64..=6) + 1);
                if !labels.contains(&l) {
                    labels.push(l);
                }
            }
            let parts: Vec<i64> = (1..labels.len()).map(|_| rng.gen_range(1..=4)).collect();
            let total: i64 = parts.iter().sum();
            let weights = std::iter::once(Weight::one()).chain(parts.iter().map(|&p| Weight::sqrt(rat(p, total))));
            FrameCandidate::new_1d(big_r, &[0, b], &labels, weights.collect())
        } else {
            let r = [2i64, 3, 4, 5, 6, -2, -3, -4][rng.gen_range(0..8)];
            let mut digits = vec![0];
            for d in 1..r.abs() {
                if digits.len() < 3 && rng.gen_bool(0.5) {
                    digits.push(d);
                }
            }
            let mut labels = vec![0];
            for _ in 0..rng.gen_range(0..=3) {
                let l = rng.gen_range(-20i64..=20);
                if !labels.contains(&l) {
                    labels.push(l);
                }
            }
            let weights = std::iter::once(Weight::one())
                .chain((1..labels.len()).map(|_| Weight::sqrt(rat(rng.gen_range(1..=4), rng.gen_range(1..=4)))));
            FrameCandidate::new_1d(r, &digits, &labels, weights.collect())
        };
        if let Ok(c) = c {
            out.push(c);
        }
    }
    out
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let corpus = random_corpus(&mut rng, 40);
    let mut isometries = 0;
    for c in &corpus {
        let iso = lib(c.check_isometry(1e-10))?.ok;
        let delta = lib(c.check_parseval_on_delta(1e-10))?;
        let transfer = (0..20).all(|_| c.transfer_one_deviation(&[rng.gen_range(-40.0..40.0)]) <= 1e-9);
        ensure!(iso == delta.ok && iso == transfer, "equivalence fails for L = {:?}", c.labels());
        if !iso {
            continue;
        }
        isometries += 1;
        for _ in 0..100 {
            let t = rng.gen_range(-40.0..40.0);
            let sums = lib(bessel_partial_sum(c, &[t], 3, DEFAULT_ATOM_BUDGET))?;
            ensure!(sums.windows(2).all(|w| w[0] <= w[1] + 1e-15), "not monotone at t = {t}: {:?}", sums);
            ensure!(sums.iter().all(|&s| s <= 1.0 + 1e-9), "exceeds 1 at t = {t}: {:?}", sums);
        }
    }
    let mut swept = 0usize;
    for r in (-8i64..=8).filter(|r| r.abs() >= 2) {
        for b in (1i64..=8).filter(|b| b % r != 0) {
            for l1 in (-30i64..=30).filter(|&l| l != 0) {
                let mut sets = vec![(vec![0, l1], vec![Weight::one(), Weight::one()])];
                for l2 in (l1 + 1..=30).filter(|&l| l != 0) {
                    sets.push((vec![0, l1, l2], vec![Weight::one(), Weight::sqrt_recip(2), Weight::sqrt_recip(2)]));
                }
                for (labels, weights) in sets {
                    let c = lib(FrameCandidate::new_1d(r, &[0, b], &labels, weights))?;
                    let family = lib(check_two_digit_family(&c))?.isometry();
                    ensure!(
                        family == lib(c.check_isometry(1e-10))?.ok,
                        "sweep disagrees at R={r} b={b} L={:?}",
                        labels
                    );
                    swept += 1;
                }
            }
        }
    }
    Ok(format!(
        "{} candidates agree ({isometries} isometries, Bessel at 100 points each), {swept} two-digit cases agree",
        corpus.len()
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 admissibility", admissibility, Duration::from_secs(1)),
        ("2 incompleteness", incompleteness, Duration::from_secs(1)),
        ("3 two-cycle", two_cycle, Duration::from_secs(1)),
        ("4 three-digit", three_digit, Duration::from_secs(5)),
        ("5 level-k Parseval", level_k, Duration::from_secs(10)),
        ("6 middle-third", middle_third, Duration::from_secs(1)),
        ("7 dilation", dilation, Duration::from_secs(60)),
        ("8 representations", representations, Duration::from_secs(10)),
        ("9 property suites", property_suites, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let line = match result {
            Ok(msg) if elapsed <= limit => format!("PASS criterion {name}: {msg} ({elapsed:.2?})"),
            Ok(msg) => format!("FAIL criterion {name}: {msg}, but took {elapsed:.2?} > {limit:?}"),
            Err(msg) => format!("FAIL criterion {name}: {msg} ({elapsed:.2?})"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("{line}");
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
