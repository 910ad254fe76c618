//! `fracframes`: validation, completeness verdicts, finite-level
//! verification and dilation checks for weighted Fourier frame candidates.
//!
//! Exit codes: 0 success, 1 check failed or candidate invalid, 2 parse or
//! usage error, 3 unsupported input, 4 resource limit exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fracframes::algebra::rational::parse_rational;
use fracframes::dilation::DEFAULT_QUADRATURE_LEVEL;
use fracframes::dynamics::TransitionGraph;
use fracframes::families::{check_three_digit_family, check_two_digit_family};
use fracframes::report;
use fracframes::verify::FrequencyAtom;
use fracframes::{
    bessel_partial_sum, enumerate_representations, extreme_cycles, frequency_words, level_k_parseval,
    orthogonality_witness, parse_candidate, th2_verdict, DilationSystem, Error, FrameCandidate, RatVec,
    DEFAULT_ATOM_BUDGET,
};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

/// Points where Bessel partial sums are sampled unless `--t` is given.
const DEFAULT_BESSEL_POINTS: [f64; 5] = [0.5, 1.0 / 3.0, -1.25, 7.1, -13.7];

/// Tolerance for quadrature of projected Cuntz words.
const QUADRATURE_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "fracframes", version, about = "Weighted Fourier frames on self-affine measures")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunConfig {
    /// Tolerance for matrix identities (max norm).
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Highest level checked by `verify`; level printed by `atoms`.
    #[arg(long = "level-k", global = true, default_value_t = 3)]
    level_k: usize,
    /// Longest frequency word considered.
    #[arg(long = "max-word-len", global = true, default_value_t = 4)]
    max_word_len: usize,
    /// Mask-zero search depth for orthogonality certificates.
    #[arg(long = "zero-depth", global = true, default_value_t = 8)]
    zero_depth: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Orthogonality witness, e.g. `-1` or `1/2,0`; overrides the file's.
    #[arg(long, global = true, allow_hyphen_values = true)]
    witness: Option<String>,
    /// Maximum number of atoms or words materialised at once.
    #[arg(long = "atom-budget", env = "FRACFRAMES_ATOM_BUDGET", global = true, default_value_t = DEFAULT_ATOM_BUDGET)]
    atom_budget: u128,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Isometry test and the necessary conditions on (R, B, L, α).
    Validate { candidate: PathBuf },
    /// Parseval or Incomplete, from the minimal invariant sets (d = 1).
    Verdict { candidate: PathBuf },
    /// Finite-level Parseval checks, Bessel sums and witness certificates.
    Verify {
        candidate: PathBuf,
        /// Bessel sample points.
        #[arg(long = "t", allow_hyphen_values = true, value_delimiter = ',')]
        t: Vec<f64>,
    },
    /// Unitary dilation: a-matrix identities and projected Cuntz words.
    Dilate {
        candidate: PathBuf,
        /// Size N′ of the auxiliary digit set.
        #[arg(long = "aux-n")]
        aux_n: Option<usize>,
        /// Number of random words checked against quadrature.
        #[arg(long = "spot-words", default_value_t = 20)]
        spot_words: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Representations n = l_0 + R l_1 + … by label words (d = 1).
    Representations {
        candidate: PathBuf,
        #[arg(allow_hyphen_values = true)]
        n: i64,
    },
    /// Frequency words up to --max-word-len.
    Words { candidate: PathBuf },
    /// Atoms of the level-k measure.
    Atoms { candidate: PathBuf },
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// A report and whether the requested check passed.
struct Outcome {
    ok: bool,
    json: Value,
    csv: Option<(Vec<&'static str>, Vec<Vec<String>>)>,
    dot: Option<String>,
}

impl Outcome {
    fn json(ok: bool, json: Value) -> Self {
        Outcome { ok, json, csv: None, dot: None }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::Unsupported(_) => 3,
        Error::Resource { .. } | Error::Overflow(_) => 4,
        _ => 1,
    }
}

fn load(path: &Path) -> Result<(FrameCandidate, Option<RatVec>), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let file = parse_candidate(&text)?;
    Ok((file.candidate, file.witness))
}

fn parse_witness(text: &str) -> Result<RatVec, Error> {
    text.split(',').map(parse_rational).collect()
}

fn validate(c: &FrameCandidate, tol: f64) -> Result<Outcome, Failure> {
    let iso = c.check_isometry(tol)?;
    let delta = c.check_parseval_on_delta(tol)?;
    let sums = c.exponential_sum_condition()?;
    let cong = c.congruence_report();
    let separation = match c.residue_separation() {
        Ok(b) => Some(b),
        Err(Error::Unsupported(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let family = match c.system().n_digits() {
        2 if c.system().dim() == 1 => Some(report::family("two_digit", &check_two_digit_family(c)?)),
        3 if c.system().dim() == 1 => Some(report::family("three_digit", &check_three_digit_family(c)?)),
        _ => None,
    };
    let mut reasons = Vec::new();
    if sums.universally_infeasible {
        reasons.push(report::reason(
            "exponential_sum_infeasible",
            "no non-zero label can make the digit exponential sum vanish",
        ));
    } else if !sums.feasible {
        let bad: Vec<String> =
            sums.per_label.iter().filter(|v| !v.passes).map(|v| report::vector_text(&v.label)).collect();
        reasons.push(report::reason("exponential_sum_violated", format!("labels {}", bad.join(", "))));
    }
    if !cong.n_le_card {
        reasons.push(report::reason("too_few_congruence_classes", "fewer congruence classes than digits"));
    }
    if cong.class_sums.iter().any(|s| !s.at_most_one) {
        reasons.push(report::reason("congruence_class_overweight", "a congruence class has weight above 1"));
    }
    if !iso.ok {
        reasons.push(report::reason("not_isometry", format!("‖T*T − I‖ = {:.3e}", iso.max_deviation)));
    }
    let json = json!({
        "command": "validate",
        "ok": iso.ok,
        "isometry": { "ok": iso.ok, "max_deviation": iso.max_deviation },
        "parseval_on_delta": { "ok": delta.ok, "max_deviation": delta.max_deviation, "exact": delta.exact },
        "exponential_sum": report::exponential_sum(&sums),
        "congruence": report::congruence(&cong),
        "residue_separation": separation,
        "family": family,
        "reasons": reasons,
    });
    Ok(Outcome::json(iso.ok, json))
}

fn verdict(c: &FrameCandidate) -> Result<Outcome, Failure> {
    let v = th2_verdict(c)?;
    let labels: Vec<i64> = c.active().map(|i| c.labels()[i][0]).collect();
    let cycles = extreme_cycles(c.system(), &labels)?;
    let mut json = report::verdict(&v, &cycles);
    json["command"] = json!("verdict");
    let graph = TransitionGraph::build(c)?;
    json["graph"] = graph.to_json();
    Ok(Outcome { ok: true, json, csv: None, dot: Some(graph.to_dot()) })
}

fn verify(c: &FrameCandidate, witness: Option<&RatVec>, cfg: &RunConfig, t: &[f64]) -> Result<Outcome, Failure> {
    if cfg.level_k == 0 {
        return Err(Error::InvalidArgument("--level-k must be at least 1".into()).into());
    }
    let iso = c.check_isometry(cfg.tol)?;
    let mut levels = Vec::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for k in 1..=cfg.level_k {
        let r = level_k_parseval(c, k, cfg.atom_budget)?;
        ok &= r.deviation <= cfg.tol && r.exact != Some(false);
        rows.push(vec![k.to_string(), format!("{:e}", r.deviation)]);
        levels.push(report::level(&r));
    }
    let points: &[f64] = if t.is_empty() { &DEFAULT_BESSEL_POINTS } else { t };
    let mut bessel = Vec::new();
    if c.system().dim() == 1 {
        for &x in points {
            let sums = bessel_partial_sum(c, &[x], cfg.max_word_len, cfg.atom_budget)?;
            let monotone = sums.windows(2).all(|w| w[0] <= w[1] + 1e-15);
            let bounded = sums.iter().all(|&s| s <= 1.0 + 1e-9);
            if iso.ok {
                ok &= monotone && bounded;
            }
            bessel.push(json!({ "t": x, "partial_sums": sums, "monotone": monotone, "bounded": bounded }));
        }
    }
    let witness_json = match witness {
        Some(w) => {
            let confirmed = orthogonality_witness(c, w, cfg.max_word_len, cfg.zero_depth, cfg.atom_budget)?;
            json!({ "point": report::points(w), "max_len": cfg.max_word_len, "depth": cfg.zero_depth, "confirmed": confirmed })
        }
        None => Value::Null,
    };
    let json = json!({
        "command": "verify",
        "ok": ok,
        "isometry": { "ok": iso.ok, "max_deviation": iso.max_deviation },
        "levels": levels,
        "bessel": bessel,
        "witness": witness_json,
    });
    Ok(Outcome { ok, json, csv: Some((vec!["k", "deviation"], rows)), dot: None })
}

fn dilate(
    c: &FrameCandidate,
    cfg: &RunConfig,
    aux_n: Option<usize>,
    spot_words: usize,
    seed: u64,
) -> Result<Outcome, Failure> {
    let d = DilationSystem::build(c, aux_n)?;
    let a = d.build_a_matrix()?;
    let r = d.report(&a);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut projections = Vec::new();
    let mut ok = r.first_row_is_one && r.unitarity_deviation <= cfg.tol && r.row_mean_deviation <= cfg.tol;
    for _ in 0..spot_words {
        let len = rng.gen_range(1..=3);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..d.size())).collect();
        let p = d.project_cuntz_word(&a, &word, DEFAULT_QUADRATURE_LEVEL)?;
        ok &= p.quadrature_deviation <= QUADRATURE_TOL;
        projections.push(report::projection(&word, &p));
    }
    let json = json!({
        "command": "dilate",
        "ok": ok,
        "report": report::dilation(&r),
        "a_matrix": a.to_json(),
        "padded_labels": d.padded_labels(),
        "projections": projections,
    });
    Ok(Outcome::json(ok, json))
}

fn representations(c: &FrameCandidate, n: i64, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let r = enumerate_representations(c, n, cfg.max_word_len, cfg.atom_budget)?;
    let rows = r
        .words
        .iter()
        .map(|w| {
            let exact = w.exact.as_ref().map(fracframes::algebra::rational::fmt_short);
            vec![
                w.word.iter().map(i64::to_string).collect::<Vec<_>>().join(" "),
                exact.unwrap_or_else(|| w.weight_norm_sq.to_string()),
            ]
        })
        .collect();
    let mut json = report::representations(&r);
    json["command"] = json!("representations");
    Ok(Outcome { ok: true, json, csv: Some((vec!["word", "weight_norm_sq"], rows)), dot: None })
}

fn words(c: &FrameCandidate, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let atoms = frequency_words(c, cfg.max_word_len, cfg.atom_budget)?;
    let rows = atoms
        .iter()
        .map(|a: &FrequencyAtom| {
            vec![
                report::word_text(&a.word),
                report::vector_text(&a.frequency),
                a.weight.re.to_string(),
                a.weight.im.to_string(),
            ]
        })
        .collect();
    let json = json!({
        "command": "words",
        "max_len": cfg.max_word_len,
        "words": atoms.iter().map(report::frequency_atom).collect::<Vec<_>>(),
    });
    Ok(Outcome { ok: true, json, csv: Some((vec!["word", "frequency", "weight_re", "weight_im"], rows)), dot: None })
}

fn atoms(c: &FrameCandidate, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let m = c.system().level_measure(cfg.level_k, cfg.atom_budget)?;
    let dim = c.system().dim();
    let mut header: Vec<&'static str> =
        ["x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7"].into_iter().take(dim).collect();
    if header.len() < dim {
        return Err(Error::Unsupported("CSV atom export supports d ≤ 8".into()).into());
    }
    header.push("mass");
    let rows = m
        .atoms()
        .iter()
        .map(|a| {
            let mut row: Vec<String> = a.point.iter().map(fracframes::algebra::rational::fmt_ratio).collect();
            row.push(fracframes::algebra::rational::fmt_ratio(&a.mass));
            row
        })
        .collect();
    let json = json!({
        "command": "atoms",
        "level": cfg.level_k,
        "atoms": m.atoms().iter().map(|a| json!({
            "point": report::points(&a.point),
            "mass": report::rational(&a.mass),
        })).collect::<Vec<_>>(),
    });
    Ok(Outcome { ok: true, json, csv: Some((header, rows)), dot: None })
}

fn render(outcome: &Outcome, format: Format) -> Result<String, Failure> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(&outcome.json).expect("JSON values serialise") + "\n"),
        Format::Dot => outcome
            .dot
            .clone()
            .ok_or_else(|| Failure::Lib(Error::Parse("DOT output is only available for `verdict`".into()))),
        Format::Csv => {
            let (header, rows) = outcome
                .csv
                .as_ref()
                .ok_or_else(|| Failure::Lib(Error::Parse("CSV output is not available for this command".into())))?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).map_err(|e| Failure::Io(e.to_string()))?;
            for row in rows {
                w.write_record(row).map_err(|e| Failure::Io(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let cfg = &cli.config;
    let path = match &cli.command {
        Command::Validate { candidate }
        | Command::Verdict { candidate }
        | Command::Verify { candidate, .. }
        | Command::Dilate { candidate, .. }
        | Command::Representations { candidate, .. }
        | Command::Words { candidate }
        | Command::Atoms { candidate } => candidate,
    };
    let (c, file_witness) = load(path)?;
    let witness = match &cfg.witness {
        Some(text) => Some(parse_witness(text)?),
        None => file_witness,
    };
    let outcome = match &cli.command {
        Command::Validate { .. } => validate(&c, cfg.tol)?,
        Command::Verdict { .. } => verdict(&c)?,
        Command::Verify { t, .. } => verify(&c, witness.as_ref(), cfg, t)?,
        Command::Dilate { aux_n, spot_words, seed, .. } => dilate(&c, cfg, *aux_n, *spot_words, *seed)?,
        Command::Representations { n, .. } => representations(&c, *n, cfg)?,
        Command::Words { .. } => words(&c, cfg)?,
        Command::Atoms { .. } => atoms(&c, cfg)?,
    };
    emit(&render(&outcome, cfg.format)?, cfg.out.as_deref())?;
    Ok(outcome.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            let code = exit_code(&e);
            eprintln!("error: {e}");
            if code == 1 {
                let json = json!({ "ok": false, "reasons": [report::reason(report::error_code(&e), e.to_string())] });
                let text = serde_json::to_string_pretty(&json).expect("JSON values serialise") + "\n";
                if emit(&text, cli.config.out.as_deref()).is_err() {
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(code)
        }
    }
}
