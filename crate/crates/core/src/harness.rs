//! Appendix reproduction, seeded fuzz campaigns and the renderers (table,
//! JSON, CSV) the command-line tool prints.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    full_report_with_tolerance, BoundReport, CheckSelection, CriticalParams, CriticalValue, Winner,
    CHAIN_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::states::{
    derive_seed, from_bloch, random_density_with, rng_from_seed, to_bloch, BlochVector,
    DensityMatrix, MixtureProblem, StateFile,
};

/// Lower bound an appendix example is expected to favour, and over which other.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExpectedOutcome {
    pub stronger: Winner,
    pub weaker: Winner,
}

#[derive(Clone, Copy, Debug)]
pub struct AppendixExample {
    pub id: &'static str,
    pub w1: [f64; 3],
    pub w2: [f64; 3],
    pub x: f64,
    pub expected: ExpectedOutcome,
}

/// The three qubit examples, as printed.
pub const APPENDIX_EXAMPLES: [AppendixExample; 3] = [
    AppendixExample {
        id: "a",
        w1: [0.2876, 0.4322, 0.3112],
        w2: [-0.1552, -0.0532, -0.0874],
        x: 0.7086,
        expected: ExpectedOutcome {
            stronger: Winner::Lowbd1,
            weaker: Winner::Lowbd2,
        },
    },
    AppendixExample {
        id: "b",
        w1: [-0.2136, 0.0702, -0.0944],
        w2: [-0.5204, 0.7790, -0.1772],
        x: 0.2197,
        expected: ExpectedOutcome {
            stronger: Winner::Lowbd2,
            weaker: Winner::Lowbd1,
        },
    },
    AppendixExample {
        id: "c",
        w1: [-0.1850, 0.7506, -0.6388],
        w2: [0.0254, 0.0012, 0.0114],
        x: 0.5218,
        expected: ExpectedOutcome {
            stronger: Winner::Lowbd2,
            weaker: Winner::Lowbd0,
        },
    },
];

impl AppendixExample {
    /// Builds the problem. A listed vector slightly outside the unit ball
    /// is projected onto the sphere; see [`BlochVector::projected`].
    pub fn problem(&self) -> Result<MixtureProblem> {
        let r1 = from_bloch(BlochVector::projected(self.w1)?);
        let r2 = from_bloch(BlochVector::projected(self.w2)?);
        MixtureProblem::new(self.x, r1, r2)
    }
}

fn lower_value(report: &BoundReport, which: Winner) -> Option<f64> {
    match which {
        Winner::Lowbd0 => report.lower.kim.map(|k| k.value()),
        Winner::Lowbd1 => Some(report.lower.pinsker),
        Winner::Lowbd2 => Some(report.lower.carlen_lieb),
        Winner::Tie => None,
    }
}

/// Margin above which an appendix claim counts as reproduced.
pub const APPENDIX_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, Serialize)]
pub struct AppendixRow {
    pub id: &'static str,
    pub x: f64,
    /// As listed.
    pub w1: [f64; 3],
    pub w2: [f64; 3],
    /// Norms of the listed vectors; values above one were projected.
    pub w1_norm: f64,
    pub w2_norm: f64,
    pub projected: bool,
    pub gap: f64,
    pub report: BoundReport,
    /// lowbd1 against lowbd2.
    pub winner: Winner,
    /// Strongest of lowbd0, lowbd1, lowbd2.
    pub strongest: Winner,
    pub expected: ExpectedOutcome,
    /// `stronger − weaker`.
    pub margin: f64,
    pub reproduced: bool,
}

pub fn evaluate_appendix_example(example: &AppendixExample, tolerance: f64) -> Result<AppendixRow> {
    let p = example.problem()?;
    let report = full_report_with_tolerance(&p, tolerance);
    let stronger = lower_value(&report, example.expected.stronger);
    let weaker = lower_value(&report, example.expected.weaker);
    let margin = match (stronger, weaker) {
        (Some(s), Some(w)) => s - w,
        _ => f64::NAN,
    };
    let w1_norm = BlochVector(example.w1).norm();
    let w2_norm = BlochVector(example.w2).norm();
    Ok(AppendixRow {
        id: example.id,
        x: example.x,
        w1: example.w1,
        w2: example.w2,
        w1_norm,
        w2_norm,
        projected: w1_norm > 1.0 || w2_norm > 1.0,
        gap: report.gap,
        winner: report.comparison.winner,
        strongest: report.comparison.strongest,
        expected: example.expected,
        margin,
        reproduced: margin > APPENDIX_MARGIN,
        report,
    })
}

pub fn evaluate_appendix(tolerance: f64) -> Result<Vec<AppendixRow>> {
    APPENDIX_EXAMPLES
        .iter()
        .map(|e| evaluate_appendix_example(e, tolerance))
        .collect()
}

/// Which ranks the fuzzer samples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankSpec {
    Full,
    List(Vec<usize>),
}

impl RankSpec {
    fn ranks_for(&self, dim: usize) -> Vec<usize> {
        match self {
            RankSpec::Full => vec![dim],
            RankSpec::List(r) => r.iter().copied().filter(|&k| k >= 1 && k <= dim).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzConfig {
    pub dims: Vec<usize>,
    pub ranks: RankSpec,
    /// Trials per (dim, rank) pair.
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// `x` is uniform on `(margin, 1 − margin)`.
    pub x_margin: f64,
    /// Checks whose failure counts as a violation.
    pub checks: CheckSelection,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_X_MARGIN: f64 = 1e-3;

impl FuzzConfig {
    pub fn new(dims: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            dims,
            ranks: RankSpec::Full,
            trials,
            seed,
            tolerance: CHAIN_TOLERANCE,
            x_margin: DEFAULT_X_MARGIN,
            checks: CheckSelection::All,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.iter().any(|&d| d < 2) {
            return Err(Error::Domain("fuzz dimensions must be at least 2".into()));
        }
        if let RankSpec::List(r) = &self.ranks {
            if r.is_empty() || r.contains(&0) {
                return Err(Error::Domain("ranks must be positive".into()));
            }
        }
        if !(self.tolerance >= 0.0) || !self.tolerance.is_finite() {
            return Err(Error::Domain("tolerance must be finite and nonnegative".into()));
        }
        if !(self.x_margin > 0.0 && self.x_margin < 0.5) {
            return Err(Error::Domain("x margin must lie in (0, 1/2)".into()));
        }
        Ok(())
    }
}

/// One sampled problem, reproducible from `seed` alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrialSpec {
    pub id: u64,
    pub dim: usize,
    pub rank: usize,
    pub seed: u64,
}

impl TrialSpec {
    /// Draws `x`, then `ρ1`, then `ρ2` from a single stream seeded by `seed`.
    pub fn problem(&self, x_margin: f64) -> MixtureProblem {
        let mut rng = rng_from_seed(self.seed);
        let u: f64 = rng.random();
        let x = x_margin + (1.0 - 2.0 * x_margin) * u;
        let rho1 = random_density_with(&mut rng, self.dim, self.rank);
        let rho2 = random_density_with(&mut rng, self.dim, self.rank);
        MixtureProblem::new(x, rho1, rho2).expect("sampled problem is valid")
    }
}

/// Enumerates trials in id order: dims outermost, then ranks, then trial index.
pub fn trial_specs(cfg: &FuzzConfig) -> Vec<TrialSpec> {
    let mut out = Vec::new();
    let mut id = 0u64;
    for &dim in &cfg.dims {
        for rank in cfg.ranks.ranks_for(dim) {
            for _ in 0..cfg.trials {
                out.push(TrialSpec {
                    id,
                    dim,
                    rank,
                    seed: derive_seed(cfg.seed, id),
                });
                id += 1;
            }
        }
    }
    out
}

/// Qubits are recorded by Bloch vector, larger states by their matrix.
pub fn fingerprint(rho: &DensityMatrix) -> StateFile {
    match to_bloch(rho) {
        Ok(w) => StateFile {
            bloch: Some(w.components()),
            matrix: None,
        },
        Err(_) => StateFile::from_density(rho),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ViolationRecord {
    pub check: &'static str,
    pub trial: u64,
    pub seed: u64,
    pub dim: usize,
    pub rank: usize,
    pub x: f64,
    pub rho1: StateFile,
    pub rho2: StateFile,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
}

/// Fixed-column row of the per-trial CSV.
#[derive(Clone, Debug, Serialize)]
pub struct TrialRow {
    pub id: String,
    pub dim: usize,
    pub x: f64,
    pub gap: f64,
    pub lowbd0: Option<f64>,
    pub lowbd1: f64,
    pub lowbd2: f64,
    pub block_pinsker: f64,
    pub upbd: f64,
    pub rfz_bures: f64,
    pub rfz_trace: f64,
    pub audenaert: f64,
    pub winner: Winner,
    pub max_abs_slack: f64,
}

pub const CSV_HEADER: &str =
    "id,dim,x,gap,lowbd0,lowbd1,lowbd2,block_pinsker,upbd,rfz_bures,rfz_trace,audenaert,winner,max_abs_slack";

impl TrialRow {
    pub fn from_report(id: impl Into<String>, report: &BoundReport) -> Self {
        TrialRow {
            id: id.into(),
            dim: report.dim,
            x: report.x,
            gap: report.gap,
            lowbd0: report.lower.kim.map(|k| k.value()),
            lowbd1: report.lower.pinsker,
            lowbd2: report.lower.carlen_lieb,
            block_pinsker: report.lower.block_pinsker,
            upbd: report.upper.binary_entropy,
            rfz_bures: report.upper.rfz_bures,
            rfz_trace: report.upper.rfz_trace,
            audenaert: report.upper.audenaert,
            winner: report.comparison.winner,
            max_abs_slack: report.max_abs_slack(),
        }
    }

    pub fn to_csv(&self) -> String {
        let lowbd0 = self.lowbd0.map(fmt_num).unwrap_or_else(|| "NA".into());
        [
            self.id.clone(),
            self.dim.to_string(),
            fmt_num(self.x),
            fmt_num(self.gap),
            lowbd0,
            fmt_num(self.lowbd1),
            fmt_num(self.lowbd2),
            fmt_num(self.block_pinsker),
            fmt_num(self.upbd),
            fmt_num(self.rfz_bures),
            fmt_num(self.rfz_trace),
            fmt_num(self.audenaert),
            self.winner.as_str().to_string(),
            fmt_num(self.max_abs_slack),
        ]
        .join(",")
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DimTally {
    pub dim: usize,
    pub trials: usize,
    pub chain_ok: usize,
    pub violations: usize,
    pub violations_by_check: BTreeMap<&'static str, usize>,
    /// Trials where Kim's bound was not evaluated (x near ½).
    pub kim_not_applicable: usize,
    /// lowbd1 against lowbd2.
    pub winner: BTreeMap<&'static str, usize>,
    /// Strongest of the three lower bounds.
    pub strongest: BTreeMap<&'static str, usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub total_trials: usize,
    pub tallies: Vec<DimTally>,
    pub violations: Vec<ViolationRecord>,
    #[serde(skip)]
    pub rows: Vec<TrialRow>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct TrialOutcome {
    spec: TrialSpec,
    report: BoundReport,
    violations: Vec<ViolationRecord>,
}

fn run_trial(spec: TrialSpec, cfg: &FuzzConfig) -> TrialOutcome {
    let p = spec.problem(cfg.x_margin);
    let report = full_report_with_tolerance(&p, cfg.tolerance);
    let violations = report
        .failures_in(cfg.checks)
        .map(|c| ViolationRecord {
            check: c.name,
            trial: spec.id,
            seed: spec.seed,
            dim: spec.dim,
            rank: spec.rank,
            x: p.x(),
            rho1: fingerprint(p.rho1()),
            rho2: fingerprint(p.rho2()),
            lhs: c.lhs,
            rhs: c.rhs,
            slack: c.slack,
            tolerance: c.tolerance,
        })
        .collect();
    TrialOutcome {
        spec,
        report,
        violations,
    }
}

/// Runs the campaign. Trials run in parallel; results are aggregated in
/// trial-id order, so the report does not depend on scheduling.
pub fn run_fuzz(cfg: &FuzzConfig) -> Result<FuzzReport> {
    cfg.validate()?;
    let specs = trial_specs(cfg);
    let outcomes: Vec<TrialOutcome> = specs.into_par_iter().map(|s| run_trial(s, cfg)).collect();

    let mut tallies: BTreeMap<usize, DimTally> = BTreeMap::new();
    for &dim in &cfg.dims {
        tallies.entry(dim).or_insert_with(|| DimTally {
            dim,
            ..Default::default()
        });
    }
    let mut violations = Vec::new();
    let mut rows = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let t = tallies.get_mut(&o.spec.dim).expect("dim registered");
        t.trials += 1;
        if o.report.ok_for(cfg.checks) {
            t.chain_ok += 1;
        }
        t.violations += o.violations.len();
        for v in &o.violations {
            *t.violations_by_check.entry(v.check).or_default() += 1;
        }
        if o.report.lower.kim.is_none() {
            t.kim_not_applicable += 1;
        }
        *t.winner.entry(o.report.comparison.winner.as_str()).or_default() += 1;
        *t.strongest.entry(o.report.comparison.strongest.as_str()).or_default() += 1;
        rows.push(TrialRow::from_report(o.spec.id.to_string(), &o.report));
        violations.extend(o.violations);
    }
    Ok(FuzzReport {
        config: cfg.clone(),
        total_trials: rows.len(),
        tallies: tallies.into_values().collect(),
        violations,
        rows,
    })
}

/// 17 significant digits; `inf`/`nan` spelled out.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// JSON formatter that writes every float with 17 significant digits.
struct SigDigitFormatter;

impl serde_json::ser::Formatter for SigDigitFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_num(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats, newline-terminated.
/// Non-finite floats are written as `null`.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigitFormatter);
    value.serialize(&mut ser).expect("report types serialize");
    let mut s = String::from_utf8(buf).expect("JSON is UTF-8");
    s.push('\n');
    s
}

fn opt_num(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_else(|| "not evaluated (x ≈ 1/2)".into())
}

pub fn render_report_table(r: &BoundReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "x = {}   dim = {}", r.x, r.dim);
    let _ = writeln!(s, "gap                 {}", fmt_num(r.gap));
    let _ = writeln!(s, "lower bounds");
    let _ = writeln!(s, "  lowbd0 (kim)      {}", opt_num(r.lower.kim.map(|k| k.value())));
    let _ = writeln!(s, "  lowbd1 (pinsker)  {}", fmt_num(r.lower.pinsker));
    let _ = writeln!(s, "  lowbd2 (carlen-lieb) {}", fmt_num(r.lower.carlen_lieb));
    let _ = writeln!(s, "  block pinsker     {}", fmt_num(r.lower.block_pinsker));
    let _ = writeln!(s, "upper bounds");
    let _ = writeln!(s, "  upbd h(x)         {}", fmt_num(r.upper.binary_entropy));
    let _ = writeln!(s, "  rfz bures         {}", fmt_num(r.upper.rfz_bures));
    let _ = writeln!(s, "  rfz trace         {}", fmt_num(r.upper.rfz_trace));
    let _ = writeln!(s, "  audenaert         {}", fmt_num(r.upper.audenaert));
    let _ = writeln!(
        s,
        "winner (lowbd1 vs lowbd2): {}   strongest: {}",
        r.comparison.winner.as_str(),
        r.comparison.strongest.as_str()
    );
    if let Some(w) = r.comparison.carlen_lieb_vs_kim {
        let _ = writeln!(s, "lowbd2 vs lowbd0: {}", w.as_str());
    }
    let _ = writeln!(s, "checks");
    for c in &r.checks {
        let _ = writeln!(
            s,
            "  [{}] {:<28} slack {}",
            if c.ok { " ok " } else { "FAIL" },
            c.name,
            fmt_num(c.slack)
        );
    }
    let _ = writeln!(s, "chain {}", if r.chain_ok { "ok" } else { "VIOLATED" });
    s
}

pub fn render_appendix_table(rows: &[AppendixRow]) -> String {
    let mut s = String::new();
    for row in rows {
        let _ = writeln!(
            s,
            "({}) x = {}  w1 = {:?}  w2 = {:?}{}",
            row.id,
            row.x,
            row.w1,
            row.w2,
            if row.projected { "  [w projected onto unit sphere]" } else { "" }
        );
        let r = &row.report;
        let _ = writeln!(
            s,
            "    gap {}  lowbd0 {}  lowbd1 {}  lowbd2 {}",
            fmt_num(r.gap),
            opt_num(r.lower.kim.map(|k| k.value())),
            fmt_num(r.lower.pinsker),
            fmt_num(r.lower.carlen_lieb)
        );
        let _ = writeln!(
            s,
            "    claim {} > {}: margin {}  {}",
            row.expected.stronger.as_str(),
            row.expected.weaker.as_str(),
            fmt_num(row.margin),
            if row.reproduced { "reproduced" } else { "NOT REPRODUCED" }
        );
    }
    s
}

pub fn render_appendix_csv(rows: &[AppendixRow]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in rows {
        s.push_str(&TrialRow::from_report(row.id, &row.report).to_csv());
        s.push('\n');
    }
    s
}

pub fn render_fuzz_table(r: &FuzzReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "fuzz: {} trials, seed {}, tolerance {:e}, checks {}",
        r.total_trials,
        r.config.seed,
        r.config.tolerance,
        r.config.checks.as_str()
    );
    for t in &r.tallies {
        let join = |m: &BTreeMap<&str, usize>| {
            m.iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(
            s,
            "  dim {:>2}: {:>6} trials, {:>6} chain ok, {} violations, kim n/a {}; winner {}; strongest {}",
            t.dim,
            t.trials,
            t.chain_ok,
            t.violations,
            t.kim_not_applicable,
            join(&t.winner),
            join(&t.strongest)
        );
        if !t.violations_by_check.is_empty() {
            let _ = writeln!(s, "          violated: {}", join(&t.violations_by_check));
        }
    }
    for v in r.violations.iter().take(VIOLATIONS_LISTED) {
        let _ = writeln!(
            s,
            "  VIOLATION {} trial {} seed {} dim {} x {}: slack {}",
            v.check,
            v.trial,
            v.seed,
            v.dim,
            v.x,
            fmt_num(v.slack)
        );
    }
    if r.violations.len() > VIOLATIONS_LISTED {
        let _ = writeln!(s, "  ... {} more", r.violations.len() - VIOLATIONS_LISTED);
    }
    let _ = writeln!(s, "{}", if r.passed() { "no violations" } else { "VIOLATIONS FOUND" });
    s
}

/// The table lists this many violations; JSON output carries all of them.
const VIOLATIONS_LISTED: usize = 20;

pub fn render_fuzz_csv(r: &FuzzReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for row in &r.rows {
        s.push_str(&row.to_csv());
        s.push('\n');
    }
    s
}

fn describe(v: &CriticalValue) -> String {
    match *v {
        CriticalValue::Endpoint { value } => format!("{value} (holds at the endpoint)"),
        CriticalValue::Bracket { satisfied, violated } => format!(
            "bracket [{}, {}] (holds at {}, fails at {}; width {:e})",
            violated.min(satisfied),
            violated.max(satisfied),
            satisfied,
            violated,
            (satisfied - violated).abs()
        ),
        CriticalValue::HoldsForAllTested { up_to } => format!("holds for all tested a ≤ {up_to}"),
        CriticalValue::NoneInRange => "none in range".into(),
    }
}

pub fn render_critical_table(c: &CriticalParams) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "b_c: {}", describe(&c.b_c));
    let _ = writeln!(s, "a validity (sandwiched mixture <= audenaert): {}", describe(&c.a_star));
    let _ = writeln!(s, "reference bounds: lowbd1 {}  audenaert {}", fmt_num(c.pinsker), fmt_num(c.audenaert));
    let _ = writeln!(s, "standard Renyi mixture vs lowbd1");
    for g in &c.b_grid {
        let _ = writeln!(s, "  b = {:<8} {}  {}", g.order, fmt_num(g.mixture), if g.satisfied { ">=" } else { "<" });
    }
    let _ = writeln!(s, "sandwiched Renyi mixture vs audenaert");
    for g in &c.a_grid {
        let _ = writeln!(s, "  a = {:<8} {}  {}", g.order, fmt_num(g.mixture), if g.satisfied { "<=" } else { ">" });
    }
    let _ = writeln!(s, "bisection tolerance {:e}, a_max {}", c.tolerance, c.a_max);
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appendix_claims_reproduce() {
        let rows = evaluate_appendix(CHAIN_TOLERANCE).unwrap();
        assert_eq!(rows.len(), 3);
        for row in &rows {
            assert!(row.reproduced, "({}) margin {}", row.id, row.margin);
            assert!(row.report.chain_ok);
        }
        assert_eq!(rows[0].winner, Winner::Lowbd1);
        assert_eq!(rows[1].winner, Winner::Lowbd2);
        assert!(!rows[0].projected && !rows[1].projected && rows[2].projected);
    }

    #[test]
    fn trial_specs_are_ordered_and_seeded() {
        let mut cfg = FuzzConfig::new(vec![2, 3], 3, 9);
        cfg.ranks = RankSpec::List(vec![1, 3]);
        let specs = trial_specs(&cfg);
        // dim 2 only admits rank 1
        assert_eq!(specs.len(), 3 + 6);
        assert!(specs.iter().enumerate().all(|(i, s)| s.id == i as u64));
        assert_eq!(specs[0].seed, derive_seed(9, 0));
        assert_eq!((specs[3].dim, specs[3].rank), (3, 1));
        assert_eq!((specs[6].dim, specs[6].rank), (3, 3));
    }

    #[test]
    fn trial_problem_is_reproducible() {
        let spec = TrialSpec { id: 0, dim: 3, rank: 3, seed: 77 };
        let a = spec.problem(1e-3);
        let b = spec.problem(1e-3);
        assert_eq!(a.x(), b.x());
        assert_eq!(a.rho1().matrix(), b.rho1().matrix());
        assert!(a.x() > 1e-3 && a.x() < 1.0 - 1e-3);
    }

    #[test]
    fn empty_campaign() {
        let r = run_fuzz(&FuzzConfig::new(vec![2], 0, 1)).unwrap();
        assert_eq!(r.total_trials, 0);
        assert!(r.passed());
        assert_eq!(render_fuzz_csv(&r), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn config_validation() {
        assert!(run_fuzz(&FuzzConfig::new(vec![1], 1, 1)).is_err());
        let mut cfg = FuzzConfig::new(vec![2], 1, 1);
        cfg.ranks = RankSpec::List(vec![0]);
        assert!(run_fuzz(&cfg).is_err());
        let mut cfg = FuzzConfig::new(vec![2], 1, 1);
        cfg.tolerance = f64::NAN;
        assert!(run_fuzz(&cfg).is_err());
    }

    #[test]
    fn zero_tolerance_produces_records() {
        // Identities need |diff| < tolerance, so a zero tolerance flags all of them.
        let mut cfg = FuzzConfig::new(vec![2], 2, 5);
        cfg.tolerance = 0.0;
        let rep = run_fuzz(&cfg).unwrap();
        assert!(!rep.passed());
        for v in &rep.violations {
            assert!(v.slack <= 0.0);
            assert!(v.rho1.bloch.is_some() && v.rho2.bloch.is_some());
            assert_eq!(v.seed, derive_seed(5, v.trial));
        }
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(std::f64::consts::LN_2).parse::<f64>().unwrap(), std::f64::consts::LN_2);
        assert_eq!(to_json(&[0.5, 1.0]), "[5.0000000000000000e-1,1.0000000000000000e0]\n");
    }
}
