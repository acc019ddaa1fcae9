//! Command-line front end: `analyze`, `spectrum`, `iterate`, `catalog`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criteria::{
    compactness_criterion, continuity_criterion, ratio_limsup_test, s1_estimate, t0_estimate, uw_quantity, Bracket,
    BracketKind, CriterionReport, VerdictKind, EXPONENT_TOLERANCE,
};
use crate::ergodic::{
    cesaro_averages_trace, default_probes, iterate_trace, kernel_norm_trace, trace_exact, ErgodicError, IterateTrace,
    Probe, TraceKind,
};
use crate::spectral::{point_spectrum, region_scan, scan_csv, Grid, PointSpectrumEntry, Rule, SpectralContext};
use crate::weights::{catalog_listing, load_custom_table, parse_weight, FamilyInfo, WeightError, WeightSpec};

pub const SCHEMA_VERSION: u32 = 1;
pub const BUDGET_ENV: &str = "CESARO_BUDGET";
pub const DEFAULT_GRID: &str = "-0.2,1.2,-0.7,0.7,200,200";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("consistency diagnostic: {0}")]
    Consistency(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Weight(_) | CliError::Argument(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Consistency(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ErgodicError> for CliError {
    fn from(e: ErgodicError) -> Self {
        match e {
            ErgodicError::Budget { .. } => CliError::Budget(e.to_string()),
            ErgodicError::Range(m) => CliError::Argument(m),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Float,
    Rational,
}

#[derive(Debug, Parser)]
#[command(name = "cesaro", version, about = "Certified numerics for the Cesàro operator on weighted l1 spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Criterion verdicts, exponent brackets and point spectrum as one JSON report.
    Analyze {
        #[arg(short, long)]
        weight: String,
        #[arg(long, default_value_t = 1_000_000)]
        horizon: u64,
        /// Largest m for the point spectrum table.
        #[arg(long, default_value_t = 20)]
        m_max: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a grid of complex points; writes `<out>.csv` and `<out>.json`.
    Spectrum {
        #[arg(short, long)]
        weight: String,
        /// `re0,re1,im0,im1,nx,ny`.
        #[arg(long, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
        grid: String,
        /// Horizon for the per-point resolvent condition.
        #[arg(long = "N", default_value_t = 2000)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace `||C^m x||` (or Cesàro means) with residuals to the limit candidate as CSV.
    Iterate {
        #[arg(short, long)]
        weight: String,
        /// `e<r>`, `ones` or `random`.
        #[arg(long, default_value = "e1")]
        probe: String,
        #[arg(long = "N", default_value_t = 2000)]
        n: usize,
        #[arg(long = "M", default_value_t = 2000)]
        m: u32,
        #[arg(long, value_enum, default_value_t = Mode::Float)]
        mode: Mode,
        /// Trace Cesàro means instead of powers.
        #[arg(long)]
        means: bool,
        /// Section-free `||C^m e_1||` from the moment kernel.
        #[arg(long)]
        kernel: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List weight families, parameter ranges and metadata.
    Catalog {
        #[arg(long)]
        family: Option<String>,
    },
}

/// Serialized echo of the invocation, embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub weight: Option<String>,
    pub horizon: Option<u64>,
    pub section: Option<u64>,
    pub steps: Option<u32>,
    pub grid: Option<Grid>,
    pub mode: Option<Mode>,
    pub probe: Option<String>,
    pub seed: Option<u64>,
    pub options: BTreeMap<String, String>,
}

impl RunConfig {
    fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            weight: None,
            horizon: None,
            section: None,
            steps: None,
            grid: None,
            mode: None,
            probe: None,
            seed: None,
            options: BTreeMap::new(),
        }
    }
}

/// What a command produced: text for stdout and files written.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

pub fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|b| *b >= 1.0)
            .map(|b| b as u64)
            .ok_or_else(|| CliError::Argument(format!("{BUDGET_ENV}={v} is not a positive number"))),
        Err(_) => Ok(crate::ergodic::DEFAULT_BUDGET),
    }
}

/// `family[:k=v,...]`, wrappers, or `file:<path>`.
pub fn load_weight(grammar: &str) -> Result<WeightSpec, CliError> {
    match grammar.strip_prefix("file:") {
        Some(path) => Ok(load_custom_table(Path::new(path))?),
        None => Ok(parse_weight(grammar)?),
    }
}

fn check_work(work: u64, budget: u64, what: &str) -> Result<(), CliError> {
    if work > budget {
        return Err(CliError::Budget(format!("{what}: work {work} exceeds {budget} (set {BUDGET_ENV})")));
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyCheck {
    pub name: &'static str,
    pub ok: bool,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeReport {
    pub schema_version: u32,
    pub config: RunConfig,
    pub weight: String,
    pub continuity: CriterionReport,
    pub compactness: CriterionReport,
    pub ratio_test: CriterionReport,
    pub uw: CriterionReport,
    pub t0: Bracket,
    pub s1: Bracket,
    pub point_spectrum: Vec<PointSpectrumEntry>,
    pub consistency: Vec<ConsistencyCheck>,
}

fn consistency_checks(r: &AnalyzeReport) -> Vec<ConsistencyCheck> {
    let mut out = Vec::new();
    let t0_low = (r.t0.lo_kind == VerdictKind::Holds).then_some(r.t0.lo);
    let s1_high = (r.s1.kind == BracketKind::Bracket && r.s1.hi_kind == VerdictKind::Holds).then_some(r.s1.hi);
    let ok = match (t0_low, s1_high) {
        (Some(t), Some(s)) => t <= s,
        _ => true,
    };
    out.push(ConsistencyCheck {
        name: "t0_le_s1",
        ok,
        note: format!("t0 >= {t0_low:?}, s1 <= {s1_high:?}"),
    });
    out.push(ConsistencyCheck {
        name: "compact_implies_continuous",
        ok: !r.compactness.verdict.is_holds() || r.continuity.verdict.is_holds(),
        note: String::new(),
    });
    let first_fail = r.point_spectrum.iter().position(|e| e.verdict.is_fails());
    let last_hold = r.point_spectrum.iter().rposition(|e| e.verdict.is_holds());
    out.push(ConsistencyCheck {
        name: "point_spectrum_monotone",
        ok: match (first_fail, last_hold) {
            (Some(f), Some(h)) => h < f,
            _ => true,
        },
        note: String::new(),
    });
    let l1_fails = r.point_spectrum.first().is_some_and(|e| e.verdict.is_fails());
    out.push(ConsistencyCheck {
        name: "uw_implies_l1",
        ok: !(r.uw.verdict.is_holds() && l1_fails),
        note: String::new(),
    });
    out
}

pub fn cmd_analyze(weight: &str, horizon: u64, m_max: u64, budget: u64) -> Result<AnalyzeReport, CliError> {
    if horizon == 0 || m_max == 0 {
        return Err(CliError::Argument("horizon and m_max must be positive".into()));
    }
    let w = load_weight(weight)?;
    let h = horizon.min(crate::criteria::HORIZON_CAP);
    check_work(h.saturating_mul(m_max + 8), budget, "analyze")?;
    let mut config = RunConfig::new("analyze");
    config.weight = Some(weight.into());
    config.horizon = Some(horizon);
    config.options.insert("m_max".into(), m_max.to_string());
    let mut report = AnalyzeReport {
        schema_version: SCHEMA_VERSION,
        config,
        weight: w.id.clone(),
        continuity: continuity_criterion(&w, &w, horizon),
        compactness: compactness_criterion(&w, &w, horizon),
        ratio_test: ratio_limsup_test(&w, horizon),
        uw: uw_quantity(&w, horizon),
        t0: t0_estimate(&w, EXPONENT_TOLERANCE),
        s1: s1_estimate(&w, EXPONENT_TOLERANCE),
        point_spectrum: point_spectrum(&w, m_max, horizon),
        consistency: Vec::new(),
    };
    report.consistency = consistency_checks(&report);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub schema_version: u32,
    pub config: RunConfig,
    pub context: SpectralContext,
    pub counts: BTreeMap<String, usize>,
    pub conflicts: Vec<(f64, f64, String)>,
}

pub fn cmd_spectrum(weight: &str, grid: &str, n: u64, budget: u64) -> Result<(SpectrumSummary, String), CliError> {
    let w = load_weight(weight)?;
    let g = Grid::parse(grid).map_err(|e| CliError::Argument(e.to_string()))?;
    if n == 0 {
        return Err(CliError::Argument("--N must be positive".into()));
    }
    check_work(g.len().saturating_mul(n), budget, "spectrum")?;
    let ctx = SpectralContext::build(&w, n, 20);
    let rows = region_scan(&ctx, &g).map_err(|e| CliError::Argument(e.to_string()))?;
    let mut counts = BTreeMap::new();
    let mut conflicts = Vec::new();
    for r in &rows {
        *counts.entry(r.label.as_str().to_string()).or_insert(0) += 1;
        if r.rule == Rule::Conflict {
            conflicts.push((r.re, r.im, r.diagnostic.clone().unwrap_or_default()));
        }
    }
    let mut config = RunConfig::new("spectrum");
    config.weight = Some(weight.into());
    config.section = Some(n);
    config.grid = Some(g);
    let summary = SpectrumSummary {
        schema_version: SCHEMA_VERSION,
        config,
        context: ctx,
        counts,
        conflicts,
    };
    Ok((summary, scan_csv(&rows)))
}

pub struct IterateArgs<'a> {
    pub weight: &'a str,
    pub probe: &'a str,
    pub n: usize,
    pub m: u32,
    pub mode: Mode,
    pub means: bool,
    pub kernel: bool,
    pub seed: u64,
}

pub fn cmd_iterate(args: &IterateArgs<'_>, budget: u64) -> Result<String, CliError> {
    let w = load_weight(args.weight)?;
    if args.kernel {
        let k = kernel_norm_trace(&w, args.m)?;
        let mut out = String::from("m,norm,cesaro_norm\n");
        for ((m, v), c) in k.norms.iter().zip(&k.cesaro_norms) {
            out.push_str(&format!("{m},{v:.12e},{c:.12e}\n"));
        }
        return Ok(out);
    }
    let probe = if args.probe == "random" {
        default_probes(&w, 1, args.seed).pop().expect("one random probe")
    } else {
        Probe::parse(args.probe).ok_or_else(|| CliError::Argument(format!("unknown probe `{}`", args.probe)))?
    };
    let kind = if args.means {
        TraceKind::CesaroMeans
    } else {
        TraceKind::Powers
    };
    let trace: IterateTrace = match (args.mode, kind) {
        (Mode::Rational, k) => trace_exact(&w, &probe, args.m, args.n, budget, k)?,
        (Mode::Float, TraceKind::Powers) => iterate_trace(&w, &probe, args.m, args.n, budget)?,
        (Mode::Float, TraceKind::CesaroMeans) => cesaro_averages_trace(&w, &probe, args.m, args.n, budget)?,
    };
    Ok(trace.csv())
}

pub fn cmd_catalog(family: Option<&str>) -> Result<Vec<FamilyInfo>, CliError> {
    Ok(catalog_listing(family)?)
}

fn catalog_text(list: &[FamilyInfo]) -> String {
    let mut out = String::new();
    for f in list {
        let params: Vec<String> = f.params.iter().map(|(k, r)| format!("{k} in {r}")).collect();
        out.push_str(&format!("{}\n  formula: {}\n", f.name, f.formula));
        if !params.is_empty() {
            out.push_str(&format!("  params: {}\n", params.join(", ")));
        }
        out.push_str(&format!("  metadata: {}\n", f.metadata));
    }
    out
}

fn emit(out: &mut Output, path: Option<&Path>, text: String) -> Result<(), CliError> {
    match path {
        Some(p) => {
            fs::write(p, text)?;
            out.files.push(p.to_path_buf());
        }
        None => out.stdout.push_str(&text),
    }
    Ok(())
}

fn with_extension(base: &Path, ext: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Run one parsed command. Output produced before a consistency diagnostic is kept.
pub fn execute(command: &Command) -> (Output, Result<(), CliError>) {
    let mut out = Output::default();
    let status = execute_into(command, &mut out);
    (out, status)
}

fn execute_into(command: &Command, out: &mut Output) -> Result<(), CliError> {
    let budget = budget_from_env()?;
    match command {
        Command::Analyze {
            weight,
            horizon,
            m_max,
            out: path,
        } => {
            let report = cmd_analyze(weight, *horizon, *m_max, budget)?;
            emit(out, path.as_deref(), to_json(&report))?;
            if let Some(bad) = report.consistency.iter().find(|c| !c.ok) {
                return Err(CliError::Consistency(format!("{} ({})", bad.name, bad.note)));
            }
        }
        Command::Spectrum {
            weight,
            grid,
            n,
            out: path,
        } => {
            let (summary, csv) = cmd_spectrum(weight, grid, *n, budget)?;
            match path {
                Some(base) => {
                    emit(out, Some(&with_extension(base, "csv")), csv)?;
                    emit(out, Some(&with_extension(base, "json")), to_json(&summary))?;
                }
                None => emit(out, None, csv)?,
            }
            if let Some((re, im, d)) = summary.conflicts.first() {
                return Err(CliError::Consistency(format!("{} conflicting node(s), first at {re}+{im}i: {d}", summary.conflicts.len())));
            }
        }
        Command::Iterate {
            weight,
            probe,
            n,
            m,
            mode,
            means,
            kernel,
            seed,
            out: path,
        } => {
            let args = IterateArgs {
                weight,
                probe,
                n: *n,
                m: *m,
                mode: *mode,
                means: *means,
                kernel: *kernel,
                seed: *seed,
            };
            emit(out, path.as_deref(), cmd_iterate(&args, budget)?)?;
        }
        Command::Catalog { family } => {
            out.stdout = catalog_text(&cmd_catalog(family.as_deref())?);
        }
    }
    Ok(())
}

/// Parse arguments, run, print, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let (out, status) = execute(&cli.command);
    print!("{}", out.stdout);
    match status {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
