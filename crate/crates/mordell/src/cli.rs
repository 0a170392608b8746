//! The `mordell` command line.

use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use mordell_core::algebra::all_partitions;
use mordell_core::mordell::{kappa_oracle_2d, kappa_search, KappaOptions};
use mordell_core::orbits::{all_closed_orbits_with, ClassificationEntry, OrbitContext};
use mordell_core::spectrum2::{spectrum_scan, Family, ScanOptions};

use crate::exec::ThreadedExecutor;
use crate::formats::{construct_from_input, lattice_to_file, read_json, read_lattice, write_json, ConstructInput};
use crate::report::{classification_table, estimate_json, spectrum_csv, spectrum_json, ClassificationRow};

/// Largest dimension for which `classify` lists every partition, not only closed ones.
const FULL_TABLE_DIM: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "mordell", version, about = "Admissible boxes, orbit classification and Mordell constant bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the unimodular lattice of an algebra and a basis of L.
    Construct(Common),
    /// Classify the block-group orbits of a lattice.
    Classify(Common),
    /// Search for a certified lower bound on the Mordell constant.
    Kappa(KappaArgs),
    /// Scan a family of quadratic irrationals.
    Spectrum2(SpectrumArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct Budget {
    /// Objective evaluations for the search.
    #[arg(long, default_value_t = 20_000)]
    pub budget_iters: usize,
    /// Wall-clock limit for the search, in seconds.
    #[arg(long)]
    pub budget_secs: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative shrink of the float optimum before exact certification.
    #[arg(long, default_value_t = 1e-12)]
    pub precision: f64,
    /// Coefficient radius for the oracle.
    #[arg(long, default_value_t = 10)]
    pub radius: i64,
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub budget: Budget,
    /// Also run the planar pair oracle.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub budget: Budget,
    /// `cusick:FROM..TO` or `sqrt:D1,D2,...`.
    #[arg(long)]
    pub family: String,
}

/// Input errors (exit 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

/// The search finished without a certified box (exit 4).
#[derive(Debug)]
pub struct NotCertified;

impl std::fmt::Display for NotCertified {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("no admissible box could be certified within the budget")
    }
}

impl std::error::Error for NotCertified {}

/// Process exit code for an error.
pub fn exit_code(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if cause.downcast_ref::<NotCertified>().is_some() {
            return 4;
        }
        if let Some(mordell_core::Error::Unsupported(_)) = cause.downcast_ref::<mordell_core::Error>() {
            return 3;
        }
    }
    2
}

fn input(c: &Common) -> Result<&Path> {
    c.input.as_deref().ok_or_else(|| InputError("--input is required".into()).into())
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn executor(b: &Budget) -> Result<ThreadedExecutor> {
    let limit = match b.budget_secs {
        Some(s) if !(s.is_finite() && s > 0.0) => bail!(InputError("--budget-secs must be positive".into())),
        Some(s) => Some(Duration::from_secs_f64(s)),
        None => None,
    };
    if b.budget_iters == 0 {
        bail!(InputError("--budget-iters must be positive".into()));
    }
    Ok(ThreadedExecutor::from_env().with_time_limit(limit))
}

fn kappa_options(b: &Budget) -> KappaOptions {
    KappaOptions { max_evaluations: b.budget_iters, seed: b.seed, shrink: b.precision, ..KappaOptions::default() }
}

fn construct(c: &Common) -> Result<()> {
    let desc: ConstructInput = read_json(input(c)?).map_err(|e| InputError(format!("{e:#}")))?;
    let l = construct_from_input(&desc)?;
    let file = lattice_to_file(&l);
    eprintln!("covolume {} (unimodular: {})", l.covolume().describe(), l.is_unimodular());
    match &c.output {
        Some(p) => write_json(p, &file),
        None => emit(None, &pretty(&serde_json::to_value(&file)?)?),
    }
}

fn classify(c: &Common) -> Result<()> {
    let l = read_lattice(input(c)?).map_err(|e| InputError(format!("{e:#}")))?;
    let n = l.n();
    let ctx = OrbitContext::new(&l)?.with_all_pairs()?;
    let mut rows = Vec::new();
    if n <= FULL_TABLE_DIM {
        let mut parts: Vec<_> = all_partitions(n).collect();
        parts.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.blocks().cmp(b.blocks())));
        for p in parts {
            let class = ctx.classify(&p)?;
            rows.push(ClassificationRow::new(&p, &ClassificationEntry::from(&class)));
        }
    } else {
        for (p, class) in all_closed_orbits_with(&ctx, n)? {
            rows.push(ClassificationRow::new(&p, &ClassificationEntry::from(&class)));
        }
    }
    let closed: Vec<&ClassificationRow> = rows.iter().filter(|r| r.is_closed()).collect();
    match c.format.unwrap_or(Format::Text) {
        Format::Text => {
            let mut s = classification_table(&rows);
            s.push_str(&format!("{} closed orbits of {} listed\n", closed.len(), rows.len()));
            emit(c.output.as_deref(), &s)
        }
        Format::Json => {
            let v = json!({ "n": n, "partitions": rows, "closed": closed });
            emit(c.output.as_deref(), &pretty(&v)?)
        }
        Format::Csv => bail!(InputError("classify writes text or json".into())),
    }
}

fn kappa(a: &KappaArgs) -> Result<()> {
    let l = read_lattice(input(&a.common)?).map_err(|e| InputError(format!("{e:#}")))?;
    let exec = executor(&a.budget)?;
    let est = kappa_search(&l, &kappa_options(&a.budget), &exec)?;
    let oracle = if a.oracle { Some(kappa_oracle_2d(&l, a.budget.radius)?) } else { None };
    let v = estimate_json(&l, &est, a.budget.seed, oracle.as_ref());
    emit(a.common.output.as_deref(), &pretty(&v)?)?;
    if !est.certified {
        bail!(NotCertified);
    }
    Ok(())
}

/// Parses `cusick:1..20` or `sqrt:2,3,5`.
pub fn parse_family(s: &str) -> Result<Family> {
    let (kind, rest) =
        s.split_once(':').ok_or_else(|| InputError(format!("family {s:?} needs a kind, e.g. cusick:1..20")))?;
    let bad = || InputError(format!("cannot parse family {s:?}"));
    match kind.trim() {
        "cusick" => {
            let (a, b) = rest.split_once("..").ok_or_else(bad)?;
            let from: i64 = a.trim().parse().map_err(|_| bad())?;
            let to: i64 = b.trim().parse().map_err(|_| bad())?;
            Ok(Family::Cusick { from, to })
        }
        "sqrt" => {
            let ds = rest
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Family::Sqrt(ds))
        }
        _ => Err(bad().into()),
    }
}

fn spectrum2(a: &SpectrumArgs) -> Result<()> {
    let family = parse_family(&a.family)?;
    let exec = executor(&a.budget)?;
    let opts =
        ScanOptions { kappa: kappa_options(&a.budget), oracle_radius: a.budget.radius, ..ScanOptions::default() };
    let scan = spectrum_scan(&family, &opts, &exec);
    for (m, e) in &scan.skipped {
        eprintln!("warning: skipping parameter {m}: {e}");
    }
    let text = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => spectrum_csv(&scan)?,
        Format::Json => pretty(&spectrum_json(&scan))?,
        Format::Text => bail!(InputError("spectrum2 writes csv or json".into())),
    };
    emit(a.common.output.as_deref(), &text)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Construct(c) => construct(c),
        Command::Classify(c) => classify(c),
        Command::Kappa(a) => kappa(a),
        Command::Spectrum2(a) => spectrum2(a),
    }
}
