//! Command-line front end: `simulate`, `verify` and `scan`.
//!
//! Exit status: 0 success, 1 failed check or runtime error, 2 bad
//! configuration or usage, 3 blowup flagged, 4 boundary contamination.

pub mod config;
pub mod output;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::dynamics::{run, EvolutionConfig, RunOutcome, SimState};
use crate::error::{Error, Result};
use crate::transforms::{compute_phi, compute_phi2, diagnostics, DiagnosticsContext, DiagnosticsRecord};
use crate::verify::{
    corollary1_scan, lemma1_scan, run_suite, Corollary1Params, Corollary1Scan, Lemma1Params, Lemma1Scan, Suite, SuiteOptions,
    VerificationReport,
};
pub use config::RunConfig;
use output::{csv, json, svg_plot, write_atomic};

/// Environment variable overriding the worker-thread count.
pub const THREADS_ENV: &str = "HEDGEHOG_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_BLOWUP: i32 = 3;
pub const EXIT_BOUNDARY: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "hedgehog", version, about = "Radial Skyrme hedgehog simulator and verification harness")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve initial data and write the time series, snapshots and summary.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a verification suite: identities, inequalities, convergence or all.
    Verify {
        #[arg(long)]
        suite: String,
        /// Seed of the random identity samples (overrides the config file).
        #[arg(long)]
        seed: Option<u64>,
        /// Configuration supplying the seed and quadrature tolerances.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory for the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan one of the small-radius inequalities.
    Scan {
        /// `lemma1` or `corollary1`.
        target: String,
        #[arg(long)]
        r_max: Option<f64>,
        #[arg(long)]
        beta_max: Option<f64>,
        #[arg(long)]
        resolution: Option<usize>,
        /// Radius bound for `corollary1`.
        #[arg(long)]
        r0: Option<f64>,
        /// Half-width of the `z` range for `corollary1`.
        #[arg(long)]
        z_max: Option<f64>,
        /// Take `r0` from an earlier `lemma1` scan file.
        #[arg(long)]
        from: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Columns of `timeseries.csv`.
pub const TIMESERIES_COLUMNS: [&str; 9] = ["t", "E", "G", "l2_phi", "l2_dtphi", "h1_phi", "coercivity", "g1_margin", "dt"];
/// Columns of each snapshot file.
pub const SNAPSHOT_COLUMNS: [&str; 6] = ["r", "g", "gt", "f", "Phi", "Phi2"];

fn timeseries_row(r: &DiagnosticsRecord) -> Vec<f64> {
    vec![r.t, r.energy, r.continuation, r.l2_phi, r.l2_dtphi, r.h1_phi, r.coercivity, r.g1_margin, r.dt]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotEntry {
    pub file: String,
    pub t: f64,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub outcome: RunOutcome,
    pub records: usize,
    pub energy_initial: f64,
    pub energy_final: f64,
    /// `(E_final − E_initial) / |E_initial|`, 0 for zero energy.
    pub energy_drift: f64,
    /// Largest `|E(t) − E_initial| / |E_initial|` over the records.
    pub max_abs_energy_drift: f64,
    pub max_continuation: f64,
    pub min_coercivity: f64,
    /// Smallest coercivity functional relative to `∫|∇Φ|²`.
    pub min_coercivity_ratio: f64,
    pub min_g1_margin: f64,
    pub max_r2g_sup: f64,
    pub snapshots: Vec<SnapshotEntry>,
    pub config: RunConfig,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        match self.outcome {
            RunOutcome::Completed { .. } => EXIT_OK,
            RunOutcome::BlowupFlagged { .. } => EXIT_BLOWUP,
            RunOutcome::BoundaryContaminated { .. } => EXIT_BOUNDARY,
        }
    }
}

fn relative(e: f64, e0: f64) -> f64 {
    if e0 == 0.0 {
        if e == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (e - e0) / e0.abs()
    }
}

fn summarise(outcome: RunOutcome, records: &[DiagnosticsRecord], snapshots: Vec<SnapshotEntry>, cfg: &RunConfig) -> RunSummary {
    let e0 = records.first().map_or(0.0, |r| r.energy);
    let e1 = records.last().map_or(0.0, |r| r.energy);
    let fold = |f: &dyn Fn(&DiagnosticsRecord) -> f64, init: f64, pick: fn(f64, f64) -> f64| records.iter().map(f).fold(init, pick);
    RunSummary {
        outcome,
        records: records.len(),
        energy_initial: e0,
        energy_final: e1,
        energy_drift: relative(e1, e0),
        max_abs_energy_drift: fold(&|r| relative(r.energy, e0).abs(), 0.0, f64::max),
        max_continuation: fold(&|r| r.continuation, 0.0, f64::max),
        min_coercivity: fold(&|r| r.coercivity, f64::INFINITY, f64::min),
        min_coercivity_ratio: fold(&|r| if r.grad_energy > 0.0 { r.coercivity / r.grad_energy } else { 0.0 }, f64::INFINITY, f64::min),
        min_g1_margin: fold(&|r| r.g1_margin, f64::INFINITY, f64::min),
        max_r2g_sup: fold(&|r| r.r2g_sup, 0.0, f64::max),
        snapshots,
        config: cfg.clone(),
    }
}

fn snapshot_csv(state: &SimState, cfg: &RunConfig) -> Result<String> {
    let spec = cfg.quadrature();
    let phi = compute_phi(state, &spec)?.values;
    let phi2 = compute_phi2(state, &spec)?.values;
    let f = state.f();
    let rows = (0..state.grid.n()).map(|j| vec![state.grid.r(j), state.g.values[j], state.gt.values[j], f[j], phi[j], phi2[j]]);
    Ok(csv(&SNAPSHOT_COLUMNS, rows))
}

/// Everything a simulation produces, before it is written out.
pub struct SimulationResult {
    pub summary: RunSummary,
    pub records: Vec<DiagnosticsRecord>,
    /// `(file name, contents)` of each profile snapshot.
    pub snapshot_files: Vec<(String, String)>,
}

/// Runs the configured evolution, splitting it at the snapshot times.
pub fn simulate(cfg: &RunConfig) -> Result<SimulationResult> {
    cfg.validate()?;
    let ctx = DiagnosticsContext { spec: cfg.quadrature(), r0: cfg.r0 };
    let mut state = SimState::from_data(cfg.grid()?, cfg.model(), &cfg.data())?;
    let mut records: Vec<DiagnosticsRecord> = Vec::new();
    let mut snapshot_files = Vec::new();
    let mut snapshots = Vec::new();
    let mut take_snapshot = |s: &SimState, files: &mut Vec<(String, String)>| -> Result<()> {
        let name = format!("snapshot_{:03}.csv", files.len());
        files.push((name.clone(), snapshot_csv(s, cfg)?));
        snapshots.push(SnapshotEntry { file: name, t: s.t });
        Ok(())
    };
    let mut stops: Vec<(f64, bool)> = cfg.snapshot_times.iter().map(|t| (*t, true)).collect();
    if stops.last().map_or(true, |s| s.0 < cfg.t_end) {
        stops.push((cfg.t_end, false));
    }
    let mut outcome = RunOutcome::Completed { t: 0.0, steps: 0 };
    let mut steps = 0;
    for (stop, snap) in stops {
        let span = stop - state.t;
        if span > 0.0 {
            let seg = EvolutionConfig { t_end: span, ..cfg.evolution() };
            let mut sink = |s: &SimState, dt: f64| -> Result<()> {
                if records.last().map_or(true, |r| r.t < s.t) {
                    records.push(diagnostics(s, dt, &ctx)?);
                }
                Ok(())
            };
            let (out, end) = run(state, &seg, &mut sink)?;
            state = end;
            if let RunOutcome::Completed { steps: k, .. } = out {
                steps += k;
                state.t = stop;
            } else {
                outcome = out;
                break;
            }
        } else if records.is_empty() {
            let (_, dt) = cfg.evolution().steps(state.grid.h());
            records.push(diagnostics(&state, dt, &ctx)?);
        }
        if snap {
            take_snapshot(&state, &mut snapshot_files)?;
        }
    }
    if let RunOutcome::Completed { .. } = outcome {
        outcome = RunOutcome::Completed { t: state.t, steps };
    }
    let summary = summarise(outcome, &records, snapshots, cfg);
    Ok(SimulationResult { summary, records, snapshot_files })
}

/// Writes the artifacts of a simulation into `dir`.
pub fn write_simulation(result: &SimulationResult, dir: &Path, svg: bool) -> Result<()> {
    write_atomic(&dir.join("timeseries.csv"), &csv(&TIMESERIES_COLUMNS, result.records.iter().map(timeseries_row)))?;
    for (name, text) in &result.snapshot_files {
        write_atomic(&dir.join(name), text)?;
    }
    if svg {
        let t: Vec<f64> = result.records.iter().map(|r| r.t).collect();
        let e: Vec<f64> = result.records.iter().map(|r| r.energy).collect();
        let g: Vec<f64> = result.records.iter().map(|r| r.continuation).collect();
        write_atomic(&dir.join("energy.svg"), &svg_plot("Energy", "t", "E", &t, &e))?;
        write_atomic(&dir.join("continuation.svg"), &svg_plot("Continuation quantity", "t", "G", &t, &g))?;
    }
    write_atomic(&dir.join("summary.json"), &json(&result.summary)?)
}

fn cmd_simulate(path: &Path) -> Result<i32> {
    let cfg = RunConfig::load(path)?;
    let result = simulate(&cfg)?;
    write_simulation(&result, &cfg.output_dir, cfg.svg)?;
    let s = &result.summary;
    println!(
        "{:?}; records {}, energy drift {:e}, max G {:e}, outputs in {}",
        s.outcome,
        s.records,
        s.energy_drift,
        s.max_continuation,
        cfg.output_dir.display()
    );
    Ok(s.exit_code())
}

fn finish_report(report: &VerificationReport, out: Option<&Path>, file: &str, body: &impl Serialize) -> Result<i32> {
    print!("{}", report.to_table());
    if let Some(dir) = out {
        write_atomic(&dir.join(file), &json(body)?)?;
    }
    if report.all_pass() {
        Ok(EXIT_OK)
    } else {
        for c in report.failures() {
            eprintln!("FAILED {}: {} (value {:e}, bound {:e})", c.check_name, c.eq_tag, c.value, c.tol);
        }
        Ok(EXIT_FAILED)
    }
}

fn cmd_verify(suite: &str, seed: Option<u64>, config: Option<&Path>, out: Option<&Path>) -> Result<i32> {
    let suite: Suite = suite.parse()?;
    let mut options = SuiteOptions::default();
    if let Some(path) = config {
        let cfg = RunConfig::load(path)?;
        options.seed = cfg.seed;
        options.quadrature = cfg.quadrature();
    }
    if let Some(s) = seed {
        options.seed = s;
    }
    let report = run_suite(suite, &options)?;
    finish_report(&report, out, &format!("verify_{}.json", suite.name()), &report)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Lemma1ScanFile {
    pub scan: Lemma1Scan,
    pub report: VerificationReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Corollary1ScanFile {
    pub scan: Corollary1Scan,
    pub report: VerificationReport,
}

pub struct ScanArgs {
    pub r_max: Option<f64>,
    pub beta_max: Option<f64>,
    pub resolution: Option<usize>,
    pub r0: Option<f64>,
    pub z_max: Option<f64>,
    pub from: Option<PathBuf>,
}

fn cmd_scan(target: &str, a: &ScanArgs, out: Option<&Path>) -> Result<i32> {
    match target {
        "lemma1" => {
            let d = Lemma1Params::default();
            let p = Lemma1Params {
                r_max: a.r_max.unwrap_or(d.r_max),
                beta_max: a.beta_max.unwrap_or(d.beta_max),
                resolution: a.resolution.unwrap_or(d.resolution),
            };
            let scan = lemma1_scan(&p)?;
            let report = scan.report();
            finish_report(&report, out, "scan_lemma1.json", &Lemma1ScanFile { scan, report: report.clone() })
        }
        "corollary1" => {
            let r0 = match (a.r0, &a.from) {
                (Some(r0), _) => r0,
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                    let file: Lemma1ScanFile = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                    file.scan.r0
                }
                (None, None) => lemma1_scan(&Lemma1Params::default())?.r0,
            };
            let d = Corollary1Params::new(r0);
            let p = Corollary1Params { z_max: a.z_max.unwrap_or(d.z_max), resolution: a.resolution.unwrap_or(d.resolution), ..d };
            let scan = corollary1_scan(&p)?;
            let report = scan.report();
            finish_report(&report, out, "scan_corollary1.json", &Corollary1ScanFile { scan, report: report.clone() })
        }
        other => Err(Error::Config(format!("unknown scan target '{other}' (expected lemma1 or corollary1)"))),
    }
}

/// Applies the worker-count override, if any.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
    // A pool that already exists (tests, embedding) keeps its size.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

pub fn execute(cli: Cli) -> Result<i32> {
    configure_threads()?;
    match cli.command {
        Command::Simulate { config } => cmd_simulate(&config),
        Command::Verify { suite, seed, config, out } => cmd_verify(&suite, seed, config.as_deref(), out.as_deref()),
        Command::Scan { target, r_max, beta_max, resolution, r0, z_max, from, out } => {
            cmd_scan(&target, &ScanArgs { r_max, beta_max, resolution, r0, z_max, from }, out.as_deref())
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_FAILED,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
