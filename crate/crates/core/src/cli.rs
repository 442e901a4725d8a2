//! The `listrec` command line.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad arguments or
//! parameters, 3 step 1 could not be carried out.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frs::FrsCode;
use crate::gf::Rational;
use crate::instance::ListRecoveryInstance;
use crate::prune::PruneParams;
use crate::recovery::{
    frs_theorem_params, planted_instance, pruning_radius, recover, RecoveryConfig, RecoveryReport, Step1Mode,
};
use crate::selftest;
use crate::stream_rng;
use crate::verify::{
    audit_monotonicity, bounds_table, estimate_ahs_success, estimate_fprune_success, estimate_uniform_success,
    pruning_instance, verify_design_with_tau, DesignMode, EstimatorReport, Table,
};
use crate::vspace::{enum_limit, AffineSpace};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STEP1: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "listrec", version, about = "List recovery of folded Reed-Solomon codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a message (JSON array of coefficients) into a codeword.
    Encode(EncodeArgs),
    /// Run the full recovery pipeline on an instance.
    Recover(RecoverArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: VerifyCommand,
    },
    /// Run the fixed-seed acceptance corpus.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    #[arg(long, default_value_t = 37)]
    pub q: u64,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    #[arg(long, default_value_t = 4)]
    pub s: usize,
}

impl CodeArgs {
    pub fn build(&self) -> Result<FrsCode> {
        FrsCode::new(self.q, self.n, self.k, self.s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// JSON file holding the k message coefficients.
    #[arg(long)]
    pub message: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Instance JSON file.
    #[arg(long, conflicts_with_all = ["planted", "noise"])]
    pub instance: Option<PathBuf>,
    /// Number of planted codewords for a generated instance.
    #[arg(long)]
    pub planted: Option<usize>,
    /// Fraction of coordinates corrupted per planted codeword.
    #[arg(long)]
    pub noise: Option<Rational>,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    /// Decoding radius of a generated instance; defaults to the noise.
    #[arg(long)]
    pub delta: Option<Rational>,
    /// Derive r, eta, eta', t from the rate and this radius slack.
    #[arg(long, conflicts_with_all = ["r", "eta", "eta_prime", "t"])]
    pub epsilon: Option<Rational>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub eta: Option<Rational>,
    #[arg(long)]
    pub eta_prime: Option<Rational>,
    #[arg(long)]
    pub t: Option<usize>,
    #[arg(long, default_value = "1")]
    pub t_prime: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "whole-code")]
    pub mode: Step1Mode,
    /// Keep only enumerated sum-set members within distance delta.
    #[arg(long)]
    pub exact_filter: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// Subspace-design statistic over r-dimensional subcodes.
    Design(DesignArgs),
    /// Pruning success frequencies against their floors.
    PruneStats(PruneStatsArgs),
    /// Exact check of the potential step.
    Monotonicity(MonotonicityArgs),
    /// Exhaustive list sizes against the closed-form bounds.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 1)]
    pub r: usize,
    /// Random subspaces to check; exhaustive when absent.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiplies tau(r) before comparing (falsifiability hook).
    #[arg(long, hide = true)]
    pub tau_scale: Option<Rational>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PruneStatsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    /// Coordinates where the planted word leaves its list.
    #[arg(long, default_value_t = 3)]
    pub corrupt: usize,
    #[arg(long, default_value = "1/4")]
    pub eta: Rational,
    #[arg(long, default_value = "1/8")]
    pub eta_prime: Rational,
    /// Slack for the received-word strategies.
    #[arg(long, default_value = "1/4")]
    pub epsilon: Rational,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MonotonicityArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 100)]
    pub instances: u64,
    #[arg(long, default_value_t = 4)]
    pub max_dim: usize,
    #[arg(long, default_value = "1/4")]
    pub eta: Rational,
    #[arg(long, default_value = "1/8")]
    pub eta_prime: Rational,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value_t = 2)]
    pub r: usize,
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    /// Comma-separated eps values.
    #[arg(long, value_delimiter = ',', default_value = "1/2,1/4,1/8")]
    pub epsilon_grid: Vec<Rational>,
    #[arg(long, default_value_t = 10)]
    pub instances: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Print the criterion IDs and exit.
    #[arg(long)]
    pub list: bool,
    #[arg(long, default_value_t = selftest::DEFAULT_SEED)]
    pub seed: u64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Encode(a) => cmd_encode(&a),
        Command::Recover(a) => cmd_recover(&a),
        Command::Verify { suite } => cmd_verify(&suite),
        Command::Selftest(a) => cmd_selftest(&a),
    }
}

fn usage(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_USAGE
}

/// Writes to a sibling temporary file and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn emit(out: Option<&Path>, text: String) -> i32 {
    match out {
        Some(p) => match write_atomic(p, text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => usage(format!("cannot write {}: {e}", p.display())),
        },
        None => {
            print!("{text}");
            EXIT_OK
        }
    }
}

fn render<T: Serialize>(value: &T, table: impl FnOnce() -> String, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Table => table(),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> std::result::Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("cannot parse {}: {e}", path.display()))
}

pub fn cmd_encode(a: &EncodeArgs) -> i32 {
    let code = match a.code.build() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let msg: Vec<u32> = match read_json(&a.message) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    match code.encode(&msg) {
        Ok(word) => {
            let mut s = serde_json::to_string(&word).expect("codewords serialize");
            s.push('\n');
            emit(a.out.as_deref(), s)
        }
        Err(e) => usage(e),
    }
}

fn recovery_config(a: &RecoverArgs, code: &FrsCode, ell: usize) -> Result<RecoveryConfig> {
    let mut cfg = RecoveryConfig {
        t_prime: a.t_prime.clone(),
        seed: a.seed,
        step1_mode: a.mode,
        exact_filter: a.exact_filter,
        ..RecoveryConfig::default()
    };
    if let Some(eps) = &a.epsilon {
        let p = frs_theorem_params(&code.rate(), eps, ell)?;
        if Rational::from(code.s()) < p.s0 {
            eprintln!(
                "warning: folding s = {} is below s0 = {} for this rate and eps; the guarantee does not apply",
                code.s(),
                p.s0
            );
        }
        cfg.r = Some(p.r.max(code.k()));
        cfg.eta = p.eta;
        cfg.eta_prime = p.eta_prime;
        cfg.t = Some(crate::recovery::repetitions(p.r.max(code.k()), &cfg.eta, ell, &a.t_prime));
    } else {
        cfg.r = a.r;
        if let Some(e) = &a.eta {
            cfg.eta = e.clone();
        }
        if let Some(e) = &a.eta_prime {
            cfg.eta_prime = e.clone();
        }
        cfg.t = a.t;
    }
    Ok(cfg)
}

fn recovery_table(rep: &RecoveryReport) -> String {
    let mut t = Table::new(["dim", "r", "t", "sumsets", "stuck", "max|T|", "covered", "list_size", "bcz"]);
    let stuck = rep.runs.iter().filter(|r| r.failed).count();
    let max_t = rep.runs.iter().map(|r| r.trace.pinned.len()).max().unwrap_or(0);
    t.row([
        rep.step1.dim.map_or("empty".into(), |d| d.to_string()),
        rep.r.to_string(),
        rep.t.to_string(),
        (rep.runs.len() - stuck).to_string(),
        stuck.to_string(),
        max_t.to_string(),
        rep.coverage.as_ref().map_or("n/a".into(), |c| c.covered.to_string()),
        format!("{:.4}", rep.bounds.list_size),
        format!("{:.4}", rep.bounds.bcz),
    ]);
    t.to_string()
}

pub fn cmd_recover(a: &RecoverArgs) -> i32 {
    let started = Instant::now();
    let limit = enum_limit();
    let code = match a.code.build() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let (inst, planted) = match &a.instance {
        Some(path) => match read_json::<ListRecoveryInstance>(path) {
            Ok(i) => (i, None),
            Err(e) => return usage(e),
        },
        None => {
            let noise = a.noise.clone().unwrap_or_else(Rational::zero);
            if noise.is_negative() || noise > Rational::one() {
                return usage(format!("noise {noise} outside [0, 1]"));
            }
            let corrupt = (noise.clone() * Rational::from(code.n())).floor();
            let corrupt = num_traits::ToPrimitive::to_usize(&corrupt).unwrap_or(0);
            let delta = a.delta.clone().unwrap_or(noise);
            let mut rng = stream_rng(a.seed, 0);
            match planted_instance(&code, a.planted.unwrap_or(1), a.ell, corrupt, delta, &mut rng) {
                Ok(p) => (p.instance, Some(p.planted)),
                Err(e) => return usage(e),
            }
        }
    };
    let cfg = match recovery_config(a, &code, inst.ell()) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    if a.epsilon.is_none() {
        if let Ok(params) = cfg.prune_params() {
            let r = cfg.r.unwrap_or(code.k());
            let radius = pruning_radius(&code.tau(r), &params);
            if *inst.delta() >= radius {
                eprintln!(
                    "warning: delta = {} is not below the pruning radius {radius}; coverage is not guaranteed",
                    inst.delta()
                );
            }
        }
    }
    let output = match recover(&code, &inst, &cfg, limit) {
        Ok(o) => o,
        Err(Error::Step1Infeasible(msg)) => {
            eprintln!("error: step 1 infeasible: {msg}");
            eprintln!("hint: use --mode whole-code, or raise LISTREC_ENUM_LIMIT");
            return EXIT_STEP1;
        }
        Err(e) => return usage(e),
    };
    let report = match RecoveryReport::new(&code, &cfg, output, inst.ell(), planted.as_deref(), limit) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let text = render(&report, || recovery_table(&report), a.output.format);
    let code = emit(a.output.out.as_deref(), text);
    eprintln!("elapsed: {:.3}s", started.elapsed().as_secs_f64());
    code
}

fn verdict(passed: bool) -> i32 {
    if passed {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn finish<T: Serialize>(value: &T, table: impl FnOnce() -> String, out: &OutputArgs, passed: bool) -> i32 {
    let text = render(value, table, out.format);
    match emit(out.out.as_deref(), text) {
        EXIT_OK => verdict(passed),
        other => other,
    }
}

pub fn cmd_verify(cmd: &VerifyCommand) -> i32 {
    let limit = enum_limit();
    match cmd {
        VerifyCommand::Design(a) => {
            let code = match a.code.build() {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let mode = a.samples.map_or(DesignMode::Exhaustive, DesignMode::Sampled);
            let tau = match &a.tau_scale {
                Some(f) => code.tau(a.r) * f.clone(),
                None => code.tau(a.r),
            };
            match verify_design_with_tau(&code, a.r, mode, a.seed, limit, tau) {
                Ok(rep) => finish(&rep, || rep.table().to_string(), &a.output, rep.passed()),
                Err(e) => usage(e),
            }
        }
        VerifyCommand::PruneStats(a) => prune_stats(a),
        VerifyCommand::Monotonicity(a) => {
            let code = match a.code.build() {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            let params = match PruneParams::new(a.eta.clone(), a.eta_prime.clone()) {
                Ok(p) => p,
                Err(e) => return usage(e),
            };
            match audit_monotonicity(&code, a.max_dim, a.instances, &params, a.seed) {
                Ok(rep) => finish(&rep, || rep.table().to_string(), &a.output, rep.passed()),
                Err(e) => usage(e),
            }
        }
        VerifyCommand::Bounds(a) => {
            let code = match a.code.build() {
                Ok(c) => c,
                Err(e) => return usage(e),
            };
            match bounds_table(&code, a.r, a.ell, &a.epsilon_grid, a.instances, a.seed, limit) {
                Ok(rep) => finish(&rep, || rep.table().to_string(), &a.output, rep.passed()),
                Err(e) => usage(e),
            }
        }
    }
}

#[derive(Serialize)]
struct PruneStats {
    fprune: EstimatorReport,
    ahs: EstimatorReport,
    uniform: EstimatorReport,
}

fn prune_stats(a: &PruneStatsArgs) -> i32 {
    let code = match a.code.build() {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let params = match PruneParams::new(a.eta.clone(), a.eta_prime.clone()) {
        Ok(p) => p,
        Err(e) => return usage(e),
    };
    let mut rng = stream_rng(a.seed, 0);
    let inst = match pruning_instance(&code, a.r, a.ell, a.corrupt, &mut rng) {
        Ok(i) => i,
        Err(e) => return usage(e),
    };
    let space = AffineSpace::linear(inst.h.clone());
    let reports = (|| -> Result<PruneStats> {
        Ok(PruneStats {
            fprune: estimate_fprune_success(&code, &inst.h, &inst.c, &inst.lists, &params, a.trials, a.seed)?,
            ahs: estimate_ahs_success(&code, &space, &inst.y, &inst.c, &a.epsilon, a.trials, a.seed)?,
            uniform: estimate_uniform_success(&code, &space, &inst.y, &inst.c, &a.epsilon, a.trials, a.seed)?,
        })
    })();
    match reports {
        Ok(rep) => {
            let all = [&rep.fprune, &rep.ahs, &rep.uniform];
            let passed = all.iter().all(|r| r.pass != Some(false)) && rep.fprune.trace_violations == 0;
            for r in all.iter().filter(|r| !r.hypothesis) {
                eprintln!("note: {} instance misses its distance hypothesis; no floor is claimed", r.estimator);
            }
            let table = || {
                let mut t = Table::new(["estimator", "trials", "estimate", "floor", "margin", "hypothesis", "pass"]);
                for r in all {
                    t.row([
                        r.estimator.clone(),
                        r.trials.to_string(),
                        format!("{:.4}", r.estimate),
                        r.floor.to_string(),
                        format!("{:.4}", r.z_margin),
                        r.hypothesis.to_string(),
                        r.pass.map_or("n/a".into(), |p| p.to_string()),
                    ]);
                }
                t.to_string()
            };
            finish(&rep, table, &a.output, passed)
        }
        Err(e) => usage(e),
    }
}

pub fn cmd_selftest(a: &SelftestArgs) -> i32 {
    if a.list {
        for c in selftest::CRITERIA {
            println!("{}  {}", c.id, c.title);
        }
        return EXIT_OK;
    }
    let started = Instant::now();
    let mut all = true;
    for c in selftest::CRITERIA {
        let t0 = Instant::now();
        let outcome = (c.run)(a.seed);
        let (ok, detail) = match outcome {
            Ok(d) => (d.pass, d.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "[{}] {} {} ({:.1}s): {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            t0.elapsed().as_secs_f64(),
            detail
        );
    }
    eprintln!("elapsed: {:.1}s", started.elapsed().as_secs_f64());
    verdict(all)
}
