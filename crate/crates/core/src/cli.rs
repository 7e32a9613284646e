//! Command-line front end.
//!
//! Every command reads JSON (or nothing), writes one JSON payload, and exits
//! 0 on success, 1 on bad input or a violated hypothesis, and 2 when a
//! verification or certificate check fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cheb::{random_l2_unit_poly, random_unit_poly};
use crate::discrepancy::{SolverConfig, SolverKind, BRUTE_FORCE_CAP};
use crate::error::Error;
use crate::pipeline::{self, Balancer, BalanceResult, Instance};
use crate::rudin_shapiro;
use crate::sup_norm::DEFAULT_DENSE_POINTS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Gen,
    Balance,
    BalanceL2,
    BalanceD,
    Verify,
    Rs,
    LowerBound,
    Bench,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

/// Balance bounded polynomials with signs and certify the Chebyshev norm.
#[derive(Debug, Clone, Parser)]
#[command(name = "polybalance", version)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Number of polynomials (gen, rs, lower-bound).
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Degree bound for gen and balance-d.
    #[arg(long)]
    pub d: Option<usize>,
    /// Grid multiplier M (grid has M·n points).
    #[arg(long = "M", default_value_t = 9)]
    pub multiplier: usize,
    #[arg(long, default_value = "greedy", value_parser = parse_solver)]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Draws for the random solver.
    #[arg(long, default_value_t = 50)]
    pub restarts: usize,
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Instance file checked by `verify`.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Dense-sampling resolution.
    #[arg(long, default_value_t = DEFAULT_DENSE_POINTS)]
    pub points: usize,
    /// gen: emit L2-normalized polynomials of degree n-1 for balance-l2.
    #[arg(long)]
    pub l2: bool,
    /// rs: circle resolution (default 8n).
    #[arg(long)]
    pub thetas: Option<usize>,
    /// bench: comma-separated list of n.
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 8, 16, 32, 64])]
    pub ns: Vec<usize>,
    /// bench: comma-separated solvers (default all).
    #[arg(long, value_delimiter = ',', value_parser = parse_solver)]
    pub solvers: Vec<SolverKind>,
    /// bench: instances per n.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// bench: skip brute force above this n.
    #[arg(long, default_value_t = 16)]
    pub brute_max: usize,
    /// bench: also write plot data as CSV here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_solver(s: &str) -> Result<SolverKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Integrity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Integrity(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Integrity(m) => write!(f, "integrity error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_integrity() {
            CliError::Integrity(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    path.as_deref()
        .ok_or_else(|| CliError::Input(format!("--{flag} is required for this command")))
}

/// Fail before computing if the output location cannot be written.
fn check_writable(path: &Option<PathBuf>) -> Result<(), CliError> {
    if let Some(p) = path {
        let dir = p.parent().filter(|d| !d.as_os_str().is_empty());
        if let Some(d) = dir {
            if !d.is_dir() {
                return Err(io_err(p, "parent directory does not exist"));
            }
        }
    }
    Ok(())
}

fn emit<T: Serialize>(payload: &T, out: &Option<PathBuf>) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(payload)
        .map_err(|e| CliError::Input(format!("serialization: {e}")))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, &text).map_err(|e| io_err(p, e))?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string()))?,
    }
    Ok(text)
}

impl RunConfig {
    fn solver_config(&self, kind: SolverKind) -> SolverConfig {
        let mut cfg = SolverConfig::new(kind, self.seed);
        cfg.restarts = self.restarts;
        cfg
    }

    fn balancer(&self, kind: SolverKind) -> Balancer {
        Balancer {
            solver: self.solver_config(kind),
            dense_points: self.points,
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.multiplier < 4 {
            return Err(Error::MultiplierTooSmall(self.multiplier).into());
        }
        if self.points < 2 {
            return Err(CliError::Input("--points must be at least 2".into()));
        }
        if let Some(p) = &self.input {
            if !p.is_file() {
                return Err(io_err(p, "not a readable file"));
            }
        }
        check_writable(&self.out)?;
        check_writable(&self.csv)
    }
}

/// Per-polynomial seeds derived from the single config seed.
pub fn child_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.next_u64()).collect()
}

/// `n` random polynomials: sup-normalized of degree `d`, or L2-normalized of
/// degree `n - 1`.
pub fn generate_instance(n: usize, d: usize, l2: bool, seed: u64) -> Instance {
    let seeds = child_seeds(seed, n);
    let polys = if l2 {
        let degree = n.saturating_sub(1);
        seeds.iter().map(|&s| random_l2_unit_poly(degree, s)).collect()
    } else {
        seeds.iter().map(|&s| random_unit_poly(d, s)).collect()
    };
    Instance {
        polys,
        degree_bound: if l2 { n } else { d },
    }
}

/// One bench measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub solver: SolverKind,
    pub seed: u64,
    pub grid_discrepancy: f64,
    pub certified_bound: f64,
    pub bound_30_sqrt_n: f64,
    /// `certified_bound / √n`.
    pub constant: f64,
    pub flagged: bool,
}

/// Mean and worst `certified_bound / √n` for one solver at one `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantEntry {
    pub solver: SolverKind,
    pub n: usize,
    pub runs: usize,
    pub mean_grid_discrepancy: f64,
    pub mean_constant: f64,
    pub max_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub multiplier: usize,
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    pub constants: Vec<ConstantEntry>,
}

/// Sweep `ns × solvers × instances`, in that nesting order.
pub fn bench(
    ns: &[usize],
    solvers: &[SolverKind],
    instances: u64,
    seed: u64,
    multiplier: usize,
    brute_max: usize,
    base: &Balancer,
) -> Result<BenchReport, Error> {
    let mut rows = Vec::new();
    let mut constants = Vec::new();
    for &n in ns {
        let insts: Vec<Instance> = (0..instances)
            .map(|k| generate_instance(n, n, false, seed.wrapping_add(k)))
            .collect();
        for &kind in solvers {
            if kind == SolverKind::Brute && n > brute_max.min(BRUTE_FORCE_CAP) {
                continue;
            }
            let mut group = Vec::new();
            for (k, inst) in insts.iter().enumerate() {
                let mut b = base.clone();
                b.solver.kind = kind;
                b.solver.seed = seed.wrapping_add(k as u64);
                let r = b.sup(&inst.polys, multiplier)?;
                let sqrt_n = (n as f64).sqrt();
                group.push(BenchRow {
                    n,
                    solver: kind,
                    seed: b.solver.seed,
                    grid_discrepancy: r.grid_discrepancy,
                    certified_bound: r.certificate.certified_bound,
                    bound_30_sqrt_n: 30.0 * sqrt_n,
                    constant: r.certificate.certified_bound / sqrt_n,
                    flagged: r.solver_report.flagged,
                });
            }
            if !group.is_empty() {
                let runs = group.len();
                constants.push(ConstantEntry {
                    solver: kind,
                    n,
                    runs,
                    mean_grid_discrepancy: group.iter().map(|r| r.grid_discrepancy).sum::<f64>()
                        / runs as f64,
                    mean_constant: group.iter().map(|r| r.constant).sum::<f64>() / runs as f64,
                    max_constant: group.iter().map(|r| r.constant).fold(0.0, f64::max),
                });
            }
            rows.extend(group);
        }
    }
    Ok(BenchReport {
        multiplier,
        seed,
        rows,
        constants,
    })
}

/// Plot data: `n,solver,grid_discrepancy,certified_bound,bound_30_sqrt_n`.
pub fn emit_plot_data<W: Write>(rows: &[BenchRow], writer: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "n",
        "solver",
        "grid_discrepancy",
        "certified_bound",
        "bound_30_sqrt_n",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.solver.to_string(),
            r.grid_discrepancy.to_string(),
            r.certified_bound.to_string(),
            r.bound_30_sqrt_n.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn load_instance(config: &RunConfig) -> Result<Instance, CliError> {
    read_json(require(&config.input, "in")?)
}

/// Execute one command. Returns the JSON payload that was written.
pub fn run(config: &RunConfig) -> Result<String, CliError> {
    config.validate()?;
    match config.command {
        Command::Gen => {
            if config.n == 0 {
                return Err(CliError::Input("--n must be at least 1".into()));
            }
            let d = config.d.unwrap_or(config.n);
            emit(&generate_instance(config.n, d, config.l2, config.seed), &config.out)
        }
        Command::Balance => {
            let inst = load_instance(config)?;
            let r = config.balancer(config.solver).sup(&inst.polys, config.multiplier)?;
            emit(&r, &config.out)
        }
        Command::BalanceL2 => {
            let inst = load_instance(config)?;
            let r = config.balancer(config.solver).l2(&inst.polys)?;
            emit(&r, &config.out)
        }
        Command::BalanceD => {
            let inst = load_instance(config)?;
            let d = config.d.unwrap_or(inst.degree_bound);
            let r = config.balancer(config.solver).degree_d(&inst.polys, d)?;
            emit(&r, &config.out)
        }
        Command::Verify => {
            let result: BalanceResult = read_json(require(&config.input, "in")?)?;
            let inst: Instance = read_json(require(&config.instance, "instance")?)?;
            let ok = pipeline::verify(&result, &inst.polys).map_err(|e| match e {
                Error::LengthMismatch { .. } | Error::InvalidGrid(_) => {
                    CliError::Integrity(format!("result does not match instance: {e}"))
                }
                other => other.into(),
            })?;
            let text = emit(&serde_json::json!({ "verified": ok }), &config.out)?;
            if ok {
                Ok(text)
            } else {
                Err(CliError::Integrity("stored values do not match recomputation".into()))
            }
        }
        Command::Rs => {
            let thetas = config.thetas.unwrap_or(8 * config.n);
            emit(&rudin_shapiro::flatness_report(config.n, thetas)?, &config.out)
        }
        Command::LowerBound => emit(&rudin_shapiro::lower_bound_check(config.n)?, &config.out),
        Command::Bench => {
            let solvers = if config.solvers.is_empty() {
                SolverKind::ALL.to_vec()
            } else {
                config.solvers.clone()
            };
            let report = bench(
                &config.ns,
                &solvers,
                config.seeds,
                config.seed,
                config.multiplier,
                config.brute_max,
                &config.balancer(SolverKind::Greedy),
            )?;
            if let Some(p) = &config.csv {
                let file = fs::File::create(p).map_err(|e| io_err(p, e))?;
                emit_plot_data(&report.rows, file).map_err(|e| io_err(p, e))?;
            }
            emit(&report, &config.out)
        }
    }
}

/// Parse arguments, run, print errors, and return the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&config) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
