//! Command-line front end for the first-passage solvers.
//!
//! Exit codes: 0 success, 1 invalid configuration, 2 solver failure,
//! 3 validity conditions or cross-pipeline agreement violated.

pub mod config;
pub mod format;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qfpt_core::fptcore::{mean_fpt, Curve, FptSolution, Trend};
use qfpt_core::lattice::{solve_lattice, LatticeMethod};
use qfpt_core::{
    classical_two_site, return_kernel_trigsum, solve_exact, solve_volterra, survival_trigsum,
    InitialState, Partition, TightBindingChain, TimeGrid,
};

pub use config::{Pipeline, RunConfig, SystemKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qfpt", version, about = "Quantum first-passage-time densities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one system and write `t,P_r,P_fp` samples as CSV.
    Solve(RunArgs),
    /// Run the exact and Volterra pipelines on a chain and compare them.
    Compare(RunArgs),
    /// Write the validity report of a solution.
    Report(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// System to solve (default: chain, or the `system` key of --config).
    #[arg(value_enum)]
    pub system: Option<SystemKind>,
    /// Number of chain sites.
    #[arg(long)]
    pub sites: Option<usize>,
    /// Last site of ω; the doorway pair is (boundary, boundary+1).
    #[arg(long, allow_hyphen_values = true)]
    pub boundary: Option<i64>,
    /// Initially occupied site (inside ω).
    #[arg(long, allow_hyphen_values = true)]
    pub start: Option<i64>,
    /// Comma-separated site energies.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub energies: Option<Vec<f64>>,
    /// Comma-separated nearest-neighbour couplings.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub couplings: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    pub pipeline: Option<Pipeline>,
    /// End of the time grid.
    #[arg(long = "tmax")]
    pub t_max: Option<f64>,
    /// Grid step.
    #[arg(long)]
    pub h: Option<f64>,
    /// Hop rate of the classical two-site model.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Upper limit of the search for the first zero of P_r.
    #[arg(long = "search-max")]
    pub search_max: Option<f64>,
    /// Output file (CSV for `solve`, report for `report`).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Read settings from a `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the resolved configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
}

impl RunArgs {
    /// Merges defaults, the config file and the flags, in that order.
    pub fn resolve(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                RunConfig::parse(&text).map_err(|e| format!("{}: {e}", path.display()))?
            }
            None => RunConfig::defaults(self.system.unwrap_or(SystemKind::Chain)),
        };
        if let Some(system) = self.system {
            cfg.set("system", &system.to_string())?;
        }
        if let Some(v) = self.sites {
            cfg.sites = v;
        }
        if let Some(v) = self.boundary {
            cfg.boundary = v;
        }
        if let Some(v) = self.start {
            cfg.start = v;
        }
        if let Some(v) = &self.energies {
            cfg.energies = Some(v.clone());
        }
        if let Some(v) = &self.couplings {
            cfg.couplings = Some(v.clone());
        }
        if let Some(v) = self.pipeline {
            cfg.pipeline = v;
        }
        if let Some(v) = self.t_max {
            cfg.t_max = v;
        }
        if let Some(v) = self.h {
            cfg.h = v;
        }
        if let Some(v) = self.rate {
            cfg.rate = v;
        }
        if let Some(v) = self.search_max {
            cfg.search_max = v;
        }
        if let Some(v) = &self.output {
            cfg.output = Some(v.clone());
        }
        Ok(cfg)
    }
}

/// Why a command stopped early.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Solver(qfpt_core::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Solver(_) => EXIT_SOLVER,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Self::Solver(e) => write!(f, "solver error: {e}"),
        }
    }
}

impl From<qfpt_core::Error> for Failure {
    fn from(e: qfpt_core::Error) -> Self {
        use qfpt_core::Error::*;
        match e {
            InvalidChain(_)
            | Precondition(_)
            | MultiDoorway { .. }
            | Disconnected { .. }
            | InvalidGrid(_)
            | UnsupportedFiniteOp => Self::Config(e.to_string()),
            other => Self::Solver(other),
        }
    }
}

/// Output of a successful command: `key=value` lines and an exit code.
#[derive(Debug)]
pub struct Completed {
    pub stdout: String,
    pub exit_code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Completed
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return Completed {
                stdout: String::new(),
                exit_code: code,
            };
        }
    };
    match execute(&cli.command) {
        Ok(done) => done,
        Err(failure) => {
            eprintln!("qfpt: {failure}");
            Completed {
                stdout: String::new(),
                exit_code: failure.exit_code(),
            }
        }
    }
}

fn execute(command: &Command) -> Result<Completed, Failure> {
    let args = match command {
        Command::Solve(a) | Command::Compare(a) | Command::Report(a) => a,
    };
    let cfg = args.resolve().map_err(Failure::Config)?;
    if args.dump_config {
        return Ok(Completed {
            stdout: cfg.to_text(),
            exit_code: EXIT_OK,
        });
    }
    cfg.validate().map_err(Failure::Config)?;
    match command {
        Command::Solve(_) => cmd_solve(&cfg),
        Command::Compare(_) => cmd_compare(&cfg),
        Command::Report(_) => cmd_report(&cfg),
    }
}

/// A solved configuration sampled on its grid.
pub struct Solved {
    pub grid: TimeGrid,
    pub solution: FptSolution,
}

impl Solved {
    pub fn samples(&self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let times: Vec<f64> = self.grid.nodes().collect();
        let restricted = times
            .iter()
            .map(|&t| self.solution.restricted.eval(t))
            .collect();
        let density = times
            .iter()
            .map(|&t| self.solution.density.eval(t))
            .collect();
        (times, restricted, density)
    }
}

fn grid(cfg: &RunConfig) -> Result<TimeGrid, Failure> {
    TimeGrid::new(cfg.t_max, cfg.h).map_err(Failure::from)
}

fn chain_setup(cfg: &RunConfig) -> Result<(TightBindingChain, Partition, InitialState), Failure> {
    let energies = cfg.energies.clone().unwrap_or_else(|| vec![0.0; cfg.sites]);
    let couplings = cfg
        .couplings
        .clone()
        .unwrap_or_else(|| vec![1.0; cfg.sites.saturating_sub(1)]);
    let chain = TightBindingChain::new(energies, couplings)?;
    let partition = Partition::new(&chain, cfg.boundary)?;
    let start = InitialState::new(&chain, &partition, cfg.start)?;
    Ok((chain, partition, start))
}

fn describe(cfg: &RunConfig) -> String {
    match cfg.system {
        SystemKind::Chain => format!(
            "chain(sites={},boundary={},start={})",
            cfg.sites, cfg.boundary, cfg.start
        ),
        SystemKind::Lattice => "lattice".to_owned(),
        SystemKind::Classical2 => format!("classical2(rate={})", cfg.rate),
    }
}

fn solve_with(cfg: &RunConfig, pipeline: Pipeline) -> Result<Solved, Failure> {
    let grid = grid(cfg)?;
    let (restricted, density) = match (cfg.system, pipeline) {
        (SystemKind::Chain, Pipeline::Exact | Pipeline::Both) => {
            let (chain, partition, start) = chain_setup(cfg)?;
            let exact = solve_exact(&chain, &partition, &start)?;
            (
                Curve::Closed(exact.restricted),
                Curve::Closed(exact.density),
            )
        }
        (SystemKind::Chain, Pipeline::Volterra) => {
            let (chain, partition, start) = chain_setup(cfg)?;
            let survival = survival_trigsum(&chain, &partition, &start)?;
            let kernel = return_kernel_trigsum(&chain, &partition)?;
            let sol = solve_volterra(&survival, &kernel, &grid)?;
            (
                Curve::sampled(grid, sol.restricted),
                Curve::sampled(grid, sol.density),
            )
        }
        (SystemKind::Lattice, p) => {
            let method = match p {
                Pipeline::LatticeSeries => LatticeMethod::Series,
                Pipeline::LatticeInversion => LatticeMethod::NumericInversion,
                Pipeline::Volterra => LatticeMethod::Volterra,
                other => {
                    return Err(Failure::Config(format!(
                        "pipeline {other} cannot solve the lattice"
                    )))
                }
            };
            let sol = solve_lattice(method, &grid)?;
            (
                Curve::sampled(grid, sol.restricted),
                Curve::sampled(grid, sol.density),
            )
        }
        (SystemKind::Classical2, _) => {
            let sol = classical_two_site(cfg.rate, &grid)?;
            (
                Curve::sampled(grid, sol.restricted),
                Curve::sampled(grid, sol.density),
            )
        }
        (SystemKind::Chain, other) => {
            return Err(Failure::Config(format!(
                "pipeline {other} cannot solve a chain"
            )))
        }
    };
    Ok(Solved {
        grid,
        solution: FptSolution::assemble(describe(cfg), restricted, density, cfg.search_max),
    })
}

fn validity_lines(out: &mut String, solution: &FptSolution) {
    let r = &solution.report;
    writeln!(out, "{r}").unwrap();
    writeln!(out, "restricted_monotone={}", r.restricted_monotone()).unwrap();
    writeln!(out, "density_positive={}", r.density_positive()).unwrap();
    writeln!(out, "normalized={}", r.normalized()).unwrap();
    let trend = match r.density_trend {
        Trend::Increasing => "increasing",
        Trend::Decreasing => "decreasing",
        Trend::Mixed => "mixed",
    };
    writeln!(out, "density_trend={trend}").unwrap();
}

struct Comparison {
    restricted: f64,
    density: f64,
    bound: f64,
}

impl Comparison {
    fn agrees(&self) -> bool {
        self.restricted <= self.bound && self.density <= self.bound
    }

    fn lines(&self, out: &mut String) {
        writeln!(out, "max_abs_diff_Pr={:.3e}", self.restricted).unwrap();
        writeln!(out, "max_abs_diff_Pfp={:.3e}", self.density).unwrap();
        writeln!(out, "diff_bound={:.3e}", self.bound).unwrap();
    }
}

fn compare_pipelines(cfg: &RunConfig, exact: &Solved) -> Result<Comparison, Failure> {
    let volterra = solve_with(cfg, Pipeline::Volterra)?;
    let (_, vr, vf) = volterra.samples();
    let (_, er, ef) = exact.samples();
    let max_diff = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    Ok(Comparison {
        restricted: max_diff(&er, &vr),
        density: max_diff(&ef, &vf),
        bound: 10.0 * cfg.h * cfg.h,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents)
        .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
}

fn cmd_solve(cfg: &RunConfig) -> Result<Completed, Failure> {
    let solved = solve_with(cfg, cfg.pipeline)?;
    let comparison = match cfg.pipeline {
        Pipeline::Both => Some(compare_pipelines(cfg, &solved)?),
        _ => None,
    };
    let (times, restricted, density) = solved.samples();
    let path = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("qfpt.csv"));
    write_file(&path, &format::csv(&times, &restricted, &density))?;

    let mut out = String::new();
    writeln!(out, "system={}", solved.solution.system).unwrap();
    writeln!(out, "pipeline={}", cfg.pipeline).unwrap();
    validity_lines(&mut out, &solved.solution);
    if let Some(c) = &comparison {
        c.lines(&mut out);
    }
    writeln!(out, "csv={}", path.display()).unwrap();

    let ok = solved.solution.report.conditions_hold() && comparison.is_none_or(|c| c.agrees());
    Ok(Completed {
        stdout: out,
        exit_code: if ok { EXIT_OK } else { EXIT_VIOLATION },
    })
}

fn cmd_compare(cfg: &RunConfig) -> Result<Completed, Failure> {
    if cfg.system != SystemKind::Chain {
        return Err(Failure::Config(format!(
            "compare needs a chain; the exact pipeline cannot solve {}",
            cfg.system
        )));
    }
    let exact = solve_with(cfg, Pipeline::Exact)?;
    let comparison = compare_pipelines(cfg, &exact)?;
    let mut out = String::new();
    writeln!(out, "system={}", exact.solution.system).unwrap();
    writeln!(out, "h={}", cfg.h).unwrap();
    comparison.lines(&mut out);
    Ok(Completed {
        stdout: out,
        exit_code: if comparison.agrees() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
    })
}

fn cmd_report(cfg: &RunConfig) -> Result<Completed, Failure> {
    let solved = solve_with(cfg, cfg.pipeline)?;
    let solution = &solved.solution;
    let mut text = format!("{}\n", solution.report);
    match mean_fpt(solution) {
        Ok(mean) => writeln!(text, "mean_fpt={mean:.6}").unwrap(),
        Err(_) => writeln!(text, "mean_fpt=undefined").unwrap(),
    }
    let path = cfg
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("qfpt_report.txt"));
    write_file(&path, &text)?;

    let mut out = text;
    writeln!(out, "report={}", path.display()).unwrap();
    Ok(Completed {
        stdout: out,
        exit_code: if solution.report.conditions_hold() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
    })
}
