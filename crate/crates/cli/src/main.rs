//! `bdst`: degree-3 spanning trees, star paths, exact oracles and the
//! machine checks behind the 1.559 bound.
//!
//! Exit status: 0 on success, 1 when a verification fails (the report is still
//! written), 2 on input or usage errors.

mod bench;
mod commands;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bdst::generate::InstanceKind;

#[derive(Debug, Parser)]
#[command(name = "bdst", version, about = "Degree-3 Euclidean spanning trees with certified weight ratio")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Options shared by every report-producing subcommand.
#[derive(Debug, Args)]
struct Output {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Report format; CSV is available for `bench` only.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Relative tolerance for weight and length checks.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Euclidean minimum spanning tree of a points file.
    Mst {
        points: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Degree-3 spanning tree of a points file, checked against 1.559 x MST.
    Tree3 {
        points: PathBuf,
        /// Return the MST unchanged when its maximum degree is already <= 3.
        #[arg(long)]
        keep_if_feasible: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Path from one point through all others, checked against 1.559 x star weight.
    Starpath {
        points: PathBuf,
        /// Index of the star center in the points file.
        #[arg(long, value_name = "K")]
        center_index: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Recomputed block coefficients.
    Bounds {
        #[command(subcommand)]
        what: BoundsCommand,
    },
    /// Exact checks of the proof artifacts.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Exhaustive reference solvers for small inputs.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Lower-bound instance and its ratio.
    Lowerbound {
        /// Number of copies N (8N + 1 points in 7N dimensions).
        #[arg(long = "n", value_name = "N")]
        copies: usize,
        /// Hub offset; defaults to the optimal value.
        #[arg(long)]
        alpha: Option<f64>,
        /// Write the instance as a points file here.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        /// Relative tolerance for the distance identities.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Randomized tree3 and starpath suite; reports the largest ratios seen.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of point sets for tree3 (the same number of stars is run).
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 500)]
        max_n: usize,
        #[arg(long, default_value_t = 8)]
        max_dim: usize,
        /// Largest number of satellites in the star suite.
        #[arg(long, default_value_t = 60)]
        max_satellites: usize,
        /// Instance kinds to cycle through.
        #[arg(long, value_delimiter = ',', default_value = "uniform-ball,gaussian,clustered,near-tie")]
        kinds: Vec<KindArg>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Full coefficient table with provenance.
    Table {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Infeasibility certificate of the block-size linear system.
    Lp {
        /// Drop a constraint by id before solving (repeatable).
        #[arg(long, value_name = "ID")]
        drop: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Averaged block-path coefficients against their closed form.
    Eq2 {
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
enum OracleCommand {
    /// Shortest path from a start point through every other point.
    Path {
        points: PathBuf,
        #[arg(long, value_name = "K")]
        start: usize,
        /// Allowed final vertex (repeatable); any vertex when omitted.
        #[arg(long = "end", value_name = "E")]
        ends: Vec<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Minimum spanning tree under a degree cap, by exhaustive enumeration.
    Bdmst {
        points: PathBuf,
        #[arg(long, default_value_t = 3)]
        maxdeg: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct KindArg(pub InstanceKind);

impl ValueEnum for KindArg {
    fn value_variants<'a>() -> &'a [Self] {
        const ALL: [KindArg; 6] = [
            KindArg(InstanceKind::UniformBall),
            KindArg(InstanceKind::Gaussian),
            KindArg(InstanceKind::Clustered),
            KindArg(InstanceKind::LowerBoundFamily),
            KindArg(InstanceKind::NearTie),
            KindArg(InstanceKind::HeavyTailed),
        ];
        &ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.0.name()))
    }
}

/// A finished report and, if a check failed, why.
pub struct Report {
    pub body: String,
    pub failure: Option<String>,
}

/// A run that produced no report.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<bdst::Error> for CliError {
    fn from(e: bdst::Error) -> Self {
        use bdst::Error::*;
        let code = match e {
            Verification(_) | Feasible { .. } | NoBlockSize { .. } | Solver(_) => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BDST_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::input(format!("BDST_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::input(format!("cannot configure thread pool: {e}")))
}

fn emit(body: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::input(format!("stdout: {e}")))
        }
    }
}

fn json_only(output: &Output) -> Result<(), CliError> {
    if output.format == Format::Csv {
        return Err(CliError::input("CSV output is only available for bench"));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Report, CliError> {
    configure_threads()?;
    let (report, output) = match &cli.command {
        Command::Mst { points, output } => (json_only(output).and_then(|_| commands::mst(points))?, output),
        Command::Tree3 { points, keep_if_feasible, output } => {
            json_only(output)?;
            (commands::tree3(points, *keep_if_feasible, output.tolerance)?, output)
        }
        Command::Starpath { points, center_index, output } => {
            json_only(output)?;
            (commands::starpath(points, *center_index, output.tolerance)?, output)
        }
        Command::Bounds { what: BoundsCommand::Table { output } } => {
            (json_only(output).and_then(|_| commands::bounds_table())?, output)
        }
        Command::Verify { what: VerifyCommand::Lp { drop, output } } => {
            (json_only(output).and_then(|_| commands::verify_lp(drop))?, output)
        }
        Command::Verify { what: VerifyCommand::Eq2 { output } } => {
            (json_only(output).and_then(|_| commands::verify_eq2())?, output)
        }
        Command::Oracle { what: OracleCommand::Path { points, start, ends, output } } => {
            (json_only(output).and_then(|_| commands::oracle_path(points, *start, ends))?, output)
        }
        Command::Oracle { what: OracleCommand::Bdmst { points, maxdeg, output } } => {
            (json_only(output).and_then(|_| commands::oracle_bdmst(points, *maxdeg))?, output)
        }
        Command::Lowerbound { copies, alpha, out, tolerance } => {
            let report = commands::lowerbound(*copies, *alpha, out.as_ref(), *tolerance)?;
            emit(&report.body, None)?;
            return Ok(report);
        }
        Command::Bench { seed, instances, max_n, max_dim, max_satellites, kinds, output } => {
            let kinds: Vec<InstanceKind> = kinds.iter().map(|k| k.0).collect();
            let params = bench::Params {
                seed: *seed,
                instances: *instances,
                max_n: *max_n,
                max_dim: *max_dim,
                max_satellites: *max_satellites,
                kinds,
                tolerance: output.tolerance,
            };
            (bench::run(&params, output.format)?, output)
        }
    };
    emit(&report.body, output.out.as_ref())?;
    Ok(report)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Report { failure: None, .. }) => ExitCode::SUCCESS,
        Ok(Report { failure: Some(why), .. }) => {
            eprintln!("bdst: verification failed: {why}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("bdst: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
