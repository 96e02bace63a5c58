use clap::{Parser, Subcommand, ValueEnum};
use diagon_cli::commands::{self, exit_code, exit_code_for, Region};
use diagon_cli::RunReport;
use diagon_core::{CountConfig, DEFAULT_CEILING, DEFAULT_RSQ_MIN};
use std::path::PathBuf;

/// Exact diagonalization of integer Diophantine equations with brute-force
/// verification that the solution-count exponent is preserved.
#[derive(Parser)]
#[command(name = "diagon", version, about)]
struct Cli {
    /// Maximum number of points a count may enumerate
    /// (env DIAGON_CEILING overrides the default).
    #[arg(long, global = true)]
    ceiling: Option<u128>,

    /// Worker threads for the counting loops (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Emit the report as JSON (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,

    /// Emit the report as readable text.
    #[arg(long, global = true)]
    text: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegionArg {
    Hypercube,
    Pullback,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce an equation to diagonal form via an integer transform.
    Diagonalize {
        file: PathBuf,
        /// Also write the JSON report to this path.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Diagonalize, fit both count exponents, and compare them.
    Verify {
        file: PathBuf,
        /// Comma-separated increasing hypercube radii.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        grid: Option<Vec<u64>>,
        /// Max allowed difference between the two fitted exponents.
        #[arg(long, default_value_t = commands::DEFAULT_TOLERANCE)]
        tol: f64,
        /// Minimum r^2 for a fit to count as conclusive.
        #[arg(long, default_value_t = DEFAULT_RSQ_MIN)]
        rsq_min: f64,
    },
    /// Count integer solutions exactly.
    Count {
        file: PathBuf,
        /// Hypercube half-side.
        #[arg(short)]
        n: u64,
        /// Count in the hypercube or in the transformed image region.
        #[arg(long, value_enum, default_value = "hypercube")]
        region: RegionArg,
    },
    /// Fit the growth exponent of the solution count over a grid.
    Fit {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        grid: Option<Vec<u64>>,
        /// Multiplier for the N ln N band check on ternary normal forms.
        #[arg(long, default_value_t = diagon_core::DEFAULT_FERMAT_CONSTANT)]
        fermat_constant: f64,
    },
    /// Surface class, signature, and predicted exponent.
    Classify { file: PathBuf },
}

fn ceiling_from(cli: &Cli) -> u128 {
    if let Some(c) = cli.ceiling {
        return c;
    }
    if let Ok(env) = std::env::var("DIAGON_CEILING") {
        if let Ok(parsed) = env.parse() {
            return parsed;
        }
        eprintln!("warning: ignoring unparsable DIAGON_CEILING={env}");
    }
    DEFAULT_CEILING
}

fn run(cli: &Cli) -> Result<(RunReport, i32), diagon_core::Error> {
    let cfg = CountConfig {
        ceiling: ceiling_from(cli),
    };
    match &cli.command {
        Command::Diagonalize { file, output } => {
            let report = commands::cmd_diagonalize(file)?;
            if let Some(path) = output {
                std::fs::write(path, report.to_json())
                    .map_err(|e| diagon_core::Error::Io(format!("{}: {e}", path.display())))?;
            }
            Ok((report, exit_code::OK))
        }
        Command::Verify {
            file,
            grid,
            tol,
            rsq_min,
        } => {
            let grid = grid
                .clone()
                .unwrap_or_else(|| commands::DEFAULT_GRID.to_vec());
            commands::cmd_verify(file, &grid, *tol, *rsq_min, &cfg)
        }
        Command::Count { file, n, region } => {
            let region = match region {
                RegionArg::Hypercube => Region::Hypercube,
                RegionArg::Pullback => Region::Pullback,
            };
            let report = commands::cmd_count(file, *n, region, &cfg)?;
            Ok((report, exit_code::OK))
        }
        Command::Fit {
            file,
            grid,
            fermat_constant,
        } => {
            let grid = grid
                .clone()
                .unwrap_or_else(|| commands::DEFAULT_GRID.to_vec());
            let report = commands::cmd_fit(file, &grid, *fermat_constant, &cfg)?;
            Ok((report, exit_code::OK))
        }
        Command::Classify { file } => {
            let report = commands::cmd_classify(file)?;
            Ok((report, exit_code::OK))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
        {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    match run(&cli) {
        Ok((report, code)) => {
            if cli.text {
                print!("{}", report.to_text());
            } else {
                println!("{}", report.to_json());
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code_for(&e));
        }
    }
}
