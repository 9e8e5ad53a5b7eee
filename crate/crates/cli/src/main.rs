//! Command line front end: every subcommand prints a report and exits with
//! 0 when its checks pass, 1 when a mathematical check fails and 2 on bad
//! input.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use clifford_iso::quadrature::Grid;
use clifford_iso::series::SeriesKind;

use output::Format;

pub const PRECISION_ENV: &str = "CLIFFORD_ISO_PRECISION";

#[derive(Debug, Parser)]
#[command(
    name = "clifford-iso",
    version,
    about = "Exact series, recurrences and quadrature for Moebius images of the Clifford torus"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Bits of floating point precision for multiprecision evaluations.
    #[arg(long, global = true, env = PRECISION_ENV, default_value_t = 256)]
    precision: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Area,
    Volume,
    Dseq,
}

impl From<Kind> for SeriesKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Area => SeriesKind::Area,
            Kind::Volume => SeriesKind::Volume,
            Kind::Dseq => SeriesKind::Dseq,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SurfaceArg {
    Sphere,
    Torus,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact coefficients by direct summation, extended by recurrence past the crossover.
    Coeffs {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = at_least_one)]
        count: usize,
        #[arg(long, default_value_t = 200)]
        crossover: usize,
    },
    /// Guess a recurrence of the given order and degree from directly summed terms.
    Guess {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        degree: usize,
        /// Number of equations, default 2 (order+1)(degree+1).
        #[arg(long, value_parser = at_least_one)]
        equations: Option<usize>,
        #[arg(long, default_value_t = 200)]
        crossover: usize,
    },
    /// Check the known recurrence exactly for all n <= N.
    Verify {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = at_least_one)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        crossover: usize,
    },
    /// Exact sign scan of the terms with index 0..=N.
    Positivity {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_parser = at_least_one)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        crossover: usize,
    },
    /// Characteristic polynomial of the known recurrence and its real roots.
    Charpoly {
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// c_n = s_n / ((sqrt2+1)^(2n) n^theta (ln n)^k) at N/4, N/2 and N.
    Asymptotic {
        #[arg(long, value_enum, default_value_t = Kind::Dseq)]
        kind: Kind,
        #[arg(long, value_parser = at_least_one, default_value_t = 5000)]
        n: usize,
        #[arg(long, default_value_t = 3.0)]
        theta: f64,
        #[arg(long, default_value_t = 1)]
        log_power: u32,
        #[arg(long, default_value_t = 200)]
        crossover: usize,
    },
    /// Reduced volume of SCT_[a,0,0](T_sqrt2) by quadrature on equispaced a.
    Iso {
        #[arg(long, value_parser = at_least_one, default_value_t = 41)]
        samples: usize,
        #[arg(long, default_value_t = 0.4)]
        max_a: f64,
        /// Fixed grid "NU,NV,NR" instead of the default refinement.
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<usize>>,
    },
    /// Scaled area and volume of inversions centered near a surface point.
    Rounding {
        #[arg(long, value_enum)]
        surface: SurfaceArg,
        /// Major radius of the torus (tube radius 1).
        #[arg(long = "R", default_value_t = std::f64::consts::SQRT_2)]
        major: f64,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
    },
    /// Cross-section measurements of i_(rho,0,0)(T_R).
    Geometry {
        #[arg(long = "R")]
        major: f64,
        #[arg(long)]
        rho: f64,
    },
}

fn at_least_one(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// Settings shared by every subcommand, validated once.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub precision: u32,
}

impl RunConfig {
    pub fn new(format: Format, out: Option<PathBuf>, precision: u32) -> Result<Self, Failure> {
        if precision < 64 {
            return Err(Failure::Usage(format!("precision must be at least 64 bits, got {precision}")));
        }
        Ok(Self { format, out, precision })
    }
}

#[derive(Debug)]
pub enum Failure {
    /// A mathematical check did not hold.
    Check(String),
    /// Bad input or an I/O problem.
    Usage(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Pass,
    Fail(String),
}

fn run(cli: Cli) -> Result<Verdict, Failure> {
    let cfg = RunConfig::new(cli.format, cli.out, cli.precision)?;
    match cli.command {
        Command::Coeffs { kind, count, crossover } => commands::coeffs(&cfg, kind.into(), count, crossover),
        Command::Guess { kind, order, degree, equations, crossover } => {
            commands::guess(&cfg, kind.into(), order, degree, equations, crossover)
        }
        Command::Verify { kind, n, crossover } => commands::verify(&cfg, kind.into(), n, crossover),
        Command::Positivity { kind, n, crossover } => commands::positivity(&cfg, kind.into(), n, crossover),
        Command::Charpoly { kind } => commands::charpoly(&cfg, kind.into()),
        Command::Asymptotic { kind, n, theta, log_power, crossover } => {
            commands::asymptotic(&cfg, kind.into(), n, theta, log_power, crossover)
        }
        Command::Iso { samples, max_a, grid } => {
            let grid = match grid {
                Some(g) if g.len() == 3 => {
                    Some(Grid::new(g[0], g[1], g[2]).map_err(|e| Failure::Usage(e.to_string()))?)
                }
                Some(g) => return Err(Failure::Usage(format!("--grid needs NU,NV,NR, got {} values", g.len()))),
                None => None,
            };
            commands::iso(&cfg, samples, max_a, grid)
        }
        Command::Rounding { surface, major, eps } => {
            let surface = match surface {
                SurfaceArg::Sphere => clifford_iso::quadrature::Surface::UnitSphere,
                SurfaceArg::Torus => clifford_iso::quadrature::Surface::Torus { major },
            };
            commands::rounding(&cfg, surface, &eps)
        }
        Command::Geometry { major, rho } => commands::geometry(&cfg, major, rho),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(f) => {
            match &f {
                Failure::Check(m) => eprintln!("check failed: {m}"),
                Failure::Usage(m) => eprintln!("error: {m}"),
            }
            ExitCode::from(f.code())
        }
    }
}
