//! `k3kit`: command line reports over the moduli computations.
//!
//! Subcommands: `rank`, `heegner`, `normal-form`, `tables`,
//! `cubic-stability`, `net-stability`. Global flags select the output
//! format, numeric precision, search bound, thread count, timestamping,
//! and an optional JSON config file (`--config` or `K3KIT_CONFIG`), with
//! precedence flags > file > defaults.
//!
//! Exit codes are a stable contract: 0 for success (including
//! mathematically negative verdicts like "unstable"), 1 for a
//! mathematical mismatch (a cross-check or reference table failing), 2
//! for usage and schema errors.

mod commands;
mod config;
mod render;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::NormalFormMode;
use config::{FlagOverrides, Format, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input: exit 2.
    Usage(String),
    /// The mathematics disagreed with itself or the references: exit 1.
    Math(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Math(msg) => write!(f, "{msg}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "k3kit",
    version,
    about = "Rank, lattice, and GIT stability reports for low degree K3 moduli",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Mantissa bits for the Gauss-sum route (minimum 64)
    #[arg(long, global = true, value_name = "N")]
    precision_bits: Option<usize>,

    /// Leading-weight bound for 1-PS enumeration (minimum 5)
    #[arg(long, global = true, value_name = "N")]
    search_bound: Option<u32>,

    /// Worker threads for sweeps (default: all cores)
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    /// Omit the generated-at timestamp from reports
    #[arg(long, global = true)]
    no_timestamp: bool,

    /// JSON config file (fallback: the K3KIT_CONFIG environment variable)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Rank of the span of special divisors, by two formulas that must agree
    Rank {
        /// First degree parameter l
        #[arg(long)]
        from: u64,
        /// Last degree parameter l (inclusive)
        #[arg(long)]
        to: u64,
    },
    /// Divisor label and canonical lattice vector for a degree/genus pair
    Heegner {
        /// Intersection degree d of the class with the polarization
        #[arg(long)]
        d: u64,
        /// Genus g of the class
        #[arg(long)]
        g: u64,
        /// Degree parameter l (polarization has self-intersection 2l)
        #[arg(long)]
        l: u64,
    },
    /// Canonical primitive vector from invariants (N, k, d), or invariants
    /// from an explicit vector
    NormalForm {
        /// Degree parameter l
        #[arg(long)]
        l: u64,
        /// Norm N = <v, v> of the class
        #[arg(long, allow_hyphen_values = true)]
        norm: Option<i64>,
        /// Level k, the divisor of 2l generating the image pairing group
        #[arg(long)]
        level: Option<i64>,
        /// Type d in [0, 2l), the discriminant-group coordinate
        #[arg(long = "type", value_name = "D")]
        d_type: Option<i64>,
        /// 21 comma-separated coordinates (w, u1, v1, u2, v2, e1..e8, f1..f8)
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            value_name = "C0,..,C20",
            conflicts_with_all = ["norm", "level", "d_type"]
        )]
        vector: Option<Vec<i64>>,
    },
    /// Regenerate the destabilized-class tables (1, 2) or verify and search
    /// the net table (3)
    Tables {
        /// Which table: 1 (cubics, not properly stable), 2 (cubics,
        /// unstable), 3 (nets of quadrics)
        which: u8,
    },
    /// Torus destabilizer search for a cubic section support set
    CubicStability {
        /// JSON input: {"schema": "k3kit.cubic.v1", "support": [[e0..e4], ..]}
        file: PathBuf,
    },
    /// Stability of a net of quadrics against one 1-PS or a full grid scan
    NetStability {
        /// JSON input: {"schema": "k3kit.net.v1", "net": [[{i,j,num,den}, ..] x3]}
        /// (or "supports" rows of {i,j} for unit coefficients)
        file: PathBuf,
        /// Test only this 1-PS, six comma-separated weights
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            value_name = "A0,..,A5"
        )]
        lambda: Option<Vec<i64>>,
    },
}

fn to_array<const N: usize>(values: Vec<i64>, what: &str) -> Result<[i64; N], CliError> {
    let got = values.len();
    values.try_into().map_err(|_| {
        CliError::Usage(format!(
            "{what} needs exactly {N} comma-separated integers, got {got}"
        ))
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    let flags = FlagOverrides {
        format: cli.format,
        precision_bits: cli.precision_bits,
        search_bound: cli.search_bound,
        jobs: cli.jobs,
        no_timestamp: cli.no_timestamp,
        config: cli.config,
    };
    let cfg = RunConfig::resolve(&flags)?;
    if let Some(n) = cfg.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot set --jobs {n}: {e}")))?;
    }

    match cli.command {
        Command::Rank { from, to } => commands::cmd_rank(&cfg, from, to),
        Command::Heegner { d, g, l } => commands::cmd_heegner(&cfg, d, g, l),
        Command::NormalForm {
            l,
            norm,
            level,
            d_type,
            vector,
        } => {
            let mode = match (norm, level, d_type, vector) {
                (Some(norm), Some(level), Some(d_type), None) => NormalFormMode::Forward {
                    norm,
                    level,
                    d_type,
                },
                (None, None, None, Some(coords)) => NormalFormMode::Inverse { coords },
                _ => {
                    return Err(CliError::Usage(
                        "provide either all of --norm, --level, --type, or only \
                         --vector"
                            .into(),
                    ))
                }
            };
            commands::cmd_normal_form(&cfg, l, mode)
        }
        Command::Tables { which } => commands::cmd_tables(&cfg, which),
        Command::CubicStability { file } => commands::cmd_cubic_stability(&cfg, &file),
        Command::NetStability { file, lambda } => {
            let lambda = lambda.map(|v| to_array::<6>(v, "--lambda")).transpose()?;
            commands::cmd_net_stability(&cfg, &file, lambda)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
