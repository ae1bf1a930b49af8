use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "Exact semistability and twist enumeration on SNC fibers")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Append decimal approximations (marked with `~`) to exact values in text reports.
    #[arg(long, global = true)]
    approx: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Minus,
    Plus,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ScopeArg {
    Pairs,
    All,
}

#[derive(Args, Debug, Clone)]
struct Bundle {
    /// Line bundle class, e.g. `L` or `L + 2*Y1`.
    #[arg(long, default_value = "L")]
    bundle: String,

    /// Polarization class `H`.
    #[arg(long, default_value = "K")]
    polarization: String,

    #[arg(long, value_enum, default_value_t = ModeArg::Minus)]
    mode: ModeArg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the consistency checks on a configuration file.
    Validate { config: PathBuf },

    /// Evaluate e_Y(L) and e_Y(L + mH) for one union or every proper union.
    E {
        config: PathBuf,
        /// Components of Y, by name or index, comma separated.
        #[arg(long)]
        union: Option<String>,
        #[command(flatten)]
        bundle: Bundle,
    },

    /// Decide semistability of L (optionally twisted) with respect to H.
    Check {
        config: PathBuf,
        #[command(flatten)]
        bundle: Bundle,
        #[arg(long, value_enum, default_value_t = ScopeArg::Pairs)]
        scope: ScopeArg,
        /// Twist coordinates applied to L first, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        twist: Option<String>,
    },

    /// Twistable interval of the pair (X, Y).
    Interval {
        config: PathBuf,
        #[arg(long)]
        union: String,
        #[command(flatten)]
        bundle: Bundle,
    },

    /// Enumerate every semistable twist of L on a tree-shaped fiber.
    Enumerate {
        config: PathBuf,
        #[command(flatten)]
        bundle: Bundle,
        /// Root vertex of the traversal.
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Print the branch trace in text reports.
        #[arg(long)]
        trace: bool,
    },

    /// Independent brute-force and cross-checks.
    Oracle {
        #[command(subcommand)]
        kind: OracleKind,
    },

    /// Generate a configuration file.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
}

#[derive(Subcommand, Debug)]
enum OracleKind {
    /// Windowed search over all twists, compared with the enumeration when it applies.
    Brute {
        config: PathBuf,
        #[command(flatten)]
        bundle: Bundle,
        #[arg(long, default_value_t = 10)]
        window: u32,
        /// Grow the window to the analytic per-edge bound.
        #[arg(long)]
        grow: bool,
    },
    /// Balanced multidegree inequality against the sign of e_Y (curves).
    Balanced {
        config: PathBuf,
        #[arg(long, default_value = "L")]
        bundle: String,
    },
    /// Randomized identity battery.
    Identities {
        config: PathBuf,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Degree bounds on the coefficients of e_Y(L + mH + aY).
    Degrees {
        config: PathBuf,
        #[arg(long)]
        union: String,
        #[command(flatten)]
        bundle: Bundle,
    },
    /// Finite threshold in m after which the sign of e_Y(L + mH) settles.
    Threshold {
        config: PathBuf,
        #[arg(long)]
        union: String,
        #[command(flatten)]
        bundle: Bundle,
    },
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// Curve from genera, edges and degrees; random tree curve when --genera is absent.
    Curve {
        /// Genera, comma separated.
        #[arg(long)]
        genera: Option<String>,
        /// Edges as `i-j:nodes`, comma separated.
        #[arg(long)]
        edges: Option<String>,
        /// Degrees of a bundle as `NAME=d1,d2,...`; repeatable.
        #[arg(long = "deg", allow_hyphen_values = true)]
        degrees: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Formal configuration of any dimension on a tree, solved from the consistency constraints.
    Synth {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Tree edges as `i-j`, comma separated; random tree when absent.
        #[arg(long)]
        tree: Option<String>,
        /// Component count of the random tree.
        #[arg(long, default_value_t = 3)]
        components: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_MALFORMED } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(commands::run(&cli))
}
