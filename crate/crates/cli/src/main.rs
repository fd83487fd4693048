use std::path::PathBuf;
use std::process::ExitCode;

use arr_cli::{
    cmd_example, cmd_list, cmd_run, cmd_verify, default_threads, CliConfig, Format, EXIT_USAGE,
};
use arr_core::{MonomialOrder, Tier};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "arr",
    version,
    about = "Jacobian ideals of hypersurface arrangements: scenarios and verification suites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(clap::Args)]
struct Opts {
    /// Field characteristic: a prime below 2^31, or 0 for the rationals
    #[arg(long = "char", global = true, value_name = "p|0")]
    characteristic: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    order: Option<OrderArg>,
    #[arg(long, global = true, value_name = "SECONDS")]
    budget_seconds: Option<f64>,
    /// Largest degree a Gröbner computation may reach
    #[arg(long, global = true, value_name = "DEGREE")]
    budget_degree: Option<i32>,
    /// Largest number of pairs one Gröbner computation may reduce
    #[arg(long, global = true, value_name = "PAIRS")]
    budget_pairs: Option<u64>,
    /// Highest tier to run
    #[arg(long, global = true, value_enum, default_value = "standard")]
    tier: TierArg,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Exit with 3 when a budget runs out
    #[arg(long, global = true)]
    strict: bool,
    /// Run disabled scenarios and ignore the tier filter
    #[arg(long, global = true)]
    force: bool,
    #[arg(long, global = true, env = "ARR_THREADS", hide_env_values = true)]
    threads: Option<usize>,
    /// Log Gröbner statistics to stderr (repeat for more)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand)]
enum Command {
    /// Run one registered scenario
    Example { name: String },
    /// Run a scenario file
    Run { file: PathBuf },
    /// Run a verification suite
    Verify {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(arr_cli::SUITES))]
        suite: String,
        /// Sweep seeds 1..=N
        #[arg(long, value_name = "N")]
        seeds: Option<u64>,
    },
    /// List registered scenarios
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Standard,
    Extended,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let o = &cli.opts;
    let level = match o.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let cfg = CliConfig {
        characteristic: o.characteristic,
        seed: o.seed,
        order: o.order.map(|x| match x {
            OrderArg::Grevlex => MonomialOrder::GrevLex,
            OrderArg::Lex => MonomialOrder::Lex,
        }),
        budget_seconds: o.budget_seconds,
        budget_degree: o.budget_degree,
        budget_pairs: o.budget_pairs,
        tier: match o.tier {
            TierArg::Fast => Tier::Fast,
            TierArg::Standard => Tier::Standard,
            TierArg::Extended => Tier::Extended,
        },
        format: match o.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        strict: o.strict,
        force: o.force,
        threads: o.threads.unwrap_or_else(default_threads),
    };
    let mut out = std::io::stdout();
    let code = match &cli.command {
        Command::Example { name } => cmd_example(&cfg, name, &mut out),
        Command::Run { file } => cmd_run(&cfg, file, &mut out),
        Command::Verify { suite, seeds } => cmd_verify(&cfg, suite, *seeds, &mut out),
        Command::List => cmd_list(&cfg, &mut out),
    };
    ExitCode::from(code as u8)
}
