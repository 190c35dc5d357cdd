use std::io::Write;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};
use serde::Serialize;

use nilpotent_maps::cli::{
    cmd_check, cmd_find_q, cmd_gen_family, cmd_verify, parse_coeff_list, verify_exit_code, verify_summary,
    CliError, VerifyOptions, EXIT_OK,
};
use nilpotent_maps::search::{DEFAULT_INSTANCE_CAP, DEFAULT_SEED, DEFAULT_TRIALS};
use nilpotent_maps::{MapSource, ShapeId};

/// Exact analysis of polynomial maps (u, v, h) with nilpotent Jacobian.
/// Reports are JSON on stdout; a one-line summary goes to stderr.
#[derive(Parser)]
#[command(name = "nilmap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Nilpotency, dependence and shape report for one map.
    #[command(disable_help_flag = true)]
    Check {
        #[arg(short = 'u', allow_hyphen_values = true)]
        u: String,
        #[arg(short = 'v', allow_hyphen_values = true)]
        v: String,
        #[arg(short = 'h', allow_hyphen_values = true)]
        h: String,
        #[arg(long, action = ArgAction::Help)]
        help: Option<bool>,
    },
    /// Common generator q with u, h in K[q].
    #[command(name = "find-q", disable_help_flag = true)]
    FindQ {
        #[arg(short = 'u', allow_hyphen_values = true)]
        u: String,
        #[arg(short = 'h', allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, action = ArgAction::Help)]
        help: Option<bool>,
    },
    /// Emit a family member as canonical component strings.
    #[command(name = "gen-family")]
    GenFamily {
        /// T3_3, C3_7 or R2_2.
        #[arg(long)]
        family: ShapeId,
        /// JSON parameters; for R2_2: {"u": "<poly in t>", "c": "<rational>", "h": "<poly>"}.
        #[arg(long)]
        params: String,
    },
    /// Exhaustive search or family sampling for one statement.
    Verify {
        #[arg(long)]
        theorem: ShapeId,
        #[arg(long)]
        max_degree: Option<u32>,
        /// Comma-separated coefficient set, e.g. -1,0,1.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        /// Drop the H(0) = 0 requirement.
        #[arg(long)]
        no_origin: bool,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_INSTANCE_CAP)]
        cap: u64,
        /// Expected witnesses listed in the report.
        #[arg(long, default_value_t = 100)]
        max_listed: usize,
    },
}

fn emit<T: Serialize>(report: &T, summary: &str) {
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    // A closed pipe downstream is not an error worth reporting.
    let _ = writeln!(std::io::stdout(), "{json}");
    eprintln!("{summary}");
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Check { u, v, h, .. } => {
            let r = cmd_check(&MapSource::new(u, v, h))?;
            emit(&r, &r.summary());
            Ok(EXIT_OK)
        }
        Command::FindQ { u, h, max_degree, .. } => {
            let r = cmd_find_q(&u, &h, max_degree)?;
            emit(&r, &r.summary());
            Ok(EXIT_OK)
        }
        Command::GenFamily { family, params } => {
            let r = cmd_gen_family(family, &params)?;
            emit(&r, &format!("({}, {}, {})", r.u, r.v, r.h));
            Ok(EXIT_OK)
        }
        Command::Verify {
            theorem,
            max_degree,
            coeffs,
            no_origin,
            trials,
            seed,
            cap,
            max_listed,
        } => {
            let mut opts = VerifyOptions::new(theorem);
            opts.max_degree = max_degree;
            opts.coeffs = coeffs.as_deref().map(parse_coeff_list).transpose()?;
            opts.require_origin = no_origin.then_some(false);
            opts.trials = trials;
            opts.seed = seed;
            opts.cap = cap;
            opts.max_listed = max_listed;
            let r = cmd_verify(&opts)?;
            emit(&r, &verify_summary(&r));
            Ok(verify_exit_code(&r))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
