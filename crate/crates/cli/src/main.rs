//! `semimatch`: analyze finite semigroups for permutation and involution
//! matchings.
//!
//! Exit codes: 0 success, 1 I/O failure or failed re-verification, 2 parse
//! error, 3 invalid algebra, 4 unmet precondition, 5 exhausted budget.

mod commands;
mod error;
mod input;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use semimatch::search::Q4Config;
use semimatch::transform::{Family, DEFAULT_CAP};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "semimatch", version, about = "Permutation and involution matchings of finite regular semigroups")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOpts {
    /// Emit a JSON run report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Node budget for the colour solver.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Also run the exhaustive cross-checks on small inputs.
    #[arg(long, global = true)]
    oracle: bool,
    /// Include wall-clock timing in JSON reports (makes them nondeterministic).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Structure, Green's relations and every matching criterion.
    Analyze { input: String },
    /// A permutation matching, or a Hall violator.
    Match { input: String },
    /// An involution matching, if one exists.
    Involution { input: String },
    /// Principal factors and their H-quotient bands.
    Factors { input: String },
    /// 0-rectangular band constructions.
    #[command(subcommand)]
    Band(BandCommand),
    /// Colour alignment instances.
    #[command(subcommand)]
    Colour(ColourCommand),
    /// Cayley table of a transformation monoid (families Tn, PTn, On, OPn, Pn).
    Gen {
        family: Family,
        n: usize,
        /// Largest monoid to enumerate.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Write the table here, with the dictionary next to it.
        #[arg(long, short)]
        out: Option<String>,
        /// Where to write the index → image-sequence dictionary.
        #[arg(long)]
        dict: Option<String>,
    },
    /// Look for bands with a matching but no involution matching.
    SearchQ4 {
        /// Row range, `lo..hi` or a single value.
        #[arg(long, default_value = "1..3", value_parser = parse_range)]
        rows: (usize, usize),
        #[arg(long, default_value = "1..4", value_parser = parse_range)]
        cols: (usize, usize),
        /// Shapes with at most this many cells are enumerated exhaustively.
        #[arg(long, default_value_t = 12)]
        exhaustive_cells: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7")]
        densities: Vec<f64>,
        /// Samples per density for larger shapes.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Decide matching existence for order-preserving monoids O_n.
    SearchOn {
        #[arg(long, default_value_t = 1)]
        min_n: usize,
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Also decide involution matchings up to this degree.
        #[arg(long, default_value_t = 5)]
        involution_up_to: usize,
    },
    /// Re-check every witness embedded in a JSON run report.
    VerifyReport { report: String },
}

#[derive(Subcommand)]
enum BandCommand {
    /// Row/column counting condition, block similarity and matching.
    Check { input: String },
    /// Harem family of injections.
    Harem { input: String },
    /// Involution matching built from the harem family.
    Involution { input: String },
}

#[derive(Subcommand)]
enum ColourCommand {
    /// Solve an instance file exactly.
    Solve { instance: String },
    /// Derive an instance from a band and matching, solve it, and build an
    /// involution matching from the plan.
    Reduce {
        band: String,
        /// Matching as one line of space-separated images; found if omitted.
        #[arg(long)]
        matching: Option<String>,
        /// Also write the derived instance here.
        #[arg(long)]
        instance_out: Option<String>,
    },
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi.trim_start_matches('='))?)),
        None => parse(s).map(|v| (v, v)),
    }
}

fn dispatch(cli: &Cli) -> Result<commands::Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { input } => commands::analyze(input, g.oracle),
        Command::Match { input } => commands::matching(input, g.oracle),
        Command::Involution { input } => commands::involution(input, g.oracle),
        Command::Factors { input } => commands::factors(input),
        Command::Band(BandCommand::Check { input }) => commands::band_check(input),
        Command::Band(BandCommand::Harem { input }) => commands::band_harem(input),
        Command::Band(BandCommand::Involution { input }) => commands::band_involution(input),
        Command::Colour(ColourCommand::Solve { instance }) => commands::colour_solve(instance, g.budget),
        Command::Colour(ColourCommand::Reduce { band, matching, instance_out }) => {
            commands::colour_reduce(band, matching.as_deref(), g.budget, instance_out.as_deref())
        }
        Command::Gen { family, n, cap, out, dict } => commands::generate(*family, *n, *cap, out.as_deref(), dict.as_deref()),
        Command::SearchQ4 { rows, cols, exhaustive_cells, densities, samples } => commands::search_q4_cmd(Q4Config {
            rows: *rows,
            cols: *cols,
            exhaustive_cells: *exhaustive_cells,
            densities: densities.clone(),
            samples: *samples,
            seed: g.seed,
            oracle: g.oracle,
        }),
        Command::SearchOn { min_n, max_n, involution_up_to } => {
            commands::search_on(*min_n, *max_n, g.oracle, *involution_up_to)
        }
        Command::VerifyReport { report } => commands::verify_report_file(report),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match dispatch(&cli) {
        Ok(mut out) => {
            if cli.global.json {
                if cli.global.timing {
                    out.report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
                }
                println!("{}", serde_json::to_string_pretty(&out.report).expect("reports serialize"));
            } else {
                print!("{}", out.text);
            }
            match out.status {
                Some(e) => {
                    eprintln!("semimatch: {}", e.message());
                    ExitCode::from(e.exit_code())
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("semimatch: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
