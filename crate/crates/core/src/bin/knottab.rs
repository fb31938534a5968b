use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use knottab::code::{for_each_code, PairCode};
use knottab::colortests::{enumerate_tests, parse_suite, write_suite};
use knottab::moves::{classify_with, SearchOptions};
use knottab::realize::is_realizable;
use knottab::tabulate::{self, emit_table, input_codes, invariants_of, RunConfig};

#[derive(Parser)]
#[command(name = "knottab", version, about = "Tabulate knots from pair codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every pair code with up to N crossings.
    Enumerate {
        #[arg(long)]
        max_crossings: usize,
        /// Only codes that are minimal among their relabelings.
        #[arg(long)]
        canonical_only: bool,
        /// Only codes with a planar drawing.
        #[arg(long)]
        drawable: bool,
    },
    /// Group drawable prime codes into move classes, printed as TSV.
    Classify {
        #[arg(long)]
        max_crossings: usize,
        /// Largest input code [default: max-crossings - 3].
        #[arg(long)]
        input_crossings: Option<usize>,
        #[arg(long)]
        no_mirror_identify: bool,
        #[arg(long, default_value_t = 2_000)]
        budget: usize,
    },
    /// Print the color tests with 1..=C colors, one per line.
    Tests {
        #[arg(long)]
        max_colors: usize,
    },
    /// Read codes from stdin and print their invariants under a suite.
    Invariants {
        #[arg(long)]
        suite: PathBuf,
    },
    /// Run the whole census.
    Run(RunArgs),
    /// Print the table of a finished checkpointed run.
    Table {
        #[arg(long)]
        checkpoint: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    max_crossings: usize,
    #[arg(long)]
    input_crossings: Option<usize>,
    #[arg(long, default_value_t = 5)]
    max_colors: usize,
    /// Comma separated moduli of affine tests.
    #[arg(long, value_delimiter = ',', default_value = "7")]
    affine_mods: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    sym_max: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Continue from the stages already in the checkpoint.
    #[arg(long, requires = "checkpoint")]
    resume: bool,
    /// Worker threads [default: all cores].
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    no_mirror_identify: bool,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    refine_budget: Option<usize>,
    #[arg(long)]
    composite_budget: Option<usize>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        let mut c = RunConfig::new(self.max_crossings);
        if let Some(k) = self.input_crossings {
            c.input_crossings = k;
        }
        c.max_colors = self.max_colors;
        c.affine_moduli = self.affine_mods.clone();
        c.sym_max = self.sym_max;
        c.checkpoint = self.checkpoint.clone();
        c.jobs = self.jobs;
        c.identify_mirrors = !self.no_mirror_identify;
        c.budget = self.budget.unwrap_or(c.budget);
        c.refine_budget = self.refine_budget.unwrap_or(c.refine_budget);
        c.composite_budget = self.composite_budget.unwrap_or(c.composite_budget);
        c
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<()> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    match command {
        Command::Enumerate { max_crossings, canonical_only, drawable } => {
            if max_crossings > knottab::code::MAX_CROSSINGS {
                bail!("at most {} crossings are supported", knottab::code::MAX_CROSSINGS);
            }
            let mut result = Ok(());
            for n in 0..=max_crossings {
                for_each_code(n, canonical_only, |c| {
                    if result.is_ok() && (!drawable || is_realizable(c)) {
                        result = writeln!(out, "{c}");
                    }
                });
            }
            result?;
        }
        Command::Classify { max_crossings, input_crossings, no_mirror_identify, budget } => {
            let inputs = input_crossings.unwrap_or(max_crossings.saturating_sub(3));
            if inputs > max_crossings {
                bail!("input crossings {inputs} exceed the search bound {max_crossings}");
            }
            let codes = input_codes(inputs);
            log::info!("{} input codes", codes.len());
            let opts = SearchOptions { max_crossings, identify_mirrors: !no_mirror_identify, budget };
            let store = classify_with(&codes, &opts)?;
            out.write_all(store.to_tsv().as_bytes())?;
        }
        Command::Tests { max_colors } => {
            let suite: Vec<_> = (1..=max_colors).flat_map(enumerate_tests).collect();
            out.write_all(write_suite(&suite).as_bytes())?;
        }
        Command::Invariants { suite } => {
            let text = std::fs::read_to_string(&suite).with_context(|| format!("reading {}", suite.display()))?;
            let suite = parse_suite(&text).with_context(|| format!("parsing {}", suite.display()))?;
            for (i, line) in io::stdin().lock().lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let code: PairCode = line.trim().parse().with_context(|| format!("line {}", i + 1))?;
                if !is_realizable(&code) {
                    bail!("line {}: {code} has no planar drawing", i + 1);
                }
                let v = invariants_of(&code, &suite);
                let counts: Vec<String> = v.counts().iter().map(ToString::to_string).collect();
                let poly = v.polynomial.map(|p| p.to_string()).unwrap_or_default();
                writeln!(out, "{code}\t{poly}\t{}", counts.join(" "))?;
            }
        }
        Command::Run(args) => {
            let config = args.config();
            let report = if args.resume { tabulate::resume(&config)? } else { tabulate::run(&config)? };
            out.write_all(emit_table(&report.rows).as_bytes())?;
            for e in report.composite() {
                writeln!(out, "composite class #{} {}", e.id, e.code)?;
            }
        }
        Command::Table { checkpoint } => {
            let rows = tabulate::load_table(&checkpoint)?;
            out.write_all(emit_table(&rows).as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}
