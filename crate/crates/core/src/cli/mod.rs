//! Command-line surface: `count`, `solve`, `verify` and `sweep` over problem files.

pub mod commands;
pub mod file;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::master::{Budget, CriticalOrbit};

pub use commands::{analyse, count, singular_dimension, solve, summarize_sweep, sweep, sweep_runs, verify, SweepRun, Tamper};
pub use file::{FileError, ProblemFile, SCHEMA};
pub use report::{CountReport, Report, RunReport, SweepReport, Verdict};

pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "schubert-bethe", version, about = "Critical points of Gaudin master functions and their planes of polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Clone, Default)]
pub struct BudgetArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub precision_bits: Option<u32>,
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl BudgetArgs {
    /// Command-line flags over the file's solver table.
    pub fn apply(&self, b: Budget) -> Budget {
        Budget {
            seed: self.seed.unwrap_or(b.seed),
            precision_bits: self.precision_bits.unwrap_or(b.precision_bits),
            starts: self.starts.unwrap_or(b.starts),
            max_iter: self.max_iter.unwrap_or(b.max_iter),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intersection number and singular-vector dimension.
    Count { file: PathBuf },
    /// Certified critical orbits.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
    },
    /// Critical orbits with reconstructed and verified planes.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Shift the first coordinate of the given orbit before reconstruction.
        #[arg(long, hide = true)]
        corrupt_orbit: Option<usize>,
    },
    /// Orbit counts of a special-form template over random marked points.
    Sweep {
        file: PathBuf,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

/// Move the first coordinate of orbit `which` off the critical point.
pub fn corrupt(which: usize) -> impl Fn(usize, &mut CriticalOrbit) {
    move |i, o| {
        if i == which {
            if let Some(t) = o.rep.t.iter_mut().flatten().next() {
                *t += 1e-3;
            }
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Report, FileError> {
    match &cli.command {
        Command::Count { file } => Ok(Report::Count(count(&ProblemFile::load(file)?)?)),
        Command::Solve { file, budget } => {
            let f = ProblemFile::load(file)?;
            Ok(Report::Run(solve(&f, &budget.apply(f.budget()))?))
        }
        Command::Verify { file, budget, corrupt_orbit } => {
            let f = ProblemFile::load(file)?;
            let hook = corrupt_orbit.map(corrupt);
            let tamper = hook.as_ref().map(|h| h as Tamper);
            Ok(Report::Run(verify(&f, &budget.apply(f.budget()), tamper)?))
        }
        Command::Sweep { file, budget, trials } => {
            let f = ProblemFile::load(file)?;
            let b = budget.apply(f.budget());
            Ok(Report::Sweep(sweep(&f, &b, *trials, b.seed)?))
        }
    }
}

/// Parse arguments, run, print; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { 0 };
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return EXIT_INVALID;
    }
    report.verdict().exit_code()
}
