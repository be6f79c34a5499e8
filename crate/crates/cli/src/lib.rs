//! Command-line front end. `run` parses arguments and writes CSV or reports
//! to the given sink, so the binary and tests share one code path.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use discord_core::sweep::{
    figure_dataset, format_float, ordering_report, run_sweep, sudden_death_temperature, to_csv, write_atomic, Axis,
    Channel, MeasureSet, SweepConfig, DEFAULT_J, DEFAULT_T, SLICE_COUPLINGS,
};
use discord_core::verify;

#[derive(Parser)]
#[command(
    name = "discord-sweep",
    version,
    about = "Quantum discord, 1-norm GQD and concurrence of thermal XXX qubit pairs under noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the measures on a (J, T) grid and emit CSV.
    Sweep(SweepArgs),
    /// Write the dataset behind one figure (1-8) into a directory.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=8))]
        id: u8,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sudden-death temperature for each J on the J axis (default 0.5, 1, 2, 4).
    Tc(SweepArgs),
    /// Sign of gqd1 - qd over the grid (default T = 1 slice).
    Ordering(SweepArgs),
    /// Run the oracle and invariant suites; exit 0 iff everything passes.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    None,
    Bf,
    Gad,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    j_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    j_max: Option<f64>,
    #[arg(long)]
    j_steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    t_steps: Option<usize>,
    #[arg(long, value_enum, default_value = "none")]
    channel: ChannelArg,
    /// Bit-flip probability.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Damping strength of the generalized amplitude damping channel.
    #[arg(long, default_value_t = 0.5)]
    gamma: f64,
    /// Comma-separated subset of qd,gqd1,conc.
    #[arg(long, default_value = "qd,gqd1,conc")]
    measures: String,
    /// Add numeric qd_numeric and gqd1_numeric columns.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn axis(min: Option<f64>, max: Option<f64>, steps: Option<usize>, default: (f64, f64, usize)) -> Result<Axis> {
    let min = min.unwrap_or(default.0);
    let max = max.unwrap_or(default.1);
    let steps = steps.unwrap_or(if min == max { 1 } else { default.2 });
    Ok(Axis::linspace(min, max, steps)?)
}

impl SweepArgs {
    fn j_given(&self) -> bool {
        self.j_min.is_some() || self.j_max.is_some() || self.j_steps.is_some()
    }

    fn t_given(&self) -> bool {
        self.t_min.is_some() || self.t_max.is_some() || self.t_steps.is_some()
    }

    fn channel(&self) -> Channel {
        match self.channel {
            ChannelArg::None => Channel::None,
            ChannelArg::Bf => Channel::BitFlip { p: self.p },
            ChannelArg::Gad => Channel::Gad { gamma: self.gamma },
        }
    }

    fn config(&self, default_t: (f64, f64, usize)) -> Result<SweepConfig> {
        let cfg = SweepConfig {
            j_axis: axis(self.j_min, self.j_max, self.j_steps, DEFAULT_J)?,
            t_axis: axis(self.t_min, self.t_max, self.t_steps, default_t)?,
            channel: self.channel(),
            measures: MeasureSet::parse(&self.measures)?,
            oracle: self.oracle,
            seed: self.seed,
            output: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(path: Option<&PathBuf>, csv: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(path) => Ok(write_atomic(path, csv)?),
        None => {
            out.write_all(csv.as_bytes()).context("writing output")?;
            Ok(out.flush()?)
        }
    }
}

fn sweep(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let cfg = args.config(DEFAULT_T)?;
    let records = run_sweep(&cfg)?;
    emit(args.out.as_ref(), &to_csv(&records, cfg.oracle), out)
}

fn tc(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let couplings = if args.j_given() {
        axis(args.j_min, args.j_max, args.j_steps, DEFAULT_J)?
    } else {
        Axis::points(SLICE_COUPLINGS.to_vec())?
    };
    let channel = args.channel();
    channel.spec()?;
    let (p, gamma) = channel.parameters();
    let mut csv = String::from("J,p,gamma,T_c\n");
    for &j in couplings.values() {
        let t = sudden_death_temperature(j, &channel).with_context(|| format!("J = {j}"))?;
        csv.push_str(&format!(
            "{},{},{},{}\n",
            format_float(j),
            format_float(p),
            format_float(gamma),
            format_float(t)
        ));
    }
    emit(args.out.as_ref(), &csv, out)
}

/// Per-point CSV goes to `--out` (summary to `out`) or, without `--out`,
/// CSV to `out` and the summary to stderr.
fn ordering(args: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let default_t = if args.t_given() { DEFAULT_T } else { (1.0, 1.0, 1) };
    let report = ordering_report(&args.config(default_t)?)?;
    match &args.out {
        Some(path) => {
            write_atomic(path, &report.to_csv())?;
            writeln!(out, "{report}")?;
        }
        None => {
            emit(None, &report.to_csv(), out)?;
            eprintln!("{report}");
        }
    }
    Ok(())
}

fn run_verify(seed: u64, out: &mut dyn Write) -> Result<bool> {
    let start = Instant::now();
    let mut all = true;
    for check in verify::CHECKS {
        let outcome = check(seed);
        writeln!(out, "{outcome}")?;
        out.flush()?;
        all &= outcome.passed;
    }
    writeln!(
        out,
        "{} in {:.1}s",
        if all { "all checks passed" } else { "some checks FAILED" },
        start.elapsed().as_secs_f64()
    )?;
    Ok(all)
}

/// Parses `args` (including the program name) and executes the verb.
/// Returns `Ok(false)` only when `verify` finds a failing check.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> Result<bool>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Sweep(args) => sweep(&args, out)?,
        Command::Figure { id, out: dir, seed } => {
            for path in figure_dataset(id, &dir, seed)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Tc(args) => tc(&args, out)?,
        Command::Ordering(args) => ordering(&args, out)?,
        Command::Verify { seed } => return run_verify(seed, out),
    }
    Ok(true)
}
