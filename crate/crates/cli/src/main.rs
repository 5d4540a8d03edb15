mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "rdlab", version, about = "Frontier, Farkas and duality checks on finite robust vector programs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct InstanceArg {
    #[arg(long)]
    pub instance: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantArg {
    Rvd,
    Rvdw,
    Rvdk,
    Rcd1,
    Rcd2,
    Rcd3,
    Rcd4,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weak minima and maxima of the primal value set, and frontier classes of probe vectors.
    Wsup {
        #[command(flatten)]
        inst: InstanceArg,
        /// Probe file; the `y` part of each probe is classified.
        #[arg(long)]
        probes: Option<PathBuf>,
        #[arg(long)]
        perturbations: Option<PathBuf>,
    },
    /// Statements (alpha)-(delta) on every probe, with certificates.
    Farkas {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long)]
        probes: PathBuf,
    },
    /// Sectional convexity test of the conjugate epigraph of F + I_A.
    Sectional {
        #[arg(long, required_unless_present = "seed_paper_counterexample")]
        instance: Option<PathBuf>,
        /// Null map into R^2 under the nonnegative orthant, sectioned along (1,-1) through ((0,0),(0,-1)).
        #[arg(long)]
        seed_paper_counterexample: bool,
        /// Section direction; defaults to the instance direction k.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        direction: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1000)]
        pairs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Primal, dual and the duality verification for one variant.
    Solve {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long, value_enum, default_value_t = VariantArg::Rvdk)]
        variant: VariantArg,
        /// Gap tolerance; defaults to the instance tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Stable duality over every perturbation in a file.
    Sweep {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long)]
        perturbations: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::Rvdk)]
        variant: VariantArg,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Cone validation, Slater witnesses and the uniform concavity check.
    Check {
        #[command(flatten)]
        inst: InstanceArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Scalar robust duals and their gaps.
    Gap {
        #[command(flatten)]
        inst: InstanceArg,
        /// One of rcd1..rcd4; all four when omitted.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
        #[arg(long)]
        perturbations: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> Result<report::Output, CliError> {
    match &cli.command {
        Command::Wsup { inst, probes, perturbations } => commands::wsup(&inst.instance, probes.as_deref(), perturbations.as_deref()),
        Command::Farkas { inst, probes } => commands::farkas(&inst.instance, probes),
        Command::Sectional { instance, seed_paper_counterexample, direction, pairs, seed, probes } => {
            if *seed_paper_counterexample {
                commands::sectional_counterexample(*pairs, *seed)
            } else {
                let path = instance.as_deref().ok_or_else(|| CliError::Usage("--instance is required".into()))?;
                commands::sectional(path, direction.as_deref(), *pairs, *seed, probes.as_deref())
            }
        }
        Command::Solve { inst, variant, tol } => commands::solve(&inst.instance, *variant, *tol),
        Command::Sweep { inst, perturbations, variant, tol } => commands::sweep(&inst.instance, perturbations, *variant, *tol),
        Command::Check { inst, seed } => commands::check(&inst.instance, *seed),
        Command::Gap { inst, variant, perturbations } => commands::gap(&inst.instance, *variant, perturbations.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = run(&cli).and_then(|out| out.emit(cli.format, cli.out.as_deref()));
    eprintln!("rdlab: {:.3}s", start.elapsed().as_secs_f64());
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
