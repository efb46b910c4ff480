mod commands;
mod load;
mod runlog;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use healthgraph::prediction::WeightConvention;

#[derive(Parser)]
#[command(name = "healthgraph", version, about = "Hourly health reasoning over home sensor facts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare values across cycles and write diff facts.
    Evaluate(CycleArgs),
    /// Label the items evaluation left open and write ilab/count_infl facts.
    Predict(CycleArgs),
    /// Justify the predicted signs of one item class.
    Explain(CycleArgs),
    /// Run one full cycle and write the feedback decision.
    Feedback(CycleArgs),
    /// Place the person on the home grid at every timestep.
    Localize(CycleArgs),
    /// Run each facts file as one cycle and write the end-of-day report.
    Report(CycleArgs),
    /// Run every cycle of a day directory and keep all artifacts.
    Run(RunArgs),
}

#[derive(Args, Clone)]
pub struct CycleArgs {
    /// Dependency graph and home description.
    #[arg(long)]
    pub model: PathBuf,
    /// Fact files; repeat to merge several (or, for `report`, one per cycle).
    #[arg(long = "facts", required = true)]
    pub facts: Vec<PathBuf>,
    /// Feedback policy.
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Cycle hour; read from the `hour/1` fact when absent.
    #[arg(long, value_parser = clap::value_parser!(i64).range(0..=23))]
    pub hour: Option<i64>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Args, Clone)]
pub struct RunArgs {
    /// Directory holding one `.model`, one `.policy` and the cycle `.facts` files.
    #[arg(long)]
    pub day: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Args, Clone)]
pub struct Tuning {
    /// Most solutions kept per cycle.
    #[arg(long)]
    pub cap: Option<usize>,
    /// Which evaluated labels weigh 5 in the objective.
    #[arg(long = "weight-convention", default_value_t = WeightConvention::default())]
    pub weights: WeightConvention,
    /// Item class to explain: state, functionalities, adl, risk or custom:<file>.
    #[arg(long)]
    pub class: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Evaluate(args) => commands::evaluate(&args),
        Command::Predict(args) => commands::predict(&args),
        Command::Explain(args) => commands::explain(&args),
        Command::Feedback(args) => commands::feedback(&args),
        Command::Localize(args) => commands::localize(&args),
        Command::Report(args) => commands::report(&args),
        Command::Run(args) => commands::run(&args),
    };
    match result {
        Ok(status) => status,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
