use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use digiq_cli::runner::evolution_circuit;
use digiq_cli::{figure_preset, run, verify, CliError, ExperimentConfig, Overrides};

#[derive(Parser)]
#[command(name = "digiq", version, about = "Digital quantum simulation of spin models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment config and print its CSV table.
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Run a figure preset (fig2, fig4a, fig4b, fig4c, fig6a, fig6b, fig6c).
    Figure {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the preset config instead of running it.
        #[arg(long)]
        print_config: bool,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
    /// Check every decomposition identity against dense oracles.
    Verify,
    /// Print the compiled circuit for the final time point of a config.
    DumpCircuit {
        config: PathBuf,
        #[command(flatten)]
        overrides: OverrideArgs,
    },
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    gateset: Option<String>,
    #[arg(long)]
    order: Option<u8>,
    #[arg(long, conflicts_with = "eps")]
    steps: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    growth: Option<String>,
}

impl From<OverrideArgs> for Overrides {
    fn from(a: OverrideArgs) -> Self {
        Overrides { gateset: a.gateset, order: a.order, steps: a.steps, eps: a.eps, growth: a.growth }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<bool, CliError> {
    match command {
        Command::Run { config, out, overrides } => {
            let mut c = ExperimentConfig::from_file(&config)?;
            c.apply(&overrides.into());
            emit(&run(&c)?.to_csv(), out.as_deref())?;
        }
        Command::Figure { id, out, print_config, overrides } => {
            let mut c = figure_preset(&id)?;
            c.apply(&overrides.into());
            let text = if print_config { c.to_toml() } else { run(&c)?.to_csv() };
            emit(&text, out.as_deref())?;
        }
        Command::Verify => {
            let checks = verify::verify_suite();
            print!("{}", verify::report(&checks));
            return Ok(checks.iter().all(|c| c.passed));
        }
        Command::DumpCircuit { config, overrides } => {
            let mut c = ExperimentConfig::from_file(&config)?;
            c.apply(&overrides.into());
            let exp = c.validate()?;
            let t = *exp.times.last().expect("non-empty grid");
            let (circuit, steps) = evolution_circuit(&exp, &exp.plan, t)?;
            println!("# t = {t}, n_steps_used = {steps}, gateset = {}", exp.gateset);
            print!("{}", circuit.to_text());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
