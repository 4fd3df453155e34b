use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use contomech::config::{ConfigErrors, ScenarioConfig, ScenarioKind};
use contomech::output::write_all;
use contomech::scenarios::{self, RunError};
use contomech::units::{parse_quantity, Dim};

#[derive(Parser)]
#[command(name = "contomech", version, about = "Continuum optomechanics in 1D waveguides")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write its outputs.
    Run(RunArgs),
    /// Print the built-in configuration of a scenario.
    Preset {
        /// custom, comb, backward_gain, intermodal_swap, array_convergence or regime_sweep
        name: String,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML configuration; without it the scenario preset is used.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario name, overriding the file's [scenario] name.
    #[arg(long)]
    scenario: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "contomech-out")]
    output: PathBuf,
    #[arg(long)]
    trajectories: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Time step with unit, e.g. "2 ps".
    #[arg(long, value_name = "QUANTITY")]
    dt_override: Option<String>,
    /// Check the configuration and exit.
    #[arg(long)]
    validate_only: bool,
}

fn scenario_kind(name: &str) -> Result<ScenarioKind, ConfigErrors> {
    ScenarioKind::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
        ConfigErrors(vec![format!("--scenario: unknown scenario `{name}` (one of {})", names.join(", "))])
    })
}

fn load(args: &RunArgs) -> Result<ScenarioConfig, RunError> {
    let kind = args.scenario.as_deref().map(scenario_kind).transpose()?;
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| RunError::Failed(format!("cannot read {}: {e}", path.display())))?;
            ScenarioConfig::parse(&text, kind)?
        }
        None => match kind {
            Some(k) => ScenarioConfig::preset(k),
            None => return Err(ConfigErrors(vec!["give --config or --scenario".into()]).into()),
        },
    };
    let mut errors = Vec::new();
    if let Some(n) = args.trajectories {
        cfg.ensemble.trajectories = n;
    }
    if let Some(s) = args.seed {
        cfg.ensemble.seed = s;
    }
    if let Some(text) = &args.dt_override {
        match parse_quantity(text, Dim::Time) {
            Ok(dt) => match cfg.scenario {
                ScenarioKind::Custom => cfg.integration.dt = dt,
                ScenarioKind::ArrayConvergence => cfg.array.reference_dt = dt,
                k => errors.push(format!("--dt-override: scenario {} derives its step from the grid", k.name())),
            },
            Err(e) => errors.push(format!("--dt-override: {}", e.0)),
        }
    }
    if let Err(ConfigErrors(more)) = cfg.validate() {
        errors.extend(more);
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(ConfigErrors(errors).into())
    }
}

fn run(args: &RunArgs) -> Result<(), RunError> {
    let cfg = load(args)?;
    if args.validate_only {
        println!("configuration valid: scenario {}", cfg.scenario.name());
        return Ok(());
    }
    let report = scenarios::run(&cfg)?;
    for w in &report.warnings {
        log::warn!("{w}");
    }
    let written = write_all(&args.output, &cfg, &report)?;
    for p in written {
        println!("{}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Preset { name } => match scenario_kind(&name) {
            Ok(k) => {
                print!("{}", ScenarioConfig::preset(k).effective());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprint!("{e}");
                ExitCode::from(2)
            }
        },
        Command::Run(args) => match run(&args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(RunError::Config(e)) => {
                eprint!("{e}");
                ExitCode::from(2)
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
