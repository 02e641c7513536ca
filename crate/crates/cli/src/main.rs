use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mollow_cli::validate::{self, Settings};
use mollow_cli::{CliError, Runner, Scenario, ScenarioConfig};

#[derive(Parser)]
#[command(name = "sim", version, about = "Driven atom with two cavity modes: spectra, fluxes and photon correlations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override a config key (repeatable)
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Power spectra of the atom, each mode and the total cavity field
    Spectrum(ScenarioArgs),
    /// Steady-state cavity flux over a parameter sweep
    FluxSweep(ScenarioArgs),
    /// Second-order correlations at zero delay or versus delay
    G2(ScenarioArgs),
    /// Cauchy-Schwarz report for the two cavity modes
    CsBounds(ScenarioArgs),
    /// Data behind a figure: fig1, fig2, fig3, fig4, fig6 or fig7
    Figure {
        name: String,
        #[command(flatten)]
        args: ScenarioArgs,
    },
    /// Run the acceptance criteria
    Validate {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion numbers (default: all)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        /// Also write the report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    mhz: bool,
}

fn run_scenario(scenario: Scenario, args: ScenarioArgs, extra: Vec<String>) -> Result<(), CliError> {
    let mut set = args.common.set;
    set.extend(extra);
    let cfg = ScenarioConfig::load(args.common.config.as_deref(), &set)?;
    let mut runner = Runner::new(&cfg, scenario, &args.out, args.mhz)?;
    let summary = runner.run(scenario)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    for p in &runner.out.written {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn run_validate(common: Common, only: Vec<u8>, out: Option<PathBuf>) -> Result<(), CliError> {
    let cfg = ScenarioConfig::load(common.config.as_deref(), &common.set)?;
    let settings = Settings::from_config(&cfg);
    let ids = if only.is_empty() { validate::all_ids() } else { only };
    let report = validate::run(&settings, &ids);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for o in &report.outcomes {
        println!("{}", o.line());
    }
    if let Some(dir) = out {
        let mut o = mollow_cli::output::OutputDir::create(&dir, Vec::new())?;
        o.json("validation.json", &report)?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        let failed: Vec<String> = report
            .outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.id.to_string())
            .collect();
        Err(CliError::Validation(format!("criteria {} failed", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Spectrum(a) => run_scenario(Scenario::Spectrum, a, vec![]),
        Command::FluxSweep(a) => run_scenario(Scenario::FluxSweep, a, vec![]),
        Command::G2(a) => run_scenario(Scenario::G2, a, vec![]),
        Command::CsBounds(a) => run_scenario(Scenario::CsBounds, a, vec![]),
        Command::Figure { name, args } => run_scenario(Scenario::Figure, args, vec![format!("figure={name}")]),
        Command::Validate { common, only, out } => run_validate(common, only, out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
