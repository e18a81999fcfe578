//! Command-line front end: runs scenarios from JSON configs, figure presets
//! and parameter sweeps, writing CSV or JSON.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use knob_core::scenario::{self, Grid, Output, ScenarioConfig};
use knob_core::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "knob", version, about = "Dephasing of two coupled qubits and Markovianity witnesses")]
struct Cli {
    /// Scenario configuration (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, or `-` for stdout.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Override the time grid as `t_end:n_points`.
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<Grid>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run a config with the outputs it lists.
    Run,
    /// Bath rate, exponent and effective single-qubit rates.
    Rates,
    /// Composite and reduced density matrices.
    Evolve,
    /// Trace distance of the initial state and its pair.
    Distance,
    /// Back-flow witness for the configured pair.
    Blp,
    /// Rate-sign witness for the composite and reduced dynamics.
    Rhp,
    /// The S_x-coupled case study (defaults to the fig3 preset).
    Casestudy,
    /// Run a built-in preset.
    Preset {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(scenario::PRESETS))]
        name: String,
        /// Print the preset configurations instead of running them.
        #[arg(long)]
        dump: bool,
    },
    /// Vary one parameter and summarize witnesses per value.
    Sweep {
        /// One of T, J, sigma2z, aux_population, eta, s, Omega, l.
        #[arg(long)]
        axis: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        values: Vec<f64>,
    },
}

fn parse_grid(s: &str) -> Result<Grid, String> {
    let (t, n) = s.split_once(':').ok_or("expected t_end:n_points")?;
    let grid = Grid {
        t_end: t.parse().map_err(|e| format!("t_end: {e}"))?,
        n_points: n.parse().map_err(|e| format!("n_points: {e}"))?,
    };
    grid.validate().map_err(|e| e.to_string())?;
    Ok(grid)
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_config() { EXIT_CONFIG } else { EXIT_NUMERICAL },
            message: e.to_string(),
        }
    }
}

fn config_failure(message: String) -> Failure {
    Failure {
        code: EXIT_CONFIG,
        message,
    }
}

fn load_config(cli: &Cli) -> Result<ScenarioConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_failure("--config is required for this command".into()))?;
    let text = fs::read_to_string(path).map_err(|e| config_failure(format!("{}: {e}", path.display())))?;
    let mut cfg = ScenarioConfig::from_json(&text)?;
    if let Some(g) = cli.grid {
        cfg.grid = g;
    }
    Ok(cfg)
}

fn with_outputs(mut cfg: ScenarioConfig, outputs: &[Output]) -> ScenarioConfig {
    cfg.outputs = outputs.to_vec();
    cfg
}

fn render_report(report: &scenario::RunReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    use Output::*;
    let single = |outputs: &[Output]| -> Result<String, Failure> {
        let cfg = with_outputs(load_config(cli)?, outputs);
        Ok(render_report(&scenario::run_scenario(&cfg)?, cli.format))
    };
    match &cli.command {
        Command::Run => {
            let cfg = load_config(cli)?;
            Ok(render_report(&scenario::run_scenario(&cfg)?, cli.format))
        }
        Command::Rates => single(&[Gamma, GammaExponent, GammaTilde, JTilde, GammaAux]),
        Command::Evolve => single(&[Composite, Reduced]),
        Command::Distance => single(&[DistanceComposite, DistanceReduced]),
        Command::Blp => single(&[DistanceComposite, DistanceReduced, Blp]),
        Command::Rhp => single(&[Gamma, GammaTilde, Rhp]),
        Command::Casestudy => {
            let cfg = match cli.config {
                Some(_) => load_config(cli)?,
                None => {
                    let mut cfg = scenario::preset_configs("fig3")?.remove(0);
                    if let Some(g) = cli.grid {
                        cfg.grid = g;
                    }
                    cfg
                }
            };
            if cfg.case_study.is_none() {
                return Err(config_failure("config has no `case_study` section".into()));
            }
            Ok(render_report(&scenario::run_scenario(&cfg)?, cli.format))
        }
        Command::Preset { name, dump } => {
            if *dump {
                let configs = scenario::preset_configs(name)?;
                return Ok(serde_json::to_string_pretty(&configs).expect("configs serialize") + "\n");
            }
            let mut report = if let Some(g) = cli.grid {
                let panels = scenario::preset_configs(name)?
                    .into_iter()
                    .map(|mut c| {
                        c.grid = g;
                        scenario::run_scenario(&c)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                scenario::PresetReport {
                    name: name.clone(),
                    panels,
                }
            } else {
                scenario::run_preset(name)?
            };
            report.name = name.clone();
            Ok(match cli.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            })
        }
        Command::Sweep { axis, values } => {
            let cfg = load_config(cli)?;
            let rows = scenario::sweep(&cfg, axis, values)?;
            Ok(match cli.format {
                Format::Csv => scenario::sweep_to_csv(axis, &rows),
                Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize"),
            })
        }
    }
}

fn write_output(target: &str, text: &str) -> std::io::Result<()> {
    if target == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()
    } else {
        fs::write(target, text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli).and_then(|text| {
        write_output(&cli.out, &text).map_err(|e| config_failure(format!("writing {}: {e}", cli.out)))
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("knob: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
