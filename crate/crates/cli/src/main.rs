use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdcavity_cli::config::{parse_config, Format, ScenarioConfig};
use qdcavity_cli::scenarios::{self, run_scenario, ScenarioError, REGISTRY};

/// Quantum-dot cavity simulations and the analyses that go with them.
#[derive(Parser)]
#[command(name = "qdcavity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a config file, by name, or both (flags win).
    Run {
        scenario: Option<String>,
        #[arg(long, short)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<Format>,
        /// Trajectory worker threads; 0 = all cores.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        trajectories: Option<usize>,
    },
    /// List the available scenarios.
    List,
    /// Check a config file and print its normalised form.
    Validate { config: PathBuf },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_TARGET: u8 = 4;

fn load(path: &PathBuf) -> Result<ScenarioConfig, ExitCode> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {e}", path.display());
        ExitCode::from(EXIT_CONFIG)
    })?;
    parse_config(&text).map_err(|errors| {
        for e in errors {
            eprintln!("{}:{e}", path.display());
        }
        ExitCode::from(EXIT_CONFIG)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for s in REGISTRY {
                println!("{:<14} {:<10} {}", s.name, s.budget, s.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(c) => {
                print!("{}", c.to_config_string());
                ExitCode::SUCCESS
            }
            Err(code) => code,
        },
        Command::Run {
            scenario,
            config,
            seed,
            out,
            format,
            jobs,
            trajectories,
        } => {
            let mut cfg = match (&config, &scenario) {
                (Some(path), _) => match load(path) {
                    Ok(c) => c,
                    Err(code) => return code,
                },
                (None, Some(name)) => {
                    let Some(seed) = seed else {
                        eprintln!("a seed is required: pass --seed or use a config file");
                        return ExitCode::from(EXIT_CONFIG);
                    };
                    ScenarioConfig::defaults(name, seed)
                }
                (None, None) => {
                    eprintln!("name a scenario or pass --config; `qdcavity list` shows the choices");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(name) = scenario {
                cfg.scenario = name;
            }
            if scenarios::find(&cfg.scenario).is_none() {
                eprintln!("unknown scenario `{}`; `qdcavity list` shows the choices", cfg.scenario);
                return ExitCode::from(EXIT_CONFIG);
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            if let Some(f) = format {
                cfg.format = f;
            }
            if let Some(j) = jobs {
                cfg.trajectories.jobs = j;
            }
            if let Some(n) = trajectories {
                if n == 0 {
                    eprintln!("--trajectories must be at least 1");
                    return ExitCode::from(EXIT_CONFIG);
                }
                cfg.trajectories.count = n;
            }
            match run_scenario(&cfg) {
                Ok(report) => {
                    print!("{}", report.to_text());
                    if report.missed_targets() {
                        ExitCode::from(EXIT_TARGET)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e @ ScenarioError::Config(_)) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_CONFIG)
                }
                Err(e) => {
                    eprintln!("{e}");
                    ExitCode::from(EXIT_NUMERICAL)
                }
            }
        }
    }
}
