use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qdram::commands::{cmd_capacity, cmd_simulate, cmd_zeno, CapacityArgs, ZenoArgs, EXIT_USAGE};
use qdram::config::parse_config;
use qdram_core::measure::RngSeed;

/// Quantum DRAM refresh simulator.
#[derive(Debug, Parser)]
#[command(name = "qdram", version)]
struct Cli {
    /// Config document (TOML; see README for the keys).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; overrides `experiment.seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// CSV output path; overrides `experiment.output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured refresh experiment and write per-cycle CSV.
    Simulate,
    /// Tabulate analytic and Monte Carlo Zeno survival.
    Zeno(ZenoCli),
    /// Logical-qubit capacity of a dot array.
    Capacity(CapacityCli),
}

#[derive(Debug, Args)]
struct ZenoCli {
    /// Leakage rate in rad/s.
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    /// Total observation time in seconds (default gives omega*T = pi/2).
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    total_time: f64,
    /// Comma-separated numbers of measurements.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [1u64, 10, 100])]
    n_list: Vec<u64>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
}

#[derive(Debug, Args)]
struct CapacityCli {
    /// Dots per cm^2.
    #[arg(long, default_value_t = 1e11, conflicts_with = "pore_pitch")]
    dot_density: f64,
    /// Hexagonal pore pitch in nm; derives the dot density.
    #[arg(long)]
    pore_pitch: Option<f64>,
    /// Pore diameter in nm (must not exceed the pitch).
    #[arg(long, default_value_t = 52.0)]
    pore_diameter: f64,
    /// Dots per logical qubit.
    #[arg(long, default_value_t = 100)]
    redundancy: u64,
    /// Area in cm^2.
    #[arg(long, default_value_t = 1.0)]
    area: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let (mut out, mut err) = (std::io::stdout().lock(), std::io::stderr().lock());
    let seed = cli.seed.unwrap_or(0);
    let code = match cli.command {
        Command::Simulate => {
            let text = match &cli.config {
                Some(path) => match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return ExitCode::from(EXIT_USAGE);
                    }
                },
                None => String::new(),
            };
            let mut config = match parse_config(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: invalid config: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            if let Some(seed) = cli.seed {
                config.seed = RngSeed(seed);
            }
            if let Some(out) = cli.out {
                config.output_path = out;
            }
            cmd_simulate(&config, cli.threads, &mut out, &mut err)
        }
        Command::Zeno(z) => {
            let args = ZenoArgs { omega: z.omega, total_time: z.total_time, n_list: z.n_list, trials: z.trials };
            cmd_zeno(&args, RngSeed(seed), &mut out, &mut err)
        }
        Command::Capacity(c) => {
            let args = CapacityArgs {
                dot_density: c.dot_density,
                pore_pitch_nm: c.pore_pitch,
                pore_diameter_nm: c.pore_diameter,
                redundancy: c.redundancy,
                area_cm2: c.area,
            };
            cmd_capacity(&args, &mut out, &mut err)
        }
    };
    ExitCode::from(code)
}
