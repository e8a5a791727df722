//! The `simulate`, `zeno` and `capacity` subcommands.
//!
//! Each command writes its report to `out`, diagnostics to `err`, and returns
//! the process exit code.

use std::io::Write;

use qdram_core::measure::{substream, zeno_survival_analytic, zeno_survival_mc, RngSeed};
use qdram_core::memory::{capacity, density_from_pore_geometry, CycleSummary};

use crate::config::SimulateConfig;
use crate::output::write_csv;
use crate::runner::{simulate, RunError};

pub const EXIT_OK: u8 = 0;
/// Bad arguments, bad config or an I/O failure.
pub const EXIT_USAGE: u8 = 1;
/// A refresh protocol's precondition failed during the simulation.
pub const EXIT_PRECONDITION: u8 = 2;

pub fn cmd_simulate(config: &SimulateConfig, threads: usize, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let rows = match simulate(&config.experiment, config.seed, threads) {
        Ok(rows) => rows,
        Err(RunError::Simulation(e @ qdram_core::Error::AtCycle { cycle, repetition, .. })) => {
            let _ = writeln!(
                err,
                "error: {} refresh failed at cycle {cycle} (repetition {repetition}): {}",
                config.experiment.policy.name(),
                e.root()
            );
            return EXIT_PRECONDITION;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let std_file = match write_csv(&config.output_path, &rows) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot write {}: {e}", config.output_path.display());
            return EXIT_USAGE;
        }
    };
    match write_summary(config, &rows, &std_file, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn write_summary(
    config: &SimulateConfig,
    rows: &[CycleSummary],
    std_file: &std::path::Path,
    out: &mut dyn Write,
) -> std::io::Result<()> {
    writeln!(out, "# effective configuration")?;
    write!(out, "{config}")?;
    writeln!(out)?;
    writeln!(out, "# results")?;
    writeln!(out, "cycles written: {}", rows.len())?;
    if let Some(last) = rows.last() {
        writeln!(
            out,
            "final cycle {} at t = {:e} s (mean ± std over {} repetitions):",
            last.cycle_index, last.wall_time, config.experiment.repetitions
        )?;
        writeln!(out, "  p_hat              {:.6} ± {:.6}", last.p_hat.mean, last.p_hat.std)?;
        writeln!(out, "  magnitude_fidelity {:.6} ± {:.6}", last.magnitude_fidelity.mean, last.magnitude_fidelity.std)?;
        writeln!(out, "  full_fidelity      {:.6} ± {:.6}", last.full_fidelity.mean, last.full_fidelity.std)?;
    }
    writeln!(out, "means: {}", config.output_path.display())?;
    writeln!(out, "standard deviations: {}", std_file.display())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZenoArgs {
    pub omega: f64,
    pub total_time: f64,
    pub n_list: Vec<u64>,
    pub trials: u64,
}

/// Analytic vs. Monte Carlo survival for each `n`. Row `i` uses substream `i`.
pub fn cmd_zeno(args: &ZenoArgs, seed: RngSeed, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    if args.n_list.is_empty() {
        let _ = writeln!(err, "error: at least one n is required");
        return EXIT_USAGE;
    }
    if args.trials == 0 {
        let _ = writeln!(err, "error: trials must be positive");
        return EXIT_USAGE;
    }
    let mut rows = Vec::with_capacity(args.n_list.len());
    for (i, &n) in args.n_list.iter().enumerate() {
        let analytic = zeno_survival_analytic(args.omega, args.total_time, n);
        let mc = zeno_survival_mc(args.omega, args.total_time, n, args.trials, &mut substream(seed.0, i as u64));
        match (analytic, mc) {
            (Ok(a), Ok(m)) => rows.push((n, a, m)),
            (Err(e), _) | (_, Err(e)) => {
                let _ = writeln!(err, "error: n = {n}: {e}");
                return EXIT_USAGE;
            }
        }
    }
    let mut report = || -> std::io::Result<()> {
        writeln!(
            out,
            "omega = {} rad/s, T = {} s, omega*T = {}, trials = {}",
            args.omega,
            args.total_time,
            args.omega * args.total_time,
            args.trials
        )?;
        writeln!(out, "{:>8} {:>16} {:>12} {:>12}", "n", "analytic", "monte_carlo", "sigma")?;
        for &(n, a, m) in &rows {
            let sigma = (a * (1.0 - a) / args.trials as f64).sqrt();
            writeln!(out, "{n:>8} {a:>16.12} {m:>12.6} {sigma:>12.6}")?;
        }
        Ok(())
    };
    match report() {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityArgs {
    /// Dots per cm²; used unless `pore_pitch_nm` is given.
    pub dot_density: f64,
    pub pore_pitch_nm: Option<f64>,
    pub pore_diameter_nm: f64,
    pub redundancy: u64,
    pub area_cm2: f64,
}

pub fn cmd_capacity(args: &CapacityArgs, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let density = match args.pore_pitch_nm {
        Some(pitch) => match density_from_pore_geometry(args.pore_diameter_nm, pitch) {
            Ok(d) => d,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
        },
        None => args.dot_density,
    };
    let qubits = match capacity(density, args.redundancy, args.area_cm2) {
        Ok(q) => q,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut report = || -> std::io::Result<()> {
        if let Some(pitch) = args.pore_pitch_nm {
            writeln!(out, "hexagonal lattice: pitch {pitch} nm, pore diameter {} nm", args.pore_diameter_nm)?;
        }
        writeln!(out, "dot density: {density:e} dots/cm^2")?;
        writeln!(out, "redundancy: {}, area: {} cm^2", args.redundancy, args.area_cm2)?;
        writeln!(out, "{qubits} logical qubits")?;
        writeln!(out, "logical qubits per cm^2: {:e}", density / args.redundancy as f64)?;
        writeln!(out, "log2(state-space dimension): {qubits}")?;
        Ok(())
    };
    match report() {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, PI};

    use super::*;

    fn run_capacity(args: &CapacityArgs) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cmd_capacity(args, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn default_args() -> CapacityArgs {
        CapacityArgs { dot_density: 1e11, pore_pitch_nm: None, pore_diameter_nm: 52.0, redundancy: 100, area_cm2: 1.0 }
    }

    #[test]
    fn capacity_examples() {
        let (code, out, _) = run_capacity(&default_args());
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("1000000000 logical qubits"), "{out}");
        assert!(out.contains("log2(state-space dimension): 1000000000"));

        let (code, out, _) = run_capacity(&CapacityArgs { pore_pitch_nm: Some(100.0), ..default_args() });
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("115470053 logical qubits"), "{out}");

        let (code, _, err) = run_capacity(&CapacityArgs { redundancy: 0, ..default_args() });
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("redundancy"));

        let (code, _, err) = run_capacity(&CapacityArgs { pore_pitch_nm: Some(50.0), ..default_args() });
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("exceeds pitch"));
    }

    fn run_zeno(args: &ZenoArgs) -> (u8, Vec<Vec<f64>>) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = cmd_zeno(args, RngSeed(1), &mut out, &mut err);
        let rows = String::from_utf8(out)
            .unwrap()
            .lines()
            .skip(2)
            .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
            .collect();
        (code, rows)
    }

    #[test]
    fn zeno_table() {
        let (code, rows) = run_zeno(&ZenoArgs { omega: 1.0, total_time: PI, n_list: vec![1], trials: 100 });
        assert_eq!(code, EXIT_OK);
        assert_eq!(rows[0][1], 0.0);

        let (code, rows) =
            run_zeno(&ZenoArgs { omega: 2.0, total_time: FRAC_PI_2 / 2.0, n_list: vec![1, 10, 100], trials: 1000 });
        assert_eq!(code, EXIT_OK);
        let analytic: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        assert!(analytic.windows(2).all(|w| w[0] < w[1]));
        assert!((analytic[2] - 0.993850420375).abs() < 1e-11);

        let bad = ZenoArgs { omega: 1.0, total_time: 1.0, n_list: vec![0], trials: 10 };
        assert_eq!(run_zeno(&bad).0, EXIT_USAGE);
        let bad = ZenoArgs { omega: 1.0, total_time: 1.0, n_list: vec![1], trials: 0 };
        assert_eq!(run_zeno(&bad).0, EXIT_USAGE);
    }
}
