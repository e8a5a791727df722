//! Parallel execution of repetitions.
//!
//! Repetition `i` always draws from substream `i` of the root seed and results
//! are reduced in repetition order, so the output does not depend on the
//! number of threads.

use qdram_core::measure::RngSeed;
use qdram_core::memory::{aggregate, run_repetition, CycleSummary, ExperimentConfig, TimeSeries};
use rayon::prelude::*;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Simulation(#[from] qdram_core::Error),
    #[error("cannot start thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs every repetition on a pool of `threads` workers (0 = rayon default).
/// On failure, returns the error of the lowest failing repetition.
pub fn run_parallel(config: &ExperimentConfig, seed: RngSeed, threads: usize) -> Result<Vec<TimeSeries>, RunError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let results: Vec<_> =
        pool.install(|| (0..config.repetitions).into_par_iter().map(|r| run_repetition(config, seed, r)).collect());
    Ok(results.into_iter().collect::<Result<Vec<_>, _>>()?)
}

/// [`run_parallel`] followed by per-cycle aggregation.
pub fn simulate(config: &ExperimentConfig, seed: RngSeed, threads: usize) -> Result<Vec<CycleSummary>, RunError> {
    Ok(aggregate(&run_parallel(config, seed, threads)?))
}

#[cfg(test)]
mod tests {
    use qdram_core::channels::NoiseModel;
    use qdram_core::measure::PhasePolicy;
    use qdram_core::memory::{run_experiment, InitialState, RefreshPolicy};

    use super::*;

    fn config() -> ExperimentConfig {
        ExperimentConfig {
            policy: RefreshPolicy::MeasureRecreate { period: 1e-7, phase_policy: PhasePolicy::UniformRandom },
            redundancy: 20,
            cycles: 5,
            repetitions: 37,
            noise: NoiseModel::markovian(2e-6, 1e-6).unwrap(),
            initial: InitialState { p_up: 0.3, relative_phase: 0.5 },
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let sequential = run_experiment(&config(), RngSeed(3)).unwrap();
        for threads in [1, 2, 5] {
            assert_eq!(run_parallel(&config(), RngSeed(3), threads).unwrap(), sequential);
        }
    }

    #[test]
    fn reports_first_failing_repetition() {
        let cfg = ExperimentConfig { policy: RefreshPolicy::Erasure { period: 1e-7 }, ..config() };
        match run_parallel(&cfg, RngSeed(3), 4) {
            Err(RunError::Simulation(qdram_core::Error::AtCycle { repetition, cycle, .. })) => {
                assert_eq!((repetition, cycle), (0, 1));
            }
            other => panic!("{other:?}"),
        }
    }
}
