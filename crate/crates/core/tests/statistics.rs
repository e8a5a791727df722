//! Ensemble statements about the refresh schemes that only hold on average.

use qdram_core::channels::NoiseModel;
use qdram_core::measure::RngSeed;
use qdram_core::measure::{substream, PhasePolicy};
use qdram_core::memory::{
    aggregate, run_experiment, ExperimentConfig, InitialState, LogicalQubit, MeanStd, RefreshPolicy,
};
use qdram_core::state::QubitState;
use qdram_core::Complex64;

fn noiseless_mr(p_up: f64, cycles: u64, repetitions: u64, phase_policy: PhasePolicy) -> ExperimentConfig {
    ExperimentConfig {
        policy: RefreshPolicy::MeasureRecreate { period: 1.0, phase_policy },
        redundancy: 100,
        cycles,
        repetitions,
        noise: NoiseModel::Noiseless,
        initial: InitialState { p_up, relative_phase: 0.0 },
    }
}

#[test]
fn measure_recreate_is_unbiased() {
    let reps = 10_000;
    for p in [0.2, 0.5, 0.9] {
        let runs = run_experiment(&noiseless_mr(p, 1, reps, PhasePolicy::Zero), RngSeed(31)).unwrap();
        let s = aggregate(&runs)[0].p_hat;
        let sigma = (p * (1.0 - p) / 100.0 / reps as f64).sqrt();
        assert!((s.mean - p).abs() < 3.0 * sigma, "p = {p}: {s:?}");
    }
}

#[test]
fn stored_magnitude_random_walk() {
    let runs = run_experiment(&noiseless_mr(0.5, 10, 10_000, PhasePolicy::UniformRandom), RngSeed(32)).unwrap();
    let summary = aggregate(&runs);
    // Var after C resamplings of R copies: p(1−p)(1 − (1 − 1/R)^C), and its
    // small-C approximation C·p(1−p)/R.
    let exact = (0.25_f64 * (1.0 - 0.99_f64.powi(10))).sqrt();
    let approx = (10.0_f64 * 0.25 / 100.0).sqrt();
    let std = summary[9].p_hat.std;
    assert!((std - exact).abs() < 0.05 * exact, "{std} vs {exact}");
    assert!((std - approx).abs() < 0.1 * approx);
    assert!((summary[0].p_hat.std - 0.05).abs() < 0.005);
}

#[test]
fn random_phase_destroys_ensemble_coherence() {
    let mut rng = substream(33, 0);
    let q = QubitState::from_probability(0.5, 0.8).unwrap();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut full = Vec::new();
    let reps = 2000;
    for _ in 0..reps {
        let mut lq = LogicalQubit::with_state(100, q).unwrap();
        full.push(lq.refresh_measure_recreate(PhasePolicy::UniformRandom, &mut rng).full_fidelity);
        sum += lq.mean_state().m01();
    }
    assert!((sum / reps as f64).norm() < 0.01);
    // without coherence the best overlap with a phased |+⟩ is about 1/2
    assert!((MeanStd::of(&full).mean - 0.5).abs() < 0.02);

    // Zero phase keeps a real, positive coherence instead.
    let mut lq = LogicalQubit::with_state(100, q).unwrap();
    lq.refresh_measure_recreate(PhasePolicy::Zero, &mut rng);
    assert!(lq.mean_state().m01().re > 0.45);
}

#[test]
fn zeno_does_not_stop_markovian_relaxation() {
    let (t2, reps, intervals) = (1.0, 4000, 10u64);
    let model = NoiseModel::markovian(2.0 * t2, t2).unwrap();
    let dt = t2 / intervals as f64;
    let mut rng = substream(34, 0);
    let mut ups = 0usize;
    let mut cells = 0usize;
    for _ in 0..reps {
        let mut lq = LogicalQubit::with_state(10, QubitState::DOWN).unwrap();
        for _ in 0..intervals {
            lq.step(dt, &model).unwrap();
            lq.refresh_zeno(&mut rng);
        }
        ups += lq.cells().iter().filter(|c| c.state().m00() == 1.0).count();
        cells += lq.redundancy();
    }
    let mut unmeasured = LogicalQubit::with_state(1, QubitState::DOWN).unwrap();
    unmeasured.step(t2, &model).unwrap();
    let p = unmeasured.cells()[0].state().m00();
    let freq = ups as f64 / cells as f64;
    let sigma = (p * (1.0 - p) / cells as f64).sqrt();
    assert!((freq - p).abs() < 3.0 * sigma, "{freq} vs {p}");
}
