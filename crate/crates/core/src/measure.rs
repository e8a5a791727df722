//! Projective Z measurement and what can be learned from it.
//!
//! Reading `R` redundant copies gives a binomial sample of `|a↑|²`; the
//! relative phase is invisible to these measurements. This module turns such
//! samples into [`Estimate`]s, re-prepares states from them, and evaluates the
//! survival probability of a qubit watched by repeated measurements.

use core::f64::consts::TAU;
use core::num::NonZeroU64;

use libm::{acos, cos, pow, sqrt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{evolve, NoiseModel};
use crate::state::{DensityMatrix, ProbPair, QubitState};
use crate::{Error, Result};

/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// The random stream used throughout the simulator.
pub type SimRng = ChaCha8Rng;

/// Root seed of a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl RngSeed {
    /// See [`substream`].
    pub fn stream(self, index: u64) -> SimRng {
        substream(self.0, index)
    }
}

/// Deterministic stream splitting: substream `index` of `seed` is the ChaCha8
/// generator seeded from `seed` and switched to stream number `index`.
///
/// Streams with different indices never overlap, so work item `i` can be run on
/// any thread and still see the same random numbers.
pub fn substream(seed: u64, index: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Result of a single Z measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Up,
    Down,
}

impl Outcome {
    /// The post-measurement projector.
    pub fn projector(self) -> DensityMatrix {
        match self {
            Outcome::Up => QubitState::UP.to_density(),
            Outcome::Down => QubitState::DOWN.to_density(),
        }
    }
}

/// Measures `rho` in the Z basis. Returns `Up` with probability `m00`, and
/// the state collapses onto the matching basis projector.
pub fn measure_z<R: Rng + ?Sized>(rho: &DensityMatrix, rng: &mut R) -> (Outcome, DensityMatrix) {
    let u: f64 = rng.gen();
    let outcome = if u < rho.m00() { Outcome::Up } else { Outcome::Down };
    (outcome, outcome.projector())
}

/// How many measurements stand behind an [`Estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleCount {
    /// Known exactly, e.g. at write time.
    Exact,
    Finite(NonZeroU64),
}

/// Estimated `|a↑|²` with a 95% Wilson score interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    p_hat: f64,
    n_samples: SampleCount,
    ci_low: f64,
    ci_high: f64,
}

impl Estimate {
    /// A probability known without sampling; the interval is degenerate.
    pub fn exact(p_up: f64) -> Result<Self> {
        let p = ProbPair::new(p_up)?.p_up();
        Ok(Self { p_hat: p, n_samples: SampleCount::Exact, ci_low: p, ci_high: p })
    }

    /// Estimate from `ups` successes in `n` trials.
    pub fn from_counts(ups: u64, n: u64) -> Result<Self> {
        let samples = NonZeroU64::new(n).ok_or(Error::EmptySample)?;
        if ups > n {
            return Err(Error::OutOfRange { name: "ups", value: ups as f64, low: 0.0, high: n as f64 });
        }
        let p_hat = ups as f64 / n as f64;
        let (lo, hi) = wilson_interval(ups, n, Z_95);
        Ok(Self {
            p_hat,
            n_samples: SampleCount::Finite(samples),
            ci_low: lo.clamp(0.0, p_hat),
            ci_high: hi.clamp(p_hat, 1.0),
        })
    }

    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn n_samples(&self) -> SampleCount {
        self.n_samples
    }

    pub fn ci_low(&self) -> f64 {
        self.ci_low
    }

    pub fn ci_high(&self) -> f64 {
        self.ci_high
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }

    pub fn probabilities(&self) -> ProbPair {
        // p_hat is a ratio of counts or a validated probability
        ProbPair::new(self.p_hat).unwrap_or_else(|_| unreachable!())
    }
}

/// Wilson score interval for `successes` out of `n`, at quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let n = n as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    (centre - half, centre + half)
}

/// `p̂ = #Up / n` with its Wilson interval.
pub fn estimate_up_probability(outcomes: &[Outcome]) -> Result<Estimate> {
    let ups = outcomes.iter().filter(|o| **o == Outcome::Up).count();
    Estimate::from_counts(ups as u64, outcomes.len() as u64)
}

/// Relative phase given to re-prepared states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhasePolicy {
    /// Real non-negative amplitudes; deterministic.
    Zero,
    /// Phase drawn uniformly from `[0, 2π)`.
    #[default]
    UniformRandom,
}

/// Re-prepares a state carrying the estimated magnitudes: start from `|↑⟩`,
/// rotate about y by `2·arccos(√p̂)`, then set the relative phase per
/// `policy`.
pub fn recreate_from_estimate<R: Rng + ?Sized>(est: &Estimate, policy: PhasePolicy, rng: &mut R) -> QubitState {
    let theta = 2.0 * acos(sqrt(est.p_hat()));
    let q = QubitState::UP.rotate_y(theta);
    match policy {
        PhasePolicy::Zero => q,
        PhasePolicy::UniformRandom => q.apply_relative_phase(rng.gen::<f64>() * TAU),
    }
}

fn check_zeno_args(omega: f64, total_time: f64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::NonPositiveInput("n_measurements"));
    }
    if !omega.is_finite() || omega < 0.0 {
        return Err(Error::InvalidNoiseModel("omega must be finite and >= 0"));
    }
    if total_time.is_nan() || total_time < 0.0 {
        return Err(Error::NegativeTime(total_time));
    }
    Ok(())
}

/// Probability that all `n` equally spaced Z measurements over `total_time`
/// find `|↑⟩` under coherent leakage at `omega`: `cos²(ωT/2n)ⁿ`.
pub fn zeno_survival_analytic(omega: f64, total_time: f64, n: u64) -> Result<f64> {
    check_zeno_args(omega, total_time, n)?;
    let c = cos(omega * total_time / (2.0 * n as f64));
    Ok(pow(c * c, n as f64))
}

/// Monte Carlo counterpart of [`zeno_survival_analytic`]: each trial starts in
/// `|↑⟩` and alternates leakage evolution with a Z measurement, failing at the
/// first `Down`.
pub fn zeno_survival_mc<R: Rng + ?Sized>(omega: f64, total_time: f64, n: u64, trials: u64, rng: &mut R) -> Result<f64> {
    check_zeno_args(omega, total_time, n)?;
    if trials == 0 {
        return Err(Error::NonPositiveInput("trials"));
    }
    let model = NoiseModel::CoherentLeakage { omega };
    let dt = total_time / n as f64;
    let mut survived = 0u64;
    for _ in 0..trials {
        let mut rho = QubitState::UP.to_density();
        let mut alive = true;
        for _ in 0..n {
            let (outcome, post) = measure_z(&evolve(&rho, dt, &model)?, rng);
            if outcome == Outcome::Down {
                alive = false;
                break;
            }
            rho = post;
        }
        survived += u64::from(alive);
    }
    Ok(survived as f64 / trials as f64)
}
