//! The memory itself: logical qubits stored redundantly in `R` quantum dots,
//! free decoherence between refreshes, and the three refresh schemes.
//!
//! - **Measure and recreate**: read every copy, estimate `|a↑|²`, re-inject
//!   `|↑⟩` and rotate each dot back to the estimated magnitudes. The relative
//!   phase is lost.
//! - **Zeno**: measure every copy at a fixed interval and do nothing else.
//! - **Erasure**: entangle each copy with a detector and erase the record,
//!   restoring the full state including phase. Only defined for pure cells.

use alloc::vec::Vec;

use libm::{floor, sqrt};
use rand::Rng;

use crate::channels::{evolve, NoiseModel};
use crate::erasure::erase_and_recover;
use crate::measure::{
    estimate_up_probability, measure_z, recreate_from_estimate, Estimate, Outcome, PhasePolicy, RngSeed,
};
use crate::state::{DensityMatrix, ProbPair, QubitState};
use crate::{Error, Result};

/// Cells must have purity at least `1 − ERASURE_PURITY_TOLERANCE` to be erased.
pub const ERASURE_PURITY_TOLERANCE: f64 = 1e-9;

/// One quantum dot holding one quanton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemoryCell {
    state: DensityMatrix,
    last_refresh: f64,
    intact: bool,
}

impl MemoryCell {
    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    /// Simulated time of the last write or refresh, in seconds.
    pub fn last_refresh(&self) -> f64 {
        self.last_refresh
    }

    /// False once a Zeno observation has found the cell away from the basis
    /// state it was written in.
    pub fn intact(&self) -> bool {
        self.intact
    }
}

/// Refresh scheme and its period in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefreshPolicy {
    MeasureRecreate { period: f64, phase_policy: PhasePolicy },
    Zeno { interval: f64 },
    Erasure { period: f64 },
}

impl RefreshPolicy {
    pub fn period(&self) -> f64 {
        match *self {
            RefreshPolicy::MeasureRecreate { period, .. } => period,
            RefreshPolicy::Zeno { interval } => interval,
            RefreshPolicy::Erasure { period } => period,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RefreshPolicy::MeasureRecreate { .. } => "measure_recreate",
            RefreshPolicy::Zeno { .. } => "zeno",
            RefreshPolicy::Erasure { .. } => "erasure",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = self.period();
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::NonPositiveInput("refresh period"));
        }
        Ok(())
    }
}

/// What one refresh cycle achieved, scored against the written state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefreshReport {
    pub cycle_index: u64,
    /// Measured `|a↑|²` estimate (mean cell population for erasure, which
    /// does not measure the spin).
    pub p_hat: f64,
    /// [`ProbPair::magnitude_fidelity`] of `p_hat` against the reference.
    pub magnitude_fidelity: f64,
    /// Mean `⟨ref|ρ|ref⟩` over cells. For Zeno refreshes this is the fraction
    /// of cells that are still intact.
    pub full_fidelity: f64,
    /// Simulated time in seconds.
    pub wall_time: f64,
}

/// Reports ordered by strictly increasing cycle index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    reports: Vec<RefreshReport>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, report: RefreshReport) -> Result<()> {
        if let Some(last) = self.reports.last() {
            if report.cycle_index <= last.cycle_index {
                return Err(Error::NonIncreasingCycle { last: last.cycle_index, next: report.cycle_index });
            }
        }
        self.reports.push(report);
        Ok(())
    }

    pub fn reports(&self) -> &[RefreshReport] {
        &self.reports
    }

    pub fn len(&self) -> usize {
        self.reports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reports.is_empty()
    }
}

/// One logical qubit spread over `R` cells.
///
/// The reference state is bookkeeping for scoring only; no refresh reads it.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalQubit {
    cells: Vec<MemoryCell>,
    reference: QubitState,
    expected: Outcome,
    stored_estimate: Estimate,
    clock: f64,
    cycles: u64,
}

impl LogicalQubit {
    /// `redundancy` fresh cells, all holding `|↑⟩`.
    pub fn new(redundancy: usize) -> Result<Self> {
        if redundancy == 0 {
            return Err(Error::NoCells);
        }
        let mut lq = Self {
            cells: Vec::with_capacity(redundancy),
            reference: QubitState::UP,
            expected: Outcome::Up,
            stored_estimate: Estimate::exact(1.0)?,
            clock: 0.0,
            cycles: 0,
        };
        lq.cells.resize(redundancy, MemoryCell { state: QubitState::UP.to_density(), last_refresh: 0.0, intact: true });
        Ok(lq)
    }

    /// Allocates `redundancy` cells and writes `q` into all of them.
    pub fn with_state(redundancy: usize, q: QubitState) -> Result<Self> {
        let mut lq = Self::new(redundancy)?;
        lq.write(q);
        Ok(lq)
    }

    /// Writes `q` into every cell and records it as the reference.
    pub fn write(&mut self, q: QubitState) {
        let rho = q.to_density();
        for cell in &mut self.cells {
            *cell = MemoryCell { state: rho, last_refresh: self.clock, intact: true };
        }
        let p_up = q.probabilities().p_up();
        self.reference = q;
        self.expected = if p_up >= 0.5 { Outcome::Up } else { Outcome::Down };
        self.stored_estimate = Estimate::exact(p_up).unwrap_or_else(|_| unreachable!());
    }

    pub fn cells(&self) -> &[MemoryCell] {
        &self.cells
    }

    pub fn redundancy(&self) -> usize {
        self.cells.len()
    }

    pub fn reference(&self) -> &QubitState {
        &self.reference
    }

    pub fn stored_estimate(&self) -> &Estimate {
        &self.stored_estimate
    }

    /// Simulated time in seconds.
    pub fn clock(&self) -> f64 {
        self.clock
    }

    /// Free evolution of every cell for `dt` seconds.
    pub fn step(&mut self, dt: f64, model: &NoiseModel) -> Result<()> {
        if dt.is_nan() || dt < 0.0 {
            return Err(Error::NegativeTime(dt));
        }
        model.validate()?;
        // Same rho in, same rho out: cells written together share one evolution.
        let mut cache: Option<(DensityMatrix, DensityMatrix)> = None;
        for cell in &mut self.cells {
            let next = match cache {
                Some((before, after)) if before == cell.state => after,
                _ => {
                    let after = evolve(&cell.state, dt, model)?;
                    cache = Some((cell.state, after));
                    after
                }
            };
            cell.state = next;
        }
        self.clock += dt;
        Ok(())
    }

    /// Mean `⟨ref|ρ|ref⟩` over cells.
    pub fn mean_fidelity(&self) -> f64 {
        let total: f64 = self.cells.iter().map(|c| c.state.fidelity_with_pure(&self.reference)).sum();
        total / self.cells.len() as f64
    }

    /// Average density matrix over the cells.
    pub fn mean_state(&self) -> DensityMatrix {
        let n = self.cells.len() as f64;
        let (mut m00, mut m01, mut m11) = (0.0, num_complex::Complex64::new(0.0, 0.0), 0.0);
        for c in &self.cells {
            m00 += c.state.m00();
            m01 += c.state.m01();
            m11 += c.state.m11();
        }
        DensityMatrix::from_parts_unchecked(m00 / n, m01 / n, m11 / n)
    }

    fn measure_all<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Vec<Outcome> {
        self.cells
            .iter_mut()
            .map(|cell| {
                let (outcome, post) = measure_z(&cell.state, rng);
                cell.state = post;
                outcome
            })
            .collect()
    }

    fn next_report(&mut self, p_hat: f64, full_fidelity: f64) -> RefreshReport {
        self.cycles += 1;
        let reference = self.reference.probabilities();
        let measured = ProbPair::new(p_hat.clamp(0.0, 1.0)).unwrap_or_else(|_| unreachable!());
        RefreshReport {
            cycle_index: self.cycles,
            p_hat,
            magnitude_fidelity: measured.magnitude_fidelity(&reference),
            full_fidelity,
            wall_time: self.clock,
        }
    }

    /// Reads all cells destructively and returns the magnitude estimate.
    /// Cells are left collapsed.
    pub fn read<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Estimate {
        let outcomes = self.measure_all(rng);
        let est = estimate_up_probability(&outcomes).unwrap_or_else(|_| unreachable!());
        self.stored_estimate = est;
        est
    }

    /// Measure every cell, estimate `|a↑|²` from the `R` outcomes, and
    /// re-prepare every cell from that estimate.
    pub fn refresh_measure_recreate<R: Rng + ?Sized>(
        &mut self,
        phase_policy: PhasePolicy,
        rng: &mut R,
    ) -> RefreshReport {
        let est = self.read(rng);
        for cell in &mut self.cells {
            cell.state = recreate_from_estimate(&est, phase_policy, rng).to_density();
            cell.last_refresh = self.clock;
        }
        let fidelity = self.mean_fidelity();
        self.next_report(est.p_hat(), fidelity)
    }

    /// Observe every cell in the Z basis and leave it collapsed. The report's
    /// `full_fidelity` is the fraction of cells never observed away from the
    /// written basis state.
    pub fn refresh_zeno<R: Rng + ?Sized>(&mut self, rng: &mut R) -> RefreshReport {
        let outcomes = self.measure_all(rng);
        for (cell, outcome) in self.cells.iter_mut().zip(&outcomes) {
            cell.intact &= *outcome == self.expected;
            cell.last_refresh = self.clock;
        }
        let est = estimate_up_probability(&outcomes).unwrap_or_else(|_| unreachable!());
        self.stored_estimate = est;
        let intact = self.cells.iter().filter(|c| c.intact).count();
        let survival = intact as f64 / self.cells.len() as f64;
        self.next_report(est.p_hat(), survival)
    }

    /// Run every cell through the erasure protocol. Fails without touching any
    /// cell if one of them is mixed.
    pub fn refresh_erasure<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<RefreshReport> {
        let pure = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                c.state.to_pure_state(ERASURE_PURITY_TOLERANCE).map_err(|e| match e {
                    Error::MixedStateCell { purity, .. } => Error::MixedStateCell { cell: i, purity },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for (cell, q) in self.cells.iter_mut().zip(pure) {
            cell.state = erase_and_recover(&q, rng).recovered.to_density();
            cell.last_refresh = self.clock;
        }
        let population = self.mean_state().m00();
        let fidelity = self.mean_fidelity();
        Ok(self.next_report(population, fidelity))
    }

    /// Applies the refresh selected by `policy`.
    pub fn refresh<R: Rng + ?Sized>(&mut self, policy: &RefreshPolicy, rng: &mut R) -> Result<RefreshReport> {
        match *policy {
            RefreshPolicy::MeasureRecreate { phase_policy, .. } => Ok(self.refresh_measure_recreate(phase_policy, rng)),
            RefreshPolicy::Zeno { .. } => Ok(self.refresh_zeno(rng)),
            RefreshPolicy::Erasure { .. } => self.refresh_erasure(rng),
        }
    }
}

/// Number of logical qubits: `⌊density · area / redundancy⌋`.
pub fn capacity(dot_density: f64, redundancy: u64, area: f64) -> Result<u64> {
    if !dot_density.is_finite() || dot_density <= 0.0 {
        return Err(Error::NonPositiveInput("dot_density"));
    }
    if redundancy == 0 {
        return Err(Error::NonPositiveInput("redundancy"));
    }
    if !area.is_finite() || area <= 0.0 {
        return Err(Error::NonPositiveInput("area"));
    }
    Ok(floor(dot_density * area / redundancy as f64) as u64)
}

const NM2_PER_CM2: f64 = 1e14;

/// Dots per cm² for a hexagonal pore lattice: `2 / (√3 · pitch²)`.
pub fn density_from_pore_geometry(pore_diameter_nm: f64, pitch_nm: f64) -> Result<f64> {
    if !pore_diameter_nm.is_finite() || pore_diameter_nm <= 0.0 {
        return Err(Error::NonPositiveInput("pore_diameter"));
    }
    if !pitch_nm.is_finite() || pitch_nm <= 0.0 {
        return Err(Error::NonPositiveInput("pitch"));
    }
    if pore_diameter_nm > pitch_nm {
        return Err(Error::GeometryViolation { diameter: pore_diameter_nm, pitch: pitch_nm });
    }
    Ok(2.0 / (sqrt(3.0) * pitch_nm * pitch_nm) * NM2_PER_CM2)
}

/// State written at the start of each repetition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub p_up: f64,
    pub relative_phase: f64,
}

impl InitialState {
    pub fn state(&self) -> Result<QubitState> {
        QubitState::from_probability(self.p_up, self.relative_phase)
    }
}

/// Everything a simulation run needs apart from the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    pub policy: RefreshPolicy,
    pub redundancy: usize,
    pub cycles: u64,
    pub repetitions: u64,
    pub noise: NoiseModel,
    pub initial: InitialState,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        self.noise.validate()?;
        self.initial.state()?;
        if self.redundancy == 0 {
            return Err(Error::NoCells);
        }
        if self.repetitions == 0 {
            return Err(Error::NonPositiveInput("repetitions"));
        }
        Ok(())
    }
}

/// One repetition on substream `repetition` of `seed`: write the initial
/// state, then alternate free evolution for one period and a refresh.
pub fn run_repetition(config: &ExperimentConfig, seed: RngSeed, repetition: u64) -> Result<TimeSeries> {
    config.validate()?;
    let mut rng = seed.stream(repetition);
    let mut lq = LogicalQubit::with_state(config.redundancy, config.initial.state()?)?;
    let period = config.policy.period();
    let mut series = TimeSeries::new();
    for cycle in 1..=config.cycles {
        let at_cycle = |e: Error| Error::AtCycle { repetition, cycle, source: alloc::boxed::Box::new(e) };
        lq.step(period, &config.noise).map_err(at_cycle)?;
        let report = lq.refresh(&config.policy, &mut rng).map_err(at_cycle)?;
        series.push(report)?;
    }
    Ok(series)
}

/// All repetitions, sequentially, in repetition order.
pub fn run_experiment(config: &ExperimentConfig, seed: RngSeed) -> Result<Vec<TimeSeries>> {
    (0..config.repetitions).map(|r| run_repetition(config, seed, r)).collect()
}

/// Sample mean and standard deviation (`n − 1` denominator; 0 for one value).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        if values.len() == 1 {
            return Self { mean, std: 0.0 };
        }
        let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
        Self { mean, std: sqrt(ss / (n - 1.0)) }
    }
}

/// Cross-repetition statistics for one cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSummary {
    pub cycle_index: u64,
    pub wall_time: f64,
    pub p_hat: MeanStd,
    pub magnitude_fidelity: MeanStd,
    pub full_fidelity: MeanStd,
}

/// Per-cycle mean and std across repetitions. Every series must have the
/// same length; summation runs in repetition order.
pub fn aggregate(runs: &[TimeSeries]) -> Vec<CycleSummary> {
    let cycles = runs.iter().map(TimeSeries::len).min().unwrap_or(0);
    let mut column = Vec::with_capacity(runs.len());
    let mut stat = |f: &dyn Fn(&RefreshReport) -> f64, i: usize| {
        column.clear();
        column.extend(runs.iter().map(|r| f(&r.reports[i])));
        MeanStd::of(&column)
    };
    (0..cycles)
        .map(|i| {
            let first = &runs[0].reports[i];
            CycleSummary {
                cycle_index: first.cycle_index,
                wall_time: first.wall_time,
                p_hat: stat(&|r| r.p_hat, i),
                magnitude_fidelity: stat(&|r| r.magnitude_fidelity, i),
                full_fidelity: stat(&|r| r.full_fidelity, i),
            }
        })
        .collect()
}
