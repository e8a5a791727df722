//! Decoherence between refreshes.
//!
//! Two Markovian channels (spin relaxation toward `|↑⟩` and pure dephasing)
//! and a coherent leakage rotation. Only the coherent variant is slowed down
//! by frequent measurement; Markovian decay is not.

use libm::{cos, exp, expm1, sin, sqrt};
use num_complex::Complex64;

use crate::state::DensityMatrix;
use crate::{Error, Result};

/// How a stored spin evolves while nobody looks at it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    /// Relaxation (`t1`) and coherence (`t2`) times in seconds. `t1` may be
    /// `f64::INFINITY` for pure dephasing.
    Markovian {
        t1: f64,
        t2: f64,
    },
    /// Unitary rotation about y at `omega` rad/s.
    CoherentLeakage {
        omega: f64,
    },
    Noiseless,
}

impl NoiseModel {
    /// Validated Markovian model; requires `t2 ≤ 2·t1`.
    pub fn markovian(t1: f64, t2: f64) -> Result<Self> {
        let model = NoiseModel::Markovian { t1, t2 };
        model.validate()?;
        Ok(model)
    }

    pub fn coherent_leakage(omega: f64) -> Result<Self> {
        let model = NoiseModel::CoherentLeakage { omega };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Markovian { t1, t2 } => {
                if t1.is_nan() || t1 <= 0.0 {
                    return Err(Error::InvalidNoiseModel("t1 must be positive"));
                }
                if !t2.is_finite() || t2 <= 0.0 {
                    return Err(Error::InvalidNoiseModel("t2 must be positive and finite"));
                }
                if t2 > 2.0 * t1 {
                    return Err(Error::InvalidNoiseModel("t2 must not exceed 2·t1"));
                }
                Ok(())
            }
            NoiseModel::CoherentLeakage { omega } => {
                if !omega.is_finite() || omega < 0.0 {
                    return Err(Error::InvalidNoiseModel("omega must be finite and >= 0"));
                }
                Ok(())
            }
            NoiseModel::Noiseless => Ok(()),
        }
    }

    /// Per-step channel strengths for the Markovian model, `None` otherwise.
    pub fn channel_params(&self, dt: f64) -> Option<ChannelParams> {
        match *self {
            NoiseModel::Markovian { t1, t2 } => Some(ChannelParams::markovian(t1, t2, dt)),
            _ => None,
        }
    }
}

/// Strengths of one amplitude-damping + phase-damping step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub gamma: f64,
    pub lam: f64,
}

impl ChannelParams {
    /// `γ = 1 − e^{−dt/t1}`, and `λ` chosen so the combined off-diagonal
    /// factor is exactly `e^{−dt/t2}`.
    fn markovian(t1: f64, t2: f64, dt: f64) -> Self {
        let gamma = -expm1(-dt / t1);
        // amplitude damping already contributes e^{−dt/2t1} to the coherence
        let lam = -expm1(dt / t1 - 2.0 * dt / t2);
        Self { gamma, lam: lam.clamp(0.0, 1.0) }
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, low: 0.0, high: 1.0 })
    }
}

/// Amplitude damping toward `|↑⟩` with Kraus operators
/// `K0 = [[1, 0], [0, √(1−γ)]]`, `K1 = [[0, √γ], [0, 0]]`.
pub fn amplitude_damping(rho: &DensityMatrix, gamma: f64) -> Result<DensityMatrix> {
    check_unit("gamma", gamma)?;
    let keep = 1.0 - gamma;
    Ok(DensityMatrix::from_parts_unchecked(rho.m00() + gamma * rho.m11(), rho.m01() * sqrt(keep), keep * rho.m11()))
}

/// Pure dephasing: the diagonal is untouched and coherences shrink by
/// `√(1−λ)`.
pub fn phase_damping(rho: &DensityMatrix, lam: f64) -> Result<DensityMatrix> {
    check_unit("lam", lam)?;
    Ok(DensityMatrix::from_parts_unchecked(rho.m00(), rho.m01() * sqrt(1.0 - lam), rho.m11()))
}

/// `U ρ U†` with `U = Ry(theta)`.
pub fn rotate_y(rho: &DensityMatrix, theta: f64) -> DensityMatrix {
    let (c, s) = (cos(theta / 2.0), sin(theta / 2.0));
    let (a, d, b) = (rho.m00(), rho.m11(), rho.m01());
    let re_b = b.re;
    let m00 = c * c * a + s * s * d - 2.0 * c * s * re_b;
    let m11 = s * s * a + c * c * d + 2.0 * c * s * re_b;
    // Ry is real, so Im(m01) is unchanged and Re(m01) picks up the population
    // imbalance.
    let m01 = Complex64::new(c * s * (a - d) + (c * c - s * s) * re_b, b.im);
    DensityMatrix::from_parts_unchecked(m00, m01, m11)
}

/// Free evolution of `rho` for `dt` seconds under `model`.
pub fn evolve(rho: &DensityMatrix, dt: f64, model: &NoiseModel) -> Result<DensityMatrix> {
    if dt.is_nan() || dt < 0.0 {
        return Err(Error::NegativeTime(dt));
    }
    if !dt.is_finite() {
        return Err(Error::NonFinite("time step"));
    }
    model.validate()?;
    match *model {
        NoiseModel::Markovian { t1, t2 } => {
            // Amplitude damping with γ = 1 − e^{−dt/t1} followed by phase damping
            // with the residual λ, written with the survival factors directly so
            // that long steps don't lose precision to 1 − (1 − e^{−x}).
            let keep = exp(-dt / t1);
            let m11 = keep * rho.m11();
            Ok(DensityMatrix::from_parts_unchecked(rho.m00() + (rho.m11() - m11), rho.m01() * exp(-dt / t2), m11))
        }
        NoiseModel::CoherentLeakage { omega } => Ok(rotate_y(rho, omega * dt)),
        NoiseModel::Noiseless => Ok(*rho),
    }
}
