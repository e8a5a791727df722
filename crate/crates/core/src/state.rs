//! One-qubit pure states, 2×2 density matrices and the overlaps between them.
//!
//! The computational basis is ordered `{|↑⟩, |↓⟩}`. Constructors keep whatever
//! global phase the caller supplies; every comparison goes through a
//! phase-insensitive fidelity.

use core::f64::consts::FRAC_1_SQRT_2;

use libm::{acos, cos, sin, sqrt};
use num_complex::Complex64;

use crate::{Error, Result, TOLERANCE};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `e^{iφ}`
pub(crate) fn unit_phase(phi: f64) -> Complex64 {
    Complex64::new(cos(phi), sin(phi))
}

/// A normalized pure state `a↑|↑⟩ + a↓|↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    up: Complex64,
    down: Complex64,
}

impl QubitState {
    /// `|↑⟩`, the state injected by the spin-polarized contact.
    pub const UP: Self = Self { up: ONE, down: ZERO };
    /// `|↓⟩`
    pub const DOWN: Self = Self { up: ZERO, down: ONE };
    /// `(|↑⟩ + |↓⟩)/√2`
    pub const PLUS: Self = Self { up: Complex64::new(FRAC_1_SQRT_2, 0.0), down: Complex64::new(FRAC_1_SQRT_2, 0.0) };

    /// Builds a state from two amplitudes, rescaling them to unit norm.
    ///
    /// The relative and global phases are kept exactly as given. Fails with
    /// [`Error::NonFinite`] on NaN/Inf components and [`Error::ZeroVector`] when
    /// both amplitudes vanish.
    pub fn new(up: Complex64, down: Complex64) -> Result<Self> {
        if !is_finite(up) || !is_finite(down) {
            return Err(Error::NonFinite("qubit amplitude"));
        }
        // Scale by the largest component first so tiny inputs don't underflow.
        let scale = [up.re, up.im, down.re, down.im].iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        if scale == 0.0 {
            return Err(Error::ZeroVector);
        }
        let (up, down) = (up / scale, down / scale);
        let norm = sqrt(up.norm_sqr() + down.norm_sqr());
        Ok(Self { up: up / norm, down: down / norm })
    }

    /// The state with `|a↑|² = p_up` and relative phase `phi` on `|↓⟩`,
    /// prepared as a y-rotation of `|↑⟩` followed by a phase shift.
    pub fn from_probability(p_up: f64, phi: f64) -> Result<Self> {
        let p = ProbPair::new(p_up)?;
        if !phi.is_finite() {
            return Err(Error::NonFinite("relative phase"));
        }
        let theta = 2.0 * acos(sqrt(p.p_up()));
        Ok(Self::UP.rotate_y(theta).apply_relative_phase(phi))
    }

    /// Amplitude on `|↑⟩`.
    pub fn up(&self) -> Complex64 {
        self.up
    }

    /// Amplitude on `|↓⟩`.
    pub fn down(&self) -> Complex64 {
        self.down
    }

    /// `|a↑|² + |a↓|²`, which is 1 up to rounding.
    pub fn norm_sqr(&self) -> f64 {
        self.up.norm_sqr() + self.down.norm_sqr()
    }

    /// Z-basis outcome probabilities `(|a↑|², |a↓|²)`.
    pub fn probabilities(&self) -> ProbPair {
        ProbPair::clamped(self.up.norm_sqr() / self.norm_sqr())
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &QubitState) -> Complex64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// `|⟨self|other⟩|²`, insensitive to the global phase of either state.
    pub fn fidelity(&self, other: &QubitState) -> f64 {
        self.inner(other).norm_sqr().min(1.0)
    }

    /// Applies `[[cos θ/2, −sin θ/2], [sin θ/2, cos θ/2]]`.
    pub fn rotate_y(&self, theta: f64) -> Self {
        let (c, s) = (cos(theta / 2.0), sin(theta / 2.0));
        Self { up: self.up * c - self.down * s, down: self.up * s + self.down * c }
    }

    /// Multiplies the `|↓⟩` amplitude by `e^{iφ}`.
    pub fn apply_relative_phase(&self, phi: f64) -> Self {
        Self { up: self.up, down: self.down * unit_phase(phi) }
    }

    /// Pauli Z: `(a↑, a↓) → (a↑, −a↓)`, exact in floating point.
    pub fn phase_flip(&self) -> Self {
        Self { up: self.up, down: -self.down }
    }

    /// The projector `|ψ⟩⟨ψ|`.
    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts_unchecked(self.up.norm_sqr(), self.up * self.down.conj(), self.down.norm_sqr())
    }
}

/// A 2×2 density matrix in the `{|↑⟩, |↓⟩}` basis.
///
/// Only `m00`, `m01` and `m11` are stored; `m10 = conj(m01)` so Hermiticity
/// holds by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    m00: f64,
    m01: Complex64,
    m11: f64,
}

impl DensityMatrix {
    /// `I/2`
    pub const MAXIMALLY_MIXED: Self = Self { m00: 0.5, m01: ZERO, m11: 0.5 };

    /// Validated constructor from the independent entries of a Hermitian
    /// matrix: unit trace and a non-negative determinant, both within
    /// [`TOLERANCE`].
    pub fn new(m00: f64, m01: Complex64, m11: f64) -> Result<Self> {
        if !m00.is_finite() || !m11.is_finite() || !is_finite(m01) {
            return Err(Error::NonFinite("density matrix entry"));
        }
        let rho = Self { m00, m01, m11 };
        let trace = rho.trace();
        if (trace - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidTrace(trace));
        }
        let det = rho.determinant();
        if det < -TOLERANCE || m00 < -TOLERANCE || m11 < -TOLERANCE {
            return Err(Error::NotPositive(det));
        }
        Ok(rho)
    }

    /// Validated constructor from all four entries.
    pub fn from_elements(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let hermitian_gap =
            [m[0][0].im.abs(), m[1][1].im.abs(), (m[1][0] - m[0][1].conj()).norm()].into_iter().fold(0.0_f64, f64::max);
        if hermitian_gap.is_nan() {
            return Err(Error::NonFinite("density matrix entry"));
        }
        if hermitian_gap > TOLERANCE {
            return Err(Error::NotHermitian(hermitian_gap));
        }
        Self::new(m[0][0].re, m[0][1], m[1][1].re)
    }

    /// Diagonal matrix `diag(p_up, 1 − p_up)`.
    pub fn diagonal(p_up: f64) -> Result<Self> {
        let p = ProbPair::new(p_up)?;
        Ok(Self::from_parts_unchecked(p.p_up(), ZERO, p.p_down()))
    }

    pub(crate) const fn from_parts_unchecked(m00: f64, m01: Complex64, m11: f64) -> Self {
        Self { m00, m01, m11 }
    }

    pub fn m00(&self) -> f64 {
        self.m00
    }

    pub fn m01(&self) -> Complex64 {
        self.m01
    }

    pub fn m10(&self) -> Complex64 {
        self.m01.conj()
    }

    pub fn m11(&self) -> f64 {
        self.m11
    }

    /// The full matrix, row-major.
    pub fn elements(&self) -> [[Complex64; 2]; 2] {
        [[Complex64::new(self.m00, 0.0), self.m01], [self.m10(), Complex64::new(self.m11, 0.0)]]
    }

    pub fn trace(&self) -> f64 {
        self.m00 + self.m11
    }

    /// `m00·m11 − |m01|²`; non-negative for a physical state.
    pub fn determinant(&self) -> f64 {
        self.m00 * self.m11 - self.m01.norm_sqr()
    }

    /// `tr(ρ²)`, between 1/2 (maximally mixed) and 1 (pure).
    pub fn purity(&self) -> f64 {
        self.m00 * self.m00 + self.m11 * self.m11 + 2.0 * self.m01.norm_sqr()
    }

    /// Z-basis outcome probabilities read off the diagonal.
    pub fn probabilities(&self) -> ProbPair {
        ProbPair::clamped(self.m00 / self.trace())
    }

    /// `⟨ψ|ρ|ψ⟩`
    pub fn fidelity_with_pure(&self, psi: &QubitState) -> f64 {
        let (u, d) = (psi.up(), psi.down());
        let cross = u.conj() * self.m01 * d;
        let f = self.m00 * u.norm_sqr() + self.m11 * d.norm_sqr() + 2.0 * cross.re;
        f.clamp(0.0, 1.0)
    }

    /// Bloch vector `(2 Re m01, −2 Im m01, m00 − m11)`, with `|↑⟩` at +z.
    pub fn bloch_vector(&self) -> [f64; 3] {
        [2.0 * self.m01.re, -2.0 * self.m01.im, self.m00 - self.m11]
    }

    /// Recovers `|ψ⟩` from `ρ = |ψ⟩⟨ψ|` up to global phase.
    ///
    /// Fails with [`Error::MixedStateCell`] (cell index 0) when the purity is
    /// below `1 − purity_tol`.
    pub fn to_pure_state(&self, purity_tol: f64) -> Result<QubitState> {
        let purity = self.purity();
        if purity < 1.0 - purity_tol {
            return Err(Error::MixedStateCell { cell: 0, purity });
        }
        // The column of the larger diagonal entry is the best-conditioned
        // multiple of |ψ⟩.
        let (up, down) = if self.m00 >= self.m11 {
            let a = sqrt(self.m00);
            (Complex64::new(a, 0.0), self.m10() / a)
        } else {
            let b = sqrt(self.m11);
            (self.m01 / b, Complex64::new(b, 0.0))
        };
        QubitState::new(up, down)
    }
}

/// Outcome probabilities `(|a↑|², |a↓|²)` of a Z measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbPair {
    p_up: f64,
}

impl ProbPair {
    pub fn new(p_up: f64) -> Result<Self> {
        if !p_up.is_finite() {
            return Err(Error::NonFinite("probability"));
        }
        if !(0.0..=1.0).contains(&p_up) {
            return Err(Error::OutOfRange { name: "p_up", value: p_up, low: 0.0, high: 1.0 });
        }
        Ok(Self { p_up })
    }

    /// Accepts an explicit pair, checking that it sums to one.
    pub fn from_pair(p_up: f64, p_down: f64) -> Result<Self> {
        let pair = Self::new(p_up)?;
        Self::new(p_down)?;
        if (p_up + p_down - 1.0).abs() > TOLERANCE {
            return Err(Error::InvalidTrace(p_up + p_down));
        }
        Ok(pair)
    }

    fn clamped(p_up: f64) -> Self {
        Self { p_up: p_up.clamp(0.0, 1.0) }
    }

    pub fn p_up(&self) -> f64 {
        self.p_up
    }

    pub fn p_down(&self) -> f64 {
        1.0 - self.p_up
    }

    /// Squared Bhattacharyya coefficient `(√(p↑q↑) + √(p↓q↓))²`.
    ///
    /// This is the fidelity restricted to the magnitudes, i.e. the part of
    /// the state that measure-and-recreate refreshing preserves.
    pub fn magnitude_fidelity(&self, other: &ProbPair) -> f64 {
        let bc = sqrt(self.p_up() * other.p_up()) + sqrt(self.p_down() * other.p_down());
        (bc * bc).min(1.0)
    }
}
