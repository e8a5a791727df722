//! Reading a spin through an entangling detector, and undoing the read.
//!
//! A detector with orthogonal states `|1⟩` (quanton passed, spin up) and `|2⟩`
//! (quanton reflected, spin down) becomes entangled with the quanton:
//! `Φ = a↑|↑⟩|1⟩ + a↓|↓⟩|2⟩`. Projecting the detector on `|1⟩` is an ordinary
//! collapse. Projecting it on `(|1⟩ + |2⟩)/√2` erases the which-way record
//! and leaves the quanton in its original superposition.

use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::state::{DensityMatrix, QubitState};
use crate::{Error, Result};

/// Probabilities below this are treated as an empty branch.
pub const ZERO_BRANCH_THRESHOLD: f64 = 1e-15;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Normalized state `c1|1⟩ + c2|2⟩` of the two-state detector (the analyzer
/// magnetization: `|1⟩` along +z, `|2⟩` along −z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    c1: Complex64,
    c2: Complex64,
}

impl DetectorState {
    /// `|1⟩`: analyzer magnetized along +z.
    pub const ONE: Self = Self { c1: ONE, c2: ZERO };
    /// `|2⟩`: analyzer magnetized along −z.
    pub const TWO: Self = Self { c1: ZERO, c2: ONE };

    /// Normalizes `(c1, c2)`; same rules as [`QubitState::new`].
    pub fn new(c1: Complex64, c2: Complex64) -> Result<Self> {
        let q = QubitState::new(c1, c2)?;
        Ok(Self { c1: q.up(), c2: q.down() })
    }

    pub fn c1(&self) -> Complex64 {
        self.c1
    }

    pub fn c2(&self) -> Complex64 {
        self.c2
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &DetectorState) -> Complex64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    /// Bloch vector with `|1⟩ → +z`, `|2⟩ → −z`.
    pub fn bloch(&self) -> (f64, f64, f64) {
        let cross = self.c1.conj() * self.c2;
        (2.0 * cross.re, 2.0 * cross.im, self.c1.norm_sqr() - self.c2.norm_sqr())
    }
}

/// `(|1⟩ + |2⟩)/√2`, the detector polarized along +x.
pub fn symmetric_detector() -> DetectorState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DetectorState { c1: h, c2: h }
}

/// `(|1⟩ − |2⟩)/√2`, orthogonal to [`symmetric_detector`].
pub fn antisymmetric_detector() -> DetectorState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    DetectorState { c1: h, c2: -h }
}

/// See [`DetectorState::bloch`].
pub fn detector_bloch(d: &DetectorState) -> (f64, f64, f64) {
    d.bloch()
}

/// Pure state of quanton ⊗ detector over the ordered basis
/// `|↑1⟩, |↑2⟩, |↓1⟩, |↓2⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState {
    amps: [Complex64; 4],
}

impl JointState {
    /// Normalizes the four amplitudes.
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("joint amplitude"));
        }
        let norm = libm::sqrt(amps.iter().map(Complex64::norm_sqr).sum::<f64>());
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(Self { amps: amps.map(|a| a / norm) })
    }

    pub fn amplitudes(&self) -> [Complex64; 4] {
        self.amps
    }

    /// Quanton state with the detector traced out.
    pub fn reduced_quanton(&self) -> DensityMatrix {
        let [u1, u2, d1, d2] = self.amps;
        DensityMatrix::from_parts_unchecked(
            u1.norm_sqr() + u2.norm_sqr(),
            u1 * d1.conj() + u2 * d2.conj(),
            d1.norm_sqr() + d2.norm_sqr(),
        )
    }

    /// Contracts the detector index with `⟨d|`; see [`project_detector`].
    pub fn project(&self, d: &DetectorState) -> Result<ProjectionResult> {
        project_detector(self, d)
    }
}

/// `a↑|↑⟩|1⟩ + a↓|↓⟩|2⟩`: the detector records the spin.
pub fn entangle_with_detector(q: &QubitState) -> JointState {
    JointState { amps: [q.up(), ZERO, ZERO, q.down()] }
}

/// Quanton state left after the detector is found in a given state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionResult {
    /// Normalized conditional quanton state.
    pub residual: QubitState,
    /// Probability of finding the detector in the projected state.
    pub probability: f64,
}

/// `Ψ = ⟨d|Φ⟩`. The probability is `‖Ψ‖²` and the residual is `Ψ/‖Ψ‖`.
///
/// Fails with [`Error::ZeroProbabilityBranch`] when `‖Ψ‖²` is below
/// [`ZERO_BRANCH_THRESHOLD`].
pub fn project_detector(joint: &JointState, d: &DetectorState) -> Result<ProjectionResult> {
    let [u1, u2, d1, d2] = joint.amps;
    let (b1, b2) = (d.c1.conj(), d.c2.conj());
    let up = u1 * b1 + u2 * b2;
    let down = d1 * b1 + d2 * b2;
    let probability = up.norm_sqr() + down.norm_sqr();
    if probability < ZERO_BRANCH_THRESHOLD {
        return Err(Error::ZeroProbabilityBranch(probability));
    }
    Ok(ProjectionResult { residual: QubitState::new(up, down)?, probability: probability.min(1.0) })
}

/// Which detector state the erasure measurement found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `(|1⟩ + |2⟩)/√2`: the original state directly.
    Symmetric,
    /// `(|1⟩ − |2⟩)/√2`: the original state up to a Z flip.
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErasureOutcome {
    pub branch: Branch,
    /// Quanton state after the conditional correction.
    pub recovered: QubitState,
    pub branch_probability: f64,
    /// Whether the Z correction was applied (antisymmetric branch only).
    pub phase_flip_applied: bool,
}

/// Entangles `q` with the detector, measures the detector in the
/// `(|1⟩ ± |2⟩)/√2` basis and, on the antisymmetric outcome, applies a Z flip.
/// Either way the recovered state equals `q`.
pub fn erase_and_recover<R: Rng + ?Sized>(q: &QubitState, rng: &mut R) -> ErasureOutcome {
    let joint = entangle_with_detector(q);
    let (sym, anti) = (symmetric_detector(), antisymmetric_detector());
    // For a state from entangle_with_detector both ± branches carry exactly 1/2.
    let p_sym = match project_detector(&joint, &sym) {
        Ok(r) => r.probability,
        Err(_) => 0.0,
    };
    let u: f64 = rng.gen();
    let (branch, detector) = if u < p_sym { (Branch::Symmetric, sym) } else { (Branch::Antisymmetric, anti) };
    let projected = project_detector(&joint, &detector)
        .unwrap_or_else(|e| unreachable!("erasure branch of a normalized qubit is empty: {e}"));
    let flip = branch == Branch::Antisymmetric;
    let recovered = if flip { projected.residual.phase_flip() } else { projected.residual };
    ErasureOutcome { branch, recovered, branch_probability: projected.probability, phase_flip_applied: flip }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::substream;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn q68() -> QubitState {
        QubitState::new(c(0.6, 0.0), c(0.8, 0.0)).unwrap()
    }

    #[test]
    fn entangle_examples() {
        let j = entangle_with_detector(&QubitState::UP);
        assert_eq!(j.amplitudes(), [ONE, ZERO, ZERO, ZERO]);
        assert_eq!(j.reduced_quanton().purity(), 1.0);

        let j = entangle_with_detector(&QubitState::PLUS);
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert_eq!(j.amplitudes(), [h, ZERO, ZERO, h]);
        assert!((j.reduced_quanton().purity() - 0.5).abs() < 1e-15);

        let a = entangle_with_detector(&q68()).amplitudes();
        assert!((a[0] - c(0.6, 0.0)).norm() < 1e-15 && (a[3] - c(0.8, 0.0)).norm() < 1e-15);
        assert_eq!((a[1], a[2]), (ZERO, ZERO));
    }

    #[test]
    fn projection_examples() {
        let j = entangle_with_detector(&q68());
        let r = project_detector(&j, &DetectorState::ONE).unwrap();
        assert!((r.probability - 0.36).abs() < 1e-12);
        assert_eq!(r.residual, QubitState::UP);

        let j_up = entangle_with_detector(&QubitState::UP);
        assert!(matches!(project_detector(&j_up, &DetectorState::TWO), Err(Error::ZeroProbabilityBranch(_))));

        let r = j.project(&symmetric_detector()).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-12);
        assert!((r.residual.fidelity(&q68()) - 1.0).abs() < 1e-12);
        assert!((r.residual.up() - c(0.6, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn symmetric_detector_examples() {
        let s = symmetric_detector();
        assert_eq!(s.c1(), s.c2());
        assert!((s.c1().re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!((s.inner(&DetectorState::ONE).re - FRAC_1_SQRT_2).abs() < 1e-16);
        assert!(s.inner(&antisymmetric_detector()).norm() < 1e-16);
    }

    #[test]
    fn bloch_examples() {
        assert_eq!(detector_bloch(&DetectorState::ONE), (0.0, 0.0, 1.0));
        assert_eq!(detector_bloch(&DetectorState::TWO), (0.0, 0.0, -1.0));
        let (x, y, z) = detector_bloch(&symmetric_detector());
        assert!((x - 1.0).abs() < 1e-12 && y.abs() < 1e-12 && z.abs() < 1e-12);
        let (x, y, z) = DetectorState::new(ONE, c(0.0, 1.0)).unwrap().bloch();
        assert!(x.abs() < 1e-12 && (y - 1.0).abs() < 1e-12 && z.abs() < 1e-12);
    }

    #[test]
    fn erasure_examples() {
        let mut rng = substream(11, 0);
        let mut seen = [false; 2];
        for _ in 0..64 {
            let out = erase_and_recover(&QubitState::UP, &mut rng);
            assert_eq!(out.recovered.fidelity(&QubitState::UP), 1.0);
            assert!((out.branch_probability - 0.5).abs() < 1e-15);
            seen[usize::from(out.branch == Branch::Symmetric)] = true;
        }
        assert_eq!(seen, [true, true]);

        let q = q68().apply_relative_phase(0.9);
        for _ in 0..64 {
            let out = erase_and_recover(&q, &mut rng);
            assert!((out.recovered.fidelity(&q) - 1.0).abs() < 1e-12);
            assert_eq!(out.phase_flip_applied, out.branch == Branch::Antisymmetric);
            if out.branch == Branch::Antisymmetric {
                // residual before the correction was (a↑, −a↓)
                let raw = project_detector(&entangle_with_detector(&q), &antisymmetric_detector()).unwrap().residual;
                assert!((raw.fidelity(&q.phase_flip()) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn joint_state_validation() {
        assert_eq!(JointState::new([ZERO; 4]), Err(Error::ZeroVector));
        let j = JointState::new([ONE, ONE, ZERO, ZERO]).unwrap();
        let r = project_detector(&j, &DetectorState::ONE).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-15);
    }
}
