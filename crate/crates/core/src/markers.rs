//! Closed-form quantumness markers as functions of the survival
//! probability, and the bipartite flavor density matrix they derive from.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{zeros, CMat};
use crate::qubit::TwoQubitState;

/// NAQC bound sqrt(6); conditional coherences above it signal a nonlocal
/// advantage of quantum coherence.
pub const NAQC_BOUND: f64 = 2.449489742783178;

/// CHSH bound in the M = max(u_i + u_j) formulation; M > 1 is Bell nonlocal.
pub const CHSH_BOUND: f64 = 1.0;

/// Amplitude norm tolerance for the flavor density matrix.
const AMPLITUDE_NORM_TOL: f64 = 1e-10;
/// Probabilities may stray outside [0,1] by this much before erroring.
const PROBABILITY_TOL: f64 = 1e-14;

/// Markers evaluated at one survival probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarkerValues {
    pub probability: f64,
    /// 2 + 2 sqrt(P(1-P)), in [2, 3].
    pub naqc: f64,
    /// 1 + 4 P(1-P), in [1, 2].
    pub chsh: f64,
    /// naqc > sqrt(6).
    pub naqc_violated: bool,
    /// chsh > 1.
    pub chsh_violated: bool,
}

fn validated_probability(p: f64) -> Result<f64> {
    if !p.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "probability must be finite, got {p}"
        )));
    }
    if (0.0..=1.0).contains(&p) {
        return Ok(p);
    }
    if p > 1.0 && p - 1.0 <= PROBABILITY_TOL {
        return Ok(1.0);
    }
    if p < 0.0 && -p <= PROBABILITY_TOL {
        return Ok(0.0);
    }
    Err(Error::Domain(format!(
        "probability must lie in [0,1], got {p}"
    )))
}

/// NAQC marker 2 + 2 sqrt(p(1-p)).
pub fn naqc_from_probability(p: f64) -> Result<f64> {
    let p = validated_probability(p)?;
    Ok(2.0 + 2.0 * (p * (1.0 - p)).sqrt())
}

/// CHSH marker 1 + 4 p(1-p).
pub fn chsh_from_probability(p: f64) -> Result<f64> {
    let p = validated_probability(p)?;
    Ok(1.0 + 4.0 * p * (1.0 - p))
}

/// Both markers plus their violation flags at one probability.
pub fn marker_values(p: f64) -> Result<MarkerValues> {
    let p = validated_probability(p)?;
    let naqc = naqc_from_probability(p)?;
    let chsh = chsh_from_probability(p)?;
    Ok(MarkerValues {
        probability: p,
        naqc,
        chsh,
        naqc_violated: naqc > NAQC_BOUND,
        chsh_violated: chsh > CHSH_BOUND,
    })
}

/// Bipartite flavor density matrix for survival amplitude `a_surv` and
/// transition amplitude `a_trans`, in the basis {|00>, |01>, |10>, |11>}:
/// the state a_surv |10> + a_trans |01> written as a projector, supported
/// on the single-occupancy block only.
pub fn flavor_density_matrix(a_surv: Complex64, a_trans: Complex64) -> Result<TwoQubitState> {
    let norm = a_surv.norm_sqr() + a_trans.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > AMPLITUDE_NORM_TOL {
        return Err(Error::InvalidAmplitudes { norm });
    }
    let mut m: CMat<4> = zeros();
    m[1][1] = Complex64::new(a_trans.norm_sqr(), 0.0);
    m[1][2] = a_trans * a_surv.conj();
    m[2][1] = a_surv * a_trans.conj();
    m[2][2] = Complex64::new(a_surv.norm_sqr(), 0.0);
    TwoQubitState::from_matrix(m)
}

/// The two survival probabilities at which the NAQC marker crosses its
/// bound: the marker exceeds sqrt(6) exactly for p in (p_low, p_high).
pub fn naqc_violation_threshold() -> (f64, f64) {
    // Solve 2 + 2 sqrt(p(1-p)) = sqrt(6)  =>  p(1-p) = ((sqrt6 - 2)/2)^2.
    let c = (NAQC_BOUND - 2.0) / 2.0;
    let root = (1.0 - 4.0 * c * c).sqrt();
    ((1.0 - root) / 2.0, (1.0 + root) / 2.0)
}
