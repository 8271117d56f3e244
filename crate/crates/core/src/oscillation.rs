//! Two-flavor oscillation probabilities in the plane-wave and wave-packet
//! models, characteristic lengths, and a quadrature validator for the
//! Gaussian wave-packet amplitude.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::{natural_length_to_meters, phase_argument, HBAR_C_EV_M};

/// Rounding excursions beyond [0,1] up to this size are clamped;
/// anything larger is a bug, not noise.
const PROBABILITY_CLAMP_TOL: f64 = 1e-14;

/// Mixing amplitude and mass splitting of one two-flavor channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillationParams {
    /// sin^2(2 theta), in [0, 1].
    pub sin2_2theta: f64,
    /// Mass-squared splitting in eV^2; sign is kept, magnitude drives the
    /// lengths.
    pub delta_m2: f64,
}

impl OscillationParams {
    pub fn new(sin2_2theta: f64, delta_m2: f64) -> Result<Self> {
        if !sin2_2theta.is_finite() || !delta_m2.is_finite() {
            return Err(Error::InvalidArgument(
                "oscillation parameters must be finite".into(),
            ));
        }
        if !(0.0..=1.0).contains(&sin2_2theta) {
            return Err(Error::Domain(format!(
                "sin^2(2 theta) must lie in [0,1], got {sin2_2theta}"
            )));
        }
        if delta_m2 == 0.0 {
            return Err(Error::Domain("delta m^2 must be nonzero".into()));
        }
        Ok(Self {
            sin2_2theta,
            delta_m2,
        })
    }
}

/// Effective wave-packet width and localization factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WavePacketParams {
    /// Effective spatial width sigma_x in meters (> 0).
    pub sigma_x: f64,
    /// Dimensionless localization factor xi (>= 0).
    pub xi: f64,
}

impl WavePacketParams {
    pub fn new(sigma_x: f64, xi: f64) -> Result<Self> {
        if !sigma_x.is_finite() || !xi.is_finite() {
            return Err(Error::InvalidArgument(
                "wave-packet parameters must be finite".into(),
            ));
        }
        if sigma_x <= 0.0 {
            return Err(Error::Domain(format!(
                "sigma_x must be positive, got {sigma_x} m"
            )));
        }
        if xi < 0.0 {
            return Err(Error::Domain(format!("xi must be non-negative, got {xi}")));
        }
        Ok(Self { sigma_x, xi })
    }
}

/// Oscillation and coherence lengths in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lengths {
    /// One full oscillation period: 4 pi E / |dm^2|, in meters.
    pub l_osc: f64,
    /// Distance beyond which the mass-eigenstate packets separate:
    /// 4 sqrt(2) E^2 sigma_x / |dm^2|, in meters.
    pub l_coh: f64,
}

/// Oscillation and coherence lengths for the given channel, energy (eV)
/// and packet width.
pub fn characteristic_lengths(
    params: &OscillationParams,
    energy: f64,
    wp: &WavePacketParams,
) -> Result<Lengths> {
    if !energy.is_finite() || energy <= 0.0 {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy} eV"
        )));
    }
    let dm2 = params.delta_m2.abs();
    let l_osc = natural_length_to_meters(4.0 * std::f64::consts::PI * energy / dm2)?;
    // E^2/dm^2 is dimensionless; sigma_x carries the meters.
    let l_coh = 4.0 * 2.0f64.sqrt() * energy * energy / dm2 * wp.sigma_x;
    Ok(Lengths { l_osc, l_coh })
}

fn clamp_probability(p: f64, context: &str) -> Result<f64> {
    if (0.0..=1.0).contains(&p) {
        return Ok(p);
    }
    if p > 1.0 && p - 1.0 < PROBABILITY_CLAMP_TOL {
        return Ok(1.0);
    }
    if p < 0.0 && -p < PROBABILITY_CLAMP_TOL {
        return Ok(0.0);
    }
    Err(Error::InconsistentState(format!(
        "{context} produced probability {p} outside [0,1]"
    )))
}

/// Plane-wave survival probability
/// P = 1 - sin^2(2 theta) sin^2(dm^2 x / (4 hbar c E)).
pub fn survival_probability_pw(params: &OscillationParams, energy: f64, x: f64) -> Result<f64> {
    let delta = phase_argument(params.delta_m2, x, energy)?;
    let s = delta.sin();
    clamp_probability(
        1.0 - params.sin2_2theta * s * s,
        "plane-wave survival probability",
    )
}

/// Plane-wave survival and transition amplitudes, with the global
/// mass-1 phase stripped:
/// a_surv = cos^2 th + sin^2 th e^{-2 i Delta},
/// a_trans = sin th cos th (1 - e^{-2 i Delta}).
pub fn plane_wave_amplitudes(
    params: &OscillationParams,
    energy: f64,
    x: f64,
) -> Result<(Complex64, Complex64)> {
    let delta = phase_argument(params.delta_m2, x, energy)?;
    // theta in [0, pi/4]: cos(2 theta) >= 0.
    let sin_2theta = params.sin2_2theta.sqrt();
    let cos_2theta = (1.0 - params.sin2_2theta).max(0.0).sqrt();
    let cos2 = 0.5 * (1.0 + cos_2theta);
    let sin2 = 0.5 * (1.0 - cos_2theta);
    let sincos = 0.5 * sin_2theta;
    let evolution = Complex64::from_polar(1.0, -2.0 * delta);
    let a_surv = Complex64::new(cos2, 0.0) + evolution * sin2;
    let a_trans = (Complex64::new(1.0, 0.0) - evolution) * sincos;
    Ok((a_surv, a_trans))
}

/// Damping factor D(x) = exp(-(x/l_coh)^2 - 2 pi^2 xi^2 (sigma_x/l_osc)^2)
/// applied to the interference term in the wave-packet model.
pub fn damping_factor(
    params: &OscillationParams,
    wp: &WavePacketParams,
    energy: f64,
    x: f64,
) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "distance must be non-negative, got {x} m"
        )));
    }
    let lengths = characteristic_lengths(params, energy, wp)?;
    let separation = x / lengths.l_coh;
    let localization = wp.xi * wp.sigma_x / lengths.l_osc;
    Ok((-separation * separation
        - 2.0 * std::f64::consts::PI * std::f64::consts::PI * localization * localization)
        .exp())
}

/// Wave-packet survival probability
/// P = 1 - (sin^2(2 theta)/2) [1 - cos(2 pi x / l_osc) D(x)].
///
/// The two-flavor form follows from the general multi-flavor expression
/// with a real 2x2 mixing matrix: the diagonal terms contribute
/// cos^4 th + sin^4 th and the damped cross term the rest.
pub fn survival_probability_wp(
    params: &OscillationParams,
    wp: &WavePacketParams,
    energy: f64,
    x: f64,
) -> Result<f64> {
    let lengths = characteristic_lengths(params, energy, wp)?;
    let damping = damping_factor(params, wp, energy, x)?;
    let phase = 2.0 * std::f64::consts::PI * x / lengths.l_osc;
    let p = 1.0 - 0.5 * params.sin2_2theta * (1.0 - phase.cos() * damping);
    clamp_probability(p, "wave-packet survival probability")
}

/// Minimum packet width the quadrature will attempt to resolve.
pub const MIN_SIGMA_X_P: f64 = 1e-12;
/// Relative Richardson error target for the quadrature.
const QUADRATURE_TARGET: f64 = 1e-9;
/// Node budget; exceeding it means the integrand is too oscillatory.
const QUADRATURE_MAX_NODES: usize = 1 << 21;

fn check_wavepacket_inputs(sigma_x_p: f64, x: f64, t: f64) -> Result<()> {
    if !sigma_x_p.is_finite() || !x.is_finite() || !t.is_finite() {
        return Err(Error::InvalidArgument(
            "wave-packet amplitude inputs must be finite".into(),
        ));
    }
    if sigma_x_p <= 0.0 {
        return Err(Error::Domain(format!(
            "production width must be positive, got {sigma_x_p} m"
        )));
    }
    Ok(())
}

/// Gaussian wave-packet amplitude in closed form:
/// (2 pi sigma_x^2)^{-1/4} exp[i(p x - E t)/hbar c - (x - v t)^2/(4 sigma_x^2)].
///
/// `p_avg` and `e_avg` are in eV, `sigma_x_p`, `x` and `t` in meters
/// (t is c*t), `v_group` dimensionless. The modulus is normalized so the
/// peak value is (2 pi sigma_x^2)^{-1/4} in m^{-1/2}.
pub fn wavepacket_amplitude_closed(
    p_avg: f64,
    e_avg: f64,
    v_group: f64,
    sigma_x_p: f64,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    check_wavepacket_inputs(sigma_x_p, x, t)?;
    let offset = x - v_group * t;
    let envelope = (-offset * offset / (4.0 * sigma_x_p * sigma_x_p)).exp();
    let prefactor = (2.0 * std::f64::consts::PI * sigma_x_p * sigma_x_p).powf(-0.25);
    let phase = (p_avg * x - e_avg * t) / HBAR_C_EV_M;
    Ok(Complex64::from_polar(prefactor * envelope, phase))
}

/// Gaussian wave-packet amplitude by numeric momentum integration.
///
/// The momentum distribution is the Gaussian exp(-(p - p_avg)^2 / (4 sigma_p^2))
/// with sigma_p = 1/(2 sigma_x) and the energy linearized around p_avg as
/// E(p) = e_avg + v_group (p - p_avg). Under that linearization the constant
/// phase exp(i(p_avg x - e_avg t)/hbar c) factors out of the integral exactly
/// and the quadrature resolves the remaining envelope integral over
/// q = p - p_avg on a window of eight standard deviations of the amplitude
/// profile. Composite Simpson nodes are doubled until the Richardson
/// estimate drops below 1e-9 relative.
///
/// This is the independent cross-check for [`wavepacket_amplitude_closed`].
pub fn wavepacket_amplitude_quadrature(
    p_avg: f64,
    e_avg: f64,
    v_group: f64,
    sigma_x_p: f64,
    x: f64,
    t: f64,
) -> Result<Complex64> {
    check_wavepacket_inputs(sigma_x_p, x, t)?;
    if sigma_x_p < MIN_SIGMA_X_P {
        return Err(Error::Accuracy(format!(
            "production width {sigma_x_p} m is below the {MIN_SIGMA_X_P} m quadrature threshold"
        )));
    }
    let sigma_x_nat = sigma_x_p / HBAR_C_EV_M; // eV^-1
    let sigma_p = 1.0 / (2.0 * sigma_x_nat); // eV
    let offset_nat = (x - v_group * t) / HBAR_C_EV_M; // eV^-1

    // The amplitude profile exp(-q^2/(4 sigma_p^2)) has standard deviation
    // sqrt(2) sigma_p; integrate over eight of those on each side.
    let half_window = 8.0 * 2.0f64.sqrt() * sigma_p;
    let cycles = half_window * offset_nat.abs() / std::f64::consts::PI;
    if cycles > 1e5 {
        return Err(Error::Accuracy(format!(
            "integrand oscillates over {cycles:.1e} cycles; beyond the node budget"
        )));
    }

    let integrand = |q: f64| -> Complex64 {
        let gaussian = (-q * q / (4.0 * sigma_p * sigma_p)).exp();
        Complex64::from_polar(gaussian, q * offset_nat)
    };

    let mut intervals = 2000usize; // 2001 nodes
    let mut previous = simpson(&integrand, -half_window, half_window, intervals);
    loop {
        intervals *= 2;
        if intervals > QUADRATURE_MAX_NODES {
            return Err(Error::Accuracy(
                "quadrature failed to converge within the node budget".into(),
            ));
        }
        let current = simpson(&integrand, -half_window, half_window, intervals);
        let estimate = (current - previous).norm() / (15.0 * current.norm().max(f64::MIN_POSITIVE));
        if estimate < QUADRATURE_TARGET {
            let prefactor = (2.0 * std::f64::consts::PI * sigma_p * sigma_p).powf(-0.25)
                / (2.0 * std::f64::consts::PI).sqrt();
            let phase = Complex64::from_polar(1.0, (p_avg * x - e_avg * t) / HBAR_C_EV_M);
            // (hbar c)^{-1/2} converts the natural-unit normalization to the
            // meter-based normalization of the closed form.
            return Ok(current * prefactor * phase / HBAR_C_EV_M.sqrt());
        }
        previous = current;
    }
}

fn simpson(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, intervals: usize) -> Complex64 {
    debug_assert!(intervals.is_multiple_of(2));
    let h = (b - a) / intervals as f64;
    let mut acc = f(a) + f(b);
    for k in 1..intervals {
        let weight = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + k as f64 * h) * weight;
    }
    acc * (h / 3.0)
}
