//! Natural-unit conversions (hbar = c = 1, energies in eV, lengths in meters).
//!
//! Every dimensional constant lives here. The rest of the crate works with
//! eV, eV^2 and meters at its API boundaries; there are no implicit km or
//! GeV anywhere.

use crate::error::{Error, Result};

/// hbar * c in eV·m (CODATA, 10 significant digits).
pub const HBAR_C_EV_M: f64 = 1.973269804e-7;

/// Converts a length expressed in natural units (eV^-1) to meters.
pub fn natural_length_to_meters(len_inv_ev: f64) -> Result<f64> {
    if !len_inv_ev.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "natural length must be finite, got {len_inv_ev}"
        )));
    }
    Ok(len_inv_ev * HBAR_C_EV_M)
}

/// Oscillation phase argument Δm²·x / (4·ħc·E), dimensionless.
///
/// `delta_m2` in eV², `x` in meters, `energy` in eV.
pub fn phase_argument(delta_m2: f64, x: f64, energy: f64) -> Result<f64> {
    if !delta_m2.is_finite() || !x.is_finite() || !energy.is_finite() {
        return Err(Error::InvalidArgument(
            "phase argument inputs must be finite".into(),
        ));
    }
    if energy <= 0.0 {
        return Err(Error::Domain(format!(
            "energy must be positive, got {energy} eV"
        )));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "distance must be non-negative, got {x} m"
        )));
    }
    Ok(delta_m2 * x / (4.0 * HBAR_C_EV_M * energy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    #[test]
    fn zero_length_maps_to_zero() {
        assert_eq!(natural_length_to_meters(0.0).unwrap(), 0.0);
    }

    #[test]
    fn inverse_of_constant_is_one_meter() {
        let one = natural_length_to_meters(1.0 / HBAR_C_EV_M).unwrap();
        assert_relative_eq!(one, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn daya_bay_oscillation_length() {
        // 4*pi*E/dm2 in natural units, E = 2 MeV, dm2 = 2.42e-3 eV^2
        let nat = 4.0 * PI * 2e6 / 2.42e-3;
        let m = natural_length_to_meters(nat).unwrap();
        assert_relative_eq!(m, 2049.5, max_relative = 1e-3);
    }

    #[test]
    fn non_finite_length_rejected() {
        assert!(matches!(
            natural_length_to_meters(f64::NAN),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            natural_length_to_meters(f64::INFINITY),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn phase_zero_baseline() {
        assert_eq!(phase_argument(2.42e-3, 0.0, 2e6).unwrap(), 0.0);
    }

    #[test]
    fn phase_is_pi_at_one_oscillation_length() {
        // x equal to one oscillation length gives a phase of pi.
        let phase = phase_argument(2.42e-3, 2049.5, 2e6).unwrap();
        assert_relative_eq!(phase, PI, max_relative = 1e-3);

        let phase = phase_argument(2.32e-3, 5.3444e5, 5e8).unwrap();
        assert_relative_eq!(phase, PI, max_relative = 1e-3);
    }

    #[test]
    fn phase_domain_errors() {
        assert!(matches!(
            phase_argument(2.42e-3, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            phase_argument(2.42e-3, 1.0, -2e6),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            phase_argument(2.42e-3, -1.0, 2e6),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn phase_scales_linearly() {
        let base = phase_argument(2.42e-3, 100.0, 2e6).unwrap();
        assert_abs_diff_eq!(
            phase_argument(2.42e-3, 300.0, 2e6).unwrap(),
            3.0 * base,
            epsilon = 1e-12 * base
        );
        assert_abs_diff_eq!(
            phase_argument(3.0 * 2.42e-3, 100.0, 2e6).unwrap(),
            3.0 * base,
            epsilon = 1e-12 * base
        );
        assert_abs_diff_eq!(
            phase_argument(2.42e-3, 100.0, 3.0 * 2e6).unwrap(),
            base / 3.0,
            epsilon = 1e-12 * base
        );
    }
}
