//! Property tests for the algebraic invariants.

use num_complex::Complex64;
use proptest::prelude::*;

use nuquant::markers::{
    chsh_from_probability, flavor_density_matrix, naqc_from_probability, NAQC_BOUND,
};
use nuquant::oscillation::{
    plane_wave_amplitudes, survival_probability_pw, survival_probability_wp, OscillationParams,
    WavePacketParams,
};
use nuquant::qubit::{
    chsh_m, l1_coherence, naqc_steering, sum_coherence_three_bases, PauliAxis, QubitState,
};
use nuquant::units::{natural_length_to_meters, phase_argument};

fn bloch_vector() -> impl Strategy<Value = [f64; 3]> {
    // Uniform direction scaled by a radius in [0, 1].
    (0.0..1.0f64, 0.0..std::f64::consts::TAU, -1.0..1.0f64).prop_map(|(r, phi, cos_theta)| {
        let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
        [
            r * sin_theta * phi.cos(),
            r * sin_theta * phi.sin(),
            r * cos_theta,
        ]
    })
}

fn flavor_state(p: f64, phi: f64) -> nuquant::qubit::TwoQubitState {
    flavor_density_matrix(
        Complex64::new(p.sqrt(), 0.0),
        Complex64::from_polar((1.0 - p).sqrt(), phi),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn phase_argument_scales_linearly(
        dm2 in 1e-5..1e-2f64,
        x in 0.0..1e9f64,
        energy in 1e5..1e10f64,
        scale in 0.1..10.0f64,
    ) {
        let base = phase_argument(dm2, x, energy).unwrap();
        let in_x = phase_argument(dm2, scale * x, energy).unwrap();
        let in_dm2 = phase_argument(scale * dm2, x, energy).unwrap();
        let in_energy = phase_argument(dm2, x, scale * energy).unwrap();
        prop_assert!((in_x - scale * base).abs() <= 1e-12 * base.abs().max(1e-300));
        prop_assert!((in_dm2 - scale * base).abs() <= 1e-12 * base.abs().max(1e-300));
        prop_assert!((in_energy - base / scale).abs() <= 1e-12 * base.abs().max(1e-300));
    }

    #[test]
    fn natural_length_is_additive(a in 1e-6..1e6f64, b in 1e-6..1e6f64) {
        let joint = natural_length_to_meters(a + b).unwrap();
        let split = natural_length_to_meters(a).unwrap() + natural_length_to_meters(b).unwrap();
        prop_assert!((joint - split).abs() <= 1e-14 * joint.abs());
    }

    #[test]
    fn qubit_coherence_bounds(n in bloch_vector()) {
        let rho = QubitState::from_bloch(n).unwrap();
        for axis in [PauliAxis::X, PauliAxis::Y, PauliAxis::Z] {
            prop_assert!(l1_coherence(&rho, axis) <= 1.0 + 1e-12);
        }
        prop_assert!(sum_coherence_three_bases(&rho) <= NAQC_BOUND + 1e-12);
    }

    #[test]
    fn chsh_closed_form_holds_for_any_phase(
        p in 0.0..1.0f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let rho = flavor_state(p, phi);
        let expected = 1.0 + 4.0 * p * (1.0 - p);
        prop_assert!((chsh_m(&rho).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn naqc_steering_invariant_under_global_phase(
        p in 0.01..0.99f64,
        phi in 0.0..std::f64::consts::TAU,
        global in 0.0..std::f64::consts::TAU,
    ) {
        let plain = flavor_state(p, phi);
        let rotation = Complex64::from_polar(1.0, global);
        let rotated = flavor_density_matrix(
            Complex64::new(p.sqrt(), 0.0) * rotation,
            Complex64::from_polar((1.0 - p).sqrt(), phi) * rotation,
        ).unwrap();
        prop_assert!((naqc_steering(&plain) - naqc_steering(&rotated)).abs() < 1e-12);
    }

    #[test]
    fn markers_symmetric_and_bounded(p in 0.0..1.0f64) {
        let naqc = naqc_from_probability(p).unwrap();
        let chsh = chsh_from_probability(p).unwrap();
        prop_assert!((naqc - naqc_from_probability(1.0 - p).unwrap()).abs() < 1e-12);
        prop_assert!((chsh - chsh_from_probability(1.0 - p).unwrap()).abs() < 1e-12);
        prop_assert!((2.0..=3.0 + 1e-15).contains(&naqc));
        prop_assert!((1.0..=2.0 + 1e-15).contains(&chsh));
    }

    #[test]
    fn plane_wave_amplitudes_stay_unitary(
        sin2_2theta in 0.0..1.0f64,
        dm2 in 1e-4..1e-2f64,
        energy in 1e6..1e9f64,
        x in 0.0..1e7f64,
    ) {
        let params = OscillationParams::new(sin2_2theta, dm2).unwrap();
        let (a_surv, a_trans) = plane_wave_amplitudes(&params, energy, x).unwrap();
        let p = survival_probability_pw(&params, energy, x).unwrap();
        prop_assert!((a_surv.norm_sqr() + a_trans.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert!((a_surv.norm_sqr() - p).abs() < 1e-12);
    }

    #[test]
    fn wave_packet_probability_in_range(
        sin2_2theta in 0.0..1.0f64,
        dm2 in 1e-4..1e-2f64,
        energy in 1e6..1e9f64,
        sigma_x in 1e-9..1e-5f64,
        xi in 0.0..2.0f64,
        x in 0.0..1e13f64,
    ) {
        let params = OscillationParams::new(sin2_2theta, dm2).unwrap();
        let wp = WavePacketParams::new(sigma_x, xi).unwrap();
        let p = survival_probability_wp(&params, &wp, energy, x).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        // The transition probability is the complement by construction.
        prop_assert!((0.0..=1.0).contains(&(1.0 - p)));
    }
}
