//! Two-qubit density-matrix machinery: Pauli measurements, conditional
//! states, l1-norm coherence, the steering-game NAQC average, and the
//! correlation-matrix form of the Bell-CHSH quantity.
//!
//! Everything here works on explicit matrices with fixed eigenvector
//! conventions, so it doubles as the brute-force cross-check for the
//! probability closed forms in [`crate::markers`].

#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, hermitian_eigenvalues, kron2, matmul, outer, sandwich, trace, zeros, CMat, C_ZERO,
};

/// Hermiticity / unit-trace tolerance (absolute, per entry).
const HERMITICITY_TOL: f64 = 1e-12;
/// Eigenvalues may dip this far below zero before a state is rejected.
const PSD_TOL: f64 = -1e-10;
/// Measurement branches below this probability are treated as empty.
const ZERO_BRANCH_TOL: f64 = 1e-14;
/// Maximum imaginary residue tolerated on a nominally real expectation.
const IMAG_RESIDUE_TOL: f64 = 1e-10;

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Measurement axis on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

/// Which of the two eigenvectors of an axis a measurement projected onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasurementOutcome {
    First,
    Second,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn label(self) -> &'static str {
        match self {
            PauliAxis::X => "x",
            PauliAxis::Y => "y",
            PauliAxis::Z => "z",
        }
    }

    /// The two remaining axes, in cyclic order.
    pub fn others(self) -> [PauliAxis; 2] {
        match self {
            PauliAxis::X => [PauliAxis::Y, PauliAxis::Z],
            PauliAxis::Y => [PauliAxis::X, PauliAxis::Z],
            PauliAxis::Z => [PauliAxis::X, PauliAxis::Y],
        }
    }

    /// Eigenvectors with the frozen phase conventions
    /// |x1> = (1,1)/sqrt2, |y1> = (1,i)/sqrt2, |z1> = (1,0).
    pub fn eigenvectors(self) -> ([Complex64; 2], [Complex64; 2]) {
        let r = |x: f64| Complex64::new(x, 0.0);
        let i = |x: f64| Complex64::new(0.0, x);
        match self {
            PauliAxis::X => (
                [r(SQRT_HALF), r(SQRT_HALF)],
                [r(SQRT_HALF), r(-SQRT_HALF)],
            ),
            PauliAxis::Y => (
                [r(SQRT_HALF), i(SQRT_HALF)],
                [r(SQRT_HALF), i(-SQRT_HALF)],
            ),
            PauliAxis::Z => ([r(1.0), r(0.0)], [r(0.0), r(1.0)]),
        }
    }

    fn eigenvector(self, outcome: MeasurementOutcome) -> [Complex64; 2] {
        let (first, second) = self.eigenvectors();
        match outcome {
            MeasurementOutcome::First => first,
            MeasurementOutcome::Second => second,
        }
    }

    /// The Pauli matrix for this axis.
    pub fn matrix(self) -> CMat<2> {
        let r = |x: f64| Complex64::new(x, 0.0);
        let i = |x: f64| Complex64::new(0.0, x);
        match self {
            PauliAxis::X => [[C_ZERO, r(1.0)], [r(1.0), C_ZERO]],
            PauliAxis::Y => [[C_ZERO, i(-1.0)], [i(1.0), C_ZERO]],
            PauliAxis::Z => [[r(1.0), C_ZERO], [C_ZERO, r(-1.0)]],
        }
    }
}

fn validate_density_matrix<const N: usize>(m: &CMat<N>, what: &str) -> Result<()> {
    for row in m.iter().flatten() {
        if !row.re.is_finite() || !row.im.is_finite() {
            return Err(Error::InvalidState(format!("{what}: non-finite entry")));
        }
    }
    for i in 0..N {
        for j in 0..N {
            let diff = (m[i][j] - m[j][i].conj()).norm();
            if diff > HERMITICITY_TOL {
                return Err(Error::InvalidState(format!(
                    "{what}: not Hermitian at ({i},{j}), residue {diff:.3e}"
                )));
            }
        }
    }
    let tr = trace(m);
    if (tr.re - 1.0).abs() > HERMITICITY_TOL || tr.im.abs() > HERMITICITY_TOL {
        return Err(Error::InvalidState(format!(
            "{what}: trace {tr} differs from 1"
        )));
    }
    let eigenvalues = hermitian_eigenvalues(m);
    if let Some(bad) = eigenvalues.iter().find(|&&e| e < PSD_TOL) {
        return Err(Error::InvalidState(format!(
            "{what}: negative eigenvalue {bad:.3e}"
        )));
    }
    Ok(())
}

/// A validated single-qubit density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    m: CMat<2>,
}

impl QubitState {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn from_matrix(m: CMat<2>) -> Result<Self> {
        validate_density_matrix(&m, "qubit state")?;
        Ok(Self { m })
    }

    /// Density matrix (1 + n.sigma)/2 for a Bloch vector with |n| <= 1.
    pub fn from_bloch(n: [f64; 3]) -> Result<Self> {
        let norm = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        if norm > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!(
                "Bloch vector norm {norm} exceeds 1"
            )));
        }
        let c = Complex64::new;
        let m = [
            [c(0.5 * (1.0 + n[2]), 0.0), c(0.5 * n[0], -0.5 * n[1])],
            [c(0.5 * n[0], 0.5 * n[1]), c(0.5 * (1.0 - n[2]), 0.0)],
        ];
        Self::from_matrix(m)
    }

    /// Pure state |v><v| from a normalized two-component vector.
    pub fn pure(v: [Complex64; 2]) -> Result<Self> {
        Self::from_matrix(outer(&v, &v))
    }

    pub fn matrix(&self) -> &CMat<2> {
        &self.m
    }
}

/// A validated two-qubit density matrix in the basis
/// {|00>, |01>, |10>, |11>}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitState {
    m: CMat<4>,
}

impl TwoQubitState {
    pub fn from_matrix(m: CMat<4>) -> Result<Self> {
        validate_density_matrix(&m, "two-qubit state")?;
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &CMat<4> {
        &self.m
    }

    /// The maximally mixed state 1/4.
    pub fn maximally_mixed() -> Self {
        let mut m = zeros::<4>();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Complex64::new(0.25, 0.0);
        }
        Self { m }
    }
}

/// l1-norm coherence of a qubit state in the eigenbasis of the given axis:
/// the sum of the magnitudes of both off-diagonal elements, in [0, 1].
pub fn l1_coherence(rho: &QubitState, basis: PauliAxis) -> f64 {
    let (b1, b2) = basis.eigenvectors();
    sandwich(&b1, rho.matrix(), &b2).norm() + sandwich(&b2, rho.matrix(), &b1).norm()
}

/// Coherence summed over the X, Y and Z eigenbases; bounded by sqrt(6).
pub fn sum_coherence_three_bases(rho: &QubitState) -> f64 {
    PauliAxis::ALL
        .iter()
        .map(|&axis| l1_coherence(rho, axis))
        .sum()
}

/// Projective measurement of qubit A along `axis` with the given outcome.
///
/// Returns the outcome probability and the normalized conditional state of
/// qubit B. Branches with probability below 1e-14 have no defined
/// conditional state and are reported as a distinct error.
pub fn measure_conditional(
    rho_ab: &TwoQubitState,
    axis: PauliAxis,
    outcome: MeasurementOutcome,
) -> Result<(f64, QubitState)> {
    let v = axis.eigenvector(outcome);
    let projector = kron2(&outer(&v, &v), &crate::linalg::identity::<2>());
    let post = matmul(&projector, &matmul(rho_ab.matrix(), &adjoint(&projector)));
    let p = trace(&post);
    if p.im.abs() > IMAG_RESIDUE_TOL {
        return Err(Error::InconsistentState(format!(
            "branch probability has imaginary residue {:.3e}",
            p.im
        )));
    }
    let p = p.re;
    if p < ZERO_BRANCH_TOL {
        return Err(Error::ZeroProbabilityBranch {
            axis: axis.label(),
            outcome: match outcome {
                MeasurementOutcome::First => 1,
                MeasurementOutcome::Second => 2,
            },
        });
    }
    // Partial trace over A; A is the slow index in {|00>,|01>,|10>,|11>}.
    let mut cond = zeros::<2>();
    for a in 0..2 {
        for i in 0..2 {
            for j in 0..2 {
                cond[i][j] += post[2 * a + i][2 * a + j];
            }
        }
    }
    let inv = Complex64::new(1.0 / p, 0.0);
    for row in cond.iter_mut().flatten() {
        *row *= inv;
    }
    Ok((p, QubitState::from_matrix(cond)?))
}

/// Steering-game NAQC average: for each measurement axis on A and each
/// outcome, the conditional coherence of B is taken in the two remaining
/// Pauli bases, weighted by the outcome probability; half the total is
/// returned. Values above sqrt(6) signal a nonlocal advantage of quantum
/// coherence.
pub fn naqc_steering(rho_ab: &TwoQubitState) -> f64 {
    let mut total = 0.0;
    for &axis in &PauliAxis::ALL {
        for outcome in [MeasurementOutcome::First, MeasurementOutcome::Second] {
            match measure_conditional(rho_ab, axis, outcome) {
                Ok((p, cond)) => {
                    for &other in &axis.others() {
                        total += p * l1_coherence(&cond, other);
                    }
                }
                // Empty branches carry weight zero.
                Err(Error::ZeroProbabilityBranch { .. }) => continue,
                // Validated inputs cannot reach the remaining arms.
                Err(_) => unreachable!("conditional state from a valid two-qubit state"),
            }
        }
    }
    total / 2.0
}

/// Correlation matrix T with entries T_mn = Tr[rho (sigma_m (x) sigma_n)].
///
/// The expectation values of Hermitian observables must be real; an
/// imaginary residue above 1e-10 is reported as an inconsistent state.
pub fn correlation_matrix(rho_ab: &TwoQubitState) -> Result<[[f64; 3]; 3]> {
    let mut t = [[0.0; 3]; 3];
    for (m, &am) in PauliAxis::ALL.iter().enumerate() {
        for (n, &an) in PauliAxis::ALL.iter().enumerate() {
            let op = kron2(&am.matrix(), &an.matrix());
            let val = trace(&matmul(rho_ab.matrix(), &op));
            if val.im.abs() > IMAG_RESIDUE_TOL {
                return Err(Error::InconsistentState(format!(
                    "correlation entry ({m},{n}) has imaginary residue {:.3e}",
                    val.im
                )));
            }
            t[m][n] = val.re;
        }
    }
    Ok(t)
}

/// Bell-CHSH quantity M = u1 + u2, where u1 >= u2 >= u3 are the eigenvalues
/// of T^T T. M > 1 signals Bell nonlocality.
pub fn chsh_m(rho_ab: &TwoQubitState) -> Result<f64> {
    let eig = correlation_spectrum(rho_ab)?;
    Ok(eig[0] + eig[1])
}

/// Eigenvalues of T^T T in descending order.
pub fn correlation_spectrum(rho_ab: &TwoQubitState) -> Result<[f64; 3]> {
    let t = correlation_matrix(rho_ab)?;
    // T^T T is real symmetric; embed it as a complex Hermitian matrix and
    // reuse the Jacobi solver.
    let mut tt = zeros::<3>();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for k in 0..3 {
                acc += t[k][i] * t[k][j];
            }
            tt[i][j] = Complex64::new(acc, 0.0);
        }
    }
    Ok(hermitian_eigenvalues(&tt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C_ONE;
    use crate::markers::flavor_density_matrix;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn flavor_state(p: f64, phi: f64) -> TwoQubitState {
        let a_surv = c(p.sqrt(), 0.0);
        let a_trans = Complex64::from_polar((1.0 - p).sqrt(), phi);
        flavor_density_matrix(a_surv, a_trans).unwrap()
    }

    #[test]
    fn z_eigenstate_coherences() {
        let ground = QubitState::pure([C_ONE, C_ZERO]).unwrap();
        assert_eq!(l1_coherence(&ground, PauliAxis::Z), 0.0);
        assert_abs_diff_eq!(l1_coherence(&ground, PauliAxis::X), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l1_coherence(&ground, PauliAxis::Y), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(sum_coherence_three_bases(&ground), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn maximally_mixed_qubit_has_no_coherence() {
        let mixed = QubitState::from_bloch([0.0, 0.0, 0.0]).unwrap();
        assert_abs_diff_eq!(sum_coherence_three_bases(&mixed), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn diagonal_bloch_state_saturates_three_basis_bound() {
        let n = 1.0 / 3f64.sqrt();
        let rho = QubitState::from_bloch([n, n, n]).unwrap();
        assert_abs_diff_eq!(
            l1_coherence(&rho, PauliAxis::Z),
            (2.0f64 / 3.0).sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            sum_coherence_three_bases(&rho),
            6.0f64.sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn invalid_states_rejected() {
        // Trace 2.
        let mut m = zeros::<2>();
        m[0][0] = c(2.0, 0.0);
        assert!(matches!(
            QubitState::from_matrix(m),
            Err(Error::InvalidState(_))
        ));
        // Not Hermitian.
        let m = [[c(0.5, 0.0), c(0.3, 0.0)], [c(0.1, 0.0), c(0.5, 0.0)]];
        assert!(matches!(
            QubitState::from_matrix(m),
            Err(Error::InvalidState(_))
        ));
        // Hermitian, unit trace, but indefinite.
        let m = [[c(1.2, 0.0), C_ZERO], [C_ZERO, c(-0.2, 0.0)]];
        assert!(matches!(
            QubitState::from_matrix(m),
            Err(Error::InvalidState(_))
        ));
    }

    #[test]
    fn survival_only_state_measured_in_z() {
        // P = 1: the state is |10> exactly.
        let rho = flavor_state(1.0, 0.0);
        let (p, cond) =
            measure_conditional(&rho, PauliAxis::Z, MeasurementOutcome::Second).unwrap();
        assert_abs_diff_eq!(p, 1.0, epsilon = 1e-14);
        let expect = QubitState::pure([C_ONE, C_ZERO]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (cond.matrix()[i][j] - expect.matrix()[i][j]).norm(),
                    0.0,
                    epsilon = 1e-14
                );
            }
        }
        // The complementary branch is empty.
        assert!(matches!(
            measure_conditional(&rho, PauliAxis::Z, MeasurementOutcome::First),
            Err(Error::ZeroProbabilityBranch { .. })
        ));
    }

    #[test]
    fn x_measurement_on_flavor_state_is_unbiased() {
        for p in [0.1, 0.5, 0.916] {
            let rho = flavor_state(p, 0.0);
            let (prob, _) =
                measure_conditional(&rho, PauliAxis::X, MeasurementOutcome::First).unwrap();
            assert_abs_diff_eq!(prob, 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn outcome_probabilities_sum_to_one() {
        let rho = flavor_state(0.7, 1.3);
        for &axis in &PauliAxis::ALL {
            let mut total = 0.0;
            for outcome in [MeasurementOutcome::First, MeasurementOutcome::Second] {
                match measure_conditional(&rho, axis, outcome) {
                    Ok((p, _)) => total += p,
                    Err(Error::ZeroProbabilityBranch { .. }) => {}
                    Err(e) => panic!("unexpected error: {e}"),
                }
            }
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn conditional_state_after_x_matches_amplitude_construction() {
        // Conditioning on the first x outcome leaves B in
        // [[|a_s|^2, a_s a_t*], [a_t a_s*, |a_t|^2]].
        let p: f64 = 0.916;
        let a_s = c(p.sqrt(), 0.0);
        let a_t = c((1.0 - p).sqrt(), 0.0);
        let rho = flavor_density_matrix(a_s, a_t).unwrap();
        let (_, cond) =
            measure_conditional(&rho, PauliAxis::X, MeasurementOutcome::First).unwrap();
        let expect = [
            [a_s * a_s.conj(), a_s * a_t.conj()],
            [a_t * a_s.conj(), a_t * a_t.conj()],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(
                    (cond.matrix()[i][j] - expect[i][j]).norm(),
                    0.0,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn naqc_of_product_state_is_two() {
        let mut m = zeros::<4>();
        m[0][0] = C_ONE; // |00><00|
        let rho = TwoQubitState::from_matrix(m).unwrap();
        assert_abs_diff_eq!(naqc_steering(&rho), 2.0, epsilon = 1e-12);

        let survival_only = flavor_state(1.0, 0.0);
        assert_abs_diff_eq!(naqc_steering(&survival_only), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn naqc_of_balanced_flavor_state_is_three() {
        let rho = flavor_state(0.5, 0.0);
        assert_abs_diff_eq!(naqc_steering(&rho), 3.0, epsilon = 1e-12);
    }

    #[test]
    fn naqc_matches_closed_form_on_real_amplitudes() {
        for k in 1..40 {
            let p = k as f64 / 40.0;
            let expected = 2.0 + 2.0 * (p * (1.0 - p)).sqrt();
            assert_abs_diff_eq!(
                naqc_steering(&flavor_state(p, 0.0)),
                expected,
                epsilon = 1e-12
            );
            // A relative phase of pi flips the sign of the amplitude
            // product and leaves the average unchanged.
            assert_abs_diff_eq!(
                naqc_steering(&flavor_state(p, std::f64::consts::PI)),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn naqc_depends_on_relative_phase() {
        // With a quarter-turn relative phase the steering average collapses
        // to 1 + 2 sqrt(P(1-P)) + |2P-1|; the real-amplitude closed form
        // does not apply there.
        let p = 0.5;
        let n = naqc_steering(&flavor_state(p, std::f64::consts::FRAC_PI_2));
        assert_abs_diff_eq!(n, 2.0, epsilon = 1e-12);
        assert!((n - 3.0).abs() > 0.4);
    }

    #[test]
    fn general_phase_steering_value() {
        // Enumerating the steering game gives
        //   1 + 2 sqrt(PQ) + sqrt((P-Q)^2 + 4 P Q cos^2 phi)
        // for amplitudes (sqrt P, sqrt Q e^{i phi}); cross-check the game
        // against this independently derived expression.
        let cases: [(f64, f64); 4] = [(0.3, 0.7), (0.5, 1.1), (0.916, 2.9), (0.08, 0.4)];
        for &(p, phi) in &cases {
            let q = 1.0 - p;
            let expected = 1.0
                + 2.0 * (p * q).sqrt()
                + ((p - q) * (p - q) + 4.0 * p * q * phi.cos() * phi.cos()).sqrt();
            assert_abs_diff_eq!(
                naqc_steering(&flavor_state(p, phi)),
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn per_axis_coherence_contribution_stays_within_qubit_bound() {
        // The probability-weighted two-basis coherence collected from one
        // x-axis measurement equals 1 + 2 sqrt(P(1-P)) and never exceeds
        // the two-basis maximum of 2.
        for k in 1..20 {
            let p = k as f64 / 20.0;
            let rho = flavor_state(p, 0.0);
            let mut contribution = 0.0;
            for outcome in [MeasurementOutcome::First, MeasurementOutcome::Second] {
                let (prob, cond) = measure_conditional(&rho, PauliAxis::X, outcome).unwrap();
                for &other in &PauliAxis::X.others() {
                    contribution += prob * l1_coherence(&cond, other);
                }
            }
            let expected = 1.0 + 2.0 * (p * (1.0 - p)).sqrt();
            assert_abs_diff_eq!(contribution, expected, epsilon = 1e-12);
            assert!(contribution <= 2.0 + 1e-12);
        }
    }

    #[test]
    fn correlation_matrix_of_flavor_state() {
        let p = 0.73;
        let rho = flavor_state(p, 0.0);
        let t = correlation_matrix(&rho).unwrap();
        let r = (p * (1.0 - p)).sqrt();
        assert_abs_diff_eq!(t[0][0], 2.0 * r, epsilon = 1e-13);
        assert_abs_diff_eq!(t[1][1], 2.0 * r, epsilon = 1e-13);
        assert_abs_diff_eq!(t[2][2], -1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t[0][2], 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(t[2][0], 0.0, epsilon = 1e-13);
    }

    #[test]
    fn correlation_matrix_of_maximally_mixed_state_vanishes() {
        let t = correlation_matrix(&TwoQubitState::maximally_mixed()).unwrap();
        for row in &t {
            for &v in row {
                assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn chsh_spectrum_on_flavor_states() {
        for &(p, phi) in &[(0.5, 0.0), (0.916, 0.0), (0.3, 1.9), (0.99, 4.4)] {
            let rho = flavor_state(p, phi);
            let eig = correlation_spectrum(&rho).unwrap();
            let pq4 = 4.0 * p * (1.0 - p);
            assert_abs_diff_eq!(eig[0], 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(eig[1], pq4, epsilon = 1e-12);
            assert_abs_diff_eq!(eig[2], pq4, epsilon = 1e-12);
            assert_abs_diff_eq!(chsh_m(&rho).unwrap(), 1.0 + pq4, epsilon = 1e-12);
        }
    }

    #[test]
    fn chsh_extremes() {
        assert_abs_diff_eq!(chsh_m(&flavor_state(0.5, 0.0)).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(chsh_m(&flavor_state(1.0, 0.0)).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(chsh_m(&flavor_state(0.0, 0.0)).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn steering_average_invariant_under_eigenvector_phase_convention() {
        // Re-run the steering game with every eigenvector multiplied by
        // its own arbitrary phase. Conditional matrices change; the
        // average must not.
        use crate::linalg::{identity, kron2, matmul, outer, sandwich, trace};

        fn steering_with_phases(rho: &TwoQubitState, phases: &[f64; 6]) -> f64 {
            let mut shifted: Vec<[Complex64; 2]> = Vec::new();
            for (i, &axis) in PauliAxis::ALL.iter().enumerate() {
                let (b1, b2) = axis.eigenvectors();
                let p1 = Complex64::from_polar(1.0, phases[2 * i]);
                let p2 = Complex64::from_polar(1.0, phases[2 * i + 1]);
                shifted.push([b1[0] * p1, b1[1] * p1]);
                shifted.push([b2[0] * p2, b2[1] * p2]);
            }
            let mut total = 0.0;
            for (i, _) in PauliAxis::ALL.iter().enumerate() {
                for outcome in 0..2 {
                    let v = &shifted[2 * i + outcome];
                    let projector = kron2(&outer(v, v), &identity::<2>());
                    let post = matmul(&projector, &matmul(rho.matrix(), &projector));
                    let p = trace(&post).re;
                    if p < 1e-14 {
                        continue;
                    }
                    let mut cond = crate::linalg::zeros::<2>();
                    for a in 0..2 {
                        for r in 0..2 {
                            for s in 0..2 {
                                cond[r][s] += post[2 * a + r][2 * a + s] / p;
                            }
                        }
                    }
                    for j in 0..3 {
                        if j == i {
                            continue;
                        }
                        let b1 = &shifted[2 * j];
                        let b2 = &shifted[2 * j + 1];
                        total += p
                            * (sandwich(b1, &cond, b2).norm() + sandwich(b2, &cond, b1).norm());
                    }
                }
            }
            total / 2.0
        }

        for &(p, phi) in &[(0.5, 0.0), (0.916, 0.0), (0.3, 1.2)] {
            let rho = flavor_state(p, phi);
            let reference = naqc_steering(&rho);
            let same = steering_with_phases(&rho, &[0.0; 6]);
            assert_abs_diff_eq!(same, reference, epsilon = 1e-12);
            let twisted =
                steering_with_phases(&rho, &[0.3, 1.7, 2.9, 4.1, 5.3, 0.7]);
            assert_abs_diff_eq!(twisted, reference, epsilon = 1e-12);
        }
    }

    #[test]
    fn naqc_invariant_under_global_phase() {
        let p = 0.37;
        let base = flavor_state(p, 0.8);
        let global = Complex64::from_polar(1.0, 2.1);
        let a_s = c(p.sqrt(), 0.0) * global;
        let a_t = Complex64::from_polar((1.0 - p).sqrt(), 0.8) * global;
        let shifted = flavor_density_matrix(a_s, a_t).unwrap();
        assert_relative_eq!(
            naqc_steering(&base),
            naqc_steering(&shifted),
            max_relative = 1e-13
        );
    }
}
