//! Quantumness markers for two-flavor neutrino oscillations.
//!
//! The crate computes the nonlocal advantage of quantum coherence (NAQC)
//! and the Bell-CHSH quantity M along a neutrino beamline, in both the
//! plane-wave and the wave-packet description of the oscillation, and
//! ships Daya Bay and MINOS parameter presets for producing scan data.
//!
//! Two independent routes exist for every marker: closed forms in the
//! survival probability ([`markers`]) and a brute-force density-matrix
//! evaluation ([`qubit`]); `nuquant validate` cross-checks them, together
//! with a momentum-space quadrature for the Gaussian wave-packet
//! amplitude.
//!
//! Units: energies in eV, mass splittings in eV^2, lengths in meters.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod markers;
pub mod oscillation;
pub mod qubit;
pub mod units;

pub use error::{Error, Result};
