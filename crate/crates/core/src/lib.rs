//! Two-state curve-crossing model with a delta-function coupling between a
//! harmonic (dipole-allowed) and a Morse (dipole-forbidden) excited curve.
//!
//! The coupled Green's function is assembled exactly from single-surface
//! resolvents, and yields electronic absorption spectra and resonance Raman
//! excitation profiles. A split-operator wavepacket propagator provides an
//! independent time-domain check.

pub mod config;
pub mod coupled;
pub mod error;
pub mod grid;
pub mod model;
pub mod resolvent;
pub mod spectra;
pub mod units;
pub mod validation;
pub mod wavepacket;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
