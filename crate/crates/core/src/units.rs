//! Laboratory units and the internal unit system.
//!
//! Internally energies are measured in cm⁻¹ (an energy `E` is stored as
//! `E / hc` with `hc` in erg·cm), lengths in Å, and the mass and time units
//! are chosen so that ħ = 1. With ħ = 1 an angular frequency and the energy
//! of one quantum are the same number, so `400 cm⁻¹` is both a wavenumber and
//! a vibrational angular frequency.
//!
//! Derived units:
//! - time: `ħ / (hc · 1 cm⁻¹)` ≈ 5.309 ps
//! - mass: `ħ² / (hc · 1 cm⁻¹ · Å²)` ≈ 5.599e-23 g

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Reduced Planck constant, erg·s.
pub const HBAR_ERG_S: f64 = 1.054571817e-27;
/// Atomic mass unit, g.
pub const AMU_G: f64 = 1.66053907e-24;
/// Planck constant times speed of light, erg·cm.
pub const HC_ERG_CM: f64 = 1.98644586e-16;
/// One ångström in cm.
pub const ANGSTROM_CM: f64 = 1e-8;

/// Internal time unit in seconds.
pub const TIME_UNIT_S: f64 = HBAR_ERG_S / HC_ERG_CM;
/// Internal mass unit in grams.
pub const MASS_UNIT_G: f64 = HBAR_ERG_S * HBAR_ERG_S / (HC_ERG_CM * ANGSTROM_CM * ANGSTROM_CM);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Energy,
    Mass,
    Length,
    Time,
    /// Energy × length, the dimension of a delta-function coupling strength.
    CouplingStrength,
    AngularFrequency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    /// cm⁻¹ read as an energy (`hc ν̃`).
    Wavenumber,
    /// cm⁻¹ read as an angular frequency (`2πc ν̃`).
    AngularWavenumber,
    Erg,
    Amu,
    Gram,
    Angstrom,
    Centimeter,
    ErgAngstrom,
    Femtosecond,
    Second,
    /// Value already in internal units.
    Internal(Dimension),
}

impl Unit {
    pub fn dimension(self) -> Dimension {
        match self {
            Unit::Wavenumber | Unit::Erg => Dimension::Energy,
            Unit::AngularWavenumber => Dimension::AngularFrequency,
            Unit::Amu | Unit::Gram => Dimension::Mass,
            Unit::Angstrom | Unit::Centimeter => Dimension::Length,
            Unit::ErgAngstrom => Dimension::CouplingStrength,
            Unit::Femtosecond | Unit::Second => Dimension::Time,
            Unit::Internal(d) => d,
        }
    }

    /// Multiplier taking a value in this unit to internal units.
    fn scale(self) -> f64 {
        match self {
            Unit::Wavenumber | Unit::AngularWavenumber => 1.0,
            Unit::Erg => 1.0 / HC_ERG_CM,
            Unit::Amu => AMU_G / MASS_UNIT_G,
            Unit::Gram => 1.0 / MASS_UNIT_G,
            Unit::Angstrom => 1.0,
            Unit::Centimeter => 1.0 / ANGSTROM_CM,
            Unit::ErgAngstrom => 1.0 / HC_ERG_CM,
            Unit::Femtosecond => 1e-15 / TIME_UNIT_S,
            Unit::Second => 1.0 / TIME_UNIT_S,
            Unit::Internal(_) => 1.0,
        }
    }

    fn accepts(self, dimension: Dimension) -> bool {
        let own = self.dimension();
        own == dimension || (is_energy_like(own) && is_energy_like(dimension))
    }
}

fn is_energy_like(d: Dimension) -> bool {
    matches!(d, Dimension::Energy | Dimension::AngularFrequency)
}

impl FromStr for Unit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unit = match s.trim() {
            "cm-1" | "cm^-1" | "cm⁻¹" | "wavenumber" => Unit::Wavenumber,
            "rad cm-1" | "angular cm-1" => Unit::AngularWavenumber,
            "erg" => Unit::Erg,
            "amu" | "u" => Unit::Amu,
            "g" | "gram" => Unit::Gram,
            "A" | "Å" | "angstrom" => Unit::Angstrom,
            "cm" => Unit::Centimeter,
            "erg*A" | "erg.A" | "erg·Å" | "erg angstrom" => Unit::ErgAngstrom,
            "fs" => Unit::Femtosecond,
            "s" => Unit::Second,
            other => return Err(Error::UnknownUnit(other.to_string())),
        };
        Ok(unit)
    }
}

/// A value in internal units tagged with its dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dimension: Dimension,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({:?}, internal)", self.value, self.dimension)
    }
}

pub fn to_internal(value: f64, unit: Unit) -> Quantity {
    Quantity {
        value: value * unit.scale(),
        dimension: unit.dimension(),
    }
}

/// Parses the unit tag first; unknown tags are rejected.
pub fn to_internal_tagged(value: f64, tag: &str) -> Result<Quantity> {
    Ok(to_internal(value, tag.parse()?))
}

pub fn from_internal(q: Quantity, unit: Unit) -> Result<f64> {
    if !unit.accepts(q.dimension) {
        return Err(Error::DimensionMismatch {
            unit,
            dimension: q.dimension,
        });
    }
    Ok(q.value / unit.scale())
}

// Shorthands used throughout the crate for values that are already known
// to carry the right dimension.

pub fn wavenumber(cm1: f64) -> f64 {
    to_internal(cm1, Unit::Wavenumber).value
}

pub fn amu(m: f64) -> f64 {
    to_internal(m, Unit::Amu).value
}

pub fn angstrom(x: f64) -> f64 {
    to_internal(x, Unit::Angstrom).value
}

pub fn erg_angstrom(k: f64) -> f64 {
    to_internal(k, Unit::ErgAngstrom).value
}

pub fn femtosecond(t: f64) -> f64 {
    to_internal(t, Unit::Femtosecond).value
}

pub fn to_femtoseconds(t: f64) -> f64 {
    t * TIME_UNIT_S / 1e-15
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const ALL: [Unit; 10] = [
        Unit::Wavenumber,
        Unit::AngularWavenumber,
        Unit::Erg,
        Unit::Amu,
        Unit::Gram,
        Unit::Angstrom,
        Unit::Centimeter,
        Unit::ErgAngstrom,
        Unit::Femtosecond,
        Unit::Second,
    ];

    #[test]
    fn wavenumber_is_angular_frequency_with_unit_hbar() {
        // 2πc·400 s⁻¹ times the internal time unit.
        let c_cm_s = 2.99792458e10;
        let omega = 2.0 * std::f64::consts::PI * c_cm_s * 400.0 * TIME_UNIT_S;
        let q = to_internal(400.0, Unit::AngularWavenumber);
        assert_relative_eq!(q.value, omega, max_relative = 1e-8);
        assert_eq!(to_internal(400.0, Unit::Wavenumber).value, q.value);
    }

    #[test]
    fn zero_maps_to_zero() {
        assert_eq!(to_internal(0.0, Unit::Wavenumber).value, 0.0);
        let q = Quantity { value: 0.0, dimension: Dimension::Mass };
        assert_eq!(from_internal(q, Unit::Amu).unwrap(), 0.0);
        assert_eq!(from_internal(q, Unit::Gram).unwrap(), 0.0);
    }

    #[test]
    fn coupling_round_trip() {
        let q = to_internal(5.54275e-15, Unit::ErgAngstrom);
        assert_eq!(q.dimension, Dimension::CouplingStrength);
        let back = from_internal(q, Unit::ErgAngstrom).unwrap();
        assert_relative_eq!(back, 5.54275e-15, max_relative = 1e-12);
    }

    #[test]
    fn mass_round_trip_and_value() {
        let q = to_internal(35.4, Unit::Amu);
        assert_relative_eq!(from_internal(q, Unit::Amu).unwrap(), 35.4, max_relative = 1e-12);
        // ħ²/(2 amu Å²) is 16.8576 cm⁻¹ with these constants.
        let b = 1.0 / (2.0 * to_internal(1.0, Unit::Amu).value);
        assert_relative_eq!(b, 16.857_63, max_relative = 1e-5);
    }

    #[test]
    fn energy_to_erg() {
        let q = to_internal(10700.0, Unit::Wavenumber);
        let erg = from_internal(q, Unit::Erg).unwrap();
        assert_relative_eq!(erg, 10700.0 * HC_ERG_CM, max_relative = 1e-14);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let q = to_internal(1.0, Unit::Angstrom);
        assert!(matches!(
            from_internal(q, Unit::Amu),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn unknown_tag_is_rejected() {
        assert!(matches!(to_internal_tagged(1.0, "furlong"), Err(Error::UnknownUnit(_))));
        assert_eq!(to_internal_tagged(2.0, "cm").unwrap().value, 2e8);
    }

    proptest! {
        #[test]
        fn round_trip_every_unit(v in -1e6f64..1e6, idx in 0usize..ALL.len()) {
            let unit = ALL[idx];
            let back = from_internal(to_internal(v, unit), unit).unwrap();
            prop_assert!((back - v).abs() <= 1e-12 * v.abs());
        }
    }
}
