//! Run configuration in laboratory units, read from TOML.
//!
//! Every section and key is optional; omitted values take the defaults of
//! [`ModelParameters::default`] and the grid/scan defaults below. A config
//! written by [`RunConfig::to_toml`] reproduces the run when read back.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::model::{ModelParameters, TwoStateModel};
use crate::resolvent::ResolventGrid;
use crate::spectra::photon_energies;
use crate::units;
use crate::wavepacket::{PropagatorSettings, WavepacketSetup};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub start_angstrom: f64,
    pub stop_angstrom: f64,
    pub points: usize,
    /// RK4 steps per grid cell.
    pub substeps: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            start_angstrom: -1.5,
            stop_angstrom: 1.5,
            points: 4096,
            substeps: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    pub start_cm1: f64,
    pub stop_cm1: f64,
    pub step_cm1: f64,
    /// Final ground-curve vibrational level for Raman profiles.
    pub final_state: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            start_cm1: 9500.0,
            stop_cm1: 13500.0,
            step_cm1: 10.0,
            final_state: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WavepacketConfig {
    pub start_angstrom: f64,
    pub stop_angstrom: f64,
    pub points: usize,
    pub dt_fs: f64,
    /// Gaussian width of the regularised delta coupling, in grid steps.
    pub delta_width: f64,
    /// Absorber coverage on the dissociation side; 0 disables it.
    pub absorber_fraction: f64,
    pub absorber_strength_cm1: f64,
    /// Propagation time in units of `1/Γ`.
    pub decay_lengths: f64,
}

impl Default for WavepacketConfig {
    fn default() -> Self {
        Self {
            start_angstrom: -3.0,
            stop_angstrom: 1.5,
            points: 4096,
            dt_fs: 0.05,
            delta_width: 2.0,
            absorber_fraction: 0.15,
            absorber_strength_cm1: 2000.0,
            decay_lengths: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: String,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: ".".into() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelParameters,
    pub grid: GridConfig,
    pub scan: ScanConfig,
    pub wavepacket: WavepacketConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    /// Parse and validate. Syntax errors carry toml's line/column report.
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Check everything that can be checked without running a job.
    pub fn validate(&self) -> Result<()> {
        self.model()?;
        self.layout()?;
        self.photon_energies()?;
        self.wavepacket_setup()?;
        Ok(())
    }

    pub fn model(&self) -> Result<TwoStateModel> {
        self.model.build()
    }

    pub fn layout(&self) -> Result<ResolventGrid> {
        let g = &self.grid;
        ResolventGrid::new(
            UniformGrid::new(units::angstrom(g.start_angstrom), units::angstrom(g.stop_angstrom), g.points)?,
            g.substeps,
        )
    }

    pub fn photon_energies(&self) -> Result<Vec<f64>> {
        let s = &self.scan;
        photon_energies(s.start_cm1, s.stop_cm1, s.step_cm1)
    }

    pub fn wavepacket_setup(&self) -> Result<WavepacketSetup> {
        let w = &self.wavepacket;
        if !(w.dt_fs > 0.0) || !(w.decay_lengths > 0.0) || !(w.absorber_fraction >= 0.0) {
            return Err(Error::InvalidParameter(
                "wavepacket dt_fs and decay_lengths must be positive, absorber_fraction non-negative".into(),
            ));
        }
        Ok(WavepacketSetup {
            grid: UniformGrid::new(units::angstrom(w.start_angstrom), units::angstrom(w.stop_angstrom), w.points)?,
            settings: PropagatorSettings {
                dt: units::femtosecond(w.dt_fs),
                delta_width: w.delta_width,
                absorber_fraction: (w.absorber_fraction > 0.0).then_some(w.absorber_fraction),
                absorber_strength: units::wavenumber(w.absorber_strength_cm1),
            },
            decay_lengths: w.decay_lengths,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default() {
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
        assert_eq!(RunConfig::default().photon_energies().unwrap().len(), 401);
    }

    #[test]
    fn echo_round_trips() {
        let mut c = RunConfig::default();
        c.model.damping_cm1 = 20.0;
        c.model.morse_well_depth_cm1 = Some(900.0);
        c.scan.final_state = 2;
        let back = RunConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.model().unwrap(), c.model().unwrap());
    }

    #[test]
    fn partial_sections_override_single_keys() {
        let c = RunConfig::from_toml("[model]\ndamping_cm1 = 20.0\n\n[scan]\nstep_cm1 = 5.0\n").unwrap();
        assert_eq!(c.model.damping_cm1, 20.0);
        assert_eq!(c.model.mass_amu, 35.4);
        assert_eq!(c.photon_energies().unwrap().len(), 801);
    }

    #[test]
    fn errors_name_the_line() {
        let err = RunConfig::from_toml("[model]\nmass_amu = 35.4\ndampin = 3\n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = RunConfig::from_toml("[model]\nmass_amu = -1.0\n").unwrap_err().to_string();
        assert!(err.contains("mass"), "{err}");
    }
}
