//! Absorption spectra and resonance Raman excitation profiles.
//!
//! For photon energy `ω` the resolvent argument is `z = ω + ω₀/2 + iΓ` and
//!
//! ```text
//! I_A(ω) = Re[i ⟨χ₀|G₁₁(z)|χ₀⟩],     I_R(ω) = |⟨χ_f|G₁₁(z)|χ₀⟩|²
//! ```
//!
//! with `χ_n` ground-curve vibrational states. Only the `1,1` block enters
//! because the second excited state carries no transition dipole. Overall
//! proportionality constants are set to one.

use std::sync::Arc;

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::coupled::CoupledResolvent;
use crate::error::{Error, Result};
use crate::grid::trapezoid;
use crate::model::{franck_condon_overlap, TwoStateModel};
use crate::resolvent::{build_resolvent, ComplexEnergy, PotentialTable, ResolventGrid};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    Absorption,
    Raman,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumMetadata {
    /// SHA-256 of the model and grid settings, hex encoded.
    pub fingerprint: String,
    pub layout: ResolventGrid,
    pub coupled: bool,
    pub final_state: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// `(photon energy in cm⁻¹, intensity)` with strictly increasing energy.
    pub samples: Vec<(f64, f64)>,
    pub kind: SpectrumKind,
    pub metadata: SpectrumMetadata,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.0).collect()
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.1).collect()
    }
}

/// `count` photon energies `start, start + step, …`.
pub fn photon_energies(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(stop > start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "invalid scan window {start}..{stop} step {step}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|j| start + j as f64 * step).collect())
}

pub fn model_fingerprint(model: &TwoStateModel, layout: &ResolventGrid) -> String {
    let digest = Sha256::digest(format!("{model:?}|{layout:?}").as_bytes());
    hex::encode(digest)
}

/// Tabulated potentials and initial state, reused over a whole scan.
#[derive(Debug, Clone)]
pub struct SpectrumSolver {
    model: TwoStateModel,
    layout: ResolventGrid,
    allowed: Arc<PotentialTable>,
    forbidden: Arc<PotentialTable>,
    initial: Vec<f64>,
}

impl SpectrumSolver {
    pub fn new(model: &TwoStateModel, layout: ResolventGrid) -> Result<Self> {
        let allowed = Arc::new(PotentialTable::new(&model.allowed, model.allowed.mass(), layout)?);
        let forbidden = Arc::new(PotentialTable::new(&model.forbidden, model.forbidden.mass(), layout)?);
        let initial = model.ground_state(0)?.sample(&layout.grid);
        Ok(Self {
            model: *model,
            layout,
            allowed,
            forbidden,
            initial,
        })
    }

    pub fn model(&self) -> &TwoStateModel {
        &self.model
    }

    pub fn energy(&self, omega: f64) -> Result<ComplexEnergy> {
        ComplexEnergy::new(omega + self.model.zero_point(), self.model.damping)
    }

    /// `⟨f|G₁₁(z(ω))|χ₀⟩`, or `⟨f|G₁⁰|χ₀⟩` when `coupled` is false.
    pub fn amplitude(&self, omega: f64, bra: &[f64], coupled: bool) -> Result<C64> {
        let z = self.energy(omega)?;
        let ev1 = build_resolvent(self.allowed.clone(), z)?;
        if !coupled {
            return ev1.greens_matrix_element(bra, &self.initial);
        }
        let ev2 = build_resolvent(self.forbidden.clone(), z)?;
        let c = self.model.coupling;
        Ok(CoupledResolvent::new(&ev1, &ev2, c.strength, c.location)?
            .g11_element(bra, &self.initial)?
            .value)
    }

    fn scan<F>(&self, omegas: &[f64], kind: SpectrumKind, coupled: bool, final_state: Option<usize>, f: F) -> Result<Spectrum>
    where
        F: Fn(f64) -> Result<f64> + Sync,
    {
        check_increasing(omegas)?;
        let intensities: Vec<f64> = omegas.par_iter().map(|&w| f(w)).collect::<Result<_>>()?;
        Ok(Spectrum {
            samples: omegas.iter().copied().zip(intensities).collect(),
            kind,
            metadata: SpectrumMetadata {
                fingerprint: model_fingerprint(&self.model, &self.layout),
                layout: self.layout,
                coupled,
                final_state,
            },
        })
    }

    pub fn absorption(&self, omegas: &[f64], coupled: bool) -> Result<Spectrum> {
        self.scan(omegas, SpectrumKind::Absorption, coupled, None, |w| {
            let a = self.amplitude(w, &self.initial, coupled)?;
            Ok((C64::i() * a).re)
        })
    }

    pub fn raman(&self, final_state: usize, omegas: &[f64], coupled: bool) -> Result<Spectrum> {
        if final_state == 0 {
            return Err(Error::InvalidParameter("Raman final state must be at least 1".into()));
        }
        let bra = self.model.ground_state(final_state)?.sample(&self.layout.grid);
        self.scan(omegas, SpectrumKind::Raman, coupled, Some(final_state), |w| {
            Ok(self.amplitude(w, &bra, coupled)?.norm_sqr())
        })
    }
}

fn check_increasing(omegas: &[f64]) -> Result<()> {
    if omegas.is_empty() {
        return Err(Error::InvalidParameter("empty photon-energy grid".into()));
    }
    if omegas.iter().any(|w| !w.is_finite()) || omegas.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter(
            "photon energies must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

pub fn absorption_spectrum(model: &TwoStateModel, layout: ResolventGrid, omegas: &[f64], coupled: bool) -> Result<Spectrum> {
    SpectrumSolver::new(model, layout)?.absorption(omegas, coupled)
}

pub fn raman_profile(
    model: &TwoStateModel,
    layout: ResolventGrid,
    final_state: usize,
    omegas: &[f64],
    coupled: bool,
) -> Result<Spectrum> {
    SpectrumSolver::new(model, layout)?.raman(final_state, omegas, coupled)
}

/// `∫|I_c − I_u| dω / ∫ I_u dω` on a shared uniform grid.
pub fn deviation_metric(coupled: &Spectrum, uncoupled: &Spectrum) -> Result<f64> {
    let a = coupled.energies();
    if a != uncoupled.energies() || a.len() < 2 {
        return Err(Error::GridMismatch);
    }
    let h = a[1] - a[0];
    let diff: Vec<f64> = coupled
        .samples
        .iter()
        .zip(&uncoupled.samples)
        .map(|(c, u)| (c.1 - u.1).abs())
        .collect();
    let base = trapezoid(&uncoupled.intensities(), h);
    Ok(trapezoid(&diff, h) / base)
}

/// Uncoupled `⟨χ_f|G₁⁰|χ₀⟩` as a Franck–Condon sum over allowed-curve levels
/// `n = 0..=n_max`.
pub fn franck_condon_amplitude(model: &TwoStateModel, omega: f64, final_state: usize, n_max: usize) -> Result<C64> {
    let z = C64::new(omega + model.zero_point(), model.damping);
    let w = model.allowed.frequency();
    let mut acc = C64::default();
    for n in 0..=n_max {
        let e_n = model.allowed.origin() + (n as f64 + 0.5) * w;
        let weight = franck_condon_overlap(final_state, n, &model.ground, &model.allowed)?
            * franck_condon_overlap(0, n, &model.ground, &model.allowed)?;
        acc += weight / (z - e_n);
    }
    Ok(acc)
}
