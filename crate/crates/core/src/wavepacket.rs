//! Time-domain check of the resolvent: split-operator propagation of the two
//! coupled components and the half-Fourier transform
//!
//! ```text
//! Ψ̄(ω) = ∫₀^T Ψ(t) e^{i(ω + iΓ)t} dt  →  i G(ω + iΓ) Ψ(0)   as T → ∞.
//! ```
//!
//! Energies are absolute (curve origins included), so `ω` here is the
//! resolvent argument, not the photon energy. The delta coupling is
//! regularised as `K₀ g_σ(x − x_c)` with a normalised Gaussian `g_σ`.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};

use crate::coupled::CoupledResolvent;
use crate::error::{Error, Result};
use crate::grid::{trapezoid, UniformGrid};
use crate::model::{Potential, TwoStateModel};
use crate::resolvent::{build_resolvent, ComplexEnergy, PotentialTable, ResolventGrid};
use crate::C64;

/// `dt · E_max` must stay below this.
const MAX_PHASE_PER_STEP: f64 = 0.1;
const NORM_GROWTH_LIMIT: f64 = 1e-6;
/// Width (Å) of the Gaussian test functions used to sample `Ψ̄₂`. Raw node
/// values carry aliased high-momentum noise from the narrow coupling
/// Gaussian; a local average well below the vibrational wavelength removes it.
pub const PROBE_WIDTH: f64 = 0.005;

/// Amplitudes on the allowed (`psi1`) and forbidden (`psi2`) curves.
#[derive(Debug, Clone, PartialEq)]
pub struct WavepacketState {
    pub psi1: Vec<C64>,
    pub psi2: Vec<C64>,
    pub time: f64,
}

impl WavepacketState {
    /// Real `f` on the allowed curve, nothing on the forbidden one.
    pub fn on_allowed(f: &[f64]) -> Self {
        Self {
            psi1: f.iter().map(|&v| C64::new(v, 0.0)).collect(),
            psi2: vec![C64::default(); f.len()],
            time: 0.0,
        }
    }

    pub fn norm(&self, dx: f64) -> f64 {
        norm_sqr(&self.psi1, dx) + norm_sqr(&self.psi2, dx)
    }

    pub fn component_norms(&self, dx: f64) -> (f64, f64) {
        (norm_sqr(&self.psi1, dx), norm_sqr(&self.psi2, dx))
    }

    /// `⟨x⟩` of the first component, normalised by its own norm.
    pub fn mean_position(&self, grid: &UniformGrid) -> f64 {
        let w: Vec<f64> = self.psi1.iter().map(|p| p.norm_sqr()).collect();
        let xw: Vec<f64> = w.iter().enumerate().map(|(i, p)| p * grid.x(i)).collect();
        trapezoid(&xw, grid.step()) / trapezoid(&w, grid.step())
    }
}

fn norm_sqr(psi: &[C64], dx: f64) -> f64 {
    psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * dx
}

/// `∫ conj(a) b dx`.
pub fn inner(a: &[C64], b: &[C64], dx: f64) -> C64 {
    a.iter().zip(b).map(|(p, q)| p.conj() * q).sum::<C64>() * dx
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorSettings {
    /// Internal time units.
    pub dt: f64,
    /// Standard deviation of the Gaussian that replaces the delta coupling,
    /// in grid steps.
    pub delta_width: f64,
    /// Fraction of the grid, on the dissociation side, covered by the
    /// absorber on the forbidden component; `None` disables it.
    pub absorber_fraction: Option<f64>,
    /// Peak absorption rate of the ramp (cm⁻¹).
    pub absorber_strength: f64,
}

impl Default for PropagatorSettings {
    fn default() -> Self {
        Self {
            dt: crate::units::femtosecond(0.05),
            delta_width: 2.0,
            absorber_fraction: Some(0.15),
            absorber_strength: 2000.0,
        }
    }
}

/// Strang splitting `e^{−iT dt/2} e^{−iV dt} e^{−iT dt/2}` with an exact
/// pointwise 2×2 potential exponential.
pub struct Propagator {
    grid: UniformGrid,
    settings: PropagatorSettings,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
    /// Half-step kinetic phases for each component, FFT ordering.
    kinetic: [Vec<C64>; 2],
    /// `(U₁₁, U₁₂, U₂₂)` of `exp(−i V(x) dt)`.
    potential: Vec<[C64; 3]>,
    /// Per-step survival factor on the forbidden component.
    mask: Option<Vec<f64>>,
    absorbed: f64,
}

impl std::fmt::Debug for Propagator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Propagator")
            .field("grid", &self.grid)
            .field("settings", &self.settings)
            .field("absorbed", &self.absorbed)
            .finish()
    }
}

impl Propagator {
    pub fn new(model: &TwoStateModel, grid: UniformGrid, settings: PropagatorSettings) -> Result<Self> {
        if !(settings.delta_width >= 2.0) {
            return Err(Error::InvalidParameter(format!(
                "delta width must cover at least 2 grid steps (got {})",
                settings.delta_width
            )));
        }
        if !(settings.dt.abs() > 0.0) || !settings.dt.is_finite() {
            return Err(Error::InvalidParameter(format!("invalid time step {}", settings.dt)));
        }
        let n = grid.len();
        let dx = grid.step();
        let dt = settings.dt;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let scratch = vec![C64::default(); forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len())];

        let wavenumbers = fft_wavenumbers(n, dx);
        let kinetic = [model.allowed.mass(), model.forbidden.mass()]
            .map(|m| wavenumbers.iter().map(|k| C64::from_polar(1.0, -k * k / (2.0 * m) * dt / 2.0)).collect());

        let sigma = settings.delta_width * dx;
        let k0 = model.coupling.strength;
        let xc = model.coupling.location;
        let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
        let potential = (0..n)
            .map(|i| {
                let x = grid.x(i);
                let w = k0 * norm * (-0.5 * ((x - xc) / sigma).powi(2)).exp();
                exp_symmetric(model.allowed.value(x), model.forbidden.value(x), w, dt)
            })
            .collect();

        let mask = match settings.absorber_fraction {
            None => None,
            Some(frac) => {
                if !(frac > 0.0 && frac < 0.5) {
                    return Err(Error::InvalidParameter(format!("absorber fraction {frac} outside (0, 0.5)")));
                }
                // The forbidden curve dissociates towards −∞: ramp on the left.
                let width = frac * (grid.stop() - grid.start());
                let inner_edge = grid.start() + width;
                Some(
                    (0..n)
                        .map(|i| {
                            let x = grid.x(i);
                            if x >= inner_edge {
                                1.0
                            } else {
                                let s = (inner_edge - x) / width;
                                let rate = settings.absorber_strength * (0.5 * PI * s).sin().powi(2);
                                (-rate * dt.abs()).exp()
                            }
                        })
                        .collect(),
                )
            }
        };

        Ok(Self {
            grid,
            settings,
            forward,
            inverse,
            scratch,
            kinetic,
            potential,
            mask,
            absorbed: 0.0,
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn settings(&self) -> &PropagatorSettings {
        &self.settings
    }

    /// Norm removed by the absorber so far.
    pub fn absorbed(&self) -> f64 {
        self.absorbed
    }

    fn kinetic_half_step(&mut self, psi: &mut [C64], component: usize) {
        let n = psi.len() as f64;
        self.forward.process_with_scratch(psi, &mut self.scratch);
        for (p, k) in psi.iter_mut().zip(&self.kinetic[component]) {
            *p *= k / n;
        }
        self.inverse.process_with_scratch(psi, &mut self.scratch);
    }

    pub fn step(&mut self, state: &mut WavepacketState) -> Result<()> {
        let dx = self.grid.step();
        let before = state.norm(dx);
        self.kinetic_half_step(&mut state.psi1, 0);
        self.kinetic_half_step(&mut state.psi2, 1);
        for ((a, b), u) in state.psi1.iter_mut().zip(state.psi2.iter_mut()).zip(&self.potential) {
            let (p, q) = (*a, *b);
            *a = u[0] * p + u[1] * q;
            *b = u[1] * p + u[2] * q;
        }
        self.kinetic_half_step(&mut state.psi1, 0);
        self.kinetic_half_step(&mut state.psi2, 1);
        state.time += self.settings.dt;
        let after_unitary = state.norm(dx);
        if after_unitary - before > NORM_GROWTH_LIMIT * before {
            return Err(Error::Unstable((after_unitary - before) / before));
        }
        if let Some(mask) = &self.mask {
            let before_mask = norm_sqr(&state.psi2, dx);
            for (p, m) in state.psi2.iter_mut().zip(mask) {
                *p *= *m;
            }
            self.absorbed += before_mask - norm_sqr(&state.psi2, dx);
        }
        Ok(())
    }

    /// `⟨H⟩ + 5σ_H − min V` of the uncoupled Hamiltonian in `state`.
    pub fn energy_span(&mut self, model: &TwoStateModel, state: &WavepacketState) -> f64 {
        let dx = self.grid.step();
        let n = self.grid.len();
        let ks = fft_wavenumbers(n, dx);
        let mut mean = 0.0;
        let mut second = 0.0;
        let mut v_min = f64::INFINITY;
        for (c, (psi, curve)) in [(&state.psi1, &model.allowed), (&state.psi2, &model.forbidden)]
            .into_iter()
            .enumerate()
        {
            let mass = if c == 0 { model.allowed.mass() } else { model.forbidden.mass() };
            let mut k_space = psi.clone();
            self.forward.process_with_scratch(&mut k_space, &mut self.scratch);
            for (p, k) in k_space.iter_mut().zip(&ks) {
                *p *= k * k / (2.0 * mass) / n as f64;
            }
            self.inverse.process_with_scratch(&mut k_space, &mut self.scratch);
            let h_psi: Vec<C64> = (0..n)
                .map(|i| {
                    let v = curve.value(self.grid.x(i));
                    v_min = v_min.min(v);
                    k_space[i] + psi[i] * v
                })
                .collect();
            mean += inner(psi, &h_psi, dx).re;
            second += norm_sqr(&h_psi, dx);
        }
        let norm = state.norm(dx);
        let mean = mean / norm;
        let sigma = (second / norm - mean * mean).max(0.0).sqrt();
        mean + 5.0 * sigma - v_min
    }
}

/// Wavenumbers in FFT order.
fn fft_wavenumbers(n: usize, dx: f64) -> Vec<f64> {
    let dk = 2.0 * PI / (n as f64 * dx);
    (0..n)
        .map(|j| if j <= n / 2 { j as f64 * dk } else { (j as f64 - n as f64) * dk })
        .collect()
}

/// `exp(−i dt [[a, w], [w, b]])` as `(U₁₁, U₁₂, U₂₂)`.
fn exp_symmetric(a: f64, b: f64, w: f64, dt: f64) -> [C64; 3] {
    let mean = 0.5 * (a + b);
    let half = 0.5 * (a - b);
    let r = half.hypot(w);
    let phase = C64::from_polar(1.0, -mean * dt);
    let c = (r * dt).cos();
    // sin(r dt)/r, finite as r → 0
    let s = if r * dt.abs() < 1e-8 { dt } else { (r * dt).sin() / r };
    let minus_i = C64::new(0.0, -1.0);
    [
        phase * (c + minus_i * s * half),
        phase * minus_i * s * w,
        phase * (c - minus_i * s * half),
    ]
}

/// Propagate for `steps` steps, calling `observe` on the initial state and
/// after every step.
pub fn propagate_with<F>(
    model: &TwoStateModel,
    initial: WavepacketState,
    grid: UniformGrid,
    settings: PropagatorSettings,
    steps: usize,
    mut observe: F,
) -> Result<(WavepacketState, f64)>
where
    F: FnMut(&WavepacketState),
{
    grid.check_samples(&initial.psi1)?;
    grid.check_samples(&initial.psi2)?;
    let mut prop = Propagator::new(model, grid, settings)?;
    let span = prop.energy_span(model, &initial) * settings.dt.abs();
    if span >= MAX_PHASE_PER_STEP {
        return Err(Error::TimeStepTooLarge(span));
    }
    let mut state = initial;
    observe(&state);
    for _ in 0..steps {
        prop.step(&mut state)?;
        observe(&state);
    }
    Ok((state, prop.absorbed()))
}

/// States at `t = 0, every·dt, 2·every·dt, …` up to `duration`.
pub fn propagate(
    model: &TwoStateModel,
    initial: WavepacketState,
    grid: UniformGrid,
    settings: PropagatorSettings,
    duration: f64,
    every: usize,
) -> Result<Vec<WavepacketState>> {
    let steps = (duration / settings.dt.abs()).round() as usize;
    let every = every.max(1);
    let mut out = Vec::new();
    let mut count = 0;
    propagate_with(model, initial, grid, settings, steps, |s| {
        if count % every == 0 {
            out.push(s.clone());
        }
        count += 1;
    })?;
    Ok(out)
}

/// Half-Fourier transform of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfFourierTransform {
    pub omega: f64,
    pub psi1: Vec<C64>,
    pub psi2: Vec<C64>,
    /// Bound on the neglected `t > T` part: `e^{−ΓT}/Γ · ‖Ψ‖` (`‖Ψ‖` is
    /// non-increasing along the trajectory).
    pub tail_bound: f64,
}

impl HalfFourierTransform {
    /// Whether `ΓT` reached the recommended 8.
    pub fn decayed(&self, gamma: f64, duration: f64) -> bool {
        gamma * duration >= 8.0
    }
}

/// Streaming trapezoid accumulation of `∫₀^T Ψ(t) e^{i(ω+iΓ)t} dt` at several
/// `ω` simultaneously, so the trajectory never has to be stored.
#[derive(Debug, Clone)]
pub struct HalfFourier {
    omegas: Vec<f64>,
    gamma: f64,
    dt: f64,
    acc: Vec<(Vec<C64>, Vec<C64>)>,
    last: Option<WavepacketState>,
    count: usize,
    final_norm: f64,
}

impl HalfFourier {
    pub fn new(omegas: &[f64], gamma: f64, dt: f64, points: usize) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::NonRetardedEnergy(gamma));
        }
        Ok(Self {
            omegas: omegas.to_vec(),
            gamma,
            dt,
            acc: vec![(vec![C64::default(); points], vec![C64::default(); points]); omegas.len()],
            last: None,
            count: 0,
            final_norm: 0.0,
        })
    }

    fn add(&mut self, state: &WavepacketState, weight: f64) {
        for (omega, (a1, a2)) in self.omegas.iter().zip(self.acc.iter_mut()) {
            let factor = (C64::new(-self.gamma, *omega) * state.time).exp() * weight;
            for (a, p) in a1.iter_mut().zip(&state.psi1) {
                *a += factor * p;
            }
            for (a, p) in a2.iter_mut().zip(&state.psi2) {
                *a += factor * p;
            }
        }
    }

    /// Feed consecutive states, equally spaced by `dt`.
    pub fn push(&mut self, state: &WavepacketState) {
        let weight = if self.count == 0 { 0.5 * self.dt } else { self.dt };
        self.add(state, weight);
        self.count += 1;
        self.last = Some(state.clone());
    }

    pub fn finish(mut self, dx: f64) -> Vec<HalfFourierTransform> {
        let mut tail_bound = 0.0;
        if let Some(last) = self.last.take() {
            // the final sample carries half weight
            self.add(&last, -0.5 * self.dt);
            self.final_norm = last.norm(dx).sqrt();
            tail_bound = (-self.gamma * last.time).exp() / self.gamma * self.final_norm;
        }
        self.omegas
            .iter()
            .zip(self.acc)
            .map(|(&omega, (psi1, psi2))| HalfFourierTransform {
                omega,
                psi1,
                psi2,
                tail_bound,
            })
            .collect()
    }
}

/// Half-Fourier transform of a stored, equally spaced series.
pub fn half_fourier(series: &[WavepacketState], omega: f64, gamma: f64, dx: f64) -> Result<HalfFourierTransform> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter("half-Fourier transform needs at least two states".into()));
    }
    let dt = series[1].time - series[0].time;
    let mut acc = HalfFourier::new(&[omega], gamma, dt, series[0].psi1.len())?;
    for s in series {
        acc.push(s);
    }
    Ok(acc.finish(dx).remove(0))
}

/// Wavepacket side of the comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSetup {
    pub grid: UniformGrid,
    pub settings: PropagatorSettings,
    /// Propagation length in units of `1/Γ`.
    pub decay_lengths: f64,
}

impl Default for WavepacketSetup {
    fn default() -> Self {
        Self {
            grid: UniformGrid::new(-3.0, 1.5, 4096).expect("static grid"),
            settings: PropagatorSettings::default(),
            decay_lengths: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySample {
    /// Photon energy (cm⁻¹).
    pub photon_energy: f64,
    /// `⟨χ_f|Ψ̄₁⟩`.
    pub wavepacket: C64,
    /// `i ⟨χ_f|G₁₁|χ_i⟩`.
    pub resolvent: C64,
    pub relative_deviation: f64,
    /// Largest `|⟨g_x|Ψ̄₂⟩ − i⟨g_x|G₂₁|χ_i⟩| / |i⟨g_x|G₂₁|χ_i⟩|` over the probes,
    /// `g_x` a normalised Gaussian of width [`PROBE_WIDTH`] centred on `x`.
    pub second_component_deviation: Option<f64>,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub samples: Vec<IdentitySample>,
    pub absorbed: f64,
}

impl IdentityReport {
    pub fn max_deviation(&self) -> f64 {
        self.samples.iter().map(|s| s.relative_deviation).fold(0.0, f64::max)
    }

    pub fn max_second_component_deviation(&self) -> Option<f64> {
        self.samples
            .iter()
            .filter_map(|s| s.second_component_deviation)
            .reduce(f64::max)
    }
}

/// Compare `⟨χ_f|Ψ̄₁(ω)⟩` with `i⟨χ_f|G₁₁|χ₀⟩`, and `Ψ̄₂` with `iG₂₁χ₀` around
/// `probes`, for each photon energy. The initial state is `χ₀` on the allowed
/// curve.
pub fn verify_resolvent_identity(
    model: &TwoStateModel,
    layout: ResolventGrid,
    setup: &WavepacketSetup,
    photon_energies: &[f64],
    final_state: usize,
    probes: &[f64],
) -> Result<IdentityReport> {
    let grid = setup.grid;
    let dx = grid.step();
    let gamma = model.damping;
    let arguments: Vec<f64> = photon_energies.iter().map(|w| w + model.zero_point()).collect();
    let chi_i = model.ground_state(0)?;
    let chi_f = model.ground_state(final_state)?.sample(&grid);
    let duration = setup.decay_lengths / gamma;
    let steps = (duration / setup.settings.dt).ceil() as usize;

    let mut acc = HalfFourier::new(&arguments, gamma, setup.settings.dt, grid.len())?;
    let (_, absorbed) = propagate_with(
        model,
        WavepacketState::on_allowed(&chi_i.sample(&grid)),
        grid,
        setup.settings,
        steps,
        |s| acc.push(s),
    )?;
    let transforms = acc.finish(dx);

    let t1 = Arc::new(PotentialTable::new(&model.allowed, model.allowed.mass(), layout)?);
    let t2 = Arc::new(PotentialTable::new(&model.forbidden, model.forbidden.mass(), layout)?);
    let chi_i_r = chi_i.sample(&layout.grid);
    let chi_f_r = model.ground_state(final_state)?.sample(&layout.grid);
    let mut samples = Vec::with_capacity(photon_energies.len());
    for (&w, tr) in photon_energies.iter().zip(&transforms) {
        let z = ComplexEnergy::new(tr.omega, gamma)?;
        let ev1 = build_resolvent(t1.clone(), z)?;
        let ev2 = build_resolvent(t2.clone(), z)?;
        let c = model.coupling;
        let full = CoupledResolvent::new(&ev1, &ev2, c.strength, c.location)?;
        let resolvent = C64::i() * full.g11_element(&chi_f_r, &chi_i_r)?.value;
        let chi_f_c: Vec<C64> = chi_f.iter().map(|&v| C64::new(v, 0.0)).collect();
        let wavepacket = inner(&chi_f_c, &tr.psi1, dx);
        let second_component_deviation = if c.strength == 0.0 || probes.is_empty() {
            None
        } else {
            let mut worst: f64 = 0.0;
            for &x0 in probes {
                let probe = |x: f64| (-0.5 * ((x - x0) / PROBE_WIDTH).powi(2)).exp() / (PROBE_WIDTH * (2.0 * PI).sqrt());
                let expected = C64::i() * full.g21_element(&layout.grid.sample(probe), &chi_i_r)?;
                let on_grid: Vec<C64> = grid.sample(probe).into_iter().map(|v| C64::new(v, 0.0)).collect();
                let got = inner(&on_grid, &tr.psi2, dx);
                worst = worst.max((got - expected).norm() / expected.norm());
            }
            Some(worst)
        };
        samples.push(IdentitySample {
            photon_energy: w,
            wavepacket,
            resolvent,
            relative_deviation: (wavepacket - resolvent).norm() / resolvent.norm(),
            second_component_deviation,
            tail_bound: tr.tail_bound,
        });
    }
    Ok(IdentityReport { samples, absorbed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{harmonic_eigenstate, ModelParameters};
    use crate::units;

    fn default_model() -> TwoStateModel {
        ModelParameters::default().build().unwrap()
    }

    fn grid() -> UniformGrid {
        UniformGrid::new(-3.0, 1.5, 4096).unwrap()
    }

    fn closed() -> PropagatorSettings {
        PropagatorSettings {
            absorber_fraction: None,
            ..Default::default()
        }
    }

    #[test]
    fn potential_exponential_is_unitary_and_exact_when_diagonal() {
        let u = exp_symmetric(3.0, -1.0, 0.7, 0.3);
        let det = u[0] * u[2] - u[1] * u[1];
        assert!((det.norm() - 1.0).abs() < 1e-14);
        assert!((u[0].norm_sqr() + u[1].norm_sqr() - 1.0).abs() < 1e-14);
        let d = exp_symmetric(3.0, -1.0, 0.0, 0.3);
        assert!((d[0] - C64::from_polar(1.0, -0.9)).norm() < 1e-15);
        assert!((d[2] - C64::from_polar(1.0, 0.3)).norm() < 1e-15);
        assert_eq!(d[1], C64::default());
    }

    #[test]
    fn eigenstate_is_stationary() {
        let m = default_model().with_coupling_strength(0.0);
        let g = grid();
        let phi = harmonic_eigenstate(&m.allowed, 0).unwrap().sample(&g);
        let start = WavepacketState::on_allowed(&phi);
        let mut worst: f64 = 0.0;
        propagate_with(&m, start.clone(), g, closed(), 2000, |s| {
            let o = inner(&start.psi1, &s.psi1, g.step()).norm();
            worst = worst.max((o - 1.0).abs());
        })
        .unwrap();
        assert!(worst < 1e-6, "{worst}");
    }

    #[test]
    fn displaced_packet_oscillates_with_classical_period() {
        let m = default_model().with_coupling_strength(0.0);
        let g = grid();
        let x_min = m.allowed.minimum();
        let chi = m.ground_state(0).unwrap().sample(&g);
        let settings = closed();
        let mut trace = Vec::new();
        propagate_with(&m, WavepacketState::on_allowed(&chi), g, settings, 6000, |s| {
            trace.push((s.time, s.mean_position(&g) - x_min));
        })
        .unwrap();
        // upward zero crossings, linearly interpolated
        let mut crossings = Vec::new();
        for w in trace.windows(2) {
            if w[0].1 < 0.0 && w[1].1 >= 0.0 {
                let f = w[0].1 / (w[0].1 - w[1].1);
                crossings.push(w[0].0 + f * (w[1].0 - w[0].0));
            }
        }
        assert!(crossings.len() >= 2);
        let period = units::to_femtoseconds((crossings[crossings.len() - 1] - crossings[0]) / (crossings.len() - 1) as f64);
        let expected = units::to_femtoseconds(2.0 * PI / m.allowed.frequency());
        assert!((expected - 83.4).abs() < 0.05, "{expected}");
        assert!((period / expected - 1.0).abs() < 0.01, "{period} vs {expected}");
    }

    #[test]
    fn forward_then_backward_is_identity() {
        let m = default_model();
        let g = grid();
        let chi = m.ground_state(0).unwrap().sample(&g);
        let start = WavepacketState::on_allowed(&chi);
        let mut state = start.clone();
        let mut fwd = Propagator::new(&m, g, closed()).unwrap();
        let mut back = Propagator::new(
            &m,
            g,
            PropagatorSettings {
                dt: -closed().dt,
                ..closed()
            },
        )
        .unwrap();
        for _ in 0..200 {
            fwd.step(&mut state).unwrap();
        }
        for _ in 0..200 {
            back.step(&mut state).unwrap();
        }
        let err: f64 = state
            .psi1
            .iter()
            .zip(&start.psi1)
            .chain(state.psi2.iter().zip(&start.psi2))
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        let peak = start.psi1.iter().map(|p| p.norm()).fold(0.0, f64::max);
        assert!(err < 1e-10 * peak, "{err}");
    }

    #[test]
    fn norm_is_conserved_with_coupling() {
        let m = default_model();
        let g = grid();
        let chi = m.ground_state(0).unwrap().sample(&g);
        let start = WavepacketState::on_allowed(&chi);
        let n0 = start.norm(g.step());
        let (end, absorbed) = propagate_with(&m, start, g, closed(), 1000, |_| {}).unwrap();
        assert_eq!(absorbed, 0.0);
        assert!((end.norm(g.step()) / n0 - 1.0).abs() < 1e-8);
        // coupling actually transfers population
        assert!(end.component_norms(g.step()).1 > 1e-6);
    }

    #[test]
    fn shallow_morse_dissociates_to_the_left() {
        let params = ModelParameters {
            morse_range_per_angstrom: 10.0,
            ..Default::default()
        };
        let m = params.build().unwrap();
        let g = grid();
        let chi = m.ground_state(0).unwrap().sample(&g);
        let mut norms2 = Vec::new();
        let (end, absorbed) = propagate_with(&m, WavepacketState::on_allowed(&chi), g, Default::default(), 4000, |s| {
            norms2.push(s.component_norms(g.step()).1);
        })
        .unwrap();
        assert_eq!(norms2[0], 0.0);
        assert!(norms2.iter().any(|&v| v > 1e-4));
        assert!(absorbed > 0.0, "absorbed {absorbed}");
        // what remains on curve 2 sits on the dissociation side
        let left: f64 = end.psi2.iter().enumerate().filter(|(i, _)| g.x(*i) < m.forbidden.minimum()).map(|(_, p)| p.norm_sqr()).sum();
        let total: f64 = end.psi2.iter().map(|p| p.norm_sqr()).sum();
        assert!(left > 0.5 * total, "{left} of {total}");
    }

    #[test]
    fn rejects_bad_settings() {
        let m = default_model();
        let g = grid();
        let narrow = PropagatorSettings {
            delta_width: 1.0,
            ..Default::default()
        };
        assert!(Propagator::new(&m, g, narrow).is_err());
        let chi = m.ground_state(0).unwrap().sample(&g);
        let coarse = PropagatorSettings {
            dt: units::femtosecond(5.0),
            ..Default::default()
        };
        assert!(matches!(
            propagate_with(&m, WavepacketState::on_allowed(&chi), g, coarse, 1, |_| {}),
            Err(Error::TimeStepTooLarge(_))
        ));
    }

    #[test]
    fn stationary_half_fourier_is_single_pole() {
        let m = default_model().with_coupling_strength(0.0);
        let g = grid();
        let phi = harmonic_eigenstate(&m.allowed, 0).unwrap();
        let start = WavepacketState::on_allowed(&phi.sample(&g));
        let gamma = m.damping;
        let steps = (10.0 / gamma / closed().dt).ceil() as usize;
        let omegas = [phi.energy() - 300.0, phi.energy(), phi.energy() + 500.0];
        let mut acc = HalfFourier::new(&omegas, gamma, closed().dt, g.len()).unwrap();
        propagate_with(&m, start.clone(), g, closed(), steps, |s| acc.push(s)).unwrap();
        for tr in acc.finish(g.step()) {
            let projected = inner(&start.psi1, &tr.psi1, g.step());
            let expected = C64::i() / (C64::new(tr.omega, gamma) - phi.energy());
            let err = (projected - expected).norm() / expected.norm();
            assert!(err < 1e-4 + tr.tail_bound / expected.norm(), "{err}");
        }
    }

    #[test]
    fn half_fourier_is_linear_and_converges_in_time() {
        let m = default_model();
        let g = UniformGrid::new(-3.0, 1.5, 1024).unwrap();
        let chi = m.ground_state(0).unwrap().sample(&g);
        let gamma = m.damping;
        let dt = closed().dt;
        let long = (16.0 / gamma / dt).ceil() as usize;
        let series = propagate(&m, WavepacketState::on_allowed(&chi), g, closed(), long as f64 * dt, 1).unwrap();
        let omega = 11200.0;
        let half = series.len() / 2 + 1;
        let short = half_fourier(&series[..half], omega, gamma, g.step()).unwrap();
        let full = half_fourier(&series, omega, gamma, g.step()).unwrap();
        let diff = norm_sqr(
            &short.psi1.iter().zip(&full.psi1).map(|(a, b)| a - b).collect::<Vec<_>>(),
            g.step(),
        )
        .sqrt();
        assert!(diff <= short.tail_bound, "{diff} > {}", short.tail_bound);

        let scaled: Vec<WavepacketState> = series
            .iter()
            .map(|s| WavepacketState {
                psi1: s.psi1.iter().map(|p| p * C64::new(0.5, -2.0)).collect(),
                psi2: s.psi2.iter().map(|p| p * C64::new(0.5, -2.0)).collect(),
                time: s.time,
            })
            .collect();
        let a = half_fourier(&scaled, omega, gamma, g.step()).unwrap();
        for (x, y) in a.psi1.iter().zip(&full.psi1) {
            assert!((x - y * C64::new(0.5, -2.0)).norm() <= 1e-12 * (1.0 + y.norm()));
        }
    }

    #[test]
    fn identity_improves_as_delta_narrows() {
        let m = default_model();
        let layout = ResolventGrid::new(UniformGrid::new(-1.5, 1.5, 4096).unwrap(), 8).unwrap();
        let deviations: Vec<f64> = [8.0, 4.0, 2.0]
            .iter()
            .map(|&w| {
                let setup = WavepacketSetup {
                    settings: PropagatorSettings {
                        delta_width: w,
                        ..Default::default()
                    },
                    ..Default::default()
                };
                verify_resolvent_identity(&m, layout, &setup, &[10800.0], 0, &[]).unwrap().max_deviation()
            })
            .collect();
        assert!(deviations[0] > deviations[1] && deviations[1] > deviations[2], "{deviations:?}");
    }

    #[test]
    fn uncoupled_identity_holds() {
        let m = default_model().with_coupling_strength(0.0);
        let layout = ResolventGrid::new(UniformGrid::new(-1.5, 1.5, 4096).unwrap(), 8).unwrap();
        let report =
            verify_resolvent_identity(&m, layout, &WavepacketSetup::default(), &[10600.0, 11200.0], 0, &[]).unwrap();
        assert!(report.max_deviation() < 1e-3, "{:?}", report);
    }
}
