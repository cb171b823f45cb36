//! Diabatic potential curves, the delta coupling between them, and the
//! vibrational structure of the harmonic curves.
//!
//! All quantities are in internal units (see [`crate::units`]).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::UniformGrid;
use crate::units;

/// A one-dimensional potential as seen by the resolvent construction.
pub trait Potential: Sync {
    fn value(&self, x: f64) -> f64;
    fn gradient(&self, x: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialCurve {
    /// `origin + ½ m ω² (x − minimum)²`
    Harmonic {
        mass: f64,
        frequency: f64,
        minimum: f64,
        origin: f64,
    },
    /// `origin + D [1 − exp(α (x − minimum))]²`, dissociating toward x → −∞.
    Morse {
        mass: f64,
        well_depth: f64,
        range: f64,
        minimum: f64,
        origin: f64,
    },
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive (got {v})")))
    }
}

fn require_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite (got {v})")))
    }
}

impl PotentialCurve {
    pub fn harmonic(mass: f64, frequency: f64, minimum: f64, origin: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("harmonic frequency", frequency)?;
        require_finite("minimum position", minimum)?;
        require_finite("origin energy", origin)?;
        Ok(Self::Harmonic {
            mass,
            frequency,
            minimum,
            origin,
        })
    }

    pub fn morse(mass: f64, well_depth: f64, range: f64, minimum: f64, origin: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        require_positive("Morse well depth", well_depth)?;
        require_positive("Morse range parameter", range)?;
        require_finite("minimum position", minimum)?;
        require_finite("origin energy", origin)?;
        Ok(Self::Morse {
            mass,
            well_depth,
            range,
            minimum,
            origin,
        })
    }

    /// Morse curve whose harmonic frequency at the well bottom is `frequency`:
    /// `D = m ω² / (2 α²)`.
    pub fn morse_with_frequency(mass: f64, frequency: f64, range: f64, minimum: f64, origin: f64) -> Result<Self> {
        require_positive("Morse range parameter", range)?;
        Self::morse(mass, mass * frequency * frequency / (2.0 * range * range), range, minimum, origin)
    }

    pub fn mass(&self) -> f64 {
        match *self {
            Self::Harmonic { mass, .. } | Self::Morse { mass, .. } => mass,
        }
    }

    pub fn origin(&self) -> f64 {
        match *self {
            Self::Harmonic { origin, .. } | Self::Morse { origin, .. } => origin,
        }
    }

    pub fn minimum(&self) -> f64 {
        match *self {
            Self::Harmonic { minimum, .. } | Self::Morse { minimum, .. } => minimum,
        }
    }

    /// Harmonic frequency at the bottom of the well.
    pub fn frequency(&self) -> f64 {
        match *self {
            Self::Harmonic { frequency, .. } => frequency,
            Self::Morse {
                mass,
                well_depth,
                range,
                ..
            } => range * (2.0 * well_depth / mass).sqrt(),
        }
    }

    pub fn with_origin(self, new_origin: f64) -> Self {
        match self {
            Self::Harmonic {
                mass,
                frequency,
                minimum,
                ..
            } => Self::Harmonic {
                mass,
                frequency,
                minimum,
                origin: new_origin,
            },
            Self::Morse {
                mass,
                well_depth,
                range,
                minimum,
                ..
            } => Self::Morse {
                mass,
                well_depth,
                range,
                minimum,
                origin: new_origin,
            },
        }
    }

    pub fn with_minimum(self, new_minimum: f64) -> Self {
        match self {
            Self::Harmonic {
                mass,
                frequency,
                origin,
                ..
            } => Self::Harmonic {
                mass,
                frequency,
                minimum: new_minimum,
                origin,
            },
            Self::Morse {
                mass,
                well_depth,
                range,
                origin,
                ..
            } => Self::Morse {
                mass,
                well_depth,
                range,
                minimum: new_minimum,
                origin,
            },
        }
    }
}

impl Potential for PotentialCurve {
    fn value(&self, x: f64) -> f64 {
        match *self {
            Self::Harmonic {
                mass,
                frequency,
                minimum,
                origin,
            } => {
                let d = x - minimum;
                origin + 0.5 * mass * frequency * frequency * d * d
            }
            Self::Morse {
                well_depth,
                range,
                minimum,
                origin,
                ..
            } => {
                let e = 1.0 - (range * (x - minimum)).exp();
                origin + well_depth * e * e
            }
        }
    }

    fn gradient(&self, x: f64) -> f64 {
        match *self {
            Self::Harmonic {
                mass,
                frequency,
                minimum,
                ..
            } => mass * frequency * frequency * (x - minimum),
            Self::Morse {
                well_depth,
                range,
                minimum,
                ..
            } => {
                let e = (range * (x - minimum)).exp();
                -2.0 * well_depth * range * e * (1.0 - e)
            }
        }
    }
}

pub fn eval_potential(curve: &PotentialCurve, x: f64) -> f64 {
    curve.value(x)
}

/// Coupling `K₀ δ(x − x_c)` between the two excited diabatic states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCoupling {
    pub strength: f64,
    pub location: f64,
}

impl DeltaCoupling {
    pub fn new(strength: f64, location: f64) -> Result<Self> {
        if !(strength.is_finite() && strength >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "coupling strength must be non-negative (got {strength})"
            )));
        }
        require_finite("crossing location", location)?;
        Ok(Self { strength, location })
    }

    pub fn with_strength(self, strength: f64) -> Self {
        Self { strength, ..self }
    }
}

/// Ground, dipole-allowed and dipole-forbidden curves with the coupling and
/// lifetime broadening.
///
/// Energies are measured from the ground-state minimum; each excited curve
/// carries its electronic origin in `origin`, so the photon energy `ω` maps
/// to the resolvent argument `ω + ω₀/2 + iΓ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateModel {
    pub ground: PotentialCurve,
    pub allowed: PotentialCurve,
    pub forbidden: PotentialCurve,
    pub coupling: DeltaCoupling,
    pub damping: f64,
    pub electronic_gap: f64,
}

impl TwoStateModel {
    pub fn new(
        ground: PotentialCurve,
        allowed: PotentialCurve,
        forbidden: PotentialCurve,
        coupling: DeltaCoupling,
        damping: f64,
    ) -> Result<Self> {
        if !matches!(ground, PotentialCurve::Harmonic { .. }) {
            return Err(Error::UnsupportedCurve("harmonic ground-state"));
        }
        if !matches!(allowed, PotentialCurve::Harmonic { .. }) {
            return Err(Error::UnsupportedCurve("harmonic allowed-state"));
        }
        if ground.minimum() != 0.0 || ground.origin() != 0.0 {
            return Err(Error::InvalidParameter(
                "ground curve must have its minimum at x = 0 and zero origin energy".into(),
            ));
        }
        require_positive("damping", damping)?;
        Ok(Self {
            ground,
            allowed,
            forbidden,
            coupling,
            damping,
            electronic_gap: allowed.origin(),
        })
    }

    /// Ground vibrational zero-point energy `ω₀/2`.
    pub fn zero_point(&self) -> f64 {
        0.5 * self.ground.frequency()
    }

    pub fn with_coupling_strength(self, k0: f64) -> Self {
        Self {
            coupling: self.coupling.with_strength(k0),
            ..self
        }
    }

    pub fn with_damping(self, gamma: f64) -> Self {
        Self { damping: gamma, ..self }
    }

    pub fn ground_state(&self, n: usize) -> Result<VibrationalState> {
        harmonic_eigenstate(&self.ground, n)
    }
}

/// Model parameters in laboratory units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelParameters {
    pub mass_amu: f64,
    pub ground_wavenumber_cm1: f64,
    pub allowed_wavenumber_cm1: f64,
    pub allowed_displacement_angstrom: f64,
    pub allowed_origin_cm1: f64,
    pub forbidden_origin_cm1: f64,
    /// Harmonic wavenumber at the bottom of the Morse well; fixes the well
    /// depth unless `morse_well_depth_cm1` is given.
    pub forbidden_wavenumber_cm1: f64,
    pub morse_range_per_angstrom: f64,
    pub morse_minimum_angstrom: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub morse_well_depth_cm1: Option<f64>,
    pub coupling_erg_angstrom: f64,
    pub crossing_angstrom: f64,
    pub damping_cm1: f64,
}

impl Default for ModelParameters {
    fn default() -> Self {
        Self {
            mass_amu: 35.4,
            ground_wavenumber_cm1: 400.0,
            allowed_wavenumber_cm1: 400.0,
            allowed_displacement_angstrom: 0.1,
            allowed_origin_cm1: 10700.0,
            forbidden_origin_cm1: 10800.0,
            forbidden_wavenumber_cm1: 400.0,
            morse_range_per_angstrom: 1.0,
            morse_minimum_angstrom: 0.0,
            morse_well_depth_cm1: None,
            coupling_erg_angstrom: 5.54275e-15,
            crossing_angstrom: -0.02477,
            damping_cm1: 450.0,
        }
    }
}

impl ModelParameters {
    pub fn build(&self) -> Result<TwoStateModel> {
        let m = units::amu(self.mass_amu);
        let ground = PotentialCurve::harmonic(m, units::wavenumber(self.ground_wavenumber_cm1), 0.0, 0.0)?;
        let allowed = PotentialCurve::harmonic(
            m,
            units::wavenumber(self.allowed_wavenumber_cm1),
            units::angstrom(self.allowed_displacement_angstrom),
            units::wavenumber(self.allowed_origin_cm1),
        )?;
        let range = self.morse_range_per_angstrom;
        let b = units::angstrom(self.morse_minimum_angstrom);
        let origin = units::wavenumber(self.forbidden_origin_cm1);
        let forbidden = match self.morse_well_depth_cm1 {
            Some(d) => PotentialCurve::morse(m, units::wavenumber(d), range, b, origin)?,
            None => PotentialCurve::morse_with_frequency(
                m,
                units::wavenumber(self.forbidden_wavenumber_cm1),
                range,
                b,
                origin,
            )?,
        };
        let coupling = DeltaCoupling::new(
            units::erg_angstrom(self.coupling_erg_angstrom),
            units::angstrom(self.crossing_angstrom),
        )?;
        TwoStateModel::new(ground, allowed, forbidden, coupling, units::wavenumber(self.damping_cm1))
    }
}

/// Normalized Hermite functions `h_0(ξ) … h_{n_max}(ξ)` with `∫ h_n² dξ = 1`.
///
/// Runs the three-term recurrence on the normalized functions with a
/// separately tracked exponent, so neither the Gaussian factor nor the
/// polynomial growth can overflow or underflow prematurely.
pub fn hermite_functions(n_max: usize, xi: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut log_scale = -0.5 * xi * xi - 0.25 * std::f64::consts::PI.ln();
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(log_scale.exp());
    for n in 0..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * xi * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs();
        if mag > 1e100 {
            prev /= mag;
            cur /= mag;
            log_scale += mag.ln();
        }
        out.push(cur * log_scale.exp());
    }
    out
}

/// A vibrational eigenstate of a harmonic curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VibrationalState {
    pub mass: f64,
    pub frequency: f64,
    pub center: f64,
    pub origin: f64,
    pub n: usize,
}

impl VibrationalState {
    pub fn energy(&self) -> f64 {
        self.origin + (self.n as f64 + 0.5) * self.frequency
    }

    fn length_scale(&self) -> f64 {
        (self.mass * self.frequency).sqrt()
    }

    pub fn value(&self, x: f64) -> f64 {
        let a = self.length_scale();
        a.sqrt() * hermite_functions(self.n, a * (x - self.center))[self.n]
    }

    pub fn sample(&self, grid: &UniformGrid) -> Vec<f64> {
        grid.sample(|x| self.value(x))
    }
}

pub fn harmonic_eigenstate(curve: &PotentialCurve, n: usize) -> Result<VibrationalState> {
    match *curve {
        PotentialCurve::Harmonic {
            mass,
            frequency,
            minimum,
            origin,
        } => Ok(VibrationalState {
            mass,
            frequency,
            center: minimum,
            origin,
            n,
        }),
        PotentialCurve::Morse { .. } => Err(Error::UnsupportedCurve("harmonic")),
    }
}

/// Bound levels `E_n = origin + ω_m (n+½) − (α²/2m)(n+½)²` while the level
/// spacing stays positive.
pub fn morse_bound_energies(curve: &PotentialCurve) -> Result<Vec<f64>> {
    let PotentialCurve::Morse {
        mass,
        well_depth,
        range,
        origin,
        ..
    } = *curve
    else {
        return Err(Error::UnsupportedCurve("Morse"));
    };
    let omega = curve.frequency();
    let anharmonic = range * range / (2.0 * mass);
    let lambda = (2.0 * mass * well_depth).sqrt() / range;
    let mut levels = Vec::new();
    let mut n = 0usize;
    loop {
        let v = n as f64 + 0.5;
        if v >= lambda {
            break;
        }
        let e = omega * v - anharmonic * v * v;
        if e >= well_depth {
            break;
        }
        levels.push(origin + e);
        n += 1;
    }
    Ok(levels)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Generalized Laguerre polynomial `L_n^{(a)}(x)` by upward recurrence.
fn laguerre(n: usize, a: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + a - x;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + a - x) * l1 - (kf + a) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

/// `⟨bra| D(α) |ket⟩` for the displacement operator with real `α`.
fn displacement_element(bra: usize, ket: usize, alpha: f64) -> f64 {
    let s = alpha * alpha;
    if alpha == 0.0 {
        return if bra == ket { 1.0 } else { 0.0 };
    }
    let (hi, lo, base) = if bra >= ket { (bra, ket, alpha) } else { (ket, bra, -alpha) };
    let power = (hi - lo) as f64;
    let log_mag = 0.5 * (ln_factorial(lo) - ln_factorial(hi)) + power * base.abs().ln() - 0.5 * s;
    let sign = if base < 0.0 && (hi - lo) % 2 == 1 { -1.0 } else { 1.0 };
    sign * log_mag.exp() * laguerre(lo, power, s)
}

/// Overlap `⟨n_A | m_B⟩` between eigenstates of two equal-frequency harmonic
/// curves whose minima differ by `d = min_B − min_A`.
///
/// With `S = m ω d² / 2` (Huang–Rhys factor), `⟨0|m⟩² = e^{−S} S^m / m!`.
pub fn franck_condon_overlap(n: usize, m: usize, a: &PotentialCurve, b: &PotentialCurve) -> Result<f64> {
    let (
        PotentialCurve::Harmonic {
            mass: ma,
            frequency: wa,
            minimum: xa,
            ..
        },
        PotentialCurve::Harmonic {
            mass: mb,
            frequency: wb,
            minimum: xb,
            ..
        },
    ) = (*a, *b)
    else {
        return Err(Error::UnsupportedCurve("harmonic"));
    };
    if (wa - wb).abs() > 1e-12 * wa.abs() || (ma - mb).abs() > 1e-12 * ma.abs() {
        return Err(Error::UnequalFrequencies(wa, wb));
    }
    let alpha = (xb - xa) * (ma * wa / 2.0).sqrt();
    Ok(displacement_element(n, m, alpha))
}

pub fn huang_rhys(a: &PotentialCurve, b: &PotentialCurve) -> f64 {
    let d = b.minimum() - a.minimum();
    0.5 * a.mass() * a.frequency() * d * d
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub position: f64,
    pub energy: f64,
    /// More than one sign change was found in the bracket; `position` is the
    /// root nearest the bracket midpoint.
    pub multiple_roots: bool,
}

const CROSSING_SAMPLES: usize = 4096;

/// Root of `V₁(x) = V₂(x)` inside `[lo, hi]`.
pub fn find_crossing(c1: &PotentialCurve, c2: &PotentialCurve, lo: f64, hi: f64) -> Result<Crossing> {
    if !(lo < hi) {
        return Err(Error::InvalidParameter(format!("empty bracket [{lo}, {hi}]")));
    }
    let diff = |x: f64| c1.value(x) - c2.value(x);
    let step = (hi - lo) / CROSSING_SAMPLES as f64;
    let mut roots = Vec::new();
    let mut x0 = lo;
    let mut f0 = diff(x0);
    for i in 1..=CROSSING_SAMPLES {
        let x1 = if i == CROSSING_SAMPLES { hi } else { lo + i as f64 * step };
        let f1 = diff(x1);
        if f0 == 0.0 {
            roots.push(x0);
        } else if f0 * f1 < 0.0 {
            roots.push(bisect(&diff, x0, x1, f0));
        }
        x0 = x1;
        f0 = f1;
    }
    if f0 == 0.0 {
        roots.push(hi);
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mid = 0.5 * (lo + hi);
    let position = roots
        .iter()
        .copied()
        .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
        .ok_or(Error::NoCrossing { lo, hi })?;
    Ok(Crossing {
        position,
        energy: c1.value(position),
        multiple_roots: roots.len() > 1,
    })
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::trapezoid;
    use approx::assert_relative_eq;

    fn default_model() -> TwoStateModel {
        ModelParameters::default().build().unwrap()
    }

    fn norm_grid(state: &VibrationalState, half_width: f64, points: usize) -> (UniformGrid, Vec<f64>) {
        let g = UniformGrid::new(state.center - half_width, state.center + half_width, points).unwrap();
        let v = state.sample(&g);
        (g, v)
    }

    #[test]
    fn allowed_curve_at_minimum_is_its_origin() {
        let m = default_model();
        assert_relative_eq!(eval_potential(&m.allowed, units::angstrom(0.1)), 10700.0, epsilon = 1e-9);
        assert_eq!(eval_potential(&m.forbidden, 0.0), 10800.0);
    }

    #[test]
    fn harmonic_energy_at_tenth_of_angstrom() {
        // Independent CGS route: k = m (2πc ν̃)², energy = ½ k d² / hc.
        let m_g = 35.4 * units::AMU_G;
        let omega_s = 2.0 * std::f64::consts::PI * 2.99792458e10 * 400.0;
        let k = m_g * omega_s * omega_s;
        let expected = 0.5 * k * (0.1e-8f64).powi(2) / units::HC_ERG_CM;
        assert_relative_eq!(expected, 840.0, max_relative = 1e-3);

        let m = default_model();
        let rise = eval_potential(&m.allowed, units::angstrom(0.2)) - 10700.0;
        assert_relative_eq!(rise, expected, max_relative = 1e-8);
    }

    #[test]
    fn morse_minimum_and_orientation() {
        let m = default_model();
        let curve = m.forbidden;
        assert_eq!(curve.value(curve.minimum()), curve.origin());
        let PotentialCurve::Morse { well_depth, .. } = curve else { unreachable!() };
        // dissociates toward x → −∞, grows without bound toward +∞
        assert_relative_eq!(curve.value(-40.0), curve.origin() + well_depth, max_relative = 1e-12);
        assert!(curve.value(3.0) > curve.origin() + 10.0 * well_depth);
        assert_relative_eq!(curve.frequency(), 400.0, max_relative = 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let m = default_model();
        for curve in [m.allowed, m.forbidden] {
            for &x in &[-0.3, -0.02, 0.05, 0.2] {
                let h = 1e-6;
                let fd = (curve.value(x + h) - curve.value(x - h)) / (2.0 * h);
                assert_relative_eq!(curve.gradient(x), fd, max_relative = 1e-6, epsilon = 1e-3);
            }
        }
    }

    #[test]
    fn ground_state_is_normalized_gaussian() {
        let s = default_model().ground_state(0).unwrap();
        let (g, v) = norm_grid(&s, 0.6, 4001);
        let sq: Vec<f64> = v.iter().map(|v| v * v).collect();
        assert_relative_eq!(trapezoid(&sq, g.step()), 1.0, epsilon = 1e-10);
        assert!(v[2000] > v[1999] && v[2000] > v[2001]);
    }

    #[test]
    fn first_excited_state_vanishes_at_minimum() {
        let s = harmonic_eigenstate(&default_model().allowed, 1).unwrap();
        assert_eq!(s.value(s.center), 0.0);
    }

    #[test]
    fn high_state_norm() {
        let s = harmonic_eigenstate(&default_model().ground, 50).unwrap();
        let (g, v) = norm_grid(&s, 1.0, 16001);
        let sq: Vec<f64> = v.iter().map(|v| v * v).collect();
        assert_relative_eq!(trapezoid(&sq, g.step()), 1.0, epsilon = 1e-8);
    }

    #[test]
    fn eigenstates_are_orthonormal() {
        let curve = default_model().ground;
        let states: Vec<_> = (0..=20).map(|n| harmonic_eigenstate(&curve, n).unwrap()).collect();
        let g = UniformGrid::new(-0.8, 0.8, 8001).unwrap();
        let samples: Vec<Vec<f64>> = states.iter().map(|s| s.sample(&g)).collect();
        for n in 0..=20 {
            for m in 0..=20 {
                let prod: Vec<f64> = samples[n].iter().zip(&samples[m]).map(|(a, b)| a * b).collect();
                let expected = if n == m { 1.0 } else { 0.0 };
                assert!((trapezoid(&prod, g.step()) - expected).abs() < 1e-8, "<{n}|{m}>");
            }
        }
    }

    #[test]
    fn parity_of_undisplaced_states() {
        let curve = default_model().ground;
        for n in 0..12 {
            let s = harmonic_eigenstate(&curve, n).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            for &x in &[0.013, 0.05, 0.11, 0.2] {
                assert!((s.value(-x) - sign * s.value(x)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hermite_functions_do_not_overflow_far_out() {
        let h = hermite_functions(200, 45.0);
        assert!(h.iter().all(|v| v.is_finite()));
        let h = hermite_functions(200, 19.0);
        assert!(h[200].abs() > 1e-3);
    }

    #[test]
    fn morse_rejects_harmonic() {
        assert!(matches!(
            morse_bound_energies(&default_model().allowed),
            Err(Error::UnsupportedCurve(_))
        ));
        assert!(harmonic_eigenstate(&default_model().forbidden, 0).is_err());
    }

    #[test]
    fn morse_ground_level() {
        let curve = default_model().forbidden;
        let levels = morse_bound_energies(&curve).unwrap();
        let anharm = 1.0 / (2.0 * curve.mass());
        assert_relative_eq!(levels[0] - curve.origin(), 200.0 - 0.25 * anharm, max_relative = 1e-12);
        // count = floor(√(2 m D)/α − ½) + 1
        let PotentialCurve::Morse { well_depth, range, mass, .. } = curve else { unreachable!() };
        let count = ((2.0 * mass * well_depth).sqrt() / range - 0.5).floor() as usize + 1;
        assert_eq!(levels.len(), count);
        assert!(levels.windows(2).all(|w| w[1] > w[0]));
        assert!(levels.iter().all(|&e| e < curve.origin() + well_depth));
    }

    #[test]
    fn deep_morse_tends_to_harmonic_ladder() {
        let m = default_model().ground.mass();
        let curve = PotentialCurve::morse_with_frequency(m, 400.0, 1e-3, 0.0, 0.0).unwrap();
        let levels = morse_bound_energies(&curve).unwrap();
        for n in 0..5 {
            assert_relative_eq!(levels[n], 400.0 * (n as f64 + 0.5), max_relative = 1e-8);
        }
    }

    #[test]
    fn undisplaced_overlaps_are_kronecker() {
        let c = default_model().ground;
        for n in 0..8 {
            for m in 0..8 {
                let o = franck_condon_overlap(n, m, &c, &c).unwrap();
                assert_eq!(o, if n == m { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn default_huang_rhys_factor() {
        let model = default_model();
        // S = m ω d² / 2 via CGS: m[g] (2πc ν̃)[1/s] d²[cm²] / (2ħ)
        let s_cgs = 35.4 * units::AMU_G * 2.0 * std::f64::consts::PI * 2.99792458e10 * 400.0 * 1e-18
            / (2.0 * units::HBAR_ERG_S);
        let s = huang_rhys(&model.ground, &model.allowed);
        assert_relative_eq!(s, s_cgs, max_relative = 1e-8);
        assert_relative_eq!(s, 2.10, max_relative = 1e-3);
        let o00 = franck_condon_overlap(0, 0, &model.ground, &model.allowed).unwrap();
        assert_relative_eq!(o00 * o00, (-s).exp(), max_relative = 1e-12);
        assert_relative_eq!(o00 * o00, 0.122, max_relative = 5e-3);
    }

    #[test]
    fn overlaps_complete_and_follow_recurrence() {
        let model = default_model();
        let s = huang_rhys(&model.ground, &model.allowed);
        let row: Vec<f64> = (0..=60)
            .map(|m| franck_condon_overlap(0, m, &model.ground, &model.allowed).unwrap())
            .collect();
        let total: f64 = row.iter().map(|o| o * o).sum();
        assert!((total - 1.0).abs() < 1e-10);
        for m in 1..=60 {
            assert_relative_eq!(row[m].abs(), row[m - 1].abs() * (s / m as f64).sqrt(), max_relative = 1e-10);
        }
        for n in 0..5 {
            let total: f64 = (0..=80)
                .map(|m| franck_condon_overlap(n, m, &model.ground, &model.allowed).unwrap().powi(2))
                .sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn overlaps_match_quadrature_with_signs() {
        let model = default_model();
        let g = UniformGrid::new(-0.8, 0.9, 8001).unwrap();
        for n in 0..4 {
            let a = harmonic_eigenstate(&model.ground, n).unwrap().sample(&g);
            for m in 0..6 {
                let b = harmonic_eigenstate(&model.allowed, m).unwrap().sample(&g);
                let prod: Vec<f64> = a.iter().zip(&b).map(|(a, b)| a * b).collect();
                let num = trapezoid(&prod, g.step());
                let ana = franck_condon_overlap(n, m, &model.ground, &model.allowed).unwrap();
                assert!((num - ana).abs() < 1e-10, "<{n}|{m}>: {num} vs {ana}");
            }
        }
    }

    #[test]
    fn unequal_frequencies_rejected() {
        let m = default_model();
        let c = PotentialCurve::harmonic(m.ground.mass(), 500.0, 0.1, 0.0).unwrap();
        assert!(matches!(
            franck_condon_overlap(0, 0, &m.ground, &c),
            Err(Error::UnequalFrequencies(..))
        ));
    }

    #[test]
    fn harmonic_pair_crossing_is_linear_solution() {
        let m = default_model();
        let forbidden_harmonic = PotentialCurve::harmonic(m.ground.mass(), 400.0, 0.0, 10800.0).unwrap();
        let c = find_crossing(&m.allowed, &forbidden_harmonic, -1.0, 1.0).unwrap();
        let k = 0.5 * m.ground.mass() * 400.0 * 400.0;
        let exact = (0.01 - 100.0 / k) / 0.2;
        assert!((c.position - exact).abs() < 1e-10);
        assert_relative_eq!(c.position, 0.0441, max_relative = 2e-3);
        assert_relative_eq!(c.energy, 10963.0, max_relative = 1e-4);
        assert!(!c.multiple_roots);
    }

    #[test]
    fn parallel_curves_do_not_cross() {
        let m = default_model();
        let shifted = m.allowed.with_origin(10800.0);
        assert!(matches!(
            find_crossing(&m.allowed, &shifted, -1.0, 1.0),
            Err(Error::NoCrossing { .. })
        ));
    }

    #[test]
    fn harmonic_morse_crossing_residual() {
        let m = default_model();
        let c = find_crossing(&m.allowed, &m.forbidden, -1.5, 1.5).unwrap();
        assert!((m.allowed.value(c.position) - m.forbidden.value(c.position)).abs() < 1e-6);
        assert!(c.position > 0.0 && c.position < 0.1);
    }

    #[test]
    fn two_roots_are_flagged() {
        let mass = 1.0;
        let a = PotentialCurve::harmonic(mass, 2.0, 0.0, 0.0).unwrap();
        let b = PotentialCurve::harmonic(mass, 1.0, 0.0, 1.0).unwrap();
        let c = find_crossing(&a, &b, -3.0, 2.0).unwrap();
        assert!(c.multiple_roots);
        // roots at ±√(2/3); the negative one is nearer the midpoint −0.5
        assert!((c.position + (2.0f64 / 3.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(PotentialCurve::harmonic(-1.0, 1.0, 0.0, 0.0).is_err());
        assert!(PotentialCurve::morse(1.0, 0.0, 1.0, 0.0, 0.0).is_err());
        assert!(DeltaCoupling::new(-1.0, 0.0).is_err());
        let p = ModelParameters {
            damping_cm1: 0.0,
            ..Default::default()
        };
        assert!(p.build().is_err());
    }
}
