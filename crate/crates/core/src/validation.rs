//! Self-checks behind `curvecross validate` and the acceptance tests.
//!
//! Each check builds what it needs from a [`RunConfig`], measures one
//! quantity, and compares it with a fixed tolerance and a wall-clock limit.

use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::config::RunConfig;
use crate::coupled::discrete::DiscreteCoupledSystem;
use crate::coupled::{coupled_full_matrix, coupled_g11_element, coupled_g12_element};
use crate::error::Result;
use crate::grid::{trapezoid, UniformGrid};
use crate::model::{huang_rhys, morse_bound_energies, Potential, PotentialCurve, TwoStateModel};
use crate::resolvent::{build_resolvent, ComplexEnergy, HarmonicSpectralSum, PotentialTable, ResolventEvaluator, ResolventGrid};
use crate::spectra::{deviation_metric, photon_energies, SpectrumSolver};
use crate::units::{self, Unit};
use crate::wavepacket::{verify_resolvent_identity, WavepacketSetup};
use crate::C64;

pub const WEAK_FORM_TOLERANCE: f64 = 1e-6;
pub const SPECTRAL_SUM_TOLERANCE: f64 = 1e-6;
/// Scan step of the Morse pole search, which is also its tolerance (cm⁻¹).
pub const POLE_SCAN_STEP: f64 = 2.0;
pub const POISSON_TOLERANCE: f64 = 0.05;
pub const EXPONENT_TOLERANCE: f64 = 0.02;
pub const WAVEPACKET_TOLERANCE: f64 = 0.02;
pub const DISCRETE_TOLERANCE: f64 = 0.01;
pub const GRID_HALVING_TOLERANCE: f64 = 0.01;

/// Photon energies (cm⁻¹) of the weak-form check.
pub const WEAK_FORM_ENERGIES: [f64; 5] = [10400.0, 10800.0, 11200.0, 11800.0, 12800.0];
/// Photon energy at which the coupling-scaling exponents are fitted.
pub const EXPONENT_ENERGY: f64 = 10800.0;
pub const WAVEPACKET_ENERGIES: [f64; 5] = [10400.0, 10800.0, 11200.0, 11600.0, 12000.0];
pub const DISCRETE_ENERGIES: [f64; 3] = [10500.0, 10800.0, 11500.0];

/// Result of one check.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: &'static str,
    pub title: &'static str,
    pub passed: bool,
    /// Measured values against their tolerances.
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

impl Outcome {
    fn timed(id: &'static str, title: &'static str, limit: Duration, check: impl FnOnce() -> Result<(bool, String)>) -> Result<Self> {
        let start = Instant::now();
        let (ok, detail) = check()?;
        let elapsed = start.elapsed();
        Ok(Self {
            id,
            title,
            passed: ok && elapsed <= limit,
            detail,
            elapsed,
            limit,
        })
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} ({:.2} s, limit {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.limit.as_secs()
        )
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn tables(model: &TwoStateModel, config: &RunConfig) -> Result<(Arc<PotentialTable>, Arc<PotentialTable>)> {
    let layout = config.layout()?;
    Ok((
        Arc::new(PotentialTable::new(&model.allowed, model.allowed.mass(), layout)?),
        Arc::new(PotentialTable::new(&model.forbidden, model.forbidden.mass(), layout)?),
    ))
}

fn energy(model: &TwoStateModel, photon: f64) -> Result<ComplexEnergy> {
    ComplexEnergy::new(photon + model.zero_point(), model.damping)
}

/// Lab-unit values survive the round trip through internal units.
pub fn unit_round_trips() -> Result<Outcome> {
    Outcome::timed("U", "unit round trips", secs(1), || {
        let cases = [
            (35.4, Unit::Amu),
            (400.0, Unit::Wavenumber),
            (400.0, Unit::AngularWavenumber),
            (0.1, Unit::Angstrom),
            (1e-8, Unit::Centimeter),
            (5.54275e-15, Unit::ErgAngstrom),
            (7.9e-14, Unit::Erg),
            (5.9e-23, Unit::Gram),
            (0.05, Unit::Femtosecond),
            (5e-17, Unit::Second),
        ];
        let mut worst: f64 = 0.0;
        for (v, unit) in cases {
            let back = units::from_internal(units::to_internal(v, unit), unit)?;
            worst = worst.max((back / v - 1.0).abs());
        }
        Ok((worst < 1e-12, format!("max relative error {worst:.1e} (limit 1e-12)")))
    })
}

/// Ground-curve eigenstates `0..8` are orthonormal on the resolvent grid.
pub fn eigenstate_orthonormality(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("O", "eigenstate orthonormality", secs(5), || {
        let model = config.model()?;
        let grid = config.layout()?.grid;
        let states: Vec<Vec<f64>> = (0..8).map(|n| Ok(model.ground_state(n)?.sample(&grid))).collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let prod: Vec<f64> = a.iter().zip(b).map(|(p, q)| p * q).collect();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((trapezoid(&prod, grid.step()) - target).abs());
            }
        }
        Ok((worst < 1e-10, format!("max |<m|n> - delta| {worst:.1e} (limit 1e-10)")))
    })
}

/// Wronskian of the two homogeneous solutions is constant across the grid.
pub fn wronskian_constancy(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("W", "Wronskian constancy", secs(10), || {
        let model = config.model()?;
        let (t1, t2) = tables(&model, config)?;
        let mut worst: f64 = 0.0;
        for t in [t1, t2] {
            for w in [10000.0, 11000.0, 12500.0] {
                worst = worst.max(build_resolvent(t.clone(), energy(&model, w)?)?.wronskian_drift());
            }
        }
        Ok((worst < 1e-8, format!("max relative drift {worst:.1e} (limit 1e-8)")))
    })
}

/// Bump `exp(−1/(1−r²))`, `r = (x − c)/w`, with its second derivative.
fn bump(c: f64, w: f64, x: f64) -> (f64, f64) {
    let r = (x - c) / w;
    if r.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let s = 1.0 - r * r;
    let f = (-1.0 / s).exp();
    let d2 = f * (4.0 * r * r / s.powi(4) - 2.0 / s.powi(2) - 8.0 * r * r / s.powi(3));
    (f, d2 / (w * w))
}

/// Largest `|⟨x₀|G(z − H)|φ⟩ − φ(x₀)| / |φ(x₀)|` for one resolvent.
fn weak_form_worst(ev: &ResolventEvaluator, curve: &PotentialCurve, bumps: &[(f64, f64)]) -> Result<f64> {
    let z = ev.energy().value();
    let mass = ev.mass();
    let xs = ev.grid().points();
    let mut worst: f64 = 0.0;
    for &(c, w) in bumps {
        let applied: Vec<C64> = xs
            .iter()
            .map(|&x| {
                let (f, f2) = bump(c, w, x);
                (z - curve.value(x)) * f + f2 / (2.0 * mass)
            })
            .collect();
        let x0 = c + 0.1 * w;
        let target = bump(c, w, x0).0;
        worst = worst.max((ev.greens_vector(&applied, x0)? - target).norm() / target);
    }
    Ok(worst)
}

fn weak_form_max(model: &TwoStateModel, layout: ResolventGrid, bumps: &[(f64, f64)]) -> Result<f64> {
    let t1 = Arc::new(PotentialTable::new(&model.allowed, model.allowed.mass(), layout)?);
    let t2 = Arc::new(PotentialTable::new(&model.forbidden, model.forbidden.mass(), layout)?);
    let mut worst: f64 = 0.0;
    for (t, curve) in [(&t1, &model.allowed), (&t2, &model.forbidden)] {
        for w in WEAK_FORM_ENERGIES {
            let ev = build_resolvent(t.clone(), energy(model, w)?)?;
            worst = worst.max(weak_form_worst(&ev, curve, bumps)?);
        }
    }
    Ok(worst)
}

/// Twenty compactly supported test functions, both curves, five energies.
///
/// Runs on the configured grid refined once. Test functions that sit deep in
/// a curve's tunnelling region see the fourth-order quadrature error of the
/// rapidly decaying `G`, a few 1e-6 at the default spacing; the coarse value
/// is reported alongside.
pub fn weak_form_residual(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("1", "weak-form residual", secs(30), || {
        let model = config.model()?;
        let layout = config.layout()?;
        let bumps: Vec<(f64, f64)> = (0..20)
            .map(|j| {
                let c = -0.3 + 0.6 * j as f64 / 19.0;
                let w = 0.08 + 0.12 * ((j * 7) % 20) as f64 / 19.0;
                (c, w)
            })
            .collect();
        let fine = weak_form_max(&model, layout.refined(), &bumps)?;
        let coarse = weak_form_max(&model, layout, &bumps)?;
        Ok((
            fine < WEAK_FORM_TOLERANCE,
            format!(
                "max relative residual {fine:.2e} over 200 cases on {} points (limit {WEAK_FORM_TOLERANCE:.0e}); {coarse:.2e} on {} points (informational)",
                layout.refined().grid.len(),
                layout.grid.len()
            ),
        ))
    })
}

/// Harmonic-curve resolvent against the 200-term eigenfunction sum (with its
/// closed-form remainder) at ten seeded random point pairs.
pub fn spectral_sum_equivalence(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("2", "harmonic spectral-sum equivalence", secs(10), || {
        let model = config.model()?;
        let (t1, _) = tables(&model, config)?;
        let z = energy(&model, 11000.0)?;
        let ev = build_resolvent(t1, z)?;
        let oracle = HarmonicSpectralSum::new(&model.allowed, z, 200)?;
        let centre = model.allowed.minimum();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let x = centre + rng.gen_range(-0.25..0.25);
            let x0 = centre + rng.gen_range(-0.25..0.25);
            let g = ev.greens_point(x, x0)?;
            let o = oracle.point(x, x0)?;
            worst = worst.max((g - o).norm() / o.norm());
        }
        Ok((
            worst < SPECTRAL_SUM_TOLERANCE,
            format!(
                "max relative deviation {worst:.2e} at Gamma = {} cm-1 (limit {SPECTRAL_SUM_TOLERANCE:.0e})",
                model.damping
            ),
        ))
    })
}

/// `|G₂⁰(x, x; E + 5i)|` peaks at the three lowest Morse levels.
pub fn morse_pole_positions(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("3", "Morse pole positions", secs(60), || {
        let model = config.model()?;
        let (_, t2) = tables(&model, config)?;
        let levels = morse_bound_energies(&model.forbidden)?;
        // Off the minimum so that odd levels do not vanish at the probe.
        let x = model.forbidden.minimum() - 0.05;
        let mut worst: f64 = 0.0;
        let mut found = Vec::new();
        for &e_n in levels.iter().take(3) {
            let mut best = (e_n, f64::MIN);
            for k in -10..=10 {
                let e = e_n + k as f64 * POLE_SCAN_STEP;
                let v = build_resolvent(t2.clone(), ComplexEnergy::new(e, 5.0)?)?.greens_point(x, x)?.norm();
                if v > best.1 {
                    best = (e, v);
                }
            }
            worst = worst.max((best.0 - e_n).abs());
            found.push(format!("{:.1}/{:.1}", best.0, e_n));
        }
        Ok((
            levels.len() >= 3 && worst <= POLE_SCAN_STEP,
            format!(
                "peak/level cm-1 {}; max offset {worst:.1} (limit {POLE_SCAN_STEP})",
                found.join(", ")
            ),
        ))
    })
}

/// Narrow-line uncoupled absorption: peaks at `origin + nω` with Poisson
/// heights `e^{−S} Sⁿ/n!`.
pub fn uncoupled_absorption_lines(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("4", "uncoupled absorption lines", secs(60), || {
        let model = config.model()?.with_damping(units::wavenumber(20.0));
        let step = 10.0;
        let origin = model.allowed.origin() - model.zero_point() + 0.5 * model.allowed.frequency();
        let spacing = model.allowed.frequency();
        let omegas = photon_energies(origin - 200.0, origin + 4.0 * spacing + 200.0, step)?;
        let s = SpectrumSolver::new(&model, config.layout()?)?.absorption(&omegas, false)?;
        let s_factor = huang_rhys(&model.ground, &model.allowed);
        let mut poisson = (-s_factor).exp();
        let (mut worst_pos, mut worst_height): (f64, f64) = (0.0, 0.0);
        for n in 0..=4 {
            let target = origin + spacing * n as f64;
            let peak = s
                .samples
                .iter()
                .filter(|p| (p.0 - target).abs() < 0.5 * spacing)
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .copied()
                .unwrap_or((f64::NAN, f64::NAN));
            worst_pos = worst_pos.max((peak.0 - target).abs());
            // single Lorentzian on resonance: weight / Γ
            worst_height = worst_height.max((peak.1 * model.damping / poisson - 1.0).abs());
            poisson *= s_factor / (n + 1) as f64;
        }
        Ok((
            worst_pos <= step && worst_height < POISSON_TOLERANCE,
            format!(
                "S = {s_factor:.4}; max peak offset {worst_pos:.1} cm-1 (limit {step}); max height error {:.2}% (limit {:.0}%)",
                100.0 * worst_height,
                100.0 * POISSON_TOLERANCE
            ),
        ))
    })
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Exponents `(p₁₁, p₁₂)` of `|G₁₁(K) − G₁₁(0)| ∝ K^p₁₁` and `|G₁₂(K)| ∝ K^p₁₂`,
/// fitted over seven log-spaced `K` in `[K₀/8, K₀/2]`.
pub fn coupling_exponents(model: &TwoStateModel, config: &RunConfig, photon: f64) -> Result<(f64, f64)> {
    let (t1, t2) = tables(model, config)?;
    let z = energy(model, photon)?;
    let (ev1, ev2) = (build_resolvent(t1, z)?, build_resolvent(t2, z)?);
    let chi = model.ground_state(0)?.sample(ev1.grid());
    let base = ev1.greens_matrix_element(&chi, &chi)?;
    let (mut ks, mut d11, mut d12) = (vec![], vec![], vec![]);
    for j in 0..7 {
        let k = model.coupling.strength / 8.0 * 4f64.powf(j as f64 / 6.0);
        let full = coupled_full_matrix(&ev1, &ev2, k, model.coupling.location)?;
        ks.push(k);
        d11.push((full.g11_element(&chi, &chi)?.value - base).norm());
        d12.push(full.g12_element(&chi, &chi)?.norm());
    }
    Ok((log_slope(&ks, &d11), log_slope(&ks, &d12)))
}

/// Exact zero-coupling reduction and the coupling-scaling exponents.
pub fn partitioning_limits(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("5", "partitioning limits", secs(60), || {
        let model = config.model()?;
        let (t1, t2) = tables(&model, config)?;
        let z = energy(&model, EXPONENT_ENERGY)?;
        let (ev1, ev2) = (build_resolvent(t1, z)?, build_resolvent(t2, z)?);
        let chi = model.ground_state(0)?.sample(ev1.grid());
        let x_c = model.coupling.location;
        let reduced = coupled_g11_element(&ev1, &ev2, 0.0, x_c, &chi, &chi)?.value;
        let exact = reduced == ev1.greens_matrix_element(&chi, &chi)?
            && coupled_g12_element(&ev1, &ev2, 0.0, x_c, &chi, &chi)? == C64::default();
        let (p11, p12) = coupling_exponents(&model, config, EXPONENT_ENERGY)?;
        let ok = exact && (p11 - 2.0).abs() <= EXPONENT_TOLERANCE && (p12 - 1.0).abs() <= EXPONENT_TOLERANCE;
        Ok((
            ok,
            format!(
                "K0 = 0 reduction {}; exponents G11 correction {p11:.4} (2 +- {EXPONENT_TOLERANCE}), G12 {p12:.4} (1 +- {EXPONENT_TOLERANCE}) at {EXPONENT_ENERGY} cm-1",
                if exact { "exact" } else { "NOT exact" }
            ),
        ))
    })
}

/// The configured wavepacket setup with four times the points and half the
/// time step, which brings the regularised-delta systematic under 2%.
pub fn refined_wavepacket_setup(config: &RunConfig) -> Result<WavepacketSetup> {
    let mut setup = config.wavepacket_setup()?;
    setup.grid = UniformGrid::new(setup.grid.start(), setup.grid.stop(), 4 * setup.grid.len())?;
    setup.settings.dt /= 2.0;
    Ok(setup)
}

/// Half-Fourier transformed coupled wavepacket against the resolvent.
pub fn wavepacket_identity(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("6", "wavepacket vs resolvent", secs(600), || {
        let model = config.model()?;
        let setup = refined_wavepacket_setup(config)?;
        let x_c = model.coupling.location;
        let report = verify_resolvent_identity(
            &model,
            config.layout()?,
            &setup,
            &WAVEPACKET_ENERGIES,
            config.scan.final_state,
            &[x_c - 0.1, x_c + 0.1],
        )?;
        let worst = report.max_deviation();
        let per: Vec<String> = report
            .samples
            .iter()
            .map(|s| format!("{:.0}:{:.2}%", s.photon_energy, 100.0 * s.relative_deviation))
            .collect();
        let second = report
            .max_second_component_deviation()
            .map(|d| format!("; second component {:.1}% (informational)", 100.0 * d))
            .unwrap_or_default();
        Ok((
            worst < WAVEPACKET_TOLERANCE,
            format!(
                "deviation {} (limit {:.0}%){second}; {} points, dt {:.4} fs",
                per.join(" "),
                100.0 * WAVEPACKET_TOLERANCE,
                setup.grid.len(),
                units::to_femtoseconds(setup.settings.dt)
            ),
        ))
    })
}

/// Direct banded solve of the discretised coupled problem.
pub fn discrete_solve_equivalence(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("7", "discrete-solve equivalence", secs(120), || {
        let model = config.model()?;
        let layout = config.layout()?;
        let (t1, t2) = tables(&model, config)?;
        let g = layout.grid;
        let dx = (g.stop() - g.start()) / (2 * g.len() - 1) as f64;
        let grid = UniformGrid::aligned(g.start(), g.stop(), dx, model.coupling.location)?;
        let chi = model.ground_state(0)?.sample(&grid);
        let chi_r = model.ground_state(0)?.sample(&g);
        let mut worst: f64 = 0.0;
        for w in DISCRETE_ENERGIES {
            let z = energy(&model, w)?;
            let (ev1, ev2) = (build_resolvent(t1.clone(), z)?, build_resolvent(t2.clone(), z)?);
            let exact = coupled_g11_element(&ev1, &ev2, model.coupling.strength, model.coupling.location, &chi_r, &chi_r)?.value;
            let discrete = DiscreteCoupledSystem::new(&model, grid, z)?.g11_element(&chi, &chi)?;
            worst = worst.max((exact - discrete).norm() / exact.norm());
        }
        Ok((
            worst < DISCRETE_TOLERANCE,
            format!(
                "max relative deviation {:.3}% on {} nodes (limit {:.0}%)",
                100.0 * worst,
                grid.len(),
                100.0 * DISCRETE_TOLERANCE
            ),
        ))
    })
}

/// `(D_A, D_R)` on the configured window at photon-energy step `step`.
pub fn deviations(config: &RunConfig, step: f64) -> Result<(f64, f64)> {
    let solver = SpectrumSolver::new(&config.model()?, config.layout()?)?;
    let omegas = photon_energies(config.scan.start_cm1, config.scan.stop_cm1, step)?;
    let n_f = config.scan.final_state;
    let d_a = deviation_metric(&solver.absorption(&omegas, true)?, &solver.absorption(&omegas, false)?)?;
    let d_r = deviation_metric(&solver.raman(n_f, &omegas, true)?, &solver.raman(n_f, &omegas, false)?)?;
    Ok((d_a, d_r))
}

/// The coupling disturbs the Raman profile more than the absorption band.
pub fn raman_more_affected(config: &RunConfig) -> Result<Outcome> {
    Outcome::timed("8", "Raman profile more affected than absorption", secs(600), || {
        let step = config.scan.step_cm1;
        let (d_a, d_r) = deviations(config, step)?;
        let (d_a2, d_r2) = deviations(config, step / 2.0)?;
        let change = ((d_a2 / d_a - 1.0).abs()).max((d_r2 / d_r - 1.0).abs());
        Ok((
            d_r > d_a && d_a > 0.0 && change < GRID_HALVING_TOLERANCE,
            format!(
                "D_A = {d_a:.5}, D_R = {d_r:.5}; step {} -> {}: D_A = {d_a2:.5}, D_R = {d_r2:.5}, max change {:.3}% (limit {:.0}%)",
                step,
                step / 2.0,
                100.0 * change,
                100.0 * GRID_HALVING_TOLERANCE
            ),
        ))
    })
}

/// Every check, or the fast subset when `quick` is set.
pub fn run_suite(config: &RunConfig, quick: bool, mut report: impl FnMut(&Outcome)) -> Result<Vec<Outcome>> {
    let mut checks: Vec<Box<dyn Fn(&RunConfig) -> Result<Outcome>>> = vec![
        Box::new(|_| unit_round_trips()),
        Box::new(eigenstate_orthonormality),
        Box::new(wronskian_constancy),
        Box::new(weak_form_residual),
        Box::new(spectral_sum_equivalence),
        Box::new(morse_pole_positions),
        Box::new(uncoupled_absorption_lines),
        Box::new(discrete_solve_equivalence),
    ];
    if !quick {
        checks.push(Box::new(partitioning_limits));
        checks.push(Box::new(wavepacket_identity));
        checks.push(Box::new(raman_more_affected));
    }
    let mut out = Vec::with_capacity(checks.len());
    for check in checks {
        let o = check(config)?;
        report(&o);
        out.push(o);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_second_derivative_matches_finite_difference() {
        let h = 1e-4;
        for x in [-0.05, 0.02, 0.09] {
            let fd = (bump(0.01, 0.12, x + h).0 - 2.0 * bump(0.01, 0.12, x).0 + bump(0.01, 0.12, x - h).0) / (h * h);
            let exact = bump(0.01, 0.12, x).1;
            assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "{fd} vs {exact}");
        }
        assert_eq!(bump(0.0, 0.1, 0.1), (0.0, 0.0));
    }

    #[test]
    fn log_slope_recovers_power() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.7)).collect();
        assert!((log_slope(&xs, &ys) - 1.7).abs() < 1e-12);
    }

    #[test]
    fn outcome_line_format() {
        let o = unit_round_trips().unwrap();
        assert!(o.passed);
        let line = o.to_string();
        assert!(line.starts_with("PASS [U] unit round trips: "), "{line}");
    }

    #[test]
    fn slow_check_fails_on_time() {
        let o = Outcome::timed("t", "t", Duration::ZERO, || {
            std::thread::sleep(Duration::from_millis(2));
            Ok((true, String::new()))
        })
        .unwrap();
        assert!(!o.passed);
    }
}
