//! Eigenfunction-expansion resolvent of a harmonic curve, used as an oracle
//! for the ODE construction:
//!
//! ```text
//! G(x, x₀; z) = Σ_n φ_n(x) φ_n(x₀) / (z − E_n)
//! ```
//!
//! Pointwise the series converges only like `N^{-1/2}` (the diagonal has a
//! cusp), so [`HarmonicSpectralSum::point`] adds the remainder `n > N_max` in
//! closed form. Writing `1/(z − E_n) = −(1/ω) ∫₀¹ s^{n+ν−1} ds` with
//! `ν = ½ + (origin − z)/ω` turns the remainder into an integral over the
//! Mehler kernel `Σ_n φ_n(x) φ_n(x₀) sⁿ` minus its first `N_max + 1` terms.
//! Projections onto smooth functions converge exponentially and need no tail.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::{gauss_legendre, trapezoid, UniformGrid};
use crate::model::{hermite_functions, PotentialCurve};
use crate::resolvent::ComplexEnergy;
use crate::C64;

const TAIL_PANELS: usize = 48;
const TAIL_ORDER: usize = 24;
/// `s_low^{N+ν} = e^{-TAIL_CUTOFF}` bounds the neglected part of the tail integral.
const TAIL_CUTOFF: f64 = 45.0;

#[derive(Debug, Clone)]
pub struct HarmonicSpectralSum {
    mass: f64,
    frequency: f64,
    center: f64,
    origin: f64,
    z: C64,
    n_max: usize,
}

impl HarmonicSpectralSum {
    /// Terms `n = 0..=n_max`.
    pub fn new(curve: &PotentialCurve, z: ComplexEnergy, n_max: usize) -> Result<Self> {
        let PotentialCurve::Harmonic {
            mass,
            frequency,
            minimum,
            origin,
        } = *curve
        else {
            return Err(Error::UnsupportedCurve("harmonic"));
        };
        Ok(Self {
            mass,
            frequency,
            center: minimum,
            origin,
            z: z.value(),
            n_max,
        })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn level(&self, n: usize) -> f64 {
        self.origin + (n as f64 + 0.5) * self.frequency
    }

    fn alpha(&self) -> f64 {
        (self.mass * self.frequency).sqrt()
    }

    fn xi(&self, x: f64) -> f64 {
        self.alpha() * (x - self.center)
    }

    /// `φ_n(x)` for `n = 0..=n_max`.
    pub fn eigenfunctions(&self, x: f64) -> Vec<f64> {
        let a = self.alpha();
        hermite_functions(self.n_max, self.xi(x))
            .into_iter()
            .map(|h| a.sqrt() * h)
            .collect()
    }

    /// The truncated series alone.
    pub fn truncated_point(&self, x: f64, x0: f64) -> C64 {
        let a = self.eigenfunctions(x);
        let b = self.eigenfunctions(x0);
        (0..=self.n_max)
            .map(|n| C64::new(a[n] * b[n], 0.0) / (self.z - self.level(n)))
            .sum()
    }

    /// Truncated series plus the closed-form remainder.
    pub fn point(&self, x: f64, x0: f64) -> Result<C64> {
        Ok(self.truncated_point(x, x0) + self.tail_point(x, x0)?)
    }

    /// `Σ_{n > N_max} φ_n(x) φ_n(x₀) / (z − E_n)`, via the Mehler kernel.
    pub fn tail_point(&self, x: f64, x0: f64) -> Result<C64> {
        let nu = C64::new(0.5, 0.0) + (C64::new(self.origin, 0.0) - self.z) / self.frequency;
        let first = (self.n_max + 1) as f64;
        let lead = first + nu.re;
        if lead <= 1.0 {
            let needed = (self.z.re - self.origin) / self.frequency;
            return Err(Error::SpectralTailOrder(needed.ceil().max(0.0) as usize + 1));
        }
        let xi = self.xi(x);
        let eta = self.xi(x0);
        let a = self.alpha();
        let a_b = self.eigenfunctions(x);
        let b_b = self.eigenfunctions(x0);
        let coeffs: Vec<f64> = a_b.iter().zip(&b_b).map(|(p, q)| p * q).collect();

        let s_low = (-TAIL_CUTOFF / lead).exp();
        let w_max = (1.0 - s_low).sqrt();
        let (nodes, weights) = gauss_legendre(TAIL_ORDER);
        let panel = w_max / TAIL_PANELS as f64;
        let mut acc = C64::default();
        for p in 0..TAIL_PANELS {
            let mid = (p as f64 + 0.5) * panel;
            for (t, wt) in nodes.iter().zip(&weights) {
                let w = mid + 0.5 * panel * t;
                let w2 = w * w;
                let s = 1.0 - w2;
                let one_plus = 1.0 + s;
                // 2w · Mehler kernel, with 1 − s² = w² (2 − w²)
                let exponent = w2 * (xi * xi + eta * eta) / (2.0 * one_plus)
                    + s * (xi - eta) * (xi - eta) / (w2 * one_plus);
                let kernel = 2.0 * a / (PI * (2.0 - w2)).sqrt() * (-exponent).exp();
                let partial = coeffs.iter().rev().fold(0.0, |acc, c| acc * s + c);
                let remainder = kernel - 2.0 * w * partial;
                let power = ((nu - 1.0) * s.ln()).exp();
                acc += power * remainder * (0.5 * panel * wt);
            }
        }
        Ok(-acc / self.frequency)
    }

    /// `⟨φ_n|f⟩` for `n = 0..=n_max` by the trapezoid rule.
    pub fn projections(&self, f: &[f64], grid: &UniformGrid) -> Result<Vec<f64>> {
        grid.check_samples(f)?;
        let mut acc = vec![vec![0.0; f.len()]; self.n_max + 1];
        for (i, &fi) in f.iter().enumerate() {
            for (n, phi) in self.eigenfunctions(grid.x(i)).into_iter().enumerate() {
                acc[n][i] = phi * fi;
            }
        }
        Ok(acc.iter().map(|row| trapezoid(row, grid.step())).collect())
    }

    /// `Σ_n φ_n(x₀) ⟨φ_n|f⟩ / (z − E_n)`.
    pub fn vector(&self, f: &[f64], grid: &UniformGrid, x0: f64) -> Result<C64> {
        let proj = self.projections(f, grid)?;
        let phi = self.eigenfunctions(x0);
        Ok(self.weighted_sum(&proj, &phi))
    }

    /// `Σ_n ⟨f|φ_n⟩⟨φ_n|g⟩ / (z − E_n)`.
    pub fn matrix_element(&self, f: &[f64], g: &[f64], grid: &UniformGrid) -> Result<C64> {
        let pf = self.projections(f, grid)?;
        let pg = self.projections(g, grid)?;
        Ok(self.weighted_sum(&pf, &pg))
    }

    /// `Σ_n a_n b_n / (z − E_n)` over whatever coefficients are supplied
    /// (e.g. analytic Franck–Condon overlaps).
    pub fn weighted_sum(&self, a: &[f64], b: &[f64]) -> C64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(n, (p, q))| C64::new(p * q, 0.0) / (self.z - self.level(n)))
            .sum()
    }

    /// Cauchy–Schwarz bound on the omitted terms of [`Self::matrix_element`]:
    /// `max_{n>N} |z − E_n|⁻¹ · √(deficit_f · deficit_g)` where each deficit
    /// is `‖f‖² − Σ_{n≤N} ⟨φ_n|f⟩²`. Valid once `E_{N+1} > Re z`.
    pub fn remainder_bound(&self, f: &[f64], g: &[f64], grid: &UniformGrid) -> Result<f64> {
        let deficit = |v: &[f64]| -> Result<f64> {
            let sq: Vec<f64> = v.iter().map(|x| x * x).collect();
            let norm = trapezoid(&sq, grid.step());
            let captured: f64 = self.projections(v, grid)?.iter().map(|p| p * p).sum();
            Ok((norm - captured).max(0.0))
        };
        let next = self.level(self.n_max + 1);
        let distance = (self.z - next).norm();
        Ok((deficit(f)? * deficit(g)?).sqrt() / distance)
    }
}
