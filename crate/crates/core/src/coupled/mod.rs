//! Exact Green's function of two diabatic curves coupled by `K₀ δ(x − x_c)`.
//!
//! Block elimination of the 2×2 resolvent leaves only point values at the
//! crossing:
//!
//! ```text
//! G₁₁ = G₁⁰ + K₀² G₁⁰|x_c⟩ G₂⁰(x_c, x_c) ⟨x_c|G₁⁰ / D
//! G₁₂ = K₀ G₁⁰|x_c⟩⟨x_c|G₂⁰ / D,       D = 1 − K₀² G₁⁰(x_c, x_c) G₂⁰(x_c, x_c)
//! ```
//!
//! with `G₂₂`, `G₂₁` given by exchanging the roles of the two curves.

pub mod discrete;

use crate::error::{Error, Result};
use crate::resolvent::ResolventEvaluator;
use crate::C64;

const SINGULAR_DENOMINATOR: f64 = 1e-12;

/// A diagonal block matrix element split into its two terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledAmplitude {
    pub value: C64,
    pub direct: C64,
    pub crossing_correction: C64,
    pub denominator: C64,
}

/// All four blocks of the coupled resolvent at one `z`, sharing the point
/// values at the crossing.
#[derive(Debug, Clone, Copy)]
pub struct CoupledResolvent<'a> {
    first: &'a ResolventEvaluator,
    second: &'a ResolventEvaluator,
    strength: f64,
    crossing: f64,
    g1_cc: C64,
    g2_cc: C64,
    denominator: C64,
}

pub fn coupled_full_matrix<'a>(
    ev1: &'a ResolventEvaluator,
    ev2: &'a ResolventEvaluator,
    k0: f64,
    x_c: f64,
) -> Result<CoupledResolvent<'a>> {
    CoupledResolvent::new(ev1, ev2, k0, x_c)
}

/// `⟨f|G₁₁|i⟩` with `f`, `i` sampled on the grid of `ev1`.
pub fn coupled_g11_element<T: Into<C64> + Copy>(
    ev1: &ResolventEvaluator,
    ev2: &ResolventEvaluator,
    k0: f64,
    x_c: f64,
    f: &[T],
    i: &[T],
) -> Result<CoupledAmplitude> {
    CoupledResolvent::new(ev1, ev2, k0, x_c)?.g11_element(f, i)
}

/// `⟨f|G₁₂|i⟩`: `f` lives on curve 1, `i` on curve 2.
pub fn coupled_g12_element<T: Into<C64> + Copy>(
    ev1: &ResolventEvaluator,
    ev2: &ResolventEvaluator,
    k0: f64,
    x_c: f64,
    f: &[T],
    i: &[T],
) -> Result<C64> {
    CoupledResolvent::new(ev1, ev2, k0, x_c)?.g12_element(f, i)
}

impl<'a> CoupledResolvent<'a> {
    pub fn new(first: &'a ResolventEvaluator, second: &'a ResolventEvaluator, strength: f64, crossing: f64) -> Result<Self> {
        if first.energy() != second.energy() {
            return Err(Error::InvalidParameter(format!(
                "resolvents built at different energies ({:?} and {:?})",
                first.energy(),
                second.energy()
            )));
        }
        if !strength.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling strength must be finite (got {strength})")));
        }
        let g1_cc = first.greens_point(crossing, crossing)?;
        let g2_cc = second.greens_point(crossing, crossing)?;
        let denominator = C64::new(1.0, 0.0) - strength * strength * g1_cc * g2_cc;
        if denominator.norm() < SINGULAR_DENOMINATOR {
            return Err(Error::ResonanceSingularity(denominator.norm()));
        }
        Ok(Self {
            first,
            second,
            strength,
            crossing,
            g1_cc,
            g2_cc,
            denominator,
        })
    }

    pub fn denominator(&self) -> C64 {
        self.denominator
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn crossing(&self) -> f64 {
        self.crossing
    }

    /// `(G₁⁰(x_c, x_c), G₂⁰(x_c, x_c))`.
    pub fn crossing_values(&self) -> (C64, C64) {
        (self.g1_cc, self.g2_cc)
    }

    fn diagonal<T: Into<C64> + Copy>(
        &self,
        own: &ResolventEvaluator,
        other_cc: C64,
        f: &[T],
        i: &[T],
    ) -> Result<CoupledAmplitude> {
        let applied_i = own.apply(i)?;
        let direct = applied_i.project(f)?;
        let at_i = applied_i.at(self.crossing)?;
        let at_f = own.greens_vector(f, self.crossing)?;
        let k2 = self.strength * self.strength;
        let crossing_correction = if k2 == 0.0 {
            C64::default()
        } else {
            k2 * other_cc * at_f * at_i / self.denominator
        };
        Ok(CoupledAmplitude {
            value: direct + crossing_correction,
            direct,
            crossing_correction,
            denominator: self.denominator,
        })
    }

    pub fn g11_element<T: Into<C64> + Copy>(&self, f: &[T], i: &[T]) -> Result<CoupledAmplitude> {
        self.diagonal(self.first, self.g2_cc, f, i)
    }

    pub fn g22_element<T: Into<C64> + Copy>(&self, f: &[T], i: &[T]) -> Result<CoupledAmplitude> {
        self.diagonal(self.second, self.g1_cc, f, i)
    }

    /// `⟨f|G₁₂|i⟩`, `f` on curve 1 and `i` on curve 2.
    pub fn g12_element<T: Into<C64> + Copy>(&self, f: &[T], i: &[T]) -> Result<C64> {
        if self.strength == 0.0 {
            return Ok(C64::default());
        }
        let left = self.first.greens_vector(f, self.crossing)?;
        let right = self.second.greens_vector(i, self.crossing)?;
        Ok(self.strength * left * right / self.denominator)
    }

    /// `⟨f|G₂₁|i⟩`, `f` on curve 2 and `i` on curve 1.
    pub fn g21_element<T: Into<C64> + Copy>(&self, f: &[T], i: &[T]) -> Result<C64> {
        if self.strength == 0.0 {
            return Ok(C64::default());
        }
        let left = self.second.greens_vector(f, self.crossing)?;
        let right = self.first.greens_vector(i, self.crossing)?;
        Ok(self.strength * left * right / self.denominator)
    }

    /// `x ↦ ⟨x|G₂₁|i⟩ = K₀ G₂⁰(x, x_c) ⟨x_c|G₁⁰|i⟩ / D`, the curve-2
    /// amplitude produced from an initial state `i` on curve 1.
    pub fn g21_applied<T: Into<C64> + Copy>(&self, i: &[T]) -> Result<impl Fn(f64) -> Result<C64> + '_> {
        let source = self.strength * self.first.greens_vector(i, self.crossing)? / self.denominator;
        Ok(move |x: f64| Ok(source * self.second.greens_point(x, self.crossing)?))
    }
}
