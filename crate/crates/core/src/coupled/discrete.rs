//! Brute-force check of the partitioning formulas: `(z − H)` discretised on a
//! grid with three-point kinetic energy, the delta coupling put on the node
//! nearest `x_c` as `K₀/Δx`, and the linear system solved directly.
//!
//! Unknowns are interleaved `(ψ₁₀, ψ₂₀, ψ₁₁, ψ₂₁, …)`, which makes the matrix
//! banded with two diagonals on each side. `Im(z − H) = Γ·1` is positive
//! definite, so elimination without pivoting is stable.

use crate::error::{Error, Result};
use crate::grid::{trapezoid, UniformGrid};
use crate::model::{Potential, TwoStateModel};
use crate::resolvent::ComplexEnergy;
use crate::C64;

const BAND: usize = 2;
const WIDTH: usize = 2 * BAND + 1;

/// LU factors of the discretised `z − H`.
#[derive(Debug, Clone)]
pub struct DiscreteCoupledSystem {
    grid: UniformGrid,
    /// Row `r` holds columns `r − 2 ..= r + 2`.
    band: Vec<[C64; WIDTH]>,
}

impl DiscreteCoupledSystem {
    pub fn new(model: &TwoStateModel, grid: UniformGrid, z: ComplexEnergy) -> Result<Self> {
        let n = grid.len();
        let dx = grid.step();
        let zc = z.value();
        let coupling_node = grid.nearest(model.coupling.location)?;
        let mut band = vec![[C64::default(); WIDTH]; 2 * n];
        for (component, curve) in [&model.allowed, &model.forbidden].into_iter().enumerate() {
            let hop = 1.0 / (2.0 * curve.mass() * dx * dx);
            for j in 0..n {
                let r = 2 * j + component;
                band[r][BAND] = zc - curve.value(grid.x(j)) - 2.0 * hop;
                if j > 0 {
                    band[r][0] = C64::new(hop, 0.0);
                }
                if j + 1 < n {
                    band[r][2 * BAND] = C64::new(hop, 0.0);
                }
            }
        }
        let k = C64::new(-model.coupling.strength / dx, 0.0);
        let r = 2 * coupling_node;
        band[r][BAND + 1] = k;
        band[r + 1][BAND - 1] = k;
        factorize(&mut band)?;
        Ok(Self { grid, band })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    /// Sampled `(ψ₁, ψ₂) = (z − H)⁻¹ (s₁, s₂)` in the continuum normalisation
    /// (`∫ G(x, y) s(y) dy`).
    pub fn solve(&self, s1: &[f64], s2: &[f64]) -> Result<(Vec<C64>, Vec<C64>)> {
        self.grid.check_samples(s1)?;
        self.grid.check_samples(s2)?;
        let n = self.grid.len();
        let mut rhs = Vec::with_capacity(2 * n);
        for j in 0..n {
            rhs.push(C64::new(s1[j], 0.0));
            rhs.push(C64::new(s2[j], 0.0));
        }
        substitute(&self.band, &mut rhs);
        let psi1 = rhs.iter().step_by(2).copied().collect();
        let psi2 = rhs.iter().skip(1).step_by(2).copied().collect();
        Ok((psi1, psi2))
    }

    /// `⟨f|G₁₁|i⟩`.
    pub fn g11_element(&self, f: &[f64], i: &[f64]) -> Result<C64> {
        let zero = vec![0.0; self.grid.len()];
        let (psi1, _) = self.solve(i, &zero)?;
        self.grid.check_samples(f)?;
        let integrand: Vec<C64> = f.iter().zip(&psi1).map(|(a, b)| b * a).collect();
        Ok(trapezoid(&integrand, self.grid.step()))
    }
}

/// In-place banded LU, unit lower factor stored below the diagonal.
fn factorize(band: &mut [[C64; WIDTH]]) -> Result<()> {
    let n = band.len();
    for k in 0..n {
        let pivot = band[k][BAND];
        if pivot.norm() == 0.0 || !pivot.is_finite() {
            return Err(Error::InvalidParameter(format!("zero pivot at row {k} of the discrete system")));
        }
        for r in k + 1..(k + BAND + 1).min(n) {
            let l = band[r][k + BAND - r] / pivot;
            band[r][k + BAND - r] = l;
            for c in k + 1..(k + BAND + 1).min(n) {
                let upper = band[k][c + BAND - k];
                band[r][c + BAND - r] -= l * upper;
            }
        }
    }
    Ok(())
}

fn substitute(band: &[[C64; WIDTH]], x: &mut [C64]) {
    let n = band.len();
    for r in 0..n {
        for c in r.saturating_sub(BAND)..r {
            let l = band[r][c + BAND - r];
            x[r] = x[r] - l * x[c];
        }
    }
    for r in (0..n).rev() {
        for c in r + 1..(r + BAND + 1).min(n) {
            let u = band[r][c + BAND - r];
            x[r] = x[r] - u * x[c];
        }
        x[r] /= band[r][BAND];
    }
}
