//! Single-surface Green's functions `G⁰(x, x₀; z) = ⟨x|(z − H)⁻¹|x₀⟩` at
//! complex energy `z` with `Im z > 0`.
//!
//! Two homogeneous solutions of `u'' = 2m (V − z) u` are integrated across a
//! uniform grid: `u₋` decays as x → −∞ and is swept left to right, `u₊`
//! decays as x → +∞ and is swept right to left, so each is always integrated
//! in its growing direction. Then
//!
//! ```text
//! G(x, x₀) = 2m u₋(min(x, x₀)) u₊(max(x, x₀)) / W,   W = u₋ u₊' − u₋' u₊.
//! ```
//!
//! The solutions span hundreds of e-foldings over a typical grid, so each is
//! stored as a mantissa and a running natural-log scale.

pub mod spectral_sum;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{cell_integrals, hermite, partial_cell_integral, trapezoid, UniformGrid};
use crate::model::Potential;
use crate::C64;

pub use spectral_sum::HarmonicSpectralSum;

const RESCALE_THRESHOLD: f64 = 1e100;
const DEGENERATE_WRONSKIAN: f64 = 1e-13;

/// Energy `E + iΓ` in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexEnergy {
    pub real_part: f64,
    pub imag_part: f64,
}

impl ComplexEnergy {
    pub fn new(real_part: f64, imag_part: f64) -> Result<Self> {
        if !(imag_part > 0.0) || !real_part.is_finite() || !imag_part.is_finite() {
            return Err(Error::NonRetardedEnergy(imag_part));
        }
        Ok(Self { real_part, imag_part })
    }

    pub fn value(&self) -> C64 {
        C64::new(self.real_part, self.imag_part)
    }
}

/// Grid and integrator resolution shared by every resolvent built on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventGrid {
    pub grid: UniformGrid,
    /// RK4 steps per grid cell.
    pub substeps: usize,
}

impl ResolventGrid {
    pub fn new(grid: UniformGrid, substeps: usize) -> Result<Self> {
        if substeps == 0 {
            return Err(Error::InvalidParameter("substeps must be at least 1".into()));
        }
        Ok(Self { grid, substeps })
    }

    pub fn refined(&self) -> Self {
        Self {
            grid: self.grid.refined(),
            substeps: self.substeps,
        }
    }
}

/// Potential tabulated at every RK4 stage point of a [`ResolventGrid`].
///
/// Independent of `z`, so one table serves a whole energy scan.
#[derive(Debug, Clone)]
pub struct PotentialTable {
    layout: ResolventGrid,
    mass: f64,
    /// `V` at `x_min + j h/2`, `h = dx / substeps`.
    fine: Vec<f64>,
    gradient_start: f64,
    gradient_end: f64,
}

impl PotentialTable {
    pub fn new<P: Potential + ?Sized>(potential: &P, mass: f64, layout: ResolventGrid) -> Result<Self> {
        if !(mass > 0.0) {
            return Err(Error::InvalidParameter(format!("mass must be positive (got {mass})")));
        }
        let grid = layout.grid;
        let per_cell = 2 * layout.substeps;
        let count = per_cell * (grid.len() - 1) + 1;
        let half = grid.step() / per_cell as f64;
        let fine = (0..count)
            .map(|j| {
                let x = if j == count - 1 { grid.stop() } else { grid.start() + j as f64 * half };
                potential.value(x)
            })
            .collect();
        Ok(Self {
            layout,
            mass,
            fine,
            gradient_start: potential.gradient(grid.start()),
            gradient_end: potential.gradient(grid.stop()),
        })
    }

    pub fn layout(&self) -> ResolventGrid {
        self.layout
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.layout.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Potential at grid node `i`.
    pub fn node_value(&self, i: usize) -> f64 {
        self.fine[2 * self.layout.substeps * i]
    }
}

/// One homogeneous solution on the grid: `u = mantissa · exp(log_scale)`.
#[derive(Debug, Clone)]
struct Branch {
    u: Vec<C64>,
    du: Vec<C64>,
    log_scale: Vec<f64>,
}

impl Branch {
    /// Value and derivative at fraction `t` of cell `k`, in the scale of node `k`.
    fn at(&self, k: usize, t: f64, h: f64) -> (C64, C64) {
        if t == 0.0 {
            return (self.u[k], self.du[k]);
        }
        let r = (self.log_scale[k + 1] - self.log_scale[k]).exp();
        hermite(self.u[k], self.du[k], self.u[k + 1] * r, self.du[k + 1] * r, h, t)
    }
}

/// WKB-seeded integration of `u'' = q u`, `q = 2m (V − z)`.
fn sweep(table: &PotentialTable, z: C64, forward: bool) -> Branch {
    let grid = table.grid();
    let n = grid.len();
    let sub = table.layout.substeps;
    let per_cell = 2 * sub;
    let two_m = 2.0 * table.mass;
    let h = grid.step() / sub as f64 * if forward { 1.0 } else { -1.0 };
    let q = |j: usize| (table.fine[j] - z) * two_m;

    let (start_node, edge_gradient) = if forward {
        (0, table.gradient_start)
    } else {
        (n - 1, table.gradient_end)
    };
    let q0 = q(start_node * per_cell);
    let kappa = q0.sqrt();
    // u ∝ q^{-1/4} exp(±∫√q): u'/u = ±√q − q'/(4q)
    let correction = two_m * edge_gradient / (4.0 * q0);
    let mut u = C64::new(1.0, 0.0);
    let mut du = if forward { kappa - correction } else { -kappa - correction };
    let mut scale = 0.0;

    let mut out = Branch {
        u: vec![C64::default(); n],
        du: vec![C64::default(); n],
        log_scale: vec![0.0; n],
    };
    out.u[start_node] = u;
    out.du[start_node] = du;

    let nodes: Box<dyn Iterator<Item = usize>> = if forward {
        Box::new(1..n)
    } else {
        Box::new((0..n - 1).rev())
    };
    let mut fine = start_node * per_cell;
    for node in nodes {
        for _ in 0..sub {
            let (j_half, j_end) = if forward {
                (fine + 1, fine + 2)
            } else {
                (fine - 1, fine - 2)
            };
            let (qa, qb, qc) = (q(fine), q(j_half), q(j_end));
            let k1u = du;
            let k1v = qa * u;
            let k2u = du + k1v * (0.5 * h);
            let k2v = qb * (u + k1u * (0.5 * h));
            let k3u = du + k2v * (0.5 * h);
            let k3v = qb * (u + k2u * (0.5 * h));
            let k4u = du + k3v * h;
            let k4v = qc * (u + k3u * h);
            u += (k1u + (k2u + k3u) * 2.0 + k4u) * (h / 6.0);
            du += (k1v + (k2v + k3v) * 2.0 + k4v) * (h / 6.0);
            fine = j_end;
        }
        let mag = u.norm().max(du.norm());
        if mag > RESCALE_THRESHOLD {
            u /= mag;
            du /= mag;
            scale += mag.ln();
        }
        out.u[node] = u;
        out.du[node] = du;
        out.log_scale[node] = scale;
    }
    out
}

/// `G⁰(x, x₀; z)` for one potential curve at one complex energy.
#[derive(Debug, Clone)]
pub struct ResolventEvaluator {
    table: Arc<PotentialTable>,
    z: ComplexEnergy,
    left: Branch,
    right: Branch,
    /// Wronskian mantissa at `reference`.
    wronskian: C64,
    reference: usize,
    /// `log_scale_left + log_scale_right` at `reference`.
    reference_scale: f64,
}

pub fn build_resolvent(table: Arc<PotentialTable>, z: ComplexEnergy) -> Result<ResolventEvaluator> {
    ResolventEvaluator::new(table, z)
}

impl ResolventEvaluator {
    pub fn new(table: Arc<PotentialTable>, z: ComplexEnergy) -> Result<Self> {
        let z = ComplexEnergy::new(z.real_part, z.imag_part)?;
        let zc = z.value();
        let left = sweep(&table, zc, true);
        let right = sweep(&table, zc, false);
        let n = table.grid().len();
        let reference = (0..n)
            .min_by(|&a, &b| table.node_value(a).total_cmp(&table.node_value(b)))
            .unwrap_or(n / 2);
        let a = left.u[reference] * right.du[reference];
        let b = left.du[reference] * right.u[reference];
        let wronskian = a - b;
        let magnitude = wronskian.norm() / (a.norm() + b.norm());
        if !(magnitude > DEGENERATE_WRONSKIAN) {
            return Err(Error::DegenerateWronskian { magnitude });
        }
        let reference_scale = left.log_scale[reference] + right.log_scale[reference];
        Ok(Self {
            table,
            z,
            left,
            right,
            wronskian,
            reference,
            reference_scale,
        })
    }

    pub fn grid(&self) -> &UniformGrid {
        self.table.grid()
    }

    pub fn energy(&self) -> ComplexEnergy {
        self.z
    }

    pub fn mass(&self) -> f64 {
        self.table.mass()
    }

    fn prefactor(&self) -> C64 {
        C64::new(2.0 * self.mass(), 0.0) / self.wronskian
    }

    /// The Wronskian in true (unscaled) units, as a mantissa and log scale.
    pub fn wronskian(&self) -> (C64, f64) {
        (self.wronskian, self.reference_scale)
    }

    /// Largest relative deviation of the node-wise Wronskian from its value
    /// at the reference node.
    pub fn wronskian_drift(&self) -> f64 {
        (0..self.grid().len())
            .map(|i| {
                let w = self.left.u[i] * self.right.du[i] - self.left.du[i] * self.right.u[i];
                let s = self.left.log_scale[i] + self.right.log_scale[i] - self.reference_scale;
                (w * s.exp() / self.wronskian - 1.0).norm()
            })
            .fold(0.0, f64::max)
    }

    /// e-foldings of the decaying solutions between each grid edge and the
    /// outermost classical turning point of `Re z` (or the potential minimum
    /// when `Re z` lies below it everywhere).
    pub fn edge_decay(&self) -> (f64, f64) {
        let n = self.grid().len();
        let e = self.z.real_part;
        let allowed: Vec<usize> = (0..n).filter(|&i| self.table.node_value(i) <= e).collect();
        let (first, last) = match (allowed.first(), allowed.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (self.reference, self.reference),
        };
        let ln_abs = |b: &Branch, i: usize| b.u[i].norm().ln() + b.log_scale[i];
        (
            ln_abs(&self.left, first) - ln_abs(&self.left, 0),
            ln_abs(&self.right, last) - ln_abs(&self.right, n - 1),
        )
    }

    /// Largest residual of `u'' − q u` over interior nodes, relative to `|q u|`,
    /// checked with the fourth-order Numerov relation on the tabulated solutions.
    /// Nodes with `|q| dx² > 0.1` (deep in a wall, where only the RK4
    /// substeps resolve the solution) are skipped.
    pub fn ode_residual(&self) -> f64 {
        let n = self.grid().len();
        let h = self.grid().step();
        let two_m = 2.0 * self.mass();
        let z = self.z.value();
        let mut worst: f64 = 0.0;
        for branch in [&self.left, &self.right] {
            for i in 1..n - 1 {
                if ((self.table.node_value(i) - z) * two_m).norm() * h * h > 0.1 {
                    continue;
                }
                let s = branch.log_scale[i];
                let v = |j: usize| branch.u[j] * (branch.log_scale[j] - s).exp();
                let second = (v(i + 1) - v(i) * 2.0 + v(i - 1)) / (h * h);
                let q = |j: usize| (self.table.node_value(j) - z) * two_m;
                let rhs = (q(i + 1) * v(i + 1) + q(i) * v(i) * 10.0 + q(i - 1) * v(i - 1)) / 12.0;
                let scale = rhs.norm() + second.norm();
                if scale > 0.0 {
                    worst = worst.max((second - rhs).norm() / scale);
                }
            }
        }
        worst
    }

    /// `G⁰(x, x₀; z)`.
    pub fn greens_point(&self, x: f64, x0: f64) -> Result<C64> {
        let grid = self.grid();
        let (lo, hi) = if x <= x0 { (x, x0) } else { (x0, x) };
        let (kl, tl) = grid.locate(lo)?;
        let (kr, tr) = grid.locate(hi)?;
        let h = grid.step();
        let (ul, _) = self.left.at(kl, tl, h);
        let (ur, _) = self.right.at(kr, tr, h);
        let s = self.left.log_scale[kl] + self.right.log_scale[kr] - self.reference_scale;
        Ok(self.prefactor() * ul * ur * s.exp())
    }

    /// `∫ f(x) G(x, ·) dx` as an object that can be evaluated anywhere.
    pub fn apply<T: Into<C64> + Copy>(&self, f: &[T]) -> Result<GreensAction<'_>> {
        GreensAction::new(self, f)
    }

    /// `∫ f(x) G(x, x₀) dx`.
    pub fn greens_vector<T: Into<C64> + Copy>(&self, f: &[T], x0: f64) -> Result<C64> {
        self.apply(f)?.at(x0)
    }

    /// `∫∫ f(x) G(x, x₀) g(x₀) dx dx₀` in a single O(N) pass.
    pub fn greens_matrix_element<T: Into<C64> + Copy, U: Into<C64> + Copy>(&self, f: &[T], g: &[U]) -> Result<C64> {
        self.apply(g)?.project(f)
    }
}

/// A resolvent applied to one sampled function `g`:
/// `h(x) = ∫ G(x, y) g(y) dy = (2m/W) [u₊(x) ∫_{−∞}^x u₋ g + u₋(x) ∫_x^∞ u₊ g]`.
///
/// The cumulative integrals are stored in the log scale of each node.
#[derive(Debug, Clone)]
pub struct GreensAction<'a> {
    ev: &'a ResolventEvaluator,
    g: Vec<C64>,
    left_cumulative: Vec<C64>,
    right_cumulative: Vec<C64>,
}

impl<'a> GreensAction<'a> {
    fn new<T: Into<C64> + Copy>(ev: &'a ResolventEvaluator, g: &[T]) -> Result<Self> {
        let grid = ev.grid();
        grid.check_samples(g)?;
        let g: Vec<C64> = g.iter().map(|&v| v.into()).collect();
        let n = g.len();
        let h = grid.step();

        // Products g·u in the scale of every node; the cell rules below need
        // all four stencil values in one common scale, rescaled on the fly.
        let left_prod: Vec<C64> = (0..n).map(|i| g[i] * ev.left.u[i]).collect();
        let right_prod: Vec<C64> = (0..n).map(|i| g[i] * ev.right.u[i]).collect();

        let mut left_cumulative = vec![C64::default(); n];
        for k in 0..n - 1 {
            let cell = cell_in_scale(&left_prod, &ev.left.log_scale, k, ev.left.log_scale[k + 1], h);
            let carry = (ev.left.log_scale[k] - ev.left.log_scale[k + 1]).exp();
            left_cumulative[k + 1] = left_cumulative[k] * carry + cell;
        }
        let mut right_cumulative = vec![C64::default(); n];
        for k in (0..n - 1).rev() {
            let cell = cell_in_scale(&right_prod, &ev.right.log_scale, k, ev.right.log_scale[k], h);
            let carry = (ev.right.log_scale[k + 1] - ev.right.log_scale[k]).exp();
            right_cumulative[k] = right_cumulative[k + 1] * carry + cell;
        }
        Ok(Self {
            ev,
            g,
            left_cumulative,
            right_cumulative,
        })
    }

    /// `h` at grid node `i`.
    pub fn node(&self, i: usize) -> C64 {
        let ev = self.ev;
        let s = ev.left.log_scale[i] + ev.right.log_scale[i] - ev.reference_scale;
        ev.prefactor()
            * (ev.right.u[i] * self.left_cumulative[i] + ev.left.u[i] * self.right_cumulative[i])
            * s.exp()
    }

    pub fn nodes(&self) -> Vec<C64> {
        (0..self.g.len()).map(|i| self.node(i)).collect()
    }

    /// `h(x)` at an arbitrary point; the integrals are split exactly at `x`.
    pub fn at(&self, x: f64) -> Result<C64> {
        let ev = self.ev;
        let grid = ev.grid();
        let (k, t) = grid.locate(x)?;
        if t == 0.0 {
            return Ok(self.node(k));
        }
        let h = grid.step();
        let sl = ev.left.log_scale[k];
        let sr = ev.right.log_scale[k];
        let left_partial = partial_in_scale(&self.g, &ev.left, k, t, sl, h);
        let right_partial = partial_in_scale(&self.g, &ev.right, k, t, sr, h);
        let left_total = self.left_cumulative[k] + left_partial;
        let right_total = self.right_cumulative[k] - right_partial;
        let (ul, _) = ev.left.at(k, t, h);
        let (ur, _) = ev.right.at(k, t, h);
        let s = sl + sr - ev.reference_scale;
        Ok(ev.prefactor() * (ur * left_total + ul * right_total) * s.exp())
    }

    /// `∫ f(x) h(x) dx` by the trapezoid rule.
    pub fn project<T: Into<C64> + Copy>(&self, f: &[T]) -> Result<C64> {
        let grid = self.ev.grid();
        grid.check_samples(f)?;
        let integrand: Vec<C64> = f.iter().enumerate().map(|(i, &v)| v.into() * self.node(i)).collect();
        Ok(trapezoid(&integrand, grid.step()))
    }
}

fn stencil_start(k: usize, n: usize) -> usize {
    if k == 0 {
        0
    } else if k + 2 >= n {
        n - 4
    } else {
        k - 1
    }
}

fn rescaled_stencil(prod: &[C64], log_scale: &[f64], k: usize, target: f64) -> (usize, [C64; 4]) {
    let first = stencil_start(k, prod.len());
    let mut local = [C64::default(); 4];
    for j in 0..4 {
        let s = log_scale[first + j];
        local[j] = if s == target { prod[first + j] } else { prod[first + j] * (s - target).exp() };
    }
    (first, local)
}

fn cell_in_scale(prod: &[C64], log_scale: &[f64], k: usize, target: f64, h: f64) -> C64 {
    let (first, local) = rescaled_stencil(prod, log_scale, k, target);
    // cell_integrals on the four stencil values yields the integral of the
    // cell at position k − first inside that stencil.
    cell_integrals(&local, h)[k - first]
}

fn partial_in_scale(g: &[C64], branch: &Branch, k: usize, t: f64, target: f64, h: f64) -> C64 {
    let first = stencil_start(k, g.len());
    let mut local = [C64::default(); 4];
    for j in 0..4 {
        let i = first + j;
        local[j] = g[i] * branch.u[i] * (branch.log_scale[i] - target).exp();
    }
    partial_cell_integral(&local, k - first, t, h)
}
