//! Uniform spatial grids and the quadrature rules used on them.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformGrid {
    start: f64,
    stop: f64,
    points: usize,
}

impl UniformGrid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && stop > start) {
            return Err(Error::InvalidParameter(format!(
                "grid bounds [{start}, {stop}] are not an increasing finite interval"
            )));
        }
        if points < 8 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 8 points (got {points})"
            )));
        }
        Ok(Self { start, stop, points })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.points - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.x(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.start && x <= self.stop
    }

    /// Same interval with twice the resolution.
    pub fn refined(&self) -> Self {
        Self {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    /// Grid covering at least `[lo, hi]` with spacing `dx` and a node exactly
    /// at `anchor`.
    pub fn aligned(lo: f64, hi: f64, dx: f64, anchor: f64) -> Result<Self> {
        if !(dx > 0.0) || !(lo <= anchor && anchor <= hi) {
            return Err(Error::InvalidParameter(format!(
                "cannot align a grid of step {dx} on [{lo}, {hi}] to {anchor}"
            )));
        }
        let below = ((anchor - lo) / dx).ceil();
        let above = ((hi - anchor) / dx).ceil();
        Self::new(anchor - below * dx, anchor + above * dx, (below + above) as usize + 1)
    }

    /// Cell `k` (so that `x` lies in `[x_k, x_{k+1}]`) and the fractional
    /// position `t ∈ [0, 1]` inside it.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        if !self.contains(x) {
            return Err(Error::OutsideGrid {
                x,
                lo: self.start,
                hi: self.stop,
            });
        }
        let s = (x - self.start) / self.step();
        let k = (s.floor() as usize).min(self.points - 2);
        Ok((k, s - k as f64))
    }

    /// Index of the node nearest to `x`.
    pub fn nearest(&self, x: f64) -> Result<usize> {
        let (k, t) = self.locate(x)?;
        Ok(if t > 0.5 { k + 1 } else { k })
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..self.points).map(|i| f(self.x(i))).collect()
    }

    pub fn check_samples<T>(&self, f: &[T]) -> Result<()> {
        if f.len() != self.points {
            return Err(Error::SampleLength {
                got: f.len(),
                expected: self.points,
            });
        }
        Ok(())
    }
}

/// Trapezoid rule with spacing `h`.
pub fn trapezoid<T>(values: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T> + Default,
{
    let n = values.len();
    if n < 2 {
        return T::default();
    }
    let mut acc = (values[0] + values[n - 1]) * 0.5;
    for &v in &values[1..n - 1] {
        acc = acc + v;
    }
    acc * h
}

/// Node offsets (in units of the step, relative to the left end of cell `k`)
/// of the four-point stencil used for cell `k` of an `n`-point grid.
fn stencil(k: usize, n: usize) -> (usize, [f64; 4]) {
    if k == 0 {
        (0, [0.0, 1.0, 2.0, 3.0])
    } else if k + 2 >= n {
        (n - 4, [-2.0, -1.0, 0.0, 1.0])
    } else {
        (k - 1, [-1.0, 0.0, 1.0, 2.0])
    }
}

/// Weights `w_j` such that `∫_0^t p(s) ds = Σ w_j y_j` for the cubic `p`
/// interpolating `y_j` at the offsets `o_j`.
pub fn lagrange_integral_weights(offsets: [f64; 4], t: f64) -> [f64; 4] {
    let mut w = [0.0; 4];
    for j in 0..4 {
        // Expand Π_{m≠j} (s − o_m) into coefficients c0 + c1 s + c2 s² + c3 s³.
        let mut c = [1.0, 0.0, 0.0, 0.0];
        let mut denom = 1.0;
        let mut deg = 0;
        for m in 0..4 {
            if m == j {
                continue;
            }
            let r = offsets[m];
            for d in (0..=deg).rev() {
                c[d + 1] += c[d];
                c[d] *= -r;
            }
            deg += 1;
            denom *= offsets[j] - offsets[m];
        }
        let integral = c[0] * t + c[1] * t * t / 2.0 + c[2] * t.powi(3) / 3.0 + c[3] * t.powi(4) / 4.0;
        w[j] = integral / denom;
    }
    w
}

/// Integral of the local cubic interpolant of `y` over `[x_k, x_k + t h]`.
pub fn partial_cell_integral(y: &[C64], k: usize, t: f64, h: f64) -> C64 {
    let (first, offsets) = stencil(k, y.len());
    let shift = first as f64 - k as f64;
    let rel = [offsets[0], offsets[1], offsets[2], offsets[3]];
    debug_assert!(rel.iter().enumerate().all(|(j, o)| (o - (shift + j as f64)).abs() < 1e-12));
    let w = lagrange_integral_weights(rel, t);
    (0..4).map(|j| y[first + j] * w[j]).sum::<C64>() * h
}

/// Integrals over every cell `[x_k, x_{k+1}]` with a four-point rule,
/// fourth-order accurate.
pub fn cell_integrals(y: &[C64], h: f64) -> Vec<C64> {
    let n = y.len();
    let interior = lagrange_integral_weights([-1.0, 0.0, 1.0, 2.0], 1.0);
    let first = lagrange_integral_weights([0.0, 1.0, 2.0, 3.0], 1.0);
    let last = lagrange_integral_weights([-2.0, -1.0, 0.0, 1.0], 1.0);
    (0..n - 1)
        .map(|k| {
            let (start, w) = if k == 0 {
                (0, &first)
            } else if k + 2 >= n {
                (n - 4, &last)
            } else {
                (k - 1, &interior)
            };
            (0..4).map(|j| y[start + j] * w[j]).sum::<C64>() * h
        })
        .collect()
}

/// Cubic Hermite interpolation from values and derivatives at the two ends
/// of a cell of width `h`, evaluated at fraction `t`. Returns value and
/// derivative.
pub fn hermite(y0: C64, d0: C64, y1: C64, d1: C64, h: f64, t: f64) -> (C64, C64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    let value = y0 * h00 + d0 * (h10 * h) + y1 * h01 + d1 * (h11 * h);
    let dh00 = 6.0 * t2 - 6.0 * t;
    let dh10 = 3.0 * t2 - 4.0 * t + 1.0;
    let dh01 = -6.0 * t2 + 6.0 * t;
    let dh11 = 3.0 * t2 - 2.0 * t;
    let deriv = y0 * (dh00 / h) + d0 * dh10 + y1 * (dh01 / h) + d1 * dh11;
    (value, deriv)
}

/// Four-point Lagrange interpolation of nodal samples at an arbitrary `x`.
pub fn interpolate(grid: &UniformGrid, y: &[f64], x: f64) -> Result<f64> {
    let (k, t) = grid.locate(x)?;
    let (first, offsets) = stencil(k, y.len());
    let mut acc = 0.0;
    for j in 0..4 {
        let mut l = 1.0;
        for m in 0..4 {
            if m != j {
                l *= (t - offsets[m]) / (offsets[j] - offsets[m]);
            }
        }
        acc += l * y[first + j];
    }
    Ok(acc)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
