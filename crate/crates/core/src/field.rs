//! Periodic boundary fields with trigonometric interpolation.

use crate::autodiff::Real;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Uniform periodic (θ, s) grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    pub n_theta: usize,
    pub n_s: usize,
    pub theta_period: f64,
    pub s_period: f64,
}

impl PeriodicGrid {
    pub fn new(n_theta: usize, n_s: usize, theta_period: f64, s_period: f64) -> Self {
        Self {
            n_theta: n_theta.max(1),
            n_s: n_s.max(1),
            theta_period,
            s_period,
        }
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.theta_period * j as f64 / self.n_theta as f64
    }

    pub fn s(&self, k: usize) -> f64 {
        self.s_period * k as f64 / self.n_s as f64
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_s
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Points in row-major order (θ outer, s inner).
    pub fn points(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for j in 0..self.n_theta {
            for k in 0..self.n_s {
                out.push((self.theta(j), self.s(k)));
            }
        }
        out
    }

    pub fn cell_area(&self) -> f64 {
        self.theta_period * self.s_period / self.len() as f64
    }
}

/// Real trigonometric coefficients of uniform samples.
/// Layout: `[a0, a1, b1, a2, b2, …]` plus the Nyquist cosine when n is even.
pub fn trig_coefficients(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut c = vec![0.0; n];
    if n == 0 {
        return c;
    }
    c[0] = values.iter().sum::<f64>() / n as f64;
    let half = (n - 1) / 2;
    for m in 1..=half {
        let (mut a, mut b) = (0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let ph = 2.0 * PI * (m * j % n) as f64 / n as f64;
            a += v * ph.cos();
            b += v * ph.sin();
        }
        c[2 * m - 1] = 2.0 * a / n as f64;
        c[2 * m] = 2.0 * b / n as f64;
    }
    if n.is_multiple_of(2) {
        let mut a = 0.0;
        for (j, v) in values.iter().enumerate() {
            a += if j % 2 == 0 { *v } else { -*v };
        }
        c[n - 1] = a / n as f64;
    }
    c
}

/// Basis values matching [`trig_coefficients`] at phase φ (period 2π).
pub fn trig_basis<D: Real>(n: usize, phi: D) -> Vec<D> {
    let mut out = Vec::with_capacity(n);
    out.push(D::from(1.0));
    let half = (n.max(1) - 1) / 2;
    for m in 1..=half {
        let a = phi * m as f64;
        out.push(a.cos());
        out.push(a.sin());
    }
    if n.is_multiple_of(2) && n > 0 {
        out.push((phi * (n / 2) as f64).cos());
    }
    out
}

/// Scalar field on a [`PeriodicGrid`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrigField2 {
    pub grid: PeriodicGrid,
    pub values: Vec<f64>,
    coef: Vec<f64>,
    constant: Option<f64>,
}

impl TrigField2 {
    pub fn from_values(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "field size mismatch");
        let (nt, ns) = (grid.n_theta, grid.n_s);
        let mut tmp = vec![0.0; nt * ns];
        for j in 0..nt {
            let row = trig_coefficients(&values[j * ns..(j + 1) * ns]);
            tmp[j * ns..(j + 1) * ns].copy_from_slice(&row);
        }
        let mut coef = vec![0.0; nt * ns];
        for k in 0..ns {
            let col: Vec<f64> = (0..nt).map(|j| tmp[j * ns + k]).collect();
            let cc = trig_coefficients(&col);
            for j in 0..nt {
                coef[j * ns + k] = cc[j];
            }
        }
        let first = values[0];
        let constant = if values.iter().all(|v| *v == first) {
            Some(first)
        } else {
            None
        };
        Self {
            grid,
            values,
            coef,
            constant,
        }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = grid.points().into_iter().map(|(t, s)| f(t, s)).collect();
        Self::from_values(grid, values)
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self::from_values(grid, vec![c; grid.len()])
    }

    pub fn eval<D: Real>(&self, theta: D, s: D) -> D {
        if let Some(c) = self.constant {
            return D::from(c);
        }
        let g = &self.grid;
        let bt = trig_basis(g.n_theta, theta * (2.0 * PI / g.theta_period));
        let bs = trig_basis(g.n_s, s * (2.0 * PI / g.s_period));
        let mut acc = D::from(0.0);
        for (j, tj) in bt.iter().enumerate() {
            let mut row = D::from(0.0);
            for (k, sk) in bs.iter().enumerate() {
                let c = self.coef[j * g.n_s + k];
                if c != 0.0 {
                    row += *sk * c;
                }
            }
            acc += *tj * row;
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Symmetric 2-tensor field with components (θθ, θs, ss).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField2 {
    pub tt: TrigField2,
    pub ts: TrigField2,
    pub ss: TrigField2,
}

impl TensorField2 {
    pub fn constant(grid: PeriodicGrid, tt: f64, ts: f64, ss: f64) -> Self {
        Self {
            tt: TrigField2::constant(grid, tt),
            ts: TrigField2::constant(grid, ts),
            ss: TrigField2::constant(grid, ss),
        }
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(f64, f64) -> [f64; 3]) -> Self {
        let vals: Vec<[f64; 3]> = grid.points().into_iter().map(|(t, s)| f(t, s)).collect();
        let comp = |i: usize| TrigField2::from_values(grid, vals.iter().map(|v| v[i]).collect());
        Self {
            tt: comp(0),
            ts: comp(1),
            ss: comp(2),
        }
    }

    pub fn from_fn_values(grid: PeriodicGrid, vals: Vec<[f64; 3]>) -> Self {
        let comp = |i: usize| TrigField2::from_values(grid, vals.iter().map(|v| v[i]).collect());
        Self {
            tt: comp(0),
            ts: comp(1),
            ss: comp(2),
        }
    }

    pub fn eval<D: Real>(&self, theta: D, s: D) -> [D; 3] {
        [
            self.tt.eval(theta, s),
            self.ts.eval(theta, s),
            self.ss.eval(theta, s),
        ]
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.tt.grid
    }
}

/// Trace of a tensor (θθ, θs, ss) with respect to a metric (θθ, θs, ss).
pub fn trace_with<D: Real>(h: [D; 3], t: [D; 3]) -> D {
    let det = h[0] * h[2] - h[1] * h[1];
    (h[2] * t[0] - h[1] * t[1] * 2.0 + h[0] * t[2]) / det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_reproduces_band_limited_field() {
        let grid = PeriodicGrid::new(8, 6, 2.0, 3.0);
        let f = |t: f64, s: f64| {
            1.0 + (2.0 * PI * t / 2.0).cos() * (2.0 * PI * 2.0 * s / 3.0).sin()
                + 0.3 * (2.0 * PI * 3.0 * t / 2.0).sin()
        };
        let field = TrigField2::from_fn(grid, f);
        for (t, s) in [(0.37, 1.1), (1.9, 2.95), (0.0, 0.0)] {
            assert!((field.eval(t, s) - f(t, s)).abs() < 1e-13);
        }
    }

    #[test]
    fn odd_sizes_work() {
        let grid = PeriodicGrid::new(5, 1, 1.0, 1.0);
        let f = |t: f64, _s: f64| (2.0 * PI * 2.0 * t).cos();
        let field = TrigField2::from_fn(grid, f);
        assert!((field.eval(0.123, 0.4) - f(0.123, 0.0)).abs() < 1e-13);
    }
}
