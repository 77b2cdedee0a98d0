//! Chebyshev × Fourier collocation on the unit disk.
//!
//! Radial lines are full diameters through the origin. A field sampled at
//! the positive Chebyshev nodes is extended to the negative half by
//! f(−r, θ) = f(r, θ + P/2), so the origin is never a node.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarGrid {
    /// Chebyshev degree on the diameter (odd).
    pub n_cheb: usize,
    /// Number of angular nodes (even).
    pub n_theta: usize,
    /// Period of the angular parameter θ.
    pub period: f64,
}

impl PolarGrid {
    pub fn new(n_cheb: usize, n_theta: usize, period: f64) -> Self {
        let n_cheb = if n_cheb.is_multiple_of(2) { n_cheb + 1 } else { n_cheb }.max(5);
        let n_theta = if n_theta % 2 == 1 { n_theta + 1 } else { n_theta }.max(4);
        Self {
            n_cheb,
            n_theta,
            period,
        }
    }

    /// Number of radial nodes with r > 0 (including r = 1).
    pub fn n_r(&self) -> usize {
        self.n_cheb.div_ceil(2)
    }

    pub fn len(&self) -> usize {
        self.n_r() * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_theta + j
    }

    /// Radial node r_i = cos(πi/N); r_0 = 1 is the boundary.
    pub fn r(&self, i: usize) -> f64 {
        (PI * i as f64 / self.n_cheb as f64).cos()
    }

    pub fn theta(&self, j: usize) -> f64 {
        self.period * j as f64 / self.n_theta as f64
    }

    /// dφ/dθ with φ the 2π-periodic polar angle.
    pub fn dphi(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    /// Node on the diameter through θ_j for Chebyshev index k ∈ 0..=N.
    fn diameter_node(&self, k: usize, j: usize) -> usize {
        let m = self.n_r();
        if k < m {
            self.idx(k, j)
        } else {
            self.idx(self.n_cheb - k, (j + self.n_theta / 2) % self.n_theta)
        }
    }

    /// Values along the diameter through θ_j, in Chebyshev order.
    pub fn diameter<T: Copy>(&self, field: &[T], j: usize) -> Vec<T> {
        (0..=self.n_cheb).map(|k| field[self.diameter_node(k, j)]).collect()
    }

    pub fn cheb_nodes(&self) -> Vec<f64> {
        (0..=self.n_cheb)
            .map(|k| (PI * k as f64 / self.n_cheb as f64).cos())
            .collect()
    }
}

/// Chebyshev–Gauss–Lobatto differentiation matrix on [−1, 1].
pub fn cheb_matrix(n: usize) -> DMatrix<f64> {
    let x: Vec<f64> = (0..=n).map(|k| (PI * k as f64 / n as f64).cos()).collect();
    let c = |k: usize| {
        let e = if k == 0 || k == n { 2.0 } else { 1.0 };
        if k.is_multiple_of(2) {
            e
        } else {
            -e
        }
    };
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    d
}

/// Fourier differentiation matrix for n equispaced nodes on [0, 2π), n even.
pub fn fourier_matrix(n: usize) -> DMatrix<f64> {
    let h = 2.0 * PI / n as f64;
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            let k = i as f64 - j as f64;
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            0.5 * sign / (0.5 * k * h).tan()
        }
    })
}

/// Differentiation operators acting on fields sampled on a [`PolarGrid`].
#[derive(Clone, Debug)]
pub struct DiskOps {
    pub grid: PolarGrid,
    pub dr: DMatrix<f64>,
    pub drr: DMatrix<f64>,
    pub dt: DMatrix<f64>,
    pub dtt: DMatrix<f64>,
    pub drt: DMatrix<f64>,
    cheb: DMatrix<f64>,
}

impl DiskOps {
    pub fn new(grid: PolarGrid) -> Self {
        let cheb = cheb_matrix(grid.n_cheb);
        let cheb2 = &cheb * &cheb;
        let fold = |d: &DMatrix<f64>| {
            let mut out = DMatrix::zeros(grid.len(), grid.len());
            for i in 0..grid.n_r() {
                for j in 0..grid.n_theta {
                    let row = grid.idx(i, j);
                    for k in 0..=grid.n_cheb {
                        out[(row, grid.diameter_node(k, j))] += d[(i, k)];
                    }
                }
            }
            out
        };
        let dr = fold(&cheb);
        let drr = fold(&cheb2);
        let f = fourier_matrix(grid.n_theta) * grid.dphi();
        let f2 = &f * &f;
        let mut dt = DMatrix::zeros(grid.len(), grid.len());
        let mut dtt = DMatrix::zeros(grid.len(), grid.len());
        for i in 0..grid.n_r() {
            for j in 0..grid.n_theta {
                for l in 0..grid.n_theta {
                    dt[(grid.idx(i, j), grid.idx(i, l))] = f[(j, l)];
                    dtt[(grid.idx(i, j), grid.idx(i, l))] = f2[(j, l)];
                }
            }
        }
        let drt = &dr * &dt;
        Self {
            grid,
            dr,
            drr,
            dt,
            dtt,
            drt,
            cheb,
        }
    }

    pub fn apply(m: &DMatrix<f64>, f: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; m.nrows()];
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, v) in f.iter().enumerate() {
                s += m[(i, j)] * v;
            }
            *o = s;
        }
        out
    }

    /// (f, f_r, f_θ, f_rr, f_rθ, f_θθ) at every node.
    pub fn derivatives(&self, f: &[f64]) -> [Vec<f64>; 6] {
        [
            f.to_vec(),
            Self::apply(&self.dr, f),
            Self::apply(&self.dt, f),
            Self::apply(&self.drr, f),
            Self::apply(&self.drt, f),
            Self::apply(&self.dtt, f),
        ]
    }

    pub fn cheb(&self) -> &DMatrix<f64> {
        &self.cheb
    }
}

/// Barycentric interpolation on the Chebyshev–Gauss–Lobatto nodes.
pub fn cheb_interpolate(values: &[f64], r: f64) -> f64 {
    let n = values.len() - 1;
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, v) in values.iter().enumerate() {
        let xk = (PI * k as f64 / n as f64).cos();
        let d = r - xk;
        if d == 0.0 {
            return *v;
        }
        let mut w = if k % 2 == 0 { 1.0 } else { -1.0 };
        if k == 0 || k == n {
            w *= 0.5;
        }
        num += w / d * v;
        den += w / d;
    }
    num / den
}

/// Barycentric weights for evaluation at r, reusable across fields.
pub fn cheb_weights(n: usize, r: f64) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let mut den = 0.0;
    for (k, wk) in w.iter_mut().enumerate() {
        let xk = (PI * k as f64 / n as f64).cos();
        let d = r - xk;
        if d == 0.0 {
            let mut e = vec![0.0; n + 1];
            e[k] = 1.0;
            return e;
        }
        let mut c = if k % 2 == 0 { 1.0 } else { -1.0 };
        if k == 0 || k == n {
            c *= 0.5;
        }
        *wk = c / d;
        den += *wk;
    }
    for wk in w.iter_mut() {
        *wk /= den;
    }
    w
}

/// Fourier coefficients (a_m, b_m) of equispaced samples, m = 0..n/2.
pub fn fourier_modes(values: &[f64]) -> Vec<(f64, f64)> {
    let n = values.len();
    (0..=n / 2)
        .map(|m| {
            let (mut a, mut b) = (0.0, 0.0);
            for (j, v) in values.iter().enumerate() {
                let ph = 2.0 * PI * (m * j % n) as f64 / n as f64;
                a += v * ph.cos();
                b += v * ph.sin();
            }
            let scale = if m == 0 || 2 * m == n { 1.0 } else { 2.0 } / n as f64;
            (a * scale, b * scale)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn differentiates_smooth_disk_function() {
        let grid = PolarGrid::new(21, 16, 2.0 * PI);
        let ops = DiskOps::new(grid);
        // f = x² y + y in Cartesian coordinates.
        let f = |r: f64, t: f64| r.powi(3) * t.cos().powi(2) * t.sin() + r * t.sin();
        let vals: Vec<f64> = (0..grid.n_r())
            .flat_map(|i| (0..grid.n_theta).map(move |j| (i, j)))
            .map(|(i, j)| f(grid.r(i), grid.theta(j)))
            .collect();
        let [_, fr, ft, frr, frt, ftt] = ops.derivatives(&vals);
        for i in 0..grid.n_r() {
            for j in 0..grid.n_theta {
                let (r, t) = (grid.r(i), grid.theta(j));
                let n = grid.idx(i, j);
                let (c, s) = (t.cos(), t.sin());
                assert!((fr[n] - (3.0 * r * r * c * c * s + s)).abs() < 1e-11);
                let dt = r.powi(3) * (-2.0 * c * s * s + c.powi(3)) + r * c;
                assert!((ft[n] - dt).abs() < 1e-11);
                assert!((frr[n] - 6.0 * r * c * c * s).abs() < 1e-10);
                let drt = 3.0 * r * r * (-2.0 * c * s * s + c.powi(3)) + c;
                assert!((frt[n] - drt).abs() < 1e-10);
                let dtt = r.powi(3) * (2.0 * s.powi(3) - 7.0 * c * c * s) - r * s;
                assert!((ftt[n] - dtt).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn interpolation_is_exact_for_polynomials() {
        let n = 9;
        let vals: Vec<f64> = (0..=n)
            .map(|k| {
                let x = (PI * k as f64 / n as f64).cos();
                x.powi(5) - 2.0 * x
            })
            .collect();
        let r = 0.3217;
        assert!((cheb_interpolate(&vals, r) - (r.powi(5) - 2.0 * r)).abs() < 1e-14);
        let w = cheb_weights(n, r);
        let v: f64 = w.iter().zip(&vals).map(|(a, b)| a * b).sum();
        assert!((v - cheb_interpolate(&vals, r)).abs() < 1e-15);
    }
}
