//! Renormalized area of surfaces meeting the boundary orthogonally.
//!
//! On each θ-line the g-area density J̄/w², w = 1/V, is split as
//! −ℓ w_r/w² + γ(r), with ℓ the h-length density of the boundary curve.
//! Then A(ε) = ℓ/w(r_ε) − ℓ/w(0) + ∫_0^{r_ε} γ and, since 1/w − 1/x = O(x),
//! the finite part is ∫_0^1 γ − ℓ/w(0). The smooth w is used rather than x,
//! which has a conical point where V is minimal.

use crate::autodiff::{seed1, split1};
use crate::error::{Error, Result};
use crate::geometry::Geometry3;
use crate::geometry::{curvature, Scheme, Which};
use crate::io::{fmt12, plot_script, Csv};
use crate::quadrature::{gauss_legendre, least_squares};
use crate::models::MetricModel;
use crate::spectral::fourier_matrix;
use crate::surface::{
    local_geometry, truncation_root, Chart, Frame, LineData, LocalGeometry, ParamSurface,
};
use nalgebra::{DMatrix, DVector, Vector3};
use rayon::prelude::*;
use serde::Serialize;

/// Quadrature panels on [0, 1] and nodes per panel.
const PANELS: [f64; 4] = [0.0, 0.5, 0.85, 1.0];
const NODES: usize = 40;

pub const DEFAULT_LADDER: [f64; 6] = [0.04, 0.028, 0.02, 0.014, 0.01, 0.007];

pub(crate) fn panel_rule(a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut rule = Vec::new();
    for w in PANELS.windows(2) {
        let (lo, hi) = (w[0].max(a), w[1].min(b));
        if hi > lo {
            rule.extend(gauss_legendre(NODES, lo, hi));
        }
    }
    rule
}

/// Finite-part integrand data of one θ-line.
#[derive(Clone, Debug, Serialize)]
pub struct LineArea {
    pub theta: f64,
    /// |∂_θ|_ḡ at the boundary.
    pub ell: f64,
    /// 1/V at the disk center.
    pub w_center: f64,
    /// ∫₀¹ γ dr − ℓ/w(0).
    pub rena: f64,
}

fn gamma(chart: &Chart, line: &LineData, ell: f64, r: f64) -> Result<f64> {
    let f = line.frame(r);
    let g = local_geometry(chart, &f, false)?;
    let (_, dw) = split1(&chart.inv_v(seed1(f.p)));
    let w_r = dw.dot(&Vector3::from(f.pr));
    Ok((g.jbar + ell * w_r) / (g.w * g.w))
}

fn boundary_ell(chart: &Chart, line: &LineData) -> Result<f64> {
    let g = local_geometry(chart, &line.frame(1.0), false)?;
    Ok(g.gab[1][1].sqrt())
}

pub fn line_area(surface: &ParamSurface, line: &LineData) -> Result<LineArea> {
    let chart = &surface.chart;
    let ell = boundary_ell(chart, line)?;
    let w_center: f64 = chart.inv_v(line.frame(0.0).p);
    let mut s = 0.0;
    for (r, w) in panel_rule(0.0, 1.0) {
        s += w * gamma(chart, line, ell, r)?;
    }
    Ok(LineArea {
        theta: surface.grid().theta(line.j),
        ell,
        w_center,
        rena: s - ell / w_center,
    })
}

/// Per-line regularization of a surface.
#[derive(Clone, Debug, Serialize)]
pub struct AreaProfile {
    pub lines: Vec<LineArea>,
    /// L(Γ) from the boundary densities.
    pub length: f64,
    /// Finite part of the area.
    pub rena: f64,
    pub dtheta: f64,
}

pub fn area_profile(surface: &ParamSurface) -> Result<AreaProfile> {
    let lines = surface.lines();
    let out: Vec<LineArea> = lines
        .par_iter()
        .map(|l| line_area(surface, l))
        .collect::<Result<_>>()?;
    let grid = surface.grid();
    let dtheta = grid.period / grid.n_theta as f64;
    let length = out.iter().map(|l| l.ell).sum::<f64>() * dtheta;
    let rena = out.iter().map(|l| l.rena).sum::<f64>() * dtheta;
    Ok(AreaProfile {
        lines: out,
        length,
        rena,
        dtheta,
    })
}

/// Renormalized area by direct regularization.
pub fn renormalized_area(surface: &ParamSurface) -> Result<f64> {
    Ok(area_profile(surface)?.rena)
}

/// g-area of the part of the surface with x > ε.
pub fn area_truncated(surface: &ParamSurface, eps: f64) -> Result<f64> {
    let chart = surface.chart;
    let lines = surface.lines();
    let grid = surface.grid();
    let dtheta = grid.period / grid.n_theta as f64;
    let per: Vec<f64> = lines
        .par_iter()
        .map(|line| {
            let la = line_area(surface, line)?;
            let r_eps = truncation_root(&chart, line, eps)?;
            let mut tail = 0.0;
            for (r, w) in gauss_legendre(NODES, r_eps, 1.0) {
                tail += w * gamma(&chart, line, la.ell, r)?;
            }
            let w_eps: f64 = chart.inv_v(line.frame(r_eps).p);
            Ok(la.ell / w_eps + la.rena - tail)
        })
        .collect::<Result<_>>()?;
    Ok(per.iter().sum::<f64>() * dtheta)
}

/// Extrapolation of A(ε) over a ladder of cutoffs.
#[derive(Clone, Debug, Serialize)]
pub struct RenAFit {
    pub ladder: Vec<f64>,
    pub areas: Vec<f64>,
    /// L(Γ) from the boundary curve.
    pub length: f64,
    /// A − L/ε ≈ c + slope·ε + quad·ε².
    pub pinned_c: f64,
    pub pinned_slope: f64,
    pub pinned_quad: f64,
    /// Max residual of the pinned fit over the ladder.
    pub residual: f64,
    /// A ≈ a/ε + c + slope·ε + quad·ε².
    pub free_inv: f64,
    pub free_c: f64,
    pub free_slope: f64,
    pub free_quad: f64,
    /// Finite part by direct regularization.
    pub direct: f64,
    /// εA − L at each cutoff.
    pub eps_a_error: Vec<f64>,
    /// Observed order of εA − L → 0.
    pub order: f64,
}

impl RenAFit {
    pub fn to_csv(&self) -> String {
        let mut csv = Csv::new(&["eps", "area", "eps_area_minus_length", "finite_part"]);
        for (k, (&e, &a)) in self.ladder.iter().zip(&self.areas).enumerate() {
            csv.push(&[e, a, self.eps_a_error[k], a - self.length / e]);
        }
        csv.render()
    }

    pub fn summary(&self) -> String {
        format!(
            "length {}\npinned_c {}\npinned_slope {}\npinned_quad {}\nresidual {}\nfree_inv {}\nfree_c {}\nfree_slope {}\nfree_quad {}\ndirect {}\norder {}\n",
            fmt12(self.length),
            fmt12(self.pinned_c),
            fmt12(self.pinned_slope),
            fmt12(self.pinned_quad),
            fmt12(self.residual),
            fmt12(self.free_inv),
            fmt12(self.free_c),
            fmt12(self.free_slope),
            fmt12(self.free_quad),
            fmt12(self.direct),
            fmt12(self.order)
        )
    }

    pub fn plot(csv_name: &str) -> String {
        plot_script(csv_name, "A(eps) - L/eps", 1, &[(4, "finite part")])
    }
}

pub fn rena_fit(surface: &ParamSurface, ladder: &[f64]) -> Result<RenAFit> {
    if ladder.len() < 4 {
        return Err(Error::Config("the cutoff ladder needs at least four values".into()));
    }
    let profile = area_profile(surface)?;
    let areas = ladder
        .iter()
        .map(|&e| area_truncated(surface, e))
        .collect::<Result<Vec<_>>>()?;
    let l = profile.length;
    let n = ladder.len();
    let a2 = DMatrix::from_fn(n, 3, |i, j| ladder[i].powi(j as i32));
    let y2 = DVector::from_iterator(n, (0..n).map(|i| areas[i] - l / ladder[i]));
    let p = least_squares(&a2, &y2).ok_or_else(|| Error::Fit("pinned fit".into()))?;
    let residual = (&a2 * &p - &y2).amax();
    let a3 = DMatrix::from_fn(n, 4, |i, j| ladder[i].powi(j as i32 - 1));
    let y3 = DVector::from_column_slice(&areas);
    let f = least_squares(&a3, &y3).ok_or_else(|| Error::Fit("free fit".into()))?;
    let eps_a_error: Vec<f64> = (0..n).map(|i| ladder[i] * areas[i] - l).collect();
    let (e0, e1) = (eps_a_error[0].abs(), eps_a_error[n - 1].abs());
    let order = (e0 / e1).ln() / (ladder[0] / ladder[n - 1]).ln();
    Ok(RenAFit {
        ladder: ladder.to_vec(),
        areas,
        length: l,
        pinned_c: p[0],
        pinned_slope: p[1],
        pinned_quad: p[2],
        residual,
        free_inv: f[0],
        free_c: f[1],
        free_slope: f[2],
        free_quad: f[3],
        direct: profile.rena,
        eps_a_error,
        order,
    })
}

/// Gauss–Bonnet form −2πχ + ∫(H²/4 − |b̊|²/2 + sec + 1) dA.
#[derive(Clone, Debug, Serialize)]
pub struct ClosedForm {
    pub chi: i32,
    pub willmore: f64,
    pub umbilic: f64,
    pub sectional: f64,
    pub value: f64,
}

pub fn renarea_closed_form(surface: &ParamSurface, chi: i32) -> Result<ClosedForm> {
    let chart = surface.chart;
    let grid = surface.grid();
    let dtheta = grid.period / grid.n_theta as f64;
    let lines = surface.lines();
    let per: Vec<[f64; 3]> = lines
        .par_iter()
        .map(|line| {
            let mut acc = [0.0; 3];
            for (r, w) in panel_rule(0.0, 1.0) {
                let f = line.frame(r);
                let g = local_geometry(&chart, &f, true)?;
                let da = g.area_g();
                let curv = curvature(&chart, f.p, Which::Physical, Scheme::Exact)?;
                let sec = curv.sectional(&Vector3::from(f.pr), &Vector3::from(f.pt));
                acc[0] += w * 0.25 * g.h_g * g.h_g * da;
                acc[1] += w * 0.5 * g.bcirc2 * g.jbar;
                acc[2] += w * (sec + 1.0) * da;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let sum = |k: usize| per.iter().map(|a| a[k]).sum::<f64>() * dtheta;
    let (willmore, umbilic, sectional) = (sum(0), sum(1), sum(2));
    Ok(ClosedForm {
        chi,
        willmore,
        umbilic,
        sectional,
        value: -2.0 * std::f64::consts::PI * chi as f64 + willmore - umbilic + sectional,
    })
}

/// ∫ f dr dθ over the parameter disk, f evaluated with full local geometry.
pub fn surface_integral<F>(surface: &ParamSurface, f: F) -> Result<f64>
where
    F: Fn(&Frame, &LocalGeometry) -> Result<f64> + Sync,
{
    surface_integral_above(surface, 0.0, f)
}

/// As [`surface_integral`], restricted to x ≥ `x_min`.
pub fn surface_integral_above<F>(surface: &ParamSurface, x_min: f64, f: F) -> Result<f64>
where
    F: Fn(&Frame, &LocalGeometry) -> Result<f64> + Sync,
{
    let chart = surface.chart;
    let grid = surface.grid();
    let dtheta = grid.period / grid.n_theta as f64;
    let lines = surface.lines();
    let per: Vec<f64> = lines
        .par_iter()
        .map(|line| {
            let mut acc = 0.0;
            for (r, w) in panel_rule(0.0, 1.0) {
                let fr = line.frame(r);
                let g = local_geometry(&chart, &fr, true)?;
                if g.x >= x_min {
                    acc += w * f(&fr, &g)?;
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(per.iter().sum::<f64>() * dtheta)
}

/// h-length of the boundary ring computed in boundary coordinates.
pub fn boundary_length_h(model: &MetricModel, surface: &ParamSurface) -> f64 {
    let grid = surface.grid();
    let n = grid.n_theta;
    let chart = surface.chart;
    let fg: Vec<[f64; 3]> = (0..n).map(|j| chart.to_fg(surface.pts[grid.idx(0, j)])).collect();
    let period = chart.period();
    // θ_fg − θ is periodic in θ.
    let mut shift = Vec::with_capacity(n);
    for (j, p) in fg.iter().enumerate() {
        let d = p[1] - grid.theta(j);
        shift.push(d - period * (d / period).round());
    }
    let s: Vec<f64> = fg.iter().map(|p| p[2]).collect();
    let d = fourier_matrix(n) * grid.dphi();
    let ds = &d * nalgebra::DVector::from_column_slice(&s);
    let dsh = &d * nalgebra::DVector::from_column_slice(&shift);
    let dtheta = grid.period / n as f64;
    (0..n)
        .map(|j| {
            let h: [f64; 3] = model.h(grid.theta(j) + shift[j], s[j]);
            let (a, b) = (1.0 + dsh[j], ds[j]);
            (h[0] * a * a + 2.0 * h[1] * a * b + h[2] * b * b).sqrt() * dtheta
        })
        .sum()
}
