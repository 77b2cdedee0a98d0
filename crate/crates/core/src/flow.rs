//! Normal flows of minimal graphs, renormalized area along them and the
//! variation, evolution and Riccati checks.
//!
//! The flow ∂ₜΦ = φν with φ = ψ(θ)·V moves points with ḡ-speed ψ along the
//! ḡ-unit normal; ψ ≡ 1 is the static flow.

use crate::autodiff::{seed1, sym_jet1, D1};
use crate::error::{Error, Result};
use crate::geometry::{acceleration, christoffel_from_jet, components, geodesic_step, Which};
use crate::io::{fmt12, plot_script, Csv};
use crate::models::{boundary_data, MetricModel};
use crate::renarea::{
    boundary_length_h, rena_fit, renormalized_area, surface_integral, surface_integral_above, RenAFit,
};
use crate::surface::{local_geometry, Chart, GraphSurface, LocalGeometry, ParamSurface};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Normal speed profile of the flow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Generator {
    /// φ = V.
    Static,
    /// φ = ψ(θ)V with ψ = a₀ + Σ a_m cos mφ + b_m sin mφ, so φ₋₁ = ψ.
    General {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
}

impl Generator {
    /// ψ at polar angle φ = 2πθ/P.
    pub fn psi(&self, phi: f64) -> f64 {
        match self {
            Generator::Static => 1.0,
            Generator::General { a0, cos, sin } => {
                let mut v = *a0;
                for (m, a) in cos.iter().enumerate() {
                    v += a * ((m + 1) as f64 * phi).cos();
                }
                for (m, b) in sin.iter().enumerate() {
                    v += b * ((m + 1) as f64 * phi).sin();
                }
                v
            }
        }
    }

    pub fn is_static(&self) -> bool {
        match self {
            Generator::Static => true,
            Generator::General { a0, cos, sin } => {
                *a0 == 1.0 && cos.iter().chain(sin).all(|c| *c == 0.0)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransportMode {
    /// ḡ-geodesics leaving F₀ with velocity ψν̄.
    Geodesic,
    /// Velocity ψν̄ of the current surface at every step.
    Renormalized,
}

/// Largest RK4 step in flow time.
const MAX_DT: f64 = 2.5e-3;

fn steps_for(t: f64) -> usize {
    ((t.abs() / MAX_DT).ceil() as usize).max(1)
}

fn normals(surface: &ParamSurface) -> Result<Vec<[f64; 3]>> {
    let frames = surface.frames();
    frames
        .0
        .par_iter()
        .map(|f| Ok(local_geometry(&surface.chart, f, false)?.nu))
        .collect()
}

fn psi_nodes(surface: &ParamSurface, gen: &Generator) -> Vec<f64> {
    let grid = surface.grid();
    (0..grid.len()).map(|n| gen.psi(grid.phi(n % grid.n_theta))).collect()
}

fn chart_accel(chart: &Chart) -> impl Fn([f64; 3], [f64; 3]) -> [f64; 3] + '_ {
    move |q: [f64; 3], v: [f64; 3]| {
        let c: [D1; 6] = components(chart, seed1(q), Which::Compactified);
        let (g, dg) = sym_jet1(&c);
        acceleration(&christoffel_from_jet(&g, &dg), &v)
    }
}

/// Transports F₀ to flow time t.
pub fn flow_surface(
    f0: &ParamSurface,
    gen: &Generator,
    mode: TransportMode,
    t: f64,
) -> Result<ParamSurface> {
    if t == 0.0 {
        return Ok(f0.clone());
    }
    let n = steps_for(t);
    let dt = t / n as f64;
    let psi = psi_nodes(f0, gen);
    match mode {
        TransportMode::Geodesic => {
            let nu = normals(f0)?;
            let accel = chart_accel(&f0.chart);
            let pts: Vec<[f64; 3]> = f0
                .pts
                .par_iter()
                .zip(nu.par_iter().zip(psi.par_iter()))
                .map(|(p, (v, s))| {
                    let (mut q, mut w) = (*p, [v[0] * s, v[1] * s, v[2] * s]);
                    for _ in 0..n {
                        let (nq, nw) = geodesic_step(&accel, q, w, dt);
                        q = nq;
                        w = nw;
                    }
                    q
                })
                .collect();
            check_finite(&pts)?;
            Ok(ParamSurface { pts, ..f0.clone() })
        }
        TransportMode::Renormalized => {
            let vel = |s: &ParamSurface| -> Result<Vec<[f64; 3]>> {
                let nu = normals(s)?;
                Ok(nu
                    .iter()
                    .zip(&psi)
                    .map(|(v, p)| [v[0] * p, v[1] * p, v[2] * p])
                    .collect())
            };
            let shifted = |s: &ParamSurface, k: &[[f64; 3]], h: f64| ParamSurface {
                pts: s
                    .pts
                    .iter()
                    .zip(k)
                    .map(|(p, v)| [p[0] + h * v[0], p[1] + h * v[1], p[2] + h * v[2]])
                    .collect(),
                ..s.clone()
            };
            let mut cur = f0.clone();
            for _ in 0..n {
                let k1 = vel(&cur)?;
                let k2 = vel(&shifted(&cur, &k1, 0.5 * dt))?;
                let k3 = vel(&shifted(&cur, &k2, 0.5 * dt))?;
                let k4 = vel(&shifted(&cur, &k3, dt))?;
                for (i, p) in cur.pts.iter_mut().enumerate() {
                    for c in 0..3 {
                        p[c] += dt / 6.0 * (k1[i][c] + 2.0 * k2[i][c] + 2.0 * k3[i][c] + k4[i][c]);
                    }
                }
                check_finite(&cur.pts)?;
            }
            Ok(cur)
        }
    }
}

fn check_finite(pts: &[[f64; 3]]) -> Result<()> {
    if pts.iter().flatten().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::Convergence("flow produced non-finite points".into()))
    }
}

#[derive(Clone, Debug)]
pub struct FlowFamily {
    pub model: MetricModel,
    pub f0: GraphSurface,
    pub generator: Generator,
    pub mode: TransportMode,
    pub times: Vec<f64>,
    pub surfaces: Vec<ParamSurface>,
}

pub fn flow_integrate(
    f0: &GraphSurface,
    gen: &Generator,
    mode: TransportMode,
    times: &[f64],
) -> Result<FlowFamily> {
    let p0 = f0.param();
    let surfaces = times
        .par_iter()
        .map(|&t| flow_surface(&p0, gen, mode, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(FlowFamily {
        model: f0.model.clone(),
        f0: f0.clone(),
        generator: gen.clone(),
        mode,
        times: times.to_vec(),
        surfaces,
    })
}

/// Uniform times 0, T/K, …, T.
pub fn uniform_times(t_end: f64, k: usize) -> Vec<f64> {
    (0..=k).map(|i| t_end * i as f64 / k.max(1) as f64).collect()
}

/// RenA along a family.
#[derive(Clone, Debug, Serialize)]
pub struct RenaPoint {
    pub t: f64,
    pub rena: f64,
    pub fit: Option<RenAFit>,
    /// L(Γ_t) measured in boundary coordinates.
    pub length_h: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RenaCurve {
    pub points: Vec<RenaPoint>,
    /// max RenA − min RenA over the successful points.
    pub spread: f64,
    /// max over t of |free 1/ε coefficient − L(Γ_t)|.
    pub divergence_mismatch: f64,
    /// Largest increase of RenA between consecutive times.
    pub max_increase: f64,
}

pub fn rena_curve(family: &FlowFamily, ladder: Option<&[f64]>) -> RenaCurve {
    let points: Vec<RenaPoint> = family
        .times
        .par_iter()
        .zip(family.surfaces.par_iter())
        .map(|(&t, s)| {
            let length_h = boundary_length_h(&family.model, s);
            let res = match ladder {
                Some(l) => rena_fit(s, l).map(|f| (f.direct, Some(f))),
                None => renormalized_area(s).map(|r| (r, None)),
            };
            match res {
                Ok((rena, fit)) => RenaPoint {
                    t,
                    rena,
                    fit,
                    length_h,
                    error: None,
                },
                Err(e) => RenaPoint {
                    t,
                    rena: f64::NAN,
                    fit: None,
                    length_h,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let ok: Vec<f64> = points.iter().filter(|p| p.error.is_none()).map(|p| p.rena).collect();
    let spread = ok.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - ok.iter().cloned().fold(f64::INFINITY, f64::min);
    let divergence_mismatch = points
        .iter()
        .filter_map(|p| p.fit.as_ref().map(|f| (f.free_inv - p.length_h).abs()))
        .fold(0.0, f64::max);
    let max_increase = points
        .windows(2)
        .map(|w| w[1].rena - w[0].rena)
        .filter(|d| d.is_finite())
        .fold(f64::NEG_INFINITY, f64::max);
    RenaCurve {
        points,
        spread,
        divergence_mismatch,
        max_increase,
    }
}

impl RenaCurve {
    pub fn to_csv(&self) -> String {
        let mut csv = Csv::new(&["t", "rena", "fit_residual", "free_inv", "length_h"]);
        for p in &self.points {
            let (res, inv) = p
                .fit
                .as_ref()
                .map(|f| (f.residual, f.free_inv))
                .unwrap_or((f64::NAN, f64::NAN));
            csv.push(&[p.t, p.rena, res, inv, p.length_h]);
        }
        csv.render()
    }
}

/// Symmetric finite-difference derivative with step halving.
#[derive(Clone, Debug, Serialize)]
pub struct FdDerivative {
    pub steps: Vec<f64>,
    pub estimates: Vec<f64>,
    /// Richardson extrapolation of the two finest estimates.
    pub value: f64,
    /// Observed order from three successive estimates; NaN when the
    /// differences are at rounding level.
    pub order: f64,
}

fn fd_from(steps: Vec<f64>, estimates: Vec<f64>, noise: f64) -> FdDerivative {
    let k = estimates.len();
    let value = (4.0 * estimates[k - 1] - estimates[k - 2]) / 3.0;
    let d1 = (estimates[k - 3] - estimates[k - 2]).abs();
    let d2 = (estimates[k - 2] - estimates[k - 1]).abs();
    let order = if d1 < noise || d2 < noise {
        f64::NAN
    } else {
        (d1 / d2).log2()
    };
    FdDerivative {
        steps,
        estimates,
        value,
        order,
    }
}

/// RenA at 0, ±δ, ±δ/2, ±δ/4 and the first and second FD derivatives.
#[derive(Clone, Debug, Serialize)]
pub struct FdRena {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub first: FdDerivative,
    pub second: FdDerivative,
}

pub fn fd_rena(f0: &GraphSurface, gen: &Generator, mode: TransportMode, delta: f64) -> Result<FdRena> {
    let hs = [delta, delta / 2.0, delta / 4.0];
    let mut times = vec![0.0];
    for h in hs {
        times.push(h);
        times.push(-h);
    }
    let fam = flow_integrate(f0, gen, mode, &times)?;
    let values = fam
        .surfaces
        .par_iter()
        .map(renormalized_area)
        .collect::<Result<Vec<_>>>()?;
    let r0 = values[0];
    let mut d1 = vec![];
    let mut d2 = vec![];
    for (k, h) in hs.iter().enumerate() {
        let (p, m) = (values[1 + 2 * k], values[2 + 2 * k]);
        d1.push((p - m) / (2.0 * h));
        d2.push((p - 2.0 * r0 + m) / (h * h));
    }
    let scale = values.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    Ok(FdRena {
        times,
        values,
        first: fd_from(hs.to_vec(), d1, 1e-11 * scale / delta),
        second: fd_from(hs.to_vec(), d2, 1e-11 * scale / (delta * delta) * 64.0),
    })
}

/// ∫_Γ f(θ, s, κ, u₃, n) dθ_h over the boundary curve of F₀.
fn boundary_integral<F>(f0: &GraphSurface, f: F) -> Result<f64>
where
    F: Fn(usize, f64, f64, [f64; 2]) -> f64,
{
    let e = f0
        .expansion
        .as_ref()
        .ok_or_else(|| Error::Precondition("F₀ has no boundary expansion".into()))?;
    let curve = &f0.curve;
    let model = &f0.model;
    let grid = f0.grid();
    let dth = grid.period / grid.n_theta as f64;
    let mut acc = 0.0;
    for (j, &theta) in e.theta.iter().enumerate() {
        let s = curve.s(theta);
        let h: [f64; 3] = model.h(theta, s);
        let sp = curve.ds(theta);
        let dl = (h[0] + 2.0 * h[1] * sp + h[2] * sp * sp).sqrt();
        acc += f(j, theta, s, curve.unit_normal(model, theta)) * dl * dth;
    }
    Ok(acc)
}

#[derive(Clone, Debug, Serialize)]
pub struct FirstVariation {
    pub fd: FdDerivative,
    /// ∫ φH dA over x ≥ `BULK_CUT`.
    pub bulk: f64,
    /// Size estimate of the omitted part: max|VH| · L/`BULK_CUT`.
    pub bulk_tail_bound: f64,
    /// −3∫ u₃ φ₋₁ dθ_h.
    pub boundary: f64,
    pub formula: f64,
    pub rel_error: f64,
    pub matches: bool,
    /// False when the FD order could not be established.
    pub conclusive: bool,
}

pub fn first_variation_check(
    f0: &GraphSurface,
    gen: &Generator,
    delta: f64,
    rel_tol: f64,
) -> Result<FirstVariation> {
    let fd = fd_rena(f0, gen, TransportMode::Geodesic, delta)?.first;
    let e = f0.expansion.as_ref().ok_or_else(|| Error::Precondition("F₀ has no u₃".into()))?;
    let grid = f0.grid();
    let period = grid.period;
    let boundary = boundary_integral(f0, |j, theta, _, _| {
        -3.0 * e.u3[j] * gen.psi(2.0 * PI * theta / period)
    })?;
    let p0 = f0.param();
    let bulk = general_bulk(&p0, gen)?;
    let bulk_tail_bound = bulk_tail(f0, gen)?;
    let formula = bulk + boundary;
    let scale = formula.abs().max(fd.value.abs());
    let (rel_error, matches) = if scale < 1e-6 {
        (0.0, (fd.value - formula).abs() < 1e-6)
    } else {
        let r = (fd.value - formula).abs() / formula.abs().max(1e-300);
        (r, r <= rel_tol)
    };
    let conclusive = scale < 1e-6 || fd.order >= 2.0 - 0.25;
    Ok(FirstVariation {
        fd,
        bulk,
        bulk_tail_bound,
        boundary,
        formula,
        rel_error,
        matches,
        conclusive,
    })
}

/// x below which ∫φH is not integrated; there V·H is dominated by rounding.
pub const BULK_CUT: f64 = 0.02;

fn general_bulk(p0: &ParamSurface, gen: &Generator) -> Result<f64> {
    // φ H dA = ψ (V H) J̄ / (1/V)².
    surface_integral_above(p0, BULK_CUT, |f, g| {
        let phi = f.p[1].atan2(f.p[0]);
        Ok(gen.psi(phi) * g.h_g * g.jbar / (g.w * g.w * g.w))
    })
}

fn bulk_tail(f0: &GraphSurface, gen: &Generator) -> Result<f64> {
    let grid = f0.grid();
    let res = f0.residual()?;
    let psi_max = (0..grid.n_theta).map(|j| gen.psi(grid.phi(j)).abs()).fold(0.0, f64::max);
    let r_max = res.iter().filter(|r| r.is_finite()).fold(0.0f64, |m, r| m.max(r.abs()));
    let length = crate::renarea::boundary_length_h(&f0.model, &f0.param());
    Ok(psi_max * r_max * length / BULK_CUT)
}

pub const VARIANT_NAMES: [&str; 4] = [
    "intro_V",
    "intro_V2",
    "restated_V",
    "restated_V2",
];

#[derive(Clone, Debug, Serialize)]
pub struct SecondVariation {
    pub fd: FdDerivative,
    /// −∫ V|b|² dA and −∫ V²|b|² dA.
    pub bulk_v1: f64,
    pub bulk_v2: f64,
    /// ∫(−3κu₃ + ¾(tr h₃ + h₃(n,n))) dθ_h.
    pub boundary_intro: f64,
    /// ∫(−κu₃ + tr h₃ + h₃(n,n)) dθ_h.
    pub boundary_restated: f64,
    pub variants: [f64; 4],
    pub rel_errors: [f64; 4],
    pub matches: [bool; 4],
}

impl SecondVariation {
    pub fn selected(&self) -> Option<usize> {
        let hits: Vec<usize> = (0..4).filter(|&k| self.matches[k]).collect();
        if hits.len() == 1 {
            Some(hits[0])
        } else {
            None
        }
    }
}

/// FD second derivative of RenA along the static flow against the four
/// candidate formulas. Variants within `rel_tol` (or within `abs_floor`
/// when both sides are that small) count as matches.
pub fn second_variation_check(
    f0: &GraphSurface,
    delta: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> Result<SecondVariation> {
    let fd = fd_rena(f0, &Generator::Static, TransportMode::Geodesic, delta)?.second;
    let e = f0.expansion.as_ref().ok_or_else(|| Error::Precondition("F₀ has no u₃".into()))?;
    let bd = boundary_data(&f0.model)?;
    let neumann = |theta: f64, s: f64, n: [f64; 2]| {
        let h3 = bd.h3(theta, s);
        let nn = h3[0] * n[0] * n[0] + 2.0 * h3[1] * n[0] * n[1] + h3[2] * n[1] * n[1];
        bd.tr_h3(theta, s) + nn
    };
    let boundary_intro = boundary_integral(f0, |j, t, s, n| {
        -3.0 * e.kappa[j] * e.u3[j] + 0.75 * neumann(t, s, n)
    })?;
    let boundary_restated =
        boundary_integral(f0, |j, t, s, n| -e.kappa[j] * e.u3[j] + neumann(t, s, n))?;
    let p0 = f0.param();
    let bulk = |p: i32| -> Result<f64> {
        surface_integral(&p0, |_, g: &LocalGeometry| {
            // |b|² dA = |B|² J̄ and B is trace-free on a minimal surface.
            Ok(-g.bcirc2 * g.jbar / g.w.powi(p))
        })
    };
    let (bulk_v1, bulk_v2) = (bulk(1)?, bulk(2)?);
    let variants = [
        bulk_v1 + boundary_intro,
        bulk_v2 + boundary_intro,
        bulk_v1 + boundary_restated,
        bulk_v2 + boundary_restated,
    ];
    let mut rel_errors = [0.0; 4];
    let mut matches = [false; 4];
    for k in 0..4 {
        let diff = (fd.value - variants[k]).abs();
        rel_errors[k] = diff / variants[k].abs().max(1e-300);
        matches[k] = diff <= rel_tol * variants[k].abs() || diff <= abs_floor;
    }
    Ok(SecondVariation {
        fd,
        bulk_v1,
        bulk_v2,
        boundary_intro,
        boundary_restated,
        variants,
        rel_errors,
        matches,
    })
}

/// Pointwise evolution and Riccati diagnostics at one flow time.
#[derive(Clone, Debug, Serialize)]
pub struct EvolutionReport {
    pub t: f64,
    pub points: usize,
    /// max |∂ₜH − (−V|b|² + H g(∇V, ν))|.
    pub evolution_residual: f64,
    /// min of −½(H/V)² − (1/V)∂ₜ(H/V).
    pub riccati_margin: f64,
    /// min of −½H²/V − (1/V)∂ₜ(H/V).
    pub riccati_sharp_margin: f64,
    pub max_h: f64,
}

/// Evaluates both laws at time t0 along the renormalized static flow, on
/// interior nodes with x ≥ `x_cut`, with a five-point stencil of step `h`.
pub fn evolution_check(f0: &GraphSurface, t0: f64, h: f64, x_cut: f64) -> Result<EvolutionReport> {
    let times: Vec<f64> = (-2..=2).map(|k| t0 + k as f64 * h).collect();
    let fam = flow_integrate(f0, &Generator::Static, TransportMode::Renormalized, &times)?;
    let geo = fam
        .surfaces
        .par_iter()
        .map(|s| s.node_geometry())
        .collect::<Result<Vec<_>>>()?;
    let nt = f0.grid().n_theta;
    let stencil = |f: &dyn Fn(&LocalGeometry) -> f64, n: usize| {
        (-f(&geo[4][n]) + 8.0 * f(&geo[3][n]) - 8.0 * f(&geo[1][n]) + f(&geo[0][n])) / (12.0 * h)
    };
    let mut rep = EvolutionReport {
        t: t0,
        points: 0,
        evolution_residual: 0.0,
        riccati_margin: f64::INFINITY,
        riccati_sharp_margin: f64::INFINITY,
        max_h: 0.0,
    };
    for n in nt..geo[2].len() {
        let g = &geo[2][n];
        if g.x < x_cut {
            continue;
        }
        let dh = stencil(&|g: &LocalGeometry| g.h_g, n);
        let predicted = -g.w * g.big_b2 - g.h_g * g.nu_w / g.w;
        rep.evolution_residual = rep.evolution_residual.max((dh - predicted).abs());
        let dq = stencil(&|g: &LocalGeometry| g.w * g.h_g, n);
        let q = g.w * g.h_g;
        rep.riccati_margin = rep.riccati_margin.min(-0.5 * q * q - g.w * dq);
        rep.riccati_sharp_margin = rep
            .riccati_sharp_margin
            .min(-0.5 * g.w * g.h_g * g.h_g - g.w * dq);
        rep.max_h = rep.max_h.max(g.h_g.abs());
        rep.points += 1;
    }
    if rep.points == 0 {
        return Err(Error::Resolution(format!("no nodes with x ≥ {x_cut}")));
    }
    Ok(rep)
}

/// Max distance between the two transport modes at time t.
pub fn transport_mode_gap(f0: &GraphSurface, t: f64) -> Result<f64> {
    let p0 = f0.param();
    let a = flow_surface(&p0, &Generator::Static, TransportMode::Geodesic, t)?;
    let b = flow_surface(&p0, &Generator::Static, TransportMode::Renormalized, t)?;
    Ok(a
        .pts
        .iter()
        .zip(&b.pts)
        .map(|(p, q)| (0..3).map(|c| (p[c] - q[c]).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max))
}

pub fn variation_csv(first: &FirstVariation, second: &SecondVariation) -> String {
    let mut csv = Csv::new(&["quantity", "value"]);
    let rows: Vec<(&str, f64)> = vec![
        ("fd_first", first.fd.value),
        ("fd_first_order", first.fd.order),
        ("bulk_phi_h", first.bulk),
        ("boundary_u3", first.boundary),
        ("formula_first", first.formula),
        ("fd_second", second.fd.value),
        ("fd_second_order", second.fd.order),
        ("bulk_v_b2", second.bulk_v1),
        ("bulk_v2_b2", second.bulk_v2),
        ("boundary_intro", second.boundary_intro),
        ("boundary_restated", second.boundary_restated),
        (VARIANT_NAMES[0], second.variants[0]),
        (VARIANT_NAMES[1], second.variants[1]),
        (VARIANT_NAMES[2], second.variants[2]),
        (VARIANT_NAMES[3], second.variants[3]),
    ];
    for (k, v) in rows {
        csv.push_raw(vec![k.to_string(), fmt12(v)]);
    }
    csv.render()
}

pub fn rena_plot(csv_name: &str) -> String {
    plot_script(csv_name, "RenA(t)", 1, &[(2, "RenA")])
}
