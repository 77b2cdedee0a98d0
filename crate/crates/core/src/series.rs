//! Truncated power series in x with boundary-field coefficients, and
//! numerical extraction of the near-boundary expansions.

use crate::autodiff::pack;
use crate::error::{Error, Result};
use crate::field::{trace_with, PeriodicGrid, TensorField2};
use crate::geometry::{christoffel_from_jet, metric_jet, Geometry3, Scheme, Which};
use crate::models::{boundary_data, BoundaryData, MetricModel, ModelKind};
use crate::quadrature::fit_powers;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt::Write as _;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    Scalar,
    /// Packed symmetric 3×3 components `[xx, xθ, xs, θθ, θs, ss]`.
    Tensor,
}

impl SeriesKind {
    pub fn width(self) -> usize {
        match self {
            SeriesKind::Scalar => 1,
            SeriesKind::Tensor => 6,
        }
    }
}

/// Σ_k c_k x^k, k ≤ order, with each c_k a field over `npts` boundary points.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    pub order: usize,
    pub kind: SeriesKind,
    pub npts: usize,
    /// `coeffs[k][p * width + c]`.
    pub coeffs: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SeriesOp {
    Add,
    Mul,
    Invert,
    Power(f64),
    Compose,
}

impl PowerSeries {
    pub fn scalar(coeffs: &[f64]) -> Self {
        Self {
            order: coeffs.len().saturating_sub(1),
            kind: SeriesKind::Scalar,
            npts: 1,
            coeffs: coeffs.iter().map(|c| vec![*c]).collect(),
        }
    }

    pub fn zeros(order: usize, kind: SeriesKind, npts: usize) -> Self {
        Self {
            order,
            kind,
            npts,
            coeffs: vec![vec![0.0; npts * kind.width()]; order + 1],
        }
    }

    /// Coefficient k at point p, component c.
    pub fn get(&self, k: usize, p: usize, c: usize) -> f64 {
        self.coeffs[k][p * self.kind.width() + c]
    }

    /// Scalar coefficients at point 0.
    pub fn values(&self) -> Vec<f64> {
        (0..=self.order).map(|k| self.get(k, 0, 0)).collect()
    }

    /// Index of the first coefficient that is not identically zero.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| c.iter().any(|v| *v != 0.0))
            .unwrap_or(self.order + 1)
    }

    fn point_scalar(&self, p: usize) -> Vec<f64> {
        (0..=self.order).map(|k| self.get(k, p, 0)).collect()
    }

    fn from_points(order: usize, kind: SeriesKind, per_point: Vec<Vec<Vec<f64>>>) -> Self {
        let npts = per_point.len();
        let w = kind.width();
        let mut s = Self::zeros(order, kind, npts);
        for (p, comps) in per_point.iter().enumerate() {
            for (c, series) in comps.iter().enumerate() {
                for k in 0..=order {
                    s.coeffs[k][p * w + c] = series[k];
                }
            }
        }
        s
    }

    pub fn max_abs_diff(&self, other: &Self, k: usize) -> f64 {
        self.coeffs[k]
            .iter()
            .zip(&other.coeffs[k])
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn mul_1d(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    (0..=order)
        .map(|n| (0..=n).map(|k| a[k] * b[n - k]).sum())
        .collect()
}

fn invert_1d(a: &[f64]) -> Result<Vec<f64>> {
    if a[0].abs() < 1e-300 {
        return Err(Error::Series("leading coefficient vanishes".into()));
    }
    let mut b = vec![0.0; a.len()];
    b[0] = 1.0 / a[0];
    for n in 1..a.len() {
        let s: f64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
        b[n] = -s / a[0];
    }
    Ok(b)
}

fn power_1d(a: &[f64], q: f64) -> Result<Vec<f64>> {
    if a[0].abs() < 1e-300 {
        return Err(Error::Series("leading coefficient vanishes".into()));
    }
    if a[0] < 0.0 && q.fract() != 0.0 {
        return Err(Error::Series("non-integer power of a negative leading term".into()));
    }
    let mut b = vec![0.0; a.len()];
    b[0] = a[0].powf(q);
    for n in 1..a.len() {
        let s: f64 = (1..=n)
            .map(|k| ((q + 1.0) * k as f64 - n as f64) * a[k] * b[n - k])
            .sum();
        b[n] = s / (n as f64 * a[0]);
    }
    Ok(b)
}

fn compose_1d(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    let mut acc = vec![0.0; order + 1];
    for k in (0..a.len()).rev() {
        acc = mul_1d(&acc, b, order);
        acc[0] += a[k];
    }
    acc
}

/// Truncated arithmetic. `b` is ignored for `Invert` and `Power`.
pub fn series_arith(a: &PowerSeries, b: Option<&PowerSeries>, op: SeriesOp) -> Result<PowerSeries> {
    let need_b = || b.ok_or_else(|| Error::Series("second operand required".into()));
    match op {
        SeriesOp::Add => {
            let b = need_b()?;
            if a.kind != b.kind || a.npts != b.npts {
                return Err(Error::Series("incompatible operands for add".into()));
            }
            let order = a.order.min(b.order);
            let coeffs = (0..=order)
                .map(|k| a.coeffs[k].iter().zip(&b.coeffs[k]).map(|(x, y)| x + y).collect())
                .collect();
            Ok(PowerSeries {
                order,
                kind: a.kind,
                npts: a.npts,
                coeffs,
            })
        }
        SeriesOp::Mul => {
            let b = need_b()?;
            let (s, t) = match (a.kind, b.kind) {
                (SeriesKind::Tensor, SeriesKind::Tensor) => {
                    return Err(Error::Series("tensor series combine only with scalars".into()))
                }
                (SeriesKind::Tensor, SeriesKind::Scalar) => (b, a),
                _ => (a, b),
            };
            if s.npts != t.npts && s.npts != 1 {
                return Err(Error::Series("point counts differ".into()));
            }
            let order = (a.order + b.valuation()).min(b.order + a.valuation());
            let order = order.min(a.order.max(b.order));
            let w = t.kind.width();
            let per_point = (0..t.npts)
                .map(|p| {
                    let sp = s.point_scalar(if s.npts == 1 { 0 } else { p });
                    (0..w)
                        .map(|c| {
                            let tp: Vec<f64> = (0..=t.order).map(|k| t.get(k, p, c)).collect();
                            let mut sa = sp.clone();
                            sa.resize(order + 1, 0.0);
                            let mut ta = tp;
                            ta.resize(order + 1, 0.0);
                            mul_1d(&sa, &ta, order)
                        })
                        .collect()
                })
                .collect();
            Ok(PowerSeries::from_points(order, t.kind, per_point))
        }
        SeriesOp::Invert | SeriesOp::Power(_) => {
            if a.kind != SeriesKind::Scalar {
                return Err(Error::Series("invert/power need a scalar series".into()));
            }
            let per_point = (0..a.npts)
                .map(|p| {
                    let sp = a.point_scalar(p);
                    let r = match op {
                        SeriesOp::Invert => invert_1d(&sp),
                        SeriesOp::Power(q) => power_1d(&sp, q),
                        _ => unreachable!(),
                    };
                    r.map(|v| vec![v])
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PowerSeries::from_points(a.order, a.kind, per_point))
        }
        SeriesOp::Compose => {
            let b = need_b()?;
            if a.kind != SeriesKind::Scalar || b.kind != SeriesKind::Scalar {
                return Err(Error::Series("compose needs scalar series".into()));
            }
            if b.coeffs[0].iter().any(|v| *v != 0.0) {
                return Err(Error::Series("inner series must vanish at x = 0".into()));
            }
            let order = a.order.min(b.order);
            let npts = a.npts.max(b.npts);
            let per_point = (0..npts)
                .map(|p| {
                    let ap = a.point_scalar(if a.npts == 1 { 0 } else { p });
                    let bp = b.point_scalar(if b.npts == 1 { 0 } else { p });
                    vec![compose_1d(&ap, &bp, order)]
                })
                .collect();
            Ok(PowerSeries::from_points(order, SeriesKind::Scalar, per_point))
        }
    }
}

/// Halving ladder x_k = x0·2^{-k}, k = 0..=levels.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderSpec {
    pub x0: f64,
    pub levels: usize,
}

impl Default for LadderSpec {
    fn default() -> Self {
        Self { x0: 0.1, levels: 6 }
    }
}

impl LadderSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..=self.levels).map(|k| self.x0 * 0.5f64.powi(k as i32)).collect()
    }
}

/// Coefficients of f(x) − f(0) = Σ_{k≥1} c_k x^k from samples on a ladder.
#[derive(Clone, Debug)]
pub struct OffsetFit {
    /// c_1, c_2, …
    pub coeffs: Vec<f64>,
    /// |c_k(full) − c_k(one order fewer)|.
    pub errors: Vec<f64>,
    /// Rows: coefficient estimates with increasing fit order.
    pub table: Vec<Vec<f64>>,
}

pub fn fit_offsets(xs: &[f64], ys: &[f64]) -> Result<OffsetFit> {
    let m = xs.len();
    if m < 4 {
        return Err(Error::Extraction {
            msg: "ladder needs at least four points".into(),
            table: vec![],
        });
    }
    let mut table = Vec::new();
    for top in 3..=m {
        let powers: Vec<i32> = (1..=top as i32).collect();
        let (c, _) = fit_powers(xs, ys, &powers).ok_or_else(|| Error::Extraction {
            msg: "singular ladder system".into(),
            table: table.clone(),
        })?;
        table.push(c);
    }
    let full = table.last().unwrap().clone();
    let prev = &table[table.len() - 2];
    let errors = (0..full.len())
        .map(|k| if k < prev.len() { (full[k] - prev[k]).abs() } else { f64::NAN })
        .collect();
    Ok(OffsetFit {
        coeffs: full,
        errors,
        table,
    })
}

fn check_convergence(fit: &OffsetFit, upto: usize, scale: f64) -> Result<()> {
    for k in 0..upto.min(fit.errors.len()) {
        let e = fit.errors[k];
        let tol = if k < 3 { 1e-5 } else { 1e-3 };
        if !e.is_finite() || e > tol * scale.max(1.0) {
            return Err(Error::Extraction {
                msg: format!("coefficient of order {} not converged (change {e:.3e})", k + 1),
                table: fit.table.clone(),
            });
        }
    }
    Ok(())
}

/// Boundary points at which expansions are sampled.
pub fn sample_points(model: &MetricModel, n_theta: usize, n_s: usize) -> Vec<(f64, f64)> {
    match &model.kind {
        ModelKind::Hyperbolic3 { anchor } => {
            let mut pts = Vec::new();
            for j in 0..n_theta {
                for k in 0..n_s {
                    let th = 2.0 * PI * j as f64 / n_theta as f64;
                    let s = -anchor + PI * (k as f64 + 0.5) / n_s as f64;
                    pts.push((th, s));
                }
            }
            pts
        }
        _ => {
            let grid = PeriodicGrid::new(
                n_theta,
                n_s,
                model.theta_period(),
                model.s_period().unwrap_or(1.0),
            );
            grid.points()
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExpansionReport {
    pub points: Vec<(f64, f64)>,
    pub measured: PowerSeries,
    pub predicted: PowerSeries,
    pub errors: PowerSeries,
    /// Max-norm discrepancy per order.
    pub discrepancy: Vec<f64>,
}

/// Numerical 1/V series alongside (0, 1, 0, −R_h/8, tr h₃/2).
pub fn potential_expansion(
    model: &MetricModel,
    order: usize,
    ladder: &LadderSpec,
    points: &[(f64, f64)],
) -> Result<ExpansionReport> {
    let data = boundary_data(model)?;
    let xs = ladder.points();
    let fits = points
        .par_iter()
        .map(|&(t, s)| {
            let ys: Vec<f64> = xs.iter().map(|&x| model.inv_v_offset([x, t, s]) + x).collect();
            let fit = fit_offsets(&xs, &ys)?;
            check_convergence(&fit, order.min(4), 1.0)?;
            Ok(fit)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut measured = PowerSeries::zeros(order, SeriesKind::Scalar, n);
    let mut errors = PowerSeries::zeros(order, SeriesKind::Scalar, n);
    let mut predicted = PowerSeries::zeros(order, SeriesKind::Scalar, n);
    for (p, fit) in fits.iter().enumerate() {
        for k in 1..=order {
            measured.coeffs[k][p] = fit.coeffs.get(k - 1).copied().unwrap_or(f64::NAN);
            errors.coeffs[k][p] = fit.errors.get(k - 1).copied().unwrap_or(f64::NAN);
        }
        let (t, s) = points[p];
        let pred = [0.0, 1.0, 0.0, -data.r_h(t, s) / 8.0, data.tr_h3(t, s) / 2.0];
        for k in 0..=order.min(4) {
            predicted.coeffs[k][p] = pred[k];
        }
    }
    let discrepancy = (0..=order.min(4))
        .map(|k| measured.max_abs_diff(&predicted, k))
        .collect();
    Ok(ExpansionReport {
        points: points.to_vec(),
        measured,
        predicted,
        errors,
        discrepancy,
    })
}

/// Predicted ḡ coefficients up to order 3 at a boundary point.
pub fn predicted_metric_coefficients(data: &BoundaryData, t: f64, s: f64) -> [[f64; 6]; 4] {
    let h = data.h(t, s);
    let h3 = data.h3(t, s);
    let r = data.r_h(t, s);
    let tr = trace_with(h, h3);
    [
        [1.0, 0.0, 0.0, h[0], h[1], h[2]],
        [0.0; 6],
        [-r / 4.0, 0.0, 0.0, -r / 2.0 * h[0], -r / 2.0 * h[1], -r / 2.0 * h[2]],
        [tr, 0.0, 0.0, h3[0] + tr * h[0], h3[1] + tr * h[1], h3[2] + tr * h[2]],
    ]
}

/// Numerical ḡ series alongside the closed form through order 3.
pub fn conformal_metric_expansion(
    model: &MetricModel,
    order: usize,
    ladder: &LadderSpec,
    points: &[(f64, f64)],
) -> Result<ExpansionReport> {
    let data = boundary_data(model)?;
    let xs = ladder.points();
    let rows = points
        .par_iter()
        .map(|&(t, s)| {
            let base: [f64; 6] = model.gbar([0.0, t, s]);
            let samples: Vec<[f64; 6]> = xs.iter().map(|&x| model.gbar_offset([x, t, s])).collect();
            let mut comps = Vec::with_capacity(6);
            for c in 0..6 {
                let ys: Vec<f64> = samples.iter().map(|v| v[c]).collect();
                let fit = fit_offsets(&xs, &ys)?;
                check_convergence(&fit, order.min(3), 1.0)?;
                comps.push((base[c], fit));
            }
            Ok(comps)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut measured = PowerSeries::zeros(order, SeriesKind::Tensor, n);
    let mut errors = PowerSeries::zeros(order, SeriesKind::Tensor, n);
    let mut predicted = PowerSeries::zeros(order, SeriesKind::Tensor, n);
    for (p, comps) in rows.iter().enumerate() {
        let (t, s) = points[p];
        let pred = predicted_metric_coefficients(&data, t, s);
        for (c, (b, fit)) in comps.iter().enumerate() {
            measured.coeffs[0][p * 6 + c] = *b;
            for k in 1..=order {
                measured.coeffs[k][p * 6 + c] = fit.coeffs.get(k - 1).copied().unwrap_or(f64::NAN);
                errors.coeffs[k][p * 6 + c] = fit.errors.get(k - 1).copied().unwrap_or(f64::NAN);
            }
            for k in 0..=order.min(3) {
                predicted.coeffs[k][p * 6 + c] = pred[k][c];
            }
        }
    }
    let discrepancy = (0..=order.min(3))
        .map(|k| measured.max_abs_diff(&predicted, k))
        .collect();
    Ok(ExpansionReport {
        points: points.to_vec(),
        measured,
        predicted,
        errors,
        discrepancy,
    })
}

/// Tangential block samples (θθ, θs, ss offsets from h) on a ladder.
#[derive(Clone, Debug)]
pub struct TangentialSamples {
    pub xs: Vec<f64>,
    /// ḡ_tan(x) − ḡ_tan(0).
    pub offsets: Vec<[f64; 3]>,
}

impl TangentialSamples {
    pub fn from_model(model: &MetricModel, t: f64, s: f64, ladder: &LadderSpec) -> Self {
        let xs = ladder.points();
        let offsets = xs
            .iter()
            .map(|&x| {
                let o = model.gbar_offset([x, t, s]);
                [o[3], o[4], o[5]]
            })
            .collect();
        Self { xs, offsets }
    }
}

#[derive(Clone, Debug)]
pub struct NeumannEstimate {
    pub h3: [f64; 3],
    pub tr_h3: f64,
    /// x³ coefficient of ḡ_tan, i.e. h₃ + (tr h₃) h.
    pub cubic: [f64; 3],
    pub error: f64,
    pub table: Vec<Vec<f64>>,
}

/// h₃ from the x³ coefficient T of ḡ_tan: tr h₃ = tr_h T / 3, h₃ = T − (tr h₃) h.
pub fn extract_neumann(samples: &TangentialSamples, h: [f64; 3], r_h: f64) -> Result<NeumannEstimate> {
    let mut cubic = [0.0; 3];
    let mut error = 0.0f64;
    let mut table = Vec::new();
    for c in 0..3 {
        let ys: Vec<f64> = samples
            .xs
            .iter()
            .zip(&samples.offsets)
            .map(|(x, o)| o[c] + r_h / 2.0 * x * x * h[c])
            .collect();
        let fit = fit_offsets(&samples.xs, &ys)?;
        check_convergence(&fit, 3, 1.0)?;
        cubic[c] = fit.coeffs[2];
        error = error.max(fit.errors[2]);
        table.push(fit.table.iter().map(|row| row[2]).collect());
    }
    let tr = trace_with(h, cubic) / 3.0;
    let h3 = [cubic[0] - tr * h[0], cubic[1] - tr * h[1], cubic[2] - tr * h[2]];
    Ok(NeumannEstimate {
        h3,
        tr_h3: tr,
        cubic,
        error,
        table,
    })
}

/// Extracted Neumann data over a periodic grid.
pub fn extract_neumann_field(
    model: &MetricModel,
    grid: PeriodicGrid,
    ladder: &LadderSpec,
) -> Result<TensorField2> {
    let vals = grid
        .points()
        .par_iter()
        .map(|&(t, s)| {
            let samples = TangentialSamples::from_model(model, t, s, ladder);
            let h: [f64; 3] = model.h(t, s);
            let r = model.collar().map(|c| c.r_h.eval(t, s)).unwrap_or(0.0);
            extract_neumann(&samples, h, r).map(|e| e.h3)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TensorField2::from_fn_values(grid, vals))
}

/// Mean curvature of the level set {x = ε} in g with the increasing-x normal.
pub fn levelset_mean_curvature<G: Geometry3>(geo: &G, p: [f64; 3], scheme: Scheme) -> Result<f64> {
    let jet = metric_jet(geo, p, Which::Physical, false, scheme)?;
    let gam = christoffel_from_jet(&jet.g, &jet.dg);
    let gi = jet.g.try_inverse().ok_or_else(|| Error::Model("singular metric".into()))?;
    let norm = gi[(0, 0)].sqrt();
    let g = &jet.g;
    let det = g[(1, 1)] * g[(2, 2)] - g[(1, 2)] * g[(1, 2)];
    let inv = [g[(2, 2)] / det, -g[(1, 2)] / det, g[(1, 1)] / det];
    let b = |i: usize, j: usize| -gam[0][i][j] / norm;
    Ok(inv[0] * b(1, 1) + 2.0 * inv[1] * b(1, 2) + inv[2] * b(2, 2))
}

#[derive(Clone, Debug)]
pub struct LevelSetReport {
    pub points: Vec<(f64, f64)>,
    /// Fitted (c0, c1, c2, c3) per point.
    pub measured: PowerSeries,
    pub predicted: PowerSeries,
    pub max_residual: f64,
    pub discrepancy: Vec<f64>,
}

/// Fit H(Σ_ε) on a ladder to a polynomial in ε and compare with
/// (−2, 0, −R_h/2, (3/2) tr h₃).
pub fn levelset_h_series(
    model: &MetricModel,
    ladder: &LadderSpec,
    points: &[(f64, f64)],
    scheme: Scheme,
) -> Result<LevelSetReport> {
    let data = boundary_data(model)?;
    let xs = ladder.points();
    let top = xs.len() as i32 - 1;
    let powers: Vec<i32> = (0..=top).collect();
    let fits = points
        .par_iter()
        .map(|&(t, s)| {
            let hs = xs
                .iter()
                .map(|&x| levelset_mean_curvature(model, [x, t, s], scheme))
                .collect::<Result<Vec<_>>>()?;
            fit_powers(&xs, &hs, &powers).ok_or_else(|| Error::Fit("level-set fit failed".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = points.len();
    let mut measured = PowerSeries::zeros(3, SeriesKind::Scalar, n);
    let mut predicted = PowerSeries::zeros(3, SeriesKind::Scalar, n);
    let mut max_residual = 0.0f64;
    for (p, (c, r)) in fits.iter().enumerate() {
        let (t, s) = points[p];
        let pred = [-2.0, 0.0, -data.r_h(t, s) / 2.0, 1.5 * data.tr_h3(t, s)];
        for k in 0..4 {
            measured.coeffs[k][p] = c[k];
            predicted.coeffs[k][p] = pred[k];
        }
        max_residual = max_residual.max(*r);
    }
    if max_residual > 1e-8 {
        return Err(Error::Fit(format!("level-set fit residual {max_residual:.3e}")));
    }
    let discrepancy = (0..4).map(|k| measured.max_abs_diff(&predicted, k)).collect();
    Ok(LevelSetReport {
        points: points.to_vec(),
        measured,
        predicted,
        max_residual,
        discrepancy,
    })
}

/// Ric(x∂x, x∂x) in g at p.
pub fn normal_ricci<G: Geometry3>(geo: &G, p: [f64; 3]) -> Result<f64> {
    let c = crate::geometry::curvature(geo, p, Which::Physical, Scheme::Exact)?;
    Ok(p[0] * p[0] * c.ricci[(0, 0)])
}

/// CSV rows: order, θ, s, component, value, error-estimate.
pub fn series_csv(series: &PowerSeries, errors: Option<&PowerSeries>, points: &[(f64, f64)]) -> String {
    let mut out = String::from("order,theta,s,component,value,error_estimate\n");
    let names = match series.kind {
        SeriesKind::Scalar => vec!["scalar"],
        SeriesKind::Tensor => vec!["xx", "xtheta", "xs", "thetatheta", "thetas", "ss"],
    };
    for k in 0..=series.order {
        for (p, (t, s)) in points.iter().enumerate() {
            for (c, name) in names.iter().enumerate() {
                let e = errors.map(|e| e.get(k, p, c)).unwrap_or(0.0);
                let _ = writeln!(
                    out,
                    "{k},{},{},{name},{},{}",
                    crate::io::fmt12(*t),
                    crate::io::fmt12(*s),
                    crate::io::fmt12(series.get(k, p, c)),
                    crate::io::fmt12(e)
                );
            }
        }
    }
    out
}

/// Wang mass ∫ μ dv_h from boundary data (quadrature for formal models).
pub fn wang_mass(data: &BoundaryData) -> f64 {
    data.mass
}

/// ḡ components of a model as packed values, convenience for tables.
pub fn packed_metric<G: Geometry3>(geo: &G, p: [f64; 3]) -> [f64; 6] {
    pack(&crate::autodiff::unpack(&geo.gbar(p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_inverse() {
        let a = PowerSeries::scalar(&[1.0, 0.0, 0.0, 1.0 / 3.0, 0.0]);
        let b = series_arith(&a, None, SeriesOp::Invert).unwrap();
        let v = b.values();
        assert!((v[3] + 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(v[4], 0.0);
    }

    #[test]
    fn compose_inner_must_vanish() {
        let a = PowerSeries::scalar(&[1.0, 1.0]);
        let b = PowerSeries::scalar(&[1.0, 1.0]);
        assert!(series_arith(&a, Some(&b), SeriesOp::Compose).is_err());
    }
}
