//! Concrete backgrounds: hyperbolic space, the Horowitz–Myers soliton and
//! formal collars built from prescribed boundary data.

use crate::autodiff::Real;
use crate::error::{Error, Result};
use crate::field::{trace_with, PeriodicGrid, TensorField2, TrigField2};
use crate::geometry::{self, ChartPoint, Geometry3, MetricTensor, Scheme, Which};
use std::f64::consts::PI;
use std::sync::Arc;

pub const DEFAULT_HM_THETA_PERIOD: f64 = 4.0 * PI / 3.0;

/// Boundary data and bulk coefficients of a formal collar.
#[derive(Clone, Debug)]
pub struct FormalCollar {
    pub h: TensorField2,
    pub h3: TensorField2,
    pub r_h: TrigField2,
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    /// Hyperbolic space; boundary chart h = ds² + sin²(anchor + s) dθ².
    Hyperbolic3 { anchor: f64 },
    HorowitzMyers { theta_period: f64, s_period: f64 },
    /// h = f(θ)² dθ² + ds² with a formal bulk.
    WarpedTorus { f: TrigField2, collar: Arc<FormalCollar> },
    PrescribedFg { collar: Arc<FormalCollar> },
}

#[derive(Clone, Debug)]
pub struct MetricModel {
    pub kind: ModelKind,
}

pub fn hyperbolic3() -> MetricModel {
    hyperbolic3_anchored(PI / 2.0)
}

/// Hyperbolic space in the chart adapted to the latitude circle at polar angle `anchor`.
pub fn hyperbolic3_anchored(anchor: f64) -> MetricModel {
    MetricModel {
        kind: ModelKind::Hyperbolic3 { anchor },
    }
}

pub fn horowitz_myers(theta_period: f64, s_period: f64) -> Result<MetricModel> {
    if !(theta_period > 0.0 && s_period > 0.0) {
        return Err(Error::Config("periods must be positive".into()));
    }
    Ok(MetricModel {
        kind: ModelKind::HorowitzMyers {
            theta_period,
            s_period,
        },
    })
}

pub fn warped_torus(f: TrigField2, h3: TensorField2) -> Result<MetricModel> {
    if f.values.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::Config("warping function must be positive".into()));
    }
    let grid = h3.grid();
    let ff = f.clone();
    let h = TensorField2::from_fn(grid, move |t, s| {
        let v = ff.eval(t, s);
        [v * v, 0.0, 1.0]
    });
    let r_h = TrigField2::constant(grid, 0.0);
    Ok(MetricModel {
        kind: ModelKind::WarpedTorus {
            f,
            collar: Arc::new(FormalCollar { h, h3, r_h }),
        },
    })
}

pub fn prescribed_fg(h: TensorField2, h3: TensorField2) -> Result<MetricModel> {
    let grid = h.grid();
    for (t, s) in grid.points() {
        let c = h.eval(t, s);
        if !(c[0] > 0.0 && c[0] * c[2] - c[1] * c[1] > 0.0) {
            return Err(Error::Model(format!(
                "boundary metric not positive definite at ({t}, {s})"
            )));
        }
    }
    let r_h = boundary_scalar_curvature(&h);
    Ok(MetricModel {
        kind: ModelKind::PrescribedFg {
            collar: Arc::new(FormalCollar { h, h3, r_h }),
        },
    })
}

/// Product metric dx² + h, used to read off the scalar curvature of h.
struct Product<'a>(&'a TensorField2);

impl Geometry3 for Product<'_> {
    fn gbar<D: Real>(&self, p: [D; 3]) -> [D; 6] {
        let c = self.0.eval(p[1], p[2]);
        let z = D::from(0.0);
        [D::from(1.0), z, z, c[0], c[1], c[2]]
    }
    fn inv_v<D: Real>(&self, _p: [D; 3]) -> D {
        D::from(1.0)
    }
    fn bdf(&self, _p: [f64; 3]) -> f64 {
        1.0
    }
}

fn boundary_scalar_curvature(h: &TensorField2) -> TrigField2 {
    let grid = h.grid();
    let prod = Product(h);
    TrigField2::from_fn(grid, |t, s| {
        geometry::curvature(&prod, [0.0, t, s], Which::Compactified, Scheme::Exact)
            .map(|c| c.scalar)
            .unwrap_or(f64::NAN)
    })
}

impl MetricModel {
    pub fn name(&self) -> &'static str {
        match self.kind {
            ModelKind::Hyperbolic3 { .. } => "hyperbolic3",
            ModelKind::HorowitzMyers { .. } => "horowitz_myers",
            ModelKind::WarpedTorus { .. } => "warped_torus",
            ModelKind::PrescribedFg { .. } => "prescribed_fg",
        }
    }

    pub fn theta_period(&self) -> f64 {
        match &self.kind {
            ModelKind::Hyperbolic3 { .. } => 2.0 * PI,
            ModelKind::HorowitzMyers { theta_period, .. } => *theta_period,
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                collar.h.grid().theta_period
            }
        }
    }

    /// Period of s when the boundary is a torus.
    pub fn s_period(&self) -> Option<f64> {
        match &self.kind {
            ModelKind::Hyperbolic3 { .. } => None,
            ModelKind::HorowitzMyers { s_period, .. } => Some(*s_period),
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                Some(collar.h.grid().s_period)
            }
        }
    }

    pub fn is_torus(&self) -> bool {
        self.s_period().is_some()
    }

    /// Series-backed models carry a truncated bulk.
    pub fn truncation_order(&self) -> Option<usize> {
        match self.kind {
            ModelKind::WarpedTorus { .. } | ModelKind::PrescribedFg { .. } => Some(3),
            _ => None,
        }
    }

    pub fn collar(&self) -> Option<&FormalCollar> {
        match &self.kind {
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                Some(collar)
            }
            _ => None,
        }
    }

    /// Tip of the Horowitz–Myers cigar in the x coordinate.
    pub fn x_tip(&self) -> Option<f64> {
        match self.kind {
            ModelKind::HorowitzMyers { .. } => Some(4f64.powf(1.0 / 3.0)),
            ModelKind::Hyperbolic3 { .. } => Some(2.0),
            _ => None,
        }
    }

    /// Dirichlet metric (θθ, θs, ss).
    pub fn h<D: Real>(&self, theta: D, s: D) -> [D; 3] {
        let z = D::from(0.0);
        match &self.kind {
            ModelKind::Hyperbolic3 { anchor } => {
                let sn = (s + *anchor).sin();
                [sn * sn, z, D::from(1.0)]
            }
            ModelKind::HorowitzMyers { .. } => [D::from(1.0), z, D::from(1.0)],
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                collar.h.eval(theta, s)
            }
        }
    }

    pub fn metric<D: Real>(&self, p: [D; 3], which: Which) -> [D; 6] {
        geometry::components(self, p, which)
    }

    /// ḡ(x, θ, s) − ḡ(0, θ, s), evaluated without cancellation.
    pub fn gbar_offset(&self, p: [f64; 3]) -> [f64; 6] {
        let [x, theta, s] = p;
        match &self.kind {
            ModelKind::Hyperbolic3 { anchor } => {
                let a = 1.0 + x * x / 4.0;
                let sn = (s + anchor).sin();
                let xx = -(x * x / 2.0 + x.powi(4) / 16.0) / (a * a);
                let tan = -x * x / (a * a);
                [xx, 0.0, 0.0, tan * sn * sn, 0.0, tan]
            }
            ModelKind::HorowitzMyers { .. } => {
                let y = x.powi(3) / 4.0;
                let xx = (-4.0 / 3.0 * y.ln_1p()).exp_m1();
                let tt = -4.0 * y / ((1.0 + y) * (1.0 + y));
                [xx, 0.0, 0.0, tt, 0.0, 0.0]
            }
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                let full = formal_gbar(collar, [x, theta, s]);
                let base = collar.h.eval(theta, s);
                [
                    full[0] - 1.0,
                    full[1],
                    full[2],
                    full[3] - base[0],
                    full[4] - base[1],
                    full[5] - base[2],
                ]
            }
        }
    }

    /// 1/V − x, evaluated without cancellation.
    pub fn inv_v_offset(&self, p: [f64; 3]) -> f64 {
        let [x, theta, s] = p;
        match &self.kind {
            ModelKind::Hyperbolic3 { .. } => -x.powi(3) / 4.0 / (1.0 + x * x / 4.0),
            ModelKind::HorowitzMyers { .. } => {
                let y = x.powi(3) / 4.0;
                x * (-2.0 / 3.0 * y.ln_1p()).exp_m1()
            }
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                let r = collar.r_h.eval(theta, s);
                let tr = trace_with(collar.h.eval(theta, s), collar.h3.eval(theta, s));
                -r / 8.0 * x.powi(3) + tr / 2.0 * x.powi(4)
            }
        }
    }

    pub fn metric_eval(&self, p: ChartPoint, which: Which) -> Result<MetricTensor> {
        geometry::metric_at(self, p.to_array(), which)
    }

    pub fn potential(&self, p: ChartPoint) -> Result<f64> {
        if p.x <= 0.0 {
            return Err(Error::Singular { x: p.x });
        }
        Ok(1.0 / self.inv_v(p.to_array()))
    }

    /// Reduce θ (and s on tori) modulo the periods.
    pub fn reduce(&self, p: ChartPoint) -> ChartPoint {
        let t = p.theta.rem_euclid(self.theta_period());
        let s = match self.s_period() {
            Some(ps) => p.s.rem_euclid(ps),
            None => p.s,
        };
        ChartPoint::new(p.x, t, s)
    }
}

fn formal_gbar<D: Real>(c: &FormalCollar, p: [D; 3]) -> [D; 6] {
    let [x, theta, s] = p;
    let h = c.h.eval(theta, s);
    let h3 = c.h3.eval(theta, s);
    let r = c.r_h.eval(theta, s);
    let tr = trace_with(h, h3);
    let x2 = x * x;
    let x3 = x2 * x;
    let xx = D::from(1.0) - r * x2 * 0.25 + tr * x3;
    let fac = D::from(1.0) - r * x2 * 0.5;
    let z = D::from(0.0);
    [
        xx,
        z,
        z,
        h[0] * fac + (h3[0] + tr * h[0]) * x3,
        h[1] * fac + (h3[1] + tr * h[1]) * x3,
        h[2] * fac + (h3[2] + tr * h[2]) * x3,
    ]
}

impl Geometry3 for MetricModel {
    fn gbar<D: Real>(&self, p: [D; 3]) -> [D; 6] {
        let [x, _theta, s] = p;
        let z = D::from(0.0);
        match &self.kind {
            ModelKind::Hyperbolic3 { anchor } => {
                let x2 = x * x * 0.25;
                let a = D::from(1.0) + x2;
                let b = D::from(1.0) - x2;
                let ia2 = (a * a).recip();
                let t = b * b * ia2;
                let sn = (s + *anchor).sin();
                [ia2, z, z, t * sn * sn, z, t]
            }
            ModelKind::HorowitzMyers { .. } => {
                let y = x * x * x * 0.25;
                let p1 = D::from(1.0) + y;
                let q = (D::from(1.0) - y) / p1;
                [p1.powf(-4.0 / 3.0), z, z, q * q, z, D::from(1.0)]
            }
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                formal_gbar(collar, p)
            }
        }
    }

    fn inv_v<D: Real>(&self, p: [D; 3]) -> D {
        let [x, theta, s] = p;
        match &self.kind {
            ModelKind::Hyperbolic3 { .. } => x / (D::from(1.0) + x * x * 0.25),
            ModelKind::HorowitzMyers { .. } => {
                x * (D::from(1.0) + x * x * x * 0.25).powf(-2.0 / 3.0)
            }
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                let r = collar.r_h.eval(theta, s);
                let tr = trace_with(collar.h.eval(theta, s), collar.h3.eval(theta, s));
                let x3 = x * x * x;
                x - r * x3 * 0.125 + tr * x3 * x * 0.5
            }
        }
    }

    fn bdf(&self, p: [f64; 3]) -> f64 {
        p[0]
    }

    fn in_chart(&self, p: [f64; 3]) -> bool {
        match self.kind {
            ModelKind::Hyperbolic3 { anchor } => {
                p[0] >= 0.0 && p[0] < 2.0 && anchor + p[2] > 0.0 && anchor + p[2] < PI
            }
            ModelKind::HorowitzMyers { .. } => p[0] >= 0.0 && p[0] < 4f64.powf(1.0 / 3.0),
            _ => p[0] >= 0.0,
        }
    }
}

/// Native charts of the closed-form models, used as independent oracles.
pub mod native {
    use super::*;

    /// Horowitz–Myers in (r, θ, s): dr²/(r²(1−r⁻³)) + r²(1−r⁻³)dθ² + r²ds², V = r.
    pub fn hm_metric(q: [f64; 3]) -> [f64; 6] {
        let r = q[0];
        let f = 1.0 - r.powi(-3);
        [1.0 / (r * r * f), 0.0, 0.0, r * r * f, 0.0, r * r]
    }

    pub fn hm_to_fg<D: Real>(q: [D; 3]) -> [D; 3] {
        // r = (1/x)(1 + x³/4)^{2/3} inverted: with u = 1/x, r³ = u³ + 1/2 + 1/(16u³).
        let r = q[0];
        let r3 = r * r * r;
        // u³ solves u⁶ − (r³ − 1/2)u³ + 1/16 = 0, larger root.
        let b = r3 - 0.5;
        let disc = (b * b - 0.25).sqrt();
        let u3 = (b + disc) * 0.5;
        [u3.powf(-1.0 / 3.0), q[1], q[2]]
    }

    /// Poincaré ball in (R, ϑ, θ): 4(dR² + R²(dϑ² + sin²ϑ dθ²))/(1−R²)².
    pub fn ball_metric(q: [f64; 3]) -> [f64; 6] {
        let (r, th) = (q[0], q[1]);
        let c = 4.0 / ((1.0 - r * r) * (1.0 - r * r));
        [c, 0.0, 0.0, c * r * r, 0.0, c * r * r * th.sin() * th.sin()]
    }

    pub fn ball_potential(q: [f64; 3]) -> f64 {
        let r = q[0];
        (1.0 + r * r) / (1.0 - r * r)
    }

    /// Ball (R, ϑ, θ) to the anchored (x, θ, s) chart.
    pub fn ball_to_fg<D: Real>(q: [D; 3], anchor: f64) -> [D; 3] {
        let one = D::from(1.0);
        let x = (one - q[0]) * 2.0 / (one + q[0]);
        [x, q[2], q[1] - anchor]
    }
}

/// Boundary data of a model.
#[derive(Clone, Debug)]
pub struct BoundaryData {
    model: MetricModel,
    /// Neumann data extracted from bulk samples (formal models).
    extracted_h3: Option<TensorField2>,
    pub mass: f64,
}

impl BoundaryData {
    pub fn h(&self, theta: f64, s: f64) -> [f64; 3] {
        self.model.h(theta, s)
    }

    pub fn r_h(&self, theta: f64, s: f64) -> f64 {
        match &self.model.kind {
            ModelKind::Hyperbolic3 { .. } => 2.0,
            ModelKind::HorowitzMyers { .. } => 0.0,
            ModelKind::WarpedTorus { collar, .. } | ModelKind::PrescribedFg { collar } => {
                collar.r_h.eval(theta, s)
            }
        }
    }

    pub fn h3(&self, theta: f64, s: f64) -> [f64; 3] {
        match &self.model.kind {
            ModelKind::Hyperbolic3 { .. } => [0.0; 3],
            ModelKind::HorowitzMyers { .. } => [-2.0 / 3.0, 0.0, 1.0 / 3.0],
            _ => self
                .extracted_h3
                .as_ref()
                .map(|f| f.eval(theta, s))
                .unwrap_or([f64::NAN; 3]),
        }
    }

    pub fn tr_h3(&self, theta: f64, s: f64) -> f64 {
        trace_with(self.h(theta, s), self.h3(theta, s))
    }

    pub fn mu(&self, theta: f64, s: f64) -> f64 {
        3.0 * self.tr_h3(theta, s)
    }

    /// h₃(∂s,∂s) + tr_h h₃.
    pub fn neumann_density(&self, theta: f64, s: f64) -> f64 {
        self.h3(theta, s)[2] + self.tr_h3(theta, s)
    }

    pub fn area_element(&self, theta: f64, s: f64) -> f64 {
        let h = self.h(theta, s);
        (h[0] * h[2] - h[1] * h[1]).sqrt()
    }

    pub fn model(&self) -> &MetricModel {
        &self.model
    }
}

pub fn boundary_data(model: &MetricModel) -> Result<BoundaryData> {
    let extracted_h3 = match model.collar() {
        Some(c) => Some(crate::series::extract_neumann_field(
            model,
            c.h.grid(),
            &crate::series::LadderSpec::default(),
        )?),
        None => None,
    };
    let mut data = BoundaryData {
        model: model.clone(),
        extracted_h3,
        mass: 0.0,
    };
    data.mass = match &model.kind {
        ModelKind::Hyperbolic3 { .. } => 0.0,
        ModelKind::HorowitzMyers {
            theta_period,
            s_period,
        } => -theta_period * s_period,
        _ => {
            let grid = model.collar().map(|c| c.h.grid()).unwrap_or(PeriodicGrid::new(
                1,
                1,
                1.0,
                1.0,
            ));
            grid.points()
                .into_iter()
                .map(|(t, s)| data.mu(t, s) * data.area_element(t, s))
                .sum::<f64>()
                * grid.cell_area()
        }
    };
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hm_boundary_metric_is_flat_identity() {
        let m = horowitz_myers(DEFAULT_HM_THETA_PERIOD, 2.0).unwrap();
        let g = m.metric_eval(ChartPoint::new(0.0, 0.3, 0.1), Which::Compactified).unwrap();
        assert!((g.components - nalgebra::Matrix3::identity()).norm() < 1e-15);
    }

    #[test]
    fn offsets_match_direct_differences() {
        let models = [
            hyperbolic3_anchored(1.0),
            horowitz_myers(DEFAULT_HM_THETA_PERIOD, 1.0).unwrap(),
        ];
        for m in &models {
            let p = [0.3, 0.2, 0.1];
            let full: [f64; 6] = m.gbar(p);
            let base: [f64; 6] = m.gbar([0.0, 0.2, 0.1]);
            let off = m.gbar_offset(p);
            for i in 0..6 {
                assert!((full[i] - base[i] - off[i]).abs() < 1e-14);
            }
            assert!((m.inv_v(p) - 0.3 - m.inv_v_offset(p)).abs() < 1e-15);
        }
    }
}
