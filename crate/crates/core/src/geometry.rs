//! Metrics, connection, curvature and geodesics for a 3-manifold with static potential.

use crate::autodiff::{seed1, seed2, split2, sym_jet1, sym_jet2, unpack, Real, D1, D2};
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Point of the (x, θ, s) chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint {
    pub x: f64,
    pub theta: f64,
    pub s: f64,
}

impl ChartPoint {
    pub fn new(x: f64, theta: f64, s: f64) -> Self {
        Self { x, theta, s }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.theta, self.s]
    }

    pub fn from_array(p: [f64; 3]) -> Self {
        Self::new(p[0], p[1], p[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    Physical,
    Compactified,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricTensor {
    pub components: Matrix3<f64>,
    pub which: Which,
}

/// How derivatives of metric components are obtained.
#[derive(Clone, Copy, Debug, PartialEq)]
#[derive(Default)]
pub enum Scheme {
    #[default]
    Exact,
    /// Central differences with step `c·x` (or `c` when x = 0).
    FiniteDifference { c: f64 },
}


/// A coordinate description of the compactified metric and of 1/V.
pub trait Geometry3: Sync {
    /// Packed compactified metric `[00, 01, 02, 11, 12, 22]`.
    fn gbar<D: Real>(&self, p: [D; 3]) -> [D; 6];
    /// The boundary defining function 1/V.
    fn inv_v<D: Real>(&self, p: [D; 3]) -> D;
    /// Canonical boundary defining function x at p.
    fn bdf(&self, p: [f64; 3]) -> f64;
    fn in_chart(&self, _p: [f64; 3]) -> bool {
        true
    }
}

pub fn components<G: Geometry3, D: Real>(geo: &G, p: [D; 3], which: Which) -> [D; 6] {
    let gb = geo.gbar(p);
    match which {
        Which::Compactified => gb,
        Which::Physical => {
            let w = geo.inv_v(p);
            let f = (w * w).recip();
            gb.map(|c| c * f)
        }
    }
}

fn check_point<G: Geometry3>(geo: &G, p: [f64; 3], which: Which) -> Result<()> {
    if which == Which::Physical && geo.bdf(p) <= 0.0 {
        return Err(Error::Singular { x: geo.bdf(p) });
    }
    Ok(())
}

pub fn metric_at<G: Geometry3>(geo: &G, p: [f64; 3], which: Which) -> Result<MetricTensor> {
    check_point(geo, p, which)?;
    let c = components(geo, p, which);
    let m = unpack(&c);
    if !is_positive_definite(&m) {
        return Err(Error::Model(format!(
            "metric not positive definite at {:?}",
            p
        )));
    }
    Ok(MetricTensor {
        components: m,
        which,
    })
}

pub fn is_positive_definite(m: &Matrix3<f64>) -> bool {
    let a = m[(0, 0)];
    let b = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    a > 0.0 && b > 0.0 && m.determinant() > 0.0
}

/// Metric with first (and optionally second) partial derivatives.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub g: Matrix3<f64>,
    pub dg: [Matrix3<f64>; 3],
    pub ddg: Option<[[Matrix3<f64>; 3]; 3]>,
}

fn fd_step(geo: &impl Geometry3, p: [f64; 3], c: f64) -> f64 {
    let x = geo.bdf(p);
    if x > 0.0 {
        c * x
    } else {
        c
    }
}

pub fn metric_jet<G: Geometry3>(
    geo: &G,
    p: [f64; 3],
    which: Which,
    second: bool,
    scheme: Scheme,
) -> Result<MetricJet> {
    check_point(geo, p, which)?;
    match scheme {
        Scheme::Exact => {
            if second {
                let c: [D2; 6] = components(geo, seed2(p), which);
                let (g, dg, ddg) = sym_jet2(&c);
                Ok(MetricJet {
                    g,
                    dg,
                    ddg: Some(ddg),
                })
            } else {
                let c: [D1; 6] = components(geo, seed1(p), which);
                let (g, dg) = sym_jet1(&c);
                Ok(MetricJet { g, dg, ddg: None })
            }
        }
        Scheme::FiniteDifference { c } => {
            let h = fd_step(geo, p, c);
            let eval = |q: [f64; 3]| unpack(&components(geo, q, which));
            let g = eval(p);
            let shifted = |k: usize, a: f64| {
                let mut q = p;
                q[k] += a;
                q
            };
            let dg: [Matrix3<f64>; 3] = std::array::from_fn(|k| {
                (eval(shifted(k, h)) - eval(shifted(k, -h))) / (2.0 * h)
            });
            let ddg = if second {
                Some(std::array::from_fn(|k| {
                    std::array::from_fn(|l| {
                        let mut pp = p;
                        pp[k] += h;
                        pp[l] += h;
                        let mut pm = p;
                        pm[k] += h;
                        pm[l] -= h;
                        let mut mp = p;
                        mp[k] -= h;
                        mp[l] += h;
                        let mut mm = p;
                        mm[k] -= h;
                        mm[l] -= h;
                        (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * h * h)
                    })
                }))
            } else {
                None
            };
            Ok(MetricJet { g, dg, ddg })
        }
    }
}

/// Γ[k][i][j] = Γ^k_ij.
pub type Christoffel = [[[f64; 3]; 3]; 3];

pub fn christoffel_from_jet(g: &Matrix3<f64>, dg: &[Matrix3<f64>; 3]) -> Christoffel {
    let gi = g.try_inverse().unwrap_or_else(Matrix3::zeros);
    let mut lower = [[[0.0; 3]; 3]; 3];
    for l in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                lower[l][i][j] = 0.5 * (dg[i][(l, j)] + dg[j][(l, i)] - dg[l][(i, j)]);
            }
        }
    }
    let mut out = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in i..3 {
                let mut s = 0.0;
                for l in 0..3 {
                    s += gi[(k, l)] * lower[l][i][j];
                }
                out[k][i][j] = s;
                out[k][j][i] = s;
            }
        }
    }
    out
}

pub fn christoffel<G: Geometry3>(
    geo: &G,
    p: [f64; 3],
    which: Which,
    scheme: Scheme,
) -> Result<Christoffel> {
    let jet = metric_jet(geo, p, which, false, scheme)?;
    Ok(christoffel_from_jet(&jet.g, &jet.dg))
}

#[derive(Clone, Debug)]
pub struct Curvature {
    /// riemann[a][b][c][d] = R^a_{bcd}, with R(∂c,∂d)∂b = R^a_{bcd} ∂a.
    pub riemann: [[[[f64; 3]; 3]; 3]; 3],
    pub ricci: Matrix3<f64>,
    pub scalar: f64,
    pub metric: Matrix3<f64>,
}

impl Curvature {
    /// ⟨R(X,Y)Y, X⟩.
    pub fn riemann_xyyx(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        let mut s = 0.0;
        for a in 0..3 {
            for e in 0..3 {
                let gae = self.metric[(a, e)];
                if gae == 0.0 {
                    continue;
                }
                for b in 0..3 {
                    for c in 0..3 {
                        for d in 0..3 {
                            s += gae * self.riemann[e][b][c][d] * x[a] * y[b] * x[c] * y[d];
                        }
                    }
                }
            }
        }
        s
    }

    pub fn sectional(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        let g = &self.metric;
        let xx = x.dot(&(g * x));
        let yy = y.dot(&(g * y));
        let xy = x.dot(&(g * y));
        self.riemann_xyyx(x, y) / (xx * yy - xy * xy)
    }

    pub fn ricci_on(&self, x: &Vector3<f64>, y: &Vector3<f64>) -> f64 {
        x.dot(&(self.ricci * y))
    }
}

fn christoffel_derivative(jet: &MetricJet) -> [Christoffel; 3] {
    let ddg = jet.ddg.as_ref().expect("second derivatives");
    let gi = jet.g.try_inverse().unwrap_or_else(Matrix3::zeros);
    std::array::from_fn(|m| {
        let dgi = -gi * jet.dg[m] * gi;
        let mut out = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut s = 0.0;
                    for l in 0..3 {
                        let first = jet.dg[i][(l, j)] + jet.dg[j][(l, i)] - jet.dg[l][(i, j)];
                        let second =
                            ddg[m][i][(l, j)] + ddg[m][j][(l, i)] - ddg[m][l][(i, j)];
                        s += 0.5 * (dgi[(k, l)] * first + gi[(k, l)] * second);
                    }
                    out[k][i][j] = s;
                }
            }
        }
        out
    })
}

pub fn curvature_from_parts(g: Matrix3<f64>, gam: &Christoffel, dgam: &[Christoffel; 3]) -> Curvature {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    let mut v = dgam[c][a][d][b] - dgam[d][a][c][b];
                    for e in 0..3 {
                        v += gam[a][c][e] * gam[e][d][b] - gam[a][d][e] * gam[e][c][b];
                    }
                    r[a][b][c][d] = v;
                }
            }
        }
    }
    let mut ric = Matrix3::zeros();
    for b in 0..3 {
        for d in 0..3 {
            let mut v = 0.0;
            for a in 0..3 {
                v += r[a][b][a][d];
            }
            ric[(b, d)] = v;
        }
    }
    let gi = g.try_inverse().unwrap_or_else(Matrix3::zeros);
    let scalar = (gi * ric).trace();
    Curvature {
        riemann: r,
        ricci: ric,
        scalar,
        metric: g,
    }
}

pub fn curvature<G: Geometry3>(
    geo: &G,
    p: [f64; 3],
    which: Which,
    scheme: Scheme,
) -> Result<Curvature> {
    match scheme {
        Scheme::Exact => {
            let jet = metric_jet(geo, p, which, true, scheme)?;
            let gam = christoffel_from_jet(&jet.g, &jet.dg);
            let dgam = christoffel_derivative(&jet);
            Ok(curvature_from_parts(jet.g, &gam, &dgam))
        }
        Scheme::FiniteDifference { c } => {
            let h = fd_step(geo, p, c) * 10.0;
            let g = metric_at(geo, p, which)?.components;
            let gam = christoffel(geo, p, which, scheme)?;
            let mut dgam = [[[[0.0; 3]; 3]; 3]; 3];
            for (m, slot) in dgam.iter_mut().enumerate() {
                let mut pp = p;
                pp[m] += h;
                let mut pm = p;
                pm[m] -= h;
                let a = christoffel(geo, pp, which, scheme)?;
                let b = christoffel(geo, pm, which, scheme)?;
                for k in 0..3 {
                    for i in 0..3 {
                        for j in 0..3 {
                            slot[k][i][j] = (a[k][i][j] - b[k][i][j]) / (2.0 * h);
                        }
                    }
                }
            }
            Ok(curvature_from_parts(g, &gam, &dgam))
        }
    }
}

/// ∇²V − (ΔV) g − V·Ric in the physical metric.
pub fn static_residual<G: Geometry3>(geo: &G, p: [f64; 3], scheme: Scheme) -> Result<Matrix3<f64>> {
    let curv = curvature(geo, p, Which::Physical, scheme)?;
    let gam = christoffel(geo, p, Which::Physical, scheme)?;
    let (v, dv, ddv) = match scheme {
        Scheme::Exact => {
            let w = geo.inv_v(seed2(p));
            split2(&(D2::from(1.0) / w))
        }
        Scheme::FiniteDifference { c } => {
            let h = fd_step(geo, p, c) * 10.0;
            let vf = |q: [f64; 3]| 1.0 / geo.inv_v(q);
            let v = vf(p);
            let mut dv = Vector3::zeros();
            let mut ddv = Matrix3::zeros();
            for k in 0..3 {
                let mut a = p;
                a[k] += h;
                let mut b = p;
                b[k] -= h;
                dv[k] = (vf(a) - vf(b)) / (2.0 * h);
                for l in 0..3 {
                    let sh = |sk: f64, sl: f64| {
                        let mut q = p;
                        q[k] += sk;
                        q[l] += sl;
                        vf(q)
                    };
                    ddv[(k, l)] = (sh(h, h) - sh(h, -h) - sh(-h, h) + sh(-h, -h)) / (4.0 * h * h);
                }
            }
            (v, dv, ddv)
        }
    };
    let g = curv.metric;
    let mut hess = Matrix3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            let mut s = ddv[(i, j)];
            for k in 0..3 {
                s -= gam[k][i][j] * dv[k];
            }
            hess[(i, j)] = s;
        }
    }
    let gi = g.try_inverse().unwrap_or_else(Matrix3::zeros);
    let lap = (gi * hess).trace();
    Ok(hess - g * lap - curv.ricci * v)
}

#[derive(Clone, Debug)]
pub struct GeodesicPath {
    /// (t, position, velocity).
    pub samples: Vec<(f64, [f64; 3], [f64; 3])>,
    pub which: Which,
    pub exited: bool,
    /// Max relative deviation of the speed from its initial value.
    pub speed_drift: f64,
    pub warning: Option<String>,
}

impl GeodesicPath {
    pub fn end(&self) -> ([f64; 3], [f64; 3]) {
        let s = self.samples.last().expect("non-empty path");
        (s.1, s.2)
    }
}

pub fn acceleration(gam: &Christoffel, v: &[f64; 3]) -> [f64; 3] {
    let mut a = [0.0; 3];
    for (k, ak) in a.iter_mut().enumerate() {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += gam[k][i][j] * v[i] * v[j];
            }
        }
        *ak = -s;
    }
    a
}

/// One classical RK4 step of the geodesic equation.
pub fn geodesic_step<F>(accel: &F, p: [f64; 3], v: [f64; 3], dt: f64) -> ([f64; 3], [f64; 3])
where
    F: Fn([f64; 3], [f64; 3]) -> [f64; 3],
{
    let add = |a: [f64; 3], b: [f64; 3], s: f64| [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]];
    let k1x = v;
    let k1v = accel(p, v);
    let k2x = add(v, k1v, 0.5 * dt);
    let k2v = accel(add(p, k1x, 0.5 * dt), k2x);
    let k3x = add(v, k2v, 0.5 * dt);
    let k3v = accel(add(p, k2x, 0.5 * dt), k3x);
    let k4x = add(v, k3v, dt);
    let k4v = accel(add(p, k3x, dt), k4x);
    let mut np = p;
    let mut nv = v;
    for i in 0..3 {
        np[i] += dt / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
        nv[i] += dt / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    (np, nv)
}

pub fn speed<G: Geometry3>(geo: &G, p: [f64; 3], v: [f64; 3], which: Which) -> f64 {
    let g = unpack(&components(geo, p, which));
    let v = Vector3::from(v);
    v.dot(&(g * v)).sqrt()
}

pub fn integrate_geodesic<G: Geometry3>(
    geo: &G,
    p: [f64; 3],
    v: [f64; 3],
    t_end: f64,
    n_steps: usize,
    which: Which,
) -> Result<GeodesicPath> {
    check_point(geo, p, which)?;
    let s0 = speed(geo, p, v, which);
    if !(s0 > 0.0) {
        return Err(Error::Precondition("initial velocity has zero length".into()));
    }
    let accel = |q: [f64; 3], w: [f64; 3]| {
        let c: [D1; 6] = components(geo, seed1(q), which);
        let (g, dg) = sym_jet1(&c);
        acceleration(&christoffel_from_jet(&g, &dg), &w)
    };
    let dt = t_end / n_steps.max(1) as f64;
    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push((0.0, p, v));
    let (mut q, mut w) = (p, v);
    let mut drift = 0.0f64;
    let mut exited = false;
    for n in 0..n_steps {
        let (nq, nw) = geodesic_step(&accel, q, w, dt);
        let leaving = !geo.in_chart(nq) || (which == Which::Physical && geo.bdf(nq) <= 0.0);
        if leaving || nq.iter().chain(nw.iter()).any(|c| !c.is_finite()) {
            exited = true;
            break;
        }
        q = nq;
        w = nw;
        drift = drift.max((speed(geo, q, w, which) - s0).abs() / s0);
        samples.push(((n + 1) as f64 * dt, q, w));
    }
    let warning = if drift > 1e-8 {
        Some(format!("speed drift {drift:.3e} exceeds 1e-8"))
    } else {
        None
    };
    Ok(GeodesicPath {
        samples,
        which,
        exited,
        speed_drift: drift,
        warning,
    })
}
