//! The profile s ↦ RenA(F_s) of minimal graphs over the circles {s = const}
//! of a torus boundary, with the Neumann integrals along the same circles.

use crate::error::{Error, Result};
use crate::field::trace_with;
use crate::io::{fmt12, plot_script, Csv};
use crate::models::{boundary_data, MetricModel};
use crate::renarea::renormalized_area;
use crate::series::{extract_neumann, LadderSpec, TangentialSamples};
use crate::surface::{solve_minimal_graph, BoundaryCurve, Chart, SolveSpec};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ProfileSample {
    pub s: f64,
    /// None when the model has no global bulk or the solve failed.
    pub rena: Option<f64>,
    /// ∫_{Γ_s} (tr_h h₃ + h₃(∂s,∂s)) dθ_h from the model's Neumann data.
    pub neumann: f64,
    /// Same integral with h₃ extracted from bulk samples.
    pub neumann_extracted: f64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub model: String,
    /// Samples at s_k = k·P_s/n, k = 0..=n; the last one closes the period.
    pub samples: Vec<ProfileSample>,
    /// ∫_Σ (tr_h h₃ + h₃(∂s,∂s)) dA_h.
    pub total: f64,
    /// Periodic second differences of RenA.
    pub second_differences: Vec<f64>,
    /// max RenA − min RenA.
    pub spread: Option<f64>,
    /// max |closed-form − extracted| Neumann integral.
    pub neumann_mismatch: f64,
    /// ∫_Σ ≥ 0.
    pub total_nonnegative: bool,
    /// ∫_{Γ_s} ≤ 0 for every s.
    pub circles_nonpositive: bool,
    pub failures: usize,
}

/// Checks that h = f(θ)²dθ² + ds² on the boundary torus.
fn check_warped(model: &MetricModel) -> Result<(f64, f64)> {
    let ps = model
        .s_period()
        .ok_or_else(|| Error::Precondition(format!("{} has no torus boundary", model.name())))?;
    let pt = model.theta_period();
    for j in 0..16 {
        for k in 0..16 {
            let (t, s) = (pt * j as f64 / 16.0, ps * k as f64 / 16.0);
            let h: [f64; 3] = model.h(t, s);
            if h[1].abs() > 1e-12 || (h[2] - 1.0).abs() > 1e-12 {
                return Err(Error::Precondition(
                    "boundary metric is not of the form f²dθ² + ds²".into(),
                ));
            }
        }
    }
    Ok((pt, ps))
}

fn closed_h3(model: &MetricModel, t: f64, s: f64) -> Result<[f64; 3]> {
    match model.collar() {
        Some(c) => Ok(c.h3.eval(t, s)),
        None => Ok(boundary_data(model)?.h3(t, s)),
    }
}

fn neumann_integrals(model: &MetricModel, s: f64, n_theta: usize) -> Result<(f64, f64)> {
    let pt = model.theta_period();
    let dth = pt / n_theta as f64;
    let ladder = LadderSpec::default();
    let mut closed = 0.0;
    let mut extracted = 0.0;
    for j in 0..n_theta {
        let t = j as f64 * dth;
        let h: [f64; 3] = model.h(t, s);
        let dl = h[0].sqrt() * dth;
        let h3 = closed_h3(model, t, s)?;
        closed += (trace_with(h, h3) + h3[2]) * dl;
        let samples = TangentialSamples::from_model(model, t, s, &ladder);
        let r = model.collar().map(|c| c.r_h.eval(t, s)).unwrap_or(0.0);
        let est = extract_neumann(&samples, h, r)?;
        extracted += (est.tr_h3 + est.h3[2]) * dl;
    }
    Ok((closed, extracted))
}

pub fn profile_scan(model: &MetricModel, n_samples: usize, spec: &SolveSpec) -> Result<ProfileReport> {
    if n_samples < 3 {
        return Err(Error::Config("a profile needs at least three samples".into()));
    }
    let (pt, ps) = check_warped(model)?;
    let has_bulk = Chart::for_model(model).is_ok();
    let n_theta = spec.n_theta.max(16);
    let samples: Vec<ProfileSample> = (0..=n_samples)
        .into_par_iter()
        .map(|k| {
            let s = ps * k as f64 / n_samples as f64;
            let (neumann, neumann_extracted) = match neumann_integrals(model, s, n_theta) {
                Ok(v) => v,
                Err(e) => {
                    return ProfileSample {
                        s,
                        rena: None,
                        neumann: f64::NAN,
                        neumann_extracted: f64::NAN,
                        note: Some(e.to_string()),
                    }
                }
            };
            let (rena, note) = if has_bulk {
                let curve = BoundaryCurve::constant(s, pt);
                match solve_minimal_graph(model, &curve, spec) {
                    Ok(f) if f.converged => match renormalized_area(&f.param()) {
                        Ok(r) => (Some(r), None),
                        Err(e) => (None, Some(e.to_string())),
                    },
                    Ok(f) => (
                        None,
                        Some(format!(
                            "solver stalled at residual {:e}",
                            f.residual_history.last().copied().unwrap_or(f64::NAN)
                        )),
                    ),
                    Err(e) => (None, Some(e.to_string())),
                }
            } else {
                (None, Some("formal collar: no global bulk, hypothesis flags only".into()))
            };
            ProfileSample {
                s,
                rena,
                neumann,
                neumann_extracted,
                note,
            }
        })
        .collect();
    let open = &samples[..n_samples];
    let ds = ps / n_samples as f64;
    let total = open.iter().map(|p| p.neumann).sum::<f64>() * ds;
    let values: Option<Vec<f64>> = open.iter().map(|p| p.rena).collect();
    let second_differences = values
        .as_ref()
        .map(|v| {
            let n = v.len();
            (0..n)
                .map(|k| (v[(k + 1) % n] - 2.0 * v[k] + v[(k + n - 1) % n]) / (ds * ds))
                .collect()
        })
        .unwrap_or_default();
    let spread = values.as_ref().map(|v| {
        let closing = samples[n_samples].rena.unwrap_or(v[0]);
        let all = v.iter().chain(std::iter::once(&closing));
        let max = all.clone().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = all.cloned().fold(f64::INFINITY, f64::min);
        max - min
    });
    let neumann_mismatch = samples
        .iter()
        .map(|p| (p.neumann - p.neumann_extracted).abs())
        .fold(0.0, f64::max);
    let failures = samples
        .iter()
        .filter(|p| (has_bulk && p.rena.is_none()) || p.neumann.is_nan())
        .count();
    Ok(ProfileReport {
        model: model.name().to_string(),
        total,
        total_nonnegative: total >= -1e-10,
        circles_nonpositive: open.iter().all(|p| p.neumann <= 1e-10),
        samples,
        second_differences,
        spread,
        neumann_mismatch,
        failures,
    })
}

impl ProfileReport {
    pub fn to_csv(&self) -> String {
        let mut csv = Csv::new(&["s", "rena", "neumann", "neumann_extracted"]);
        for p in &self.samples {
            csv.push(&[p.s, p.rena.unwrap_or(f64::NAN), p.neumann, p.neumann_extracted]);
        }
        csv.render()
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "model {}\ntotal {}\nneumann_mismatch {}\ntotal_nonnegative {}\ncircles_nonpositive {}\nfailures {}\n",
            self.model,
            fmt12(self.total),
            fmt12(self.neumann_mismatch),
            self.total_nonnegative,
            self.circles_nonpositive,
            self.failures
        );
        if let Some(s) = self.spread {
            out.push_str(&format!("spread {}\n", fmt12(s)));
        }
        for p in &self.samples {
            if let Some(n) = &p.note {
                out.push_str(&format!("note s={} {}\n", fmt12(p.s), n));
            }
        }
        out
    }

    pub fn plot(csv_name: &str) -> String {
        plot_script(csv_name, "RenA profile", 1, &[(2, "RenA"), (3, "Neumann integral")])
    }
}
