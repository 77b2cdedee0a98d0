//! Experiment configuration and the `expand`, `rena`, `flow` and `scan` runs.

use crate::error::{Error, Result};
use crate::field::{PeriodicGrid, TensorField2, TrigField2};
use crate::flow::{
    evolution_check, fd_rena, first_variation_check, flow_integrate, rena_curve, rena_plot,
    second_variation_check, uniform_times, variation_csv, Generator, TransportMode, VARIANT_NAMES,
};
use crate::geometry::Scheme;
use crate::io::{fmt12, Csv, OutputDir};
use crate::models::{
    boundary_data, horowitz_myers, hyperbolic3_anchored, prescribed_fg, warped_torus, MetricModel,
    DEFAULT_HM_THETA_PERIOD,
};
use crate::renarea::{renarea_closed_form, rena_fit, RenAFit, DEFAULT_LADDER};
use crate::rigidity::{profile_scan, ProfileReport};
use crate::series::{
    conformal_metric_expansion, levelset_h_series, potential_expansion, sample_points, series_csv,
    wang_mass, LadderSpec,
};
use crate::surface::{
    det_bound, solve_minimal_graph, BoundaryCurve, Closure, GraphSurface, SolveSpec,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

fn half_pi() -> f64 {
    PI / 2.0
}
fn hm_theta() -> f64 {
    DEFAULT_HM_THETA_PERIOD
}
fn two() -> f64 {
    2.0
}
fn eight() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    Hyperbolic3 {
        #[serde(default = "half_pi")]
        anchor: f64,
    },
    HorowitzMyers {
        #[serde(default = "hm_theta")]
        theta_period: f64,
        #[serde(default = "two")]
        s_period: f64,
    },
    /// h = f(θ)²dθ² + ds², f = warp[0] + Σ warp[k] cos(2πkθ/P_θ), constant h₃.
    WarpedTorus {
        theta_period: f64,
        s_period: f64,
        warp: Vec<f64>,
        h3: [f64; 3],
        #[serde(default = "eight")]
        n_theta: usize,
        #[serde(default = "eight")]
        n_s: usize,
    },
    /// Constant boundary metric h and Neumann data h₃ on a torus.
    PrescribedFg {
        theta_period: f64,
        s_period: f64,
        h: [f64; 3],
        h3: [f64; 3],
        #[serde(default = "eight")]
        n_theta: usize,
        #[serde(default = "eight")]
        n_s: usize,
    },
}

impl ModelConfig {
    pub fn build(&self) -> Result<MetricModel> {
        match self {
            ModelConfig::Hyperbolic3 { anchor } => {
                if !(*anchor > 0.0 && *anchor < PI) {
                    return Err(Error::Config("anchor must lie in (0, π)".into()));
                }
                Ok(hyperbolic3_anchored(*anchor))
            }
            ModelConfig::HorowitzMyers {
                theta_period,
                s_period,
            } => horowitz_myers(*theta_period, *s_period),
            ModelConfig::WarpedTorus {
                theta_period,
                s_period,
                warp,
                h3,
                n_theta,
                n_s,
            } => {
                let grid = torus_grid(*n_theta, *n_s, *theta_period, *s_period)?;
                if warp.is_empty() {
                    return Err(Error::Config("warp needs at least a constant term".into()));
                }
                let (w, pt) = (warp.clone(), *theta_period);
                let f = TrigField2::from_fn(grid, move |t, _| {
                    w.iter()
                        .enumerate()
                        .map(|(k, a)| a * (2.0 * PI * k as f64 * t / pt).cos())
                        .sum()
                });
                warped_torus(f, TensorField2::constant(grid, h3[0], h3[1], h3[2]))
            }
            ModelConfig::PrescribedFg {
                theta_period,
                s_period,
                h,
                h3,
                n_theta,
                n_s,
            } => {
                let grid = torus_grid(*n_theta, *n_s, *theta_period, *s_period)?;
                prescribed_fg(
                    TensorField2::constant(grid, h[0], h[1], h[2]),
                    TensorField2::constant(grid, h3[0], h3[1], h3[2]),
                )
            }
        }
    }
}

fn torus_grid(n_theta: usize, n_s: usize, pt: f64, ps: f64) -> Result<PeriodicGrid> {
    if n_theta == 0 || n_s == 0 {
        return Err(Error::Config("grid sizes must be positive".into()));
    }
    if !(pt > 0.0 && ps > 0.0 && pt.is_finite() && ps.is_finite()) {
        return Err(Error::Config("periods must be positive".into()));
    }
    Ok(PeriodicGrid::new(n_theta, n_s, pt, ps))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceConfig {
    /// Curve s = s0 + delta·cos(mode·φ).
    pub s0: f64,
    pub delta: f64,
    pub mode: u32,
    pub n_cheb: usize,
    pub n_theta: usize,
    pub max_iter: usize,
    /// Filled from the tolerance profile when absent.
    pub tol: Option<f64>,
    pub closure: Closure,
    /// Euler characteristic used by the closed-form cross-check.
    pub chi: i32,
    /// Collar width for the determinant bound.
    pub det_eps0: f64,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        let d = SolveSpec::default();
        Self {
            s0: 0.0,
            delta: 0.0,
            mode: 0,
            n_cheb: d.n_cheb,
            n_theta: d.n_theta,
            max_iter: d.max_iter,
            tol: None,
            closure: Closure::Disk,
            chi: 1,
            det_eps0: 0.05,
        }
    }
}

impl SurfaceConfig {
    pub fn solve_spec(&self) -> SolveSpec {
        SolveSpec {
            n_cheb: self.n_cheb,
            n_theta: self.n_theta,
            tol: self.tol.unwrap_or(1e-10),
            max_iter: self.max_iter,
            closure: self.closure,
        }
    }

    pub fn curve(&self, model: &MetricModel) -> BoundaryCurve {
        BoundaryCurve::perturbed(self.s0, self.delta, self.mode, model.theta_period())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LadderConfig {
    /// Cutoffs ε for the area fit.
    pub eps: Vec<f64>,
}

impl Default for LadderConfig {
    fn default() -> Self {
        Self {
            eps: DEFAULT_LADDER.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub generator: Generator,
    pub mode: TransportMode,
    /// Final time T and number of steps K of the RenA(t) table.
    pub t_end: f64,
    pub steps: usize,
    /// Largest FD step; the derivatives use δ, δ/2 and δ/4.
    pub fd_delta: f64,
    pub first_tol: f64,
    pub second_tol: f64,
    pub second_abs_floor: f64,
    pub evolution_times: Vec<f64>,
    pub evolution_step: f64,
    pub evolution_x_cut: f64,
    /// Serialized F₀ from a previous `rena` run.
    pub surface_csv: Option<PathBuf>,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            generator: Generator::Static,
            mode: TransportMode::Geodesic,
            t_end: 0.2,
            steps: 4,
            fd_delta: 1e-2,
            first_tol: 0.02,
            second_tol: 0.05,
            second_abs_floor: 1e-4,
            evolution_times: vec![0.0, 0.1],
            evolution_step: 1e-2,
            evolution_x_cut: 0.05,
            surface_csv: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExpandConfig {
    pub order: usize,
    pub x0: f64,
    pub levels: usize,
    pub n_theta: usize,
    pub n_s: usize,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        let l = LadderSpec::default();
        Self {
            order: 4,
            x0: l.x0,
            levels: l.levels,
            n_theta: 3,
            n_s: 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanConfig {
    pub samples: usize,
    /// Explicit s values; must be the uniform grid k·P_s/n, k = 0..n.
    pub s_values: Option<Vec<f64>>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            samples: 16,
            s_values: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Plot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Plot],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelConfig,
    #[serde(default)]
    pub surface: SurfaceConfig,
    #[serde(default)]
    pub ladder: LadderConfig,
    #[serde(default)]
    pub flow: FlowConfig,
    #[serde(default)]
    pub expand: ExpandConfig,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ToleranceProfile {
    #[default]
    Strict,
    Fast,
}

impl ToleranceProfile {
    pub fn solver_tol(self) -> f64 {
        match self {
            ToleranceProfile::Strict => 1e-10,
            ToleranceProfile::Fast => 1e-8,
        }
    }

    /// Max discrepancy accepted for expansion coefficients of order ≤ 3.
    pub fn expansion_tol(self) -> f64 {
        match self {
            ToleranceProfile::Strict => 1e-8,
            ToleranceProfile::Fast => 1e-6,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fills defaults that depend on run options and checks the sections.
    pub fn resolve(mut self, profile: ToleranceProfile, out: Option<&Path>) -> Result<Self> {
        if self.surface.tol.is_none() {
            self.surface.tol = Some(profile.solver_tol());
        }
        if let Some(o) = out {
            self.output.dir = o.to_path_buf();
        }
        let s = &self.surface;
        if s.n_cheb < 5 || s.n_theta < 4 || s.max_iter == 0 {
            return Err(Error::Config("surface grid too small".into()));
        }
        if self.ladder.eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
            return Err(Error::Config("ladder values must lie in (0, 1)".into()));
        }
        let f = &self.flow;
        if f.steps == 0 || !(f.fd_delta > 0.0) || !(f.evolution_step > 0.0) {
            return Err(Error::Config("flow steps must be positive".into()));
        }
        if self.expand.levels < 3 || !(self.expand.x0 > 0.0) {
            return Err(Error::Config("expansion ladder needs x0 > 0 and at least 3 levels".into()));
        }
        if self.output.formats.is_empty() {
            return Err(Error::Config("no output format selected".into()));
        }
        Ok(self)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Success,
    Inconclusive(String),
    /// Outputs were written but some samples failed.
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub dir: PathBuf,
    pub files: Vec<String>,
    pub summary: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Success => 0,
            Status::Failed(_) => 3,
            Status::Inconclusive(_) => 4,
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_) | Error::Precondition(_) => 2,
        _ => 3,
    }
}

struct Writer {
    dir: OutputDir,
    formats: Vec<Format>,
    files: Vec<String>,
}

impl Writer {
    fn new(cfg: &ExperimentConfig) -> Result<Self> {
        let mut dir = OutputDir::create(&cfg.output.dir)?;
        dir.write("config.resolved.toml", &cfg.to_toml())?;
        Ok(Self {
            dir,
            formats: cfg.output.formats.clone(),
            files: vec!["config.resolved.toml".into()],
        })
    }

    fn csv(&mut self, name: &str, text: &str) -> Result<()> {
        if self.formats.contains(&Format::Csv) {
            self.put(name, text)?;
        }
        Ok(())
    }

    fn plot(&mut self, name: &str, text: &str) -> Result<()> {
        if self.formats.contains(&Format::Plot) {
            self.put(name, text)?;
        }
        Ok(())
    }

    fn put(&mut self, name: &str, text: &str) -> Result<()> {
        self.dir.write(name, text)?;
        self.files.push(name.into());
        Ok(())
    }

    fn finish(mut self, status: Status, summary: String) -> Result<Outcome> {
        self.put("summary.txt", &summary)?;
        let dir = self.dir.path().to_path_buf();
        self.dir.finish()?;
        self.files.push("MANIFEST.sha256".into());
        Ok(Outcome {
            status,
            dir,
            files: self.files,
            summary,
        })
    }
}

/// Boundary expansions of 1/V and ḡ, level-set mean curvature, Neumann data
/// and the Wang mass.
pub fn cmd_expand(cfg: &ExperimentConfig, profile: ToleranceProfile) -> Result<Outcome> {
    let model = cfg.model.build()?;
    let e = &cfg.expand;
    let ladder = LadderSpec {
        x0: e.x0,
        levels: e.levels,
    };
    let points = sample_points(&model, e.n_theta, e.n_s);
    let data = boundary_data(&model)?;
    let pot = potential_expansion(&model, e.order, &ladder, &points)?;
    let met = conformal_metric_expansion(&model, e.order.min(3), &ladder, &points)?;
    let lev = levelset_h_series(&model, &ladder, &points, Scheme::Exact)?;

    let mut w = Writer::new(cfg)?;
    w.csv("potential_measured.csv", &series_csv(&pot.measured, Some(&pot.errors), &points))?;
    w.csv("potential_predicted.csv", &series_csv(&pot.predicted, None, &points))?;
    w.csv("metric_measured.csv", &series_csv(&met.measured, Some(&met.errors), &points))?;
    w.csv("metric_predicted.csv", &series_csv(&met.predicted, None, &points))?;
    w.csv("levelset_measured.csv", &series_csv(&lev.measured, None, &points))?;
    w.csv("levelset_predicted.csv", &series_csv(&lev.predicted, None, &points))?;
    let mut nm = Csv::new(&["theta", "s", "h3_tt", "h3_ts", "h3_ss", "tr_h3", "mu", "r_h"]);
    for &(t, s) in &points {
        let h3 = data.h3(t, s);
        nm.push(&[t, s, h3[0], h3[1], h3[2], data.tr_h3(t, s), data.mu(t, s), data.r_h(t, s)]);
    }
    w.csv("neumann.csv", &nm.render())?;

    let mut summary = format!("model {}\nwang_mass {}\n", model.name(), fmt12(wang_mass(&data)));
    let line = |name: &str, d: &[f64]| {
        let v: Vec<String> = d.iter().map(|x| fmt12(*x)).collect();
        format!("{name} {}\n", v.join(" "))
    };
    summary.push_str(&line("potential_discrepancy", &pot.discrepancy));
    summary.push_str(&line("metric_discrepancy", &met.discrepancy));
    summary.push_str(&line("levelset_discrepancy", &lev.discrepancy));
    let worst = pot
        .discrepancy
        .iter()
        .take(4)
        .chain(met.discrepancy.iter().take(4))
        .cloned()
        .fold(0.0, f64::max);
    let status = if worst <= profile.expansion_tol() {
        Status::Success
    } else {
        Status::Inconclusive(format!("expansion discrepancy {worst:.3e}"))
    };
    w.finish(status, summary)
}

fn solve_f0(cfg: &ExperimentConfig, model: &MetricModel) -> Result<GraphSurface> {
    let curve = cfg.surface.curve(model);
    let spec = cfg.surface.solve_spec();
    let f0 = match &cfg.flow.surface_csv {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            GraphSurface::from_csv(model, curve, &spec, &text)?
        }
        None => solve_minimal_graph(model, &curve, &spec)?,
    };
    if !f0.converged {
        return Err(Error::Convergence(format!(
            "minimal graph residual {:e} after {} iterations",
            f0.residual_history.last().copied().unwrap_or(f64::NAN),
            f0.residual_history.len()
        )));
    }
    Ok(f0)
}

fn expansion_csv(f0: &GraphSurface) -> String {
    let mut csv = Csv::new(&["theta", "c2", "c3", "u2", "u3", "kappa", "defect"]);
    if let Some(e) = &f0.expansion {
        for j in 0..e.theta.len() {
            csv.push(&[e.theta[j], e.c2[j], e.c3[j], e.u2[j], e.u3[j], e.kappa[j], e.defect[j]]);
        }
    }
    csv.render()
}

/// Minimal graph, boundary expansion, RenA fit and the closed-form value.
pub fn cmd_rena(cfg: &ExperimentConfig, _profile: ToleranceProfile) -> Result<Outcome> {
    let model = cfg.model.build()?;
    let f0 = solve_f0(cfg, &model)?;
    let p0 = f0.param();
    let fit = rena_fit(&p0, &cfg.ladder.eps)?;
    let closed = renarea_closed_form(&p0, cfg.surface.chi)?;
    let det = det_bound(&f0, cfg.surface.det_eps0)?;

    let mut w = Writer::new(cfg)?;
    w.csv("surface.csv", &f0.to_csv()?)?;
    w.csv("expansion.csv", &expansion_csv(&f0))?;
    w.csv("rena_fit.csv", &fit.to_csv())?;
    w.plot("rena_fit.gp", &RenAFit::plot("rena_fit.csv"))?;
    let mut summary = format!(
        "model {}\nnewton_iterations {}\nresidual {}\nmax_h {}\n",
        model.name(),
        f0.residual_history.len(),
        fmt12(f0.residual_history.last().copied().unwrap_or(f64::NAN)),
        fmt12(f0.max_h)
    );
    if let Some(e) = &f0.expansion {
        let _ = writeln!(summary, "u3_integral {}", fmt12(e.u3_integral));
        let _ = writeln!(summary, "expansion_fit_residual {}", fmt12(e.fit_residual));
    }
    summary.push_str(&fit.summary());
    let _ = writeln!(
        summary,
        "closed_form {}\nclosed_willmore {}\nclosed_umbilic {}\nclosed_sectional {}",
        fmt12(closed.value),
        fmt12(closed.willmore),
        fmt12(closed.umbilic),
        fmt12(closed.sectional)
    );
    let _ = writeln!(
        summary,
        "det_literal_margin {}\ndet_corrected_margin {}\ndet_literal_holds {}\ndet_corrected_holds {}",
        fmt12(det.literal_margin),
        fmt12(det.corrected_margin),
        det.literal_holds,
        det.corrected_holds
    );
    w.finish(Status::Success, summary)
}

/// RenA(t) along the flow, first and second variation, evolution and
/// Riccati residuals.
pub fn cmd_flow(cfg: &ExperimentConfig, _profile: ToleranceProfile) -> Result<Outcome> {
    let model = cfg.model.build()?;
    let f0 = solve_f0(cfg, &model)?;
    let fc = &cfg.flow;
    let times = uniform_times(fc.t_end, fc.steps);
    let fam = flow_integrate(&f0, &fc.generator, fc.mode, &times)?;
    let curve = rena_curve(&fam, Some(&cfg.ladder.eps));
    let fd = fd_rena(&f0, &fc.generator, fc.mode, fc.fd_delta)?;
    let first = first_variation_check(&f0, &fc.generator, fc.fd_delta, fc.first_tol)?;
    let second = second_variation_check(&f0, fc.fd_delta, fc.second_tol, fc.second_abs_floor)?;
    let evolution = fc
        .evolution_times
        .iter()
        .map(|&t| evolution_check(&f0, t, fc.evolution_step, fc.evolution_x_cut))
        .collect::<Result<Vec<_>>>()?;

    let mut w = Writer::new(cfg)?;
    w.csv("rena_t.csv", &curve.to_csv())?;
    w.plot("rena_t.gp", &rena_plot("rena_t.csv"))?;
    let mut fdc = Csv::new(&["t", "rena"]);
    for (t, v) in fd.times.iter().zip(&fd.values) {
        fdc.push(&[*t, *v]);
    }
    w.csv("fd_samples.csv", &fdc.render())?;
    w.csv("variation.csv", &variation_csv(&first, &second))?;
    let mut ev = Csv::new(&[
        "t",
        "points",
        "evolution_residual",
        "riccati_margin",
        "riccati_sharp_margin",
        "max_h",
    ]);
    for r in &evolution {
        ev.push(&[
            r.t,
            r.points as f64,
            r.evolution_residual,
            r.riccati_margin,
            r.riccati_sharp_margin,
            r.max_h,
        ]);
    }
    w.csv("evolution.csv", &ev.render())?;

    let mut summary = format!(
        "model {}\nrena_spread {}\ndivergence_mismatch {}\nmax_increase {}\n",
        model.name(),
        fmt12(curve.spread),
        fmt12(curve.divergence_mismatch),
        fmt12(curve.max_increase)
    );
    let _ = writeln!(
        summary,
        "fd_first {}\nfd_first_order {}\nfd_second {}\nfd_second_order {}",
        fmt12(fd.first.value),
        fmt12(fd.first.order),
        fmt12(fd.second.value),
        fmt12(fd.second.order)
    );
    let _ = writeln!(
        summary,
        "first_variation_formula {}\nfirst_variation_rel_error {}\nfirst_variation_matches {}\nfirst_variation_tail_estimate {}",
        fmt12(first.formula),
        fmt12(first.rel_error),
        first.matches,
        fmt12(first.bulk_tail_bound)
    );
    for k in 0..4 {
        let _ = writeln!(
            summary,
            "second_variation {} {} rel_error {} match {}",
            VARIANT_NAMES[k],
            fmt12(second.variants[k]),
            fmt12(second.rel_errors[k]),
            second.matches[k]
        );
    }
    let _ = writeln!(
        summary,
        "second_variation_selected {}",
        second.selected().map(|k| VARIANT_NAMES[k]).unwrap_or("none")
    );
    let failed: Vec<String> = curve
        .points
        .iter()
        .filter_map(|p| p.error.as_ref().map(|e| format!("t={} {e}", fmt12(p.t))))
        .collect();
    for f in &failed {
        let _ = writeln!(summary, "error {f}");
    }
    let status = if !failed.is_empty() {
        Status::Failed(format!("{} flow times failed", failed.len()))
    } else if !first.conclusive {
        Status::Inconclusive(format!("FD order {} not established", first.fd.order))
    } else {
        Status::Success
    };
    w.finish(status, summary)
}

fn scan_samples(cfg: &ExperimentConfig, model: &MetricModel) -> Result<usize> {
    let ps = model
        .s_period()
        .ok_or_else(|| Error::Precondition(format!("{} has no torus boundary", model.name())))?;
    match &cfg.scan.s_values {
        None => Ok(cfg.scan.samples),
        Some(v) => {
            if v.len() < 4 {
                return Err(Error::Config("s grid needs at least four values".into()));
            }
            let n = v.len() - 1;
            for (k, s) in v.iter().enumerate() {
                if (s - ps * k as f64 / n as f64).abs() > 1e-12 * ps {
                    return Err(Error::Config(format!(
                        "s grid is not the periodic grid k·{ps}/{n}"
                    )));
                }
            }
            Ok(n)
        }
    }
}

/// Profile of RenA over the circles {s = const} with the Neumann integrals.
pub fn cmd_scan(cfg: &ExperimentConfig, _profile: ToleranceProfile) -> Result<Outcome> {
    let model = cfg.model.build()?;
    let n = scan_samples(cfg, &model)?;
    let report = profile_scan(&model, n, &cfg.surface.solve_spec())?;
    let mut w = Writer::new(cfg)?;
    w.csv("profile.csv", &report.to_csv())?;
    w.plot("profile.gp", &ProfileReport::plot("profile.csv"))?;
    let status = if report.failures > 0 {
        Status::Failed(format!("{} samples failed", report.failures))
    } else {
        Status::Success
    };
    w.finish(status, report.summary())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        let bad = "[model]\nkind = \"hyperbolic3\"\nanchr = 1.0\n";
        assert!(matches!(ExperimentConfig::from_toml(bad), Err(Error::Config(_))));
        let bad = "[model]\nkind = \"hyperbolic3\"\n[surface]\nncheb = 3\n";
        assert!(ExperimentConfig::from_toml(bad).is_err());
    }

    #[test]
    fn resolved_config_round_trips() {
        let cfg = ExperimentConfig::from_toml("[model]\nkind = \"horowitz_myers\"\n")
            .unwrap()
            .resolve(ToleranceProfile::Fast, None)
            .unwrap();
        assert_eq!(cfg.surface.tol, Some(1e-8));
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn non_periodic_s_grid_rejected() {
        let text = "[model]\nkind = \"horowitz_myers\"\n[scan]\ns_values = [0.0, 0.5, 1.0, 1.7]\n";
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        let model = cfg.model.build().unwrap();
        assert!(matches!(scan_samples(&cfg, &model), Err(Error::Config(_))));
        let text = "[model]\nkind = \"horowitz_myers\"\n[scan]\ns_values = [0.0, 0.5, 1.0, 1.5, 2.0]\n";
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(scan_samples(&cfg, &model).unwrap(), 4);
    }
}
