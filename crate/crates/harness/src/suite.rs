//! Suite execution: run every (case, model) pair, score it against the
//! stationary height, and export trajectories and a summary.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use caprise_core::ode::{
    self, ca_max, detect_peaks, settle_metrics, IntegrateOptions, ModelSpec, PeakList, RiseState,
};
use caprise_core::physics::{height_correction, jurin_height};
use caprise_core::scaling::{coefficients, nondimensionalize, Dim, ScalingKind};
use caprise_core::{CaseSpec, Trajectory};
use caprise_vof2d::CaseSetup2D;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cases::{ode_slip_length, slip_tag};
use crate::error::{Error, Result};
use crate::export::write_trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelChoice {
    Classical,
    Extended,
    Vof2d,
}

impl ModelChoice {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelChoice::Classical => "classical",
            ModelChoice::Extended => "extended",
            ModelChoice::Vof2d => "vof2d",
        }
    }
}

/// Representation of an exported curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalingChoice {
    #[serde(rename = "none")]
    Dimensional,
    Scaled(ScalingKind),
}

impl ScalingChoice {
    pub fn tag(&self) -> &'static str {
        match self {
            ScalingChoice::Dimensional => "none",
            ScalingChoice::Scaled(k) => k.as_str(),
        }
    }
}

impl std::str::FromStr for ScalingChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("none") {
            return Ok(ScalingChoice::Dimensional);
        }
        s.parse::<ScalingKind>()
            .map(ScalingChoice::Scaled)
            .map_err(|_| Error::Argument(format!("unknown scaling `{s}` (none, I, II, III)")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOptions {
    pub models: Vec<ModelChoice>,
    pub scalings: Vec<ScalingChoice>,
    /// Cells per radius for grid runs; grid runs are skipped without it.
    pub pde_cells: Option<usize>,
    /// Multiplier on the automatic end time.
    pub t_end_factor: f64,
    /// Worker threads; 0 uses the rayon default.
    pub workers: usize,
    /// Store measured wall times. Off by default so that outputs are
    /// reproducible byte for byte.
    pub record_wall_time: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            models: vec![ModelChoice::Classical, ModelChoice::Extended],
            scalings: vec![ScalingChoice::Dimensional],
            pde_cells: None,
            t_end_factor: 1.0,
            workers: 0,
            record_wall_time: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub case: CaseSpec,
    pub model: ModelChoice,
    pub trajectory: Trajectory,
    pub h_jurin: f64,
    pub h_hat: f64,
    /// Stationary height the model is expected to reach.
    pub h_inf_predicted: f64,
    pub h_final: f64,
    pub rel_stationary_err: f64,
    pub peaks: PeakList,
    pub ca_max: f64,
    pub t_settle: Option<f64>,
    pub wall_time: Option<f64>,
    /// Time steps of grid runs; `None` for the adaptive ODE integrator.
    pub step_count: Option<usize>,
}

/// Integrates one of the reduced-order models for a case from rest at h0.
pub fn run_ode(case: &CaseSpec, model: ModelChoice, t_end: f64) -> Result<Trajectory> {
    let spec = match model {
        ModelChoice::Classical => ModelSpec::classical(),
        ModelChoice::Extended => ModelSpec::extended(ode_slip_length(&case.slip)),
        ModelChoice::Vof2d => return Err(Error::Argument("vof2d is not an ODE model".into())),
    };
    let init = RiseState::at_rest(case.geometry.initial_height);
    let mut traj = ode::integrate(&spec, &case.fluid, &case.geometry, init, &IntegrateOptions::new(t_end))?;
    traj.meta.label = case.label.clone();
    Ok(traj)
}

pub fn run_case(case: &CaseSpec, model: ModelChoice, opts: &SuiteOptions) -> Result<BenchResult> {
    if !(opts.t_end_factor > 0.0 && opts.t_end_factor.is_finite()) {
        return Err(Error::Argument("t_end factor must be finite and > 0".into()));
    }
    let t_end = ode::auto_end_time(&case.fluid, &case.geometry)? * opts.t_end_factor;
    let start = Instant::now();
    let (trajectory, step_count) = match model {
        ModelChoice::Classical | ModelChoice::Extended => (run_ode(case, model, t_end)?, None),
        ModelChoice::Vof2d => {
            let cells = opts.pde_cells.ok_or_else(|| {
                Error::Argument("grid runs need a resolution (--with-pde <cells>)".into())
            })?;
            let out = caprise_vof2d::run(&CaseSetup2D::new(case.clone(), cells, t_end))?;
            (out.trajectory, Some(out.n_steps))
        }
    };
    let wall = start.elapsed().as_secs_f64();
    score(case, model, trajectory, step_count, opts.record_wall_time.then_some(wall))
}

fn score(
    case: &CaseSpec,
    model: ModelChoice,
    trajectory: Trajectory,
    step_count: Option<usize>,
    wall_time: Option<f64>,
) -> Result<BenchResult> {
    let h_jurin = jurin_height(&case.fluid, &case.geometry);
    let h_hat = height_correction(&case.geometry);
    let h_inf = match model {
        ModelChoice::Classical => h_jurin,
        ModelChoice::Extended | ModelChoice::Vof2d => h_jurin - h_hat,
    };
    let settle = settle_metrics(&trajectory, h_inf)?;
    Ok(BenchResult {
        case: case.clone(),
        model,
        h_jurin,
        h_hat,
        h_inf_predicted: h_inf,
        h_final: settle.h_final,
        rel_stationary_err: (settle.h_final - h_inf).abs() / h_inf,
        peaks: detect_peaks(&trajectory),
        ca_max: ca_max(&trajectory, &case.fluid),
        t_settle: settle.t_settle,
        wall_time,
        step_count,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseFailure {
    pub case: CaseSpec,
    pub model: ModelChoice,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Done(Box<BenchResult>),
    Failed(CaseFailure),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    /// One entry per (case, model) pair in input order.
    pub outcomes: Vec<Outcome>,
    /// Files written, in write order.
    pub files: Vec<PathBuf>,
}

impl SuiteReport {
    pub fn results(&self) -> impl Iterator<Item = &BenchResult> {
        self.outcomes.iter().filter_map(|o| match o {
            Outcome::Done(r) => Some(r.as_ref()),
            Outcome::Failed(_) => None,
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseFailure> {
        self.outcomes.iter().filter_map(|o| match o {
            Outcome::Failed(f) => Some(f),
            Outcome::Done(_) => None,
        })
    }
}

fn jobs(cases: &[CaseSpec], opts: &SuiteOptions) -> Vec<(CaseSpec, ModelChoice)> {
    let mut models = opts.models.clone();
    if opts.pde_cells.is_some() && !models.contains(&ModelChoice::Vof2d) {
        models.push(ModelChoice::Vof2d);
    }
    cases
        .iter()
        .flat_map(|c| models.iter().map(move |&m| (c.clone(), m)))
        .collect()
}

/// Runs every (case, model) pair, in parallel up to `opts.workers`, and
/// returns the outcomes in input order. Per-pair failures are recorded, not
/// raised.
pub fn run_suite(cases: &[CaseSpec], opts: &SuiteOptions) -> Result<SuiteReport> {
    let jobs = jobs(cases, opts);
    let work = || -> Vec<Outcome> {
        jobs.par_iter()
            .map(|(case, model)| match run_case(case, *model, opts) {
                Ok(r) => Outcome::Done(Box::new(r)),
                Err(e) => Outcome::Failed(CaseFailure {
                    case: case.clone(),
                    model: *model,
                    error: e.to_string(),
                }),
            })
            .collect()
    };
    let outcomes = if opts.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::Argument(format!("worker pool: {e}")))?
            .install(work)
    } else {
        work()
    };
    Ok(SuiteReport {
        outcomes,
        files: Vec::new(),
    })
}

/// `<label>_<model>_<scaling>.csv`
pub fn trajectory_file_name(label: &str, model: ModelChoice, scaling: ScalingChoice) -> String {
    format!("{label}_{}_{}.csv", model.as_str(), scaling.tag())
}

pub const SUMMARY_FILE: &str = "summary.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsEntry {
    pub rho: f64,
    pub mu: f64,
    pub sigma: f64,
    pub g: f64,
    #[serde(rename = "R")]
    pub r: f64,
    pub theta_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakEntry {
    pub t: f64,
    pub h: f64,
    pub is_max: bool,
}

/// One row of the summary JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryEntry {
    pub label: String,
    pub omega: f64,
    pub model: ModelChoice,
    pub slip: String,
    pub params: ParamsEntry,
    pub h_jurin: Option<f64>,
    pub h_hat: Option<f64>,
    pub h_inf: Option<f64>,
    pub h_final: Option<f64>,
    pub rel_stationary_err: Option<f64>,
    pub ca_max: Option<f64>,
    pub t_settle: Option<f64>,
    pub peaks: Vec<PeakEntry>,
    pub n_steps: Option<usize>,
    pub wall_time_s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

fn params_entry(case: &CaseSpec) -> ParamsEntry {
    ParamsEntry {
        rho: case.fluid.rho_l,
        mu: case.fluid.mu_l,
        sigma: case.fluid.sigma,
        g: case.fluid.g,
        r: case.geometry.half_width,
        theta_deg: case.geometry.contact_angle.to_degrees(),
    }
}

impl SummaryEntry {
    pub fn from_outcome(outcome: &Outcome) -> Self {
        match outcome {
            Outcome::Done(r) => SummaryEntry {
                label: r.case.label.clone(),
                omega: r.case.omega_nominal,
                model: r.model,
                slip: slip_tag(&r.case.slip),
                params: params_entry(&r.case),
                h_jurin: Some(r.h_jurin),
                h_hat: Some(r.h_hat),
                h_inf: Some(r.h_inf_predicted),
                h_final: Some(r.h_final),
                rel_stationary_err: Some(r.rel_stationary_err),
                ca_max: Some(r.ca_max),
                t_settle: r.t_settle,
                peaks: r
                    .peaks
                    .peaks
                    .iter()
                    .map(|p| PeakEntry {
                        t: p.t,
                        h: p.h,
                        is_max: p.is_max,
                    })
                    .collect(),
                n_steps: r.step_count,
                wall_time_s: r.wall_time,
                error: None,
            },
            Outcome::Failed(f) => SummaryEntry {
                label: f.case.label.clone(),
                omega: f.case.omega_nominal,
                model: f.model,
                slip: slip_tag(&f.case.slip),
                params: params_entry(&f.case),
                h_jurin: None,
                h_hat: None,
                h_inf: None,
                h_final: None,
                rel_stationary_err: None,
                ca_max: None,
                t_settle: None,
                peaks: Vec::new(),
                n_steps: None,
                wall_time_s: None,
                error: Some(f.error.clone()),
            },
        }
    }
}

/// Trajectory in the requested representation (2D scaling coefficients).
pub fn represent(traj: &Trajectory, case: &CaseSpec, scaling: ScalingChoice) -> Result<Trajectory> {
    match scaling {
        ScalingChoice::Dimensional => Ok(traj.clone()),
        ScalingChoice::Scaled(kind) => {
            let s = coefficients(&case.fluid, &case.geometry, Dim::Two)?;
            Ok(nondimensionalize(traj, kind, &s))
        }
    }
}

/// Writes one CSV (plus sidecar) per successful result and scaling, then
/// `summary.json`, all in input order.
pub fn export(report: &mut SuiteReport, scalings: &[ScalingChoice], out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut files = Vec::new();
    for r in report.results() {
        for &scaling in scalings {
            let traj = represent(&r.trajectory, &r.case, scaling)?;
            let path = out_dir.join(trajectory_file_name(&r.case.label, r.model, scaling));
            write_trajectory(&path, &traj)?;
            files.push(path);
        }
    }
    let summary: Vec<SummaryEntry> = report.outcomes.iter().map(SummaryEntry::from_outcome).collect();
    let path = out_dir.join(SUMMARY_FILE);
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    files.push(path);
    report.files = files;
    Ok(())
}
