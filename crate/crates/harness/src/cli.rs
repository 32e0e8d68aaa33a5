//! The `caprise` command line.

use std::io::Write;
use std::path::{Path, PathBuf};

use caprise_core::ode::{self, ca_max, IntegrateOptions, ModelSpec, RiseState};
use caprise_core::physics::{dimensionless_numbers, height_correction, jurin_height, stationary_height};
use caprise_core::scaling::{coefficients, nondimensionalize, Dim, ScalingKind};
use caprise_core::study::{crossover_cells, step_counts, timestep_limits, HALF_WIDTH};
use caprise_core::SlipSpec;
use caprise_vof2d::CaseSetup2D;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::cases::{case_for, omega_label, suite_variant, SlipVariant, SUITE_NAME};
use crate::compare::compare;
use crate::error::{Error, Result};
use crate::export::{read_trajectory, write_csv, write_trajectory};
use crate::suite::{export, run_suite, ModelChoice, ScalingChoice, SuiteOptions, SUMMARY_FILE};

#[derive(Debug, Parser)]
#[command(name = "caprise", version, about = "Capillary rise between plates: models, scalings and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CaseArgs {
    /// Non-dimensional group Ω
    #[arg(long, allow_hyphen_values = true)]
    pub omega: f64,
    /// Surface tension, N/m
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OdeModel {
    Classical,
    Extended,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    NavierR5,
    NavierR50,
    Numerical,
}

/// End time in seconds or `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EndTime {
    Auto,
    Seconds(f64),
}

fn parse_end_time(s: &str) -> std::result::Result<EndTime, String> {
    if s == "auto" {
        return Ok(EndTime::Auto);
    }
    match s.parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(EndTime::Seconds(t)),
        _ => Err(format!("expected `auto` or a positive time in seconds, got `{s}`")),
    }
}

/// `numerical` or `navier:<slip length in m>`.
fn parse_slip(s: &str) -> std::result::Result<SlipSpec, String> {
    if s == "numerical" {
        return Ok(SlipSpec::Numerical);
    }
    let length = s
        .strip_prefix("navier:")
        .ok_or_else(|| format!("expected `numerical` or `navier:<m>`, got `{s}`"))?;
    let l: f64 = length.parse().map_err(|e| format!("slip length `{length}`: {e}"))?;
    SlipSpec::navier(l).map_err(|e| e.to_string())
}

fn parse_scaling(s: &str) -> std::result::Result<ScalingChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scaling_kind(s: &str) -> std::result::Result<ScalingKind, String> {
    s.parse().map_err(|e: caprise_core::Error| e.to_string())
}

fn parse_model(s: &str) -> std::result::Result<ModelChoice, String> {
    match s {
        "classical" => Ok(ModelChoice::Classical),
        "extended" => Ok(ModelChoice::Extended),
        "vof2d" => Ok(ModelChoice::Vof2d),
        _ => Err(format!("unknown model `{s}` (classical, extended, vof2d)")),
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Jurin height, meniscus correction and stationary height (JSON)
    Steady(CaseArgs),
    /// Synthesized parameter row for one (Ω, σ) pair (JSON)
    Params(CaseArgs),
    /// Time step limits, crossover resolution and step counts (JSON)
    Cost {
        #[command(flatten)]
        case: CaseArgs,
        /// Cells per radius
        #[arg(long)]
        cells: f64,
    },
    /// Integrate a reduced-order rise model (CSV)
    Ode {
        #[arg(long, value_enum)]
        model: OdeModel,
        #[command(flatten)]
        case: CaseArgs,
        /// Navier slip length in m (extended model; default R/5)
        #[arg(long)]
        slip_length: Option<f64>,
        /// Initial height in m (default 2R)
        #[arg(long)]
        h0: Option<f64>,
        #[arg(long, default_value = "auto", value_parser = parse_end_time)]
        t_end: EndTime,
        /// Output CSV; stdout when absent
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert a dimensional trajectory CSV to scaled units
    Scale {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_scaling_kind)]
        scaling: ScalingKind,
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        dim: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the 2D VOF solver on the half gap (CSV)
    Sim2d {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        cells_per_radius: usize,
        /// `numerical` or `navier:<m>`
        #[arg(long, value_parser = parse_slip)]
        slip: SlipSpec,
        #[arg(long, default_value = "auto", value_parser = parse_end_time)]
        t_end: EndTime,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the benchmark suite and export trajectories plus a summary
    Bench {
        #[arg(long, default_value = SUITE_NAME)]
        suite: String,
        #[arg(long, value_delimiter = ',', default_value = "classical,extended", value_parser = parse_model)]
        models: Vec<ModelChoice>,
        #[arg(long, value_delimiter = ',', default_value = "none", value_parser = parse_scaling)]
        scalings: Vec<ScalingChoice>,
        /// Also run the 2D solver with this many cells per radius
        #[arg(long)]
        with_pde: Option<usize>,
        #[arg(long, value_enum, default_value = "navier-r5")]
        variant: Variant,
        /// Multiplier on the automatic end time
        #[arg(long, default_value_t = 1.0)]
        t_end_factor: f64,
        /// Worker threads (0: one per core)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Record wall times (makes the summary run-dependent)
        #[arg(long)]
        wall_time: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Deviation metrics between two trajectory CSVs (JSON)
    Compare {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

fn print_json<W: Write>(out: &mut W, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    writeln!(out, "{text}").map_err(|e| Error::io("<stdout>", e))
}

fn end_time(t: EndTime, case: &caprise_core::CaseSpec) -> Result<f64> {
    Ok(match t {
        EndTime::Auto => ode::auto_end_time(&case.fluid, &case.geometry)?,
        EndTime::Seconds(s) => s,
    })
}

fn write_or_print<W: Write>(out: &mut W, path: Option<&Path>, traj: &caprise_core::Trajectory) -> Result<()> {
    match path {
        Some(p) => write_trajectory(p, traj),
        None => write_csv(&mut *out, traj).map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn execute<W: Write>(cli: Cli, out: &mut W) -> Result<()> {
    let default_slip = SlipVariant::NavierR5.slip(HALF_WIDTH);
    match cli.command {
        Command::Steady(c) => {
            let case = case_for(c.omega, c.sigma, default_slip, omega_label(c.omega))?;
            let (f, g) = (&case.fluid, &case.geometry);
            print_json(
                out,
                &json!({
                    "h_jurin": jurin_height(f, g),
                    "h_hat": height_correction(g),
                    "h_inf": stationary_height(f, g),
                }),
            )
        }
        Command::Params(c) => {
            let case = case_for(c.omega, c.sigma, default_slip, omega_label(c.omega))?;
            let (f, g) = (&case.fluid, &case.geometry);
            let n = dimensionless_numbers(f, g)?;
            let t_end = ode::auto_end_time(f, g)?;
            let model = ModelSpec::extended(HALF_WIDTH / 5.0);
            let traj = ode::integrate(&model, f, g, RiseState::at_rest(g.initial_height), &IntegrateOptions::new(t_end))?;
            print_json(
                out,
                &json!({
                    "omega": c.omega,
                    "R": g.half_width,
                    "rho": f.rho_l,
                    "mu": f.mu_l,
                    "g": f.g,
                    "sigma": f.sigma,
                    "theta_deg": g.contact_angle.to_degrees(),
                    "ca_max": ca_max(&traj, f),
                    "eo": n.eotvos,
                    "rho_g": f.rho_g,
                    "mu_g": f.mu_g,
                    "oh": n.ohnesorge,
                    "t_end": t_end,
                }),
            )
        }
        Command::Cost { case: c, cells } => {
            let case = case_for(c.omega, c.sigma, default_slip, omega_label(c.omega))?;
            let (f, g) = (&case.fluid, &case.geometry);
            let dx = g.half_width / cells;
            let lim = timestep_limits(f, dx, 0.0)?;
            let steps = step_counts(f, g, cells)?;
            let by_kind = |v: [f64; 3]| json!({"I": v[0], "II": v[1], "III": v[2]});
            print_json(
                out,
                &json!({
                    "cells": cells,
                    "dx": dx,
                    "dt_sigma": lim.dt_sigma_estimate,
                    "dt_sigma_solver": lim.dt_sigma_solver,
                    "dt_mu": lim.dt_mu,
                    "n_star_cells": crossover_cells(f, g)?,
                    "n_steps_sigma": by_kind(steps.sigma),
                    "n_steps_mu": by_kind(steps.mu),
                }),
            )
        }
        Command::Ode {
            model,
            case: c,
            slip_length,
            h0,
            t_end,
            out: path,
        } => {
            let case = case_for(c.omega, c.sigma, default_slip, omega_label(c.omega))?;
            let spec = match model {
                OdeModel::Classical => ModelSpec::classical(),
                OdeModel::Extended => ModelSpec::extended(slip_length.unwrap_or(HALF_WIDTH / 5.0)),
            };
            let init = RiseState::at_rest(h0.unwrap_or(case.geometry.initial_height));
            let opts = IntegrateOptions::new(end_time(t_end, &case)?);
            let mut traj = ode::integrate(&spec, &case.fluid, &case.geometry, init, &opts)?;
            traj.meta.label = case.label.clone();
            write_or_print(out, path.as_deref(), &traj)
        }
        Command::Scale {
            input,
            scaling,
            case: c,
            dim,
            out: path,
        } => {
            let case = case_for(c.omega, c.sigma, default_slip, omega_label(c.omega))?;
            let traj = read_trajectory(&input)?;
            let dim = if dim == 3 { Dim::Three } else { Dim::Two };
            let s = coefficients(&case.fluid, &case.geometry, dim)?;
            write_trajectory(&path, &nondimensionalize(&traj, scaling, &s))
        }
        Command::Sim2d {
            case: c,
            cells_per_radius,
            slip,
            t_end,
            out: path,
        } => {
            let case = case_for(c.omega, c.sigma, slip, omega_label(c.omega))?;
            let setup = CaseSetup2D::new(case.clone(), cells_per_radius, end_time(t_end, &case)?);
            let run = caprise_vof2d::run(&setup)?;
            write_trajectory(&path, &run.trajectory)?;
            let h_final = run.trajectory.last().map(|s| s.h);
            print_json(
                out,
                &json!({
                    "n_steps": run.n_steps,
                    "h_final": h_final,
                    "h_inf": run.trajectory.meta.h_inf,
                    "diagnostics": run.diagnostics,
                }),
            )
        }
        Command::Bench {
            suite,
            models,
            scalings,
            with_pde,
            variant,
            t_end_factor,
            workers,
            wall_time,
            out_dir,
        } => {
            if suite != SUITE_NAME {
                return Err(Error::Argument(format!("unknown suite `{suite}` (expected `{SUITE_NAME}`)")));
            }
            let variant = match variant {
                Variant::NavierR5 => SlipVariant::NavierR5,
                Variant::NavierR50 => SlipVariant::NavierR50,
                Variant::Numerical => SlipVariant::Numerical,
            };
            let opts = SuiteOptions {
                models,
                scalings,
                pde_cells: with_pde,
                t_end_factor,
                workers,
                record_wall_time: wall_time,
            };
            let cases = suite_variant(variant);
            let mut report = run_suite(&cases, &opts)?;
            export(&mut report, &opts.scalings, &out_dir)?;
            let failures: Vec<_> = report
                .failures()
                .map(|f| json!({"label": f.case.label, "model": f.model, "error": f.error}))
                .collect();
            print_json(
                out,
                &json!({
                    "runs": report.outcomes.len(),
                    "failures": failures,
                    "files": report.files.len(),
                    "summary": out_dir.join(SUMMARY_FILE),
                }),
            )
        }
        Command::Compare { a, b } => {
            let metrics = compare(&read_trajectory(&a)?, &read_trajectory(&b)?)?;
            print_json(out, &serde_json::to_value(metrics)?)
        }
    }
}
