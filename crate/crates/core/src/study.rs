//! Parameter synthesis for the Ω study and explicit-solver cost estimates.
//!
//! Every case shares R, μ_l, θ_e, the phase ratios and the initial and
//! domain heights. Fixing h_Jurin = 4R and the requested Ω leaves ρ_l and g
//! determined once σ is chosen:
//!
//! ```text
//! ρ_l = 144 μ² / (Ω² R σ cos θ),    g = σ cos θ / (4 R² ρ_l)
//! ```

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::physics::{FluidPair, Geometry};
use crate::scaling::{coefficients, units, Dim, ScalingKind};

pub const HALF_WIDTH: f64 = 0.005;
pub const LIQUID_VISCOSITY: f64 = 0.01;
pub const CONTACT_ANGLE_DEG: f64 = 30.0;
pub const DENSITY_RATIO: f64 = 1000.0;
pub const VISCOSITY_RATIO: f64 = 1000.0;
/// Jurin height in units of R shared by all cases.
pub const JURIN_OVER_R: f64 = 4.0;
pub const INITIAL_HEIGHT_OVER_R: f64 = 2.0;
pub const DOMAIN_HEIGHT_OVER_R: f64 = 8.0;

/// The (Ω, σ) pairs of the study.
pub const OMEGA_STUDY: [(f64, f64); 5] = [
    (0.1, 0.2),
    (0.5, 0.1),
    (1.0, 0.04),
    (10.0, 0.01),
    (100.0, 0.001),
];

pub fn study_geometry() -> Geometry {
    Geometry {
        half_width: HALF_WIDTH,
        contact_angle: CONTACT_ANGLE_DEG.to_radians(),
        initial_height: INITIAL_HEIGHT_OVER_R * HALF_WIDTH,
        domain_height: DOMAIN_HEIGHT_OVER_R * HALF_WIDTH,
    }
}

/// Fluid pair with the requested Ω and a Jurin height of 4R.
pub fn synth_params(omega: f64, sigma: f64) -> Result<(FluidPair, Geometry)> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(invalid("omega", "must be finite and > 0"));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", "must be finite and > 0"));
    }
    let geom = study_geometry();
    let r = geom.half_width;
    let cos_theta = geom.cos_theta();
    let mu = LIQUID_VISCOSITY;
    let rho = 144.0 * mu * mu / (omega * omega * r * sigma * cos_theta);
    let g = sigma * cos_theta / (JURIN_OVER_R * r * r * rho);
    let fluid = FluidPair::with_ratios(rho, mu, sigma, g, DENSITY_RATIO, VISCOSITY_RATIO)?;
    Ok((fluid, geom))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimestepLimits {
    /// Capillary limit with ρ_l only, used for cost estimates.
    pub dt_sigma_estimate: f64,
    /// Capillary limit with ρ_l + ρ_g, used by the grid solver.
    pub dt_sigma_solver: f64,
    pub dt_mu: f64,
    /// Advective limit; +∞ when the fluid is at rest.
    pub dt_u: f64,
}

pub fn timestep_limits(fluid: &FluidPair, dx: f64, u_max: f64) -> Result<TimestepLimits> {
    if !(dx > 0.0) {
        return Err(invalid("dx", "must be > 0"));
    }
    if !(u_max >= 0.0) {
        return Err(invalid("u_max", "must be ≥ 0"));
    }
    let capillary = |rho: f64| (rho * dx.powi(3) / (4.0 * PI * fluid.sigma)).sqrt();
    Ok(TimestepLimits {
        dt_sigma_estimate: capillary(fluid.rho_l),
        dt_sigma_solver: capillary(fluid.rho_l + fluid.rho_g),
        dt_mu: fluid.rho_l * dx * dx / (6.0 * fluid.mu_l),
        dt_u: if u_max == 0.0 { f64::INFINITY } else { dx / u_max },
    })
}

/// Cells per radius at which the capillary and viscous limits coincide,
/// π / (9 Oh²).
pub fn crossover_cells(fluid: &FluidPair, geom: &Geometry) -> Result<f64> {
    if geom.cos_theta() <= 0.0 {
        return Err(Error::NonWettingAngle {
            theta_rad: geom.contact_angle,
        });
    }
    let oh2 = fluid.mu_l * fluid.mu_l / (fluid.sigma * fluid.rho_l * geom.half_width);
    Ok(PI / (9.0 * oh2))
}

/// Step counts to reach scaled time 1, indexed by scaling I, II, III.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepCounts {
    pub sigma: [f64; 3],
    pub mu: [f64; 3],
}

pub fn step_counts(fluid: &FluidPair, geom: &Geometry, n_cells: f64) -> Result<StepCounts> {
    if !(n_cells >= 1.0) {
        return Err(invalid("n_cells", "must be ≥ 1"));
    }
    let dx = geom.half_width / n_cells;
    let limits = timestep_limits(fluid, dx, 0.0)?;
    let s = coefficients(fluid, geom, Dim::Two)?;
    let rates = ScalingKind::ALL.map(|k| units(k, &s).t_rate);
    Ok(StepCounts {
        sigma: rates.map(|r| 1.0 / (r * limits.dt_sigma_estimate)),
        mu: rates.map(|r| 1.0 / (r * limits.dt_mu)),
    })
}
