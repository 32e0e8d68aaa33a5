//! Non-dimensional forms of the extended rise model.
//!
//! The coefficients a, b, c collect inertia, viscous friction and gravity
//! relative to capillary suction. Each scaling picks a clock and a height
//! unit from them; `t* = t_rate·t`, `h* = h_rate·h` and, by the chain rule,
//! `ḣ* = (h_rate / t_rate)·ḣ`. In every scaling the extended model depends
//! on the single group Ω = √(b² / (a c²)) plus the slip groups K and Q.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ode::{dopri, RiseState, Tolerance, SINGULAR_HEIGHT_FRACTION};
use crate::physics::{FluidPair, Geometry};
use crate::trajectory::{Representation, Sample, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dim {
    #[serde(rename = "2D")]
    Two,
    #[serde(rename = "3D")]
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleSet {
    /// Inertia coefficient, s²/m².
    pub a: f64,
    /// Viscous coefficient, s/m².
    pub b: f64,
    /// Gravity coefficient, 1/m.
    pub c: f64,
    pub dim: Dim,
    pub omega: f64,
}

/// Scaling coefficients from the liquid properties.
pub fn coefficients(fluid: &FluidPair, geom: &Geometry, dim: Dim) -> Result<ScaleSet> {
    let cos_theta = geom.cos_theta();
    if cos_theta <= 0.0 {
        return Err(Error::NonWettingAngle {
            theta_rad: geom.contact_angle,
        });
    }
    let r = geom.half_width;
    let capillary = fluid.sigma * cos_theta;
    let (a, b, c) = match dim {
        Dim::Two => (
            fluid.rho_l * r / capillary,
            3.0 * fluid.mu_l / (r * capillary),
            fluid.rho_l * fluid.g * r / capillary,
        ),
        Dim::Three => (
            fluid.rho_l * r / (2.0 * capillary),
            4.0 * fluid.mu_l / (r * capillary),
            fluid.rho_l * fluid.g * r / (2.0 * capillary),
        ),
    };
    Ok(ScaleSet {
        a,
        b,
        c,
        dim,
        omega: (b * b / (a * c * c)).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalingKind {
    I,
    II,
    III,
}

impl ScalingKind {
    pub const ALL: [ScalingKind; 3] = [ScalingKind::I, ScalingKind::II, ScalingKind::III];

    pub fn as_str(&self) -> &'static str {
        match self {
            ScalingKind::I => "I",
            ScalingKind::II => "II",
            ScalingKind::III => "III",
        }
    }
}

impl fmt::Display for ScalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScalingKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(ScalingKind::I),
            "II" | "2" => Ok(ScalingKind::II),
            "III" | "3" => Ok(ScalingKind::III),
            other => Err(invalid("scaling", format!("unknown scaling `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    /// t* = t_rate · t, 1/s.
    pub t_rate: f64,
    /// h* = h_rate · h, 1/m.
    pub h_rate: f64,
}

impl Units {
    pub fn v_rate(&self) -> f64 {
        self.h_rate / self.t_rate
    }
}

pub fn units(kind: ScalingKind, s: &ScaleSet) -> Units {
    let ScaleSet { a, b, c, .. } = *s;
    match kind {
        ScalingKind::I => Units {
            t_rate: c * c / b,
            h_rate: c,
        },
        ScalingKind::II => Units {
            t_rate: (c * c / a).sqrt(),
            h_rate: c,
        },
        ScalingKind::III => Units {
            t_rate: b / a,
            h_rate: b / (2.0 * a).sqrt(),
        },
    }
}

/// Ten units of the slowest scaled clock (2D coefficients).
pub fn auto_end_time(fluid: &FluidPair, geom: &Geometry) -> Result<f64> {
    let s = coefficients(fluid, geom, Dim::Two)?;
    Ok(ScalingKind::ALL
        .iter()
        .map(|&k| 10.0 / units(k, &s).t_rate)
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlipGroups {
    /// L / R
    pub s: f64,
    /// Friction reduction 1 / (1 + 3S).
    pub k: f64,
    /// Momentum-flux factor 3(15S² + 10S + 2) / (5(1 + 3S)²).
    pub q: f64,
}

pub fn slip_groups(slip_length: f64, half_width: f64) -> SlipGroups {
    let s = slip_length / half_width;
    if s.is_infinite() {
        return SlipGroups { s, k: 0.0, q: 1.0 };
    }
    let one_3s = 1.0 + 3.0 * s;
    SlipGroups {
        s,
        k: 1.0 / one_3s,
        q: 3.0 * (15.0 * s * s + 10.0 * s + 2.0) / (5.0 * one_3s * one_3s),
    }
}

/// Converts a dimensional trajectory to scaled units.
pub fn nondimensionalize(traj: &Trajectory, kind: ScalingKind, s: &ScaleSet) -> Trajectory {
    let u = units(kind, s);
    let v_rate = u.v_rate();
    let samples = traj
        .samples
        .iter()
        .map(|p| Sample {
            t: u.t_rate * p.t,
            h: u.h_rate * p.h,
            v: v_rate * p.v,
        })
        .collect();
    let mut meta = traj.meta.clone();
    meta.h_inf = meta.h_inf.map(|h| u.h_rate * h);
    meta.representation = Representation::Scaled {
        scaling: kind,
        t_rate: u.t_rate,
        h_rate: u.h_rate,
    };
    Trajectory::new(samples, meta)
}

/// Inverse of [`nondimensionalize`] using the rates stored in the metadata.
/// Dimensional trajectories are returned unchanged.
pub fn redimensionalize(traj: &Trajectory) -> Trajectory {
    let Representation::Scaled { t_rate, h_rate, .. } = traj.meta.representation else {
        return traj.clone();
    };
    let v_rate = h_rate / t_rate;
    let samples = traj
        .samples
        .iter()
        .map(|p| Sample {
            t: p.t / t_rate,
            h: p.h / h_rate,
            v: p.v / v_rate,
        })
        .collect();
    let mut meta = traj.meta.clone();
    meta.h_inf = meta.h_inf.map(|h| h / h_rate);
    meta.representation = Representation::Dimensional;
    Trajectory::new(samples, meta)
}

/// Scaled extended model: one row per scaling, each written as
/// `α ∂t(ḣH) + β ḣH + γ H = 1 + δ ḣ²` with H = h + ĥ and solved for v̇.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledModel {
    pub kind: ScalingKind,
    pub omega: f64,
    pub groups: SlipGroups,
    /// ĥ in the scaled height unit.
    pub h_hat: f64,
    /// Rates mapping the dimensional case onto this row.
    pub units: Units,
}

impl ScaledModel {
    /// Scaled extended model of a dimensional case with slip length `slip_length`.
    pub fn for_case(
        kind: ScalingKind,
        fluid: &FluidPair,
        geom: &Geometry,
        slip_length: f64,
    ) -> Result<Self> {
        let s = coefficients(fluid, geom, Dim::Two)?;
        let units = units(kind, &s);
        Ok(Self {
            kind,
            omega: s.omega,
            groups: slip_groups(slip_length, geom.half_width),
            h_hat: units.h_rate * crate::physics::height_correction(geom),
            units,
        })
    }

    fn row(&self) -> (f64, f64, f64, f64) {
        let (om, k, q) = (self.omega, self.groups.k, self.groups.q);
        match self.kind {
            ScalingKind::I => (1.0 / (om * om), k, 1.0, q / (om * om)),
            ScalingKind::II => (1.0, k * om, 1.0, q),
            ScalingKind::III => (2.0, 2.0 * k, SQRT_2 / om, 2.0 * q),
        }
    }

    /// Equilibrium of H = h* + ĥ*.
    pub fn equilibrium_column(&self) -> f64 {
        let (_, _, gravity, _) = self.row();
        1.0 / gravity
    }

    pub fn rhs(&self, state: RiseState) -> Result<(f64, f64)> {
        rhs_scaled(self.kind, self.omega, &self.groups, self.h_hat, state)
    }
}

/// (ḣ*, v̇*) of the scaled extended model in row `kind`.
pub fn rhs_scaled(
    kind: ScalingKind,
    omega: f64,
    groups: &SlipGroups,
    h_hat_star: f64,
    state: RiseState,
) -> Result<(f64, f64)> {
    let model = ScaledModel {
        kind,
        omega,
        groups: *groups,
        h_hat: h_hat_star,
        units: Units {
            t_rate: 1.0,
            h_rate: 1.0,
        },
    };
    let (inertia, friction, gravity, flux) = model.row();
    let RiseState { h, v } = state;
    let column = h + h_hat_star;
    let threshold = SINGULAR_HEIGHT_FRACTION;
    if column <= threshold {
        return Err(Error::SingularHeight {
            height: column,
            threshold,
        });
    }
    // inertia (v̇ H + v²) = 1 + flux v² − friction v H − gravity H
    let dv = ((1.0 + flux * v * v - friction * v * column - gravity * column) / inertia - v * v)
        / column;
    Ok((v, dv))
}

/// Integrates a scaled row with the same embedded RK 5(4) integrator as the
/// dimensional models.
pub fn integrate_scaled(
    model: &ScaledModel,
    init: RiseState,
    t_end: f64,
    tol: Tolerance,
    dt_out: f64,
) -> Result<Trajectory> {
    model.rhs(init)?;
    let raw = dopri::integrate(
        |_, y: &[f64; 2]| {
            let (dh, dv) = model.rhs(RiseState { h: y[0], v: y[1] })?;
            Ok([dh, dv])
        },
        0.0,
        [init.h, init.v],
        t_end,
        tol,
        dt_out,
    )?;
    let mut meta = crate::trajectory::TrajectoryMeta::new("", "extended-scaled");
    meta.rel_tol = Some(tol.rel);
    meta.abs_tol = Some(tol.abs);
    meta.h_inf = Some(model.equilibrium_column() - model.h_hat);
    meta.representation = Representation::Scaled {
        scaling: model.kind,
        t_rate: model.units.t_rate,
        h_rate: model.units.h_rate,
    };
    let samples = raw
        .into_iter()
        .map(|(t, y)| Sample { t, h: y[0], v: y[1] })
        .collect();
    Ok(Trajectory::new(samples, meta))
}
