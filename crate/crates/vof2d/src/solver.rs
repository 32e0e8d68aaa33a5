//! Explicit projection solver on the staggered half-gap grid.

use std::io::{self, Write};

use caprise_core::physics::stationary_height;
use caprise_core::study::timestep_limits;
use caprise_core::{CaseSpec, Sample, SlipSpec, Trajectory, TrajectoryMeta};
use serde::{Deserialize, Serialize};

use crate::curvature::{contact_angle_ghost, curvature_height_function, BRACKET_TOL};
use crate::error::{invalid, Error, Result};
use crate::grid::{Array2, Grid};
use crate::init::initial_fractions;
use crate::plic::{plic_reconstruct, PlicPlane};
use crate::pressure::{self, PoissonMatrix, SolveStats};

/// Bottom of the domain: an open inflow held at p = 0 or a closed wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BottomBoundary {
    Inflow,
    Wall,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSetup2D {
    pub case: CaseSpec,
    pub n_cells_per_radius: usize,
    pub dt_safety: f64,
    pub t_end: f64,
    /// Output spacing; `None` samples 500 intervals.
    pub dt_out: Option<f64>,
    pub gravity: bool,
    pub bottom: BottomBoundary,
    /// Relative residual target of the pressure solve.
    pub pressure_tol: f64,
}

pub const DEFAULT_DT_SAFETY: f64 = 0.9;
pub const DEFAULT_OUTPUT_INTERVALS: f64 = 500.0;
pub const DEFAULT_PRESSURE_TOL: f64 = 1e-10;

impl CaseSetup2D {
    pub fn new(case: CaseSpec, n_cells_per_radius: usize, t_end: f64) -> Self {
        Self {
            case,
            n_cells_per_radius,
            dt_safety: DEFAULT_DT_SAFETY,
            t_end,
            dt_out: None,
            gravity: true,
            bottom: BottomBoundary::Inflow,
            pressure_tol: DEFAULT_PRESSURE_TOL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.case.validate()?;
        if !(self.dt_safety > 0.0 && self.dt_safety <= 1.0) {
            return Err(invalid("dt_safety", "must lie in (0, 1]"));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(invalid("t_end", "must be finite and > 0"));
        }
        if let Some(dt) = self.dt_out {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(invalid("dt_out", "must be finite and > 0"));
            }
        }
        if !(self.pressure_tol > 0.0 && self.pressure_tol <= 1e-8) {
            return Err(invalid("pressure_tol", "must lie in (0, 1e-8]"));
        }
        Ok(())
    }

    pub fn output_spacing(&self) -> f64 {
        self.dt_out.unwrap_or(self.t_end / DEFAULT_OUTPUT_INTERVALS)
    }

    fn grid(&self) -> Result<Grid> {
        let g = &self.case.geometry;
        Grid::new(g.half_width, g.domain_height, self.n_cells_per_radius)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub grid: Grid,
    /// x-velocity on vertical faces, m/s.
    pub u: Array2,
    /// y-velocity on horizontal faces, m/s.
    pub v: Array2,
    /// Cell pressure, Pa.
    pub p: Array2,
    /// Liquid volume fraction with one ghost layer.
    pub alpha: Array2,
    pub t: f64,
    pub step_count: usize,
}

impl SimState {
    pub fn liquid_volume(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.grid.nx as isize {
            for j in 0..self.grid.ny as isize {
                sum += self.alpha[(i, j)];
            }
        }
        sum * self.grid.h * self.grid.h
    }

    /// Largest face speed over the physical faces.
    pub fn max_speed(&self) -> f64 {
        let (nx, ny) = (self.grid.nx as isize, self.grid.ny as isize);
        let mut m = 0.0f64;
        for i in 0..=nx {
            for j in 0..ny {
                m = m.max(self.u[(i, j)].abs());
            }
        }
        for i in 0..nx {
            for j in 0..=ny {
                m = m.max(self.v[(i, j)].abs());
            }
        }
        m
    }

    /// Discrete divergence of cell (i, j), 1/s.
    pub fn divergence(&self, i: isize, j: isize) -> f64 {
        (self.u[(i + 1, j)] - self.u[(i, j)] + self.v[(i, j + 1)] - self.v[(i, j)]) / self.grid.h
    }

    /// Writes `i,j,alpha,p,u,v` per cell with face velocities averaged to
    /// the cell centre.
    pub fn write_fields_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "i,j,alpha,p,u,v")?;
        for j in 0..self.grid.ny as isize {
            for i in 0..self.grid.nx as isize {
                let uc = 0.5 * (self.u[(i, j)] + self.u[(i + 1, j)]);
                let vc = 0.5 * (self.v[(i, j)] + self.v[(i, j + 1)]);
                writeln!(
                    out,
                    "{i},{j},{:.16e},{:.16e},{:.16e},{:.16e}",
                    self.alpha[(i, j)],
                    self.p[(i, j)],
                    uc,
                    vc
                )?;
            }
        }
        Ok(())
    }
}

pub fn init_case(setup: &CaseSetup2D) -> Result<SimState> {
    setup.validate()?;
    let grid = setup.grid()?;
    let mut alpha = initial_fractions(&grid, &setup.case.geometry)?;
    fill_alpha_ghosts(&mut alpha, &grid, setup);
    Ok(SimState {
        grid,
        u: grid.u_field(),
        v: grid.v_field(),
        p: Array2::new(0..grid.nx as isize, 0..grid.ny as isize),
        alpha,
        t: 0.0,
        step_count: 0,
    })
}

/// `dt_safety` times the smallest of the capillary, viscous and advective
/// limits.
pub fn compute_dt(state: &SimState, setup: &CaseSetup2D) -> Result<f64> {
    let lim = timestep_limits(&setup.case.fluid, state.grid.h, state.max_speed())?;
    Ok(setup.dt_safety * lim.dt_sigma_solver.min(lim.dt_mu).min(lim.dt_u))
}

/// Tangential ghost factor v_ghost = factor · v_interior at the wall.
pub fn wall_ghost_factor(slip: &SlipSpec, dx: f64) -> f64 {
    match *slip {
        SlipSpec::Numerical => -1.0,
        SlipSpec::Navier { slip_length } if slip_length.is_infinite() => 1.0,
        SlipSpec::Navier { slip_length } => (2.0 * slip_length - dx) / (2.0 * slip_length + dx),
    }
}

fn fill_alpha_ghosts(alpha: &mut Array2, grid: &Grid, setup: &CaseSetup2D) {
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let theta = setup.case.geometry.contact_angle;
    let h = grid.h;
    let wall_height: f64 = (0..ny).map(|j| alpha[(nx - 1, j)]).sum::<f64>() * h;
    let ghost_height = contact_angle_ghost(wall_height, theta, h);
    for j in 0..ny {
        alpha[(-1, j)] = alpha[(0, j)];
        alpha[(nx, j)] = ((ghost_height - j as f64 * h) / h).clamp(0.0, 1.0);
    }
    for i in -1..=nx {
        alpha[(i, -1)] = match setup.bottom {
            BottomBoundary::Inflow => 1.0,
            BottomBoundary::Wall => alpha[(i, 0)],
        };
        alpha[(i, ny)] = 0.0;
    }
}

/// Fills ghost values of α, u and v.
pub fn apply_boundaries(state: &mut SimState, setup: &CaseSetup2D) {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    fill_alpha_ghosts(&mut state.alpha, &grid, setup);

    let u = &mut state.u;
    for j in -1..=ny {
        u[(0, j)] = 0.0;
        u[(nx, j)] = 0.0;
    }
    for i in 1..nx {
        u[(i, -1)] = match setup.bottom {
            BottomBoundary::Inflow => u[(i, 0)],
            BottomBoundary::Wall => -u[(i, 0)],
        };
        u[(i, ny)] = u[(i, ny - 1)];
    }

    let v = &mut state.v;
    for i in 0..nx {
        if setup.bottom == BottomBoundary::Wall {
            v[(i, 0)] = 0.0;
        }
        v[(i, -1)] = v[(i, 0)];
        v[(i, ny + 1)] = v[(i, ny)];
    }
    let factor = wall_ghost_factor(&setup.case.slip, grid.h);
    for j in -1..=ny + 1 {
        v[(-1, j)] = v[(0, j)];
        v[(nx, j)] = factor * v[(nx - 1, j)];
    }
}

/// Cell density and viscosity from α over the ghosted range.
fn materials(state: &SimState, setup: &CaseSetup2D) -> (Array2, Array2) {
    let f = &setup.case.fluid;
    let mut rho = state.grid.cell_field();
    let mut mu = state.grid.cell_field();
    for i in rho.i_range() {
        for j in rho.j_range() {
            let a = state.alpha[(i, j)];
            rho[(i, j)] = a * f.rho_l + (1.0 - a) * f.rho_g;
            mu[(i, j)] = a * f.mu_l + (1.0 - a) * f.mu_g;
        }
    }
    (rho, mu)
}

/// Height-function curvature of every column holding part of the interface.
pub fn column_curvatures(state: &SimState, setup: &CaseSetup2D) -> Result<Vec<f64>> {
    let grid = state.grid;
    let theta = setup.case.geometry.contact_angle;
    (0..grid.nx)
        .map(|i| {
            let ic = i as isize;
            let has_interface = (0..grid.ny as isize).any(|j| {
                let a = state.alpha[(ic, j)];
                a > BRACKET_TOL && a < 1.0 - BRACKET_TOL
            });
            if has_interface {
                curvature_height_function(&state.alpha, &grid, i, theta)
            } else {
                Ok(0.0)
            }
        })
        .collect()
}

#[inline]
fn upwind(c: f64, back: f64, here: f64, ahead: f64, h: f64) -> f64 {
    if c > 0.0 {
        c * (here - back) / h
    } else {
        c * (ahead - here) / h
    }
}

/// Predictor velocities: advection, viscous stress, gravity and surface
/// tension `−σ κ ∇α`. Boundaries must be applied beforehand.
pub fn momentum_step(state: &SimState, setup: &CaseSetup2D, dt: f64) -> Result<(Array2, Array2)> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let h = grid.h;
    let (rho, mu) = materials(state, setup);
    let kappa = column_curvatures(state, setup)?;
    let sigma = setup.case.fluid.sigma;
    let g = if setup.gravity { setup.case.fluid.g } else { 0.0 };
    let (u, v, alpha) = (&state.u, &state.v, &state.alpha);

    // Corner viscosity is capped at ν_max·ρ_min of the four cells so that a
    // gas face touching a partly liquid corner keeps the kinematic viscosity
    // the viscous time step limit assumes.
    let fluid = &setup.case.fluid;
    let nu_max = (fluid.mu_l / fluid.rho_l).max(fluid.mu_g / fluid.rho_g);
    let mu_corner = |ic: isize, jc: isize| {
        let cells = [(ic - 1, jc - 1), (ic, jc - 1), (ic - 1, jc), (ic, jc)];
        let mean = 0.25 * cells.iter().map(|&c| mu[c]).sum::<f64>();
        let rho_min = cells.iter().map(|&c| rho[c]).fold(f64::INFINITY, f64::min);
        mean.min(nu_max * rho_min)
    };
    let tau_xy = |ic: isize, jc: isize| {
        mu_corner(ic, jc)
            * ((u[(ic, jc)] - u[(ic, jc - 1)]) / h + (v[(ic, jc)] - v[(ic - 1, jc)]) / h)
    };
    let tau_xx = |c: isize, j: isize| 2.0 * mu[(c, j)] * (u[(c + 1, j)] - u[(c, j)]) / h;
    let tau_yy = |i: isize, c: isize| 2.0 * mu[(i, c)] * (v[(i, c + 1)] - v[(i, c)]) / h;

    let mut u_star = u.clone();
    for i in 1..nx {
        for j in 0..ny {
            let rho_f = 0.5 * (rho[(i - 1, j)] + rho[(i, j)]);
            let vbar = 0.25 * (v[(i - 1, j)] + v[(i, j)] + v[(i - 1, j + 1)] + v[(i, j + 1)]);
            let here = u[(i, j)];
            let adv = upwind(here, u[(i - 1, j)], here, u[(i + 1, j)], h)
                + upwind(vbar, u[(i, j - 1)], here, u[(i, j + 1)], h);
            let visc = (tau_xx(i, j) - tau_xx(i - 1, j)) / h + (tau_xy(i, j + 1) - tau_xy(i, j)) / h;
            let k_f = 0.5 * (kappa[(i - 1) as usize] + kappa[i as usize]);
            let csf = -sigma * k_f * (alpha[(i, j)] - alpha[(i - 1, j)]) / h;
            u_star[(i, j)] = here + dt * (-adv + (visc + csf) / rho_f);
        }
    }

    let mut v_star = v.clone();
    let j_first = match setup.bottom {
        BottomBoundary::Inflow => 0,
        BottomBoundary::Wall => 1,
    };
    for i in 0..nx {
        for j in j_first..=ny {
            let rho_f = 0.5 * (rho[(i, j - 1)] + rho[(i, j)]);
            let ubar = 0.25 * (u[(i, j - 1)] + u[(i + 1, j - 1)] + u[(i, j)] + u[(i + 1, j)]);
            let here = v[(i, j)];
            let adv = upwind(ubar, v[(i - 1, j)], here, v[(i + 1, j)], h)
                + upwind(here, v[(i, j - 1)], here, v[(i, j + 1)], h);
            let visc = (tau_yy(i, j) - tau_yy(i, j - 1)) / h + (tau_xy(i + 1, j) - tau_xy(i, j)) / h;
            let csf = -sigma * kappa[i as usize] * (alpha[(i, j)] - alpha[(i, j - 1)]) / h;
            v_star[(i, j)] = here + dt * (-adv + (visc + csf) / rho_f - g);
        }
    }
    Ok((u_star, v_star))
}

/// Face coefficients 1/ρ_f of the projection.
struct FaceCoefficients {
    u: Array2,
    v: Array2,
}

fn face_coefficients(state: &SimState, setup: &CaseSetup2D) -> FaceCoefficients {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let (rho, _) = materials(state, setup);
    let mut bu = grid.u_field();
    let mut bv = grid.v_field();
    for i in 1..nx {
        for j in 0..ny {
            bu[(i, j)] = 2.0 / (rho[(i - 1, j)] + rho[(i, j)]);
        }
    }
    for i in 0..nx {
        for j in 1..ny {
            bv[(i, j)] = 2.0 / (rho[(i, j - 1)] + rho[(i, j)]);
        }
        // The open ends hold p = 0 on the face itself, half a cell from the
        // interior centre.
        bv[(i, 0)] = 1.0 / rho[(i, 0)];
        bv[(i, ny)] = 1.0 / rho[(i, ny - 1)];
    }
    FaceCoefficients { u: bu, v: bv }
}

/// Solves `∇·(ρ⁻¹ ∇p) = ∇·u* / dt` with p = 0 on open ends and zero normal
/// gradient on walls, starting from `p` as the initial guess.
pub fn pressure_solve(
    state: &mut SimState,
    setup: &CaseSetup2D,
    u_star: &Array2,
    v_star: &Array2,
    dt: f64,
) -> Result<SolveStats> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx, grid.ny);
    let h = grid.h;
    let beta = face_coefficients(state, setup);
    let mut a = PoissonMatrix::zeros(nx, ny);
    let mut b = vec![0.0; nx * ny];
    let mut x = vec![0.0; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let k = i + nx * j;
            let (ii, jj) = (i as isize, j as isize);
            if i + 1 < nx {
                a.couple(k, k + 1, beta.u[(ii + 1, jj)]);
            }
            if j + 1 < ny {
                a.couple(k, k + nx, beta.v[(ii, jj + 1)]);
            }
            if j == 0 && setup.bottom == BottomBoundary::Inflow {
                a.diag[k] += 2.0 * beta.v[(ii, 0)];
            }
            if j + 1 == ny {
                a.diag[k] += 2.0 * beta.v[(ii, ny as isize)];
            }
            let flux = u_star[(ii + 1, jj)] - u_star[(ii, jj)] + v_star[(ii, jj + 1)] - v_star[(ii, jj)];
            b[k] = -h * flux / dt;
            x[k] = state.p[(ii, jj)];
        }
    }
    let stats = pressure::solve(&a, &b, &mut x, setup.pressure_tol, 10 * nx * ny)?;

    let (nxi, nyi) = (nx as isize, ny as isize);
    for j in 0..nyi {
        for i in 0..nxi {
            state.p[(i, j)] = x[i as usize + nx * j as usize];
        }
    }
    let p = &state.p;
    let mut u = u_star.clone();
    for i in 1..nxi {
        for j in 0..nyi {
            u[(i, j)] -= dt * beta.u[(i, j)] * (p[(i, j)] - p[(i - 1, j)]) / h;
        }
    }
    let mut v = v_star.clone();
    for i in 0..nxi {
        for j in 1..nyi {
            v[(i, j)] -= dt * beta.v[(i, j)] * (p[(i, j)] - p[(i, j - 1)]) / h;
        }
        if setup.bottom == BottomBoundary::Inflow {
            v[(i, 0)] -= dt * beta.v[(i, 0)] * p[(i, 0)] / (0.5 * h);
        }
        v[(i, nyi)] -= dt * beta.v[(i, nyi)] * (0.0 - p[(i, nyi - 1)]) / (0.5 * h);
    }
    state.u = u;
    state.v = v;
    Ok(stats)
}

/// Volume bookkeeping of one advection step, m².
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AdvectionReport {
    /// Liquid volume entering through the open ends.
    pub boundary_inflow: f64,
    /// Volume added (positive) or removed by clipping to [0, 1].
    pub clipped: f64,
    /// |clipped| summed cell by cell.
    pub clipped_abs: f64,
}

fn donor_flux(alpha: &Array2, i: isize, j: isize, rect: [f64; 4], width: f64) -> f64 {
    let a = alpha[(i, j)];
    if a <= 0.0 {
        return 0.0;
    }
    if a >= 1.0 {
        return width;
    }
    let mut s = [[0.0; 3]; 3];
    for (di, row) in s.iter_mut().enumerate() {
        for (dj, val) in row.iter_mut().enumerate() {
            *val = alpha[(i + di as isize - 1, j + dj as isize - 1)];
        }
    }
    let plane: PlicPlane = plic_reconstruct(&s);
    plane.area_in(rect)
}

fn sweep_x(state: &mut SimState, dt: f64, compression: &Array2) -> Result<()> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let h = grid.h;
    let mut flux = Array2::new(0..nx + 1, 0..ny);
    for j in 0..ny {
        for i in 1..nx {
            let w = state.u[(i, j)] * dt / h;
            if w.abs() > 1.0 {
                return Err(Error::CourantViolation { cfl: w.abs() });
            }
            flux[(i, j)] = if w > 0.0 {
                donor_flux(&state.alpha, i - 1, j, [0.5 - w, 0.5, -0.5, 0.5], w)
            } else if w < 0.0 {
                -donor_flux(&state.alpha, i, j, [-0.5, -0.5 - w, -0.5, 0.5], -w)
            } else {
                0.0
            };
        }
    }
    for i in 0..nx {
        for j in 0..ny {
            let stretch = (state.u[(i + 1, j)] - state.u[(i, j)]) * dt / h;
            state.alpha[(i, j)] += flux[(i, j)] - flux[(i + 1, j)] + compression[(i, j)] * stretch;
        }
    }
    Ok(())
}

fn sweep_y(state: &mut SimState, dt: f64, compression: &Array2) -> Result<f64> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let h = grid.h;
    let mut flux = Array2::new(0..nx, 0..ny + 1);
    for i in 0..nx {
        for j in 0..=ny {
            let w = state.v[(i, j)] * dt / h;
            if w.abs() > 1.0 {
                return Err(Error::CourantViolation { cfl: w.abs() });
            }
            flux[(i, j)] = if w > 0.0 {
                if j == 0 {
                    state.alpha[(i, -1)] * w
                } else {
                    donor_flux(&state.alpha, i, j - 1, [-0.5, 0.5, 0.5 - w, 0.5], w)
                }
            } else if w < 0.0 {
                if j == ny {
                    state.alpha[(i, ny)] * w
                } else {
                    -donor_flux(&state.alpha, i, j, [-0.5, 0.5, -0.5, -0.5 - w], -w)
                }
            } else {
                0.0
            };
        }
    }
    let mut inflow = 0.0;
    for i in 0..nx {
        inflow += flux[(i, 0)] - flux[(i, ny)];
        for j in 0..ny {
            let stretch = (state.v[(i, j + 1)] - state.v[(i, j)]) * dt / h;
            state.alpha[(i, j)] += flux[(i, j)] - flux[(i, j + 1)] + compression[(i, j)] * stretch;
        }
    }
    Ok(inflow * h * h)
}

/// Split geometric advection of α with the post-projection velocities.
/// The sweep order alternates with the step count.
pub fn advect_alpha(state: &mut SimState, setup: &CaseSetup2D, dt: f64) -> Result<AdvectionReport> {
    let grid = state.grid;
    let (nx, ny) = (grid.nx as isize, grid.ny as isize);
    let mut compression = Array2::new(0..nx, 0..ny);
    for i in 0..nx {
        for j in 0..ny {
            compression[(i, j)] = if state.alpha[(i, j)] > 0.5 { 1.0 } else { 0.0 };
        }
    }
    let mut inflow = 0.0;
    if state.step_count.is_multiple_of(2) {
        sweep_x(state, dt, &compression)?;
        fill_alpha_ghosts(&mut state.alpha, &grid, setup);
        inflow += sweep_y(state, dt, &compression)?;
    } else {
        inflow += sweep_y(state, dt, &compression)?;
        fill_alpha_ghosts(&mut state.alpha, &grid, setup);
        sweep_x(state, dt, &compression)?;
    }
    let mut clipped = 0.0;
    let mut clipped_abs = 0.0;
    for i in 0..nx {
        for j in 0..ny {
            let a = state.alpha[(i, j)];
            let c = a.clamp(0.0, 1.0);
            clipped += c - a;
            clipped_abs += (c - a).abs();
            state.alpha[(i, j)] = c;
        }
    }
    fill_alpha_ghosts(&mut state.alpha, &grid, setup);
    let cell = grid.h * grid.h;
    Ok(AdvectionReport {
        boundary_inflow: inflow,
        clipped: clipped * cell,
        clipped_abs: clipped_abs * cell,
    })
}

/// Tolerance separating full and empty cells from partial ones in the
/// apex column.
pub const APEX_COLUMN_TOL: f64 = 1e-6;

/// Column integral Σ_j α(0, j)·dy next to the symmetry plane.
pub fn apex_height(state: &SimState) -> Result<f64> {
    column_height(&state.alpha, &state.grid, 0)
}

pub fn column_height(alpha: &Array2, grid: &Grid, column: usize) -> Result<f64> {
    let i = column as isize;
    let ny = grid.ny as isize;
    let first_not_full = (0..ny).find(|&j| alpha[(i, j)] < 1.0 - APEX_COLUMN_TOL);
    let last_not_empty = (0..ny).rev().find(|&j| alpha[(i, j)] > APEX_COLUMN_TOL);
    if let (Some(lo), Some(hi)) = (first_not_full, last_not_empty) {
        let gap = (lo..=hi).any(|j| {
            let a = alpha[(i, j)];
            a <= APEX_COLUMN_TOL || a >= 1.0 - APEX_COLUMN_TOL
        });
        if gap {
            return Err(Error::MultiValuedColumn { column });
        }
    }
    Ok((0..ny).map(|j| alpha[(i, j)]).sum::<f64>() * grid.h)
}

/// Diagnostics of one time step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepReport {
    pub dt: f64,
    pub pressure_iterations: usize,
    pub pressure_residual: f64,
    /// |ΔV − boundary inflow| / V.
    pub volume_imbalance: f64,
    /// |clipped volume| / V.
    pub clipped_fraction: f64,
    /// max |∇·u| after projection over ‖∇·u*‖₂ before it.
    pub divergence_ratio: f64,
    pub max_speed: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub setup: CaseSetup2D,
    pub state: SimState,
}

impl Simulation {
    pub fn new(setup: CaseSetup2D) -> Result<Self> {
        let state = init_case(&setup)?;
        Ok(Self { setup, state })
    }

    /// Advances by the stable step, shortened to at most `max_dt`.
    pub fn step(&mut self, max_dt: f64) -> Result<StepReport> {
        let setup = &self.setup;
        let state = &mut self.state;
        let dt = compute_dt(state, setup)?.min(max_dt);
        apply_boundaries(state, setup);
        let (u_star, v_star) = momentum_step(state, setup, dt)?;

        let grid = state.grid;
        let (nx, ny) = (grid.nx as isize, grid.ny as isize);
        let mut div_star = 0.0;
        for i in 0..nx {
            for j in 0..ny {
                let d = (u_star[(i + 1, j)] - u_star[(i, j)] + v_star[(i, j + 1)] - v_star[(i, j)]) / grid.h;
                div_star += d * d;
            }
        }
        let stats = pressure_solve(state, setup, &u_star, &v_star, dt)?;
        let mut div_max = 0.0f64;
        for i in 0..nx {
            for j in 0..ny {
                div_max = div_max.max(state.divergence(i, j).abs());
            }
        }
        let div_star = div_star.sqrt();

        let before = state.liquid_volume();
        apply_boundaries(state, setup);
        let adv = advect_alpha(state, setup, dt)?;
        let after = state.liquid_volume();

        state.t += dt;
        state.step_count += 1;
        if !state.t.is_finite() || !after.is_finite() {
            return Err(Error::NonFinite {
                field: "alpha",
                t: state.t,
            });
        }
        let max_speed = state.max_speed();
        if !max_speed.is_finite() {
            return Err(Error::NonFinite {
                field: "velocity",
                t: state.t,
            });
        }
        Ok(StepReport {
            dt,
            pressure_iterations: stats.iterations,
            pressure_residual: stats.residual,
            volume_imbalance: (after - before - adv.boundary_inflow).abs() / before,
            clipped_fraction: adv.clipped_abs / before,
            divergence_ratio: if div_star > 0.0 { div_max / div_star } else { 0.0 },
            max_speed,
        })
    }
}

/// Worst values seen over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RunDiagnostics {
    pub max_volume_imbalance: f64,
    pub max_clipped_fraction: f64,
    pub max_divergence_ratio: f64,
    pub max_pressure_iterations: usize,
    pub max_speed: f64,
}

impl RunDiagnostics {
    fn record(&mut self, r: &StepReport) {
        self.max_volume_imbalance = self.max_volume_imbalance.max(r.volume_imbalance);
        self.max_clipped_fraction = self.max_clipped_fraction.max(r.clipped_fraction);
        self.max_divergence_ratio = self.max_divergence_ratio.max(r.divergence_ratio);
        self.max_pressure_iterations = self.max_pressure_iterations.max(r.pressure_iterations);
        self.max_speed = self.max_speed.max(r.max_speed);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub trajectory: Trajectory,
    pub n_steps: usize,
    pub diagnostics: RunDiagnostics,
}

/// Runs the case to `t_end`, sampling the apex height on the output grid.
pub fn run(setup: &CaseSetup2D) -> Result<RunOutput> {
    let mut sim = Simulation::new(setup.clone())?;
    let t_end = setup.t_end;
    let dt_out = setup.output_spacing();
    let n_uniform = (t_end / dt_out * (1.0 + 1e-12)).floor() as usize;
    let mut out_times: Vec<f64> = (1..=n_uniform).map(|k| k as f64 * dt_out).collect();
    if out_times.last().is_none_or(|&t| t_end - t > 1e-9 * dt_out) {
        out_times.push(t_end);
    } else if let Some(last) = out_times.last_mut() {
        *last = t_end;
    }

    let mut times = vec![0.0];
    let mut heights = vec![apex_height(&sim.state)?];
    let mut diagnostics = RunDiagnostics::default();
    for &target in &out_times {
        while target - sim.state.t > 1e-12 * dt_out {
            let report = sim.step(target - sim.state.t)?;
            diagnostics.record(&report);
        }
        sim.state.t = target;
        times.push(target);
        heights.push(apex_height(&sim.state)?);
    }

    let n = times.len();
    let samples = (0..n)
        .map(|k| {
            let (a, b) = (k.saturating_sub(1), (k + 1).min(n - 1));
            Sample {
                t: times[k],
                h: heights[k],
                v: (heights[b] - heights[a]) / (times[b] - times[a]),
            }
        })
        .collect();
    let mut meta = TrajectoryMeta::new(setup.case.label.clone(), "vof2d");
    meta.h_inf = Some(stationary_height(&setup.case.fluid, &setup.case.geometry));
    Ok(RunOutput {
        trajectory: Trajectory::new(samples, meta),
        n_steps: sim.state.step_count,
        diagnostics,
    })
}
