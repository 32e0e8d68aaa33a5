//! Height-function curvature in vertical columns and the contact-angle
//! ghost height at the wall.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::grid::{Array2, Grid};

/// Half-width of the default 7-cell window.
pub const WINDOW_HALF: isize = 3;
/// Half-width after one widening by two cells.
pub const WIDE_WINDOW_HALF: isize = 4;
/// A window brackets the interface when its bottom cell is full and its
/// top cell empty to within this tolerance.
pub const BRACKET_TOL: f64 = 1e-6;

/// Ghost height one cell beyond the wall: the interface continues with the
/// slope 1/tan θ set by the contact angle.
pub fn contact_angle_ghost(wall_height: f64, theta: f64, dx: f64) -> f64 {
    if theta >= FRAC_PI_2 {
        return wall_height;
    }
    wall_height + dx / theta.tan()
}

/// Lowest row of column `i` whose fraction drops below one half.
pub fn interface_row(alpha: &Array2, grid: &Grid, i: isize) -> Option<isize> {
    (0..grid.ny as isize).find(|&j| alpha[(i, j)] < 0.5)
}

/// Absolute interface height in column `i` over rows `lo..=hi`, or `None`
/// if the window does not bracket the interface.
fn window_height(alpha: &Array2, grid: &Grid, i: isize, lo: isize, hi: isize) -> Option<f64> {
    if alpha[(i, lo)] < 1.0 - BRACKET_TOL || alpha[(i, hi)] > BRACKET_TOL {
        return None;
    }
    let sum: f64 = (lo..=hi).map(|j| alpha[(i, j)]).sum();
    Some((lo as f64 + sum) * grid.h)
}

/// Column heights (H_{i−1}, H_i, H_{i+1}) around column `i`. The symmetry
/// plane mirrors column 0 and the wall uses the contact-angle ghost.
pub fn stencil_heights(
    alpha: &Array2,
    grid: &Grid,
    i: usize,
    theta: f64,
) -> Result<[f64; 3]> {
    let ic = i as isize;
    let jc = interface_row(alpha, grid, ic).ok_or(Error::StencilInvalid { column: i })?;
    for half in [WINDOW_HALF, WIDE_WINDOW_HALF] {
        // Ghost rows are full below and empty above, so clamping to them keeps
        // the window valid near the domain ends.
        let lo = (jc - half).max(-1);
        let hi = (jc + half).min(grid.ny as isize);
        let Some(centre) = window_height(alpha, grid, ic, lo, hi) else {
            continue;
        };
        let left = if i == 0 {
            Some(centre)
        } else {
            window_height(alpha, grid, ic - 1, lo, hi)
        };
        let right = if i + 1 == grid.nx {
            Some(contact_angle_ghost(centre, theta, grid.h))
        } else {
            window_height(alpha, grid, ic + 1, lo, hi)
        };
        if let (Some(l), Some(r)) = (left, right) {
            return Ok([l, centre, r]);
        }
    }
    Err(Error::StencilInvalid { column: i })
}

/// Curvature from three column heights; positive when the interface is
/// concave toward the gas above it.
pub fn curvature_from_heights([l, c, r]: [f64; 3], h: f64) -> f64 {
    let slope = (r - l) / (2.0 * h);
    let second = (r - 2.0 * c + l) / (h * h);
    second / (1.0 + slope * slope).powf(1.5)
}

pub fn curvature_height_function(
    alpha: &Array2,
    grid: &Grid,
    column: usize,
    theta: f64,
) -> Result<f64> {
    let heights = stencil_heights(alpha, grid, column, theta)?;
    Ok(curvature_from_heights(heights, grid.h))
}
