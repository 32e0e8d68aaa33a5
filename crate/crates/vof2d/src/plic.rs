//! Piecewise-linear interface reconstruction in a single cell.
//!
//! Geometry is expressed in cell-local coordinates ξ ∈ [−½, ½]², in units
//! of the cell size. The liquid side of a plane is `{ξ : n·ξ ≤ c}`, so the
//! normal points out of the liquid.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gradient norms below this are treated as having no direction.
pub const MIN_GRADIENT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlicPlane {
    /// Unit normal pointing out of the liquid.
    pub normal: [f64; 2],
    /// Plane constant relative to the cell centre, in cell widths.
    pub offset: f64,
}

impl PlicPlane {
    /// Liquid fraction of the rectangle `[x0, x1] × [y0, y1]` given in
    /// cell-local coordinates, relative to the unit cell area.
    pub fn area_in(&self, rect: [f64; 4]) -> f64 {
        clipped_area(self.normal, self.offset, rect)
    }

    pub fn fraction(&self) -> f64 {
        self.area_in(UNIT_CELL)
    }

    /// Plane constant in metres for a cell of size `h`.
    pub fn offset_m(&self, h: f64) -> f64 {
        self.offset * h
    }
}

pub const UNIT_CELL: [f64; 4] = [-0.5, 0.5, -0.5, 0.5];

/// Area of `[x0, x1] × [y0, y1] ∩ {n·ξ ≤ c}` by clipping the rectangle.
pub fn clipped_area(n: [f64; 2], c: f64, [x0, x1, y0, y1]: [f64; 4]) -> f64 {
    let rect = [[x0, y0], [x1, y0], [x1, y1], [x0, y1]];
    let side = |p: [f64; 2]| n[0] * p[0] + n[1] * p[1] - c;
    let mut poly: [[f64; 2]; 8] = [[0.0; 2]; 8];
    let mut len = 0;
    for k in 0..4 {
        let a = rect[k];
        let b = rect[(k + 1) % 4];
        let (sa, sb) = (side(a), side(b));
        if sa <= 0.0 {
            poly[len] = a;
            len += 1;
        }
        if (sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0) {
            let t = sa / (sa - sb);
            poly[len] = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            len += 1;
        }
    }
    if len < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for k in 0..len {
        let (p, q) = (poly[k], poly[(k + 1) % len]);
        twice += p[0] * q[1] - q[0] * p[1];
    }
    0.5 * twice.abs()
}

/// Plane constant for which the unit cell holds `alpha` liquid.
pub fn solve_offset(n: [f64; 2], alpha: f64) -> f64 {
    let reach = 0.5 * (n[0].abs() + n[1].abs());
    if alpha <= 0.0 {
        return -reach;
    }
    if alpha >= 1.0 {
        return reach;
    }
    let (mut lo, mut hi) = (-reach, reach);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if clipped_area(n, mid, UNIT_CELL) < alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a_lo, a_hi) = (
        clipped_area(n, lo, UNIT_CELL),
        clipped_area(n, hi, UNIT_CELL),
    );
    if (a_lo - alpha).abs() <= (a_hi - alpha).abs() {
        lo
    } else {
        hi
    }
}

/// Youngs' normal −∇α/|∇α| from a 3×3 stencil indexed `[di][dj]` with
/// (1, 1) the centre cell.
pub fn youngs_normal(s: &[[f64; 3]; 3]) -> Result<[f64; 2]> {
    let gx = (s[2][2] + 2.0 * s[2][1] + s[2][0]) - (s[0][2] + 2.0 * s[0][1] + s[0][0]);
    let gy = (s[2][2] + 2.0 * s[1][2] + s[0][2]) - (s[2][0] + 2.0 * s[1][0] + s[0][0]);
    let norm = gx.hypot(gy);
    if norm < MIN_GRADIENT {
        return Err(Error::DegenerateNormal { norm });
    }
    Ok([-gx / norm, -gy / norm])
}

/// Reconstructs the plane of the centre cell. A flat stencil falls back to
/// a horizontal interface with liquid below.
pub fn plic_reconstruct(s: &[[f64; 3]; 3]) -> PlicPlane {
    let normal = youngs_normal(s).unwrap_or([0.0, 1.0]);
    PlicPlane {
        normal,
        offset: solve_offset(normal, s[1][1]),
    }
}
