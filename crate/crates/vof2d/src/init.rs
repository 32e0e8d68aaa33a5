//! Exact cell fractions below the initial circular meniscus.

use caprise_core::Geometry;

use crate::error::{Error, Result};
use crate::grid::{Array2, Grid};

const GAUSS_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let sum: f64 = GAUSS_NODES
        .iter()
        .zip(GAUSS_WEIGHTS)
        .map(|(x, w)| w * (f(mid - half * x) + f(mid + half * x)))
        .sum();
    sum * half
}

/// Meniscus y(x) = h0 + r − √(r² − x²) with apex at (0, h0); `radius` is
/// `None` for a flat interface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Meniscus {
    pub apex: f64,
    pub radius: Option<f64>,
}

impl Meniscus {
    pub fn for_geometry(geom: &Geometry) -> Self {
        let cos_theta = geom.cos_theta();
        Self {
            apex: geom.initial_height,
            radius: (cos_theta > 0.0).then(|| geom.half_width / cos_theta),
        }
    }

    pub fn height(&self, x: f64) -> f64 {
        match self.radius {
            // r − √(r² − x²) without cancellation.
            Some(r) => self.apex + x * x / (r + (r * r - x * x).sqrt()),
            None => self.apex,
        }
    }

    /// Smallest x ≥ 0 at which the meniscus reaches level `y`.
    fn crossing(&self, y: f64) -> f64 {
        let d = y - self.apex;
        if d <= 0.0 {
            return 0.0;
        }
        match self.radius {
            Some(r) if d < r => (d * (2.0 * r - d)).sqrt(),
            _ => f64::INFINITY,
        }
    }

    /// Liquid area of `[x0, x1] × [y0, y1]`.
    pub fn area_below(&self, [x0, x1, y0, y1]: [f64; 4]) -> f64 {
        let (xa, xb) = (self.crossing(y0), self.crossing(y1));
        let mid_lo = x0.max(xa);
        let mid_hi = x1.min(xb);
        let mut area = 0.0;
        if mid_hi > mid_lo {
            const PIECES: usize = 4;
            let w = (mid_hi - mid_lo) / PIECES as f64;
            for k in 0..PIECES {
                let a = mid_lo + k as f64 * w;
                let b = if k + 1 == PIECES { mid_hi } else { a + w };
                area += gauss(|x| (self.height(x) - y0).clamp(0.0, y1 - y0), a, b);
            }
        }
        let full_lo = x0.max(xb);
        if x1 > full_lo {
            area += (x1 - full_lo) * (y1 - y0);
        }
        area
    }

    /// Height where the meniscus meets the wall at x = `half_width`.
    pub fn contact_line(&self, half_width: f64) -> f64 {
        self.height(half_width)
    }
}

/// Cell fractions of the initial meniscus on the physical cells.
pub fn initial_fractions(grid: &Grid, geom: &Geometry) -> Result<Array2> {
    let meniscus = Meniscus::for_geometry(geom);
    let contact_line = meniscus.contact_line(geom.half_width);
    if contact_line >= geom.domain_height {
        return Err(Error::ArcExceedsDomain {
            contact_line,
            domain_height: geom.domain_height,
        });
    }
    let mut alpha = grid.cell_field();
    let h = grid.h;
    let cell_area = h * h;
    for i in 0..grid.nx as isize {
        let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
        for j in 0..grid.ny as isize {
            let (y0, y1) = (j as f64 * h, (j + 1) as f64 * h);
            alpha[(i, j)] = if y1 <= meniscus.apex {
                1.0
            } else if y0 >= contact_line {
                0.0
            } else {
                (meniscus.area_below([x0, x1, y0, y1]) / cell_area).clamp(0.0, 1.0)
            };
        }
    }
    Ok(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use caprise_core::physics::meniscus_correction;
    use std::f64::consts::FRAC_PI_2;

    fn geometry(theta_deg: f64) -> Geometry {
        Geometry::new(0.005, theta_deg.to_radians(), 0.01, 0.04).unwrap()
    }

    #[test]
    fn contact_line_height() {
        let geom = geometry(30.0);
        let m = Meniscus::for_geometry(&geom);
        let rise = m.contact_line(geom.half_width) - geom.initial_height;
        assert!((rise - 2.88675e-3).abs() < 1e-8, "{rise}");
    }

    #[test]
    fn total_volume_matches_closed_form() {
        for (deg, nx) in [(30.0, 4), (30.0, 16), (60.0, 8), (10.0, 8)] {
            let geom = geometry(deg);
            let grid = Grid::new(geom.half_width, geom.domain_height, nx).unwrap();
            let alpha = initial_fractions(&grid, &geom).unwrap();
            let mut volume = 0.0;
            for i in 0..grid.nx as isize {
                for j in 0..grid.ny as isize {
                    volume += alpha[(i, j)] * grid.h * grid.h;
                }
            }
            let r = geom.half_width;
            let exact = r * (geom.initial_height + meniscus_correction(r, geom.contact_angle));
            assert!(((volume - exact) / exact).abs() < 1e-10, "θ = {deg}, nx = {nx}");
        }
    }

    #[test]
    fn symmetry_column_holds_initial_height() {
        let geom = geometry(30.0);
        let grid = Grid::new(geom.half_width, geom.domain_height, 16).unwrap();
        let alpha = initial_fractions(&grid, &geom).unwrap();
        let column: f64 = (0..grid.ny as isize).map(|j| alpha[(0, j)] * grid.h).sum();
        // The first column averages the arc over [0, dx], slightly above the apex.
        let m = Meniscus::for_geometry(&geom);
        let exact = m.area_below([0.0, grid.h, 0.0, geom.domain_height]) / grid.h;
        assert!(((column - exact) / exact).abs() < 1e-10);
        assert!(column > geom.initial_height);
    }

    #[test]
    fn flat_interface_fills_one_partial_row() {
        let mut geom = geometry(30.0);
        geom.contact_angle = FRAC_PI_2;
        geom.initial_height = 0.0101;
        let grid = Grid::new(geom.half_width, geom.domain_height, 8).unwrap();
        let alpha = initial_fractions(&grid, &geom).unwrap();
        for i in 0..8 {
            let partial: Vec<_> = (0..grid.ny as isize)
                .filter(|&j| alpha[(i, j)] > 0.0 && alpha[(i, j)] < 1.0)
                .collect();
            assert_eq!(partial.len(), 1);
        }
    }

    #[test]
    fn arc_must_fit() {
        let mut geom = geometry(30.0);
        geom.initial_height = 0.038;
        let grid = Grid::new(geom.half_width, geom.domain_height, 8).unwrap();
        assert!(matches!(
            initial_fractions(&grid, &geom),
            Err(Error::ArcExceedsDomain { .. })
        ));
    }
}
