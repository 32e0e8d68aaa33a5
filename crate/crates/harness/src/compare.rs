//! Deviation metrics between two rise curves.

use caprise_core::ode::detect_peaks;
use caprise_core::Trajectory;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationMetrics {
    /// ‖h_a − h_b‖₂ / ‖h_b‖₂ on the common grid.
    pub l2_rel: f64,
    /// max|h_a − h_b| / max|h_a| on the common grid.
    pub linf_rel: f64,
    /// t_a / t_b of the first maxima.
    pub first_peak_time_ratio: Option<f64>,
    /// (h_a,max − h∞,a) / (h_b,max − h∞,b) of the first maxima.
    pub first_peak_overshoot_ratio: Option<f64>,
    pub peak_count_a: usize,
    pub peak_count_b: usize,
}

/// Union of both sample grids restricted to the overlap.
pub fn common_grid(a: &Trajectory, b: &Trajectory) -> Result<Vec<f64>> {
    let (Some(a0), Some(a1), Some(b0), Some(b1)) = (a.first(), a.last(), b.first(), b.last())
    else {
        return Err(Error::NoOverlap {
            a0: f64::NAN,
            a1: f64::NAN,
            b0: f64::NAN,
            b1: f64::NAN,
        });
    };
    let lo = a0.t.max(b0.t);
    let hi = a1.t.min(b1.t);
    if !(lo < hi) {
        return Err(Error::NoOverlap {
            a0: a0.t,
            a1: a1.t,
            b0: b0.t,
            b1: b1.t,
        });
    }
    let mut grid: Vec<f64> = a
        .times()
        .chain(b.times())
        .filter(|&t| t >= lo && t <= hi)
        .collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    Ok(grid)
}

fn resample(traj: &Trajectory, grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&t| traj.height_at(t).expect("grid lies inside the sampled range"))
        .collect()
}

/// Unnormalised ‖h_a − h_b‖₂ on the common grid; symmetric in its arguments.
pub fn l2_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    let grid = common_grid(a, b)?;
    let (ha, hb) = (resample(a, &grid), resample(b, &grid));
    Ok(ha.iter().zip(&hb).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
}

pub fn compare(a: &Trajectory, b: &Trajectory) -> Result<DeviationMetrics> {
    let grid = common_grid(a, b)?;
    let (ha, hb) = (resample(a, &grid), resample(b, &grid));
    let diff2: f64 = ha.iter().zip(&hb).map(|(x, y)| (x - y).powi(2)).sum();
    let norm_b: f64 = hb.iter().map(|y| y * y).sum::<f64>().sqrt();
    let diff_max = ha.iter().zip(&hb).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let max_a = ha.iter().map(|x| x.abs()).fold(0.0, f64::max);

    let (pa, pb) = (detect_peaks(a), detect_peaks(b));
    let (fa, fb) = (pa.first_max(), pb.first_max());
    let time_ratio = match (fa, fb) {
        (Some(x), Some(y)) if y.t > 0.0 => Some(x.t / y.t),
        _ => None,
    };
    let overshoot_ratio = match (fa, fb, a.reference_height(), b.reference_height()) {
        (Some(x), Some(y), Some(ra), Some(rb)) if y.h - rb > 0.0 && x.h - ra > 0.0 => {
            Some((x.h - ra) / (y.h - rb))
        }
        _ => None,
    };
    Ok(DeviationMetrics {
        l2_rel: diff2.sqrt() / norm_b,
        linf_rel: diff_max / max_a,
        first_peak_time_ratio: time_ratio,
        first_peak_overshoot_ratio: overshoot_ratio,
        peak_count_a: pa.peaks.len(),
        peak_count_b: pb.peaks.len(),
    })
}

/// Maxima rising at least `fraction · h∞` above the stationary height.
pub fn overshoot_scale_maxima(traj: &Trajectory, fraction: f64) -> usize {
    let Some(h_inf) = traj.reference_height() else {
        return 0;
    };
    detect_peaks(traj)
        .maxima()
        .filter(|p| p.h - h_inf >= fraction * h_inf.abs())
        .count()
}
