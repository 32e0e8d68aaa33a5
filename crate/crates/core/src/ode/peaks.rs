use serde::{Deserialize, Serialize};

use crate::trajectory::Trajectory;

/// Default prominence threshold relative to the reference height.
pub const DEFAULT_PEAK_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub t: f64,
    pub h: f64,
    pub is_max: bool,
}

/// Alternating maxima and minima of a sampled rise curve.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PeakList {
    pub peaks: Vec<Peak>,
}

impl PeakList {
    pub fn maxima(&self) -> impl Iterator<Item = &Peak> {
        self.peaks.iter().filter(|p| p.is_max)
    }

    pub fn first_max(&self) -> Option<&Peak> {
        self.maxima().next()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }
}

/// Extrema with prominence below `DEFAULT_PEAK_EPS` times the trajectory's
/// reference height are suppressed.
pub fn detect_peaks(traj: &Trajectory) -> PeakList {
    let scale = traj.reference_height().unwrap_or(0.0).abs();
    detect_peaks_with(traj, DEFAULT_PEAK_EPS * scale)
}

/// Finds interior extrema from sign changes of the discrete slope, refines
/// each with a parabola through its three neighbouring samples, and drops
/// extrema whose prominence is below `min_prominence`.
pub fn detect_peaks_with(traj: &Trajectory, min_prominence: f64) -> PeakList {
    let s = &traj.samples;
    if s.len() < 3 {
        return PeakList::default();
    }

    // Sample indices of raw extrema; plateaus resolve to their last sample.
    let mut raw: Vec<(usize, bool)> = Vec::new();
    let mut prev_sign = 0i8;
    for k in 1..s.len() {
        let d = s[k].h - s[k - 1].h;
        let sign = if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            0
        };
        if sign == 0 {
            continue;
        }
        if prev_sign != 0 && sign != prev_sign {
            raw.push((k - 1, prev_sign > 0));
        }
        prev_sign = sign;
    }

    // Zig-zag filter: repeatedly remove the smallest swing below threshold.
    // Nodes are the two endpoints plus the raw extrema.
    let mut nodes: Vec<(usize, Option<bool>)> = Vec::with_capacity(raw.len() + 2);
    nodes.push((0, None));
    nodes.extend(raw.iter().map(|&(k, m)| (k, Some(m))));
    nodes.push((s.len() - 1, None));
    loop {
        let mut best: Option<(usize, f64)> = None;
        for w in 0..nodes.len() - 1 {
            let (a, b) = (nodes[w], nodes[w + 1]);
            if a.1.is_none() && b.1.is_none() {
                continue;
            }
            let swing = (s[a.0].h - s[b.0].h).abs();
            if swing < min_prominence && best.is_none_or(|(_, m)| swing < m) {
                best = Some((w, swing));
            }
        }
        let Some((w, _)) = best else { break };
        let first_is_end = nodes[w].1.is_none();
        let second_is_end = nodes[w + 1].1.is_none();
        match (first_is_end, second_is_end) {
            (true, _) => {
                nodes.remove(w + 1);
            }
            (_, true) => {
                nodes.remove(w);
            }
            _ => {
                nodes.drain(w..w + 2);
            }
        }
    }

    let peaks = nodes
        .into_iter()
        .filter_map(|(k, kind)| kind.map(|is_max| refine(traj, k, is_max)))
        .collect();
    PeakList { peaks }
}

fn refine(traj: &Trajectory, k: usize, is_max: bool) -> Peak {
    let s = &traj.samples;
    let (a, b, c) = (s[k - 1], s[k], s[k + 1]);
    // Lagrange parabola through three (possibly non-uniform) points.
    let denom = (a.t - b.t) * (a.t - c.t) * (b.t - c.t);
    let pa = (c.t * (b.h - a.h) + b.t * (a.h - c.h) + a.t * (c.h - b.h)) / denom;
    let pb = (c.t * c.t * (a.h - b.h) + b.t * b.t * (c.h - a.h) + a.t * a.t * (b.h - c.h)) / denom;
    let pc = (b.t * c.t * (b.t - c.t) * a.h + c.t * a.t * (c.t - a.t) * b.h
        + a.t * b.t * (a.t - b.t) * c.h)
        / denom;
    let curvature_ok = if is_max { pa < 0.0 } else { pa > 0.0 };
    if !curvature_ok || !pa.is_finite() {
        return Peak { t: b.t, h: b.h, is_max };
    }
    let t = (-pb / (2.0 * pa)).clamp(a.t, c.t);
    let h = pa * t * t + pb * t + pc;
    Peak { t, h, is_max }
}
