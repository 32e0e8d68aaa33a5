use serde::{Deserialize, Serialize};

use crate::scaling::ScalingKind;

/// One output point of a rise curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub h: f64,
    /// dh/dt
    pub v: f64,
}

/// Units in which a trajectory's samples are expressed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Representation {
    Dimensional,
    Scaled {
        scaling: ScalingKind,
        t_rate: f64,
        h_rate: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub label: String,
    pub model: String,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    /// Stationary height this curve is expected to approach, in the same
    /// units as the samples.
    pub h_inf: Option<f64>,
    pub representation: Representation,
}

impl TrajectoryMeta {
    pub fn new(label: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            model: model.into(),
            rel_tol: None,
            abs_tol: None,
            h_inf: None,
            representation: Representation::Dimensional,
        }
    }
}

/// Height-versus-time curve sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn new(samples: Vec<Sample>, meta: TrajectoryMeta) -> Self {
        debug_assert!(samples.windows(2).all(|w| w[1].t > w[0].t));
        Self { samples, meta }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn first(&self) -> Option<&Sample> {
        self.samples.first()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn heights(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.h)
    }

    pub fn max_height(&self) -> Option<f64> {
        self.heights().reduce(f64::max)
    }

    /// Piecewise-linear interpolation of h; `None` outside the sampled range.
    pub fn height_at(&self, t: f64) -> Option<f64> {
        let s = &self.samples;
        let (first, last) = (s.first()?, s.last()?);
        if t < first.t || t > last.t {
            return None;
        }
        let k = s.partition_point(|p| p.t < t);
        if k == 0 {
            return Some(first.h);
        }
        let (a, b) = (&s[k - 1], &s[k]);
        if b.t == t {
            return Some(b.h);
        }
        let w = (t - a.t) / (b.t - a.t);
        Some(a.h + w * (b.h - a.h))
    }

    /// Stationary height from the metadata, falling back to the last sample.
    pub fn reference_height(&self) -> Option<f64> {
        self.meta.h_inf.or_else(|| self.last().map(|s| s.h))
    }
}
