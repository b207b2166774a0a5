//! Discrete LULU operators on finite sequences.
//!
//! `(L_n ξ)_i = max_{k=0..n} min{ξ_{i-n+k}, ..., ξ_{i+k}}` and dually for
//! `U_n`. Both are evaluated as two sliding-window passes (window `n + 1`)
//! over a padded copy of the input, each pass O(N) with a monotone wedge.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{LuluError, Result};
use crate::funcrep::{Builder, PLFunction};
use crate::lulu::{lower_smoother, SmootherConfig};

/// A finite real sequence with uniform sample spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signal {
    samples: Vec<f64>,
    spacing: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        Self::with_spacing(samples, 1.0)
    }

    pub fn with_spacing(samples: Vec<f64>, spacing: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(LuluError::InvalidParameter("signal is empty".into()));
        }
        if let Some(v) = samples.iter().find(|v| !v.is_finite()) {
            return Err(LuluError::InvalidParameter(format!("non-finite sample {v}")));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(LuluError::InvalidParameter(format!(
                "spacing must be positive, got {spacing}"
            )));
        }
        Ok(Self { samples, spacing })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn negate(&self) -> Self {
        Self {
            samples: self.samples.iter().map(|v| -v).collect(),
            spacing: self.spacing,
        }
    }

    fn with_samples(&self, samples: Vec<f64>) -> Self {
        Self {
            samples,
            spacing: self.spacing,
        }
    }
}

/// How indices outside `0..N` are read.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Nearest valid index; the window extremes equal those of the window
    /// clipped to `0..N`.
    #[default]
    Clamp,
    /// Mirror about the end samples without repeating them.
    Reflect,
    /// A fixed value outside the signal.
    ExtendConstant(f64),
}

impl BoundaryPolicy {
    fn read(&self, s: &[f64], j: isize) -> f64 {
        let n = s.len() as isize;
        if (0..n).contains(&j) {
            return s[j as usize];
        }
        match *self {
            BoundaryPolicy::Clamp => s[j.clamp(0, n - 1) as usize],
            BoundaryPolicy::Reflect => {
                if n == 1 {
                    return s[0];
                }
                let period = 2 * (n - 1);
                let k = j.rem_euclid(period);
                s[(if k < n { k } else { period - k }) as usize]
            }
            BoundaryPolicy::ExtendConstant(c) => c,
        }
    }
}

/// Extremes of every window of `width` consecutive values, in order; `keep`
/// decides whether a newer value displaces an older one from the wedge.
fn sliding_extreme(values: &[f64], width: usize, keep: fn(f64, f64) -> bool) -> Vec<f64> {
    let mut wedge: VecDeque<usize> = VecDeque::with_capacity(width + 1);
    let mut out = Vec::with_capacity(values.len() + 1 - width);
    for (i, &v) in values.iter().enumerate() {
        while let Some(&back) = wedge.back() {
            if keep(values[back], v) {
                break;
            }
            wedge.pop_back();
        }
        wedge.push_back(i);
        if i + 1 >= width {
            let start = i + 1 - width;
            while wedge[0] < start {
                wedge.pop_front();
            }
            out.push(values[wedge[0]]);
        }
    }
    out
}

fn lulu_pass(s: &Signal, n: usize, bp: BoundaryPolicy, lower: bool) -> Result<Signal> {
    if n == 0 {
        return Err(LuluError::InvalidParameter("window parameter n must be >= 1".into()));
    }
    let data = s.samples();
    let len = data.len() as isize;
    let pad = n as isize;
    let padded: Vec<f64> = (-pad..len + pad).map(|j| bp.read(data, j)).collect();
    // min keeps older entries that are strictly smaller, max strictly larger
    let below: fn(f64, f64) -> bool = |old, new| old < new;
    let above: fn(f64, f64) -> bool = |old, new| old > new;
    let (first, second) = if lower { (below, above) } else { (above, below) };
    let inner = sliding_extreme(&padded, n + 1, first);
    // inner[t] covers padded[t..=t+n], i.e. original indices t-n..=t
    let outer = sliding_extreme(&inner[..data.len() + n], n + 1, second);
    Ok(s.with_samples(outer))
}

/// `L_n` with the given boundary policy. For `n >= N` the windows cover the
/// whole (padded) signal; this is allowed.
pub fn discrete_lower(s: &Signal, n: usize, bp: BoundaryPolicy) -> Result<Signal> {
    lulu_pass(s, n, bp, true)
}

/// `U_n`, the dual of [`discrete_lower`].
pub fn discrete_upper(s: &Signal, n: usize, bp: BoundaryPolicy) -> Result<Signal> {
    lulu_pass(s, n, bp, false)
}

/// Direct evaluation of the defining max-of-mins formula, O(N n²).
pub fn naive_lower(s: &Signal, n: usize, bp: BoundaryPolicy) -> Signal {
    naive(s, n, bp, true)
}

/// Direct evaluation of the defining min-of-maxes formula, O(N n²).
pub fn naive_upper(s: &Signal, n: usize, bp: BoundaryPolicy) -> Signal {
    naive(s, n, bp, false)
}

fn naive(s: &Signal, n: usize, bp: BoundaryPolicy, lower: bool) -> Signal {
    let data = s.samples();
    let n = n as isize;
    let out = (0..data.len() as isize)
        .map(|i| {
            let windows = (0..=n).map(|k| {
                let vals = (i - n + k..=i + k).map(|j| bp.read(data, j));
                if lower {
                    vals.fold(f64::INFINITY, f64::min)
                } else {
                    vals.fold(f64::NEG_INFINITY, f64::max)
                }
            });
            if lower {
                windows.fold(f64::NEG_INFINITY, f64::max)
            } else {
                windows.fold(f64::INFINITY, f64::min)
            }
        })
        .collect();
    s.with_samples(out)
}

/// Piecewise-constant function on `[0, N·spacing]` taking `samples[i]` on
/// `[i·spacing, (i+1)·spacing)`; the right end takes the last sample.
pub fn embed_as_step(s: &Signal) -> PLFunction {
    let h = s.spacing();
    let data = s.samples();
    let mut out = Builder::default();
    for (i, &v) in data.iter().enumerate() {
        out.point(i as f64 * h, v);
        out.piece(v, v);
    }
    out.point(data.len() as f64 * h, data[data.len() - 1]);
    out.build()
        .expect("a non-empty signal embeds as a valid step function")
        .simplify()
}

/// `sup |L_δ(step(s)) - step(L_n s)|` for the clamped discrete operator:
/// the gap between the continuous smoother on the step embedding and the
/// embedded discrete result.
pub fn step_consistency_gap(s: &Signal, n: usize, delta: f64) -> Result<f64> {
    let cfg = SmootherConfig::new(delta)?;
    let continuous = lower_smoother(&embed_as_step(s), &cfg);
    let discrete = embed_as_step(&discrete_lower(s, n, BoundaryPolicy::Clamp)?);
    continuous.sup_norm_diff(&discrete)
}
