//! Seeded random piecewise-linear functions for property checks.
//!
//! Breakpoints are spread by drawing uniform weights for the gaps on top of a
//! minimum gap. Values and limits are uniform in `value_range`. At each
//! interior breakpoint a jump happens with probability `jump_prob`; a jump
//! draws independent side limits and a point value that is one of the two
//! limits or a fresh draw.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{LuluError, Result};
use crate::funcrep::PLFunction;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub domain: (f64, f64),
    /// Inclusive range for the number of pieces.
    pub pieces: (usize, usize),
    pub min_gap: f64,
    pub value_range: (f64, f64),
    pub jump_prob: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        Self {
            domain: (0.0, 10.0),
            pieces: (1, 29),
            min_gap: 0.01,
            value_range: (-5.0, 5.0),
            jump_prob: 0.0,
        }
    }
}

impl RandomConfig {
    pub fn with_jumps(mut self, p: f64) -> Self {
        self.jump_prob = p;
        self
    }

    fn check(&self) -> Result<()> {
        let (a, b) = self.domain;
        let (lo, hi) = self.pieces;
        let (vlo, vhi) = self.value_range;
        let ok = a.is_finite()
            && b.is_finite()
            && a < b
            && lo >= 1
            && lo <= hi
            && self.min_gap >= 0.0
            && self.min_gap * hi as f64 <= b - a
            && vlo.is_finite()
            && vhi.is_finite()
            && vlo <= vhi
            && (0.0..=1.0).contains(&self.jump_prob);
        if ok {
            Ok(())
        } else {
            Err(LuluError::InvalidParameter(format!("bad random config {self:?}")))
        }
    }
}

fn breakpoints<R: Rng>(rng: &mut R, a: f64, b: f64, pieces: usize, min_gap: f64) -> Vec<f64> {
    let weights: Vec<f64> = (0..pieces).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let spare = (b - a) - min_gap * pieces as f64;
    let mut xs = Vec::with_capacity(pieces + 1);
    let mut x = a;
    xs.push(a);
    for w in &weights[..pieces - 1] {
        x += min_gap + spare * w / total;
        xs.push(x);
    }
    xs.push(b);
    xs
}

struct Draw<'a, R> {
    rng: &'a mut R,
    range: (f64, f64),
}

impl<R: Rng> Draw<'_, R> {
    fn value(&mut self) -> f64 {
        let (lo, hi) = self.range;
        if lo == hi {
            lo
        } else {
            self.rng.gen_range(lo..=hi)
        }
    }
}

/// Fills values and limits over the given breakpoints. `ends` forces the
/// first and last piece to be constant at the given value.
fn fill<R: Rng>(
    rng: &mut R,
    xs: Vec<f64>,
    cfg: &RandomConfig,
    ends: Option<f64>,
) -> Result<PLFunction> {
    let m = xs.len() - 1;
    let jump_prob = cfg.jump_prob;
    let mut d = Draw {
        rng,
        range: cfg.value_range,
    };
    // continuous knot values first, then jumps split some of them
    let knots: Vec<f64> = (0..=m).map(|_| d.value()).collect();
    let mut values = knots.clone();
    let mut right: Vec<f64> = knots[..m].to_vec();
    let mut left: Vec<f64> = knots[1..].to_vec();
    for i in 1..m {
        if d.rng.gen_bool(jump_prob) {
            left[i - 1] = d.value();
            right[i] = d.value();
            values[i] = match d.rng.gen_range(0..3) {
                0 => left[i - 1],
                1 => right[i],
                _ => d.value(),
            };
        }
    }
    if let Some(c) = ends {
        values[0] = c;
        right[0] = c;
        left[0] = c;
        values[1] = c;
        right[1] = c;
        values[m - 1] = c;
        left[m - 2] = c;
        right[m - 1] = c;
        left[m - 1] = c;
        values[m] = c;
    }
    PLFunction::new(xs, values, right, left)
}

/// A random function on `cfg.domain`.
pub fn random_pl<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Result<PLFunction> {
    cfg.check()?;
    let (a, b) = cfg.domain;
    let pieces = rng.gen_range(cfg.pieces.0..=cfg.pieces.1);
    let xs = breakpoints(rng, a, b, pieces, cfg.min_gap);
    fill(rng, xs, cfg, None)
}

/// A random function whose features live in `cfg.domain = [a, b]`, on the
/// padded domain `[a − pad, b + pad]` where it is constant outside `[a, b]`.
/// The constant is also the value at `a` and `b`, so the function is
/// continuous there.
pub fn random_padded_pl<R: Rng>(rng: &mut R, cfg: &RandomConfig, pad: f64) -> Result<PLFunction> {
    cfg.check()?;
    if !(pad.is_finite() && pad > 0.0) {
        return Err(LuluError::InvalidParameter(format!("pad must be positive, got {pad}")));
    }
    let (a, b) = cfg.domain;
    let pieces = rng.gen_range(cfg.pieces.0.max(2)..=cfg.pieces.1.max(2));
    let mut xs = vec![a - pad];
    xs.extend(breakpoints(rng, a, b, pieces, cfg.min_gap));
    xs.push(b + pad);
    let c = Draw {
        rng,
        range: cfg.value_range,
    }
    .value();
    fill(rng, xs, cfg, Some(c))
}
