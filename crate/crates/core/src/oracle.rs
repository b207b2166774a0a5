//! Dense-grid reference implementations of the envelopes and the modulus.
//!
//! Deliberately naive. Every sample set contains the breakpoints exactly; at
//! a discontinuity two extra samples at `±h/10` stand in for the side limits,
//! so results there are approximations.

use crate::error::{LuluError, Result};
use crate::funcrep::PLFunction;

/// Sample cap for the modulus enumeration.
pub const DEFAULT_MODULUS_CAP: usize = 2_000;
/// Sample cap used when choosing a default step for envelope checks.
pub const DEFAULT_ENVELOPE_CAP: usize = 20_000;

#[derive(Clone, Debug)]
pub struct GridOracle {
    h: f64,
    xs: Vec<f64>,
    ys: Vec<f64>,
    slack: f64,
}

impl GridOracle {
    /// Samples `f` on a uniform grid of step `h` plus breakpoints.
    pub fn with_step(f: &PLFunction, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(LuluError::InvalidParameter(format!(
                "grid step must be positive, got {h}"
            )));
        }
        let (a, b) = f.domain();
        let n = ((b - a) / h).ceil() as usize;
        let mut xs: Vec<f64> = (0..=n).map(|k| (a + k as f64 * h).min(b)).collect();
        xs.extend_from_slice(f.breakpoints());
        for i in 0..f.breakpoints().len() {
            if is_discontinuous(f, i) {
                let x = f.breakpoints()[i];
                xs.extend([x - 0.1 * h, x + 0.1 * h].into_iter().filter(|&s| s > a && s < b));
            }
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let ys = xs.iter().map(|&x| f.eval(x).expect("sample inside domain")).collect();
        Ok(Self {
            h,
            xs,
            ys,
            slack: f.x_tol(),
        })
    }

    /// Step `min_gap / 16`, coarsened so that the grid has at most `cap`
    /// uniform samples.
    pub fn default_step(f: &PLFunction, cap: usize) -> f64 {
        let (a, b) = f.domain();
        (f.min_gap() / 16.0).max((b - a) / cap.max(1) as f64)
    }

    pub fn step(&self) -> f64 {
        self.h
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    /// Same sample positions carrying other values, for chaining grid
    /// operations.
    pub fn with_values(&self, ys: Vec<f64>) -> Result<Self> {
        if ys.len() != self.xs.len() {
            return Err(LuluError::InvalidParameter(format!(
                "expected {} values, got {}",
                self.xs.len(),
                ys.len()
            )));
        }
        Ok(Self { ys, ..self.clone() })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    fn window_fold(&self, r: f64, init: f64, pick: fn(f64, f64) -> f64) -> Vec<f64> {
        let xs = &self.xs;
        let mut lo = 0;
        let mut out = Vec::with_capacity(xs.len());
        for &x in xs {
            while xs[lo] < x - r - self.slack {
                lo += 1;
            }
            let mut acc = init;
            for (y, v) in xs[lo..].iter().zip(&self.ys[lo..]) {
                if *y > x + r + self.slack {
                    break;
                }
                acc = pick(acc, *v);
            }
            out.push(acc);
        }
        out
    }

    /// Minimum over samples within distance `r`, at every sample.
    pub fn grid_erode(&self, r: f64) -> Vec<f64> {
        self.window_fold(r, f64::INFINITY, f64::min)
    }

    /// Maximum over samples within distance `r`, at every sample.
    pub fn grid_dilate(&self, r: f64) -> Vec<f64> {
        self.window_fold(r, f64::NEG_INFINITY, f64::max)
    }

    /// `L` on the grid: dilation of the erosion, both at radius `r`.
    pub fn grid_lower(&self, r: f64) -> Self {
        let eroded = Self { ys: self.grid_erode(r), ..self.clone() };
        Self { ys: eroded.grid_dilate(r), ..self.clone() }
    }

    /// `U` on the grid: erosion of the dilation.
    pub fn grid_upper(&self, r: f64) -> Self {
        let dilated = Self { ys: self.grid_dilate(r), ..self.clone() };
        Self { ys: dilated.grid_erode(r), ..self.clone() }
    }

    /// Largest half-defect `½(|f(x1)−f(x)| + |f(x2)−f(x)| − |f(x1)−f(x2)|)`
    /// over sampled `x1 <= x <= x2` with `x2 − x1 <= δ`.
    pub fn grid_modulus(&self, delta: f64) -> Result<f64> {
        self.grid_modulus_capped(delta, DEFAULT_MODULUS_CAP)
    }

    pub fn grid_modulus_capped(&self, delta: f64, cap: usize) -> Result<f64> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(LuluError::InvalidParameter(format!(
                "delta must be positive, got {delta}"
            )));
        }
        if self.len() > cap {
            return Err(LuluError::GridTooLarge {
                samples: self.len(),
                cap,
            });
        }
        let half = |a: f64, b: f64, c: f64| 0.5 * ((a - c).abs() + (b - c).abs() - (a - b).abs());
        let (xs, ys) = (&self.xs, &self.ys);
        let mut best: f64 = 0.0;
        for i in 0..xs.len() {
            // the formula is convex in the middle value, so for a fixed pair
            // its maximum over the samples in between sits at their min or max
            let (mut lo, mut hi) = (ys[i], ys[i]);
            for j in i + 1..xs.len() {
                if xs[j] - xs[i] > delta + self.slack {
                    break;
                }
                lo = lo.min(ys[j]);
                hi = hi.max(ys[j]);
                best = best.max(half(ys[i], ys[j], lo)).max(half(ys[i], ys[j], hi));
            }
        }
        Ok(best)
    }
}

fn is_discontinuous(f: &PLFunction, i: usize) -> bool {
    let v = f.values()[i];
    let left = i.checked_sub(1).map(|p| f.left_limits()[p]);
    let right = f.right_limits().get(i).copied();
    left.is_some_and(|l| l != v) || right.is_some_and(|r| r != v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse() -> PLFunction {
        PLFunction::new(
            vec![0.0, 4.0, 4.4, 10.0],
            vec![0.0, 1.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0],
        )
        .unwrap()
    }

    #[test]
    fn samples_contain_breakpoints_and_side_samples() {
        let o = GridOracle::with_step(&pulse(), 0.3).unwrap();
        for x in [0.0, 4.0, 4.4, 10.0] {
            assert!(o.xs().contains(&x));
        }
        assert!(o.xs().iter().any(|&x| (x - 3.97).abs() < 1e-12));
        assert!(o.xs().windows(2).all(|w| w[0] < w[1]));
        assert!(GridOracle::with_step(&pulse(), 0.0).is_err());
    }

    #[test]
    fn constant_is_unchanged() {
        let c = PLFunction::constant(0.0, 3.0, 2.0).unwrap();
        let o = GridOracle::with_step(&c, 0.01).unwrap();
        assert!(o.grid_erode(0.4).iter().all(|&v| v == 2.0));
        assert!(o.grid_dilate(0.4).iter().all(|&v| v == 2.0));
        assert_eq!(o.grid_modulus(1.0).unwrap(), 0.0);
    }

    #[test]
    fn pulse_erodes_to_zero() {
        let o = GridOracle::with_step(&pulse(), 0.01).unwrap();
        assert!(o.grid_erode(0.5).iter().all(|&v| v == 0.0));
        assert_eq!(o.grid_modulus(1.0).unwrap(), 1.0);
    }

    #[test]
    fn abs_erosion_matches_closed_form() {
        let f = PLFunction::from_points(&[(0.0, 5.0), (5.0, 0.0), (10.0, 5.0)]).unwrap();
        let o = GridOracle::with_step(&f, 1e-3).unwrap();
        for (x, v) in o.xs().iter().zip(o.grid_erode(1.0)) {
            if (1.0..=9.0).contains(x) {
                assert!((v - ((x - 5.0).abs() - 1.0).max(0.0)).abs() <= 1e-3, "x={x}");
            }
        }
    }

    #[test]
    fn monotone_has_zero_modulus_and_cap_is_enforced() {
        let f = PLFunction::from_points(&[(0.0, 0.0), (1.0, 2.0), (2.0, 2.5)]).unwrap();
        let o = GridOracle::with_step(&f, 0.01).unwrap();
        assert_eq!(o.grid_modulus(0.5).unwrap(), 0.0);
        assert!(matches!(
            o.grid_modulus_capped(0.5, 10),
            Err(LuluError::GridTooLarge { cap: 10, .. })
        ));
    }

    #[test]
    fn halving_the_step_converges() {
        let f = PLFunction::from_points(&[(0.0, 0.0), (1.0, 3.0), (1.5, -1.0), (4.0, 2.0)]).unwrap();
        let h = 0.02;
        let coarse = GridOracle::with_step(&f, h).unwrap();
        let fine = GridOracle::with_step(&f, h / 2.0).unwrap();
        let slope = f.max_abs_slope();
        let (mc, mf) = (coarse.grid_modulus(1.0).unwrap(), fine.grid_modulus(1.0).unwrap());
        assert!((mc - mf).abs() <= slope * h);
        let ec = coarse.grid_erode(0.3);
        let ef = fine.grid_erode(0.3);
        for (x, v) in coarse.xs().iter().zip(ec) {
            let k = fine.xs().iter().position(|y| y == x).unwrap();
            assert!((v - ef[k]).abs() <= slope * h + 1e-12);
        }
    }
}
