//! Lower and upper envelopes over flat windows: erosion `I_r` and dilation
//! `S_r` of a [`PLFunction`], computed exactly.
//!
//! For `x` in the domain the erosion is the infimum of `f` over the clipped
//! window `[x - r, x + r] ∩ [a, b]`. Between consecutive candidate points
//! `{x_i - r, x_i, x_i + r} ∩ [a, b]` no breakpoint of `f` enters or leaves the
//! window and no window end is clipped on or off, so the infimum is the
//! minimum of one constant (limits and values of everything strictly inside)
//! and at most two moving linear terms (the value of `f` under each window
//! end). The result on such a cell is the lower envelope of those lines,
//! split at their crossings.

use serde::{Deserialize, Serialize};

use crate::error::{LuluError, Result};
use crate::funcrep::{cluster_points, Builder, Loc, PLFunction, Window};

/// Positive window radius.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Radius(f64);

impl Radius {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self(r))
        } else {
            Err(LuluError::InvalidParameter(format!(
                "radius must be positive and finite, got {r}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// `slope * x + intercept`.
#[derive(Clone, Copy, Debug)]
struct Line {
    slope: f64,
    intercept: f64,
}

impl Line {
    fn constant(c: f64) -> Self {
        Self {
            slope: 0.0,
            intercept: c,
        }
    }

    fn at(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

fn lower_envelope(lines: &[Line], x: f64) -> f64 {
    lines.iter().map(|l| l.at(x)).fold(f64::INFINITY, f64::min)
}

/// The clipped window `B_r(x) ∩ [a, b]`.
fn window_at(f: &PLFunction, x: f64, r: f64) -> Window {
    let (a, b) = f.domain();
    Window::new((x - r).max(a), (x + r).min(b)).expect("clipped window is ordered")
}

/// Lines whose minimum is the erosion throughout the open cell containing
/// `mid`.
fn cell_family(f: &PLFunction, mid: f64, r: f64) -> Vec<Line> {
    let (a, b) = f.domain();
    let xs = f.breakpoints();
    let lo = f.locate((mid - r).max(a));
    let hi = f.locate((mid + r).min(b));
    let mut lines = Vec::with_capacity(3);
    let mut constant = f.interior_extreme(lo, hi, f64::min);
    let mut fold_const = |v: f64| constant = Some(constant.map_or(v, |c: f64| c.min(v)));

    // value under the left end, which moves as x - r while inside piece i
    match lo {
        Loc::At(j) => fold_const(f.values()[j]),
        Loc::In(i) => {
            let s = f.slope(i);
            lines.push(Line {
                slope: s,
                intercept: f.right_limits()[i] - s * (r + xs[i]),
            });
        }
    }
    match hi {
        Loc::At(k) => fold_const(f.values()[k]),
        Loc::In(k) => {
            let s = f.slope(k);
            lines.push(Line {
                slope: s,
                intercept: f.right_limits()[k] + s * (r - xs[k]),
            });
        }
    }
    if let Some(c) = constant {
        lines.push(Line::constant(c));
    }
    lines
}

/// Erosion `I_r(f)(x) = inf { f(y) : y ∈ [a, b], |x - y| <= r }`.
pub fn erode(f: &PLFunction, r: Radius) -> PLFunction {
    let r = r.get();
    let (a, b) = f.domain();
    let tol = f.x_tol();

    let mut candidates = vec![];
    for &x in f.breakpoints() {
        candidates.push((x, 0));
        for s in [x - r, x + r] {
            if s > a && s < b {
                candidates.push((s, 1));
            }
        }
    }
    let cells = cluster_points(candidates, tol);

    let mut out = Builder::default();
    for (k, &c) in cells.iter().enumerate() {
        out.point(c, f.window_inf(&window_at(f, c, r)));
        let Some(&d) = cells.get(k + 1) else { break };
        let lines = cell_family(f, 0.5 * (c + d), r);

        let mut cuts: Vec<f64> = vec![];
        for (i, p) in lines.iter().enumerate() {
            for q in &lines[i + 1..] {
                let ds = p.slope - q.slope;
                if ds != 0.0 {
                    let t = (q.intercept - p.intercept) / ds;
                    if t - c > tol && d - t > tol {
                        cuts.push(t);
                    }
                }
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup_by(|u, v| (*u - *v).abs() <= tol);

        let mut left = c;
        for t in cuts {
            let v = lower_envelope(&lines, t);
            out.piece(lower_envelope(&lines, left), v);
            out.point(t, v);
            left = t;
        }
        out.piece(lower_envelope(&lines, left), lower_envelope(&lines, d));
    }
    out.build()
        .expect("candidate points are strictly increasing and finite")
        .simplify()
}

/// Dilation `S_r(f)(x) = sup { f(y) : y ∈ [a, b], |x - y| <= r }`, computed
/// as `-I_r(-f)`.
pub fn dilate(f: &PLFunction, r: Radius) -> PLFunction {
    erode(&f.negate(), r).negate()
}

/// `I_{r1}(I_{r2}(f))`, checked against `I_{r1 + r2}(f)`.
///
/// A mismatch beyond `tol` means the erosion itself is wrong, and is reported
/// as [`LuluError::LawViolation`].
pub fn compose_erode(f: &PLFunction, r1: Radius, r2: Radius, tol: f64) -> Result<PLFunction> {
    let composed = erode(&erode(f, r2), r1);
    let direct = erode(f, Radius::new(r1.get() + r2.get())?);
    let gap = composed.sup_norm_diff(&direct)?;
    if gap > tol {
        return Err(LuluError::LawViolation(format!(
            "I_{} ∘ I_{} differs from I_{} by {gap:e}",
            r1.get(),
            r2.get(),
            r1.get() + r2.get()
        )));
    }
    Ok(composed)
}
