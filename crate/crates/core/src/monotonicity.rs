//! Local δ-monotonicity and the moduli of nonmonotonicity `μ`, `μ̂`, `μ̃`.
//!
//! With `c = f(x)` for `x ∈ [x1, x2]`, the half-defect
//! `½(|f(x1) − c| + |f(x2) − c| − |f(x1) − f(x2)|)` equals
//! `min(f(x1), f(x2)) − c` below both ends, `c − max(f(x1), f(x2))` above
//! both, and zero in between. The modulus is therefore the larger of an
//! upward defect `sup_{[x1,x2]} f − max(f(x1), f(x2))` and the same quantity
//! for `-f`, each maximised over windows of length at most `δ`.
//!
//! The upward defect is maximised exactly. Each window end sits either on a
//! breakpoint or inside an open piece ("slot"). For a fixed pair of slots the
//! supremum over the window interior is a constant `K` and the end values are
//! linear, so the objective is `K − max(p(x1), q(x2))` on the polygon
//! `{x1 ∈ slot1, x2 ∈ slot2, x2 − x1 <= δ}`. That is minimised over
//! `x1` at a polygon vertex or where the two end values are equal, which
//! gives a finite candidate list per slot pair.

use serde::{Deserialize, Serialize};

use crate::error::{LuluError, Result};
use crate::funcrep::{PLFunction, Window};

/// Relative right offset used for `μ̂` when none is given.
pub const DEFAULT_EPS_FRACTION: f64 = 1e-6;

pub fn default_eps(delta: f64) -> f64 {
    delta * DEFAULT_EPS_FRACTION
}

/// Where a modulus is attained (or approached).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x1: f64,
    pub x2: f64,
    /// Interior point where the extreme value is taken or approached.
    pub x: f64,
    /// `true` for a peak above both ends, `false` for a dip below both.
    pub upward: bool,
}

/// Moduli of one function at one `δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusReport {
    pub delta: f64,
    pub mu: f64,
    pub mu_hat: f64,
    pub mu_tilde: f64,
    /// Right offset used for `μ̂`.
    pub eps: f64,
    pub witness: Option<Witness>,
    /// The two end intervals `[a, a + δ/2]`, `[b − δ/2, b]` overlap.
    pub boundary_overlap: bool,
}

impl ModulusReport {
    pub fn compute(f: &PLFunction, delta: f64, eps: f64) -> Result<Self> {
        check(delta, eps)?;
        let (mu, witness) = modulus_with_witness(f, delta)?;
        let mu_hat = modulus(f, delta + eps)?.max(mu);
        let (edges, boundary_overlap) = boundary_oscillation(f, delta);
        Ok(Self {
            delta,
            mu,
            mu_hat,
            mu_tilde: mu_hat.max(edges),
            eps,
            witness,
            boundary_overlap,
        })
    }
}

fn check(delta: f64, eps: f64) -> Result<()> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(LuluError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    if !(eps.is_finite() && eps > 0.0) {
        return Err(LuluError::InvalidParameter(format!(
            "eps must be positive, got {eps}"
        )));
    }
    Ok(())
}

/// Window end positions: even index `2j` is breakpoint `j`, odd `2i + 1` the
/// open piece `i`.
struct Slots<'a> {
    f: &'a PLFunction,
}

impl Slots<'_> {
    fn count(&self) -> usize {
        2 * self.f.num_pieces() + 1
    }

    fn is_point(s: usize) -> bool {
        s.is_multiple_of(2)
    }

    /// Closure `[lo, hi]` of the slot.
    fn range(&self, s: usize) -> (f64, f64) {
        let xs = self.f.breakpoints();
        if Self::is_point(s) {
            (xs[s / 2], xs[s / 2])
        } else {
            (xs[s / 2], xs[s / 2 + 1])
        }
    }

    /// Value at `x` (continuous extension to the closure for pieces).
    fn value(&self, s: usize, x: f64) -> f64 {
        if Self::is_point(s) {
            self.f.values()[s / 2]
        } else {
            let (lo, hi) = self.range(s);
            self.f.piece_value(s / 2, x.clamp(lo, hi))
        }
    }

    /// `(slope, intercept)` of the slot's value as a function of absolute `x`.
    fn line(&self, s: usize) -> (f64, f64) {
        if Self::is_point(s) {
            (0.0, self.f.values()[s / 2])
        } else {
            let i = s / 2;
            let slope = self.f.slope(i);
            (slope, self.f.right_limits()[i] - slope * self.f.breakpoints()[i])
        }
    }

    /// Supremum over the slot when it lies strictly inside a window, with the
    /// point where it is approached.
    fn interior_sup(&self, s: usize) -> (f64, f64) {
        let i = s / 2;
        if Self::is_point(s) {
            (self.f.values()[i], self.f.breakpoints()[i])
        } else {
            let (r, l) = (self.f.right_limits()[i], self.f.left_limits()[i]);
            let xs = self.f.breakpoints();
            if r >= l {
                (r, xs[i])
            } else {
                (l, xs[i + 1])
            }
        }
    }
}

/// Minimum of `max(p(x1), q(x2))` over `x1 ∈ slot1`, `x2 ∈ slot2`,
/// `x2 − x1 <= δ`, with the minimiser.
fn min_max_pair(slots: &Slots, s1: usize, s2: usize, delta: f64) -> (f64, f64, f64) {
    let (a1, b1) = slots.range(s1);
    let (a2, b2) = slots.range(s2);
    let hi1 = b1;
    let lo1 = a1.max(a2 - delta).min(hi1);
    let (ps, pc) = slots.line(s1);
    let (qs, qc) = slots.line(s2);

    // best x2 for a given x1: q is linear, so an end of [a2, min(b2, x1 + δ)]
    let best_x2 = |x1: f64| {
        if qs < 0.0 {
            (x1 + delta).min(b2).max(a2)
        } else {
            a2
        }
    };

    let mut cands = vec![lo1, hi1, b2 - delta];
    if ps != 0.0 {
        // p(x1) = q(a2), p(x1) = q(b2)
        for target in [qs * a2 + qc, qs * b2 + qc] {
            cands.push((target - pc) / ps);
        }
    }
    if ps != qs {
        // p(x1) = q(x1 + δ)
        cands.push((qs * delta + qc - pc) / (ps - qs));
    }

    let mut best = (f64::INFINITY, lo1, best_x2(lo1));
    for x1 in cands {
        if !x1.is_finite() {
            continue;
        }
        let x1 = x1.clamp(lo1, hi1);
        let x2 = best_x2(x1);
        let h = slots.value(s1, x1).max(slots.value(s2, x2));
        if h < best.0 {
            best = (h, x1, x2);
        }
    }
    best
}

/// `sup` over windows `[x1, x2]`, `0 < x2 − x1 <= δ`, of
/// `sup_{[x1,x2]} f − max(f(x1), f(x2))`, with a witness when positive.
fn upward_defect(f: &PLFunction, delta: f64) -> (f64, Option<Witness>) {
    let slots = Slots { f };
    let tol = f.x_tol();
    let n = slots.count();
    let mut best = 0.0;
    let mut witness = None;
    for s1 in 0..n - 1 {
        let end1 = slots.range(s1).1;
        // edge contribution of a piece at the left end: its limit at the right
        let left_edge = (!Slots::is_point(s1)).then(|| {
            let i = s1 / 2;
            (f.left_limits()[i], f.breakpoints()[i + 1])
        });
        let mut inner: Option<(f64, f64)> = None;
        for s2 in s1 + 1..n {
            if s2 > s1 + 1 {
                let c = slots.interior_sup(s2 - 1);
                if inner.is_none_or(|k| c.0 > k.0) {
                    inner = Some(c);
                }
            }
            let gap = slots.range(s2).0 - end1;
            let closed = Slots::is_point(s1) && Slots::is_point(s2);
            let feasible = if closed {
                gap <= delta + tol
            } else {
                gap < delta - tol
            };
            if !feasible {
                break;
            }
            let right_edge = (!Slots::is_point(s2)).then(|| {
                let k = s2 / 2;
                (f.right_limits()[k], f.breakpoints()[k])
            });
            let peak = [inner, left_edge, right_edge]
                .into_iter()
                .flatten()
                .reduce(|u, v| if v.0 > u.0 { v } else { u });
            let Some((k, at)) = peak else { continue };
            let (ends, x1, x2) = min_max_pair(&slots, s1, s2, delta);
            if k - ends > best {
                best = k - ends;
                witness = Some(Witness {
                    x1,
                    x2,
                    x: at,
                    upward: true,
                });
            }
        }
    }
    (best, witness)
}

fn downward_defect(f: &PLFunction, delta: f64) -> (f64, Option<Witness>) {
    let (d, w) = upward_defect(&f.negate(), delta);
    (d, w.map(|w| Witness { upward: false, ..w }))
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        Err(LuluError::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )))
    }
}

/// Upward defect: zero iff on every window of length `<= δ` the supremum is
/// taken at an end (up to `tol`).
pub fn is_upwards_monotone(f: &PLFunction, delta: f64, tol: f64) -> Result<bool> {
    check_delta(delta)?;
    Ok(upward_defect(f, delta).0 <= tol)
}

pub fn is_downwards_monotone(f: &PLFunction, delta: f64, tol: f64) -> Result<bool> {
    check_delta(delta)?;
    Ok(downward_defect(f, delta).0 <= tol)
}

pub fn is_locally_monotone(f: &PLFunction, delta: f64, tol: f64) -> Result<bool> {
    Ok(is_upwards_monotone(f, delta, tol)? && is_downwards_monotone(f, delta, tol)?)
}

/// `μ(f, δ)` with the window and interior point attaining it.
pub fn modulus_with_witness(f: &PLFunction, delta: f64) -> Result<(f64, Option<Witness>)> {
    check_delta(delta)?;
    let up = upward_defect(f, delta);
    let down = downward_defect(f, delta);
    Ok(if down.0 > up.0 { down } else { up })
}

/// Modulus of nonmonotonicity `μ(f, δ)`.
pub fn modulus(f: &PLFunction, delta: f64) -> Result<f64> {
    Ok(modulus_with_witness(f, delta)?.0)
}

/// Right limit `μ̂(f, δ) = lim_{ε→0+} μ(f, δ + ε)`, approximated by
/// `μ(f, δ + eps)`.
pub fn modulus_hat(f: &PLFunction, delta: f64, eps: f64) -> Result<f64> {
    check(delta, eps)?;
    modulus(f, delta + eps)
}

/// Larger oscillation of `f` over `[a, a + δ/2]` and `[b − δ/2, b]`, and
/// whether those intervals overlap.
fn boundary_oscillation(f: &PLFunction, delta: f64) -> (f64, bool) {
    let (a, b) = f.domain();
    let half = 0.5 * delta;
    let osc = |lo: f64, hi: f64| {
        let w = Window::new(lo, hi).expect("ordered");
        f.window_sup(&w) - f.window_inf(&w)
    };
    let left = osc(a, (a + half).min(b));
    let right = osc((b - half).max(a), b);
    (left.max(right), a + half > b - half)
}

/// Modified modulus `μ̃(f, δ)` for the finite domain `[a, b]`: the larger of
/// `μ̂(f, δ)` and the oscillations of `f` over the two end intervals of
/// length `δ/2`.
pub fn modified_modulus(f: &PLFunction, delta: f64, eps: f64) -> Result<f64> {
    let hat = modulus_hat(f, delta, eps)?;
    Ok(hat.max(boundary_oscillation(f, delta).0))
}
