//! Exact bounded piecewise-linear functions on a closed interval.
//!
//! A [`PLFunction`] stores its breakpoints `x_0 < x_1 < ... < x_m`, the value
//! taken *at* every breakpoint, and for every open piece `(x_i, x_{i+1})` the
//! two one-sided limits at its ends. The piece itself is the linear
//! interpolant of those limits. This admits jump discontinuities and isolated
//! point values while keeping every infimum and supremum over a window
//! computable in closed form.
//!
//! Breakpoint positions are compared with a small relative resolution (see
//! [`PLFunction::x_tol`]) so that coordinates produced by shifted arithmetic,
//! such as `(x + r1) + r2` against `x + (r1 + r2)`, denote the same point.

use serde::{Deserialize, Serialize};

use crate::error::{LuluError, Result};

const X_RESOLUTION: f64 = 1e-13;
const Y_RESOLUTION: f64 = 1e-12;

/// Position of a point relative to the breakpoints of a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Loc {
    /// On breakpoint `j`.
    At(usize),
    /// Strictly inside piece `i`, i.e. in `(x_i, x_{i+1})`.
    In(usize),
}

/// A closed subinterval `[lo, hi]` of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lo: f64,
    hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(LuluError::InvalidParameter(format!(
                "window [{lo}, {hi}] is not a finite closed interval"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Bounded piecewise-linear function with jumps on `[a, b]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PLFunctionRepr", into = "PLFunctionRepr")]
pub struct PLFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    /// `right_limits[i]` is the limit of piece `i` at `x_i` from the right.
    right_limits: Vec<f64>,
    /// `left_limits[i]` is the limit of piece `i` at `x_{i+1}` from the left.
    left_limits: Vec<f64>,
}

/// On-disk JSON layout of a [`PLFunction`].
#[derive(Serialize, Deserialize)]
struct PLFunctionRepr {
    domain: [f64; 2],
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    right_limits: Vec<f64>,
    left_limits: Vec<f64>,
}

impl TryFrom<PLFunctionRepr> for PLFunction {
    type Error = LuluError;

    fn try_from(r: PLFunctionRepr) -> Result<Self> {
        let f = PLFunction::new(r.breakpoints, r.values, r.right_limits, r.left_limits)?;
        let (a, b) = f.domain();
        if r.domain != [a, b] {
            return Err(LuluError::InvalidFunction(format!(
                "declared domain {:?} does not match breakpoints [{a}, {b}]",
                r.domain
            )));
        }
        Ok(f)
    }
}

impl From<PLFunction> for PLFunctionRepr {
    fn from(f: PLFunction) -> Self {
        let (a, b) = f.domain();
        Self {
            domain: [a, b],
            breakpoints: f.breakpoints,
            values: f.values,
            right_limits: f.right_limits,
            left_limits: f.left_limits,
        }
    }
}

impl PLFunction {
    /// Builds a function from breakpoints, point values and per-piece limits.
    ///
    /// `right_limits` and `left_limits` have one entry per piece, so one fewer
    /// than `breakpoints`.
    pub fn new(
        breakpoints: Vec<f64>,
        values: Vec<f64>,
        right_limits: Vec<f64>,
        left_limits: Vec<f64>,
    ) -> Result<Self> {
        let n = breakpoints.len();
        if n < 2 {
            return Err(LuluError::InvalidFunction(
                "need at least two breakpoints (degenerate domain)".into(),
            ));
        }
        if values.len() != n || right_limits.len() != n - 1 || left_limits.len() != n - 1 {
            return Err(LuluError::InvalidFunction(format!(
                "length mismatch: {n} breakpoints, {} values, {} right limits, {} left limits",
                values.len(),
                right_limits.len(),
                left_limits.len()
            )));
        }
        let all_finite = breakpoints
            .iter()
            .chain(&values)
            .chain(&right_limits)
            .chain(&left_limits)
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(LuluError::InvalidFunction("non-finite entry".into()));
        }
        let f = Self {
            breakpoints,
            values,
            right_limits,
            left_limits,
        };
        let tol = f.x_tol();
        if let Some(w) = f.breakpoints.windows(2).find(|w| w[1] - w[0] <= tol) {
            return Err(LuluError::InvalidFunction(format!(
                "breakpoints must be strictly increasing and separated by more than {tol:e}: {} then {}",
                w[0], w[1]
            )));
        }
        Ok(f)
    }

    /// The constant function `c` on `[a, b]`.
    pub fn constant(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![c, c], vec![c], vec![c])
    }

    /// The continuous linear interpolant through `(x, y)` points with strictly
    /// increasing `x`.
    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let xs = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        let k = ys.len().saturating_sub(1);
        Self::new(xs, ys.clone(), ys[..k].to_vec(), ys[1.min(ys.len())..].to_vec())
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn right_limits(&self) -> &[f64] {
        &self.right_limits
    }

    pub fn left_limits(&self) -> &[f64] {
        &self.left_limits
    }

    pub fn num_pieces(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// Resolution below which two abscissae are treated as the same point.
    pub fn x_tol(&self) -> f64 {
        let (a, b) = self.domain();
        X_RESOLUTION * (b - a).max(a.abs()).max(b.abs()).max(1.0)
    }

    fn y_tol(&self) -> f64 {
        let scale = self
            .values
            .iter()
            .chain(&self.right_limits)
            .chain(&self.left_limits)
            .fold(1.0_f64, |m, v| m.max(v.abs()));
        Y_RESOLUTION * scale
    }

    /// Slope of piece `i`.
    pub fn slope(&self, i: usize) -> f64 {
        (self.left_limits[i] - self.right_limits[i]) / (self.breakpoints[i + 1] - self.breakpoints[i])
    }

    pub fn max_abs_slope(&self) -> f64 {
        (0..self.num_pieces()).fold(0.0, |m, i| m.max(self.slope(i).abs()))
    }

    /// True if some breakpoint value or limit pair differs.
    pub fn has_jumps(&self) -> bool {
        let tol = self.y_tol();
        (0..self.breakpoints.len()).any(|j| {
            let v = self.values[j];
            (j > 0 && (self.left_limits[j - 1] - v).abs() > tol)
                || (j < self.num_pieces() && (self.right_limits[j] - v).abs() > tol)
        })
    }

    /// Minimum distance between consecutive breakpoints.
    pub fn min_gap(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .fold(f64::INFINITY, |m, w| m.min(w[1] - w[0]))
    }

    pub(crate) fn locate(&self, x: f64) -> Loc {
        let (a, b) = self.domain();
        let x = x.clamp(a, b);
        let xs = &self.breakpoints;
        let tol = self.x_tol();
        let k = xs.partition_point(|&p| p < x);
        if k < xs.len() && xs[k] - x <= tol {
            return Loc::At(k);
        }
        if k > 0 && x - xs[k - 1] <= tol {
            return Loc::At(k - 1);
        }
        Loc::In(k - 1)
    }

    /// Value of the linear interpolant of piece `i` at `x`.
    pub(crate) fn piece_value(&self, i: usize, x: f64) -> f64 {
        let (x0, x1) = (self.breakpoints[i], self.breakpoints[i + 1]);
        let (r, l) = (self.right_limits[i], self.left_limits[i]);
        // interpolate from the nearer end
        if x - x0 <= x1 - x {
            r + (l - r) * ((x - x0) / (x1 - x0))
        } else {
            l + (r - l) * ((x1 - x) / (x1 - x0))
        }
    }

    pub(crate) fn value_loc(&self, loc: Loc, x: f64) -> f64 {
        match loc {
            Loc::At(j) => self.values[j],
            Loc::In(i) => self.piece_value(i, x),
        }
    }

    /// Value at `x`, clamped into the domain and snapped to nearby breakpoints.
    pub(crate) fn value_at(&self, x: f64) -> f64 {
        self.value_loc(self.locate(x), x)
    }

    /// Limit from the right at `x` (the value itself at the right end).
    pub(crate) fn right_limit_at(&self, x: f64) -> f64 {
        match self.locate(x) {
            Loc::At(j) if j < self.num_pieces() => self.right_limits[j],
            Loc::At(j) => self.values[j],
            Loc::In(i) => self.piece_value(i, x),
        }
    }

    /// Limit from the left at `x` (the value itself at the left end).
    pub(crate) fn left_limit_at(&self, x: f64) -> f64 {
        match self.locate(x) {
            Loc::At(0) => self.values[0],
            Loc::At(j) => self.left_limits[j - 1],
            Loc::In(i) => self.piece_value(i, x),
        }
    }

    /// Evaluates the function at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = self.domain();
        let tol = self.x_tol();
        if !(x >= a - tol && x <= b + tol) {
            return Err(LuluError::OutsideDomain { x, lo: a, hi: b });
        }
        Ok(self.value_at(x))
    }

    /// Extreme of the values strictly inside `(lo, hi)` and of the one-sided
    /// limits of every piece reaching into the window; the values at the window
    /// ends themselves are not included.
    pub(crate) fn interior_extreme(
        &self,
        lo: Loc,
        hi: Loc,
        pick: fn(f64, f64) -> f64,
    ) -> Option<f64> {
        let first = match lo {
            Loc::At(j) | Loc::In(j) => j,
        };
        let last = match hi {
            Loc::At(k) => k.checked_sub(1)?,
            Loc::In(k) => k,
        };
        if last < first {
            return None;
        }
        let lo_at = matches!(lo, Loc::At(_));
        let hi_at = matches!(hi, Loc::At(_));
        let mut acc: Option<f64> = None;
        let mut take = |v: f64| acc = Some(acc.map_or(v, |a| pick(a, v)));
        for p in first..=last {
            if p > first || lo_at {
                take(self.right_limits[p]);
            }
            if p < last || hi_at {
                take(self.left_limits[p]);
            }
        }
        for j in first + 1..=last {
            take(self.values[j]);
        }
        acc
    }

    fn window_extreme(&self, w: &Window, pick: fn(f64, f64) -> f64) -> f64 {
        let (a, b) = self.domain();
        let (lo, hi) = (w.lo.clamp(a, b), w.hi.clamp(a, b));
        let (lo_loc, hi_loc) = (self.locate(lo), self.locate(hi));
        let ends = pick(self.value_loc(lo_loc, lo), self.value_loc(hi_loc, hi));
        match self.interior_extreme(lo_loc, hi_loc, pick) {
            Some(v) => pick(ends, v),
            None => ends,
        }
    }

    /// Infimum of `f` over the window (clipped to the domain). One-sided limits
    /// count, so the infimum need not be attained.
    pub fn window_inf(&self, w: &Window) -> f64 {
        self.window_extreme(w, f64::min)
    }

    /// Supremum of `f` over the window (clipped to the domain).
    pub fn window_sup(&self, w: &Window) -> f64 {
        self.window_extreme(w, f64::max)
    }

    pub fn negate(&self) -> Self {
        // `0.0 - x` rather than `-x` keeps zeros positive in serialized output
        let neg = |v: &Vec<f64>| v.iter().map(|x| 0.0 - x).collect();
        Self {
            breakpoints: self.breakpoints.clone(),
            values: neg(&self.values),
            right_limits: neg(&self.right_limits),
            left_limits: neg(&self.left_limits),
        }
    }

    /// `f + c`.
    pub fn offset(&self, c: f64) -> Self {
        let add = |v: &Vec<f64>| v.iter().map(|x| x + c).collect();
        Self {
            breakpoints: self.breakpoints.clone(),
            values: add(&self.values),
            right_limits: add(&self.right_limits),
            left_limits: add(&self.left_limits),
        }
    }

    /// Union of both breakpoint sets, with points closer than the resolution
    /// merged (own breakpoints win).
    fn merged_grid(&self, other: &Self) -> Result<Vec<f64>> {
        let (a, b) = self.domain();
        let (c, d) = other.domain();
        let tol = self.x_tol().max(other.x_tol());
        if (a - c).abs() > tol || (b - d).abs() > tol {
            return Err(LuluError::DomainMismatch(a, b, c, d));
        }
        let pts = self
            .breakpoints
            .iter()
            .map(|&x| (x, 0))
            .chain(other.breakpoints.iter().map(|&x| (x, 1)))
            .collect();
        Ok(cluster_points(pts, tol))
    }

    /// Pointwise combination on the merged breakpoint set. With
    /// `split_crossings`, a breakpoint is inserted wherever `f - g` changes
    /// sign inside a cell, as `min`/`max` need.
    fn combine(
        &self,
        other: &Self,
        op: fn(f64, f64) -> f64,
        split_crossings: bool,
    ) -> Result<Self> {
        let grid = self.merged_grid(other)?;
        let tol = self.x_tol();
        let mut out = Builder::default();
        for (k, &x) in grid.iter().enumerate() {
            out.point(x, op(self.value_at(x), other.value_at(x)));
            let Some(&y) = grid.get(k + 1) else { break };
            let (fr, gr) = (self.right_limit_at(x), other.right_limit_at(x));
            let (fl, gl) = (self.left_limit_at(y), other.left_limit_at(y));
            let (d0, d1) = (fr - gr, fl - gl);
            if split_crossings && d0 * d1 < 0.0 {
                let t = x + (y - x) * d0 / (d0 - d1);
                if t - x > tol && y - t > tol {
                    let v = op(self.value_at(t), other.value_at(t));
                    out.piece(op(fr, gr), v);
                    out.point(t, v);
                    out.piece(v, op(fl, gl));
                    continue;
                }
            }
            out.piece(op(fr, gr), op(fl, gl));
        }
        Ok(out.build()?.simplify())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, |u, v| u - v, false)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |u, v| u + v, false)
    }

    pub fn min(&self, other: &Self) -> Result<Self> {
        self.combine(other, f64::min, true)
    }

    pub fn max(&self, other: &Self) -> Result<Self> {
        self.combine(other, f64::max, true)
    }

    /// Visits `(value, left limit, right limit)` of both functions at every
    /// point of the merged breakpoint set. Between consecutive points both
    /// functions are linear, so these triples determine any pointwise
    /// comparison.
    fn merged_triples(&self, other: &Self) -> Result<Vec<([f64; 3], [f64; 3])>> {
        let grid = self.merged_grid(other)?;
        let triple = |f: &Self, x: f64| [f.value_at(x), f.left_limit_at(x), f.right_limit_at(x)];
        Ok(grid
            .iter()
            .map(|&x| (triple(self, x), triple(other, x)))
            .collect())
    }

    /// `f(x) <= g(x) + tol` everywhere.
    pub fn pointwise_leq(&self, other: &Self, tol: f64) -> Result<bool> {
        Ok(self
            .merged_triples(other)?
            .iter()
            .all(|(f, g)| f.iter().zip(g).all(|(u, v)| *u <= v + tol)))
    }

    /// Exact `sup |f - g|`, one-sided limits included.
    pub fn sup_norm_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .merged_triples(other)?
            .iter()
            .flat_map(|(f, g)| f.iter().zip(g).map(|(u, v)| (u - v).abs()))
            .fold(0.0, f64::max))
    }

    /// Largest value, limits included.
    pub fn sup(&self) -> f64 {
        let (a, b) = self.domain();
        self.window_sup(&Window { lo: a, hi: b })
    }

    /// Smallest value, limits included.
    pub fn inf(&self) -> f64 {
        let (a, b) = self.domain();
        self.window_inf(&Window { lo: a, hi: b })
    }

    /// Removes interior breakpoints where the function is continuous and the
    /// neighbouring pieces are collinear.
    pub fn simplify(self) -> Self {
        let tol = self.y_tol();
        let n = self.breakpoints.len();
        let xs = &self.breakpoints;
        let mut out = Builder::default();
        out.point(xs[0], self.values[0]);
        let mut start = (xs[0], self.right_limits[0]);
        for j in 1..n - 1 {
            let v = self.values[j];
            let continuous = (v - self.left_limits[j - 1]).abs() <= tol
                && (v - self.right_limits[j]).abs() <= tol;
            if continuous {
                let t = (xs[j] - start.0) / (xs[j + 1] - start.0);
                let on_line = start.1 * (1.0 - t) + self.left_limits[j] * t;
                if (on_line - v).abs() <= tol {
                    continue;
                }
            }
            out.piece(start.1, self.left_limits[j - 1]);
            out.point(xs[j], v);
            start = (xs[j], self.right_limits[j]);
        }
        out.piece(start.1, self.left_limits[n - 2]);
        out.point(xs[n - 1], self.values[n - 1]);
        out.build().expect("simplify keeps a subset of valid breakpoints")
    }
}

/// `f <= g + tol` pointwise.
pub fn pointwise_leq(f: &PLFunction, g: &PLFunction, tol: f64) -> Result<bool> {
    f.pointwise_leq(g, tol)
}

/// `||f - g||_inf`.
pub fn sup_norm_diff(f: &PLFunction, g: &PLFunction) -> Result<f64> {
    f.sup_norm_diff(g)
}

/// Sorts tagged points and merges runs closer than `tol`; within a run the
/// point with the lowest tag is kept.
pub(crate) fn cluster_points(mut pts: Vec<(f64, u8)>, tol: f64) -> Vec<f64> {
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut out: Vec<f64> = Vec::with_capacity(pts.len());
    let mut i = 0;
    while i < pts.len() {
        let mut best = pts[i];
        let mut last = pts[i].0;
        let mut j = i + 1;
        while j < pts.len() && pts[j].0 - last <= tol {
            if pts[j].1 < best.1 {
                best = pts[j];
            }
            last = pts[j].0;
            j += 1;
        }
        out.push(best.0);
        i = j;
    }
    out
}

/// Incremental constructor: alternate `point` and `piece` calls, starting and
/// ending with a point.
#[derive(Default)]
pub(crate) struct Builder {
    xs: Vec<f64>,
    values: Vec<f64>,
    right: Vec<f64>,
    left: Vec<f64>,
}

impl Builder {
    pub(crate) fn point(&mut self, x: f64, v: f64) {
        self.xs.push(x);
        self.values.push(v);
    }

    /// Adds the piece leaving the last point, by its two end limits.
    pub(crate) fn piece(&mut self, from: f64, to: f64) {
        self.right.push(from);
        self.left.push(to);
    }

    pub(crate) fn build(self) -> Result<PLFunction> {
        PLFunction::new(self.xs, self.values, self.right, self.left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs5() -> PLFunction {
        PLFunction::from_points(&[(0.0, 5.0), (5.0, 0.0), (10.0, 5.0)]).unwrap()
    }

    fn win(lo: f64, hi: f64) -> Window {
        Window::new(lo, hi).unwrap()
    }

    #[test]
    fn eval_examples() {
        let c = PLFunction::constant(0.0, 10.0, 3.0).unwrap();
        assert_eq!(c.eval(7.0).unwrap(), 3.0);
        assert_eq!(abs5().eval(4.0).unwrap(), 1.0);
        let dip = PLFunction::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0])
            .unwrap();
        assert_eq!(dip.eval(0.0).unwrap(), 0.0);
        assert_eq!(dip.eval(0.5).unwrap(), 1.0);
    }

    #[test]
    fn eval_outside_domain() {
        assert!(matches!(abs5().eval(10.5), Err(LuluError::OutsideDomain { .. })));
        assert!(abs5().eval(f64::NAN).is_err());
    }

    #[test]
    fn construction_errors() {
        assert!(PLFunction::constant(1.0, 1.0, 0.0).is_err());
        assert!(PLFunction::new(vec![0.0], vec![0.0], vec![], vec![]).is_err());
        assert!(PLFunction::new(vec![0.0, 1.0], vec![0.0, f64::INFINITY], vec![0.0], vec![0.0]).is_err());
        assert!(PLFunction::new(vec![1.0, 0.0], vec![0.0, 0.0], vec![0.0], vec![0.0]).is_err());
        assert!(PLFunction::new(vec![0.0, 1.0], vec![0.0], vec![0.0], vec![0.0]).is_err());
    }

    #[test]
    fn window_examples() {
        let f = abs5();
        assert_eq!(f.window_inf(&win(4.0, 7.0)), 0.0);
        assert_eq!(f.window_sup(&win(4.0, 7.0)), 2.0);

        let dip = PLFunction::new(
            vec![0.0, 5.0, 10.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        )
        .unwrap();
        assert_eq!(dip.window_inf(&win(4.9, 5.1)), 0.0);
        assert_eq!(dip.window_inf(&win(4.0, 4.9)), 1.0);

        let open = PLFunction::new(vec![0.0, 1.0], vec![2.0, 2.0], vec![1.0], vec![1.0]).unwrap();
        assert_eq!(open.window_inf(&win(0.0, 1.0)), 1.0);
        assert_eq!(open.window_sup(&win(0.0, 1.0)), 2.0);
        assert_eq!(open.window_inf(&win(0.0, 0.0)), 2.0);
    }

    #[test]
    fn window_one_sided_limits() {
        // jump at 2: left limit 5, value 0, right limit -1
        let f = PLFunction::new(
            vec![0.0, 2.0, 4.0],
            vec![0.0, 0.0, 0.0],
            vec![0.0, -1.0],
            vec![5.0, 0.0],
        )
        .unwrap();
        assert_eq!(f.window_sup(&win(1.0, 2.0)), 5.0);
        assert_eq!(f.window_inf(&win(1.0, 2.0)), 0.0);
        assert_eq!(f.window_inf(&win(2.0, 3.0)), -1.0);
        assert_eq!(f.window_sup(&win(2.0, 3.0)), 0.0);
        assert_eq!(f.window_sup(&win(2.5, 3.0)), -0.5);
    }

    #[test]
    fn leq_and_norm_examples() {
        let zero = PLFunction::constant(0.0, 1.0, 0.0).unwrap();
        let one = PLFunction::constant(0.0, 1.0, 1.0).unwrap();
        let id = PLFunction::from_points(&[(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!(zero.pointwise_leq(&one, 0.0).unwrap());
        assert!(id.pointwise_leq(&id, 0.0).unwrap());
        assert!(!id.pointwise_leq(&zero, 0.0).unwrap());
        assert_eq!(id.sup_norm_diff(&id).unwrap(), 0.0);

        let two = PLFunction::constant(0.0, 1.0, 2.0).unwrap();
        let five = PLFunction::constant(0.0, 1.0, 5.0).unwrap();
        assert_eq!(two.sup_norm_diff(&five).unwrap(), 3.0);

        let other = PLFunction::constant(0.0, 2.0, 0.0).unwrap();
        assert!(matches!(id.sup_norm_diff(&other), Err(LuluError::DomainMismatch(..))));
    }

    #[test]
    fn sup_norm_against_clamped_identity() {
        let id = PLFunction::from_points(&[(0.0, 0.0), (10.0, 10.0)]).unwrap();
        let clamp = PLFunction::from_points(&[(0.0, 1.0), (1.0, 1.0), (9.0, 9.0), (10.0, 9.0)]).unwrap();
        // dense-grid oracle for max |x - clamp(x, 1, 9)|
        let grid = (0..=10_000)
            .map(|k| k as f64 * 1e-3)
            .map(|x| (x - x.clamp(1.0, 9.0)).abs())
            .fold(0.0, f64::max);
        assert!((grid - 1.0).abs() < 1e-12);
        assert!((id.sup_norm_diff(&clamp).unwrap() - grid).abs() < 1e-12);
    }

    #[test]
    fn min_max_insert_crossings() {
        let up = PLFunction::from_points(&[(0.0, 0.0), (2.0, 2.0)]).unwrap();
        let down = PLFunction::from_points(&[(0.0, 2.0), (2.0, 0.0)]).unwrap();
        let lo = up.min(&down).unwrap();
        assert_eq!(lo.breakpoints(), &[0.0, 1.0, 2.0]);
        assert_eq!(lo.eval(1.0).unwrap(), 1.0);
        assert_eq!(lo.eval(0.5).unwrap(), 0.5);
        let hi = up.max(&down).unwrap();
        assert_eq!(hi.eval(1.5).unwrap(), 1.5);
        assert_eq!(hi.eval(1.0).unwrap(), 1.0);
    }

    #[test]
    fn simplify_removes_collinear_points() {
        let f = PLFunction::from_points(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0), (3.0, 0.0)]).unwrap();
        let g = f.clone().simplify();
        assert_eq!(g.breakpoints(), &[0.0, 2.0, 3.0]);
        assert_eq!(f.sup_norm_diff(&g).unwrap(), 0.0);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let f = PLFunction::new(
            vec![0.0, 2.0, 4.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, -1.0],
            vec![5.0, 0.0],
        )
        .unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"domain\":[0.0,4.0]"));
        let back: PLFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = s.replace("\"domain\":[0.0,4.0]", "\"domain\":[0.0,5.0]");
        assert!(serde_json::from_str::<PLFunction>(&bad).is_err());
    }
}
