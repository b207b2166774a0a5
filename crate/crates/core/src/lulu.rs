//! The smoothers `L_δ = S_{δ/2} ∘ I_{δ/2}` and `U_δ = I_{δ/2} ∘ S_{δ/2}` and the
//! four-element semigroup `{L, U, U∘L, L∘U}` they generate at a fixed `δ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::envelopes::{dilate, erode, Radius};
use crate::error::{LuluError, Result};
use crate::funcrep::PLFunction;

/// Default absolute tolerance for pointwise comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmootherConfig {
    delta: f64,
    tolerance: f64,
}

impl SmootherConfig {
    pub fn new(delta: f64) -> Result<Self> {
        Self::with_tolerance(delta, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(delta: f64, tolerance: f64) -> Result<Self> {
        if !(delta.is_finite() && delta > 0.0) {
            return Err(LuluError::InvalidParameter(format!(
                "delta must be positive and finite, got {delta}"
            )));
        }
        if !(tolerance.is_finite() && tolerance >= 0.0) {
            return Err(LuluError::InvalidParameter(format!(
                "tolerance must be non-negative, got {tolerance}"
            )));
        }
        Ok(Self { delta, tolerance })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    fn half(&self) -> Radius {
        Radius::new(0.5 * self.delta).expect("delta is validated positive")
    }
}

/// `L_δ(f)`: removes upward features narrower than `δ`.
pub fn lower_smoother(f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
    let r = cfg.half();
    dilate(&erode(f, r), r)
}

/// `U_δ(f)`: fills downward features narrower than `δ`.
pub fn upper_smoother(f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
    let r = cfg.half();
    erode(&dilate(f, r), r)
}

/// One of the two generating smoothers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basic {
    L,
    U,
}

impl Basic {
    pub fn apply(self, f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
        match self {
            Basic::L => lower_smoother(f, cfg),
            Basic::U => upper_smoother(f, cfg),
        }
    }
}

/// Element of the LULU semigroup. `UL` is `U ∘ L`: `L` is applied first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SemigroupElement {
    L,
    U,
    UL,
    LU,
}

impl SemigroupElement {
    pub const ALL: [SemigroupElement; 4] = [Self::L, Self::UL, Self::LU, Self::U];

    /// Position in the total order `L <= U∘L <= L∘U <= U`.
    pub fn rank(self) -> usize {
        match self {
            Self::L => 0,
            Self::UL => 1,
            Self::LU => 2,
            Self::U => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::L => "L",
            Self::U => "U",
            Self::UL => "UL",
            Self::LU => "LU",
        }
    }

    /// The generators in application order (first applied first).
    pub fn factors(self) -> &'static [Basic] {
        match self {
            Self::L => &[Basic::L],
            Self::U => &[Basic::U],
            Self::UL => &[Basic::L, Basic::U],
            Self::LU => &[Basic::U, Basic::L],
        }
    }

    pub fn apply(self, f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
        self.factors()
            .iter()
            .fold(f.clone(), |g, b| b.apply(&g, cfg))
    }
}

impl From<Basic> for SemigroupElement {
    fn from(b: Basic) -> Self {
        match b {
            Basic::L => Self::L,
            Basic::U => Self::U,
        }
    }
}

impl fmt::Display for SemigroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Composition table: `compose(outer, inner)` is `outer ∘ inner`, i.e.
/// `inner` is applied first.
pub fn compose(outer: SemigroupElement, inner: SemigroupElement) -> SemigroupElement {
    use SemigroupElement::*;
    match (outer, inner) {
        (L, L) => L,
        (L, U) => LU,
        (L, UL) => UL,
        (L, LU) => LU,
        (U, L) => UL,
        (U, U) => U,
        (U, UL) => UL,
        (U, LU) => LU,
        (UL, L) => UL,
        (UL, U) => LU,
        (UL, UL) => UL,
        (UL, LU) => LU,
        (LU, L) => UL,
        (LU, U) => LU,
        (LU, UL) => UL,
        (LU, LU) => LU,
    }
}

/// `apply(e, f)`, for symmetry with [`compose`].
pub fn apply(e: SemigroupElement, f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
    e.apply(f, cfg)
}

/// A finite composition of `L` and `U` written left to right as operators,
/// so `"ULU"` is `U ∘ L ∘ U` and the rightmost letter is applied first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperatorWord(Vec<Basic>);

impl OperatorWord {
    pub fn new(letters: Vec<Basic>) -> Result<Self> {
        if letters.is_empty() {
            return Err(LuluError::InvalidParameter("empty operator word".into()));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[Basic] {
        &self.0
    }

    /// The semigroup element this word equals.
    pub fn reduce(&self) -> SemigroupElement {
        let mut it = self.0.iter().rev();
        let first = SemigroupElement::from(*it.next().expect("words are non-empty"));
        it.fold(first, |acc, &b| compose(b.into(), acc))
    }

    /// Applies every letter in turn, without reduction.
    pub fn apply_unreduced(&self, f: &PLFunction, cfg: &SmootherConfig) -> PLFunction {
        self.0.iter().rev().fold(f.clone(), |g, b| b.apply(&g, cfg))
    }

    /// Every non-empty word over `{L, U}` of length at most `max_len`.
    pub fn all_up_to(max_len: usize) -> Vec<OperatorWord> {
        let mut out = vec![];
        let mut layer: Vec<Vec<Basic>> = vec![vec![]];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| {
                    [Basic::L, Basic::U].map(|b| {
                        let mut v = vec![b];
                        v.extend_from_slice(w);
                        v
                    })
                })
                .collect();
            out.extend(layer.iter().cloned().map(OperatorWord));
        }
        out
    }
}

impl FromStr for OperatorWord {
    type Err = LuluError;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '∘' | '*' | ' '))
            .map(|c| match c.to_ascii_uppercase() {
                'L' => Ok(Basic::L),
                'U' => Ok(Basic::U),
                other => Err(LuluError::InvalidParameter(format!(
                    "unknown operator '{other}' in word {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters)
    }
}

impl fmt::Display for OperatorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(match b {
                Basic::L => "L",
                Basic::U => "U",
            })?;
        }
        Ok(())
    }
}

/// Checks `L_{δ1} ∘ L_{δ2} = L_{max(δ1, δ2)}` and the same for `U`.
pub fn delta_absorption_check(f: &PLFunction, delta1: f64, delta2: f64, tol: f64) -> Result<bool> {
    let c1 = SmootherConfig::new(delta1)?;
    let c2 = SmootherConfig::new(delta2)?;
    let cmax = SmootherConfig::new(delta1.max(delta2))?;
    let ll = lower_smoother(&lower_smoother(f, &c2), &c1);
    let uu = upper_smoother(&upper_smoother(f, &c2), &c1);
    Ok(ll.sup_norm_diff(&lower_smoother(f, &cmax))? <= tol
        && uu.sup_norm_diff(&upper_smoother(f, &cmax))? <= tol)
}

/// `(||L(f - L f)||, ||U(f - U f)||)`; both vanish exactly when `id - L` and
/// `id - U` are idempotent on `f`.
pub fn coidempotence_residual(f: &PLFunction, cfg: &SmootherConfig) -> Result<(f64, f64)> {
    let lower_rest = f.sub(&lower_smoother(f, cfg))?;
    let upper_rest = f.sub(&upper_smoother(f, cfg))?;
    let norm = |g: &PLFunction| g.sup().abs().max(g.inf().abs());
    Ok((
        norm(&lower_smoother(&lower_rest, cfg)),
        norm(&upper_smoother(&upper_rest, cfg)),
    ))
}
