//! Executable forms of the envelope, smoother and modulus laws.
//!
//! Each check measures a worst-case violation (how far an inequality or
//! identity fails, `0` when it holds exactly) and passes when that stays
//! within its limit. Used by the CLI's `verify` command and the acceptance
//! harness.

use serde::{Deserialize, Serialize};

use crate::envelopes::{dilate, erode, Radius};
use crate::error::Result;
use crate::funcrep::PLFunction;
use crate::lulu::{
    coidempotence_residual, lower_smoother, upper_smoother, OperatorWord, SemigroupElement,
    SmootherConfig,
};
use crate::monotonicity::{default_eps, is_locally_monotone, modulus, modulus_hat, ModulusReport};

/// Slack for the error bounds against `μ̂` and `μ̃`.
pub const BOUND_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Largest observed violation.
    pub worst: f64,
    pub limit: f64,
}

impl Check {
    fn new(name: &str, worst: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= limit,
            worst,
            limit,
        }
    }
}

/// Switches used to prove the checks can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Faults {
    /// Reverse the comparison in the `L f <= f <= U f` check.
    pub negate_bounds: bool,
}

/// `sup (f − g)^+`: how far `f <= g` fails.
pub fn excess(f: &PLFunction, g: &PLFunction) -> Result<f64> {
    Ok(f.sub(g)?.sup().max(0.0))
}

fn diff(f: &PLFunction, g: &PLFunction) -> Result<f64> {
    f.sup_norm_diff(g)
}

/// A function `>= f`, built from `f` so that it shares its domain.
fn dominating(f: &PLFunction) -> Result<PLFunction> {
    let mid = 0.5 * (f.sup() + f.inf());
    let (a, b) = f.domain();
    f.max(&PLFunction::constant(a, b, mid)?)
}

/// Semigroup law, extensivity, argument monotonicity and the
/// erode-dilate-erode identities at radii drawn from `δ`.
pub fn envelope_laws(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    let r = Radius::new(0.5 * delta)?;
    let r1 = Radius::new(0.3 * delta)?;
    let r2 = Radius::new(0.2 * delta)?;
    let (er, di) = (erode(f, r), dilate(f, r));

    let semigroup = diff(&erode(&erode(f, r2), r1), &er)?
        .max(diff(&dilate(&dilate(f, r2), r1), &di)?);
    let order = excess(&er, f)?.max(excess(f, &di)?);
    let g = dominating(f)?;
    let monotone = excess(&er, &erode(&g, r))?.max(excess(&di, &dilate(&g, r))?);
    let triple = diff(&erode(&dilate(&er, r), r), &er)?.max(diff(&dilate(&erode(&di, r), r), &di)?);
    Ok(vec![
        Check::new("envelope_semigroup", semigroup, tol),
        Check::new("envelope_order", order, tol),
        Check::new("envelope_argument_monotone", monotone, tol),
        Check::new("envelope_triple_identity", triple, tol),
    ])
}

/// `L f <= f <= U f`, and nesting of outputs in `δ` over `δ·{0.5, 1, 2}`.
pub fn smoother_bounds(f: &PLFunction, delta: f64, tol: f64, faults: Faults) -> Result<Vec<Check>> {
    let cfg = SmootherConfig::new(delta)?;
    let (lo, up) = (lower_smoother(f, &cfg), upper_smoother(f, &cfg));
    let bounds = if faults.negate_bounds {
        excess(f, &lo)?.max(excess(&up, f)?)
    } else {
        excess(&lo, f)?.max(excess(f, &up)?)
    };

    let deltas = [0.5 * delta, delta, 2.0 * delta];
    let mut nesting: f64 = 0.0;
    let mut prev: Option<(PLFunction, PLFunction)> = None;
    for d in deltas {
        let c = SmootherConfig::new(d)?;
        let cur = (lower_smoother(f, &c), upper_smoother(f, &c));
        if let Some((pl, pu)) = &prev {
            nesting = nesting.max(excess(&cur.0, pl)?).max(excess(pu, &cur.1)?);
        }
        prev = Some(cur);
    }
    let g = dominating(f)?;
    let monotone = excess(&lo, &lower_smoother(&g, &cfg))?.max(excess(&up, &upper_smoother(&g, &cfg))?);
    Ok(vec![
        Check::new("smoother_bounds", bounds, tol),
        Check::new("smoother_delta_nesting", nesting, tol),
        Check::new("smoother_argument_monotone", monotone, tol),
    ])
}

/// Absorption across two widths, idempotence and co-idempotence.
pub fn absorption_idempotence(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    let cfg = SmootherConfig::new(delta)?;
    let narrow = SmootherConfig::new(0.6 * delta)?;
    let (lo, up) = (lower_smoother(f, &cfg), upper_smoother(f, &cfg));

    let mut absorb: f64 = 0.0;
    for (outer, inner) in [(&cfg, &narrow), (&narrow, &cfg)] {
        absorb = absorb
            .max(diff(&lower_smoother(&lower_smoother(f, inner), outer), &lo)?)
            .max(diff(&upper_smoother(&upper_smoother(f, inner), outer), &up)?);
    }
    let idem = diff(&lower_smoother(&lo, &cfg), &lo)?.max(diff(&upper_smoother(&up, &cfg), &up)?);
    let (rl, ru) = coidempotence_residual(f, &cfg)?;
    Ok(vec![
        Check::new("absorption", absorb, tol),
        Check::new("idempotence", idem, tol),
        Check::new("coidempotence", rl.max(ru), tol),
    ])
}

/// Ordering `L <= UL <= LU <= U`, idempotence of `LU` and `UL`, the
/// three-letter identities and agreement of every word of length `<= 4` with
/// its table reduction.
pub fn semigroup_algebra(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    use SemigroupElement::*;
    let cfg = SmootherConfig::new(delta)?;
    let [l, u, ul, lu] = [L, U, UL, LU].map(|e| e.apply(f, &cfg));

    let order = excess(&l, &ul)?.max(excess(&ul, &lu)?).max(excess(&lu, &u)?);
    let idem = diff(&LU.apply(&lu, &cfg), &lu)?.max(diff(&UL.apply(&ul, &cfg), &ul)?);
    let three = diff(&U.apply(&lu, &cfg), &lu)?.max(diff(&L.apply(&ul, &cfg), &ul)?);

    let mut words: f64 = 0.0;
    for w in OperatorWord::all_up_to(4) {
        let reduced = match w.reduce() {
            L => &l,
            U => &u,
            UL => &ul,
            LU => &lu,
        };
        words = words.max(diff(&w.apply_unreduced(f, &cfg), reduced)?);
    }
    Ok(vec![
        Check::new("semigroup_order", order, tol),
        Check::new("composite_idempotence", idem, tol),
        Check::new("three_letter_identities", three, tol),
        Check::new("word_reduction", words, tol),
    ])
}

/// One-sided monotonicity of the envelopes and smoothers, local
/// monotonicity of `LU f` and `UL f`, and the predicate/modulus agreement.
pub fn local_monotonicity(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    use crate::monotonicity::{is_downwards_monotone, is_upwards_monotone};
    use SemigroupElement::*;
    let cfg = SmootherConfig::new(delta)?;
    let r = Radius::new(0.5 * delta)?;

    let up_ok = [dilate(f, r), L.apply(f, &cfg)]
        .iter()
        .map(|g| is_upwards_monotone(g, delta, tol))
        .chain(
            [erode(f, r), U.apply(f, &cfg)]
                .iter()
                .map(|g| is_downwards_monotone(g, delta, tol)),
        )
        .collect::<Result<Vec<_>>>()?;
    let one_sided = if up_ok.iter().all(|&b| b) { 0.0 } else { 1.0 };

    let smooth = modulus(&LU.apply(f, &cfg), delta)?.max(modulus(&UL.apply(f, &cfg), delta)?);

    let mu = modulus(f, delta)?;
    let agrees = is_locally_monotone(f, delta, tol)? == (mu <= tol);
    Ok(vec![
        Check::new("envelope_one_sided_monotone", one_sided, 0.0),
        Check::new("composite_locally_monotone", smooth, tol),
        Check::new("monotone_iff_zero_modulus", if agrees { 0.0 } else { 1.0 }, 0.0),
    ])
}

/// `μ(L f) <= μ(f)`, `μ(U f) <= μ(f)` and their `μ̂` forms, `L f = f = U f`
/// when `μ̃ = 0`, and `||f − LU f||, ||f − UL f|| <= μ̃` on the finite domain.
pub fn modulus_bounds(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    use SemigroupElement::*;
    let cfg = SmootherConfig::new(delta)?;
    let eps = default_eps(delta);
    let report = ModulusReport::compute(f, delta, eps)?;
    let (lo, up) = (L.apply(f, &cfg), U.apply(f, &cfg));

    let decrease = (modulus(&lo, delta)? - report.mu)
        .max(modulus(&up, delta)? - report.mu)
        .max(modulus_hat(&lo, delta, eps)? - report.mu_hat)
        .max(modulus_hat(&up, delta, eps)? - report.mu_hat)
        .max(0.0);

    // on a bounded domain the clipped windows move monotone ends, so the
    // fixed-point condition needs the boundary terms of μ̃
    let fixed = if report.mu_tilde <= tol {
        diff(&lo, f)?.max(diff(&up, f)?)
    } else {
        0.0
    };

    let err = diff(f, &LU.apply(f, &cfg))?.max(diff(f, &UL.apply(f, &cfg))?);
    Ok(vec![
        Check::new("modulus_decrease", decrease, tol),
        Check::new("fixed_points", fixed, tol),
        Check::new("finite_domain_error_bound", (err - report.mu_tilde).max(0.0), BOUND_TOLERANCE),
    ])
}

/// Error bounds against `μ̂` for functions that are constant near both ends
/// of their domain, so that the clipped windows play no role. Includes
/// `L f = f = U f` when `μ̂ = 0`.
pub fn interior_bounds(f: &PLFunction, delta: f64, tol: f64) -> Result<Vec<Check>> {
    use SemigroupElement::*;
    let cfg = SmootherConfig::new(delta)?;
    let hat = modulus_hat(f, delta, default_eps(delta))?;
    let (lo, up) = (L.apply(f, &cfg), U.apply(f, &cfg));
    let pointwise = f.sub(&lo)?.sup().max(up.sub(f)?.sup());
    let err = diff(f, &LU.apply(f, &cfg))?.max(diff(f, &UL.apply(f, &cfg))?);
    let fixed = if hat <= tol {
        diff(&lo, f)?.max(diff(&up, f)?)
    } else {
        0.0
    };
    Ok(vec![
        Check::new("interior_fixed_points", fixed, tol),
        Check::new("interior_pointwise_bound", (pointwise - hat).max(0.0), BOUND_TOLERANCE),
        Check::new("interior_error_bound", (err - hat).max(0.0), BOUND_TOLERANCE),
    ])
}

/// Every check on a general function.
pub fn full_suite(f: &PLFunction, delta: f64, tol: f64, faults: Faults) -> Result<Vec<Check>> {
    let mut out = envelope_laws(f, delta, tol)?;
    out.extend(smoother_bounds(f, delta, tol, faults)?);
    out.extend(absorption_idempotence(f, delta, tol)?);
    out.extend(semigroup_algebra(f, delta, tol)?);
    out.extend(local_monotonicity(f, delta, tol)?);
    out.extend(modulus_bounds(f, delta, tol)?);
    Ok(out)
}
