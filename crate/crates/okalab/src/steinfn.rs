//! Certified evaluation of Stein's divisor functions on (C*)².
//!
//! F⁺(z,w) = exp((log z)²/4π + log z/(1−i)) · Π_{ν≥0}(1 − w/e^{i log z + 2νπ})
//!          · Π_{μ≥1}(1 − 1/(w e^{−i log z + 2μπ}))
//!
//! cuts out the multivalued hypersurface w = z^i sheet by sheet; F⁻ is the
//! sign-flipped companion for w = z^{−i}, and F⁺_λ shifts the divisor by
//! e^λ. The infinite products decay like e^{−2π} ≈ 1.87e−3 per term, so a
//! handful of head factors plus a closed-form geometric tail bound gives a
//! fully certified relative error:
//!
//!   S = (|w|e^θ e^{−2Nπ} + |w|⁻¹ e^{−θ} e^{−2Mπ}) / (1 − e^{−2π}),
//!   bound = (e^S − 1) + 10 ulp,          θ = Im log z,
//!
//! valid by |Π(1−a_k) − 1| ≤ exp(Σ|a_k|) − 1. N and M are the smallest head
//! lengths that push the bound below the requested target while also keeping
//! every tail term below 1/2 (which in particular forces every nearby sheet
//! factor into the evaluated head).
//!
//! Branches are explicit: the caller passes a `BranchedPoint`, never a bare
//! z, and shifting the branch by 2πi multiplies F⁺ by w and F⁻ by 1/w.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::branchlog::{is_nonzero_finite, winding_number_adaptive, BranchedPoint, WindingResult};
use crate::error::{Error, Result};

/// Smallest certifiable relative error target; below this, double precision
/// cannot back the certificate and the budget is refused.
pub const MIN_TARGET_REL_ERROR: f64 = 1e-15;
/// Hard cap on head factors per product.
pub const MAX_TERMS_CAP: u32 = 10_000;
/// Overflow guard on sheet indices (e^{2kπ} must stay in f64 range).
pub const MAX_SHEET_INDEX: i64 = 50;
/// Fixed allowance for the directly evaluated exponential prefactor.
const PREFACTOR_ULPS: f64 = 10.0 * f64::EPSILON;

/// How many head terms a certified evaluation may spend, and the relative
/// error it must achieve.
#[derive(Debug, Clone, Copy)]
pub struct TruncationBudget {
    target_rel_error: f64,
    max_terms: u32,
}

impl TruncationBudget {
    pub fn new(target_rel_error: f64, max_terms: u32) -> Result<Self> {
        if !target_rel_error.is_finite() || target_rel_error < MIN_TARGET_REL_ERROR {
            return Err(Error::InvalidBudget {
                reason: format!(
                    "target_rel_error must be finite and >= {MIN_TARGET_REL_ERROR:e}, got {target_rel_error:e}"
                ),
            });
        }
        if max_terms == 0 || max_terms > MAX_TERMS_CAP {
            return Err(Error::InvalidBudget {
                reason: format!("max_terms must be in 1..={MAX_TERMS_CAP}, got {max_terms}"),
            });
        }
        Ok(TruncationBudget {
            target_rel_error,
            max_terms,
        })
    }

    pub fn target_rel_error(&self) -> f64 {
        self.target_rel_error
    }

    pub fn max_terms(&self) -> u32 {
        self.max_terms
    }
}

impl Default for TruncationBudget {
    fn default() -> Self {
        TruncationBudget {
            target_rel_error: 1e-12,
            max_terms: 256,
        }
    }
}

/// A certified function value.
///
/// `rel_error_bound` covers truncation plus the prefactor allowance and is
/// at most the budget's target. `scale` is the magnitude context (prefactor
/// magnitude times the product of head-factor magnitudes clamped below at
/// 1): at an exact zero the bound reads as an absolute bound times `scale`,
/// and "certified nonzero" means |value| > 10 · bound · scale.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: Complex64,
    pub rel_error_bound: f64,
    pub nu_terms: u32,
    pub mu_terms: u32,
    pub scale: f64,
}

impl EvalResult {
    /// Strict separation between "zero" and "nonzero" judgments.
    pub fn is_certified_nonzero(&self) -> bool {
        self.value.norm() > 10.0 * self.rel_error_bound * self.scale
    }
}

/// Divisor shift parameter λ; the shifted divisor misses the base one
/// whenever Re λ ∉ 2πZ (checked by consumers, not here).
#[derive(Debug, Clone, Copy)]
pub struct ShiftParam {
    pub lambda: Complex64,
}

const TWO_PI: f64 = 2.0 * PI;

/// e^{i·l + 2kπ} — the k-th sheet value over the branch l. Shared by the
/// evaluators and `sheet_point` so that evaluating exactly on a sheet
/// cancels bit-for-bit to an exact zero factor.
fn sheet_value(l: Complex64, k: i64) -> Complex64 {
    (Complex64::new(0.0, 1.0) * l + Complex64::new(TWO_PI * k as f64, 0.0)).exp()
}

/// Mirror sheet e^{-i·l + 2kπ} used by F⁻.
fn mirror_sheet_value(l: Complex64, k: i64) -> Complex64 {
    (Complex64::new(0.0, -1.0) * l + Complex64::new(TWO_PI * k as f64, 0.0)).exp()
}

/// Geometric tail sum bound and minimal head lengths.
///
/// `a` and `b` are the moduli of the first neglected ν- and μ-terms at head
/// lengths N = M = 0; each extra head factor multiplies them by e^{−2π}.
fn choose_head_lengths(a0: f64, b0: f64, budget: &TruncationBudget) -> Result<(u32, u32, f64)> {
    let decay = (-TWO_PI).exp();
    let geom = 1.0 / (1.0 - decay);
    let mut n = 0u32;
    let mut m = 0u32;
    let mut a = a0;
    let mut b = b0;
    // Every tail term must drop below 1/2 (this also pulls every nearby
    // sheet factor into the head).
    while a >= 0.5 {
        n += 1;
        a *= decay;
        if n > budget.max_terms {
            return Err(Error::BudgetExhausted {
                needed: n,
                max_terms: budget.max_terms,
            });
        }
    }
    while b >= 0.5 {
        m += 1;
        b *= decay;
        if m > budget.max_terms {
            return Err(Error::BudgetExhausted {
                needed: m,
                max_terms: budget.max_terms,
            });
        }
    }
    loop {
        let s = (a + b) * geom;
        let bound = s.exp_m1() + PREFACTOR_ULPS;
        if bound <= budget.target_rel_error {
            return Ok((n, m, bound));
        }
        if a >= b {
            n += 1;
            a *= decay;
        } else {
            m += 1;
            b *= decay;
        }
        if n > budget.max_terms || m > budget.max_terms {
            return Err(Error::BudgetExhausted {
                needed: n.max(m),
                max_terms: budget.max_terms,
            });
        }
    }
}

fn validate_w(w: Complex64) -> Result<()> {
    if !is_nonzero_finite(w) {
        return Err(Error::ZeroInput);
    }
    Ok(())
}

/// Evaluate F⁺ at (z, w) on the branch carried by `zb`.
pub fn eval_fplus(
    zb: &BranchedPoint,
    w: Complex64,
    budget: &TruncationBudget,
) -> Result<EvalResult> {
    validate_w(w)?;
    let l = zb.log_value();
    let theta = l.im;
    // First neglected term moduli at N = M = 0: |w|e^{θ−2Nπ} and e^{−θ−2Mπ}/|w|.
    let a0 = w.norm() * theta.exp();
    let b0 = (-theta).exp() / w.norm();
    let (n, m, bound) = choose_head_lengths(a0, b0, budget)?;

    let prefactor = (l * l / Complex64::new(4.0 * PI, 0.0) + l * Complex64::new(0.5, 0.5)).exp();
    let mut value = prefactor;
    let mut scale = prefactor.norm();
    for nu in 0..n as i64 {
        let factor = Complex64::new(1.0, 0.0) - w / sheet_value(l, nu);
        value *= factor;
        scale *= factor.norm().max(1.0);
    }
    for mu in 1..=m as i64 {
        let factor = Complex64::new(1.0, 0.0) - sheet_value(l, -mu) / w;
        value *= factor;
        scale *= factor.norm().max(1.0);
    }
    Ok(EvalResult {
        value,
        rel_error_bound: bound,
        nu_terms: n,
        mu_terms: m,
        scale,
    })
}

/// Evaluate F⁻ at (z, w): the sign-flipped products and prefactor that cut
/// out w = z^{−i}.
pub fn eval_fminus(
    zb: &BranchedPoint,
    w: Complex64,
    budget: &TruncationBudget,
) -> Result<EvalResult> {
    validate_w(w)?;
    let l = zb.log_value();
    let theta = l.im;
    // Sheets sit at e^{−i·l + 2kπ}, so the roles of e^{±θ} swap.
    let a0 = w.norm() * (-theta).exp();
    let b0 = theta.exp() / w.norm();
    let (n, m, bound) = choose_head_lengths(a0, b0, budget)?;

    let prefactor = (l * l / Complex64::new(4.0 * PI, 0.0) - l * Complex64::new(0.5, 0.5)).exp();
    let mut value = prefactor;
    let mut scale = prefactor.norm();
    for nu in 0..n as i64 {
        let factor = Complex64::new(1.0, 0.0) - w / mirror_sheet_value(l, nu);
        value *= factor;
        scale *= factor.norm().max(1.0);
    }
    for mu in 1..=m as i64 {
        let factor = Complex64::new(1.0, 0.0) - mirror_sheet_value(l, -mu) / w;
        value *= factor;
        scale *= factor.norm().max(1.0);
    }
    Ok(EvalResult {
        value,
        rel_error_bound: bound,
        nu_terms: n,
        mu_terms: m,
        scale,
    })
}

/// Evaluate the shifted function F⁺_λ(z, w) = F⁺(z, e^{−λ}w).
pub fn eval_fplus_shift(
    lam: ShiftParam,
    zb: &BranchedPoint,
    w: Complex64,
    budget: &TruncationBudget,
) -> Result<EvalResult> {
    validate_w(w)?;
    eval_fplus(zb, (-lam.lambda).exp() * w, budget)
}

/// The k-th sheet point w_k = e^{i·log z + 2kπ} of the divisor w = z^i over
/// the given branch; an exact zero of `eval_fplus` whenever the head reaches
/// index k.
pub fn sheet_point(zb: &BranchedPoint, k: i64) -> Result<Complex64> {
    if k.abs() > MAX_SHEET_INDEX {
        return Err(Error::SheetIndexOverflow {
            k,
            max: MAX_SHEET_INDEX,
        });
    }
    Ok(sheet_value(zb.log_value(), k))
}

/// Sheet moduli of F⁺ over the branch l are e^{−θ+2kπ}, θ = Im l.
pub fn sheet_modulus(zb: &BranchedPoint, k: i64) -> f64 {
    (-zb.log_value().im + TWO_PI * k as f64).exp()
}

fn check_annulus_margin(zb: &BranchedPoint, r: f64) -> Result<()> {
    let theta = zb.log_value().im;
    // Nearest sheet index to ln r = −θ + 2kπ.
    let k = ((r.ln() + theta) / TWO_PI).round() as i64;
    for kk in [k - 1, k, k + 1] {
        let m = (-theta + TWO_PI * kk as f64).exp();
        let margin = (r - m).abs() / m;
        if margin < 1e-3 {
            return Err(Error::SheetProximity { radius: r, margin });
        }
    }
    Ok(())
}

/// Count zeros of w ↦ F⁺(z, w) in the annulus r1 < |w| < r2 by the argument
/// principle: winding on the outer circle minus winding on the inner one.
/// Equals the number of sheets with modulus inside the annulus.
pub fn zero_count_annulus(
    zb: &BranchedPoint,
    r1: f64,
    r2: f64,
    budget: &TruncationBudget,
) -> Result<WindingResult> {
    if !(r1.is_finite() && r2.is_finite() && 0.0 < r1 && r1 < r2) {
        return Err(Error::InvalidParameter {
            reason: format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}"),
        });
    }
    check_annulus_margin(zb, r1)?;
    check_annulus_margin(zb, r2)?;
    let wind_at = |r: f64| -> Result<WindingResult> {
        let (res, _) = winding_number_adaptive(
            |t| {
                let w = Complex64::new(0.0, TWO_PI * t).exp() * r;
                let ev = eval_fplus(zb, w, budget)?;
                if !ev.is_certified_nonzero() {
                    return Err(Error::AtOrNearZero {
                        magnitude: ev.value.norm(),
                    });
                }
                Ok(ev.value)
            },
            64,
        )?;
        Ok(res)
    };
    let outer = wind_at(r2)?;
    let inner = wind_at(r1)?;
    Ok(WindingResult {
        winding: outer.winding - inner.winding,
        residual: outer.residual.max(inner.residual),
    })
}
