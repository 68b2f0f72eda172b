//! Intersections of the entire curve ζ ↦ (e^ζ, e^{iζ}) with divisors.
//!
//! Pulling a Laurent polynomial P(z, w) back along the curve gives the
//! exponential sum g(ζ) = Σ c_{jk} e^{(j+ik)ζ}; pulling back a shifted
//! Stein factor gives F⁺(ζ-branch, e^{−λ}e^{iζ}). Intersection points
//! inside |ζ| ≤ R are counted with multiplicity by the argument principle —
//! the winding of g on the boundary circle — never by root-finding. Zeros
//! too close to the boundary are dodged by nudging R a few times; if the
//! nudges never clear (e.g. g ≡ 0 because the curve lies inside the
//! divisor), the count is rejected rather than fabricated.

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

use crate::branchlog::{winding_number_adaptive, BranchedPoint};
use crate::error::{Error, Result};
use crate::steinfn::{eval_fplus, TruncationBudget};

const TWO_PI: f64 = 2.0 * PI;
/// Fixed default seed for the reproducible sampling checks.
pub const DEFAULT_SEED: u64 = 1729;
/// Radius guard: e^{±R} must stay comfortably inside f64 range.
pub const MAX_CURVE_RADIUS: f64 = 300.0;
/// Boundary-zero relative margin and the nudge applied to clear it.
const BOUNDARY_MARGIN: f64 = 1e-4;
const RADIUS_NUDGE: f64 = 1e-2;
const MAX_NUDGES: u32 = 10;

/// A Laurent polynomial Σ c_{jk} z^j w^k with duplicate-free exponent pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    terms: Vec<LaurentTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaurentTerm {
    pub z_exp: i64,
    pub w_exp: i64,
    pub coeff: Complex64,
}

impl LaurentPoly {
    /// Build from terms; duplicate (j, k) pairs are rejected, and a nonempty
    /// term list must carry at least one nonzero coefficient.
    pub fn new(terms: Vec<LaurentTerm>) -> Result<Self> {
        for (i, t) in terms.iter().enumerate() {
            if !t.coeff.re.is_finite() || !t.coeff.im.is_finite() {
                return Err(Error::InvalidPolynomial {
                    reason: "coefficients must be finite".into(),
                });
            }
            for u in &terms[..i] {
                if u.z_exp == t.z_exp && u.w_exp == t.w_exp {
                    return Err(Error::InvalidPolynomial {
                        reason: format!("duplicate exponent pair z^{} w^{}", t.z_exp, t.w_exp),
                    });
                }
            }
        }
        if !terms.is_empty() && terms.iter().all(|t| t.coeff.norm() == 0.0) {
            return Err(Error::InvalidPolynomial {
                reason: "nonempty polynomial must have a nonzero coefficient \
                         (use LaurentPoly::zero for the zero polynomial)"
                    .into(),
            });
        }
        Ok(LaurentPoly { terms })
    }

    /// The explicit zero polynomial.
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn terms(&self) -> &[LaurentTerm] {
        &self.terms
    }

    pub fn is_nondegenerate(&self) -> bool {
        nondegenerate(self)
    }
}

/// An exponential sum Σ c·e^{f·ζ} with pairwise distinct frequencies.
#[derive(Debug, Clone)]
pub struct ExpSum {
    terms: Vec<(Complex64, Complex64)>, // (frequency, coefficient)
}

impl ExpSum {
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        self.terms.iter().map(|(f, c)| c * (f * zeta).exp()).sum()
    }

    pub fn terms(&self) -> &[(Complex64, Complex64)] {
        &self.terms
    }
}

/// Pull P back along the curve: z^j w^k becomes e^{(j+ik)ζ}. The duplicate-
/// free invariant of the polynomial makes the frequencies pairwise distinct.
pub fn compose_curve(p: &LaurentPoly) -> ExpSum {
    ExpSum {
        terms: p
            .terms
            .iter()
            .map(|t| (Complex64::new(t.z_exp as f64, t.w_exp as f64), t.coeff))
            .collect(),
    }
}

/// Distinct exponentials are linearly independent, so the pullback vanishes
/// identically only for the zero polynomial.
pub fn nondegenerate(p: &LaurentPoly) -> bool {
    p.terms.iter().any(|t| t.coeff.norm() != 0.0)
}

/// What to intersect the curve with.
#[derive(Debug, Clone)]
pub enum CurveTarget {
    /// An algebraic divisor {P = 0}.
    Poly(LaurentPoly),
    /// The shifted Stein divisor, pulled back as F⁺_λ ∘ f.
    SteinShift {
        lambda: Complex64,
        budget: TruncationBudget,
    },
}

/// An argument-principle count of curve-divisor intersections in |ζ| ≤ R.
#[derive(Debug, Clone, Copy)]
pub struct CountResult {
    /// Intersections counted with multiplicity.
    pub count: i64,
    /// The boundary radius actually used (after any nudges).
    pub radius: f64,
    /// Winding residual in radians.
    pub residual: f64,
}

fn target_evaluator(
    target: &CurveTarget,
) -> Result<Box<dyn Fn(Complex64) -> Result<Complex64> + '_>> {
    match target {
        CurveTarget::Poly(p) => {
            if !nondegenerate(p) {
                return Err(Error::InvalidPolynomial {
                    reason: "cannot count intersections with the zero polynomial".into(),
                });
            }
            let g = compose_curve(p);
            Ok(Box::new(move |zeta| Ok(g.eval(zeta))))
        }
        CurveTarget::SteinShift { lambda, budget } => {
            if !lambda.re.is_finite() || !lambda.im.is_finite() {
                return Err(Error::InvalidParameter {
                    reason: "shift lambda must be finite".into(),
                });
            }
            let shift = (-lambda).exp();
            let budget = *budget;
            Ok(Box::new(move |zeta: Complex64| {
                let zb = BranchedPoint::new(zeta.exp(), zeta)?;
                let w = shift * (Complex64::new(0.0, 1.0) * zeta).exp();
                let ev = eval_fplus(&zb, w, &budget)?;
                // The shifted divisor either misses the curve entirely or
                // contains it; a value that cannot be certified nonzero
                // signals the latter and must surface as zero proximity,
                // never feed the winding.
                if !ev.is_certified_nonzero() {
                    return Err(Error::AtOrNearZero {
                        magnitude: ev.value.norm(),
                    });
                }
                Ok(ev.value)
            }))
        }
    }
}

/// Estimate the distance from the boundary circle to the nearest zero by a
/// secant Newton step at each sample; anything inside the margin (or a
/// sample that is exactly zero or uncertifiable) reports zero proximity.
fn scan_boundary(g: &dyn Fn(Complex64) -> Result<Complex64>, radius: f64) -> Result<()> {
    let n = 256usize;
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let zeta = Complex64::from_polar(radius, TWO_PI * i as f64 / n as f64);
        values.push(g(zeta)?);
    }
    let spacing = TWO_PI * radius / n as f64;
    for i in 0..n {
        let v = values[i];
        if v.norm() == 0.0 {
            return Err(Error::AtOrNearZero { magnitude: 0.0 });
        }
        let dv = (values[(i + 1) % n] - v).norm().max(f64::MIN_POSITIVE);
        let newton_distance = v.norm() * spacing / dv;
        if newton_distance < BOUNDARY_MARGIN * radius {
            return Err(Error::AtOrNearZero {
                magnitude: v.norm(),
            });
        }
    }
    Ok(())
}

fn try_count_at(g: &dyn Fn(Complex64) -> Result<Complex64>, r: f64) -> Result<CountResult> {
    scan_boundary(g, r)?;
    let (res, _) = winding_number_adaptive(|t| g(Complex64::from_polar(r, TWO_PI * t)), 256)?;
    if res.winding < 0 {
        return Err(Error::NegativeCount { count: res.winding });
    }
    Ok(CountResult {
        count: res.winding,
        radius: r,
        residual: res.residual,
    })
}

/// Count intersections of the curve with the target inside |ζ| ≤ R: the
/// winding of the pullback on the boundary circle. R is nudged outward by
/// 0.01 up to ten times if zeros sit too close to the boundary.
pub fn count_intersections(target: &CurveTarget, radius: f64) -> Result<CountResult> {
    if !(radius.is_finite() && radius > 0.0 && radius <= MAX_CURVE_RADIUS) {
        return Err(Error::InvalidParameter {
            reason: format!("radius must be in (0, {MAX_CURVE_RADIUS}], got {radius}"),
        });
    }
    let g = target_evaluator(target)?;
    let mut r = radius;
    for _ in 0..=MAX_NUDGES {
        match try_count_at(g.as_ref(), r) {
            Err(Error::AtOrNearZero { .. }) | Err(Error::ZeroSample { .. }) => {
                r += RADIUS_NUDGE;
            }
            other => return other,
        }
    }
    Err(Error::PersistentBoundaryZero {
        radius,
        attempts: MAX_NUDGES,
    })
}

/// The curve itself: Φ(ζ) = (e^ζ, e^{iζ}).
pub fn phi(zeta: Complex64) -> (Complex64, Complex64) {
    (zeta.exp(), (Complex64::new(0.0, 1.0) * zeta).exp())
}

/// Sample random pairs in the box |Re ζ|, |Im ζ| ≤ halfwidth and verify that
/// Φ separates them (collisions would need ζ₁−ζ₂ ∈ 2πZ ∩ 2πiZ = {0}).
/// Uses the fixed default seed.
pub fn phi_injectivity(sample_count: usize, box_halfwidth: f64) -> Result<bool> {
    phi_injectivity_seeded(sample_count, box_halfwidth, DEFAULT_SEED)
}

/// Seeded variant of `phi_injectivity` for reproducible sweeps.
pub fn phi_injectivity_seeded(sample_count: usize, box_halfwidth: f64, seed: u64) -> Result<bool> {
    if sample_count < 100 {
        return Err(Error::InvalidParameter {
            reason: format!("need at least 100 sample pairs, got {sample_count}"),
        });
    }
    if !(box_halfwidth.is_finite() && box_halfwidth > 0.0 && box_halfwidth <= 100.0) {
        return Err(Error::InvalidParameter {
            reason: format!("box halfwidth must be in (0, 100], got {box_halfwidth}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| {
        Complex64::new(
            rng.random_range(-box_halfwidth..box_halfwidth),
            rng.random_range(-box_halfwidth..box_halfwidth),
        )
    };
    for _ in 0..sample_count {
        let z1 = draw(&mut rng);
        let mut z2 = draw(&mut rng);
        if z1 == z2 {
            z2 += Complex64::new(box_halfwidth / 2.0, 0.0);
        }
        let (a1, b1) = phi(z1);
        let (a2, b2) = phi(z2);
        let sep_first = (a1 - a2).norm() / (a1.norm() + a2.norm());
        let sep_second = (b1 - b2).norm() / (b1.norm() + b2.norm());
        if sep_first.max(sep_second) <= 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}
