//! Factor-of-automorphy extraction and Chern pairings on torus 2-cycles.
//!
//! The pairing ⟨c₁(L(D)), T⟩ against a coordinate torus T = {|z| = r_z} ×
//! {|w| = r_w} is computed as the winding number, over the w-circle, of the
//! monomial factor a function acquires when the z-branch is continued once
//! around its circle. No curvature form is ever integrated: the factor of
//! automorphy carries the whole class, and one-dimensional winding extracts
//! an exact integer with a reported residual.
//!
//! `torus_intersection_count` is the independent oracle: it counts signed
//! crossings of the divisor sheets through the torus directly.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::branchlog::{winding_number_adaptive, BranchedPoint, LoopPath};
use crate::bundlecalc::ExponentMatrix;
use crate::error::{Error, Result};
use crate::steinfn::{
    eval_fminus, eval_fplus, eval_fplus_shift, EvalResult, ShiftParam, TruncationBudget,
};

const TWO_PI: f64 = 2.0 * PI;

/// A product of coordinate circles with a chosen orientation.
#[derive(Debug, Clone, Copy)]
pub struct TorusCycle {
    r_z: f64,
    r_w: f64,
    orientation: i8,
}

impl TorusCycle {
    pub fn new(r_z: f64, r_w: f64, orientation: i8) -> Result<Self> {
        if !(r_z.is_finite() && r_w.is_finite() && r_z > 0.0 && r_w > 0.0) {
            return Err(Error::InvalidParameter {
                reason: format!("torus radii must be positive and finite, got ({r_z}, {r_w})"),
            });
        }
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidParameter {
                reason: format!("orientation must be +1 or -1, got {orientation}"),
            });
        }
        Ok(TorusCycle {
            r_z,
            r_w,
            orientation,
        })
    }

    /// The default torus (1, 1.3, +1): homologous to the unit torus but
    /// nudged in |w| so the base sheet of w = z^i misses it.
    pub fn default_torus() -> Self {
        TorusCycle {
            r_z: 1.0,
            r_w: 1.3,
            orientation: 1,
        }
    }

    pub fn r_z(&self) -> f64 {
        self.r_z
    }

    pub fn r_w(&self) -> f64 {
        self.r_w
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn reversed(&self) -> Self {
        TorusCycle {
            r_z: self.r_z,
            r_w: self.r_w,
            orientation: -self.orientation,
        }
    }
}

/// One of the evaluable Stein factors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HandleAtom {
    FPlus,
    FMinus,
    FPlusShift { lambda: Complex64 },
}

impl HandleAtom {
    fn eval(
        &self,
        zb: &BranchedPoint,
        w: Complex64,
        budget: &TruncationBudget,
    ) -> Result<EvalResult> {
        match self {
            HandleAtom::FPlus => eval_fplus(zb, w, budget),
            HandleAtom::FMinus => eval_fminus(zb, w, budget),
            HandleAtom::FPlusShift { lambda } => {
                eval_fplus_shift(ShiftParam { lambda: *lambda }, zb, w, budget)
            }
        }
    }

    fn label(&self) -> String {
        match self {
            HandleAtom::FPlus => "fplus".into(),
            HandleAtom::FMinus => "fminus".into(),
            HandleAtom::FPlusShift { lambda } => {
                format!("fplus-shift(lambda={}+{}i)", lambda.re, lambda.im)
            }
        }
    }
}

/// A deterministic evaluator: one of F⁺, F⁻, F⁺_λ, or a finite pointwise
/// product of them, with the exponent matrix and sheet data it is known to
/// carry.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionHandle {
    atoms: Vec<HandleAtom>,
    label: String,
}

impl FunctionHandle {
    pub fn fplus() -> Self {
        Self::from_atoms(vec![HandleAtom::FPlus])
    }

    pub fn fminus() -> Self {
        Self::from_atoms(vec![HandleAtom::FMinus])
    }

    pub fn fplus_shift(lambda: Complex64) -> Self {
        Self::from_atoms(vec![HandleAtom::FPlusShift { lambda }])
    }

    /// Pointwise product of handles.
    pub fn product(handles: &[FunctionHandle]) -> Result<Self> {
        let mut atoms = Vec::new();
        for h in handles {
            atoms.extend(h.atoms.iter().copied());
        }
        if atoms.is_empty() {
            return Err(Error::InvalidParameter {
                reason: "a function handle needs at least one factor".into(),
            });
        }
        Ok(Self::from_atoms(atoms))
    }

    fn from_atoms(atoms: Vec<HandleAtom>) -> Self {
        let label = atoms
            .iter()
            .map(|a| a.label())
            .collect::<Vec<_>>()
            .join("*");
        FunctionHandle { atoms, label }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn atoms(&self) -> &[HandleAtom] {
        &self.atoms
    }

    /// Evaluate the product with a combined certificate: the bound composes
    /// multiplicatively (plus an ulp allowance per multiplication), term
    /// counts add, scales multiply.
    pub fn eval(
        &self,
        zb: &BranchedPoint,
        w: Complex64,
        budget: &TruncationBudget,
    ) -> Result<EvalResult> {
        let mut value = Complex64::new(1.0, 0.0);
        let mut bound = 0.0f64;
        let mut nu = 0u32;
        let mut mu = 0u32;
        let mut scale = 1.0f64;
        for atom in &self.atoms {
            let r = atom.eval(zb, w, budget)?;
            value *= r.value;
            bound = (1.0 + bound) * (1.0 + r.rel_error_bound) - 1.0 + 2.0 * f64::EPSILON;
            nu = nu.saturating_add(r.nu_terms);
            mu = mu.saturating_add(r.mu_terms);
            scale *= r.scale;
        }
        Ok(EvalResult {
            value,
            rel_error_bound: bound,
            nu_terms: nu,
            mu_terms: mu,
            scale,
        })
    }

    /// The exponent matrix this handle is known to carry (coordinates:
    /// 1 = z, 2 = w): F⁺ and every shift acquire w around the z-loop,
    /// F⁻ acquires 1/w; products add.
    pub fn exponent_matrix(&self) -> ExponentMatrix {
        let mut w_exp = 0i64;
        for atom in &self.atoms {
            w_exp += match atom {
                HandleAtom::FPlus | HandleAtom::FPlusShift { .. } => 1,
                HandleAtom::FMinus => -1,
            };
        }
        ExponentMatrix::new(vec![vec![0, w_exp], vec![0, 0]])
            .expect("2x2 matrix with small entries")
    }

    /// The sheet families cut out by this handle, for the direct
    /// intersection-count oracle.
    pub fn sheet_families(&self) -> Vec<SheetFamily> {
        self.atoms
            .iter()
            .map(|atom| match atom {
                HandleAtom::FPlus => SheetFamily {
                    inverse_direction: false,
                    shift: Complex64::new(0.0, 0.0),
                },
                HandleAtom::FMinus => SheetFamily {
                    inverse_direction: true,
                    shift: Complex64::new(0.0, 0.0),
                },
                HandleAtom::FPlusShift { lambda } => SheetFamily {
                    inverse_direction: false,
                    shift: *lambda,
                },
            })
            .collect()
    }
}

/// An exact integer pairing extracted by winding, with its residual.
#[derive(Debug, Clone, Copy)]
pub struct PairingResult {
    pub pairing: i64,
    pub residual: f64,
    pub samples_used: usize,
}

fn certified_nonzero(r: &EvalResult) -> Result<Complex64> {
    if !r.is_certified_nonzero() {
        return Err(Error::AtOrNearZero {
            magnitude: r.value.norm(),
        });
    }
    Ok(r.value)
}

/// The factor acquired by `f` when the z-branch is continued once
/// counterclockwise around its circle: f(ℓ + 2πi, w) / f(ℓ, w).
pub fn z_loop_factor(
    f: &FunctionHandle,
    zb: &BranchedPoint,
    w: Complex64,
    budget: &TruncationBudget,
) -> Result<Complex64> {
    let base = certified_nonzero(&f.eval(zb, w, budget)?)?;
    let moved = certified_nonzero(&f.eval(&zb.shifted(1), w, budget)?)?;
    Ok(moved / base)
}

/// Continue `f` once counterclockwise around the w-circle through w. The
/// functions are single-valued in w, so the endpoint/start ratio must be 1;
/// sampling the circle detects any zero crossing on the way.
pub fn w_loop_factor(
    f: &FunctionHandle,
    zb: &BranchedPoint,
    w: Complex64,
    budget: &TruncationBudget,
) -> Result<Complex64> {
    let path = LoopPath::from_curve(
        |t| {
            let wt = w * Complex64::new(0.0, TWO_PI * t).exp();
            certified_nonzero(&f.eval(zb, wt, budget)?)
        },
        false,
    )?;
    let samples = path.samples();
    Ok(samples[samples.len() - 1] / samples[0])
}

/// ⟨c₁(L(D_f)), T⟩: the winding of the z-loop factor over the w-circle,
/// signed by the torus orientation.
pub fn chern_pairing(
    f: &FunctionHandle,
    torus: &TorusCycle,
    budget: &TruncationBudget,
) -> Result<PairingResult> {
    let zb = BranchedPoint::principal(Complex64::new(torus.r_z(), 0.0))?;
    let (res, samples_used) = winding_number_adaptive(
        |t| {
            let w = Complex64::new(0.0, TWO_PI * t).exp() * torus.r_w();
            z_loop_factor(f, &zb, w, budget)
        },
        64,
    )?;
    Ok(PairingResult {
        pairing: torus.orientation() as i64 * res.winding,
        residual: res.residual,
        samples_used,
    })
}

/// One family of divisor sheets w = e^{shift} · z^{±i} (all branches).
#[derive(Debug, Clone, Copy)]
pub struct SheetFamily {
    /// false: sheets of w = z^i (moduli fall as z turns CCW);
    /// true: sheets of w = z^{-i} (moduli rise).
    pub inverse_direction: bool,
    /// Divisor shift λ in w = e^λ z^{±i}.
    pub shift: Complex64,
}

/// Independent oracle for the pairing: count, with signs, the parameter
/// values at which a divisor sheet crosses |w| = r_w as z traverses its
/// circle. The sheet moduli are e^{Re λ ∓ φ + 2kπ}, so the level function is
/// linear in φ and every crossing is transversal; a sample landing on the
/// level within 1e-9 is rejected as tangential rather than resolved.
pub fn torus_intersection_count(families: &[SheetFamily], torus: &TorusCycle) -> Result<i64> {
    let n = 1024usize;
    let log_rw = torus.r_w().ln();
    let mut total = 0i64;
    for fam in families {
        if !fam.shift.re.is_finite() || !fam.shift.im.is_finite() {
            return Err(Error::InvalidParameter {
                reason: "sheet family shift must be finite".into(),
            });
        }
        let eps = if fam.inverse_direction { -1.0 } else { 1.0 };
        // Wrapped level function s(φ) = Re λ − ε·φ − ln r_w (mod 2π), with
        // a crossing of the torus exactly where s passes through 0.
        let level = |phi: f64| -> f64 {
            let raw = fam.shift.re - eps * phi - log_rw;
            let mut s = raw % TWO_PI;
            if s > PI {
                s -= TWO_PI;
            } else if s <= -PI {
                s += TWO_PI;
            }
            s
        };
        // Half-step offset keeps samples off the measure-zero exact hits.
        let mut prev = level((0.5) * TWO_PI / n as f64);
        for i in 1..=n {
            let phi = (i as f64 + 0.5) * TWO_PI / n as f64;
            let cur = level(phi);
            if prev == 0.0 || prev.abs() < 1e-9 {
                return Err(Error::TangentialCrossing);
            }
            let delta = cur - prev;
            // Jumps of ~2π are the wrap at ±π, not crossings of 0.
            if delta.abs() < PI && prev.signum() != cur.signum() {
                let sign = if delta < 0.0 { 1i64 } else { -1i64 };
                total += torus.orientation() as i64 * sign;
            }
            prev = cur;
        }
    }
    Ok(total)
}
