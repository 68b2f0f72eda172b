//! Branch-tracked complex logarithm and winding numbers.
//!
//! A `BranchedPoint` carries a nonzero point of C* together with a chosen
//! branch of its logarithm; continuation along a sampled loop moves the
//! branch continuously, so a closed loop winding k times around the origin
//! shifts the branch by 2πik. Winding numbers of sampled nonvanishing
//! functions are extracted by summing principal argument increments; a
//! step whose angular separation reaches π/2 is never unwrapped silently —
//! it is refined (when a curve callback is available) or rejected.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Relative tolerance for the exp(log_value) == point invariant.
pub const BRANCH_REL_TOL: f64 = 1e-12;
/// Angular separation limit per step; 4x safety margin under the π aliasing limit.
pub const MAX_STEP_ANGLE: f64 = PI / 2.0;
/// Maximum midpoint-insertion depth for adaptive refinement.
pub const MAX_REFINE_DEPTH: u32 = 20;
/// Minimum number of samples in a loop path.
pub const MIN_PATH_SAMPLES: usize = 8;

/// A nonzero complex number with a chosen branch of its logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedPoint {
    point: Complex64,
    log_value: Complex64,
}

impl BranchedPoint {
    /// Pair a point with an explicit branch value. Fails unless
    /// exp(log_value) reproduces the point to 1e-12 relative.
    pub fn new(point: Complex64, log_value: Complex64) -> Result<Self> {
        if !is_nonzero_finite(point) {
            return Err(Error::ZeroInput);
        }
        if (log_value.exp() - point).norm() > BRANCH_REL_TOL * point.norm() {
            return Err(Error::BranchMismatch);
        }
        Ok(BranchedPoint { point, log_value })
    }

    /// The principal branch: ln|z| + i·arg z with arg in (−π, π].
    pub fn principal(z: Complex64) -> Result<Self> {
        principal_branch(z)
    }

    /// The same point with the branch shifted by 2πi·turns.
    pub fn shifted(&self, turns: i64) -> Self {
        BranchedPoint {
            point: self.point,
            log_value: self.log_value + Complex64::new(0.0, 2.0 * PI * turns as f64),
        }
    }

    pub fn point(&self) -> Complex64 {
        self.point
    }

    pub fn log_value(&self) -> Complex64 {
        self.log_value
    }
}

/// Principal branch of the logarithm, arg in (−π, π] (so log 1 = 0).
pub fn principal_branch(z: Complex64) -> Result<BranchedPoint> {
    if !is_nonzero_finite(z) {
        return Err(Error::ZeroInput);
    }
    let mut arg = z.arg();
    // atan2 yields -π only for a negative real with -0.0 imaginary part;
    // the principal convention puts the cut value at +π.
    if arg <= -PI {
        arg = PI;
    }
    Ok(BranchedPoint {
        point: z,
        log_value: Complex64::new(z.norm().ln(), arg),
    })
}

/// An ordered sampling of a path in C*, refined so that consecutive samples
/// (and the wrap step when closed) are separated by less than π/2 in angle.
#[derive(Debug, Clone)]
pub struct LoopPath {
    samples: Vec<Complex64>,
    closed: bool,
}

impl LoopPath {
    /// Validate caller-supplied samples. No refinement is possible here, so
    /// any step reaching π/2 is rejected.
    pub fn from_samples(samples: Vec<Complex64>, closed: bool) -> Result<Self> {
        if samples.len() < MIN_PATH_SAMPLES {
            return Err(Error::TooFewSamples {
                min: MIN_PATH_SAMPLES,
                got: samples.len(),
            });
        }
        for (index, s) in samples.iter().enumerate() {
            if !is_nonzero_finite(*s) {
                return Err(Error::ZeroSample { index });
            }
        }
        let steps = if closed {
            samples.len()
        } else {
            samples.len() - 1
        };
        for i in 0..steps {
            let a = samples[i];
            let b = samples[(i + 1) % samples.len()];
            let sep = (b / a).arg().abs();
            if sep >= MAX_STEP_ANGLE {
                return Err(Error::AngularSeparation {
                    index: i,
                    separation: sep,
                });
            }
        }
        Ok(LoopPath { samples, closed })
    }

    /// Sample a parametrized curve on [0, 1] adaptively, inserting midpoints
    /// until every step is below π/2. Closed curves must satisfy f(1) = f(0);
    /// the t = 1 endpoint is kept only for open curves.
    pub fn from_curve(f: impl Fn(f64) -> Result<Complex64>, closed: bool) -> Result<Self> {
        let n0 = 16usize;
        let mut coarse = Vec::with_capacity(n0 + 1);
        let last = if closed { n0 - 1 } else { n0 };
        for i in 0..=last {
            let t = i as f64 / n0 as f64;
            let v = f(t)?;
            if !is_nonzero_finite(v) {
                return Err(Error::ZeroSample { index: i });
            }
            coarse.push((t, v));
        }
        let mut samples = vec![coarse[0].1];
        for w in coarse.windows(2) {
            refine_segment(&f, w[0].0, w[0].1, w[1].0, w[1].1, 0, &mut samples)?;
        }
        if closed {
            // Wrap step from the last coarse node back to t = 1 (== t = 0).
            let (t_last, v_last) = *coarse.last().unwrap();
            let mut tail = Vec::new();
            refine_segment(&f, t_last, v_last, 1.0, coarse[0].1, 0, &mut tail)?;
            tail.pop(); // drop the duplicate of samples[0]
            samples.extend(tail);
        }
        if samples.len() < MIN_PATH_SAMPLES {
            // Cannot happen with n0 = 16, but keep the invariant visible.
            return Err(Error::TooFewSamples {
                min: MIN_PATH_SAMPLES,
                got: samples.len(),
            });
        }
        Ok(LoopPath { samples, closed })
    }

    /// A circle through `start`, traversed `turns` times (negative = clockwise).
    pub fn circle(start: Complex64, turns: i64) -> Result<Self> {
        if !is_nonzero_finite(start) {
            return Err(Error::ZeroInput);
        }
        let w = 2.0 * PI * turns as f64;
        Self::from_curve(|t| Ok(start * Complex64::new(0.0, w * t).exp()), true)
    }

    /// A constant (degenerate) closed path.
    pub fn constant(z: Complex64) -> Result<Self> {
        Self::from_samples(vec![z; MIN_PATH_SAMPLES], true)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }
}

fn refine_segment(
    f: &impl Fn(f64) -> Result<Complex64>,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    depth: u32,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let sep = (v1 / v0).arg().abs();
    if sep < MAX_STEP_ANGLE {
        out.push(v1);
        return Ok(());
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::RefinementExhausted {
            max_depth: MAX_REFINE_DEPTH,
        });
    }
    let tm = 0.5 * (t0 + t1);
    let vm = f(tm)?;
    if !is_nonzero_finite(vm) {
        return Err(Error::ZeroSample { index: out.len() });
    }
    refine_segment(f, t0, v0, tm, vm, depth + 1, out)?;
    refine_segment(f, tm, vm, t1, v1, depth + 1, out)
}

/// Continue the branch of the logarithm along a sampled path.
///
/// For a closed path the endpoint is the start point with the branch shifted
/// by 2πi times the path's winding about the origin.
pub fn continue_branch(start: &BranchedPoint, path: &LoopPath) -> Result<BranchedPoint> {
    let samples = path.samples();
    let first = samples[0];
    let distance = (first - start.point()).norm() / start.point().norm();
    if distance > 1e-9 {
        return Err(Error::PathStartMismatch { distance });
    }
    let mut log = start.log_value();
    let steps = if path.is_closed() {
        samples.len()
    } else {
        samples.len() - 1
    };
    for i in 0..steps {
        let a = samples[i];
        let b = samples[(i + 1) % samples.len()];
        let ratio = b / a;
        log += Complex64::new(ratio.norm().ln(), ratio.arg());
    }
    let end_point = if path.is_closed() {
        start.point()
    } else {
        *samples.last().unwrap()
    };
    Ok(BranchedPoint {
        point: end_point,
        log_value: log,
    })
}

/// Integer winding with the leftover of the raw angle sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingResult {
    /// Net turns about the origin.
    pub winding: i64,
    /// |angle sum − 2π·winding| in radians; must stay below π.
    pub residual: f64,
}

/// Winding number of an ordered closed loop of nonzero values.
///
/// The caller is responsible for sampling finely enough: any consecutive
/// pair (including last-to-first) separated by π/2 or more is rejected, not
/// guessed at.
pub fn winding_number(values: &[Complex64]) -> Result<WindingResult> {
    if values.len() < 2 {
        return Err(Error::TooFewSamples {
            min: 2,
            got: values.len(),
        });
    }
    for (index, v) in values.iter().enumerate() {
        if !is_nonzero_finite(*v) {
            return Err(Error::ZeroSample { index });
        }
    }
    let mut total = 0.0;
    for i in 0..values.len() {
        let a = values[i];
        let b = values[(i + 1) % values.len()];
        let step = (b / a).arg();
        if step.abs() >= MAX_STEP_ANGLE {
            return Err(Error::AngularSeparation {
                index: i,
                separation: step.abs(),
            });
        }
        total += step;
    }
    round_winding(total)
}

/// Winding number of a closed curve of values given by a callback on [0, 1),
/// with adaptive midpoint refinement. Returns the winding and the number of
/// evaluations used.
pub fn winding_number_adaptive(
    f: impl Fn(f64) -> Result<Complex64>,
    initial_samples: usize,
) -> Result<(WindingResult, usize)> {
    let n0 = initial_samples.max(MIN_PATH_SAMPLES);
    let mut nodes = Vec::with_capacity(n0);
    for i in 0..n0 {
        let t = i as f64 / n0 as f64;
        let v = f(t)?;
        if !is_nonzero_finite(v) {
            return Err(Error::ZeroSample { index: i });
        }
        nodes.push((t, v));
    }
    let mut used = n0;
    let mut total = 0.0;
    for i in 0..n0 {
        let (t0, v0) = nodes[i];
        let (t1, v1) = if i + 1 < n0 {
            nodes[i + 1]
        } else {
            (1.0, nodes[0].1)
        };
        total += segment_angle(&f, t0, v0, t1, v1, 0, &mut used)?;
    }
    round_winding(total).map(|w| (w, used))
}

fn segment_angle(
    f: &impl Fn(f64) -> Result<Complex64>,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    depth: u32,
    used: &mut usize,
) -> Result<f64> {
    let step = (v1 / v0).arg();
    if step.abs() < MAX_STEP_ANGLE {
        return Ok(step);
    }
    if depth >= MAX_REFINE_DEPTH {
        return Err(Error::RefinementExhausted {
            max_depth: MAX_REFINE_DEPTH,
        });
    }
    let tm = 0.5 * (t0 + t1);
    let vm = f(tm)?;
    *used += 1;
    if !is_nonzero_finite(vm) {
        return Err(Error::ZeroSample { index: *used });
    }
    Ok(segment_angle(f, t0, v0, tm, vm, depth + 1, used)?
        + segment_angle(f, tm, vm, t1, v1, depth + 1, used)?)
}

fn round_winding(total: f64) -> Result<WindingResult> {
    let winding = (total / (2.0 * PI)).round() as i64;
    let residual = (total - 2.0 * PI * winding as f64).abs();
    if residual >= PI {
        return Err(Error::WindingRejected { residual });
    }
    Ok(WindingResult { winding, residual })
}

pub(crate) fn is_nonzero_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite() && (z.re != 0.0 || z.im != 0.0)
}
