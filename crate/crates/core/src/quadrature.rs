//! Adaptive Gauss–Kronrod integration and the two polar transforms used by the
//! wavenumber-space power integrals.
//!
//! [`integrate_adaptive`] is a global-bisection integrator built on the 10/21-point
//! Gauss–Kronrod pair with the usual QUADPACK error rescaling.
//!
//! [`integrate_inner_disk`] evaluates `∫₀^{2π} ∫₀¹ g(t, φ) t/√(1 − t²) dt dφ` through
//! `t = sin θ`, which turns the weight into `sin θ dθ`.
//!
//! [`integrate_outer_tail`] evaluates `∫₀^{2π} ∫₁^∞ g(t, φ) t/√(t² − 1) dt dφ` through
//! `t = cosh ψ` (weight becomes `cosh ψ dψ`), truncated at a radius chosen from a
//! caller-supplied [`TailModel`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_PI_2, PI};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid tolerance: rel = {rel}, abs = {abs}, max_subdivisions = {max_subdivisions}")]
    InvalidTolerance {
        rel: f64,
        abs: f64,
        max_subdivisions: usize,
    },
    #[error("invalid integration interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("integrand is not finite at {at}")]
    NonFinite { at: f64 },
    #[error("invalid tail model: {0}")]
    InvalidTail(String),
}

/// Error targets for an integration: converged when the estimate is at most
/// `max(abs, rel·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_subdivisions: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-6,
            abs: 1e-9,
            max_subdivisions: 1000,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_subdivisions: usize) -> Result<Self, QuadError> {
        let tol = Tolerance {
            rel,
            abs,
            max_subdivisions,
        };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        let ok = self.rel > 0.0
            && self.rel.is_finite()
            && self.abs >= 0.0
            && self.abs.is_finite()
            && self.max_subdivisions >= 1;
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidTolerance {
                rel: self.rel,
                abs: self.abs,
                max_subdivisions: self.max_subdivisions,
            })
        }
    }

    /// Acceptable absolute error for an integral of the given magnitude.
    #[inline]
    pub fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }

    fn tightened(&self, rel_factor: f64, abs: f64) -> Tolerance {
        Tolerance {
            rel: self.rel * rel_factor,
            abs,
            max_subdivisions: self.max_subdivisions,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// How much of the φ range the nested integrators actually visit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiSymmetry {
    /// Integrate over the full `[0, 2π]`.
    Full,
    /// `g` is even in `cos φ` and in `sin φ`: integrate `[0, π/2]` and multiply by 4.
    Quadrant,
    /// `g` does not depend on `φ`: the angular integral is `2π·g(t, 0)`.
    Axisymmetric,
}

impl PhiSymmetry {
    fn span(self) -> (f64, f64) {
        match self {
            PhiSymmetry::Full => (2.0 * PI, 1.0),
            PhiSymmetry::Quadrant => (FRAC_PI_2, 4.0),
            PhiSymmetry::Axisymmetric => (0.0, 2.0 * PI),
        }
    }
}

/// Large-`t` behaviour of the angular integral `G(t) = ∫₀^{2π} g(t, φ) dφ`, used to pick
/// the truncation radius of [`integrate_outer_tail`] and to account for what lies beyond it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// `|G(t)| ≤ coef·t^{−power}` for `t ≥ 1` (`power > 1`); the remainder is dropped.
    PowerLaw { coef: f64, power: f64 },
    /// `|G(t)| ≤ coef·e^{−rate (t − 1)}`; the remainder is dropped.
    Exponential { coef: f64, rate: f64 },
    /// `G(t) = coef·t^{−power}·(1 − cos(2·frequency·t))` for large `t`, the shape produced by
    /// a squared sinc. The non-oscillating mean is integrated to infinity and added; the
    /// oscillating part is bounded by the second mean value theorem.
    OscillatingPowerLaw { coef: f64, power: f64, frequency: f64 },
}

impl TailModel {
    fn validate(&self) -> Result<(), QuadError> {
        let ok = match *self {
            TailModel::PowerLaw { coef, power } => coef >= 0.0 && coef.is_finite() && power > 1.0,
            TailModel::Exponential { coef, rate } => coef >= 0.0 && coef.is_finite() && rate > 0.0 && rate.is_finite(),
            TailModel::OscillatingPowerLaw { coef, power, frequency } => {
                coef >= 0.0 && coef.is_finite() && power > 1.0 && frequency > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(QuadError::InvalidTail(format!("{self:?}")))
        }
    }

    /// Bound on the part of `∫_T^∞ G(t) t/√(t² − 1) dt` that is not accounted for by
    /// [`TailModel::mean_tail`].
    pub fn remainder_bound(&self, t: f64) -> f64 {
        let w = t / (t * t - 1.0).sqrt();
        match *self {
            TailModel::PowerLaw { coef, power } => w * coef * t.powf(1.0 - power) / (power - 1.0),
            TailModel::Exponential { coef, rate } => w * coef * (-rate * (t - 1.0)).exp() / rate,
            TailModel::OscillatingPowerLaw { coef, power, frequency } => w * coef * t.powf(-power) / frequency,
        }
    }

    /// Analytic contribution of the tail beyond `t` that is added to the truncated integral.
    pub fn mean_tail(&self, t: f64) -> Result<f64, QuadError> {
        match *self {
            TailModel::PowerLaw { .. } | TailModel::Exponential { .. } => Ok(0.0),
            TailModel::OscillatingPowerLaw { coef, power, .. } => {
                // ∫_T^∞ t^{−p} t/√(t²−1) dt with t = T/s.
                let inner = integrate_adaptive(
                    |s| s.powf(power - 2.0) / (1.0 - (s / t).powi(2)).sqrt(),
                    0.0,
                    1.0,
                    Tolerance {
                        rel: 1e-12,
                        abs: 0.0,
                        max_subdivisions: 200,
                    },
                )?;
                Ok(coef * t.powf(1.0 - power) * inner.value)
            }
        }
    }

    /// Smallest doubling of `start` for which the remainder bound drops below `eps`.
    pub(crate) fn truncation_radius(&self, start: f64, eps: f64) -> Option<f64> {
        let mut t = start.max(2.0);
        for _ in 0..200 {
            if self.remainder_bound(t) <= eps {
                return Some(t);
            }
            t *= 2.0;
        }
        None
    }
}

// 21-point Kronrod nodes (descending) with the 10-point Gauss weights on the odd nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
    abs_value: f64,
}

// Max-heap on error; equal errors pop the segment closer to the lower limit first.
impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk21<F>(f: &mut F, lo: f64, hi: f64) -> Result<Segment, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut sample = |x: f64| -> Result<f64, QuadError> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { at: x })
        }
    };

    let fc = sample(center)?;
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = sample(center - dx)?;
        let f2 = sample(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let h = half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs * h, res_asc * h);
    Ok(Segment {
        lo,
        hi,
        value: res_k * half,
        error,
        abs_value: res_abs * h,
    })
}

/// Internal result carrying `∫|f|` alongside the usual fields.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extended {
    pub result: QuadratureResult,
    pub abs_value: f64,
}

pub(crate) fn adaptive_core<F>(mut f: F, lo: f64, hi: f64, tol: &Tolerance) -> Result<Extended, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    tol.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(QuadError::InvalidInterval { lo, hi });
    }

    let first = gk21(&mut f, lo, hi)?;
    let mut evaluations: u64 = 21;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Segment> = Vec::new();
    let mut value = first.value;
    let mut error = first.error;
    heap.push(first);

    let mut subdivisions = 1;
    while error > tol.target(value) && subdivisions < tol.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.lo + worst.hi);
        let width = worst.hi - worst.lo;
        if width <= 100.0 * f64::EPSILON * worst.lo.abs().max(worst.hi.abs()).max(f64::MIN_POSITIVE) {
            // Cannot be resolved any further in double precision.
            frozen.push(worst);
            continue;
        }
        let left = gk21(&mut f, worst.lo, mid)?;
        let right = gk21(&mut f, mid, worst.hi)?;
        evaluations += 42;
        subdivisions += 1;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    let mut segments: Vec<Segment> = heap.into_vec();
    segments.extend(frozen);
    segments.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    let abs_value: f64 = segments.iter().map(|s| s.abs_value).sum();
    Ok(Extended {
        result: QuadratureResult {
            value,
            error_estimate: error,
            evaluations,
            converged: error <= tol.target(value),
        },
        abs_value,
    })
}

/// Adaptive integration of `f` over `[lo, hi]`.
///
/// Running out of subdivisions is not an error: the best estimate comes back with
/// `converged == false`. A non-finite sample aborts with [`QuadError::NonFinite`].
pub fn integrate_adaptive<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<QuadratureResult, QuadError>
where
    F: Fn(f64) -> f64,
{
    adaptive_core(|x| Ok(f(x)), lo, hi, &tol).map(|e| e.result)
}

/// Same as [`integrate_adaptive`] for integrands that can fail.
pub fn try_integrate_adaptive<F>(f: F, lo: f64, hi: f64, tol: Tolerance) -> Result<QuadratureResult, QuadError>
where
    F: FnMut(f64) -> Result<f64, QuadError>,
{
    adaptive_core(f, lo, hi, &tol).map(|e| e.result)
}

/// Bookkeeping for inner integrals of a nested integration.
#[derive(Debug, Default)]
pub(crate) struct InnerStats {
    pub evaluations: u64,
    pub all_converged: bool,
    /// Largest inner error that was within the absolute floor.
    pub floor_error: f64,
    /// Largest inner error relative to its own magnitude, for the others.
    pub rel_error: f64,
}

impl InnerStats {
    pub fn new() -> Self {
        InnerStats {
            all_converged: true,
            ..Default::default()
        }
    }

    pub fn record(&mut self, r: &QuadratureResult, abs_floor: f64) {
        self.evaluations += r.evaluations;
        self.all_converged &= r.converged;
        if r.error_estimate <= abs_floor {
            self.floor_error = self.floor_error.max(r.error_estimate);
        } else if r.value != 0.0 {
            self.rel_error = self.rel_error.max(r.error_estimate / r.value.abs());
        } else {
            self.floor_error = self.floor_error.max(r.error_estimate);
        }
    }
}

/// `mult · ∫_{φ-span} ∫_{lo}^{hi} h(s, φ) ds dφ` with the angular integral outermost.
fn nested<H>(h: &H, lo: f64, hi: f64, symmetry: PhiSymmetry, tol: &Tolerance) -> Result<QuadratureResult, QuadError>
where
    H: Fn(f64, f64) -> f64,
{
    let (range, mult) = symmetry.span();
    if symmetry == PhiSymmetry::Axisymmetric {
        let inner_tol = tol.tightened(1.0, tol.abs / mult);
        let r = integrate_adaptive(|s| h(s, 0.0), lo, hi, inner_tol)?;
        return Ok(QuadratureResult {
            value: mult * r.value,
            error_estimate: mult * r.error_estimate,
            evaluations: r.evaluations,
            converged: r.converged && mult * r.error_estimate <= tol.target(mult * r.value),
        });
    }

    let inner_abs = 0.1 * tol.abs / (mult * range);
    let inner_tol = tol.tightened(0.1, inner_abs);
    let outer_tol = tol.tightened(0.5, 0.5 * tol.abs / mult);
    let mut stats = InnerStats::new();
    let outer = adaptive_core(
        |phi| {
            let r = integrate_adaptive(|s| h(s, phi), lo, hi, inner_tol)?;
            stats.record(&r, inner_abs);
            Ok(r.value)
        },
        0.0,
        range,
        &outer_tol,
    )?;
    let inner_error = range * stats.floor_error + stats.rel_error * outer.abs_value;
    let value = mult * outer.result.value;
    let error = mult * (outer.result.error_estimate + inner_error);
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations: outer.result.evaluations + stats.evaluations,
        converged: outer.result.converged && stats.all_converged && error <= tol.target(value),
    })
}

/// `∫₀^{2π} ∫₀¹ g(t, φ) t/√(1 − t²) dt dφ`.
pub fn integrate_inner_disk<G>(g: G, symmetry: PhiSymmetry, tol: Tolerance) -> Result<QuadratureResult, QuadError>
where
    G: Fn(f64, f64) -> f64,
{
    let h = |theta: f64, phi: f64| {
        let t = theta.sin();
        g(t, phi) * t
    };
    nested(&h, 0.0, FRAC_PI_2, symmetry, &tol)
}

/// `∫₀^{2π} ∫₁^∞ g(t, φ) t/√(t² − 1) dt dφ`.
///
/// The radial range is cut at the first radius where the [`TailModel`] remainder bound
/// falls below a tenth of the error target; the bound is added to the error estimate.
pub fn integrate_outer_tail<G>(
    g: G,
    tail: TailModel,
    symmetry: PhiSymmetry,
    tol: Tolerance,
) -> Result<QuadratureResult, QuadError>
where
    G: Fn(f64, f64) -> f64,
{
    tol.validate()?;
    tail.validate()?;
    let h = |psi: f64, phi: f64| {
        let t = psi.cosh();
        g(t, phi) * t
    };

    const MAX_RADIUS: f64 = 1e12;
    let mut radius = if tol.abs > 0.0 {
        tail.truncation_radius(2.0, 0.1 * tol.abs)
            .unwrap_or(MAX_RADIUS)
            .min(MAX_RADIUS)
    } else {
        8.0
    };
    let mut psi_hi = radius.acosh();
    let first = nested(&h, 0.0, psi_hi, symmetry, &tol)?;
    let mut value = first.value;
    let mut error = first.error_estimate;
    let mut evaluations = first.evaluations;
    let mut converged = first.converged;

    let mut bound = tail.remainder_bound(radius);
    let mut extensions = 0;
    while bound > 0.1 * tol.target(value) {
        if radius >= MAX_RADIUS || extensions >= 16 {
            converged = false;
            break;
        }
        let next = tail
            .truncation_radius(2.0 * radius, 0.1 * tol.target(value))
            .unwrap_or(MAX_RADIUS)
            .min(MAX_RADIUS);
        let next_psi = next.acosh();
        let seg = nested(&h, psi_hi, next_psi, symmetry, &tol)?;
        value += seg.value;
        error += seg.error_estimate;
        evaluations += seg.evaluations;
        converged &= seg.converged;
        radius = next;
        psi_hi = next_psi;
        bound = tail.remainder_bound(radius);
        extensions += 1;
    }

    value += tail.mean_tail(radius)?;
    error += bound;
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations,
        converged: converged && error <= tol.target(value),
    })
}
