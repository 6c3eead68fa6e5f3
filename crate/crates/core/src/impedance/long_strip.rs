//! Power integrals of the long-strip kernel `S²(ka·ξ)·sinc²(kb·η)`.
//!
//! Here `(ξ, η) = (t cos φ, t sin φ)` are wavenumber components in units of `k`. In polar
//! form the evanescent integrand oscillates in both `t` and `φ` and the sinc² factor makes
//! the radial tail decay only like `t⁻³`. In Cartesian form the oscillation is confined to
//! `η`, and the `η` tail can be split into a non-oscillating mean with a closed-form
//! integral plus an oscillating part handled by integration by parts.
//!
//! Propagating part (`ξ² + η² < 1`), with `ξ = sin α`, `η = cos α sin θ`:
//!
//! ```text
//! I_R = 4 ∫₀^{π/2} cos α S²(ka sin α) ∫₀^{π/2} sinc²(kb cos α sin θ) dθ dα
//! ```
//!
//! Evanescent part (`ξ² + η² > 1`), with `c = 1 − ξ²`:
//!
//! ```text
//! I_X = 4 ∫₀^∞ S²(ka ξ) H(ξ) dξ,   H(ξ) = ∫_{√max(c,0)}^∞ sinc²(kb η) / √(η² − c) dη
//! ```
//!
//! `ξ = cos α` on `[0, 1]` and `ξ = cosh w` beyond it absorb the logarithmic singularity of
//! `H` at `ξ = 1`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::quadrature::{adaptive_core, InnerStats, QuadError, QuadratureResult, TailModel, Tolerance};
use crate::spectra::{poly, sinc};

/// `|S(u)| ≤ 64/u³` for all `u > 0`.
const POLY_DECAY: f64 = 64.0;

/// Outer adaptive integral whose integrand is `weight(x)·inner(x)`, accounting for the
/// inner integration errors. `f` receives the inner tolerance already divided by the
/// weight, so every weighted inner error is either below `inner_abs` or relative.
fn nested_outer<W, F>(
    lo: f64,
    hi: f64,
    tol: &Tolerance,
    inner: &Tolerance,
    weight: W,
    mut f: F,
) -> Result<QuadratureResult, QuadError>
where
    W: Fn(f64) -> f64,
    F: FnMut(f64, &Tolerance) -> Result<QuadratureResult, QuadError>,
{
    let inner_abs = inner.abs;
    let outer_tol = Tolerance {
        rel: 0.5 * tol.rel,
        abs: 0.5 * tol.abs,
        max_subdivisions: tol.max_subdivisions,
    };
    let mut stats = InnerStats::new();
    let outer = adaptive_core(
        |x| {
            let w = weight(x);
            let scaled = Tolerance {
                abs: inner_abs / w.abs().max(1.0),
                ..*inner
            };
            let r = f(x, &scaled)?;
            let weighted = QuadratureResult {
                value: w * r.value,
                error_estimate: w.abs() * r.error_estimate,
                ..r
            };
            stats.record(&weighted, inner_abs);
            Ok(weighted.value)
        },
        lo,
        hi,
        &outer_tol,
    )?;
    let inner_error = (hi - lo) * stats.floor_error + stats.rel_error * outer.abs_value;
    let error = outer.result.error_estimate + inner_error;
    Ok(QuadratureResult {
        value: outer.result.value,
        error_estimate: error,
        evaluations: outer.result.evaluations + stats.evaluations,
        converged: outer.result.converged && stats.all_converged && error <= tol.target(outer.result.value),
    })
}

fn inner_tolerance(tol: &Tolerance, span: f64) -> Tolerance {
    Tolerance {
        rel: 0.1 * tol.rel,
        abs: 0.1 * tol.abs / span,
        max_subdivisions: tol.max_subdivisions,
    }
}

/// `I_R` for spectrum scales `ka` (polynomial axis) and `kb` (window axis).
pub(crate) fn propagating(ka: f64, kb: f64, tol: &Tolerance) -> Result<QuadratureResult, QuadError> {
    let part = Tolerance {
        abs: tol.abs / 4.0,
        ..*tol
    };
    let itol = inner_tolerance(&part, FRAC_PI_2);
    let weight = |alpha: f64| {
        let (s, c) = alpha.sin_cos();
        let sx = poly(ka * s);
        c * sx * sx
    };
    let r = nested_outer(0.0, FRAC_PI_2, &part, &itol, weight, |alpha, t| {
        let scale = kb * alpha.cos();
        let inner = adaptive_core(
            |theta| {
                let v = sinc(scale * theta.sin());
                Ok(v * v)
            },
            0.0,
            FRAC_PI_2,
            t,
        )?;
        Ok(inner.result)
    })?;
    Ok(scale_result(r, 4.0, tol))
}

fn scale_result(r: QuadratureResult, factor: f64, tol: &Tolerance) -> QuadratureResult {
    let value = factor * r.value;
    let error = factor * r.error_estimate;
    QuadratureResult {
        value,
        error_estimate: error,
        evaluations: r.evaluations,
        converged: r.converged && error <= tol.target(value),
    }
}

/// Closed-form and integrated-by-parts tail of `∫_{η₁}^∞ sinc²(kb η)/√(η² − c) dη`.
///
/// With `sinc²(kb η) = (1 − cos 2kbη)/(2kb²η²)` and `h(η) = 1/(2kb² η² √(η² − c))`, the
/// mean is `∫h = 1/(2kb² η₁(η₁ + √(η₁² − c)))` and the oscillating part is expanded to two
/// terms. Returns the tail value and a bound `h''(η₁)/(4kb³)` on what was left out.
pub(crate) fn eta_tail(kb: f64, c: f64, eta: f64) -> (f64, f64) {
    let q = eta * eta - c;
    let sq = q.sqrt();
    let k2 = 2.0 * kb * kb;
    let mean = 1.0 / (k2 * eta * (eta + sq));
    let h = 1.0 / (k2 * eta * eta * sq);
    let dh = -(2.0 / (eta.powi(3) * sq) + 1.0 / (eta * q * sq)) / k2;
    let d2h = (6.0 / (eta.powi(4) * sq) + 3.0 / (eta * eta * q * sq) + 3.0 / (q * q * sq)) / k2;
    let (s2, c2) = (2.0 * kb * eta).sin_cos();
    let value = mean + h * s2 / (2.0 * kb) + dh * c2 / (4.0 * kb * kb);
    (value, d2h / (4.0 * kb.powi(3)))
}

/// `H` for `c = s0²` (`above == false`, `ξ < 1`) or `c = −s0²` (`above == true`, `ξ > 1`).
pub(crate) fn evanescent_inner(kb: f64, s0: f64, above: bool, tol: &Tolerance) -> Result<QuadratureResult, QuadError> {
    let c = if above { -s0 * s0 } else { s0 * s0 };
    let to_param = |eta: f64| {
        if above {
            (eta / s0).asinh()
        } else {
            (eta / s0).max(1.0).acosh()
        }
    };
    // The numeric segments get 90% of the budget, the closed-form tail the rest.
    let seg_tol = Tolerance {
        rel: 0.9 * tol.rel,
        abs: 0.9 * tol.abs,
        ..*tol
    };
    let segment = |eta_lo: f64, eta_hi: f64| {
        adaptive_core(
            |s| {
                let eta = if above { s0 * s.sinh() } else { s0 * s.cosh() };
                let v = sinc(kb * eta);
                Ok(v * v)
            },
            to_param(eta_lo),
            to_param(eta_hi),
            &seg_tol,
        )
        .map(|e| e.result)
    };

    // For η ≫ s0 the bound is about 1.5/(kb⁵ η⁵).
    let eps0 = if tol.abs > 0.0 { 0.1 * tol.abs } else { f64::INFINITY };
    // Below ξ = 1 the tail expansion needs distance from the singularity at η = s0; above
    // it `√(η² + s0²)` is smooth and starting early avoids integrating needless oscillations.
    let clearance = if above { 1.0 } else { 1.0f64.max(1.25 * s0) };
    let mut eta1 = clearance.max((1.5 / (kb.powi(5) * eps0)).powf(0.2));
    let eta_lo = if above { 0.0 } else { s0 };
    let first = segment(eta_lo, eta1)?;
    let mut numeric = first.value;
    let mut error = first.error_estimate;
    let mut evaluations = first.evaluations;
    let mut converged = first.converged;
    let (mut tail, mut bound) = eta_tail(kb, c, eta1);
    let mut doublings = 0;
    while bound > 0.1 * tol.target(numeric + tail) {
        if doublings >= 40 {
            converged = false;
            break;
        }
        let next = 2.0 * eta1;
        let seg = segment(eta1, next)?;
        numeric += seg.value;
        error += seg.error_estimate;
        evaluations += seg.evaluations;
        converged &= seg.converged;
        eta1 = next;
        (tail, bound) = eta_tail(kb, c, eta1);
        doublings += 1;
    }
    let value = numeric + tail;
    let error = error + bound;
    Ok(QuadratureResult {
        value,
        error_estimate: error,
        evaluations,
        converged: converged && error <= tol.target(value),
    })
}

/// `I_X` for spectrum scales `ka` (polynomial axis) and `kb` (window axis).
pub(crate) fn evanescent(ka: f64, kb: f64, tol: &Tolerance) -> Result<QuadratureResult, QuadError> {
    let part = Tolerance {
        abs: tol.abs / 8.0,
        ..*tol
    };

    // ξ ∈ (0, 1): ξ = cos α.
    let itol_below = inner_tolerance(&part, FRAC_PI_2);
    let weight_below = |alpha: f64| {
        let (s, c) = alpha.sin_cos();
        let sx = poly(ka * c);
        s * sx * sx
    };
    let below = nested_outer(0.0, FRAC_PI_2, &part, &itol_below, weight_below, |alpha, t| {
        evanescent_inner(kb, alpha.sin(), false, t)
    })?;

    // ξ > 1: ξ = cosh w, truncated at ξ_max. H(ξ) ≤ π/(2kb√(ξ² − 1)), |S(u)| ≤ 64/u³.
    let tail = TailModel::PowerLaw {
        coef: POLY_DECAY.powi(2) * PI / (2.0 * kb * ka.powi(6)),
        power: 7.0,
    };
    let upper = |w_lo: f64, w_hi: f64| {
        let itol = inner_tolerance(&part, w_hi - w_lo);
        let weight = |w: f64| {
            let sx = poly(ka * w.cosh());
            w.sinh() * sx * sx
        };
        nested_outer(w_lo, w_hi, &part, &itol, weight, |w, t| {
            evanescent_inner(kb, w.sinh(), true, t)
        })
    };
    let eps = 0.1 * part.abs.max(f64::MIN_POSITIVE);
    let mut xi_max = tail.truncation_radius(2.0, eps).unwrap_or(1e12).min(1e12);
    let mut w_hi = xi_max.acosh();
    let first = upper(0.0, w_hi)?;
    let mut above = first;
    let mut bound = tail.remainder_bound(xi_max);
    let mut extensions = 0;
    let mut truncated = true;
    while bound > 0.1 * part.target(below.value + above.value) {
        if extensions >= 16 || xi_max >= 1e12 {
            truncated = false;
            break;
        }
        let target = 0.1 * part.target(below.value + above.value);
        let next = tail.truncation_radius(2.0 * xi_max, target).unwrap_or(1e12).min(1e12);
        let seg = upper(w_hi, next.acosh())?;
        above.value += seg.value;
        above.error_estimate += seg.error_estimate;
        above.evaluations += seg.evaluations;
        xi_max = next;
        w_hi = next.acosh();
        bound = tail.remainder_bound(xi_max);
        extensions += 1;
    }

    // The pieces carry their own error estimates, and a small piece can miss a relative
    // target that the sum meets easily, so convergence is judged on the total.
    let combined = QuadratureResult {
        value: below.value + above.value,
        error_estimate: below.error_estimate + above.error_estimate + bound,
        evaluations: below.evaluations + above.evaluations,
        converged: truncated,
    };
    Ok(scale_result(combined, 4.0, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference_h(kb: f64, c: f64, eta_hi: f64) -> f64 {
        // Brute-force H on [lower, eta_hi] plus the closed-form mean beyond; the oscillating
        // remainder beyond eta_hi is below 1/(2 kb³ eta_hi³).
        let lower = c.max(0.0).sqrt();
        let param = |eta: f64| {
            if c > 0.0 {
                (eta / lower).acosh()
            } else {
                (eta / (-c).sqrt()).asinh()
            }
        };
        let sub = |s: f64| {
            let eta = if c > 0.0 {
                lower * s.cosh()
            } else {
                (-c).sqrt() * s.sinh()
            };
            let v = sinc(kb * eta);
            v * v
        };
        let t = Tolerance {
            rel: 1e-13,
            abs: 1e-15,
            max_subdivisions: 200_000,
        };
        let num = crate::quadrature::integrate_adaptive(sub, param(lower), param(eta_hi), t).unwrap();
        let q = eta_hi * eta_hi - c;
        num.value + 1.0 / (2.0 * kb * kb * eta_hi * (eta_hi + q.sqrt()))
    }

    #[test]
    fn eta_tail_derivatives_match_finite_differences() {
        let (kb, c) = (1.7, 0.3);
        let h = |eta: f64| 1.0 / (2.0 * kb * kb * eta * eta * (eta * eta - c).sqrt());
        let eta = 2.3;
        let step = 1e-4;
        let d2_fd = (h(eta + step) - 2.0 * h(eta) + h(eta - step)) / (step * step);
        let (_, bound) = eta_tail(kb, c, eta);
        assert_relative_eq!(bound * 4.0 * kb.powi(3), d2_fd, max_relative = 1e-5);
    }

    #[test]
    fn evanescent_inner_matches_brute_force() {
        let tol = Tolerance {
            rel: 1e-11,
            abs: 1e-14,
            max_subdivisions: 4000,
        };
        for &(kb, s0, above) in &[
            (0.8, 0.6, false),
            (0.8, 0.6, true),
            (5.0, 0.05, false),
            (5.0, 2.0, true),
        ] {
            let c: f64 = if above { -s0 * s0 } else { s0 * s0 };
            let got = evanescent_inner(kb, s0, above, &tol).unwrap();
            assert!(got.converged);
            let want = reference_h(kb, c, 4000.0);
            assert_relative_eq!(got.value, want, max_relative = 2e-8);
        }
    }

    #[test]
    fn default_tolerance_is_met_at_the_extremes() {
        // Tiny ka: inner weights sinh(w)·S² reach the thousands. Long strip at ka 4: kb = 100.
        use crate::impedance::{rect1d_impedance, RadiatorSpec};
        for &(aspect, ka) in &[(1.0, 0.01), (1.0, 0.0122), (10.0, 0.01), (25.0, 4.0)] {
            let spec = RadiatorSpec::rect1d(1.0, aspect).unwrap();
            let z = rect1d_impedance(&spec, ka, Tolerance::default()).unwrap();
            assert!(
                z.converged,
                "aspect {aspect} ka {ka}: x error {:e} on {}",
                z.x_error, z.x
            );
        }
    }
}
