//! Reference computations shared by the integration tests. Nothing here calls the
//! library's quadrature or spectra, so agreement is evidence, not tautology.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss-Legendre rule with `panels` equal panels of `rule`.
pub fn composite(rule: &[(f64, f64)], lo: f64, hi: f64, panels: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let h = (hi - lo) / panels as f64;
    let mut sum = 0.0;
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for &(x, w) in rule {
            sum += w * f(mid + 0.5 * h * x);
        }
    }
    0.5 * h * sum
}

/// Bessel J0 from its integral representation; the trapezoid rule on a periodic integrand
/// converges geometrically.
pub fn bessel_j0(x: f64) -> f64 {
    // J₀(x) = (1/π)∫₀^π cos(x sin θ) dθ, with an integrand of period π.
    let n = 64 + (2.0 * x.abs()) as usize;
    let h = PI / n as f64;
    (0..n).map(|i| (x * (i as f64 * h).sin()).cos()).sum::<f64>() / n as f64
}

/// `∫₋₁¹ cos(u t)(1 − t²)² dt`, the polynomial spectrum from its definition.
pub fn poly_spectrum_reference(u: f64) -> f64 {
    let rule = gauss_legendre(20);
    let panels = 8 + (u.abs() * 2.0) as usize;
    composite(&rule, -1.0, 1.0, panels, |t| (u * t).cos() * (1.0 - t * t).powi(2))
}

/// `2∫₀¹ (1 − s²)² J₀(u s) s ds`, the circular spectrum from its definition.
pub fn circ_spectrum_reference(u: f64) -> f64 {
    let rule = gauss_legendre(20);
    let panels = 8 + (u.abs() * 2.0) as usize;
    2.0 * composite(&rule, 0.0, 1.0, panels, |s| {
        (1.0 - s * s).powi(2) * bessel_j0(u * s) * s
    })
}

/// Autocorrelation of the clamped profile `(1 − x²)²` on [-1, 1] at lag `s`, exact by
/// Gauss-Legendre (the integrand is a polynomial of degree 8).
pub fn poly_autocorrelation(s: f64) -> f64 {
    let s = s.abs();
    if s >= 2.0 {
        return 0.0;
    }
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    let rule = RULE.get_or_init(|| gauss_legendre(6));
    composite(rule, -1.0, 1.0 - s, 1, |x| {
        (1.0 - x * x).powi(2) * (1.0 - (x + s) * (x + s)).powi(2)
    })
}

/// Autocorrelation of the unit window on [-b, b].
pub fn window_autocorrelation(s: f64, b: f64) -> f64 {
    (2.0 * b - s.abs()).max(0.0)
}

/// Normalized impedance of a separable profile on [-1, 1] × [-b, b] from the spatial
/// autocorrelation `C(s)` of the velocity:
///
/// `z = (jk / 2π) ∬ C(s) e^{−jk|s|}/|s| d²s / C(0)`, evaluated in polar lag coordinates
/// where the `1/|s|` cancels against the Jacobian.
pub fn autocorrelation_impedance(ka: f64, b: f64, cy: impl Fn(f64) -> f64) -> (f64, f64) {
    let c = |sx: f64, sy: f64| poly_autocorrelation(sx) * cy(sy);
    let rule = gauss_legendre(16);
    let kink = (b / 1.0).atan();
    let radial = |theta: f64| {
        let (st, ct) = theta.sin_cos();
        let rho_max = (2.0 / ct.max(1e-300)).min(2.0 * b / st.max(1e-300));
        let panels = 4 + (ka * rho_max / 2.0) as usize;
        let h = rho_max / panels as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for &(x, w) in &rule {
                let rho = mid + 0.5 * h * x;
                let (sn, cs) = (ka * rho).sin_cos();
                let cw = w * c(rho * ct, rho * st);
                re += cw * sn;
                im += cw * cs;
            }
        }
        (0.5 * h * re, 0.5 * h * im)
    };
    let mut re = 0.0;
    let mut im = 0.0;
    let theta_panels = 24 + (ka * b) as usize;
    for (lo, hi) in [(0.0, kink), (kink, 0.5 * PI)] {
        let h = (hi - lo) / theta_panels as f64;
        for p in 0..theta_panels {
            let mid = lo + (p as f64 + 0.5) * h;
            for &(x, w) in &rule {
                let (r, i) = radial(mid + 0.5 * h * x);
                re += 0.5 * h * w * r;
                im += 0.5 * h * w * i;
            }
        }
    }
    let c0 = c(0.0, 0.0);
    // Four quadrants of lag space.
    let scale = 4.0 * ka / (2.0 * PI * c0);
    (scale * re, scale * im)
}

pub fn rect2d_reference(ka: f64, aspect: f64) -> (f64, f64) {
    autocorrelation_impedance(ka, aspect, |sy| aspect * poly_autocorrelation(sy / aspect))
}

pub fn rect1d_reference(ka: f64, aspect: f64) -> (f64, f64) {
    autocorrelation_impedance(ka, aspect, |sy| window_autocorrelation(sy, aspect))
}
