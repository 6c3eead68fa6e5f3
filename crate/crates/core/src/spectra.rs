//! Closed-form spatial Fourier transforms of the membrane velocity profiles.
//!
//! Each spectrum is normalized by the aperture size so it is dimensionless:
//!
//! * [`shape_spectrum_poly`]: `S(u) = ∫₋₁¹ e^{iut} (1 − t²)² dt`, the per-axis factor of the
//!   clamped polynomial profile.
//! * [`shape_spectrum_sinc`]: `sin(u)/u`, the transform of the rectangle window over `[−1, 1]`
//!   divided by its width.
//! * [`shape_spectrum_circ`]: `S_c(u) = 2 ∫₀¹ (1 − s²)² J₀(us) s ds = 16 J₃(u)/u³`, so that the
//!   2D transform of `(1 − r²/a²)²` on a disk of radius `a` is `πa²·S_c(k_r a)`.
//!
//! All three are even, finite everywhere and evaluated without cancellation near zero.

use thiserror::Error;

/// Below this magnitude the polynomial spectrum is evaluated from its Taylor series.
pub const POLY_TAYLOR_SWITCH: f64 = 0.5;

/// Below this magnitude the circular spectrum is evaluated from its power series.
const CIRC_SERIES_SWITCH: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("spectrum argument must be finite, got {0}")]
    Domain(f64),
}

/// Which one-dimensional (or axisymmetric) velocity factor a spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ShapeKind {
    /// `(1 − (x/a)²)²` along one axis.
    PolyClamped,
    /// Rectangle window, constant along one axis.
    RectWindow,
    /// Axisymmetric `(1 − r²/a²)²`.
    CircPolyClamped,
}

impl ShapeKind {
    pub fn spectrum(self, u: f64) -> Result<f64, SpectrumError> {
        match self {
            ShapeKind::PolyClamped => shape_spectrum_poly(u),
            ShapeKind::RectWindow => shape_spectrum_sinc(u),
            ShapeKind::CircPolyClamped => shape_spectrum_circ(u),
        }
    }

    /// Value of the spectrum at zero, i.e. the mean of the profile over its support
    /// times the support measure normalization used above.
    pub fn at_zero(self) -> f64 {
        match self {
            ShapeKind::PolyClamped => 16.0 / 15.0,
            ShapeKind::RectWindow => 1.0,
            ShapeKind::CircPolyClamped => 1.0 / 3.0,
        }
    }
}

fn check(u: f64) -> Result<f64, SpectrumError> {
    if u.is_finite() {
        Ok(u.abs())
    } else {
        Err(SpectrumError::Domain(u))
    }
}

/// Spectrum of the clamped polynomial axis factor.
pub fn shape_spectrum_poly(u: f64) -> Result<f64, SpectrumError> {
    check(u).map(poly)
}

/// Unnormalized sinc, `sin(u)/u` with `sinc(0) = 1`.
pub fn shape_spectrum_sinc(u: f64) -> Result<f64, SpectrumError> {
    check(u).map(sinc)
}

/// Spectrum of the axisymmetric clamped profile.
pub fn shape_spectrum_circ(u: f64) -> Result<f64, SpectrumError> {
    check(u).map(circ)
}

// Taylor coefficients of S(u): (-1)^n 16 / ((2n)! (2n+1)(2n+3)(2n+5)), n = 0..=6.
const POLY_TAYLOR: [f64; 7] = [
    16.0 / 15.0,
    -16.0 / 210.0,
    16.0 / 7560.0,
    -16.0 / 498_960.0,
    16.0 / 51_891_840.0,
    -16.0 / 7_783_776_000.0,
    16.0 / 1_587_890_304_000.0,
];

/// Unchecked polynomial spectrum for finite arguments.
#[inline]
pub(crate) fn poly(u: f64) -> f64 {
    let u = u.abs();
    if u < POLY_TAYLOR_SWITCH {
        poly_taylor(u)
    } else {
        poly_closed(u)
    }
}

#[inline]
pub(crate) fn poly_taylor(u: f64) -> f64 {
    let u2 = u * u;
    POLY_TAYLOR.iter().rev().fold(0.0, |acc, &c| acc * u2 + c)
}

#[inline]
pub(crate) fn poly_closed(u: f64) -> f64 {
    let (s, c) = u.sin_cos();
    let u2 = u * u;
    -16.0 * (3.0 * u * c + (u2 - 3.0) * s) / (u2 * u2 * u)
}

#[inline]
pub(crate) fn sinc(u: f64) -> f64 {
    let u = u.abs();
    if u < 1e-4 {
        // 1 − u²/6 + u⁴/120 is exact to double precision here.
        let u2 = u * u;
        1.0 - u2 / 6.0 * (1.0 - u2 / 20.0)
    } else {
        u.sin() / u
    }
}

#[inline]
pub(crate) fn circ(u: f64) -> f64 {
    let u = u.abs();
    if u < CIRC_SERIES_SWITCH {
        circ_series(u)
    } else {
        16.0 * libm::jn(3, u) / (u * u * u)
    }
}

/// 16 J₃(u)/u³ = 2 Σ (−u²/4)^m / (m! (m+3)!).
fn circ_series(u: f64) -> f64 {
    let q = -0.25 * u * u;
    let mut term = 1.0 / 6.0;
    let mut sum = term;
    for m in 1..40 {
        term *= q / (m as f64 * (m + 3) as f64);
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    2.0 * sum
}
