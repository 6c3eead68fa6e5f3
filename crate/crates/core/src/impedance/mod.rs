//! Normalized radiation impedance of clamped radiators from their wavenumber spectra.
//!
//! The radiated complex power of a baffled planar source with velocity spectrum `V(k_x, k_y)`
//! is `P = ρck/(4π²) ∬ |V|²/k_z dk_x dk_y`. Writing `k_x = kt cos φ`, `k_y = kt sin φ` splits
//! it into a propagating disk (`t < 1`, real `k_z`, resistance) and an evanescent tail
//! (`t > 1`, imaginary `k_z`, reactance). Impedance is power over the squared RMS velocity,
//! then divided by `ρc·area` so both parts are dimensionless.
//!
//! Sign convention: the evanescent branch is taken as `k_z = −j k √(t² − 1)`, so `1/k_z`
//! is positive imaginary and the reported reactance `x` is the positive, mass-like loading.

mod long_strip;

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::quadrature::{
    integrate_inner_disk, integrate_outer_tail, PhiSymmetry, QuadError, QuadratureResult, TailModel, Tolerance,
};
use crate::spectra::{circ, poly};
use crate::sweep::SweepSpec;

/// Reactance of rectangular radiators is tagged above this `ka`.
pub const RECT_REACTANCE_LIMIT: f64 = 5.0;
/// Reactance of circular radiators is tagged above this `ka`.
pub const CIRC_REACTANCE_LIMIT: f64 = 5.5;

/// `99225/16384 = (315/128)²`: inverse RMS velocity² of the 2D clamped profile.
pub const RECT2D_VRMS_INV: f64 = 99225.0 / 16384.0;
/// `315/128`: inverse RMS velocity² of the long-strip profile.
pub const RECT1D_VRMS_INV: f64 = 315.0 / 128.0;
/// `5`: inverse RMS velocity² of the circular clamped profile.
pub const CIRC_VRMS_INV: f64 = 5.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ImpedanceError {
    #[error("invalid radiator: {0}")]
    InvalidSpec(String),
    #[error("ka must be finite and positive, got {0}")]
    InvalidKa(f64),
    #[error("radiator kind {0:?} is not handled by this routine")]
    WrongKind(RadiatorKind),
    #[error("ka grid must be non-empty, strictly increasing and positive")]
    InvalidGrid,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiatorKind {
    /// Clamped rectangle with the separable polynomial profile.
    Rect2D,
    /// Long rectangle: polynomial across the width, constant along the length.
    Rect1D,
    /// Clamped disk.
    Circular,
}

/// Geometry of a radiator. Lengths are in meters, but only the aspect ratio enters the
/// normalized impedance.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RadiatorSpec {
    pub kind: RadiatorKind,
    /// Half-width `a` (rectangles) or radius (disk).
    pub half_width: f64,
    /// Half-length `b`; `None` for the disk.
    pub half_length: Option<f64>,
}

impl RadiatorSpec {
    pub fn rect2d(half_width: f64, half_length: f64) -> Result<Self, ImpedanceError> {
        Self::rect(RadiatorKind::Rect2D, half_width, half_length)
    }

    pub fn rect1d(half_width: f64, half_length: f64) -> Result<Self, ImpedanceError> {
        Self::rect(RadiatorKind::Rect1D, half_width, half_length)
    }

    pub fn circular(radius: f64) -> Result<Self, ImpedanceError> {
        let spec = RadiatorSpec {
            kind: RadiatorKind::Circular,
            half_width: radius,
            half_length: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Unit half-width (or radius) with the given aspect ratio; the aspect is ignored for disks.
    pub fn with_aspect(kind: RadiatorKind, aspect: f64) -> Result<Self, ImpedanceError> {
        match kind {
            RadiatorKind::Circular => Self::circular(1.0),
            _ => Self::rect(kind, 1.0, aspect),
        }
    }

    fn rect(kind: RadiatorKind, half_width: f64, half_length: f64) -> Result<Self, ImpedanceError> {
        let spec = RadiatorSpec {
            kind,
            half_width,
            half_length: Some(half_length),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), ImpedanceError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.half_width) {
            return Err(ImpedanceError::InvalidSpec(format!(
                "half-width {} must be positive",
                self.half_width
            )));
        }
        match (self.kind, self.half_length) {
            (RadiatorKind::Circular, None) => Ok(()),
            (RadiatorKind::Circular, Some(_)) => Err(ImpedanceError::InvalidSpec(
                "circular radiator carries a radius only".into(),
            )),
            (_, Some(b)) if positive(b) && positive(b / self.half_width) => Ok(()),
            (_, Some(b)) => Err(ImpedanceError::InvalidSpec(format!("half-length {b} must be positive"))),
            (_, None) => Err(ImpedanceError::InvalidSpec(
                "rectangular radiator needs a half-length".into(),
            )),
        }
    }

    /// `b/a` for rectangles, 1 for the disk.
    pub fn aspect(&self) -> f64 {
        match self.half_length {
            Some(b) => b / self.half_width,
            None => 1.0,
        }
    }

    /// Radiating area in m².
    pub fn area(&self) -> f64 {
        match self.half_length {
            Some(b) => 4.0 * self.half_width * b,
            None => PI * self.half_width * self.half_width,
        }
    }

    pub fn normalization(&self) -> Normalization {
        match self.kind {
            RadiatorKind::Circular => Normalization::ByPiA2RhoC,
            _ => Normalization::By4abRhoC,
        }
    }

    /// `ka` above which the reactance is outside the validated range.
    pub fn reactance_limit(&self) -> f64 {
        match self.kind {
            RadiatorKind::Circular => CIRC_REACTANCE_LIMIT,
            _ => RECT_REACTANCE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Normalization {
    /// Divided by `4ab·ρc`.
    By4abRhoC,
    /// Divided by `πa²·ρc`.
    ByPiA2RhoC,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Validity {
    Validated,
    ReactanceUnvalidated,
}

impl Validity {
    /// Tag for `ka` against a reactance limit. Grid points that print as the limit itself
    /// (within a relative 1e-12) count as inside it.
    pub fn for_ka(ka: f64, limit: f64) -> Self {
        if ka > limit * (1.0 + 1e-12) {
            Validity::ReactanceUnvalidated
        } else {
            Validity::Validated
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Validity::Validated => "ok",
            Validity::ReactanceUnvalidated => "reactance-unvalidated",
        }
    }
}

/// One impedance sample: dimensionless resistance `r` and reactance `x` at `ka`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NormalizedImpedance {
    pub ka: f64,
    pub r: f64,
    pub x: f64,
    pub normalization: Normalization,
    /// Both integrals met the tolerance; otherwise `r` and `x` are best estimates.
    pub converged: bool,
    pub r_error: f64,
    pub x_error: f64,
    pub evaluations: u64,
    pub validity: Validity,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ImpedanceCurve {
    pub spec: RadiatorSpec,
    pub points: Vec<NormalizedImpedance>,
    pub tol: Tolerance,
}

impl ImpedanceCurve {
    pub fn all_converged(&self) -> bool {
        self.points.iter().all(|p| p.converged)
    }
}

fn check_ka(ka: f64) -> Result<(), ImpedanceError> {
    if ka.is_finite() && ka > 0.0 {
        Ok(())
    } else {
        Err(ImpedanceError::InvalidKa(ka))
    }
}

fn assemble(
    spec: &RadiatorSpec,
    ka: f64,
    prefactor: f64,
    real: QuadratureResult,
    imag: QuadratureResult,
) -> NormalizedImpedance {
    NormalizedImpedance {
        ka,
        r: prefactor * real.value,
        x: prefactor * imag.value,
        normalization: spec.normalization(),
        converged: real.converged && imag.converged,
        r_error: prefactor * real.error_estimate,
        x_error: prefactor * imag.error_estimate,
        evaluations: real.evaluations + imag.evaluations,
        validity: Validity::for_ka(ka, spec.reactance_limit()),
    }
}

/// Tolerance on a raw integral whose product with `prefactor` must meet `tol`.
fn integral_tolerance(tol: &Tolerance, prefactor: f64) -> Tolerance {
    Tolerance {
        rel: tol.rel,
        abs: tol.abs / prefactor,
        max_subdivisions: tol.max_subdivisions,
    }
}

/// `(ka)²·β·(99225/16384)/(16π²)`.
pub fn rect2d_prefactor(ka: f64, aspect: f64) -> f64 {
    ka * ka * aspect * RECT2D_VRMS_INV / (16.0 * PI * PI)
}

/// `(ka)²·β·(315/128)/(4π²)`.
pub fn rect1d_prefactor(ka: f64, aspect: f64) -> f64 {
    ka * ka * aspect * RECT1D_VRMS_INV / (4.0 * PI * PI)
}

/// `(ka)²·5/(4π)`, applied to the angular-and-radial integral (which includes the 2π).
pub fn circular_prefactor(ka: f64) -> f64 {
    ka * ka * CIRC_VRMS_INV / (4.0 * PI)
}

/// Bound constant for `|S(u)| ≤ C/u³`.
const POLY_DECAY: f64 = 64.0;

/// Resistance and reactance integrals of the 2D clamped kernel with spectrum arguments
/// `u = ka·t·cos φ`, `v = kb·t·sin φ`, without prefactor.
pub(crate) fn rect2d_integrals(
    ka: f64,
    kb: f64,
    symmetry: PhiSymmetry,
    tol: &Tolerance,
) -> Result<(QuadratureResult, QuadratureResult), QuadError> {
    let kernel = |t: f64, phi: f64| {
        let (s, c) = phi.sin_cos();
        let sx = poly(ka * t * c);
        let sy = poly(kb * t * s);
        sx * sx * sy * sy
    };
    // Along every direction one of ka|cos φ|, kb|sin φ| is at least m.
    let m = ka * kb / ka.hypot(kb);
    let s0 = 16.0 / 15.0;
    let coef = 2.0 * PI * s0 * s0 * (POLY_DECAY / m).powi(6);
    let real = integrate_inner_disk(kernel, symmetry, *tol)?;
    let imag = integrate_outer_tail(kernel, TailModel::PowerLaw { coef, power: 6.0 }, symmetry, *tol)?;
    Ok((real, imag))
}

/// Impedance of the clamped rectangle with profile `(1 − x²/a²)²(1 − y²/b²)²`.
///
/// Aspect ratios below one are evaluated as the same plate with its axes exchanged.
pub fn rect2d_impedance(spec: &RadiatorSpec, ka: f64, tol: Tolerance) -> Result<NormalizedImpedance, ImpedanceError> {
    if spec.kind != RadiatorKind::Rect2D {
        return Err(ImpedanceError::WrongKind(spec.kind));
    }
    spec.validate()?;
    check_ka(ka)?;
    tol.validate()?;

    let mut aspect = spec.aspect();
    let mut ka_eff = ka;
    if aspect < 1.0 {
        ka_eff = ka * aspect;
        aspect = 1.0 / aspect;
    }
    let prefactor = rect2d_prefactor(ka_eff, aspect);
    let itol = integral_tolerance(&tol, prefactor);
    let (real, imag) = rect2d_integrals(ka_eff, ka_eff * aspect, PhiSymmetry::Quadrant, &itol)?;
    Ok(assemble(spec, ka, prefactor, real, imag))
}

/// Impedance of the long rectangle with profile `(1 − x²/a²)²·Π(y/2b)`.
pub fn rect1d_impedance(spec: &RadiatorSpec, ka: f64, tol: Tolerance) -> Result<NormalizedImpedance, ImpedanceError> {
    if spec.kind != RadiatorKind::Rect1D {
        return Err(ImpedanceError::WrongKind(spec.kind));
    }
    spec.validate()?;
    check_ka(ka)?;
    tol.validate()?;

    let aspect = spec.aspect();
    let prefactor = rect1d_prefactor(ka, aspect);
    let itol = integral_tolerance(&tol, prefactor);
    let kb = ka * aspect;
    let real = long_strip::propagating(ka, kb, &itol)?;
    let imag = long_strip::evanescent(ka, kb, &itol)?;
    Ok(assemble(spec, ka, prefactor, real, imag))
}

/// Resistance and reactance integrals of the circular kernel, including the 2π of the
/// angular integral, without prefactor.
pub(crate) fn circular_integrals(ka: f64, tol: &Tolerance) -> Result<(QuadratureResult, QuadratureResult), QuadError> {
    let kernel = |t: f64, _phi: f64| {
        let s = circ(ka * t);
        s * s
    };
    // |S_c(u)| = 16|J₃(u)|/u³ ≤ 16/u³
    let coef = 2.0 * PI * 256.0 / ka.powi(6);
    let real = integrate_inner_disk(kernel, PhiSymmetry::Axisymmetric, *tol)?;
    let imag = integrate_outer_tail(
        kernel,
        TailModel::PowerLaw { coef, power: 6.0 },
        PhiSymmetry::Axisymmetric,
        *tol,
    )?;
    Ok((real, imag))
}

/// Impedance of a clamped disk of the given radius with profile `(1 − r²/a²)²`.
pub fn circular_impedance(radius: f64, ka: f64, tol: Tolerance) -> Result<NormalizedImpedance, ImpedanceError> {
    let spec = RadiatorSpec::circular(radius)?;
    check_ka(ka)?;
    tol.validate()?;
    let prefactor = circular_prefactor(ka);
    let itol = integral_tolerance(&tol, prefactor);
    let (real, imag) = circular_integrals(ka, &itol)?;
    Ok(assemble(&spec, ka, prefactor, real, imag))
}

/// Dispatch on the radiator kind.
pub fn impedance(spec: &RadiatorSpec, ka: f64, tol: Tolerance) -> Result<NormalizedImpedance, ImpedanceError> {
    match spec.kind {
        RadiatorKind::Rect2D => rect2d_impedance(spec, ka, tol),
        RadiatorKind::Rect1D => rect1d_impedance(spec, ka, tol),
        RadiatorKind::Circular => circular_impedance(spec.half_width, ka, tol),
    }
}

/// Evaluate every `ka` of a strictly increasing grid. Points are independent and are
/// computed on the current rayon pool; results come back in grid order.
pub fn sweep_grid(spec: &RadiatorSpec, grid: &[f64], tol: Tolerance) -> Result<ImpedanceCurve, ImpedanceError> {
    spec.validate()?;
    tol.validate()?;
    let increasing = grid.windows(2).all(|w| w[0] < w[1]);
    if grid.is_empty() || !increasing || !grid.iter().all(|&k| k.is_finite() && k > 0.0) {
        return Err(ImpedanceError::InvalidGrid);
    }
    let points = grid
        .par_iter()
        .map(|&ka| impedance(spec, ka, tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ImpedanceCurve {
        spec: *spec,
        points,
        tol,
    })
}

pub fn sweep(spec: &RadiatorSpec, sweep: &SweepSpec) -> Result<ImpedanceCurve, ImpedanceError> {
    let grid = sweep.grid().map_err(|_| ImpedanceError::InvalidGrid)?;
    sweep_grid(spec, &grid, sweep.tol)
}
