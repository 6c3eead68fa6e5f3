//! Brute-force Rayleigh-integral reference for the radiation impedance.
//!
//! The aperture is cut into small panels with a lumped velocity each. Every pair of panels
//! couples through the free-space baffled Green's function, and the panel self-term is the
//! field of an equal-area disk at its center. The result needs no wavenumber transform, so
//! it checks the spectral solver independently. The cost is quadratic in the panel count.

use std::f64::consts::PI;

use rayon::prelude::*;
use thiserror::Error;

use crate::impedance::{Normalization, NormalizedImpedance, RadiatorKind, RadiatorSpec, Validity};
use crate::profiles::{eval_profile, mean_ratio, vrms_ratio, ProfileModel};

/// Largest mesh [`build_mesh`] accepts by default.
pub const DEFAULT_MAX_PANELS: usize = 65_536;
/// Smallest number of panels across the half-width-to-half-width span.
pub const MIN_PANELS_PER_WIDTH: usize = 8;
/// Panels may be at most this fraction of a wavelength on a side.
pub const MAX_PANEL_WAVELENGTHS: f64 = 1.0 / 8.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("mesh would have {panels} panels, above the budget of {budget}")]
    BudgetExceeded { panels: usize, budget: usize },
    #[error("at least {MIN_PANELS_PER_WIDTH} panels across the width are required, got {0}")]
    TooCoarse(usize),
    #[error("panel size {panel:e} exceeds λ/8 = {limit:e} at ka = {ka}")]
    UnderResolved { ka: f64, panel: f64, limit: f64 },
    #[error("ka must be finite and positive, got {0}")]
    InvalidKa(f64),
    #[error("invalid radiator: {0}")]
    InvalidSpec(String),
    #[error("medium density and sound speed must be positive")]
    InvalidMedium,
}

/// Fluid properties. They cancel from the normalized impedance but are kept explicit so the
/// dimensional pressure sum can be checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    pub density: f64,
    pub sound_speed: f64,
}

impl Default for MediumParams {
    /// Air at 20 °C.
    fn default() -> Self {
        MediumParams {
            density: 1.204,
            sound_speed: 343.0,
        }
    }
}

/// Panel discretization of a radiator with lumped velocities.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelMesh {
    pub spec: RadiatorSpec,
    /// Panel edge lengths.
    pub dx: f64,
    pub dy: f64,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub areas: Vec<f64>,
    pub velocities: Vec<f64>,
}

impl PanelMesh {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    /// Discrete mean square velocity over the panels.
    pub fn mean_square_velocity(&self) -> f64 {
        let s: f64 = self.areas.iter().zip(&self.velocities).map(|(a, v)| a * v * v).sum();
        s / self.total_area()
    }

    /// Same panels with a rigid-piston velocity of 1.
    pub fn with_uniform_velocity(mut self) -> Self {
        self.velocities.iter_mut().for_each(|v| *v = 1.0);
        self
    }

    /// Largest panel edge.
    pub fn panel_size(&self) -> f64 {
        self.dx.max(self.dy)
    }
}

/// Mesh with `n_per_width` panels across the width `2a` and square-ish panels along the
/// length, within [`DEFAULT_MAX_PANELS`].
pub fn build_mesh(spec: &RadiatorSpec, n_per_width: usize) -> Result<PanelMesh, OracleError> {
    build_mesh_with_budget(spec, n_per_width, DEFAULT_MAX_PANELS)
}

pub fn build_mesh_with_budget(
    spec: &RadiatorSpec,
    n_per_width: usize,
    budget: usize,
) -> Result<PanelMesh, OracleError> {
    spec.validate().map_err(|e| OracleError::InvalidSpec(e.to_string()))?;
    if n_per_width < MIN_PANELS_PER_WIDTH {
        return Err(OracleError::TooCoarse(n_per_width));
    }
    let model = ProfileModel::new(*spec);
    let a = spec.half_width;
    let dx = 2.0 * a / n_per_width as f64;
    let centers = |half: f64, n: usize| -> Vec<f64> {
        let d = 2.0 * half / n as f64;
        (0..n).map(|i| -half + (i as f64 + 0.5) * d).collect()
    };

    match spec.kind {
        RadiatorKind::Rect2D | RadiatorKind::Rect1D => {
            let b = spec.half_length.unwrap_or(a);
            let ny = ((n_per_width as f64 * b / a).round() as usize).max(1);
            let panels = n_per_width.saturating_mul(ny);
            if panels > budget {
                return Err(OracleError::BudgetExceeded { panels, budget });
            }
            let dy = 2.0 * b / ny as f64;
            let cx = centers(a, n_per_width);
            let cy = centers(b, ny);
            let mut mesh = PanelMesh {
                spec: *spec,
                dx,
                dy,
                xs: Vec::with_capacity(panels),
                ys: Vec::with_capacity(panels),
                areas: vec![dx * dy; panels],
                velocities: Vec::with_capacity(panels),
            };
            for &x in &cx {
                for &y in &cy {
                    mesh.xs.push(x);
                    mesh.ys.push(y);
                    mesh.velocities.push(eval_profile(&model, x, y));
                }
            }
            Ok(mesh)
        }
        RadiatorKind::Circular => {
            let c = centers(a, n_per_width);
            let inside: Vec<(f64, f64)> = c
                .iter()
                .flat_map(|&x| c.iter().map(move |&y| (x, y)))
                .filter(|&(x, y)| x * x + y * y < a * a)
                .collect();
            if inside.len() > budget {
                return Err(OracleError::BudgetExceeded {
                    panels: inside.len(),
                    budget,
                });
            }
            // Panels share the exact disk area so the staircase edge does not bias it.
            let area = PI * a * a / inside.len() as f64;
            Ok(PanelMesh {
                spec: *spec,
                dx,
                dy: dx,
                xs: inside.iter().map(|p| p.0).collect(),
                ys: inside.iter().map(|p| p.1).collect(),
                areas: vec![area; inside.len()],
                velocities: inside.iter().map(|&(x, y)| eval_profile(&model, x, y)).collect(),
            })
        }
    }
}

/// Low-frequency coefficient `C` of `r ≈ C·(ka)²`: the radiation resistance of the
/// equivalent point source, `(area/a²)·⟨v⟩²/(2π⟨v²⟩)`.
pub fn monopole_asymptote(spec: &RadiatorSpec) -> f64 {
    let model = ProfileModel::new(*spec);
    let a = spec.half_width;
    let m = mean_ratio(&model);
    spec.area() / (a * a) * m * m / (2.0 * PI * vrms_ratio(&model))
}

/// Normalized resistance of a rigid baffled piston, `1 − J₁(2ka)/ka`.
pub fn piston_resistance(ka: f64) -> f64 {
    1.0 - libm::j1(2.0 * ka) / ka
}

fn check_inputs(mesh: &PanelMesh, ka: f64, medium: &MediumParams) -> Result<f64, OracleError> {
    if !(ka.is_finite() && ka > 0.0) {
        return Err(OracleError::InvalidKa(ka));
    }
    if !(medium.density > 0.0 && medium.sound_speed > 0.0) {
        return Err(OracleError::InvalidMedium);
    }
    let k = ka / mesh.spec.half_width;
    let limit = MAX_PANEL_WAVELENGTHS * 2.0 * PI / k;
    if mesh.panel_size() > limit * (1.0 + 1e-12) {
        return Err(OracleError::UnderResolved {
            ka,
            panel: mesh.panel_size(),
            limit,
        });
    }
    Ok(k)
}

/// Sum over panel pairs of `w_i w_j · jk e^{−jkR}/(2πR)` plus the self terms, for each `k`,
/// where `w = v·A`. With `symmetric` the mutual terms are summed once and doubled.
fn coupling_sums(mesh: &PanelMesh, ks: &[f64], symmetric: bool) -> Vec<(f64, f64)> {
    let n = mesh.len();
    let w: Vec<f64> = mesh.velocities.iter().zip(&mesh.areas).map(|(v, a)| v * a).collect();
    let (xs, ys) = (&mesh.xs, &mesh.ys);
    let nk = ks.len();

    // Each row is reduced on its own and rows are summed in order, so the result does not
    // depend on the thread count.
    let rows: Vec<Vec<(f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![(0.0, 0.0); nk];
            if w[i] == 0.0 {
                return acc;
            }
            let (start, factor) = if symmetric { (i + 1, 2.0) } else { (0, 1.0) };
            for j in start..n {
                if j == i || w[j] == 0.0 {
                    continue;
                }
                let r = (xs[i] - xs[j]).hypot(ys[i] - ys[j]);
                let ww = w[j] / (2.0 * PI * r);
                for (slot, &k) in acc.iter_mut().zip(ks) {
                    let (s, c) = (k * r).sin_cos();
                    slot.0 += ww * k * s;
                    slot.1 += ww * k * c;
                }
            }
            // Self term: uniform disk of equal area radiating onto its own center.
            let eps = (mesh.areas[i] / PI).sqrt();
            for (slot, &k) in acc.iter_mut().zip(ks) {
                let (s, c) = (k * eps).sin_cos();
                slot.0 = factor * slot.0 * w[i] + w[i] * mesh.velocities[i] * (1.0 - c);
                slot.1 = factor * slot.1 * w[i] + w[i] * mesh.velocities[i] * s;
            }
            acc
        })
        .collect();

    let mut total = vec![(0.0, 0.0); nk];
    for row in rows {
        for (t, v) in total.iter_mut().zip(row) {
            t.0 += v.0;
            t.1 += v.1;
        }
    }
    total
}

fn finish(mesh: &PanelMesh, ka: f64, sum: (f64, f64), medium: &MediumParams) -> NormalizedImpedance {
    let rho_c = medium.density * medium.sound_speed;
    let area = mesh.total_area();
    // Complex power ρc·Σ over the squared RMS velocity, normalized by ρc·area.
    let scale = rho_c / (mesh.mean_square_velocity() * rho_c * area);
    let pairs = (mesh.len() * mesh.len()) as u64;
    NormalizedImpedance {
        ka,
        r: sum.0 * scale,
        x: sum.1 * scale,
        normalization: match mesh.spec.kind {
            RadiatorKind::Circular => Normalization::ByPiA2RhoC,
            _ => Normalization::By4abRhoC,
        },
        converged: true,
        r_error: 0.0,
        x_error: 0.0,
        evaluations: pairs,
        validity: Validity::for_ka(ka, mesh.spec.reactance_limit()),
    }
}

/// Brute-force impedance at one `ka`. The reactance is reported positive (mass-like).
pub fn bruteforce_impedance(
    mesh: &PanelMesh,
    ka: f64,
    medium: &MediumParams,
) -> Result<NormalizedImpedance, OracleError> {
    bruteforce_impedance_many(mesh, &[ka], medium).map(|mut v| v.remove(0))
}

/// Brute-force impedance at several `ka`, sharing the panel distances between them.
pub fn bruteforce_impedance_many(
    mesh: &PanelMesh,
    kas: &[f64],
    medium: &MediumParams,
) -> Result<Vec<NormalizedImpedance>, OracleError> {
    let ks = kas
        .iter()
        .map(|&ka| check_inputs(mesh, ka, medium))
        .collect::<Result<Vec<_>, _>>()?;
    let sums = coupling_sums(mesh, &ks, true);
    Ok(kas
        .iter()
        .zip(sums)
        .map(|(&ka, s)| finish(mesh, ka, s, medium))
        .collect())
}

/// Same as [`bruteforce_impedance`] but sums every ordered pair, without using reciprocity.
pub fn bruteforce_impedance_full(
    mesh: &PanelMesh,
    ka: f64,
    medium: &MediumParams,
) -> Result<NormalizedImpedance, OracleError> {
    let k = check_inputs(mesh, ka, medium)?;
    let sum = coupling_sums(mesh, &[k], false)[0];
    Ok(finish(mesh, ka, sum, medium))
}

/// Richardson-extrapolated brute-force impedance from meshes with `n_per_width / 2` and
/// `n_per_width` panels across the width.
///
/// The equal-area-disk self term leaves a near-field error proportional to the panel size,
/// most visible in the reactance at higher `ka`. Combining `2·z(h) − z(2h)` cancels that
/// first-order term.
pub fn bruteforce_extrapolated(
    spec: &RadiatorSpec,
    n_per_width: usize,
    kas: &[f64],
    medium: &MediumParams,
) -> Result<Vec<NormalizedImpedance>, OracleError> {
    if !n_per_width.is_multiple_of(2) || n_per_width < 2 * MIN_PANELS_PER_WIDTH {
        return Err(OracleError::TooCoarse(n_per_width / 2));
    }
    let coarse = bruteforce_impedance_many(&build_mesh(spec, n_per_width / 2)?, kas, medium)?;
    let fine = bruteforce_impedance_many(&build_mesh(spec, n_per_width)?, kas, medium)?;
    Ok(fine
        .into_iter()
        .zip(coarse)
        .map(|(f, c)| NormalizedImpedance {
            r: 2.0 * f.r - c.r,
            x: 2.0 * f.x - c.x,
            r_error: (f.r - c.r).abs(),
            x_error: (f.x - c.x).abs(),
            evaluations: f.evaluations + c.evaluations,
            ..f
        })
        .collect())
}
