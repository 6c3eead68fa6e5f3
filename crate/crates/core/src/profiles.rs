//! Velocity profiles, their RMS normalization, and comparison against sampled velocity
//! fields such as FEM exports.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::impedance::{RadiatorKind, RadiatorSpec};
use crate::spectra::ShapeKind;

/// Relative slack allowed between a grid's extent and the aperture it is compared with.
pub const EXTENT_SLACK: f64 = 0.02;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("cannot read {path}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: expected header \"x,y,v\", found \"{found}\"")]
    Header { path: String, found: String },
    #[error("{path}, line {line}: {message}")]
    Malformed { path: String, line: u64, message: String },
    #[error("{path}, line {line}: non-finite value")]
    NonFinite { path: String, line: u64 },
    #[error("{path}, line {line}: duplicate point ({x}, {y})")]
    Duplicate { path: String, line: u64, x: f64, y: f64 },
    #[error("{path}: points do not form a tensor grid ({missing} of {expected} nodes missing)")]
    NotTensor {
        path: String,
        missing: usize,
        expected: usize,
    },
    #[error("{0}")]
    InvalidGrid(String),
    #[error("grid values are all zero")]
    AllZero,
    #[error("grid does not match the radiator geometry: {0}")]
    GeometryMismatch(String),
    #[error("cannot mirror: {0}")]
    Mirror(String),
}

/// Rectangular grid of velocity samples. `values[i * ys.len() + j]` is the sample at
/// `(xs[i], ys[j])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledGrid {
    xs: Vec<f64>,
    ys: Vec<f64>,
    values: Vec<f64>,
}

impl SampledGrid {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, values: Vec<f64>) -> Result<Self, ProfileError> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]) && v.iter().all(|c| c.is_finite());
        if xs.len() < 2 || ys.len() < 2 {
            return Err(ProfileError::InvalidGrid(format!(
                "need at least 2×2 nodes, got {}×{}",
                xs.len(),
                ys.len()
            )));
        }
        if !increasing(&xs) || !increasing(&ys) {
            return Err(ProfileError::InvalidGrid(
                "coordinates must be finite and strictly increasing".into(),
            ));
        }
        if values.len() != xs.len() * ys.len() {
            return Err(ProfileError::InvalidGrid(format!(
                "{} values for a {}×{} grid",
                values.len(),
                xs.len(),
                ys.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(ProfileError::InvalidGrid("values must be finite".into()));
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(ProfileError::AllZero);
        }
        Ok(SampledGrid { xs, ys, values })
    }

    /// Sample `f(x, y)` on the tensor product of `xs` and `ys`.
    pub fn from_fn(xs: Vec<f64>, ys: Vec<f64>, f: impl Fn(f64, f64) -> f64) -> Result<Self, ProfileError> {
        let values = xs
            .iter()
            .flat_map(|&x| ys.iter().map(move |&y| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(xs, ys, values)
    }

    /// `n` evenly spaced nodes covering the aperture of `geometry`, per axis.
    pub fn covering(
        geometry: &RadiatorSpec,
        nx: usize,
        ny: usize,
        f: impl Fn(f64, f64) -> f64,
    ) -> Result<Self, ProfileError> {
        let a = geometry.half_width;
        let b = geometry.half_length.unwrap_or(a);
        Self::from_fn(linspace(-a, a, nx), linspace(-b, b, ny), f)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.ys.len() + j]
    }

    pub fn scaled(&self, s: f64) -> Self {
        SampledGrid {
            xs: self.xs.clone(),
            ys: self.ys.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Sample with the largest magnitude (first one on ties).
    pub fn peak(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(0.0, |p, v| if v.abs() > p.abs() { v } else { p })
    }

    /// CSV text in the `x,y,v` ingestion format.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,v\n");
        for (i, &x) in self.xs.iter().enumerate() {
            for (j, &y) in self.ys.iter().enumerate() {
                let _ = writeln!(out, "{x:e},{y:e},{:e}", self.value(i, j));
            }
        }
        out
    }

    /// Complete a quarter-symmetry grid (`x ≥ 0`, `y ≥ 0`) by even reflection about both axes.
    pub fn mirrored(&self) -> Result<Self, ProfileError> {
        let span = (self.xs[self.xs.len() - 1] - self.xs[0]).max(self.ys[self.ys.len() - 1] - self.ys[0]);
        let eps = 1e-9 * span;
        if self.xs[0] < -eps || self.ys[0] < -eps {
            return Err(ProfileError::Mirror("quarter grid must have x ≥ 0 and y ≥ 0".into()));
        }
        let reflect = |c: &[f64]| -> (Vec<f64>, Vec<usize>) {
            // Source index for every node of the full axis.
            let skip_zero = c[0].abs() <= eps;
            let mut coords = Vec::new();
            let mut src = Vec::new();
            for (k, &v) in c.iter().enumerate().rev() {
                if skip_zero && k == 0 {
                    continue;
                }
                coords.push(-v);
                src.push(k);
            }
            for (k, &v) in c.iter().enumerate() {
                coords.push(if skip_zero && k == 0 { 0.0 } else { v });
                src.push(k);
            }
            (coords, src)
        };
        let (xs, sx) = reflect(&self.xs);
        let (ys, sy) = reflect(&self.ys);
        let values = sx
            .iter()
            .flat_map(|&i| sy.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.value(i, j))
            .collect();
        SampledGrid::new(xs, ys, values)
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// Trapezoidal weights for a strictly increasing coordinate vector.
pub fn trapezoid_weights(c: &[f64]) -> Vec<f64> {
    let n = c.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { c[i] - c[i - 1] } else { 0.0 };
            let right = if i + 1 < n { c[i + 1] - c[i] } else { 0.0 };
            0.5 * (left + right)
        })
        .collect()
}

/// Analytic velocity profile tied to a radiator geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileModel {
    pub geometry: RadiatorSpec,
}

impl ProfileModel {
    pub fn new(geometry: RadiatorSpec) -> Self {
        ProfileModel { geometry }
    }

    /// Factor per axis: `(x, Some(y))` for rectangles, `(radial, None)` for the disk.
    pub fn axes(&self) -> (ShapeKind, Option<ShapeKind>) {
        match self.geometry.kind {
            RadiatorKind::Rect2D => (ShapeKind::PolyClamped, Some(ShapeKind::PolyClamped)),
            RadiatorKind::Rect1D => (ShapeKind::PolyClamped, Some(ShapeKind::RectWindow)),
            RadiatorKind::Circular => (ShapeKind::CircPolyClamped, None),
        }
    }
}

#[inline]
fn clamped(u: f64) -> f64 {
    if u.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - u * u;
        w * w
    }
}

/// Peak-normalized velocity at `(x, y)`; zero outside the aperture.
pub fn eval_profile(model: &ProfileModel, x: f64, y: f64) -> f64 {
    let g = &model.geometry;
    let a = g.half_width;
    match g.kind {
        RadiatorKind::Rect2D => clamped(x / a) * clamped(y / g.half_length.unwrap_or(a)),
        RadiatorKind::Rect1D => {
            let b = g.half_length.unwrap_or(a);
            if y.abs() < b {
                clamped(x / a)
            } else {
                0.0
            }
        }
        RadiatorKind::Circular => {
            let r2 = (x * x + y * y) / (a * a);
            if r2 >= 1.0 {
                0.0
            } else {
                (1.0 - r2) * (1.0 - r2)
            }
        }
    }
}

/// `V_RMS² / v₀²` over the aperture.
pub fn vrms_ratio(model: &ProfileModel) -> f64 {
    match model.geometry.kind {
        RadiatorKind::Rect2D => 16384.0 / 99225.0,
        RadiatorKind::Rect1D => 128.0 / 315.0,
        RadiatorKind::Circular => 1.0 / 5.0,
    }
}

/// Mean velocity over the aperture divided by `v₀`, i.e. volume velocity per unit area.
pub fn mean_ratio(model: &ProfileModel) -> f64 {
    match model.geometry.kind {
        RadiatorKind::Rect2D => (8.0 / 15.0) * (8.0 / 15.0),
        RadiatorKind::Rect1D => 8.0 / 15.0,
        RadiatorKind::Circular => 1.0 / 3.0,
    }
}

fn check_extent(coords: &[f64], half: f64, axis: &str) -> Result<(), ProfileError> {
    let lo = coords[0];
    let hi = coords[coords.len() - 1];
    let slack = EXTENT_SLACK * half;
    if (lo + half).abs() > slack || (hi - half).abs() > slack {
        return Err(ProfileError::GeometryMismatch(format!(
            "{axis} extent [{lo:e}, {hi:e}] does not match the aperture [{:e}, {half:e}]",
            -half
        )));
    }
    Ok(())
}

/// Absolute relative error between a sampled field and the model, both normalized to their
/// peak, with trapezoidal area weights:
/// `Σ w |v̂_grid − v̂_model| / Σ w v̂_grid`.
pub fn are(grid: &SampledGrid, model: &ProfileModel) -> Result<f64, ProfileError> {
    let g = &model.geometry;
    check_extent(&grid.xs, g.half_width, "x")?;
    check_extent(&grid.ys, g.half_length.unwrap_or(g.half_width), "y")?;
    let peak = grid.peak();
    if peak == 0.0 {
        return Err(ProfileError::AllZero);
    }
    let wx = trapezoid_weights(&grid.xs);
    let wy = trapezoid_weights(&grid.ys);
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &x) in grid.xs.iter().enumerate() {
        for (j, &y) in grid.ys.iter().enumerate() {
            let w = wx[i] * wy[j];
            let v = grid.value(i, j) / peak;
            num += w * (v - eval_profile(model, x, y)).abs();
            den += w * v;
        }
    }
    if den <= 0.0 {
        return Err(ProfileError::InvalidGrid("grid has no net positive velocity".into()));
    }
    Ok(num / den)
}

/// Cluster nearly equal coordinates (relative to the overall span) into sorted unique values.
fn unique_coords(mut c: Vec<f64>) -> Vec<f64> {
    c.sort_by(f64::total_cmp);
    let span = c[c.len() - 1] - c[0];
    let eps = 1e-9 * span.max(f64::MIN_POSITIVE);
    let mut out: Vec<f64> = Vec::with_capacity(c.len());
    for v in c {
        match out.last() {
            Some(&last) if v - last <= eps => {}
            _ => out.push(v),
        }
    }
    out
}

fn locate(c: &[f64], v: f64) -> usize {
    let i = c.partition_point(|&u| u < v);
    match (i.checked_sub(1), c.get(i)) {
        (Some(lo), Some(&hi_v)) if (v - c[lo]).abs() < (hi_v - v).abs() => lo,
        (Some(lo), None) => lo,
        _ => i,
    }
}

/// Read an `x,y,v` CSV file into a tensor grid. With `mirror`, the file holds one quarter
/// (`x ≥ 0`, `y ≥ 0`) and the rest is completed by even reflection.
pub fn load_grid(path: impl AsRef<Path>, mirror: bool) -> Result<SampledGrid, ProfileError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|source| ProfileError::Io {
        path: name.clone(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);

    let header = reader.headers().map_err(|e| ProfileError::Malformed {
        path: name.clone(),
        line: 1,
        message: e.to_string(),
    })?;
    let found: Vec<&str> = header.iter().collect();
    if found.len() != 3
        || !found
            .iter()
            .zip(["x", "y", "v"])
            .all(|(h, want)| h.eq_ignore_ascii_case(want))
    {
        return Err(ProfileError::Header {
            path: name,
            found: found.join(","),
        });
    }

    let mut points = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| ProfileError::Malformed {
            path: name.clone(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(ProfileError::Malformed {
                path: name,
                line,
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let mut row = [0.0; 3];
        for (k, field) in record.iter().enumerate() {
            row[k] = field.parse::<f64>().map_err(|_| ProfileError::Malformed {
                path: name.clone(),
                line,
                message: format!("cannot parse \"{field}\" as a number"),
            })?;
            if !row[k].is_finite() {
                return Err(ProfileError::NonFinite { path: name, line });
            }
        }
        points.push((line, row));
    }
    if points.is_empty() {
        return Err(ProfileError::InvalidGrid(format!("{name}: no data rows")));
    }

    let xs = unique_coords(points.iter().map(|p| p.1[0]).collect());
    let ys = unique_coords(points.iter().map(|p| p.1[1]).collect());
    let expected = xs.len() * ys.len();
    let mut slots: Vec<Option<f64>> = vec![None; expected];
    for &(line, [x, y, v]) in &points {
        let k = locate(&xs, x) * ys.len() + locate(&ys, y);
        if slots[k].replace(v).is_some() {
            return Err(ProfileError::Duplicate { path: name, line, x, y });
        }
    }
    let missing = slots.iter().filter(|s| s.is_none()).count();
    if missing > 0 {
        return Err(ProfileError::NotTensor {
            path: name,
            missing,
            expected,
        });
    }
    let grid = SampledGrid::new(xs, ys, slots.into_iter().map(|s| s.unwrap_or(0.0)).collect())?;
    if mirror {
        grid.mirrored()
    } else {
        Ok(grid)
    }
}
