use anyhow::{anyhow, bail, Context, Result};
use radimp::oracle::{self, MediumParams};
use radimp::profiles::{self, ProfileModel};
use radimp::{impedance, sweep_grid, RadiatorKind, RadiatorSpec, SweepSpec, Tolerance};

use crate::args::{
    EvalArgs, FormatArg, KindArg, OracleArgs, ProfileArgs, RadiatorArgs, SpacingArg, SweepArgs, TolArgs,
};
use crate::config::{pick, pick_enum, Config};
use crate::output;

/// How a command finished when it did not fail outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Results were produced but some did not meet their target.
    Incomplete,
}

fn radiator(args: &RadiatorArgs, cfg: &Config) -> Result<(KindArg, RadiatorSpec)> {
    let kind = pick_enum(args.kind, cfg, "kind", KindArg::Rect2d)?;
    let aspect = pick(args.aspect, cfg, "aspect", 1.0)?;
    let spec = RadiatorSpec::with_aspect(kind.radiator(), aspect)?;
    Ok((kind, spec))
}

fn tolerance(args: &TolArgs, cfg: &Config) -> Result<Tolerance> {
    let d = Tolerance::default();
    let tol = Tolerance {
        rel: pick(args.tol_rel, cfg, "tol-rel", d.rel)?,
        abs: pick(args.tol_abs, cfg, "tol-abs", d.abs)?,
        max_subdivisions: pick(args.max_subdivisions, cfg, "max-subdivisions", d.max_subdivisions)?,
    };
    tol.validate()?;
    Ok(tol)
}

fn required_ka(flag: Option<f64>, cfg: &Config) -> Result<f64> {
    match flag {
        Some(v) => Ok(v),
        None => cfg.get("ka")?.ok_or_else(|| anyhow!("--ka is required")),
    }
}

fn render(
    kind: KindArg,
    spec: &RadiatorSpec,
    tol: Tolerance,
    format: FormatArg,
    points: &[radimp::NormalizedImpedance],
) -> Result<String> {
    match format {
        FormatArg::Csv => Ok(output::csv(points)),
        FormatArg::Json => output::json(kind.label(), spec.aspect(), tol, points),
    }
}

pub fn sweep(args: &SweepArgs, cfg: &Config) -> Result<Outcome> {
    let (kind, spec) = radiator(&args.radiator, cfg)?;
    let tol = tolerance(&args.tol, cfg)?;
    let format = pick_enum(args.format, cfg, "format", FormatArg::Csv)?;
    let sweep = SweepSpec {
        ka_min: pick(args.ka_min, cfg, "ka-min", 0.1)?,
        ka_max: pick(args.ka_max, cfg, "ka-max", 10.0)?,
        n_points: pick(args.points, cfg, "points", 50)?,
        spacing: pick_enum(args.spacing, cfg, "spacing", SpacingArg::Linear)?.into(),
        tol,
        output_format: format.into(),
    };
    let grid = sweep.grid()?;
    let out = args.out.clone().or(cfg.get("out")?);

    let curve = sweep_grid(&spec, &grid, tol)?;
    output::emit(&render(kind, &spec, tol, format, &curve.points)?, out.as_deref())?;
    Ok(if curve.all_converged() {
        Outcome::Success
    } else {
        Outcome::Incomplete
    })
}

pub fn eval(args: &EvalArgs, cfg: &Config) -> Result<Outcome> {
    let (kind, spec) = radiator(&args.radiator, cfg)?;
    let tol = tolerance(&args.tol, cfg)?;
    let ka = required_ka(args.ka, cfg)?;
    let format = pick_enum(args.format, cfg, "format", FormatArg::Csv)?;
    let out = args.out.clone().or(cfg.get("out")?);

    let z = impedance(&spec, ka, tol)?;
    output::emit(&render(kind, &spec, tol, format, &[z])?, out.as_deref())?;
    Ok(if z.converged {
        Outcome::Success
    } else {
        Outcome::Incomplete
    })
}

fn rel_diff(a: f64, reference: f64) -> f64 {
    ((a - reference) / reference).abs()
}

pub fn oracle_check(args: &OracleArgs, cfg: &Config) -> Result<Outcome> {
    let ka = required_ka(args.ka, cfg)?;
    let mesh_n = pick(args.mesh_n, cfg, "mesh-n", 64)?;
    let max_rel = pick(args.max_rel, cfg, "max-rel", 0.02)?;
    if !(max_rel.is_finite() && max_rel > 0.0) {
        bail!("--max-rel must be positive, got {max_rel}");
    }
    let medium = MediumParams::default();

    if args.piston {
        let spec = RadiatorSpec::circular(1.0)?;
        let mesh = oracle::build_mesh(&spec, mesh_n)?.with_uniform_velocity();
        let z = oracle::bruteforce_impedance(&mesh, ka, &medium)?;
        let exact = oracle::piston_resistance(ka);
        let baseline = 0.5 * ka * ka;
        let d = rel_diff(z.r, exact);
        println!("piston disk, ka = {ka}, {} panels", mesh.len());
        println!("  panel sum      r = {:.6e}  x = {:.6e}", z.r, z.x);
        println!("  1 - J1(2ka)/ka r = {exact:.6e}  (rel. diff {:.3}%)", 100.0 * d);
        println!(
            "  (ka)^2/2       r = {baseline:.6e}  (rel. diff {:.3}%)",
            100.0 * rel_diff(z.r, baseline)
        );
        let pass = d <= max_rel;
        println!("{}", if pass { "PASS" } else { "FAIL" });
        return Ok(if pass { Outcome::Success } else { Outcome::Incomplete });
    }

    let (kind, spec) = radiator(&args.radiator, cfg)?;
    let tol = tolerance(&args.tol, cfg)?;
    let spectral = impedance(&spec, ka, tol)?;
    let reference = if args.extrapolate {
        oracle::bruteforce_extrapolated(&spec, mesh_n, &[ka], &medium)?.remove(0)
    } else {
        let mesh = oracle::build_mesh(&spec, mesh_n)?;
        oracle::bruteforce_impedance(&mesh, ka, &medium)?
    };
    let (dr, dx) = (rel_diff(spectral.r, reference.r), rel_diff(spectral.x, reference.x));
    println!(
        "{} aspect {} ka = {ka}, mesh {mesh_n}{}",
        kind.label(),
        spec.aspect(),
        if args.extrapolate {
            " (extrapolated from n/2 and n)"
        } else {
            ""
        }
    );
    println!(
        "  spectral  r = {:.6e}  x = {:.6e}  converged {}",
        spectral.r, spectral.x, spectral.converged
    );
    println!("  oracle    r = {:.6e}  x = {:.6e}", reference.r, reference.x);
    println!(
        "  rel. diff r = {:.3}%  x = {:.3}%  (limit {:.3}%)",
        100.0 * dr,
        100.0 * dx,
        100.0 * max_rel
    );
    let pass = dr <= max_rel && dx <= max_rel;
    println!("{}", if pass { "PASS" } else { "FAIL" });
    Ok(if pass { Outcome::Success } else { Outcome::Incomplete })
}

pub fn compare_profile(args: &ProfileArgs, cfg: &Config) -> Result<Outcome> {
    let (kind, unit) = radiator(&args.radiator, cfg)?;
    let grid = profiles::load_grid(&args.grid, args.mirror)?;
    let (xs, ys) = (grid.xs(), grid.ys());
    let a = 0.5 * (xs[xs.len() - 1] - xs[0]);
    let spec = match unit.kind {
        RadiatorKind::Circular => RadiatorSpec::circular(a),
        RadiatorKind::Rect2D => RadiatorSpec::rect2d(a, a * unit.aspect()),
        RadiatorKind::Rect1D => RadiatorSpec::rect1d(a, a * unit.aspect()),
    }
    .context("grid extent does not define a valid aperture")?;
    let model = ProfileModel::new(spec);
    let are = profiles::are(&grid, &model)?;

    let (lo, hi) = grid
        .values()
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    println!(
        "grid {}: {} x {} nodes{}",
        args.grid.display(),
        xs.len(),
        ys.len(),
        if args.mirror { " after mirroring" } else { "" }
    );
    println!(
        "  x in [{:.6e}, {:.6e}], y in [{:.6e}, {:.6e}]",
        xs[0],
        xs[xs.len() - 1],
        ys[0],
        ys[ys.len() - 1]
    );
    println!("  values in [{lo:.6e}, {hi:.6e}], peak {:.6e}", grid.peak());
    println!("  model {} with a = {a:.6e}, aspect {}", kind.label(), spec.aspect());
    println!("ARE {:.2}%", 100.0 * are);
    Ok(Outcome::Success)
}
