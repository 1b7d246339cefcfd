//! Scaling experiments: the focusing, plate and cone families and the
//! local-smoothing probe, each run over dyadic scales `j` with a log₂-slope
//! fit of the output/input norm ratio.
//!
//! Grids are chosen per scale so that the Nyquist frequency exceeds the top
//! input frequency by [`RESOLUTION_MARGIN`]; multipliers are applied exactly
//! on the frequency lattice, so no aliasing is created after that point.

pub mod config;
pub mod regression;
mod report;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exponents::{format_rational, sigma_terms, smoothing_order, to_f64, Rational};
use crate::field::mask::{make_mask, MaskKind, RegionMask};
use crate::field::norms::{lebesgue_norm, norm_of_moduli, LebesgueExponent};
use crate::field::{FieldError, GridField, GridSpec, Representation};
use crate::operators::cutoff::{annular_bump, ANNULUS_OUTER};
use crate::operators::{
    apply_multiplier, cutoff, maximal_over_t, uniform_t_grid, CutoffSpec, OperatorError,
    RadialGroups, RadialMultiplier,
};

pub use config::{
    ConeGeometry, ConeRadial, ExperimentConfig, Family, LebesgueIndex, SmoothingInput,
    RESOLUTION_MARGIN,
};
pub use regression::{ols, FitError, LineFit};
pub use report::{write_report_csv, ReportSummary, CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("refusing to run unresolved grid: {0}")]
    Resolution(FieldError),
    #[error(transparent)]
    Operator(OperatorError),
    #[error(transparent)]
    Fit(#[from] FitError),
}

impl From<FieldError> for ExperimentError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Unresolved { .. } => ExperimentError::Resolution(e),
            FieldError::MaskOutOfBox(_) | FieldError::MaskParameters(_) => {
                ExperimentError::Config(e.to_string())
            }
            other => ExperimentError::Operator(OperatorError::Field(other)),
        }
    }
}

impl From<OperatorError> for ExperimentError {
    fn from(e: OperatorError) -> Self {
        match e {
            OperatorError::Field(f) => f.into(),
            OperatorError::Invalid(m) => ExperimentError::Config(m),
            other => ExperimentError::Operator(other),
        }
    }
}

/// Where the maximizing `t` sits relative to `|x|` over the output mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArgmaxStats {
    pub median_offset: f64,
    pub median_abs_offset: f64,
    /// Fraction of mask cells with `|t* - |x|| <= 2^{-j}`.
    pub within_scale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub j: u32,
    pub points_per_axis: usize,
    pub box_length: f64,
    pub t_count: usize,
    pub in_norm: f64,
    pub out_norm_restricted: f64,
    pub out_norm_full: f64,
    /// `out_norm_restricted / in_norm`.
    pub ratio: f64,
    pub log2_ratio: f64,
    #[serde(default)]
    pub argmax: Option<ArgmaxStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// How the fitted slope is judged against the prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|fitted - predicted| <= tolerance`.
    Match,
    /// `fitted <= predicted + tolerance`; the fitted value is a lower
    /// estimate of the true exponent.
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub config: ExperimentConfig,
    pub rows: Vec<ScalingRow>,
    pub slope_window: (u32, u32),
    pub fitted_slope: f64,
    pub fit_residual_max: f64,
    /// Log₂-slope of `in_norm` over the same window.
    pub in_norm_slope: f64,
    /// Exact exponent from the exponent calculus, before the `-Re α` shift.
    pub predicted_exponent: String,
    pub predicted_slope: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub flags: Vec<String>,
}

/// Fit residuals beyond this many log₂ units are flagged in the report.
pub const RESIDUAL_FLAG: f64 = 0.1;

/// Least squares of `log2_ratio` against `j` over the inclusive window.
pub fn fit_slope(rows: &[ScalingRow], window: (u32, u32)) -> Result<LineFit, FitError> {
    fit_by(rows, window, |r| r.log2_ratio)
}

fn fit_by(
    rows: &[ScalingRow],
    window: (u32, u32),
    y: impl Fn(&ScalingRow) -> f64,
) -> Result<LineFit, FitError> {
    let picked: Vec<&ScalingRow> = rows
        .iter()
        .filter(|r| r.j >= window.0 && r.j <= window.1)
        .collect();
    let xs: Vec<f64> = picked.iter().map(|r| r.j as f64).collect();
    let ys: Vec<f64> = picked.iter().map(|r| y(r)).collect();
    ols(&xs, &ys)
}

/// The exact exponent a family is compared with: the matching maximand of
/// the necessary order for the three sharpness families, the
/// local-smoothing order for the probe.
pub fn predicted_exponent(config: &ExperimentConfig) -> Result<Rational, ExperimentError> {
    let point = config.point()?;
    let terms = sigma_terms(&point);
    Ok(match config.family {
        Family::Focusing => terms[0],
        Family::Plate => terms[1],
        Family::Cone => terms[2],
        Family::Smoothing => {
            smoothing_order(&point).map_err(|e| ExperimentError::Config(e.to_string()))?
        }
    })
}

/// Predicted log₂-slope of the norm ratio.
pub fn predicted_slope(config: &ExperimentConfig) -> Result<f64, ExperimentError> {
    let e = to_f64(&predicted_exponent(config)?);
    Ok(match config.family {
        Family::Smoothing => e,
        _ => e - config.alpha.re,
    })
}

/// Largest frequency in the input at scale `j`.
pub fn top_frequency(config: &ExperimentConfig, j: u32) -> f64 {
    let s = 2f64.powi(j as i32);
    match config.family {
        Family::Focusing | Family::Cone => 2.0 * config.m * s,
        Family::Plate => CutoffSpec::Plate {
            j,
            delta: config.delta,
        }
        .support_extent()
        .unwrap_or(f64::INFINITY),
        Family::Smoothing => ANNULUS_OUTER * smoothing_scale(j),
    }
}

/// Grid for scale `j`: the configured size, or the smallest power of two
/// meeting the resolution margin. Refuses anything above the cap.
pub fn grid_for(config: &ExperimentConfig, j: u32) -> Result<GridSpec, ExperimentError> {
    let c = config.materialized();
    let l = c.box_length.unwrap();
    let needed = RESOLUTION_MARGIN * top_frequency(&c, j);
    let n = match c.points_per_axis {
        Some(n) => n,
        None => ((2.0 * l * needed).ceil() as usize)
            .next_power_of_two()
            .max(32),
    };
    let spec = GridSpec::new(c.dim, n, l)?;
    spec.require_resolved(needed)?;
    let cap = c.max_points_per_axis.unwrap();
    if n > cap {
        return Err(ExperimentError::Resolution(FieldError::Unresolved {
            points: cap,
            box_length: l,
            nyquist: cap as f64 / (2.0 * l),
            needed,
        }));
    }
    Ok(spec)
}

/// Checks the configuration and every per-scale grid without running.
pub fn preflight(config: &ExperimentConfig) -> Result<Vec<GridSpec>, ExperimentError> {
    config.validate()?;
    let c = config.materialized();
    (c.j_min.unwrap()..=c.j_max.unwrap())
        .map(|j| grid_for(&c, j))
        .collect()
}

fn t_grid(config: &ExperimentConfig, j: u32) -> Vec<f64> {
    uniform_t_grid(1.0, 2.0, 2f64.powi(-(j as i32)) / config.t_per_scale)
}

fn e1(dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    v
}

fn norm_in(field: &GridField, p: LebesgueIndex) -> Result<f64, ExperimentError> {
    Ok(lebesgue_norm(
        field,
        p.exponent(),
        &RegionMask::full(*field.spec()),
    )?)
}

fn row(
    j: u32,
    spec: &GridSpec,
    t_count: usize,
    in_norm: f64,
    restricted: f64,
    full: f64,
) -> ScalingRow {
    let ratio = restricted / in_norm;
    ScalingRow {
        j,
        points_per_axis: spec.points_per_axis,
        box_length: spec.box_length,
        t_count,
        in_norm,
        out_norm_restricted: restricted,
        out_norm_full: full,
        ratio,
        log2_ratio: ratio.log2(),
        argmax: None,
    }
}

/// `f̂_j = e^{-2πi|ξ|} φ(2^{-j}|ξ|)`, a shell of radius 1 that the unit
/// spherical mean refocuses at the origin.
pub fn focusing_input(
    config: &ExperimentConfig,
    spec: GridSpec,
    j: u32,
) -> Result<GridField, ExperimentError> {
    let f = GridField::from_frequency_fn(spec, |_| Complex64::new(1.0, 0.0));
    let f = cutoff(
        &f,
        &CutoffSpec::RadialBump {
            m: config.m * 2f64.powi(j as i32),
        },
    )?;
    Ok(cutoff(&f, &CutoffSpec::Chirp { shift: 1.0 })?)
}

pub fn plate_input(
    config: &ExperimentConfig,
    spec: GridSpec,
    j: u32,
) -> Result<GridField, ExperimentError> {
    let f = GridField::from_frequency_fn(spec, |_| Complex64::new(1.0, 0.0));
    Ok(cutoff(
        &f,
        &CutoffSpec::Plate {
            j,
            delta: config.delta,
        },
    )?)
}

/// `f̂_j = ψ_j(|ξ|) χ(ξ)` (or `φ(2^{-j}|ξ|) χ(ξ)` with
/// [`ConeRadial::Bump`]) with `χ` a smooth conic sector around `e₁`.
pub fn cone_input(
    config: &ExperimentConfig,
    spec: GridSpec,
    j: u32,
) -> Result<GridField, ExperimentError> {
    let f = GridField::from_frequency_fn(spec, |_| Complex64::new(1.0, 0.0));
    let radial = match config.cone.radial {
        ConeRadial::Dyadic => CutoffSpec::Dyadic { j, m: config.m },
        ConeRadial::Bump => CutoffSpec::RadialBump {
            m: config.m * 2f64.powi(j as i32),
        },
    };
    let f = cutoff(&f, &radial)?;
    Ok(cutoff(
        &f,
        &CutoffSpec::ConeSector {
            direction: e1(spec.dim),
            inner: config.cone.inner,
            outer: config.cone.outer,
        },
    )?)
}

/// Annulus scale for the smoothing probe: the bump is supported in
/// `[2^{k-1}, 3·2^{k-1}] ⊂ [2^{k-1}, 2^{k+1}]`.
fn smoothing_scale(k: u32) -> f64 {
    2f64.powi(k as i32 + 1) / 3.0
}

pub fn smoothing_input(config: &ExperimentConfig, spec: GridSpec, k: u32) -> GridField {
    let scale = smoothing_scale(k);
    let bump = GridField::from_frequency_fn(spec, |xi| {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        Complex64::new(annular_bump(r / scale), 0.0)
    });
    match config.smoothing_input {
        SmoothingInput::Bump => bump,
        SmoothingInput::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ (u64::from(k) << 32));
            let mut f = bump;
            for v in f.samples_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *v *= Complex64::new(re, im);
            }
            f
        }
    }
}

fn focusing_row(c: &ExperimentConfig, j: u32) -> Result<ScalingRow, ExperimentError> {
    let spec = grid_for(c, j)?;
    let mask = make_mask(
        spec,
        MaskKind::Ball {
            center: vec![0.0; spec.dim],
            radius: c.epsilon * 2f64.powi(-(j as i32)),
        },
    )?;
    if mask.count() == 0 {
        return Err(ExperimentError::Config(format!(
            "focusing window is empty at j = {j}"
        )));
    }
    let f = focusing_input(c, spec, j)?;
    let out = apply_multiplier(
        &f,
        &RadialMultiplier::spherical_mean(spec.dim, c.alpha, 1.0),
    )?
    .to_representation(Representation::Space);
    let input = f.to_representation(Representation::Space);
    let q = c.q.exponent();
    Ok(row(
        j,
        &spec,
        1,
        norm_in(&input, c.p)?,
        lebesgue_norm(&out, q, &mask)?,
        norm_in(&out, c.q)?,
    ))
}

fn plate_row(c: &ExperimentConfig, j: u32) -> Result<ScalingRow, ExperimentError> {
    let spec = grid_for(c, j)?;
    let mask = make_mask(
        spec,
        MaskKind::Slab {
            x1_min: 1.0,
            x1_max: 2.0,
            transverse_radius: 2f64.powf(-(j as f64) / 2.0),
        },
    )?;
    let f = plate_input(c, spec, j)?;
    let ts = t_grid(c, j);
    let out = maximal_over_t(&f, c.alpha, &ts)?;
    let input = f.to_representation(Representation::Space);
    Ok(row(
        j,
        &spec,
        ts.len(),
        norm_in(&input, c.p)?,
        lebesgue_norm(&out.field, c.q.exponent(), &mask)?,
        norm_in(&out.field, c.q)?,
    ))
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

fn cone_row(c: &ExperimentConfig, j: u32) -> Result<ScalingRow, ExperimentError> {
    let spec = grid_for(c, j)?;
    let mask = make_mask(
        spec,
        MaskKind::Sector {
            direction: e1(spec.dim),
            width: c.cone.sector_width,
            r_min: 1.0,
            r_max: 2.0,
        },
    )?;
    if mask.count() == 0 {
        return Err(ExperimentError::Config(format!(
            "cone sector is empty at j = {j}"
        )));
    }
    let f = cone_input(c, spec, j)?;
    let ts = t_grid(c, j);
    let out = maximal_over_t(&f, c.alpha, &ts)?;
    let input = f.to_representation(Representation::Space);
    let mut r = row(
        j,
        &spec,
        ts.len(),
        norm_in(&input, c.p)?,
        lebesgue_norm(&out.field, c.q.exponent(), &mask)?,
        norm_in(&out.field, c.q)?,
    );
    let mut idx = vec![0usize; spec.dim];
    let offsets: Vec<f64> = mask
        .indices()
        .into_iter()
        .map(|k| {
            spec.multi_index(k, &mut idx);
            let radius = idx
                .iter()
                .map(|&i| spec.coordinate(i).powi(2))
                .sum::<f64>()
                .sqrt();
            ts[out.argmax[k] as usize] - radius
        })
        .collect();
    let scale = 2f64.powi(-(j as i32));
    let within = offsets.iter().filter(|o| o.abs() <= scale).count() as f64 / offsets.len() as f64;
    r.argmax = Some(ArgmaxStats {
        median_offset: median(offsets.clone()),
        median_abs_offset: median(offsets.iter().map(|o| o.abs()).collect()),
        within_scale: within,
    });
    Ok(r)
}

/// Accumulates the space-time norm `(∫₁² ‖u(t)‖_q^q dt)^{1/q}` (or the
/// space-time maximum for `q = ∞`) over a uniform `t`-grid with the
/// trapezoid rule.
struct SpaceTimeNorm {
    q: LebesgueExponent,
    acc: f64,
}

impl SpaceTimeNorm {
    fn add(&mut self, moduli: &[f64], cell: f64, weight: f64) {
        let v = norm_of_moduli(moduli, self.q, cell);
        match self.q {
            LebesgueExponent::Infinite => self.acc = self.acc.max(v),
            LebesgueExponent::Finite(q) => self.acc += weight * v.powf(q),
        }
    }

    fn value(&self) -> f64 {
        match self.q {
            LebesgueExponent::Infinite => self.acc,
            LebesgueExponent::Finite(q) => self.acc.powf(1.0 / q),
        }
    }
}

/// One probe pass at scale `k` serving several `(p, q)` pairs: returns
/// `(t_count, in norms per pair, out norms per pair)`.
fn smoothing_pass(
    c: &ExperimentConfig,
    spec: GridSpec,
    k: u32,
    pairs: &[(LebesgueIndex, LebesgueIndex)],
) -> Result<(usize, Vec<f64>, Vec<f64>), ExperimentError> {
    let fh = smoothing_input(c, spec, k);
    let input = fh.to_representation(Representation::Space);
    let ins = pairs
        .iter()
        .map(|(p, _)| norm_in(&input, *p))
        .collect::<Result<Vec<_>, _>>()?;
    let ts = t_grid(c, k);
    let dt = 1.0 / (ts.len() - 1).max(1) as f64;
    let mut accs: Vec<SpaceTimeNorm> = pairs
        .iter()
        .map(|(_, q)| SpaceTimeNorm {
            q: q.exponent(),
            acc: 0.0,
        })
        .collect();
    let groups = RadialGroups::support(&fh);
    let mut slice = GridField::zeros(spec, Representation::Frequency);
    let cell = spec.cell_volume();
    for (i, &t) in ts.iter().enumerate() {
        let values = groups.evaluate(&|r| Complex64::from_polar(1.0, 2.0 * PI * t * r));
        slice.relabel(Representation::Frequency);
        groups.multiply_into(fh.samples(), &values, slice.samples_mut());
        slice.ensure(Representation::Space);
        let moduli: Vec<f64> = slice.samples().iter().map(|v| v.norm()).collect();
        let w = if ts.len() == 1 {
            1.0
        } else if i == 0 || i + 1 == ts.len() {
            dt / 2.0
        } else {
            dt
        };
        for a in &mut accs {
            a.add(&moduli, cell, w);
        }
    }
    Ok((
        ts.len(),
        ins,
        accs.iter().map(SpaceTimeNorm::value).collect(),
    ))
}

fn finish(c: ExperimentConfig, rows: Vec<ScalingRow>) -> Result<ScalingReport, ExperimentError> {
    let window = c.window.unwrap();
    let fit = fit_slope(&rows, window)?;
    let in_fit = fit_by(&rows, window, |r| r.in_norm.log2())?;
    let exponent = predicted_exponent(&c)?;
    let predicted = predicted_slope(&c)?;
    let tolerance = c.tolerance.unwrap();
    let comparison = if c.family == Family::Smoothing {
        Comparison::UpperBound
    } else {
        Comparison::Match
    };
    let ok = match comparison {
        Comparison::Match => (fit.slope - predicted).abs() <= tolerance,
        Comparison::UpperBound => fit.slope <= predicted + tolerance,
    };
    let mut flags = Vec::new();
    if fit.residual_max > RESIDUAL_FLAG {
        flags.push(format!(
            "large regression residual {:.3} (preasymptotic scales?)",
            fit.residual_max
        ));
    }
    if c.family == Family::Smoothing && c.smoothing_input == SmoothingInput::Random {
        flags.push("random inputs: fitted slope is a lower estimate".into());
    }
    Ok(ScalingReport {
        config: c,
        rows,
        slope_window: window,
        fitted_slope: fit.slope,
        fit_residual_max: fit.residual_max,
        in_norm_slope: in_fit.slope,
        predicted_exponent: format_rational(&exponent),
        predicted_slope: predicted,
        comparison,
        tolerance,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        flags,
    })
}

fn run_rows(
    config: &ExperimentConfig,
    family: Family,
    one: fn(&ExperimentConfig, u32) -> Result<ScalingRow, ExperimentError>,
) -> Result<ScalingReport, ExperimentError> {
    if config.family != family {
        return Err(ExperimentError::Config(format!(
            "expected a {} configuration",
            family.as_str()
        )));
    }
    preflight(config)?;
    let c = config.materialized();
    // scales run one after another: each is parallel inside and a 2048²
    // run holds several full fields
    let rows = (c.j_min.unwrap()..=c.j_max.unwrap())
        .map(|j| one(&c, j))
        .collect::<Result<Vec<_>, _>>()?;
    finish(c, rows)
}

/// Focusing family at `t = 1`; output measured on `|x| <= ε 2^{-j}`.
pub fn run_focusing(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    run_rows(config, Family::Focusing, focusing_row)
}

/// Plate family under the maximal operator; output measured on the slab
/// `1 <= x₁ <= 2, |x'| <= 2^{-j/2}`.
pub fn run_plate(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    run_rows(config, Family::Plate, plate_row)
}

/// Cone family under the maximal operator; output measured on the sector
/// `1 <= |x| <= 2` around `e₁`. Rows carry argmax-`t` statistics.
pub fn run_cone(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    run_rows(config, Family::Cone, cone_row)
}

/// Local-smoothing probe at the configured `(p, q)`.
pub fn run_smoothing(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    let mut reports = run_smoothing_pairs(config, &[(config.p, config.q)])?;
    Ok(reports.remove(0))
}

/// Local-smoothing probe for several `(p, q)` pairs from one pass over the
/// propagated fields; the configured `(p, q)` is ignored.
pub fn run_smoothing_pairs(
    config: &ExperimentConfig,
    pairs: &[(LebesgueIndex, LebesgueIndex)],
) -> Result<Vec<ScalingReport>, ExperimentError> {
    if config.family != Family::Smoothing {
        return Err(ExperimentError::Config(
            "expected a smoothing configuration".into(),
        ));
    }
    if pairs.is_empty() {
        return Err(ExperimentError::Config("no (p, q) pairs".into()));
    }
    let configs: Vec<ExperimentConfig> = pairs
        .iter()
        .map(|&(p, q)| ExperimentConfig {
            p,
            q,
            ..config.clone()
        })
        .collect();
    for c in &configs {
        preflight(c)?;
    }
    let c = config.materialized();
    let mut rows: Vec<Vec<ScalingRow>> = vec![Vec::new(); pairs.len()];
    for k in c.j_min.unwrap()..=c.j_max.unwrap() {
        let spec = grid_for(&c, k)?;
        let (t_count, ins, outs) = smoothing_pass(&c, spec, k, pairs)?;
        for (i, rs) in rows.iter_mut().enumerate() {
            rs.push(row(k, &spec, t_count, ins[i], outs[i], outs[i]));
        }
    }
    configs
        .into_iter()
        .zip(rows)
        .map(|(c, r)| finish(c.materialized(), r))
        .collect()
}

/// Runs the configured family.
pub fn run(config: &ExperimentConfig) -> Result<ScalingReport, ExperimentError> {
    match config.family {
        Family::Focusing => run_focusing(config),
        Family::Plate => run_plate(config),
        Family::Cone => run_cone(config),
        Family::Smoothing => run_smoothing(config),
    }
}

/// Reruns the experiment with `delta` (plate) or `epsilon` (focusing)
/// replaced by each value; returns `(value, fitted slope)`.
pub fn sensitivity(
    config: &ExperimentConfig,
    values: &[f64],
) -> Result<Vec<(f64, f64)>, ExperimentError> {
    values
        .iter()
        .map(|&v| {
            let mut c = config.clone();
            match c.family {
                Family::Plate => c.delta = v,
                Family::Focusing => c.epsilon = v,
                _ => {
                    return Err(ExperimentError::Config(
                        "sensitivity sweeps apply to the plate (δ) and focusing (ε) families"
                            .into(),
                    ))
                }
            }
            Ok((v, run(&c)?.fitted_slope))
        })
        .collect()
}
