//! Spherical means of complex order as radial Fourier multipliers, the
//! maximal operator over a `t`-grid, half-wave propagators and frequency
//! cutoffs.
//!
//! The mean of order `α` has symbol
//! `m̂_α(ξ) = π^{1-α} |ξ|^{-β} J_β(2π|ξ|)` with `β = n/2 + α - 1`, which equals
//! `π^{n/2} (πr)^{-β} J_β(2πr)`: an entire function of `α` and of `r = |ξ|`.
//! It is evaluated in that form, so `Re α <= 0` needs no special handling.

pub mod cutoff;
pub mod decompose;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldError, GridField, GridSpec, Representation};
use crate::specfun::{ComplexOrder, ScaledBessel, SpecFunError};

pub use cutoff::{cutoff, CutoffSpec};
pub use decompose::{decompose_multiplier, Decomposition};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Field(FieldError),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("t-grid must be nonempty")]
    EmptyTGrid,
    #[error("t-grid must be sorted, finite and positive")]
    BadTGrid,
    #[error("{0}")]
    Invalid(String),
}

/// Sign of a half-wave phase `e^{±2πit|ξ|}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveSign {
    Plus,
    Minus,
}

impl WaveSign {
    pub fn factor(self) -> f64 {
        match self {
            WaveSign::Plus => 1.0,
            WaveSign::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MultiplierKind {
    /// `m̂_α(t r)` as defined in the module docs.
    SphericalMean,
    /// `m̂_α(t r) / m̂_α(0)`, unit total mass; for `α = 0` this is the
    /// normalized surface measure. Undefined where `m̂_α(0) = 0`.
    NormalizedSphericalMean,
    /// `e^{±2πit r}`.
    HalfWave { sign: WaveSign },
    /// `(1 + (t r)²)^{s/2}`.
    BracketPower { s: f64 },
    /// A radial cutoff evaluated at `t r`.
    Cutoff { cutoff: CutoffSpec },
}

/// A radial symbol `r ↦ m(t r)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialMultiplier {
    pub dim: usize,
    pub order: ComplexOrder,
    pub kind: MultiplierKind,
    pub t: f64,
}

impl RadialMultiplier {
    pub fn spherical_mean(dim: usize, alpha: ComplexOrder, t: f64) -> Self {
        RadialMultiplier {
            dim,
            order: alpha,
            kind: MultiplierKind::SphericalMean,
            t,
        }
    }

    pub fn half_wave(dim: usize, t: f64, sign: WaveSign) -> Self {
        RadialMultiplier {
            dim,
            order: ComplexOrder::real(0.0),
            kind: MultiplierKind::HalfWave { sign },
            t,
        }
    }

    /// Precomputes what repeated evaluation needs.
    pub fn evaluator(&self) -> Result<MultiplierEval, OperatorError> {
        if self.dim == 0 {
            return Err(OperatorError::Invalid("dimension must be >= 1".into()));
        }
        if !self.t.is_finite() {
            return Err(OperatorError::Invalid("t must be finite".into()));
        }
        let inner = match &self.kind {
            MultiplierKind::SphericalMean => EvalKind::Mean(
                SphericalSymbol::new(self.dim, self.order),
                Complex64::new(1.0, 0.0),
            ),
            MultiplierKind::NormalizedSphericalMean => {
                let sym = SphericalSymbol::new(self.dim, self.order);
                let at_zero = sym.eval(0.0);
                if at_zero.norm() == 0.0 {
                    return Err(OperatorError::Invalid(
                        "symbol vanishes at the origin; cannot normalize".into(),
                    ));
                }
                EvalKind::Mean(sym, at_zero.inv())
            }
            MultiplierKind::HalfWave { sign } => EvalKind::Wave(sign.factor()),
            MultiplierKind::BracketPower { s } => EvalKind::Bracket(*s),
            MultiplierKind::Cutoff { cutoff } => {
                if cutoff.support_radius().is_none() && !matches!(cutoff, CutoffSpec::Chirp { .. })
                {
                    return Err(OperatorError::Invalid("cutoff is not radial".into()));
                }
                if matches!(cutoff, CutoffSpec::Plate { .. }) {
                    return Err(OperatorError::Invalid("cutoff is not radial".into()));
                }
                EvalKind::Cutoff(cutoff.clone())
            }
        };
        Ok(MultiplierEval { t: self.t, inner })
    }
}

#[derive(Debug, Clone)]
enum EvalKind {
    Mean(SphericalSymbol, Complex64),
    Wave(f64),
    Bracket(f64),
    Cutoff(CutoffSpec),
}

/// Ready-to-evaluate radial symbol.
#[derive(Debug, Clone)]
pub struct MultiplierEval {
    t: f64,
    inner: EvalKind,
}

impl MultiplierEval {
    /// Value at `|ξ| = r` (the dilation `t` is applied here).
    pub fn eval(&self, r: f64) -> Complex64 {
        let s = self.t * r;
        match &self.inner {
            EvalKind::Mean(sym, w) => sym.eval(s) * *w,
            EvalKind::Wave(sign) => Complex64::from_polar(1.0, sign * 2.0 * PI * s),
            EvalKind::Bracket(p) => Complex64::new((1.0 + s * s).powf(p / 2.0), 0.0),
            EvalKind::Cutoff(c) => c.value(&[s.abs()]),
        }
    }
}

/// `m̂_α(r) = π^{n/2} (πr)^{-β} J_β(2πr)` for one `(n, α)`.
#[derive(Debug, Clone)]
pub struct SphericalSymbol {
    bessel: ScaledBessel,
    prefactor: f64,
}

impl SphericalSymbol {
    pub fn new(dim: usize, alpha: ComplexOrder) -> Self {
        SphericalSymbol {
            bessel: ScaledBessel::new(alpha.bessel_order(dim)),
            prefactor: PI.powf(dim as f64 / 2.0),
        }
    }

    /// Value at `r >= 0`; even in `r`.
    #[inline]
    pub fn eval(&self, r: f64) -> Complex64 {
        self.bessel.scaled(2.0 * PI * r.abs()) * self.prefactor
    }
}

/// `m̂_α(r)`, entire in `α`; `π^{n/2} / Γ(n/2 + α)` at `r = 0`.
pub fn spherical_multiplier(
    dim: usize,
    alpha: ComplexOrder,
    r: f64,
) -> Result<Complex64, OperatorError> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(OperatorError::Invalid(
            "radius must be finite and >= 0".into(),
        ));
    }
    Ok(SphericalSymbol::new(dim, alpha).eval(r))
}

/// `m̂_α(r) / m̂_α(0)`: the mean normalized to unit total mass. At `α = 0`
/// this is the Fourier transform of normalized surface measure, e.g.
/// `sin(2πr) / (2πr)` for `n = 3`.
pub fn normalized_spherical_multiplier(
    dim: usize,
    alpha: ComplexOrder,
    r: f64,
) -> Result<Complex64, OperatorError> {
    RadialMultiplier {
        dim,
        order: alpha,
        kind: MultiplierKind::NormalizedSphericalMean,
        t: 1.0,
    }
    .evaluator()
    .map(|e| e.eval(r))
}

/// Lattice points of a frequency field grouped by the exact integer `|k|²`,
/// so a radial symbol is evaluated once per distinct radius.
#[derive(Debug, Clone)]
pub struct RadialGroups {
    box_length: f64,
    /// Distinct `|k|²` in increasing order.
    keys: Vec<u64>,
    /// `starts[g]..starts[g+1]` indexes `members` for group `g`.
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl RadialGroups {
    /// Groups the indices where `keep` is true.
    pub fn new(grid: &GridSpec, keep: impl Fn(usize) -> bool) -> Self {
        let mut idx = vec![0usize; grid.dim];
        let mut pairs: Vec<(u64, usize)> = (0..grid.len())
            .filter(|&flat| keep(flat))
            .map(|flat| {
                grid.multi_index(flat, &mut idx);
                let k2 = idx
                    .iter()
                    .map(|&k| {
                        let s = grid.signed_index(k);
                        (s * s) as u64
                    })
                    .sum::<u64>();
                (k2, flat)
            })
            .collect();
        pairs.par_sort_unstable();
        let mut keys = Vec::new();
        let mut starts = Vec::new();
        for (i, (k2, _)) in pairs.iter().enumerate() {
            if keys.last() != Some(k2) {
                keys.push(*k2);
                starts.push(i);
            }
        }
        starts.push(pairs.len());
        RadialGroups {
            box_length: grid.box_length,
            keys,
            starts,
            members: pairs.into_iter().map(|(_, f)| f).collect(),
        }
    }

    /// All lattice points.
    pub fn all(grid: &GridSpec) -> Self {
        Self::new(grid, |_| true)
    }

    /// Points where the frequency samples are nonzero.
    pub fn support(field: &GridField) -> Self {
        let s = field.samples();
        Self::new(field.spec(), |k| s[k] != Complex64::new(0.0, 0.0))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.keys
            .iter()
            .map(|&k2| (k2 as f64).sqrt() / self.box_length)
            .collect()
    }

    /// Evaluates `symbol` once per group, in parallel.
    pub fn evaluate(&self, symbol: &(impl Fn(f64) -> Complex64 + Sync)) -> Vec<Complex64> {
        self.radii().par_iter().map(|&r| symbol(r)).collect()
    }

    /// `out[k] = src[k] · values[group(k)]` on members; other entries of
    /// `out` are set to zero.
    pub fn multiply_into(&self, src: &[Complex64], values: &[Complex64], out: &mut [Complex64]) {
        out.par_iter_mut()
            .for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (g, value) in values.iter().enumerate() {
            for &k in &self.members[self.starts[g]..self.starts[g + 1]] {
                out[k] = src[k] * value;
            }
        }
    }

    /// In-place `data[k] *= values[group(k)]` on members.
    pub fn multiply_in_place(&self, data: &mut [Complex64], values: &[Complex64]) {
        for (g, value) in values.iter().enumerate() {
            for &k in &self.members[self.starts[g]..self.starts[g + 1]] {
                data[k] *= value;
            }
        }
    }
}

/// `f̂(ξ) · m(t|ξ|)`; the output is in the input's representation.
pub fn apply_multiplier(
    field: &GridField,
    mult: &RadialMultiplier,
) -> Result<GridField, OperatorError> {
    if mult.dim != field.spec().dim {
        return Err(OperatorError::Invalid(
            "multiplier and field dimensions differ".into(),
        ));
    }
    let eval = mult.evaluator()?;
    let original = field.representation();
    let mut g = field.to_representation(Representation::Frequency);
    let groups = RadialGroups::all(g.spec());
    let values = groups.evaluate(&|r| eval.eval(r));
    groups.multiply_in_place(g.samples_mut(), &values);
    g.ensure(original);
    Ok(g)
}

/// `e^{±2πit|ξ|}` applied to the field.
pub fn half_wave(field: &GridField, t: f64, sign: WaveSign) -> Result<GridField, OperatorError> {
    apply_multiplier(
        field,
        &RadialMultiplier::half_wave(field.spec().dim, t, sign),
    )
}

/// Pointwise `sup_t |𝔐ᵅ_t f|` over a grid, with the first maximizing `t`
/// index per point.
#[derive(Debug, Clone)]
pub struct MaximalOutput {
    pub field: GridField,
    pub argmax: Vec<u32>,
}

fn check_t_grid(t_grid: &[f64]) -> Result<(), OperatorError> {
    if t_grid.is_empty() {
        return Err(OperatorError::EmptyTGrid);
    }
    if t_grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) || t_grid.windows(2).any(|w| w[0] > w[1])
    {
        return Err(OperatorError::BadTGrid);
    }
    Ok(())
}

/// Supremum over `t_grid` of `|𝔐ᵅ_t f|`. Slices are processed in `t` order
/// with each FFT parallel internally, so the result and the argmax
/// tie-break (first `t` wins) are deterministic.
pub fn maximal_over_t(
    field: &GridField,
    alpha: ComplexOrder,
    t_grid: &[f64],
) -> Result<MaximalOutput, OperatorError> {
    let dim = field.spec().dim;
    let symbol = SphericalSymbol::new(dim, alpha);
    maximal_with_symbol(field, t_grid, &|r| symbol.eval(r))
}

/// Maximal function of an arbitrary radial symbol `r ↦ m(r)` dilated over
/// `t_grid`.
pub fn maximal_with_symbol(
    field: &GridField,
    t_grid: &[f64],
    symbol: &(impl Fn(f64) -> Complex64 + Sync),
) -> Result<MaximalOutput, OperatorError> {
    check_t_grid(t_grid)?;
    let spec = *field.spec();
    let fh = field.to_representation(Representation::Frequency);
    let groups = RadialGroups::support(&fh);
    let mut best = vec![0.0f64; spec.len()];
    let mut argmax = vec![0u32; spec.len()];
    let mut slice = GridField::zeros(spec, Representation::Frequency);
    for (ti, &t) in t_grid.iter().enumerate() {
        let values = groups.evaluate(&|r| symbol(t * r));
        slice.relabel(Representation::Frequency);
        groups.multiply_into(fh.samples(), &values, slice.samples_mut());
        slice.ensure(Representation::Space);
        best.par_iter_mut()
            .zip(argmax.par_iter_mut())
            .zip(slice.samples().par_iter())
            .for_each(|((b, a), v)| {
                let m = v.norm();
                if m > *b || ti == 0 {
                    *b = m;
                    *a = ti as u32;
                }
            });
    }
    let samples = best.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    Ok(MaximalOutput {
        field: GridField::new(spec, samples, Representation::Space)?,
        argmax,
    })
}

/// Uniform grid on `[a, b]` with spacing at most `step`, endpoints included.
pub fn uniform_t_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let count = ((b - a) / step).ceil().max(1.0) as usize;
    (0..=count)
        .map(|k| a + (b - a) * k as f64 / count as f64)
        .collect()
}
