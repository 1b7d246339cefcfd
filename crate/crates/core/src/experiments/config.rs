use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExperimentError;
use crate::exponents::{format_rational, parse_rational, ExponentPoint, Rational};
use crate::field::norms::LebesgueExponent;
use crate::specfun::ComplexOrder;

/// A Lebesgue exponent `p ∈ [1, ∞]` held as the exact reciprocal `1/p`.
/// Text form: `"inf"` or a rational such as `"2"` or `"3/2"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LebesgueIndex {
    inv: Rational,
}

impl LebesgueIndex {
    pub fn from_reciprocal(inv: Rational) -> Result<Self, ExperimentError> {
        if inv < Rational::zero() || inv > Rational::one() {
            return Err(ExperimentError::Config(format!(
                "1/p = {} is outside [0, 1]",
                format_rational(&inv)
            )));
        }
        Ok(LebesgueIndex { inv })
    }

    pub fn infinite() -> Self {
        LebesgueIndex {
            inv: Rational::zero(),
        }
    }

    pub fn finite(p: i64) -> Self {
        LebesgueIndex {
            inv: Rational::new(1, p),
        }
    }

    pub fn reciprocal(&self) -> Rational {
        self.inv
    }

    pub fn is_infinite(&self) -> bool {
        self.inv.is_zero()
    }

    pub fn exponent(&self) -> LebesgueExponent {
        if self.is_infinite() {
            LebesgueExponent::Infinite
        } else {
            let inv = self.inv;
            LebesgueExponent::Finite(*inv.denom() as f64 / *inv.numer() as f64)
        }
    }
}

impl fmt::Display for LebesgueIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            f.write_str(&format_rational(&self.inv.recip()))
        }
    }
}

impl FromStr for LebesgueIndex {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "∞") {
            return Ok(Self::infinite());
        }
        let p = parse_rational(s).map_err(|e| ExperimentError::Config(e.to_string()))?;
        if p < Rational::one() {
            return Err(ExperimentError::Config(format!("exponent {s} is below 1")));
        }
        Self::from_reciprocal(p.recip())
    }
}

impl Serialize for LebesgueIndex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LebesgueIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Text(t) => t,
            Raw::Int(i) => i.to_string(),
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Focusing,
    Plate,
    Cone,
    Smoothing,
}

impl Family {
    pub fn as_str(self) -> &'static str {
        match self {
            Family::Focusing => "focusing",
            Family::Plate => "plate",
            Family::Cone => "cone",
            Family::Smoothing => "smoothing",
        }
    }
}

/// Inputs for the local-smoothing probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SmoothingInput {
    /// Deterministic radial annular bump.
    Bump,
    /// Seeded complex Gaussian noise on the frequency lattice times the bump.
    Random,
}

/// Radial profile of the cone input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeRadial {
    /// `ψ_j(|ξ|)`: frequencies in `[2^{j-1}M, 2^{j+1}M]` only.
    Dyadic,
    /// `φ(2^{-j}|ξ|)`: all frequencies up to `2^{j+1}M`. The cone symbol is
    /// not smooth at the origin, so `‖f_j‖₁` then grows like `j`.
    Bump,
}

/// Angular geometry of the cone family. Widths are chordal distances on
/// the unit sphere, `|ξ/|ξ| - v₁|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeGeometry {
    /// Frequency cutoff equals 1 inside this width.
    pub inner: f64,
    /// Frequency cutoff vanishes beyond this width.
    pub outer: f64,
    /// Width of the spatial sector `|x/|x| - v₁| <= width`, `1 <= |x| <= 2`.
    pub sector_width: f64,
    #[serde(default = "dyadic")]
    pub radial: ConeRadial,
}

fn dyadic() -> ConeRadial {
    ConeRadial::Dyadic
}

impl ConeGeometry {
    /// The narrow sector of the sharpness construction. At `j <= 6` its
    /// transverse frequency width is at most a few lattice steps.
    pub fn narrow() -> Self {
        ConeGeometry {
            inner: 1e-2,
            outer: 1.0 / 81.0,
            sector_width: 1e-2,
            radial: ConeRadial::Dyadic,
        }
    }
}

impl Default for ConeGeometry {
    fn default() -> Self {
        ConeGeometry {
            inner: 0.2,
            outer: 0.3,
            sector_width: 0.1,
            radial: ConeRadial::Dyadic,
        }
    }
}

/// One scaling experiment. Optional fields take family-dependent defaults;
/// [`ExperimentConfig::materialized`] fills them in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: Family,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub alpha: ComplexOrder,
    pub p: LebesgueIndex,
    pub q: LebesgueIndex,
    #[serde(default)]
    pub j_min: Option<u32>,
    #[serde(default)]
    pub j_max: Option<u32>,
    /// Plate width.
    #[serde(default = "quarter")]
    pub delta: f64,
    /// Focusing window `|x| <= ε 2^{-j}`.
    #[serde(default = "quarter")]
    pub epsilon: f64,
    /// Plateau radius of the radial bump `φ`.
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default)]
    pub box_length: Option<f64>,
    /// Fixed lattice size for every `j`; chosen per `j` when absent.
    #[serde(default)]
    pub points_per_axis: Option<usize>,
    #[serde(default)]
    pub max_points_per_axis: Option<usize>,
    /// `t`-grid spacing is `2^{-j} / t_per_scale` on `[1, 2]`.
    #[serde(default = "four")]
    pub t_per_scale: f64,
    #[serde(default)]
    pub seed: u64,
    /// Inclusive `j` window of the slope fit; the top three scales when
    /// absent.
    #[serde(default)]
    pub window: Option<(u32, u32)>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub cone: ConeGeometry,
    #[serde(default = "bump")]
    pub smoothing_input: SmoothingInput,
}

fn default_dim() -> usize {
    2
}
fn quarter() -> f64 {
    0.25
}
fn one() -> f64 {
    1.0
}
fn four() -> f64 {
    4.0
}
fn bump() -> SmoothingInput {
    SmoothingInput::Bump
}

/// Nyquist frequency must exceed the top input frequency by this factor.
pub const RESOLUTION_MARGIN: f64 = 1.1;

impl ExperimentConfig {
    pub fn new(family: Family, p: LebesgueIndex, q: LebesgueIndex) -> Self {
        ExperimentConfig {
            family,
            dim: 2,
            alpha: ComplexOrder::default(),
            p,
            q,
            j_min: None,
            j_max: None,
            delta: 0.25,
            epsilon: 0.25,
            m: 1.0,
            box_length: None,
            points_per_axis: None,
            max_points_per_axis: None,
            t_per_scale: 4.0,
            seed: 0,
            window: None,
            tolerance: None,
            cone: ConeGeometry::default(),
            smoothing_input: SmoothingInput::Bump,
        }
    }

    pub fn with_j_range(mut self, j_min: u32, j_max: u32) -> Self {
        self.j_min = Some(j_min);
        self.j_max = Some(j_max);
        self
    }

    pub fn with_alpha(mut self, alpha: ComplexOrder) -> Self {
        self.alpha = alpha;
        self
    }

    /// Copy with every optional field resolved to its effective value.
    pub fn materialized(&self) -> ExperimentConfig {
        let mut c = self.clone();
        let (lo, hi) = match (self.family, self.dim) {
            (Family::Cone, 2) => (3, 6),
            (Family::Smoothing, 2) => (2, 6),
            (_, 2) => (3, 7),
            _ => (2, 4),
        };
        let j_min = *c.j_min.get_or_insert(lo);
        let j_max = *c.j_max.get_or_insert(hi.max(j_min));
        c.box_length.get_or_insert(match self.family {
            Family::Focusing => 3.0,
            Family::Plate | Family::Smoothing => 5.0,
            Family::Cone => 6.0,
        });
        c.max_points_per_axis
            .get_or_insert(if self.dim == 2 { 2048 } else { 256 });
        c.window
            .get_or_insert((j_max.saturating_sub(2).max(j_min), j_max));
        c.tolerance.get_or_insert(match self.family {
            Family::Focusing | Family::Plate => 0.15,
            Family::Cone | Family::Smoothing => 0.2,
        });
        c
    }

    pub fn point(&self) -> Result<ExponentPoint, ExperimentError> {
        ExponentPoint::new(self.p.reciprocal(), self.q.reciprocal(), self.dim as u32)
            .map_err(|e| ExperimentError::Config(e.to_string()))
    }

    /// Checks everything that does not depend on the grid.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |m: String| Err(ExperimentError::Config(m));
        let c = self.materialized();
        if !(2..=3).contains(&c.dim) {
            return bad(format!("dimension must be 2 or 3, got {}", c.dim));
        }
        if c.q.reciprocal() > c.p.reciprocal() {
            return bad(format!("need q >= p, got p = {}, q = {}", c.p, c.q));
        }
        let (j_min, j_max) = (c.j_min.unwrap(), c.j_max.unwrap());
        if j_min > j_max || j_max > 20 {
            return bad(format!("bad scale range {j_min}..={j_max}"));
        }
        let (w0, w1) = c.window.unwrap();
        if w0 >= w1 || w0 < j_min || w1 > j_max {
            return bad(format!(
                "slope window {w0}..={w1} must hold two or more scales inside {j_min}..={j_max}"
            ));
        }
        if !(c.delta > 0.0 && c.delta < 2.0) {
            return bad("delta must lie in (0, 2)".into());
        }
        if !(c.epsilon > 0.0 && c.epsilon.is_finite()) {
            return bad("epsilon must be positive".into());
        }
        if !(c.m > 0.0 && c.m.is_finite()) {
            return bad("m must be positive".into());
        }
        if !(c.box_length.unwrap() > 0.0 && c.box_length.unwrap().is_finite()) {
            return bad("box_length must be positive".into());
        }
        if !(c.t_per_scale >= 1.0 && c.t_per_scale.is_finite()) {
            return bad("t_per_scale must be >= 1".into());
        }
        if !(c.tolerance.unwrap() > 0.0) {
            return bad("tolerance must be positive".into());
        }
        if let Some(n) = c.points_per_axis {
            if !n.is_power_of_two() || n < 4 {
                return bad(format!(
                    "points_per_axis must be a power of two >= 4, got {n}"
                ));
            }
        }
        let g = c.cone;
        if c.family == Family::Cone
            && !(0.0 < g.inner && g.inner < g.outer && g.outer <= 2.0 && g.sector_width > 0.0)
        {
            return bad("cone geometry needs 0 < inner < outer <= 2 and sector_width > 0".into());
        }
        self.point()?;
        Ok(())
    }
}
