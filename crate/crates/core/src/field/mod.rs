//! Periodic grid fields on the box `[-L/2, L/2)ⁿ` and their Fourier
//! transforms.
//!
//! The transform follows the convention `f̂(ξ) = ∫ e^{2πi x·ξ} f(x) dx`,
//! discretized with cell-volume weighting so that the discrete values
//! approximate the continuum integral. Axis index `k` maps to coordinate
//! `k h` for `k < N/2` and `(k - N) h` otherwise, with `h = L/N`; frequency
//! index `m` maps to `m / L` the same way. The origin is a grid point.

mod fft;
pub mod io;
pub mod mask;
pub mod norms;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use mask::{make_mask, MaskKind, RegionMask};
pub use norms::{lebesgue_norm, sobolev_norm, LebesgueExponent};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("dimension must be between 1 and {max}, got {0}", max = MAX_DIM)]
    Dimension(usize),
    #[error("points per axis must be a power of two >= 2, got {0}")]
    PointsPerAxis(usize),
    #[error("box length must be positive and finite, got {0}")]
    BoxLength(f64),
    #[error("field is in {found} representation, operation needs {needed}")]
    Representation {
        found: Representation,
        needed: Representation,
    },
    #[error("sample count {found} does not match grid size {expected}")]
    SampleCount { found: usize, expected: usize },
    #[error("grids differ")]
    GridMismatch,
    #[error("mask selects no cells")]
    EmptyMask,
    #[error("mask parameters leave the box: {0}")]
    MaskOutOfBox(String),
    #[error("invalid mask parameters: {0}")]
    MaskParameters(String),
    #[error("invalid Lebesgue exponent {0}")]
    Exponent(f64),
    #[error(
        "grid with {points} points on box {box_length} resolves frequencies up to {nyquist}, \
         needs {needed}"
    )]
    Unresolved {
        points: usize,
        box_length: f64,
        nyquist: f64,
        needed: f64,
    },
    #[error("container format: {0}")]
    Format(String),
}

/// Largest supported dimension; acceptance runs use 2 and 3.
pub const MAX_DIM: usize = 4;

/// Uniform grid with the same number of points on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub points_per_axis: usize,
    pub box_length: f64,
}

impl GridSpec {
    pub fn new(dim: usize, points_per_axis: usize, box_length: f64) -> Result<Self, FieldError> {
        let spec = GridSpec {
            dim,
            points_per_axis,
            box_length,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.dim == 0 || self.dim > MAX_DIM {
            return Err(FieldError::Dimension(self.dim));
        }
        if self.points_per_axis < 2 || !self.points_per_axis.is_power_of_two() {
            return Err(FieldError::PointsPerAxis(self.points_per_axis));
        }
        if !(self.box_length.is_finite() && self.box_length > 0.0) {
            return Err(FieldError::BoxLength(self.box_length));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `h = L/N`.
    pub fn spacing(&self) -> f64 {
        self.box_length / self.points_per_axis as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Lattice frequency step `1/L`.
    pub fn frequency_step(&self) -> f64 {
        1.0 / self.box_length
    }

    pub fn frequency_cell_volume(&self) -> f64 {
        self.frequency_step().powi(self.dim as i32)
    }

    /// Largest resolved frequency `N / (2L)`.
    pub fn nyquist(&self) -> f64 {
        self.points_per_axis as f64 / (2.0 * self.box_length)
    }

    /// Signed lattice index for axis position `k`.
    #[inline]
    pub fn signed_index(&self, k: usize) -> i64 {
        let n = self.points_per_axis;
        if k < n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// Axis position for a signed lattice index.
    #[inline]
    pub fn wrap_index(&self, m: i64) -> usize {
        m.rem_euclid(self.points_per_axis as i64) as usize
    }

    #[inline]
    pub fn coordinate(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 * self.spacing()
    }

    #[inline]
    pub fn frequency(&self, k: usize) -> f64 {
        self.signed_index(k) as f64 / self.box_length
    }

    /// Row-major flat index (last axis fastest) from an axis-position tuple.
    pub fn flat_index(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.points_per_axis + k)
    }

    /// Axis positions of a flat index.
    pub fn multi_index(&self, mut flat: usize, out: &mut [usize]) {
        for slot in out.iter_mut().rev() {
            *slot = flat % self.points_per_axis;
            flat /= self.points_per_axis;
        }
    }

    /// Euclidean length of the spatial point at each flat index.
    pub fn radii(&self) -> Vec<f64> {
        self.map_points(
            |x| x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Self::coordinate,
        )
    }

    /// `|ξ|` at each flat index.
    pub fn frequency_radii(&self) -> Vec<f64> {
        self.map_points(
            |x| x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Self::frequency,
        )
    }

    /// Evaluates `f` at every spatial (or frequency) point in flat order.
    fn map_points<T, F>(&self, f: F, axis: fn(&GridSpec, usize) -> f64) -> Vec<T>
    where
        F: Fn(&[f64]) -> T,
    {
        let axis_values: Vec<f64> = (0..self.points_per_axis).map(|k| axis(self, k)).collect();
        let mut idx = vec![0usize; self.dim];
        let mut point = vec![0.0; self.dim];
        (0..self.len())
            .map(|flat| {
                self.multi_index(flat, &mut idx);
                for (p, &k) in point.iter_mut().zip(&idx) {
                    *p = axis_values[k];
                }
                f(&point)
            })
            .collect()
    }

    /// Refuses grids whose Nyquist frequency is below `needed`.
    pub fn require_resolved(&self, needed: f64) -> Result<(), FieldError> {
        if self.nyquist() < needed {
            Err(FieldError::Unresolved {
                points: self.points_per_axis,
                box_length: self.box_length,
                nyquist: self.nyquist(),
                needed,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Space,
    Frequency,
}

impl std::fmt::Display for Representation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Representation::Space => "space",
            Representation::Frequency => "frequency",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Space to frequency, kernel `e^{+2πi x·ξ}`.
    Forward,
    /// Frequency to space, kernel `e^{-2πi x·ξ}`.
    Inverse,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    spec: GridSpec,
    samples: Vec<Complex64>,
    representation: Representation,
}

impl GridField {
    pub fn new(
        spec: GridSpec,
        samples: Vec<Complex64>,
        representation: Representation,
    ) -> Result<Self, FieldError> {
        spec.validate()?;
        if samples.len() != spec.len() {
            return Err(FieldError::SampleCount {
                found: samples.len(),
                expected: spec.len(),
            });
        }
        Ok(GridField {
            spec,
            samples,
            representation,
        })
    }

    pub fn zeros(spec: GridSpec, representation: Representation) -> Self {
        GridField {
            spec,
            samples: vec![Complex64::new(0.0, 0.0); spec.len()],
            representation,
        }
    }

    /// Samples `f(x)` at the spatial grid points.
    pub fn from_space_fn<F>(spec: GridSpec, f: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        GridField {
            samples: spec.map_points(f, GridSpec::coordinate),
            spec,
            representation: Representation::Space,
        }
    }

    /// Samples `g(ξ)` at the lattice frequencies.
    pub fn from_frequency_fn<F>(spec: GridSpec, g: F) -> Self
    where
        F: Fn(&[f64]) -> Complex64,
    {
        GridField {
            samples: spec.map_points(g, GridSpec::frequency),
            spec,
            representation: Representation::Frequency,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn representation(&self) -> Representation {
        self.representation
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// Changes the representation tag without transforming; for buffers
    /// about to be overwritten.
    pub(crate) fn relabel(&mut self, representation: Representation) {
        self.representation = representation;
    }

    pub fn require(&self, needed: Representation) -> Result<(), FieldError> {
        if self.representation == needed {
            Ok(())
        } else {
            Err(FieldError::Representation {
                found: self.representation,
                needed,
            })
        }
    }

    /// Transforms in place. `Forward` needs space representation and
    /// `Inverse` frequency representation.
    pub fn transform_in_place(&mut self, direction: Direction) -> Result<(), FieldError> {
        let spec = self.spec;
        match direction {
            Direction::Forward => {
                self.require(Representation::Space)?;
                fft::transform(&mut self.samples, &spec, true);
                let w = spec.cell_volume();
                scale(&mut self.samples, w);
                self.representation = Representation::Frequency;
            }
            Direction::Inverse => {
                self.require(Representation::Frequency)?;
                fft::transform(&mut self.samples, &spec, false);
                let w = spec.frequency_cell_volume();
                scale(&mut self.samples, w);
                self.representation = Representation::Space;
            }
        }
        Ok(())
    }

    /// Returns the field in the requested representation, transforming if
    /// needed.
    pub fn to_representation(&self, target: Representation) -> GridField {
        let mut out = self.clone();
        out.ensure(target);
        out
    }

    /// Switches representation in place if needed.
    pub fn ensure(&mut self, target: Representation) {
        if self.representation != target {
            let direction = match target {
                Representation::Frequency => Direction::Forward,
                Representation::Space => Direction::Inverse,
            };
            self.transform_in_place(direction)
                .expect("representation checked above");
        }
    }

    /// Pointwise `self = a·self + b·other`; grids and representations must
    /// match.
    pub fn axpby(
        &mut self,
        a: Complex64,
        b: Complex64,
        other: &GridField,
    ) -> Result<(), FieldError> {
        if self.spec != other.spec {
            return Err(FieldError::GridMismatch);
        }
        other.require(self.representation)?;
        for (s, o) in self.samples.iter_mut().zip(&other.samples) {
            *s = a * *s + b * *o;
        }
        Ok(())
    }
}

/// Transforms a field between representations.
pub fn transform(field: &GridField, direction: Direction) -> Result<GridField, FieldError> {
    let mut out = field.clone();
    out.transform_in_place(direction)?;
    Ok(out)
}

fn scale(samples: &mut [Complex64], w: f64) {
    use rayon::prelude::*;
    samples.par_chunks_mut(1 << 14).for_each(|chunk| {
        for v in chunk {
            *v *= w;
        }
    });
}
