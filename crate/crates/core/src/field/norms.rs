//! Riemann-sum Lebesgue and Sobolev norms.
//!
//! Sums run over fixed 16384-sample chunks, each reduced pairwise, and the
//! chunk totals are reduced pairwise in order, so results do not depend on
//! the thread count.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::mask::{Membership, RegionMask};
use super::{FieldError, GridField, Representation};

const CHUNK: usize = 1 << 14;

/// A Lebesgue exponent `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LebesgueExponent {
    Finite(f64),
    Infinite,
}

impl LebesgueExponent {
    pub fn new(p: f64) -> Result<Self, FieldError> {
        if p == f64::INFINITY {
            Ok(LebesgueExponent::Infinite)
        } else if p.is_finite() && p >= 1.0 {
            Ok(LebesgueExponent::Finite(p))
        } else {
            Err(FieldError::Exponent(p))
        }
    }

    /// From `1/p ∈ [0, 1]`.
    pub fn from_reciprocal(inv: f64) -> Result<Self, FieldError> {
        if inv == 0.0 {
            Ok(LebesgueExponent::Infinite)
        } else if (0.0..=1.0).contains(&inv) {
            Ok(LebesgueExponent::Finite(1.0 / inv))
        } else {
            Err(FieldError::Exponent(1.0 / inv))
        }
    }

    pub fn reciprocal(self) -> f64 {
        match self {
            LebesgueExponent::Finite(p) => 1.0 / p,
            LebesgueExponent::Infinite => 0.0,
        }
    }
}

/// Pairwise sum; error grows like `log n`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= 32 {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Deterministic parallel sum of `f(v)` over `values`.
pub(crate) fn chunked_sum<T, F>(values: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync,
{
    let partial: Vec<f64> = values
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mapped: Vec<f64> = chunk.iter().map(&f).collect();
            pairwise_sum(&mapped)
        })
        .collect();
    pairwise_sum(&partial)
}

fn masked_values(field: &GridField, mask: &RegionMask) -> Result<Vec<f64>, FieldError> {
    if mask.spec() != field.spec() {
        return Err(FieldError::GridMismatch);
    }
    let samples = field.samples();
    Ok(match mask.membership() {
        Membership::Full => samples.par_iter().map(|v| v.norm()).collect(),
        Membership::Cells(cells) => cells.par_iter().map(|&k| samples[k].norm()).collect(),
    })
}

/// `(Σ_{mask} |f|^p · cell volume)^{1/p}`, or the masked maximum for
/// `p = ∞`.
pub fn lebesgue_norm(
    field: &GridField,
    p: LebesgueExponent,
    mask: &RegionMask,
) -> Result<f64, FieldError> {
    field.require(Representation::Space)?;
    if mask.count() == 0 {
        return Err(FieldError::EmptyMask);
    }
    let moduli = masked_values(field, mask)?;
    Ok(norm_of_moduli(&moduli, p, field.spec().cell_volume()))
}

/// Lebesgue norm of precomputed moduli with the given cell weight.
pub(crate) fn norm_of_moduli(moduli: &[f64], p: LebesgueExponent, weight: f64) -> f64 {
    let top = moduli.par_iter().cloned().reduce(|| 0.0, f64::max);
    match p {
        LebesgueExponent::Infinite => top,
        LebesgueExponent::Finite(p) => {
            if top == 0.0 {
                return 0.0;
            }
            // normalizing by the max keeps large p from overflowing
            let s = chunked_sum(moduli, |&v| (v / top).powf(p));
            top * (s * weight).powf(1.0 / p)
        }
    }
}

/// Applies `⟨ξ⟩^s = (1 + |ξ|²)^{s/2}` on the frequency side and returns the
/// field in space representation.
pub fn apply_bracket(field: &GridField, s: f64) -> GridField {
    let mut g = field.to_representation(Representation::Frequency);
    let radii = g.spec().frequency_radii();
    g.samples_mut()
        .par_iter_mut()
        .zip(radii.par_iter())
        .for_each(|(v, &r)| *v *= (1.0 + r * r).powf(s / 2.0));
    g.ensure(Representation::Space);
    g
}

/// `‖⟨D⟩^s f‖_{L^p}` over the whole box.
pub fn sobolev_norm(field: &GridField, s: f64, p: LebesgueExponent) -> Result<f64, FieldError> {
    let g = apply_bracket(field, s);
    lebesgue_norm(&g, p, &RegionMask::full(*g.spec()))
}

/// Discrete `L²` norm in either representation, with the matching cell
/// weight.
pub fn l2_norm(field: &GridField) -> f64 {
    let w = match field.representation() {
        Representation::Space => field.spec().cell_volume(),
        Representation::Frequency => field.spec().frequency_cell_volume(),
    };
    (chunked_sum(field.samples(), Complex64::norm_sqr) * w).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::GridSpec;

    #[test]
    fn exponent_construction() {
        assert!(LebesgueExponent::new(0.5).is_err());
        assert!(LebesgueExponent::new(f64::NAN).is_err());
        assert_eq!(
            LebesgueExponent::from_reciprocal(0.0).unwrap(),
            LebesgueExponent::Infinite
        );
        assert_eq!(LebesgueExponent::new(4.0).unwrap().reciprocal(), 0.25);
    }

    #[test]
    fn full_box_indicator_has_volume_norm() {
        let g = GridSpec::new(2, 32, 3.0).unwrap();
        let f = GridField::from_space_fn(g, |_| Complex64::new(1.0, 0.0));
        let n1 = lebesgue_norm(&f, LebesgueExponent::Finite(1.0), &RegionMask::full(g)).unwrap();
        assert!((n1 - 9.0).abs() < 1e-12);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let v: Vec<f64> = (0..10_000).map(|k| k as f64).collect();
        assert_eq!(pairwise_sum(&v), 49_995_000.0);
    }
}
