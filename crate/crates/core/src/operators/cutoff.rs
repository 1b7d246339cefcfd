//! Smooth frequency cutoffs built from the degree-7 smoothstep
//! `S(x) = 35x⁴ - 84x⁵ + 70x⁶ - 20x⁷`, which is `C³` at both ends.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::OperatorError;
use crate::field::{FieldError, GridField, Representation};

/// Smoothstep clamped to `[0, 1]`: 0 for `x <= 0`, 1 for `x >= 1`.
#[inline]
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let x4 = x * x * x * x;
        x4 * (35.0 + x * (-84.0 + x * (70.0 - 20.0 * x)))
    }
}

/// Even radial bump: 1 on `[0, M]`, 0 beyond `2M`.
#[inline]
pub fn phi(r: f64, m: f64) -> f64 {
    1.0 - smoothstep((r.abs() - m) / m)
}

/// `ψ_j(r) = φ(2^{-j} r) - φ(2^{1-j} r)`, supported in `[2^{j-1}M, 2^{j+1}M]`.
#[inline]
pub fn psi(j: u32, r: f64, m: f64) -> f64 {
    let s = 2f64.powi(-(j as i32));
    phi(s * r, m) - phi(2.0 * s * r, m)
}

/// Annular bump: 1 on `[1, 2]`, supported in `[3/4, 9/4]`.
#[inline]
pub fn annular_bump(u: f64) -> f64 {
    if u < 1.0 {
        smoothstep((u - 0.75) * 4.0)
    } else {
        1.0 - smoothstep((u - 2.0) * 4.0)
    }
}

/// Outer support radius of [`annular_bump`].
pub const ANNULUS_OUTER: f64 = 2.25;

/// Plateau profile: 1 for `|u| <= 1/2`, 0 for `|u| >= 1`.
#[inline]
pub fn plateau(u: f64) -> f64 {
    1.0 - smoothstep(2.0 * u.abs() - 1.0)
}

/// Frequency-side cutoffs. All are real and nonnegative except the chirp,
/// which is unimodular.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CutoffSpec {
    /// `φ(|ξ|)` with plateau radius `m`.
    RadialBump { m: f64 },
    /// `ψ_j(|ξ|)` built on `φ` with plateau radius `m`.
    Dyadic { j: u32, m: f64 },
    /// `annular_bump(|ξ| / scale)`.
    Annulus { scale: f64 },
    /// Tensor bump on `|ξ₁ - 2^j| <= δ 2^{j-1}`, `|ξ'| <= δ 2^{j/2}`; equal to
    /// 1 on the half-size box.
    Plate { j: u32, delta: f64 },
    /// Homogeneous of degree 0: 1 where `|ξ/|ξ| - direction| <= inner`, 0
    /// where it is `>= outer`; 0 at the origin.
    ConeSector {
        direction: Vec<f64>,
        inner: f64,
        outer: f64,
    },
    /// `e^{-2πi shift |ξ|}`.
    Chirp { shift: f64 },
}

impl CutoffSpec {
    pub fn validate(&self, dim: usize) -> Result<(), OperatorError> {
        let bad = |m: &str| Err(OperatorError::Invalid(m.to_string()));
        match self {
            CutoffSpec::RadialBump { m } | CutoffSpec::Dyadic { m, .. } if !(*m > 0.0) => {
                bad("cutoff radius M must be positive")
            }
            CutoffSpec::Annulus { scale } if !(*scale > 0.0) => {
                bad("annulus scale must be positive")
            }
            CutoffSpec::Plate { delta, .. } if !(*delta > 0.0 && *delta < 2.0) => {
                bad("plate width δ must lie in (0, 2)")
            }
            CutoffSpec::ConeSector {
                direction,
                inner,
                outer,
            } => {
                if direction.len() != dim {
                    return bad("cone direction has the wrong dimension");
                }
                let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
                if (len - 1.0).abs() > 1e-12 {
                    return bad("cone direction must be a unit vector");
                }
                if !(0.0 < *inner && inner < outer && *outer <= 2.0) {
                    return bad("cone radii need 0 < inner < outer <= 2");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Largest `|ξ|` in the support, if bounded.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            CutoffSpec::RadialBump { m } => Some(2.0 * m),
            CutoffSpec::Dyadic { j, m } => Some(2f64.powi(*j as i32 + 1) * m),
            CutoffSpec::Annulus { scale } => Some(ANNULUS_OUTER * scale),
            CutoffSpec::Plate { j, delta } => {
                let a = 2f64.powi(*j as i32) * (1.0 + delta / 2.0);
                let b = delta * 2f64.powf(*j as f64 / 2.0);
                Some((a * a + b * b).sqrt())
            }
            CutoffSpec::ConeSector { .. } | CutoffSpec::Chirp { .. } => None,
        }
    }

    /// Largest single-coordinate frequency in the support; this is what the
    /// grid's Nyquist frequency must exceed.
    pub fn support_extent(&self) -> Option<f64> {
        match self {
            CutoffSpec::Plate { j, delta } => Some(2f64.powi(*j as i32) * (1.0 + delta / 2.0)),
            other => other.support_radius(),
        }
    }

    pub fn value(&self, xi: &[f64]) -> Complex64 {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        let real = |v: f64| Complex64::new(v, 0.0);
        match self {
            CutoffSpec::RadialBump { m } => real(phi(r, *m)),
            CutoffSpec::Dyadic { j, m } => real(psi(*j, r, *m)),
            CutoffSpec::Annulus { scale } => real(annular_bump(r / scale)),
            CutoffSpec::Plate { j, delta } => {
                let u1 = (xi[0] - 2f64.powi(*j as i32)) / (delta * 2f64.powi(*j as i32 - 1));
                let perp = xi[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
                let u2 = perp / (delta * 2f64.powf(*j as f64 / 2.0));
                real(plateau(u1) * plateau(u2))
            }
            CutoffSpec::ConeSector {
                direction,
                inner,
                outer,
            } => {
                if r == 0.0 {
                    return real(0.0);
                }
                let d = xi
                    .iter()
                    .zip(direction)
                    .map(|(a, v)| (a / r - v) * (a / r - v))
                    .sum::<f64>()
                    .sqrt();
                real(1.0 - smoothstep((d - inner) / (outer - inner)))
            }
            CutoffSpec::Chirp { shift } => Complex64::from_polar(1.0, -2.0 * PI * shift * r),
        }
    }
}

/// Multiplies `f̂` by the cutoff. Refuses cutoffs whose support the grid
/// cannot resolve. The result is in frequency representation.
pub fn cutoff(field: &GridField, spec: &CutoffSpec) -> Result<GridField, OperatorError> {
    let grid = *field.spec();
    spec.validate(grid.dim)?;
    if let Some(extent) = spec.support_extent() {
        grid.require_resolved(extent)?;
    }
    let mut g = field.to_representation(Representation::Frequency);
    let values = GridField::from_frequency_fn(grid, |xi| spec.value(xi));
    g.samples_mut()
        .par_iter_mut()
        .zip(values.samples().par_iter())
        .for_each(|(a, b)| *a *= b);
    Ok(g)
}

/// The cutoff itself sampled on the lattice (frequency representation).
pub fn cutoff_field(
    grid: crate::field::GridSpec,
    spec: &CutoffSpec,
) -> Result<GridField, OperatorError> {
    spec.validate(grid.dim)?;
    if let Some(extent) = spec.support_extent() {
        grid.require_resolved(extent)?;
    }
    Ok(GridField::from_frequency_fn(grid, |xi| spec.value(xi)))
}

impl From<FieldError> for OperatorError {
    fn from(e: FieldError) -> Self {
        OperatorError::Field(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smoothstep_endpoints_and_symmetry() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        for k in 0..=20 {
            let x = k as f64 / 20.0;
            assert!((smoothstep(x) + smoothstep(1.0 - x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn dyadic_partition_of_unity() {
        let m = 4.0;
        for k in 0..20_000 {
            let r = k as f64 * 0.05;
            let total: f64 = phi(r, m) + (1..=12).map(|j| psi(j, r, m)).sum::<f64>();
            assert!((total - 1.0).abs() < 1e-12, "r={r}");
        }
    }

    #[test]
    fn annulus_shape() {
        assert_eq!(annular_bump(1.0), 1.0);
        assert_eq!(annular_bump(1.5), 1.0);
        assert_eq!(annular_bump(2.0), 1.0);
        assert_eq!(annular_bump(0.75), 0.0);
        assert_eq!(annular_bump(2.25), 0.0);
        assert!(annular_bump(0.9) > 0.0 && annular_bump(0.9) < 1.0);
    }

    #[test]
    fn cone_is_homogeneous() {
        let c = CutoffSpec::ConeSector {
            direction: vec![1.0, 0.0],
            inner: 0.01,
            outer: 1.0 / 81.0,
        };
        for &(a, b) in &[(1.0, 0.0), (3.0, 0.033), (1.0, 0.011), (1.0, 0.5)] {
            let v1 = c.value(&[a, b]);
            let v2 = c.value(&[7.5 * a, 7.5 * b]);
            assert!((v1 - v2).norm() < 1e-14);
        }
        assert_eq!(c.value(&[1.0, 0.0]).re, 1.0);
        assert_eq!(c.value(&[1.0, 0.5]).re, 0.0);
    }
}
