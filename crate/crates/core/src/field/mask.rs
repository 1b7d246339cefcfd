//! Cell-center region masks for restricted norms.

use serde::{Deserialize, Serialize};

use super::{FieldError, GridSpec};

/// Region shapes. All are tested at the cell centers `x` of the grid, i.e.
/// at the grid points themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MaskKind {
    Full,
    /// `|x - center| <= radius`.
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    /// `x1_min <= x₁ <= x1_max`, `|x'| <= transverse_radius`.
    Slab {
        x1_min: f64,
        x1_max: f64,
        transverse_radius: f64,
    },
    /// `r_min <= |x| <= r_max`, `|x/|x| - direction| <= width` with
    /// `direction` a unit vector.
    Sector {
        direction: Vec<f64>,
        width: f64,
        r_min: f64,
        r_max: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Membership {
    Full,
    /// Selected flat indices, increasing.
    Cells(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionMask {
    kind: MaskKind,
    spec: GridSpec,
    membership: Membership,
}

impl RegionMask {
    pub fn full(spec: GridSpec) -> Self {
        RegionMask {
            kind: MaskKind::Full,
            spec,
            membership: Membership::Full,
        }
    }

    pub fn kind(&self) -> &MaskKind {
        &self.kind
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub(crate) fn membership(&self) -> &Membership {
        &self.membership
    }

    pub fn count(&self) -> usize {
        match &self.membership {
            Membership::Full => self.spec.len(),
            Membership::Cells(c) => c.len(),
        }
    }

    /// Cell volume times selected cell count.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.spec.cell_volume()
    }

    pub fn contains(&self, flat: usize) -> bool {
        match &self.membership {
            Membership::Full => flat < self.spec.len(),
            Membership::Cells(c) => c.binary_search(&flat).is_ok(),
        }
    }

    /// Selected flat indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        match &self.membership {
            Membership::Full => (0..self.spec.len()).collect(),
            Membership::Cells(c) => c.clone(),
        }
    }
}

fn check(cond: bool, what: &str) -> Result<(), FieldError> {
    if cond {
        Ok(())
    } else {
        Err(FieldError::MaskOutOfBox(what.to_string()))
    }
}

fn check_params(cond: bool, what: &str) -> Result<(), FieldError> {
    if cond {
        Ok(())
    } else {
        Err(FieldError::MaskParameters(what.to_string()))
    }
}

/// Builds a mask, rejecting shapes that do not fit in the box
/// `[-L/2, L/2]ⁿ`.
pub fn make_mask(spec: GridSpec, kind: MaskKind) -> Result<RegionMask, FieldError> {
    spec.validate()?;
    let half = spec.box_length / 2.0;
    let test: Box<dyn Fn(&[f64]) -> bool> = match &kind {
        MaskKind::Full => return Ok(RegionMask::full(spec)),
        MaskKind::Ball { center, radius } => {
            check_params(center.len() == spec.dim, "ball center dimension")?;
            check_params(
                radius.is_finite() && *radius > 0.0,
                "ball radius must be positive",
            )?;
            check(
                center.iter().all(|c| c.abs() + radius <= half),
                "ball exceeds the box",
            )?;
            let (center, r2) = (center.clone(), radius * radius);
            Box::new(move |x| {
                x.iter()
                    .zip(&center)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    <= r2
            })
        }
        MaskKind::Slab {
            x1_min,
            x1_max,
            transverse_radius,
        } => {
            check_params(x1_min < x1_max, "slab needs x1_min < x1_max")?;
            check_params(*transverse_radius > 0.0, "slab radius must be positive")?;
            check(
                x1_min.abs() <= half && x1_max.abs() <= half && *transverse_radius <= half,
                "slab exceeds the box",
            )?;
            let (lo, hi, t2) = (*x1_min, *x1_max, transverse_radius * transverse_radius);
            Box::new(move |x| {
                x[0] >= lo && x[0] <= hi && x[1..].iter().map(|v| v * v).sum::<f64>() <= t2
            })
        }
        MaskKind::Sector {
            direction,
            width,
            r_min,
            r_max,
        } => {
            check_params(direction.len() == spec.dim, "sector direction dimension")?;
            let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            check_params(
                (len - 1.0).abs() < 1e-12,
                "sector direction must be a unit vector",
            )?;
            check_params(*width > 0.0, "sector width must be positive")?;
            check_params(
                0.0 <= *r_min && r_min < r_max,
                "sector needs 0 <= r_min < r_max",
            )?;
            check(*r_max <= half, "sector exceeds the box")?;
            let (dir, w2, lo, hi) = (direction.clone(), width * width, *r_min, *r_max);
            Box::new(move |x| {
                let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
                if r < lo || r > hi || r == 0.0 {
                    return false;
                }
                x.iter()
                    .zip(&dir)
                    .map(|(a, d)| (a / r - d) * (a / r - d))
                    .sum::<f64>()
                    <= w2
            })
        }
    };
    let mut idx = vec![0usize; spec.dim];
    let mut point = vec![0.0; spec.dim];
    let cells = (0..spec.len())
        .filter(|&flat| {
            spec.multi_index(flat, &mut idx);
            for (p, &k) in point.iter_mut().zip(&idx) {
                *p = spec.coordinate(k);
            }
            test(&point)
        })
        .collect();
    Ok(RegionMask {
        kind,
        spec,
        membership: Membership::Cells(cells),
    })
}
