//! Bessel functions `J_β` of complex order.
//!
//! Below [`SERIES_THRESHOLD`] the entire function
//! `(x/2)^{-β} J_β(x) = Σ_k (-x²/4)^k / (k! Γ(k+β+1))` is summed in
//! double-double arithmetic: its terms reach `e^x` before cancelling, which
//! costs `x / ln 10` digits. Above the threshold the Hankel expansion is
//! summed to its smallest term.

use num_complex::Complex64;

use super::ddouble::{DDouble, DdComplex};
use super::hankel::hankel_evaluate;
use super::{rgamma, ComplexOrder, SpecFunError};

/// Switch point between the ascending series and the Hankel expansion.
pub const SERIES_THRESHOLD: f64 = 30.0;

/// Terms kept by the series: at `x = 30` they fall below `1e-34` of the
/// largest one by `k = 70`.
const SERIES_TERMS: usize = 96;

/// Evaluator for one fixed order with the series denominators precomputed.
/// Repeated evaluation at many arguments (radial multipliers on a grid) is
/// the intended use.
#[derive(Debug, Clone)]
pub struct ScaledBessel {
    order: ComplexOrder,
    /// Order actually summed: `m` when `order = -m` is a negative integer.
    summed: ComplexOrder,
    mirror: Option<u32>,
    rgamma_shift: Complex64,
    inv_den: Vec<DdComplex>,
}

impl ScaledBessel {
    pub fn new(order: ComplexOrder) -> Self {
        let mirror = order.negative_integer();
        let summed = match mirror {
            Some(m) => ComplexOrder::real(m as f64),
            None => order,
        };
        let one = DdComplex::new(DDouble::from_f64(1.0), DDouble::ZERO);
        let inv_den = (1..=SERIES_TERMS)
            .map(|k| {
                let kf = k as f64;
                let den = DdComplex::new(
                    DDouble::sum(kf, summed.re) * DDouble::from_f64(kf),
                    DDouble::product(kf, summed.im),
                );
                one.div(den)
            })
            .collect();
        ScaledBessel {
            order,
            summed,
            mirror,
            rgamma_shift: rgamma(summed.to_complex() + 1.0),
            inv_den,
        }
    }

    pub fn order(&self) -> ComplexOrder {
        self.order
    }

    /// Ascending series for `(x/2)^{-β'} J_{β'}(x)` with `β'` the summed
    /// order.
    fn series_summed(&self, x: f64) -> Complex64 {
        let w = DDouble::product(x, x) * DDouble::from_f64(-0.25);
        let mut term = DdComplex::new(DDouble::from_f64(1.0), DDouble::ZERO);
        let mut sum = term;
        let mut largest = 1.0f64;
        for inv in &self.inv_den {
            term = term.scale(w).mul(*inv);
            sum = sum.add(term);
            let size = term.norm();
            largest = largest.max(size);
            if size <= 1e-34 * largest {
                break;
            }
        }
        sum.to_complex() * self.rgamma_shift
    }

    /// Series value of `(x/2)^{-β} J_β(x)` regardless of `x`; accurate for
    /// `x <= SERIES_THRESHOLD`.
    pub fn series(&self, x: f64) -> Complex64 {
        let s = self.series_summed(x);
        match self.mirror {
            Some(m) => s * sign(m) * (x / 2.0).powi(2 * m as i32),
            None => s,
        }
    }

    /// `(x/2)^{-β} J_β(x)` for `x >= 0`, entire in `β`.
    pub fn scaled(&self, x: f64) -> Complex64 {
        if x <= SERIES_THRESHOLD {
            self.series(x)
        } else {
            hankel_evaluate(self.order, x) * half_power(self.order, x, -1.0)
        }
    }

    /// `J_β(x)` for `x > 0`.
    pub fn j(&self, x: f64) -> Complex64 {
        if x <= SERIES_THRESHOLD {
            match self.mirror {
                Some(m) => self.series_summed(x) * half_power(self.summed, x, 1.0) * sign(m),
                None => self.series_summed(x) * half_power(self.order, x, 1.0),
            }
        } else {
            asymptotic(self.order, x)
        }
    }
}

fn sign(m: u32) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `(x/2)^{s β}`.
fn half_power(order: ComplexOrder, x: f64, s: f64) -> Complex64 {
    if order.is_real() {
        Complex64::new((x / 2.0).powf(s * order.re), 0.0)
    } else {
        (order.to_complex() * (s * (x / 2.0).ln())).exp()
    }
}

fn asymptotic(order: ComplexOrder, x: f64) -> Complex64 {
    let v = hankel_evaluate(order, x);
    if order.is_real() {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

fn check_argument(r: f64) -> Result<(), SpecFunError> {
    if !r.is_finite() {
        Err(SpecFunError::NonFinite)
    } else if r <= 0.0 {
        Err(SpecFunError::Domain("Bessel argument must be positive"))
    } else {
        Ok(())
    }
}

/// `J_β(r)` for `r > 0`.
pub fn bessel_j(beta: ComplexOrder, r: f64) -> Result<Complex64, SpecFunError> {
    check_argument(r)?;
    if r > SERIES_THRESHOLD {
        return Ok(asymptotic(beta, r));
    }
    Ok(ScaledBessel::new(beta).j(r))
}

/// `(x/2)^{-β} J_β(x)` for `x >= 0`; equals `1/Γ(β+1)` at `x = 0`.
pub fn bessel_j_scaled(beta: ComplexOrder, x: f64) -> Result<Complex64, SpecFunError> {
    if !x.is_finite() {
        return Err(SpecFunError::NonFinite);
    }
    if x < 0.0 {
        return Err(SpecFunError::Domain("scaled Bessel argument must be >= 0"));
    }
    Ok(ScaledBessel::new(beta).scaled(x))
}

/// `J_β(r)` from the ascending series alone, at any `r > 0`. Loses about
/// `r / ln 10` of 32 digits.
pub fn bessel_j_series(beta: ComplexOrder, r: f64) -> Result<Complex64, SpecFunError> {
    check_argument(r)?;
    let eval = ScaledBessel::new(beta);
    Ok(eval.series(r) * half_power(beta, r, 1.0))
}

/// `J_β(r)` from the Hankel expansion alone, at any `r > 0`.
pub fn bessel_j_asymptotic(beta: ComplexOrder, r: f64) -> Result<Complex64, SpecFunError> {
    check_argument(r)?;
    Ok(asymptotic(beta, r))
}
