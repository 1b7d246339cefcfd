//! Special functions: complex Gamma, Bessel `J_β` of complex order and the
//! Hankel large-argument expansion.

mod bessel;
mod ddouble;
pub mod gamma;
pub mod hankel;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use bessel::{
    bessel_j, bessel_j_asymptotic, bessel_j_scaled, bessel_j_series, ScaledBessel, SERIES_THRESHOLD,
};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hankel::{
    expansion_residual, hankel_coefficients, residual_against, truncation_estimate,
    AsymptoticCoefficients,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecFunError {
    #[error("Gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("non-finite argument")]
    NonFinite,
    #[error("argument outside the domain: {0}")]
    Domain(&'static str),
    #[error("cannot parse complex order {0:?}")]
    Parse(String),
}

/// A complex order, used both for the mean order `α` and for the Bessel
/// order `β = n/2 + α - 1`. Components are finite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexOrder {
    pub re: f64,
    pub im: f64,
}

impl ComplexOrder {
    pub fn new(re: f64, im: f64) -> Result<Self, SpecFunError> {
        if re.is_finite() && im.is_finite() {
            Ok(ComplexOrder { re, im })
        } else {
            Err(SpecFunError::NonFinite)
        }
    }

    pub const fn real(re: f64) -> Self {
        ComplexOrder { re, im: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex64) -> Self {
        ComplexOrder { re: z.re, im: z.im }
    }

    pub fn is_real(self) -> bool {
        self.im == 0.0
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Bessel order `n/2 + α - 1` attached to the mean of order `α` on `ℝⁿ`.
    pub fn bessel_order(self, dim: usize) -> Self {
        ComplexOrder {
            re: dim as f64 / 2.0 + self.re - 1.0,
            im: self.im,
        }
    }

    /// `Some(m)` when the order is exactly the integer `-m`, `m >= 1`.
    pub fn negative_integer(self) -> Option<u32> {
        (self.im == 0.0 && self.re < 0.0 && self.re == self.re.round() && self.re > -1e9)
            .then(|| (-self.re) as u32)
    }
}

impl fmt::Display for ComplexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else if self.re == 0.0 {
            write!(f, "{}i", self.im)
        } else if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

fn parse_imag(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

impl FromStr for ComplexOrder {
    type Err = SpecFunError;

    /// Accepts `a`, `bi`, `i`, `-i`, `a+bi`, `a-bi`, with optional exponents
    /// in either component (`1e-3+2i`).
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || SpecFunError::Parse(text.to_string());
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(err());
        }
        let (re, im) = match s.strip_suffix('i') {
            None => (s.parse::<f64>().map_err(|_| err())?, 0.0),
            Some(body) => {
                let bytes = body.as_bytes();
                let split = (1..bytes.len()).rev().find(|&k| {
                    (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
                });
                match split {
                    Some(k) => (
                        body[..k].parse::<f64>().map_err(|_| err())?,
                        parse_imag(&body[k..]).ok_or_else(err)?,
                    ),
                    None => (0.0, parse_imag(body).ok_or_else(err)?),
                }
            }
        };
        ComplexOrder::new(re, im).map_err(|_| err())
    }
}

impl Serialize for ComplexOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OrderRepr {
    Text(String),
    Number(f64),
    Parts { re: f64, im: f64 },
}

impl<'de> Deserialize<'de> for ComplexOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parsed = match OrderRepr::deserialize(deserializer)? {
            OrderRepr::Text(s) => s.parse(),
            OrderRepr::Number(re) => ComplexOrder::new(re, 0.0),
            OrderRepr::Parts { re, im } => ComplexOrder::new(re, im),
        };
        parsed.map_err(serde::de::Error::custom)
    }
}
