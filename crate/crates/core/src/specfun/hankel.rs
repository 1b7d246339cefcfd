//! Large-argument expansion of `J_β` as two oscillatory phases,
//!
//! ```text
//! J_β(r) ~ r^{-1/2} e^{ ir} Σ_j b_j r^{-j} + r^{-1/2} e^{-ir} Σ_j d_j r^{-j},
//! ```
//!
//! with `b_j = (2π)^{-1/2} e^{-i(βπ/2 + π/4)} i^j a_j(β)`,
//! `d_j = (2π)^{-1/2} e^{+i(βπ/2 + π/4)} (-i)^j a_j(β)` and the classical
//! polynomial coefficients
//! `a_j(β) = (4β² - 1²)(4β² - 3²)...(4β² - (2j-1)²) / (j! 8^j)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{bessel_j, ComplexOrder, SpecFunError};

/// Coefficients of the two-phase expansion truncated after `N` terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    pub order: ComplexOrder,
    pub b: Vec<Complex64>,
    pub d: Vec<Complex64>,
}

impl AsymptoticCoefficients {
    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `r^{-1/2} (e^{ir} Σ_{j<N} b_j r^{-j} + e^{-ir} Σ_{j<N} d_j r^{-j})`.
    pub fn evaluate(&self, r: f64) -> Complex64 {
        let (plus, minus) = self.phase_sums(r);
        let e = Complex64::from_polar(1.0, r);
        (e * plus + e.conj() * minus) / r.sqrt()
    }

    /// The two slowly varying sums `Σ b_j r^{-j}` and `Σ d_j r^{-j}`.
    pub fn phase_sums(&self, r: f64) -> (Complex64, Complex64) {
        let inv = 1.0 / r;
        let mut pow = 1.0;
        let mut plus = Complex64::new(0.0, 0.0);
        let mut minus = Complex64::new(0.0, 0.0);
        for (b, d) in self.b.iter().zip(&self.d) {
            plus += b * pow;
            minus += d * pow;
            pow *= inv;
        }
        (plus, minus)
    }
}

/// Classical coefficients `a_0..a_{N-1}` (complex for complex `β`).
pub fn polynomial_coefficients(beta: ComplexOrder, count: usize) -> Vec<Complex64> {
    let four_beta_sq = beta.to_complex() * beta.to_complex() * 4.0;
    let mut out = Vec::with_capacity(count);
    let mut a = Complex64::new(1.0, 0.0);
    for k in 0..count {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a = a * (four_beta_sq - odd * odd) / (8.0 * k as f64);
        }
        out.push(a);
    }
    out
}

/// `e^{-i(βπ/2 + π/4)}`; has modulus `e^{Im β π/2}` for complex `β`.
fn phase_factor(beta: ComplexOrder) -> Complex64 {
    let theta = beta.to_complex() * FRAC_PI_2 + FRAC_PI_4;
    (Complex64::new(0.0, -1.0) * theta).exp()
}

/// Coefficients `b_j, d_j` for `j < count`.
pub fn hankel_coefficients(
    beta: ComplexOrder,
    count: usize,
) -> Result<AsymptoticCoefficients, SpecFunError> {
    if count == 0 {
        return Err(SpecFunError::Domain("expansion needs at least one term"));
    }
    let a = polynomial_coefficients(beta, count);
    let norm = (2.0 * PI).sqrt().recip();
    let plus_phase = phase_factor(beta) * norm;
    let minus_phase = phase_factor(beta).inv() * norm;
    let i = Complex64::new(0.0, 1.0);
    let mut b = Vec::with_capacity(count);
    let mut d = Vec::with_capacity(count);
    let mut ip = Complex64::new(1.0, 0.0);
    for a_k in a {
        b.push(plus_phase * ip * a_k);
        d.push(minus_phase * ip.conj() * a_k);
        ip *= i;
    }
    Ok(AsymptoticCoefficients { order: beta, b, d })
}

/// `|J_β(r) - (N-term expansion)(r)|` at each sample; samples must be
/// `>= 1`.
pub fn expansion_residual(
    beta: ComplexOrder,
    terms: usize,
    r_samples: &[f64],
) -> Result<Vec<f64>, SpecFunError> {
    let coeffs = hankel_coefficients(beta, terms)?;
    residual_against(&coeffs, r_samples)
}

/// Residual of an arbitrary coefficient set against `J_β`; used to check
/// that a perturbed coefficient set is detected.
pub fn residual_against(
    coeffs: &AsymptoticCoefficients,
    r_samples: &[f64],
) -> Result<Vec<f64>, SpecFunError> {
    r_samples
        .iter()
        .map(|&r| {
            if !(r >= 1.0) {
                return Err(SpecFunError::Domain("residual samples must be >= 1"));
            }
            let exact = bessel_j(coeffs.order, r)?;
            Ok((exact - coeffs.evaluate(r)).norm())
        })
        .collect()
}

/// Size of the first omitted term, `(2π r)^{-1/2} e^{|Im β| π/2} |a_N| r^{-N}`,
/// doubled. For real `β` and `2N > β - 1/2` this bounds the truncation
/// error; for complex `β` it is an estimate.
pub fn truncation_estimate(beta: ComplexOrder, terms: usize, r: f64) -> f64 {
    let a = polynomial_coefficients(beta, terms + 1);
    let growth = (beta.im.abs() * FRAC_PI_2).exp();
    2.0 * growth * a[terms].norm() * r.powi(-(terms as i32)) / (2.0 * PI * r).sqrt()
}

/// Full-precision asymptotic evaluation used by `bessel_j` above the series
/// threshold: sums terms until they drop below `1e-17` of the running sum or,
/// past the initial hump at `k ≈ |β|`, start to grow.
pub(crate) fn hankel_evaluate(beta: ComplexOrder, x: f64) -> Complex64 {
    let four_beta_sq = beta.to_complex() * beta.to_complex() * 4.0;
    let i = Complex64::new(0.0, 1.0);
    let mut a = Complex64::new(1.0, 0.0);
    let mut ip = Complex64::new(1.0, 0.0);
    let mut plus = a;
    let mut minus = a;
    let hump = beta.norm() + 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..200 {
        let odd = (2 * k - 1) as f64;
        let next = a * (four_beta_sq - odd * odd) / (8.0 * k as f64 * x);
        let size = next.norm();
        if size > prev && k as f64 > hump {
            break;
        }
        a = next;
        ip *= i;
        plus += ip * a;
        minus += ip.conj() * a;
        prev = size;
        if size <= 1e-17 * plus.norm().max(minus.norm()) {
            break;
        }
    }
    // The phases are multiplied, not added, so `e^{ix}` keeps full accuracy.
    let phase = phase_factor(beta);
    let e = Complex64::from_polar(1.0, x);
    (e * phase * plus + e.conj() / phase * minus) / (2.0 * PI * x).sqrt()
}
