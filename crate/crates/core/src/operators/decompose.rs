//! Splitting of the spherical symbol into a low-frequency part, two
//! oscillatory principal parts and a remainder:
//!
//! ```text
//! m̂_α(r) = φ(r) m̂_α(r) + e^{2πir} r^{-(n-1)/2-α} a₁(r)
//!         + e^{-2πir} r^{-(n-1)/2-α} a₂(r) + residual(r),
//! a₁(r) = c Σ_{j<N} b_j (2πr)^{-j} (1 - φ(r)),   c = 2^{-1/2} π^{1/2-α},
//! ```
//!
//! and `a₂` likewise with `d_j`. `φ` is 1 on `[0, M]` and vanishes beyond
//! `2M`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::phi;
use super::{OperatorError, SphericalSymbol};
use crate::experiments::regression::ols;
use crate::specfun::{hankel_coefficients, AsymptoticCoefficients, ComplexOrder};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub r: Vec<f64>,
    pub exact: Vec<Complex64>,
    pub low: Vec<Complex64>,
    pub principal_plus: Vec<Complex64>,
    pub principal_minus: Vec<Complex64>,
    pub residual: Vec<Complex64>,
    pub a1: Vec<Complex64>,
    pub a2: Vec<Complex64>,
}

/// Evaluator for the decomposition at fixed `(n, α, N, M)`.
#[derive(Debug, Clone)]
pub struct Decomposer {
    dim: usize,
    alpha: ComplexOrder,
    m: f64,
    symbol: SphericalSymbol,
    coeffs: AsymptoticCoefficients,
    c: Complex64,
}

impl Decomposer {
    pub fn new(
        dim: usize,
        alpha: ComplexOrder,
        terms: usize,
        m: f64,
    ) -> Result<Self, OperatorError> {
        if terms == 0 {
            return Err(OperatorError::Invalid("N must be >= 1".into()));
        }
        if !(m >= 1.0 && m.is_finite()) {
            return Err(OperatorError::Invalid("M must be >= 1".into()));
        }
        let coeffs = hankel_coefficients(alpha.bessel_order(dim), terms)?;
        Self::with_coefficients(dim, alpha, m, coeffs)
    }

    /// Uses caller-supplied coefficients; lets tests check that a corrupted
    /// set is detected.
    pub fn with_coefficients(
        dim: usize,
        alpha: ComplexOrder,
        m: f64,
        coeffs: AsymptoticCoefficients,
    ) -> Result<Self, OperatorError> {
        let c = (Complex64::new(0.5 - alpha.re, -alpha.im) * PI.ln()).exp() / 2f64.sqrt();
        Ok(Decomposer {
            dim,
            alpha,
            m,
            symbol: SphericalSymbol::new(dim, alpha),
            coeffs,
            c,
        })
    }

    /// `(a₁(r), a₂(r))`.
    pub fn amplitudes(&self, r: f64) -> (Complex64, Complex64) {
        let (plus, minus) = self.coeffs.phase_sums(2.0 * PI * r);
        let cut = 1.0 - phi(r, self.m);
        (self.c * plus * cut, self.c * minus * cut)
    }

    /// `r^{-(n-1)/2-α}`.
    fn weight(&self, r: f64) -> Complex64 {
        let e = Complex64::new(
            -(self.dim as f64 - 1.0) / 2.0 - self.alpha.re,
            -self.alpha.im,
        );
        (e * r.ln()).exp()
    }

    /// `(exact, low, principal₊, principal₋, residual, a₁, a₂)` at `r > 0`.
    #[allow(clippy::type_complexity)]
    pub fn parts(
        &self,
        r: f64,
    ) -> (
        Complex64,
        Complex64,
        Complex64,
        Complex64,
        Complex64,
        Complex64,
        Complex64,
    ) {
        let exact = self.symbol.eval(r);
        let low = exact * phi(r, self.m);
        let (a1, a2) = self.amplitudes(r);
        let (plus, minus) = if a1 == Complex64::new(0.0, 0.0) && a2 == Complex64::new(0.0, 0.0) {
            (a1, a2)
        } else {
            let w = self.weight(r);
            let e = Complex64::from_polar(1.0, 2.0 * PI * r);
            (e * w * a1, e.conj() * w * a2)
        };
        let residual = exact - low - plus - minus;
        (exact, low, plus, minus, residual, a1, a2)
    }
}

/// Samples the four parts at each `r > 0`.
pub fn decompose_multiplier(
    dim: usize,
    alpha: ComplexOrder,
    terms: usize,
    m: f64,
    r_samples: &[f64],
) -> Result<Decomposition, OperatorError> {
    let d = Decomposer::new(dim, alpha, terms, m)?;
    decompose_with(&d, r_samples)
}

pub fn decompose_with(d: &Decomposer, r_samples: &[f64]) -> Result<Decomposition, OperatorError> {
    if r_samples.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(OperatorError::Invalid(
            "radii must be positive and finite".into(),
        ));
    }
    let mut out = Decomposition {
        r: r_samples.to_vec(),
        exact: Vec::new(),
        low: Vec::new(),
        principal_plus: Vec::new(),
        principal_minus: Vec::new(),
        residual: Vec::new(),
        a1: Vec::new(),
        a2: Vec::new(),
    };
    for &r in r_samples {
        let (e, l, p, q, res, a1, a2) = d.parts(r);
        out.exact.push(e);
        out.low.push(l);
        out.principal_plus.push(p);
        out.principal_minus.push(q);
        out.residual.push(res);
        out.a1.push(a1);
        out.a2.push(a2);
    }
    Ok(out)
}

/// Per-octave maxima of `|residual|` and the fitted log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualLaw {
    /// `(octave start r, max |residual| on [r, 2r])`.
    pub envelope: Vec<(f64, f64)>,
    pub slope: f64,
    pub fit_residual_max: f64,
}

/// Fits the decay of the recomposition residual over `[r_lo, r_hi]`,
/// sampling each octave at `per_octave` points. The maximum per octave is
/// used because the residual itself oscillates through zeros.
pub fn residual_law(
    d: &Decomposer,
    r_lo: f64,
    r_hi: f64,
    per_octave: usize,
) -> Result<ResidualLaw, OperatorError> {
    if !(r_lo > 0.0 && r_hi >= 2.0 * r_lo) || per_octave < 2 {
        return Err(OperatorError::Invalid(
            "need r_hi >= 2 r_lo > 0 and >= 2 samples".into(),
        ));
    }
    let mut envelope = Vec::new();
    let mut start = r_lo;
    while start * 2.0 <= r_hi * (1.0 + 1e-12) {
        let peak = (0..=per_octave)
            .map(|k| start * 2f64.powf(k as f64 / per_octave as f64))
            .map(|r| d.parts(r).4.norm())
            .fold(0.0, f64::max);
        envelope.push((start, peak));
        start *= 2.0;
    }
    let xs: Vec<f64> = envelope.iter().map(|(r, _)| r.log2()).collect();
    let ys: Vec<f64> = envelope.iter().map(|(_, v)| v.log2()).collect();
    let fit = ols(&xs, &ys).map_err(|e| OperatorError::Invalid(e.to_string()))?;
    Ok(ResidualLaw {
        envelope,
        slope: fit.slope,
        fit_residual_max: fit.residual_max,
    })
}

/// Lower-bound and phase diagnostics for `a₁, a₂` at one `M`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeDiagnostic {
    pub m: f64,
    /// `inf |a_i(r)|` over sampled `r ∈ [2M, r_max]`; on `[M, 2M)` the
    /// factor `1 - φ` drives `a_i` to zero at `r = M`, so that range is
    /// excluded.
    pub inf_a1: f64,
    pub inf_a2: f64,
    /// Limiting phases `θ_i = arg(c b₀)`, `arg(c d₀)`.
    pub theta1: f64,
    pub theta2: f64,
    /// `sup |arg a_i(r) - θ_i|` over the same range.
    pub arg_dev_a1: f64,
    pub arg_dev_a2: f64,
}

impl AmplitudeDiagnostic {
    pub fn phase_condition_holds(&self, tol: f64) -> bool {
        self.arg_dev_a1 <= tol && self.arg_dev_a2 <= tol
    }
}

fn wrap_angle(a: f64) -> f64 {
    (a + PI).rem_euclid(2.0 * PI) - PI
}

/// Sweeps the cutoff radius `M`; `samples` log-spaced radii per `M`.
pub fn amplitude_sweep(
    dim: usize,
    alpha: ComplexOrder,
    terms: usize,
    ms: &[f64],
    r_max: f64,
    samples: usize,
) -> Result<Vec<AmplitudeDiagnostic>, OperatorError> {
    ms.iter()
        .map(|&m| {
            let d = Decomposer::new(dim, alpha, terms, m)?;
            let lo = 2.0 * m;
            if r_max <= lo {
                return Err(OperatorError::Invalid("r_max must exceed 2M".into()));
            }
            let theta1 = (d.c * d.coeffs.b[0]).arg();
            let theta2 = (d.c * d.coeffs.d[0]).arg();
            let mut diag = AmplitudeDiagnostic {
                m,
                inf_a1: f64::INFINITY,
                inf_a2: f64::INFINITY,
                theta1,
                theta2,
                arg_dev_a1: 0.0,
                arg_dev_a2: 0.0,
            };
            for k in 0..samples {
                let r = lo * (r_max / lo).powf(k as f64 / (samples - 1).max(1) as f64);
                let (a1, a2) = d.amplitudes(r);
                diag.inf_a1 = diag.inf_a1.min(a1.norm());
                diag.inf_a2 = diag.inf_a2.min(a2.norm());
                diag.arg_dev_a1 = diag.arg_dev_a1.max(wrap_angle(a1.arg() - theta1).abs());
                diag.arg_dev_a2 = diag.arg_dev_a2.max(wrap_angle(a2.arg() - theta2).abs());
            }
            Ok(diag)
        })
        .collect()
}

/// Smallest swept `M` whose phase deviation is within `tol`.
pub fn smallest_phase_m(diags: &[AmplitudeDiagnostic], tol: f64) -> Option<f64> {
    diags
        .iter()
        .filter(|d| d.phase_condition_holds(tol))
        .map(|d| d.m)
        .fold(None, |acc: Option<f64>, m| {
            Some(acc.map_or(m, |a| a.min(m)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_sum_to_exact() {
        let d = decompose_multiplier(2, ComplexOrder::real(0.0), 3, 4.0, &[0.5, 5.0, 7.0, 50.0])
            .unwrap();
        for i in 0..d.r.len() {
            let sum = d.low[i] + d.principal_plus[i] + d.principal_minus[i] + d.residual[i];
            assert!((sum - d.exact[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn principal_parts_vanish_below_m() {
        let d = decompose_multiplier(
            3,
            ComplexOrder::new(0.5, 1.0).unwrap(),
            3,
            4.0,
            &[0.1, 2.0, 4.0],
        )
        .unwrap();
        for i in 0..3 {
            assert_eq!(d.principal_plus[i], Complex64::new(0.0, 0.0));
            assert_eq!(d.principal_minus[i], Complex64::new(0.0, 0.0));
            assert_eq!(d.residual[i], Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(decompose_multiplier(2, ComplexOrder::real(0.0), 0, 4.0, &[1.0]).is_err());
        assert!(decompose_multiplier(2, ComplexOrder::real(0.0), 3, 0.5, &[1.0]).is_err());
        assert!(decompose_multiplier(2, ComplexOrder::real(0.0), 3, 4.0, &[-1.0]).is_err());
    }
}
