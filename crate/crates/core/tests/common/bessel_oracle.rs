//! Exact-integer evaluation of the ascending Bessel series, independent of
//! the library's floating-point code paths.
//!
//! For dyadic `x = X / 2^e` and dyadic `β = (A + iB) / 2^s` every term ratio
//! `(-x²/4) / (k (k + β))` is a ratio of integers, so the series
//! `Σ_k (-x²/4)^k / (k! (β+1)_k)` can be summed in fixed point with
//! `precision` fractional bits and only truncating divisions.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use sphmax::specfun::{rgamma, ComplexOrder};

/// `(numerator, exponent)` with `value = numerator / 2^exponent`.
fn dyadic(v: f64) -> (i64, u32) {
    for e in 0..40u32 {
        let scaled = v * (1u64 << e) as f64;
        if scaled == scaled.trunc() && scaled.abs() < 9e15 {
            return (scaled as i64, e);
        }
    }
    panic!("{v} is not a short dyadic");
}

fn to_f64_scaled(v: &BigInt, precision: u32) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let bits = v.bits() as i64;
    let shift = (bits - 62).max(0);
    let mant = (v >> shift as usize).to_f64().unwrap();
    mant * 2f64.powi((shift - precision as i64) as i32)
}

/// `Σ_k (-x²/4)^k / (k! (β+1)_k)`, the ascending series without the
/// `(x/2)^β / Γ(β+1)` prefactor.
pub fn reduced_series(beta: ComplexOrder, x: f64) -> Complex64 {
    let (xn, xe) = dyadic(x);
    let (an, ae) = dyadic(beta.re);
    let (bn, be) = dyadic(beta.im);
    let s = ae.max(be);
    let a = BigInt::from(an) << (s - ae) as usize;
    let b = BigInt::from(bn) << (s - be) as usize;
    let one_s = BigInt::from(1) << s as usize;
    // terms peak near e^x while the sum can be as small as (x/2)^{-β}
    let precision =
        (x * std::f64::consts::LOG2_E + beta.re.max(0.0) * (x / 2.0).log2().max(0.0)) as u32 + 160;
    let x_sq = BigInt::from(xn) * BigInt::from(xn);
    let mut re = BigInt::from(1) << precision as usize;
    let mut im = BigInt::zero();
    let mut sum_re = re.clone();
    let mut sum_im = im.clone();
    let mut k: i64 = 0;
    loop {
        k += 1;
        // (k + β) 2^s = u + i b
        let u = BigInt::from(k) * &one_s + &a;
        let den = ((&u * &u + &b * &b) * BigInt::from(k) * BigInt::from(4)) << (2 * xe) as usize;
        // multiply by -x² 2^{2e} 2^s (u - i b)
        let fac = -&x_sq * &one_s;
        let nr = (&re * &u + &im * &b) * &fac;
        let ni = (&im * &u - &re * &b) * &fac;
        re = nr / &den;
        im = ni / &den;
        sum_re += &re;
        sum_im += &im;
        if k as f64 > x && re.abs().bits() < 2 && im.abs().bits() < 2 {
            break;
        }
    }
    Complex64::new(
        to_f64_scaled(&sum_re, precision),
        to_f64_scaled(&sum_im, precision),
    )
}

/// `J_β(x)`: the exact series times the floating prefactor
/// `(x/2)^β / Γ(β+1)`. Not valid at negative-integer `β`.
pub fn bessel_j(beta: ComplexOrder, x: f64) -> Complex64 {
    let beta_c = beta.to_complex();
    let prefactor = (beta_c * (x / 2.0).ln()).exp() * rgamma(beta_c + 1.0);
    prefactor * reduced_series(beta, x)
}
