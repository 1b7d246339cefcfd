//! Complex Gamma function.
//!
//! `ln Γ` comes from the Stirling series after shifting the argument to
//! `|z| >= 17`; the shift is undone with an explicit product. Arguments with
//! `Re z < 1/2` go through the reflection formula.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecFunError;

/// `B_{2k} / (2k (2k-1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

const SHIFT_RADIUS: f64 = 17.0;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// Stirling series for `ln Γ(z)`, valid for `|z| >= SHIFT_RADIUS`,
/// `Re z > 0`.
fn stirling_ln_gamma(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        acc += pow * c;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + acc
}

/// `sin(πz)` with the real part reduced first, so zeros at the integers are
/// exact.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let k = z.re.round();
    let w = Complex64::new(z.re - k, z.im);
    let s = (w * PI).sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// `Γ(z)` for `Re z >= 1/2` as `exp(ln Γ(z + m)) / ((z)(z+1)...(z+m-1))`.
fn gamma_right(z: Complex64) -> Complex64 {
    let mut shifted = z;
    let mut product = Complex64::new(1.0, 0.0);
    while shifted.norm() < SHIFT_RADIUS {
        product *= shifted;
        shifted += 1.0;
    }
    stirling_ln_gamma(shifted).exp() / product
}

/// True when `z` is one of the poles `0, -1, -2, ...`.
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Complex Gamma function.
pub fn gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(SpecFunError::NonFinite);
    }
    if is_gamma_pole(z) {
        return Err(SpecFunError::GammaPole(z.re));
    }
    if z.re >= 0.5 {
        Ok(gamma_right(z))
    } else {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        Ok(PI / (sin_pi(z) * gamma_right(one_minus)))
    }
}

/// `1/Γ(z)`, an entire function; exactly zero at the poles of `Γ`.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        gamma_right(z).inv()
    } else {
        let one_minus = Complex64::new(1.0, 0.0) - z;
        sin_pi(z) * gamma_right(one_minus) / PI
    }
}

/// Principal-branch-free `ln Γ(z)` for `Re z >= 1/2` (continuous along
/// horizontal lines, as the Stirling form is).
pub fn ln_gamma(z: Complex64) -> Result<Complex64, SpecFunError> {
    if z.re < 0.5 {
        return Err(SpecFunError::Domain("ln_gamma requires Re z >= 1/2"));
    }
    let mut shifted = z;
    let mut log_product = Complex64::new(0.0, 0.0);
    while shifted.norm() < SHIFT_RADIUS {
        log_product += shifted.ln();
        shifted += 1.0;
    }
    Ok(stirling_ln_gamma(shifted) - log_product)
}
