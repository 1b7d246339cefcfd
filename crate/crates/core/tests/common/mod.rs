#![allow(dead_code)]

pub mod bessel_oracle;

/// Ordinary least-squares slope of `ys` against `xs`.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

use num_rational::Ratio;
use rand::Rng;
use sphmax::exponents::ExponentPoint;

/// Admissible `(1/p, 1/q)` with coordinates `a/den`, `b/den`, `b <= a`.
pub fn random_admissible<R: Rng>(rng: &mut R, dim: u32, den: i64) -> ExponentPoint {
    let a = rng.random_range(0..=den);
    let b = rng.random_range(0..=a);
    ExponentPoint::new(Ratio::new(a, den), Ratio::new(b, den), dim).unwrap()
}
