mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use sphmax::specfun::{
    bessel_j, bessel_j_asymptotic, bessel_j_series, expansion_residual, gamma, hankel_coefficients,
    ComplexOrder, SERIES_THRESHOLD,
};

use common::{bessel_oracle, ls_slope};

fn order(re: f64, im: f64) -> ComplexOrder {
    ComplexOrder::new(re, im).unwrap()
}

/// Error scale for `J_β(r)`: the value itself, or the oscillation envelope
/// once `r` is past the turning point where `J_β` starts having zeros.
fn scale(beta: ComplexOrder, r: f64, value: Complex64) -> f64 {
    let envelope = if r > beta.norm() + 1.0 {
        (2.0 / (PI * r)).sqrt() * (beta.im.abs() * PI / 2.0).exp()
    } else {
        0.0
    };
    value.norm().max(envelope)
}

#[test]
fn bessel_matches_exact_series_oracle() {
    let orders = [
        order(0.0, 0.0),
        order(0.5, 0.0),
        order(1.0, 0.0),
        order(2.5, 0.0),
        order(-0.75, 0.0),
        order(10.0, 0.0),
        order(-9.5, 0.0),
        order(7.25, 0.0),
        order(0.5, 1.0),
        order(-2.5, 0.5),
        order(3.0, 2.0),
        order(0.0, -4.0),
    ];
    let radii = [
        1.0 / 64.0,
        0.5,
        1.0,
        3.25,
        10.0,
        29.5,
        30.5,
        64.0,
        500.0,
        2048.0,
    ];
    for &beta in &orders {
        for &r in &radii {
            let got = bessel_j(beta, r).unwrap();
            let want = bessel_oracle::bessel_j(beta, r);
            let err = (got - want).norm() / scale(beta, r, want);
            assert!(
                err <= 1e-10,
                "beta={beta} r={r}: got {got}, want {want}, rel {err:e}"
            );
        }
    }
}

#[test]
fn bessel_accurate_at_largest_argument() {
    for &beta in &[order(0.0, 0.0), order(10.0, 0.0), order(-3.5, 1.0)] {
        let r = 10_000.0;
        let got = bessel_j(beta, r).unwrap();
        let want = bessel_oracle::bessel_j(beta, r);
        let err = (got - want).norm() / scale(beta, r, want);
        assert!(err <= 1e-10, "beta={beta}: rel {err:e}");
    }
}

#[test]
fn half_integer_value_at_quarter_period() {
    let v = bessel_j(order(0.5, 0.0), PI / 2.0).unwrap();
    assert!((v.re - 2.0 / PI).abs() < 1e-12);
}

/// Naive double-precision series; adequate below `x = 3`.
fn j0_naive(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..40 {
        term *= -(x * x / 4.0) / (k as f64 * k as f64);
        sum += term;
    }
    sum
}

#[test]
fn first_zero_of_order_zero() {
    let (mut lo, mut hi) = (2.0, 3.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if j0_naive(lo) * j0_naive(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    assert!((root - 2.404_825_557_7).abs() < 1e-9);
    let v = bessel_j(order(0.0, 0.0), 2.404_825_557_7).unwrap();
    assert!(v.norm() < 1e-8);
}

#[test]
fn small_argument_leading_term() {
    let beta = order(1.0, 0.0);
    for &r in &[1e-3, 1e-6, 1e-9] {
        let v = bessel_j(beta, r).unwrap();
        let lead = (r / 2.0) / gamma(Complex64::new(2.0, 0.0)).unwrap().re;
        assert!((v.re / lead - 1.0).abs() < r * r);
    }
}

#[test]
fn real_orders_give_real_values() {
    for &b in &[0.0, 0.3, 1.5, 4.0, -2.25, 9.9] {
        for &r in &[0.1, 2.0, 17.0, 31.0, 300.0] {
            let v = bessel_j(order(b, 0.0), r).unwrap();
            assert!(v.im.abs() <= 1e-12 * v.norm().max(f64::MIN_POSITIVE));
        }
    }
}

#[test]
fn three_term_recurrence_including_complex_orders() {
    let orders = [
        order(0.5, 0.0),
        order(2.0, 0.0),
        order(1.3, 0.7),
        order(-0.4, -1.2),
        order(4.5, 2.0),
        order(0.0, 1.0),
    ];
    for &beta in &orders {
        for &r in &[0.25, 1.7, 8.0, 25.0, 29.9, 30.1, 45.0, 300.0, 5000.0] {
            let below = bessel_j(order(beta.re - 1.0, beta.im), r).unwrap();
            let above = bessel_j(order(beta.re + 1.0, beta.im), r).unwrap();
            let mid = bessel_j(beta, r).unwrap();
            let rhs = beta.to_complex() * 2.0 / r * mid;
            let size = below.norm().max(above.norm()).max(rhs.norm());
            assert!(
                (below + above - rhs).norm() <= 1e-8 * size,
                "beta={beta} r={r}"
            );
        }
    }
}

#[test]
fn series_and_asymptotic_regimes_agree_in_overlap() {
    let lo = SERIES_THRESHOLD / 2.0;
    let hi = 2.0 * SERIES_THRESHOLD;
    for &beta in &[
        order(0.0, 0.0),
        order(0.5, 1.0),
        order(1.5, 0.0),
        order(2.5, -0.5),
    ] {
        let mut r = lo;
        while r <= hi {
            let oracle = bessel_oracle::bessel_j(beta, r);
            let s = scale(beta, r, oracle);
            let asym = bessel_j_asymptotic(beta, r).unwrap();
            assert!(
                (asym - oracle).norm() <= 1e-9 * s,
                "asymptotic beta={beta} r={r}"
            );
            if r <= SERIES_THRESHOLD {
                let series = bessel_j_series(beta, r).unwrap();
                assert!(
                    (series - oracle).norm() <= 1e-9 * s,
                    "series beta={beta} r={r}"
                );
                assert!(
                    (series - asym).norm() <= 1e-9 * s,
                    "overlap beta={beta} r={r}"
                );
            }
            r += 0.25;
        }
    }
}

#[test]
fn residual_decay_slope_for_order_zero() {
    let rs: Vec<f64> = (3..=9).map(|k| 2f64.powi(k)).collect();
    let res = expansion_residual(order(0.0, 0.0), 3, &rs).unwrap();
    let xs: Vec<f64> = rs.iter().map(|r| r.log2()).collect();
    let ys: Vec<f64> = res.iter().map(|e| e.log2()).collect();
    let slope = ls_slope(&xs, &ys);
    assert!(slope <= -(3.0 + 0.5) + 0.3, "slope {slope}");
    assert!((slope + 3.5).abs() <= 0.3, "slope {slope}");
}

#[test]
fn half_integer_residual_is_roundoff() {
    let rs = [1.0, 2.0, 10.0, 100.0, 1000.0];
    for n in 1..4 {
        let res = expansion_residual(order(0.5, 0.0), n, &rs).unwrap();
        for (r, e) in rs.iter().zip(res) {
            assert!(e <= 1e-14 * (2.0 / (PI * r)).sqrt(), "N={n} r={r} e={e:e}");
        }
    }
}

#[test]
fn leading_coefficients_validated_against_bessel() {
    // b₀ and d₀ alone reproduce J_β to O(r^{-3/2})
    for &beta in &[order(0.0, 0.0), order(1.0, 0.0), order(0.5, 1.0)] {
        let c = hankel_coefficients(beta, 1).unwrap();
        assert!(c.b[0].norm() > 0.0 && c.d[0].norm() > 0.0);
        for &r in &[200.0, 800.0] {
            let exact = bessel_j(beta, r).unwrap();
            let err = (exact - c.evaluate(r)).norm();
            assert!(err < 2.0 * r.powf(-1.5) * (1.0 + beta.norm().powi(2)));
        }
    }
}

#[test]
fn oracle_reproduces_closed_forms() {
    for &r in &[0.5, 7.0, 64.0, 2048.0] {
        let want = (2.0 / (PI * r)).sqrt() * r.sin();
        let got = bessel_oracle::bessel_j(order(0.5, 0.0), r);
        assert!(
            (got.re - want).abs() <= 1e-13 * (2.0 / (PI * r)).sqrt(),
            "r={r}"
        );
        let want = (2.0 / (PI * r)).sqrt() * (r.sin() / r - r.cos());
        let got = bessel_oracle::bessel_j(order(1.5, 0.0), r);
        assert!(
            (got.re - want).abs() <= 1e-13 * (2.0 / (PI * r)).sqrt(),
            "r={r}"
        );
    }
}
