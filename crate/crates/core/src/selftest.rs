//! Fast invariant suite behind the `selftest` command.
//!
//! Every check reports its name, the measured quantity and the tolerance it
//! was held to. [`Faults`] injects known defects so the suite can be shown
//! to catch them.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::experiments::regression::ols;
use crate::exponents::{
    d_exponent, s2_branch, s2_branch_value, s_n, sigma, smoothing_anchor, ExponentPoint, Figure1,
    Rational, S2Branch,
};
use crate::field::norms::l2_norm;
use crate::field::{Direction, GridField, GridSpec, Representation};
use crate::operators::cutoff::{phi, psi};
use crate::operators::decompose::{residual_law, Decomposer};
use crate::operators::{
    half_wave, normalized_spherical_multiplier, spherical_multiplier, WaveSign,
};
use crate::specfun::{bessel_j, gamma, hankel_coefficients, residual_against, ComplexOrder};

/// Deliberate defects for checking that the suite detects them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Faults {
    /// Added to the middle branch of `s₂`.
    pub s2_middle_shift: Option<Rational>,
    /// Phase error (radians) applied to `b₀` and, conjugated, to `d₀`.
    pub b0_phase_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub module: String,
    pub name: String,
    pub passed: bool,
    /// Measured value, e.g. the worst error seen.
    pub measured: String,
    /// The bound it was held to.
    pub tolerance: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Outcome {
    passed: bool,
    measured: String,
    tolerance: String,
}

fn at_most(value: f64, bound: f64) -> Outcome {
    Outcome {
        passed: value <= bound,
        measured: format!("{value:.3e}"),
        tolerance: format!("<= {bound:.1e}"),
    }
}

fn exact(mismatches: usize, total: usize) -> Outcome {
    Outcome {
        passed: mismatches == 0,
        measured: format!("{mismatches} of {total} points differ"),
        tolerance: "exact".into(),
    }
}

fn s2_with(faults: &Faults, pt: &ExponentPoint) -> Rational {
    let branch = s2_branch(pt);
    let v = s2_branch_value(branch, pt);
    match (branch, faults.s2_middle_shift) {
        (S2Branch::MiddleQ, Some(shift)) => v + shift,
        _ => v,
    }
}

fn random_points(seed: u64, dim: u32, count: usize) -> Vec<ExponentPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.random_range(0..=360i64);
            let b = rng.random_range(0..=a);
            ExponentPoint::new(Ratio::new(a, 360), Ratio::new(b, 360), dim).expect("valid point")
        })
        .collect()
}

fn planar_identity(faults: &Faults) -> Outcome {
    let pts = random_points(7, 2, 4000);
    let bad = pts
        .iter()
        .filter(|pt| {
            let lhs = sigma(pt).expect("admissible");
            lhs != s2_with(faults, pt) - Ratio::new(1, 2) + pt.inv_q
        })
        .count();
    exact(bad, pts.len())
}

fn higher_identity() -> Outcome {
    let mut bad = 0;
    let mut total = 0;
    for n in [3u32, 4, 5] {
        for pt in random_points(u64::from(n), n, 1000) {
            total += 1;
            let lhs = d_exponent(&pt).expect("admissible");
            let rhs = s_n(&pt).expect("admissible") - Ratio::new(i64::from(n) - 1, 2) + pt.inv_q;
            bad += usize::from(lhs != rhs);
        }
    }
    exact(bad, total)
}

fn anchor_vertex() -> Outcome {
    let mut bad = 0;
    for n in 3..=12u32 {
        let fig = Figure1::new(n).expect("dimension");
        let (ip, iq, s0) = smoothing_anchor(n).expect("dimension");
        let pt = ExponentPoint::new(ip, iq, n).expect("valid");
        bad += usize::from(fig.b != (ip, iq) || s_n(&pt).ok() != Some(s0));
    }
    exact(bad, 10)
}

fn gamma_values() -> Outcome {
    let cases = [
        (0.5, PI.sqrt()),
        (5.0, 24.0),
        (-0.5, -2.0 * PI.sqrt()),
        (1.5, PI.sqrt() / 2.0),
    ];
    let worst = cases
        .iter()
        .map(|&(z, want)| {
            let g = gamma(Complex64::new(z, 0.0))
                .map(|g| g.re)
                .unwrap_or(f64::NAN);
            ((g - want) / want).abs()
        })
        .fold(0.0, f64::max);
    at_most(worst, 1e-12)
}

fn bessel_half_integer() -> Outcome {
    let mut worst = 0.0f64;
    for k in 1..200 {
        let r = 0.05 * k as f64 + 0.013 * k as f64 * k as f64;
        let j = bessel_j(ComplexOrder::real(0.5), r)
            .map(|v| v.re)
            .unwrap_or(f64::NAN);
        let want = (2.0 / (PI * r)).sqrt() * r.sin();
        let env = (2.0 / (PI * r)).sqrt();
        worst = worst.max((j - want).abs() / env.max(want.abs()));
    }
    at_most(worst, 1e-12)
}

fn bessel_recurrence() -> Outcome {
    let mut worst = 0.0f64;
    for (re, im) in [(0.3, 0.0), (1.7, 0.0), (0.5, 1.0), (-0.25, -0.5)] {
        for k in 1..40 {
            let r = 0.7 * k as f64;
            let b = Complex64::new(re, im);
            let j = |o: Complex64| bessel_j(ComplexOrder::from_complex(o), r).unwrap_or_default();
            let lhs = j(b - 1.0) + j(b + 1.0);
            let rhs = j(b) * (2.0 * b / r);
            worst = worst.max((lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-3));
        }
    }
    at_most(worst, 1e-8)
}

fn hankel_residual_slope(faults: &Faults) -> Outcome {
    let beta = ComplexOrder::real(0.0);
    let terms = 3;
    let mut coeffs = match hankel_coefficients(beta, terms) {
        Ok(c) => c,
        Err(e) => {
            return Outcome {
                passed: false,
                measured: e.to_string(),
                tolerance: "coefficients".into(),
            }
        }
    };
    if let Some(err) = faults.b0_phase_error {
        coeffs.b[0] *= Complex64::from_polar(1.0, err);
        coeffs.d[0] *= Complex64::from_polar(1.0, -err);
    }
    let rs: Vec<f64> = (3..=9).map(|k| 2f64.powi(k)).collect();
    let slope = residual_against(&coeffs, &rs)
        .ok()
        .and_then(|res| {
            let xs: Vec<f64> = rs.iter().map(|r| r.log2()).collect();
            let ys: Vec<f64> = res.iter().map(|v| v.log2()).collect();
            ols(&xs, &ys).ok()
        })
        .map(|f| f.slope)
        .unwrap_or(f64::NAN);
    let bound = -(terms as f64 + 0.5) + 0.3;
    Outcome {
        passed: slope <= bound,
        measured: format!("slope {slope:.3}"),
        tolerance: format!("<= {bound:.2}"),
    }
}

fn random_field(spec: GridSpec, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..spec.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridField::new(spec, samples, Representation::Space).expect("sized")
}

fn spec64() -> GridSpec {
    GridSpec::new(2, 64, 4.0).expect("valid grid")
}

fn parseval() -> Outcome {
    let f = random_field(spec64(), 3);
    let g = f.to_representation(Representation::Frequency);
    let (a, b) = (l2_norm(&f), l2_norm(&g));
    at_most((a - b).abs() / a, 1e-12)
}

fn round_trip() -> Outcome {
    let f = random_field(spec64(), 4);
    let mut g = f.clone();
    let ok = g.transform_in_place(Direction::Forward).is_ok()
        && g.transform_in_place(Direction::Inverse).is_ok();
    let err = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
        / f.samples().iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    at_most(if ok { err } else { f64::INFINITY }, 1e-12)
}

fn gaussian_transform() -> Outcome {
    let spec = GridSpec::new(2, 128, 8.0).expect("valid grid");
    let f = GridField::from_space_fn(spec, |x| {
        Complex64::new((-PI * (x[0] * x[0] + x[1] * x[1])).exp(), 0.0)
    });
    let g = f.to_representation(Representation::Frequency);
    let want = GridField::from_frequency_fn(spec, |xi| {
        Complex64::new((-PI * (xi[0] * xi[0] + xi[1] * xi[1])).exp(), 0.0)
    });
    let worst = g
        .samples()
        .iter()
        .zip(want.samples())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    at_most(worst, 1e-8)
}

fn ball_volume() -> Outcome {
    let alpha = ComplexOrder::real(1.0);
    let e2 = spherical_multiplier(2, alpha, 0.0).map(|v| (v.re - PI).abs());
    let e3 = spherical_multiplier(3, alpha, 0.0).map(|v| (v.re - 4.0 * PI / 3.0).abs());
    at_most(
        e2.unwrap_or(f64::INFINITY).max(e3.unwrap_or(f64::INFINITY)),
        1e-8,
    )
}

fn sphere_mean_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..2000 {
        let r = 0.1 + k as f64 * 0.05;
        let x = 2.0 * PI * r;
        let v = normalized_spherical_multiplier(3, ComplexOrder::real(0.0), r)
            .map(|v| v.re)
            .unwrap_or(f64::NAN);
        worst = worst.max((v - x.sin() / x).abs());
    }
    at_most(worst, 1e-8)
}

fn wave_unitarity() -> Outcome {
    let f = random_field(spec64(), 5);
    let n0 = l2_norm(&f);
    let worst = [0.3, 1.0, 1.7]
        .iter()
        .map(|&t| match half_wave(&f, t, WaveSign::Plus) {
            Ok(g) => (l2_norm(&g) - n0).abs() / n0,
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    at_most(worst, 1e-10)
}

fn partition_of_unity() -> Outcome {
    let mut worst = 0.0f64;
    for k in 0..5000 {
        let r = k as f64 * 0.01;
        let s = phi(r, 1.0) + (1..=8).map(|j| psi(j, r, 1.0)).sum::<f64>();
        worst = worst.max((s - 1.0).abs());
    }
    at_most(worst, 1e-12)
}

fn decomposition_law(faults: &Faults) -> Outcome {
    let alpha = ComplexOrder::real(0.0);
    let dim = 2;
    let terms = 3;
    let built = hankel_coefficients(alpha.bessel_order(dim), terms)
        .map_err(|e| e.to_string())
        .and_then(|mut c| {
            if let Some(err) = faults.b0_phase_error {
                c.b[0] *= Complex64::from_polar(1.0, err);
                c.d[0] *= Complex64::from_polar(1.0, -err);
            }
            Decomposer::with_coefficients(dim, alpha, 4.0, c).map_err(|e| e.to_string())
        })
        .and_then(|d| residual_law(&d, 8.0, 1024.0, 32).map_err(|e| e.to_string()));
    let bound = -(terms as f64 + 0.5) + 0.3;
    match built {
        Ok(law) => Outcome {
            passed: law.slope <= bound,
            measured: format!("slope {:.3}", law.slope),
            tolerance: format!("<= {bound:.2}"),
        },
        Err(e) => Outcome {
            passed: false,
            measured: e,
            tolerance: format!("<= {bound:.2}"),
        },
    }
}

type Check<'a> = (&'static str, &'static str, Box<dyn Fn() -> Outcome + 'a>);

/// Runs the whole suite with the given faults injected.
pub fn run_selftest(faults: &Faults) -> SelftestReport {
    let checks: Vec<Check> = vec![
        (
            "exponents",
            "planar identity sigma2 = s2 - 1/2 + 1/q",
            Box::new(|| planar_identity(faults)),
        ),
        (
            "exponents",
            "identity d_n = s_n - (n-1)/2 + 1/q",
            Box::new(higher_identity),
        ),
        (
            "exponents",
            "vertex B equals the smoothing anchor",
            Box::new(anchor_vertex),
        ),
        (
            "specfun",
            "gamma at reference points",
            Box::new(gamma_values),
        ),
        (
            "specfun",
            "J_1/2 closed form",
            Box::new(bessel_half_integer),
        ),
        (
            "specfun",
            "three-term recurrence",
            Box::new(bessel_recurrence),
        ),
        (
            "specfun",
            "expansion residual slope",
            Box::new(|| hankel_residual_slope(faults)),
        ),
        ("field", "Parseval", Box::new(parseval)),
        ("field", "transform round trip", Box::new(round_trip)),
        ("field", "Gaussian transform", Box::new(gaussian_transform)),
        (
            "operators",
            "ball volume at the origin",
            Box::new(ball_volume),
        ),
        (
            "operators",
            "sphere mean closed form (n = 3)",
            Box::new(sphere_mean_closed_form),
        ),
        ("operators", "half-wave unitarity", Box::new(wave_unitarity)),
        (
            "operators",
            "dyadic partition of unity",
            Box::new(partition_of_unity),
        ),
        (
            "operators",
            "decomposition residual slope",
            Box::new(|| decomposition_law(faults)),
        ),
    ];
    let checks = checks
        .into_iter()
        .map(|(module, name, f)| {
            let start = Instant::now();
            let o = f();
            CheckResult {
                module: module.into(),
                name: name.into(),
                passed: o.passed,
                measured: o.measured,
                tolerance: o.tolerance,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    SelftestReport { checks }
}

/// Convenience for the two documented mutations.
pub fn documented_faults() -> [Faults; 2] {
    [
        Faults {
            s2_middle_shift: Some(Ratio::new(1, 1_000_000)),
            b0_phase_error: None,
        },
        Faults {
            s2_middle_shift: None,
            b0_phase_error: Some(0.1),
        },
    ]
}
