use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sphmax::field::io::{radial_profile, write_radial_csv};
use sphmax::field::norms::l2_norm;
use sphmax::field::{
    lebesgue_norm, make_mask, sobolev_norm, transform, Direction, GridField, GridSpec,
    LebesgueExponent, MaskKind, RegionMask, Representation,
};

fn random_field(spec: GridSpec, seed: u64) -> GridField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..spec.len())
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    GridField::new(spec, samples, Representation::Space).unwrap()
}

fn gaussian(spec: GridSpec, a: f64) -> GridField {
    GridField::from_space_fn(spec, |x| {
        Complex64::new((-PI * a * x.iter().map(|v| v * v).sum::<f64>()).exp(), 0.0)
    })
}

fn rel_l2(a: &GridField, b: &GridField) -> f64 {
    let num: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let den: f64 = b.samples().iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn finite(p: f64) -> LebesgueExponent {
    LebesgueExponent::new(p).unwrap()
}

#[test]
fn parseval_and_round_trip() {
    for (dim, n, l) in [(2, 64, 8.0), (2, 512, 6.0), (3, 32, 5.0), (1, 1024, 3.0)] {
        let spec = GridSpec::new(dim, n, l).unwrap();
        let f = random_field(spec, 7 + n as u64);
        let fh = transform(&f, Direction::Forward).unwrap();
        let a = l2_norm(&f);
        let b = l2_norm(&fh);
        assert!((a - b).abs() <= 1e-12 * a, "dim={dim} n={n}");
        let back = transform(&fh, Direction::Inverse).unwrap();
        assert!(rel_l2(&back, &f) <= 1e-12);
    }
}

#[test]
fn lattice_exponential_gives_single_spike() {
    let spec = GridSpec::new(2, 32, 4.0).unwrap();
    let k = [3i64, -5];
    let f = GridField::from_space_fn(spec, |x| {
        // kernel e^{+2πi x·ξ} picks up e^{-2πi k·x/L} at ξ = k/L
        let phase = -2.0 * PI * (k[0] as f64 * x[0] + k[1] as f64 * x[1]) / 4.0;
        Complex64::from_polar(1.0, phase)
    });
    let fh = transform(&f, Direction::Forward).unwrap();
    let spike = spec.flat_index(&[spec.wrap_index(k[0]), spec.wrap_index(k[1])]);
    for (i, v) in fh.samples().iter().enumerate() {
        if i == spike {
            assert!((v - Complex64::new(16.0, 0.0)).norm() < 1e-11);
        } else {
            assert!(v.norm() < 1e-11);
        }
    }
}

#[test]
fn gaussian_transform_matches_closed_form() {
    for (dim, a) in [(2, 1.0), (2, 2.5), (3, 0.8)] {
        let spec = GridSpec::new(dim, if dim == 2 { 128 } else { 64 }, 8.0).unwrap();
        let f = gaussian(spec, a);
        let fh = transform(&f, Direction::Forward).unwrap();
        let exact = GridField::from_frequency_fn(spec, |xi| {
            let r2: f64 = xi.iter().map(|v| v * v).sum();
            Complex64::new(a.powf(-(dim as f64) / 2.0) * (-PI * r2 / a).exp(), 0.0)
        });
        let peak = a.powf(-(dim as f64) / 2.0);
        for (u, v) in fh.samples().iter().zip(exact.samples()) {
            assert!((u - v).norm() <= 1e-8 * peak);
        }
    }
}

#[test]
fn gaussian_l2_norm_matches_integral() {
    for (dim, a) in [(2, 1.0), (3, 1.5)] {
        let spec = GridSpec::new(dim, 64, 8.0).unwrap();
        let f = gaussian(spec, a);
        let got = lebesgue_norm(&f, finite(2.0), &RegionMask::full(spec)).unwrap();
        let want = (2.0 * a).powf(-(dim as f64) / 4.0);
        assert!((got / want - 1.0).abs() < 1e-6);
    }
}

#[test]
fn infinity_norm_is_grid_max() {
    let spec = GridSpec::new(2, 64, 8.0).unwrap();
    let f = gaussian(spec, 1.0);
    let sup = lebesgue_norm(&f, LebesgueExponent::Infinite, &RegionMask::full(spec)).unwrap();
    assert_eq!(sup, 1.0);
}

#[test]
fn empty_mask_rejected() {
    let spec = GridSpec::new(2, 16, 8.0).unwrap();
    let mask = make_mask(
        spec,
        MaskKind::Ball {
            center: vec![0.25, 0.25],
            radius: 0.01,
        },
    )
    .unwrap();
    assert_eq!(mask.count(), 0);
    let f = gaussian(spec, 1.0);
    assert!(lebesgue_norm(&f, finite(2.0), &mask).is_err());
}

#[test]
fn ball_measure_converges() {
    for (dim, n) in [(2, 256), (3, 256)] {
        let l = 2.0;
        let spec = GridSpec::new(dim, n, l).unwrap();
        let mask = make_mask(
            spec,
            MaskKind::Ball {
                center: vec![0.0; dim],
                radius: l / 2.0,
            },
        )
        .unwrap();
        let vol = PI.powf(dim as f64 / 2.0) / gamma_small(dim as f64 / 2.0 + 1.0);
        let want = vol * (l / 2.0).powi(dim as i32);
        assert!((mask.measure() / want - 1.0).abs() < 0.02, "dim={dim}");
    }
}

/// Γ at half-integers and integers by recurrence from Γ(1/2), Γ(1).
fn gamma_small(x: f64) -> f64 {
    if x == 0.5 {
        PI.sqrt()
    } else if x == 1.0 {
        1.0
    } else {
        (x - 1.0) * gamma_small(x - 1.0)
    }
}

#[test]
fn slab_measure_is_rectangle_area() {
    let j = 4;
    let spec = GridSpec::new(2, 1024, 5.0).unwrap();
    let t = 2f64.powf(-(j as f64) / 2.0);
    let mask = make_mask(
        spec,
        MaskKind::Slab {
            x1_min: 1.0,
            x1_max: 2.0,
            transverse_radius: t,
        },
    )
    .unwrap();
    assert!((mask.measure() / (2.0 * t) - 1.0).abs() < 0.02);
}

#[test]
fn sector_measure_scales_with_width() {
    let spec = GridSpec::new(2, 2048, 4.5).unwrap();
    let measure = |w: f64| {
        make_mask(
            spec,
            MaskKind::Sector {
                direction: vec![1.0, 0.0],
                width: w,
                r_min: 1.0,
                r_max: 2.0,
            },
        )
        .unwrap()
        .measure()
    };
    let ratio = measure(2e-2) / measure(1e-2);
    assert!((ratio / 2.0 - 1.0).abs() < 0.05, "ratio {ratio}");
    // chordal width w is angle 2 asin(w/2); area = angle × (r_max² - r_min²)/2
    let area = 2.0 * (1e-2f64 / 2.0).asin() * 2.0 * 1.5;
    assert!((measure(1e-2) / area - 1.0).abs() < 0.05);
}

#[test]
fn norms_shrink_with_mask() {
    let spec = GridSpec::new(2, 128, 6.0).unwrap();
    let f = random_field(spec, 3);
    let mut prev = f64::INFINITY;
    for r in [3.0, 2.0, 1.0, 0.5] {
        let mask = make_mask(
            spec,
            MaskKind::Ball {
                center: vec![0.0, 0.0],
                radius: r,
            },
        )
        .unwrap();
        for p in [finite(1.0), finite(3.0), LebesgueExponent::Infinite] {
            let v = lebesgue_norm(&f, p, &mask).unwrap();
            if p == finite(3.0) {
                assert!(v <= prev);
                prev = v;
            }
        }
    }
}

#[test]
fn norm_homogeneity() {
    let spec = GridSpec::new(2, 64, 3.0).unwrap();
    let f = random_field(spec, 11);
    let c = Complex64::new(-2.5, 1.25);
    let mut g = f.clone();
    g.samples_mut().iter_mut().for_each(|v| *v *= c);
    let full = RegionMask::full(spec);
    for p in [
        finite(1.0),
        finite(2.0),
        finite(7.5),
        LebesgueExponent::Infinite,
    ] {
        let a = lebesgue_norm(&f, p, &full).unwrap() * c.norm();
        let b = lebesgue_norm(&g, p, &full).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }
}

#[test]
fn holder_nesting_on_unit_box() {
    let spec = GridSpec::new(2, 64, 1.0).unwrap();
    let full = RegionMask::full(spec);
    for seed in 0..5 {
        let f = random_field(spec, seed);
        let ps = [1.0, 1.5, 2.0, 4.0, 10.0];
        let norms: Vec<f64> = ps
            .iter()
            .map(|&p| lebesgue_norm(&f, finite(p), &full).unwrap())
            .collect();
        for w in norms.windows(2) {
            assert!(w[0] <= w[1] * (1.0 + 1e-14));
        }
        let sup = lebesgue_norm(&f, LebesgueExponent::Infinite, &full).unwrap();
        assert!(norms[4] <= sup);
    }
}

#[test]
fn norms_are_thread_count_independent() {
    let spec = GridSpec::new(2, 512, 4.0).unwrap();
    let f = random_field(spec, 99);
    let full = RegionMask::full(spec);
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let fh = transform(&f, Direction::Forward).unwrap();
                (
                    lebesgue_norm(&f, finite(2.0), &full).unwrap(),
                    lebesgue_norm(&f, finite(3.0), &full).unwrap(),
                    l2_norm(&fh),
                )
            })
    };
    let one = run(1);
    for t in [2, 3, 8] {
        assert_eq!(run(t), one);
    }
}

#[test]
fn sobolev_order_zero_is_lebesgue() {
    let spec = GridSpec::new(2, 128, 6.0).unwrap();
    let f = random_field(spec, 5);
    let full = RegionMask::full(spec);
    for p in [finite(1.0), finite(2.0), LebesgueExponent::Infinite] {
        let a = lebesgue_norm(&f, p, &full).unwrap();
        let b = sobolev_norm(&f, 0.0, p).unwrap();
        assert!((a - b).abs() <= 1e-10 * a);
    }
}

#[test]
fn sobolev_order_two_gaussian() {
    let spec = GridSpec::new(2, 128, 8.0).unwrap();
    let f = gaussian(spec, 1.0);
    let got = sobolev_norm(&f, 2.0, finite(2.0)).unwrap();
    // ∫ (1+|ξ|²)² e^{-2π|ξ|²} dξ over ℝ²
    let tp = 2.0 * PI;
    let want = (PI * (1.0 / tp + 2.0 / tp.powi(2) + 2.0 / tp.powi(3))).sqrt();
    assert!((got / want - 1.0).abs() < 1e-6);
}

#[test]
fn sobolev_ratio_on_frequency_annulus() {
    let spec = GridSpec::new(2, 256, 8.0).unwrap();
    for j in 2..5 {
        let c = 2f64.powi(j);
        let f = GridField::from_frequency_fn(spec, |xi| {
            let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let u = (r - c) / (0.25 * c);
            Complex64::new(
                if u.abs() < 1.0 {
                    (1.0 - u * u).powi(3)
                } else {
                    0.0
                },
                0.0,
            )
        })
        .to_representation(Representation::Space);
        for s in [0.5, 1.0, 2.0] {
            for p in [finite(2.0), finite(1.0), LebesgueExponent::Infinite] {
                let ratio = sobolev_norm(&f, s, p).unwrap()
                    / lebesgue_norm(&f, p, &RegionMask::full(spec)).unwrap();
                let lo = 2f64.powf((j - 1) as f64 * s);
                let hi = 2f64.powf((j + 2) as f64 * s);
                assert!(ratio >= lo && ratio <= hi, "j={j} s={s} ratio={ratio}");
            }
        }
    }
}

#[test]
fn radial_profile_of_gaussian() {
    let spec = GridSpec::new(2, 128, 8.0).unwrap();
    let f = gaussian(spec, 1.0);
    let prof = radial_profile(&f, 0.125);
    for (r, v) in prof.iter().take(10) {
        let lo = (-PI * (r + 0.0625).powi(2)).exp();
        let hi = (-PI * (r - 0.0625).max(0.0).powi(2)).exp();
        assert!(v.re >= lo - 1e-12 && v.re <= hi + 1e-12);
    }
    let mut csv = Vec::new();
    write_radial_csv(&mut csv, &prof[..2]).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("r,re,im\n6.250000000000000e-2,"));
}
