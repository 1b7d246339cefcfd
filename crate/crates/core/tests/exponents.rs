mod common;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sphmax::exponents::{
    classify_region, d_exponent, extra_term, quadrangle_q, s2, s_n, sigma, sigma_terms,
    smoothing_anchor, smoothing_order, transfer_alpha, ExponentPoint, Figure1, Rational, RegionTag,
};

use common::random_admissible;

fn half() -> Rational {
    Ratio::new(1, 2)
}

#[test]
fn planar_identity_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        let pt = random_admissible(&mut rng, 2, 997);
        assert_eq!(
            sigma(&pt).unwrap(),
            s2(&pt).unwrap() - half() + pt.inv_q,
            "{pt}"
        );
        assert_eq!(sigma(&pt).unwrap(), transfer_alpha(s2(&pt).unwrap(), &pt));
    }
}

#[test]
fn higher_dimensional_identity_on_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in [3u32, 4, 5, 8] {
        for _ in 0..10_000 {
            let pt = random_admissible(&mut rng, n, 1009);
            let shift = Ratio::new(i64::from(n) - 1, 2);
            assert_eq!(
                d_exponent(&pt).unwrap(),
                s_n(&pt).unwrap() - shift + pt.inv_q,
                "{pt}"
            );
        }
    }
}

#[test]
fn vertex_b_is_the_anchor() {
    for n in 3..=12u32 {
        let fig = Figure1::new(n).unwrap();
        let (ip, iq, s0) = smoothing_anchor(n).unwrap();
        assert_eq!(fig.b, (ip, iq));
        let pt = ExponentPoint::new(ip, iq, n).unwrap();
        assert_eq!(s_n(&pt).unwrap(), s0);
    }
    assert_eq!(smoothing_anchor(3).unwrap().2, Ratio::new(2, 7));
}

#[test]
fn figure_one_vertices_in_three_dimensions() {
    let f = Figure1::new(3).unwrap();
    assert_eq!(f.a, (Ratio::new(1, 4), Ratio::new(1, 4)));
    assert_eq!(f.b, (Ratio::new(3, 7), Ratio::new(2, 7)));
    assert_eq!(f.c, (half(), half()));
    assert_eq!(f.d, (Rational::one(), Rational::one()));
    assert_eq!(f.e, (Rational::one(), Rational::zero()));
}

#[test]
fn quadrangle_is_the_negative_region() {
    let q = quadrangle_q(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inside, mut outside) = (0, 0);
    while inside < 1000 || outside < 1000 {
        let pt = random_admissible(&mut rng, 3, 1013);
        let v = (pt.inv_p, pt.inv_q);
        if q.contains_interior(v) && inside < 1000 {
            assert!(d_exponent(&pt).unwrap() < Rational::zero(), "{pt}");
            inside += 1;
        } else if !q.contains_closed(v) && outside < 1000 {
            assert!(sigma(&pt).unwrap() > Rational::zero(), "{pt}");
            outside += 1;
        }
    }
}

#[test]
fn partition_covers_the_admissible_triangle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in [2u32, 3, 6] {
        for _ in 0..2000 {
            let pt = random_admissible(&mut rng, n, 499);
            let label = classify_region(&pt);
            assert_ne!(label.tag, RegionTag::Outside, "{pt}");
        }
    }
    let bad = ExponentPoint::new(Ratio::new(1, 4), half(), 3).unwrap();
    assert_eq!(classify_region(&bad).tag, RegionTag::Outside);
}

fn point_strategy(dim: u32) -> impl Strategy<Value = ExponentPoint> {
    (1i64..=400).prop_flat_map(move |den| {
        (0..=den).prop_flat_map(move |a| {
            (0..=a).prop_map(move |b| {
                ExponentPoint::new(Ratio::new(a, den), Ratio::new(b, den), dim).unwrap()
            })
        })
    })
}

proptest! {
    #[test]
    fn sigma_is_the_largest_maximand(pt in point_strategy(3)) {
        let s = sigma(&pt).unwrap();
        prop_assert!(sigma_terms(&pt).iter().all(|t| *t <= s));
        prop_assert!(sigma_terms(&pt).contains(&s));
        prop_assert!(d_exponent(&pt).unwrap() >= s);
        prop_assert!(d_exponent(&pt).unwrap() >= extra_term(&pt));
    }

    #[test]
    fn smoothing_order_is_continuous_across_branches(pt in point_strategy(2)) {
        // s₂ is a max of affine pieces glued continuously: nudging by 1/10⁶
        // moves it by at most 3/10⁶ (largest slope)
        let eps = Ratio::new(1, 1_000_000);
        if pt.inv_p + eps <= Rational::one() {
            let moved = ExponentPoint::new(pt.inv_p + eps, pt.inv_q, 2).unwrap();
            let d = (smoothing_order(&moved).unwrap() - smoothing_order(&pt).unwrap()).abs();
            prop_assert!(d <= eps * 3);
        }
    }

    #[test]
    fn focusing_maximand_is_affine(a in 0i64..=100, b in 0i64..=100) {
        let (a, b) = (a.max(b), a.min(b));
        let pt = ExponentPoint::new(Ratio::new(a, 100), Ratio::new(b, 100), 4).unwrap();
        prop_assert_eq!(sigma_terms(&pt)[0], pt.inv_p - pt.inv_q * 4);
    }
}
