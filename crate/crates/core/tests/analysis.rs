use std::f64::consts::PI;

use paperfold::analysis;
use paperfold::{presets, random, Scheme};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_scheme(seed: u64) -> Scheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match seed % 4 {
        0 => {
            let p = random::convex_polygon(&mut rng, 3 + (seed % 5) as usize);
            random::plain_scheme(&mut rng, p)
        }
        1 => {
            let p = random::star_polygon(&mut rng, 4 + (seed % 5) as usize);
            random::plain_scheme(&mut rng, p)
        }
        k => {
            let p = random::orthogonal_polygon(&mut rng);
            random::unit_scheme(&mut rng, p, k == 2)
        }
    }
}

/// Curvature total by hand: each class contributes 2π minus the angles of its vertex members
/// (π for a side-interior member).
fn hand_total(s: &Scheme) -> f64 {
    let polygon = s.polygon();
    let table = s.boundary_classes();
    (0..table.class_count())
        .map(|c| {
            let angle: f64 = table
                .members(c)
                .iter()
                .map(|&x| polygon.vertex_at(x).map_or(PI, |v| polygon.angles()[v]))
                .sum();
            2.0 * PI - angle
        })
        .sum()
}

#[test]
fn torus_is_flat() {
    let r = analysis::curvature_report(&presets::torus(), false);
    assert!(r.cone_points.is_empty());
    assert_eq!(r.euler_char, 0);
    let all = analysis::curvature_report(&presets::torus(), true);
    assert_eq!(all.cone_points.len(), 1);
    assert!((all.cone_points[0].total_angle - 2.0 * PI).abs() < 1e-12);
}

#[test]
fn pattern_curvature_grows() {
    for inf in [presets::canon2(), presets::singular1()] {
        let totals: Vec<f64> = (1..=8).map(|n| analysis::total_abs_curvature(&inf.truncate(n).unwrap())).collect();
        assert!(totals.windows(2).all(|w| w[1] > w[0]), "{totals:?}");
    }
}

#[test]
fn singular1_angles() {
    let rows = analysis::singularity_indicators(&presets::singular1(), 6).unwrap();
    for r in &rows {
        assert!((r.max_angle - 3.5 * PI).abs() < 1e-9, "n={}: {}", r.n, r.max_angle);
        assert!((r.total_abs_curv - (2 * r.n + 8) as f64 * PI).abs() < 1e-9);
    }
    let s = presets::singular1().truncate(2).unwrap();
    assert!(analysis::class_angles(&s).iter().any(|c| (c.total_angle - 3.0 * PI).abs() < 1e-9));
}

#[test]
fn canon1_indicators() {
    let rows = analysis::singularity_indicators(&presets::canon1(), 5).unwrap();
    for r in &rows {
        assert_eq!(r.near_count, 2 * r.n as usize);
        assert!((r.max_angle - (1.5 + 2.0 * r.n as f64) * PI).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_bonnet_on_random_schemes(seed in any::<u64>()) {
        let s = random_scheme(seed);
        let r = analysis::curvature_report(&s, true);
        prop_assert!(r.gauss_bonnet_residual.abs() <= 1e-9);
        let total: f64 = r.cone_points.iter().map(|c| c.curvature).sum();
        prop_assert!((total - hand_total(&s)).abs() <= 1e-9);
        prop_assert!((total - 2.0 * PI * r.euler_char as f64).abs() <= 1e-9);
        if s.is_plain() {
            prop_assert_eq!(r.euler_char, 2);
        }
    }

    #[test]
    fn side_interior_pairs_are_flat(seed in any::<u64>()) {
        let s = random_scheme(seed);
        let polygon = s.polygon();
        for c in analysis::class_angles(&s) {
            if c.members.len() == 2 && c.members.iter().all(|&x| polygon.vertex_at(x).is_none()) {
                prop_assert!(c.is_flat(), "class {:?}", c.members);
            }
        }
        for c in analysis::cone_points(&s) {
            prop_assert!(!c.is_flat());
        }
    }
}
