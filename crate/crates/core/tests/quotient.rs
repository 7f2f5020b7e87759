use paperfold::geometry::Point;
use paperfold::quotient::{self, build_net, Net, NetOptions, QuotientError, WalkGraph};
use paperfold::{presets, random, Scheme};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense Dijkstra over every node, weights `w(i, j)`.
fn dense_dijkstra(n: usize, src: usize, w: impl Fn(usize, usize) -> f64) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    dist[src] = 0.0;
    for _ in 0..n {
        let Some(u) = (0..n).filter(|&i| !done[i]).min_by(|&a, &b| dist[a].total_cmp(&dist[b])) else {
            break;
        };
        done[u] = true;
        for v in 0..n {
            if !done[v] {
                let nd = dist[u] + w(u, v);
                if nd < dist[v] {
                    dist[v] = nd;
                }
            }
        }
    }
    dist
}

fn jump_oracle(net: &Net, g: &WalkGraph<'_>, src: usize) -> Vec<f64> {
    let n = net.len();
    let mut jump = vec![vec![false; n]; n];
    for &(i, j) in g.jump_edges() {
        jump[i][j] = true;
        jump[j][i] = true;
    }
    dense_dijkstra(n, src, |i, j| if jump[i][j] { 0.0 } else { net.intrinsic(i, j) })
}

#[test]
fn walk_graph_matches_uncontracted_dijkstra() {
    for (s, delta) in [
        (presets::sq2(), 0.08),
        (presets::torus(), 0.08),
        (presets::canon1().truncate(3).unwrap(), 0.08),
        (presets::singular1().truncate(2).unwrap(), 0.1),
    ] {
        let net = build_net(&s, delta).unwrap();
        let g = WalkGraph::new(&net, &s).unwrap();
        for src in (0..net.len()).step_by(net.len() / 7 + 1) {
            let oracle = jump_oracle(&net, &g, src);
            let got = g.distances_from(src);
            for j in 0..net.len() {
                assert!((oracle[j] - got[j]).abs() <= 1e-9, "node {src}->{j}: {} vs {}", got[j], oracle[j]);
            }
        }
    }
}

/// Boundary samples every `h` along the SQ2 boundary plus two points, with the
/// fold partners s <-> 2 - s and s <-> 6 - s written out by hand.
fn sq2_brute_force(x: Point, y: Point, h: f64) -> f64 {
    let sq = presets::unit_square();
    let m = (4.0 / h).round() as usize;
    let mut pts: Vec<Point> = (0..m).map(|k| sq.boundary_point(k as f64 * h)).collect();
    pts.push(x);
    pts.push(y);
    let half = m / 2;
    let partner = |k: usize| -> Option<usize> {
        match k {
            _ if k >= m => None,
            _ if k <= half => Some(half - k),
            _ => Some(3 * half - k),
        }
    };
    let n = pts.len();
    let d = dense_dijkstra(n, m, |i, j| {
        if partner(i) == Some(j) || partner(j) == Some(i) {
            0.0
        } else {
            pts[i].dist(pts[j])
        }
    });
    d[m + 1]
}

#[test]
fn sq2_distance_against_brute_force() {
    let s = presets::sq2();
    for (x, y) in [
        (Point::new(0.2, 0.8), Point::new(0.9, 0.3)),
        (Point::new(0.5, 0.05), Point::new(0.95, 0.5)),
        (Point::new(0.1, 0.1), Point::new(0.9, 0.9)),
    ] {
        let oracle = sq2_brute_force(x, y, 0.002);
        let r = quotient::refine_until(&s, x, y, 1e-3).unwrap();
        assert!((r.result.value - oracle).abs() <= 0.02, "{x}->{y}: {} vs {oracle}", r.result.value);
        assert!(r.result.value <= x.dist(y) + 1e-12);
    }
    let (x, y) = (Point::new(0.5, 0.5), Point::new(0.25, 0.0));
    let oracle = sq2_brute_force(x, y, 0.002);
    let r = quotient::quotient_distance(&s, x, y, 0.01).unwrap();
    assert!((r.value - oracle).abs() <= 0.02, "{} vs {oracle}", r.value);
    // (t, 0) and (1, 1 - t) are glued by the first fold.
    let glued = quotient::quotient_distance(&s, Point::new(0.3, 0.0), Point::new(1.0, 0.7), 0.02).unwrap();
    assert!(glued.value <= 1e-12);
}

#[test]
fn net_covers_the_polygon() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in [presets::sq2(), presets::canon1().truncate(2).unwrap()] {
        let net = build_net(&s, 0.05).unwrap();
        for _ in 0..300 {
            let p = random::interior_point(&mut rng, s.polygon());
            assert!(net.nearest_node_distance(p) <= net.mesh() + 1e-12);
            let b = s.polygon().boundary_point(rng.gen_range(0.0..s.polygon().perimeter()));
            assert!(net.nearest_node_distance(b) <= net.mesh() + 1e-12);
        }
    }
}

#[test]
fn nets_are_nested() {
    let s = presets::canon2().truncate(3).unwrap();
    let coarse = Net::build(&[&s], 0.05, &NetOptions::default()).unwrap();
    let fine = Net::build(&[&s], 0.05, &NetOptions { level: 1, ..NetOptions::default() }).unwrap();
    for &p in coarse.points() {
        assert!(fine.node_of_point(p).is_some(), "{p} missing from the finer net");
    }
}

#[test]
fn budget_is_enforced() {
    let s = presets::sq2();
    let opts = NetOptions {
        budget: 50,
        ..NetOptions::default()
    };
    let err = Net::build(&[&s], 0.01, &opts).unwrap_err();
    assert!(matches!(err, QuotientError::MeshTooFine { .. }));
    assert!(matches!(quotient::quotient_distance(&s, Point::new(0.5, 0.5), Point::new(0.2, 0.2), -1.0), Err(QuotientError::InvalidMesh(_))));
}

fn small_scheme(seed: u64) -> Scheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if seed % 2 == 0 {
        let p = random::star_polygon(&mut rng, 5);
        random::plain_scheme(&mut rng, p)
    } else {
        let p = random::orthogonal_polygon(&mut rng);
        random::unit_scheme(&mut rng, p, false)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn refinement_never_increases(seed in any::<u64>()) {
        let s = small_scheme(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random::interior_point(&mut rng, s.polygon());
        let y = random::interior_point(&mut rng, s.polygon());
        let per = s.polygon().perimeter();
        let opts = quotient::RefineOptions { delta: Some(per / 40.0), tol: Some(per / 2000.0), ..Default::default() };
        let r = quotient::refine_until_with(&s, x, y, &opts).unwrap();
        prop_assert!(r.history.windows(2).all(|w| w[1].1 <= w[0].1 && w[1].0 < w[0].0));
        prop_assert!(r.result.value <= s.polygon().intrinsic_distance(x, y).unwrap() + 1e-12);
    }

    #[test]
    fn semi_metric_on_random_schemes(seed in any::<u64>()) {
        let s = small_scheme(seed);
        let net = build_net(&s, s.polygon().perimeter() / 40.0).unwrap();
        let m = quotient::all_pairs_quotient(&s, &net).unwrap();
        prop_assert_eq!(m.max_asymmetry(), 0.0);
        prop_assert!(m.max_triangle_violation() <= 1e-12);
        for i in 0..net.len() {
            prop_assert_eq!(m.get(i, i), 0.0);
        }
    }
}
