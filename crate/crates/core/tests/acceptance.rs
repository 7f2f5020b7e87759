//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{PI, SQRT_2};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use paperfold::analysis;
use paperfold::approx::{self, ExperimentOptions};
use paperfold::geometry::{BoundaryInterval, Location, Point, Polygon};
use paperfold::gh::{self, CollapseWitness, DiffOptions};
use paperfold::presets;
use paperfold::quotient::{Net, NetOptions, WalkGraph};
use paperfold::random;
use paperfold::Scheme;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

/// Every named truncation used by several criteria.
fn truncations() -> Vec<(String, Scheme)> {
    let mut out = Vec::new();
    for (name, inf) in [
        ("canon1", presets::canon1()),
        ("canon2", presets::canon2()),
        ("singular1", presets::singular1()),
    ] {
        for n in 1..=8 {
            out.push((format!("{name} n={n}"), inf.truncate(n).unwrap()));
        }
    }
    out
}

fn random_schemes(count: usize) -> Vec<(String, Scheme)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..count)
        .map(|i| match i % 3 {
            0 => (format!("random plain star #{i}"), {
                let n = rng.gen_range(4..=8);
                let p = random::star_polygon(&mut rng, n);
                random::plain_scheme(&mut rng, p)
            }),
            1 => (format!("random orthogonal #{i}"), {
                let p = random::orthogonal_polygon(&mut rng);
                random::unit_scheme(&mut rng, p, false)
            }),
            _ => (format!("random plain orthogonal #{i}"), {
                let p = random::orthogonal_polygon(&mut rng);
                random::unit_scheme(&mut rng, p, true)
            }),
        })
        .collect()
}

fn suite() -> Vec<(String, Scheme)> {
    let mut all = vec![("SQ2".to_string(), presets::sq2()), ("torus".to_string(), presets::torus())];
    all.extend(truncations());
    all.extend(random_schemes(24));
    all
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let schemes = suite();
    let mut worst = 0.0f64;
    for (name, s) in &schemes {
        let r = analysis::gauss_bonnet_residual(s);
        ensure(r.abs() <= 1e-9, || format!("{name}: residual {r:e}"))?;
        worst = worst.max(r.abs());
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{} schemes, max |residual| = {worst:.1e}", schemes.len()))
}

fn criterion_2() -> Outcome {
    let mut plain = 0;
    for (name, s) in suite() {
        if s.is_plain() {
            plain += 1;
            let chi = analysis::euler_characteristic(&s);
            ensure(chi == 2, || format!("{name}: plain with chi = {chi}"))?;
        }
    }
    let chi = analysis::euler_characteristic(&presets::torus());
    ensure(chi == 0, || format!("torus chi = {chi}"))?;
    Ok(format!("{plain} plain schemes with chi = 2; torus chi = 0"))
}

fn criterion_3() -> Outcome {
    // Hand oracle: class {0, 2} gathers two right angles, {1} and {3} one each.
    let right = PI / 2.0;
    let mut expected = vec![2.0 * PI - 2.0 * right, 2.0 * PI - right, 2.0 * PI - right];
    expected.sort_by(f64::total_cmp);
    let mut got: Vec<f64> = analysis::cone_points(&presets::sq2()).iter().map(|c| c.curvature).collect();
    got.sort_by(f64::total_cmp);
    ensure(got.len() == 3, || format!("expected 3 cone points, got {got:?}"))?;
    for (g, e) in got.iter().zip(&expected) {
        ensure((g - e).abs() <= 1e-12, || format!("curvatures {got:?}, expected {expected:?}"))?;
    }
    Ok("curvatures {π, 3π/2, 3π/2}".into())
}

fn check_axioms(name: &str, s: &Scheme) -> Result<usize, String> {
    let delta = s.polygon().perimeter() / 100.0;
    let net = Net::build(&[s], delta, &NetOptions::default()).map_err(|e| e.to_string())?;
    let g = WalkGraph::new(&net, s).map_err(|e| e.to_string())?;
    let m = g.all_pairs();
    let asym = m.max_asymmetry();
    ensure(asym == 0.0, || format!("{name}: asymmetry {asym:e}"))?;
    let tri = m.max_triangle_violation();
    ensure(tri <= 1e-12, || format!("{name}: triangle violation {tri:e}"))?;
    for i in 0..net.len() {
        ensure(m.get(i, i) == 0.0, || format!("{name}: d({i},{i}) != 0"))?;
        for j in 0..net.len() {
            let (d, dp) = (m.get(i, j), net.intrinsic(i, j));
            ensure(d <= dp, || format!("{name}: d({i},{j}) = {d} > d_P = {dp}"))?;
        }
    }
    for &(i, j) in g.jump_edges() {
        ensure(m.get(i, j) == 0.0, || format!("{name}: jump pair ({i},{j}) at {}", m.get(i, j)))?;
    }
    let table = s.boundary_classes();
    for c in 0..table.class_count() {
        let nodes: Vec<usize> = table.members(c).iter().map(|&x| net.node_of_coord(x).unwrap()).collect();
        for &i in &nodes {
            for &j in &nodes {
                ensure(m.get(i, j) == 0.0, || format!("{name}: class {c} nodes ({i},{j}) apart"))?;
            }
        }
    }
    Ok(net.len())
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let a = check_axioms("SQ2", &presets::sq2())?;
    let b = check_axioms("canon1 n=3", &presets::canon1().truncate(3).unwrap())?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("nets of {a} and {b} nodes, symmetric, triangle slack <= 1e-12"))
}

fn criterion_5() -> Outcome {
    let s = presets::sq2();
    let per = s.polygon().perimeter();
    let delta = per / 100.0;
    let nets: Vec<Net> = (0..3)
        .map(|level| {
            // Level 2 with the interior grid needs about 20k nodes.
            let opts = NetOptions {
                level,
                budget: 40_000,
                ..NetOptions::default()
            };
            Net::build(&[&s], delta, &opts).unwrap()
        })
        .collect();
    let graphs: Vec<WalkGraph<'_>> = nets.iter().map(|n| WalkGraph::new(n, &s).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_final = 0.0f64;
    for _ in 0..50 {
        let (i, j) = (rng.gen_range(0..nets[0].len()), rng.gen_range(0..nets[0].len()));
        let (p, q) = (nets[0].points()[i], nets[0].points()[j]);
        let values: Vec<f64> = nets
            .iter()
            .zip(&graphs)
            .map(|(net, g)| g.distance(net.node_of_point(p).unwrap(), net.node_of_point(q).unwrap()))
            .collect();
        ensure(values.windows(2).all(|w| w[1] <= w[0]), || format!("{p} -> {q}: values {values:?} increase"))?;
        worst_final = worst_final.max(values[1] - values[2]);
    }
    ensure(worst_final < 1e-3 * per, || format!("final change {worst_final} >= {}", 1e-3 * per))?;
    Ok(format!("50 pairs non-increasing over 3 levels, max final change {worst_final:.2e}"))
}

fn criterion_6() -> Outcome {
    let inf = presets::canon1();
    let delta = 0.02;
    let mut lines = Vec::new();
    for n in 1..=5 {
        let (a, b) = (inf.truncate(n).unwrap(), inf.truncate(n + 1).unwrap());
        let gamma = inf.gamma_n(n);
        let opts = DiffOptions {
            exclude: Some(gamma),
            ..DiffOptions::default()
        };
        let diff = gh::sup_metric_diff_with(&a, &b, delta, &opts).map_err(|e| e.to_string())?;
        let bound = 2.0 * inf.polygon().arc_diameter(&gamma) + 4.0 * delta;
        ensure(diff.sup_diff <= bound, || format!("n={n}: sup {} > {bound}", diff.sup_diff))?;
        lines.push(format!("n={n}: {:.4} <= {:.4}", diff.sup_diff, bound));
    }
    Ok(lines.join("; "))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let delta = 0.02;
    let rows = approx::approximation_sequence(&presets::canon1(), 6, &ExperimentOptions::new(delta)).map_err(|e| e.to_string())?;
    for r in &rows {
        let expected = 5.0 * 1.01 * SQRT_2 * 0.5f64.powi(r.n as i32);
        ensure((r.theorem_bound - expected).abs() <= 1e-12 * expected, || {
            format!("n={}: theorem bound {} != {expected}", r.n, r.theorem_bound)
        })?;
        ensure(r.gh_bound <= r.theorem_bound + 5.0 * delta, || {
            format!("n={}: gh bound {} > {} + 5δ", r.n, r.gh_bound, r.theorem_bound)
        })?;
    }
    ensure(rows[4].gh_bound < rows[0].gh_bound, || "gh bound did not decrease".into())?;
    within(Duration::from_secs(600), start)?;
    let col: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.gh_bound)).collect();
    Ok(format!("gh_bound column [{}] in {:?}", col.join(", "), start.elapsed()))
}

fn criterion_8() -> Outcome {
    let inf = presets::canon1();
    let mut prev = f64::NEG_INFINITY;
    for n in 1..=8 {
        let t = analysis::total_abs_curvature(&inf.truncate(n).unwrap());
        let expected = 4.0 * f64::from(n) * PI + 3.0 * PI;
        ensure((t - expected).abs() <= 1e-9, || format!("n={n}: {t} != {expected}"))?;
        ensure(t > prev, || format!("n={n}: not increasing"))?;
        prev = t;
    }
    Ok("total |κ| = 4nπ + 3π for n = 1..8".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut pairs = 0;
    for i in 0..20 {
        let s = if i % 2 == 0 {
            let n = rng.gen_range(4..=8);
            let p = random::star_polygon(&mut rng, n);
            random::plain_scheme(&mut rng, p)
        } else {
            let p = random::orthogonal_polygon(&mut rng);
            random::unit_scheme(&mut rng, p, true)
        };
        let table = s.boundary_classes();
        let cuts = table.cut_points();
        for a in 0..cuts.len() {
            for b in 0..cuts.len() {
                let by_table = table.class_of(a) == table.class_of(b);
                let by_arc = s.equivalent_by_plain_arc(cuts[a], cuts[b]).map_err(|e| e.to_string())?;
                ensure(by_table == by_arc, || {
                    format!("scheme {i}: cut points {} and {} disagree ({by_table} vs {by_arc})", cuts[a], cuts[b])
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("20 schemes, {pairs} cut point pairs agree"))
}

fn criterion_10() -> Outcome {
    let inf = presets::canon1();
    let mut checked = 0;
    for n in 1..=5 {
        for m in [n + 1, 8] {
            let (a, b) = (inf.truncate(n).unwrap(), inf.truncate(m).unwrap());
            let w = CollapseWitness::for_arc(&a, &b, inf.gamma_n(n)).ok_or("arc start is not a cut point")?;
            let r = gh::check_collapse_conditions(&a, &b, &w, None).map_err(|e| e.to_string())?;
            ensure(r.all_passed(), || format!("S_{n} vs S_{m}: {r:?}"))?;
            checked += 1;
        }
    }
    let (sq2, torus) = (presets::sq2(), presets::torus());
    for (start, len) in [(0.49, 0.02), (1.3, 0.05), (2.7, 0.01), (3.9, 0.2)] {
        let w = CollapseWitness {
            arc: BoundaryInterval::new(start, len),
            class_a: 0,
            class_b: 0,
        };
        let r = gh::check_collapse_conditions(&sq2, &torus, &w, None).map_err(|e| e.to_string())?;
        ensure(!r.agreement.passed && r.agreement.counterexample.is_some(), || {
            format!("SQ2 vs torus with D at {start}: agreement unexpectedly passed")
        })?;
    }
    Ok(format!("{checked} truncation pairs pass; SQ2 vs torus fails agreement for 4 arcs"))
}

fn boundary_or_interior<R: Rng>(rng: &mut R, p: &Polygon, arc: &BoundaryInterval) -> Point {
    loop {
        let x = if rng.gen_bool(0.5) {
            random::interior_point(rng, p)
        } else {
            p.boundary_point(rng.gen_range(0.0..p.perimeter()))
        };
        let on_open_arc = matches!(p.locate(x), Location::Boundary(s) if p.interval_contains_open(arc, s));
        if !on_open_arc {
            return x;
        }
    }
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..1000 {
        let n = rng.gen_range(3..=7);
        let p = if k % 2 == 0 {
            random::convex_polygon(&mut rng, n)
        } else {
            random::star_polygon(&mut rng, n.max(4))
        };
        let per = p.perimeter();
        let arc = BoundaryInterval::new(rng.gen_range(0.0..per), rng.gen_range(0.0..per / 3.0));
        let x = boundary_or_interior(&mut rng, &p, &arc);
        let y = p.boundary_point(arc.start + rng.gen_range(0.0..=1.0) * arc.len);
        let z = p.boundary_point(if rng.gen_bool(0.5) { arc.start } else { arc.end() });
        let ok = gh::prop_gh2_1_check(&p, &arc, x, y, z).map_err(|e| format!("instance {k}: {e}"))?;
        ensure(ok, || format!("instance {k}: inequality fails for x={x}, y={y}, z={z}, D={arc}"))?;
    }
    Ok("1000 instances satisfy d(x,z) <= d(x,y) + diam D".into())
}

fn criterion_12() -> Outcome {
    let mut truncs = truncations();
    for n in 1..=8 {
        truncs.push((format!("two anchors n={n}"), presets::canon1_two_anchors().truncate(n).unwrap()));
    }
    let mut count = 0;
    for (name, s) in &truncs {
        let polygon = s.polygon();
        let angles = analysis::class_angles(s);
        for p in s.pairings() {
            let Some(f) = p.fold_point() else { continue };
            if polygon.vertex_at(f).is_some() {
                continue;
            }
            let c = s.boundary_classes().class_at(f).unwrap();
            let theta = angles[c].total_angle;
            ensure((theta - PI).abs() <= 1e-12, || format!("{name}: fold at {f} has angle {theta}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} side-interior fold points with angle π"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Gauss-Bonnet suite", criterion_1),
        ("sphere check", criterion_2),
        ("SQ2 curvature values", criterion_3),
        ("semi-metric axioms on nets", criterion_4),
        ("refinement monotonicity", criterion_5),
        ("collapse lemma bound", criterion_6),
        ("convergence experiment", criterion_7),
        ("curvature explosion", criterion_8),
        ("plain-arc oracle equivalence", criterion_9),
        ("collapse conditions checker", criterion_10),
        ("collapse inequality fuzz", criterion_11),
        ("fold cone angle", criterion_12),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let label = format!("criterion {:>2}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|p| name.contains(p.as_str()) || label.contains(p.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {label} {name} ({secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {label} {name} ({secs:.1}s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
