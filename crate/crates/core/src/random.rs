//! Random polygons and schemes for property tests and experiments.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::geometry::{BoundaryInterval, Point, Polygon};
use crate::scheme::Scheme;

/// Convex polygon with `n` vertices on a random ellipse.
pub fn convex_polygon<R: Rng>(rng: &mut R, n: usize) -> Polygon {
    loop {
        let (a, b) = (rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0));
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        angles.sort_by(f64::total_cmp);
        let gaps_ok = angles.windows(2).all(|w| w[1] - w[0] > 0.05) && angles[0] + TAU - angles[n - 1] > 0.05;
        if !gaps_ok {
            continue;
        }
        let pts = angles.iter().map(|t| Point::new(a * t.cos(), b * t.sin())).collect();
        if let Ok(p) = Polygon::new(pts) {
            return p;
        }
    }
}

/// Star-shaped polygon around the origin, usually with reflex vertices.
pub fn star_polygon<R: Rng>(rng: &mut R, n: usize) -> Polygon {
    loop {
        let offset = rng.gen_range(0.0..TAU);
        let pts = (0..n)
            .map(|k| {
                let t = offset + TAU * (k as f64 + rng.gen_range(-0.3..0.3)) / n as f64;
                let r = rng.gen_range(0.4..1.0);
                Point::new(r * t.cos(), r * t.sin())
            })
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            if p.angles().iter().all(|a| (a - std::f64::consts::PI).abs() > 0.05) {
                return p;
            }
        }
    }
}

/// Rectangle with integer sides and optional rectangular notches at its
/// corners; every side has integer length.
pub fn orthogonal_polygon<R: Rng>(rng: &mut R) -> Polygon {
    let w: i32 = rng.gen_range(3..=6);
    let h: i32 = rng.gen_range(3..=6);
    let mut notch = || {
        if rng.gen_bool(0.5) {
            Some((rng.gen_range(1..=(w - 1) / 2), rng.gen_range(1..=(h - 1) / 2)))
        } else {
            None
        }
    };
    let corners = [notch(), notch(), notch(), notch()];
    let (w, h) = (f64::from(w), f64::from(h));
    let mut pts = Vec::new();
    let p = |x: f64, y: f64| Point::new(x, y);
    match corners[0] {
        Some((a, b)) => pts.extend([p(0.0, b.into()), p(a.into(), b.into()), p(a.into(), 0.0)]),
        None => pts.push(p(0.0, 0.0)),
    }
    match corners[1] {
        Some((a, b)) => pts.extend([p(w - f64::from(a), 0.0), p(w - f64::from(a), b.into()), p(w, b.into())]),
        None => pts.push(p(w, 0.0)),
    }
    match corners[2] {
        Some((a, b)) => pts.extend([p(w, h - f64::from(b)), p(w - f64::from(a), h - f64::from(b)), p(w - f64::from(a), h)]),
        None => pts.push(p(w, h)),
    }
    match corners[3] {
        Some((a, b)) => pts.extend([p(a.into(), h), p(a.into(), h - f64::from(b)), p(0.0, h - f64::from(b))]),
        None => pts.push(p(0.0, h)),
    }
    Polygon::new(pts).expect("orthogonal polygon is simple")
}

/// Random non-crossing perfect matching of `2k` points in cyclic order.
pub fn noncrossing_matching<R: Rng>(rng: &mut R, k: usize) -> Vec<(usize, usize)> {
    let mut stack = Vec::new();
    let mut pairs = Vec::with_capacity(k);
    let mut opened = 0;
    for i in 0..2 * k {
        let open = opened < k && (stack.is_empty() || rng.gen_bool(0.5));
        if open {
            stack.push(i);
            opened += 1;
        } else {
            pairs.push((stack.pop().expect("balanced"), i));
        }
    }
    let shift = rng.gen_range(0..2 * k);
    pairs
        .into_iter()
        .map(|(i, j)| ((i + shift) % (2 * k), (j + shift) % (2 * k)))
        .collect()
}

/// Full scheme on an orthogonal polygon pairing unit intervals; plain when
/// `plain` is set, otherwise a uniformly shuffled matching.
pub fn unit_scheme<R: Rng>(rng: &mut R, polygon: Polygon, plain: bool) -> Scheme {
    let units = polygon.perimeter().round() as usize;
    let matching = if plain {
        noncrossing_matching(rng, units / 2)
    } else {
        let mut order: Vec<usize> = (0..units).collect();
        order.shuffle(rng);
        order.chunks(2).map(|c| (c[0], c[1])).collect()
    };
    let pairs: Vec<_> = matching
        .into_iter()
        .map(|(i, j)| (BoundaryInterval::new(i as f64, 1.0), BoundaryInterval::new(j as f64, 1.0)))
        .collect();
    Scheme::new(polygon, &pairs).expect("unit matching is a full scheme")
}

/// Plain full scheme on any polygon: nested pairings around some vertices
/// and non-crossing matchings of equal pieces inside each side.
pub fn plain_scheme<R: Rng>(rng: &mut R, polygon: Polygon) -> Scheme {
    let n = polygon.len();
    let sides = polygon.side_lengths().to_vec();
    let coords = polygon.vertex_coords().to_vec();
    let mut pairs = Vec::new();
    let mut zone = vec![0.0; n];
    for v in 0..n {
        let depth = rng.gen_range(0..=2usize);
        if depth == 0 {
            continue;
        }
        let shortest = sides[v].min(sides[(v + n - 1) % n]);
        let eps = shortest * rng.gen_range(0.05..0.2);
        for j in 1..=depth {
            let jf = j as f64;
            pairs.push((
                BoundaryInterval::new(coords[v] - jf * eps, eps),
                BoundaryInterval::new(coords[v] + (jf - 1.0) * eps, eps),
            ));
        }
        zone[v] = depth as f64 * eps;
    }
    for i in 0..n {
        let start = coords[i] + zone[i];
        let len = sides[i] - zone[i] - zone[(i + 1) % n];
        let q = rng.gen_range(1..=3usize);
        let piece = len / (2 * q) as f64;
        for (a, b) in noncrossing_matching(rng, q) {
            pairs.push((
                BoundaryInterval::new(start + a as f64 * piece, piece),
                BoundaryInterval::new(start + b as f64 * piece, piece),
            ));
        }
    }
    Scheme::new(polygon, &pairs).expect("generated plain scheme is valid")
}

/// A uniformly random point inside the polygon.
pub fn interior_point<R: Rng>(rng: &mut R, polygon: &Polygon) -> Point {
    let (mut lo, mut hi) = (polygon.vertices()[0], polygon.vertices()[0]);
    for v in polygon.vertices() {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    loop {
        let p = Point::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if polygon.contains(p) {
            return p;
        }
    }
}
