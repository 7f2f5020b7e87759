//! Named polygons, schemes and patterns used throughout the tests and examples.

use crate::approx::{InfiniteScheme, PatternKind, PatternSpec};
use crate::geometry::{BoundaryInterval, Point, Polygon};
use crate::scheme::Scheme;

fn iv(start: f64, len: f64) -> BoundaryInterval {
    BoundaryInterval::new(start, len)
}

pub fn unit_square() -> Polygon {
    Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(1.0, 0.0),
        Point::new(1.0, 1.0),
        Point::new(0.0, 1.0),
    ])
    .expect("unit square is valid")
}

/// Regular hexagon with unit sides, vertex 0 at the origin.
pub fn regular_hexagon() -> Polygon {
    let mut pts = vec![Point::new(0.0, 0.0)];
    for k in 0..5 {
        let a = std::f64::consts::PI / 3.0 * k as f64;
        let last = *pts.last().unwrap();
        pts.push(last + Point::new(a.cos(), a.sin()));
    }
    Polygon::new(pts).expect("hexagon is valid")
}

/// L-shaped hexagon with a reflex vertex at (1, 1).
pub fn l_shape() -> Polygon {
    Polygon::new(vec![
        Point::new(0.0, 0.0),
        Point::new(2.0, 0.0),
        Point::new(2.0, 1.0),
        Point::new(1.0, 1.0),
        Point::new(1.0, 2.0),
        Point::new(0.0, 2.0),
    ])
    .expect("L shape is valid")
}

/// The square pillow: two folds, one at each of two opposite corners.
pub fn sq2() -> Scheme {
    Scheme::new(unit_square(), &[(iv(0.0, 1.0), iv(1.0, 1.0)), (iv(2.0, 1.0), iv(3.0, 1.0))])
        .expect("SQ2 is valid")
}

/// Opposite sides glued with reversed arc length, giving a torus.
pub fn torus() -> Scheme {
    Scheme::new(unit_square(), &[(iv(0.0, 1.0), iv(2.0, 1.0)), (iv(1.0, 1.0), iv(3.0, 1.0))])
        .expect("torus scheme is valid")
}

fn halving(kind: PatternKind, anchor: f64, first_len: f64) -> PatternSpec {
    PatternSpec {
        kind,
        anchor,
        ratio: 0.5,
        first_len,
    }
}

/// Halving folds accumulating at vertex 0 of the unit square from both sides.
pub fn canon1() -> InfiniteScheme {
    InfiniteScheme::new(
        unit_square(),
        &[(iv(1.0, 1.0), iv(2.0, 1.0))],
        vec![halving(PatternKind::Canon1, 0.0, 0.5)],
    )
    .expect("canon1 preset is valid")
}

/// Halving folds accumulating at vertex 0 along the bottom side only.
pub fn canon2() -> InfiniteScheme {
    InfiniteScheme::new(
        unit_square(),
        &[(iv(1.0, 1.0), iv(2.0, 1.0)), (iv(3.0, 0.5), iv(3.5, 0.5))],
        vec![halving(PatternKind::Canon2, 0.0, 0.5)],
    )
    .expect("canon2 preset is valid")
}

/// Nested pairs spanning vertex 0 separated by small folds.
pub fn singular1() -> InfiniteScheme {
    InfiniteScheme::new(
        unit_square(),
        &[
            (iv(0.5, 0.5), iv(1.0, 0.5)),
            (iv(1.5, 0.5), iv(2.0, 0.5)),
            (iv(2.5, 0.25), iv(2.75, 0.25)),
        ],
        vec![halving(PatternKind::Singular1, 0.0, 0.5)],
    )
    .expect("singular1 preset is valid")
}

/// canon1 patterns at the two opposite corners 0 and 2 of the unit square.
pub fn canon1_two_anchors() -> InfiniteScheme {
    InfiniteScheme::new(
        unit_square(),
        &[(iv(0.5, 0.5), iv(1.0, 0.5)), (iv(2.5, 0.5), iv(3.0, 0.5))],
        vec![
            halving(PatternKind::Canon1, 0.0, 0.25),
            halving(PatternKind::Canon1, 2.0, 0.25),
        ],
    )
    .expect("two-anchor preset is valid")
}
