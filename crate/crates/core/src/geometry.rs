//! Euclidean polygons with arc-length boundary coordinates and their
//! intrinsic (shortest path inside the closed region) metric.
//!
//! Boundary positions are plain `f64` arc lengths measured counterclockwise
//! from vertex 0 and reduced modulo the perimeter. Two tolerances are used
//! throughout, both relative to the perimeter:
//!
//! - [`Polygon::tol`] (`1e-9 * perimeter`) for comparing boundary coordinates,
//!   e.g. deciding whether a coordinate sits on a vertex;
//! - [`Polygon::eps`] (`1e-12 * perimeter`) for point-in-polygon and
//!   segment containment tests.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance for boundary coordinates.
pub const COORD_TOL: f64 = 1e-9;
/// Relative tolerance for containment tests.
pub const CONTAIN_EPS: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("TooFewVertices: polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("NonFinite: vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("NotSimple: edges {0} and {1} intersect")]
    NotSimple(usize, usize),
    #[error("WrongOrientation: signed area {0} is not positive")]
    WrongOrientation(f64),
    #[error("DegenerateVertex: vertex {0} has a straight angle or a zero-length side")]
    DegenerateVertex(usize),
    #[error("PointOutside: ({}, {}) is not in the polygon", .0.x, .0.y)]
    PointOutside(Point),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    fn lex_lt(self, other: Point) -> bool {
        (self.x, self.y) < (other.x, other.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

/// A counterclockwise run of boundary of length `len` starting at arc
/// coordinate `start`. `start + len` may exceed the perimeter; it wraps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryInterval {
    pub start: f64,
    pub len: f64,
}

impl BoundaryInterval {
    pub const fn new(start: f64, len: f64) -> Self {
        BoundaryInterval { start, len }
    }

    /// End coordinate, not reduced modulo the perimeter.
    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn midpoint(&self) -> f64 {
        self.start + 0.5 * self.len
    }
}

impl fmt::Display for BoundaryInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end())
    }
}

/// Where a point sits relative to a polygon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Location {
    Interior,
    /// On the boundary, at the given arc coordinate.
    Boundary(f64),
    Outside,
}

/// Per-point data for geodesic queries in a non-convex polygon: straight-line
/// distance to every visible reflex vertex (infinite if hidden) and geodesic
/// distance to every reflex vertex.
#[derive(Debug, Clone)]
pub(crate) struct ReflexProfile {
    visible: Vec<f64>,
    geodesic: Vec<f64>,
}

/// A simple, positively oriented polygon in the Euclidean plane.
#[derive(Debug, Clone)]
pub struct Polygon {
    vertices: Vec<Point>,
    coords: Vec<f64>,
    side_lengths: Vec<f64>,
    perimeter: f64,
    angles: Vec<f64>,
    reflex: Vec<usize>,
    // Shortest paths between reflex vertices, row-major.
    reflex_paths: Vec<f64>,
}

impl PartialEq for Polygon {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

/// Validates a vertex chain and builds the polygon.
pub fn validate_polygon(vertices: &[Point]) -> Result<Polygon, GeometryError> {
    Polygon::new(vertices.to_vec())
}

impl Polygon {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if let Some(i) = vertices.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(GeometryError::NonFinite(i));
        }
        let side_lengths: Vec<f64> = (0..n).map(|i| vertices[i].dist(vertices[(i + 1) % n])).collect();
        let perimeter: f64 = side_lengths.iter().sum();
        let eps = CONTAIN_EPS * perimeter;
        if let Some(i) = side_lengths.iter().position(|&l| l <= eps) {
            return Err(GeometryError::DegenerateVertex((i + 1) % n));
        }

        // Straight angles and spikes.
        for i in 0..n {
            let e_in = vertices[i] - vertices[(i + n - 1) % n];
            let e_out = vertices[(i + 1) % n] - vertices[i];
            let scale = e_in.norm() * e_out.norm();
            if e_in.cross(e_out).abs() <= 1e-12 * scale {
                if e_in.dot(e_out) > 0.0 {
                    return Err(GeometryError::DegenerateVertex(i));
                }
                return Err(GeometryError::NotSimple((i + n - 1) % n, i));
            }
        }

        for i in 0..n {
            for j in (i + 1)..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                let (c, d) = (vertices[j], vertices[(j + 1) % n]);
                if segments_touch(a, b, c, d, eps) {
                    return Err(GeometryError::NotSimple(i, j));
                }
            }
        }

        let area = signed_area(&vertices);
        if area <= 0.0 {
            return Err(GeometryError::WrongOrientation(area));
        }

        let angles: Vec<f64> = (0..n)
            .map(|i| {
                let e_in = vertices[i] - vertices[(i + n - 1) % n];
                let e_out = vertices[(i + 1) % n] - vertices[i];
                PI - e_in.cross(e_out).atan2(e_in.dot(e_out))
            })
            .collect();
        let mut coords = Vec::with_capacity(n);
        let mut acc = 0.0;
        for &l in &side_lengths {
            coords.push(acc);
            acc += l;
        }
        let reflex: Vec<usize> = (0..n).filter(|&i| angles[i] > PI).collect();

        let mut poly = Polygon {
            vertices,
            coords,
            side_lengths,
            perimeter,
            angles,
            reflex,
            reflex_paths: Vec::new(),
        };
        poly.reflex_paths = poly.reflex_shortest_paths();
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn perimeter(&self) -> f64 {
        self.perimeter
    }

    pub fn side_lengths(&self) -> &[f64] {
        &self.side_lengths
    }

    /// Arc coordinate of each vertex; `vertex_coords()[0] == 0`.
    pub fn vertex_coords(&self) -> &[f64] {
        &self.coords
    }

    /// Interior angle at each vertex, in `(0, 2π)`.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_convex(&self) -> bool {
        self.reflex.is_empty()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    pub fn tol(&self) -> f64 {
        COORD_TOL * self.perimeter
    }

    pub fn eps(&self) -> f64 {
        CONTAIN_EPS * self.perimeter
    }

    /// Reduces `s` into `[0, perimeter)`; values within `eps` of the
    /// perimeter snap to 0.
    pub fn canonical(&self, s: f64) -> f64 {
        let r = s.rem_euclid(self.perimeter);
        if r >= self.perimeter - self.eps() {
            0.0
        } else {
            r
        }
    }

    /// Counterclockwise arc length from `from` to `s`, in `[0, perimeter)`.
    pub fn ccw_offset(&self, from: f64, s: f64) -> f64 {
        (s - from).rem_euclid(self.perimeter)
    }

    /// Cyclic distance between two coordinates.
    pub fn coord_gap(&self, s: f64, t: f64) -> f64 {
        let d = self.ccw_offset(s, t);
        d.min(self.perimeter - d)
    }

    pub fn same_coord(&self, s: f64, t: f64) -> bool {
        self.coord_gap(s, t) <= self.tol()
    }

    /// Whether `s` lies in the closed interval.
    pub fn interval_contains(&self, iv: &BoundaryInterval, s: f64) -> bool {
        let o = self.ccw_offset(iv.start, s);
        o <= iv.len + self.tol() || o >= self.perimeter - self.tol()
    }

    /// Whether `s` lies in the open interval, away from both endpoints.
    pub fn interval_contains_open(&self, iv: &BoundaryInterval, s: f64) -> bool {
        let o = self.ccw_offset(iv.start, s);
        o > self.tol() && o < iv.len - self.tol()
    }

    /// Whether `inner` lies in the closed interval `outer`.
    pub fn interval_within(&self, inner: &BoundaryInterval, outer: &BoundaryInterval) -> bool {
        let mut o = self.ccw_offset(outer.start, inner.start);
        if o > self.perimeter - self.tol() {
            o -= self.perimeter;
        }
        o >= -self.tol() && o + inner.len <= outer.len + self.tol()
    }

    /// Length of the intersection of two intervals.
    pub fn overlap_len(&self, a: &BoundaryInterval, b: &BoundaryInterval) -> f64 {
        let o = self.ccw_offset(a.start, b.start);
        [o, o - self.perimeter]
            .iter()
            .map(|&bs| (a.len.min(bs + b.len) - bs.max(0.0)).max(0.0))
            .sum()
    }

    /// Index of the vertex at coordinate `s`, within [`Polygon::tol`].
    pub fn vertex_at(&self, s: f64) -> Option<usize> {
        let s = s.rem_euclid(self.perimeter);
        let idx = self.coords.partition_point(|&c| c <= s);
        let candidates = [idx.saturating_sub(1), idx % self.len()];
        candidates.into_iter().find(|&i| self.coord_gap(self.coords[i], s) <= self.tol())
    }

    /// Vertex indices strictly inside the open interval.
    pub fn vertices_in_open(&self, iv: &BoundaryInterval) -> Vec<usize> {
        let mut found: Vec<(f64, usize)> = (0..self.len())
            .filter_map(|i| {
                let o = self.ccw_offset(iv.start, self.coords[i]);
                (o > self.tol() && o < iv.len - self.tol()).then_some((o, i))
            })
            .collect();
        found.sort_by(|a, b| a.0.total_cmp(&b.0));
        found.into_iter().map(|(_, i)| i).collect()
    }

    /// The boundary point at arc length `s` from vertex 0.
    pub fn boundary_point(&self, s: f64) -> Point {
        let s = self.canonical(s);
        let i = self.coords.partition_point(|&c| c <= s).saturating_sub(1);
        let t = ((s - self.coords[i]) / self.side_lengths[i]).clamp(0.0, 1.0);
        self.vertices[i].lerp(self.vertices[(i + 1) % self.len()], t)
    }

    /// π away from vertices, otherwise the interior angle of the vertex.
    pub fn interior_angle_at(&self, s: f64) -> f64 {
        self.vertex_at(s).map_or(PI, |i| self.angles[i])
    }

    pub fn locate(&self, p: Point) -> Location {
        let eps = self.eps();
        let n = self.len();
        let mut best: Option<(f64, f64)> = None;
        for i in 0..n {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
            let ab = b - a;
            let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
            let d = p.dist(a.lerp(b, t));
            if d <= eps && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, self.coords[i] + t * self.side_lengths[i]));
            }
        }
        if let Some((_, s)) = best {
            return Location::Boundary(self.canonical(s));
        }
        if self.winding_inside(p) {
            Location::Interior
        } else {
            Location::Outside
        }
    }

    /// Closed containment.
    pub fn contains(&self, p: Point) -> bool {
        !matches!(self.locate(p), Location::Outside)
    }

    /// Distance from `p` to the boundary curve.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        let n = self.len();
        (0..n)
            .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    fn winding_inside(&self, p: Point) -> bool {
        let n = self.len();
        let mut inside = false;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if x > p.x {
                    inside = !inside;
                }
            }
        }
        inside
    }

    /// Whether the closed segment `ab` lies in the closed polygon. Touching
    /// and running along the boundary is allowed.
    pub fn segment_inside(&self, a: Point, b: Point) -> bool {
        if self.is_convex() {
            return self.contains(a) && self.contains(b);
        }
        let d = b - a;
        let len = d.norm();
        if len <= self.eps() {
            return self.contains(a);
        }
        let eps = self.eps();
        let t_eps = eps / len;
        let n = self.len();
        let mut hits = vec![0.0, 1.0];
        for i in 0..n {
            let p = self.vertices[i];
            let q = self.vertices[(i + 1) % n];
            let e = q - p;
            let denom = d.cross(e);
            let ap = p - a;
            if denom.abs() > 1e-12 * len * e.norm() {
                let t = ap.cross(e) / denom;
                let u = ap.cross(d) / denom;
                let u_eps = eps / e.norm();
                if t >= -t_eps && t <= 1.0 + t_eps && u >= -u_eps && u <= 1.0 + u_eps {
                    hits.push(t.clamp(0.0, 1.0));
                }
            } else if (ap.cross(d) / len).abs() <= eps {
                for v in [p, q] {
                    let t = (v - a).dot(d) / (len * len);
                    if (0.0..=1.0).contains(&t) {
                        hits.push(t);
                    }
                }
            }
        }
        hits.sort_by(f64::total_cmp);
        hits.windows(2)
            .filter(|w| w[1] - w[0] > 1e-12)
            .all(|w| self.contains(a.lerp(b, 0.5 * (w[0] + w[1]))))
    }

    fn reflex_shortest_paths(&self) -> Vec<f64> {
        let r = self.reflex.len();
        let mut dist = vec![f64::INFINITY; r * r];
        for i in 0..r {
            dist[i * r + i] = 0.0;
            for j in (i + 1)..r {
                let (u, v) = (self.vertices[self.reflex[i]], self.vertices[self.reflex[j]]);
                if self.segment_inside(u, v) {
                    dist[i * r + j] = u.dist(v);
                    dist[j * r + i] = u.dist(v);
                }
            }
        }
        for k in 0..r {
            for i in 0..r {
                let dik = dist[i * r + k];
                if !dik.is_finite() {
                    continue;
                }
                for j in 0..r {
                    let cand = dik + dist[k * r + j];
                    if cand < dist[i * r + j] {
                        dist[i * r + j] = cand;
                    }
                }
            }
        }
        dist
    }

    pub(crate) fn profile(&self, p: Point) -> ReflexProfile {
        let r = self.reflex.len();
        let visible: Vec<f64> = self
            .reflex
            .iter()
            .map(|&v| {
                let q = self.vertices[v];
                if self.segment_inside(p, q) {
                    p.dist(q)
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        let geodesic = (0..r)
            .map(|v| {
                (0..r)
                    .map(|u| visible[u] + self.reflex_paths[u * r + v])
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        ReflexProfile { visible, geodesic }
    }

    /// Geodesic distance using precomputed profiles. Callers must pass the
    /// pair in a fixed order to get bitwise symmetric results.
    pub(crate) fn profiled_distance(&self, p: Point, pp: &ReflexProfile, q: Point, qp: &ReflexProfile) -> f64 {
        if self.is_convex() || self.segment_inside(p, q) {
            return p.dist(q);
        }
        pp.geodesic
            .iter()
            .zip(&qp.visible)
            .map(|(g, v)| g + v)
            .fold(f64::INFINITY, f64::min)
    }

    /// Length of a shortest path from `p` to `q` inside the closed polygon.
    pub fn intrinsic_distance(&self, p: Point, q: Point) -> Result<f64, GeometryError> {
        for x in [p, q] {
            if !self.contains(x) {
                return Err(GeometryError::PointOutside(x));
            }
        }
        Ok(self.intrinsic_distance_unchecked(p, q))
    }

    pub(crate) fn intrinsic_distance_unchecked(&self, p: Point, q: Point) -> f64 {
        let (p, q) = if q.lex_lt(p) { (q, p) } else { (p, q) };
        if self.is_convex() {
            return p.dist(q);
        }
        if self.segment_inside(p, q) {
            return p.dist(q);
        }
        self.profiled_distance(p, &self.profile(p), q, &self.profile(q))
    }

    /// Diameter of a boundary arc in the intrinsic metric.
    pub fn arc_diameter(&self, arc: &BoundaryInterval) -> f64 {
        let len = arc.len.min(self.perimeter);
        if len <= self.tol() {
            return 0.0;
        }
        let inside = self.vertices_in_open(arc);
        if inside.iter().all(|&v| self.angles[v] > PI) {
            return len;
        }
        let start = self.boundary_point(arc.start);
        let end = self.boundary_point(arc.start + len);
        if let [v] = inside[..] {
            if self.segment_inside(start, end) {
                let a = self.ccw_offset(arc.start, self.coords[v]);
                let b = len - a;
                let theta = self.angles[v];
                let chord = (a * a + b * b - 2.0 * a * b * theta.cos()).max(0.0).sqrt();
                return a.max(b).max(chord);
            }
        }
        self.sampled_arc_diameter(arc.start, len, &inside)
    }

    fn sampled_arc_diameter(&self, start: f64, len: f64, inside: &[usize]) -> f64 {
        let mut offsets: Vec<f64> = std::iter::once(0.0)
            .chain(inside.iter().map(|&v| self.ccw_offset(start, self.coords[v])))
            .chain(std::iter::once(len))
            .collect();
        let mut best = self.max_pairwise(start, &offsets);
        for _ in 0..6 {
            let mut refined = Vec::with_capacity(2 * offsets.len());
            for w in offsets.windows(2) {
                refined.push(w[0]);
                refined.push(0.5 * (w[0] + w[1]));
            }
            refined.push(len);
            offsets = refined;
            let next = self.max_pairwise(start, &offsets);
            let change = next - best;
            best = best.max(next);
            if change < self.eps() {
                break;
            }
        }
        best
    }

    fn max_pairwise(&self, start: f64, offsets: &[f64]) -> f64 {
        let pts: Vec<Point> = offsets.iter().map(|&o| self.boundary_point(start + o)).collect();
        let profiles: Vec<ReflexProfile> = pts.iter().map(|&p| self.profile(p)).collect();
        let mut best = 0.0f64;
        for i in 0..pts.len() {
            for j in (i + 1)..pts.len() {
                best = best.max(self.profiled_distance(pts[i], &profiles[i], pts[j], &profiles[j]));
            }
        }
        best
    }
}

fn signed_area(vertices: &[Point]) -> f64 {
    let n = vertices.len();
    0.5 * (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum::<f64>()
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.dot(ab)).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Whether closed segments `ab` and `cd` meet (within `eps`).
fn segments_touch(a: Point, b: Point, c: Point, d: Point, eps: f64) -> bool {
    let orient = |p: Point, q: Point, r: Point| {
        let v = (q - p).cross(r - p);
        let scale = (q - p).norm();
        if v.abs() <= eps * scale {
            0
        } else if v > 0.0 {
            1
        } else {
            -1
        }
    };
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    point_segment_distance(c, a, b) <= eps
        || point_segment_distance(d, a, b) <= eps
        || point_segment_distance(a, c, d) <= eps
        || point_segment_distance(b, c, d) <= eps
}
