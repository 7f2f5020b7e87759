//! Segment pairings on a polygon boundary and paper-folding schemes.
//!
//! A pairing glues two boundary segments of equal length, reversing
//! orientation: the point at arc length `t` along the first segment is
//! identified with the point at `len - t` along the second. A scheme is a
//! polygon together with an interior-disjoint collection of pairings; it is
//! *full* when the paired segments tile the boundary.

use std::fmt;

use thiserror::Error;

use crate::geometry::{BoundaryInterval, GeometryError, Polygon};
use crate::union_find::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchemeError {
    #[error("NonPositiveLength: pairing {index} has segment length {len}")]
    NonPositiveLength { index: usize, len: f64 },
    #[error("LengthMismatch: pairing {index} pairs lengths {a} and {b}")]
    LengthMismatch { index: usize, a: f64, b: f64 },
    #[error("VertexInInterval: segment {interval} of pairing {index} contains vertex {vertex} at s={at}")]
    VertexInInterval {
        index: usize,
        interval: BoundaryInterval,
        vertex: usize,
        at: f64,
    },
    #[error("Overlap: segment {first} of pairing {i} overlaps segment {second} of pairing {j}")]
    Overlap {
        i: usize,
        first: BoundaryInterval,
        j: usize,
        second: BoundaryInterval,
    },
    #[error("NotFull: sum={sum} expected {expected}")]
    NotFull { sum: f64, expected: f64 },
    #[error("NotOnPairing: s={0} is not on the pairing")]
    NotOnPairing(f64),
    #[error("SchemeNotPlain: the scheme has linked pairings")]
    SchemeNotPlain,
    #[error("InteriorPairPoint: s={0} belongs to an interior pair")]
    InteriorPairPoint(f64),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// An orientation-reversing identification of two boundary segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pairing {
    a: BoundaryInterval,
    b: BoundaryInterval,
    fold_point: Option<f64>,
}

impl Pairing {
    pub fn new(polygon: &Polygon, a: BoundaryInterval, b: BoundaryInterval) -> Result<Self, SchemeError> {
        Self::checked(polygon, 0, a, b)
    }

    fn checked(polygon: &Polygon, index: usize, a: BoundaryInterval, b: BoundaryInterval) -> Result<Self, SchemeError> {
        let tol = polygon.tol();
        for iv in [a, b] {
            if iv.len <= tol || !iv.len.is_finite() || !iv.start.is_finite() {
                return Err(SchemeError::NonPositiveLength { index, len: iv.len });
            }
        }
        if (a.len - b.len).abs() > tol {
            return Err(SchemeError::LengthMismatch { index, a: a.len, b: b.len });
        }
        let a = BoundaryInterval::new(polygon.canonical(a.start), a.len);
        let b = BoundaryInterval::new(polygon.canonical(b.start), b.len);
        for iv in [a, b] {
            if let Some(&v) = polygon.vertices_in_open(&iv).first() {
                return Err(SchemeError::VertexInInterval {
                    index,
                    interval: iv,
                    vertex: v,
                    at: polygon.vertex_coords()[v],
                });
            }
        }
        if polygon.overlap_len(&a, &b) > tol {
            return Err(SchemeError::Overlap {
                i: index,
                first: a,
                j: index,
                second: b,
            });
        }
        let fold_point = if polygon.same_coord(a.end(), b.start) {
            Some(polygon.canonical(b.start))
        } else if polygon.same_coord(b.end(), a.start) {
            Some(a.start)
        } else {
            None
        };
        Ok(Pairing { a, b, fold_point })
    }

    pub fn a(&self) -> BoundaryInterval {
        self.a
    }

    pub fn b(&self) -> BoundaryInterval {
        self.b
    }

    pub fn len(&self) -> f64 {
        self.a.len
    }

    pub fn is_fold(&self) -> bool {
        self.fold_point.is_some()
    }

    /// The shared endpoint of a fold.
    pub fn fold_point(&self) -> Option<f64> {
        self.fold_point
    }

    /// The point glued to `s`.
    pub fn pair_point(&self, polygon: &Polygon, s: f64) -> Result<f64, SchemeError> {
        let len = self.a.len;
        if polygon.interval_contains(&self.a, s) {
            let t = clamp_offset(polygon, self.a.start, s, len);
            return Ok(polygon.canonical(self.b.start + (len - t)));
        }
        if polygon.interval_contains(&self.b, s) {
            let t = clamp_offset(polygon, self.b.start, s, len);
            return Ok(polygon.canonical(self.a.start + (len - t)));
        }
        Err(SchemeError::NotOnPairing(s))
    }

    /// Whether `s` is in the open interior of either segment.
    pub fn has_interior_point(&self, polygon: &Polygon, s: f64) -> bool {
        polygon.interval_contains_open(&self.a, s) || polygon.interval_contains_open(&self.b, s)
    }

    pub(crate) fn endpoints(&self) -> [f64; 4] {
        [self.a.start, self.a.end(), self.b.start, self.b.end()]
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.a, self.b)
    }
}

// Offset of `s` from `start`, treating a wrap just below `start` as 0.
fn clamp_offset(polygon: &Polygon, start: f64, s: f64, len: f64) -> f64 {
    let o = polygon.ccw_offset(start, s);
    if o > len + polygon.tol() {
        0.0
    } else {
        o.min(len)
    }
}

/// Whether the four segments of two pairings alternate around the boundary.
///
/// Orientation-reversing pairings sweep nested point pairs, so two pairings
/// are linked exactly when their segments interleave. Pairings that only
/// share endpoints are unlinked.
pub fn pairings_linked(polygon: &Polygon, p1: &Pairing, p2: &Pairing) -> bool {
    if p1 == p2 {
        return false;
    }
    let base = p1.a.midpoint();
    let off = |s: f64| polygon.ccw_offset(base, s);
    let partner = off(p1.b.midpoint());
    (off(p2.a.midpoint()) < partner) != (off(p2.b.midpoint()) < partner)
}

/// Boundary equivalence classes of the cut points (segment endpoints).
#[derive(Debug, Clone)]
pub struct ClassTable {
    cut_points: Vec<f64>,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    perimeter: f64,
    tol: f64,
}

impl ClassTable {
    fn build(polygon: &Polygon, pairings: &[Pairing]) -> Self {
        let raw: Vec<f64> = pairings.iter().flat_map(|p| p.endpoints()).collect();
        let cut_points = dedup_coords(polygon, raw);
        let mut table = ClassTable {
            class_of: vec![0; cut_points.len()],
            classes: Vec::new(),
            cut_points,
            perimeter: polygon.perimeter(),
            tol: polygon.tol(),
        };
        let mut uf = UnionFind::new(table.cut_points.len());
        for p in pairings {
            let [a0, a1, b0, b1] = p.endpoints().map(|s| table.index_of(s).expect("endpoint is a cut point"));
            uf.union(a0, b1);
            uf.union(a1, b0);
        }
        table.classes = uf.blocks();
        for (c, block) in table.classes.iter().enumerate() {
            for &i in block {
                table.class_of[i] = c;
            }
        }
        table
    }

    /// Sorted cut point coordinates in `[0, perimeter)`.
    pub fn cut_points(&self) -> &[f64] {
        &self.cut_points
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    /// Class id of the cut point with index `i`.
    pub fn class_of(&self, i: usize) -> usize {
        self.class_of[i]
    }

    /// Coordinates of the members of class `c`.
    pub fn members(&self, c: usize) -> Vec<f64> {
        self.classes[c].iter().map(|&i| self.cut_points[i]).collect()
    }

    /// Index of the cut point at coordinate `s`, if any.
    pub fn index_of(&self, s: f64) -> Option<usize> {
        find_coord(&self.cut_points, self.perimeter, self.tol, s)
    }

    pub fn class_at(&self, s: f64) -> Option<usize> {
        self.index_of(s).map(|i| self.class_of[i])
    }
}

/// Sorts coordinates into `[0, perimeter)` and merges those closer than the
/// coordinate tolerance, wrapping around the perimeter.
pub(crate) fn dedup_coords(polygon: &Polygon, raw: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut coords: Vec<f64> = raw.into_iter().map(|s| polygon.canonical(s)).collect();
    coords.sort_by(f64::total_cmp);
    let tol = polygon.tol();
    let mut out: Vec<f64> = Vec::with_capacity(coords.len());
    for s in coords {
        match out.last() {
            Some(&last) if s - last <= tol => {}
            _ => out.push(s),
        }
    }
    while out.len() > 1 && polygon.perimeter() - out[out.len() - 1] + out[0] <= tol {
        out.pop();
    }
    out
}

/// Index of `s` in sorted canonical coordinates, within `tol`.
pub(crate) fn find_coord(coords: &[f64], perimeter: f64, tol: f64, s: f64) -> Option<usize> {
    if coords.is_empty() {
        return None;
    }
    let s = s.rem_euclid(perimeter);
    let idx = coords.partition_point(|&c| c < s);
    let gap = |c: f64| {
        let d = (c - s).abs();
        d.min(perimeter - d)
    };
    [idx.saturating_sub(1), idx.min(coords.len() - 1), 0, coords.len() - 1]
        .into_iter()
        .filter(|&i| gap(coords[i]) <= tol)
        .min_by(|&i, &j| gap(coords[i]).total_cmp(&gap(coords[j])))
}

/// A polygon with an interior-disjoint collection of pairings on its boundary.
#[derive(Debug, Clone)]
pub struct Scheme {
    polygon: Polygon,
    pairings: Vec<Pairing>,
    full: bool,
    plain: bool,
    classes: ClassTable,
}

/// Validates a full, interior-disjoint scheme.
pub fn validate_scheme(
    polygon: Polygon,
    pairings: &[(BoundaryInterval, BoundaryInterval)],
) -> Result<Scheme, SchemeError> {
    Scheme::new(polygon, pairings)
}

impl Scheme {
    /// A full, interior-disjoint scheme.
    pub fn new(polygon: Polygon, pairings: &[(BoundaryInterval, BoundaryInterval)]) -> Result<Self, SchemeError> {
        let pairings = Self::check_pairings(&polygon, pairings)?;
        Self::assemble(polygon, pairings, true)
    }

    /// An interior-disjoint scheme that need not cover the boundary.
    pub fn new_partial(
        polygon: Polygon,
        pairings: &[(BoundaryInterval, BoundaryInterval)],
    ) -> Result<Self, SchemeError> {
        let pairings = Self::check_pairings(&polygon, pairings)?;
        Self::assemble(polygon, pairings, false)
    }

    /// Builds from already constructed pairings.
    pub fn from_pairings(polygon: Polygon, pairings: Vec<Pairing>, require_full: bool) -> Result<Self, SchemeError> {
        Self::assemble(polygon, pairings, require_full)
    }

    fn check_pairings(
        polygon: &Polygon,
        raw: &[(BoundaryInterval, BoundaryInterval)],
    ) -> Result<Vec<Pairing>, SchemeError> {
        raw.iter()
            .enumerate()
            .map(|(i, &(a, b))| Pairing::checked(polygon, i, a, b))
            .collect()
    }

    fn assemble(polygon: Polygon, pairings: Vec<Pairing>, require_full: bool) -> Result<Self, SchemeError> {
        let tol = polygon.tol();
        let mut segments: Vec<(BoundaryInterval, usize)> =
            pairings.iter().enumerate().flat_map(|(i, p)| [(p.a, i), (p.b, i)]).collect();
        segments.sort_by(|x, y| x.0.start.total_cmp(&y.0.start));
        let k = segments.len();
        for idx in 0..k {
            let (cur, i) = segments[idx];
            let (next, j) = segments[(idx + 1) % k];
            if k > 1 && polygon.overlap_len(&cur, &next) > tol {
                return Err(SchemeError::Overlap {
                    i,
                    first: cur,
                    j,
                    second: next,
                });
            }
        }
        let total: f64 = segments.iter().map(|(s, _)| s.len).fold(0.0, |acc, l| acc + l);
        if total > polygon.perimeter() + tol {
            // Sorted neighbours were disjoint but the segments still cannot fit.
            let (first, i) = segments[0];
            let (second, j) = segments[1];
            return Err(SchemeError::Overlap { i, first, j, second });
        }
        let sum: f64 = pairings.iter().map(Pairing::len).fold(0.0, |acc, l| acc + l);
        let expected = 0.5 * polygon.perimeter();
        let full = (sum - expected).abs() <= tol;
        if require_full && !full {
            return Err(SchemeError::NotFull { sum, expected });
        }
        let plain = (0..pairings.len())
            .all(|i| ((i + 1)..pairings.len()).all(|j| !pairings_linked(&polygon, &pairings[i], &pairings[j])));
        let classes = ClassTable::build(&polygon, &pairings);
        Ok(Scheme {
            polygon,
            pairings,
            full,
            plain,
            classes,
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    /// Always true for a constructed scheme.
    pub fn is_interior_disjoint(&self) -> bool {
        true
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn is_plain(&self) -> bool {
        self.plain
    }

    /// Equivalence classes of cut points under endpoint identifications.
    pub fn boundary_classes(&self) -> &ClassTable {
        &self.classes
    }

    /// Index of the pairing whose open segment interior contains `s`.
    pub fn pairing_with_interior(&self, s: f64) -> Option<usize> {
        self.pairings.iter().position(|p| p.has_interior_point(&self.polygon, s))
    }

    /// Whether boundary points `s` and `t` are identified: equal, in the
    /// same cut point class, or an interior pair.
    pub fn related(&self, s: f64, t: f64) -> bool {
        if self.polygon.same_coord(s, t) {
            return true;
        }
        match (self.classes.class_at(s), self.classes.class_at(t)) {
            (Some(a), Some(b)) => a == b,
            (Some(_), None) | (None, Some(_)) => false,
            (None, None) => self.pairing_with_interior(s).is_some_and(|i| {
                let q = self.pairings[i].pair_point(&self.polygon, s).expect("s on pairing");
                self.polygon.same_coord(q, t)
            }),
        }
    }

    /// Whether the arc is plain: every pairing that meets its interior lies
    /// inside it, and those pairings are mutually unlinked.
    pub fn is_plain_arc(&self, arc: &BoundaryInterval) -> bool {
        let tol = self.polygon.tol();
        if arc.len <= tol {
            return true;
        }
        let mut inside = Vec::new();
        for p in &self.pairings {
            let meets = self.polygon.overlap_len(&p.a, arc) > tol || self.polygon.overlap_len(&p.b, arc) > tol;
            if !meets {
                continue;
            }
            if !(self.polygon.interval_within(&p.a, arc) && self.polygon.interval_within(&p.b, arc)) {
                return false;
            }
            inside.push(p);
        }
        (0..inside.len())
            .all(|i| ((i + 1)..inside.len()).all(|j| !pairings_linked(&self.polygon, inside[i], inside[j])))
    }

    /// Equivalence of two non-interior boundary points of a plain scheme,
    /// decided by whether one of the two arcs between them is plain.
    pub fn equivalent_by_plain_arc(&self, s1: f64, s2: f64) -> Result<bool, SchemeError> {
        if !self.plain {
            return Err(SchemeError::SchemeNotPlain);
        }
        for s in [s1, s2] {
            if self.pairing_with_interior(s).is_some() {
                return Err(SchemeError::InteriorPairPoint(s));
            }
        }
        if self.polygon.same_coord(s1, s2) {
            return Ok(true);
        }
        let forward = BoundaryInterval::new(s1, self.polygon.ccw_offset(s1, s2));
        let backward = BoundaryInterval::new(s2, self.polygon.ccw_offset(s2, s1));
        Ok(self.is_plain_arc(&forward) || self.is_plain_arc(&backward))
    }

    pub fn pair_point(&self, pairing: usize, s: f64) -> Result<f64, SchemeError> {
        self.pairings[pairing].pair_point(&self.polygon, s)
    }
}
