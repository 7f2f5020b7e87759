//! Correspondences, distortion and Gromov–Hausdorff upper bounds between quotients.

use thiserror::Error;

use crate::geometry::{BoundaryInterval, GeometryError, Point, Polygon};
use crate::quotient::{DistanceMatrix, Net, NetOptions, NodeTag, QuotientError, SupDiff, WalkGraph, DEFAULT_NODE_BUDGET};
use crate::scheme::{dedup_coords, Scheme};

/// Default slack constant in the collapse bound `5(1 + δ₀)·diam D`.
pub const DEFAULT_DELTA0: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GhError {
    #[error("NotSurjective: correspondence misses node {index} of space {space}")]
    NotSurjective { space: u8, index: usize },
    #[error("IndexOutOfRange: pair ({0}, {1}) is outside the distance matrices")]
    IndexOutOfRange(usize, usize),
    #[error("PolygonMismatch: schemes are defined on different polygons")]
    PolygonMismatch,
    #[error("PreconditionViolated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Quotient(QuotientError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<QuotientError> for GhError {
    fn from(e: QuotientError) -> Self {
        match e {
            QuotientError::PolygonMismatch => GhError::PolygonMismatch,
            other => GhError::Quotient(other),
        }
    }
}

/// A relation between two finite spaces given by node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(pairs: Vec<(usize, usize)>) -> Self {
        Correspondence { pairs }
    }

    pub fn identity(n: usize) -> Self {
        Correspondence {
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    fn check(&self, n1: usize, n2: usize) -> Result<(), GhError> {
        let mut hit1 = vec![false; n1];
        let mut hit2 = vec![false; n2];
        for &(i, j) in &self.pairs {
            if i >= n1 || j >= n2 {
                return Err(GhError::IndexOutOfRange(i, j));
            }
            hit1[i] = true;
            hit2[j] = true;
        }
        if let Some(index) = hit1.iter().position(|h| !h) {
            return Err(GhError::NotSurjective { space: 1, index });
        }
        if let Some(index) = hit2.iter().position(|h| !h) {
            return Err(GhError::NotSurjective { space: 2, index });
        }
        Ok(())
    }
}

/// `sup |d1(x, x') - d2(y, y')|` over pairs of related pairs.
pub fn distortion(r: &Correspondence, d1: &DistanceMatrix, d2: &DistanceMatrix) -> Result<f64, GhError> {
    r.check(d1.n(), d2.n())?;
    let mut worst = 0.0f64;
    for (k, &(x, y)) in r.pairs.iter().enumerate() {
        for &(x2, y2) in &r.pairs[k + 1..] {
            worst = worst.max((d1.get(x, x2) - d2.get(y, y2)).abs());
        }
    }
    Ok(worst)
}

/// Half the distortion: an upper bound on the GH distance of the two finite spaces.
pub fn gh_upper_from_correspondence(r: &Correspondence, d1: &DistanceMatrix, d2: &DistanceMatrix) -> Result<f64, GhError> {
    Ok(0.5 * distortion(r, d1, d2)?)
}

/// Result of comparing two quotient metrics on a shared net.
#[derive(Debug, Clone)]
pub struct MetricDiff {
    pub sup_diff: f64,
    /// Points attaining the supremum.
    pub witness: Option<(Point, Point)>,
    pub mesh: f64,
    pub nodes: usize,
    /// Nodes that took part in the comparison.
    pub compared: usize,
}

#[derive(Debug, Clone)]
pub struct DiffOptions {
    /// Boundary nodes in the open arc are left out.
    pub exclude: Option<BoundaryInterval>,
    pub interior: bool,
    pub budget: usize,
}

impl Default for DiffOptions {
    fn default() -> Self {
        DiffOptions {
            exclude: None,
            interior: true,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// `sup |dA - dB|` over a net aligned with the pairings of both schemes.
pub fn sup_metric_diff(a: &Scheme, b: &Scheme, delta: f64) -> Result<MetricDiff, GhError> {
    sup_metric_diff_with(a, b, delta, &DiffOptions::default())
}

pub fn sup_metric_diff_with(a: &Scheme, b: &Scheme, delta: f64, opts: &DiffOptions) -> Result<MetricDiff, GhError> {
    if a.polygon() != b.polygon() {
        return Err(GhError::PolygonMismatch);
    }
    let net_opts = NetOptions {
        interior: opts.interior,
        budget: opts.budget,
        ..NetOptions::default()
    };
    let net = Net::build(&[a, b], delta, &net_opts)?;
    let ga = WalkGraph::new(&net, a)?;
    let gb = WalkGraph::new(&net, b)?;
    let include: Vec<bool> = net
        .tags()
        .iter()
        .map(|t| match (t, &opts.exclude) {
            (NodeTag::Boundary(s), Some(arc)) => !net.polygon().interval_contains_open(arc, *s),
            _ => true,
        })
        .collect();
    let SupDiff { value, argmax } = crate::quotient::sup_abs_diff(&ga, &gb, Some(&include));
    Ok(MetricDiff {
        sup_diff: value,
        witness: argmax.map(|(i, j)| (net.points()[i], net.points()[j])),
        mesh: net.mesh(),
        nodes: net.len(),
        compared: include.iter().filter(|&&k| k).count(),
    })
}

/// Bound from the net lemma: `5·max(r, sup_diff)/2`, optionally with the
/// collapse diameter of the main theorem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GHBound {
    pub r: f64,
    pub sup_diff: f64,
    pub bound: f64,
    pub delta0: f64,
    pub collapse_diam: Option<f64>,
}

pub fn gh_bound_lemma(r: f64, sup_diff: f64) -> GHBound {
    let admissible = r.max(sup_diff);
    GHBound {
        r,
        sup_diff,
        bound: 2.5 * admissible,
        delta0: DEFAULT_DELTA0,
        collapse_diam: None,
    }
}

impl GHBound {
    pub fn with_collapse(mut self, diam: f64, delta0: f64) -> Self {
        self.collapse_diam = Some(diam);
        self.delta0 = delta0;
        self
    }

    /// `5(1 + δ₀)·diam D` when a collapse diameter is known.
    pub fn theorem_bound(&self) -> Option<f64> {
        self.collapse_diam.map(|d| theorem_bound(d, self.delta0))
    }
}

pub fn theorem_bound(diam: f64, delta0: f64) -> f64 {
    5.0 * (1.0 + delta0) * diam
}

/// GH upper bound between two schemes on a shared net of mesh `delta`.
pub fn gh_bound_for_schemes(a: &Scheme, b: &Scheme, delta: f64, opts: &DiffOptions) -> Result<(GHBound, MetricDiff), GhError> {
    let diff = sup_metric_diff_with(a, b, delta, opts)?;
    Ok((gh_bound_lemma(diff.mesh, diff.sup_diff), diff))
}

/// The collapsing arc `D` and the classes of each scheme that absorb it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseWitness {
    pub arc: BoundaryInterval,
    pub class_a: usize,
    pub class_b: usize,
}

impl CollapseWitness {
    /// Uses the classes of the arc's start point, which must be a cut point of both schemes.
    pub fn for_arc(a: &Scheme, b: &Scheme, arc: BoundaryInterval) -> Option<Self> {
        let class_a = a.boundary_classes().class_at(arc.start)?;
        let class_b = b.boundary_classes().class_at(arc.start)?;
        Some(CollapseWitness { arc, class_a, class_b })
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.arc.start, self.arc.end())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseReport {
    /// Same relation outside `D`.
    pub agreement: ConditionResult,
    /// Relations from outside `D` into `D` stay in the witness classes.
    pub absorption: ConditionResult,
    /// Each witness class contains an endpoint of `D`.
    pub endpoint: ConditionResult,
}

impl CollapseReport {
    pub fn all_passed(&self) -> bool {
        self.agreement.passed && self.absorption.passed && self.endpoint.passed
    }
}

/// Cut points, vertices and pairing samples of both schemes, closed under both pairings.
pub fn default_condition_samples(a: &Scheme, b: &Scheme) -> Vec<f64> {
    let polygon = a.polygon();
    let mut raw: Vec<f64> = polygon.vertex_coords().to_vec();
    for sch in [a, b] {
        raw.extend_from_slice(sch.boundary_classes().cut_points());
        for p in sch.pairings() {
            for k in 1..4 {
                raw.push(p.a().start + p.len() * k as f64 / 4.0);
            }
        }
    }
    let mut samples = dedup_coords(polygon, raw);
    let mut grown = samples.clone();
    for sch in [a, b] {
        for p in sch.pairings() {
            grown.extend(samples.iter().filter_map(|&s| p.pair_point(polygon, s).ok()));
        }
    }
    samples = dedup_coords(polygon, grown);
    samples
}

/// Checks the three collapse conditions on sampled boundary points.
pub fn check_collapse_conditions(
    a: &Scheme,
    b: &Scheme,
    witness: &CollapseWitness,
    samples: Option<&[f64]>,
) -> Result<CollapseReport, GhError> {
    if a.polygon() != b.polygon() {
        return Err(GhError::PolygonMismatch);
    }
    let polygon = a.polygon();
    let owned;
    let samples = match samples {
        Some(s) => s,
        None => {
            owned = default_condition_samples(a, b);
            &owned
        }
    };
    let arc = &witness.arc;
    let in_d = |s: f64| polygon.interval_contains_open(arc, s);

    let mut agreement = ConditionResult {
        passed: true,
        checked: 0,
        counterexample: None,
    };
    let mut absorption = agreement.clone();
    let in_class = |sch: &Scheme, class: usize, s: f64| sch.boundary_classes().class_at(s) == Some(class);
    for (k, &x) in samples.iter().enumerate() {
        for &y in &samples[k + 1..] {
            let (xd, yd) = (in_d(x), in_d(y));
            if !xd && !yd {
                agreement.checked += 1;
                if agreement.passed && a.related(x, y) != b.related(x, y) {
                    agreement.passed = false;
                    agreement.counterexample = Some((x, y));
                }
            } else if xd != yd {
                absorption.checked += 1;
                let ok = [(a, witness.class_a), (b, witness.class_b)]
                    .into_iter()
                    .all(|(sch, c)| !sch.related(x, y) || (in_class(sch, c, x) && in_class(sch, c, y)));
                if absorption.passed && !ok {
                    absorption.passed = false;
                    absorption.counterexample = Some((x, y));
                }
            }
        }
    }
    let (s0, s1) = witness.endpoints();
    let touches = |sch: &Scheme, c: usize| in_class(sch, c, s0) || in_class(sch, c, s1);
    let endpoint_ok = touches(a, witness.class_a) && touches(b, witness.class_b);
    let endpoint = ConditionResult {
        passed: endpoint_ok,
        checked: 2,
        counterexample: (!endpoint_ok).then_some((s0, s1)),
    };
    Ok(CollapseReport {
        agreement,
        absorption,
        endpoint,
    })
}

/// Checks `d(x, z) <= d(x, y) + diam D` for `x` off the open arc `D`,
/// `y` on its closure and `z` one of its endpoints.
pub fn prop_gh2_1_check(polygon: &Polygon, arc: &BoundaryInterval, x: Point, y: Point, z: Point) -> Result<bool, GhError> {
    let on_arc = |p: Point, open: bool| match polygon.locate(p) {
        crate::geometry::Location::Boundary(s) => {
            if open {
                polygon.interval_contains_open(arc, s)
            } else {
                polygon.interval_contains(arc, s)
            }
        }
        _ => false,
    };
    if !polygon.contains(x) || on_arc(x, true) {
        return Err(GhError::PreconditionViolated(format!("x = {x} must lie in the polygon off the open arc")));
    }
    if !on_arc(y, false) {
        return Err(GhError::PreconditionViolated(format!("y = {y} must lie on the arc {arc}")));
    }
    let (e0, e1) = (polygon.boundary_point(arc.start), polygon.boundary_point(arc.end()));
    let eps = polygon.eps();
    if z.dist(e0) > eps && z.dist(e1) > eps {
        return Err(GhError::PreconditionViolated(format!("z = {z} must be an endpoint of the arc {arc}")));
    }
    let lhs = polygon.intrinsic_distance(x, z)?;
    let rhs = polygon.intrinsic_distance(x, y)? + polygon.arc_diameter(arc);
    Ok(lhs <= rhs + eps)
}
