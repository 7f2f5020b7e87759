//! Discrete upper approximations of the quotient semi-metric.
//!
//! A walk alternates steps, weighted by the intrinsic distance of the
//! polygon, with free jumps between identified boundary points. On a net the
//! walk graph is the complete step graph plus zero-weight jump edges, so every
//! graph path is an actual walk and graph distances bound the quotient
//! semi-metric from above.
//!
//! Shortest paths are evaluated on a contracted graph. Consecutive steps merge
//! by the triangle inequality, so a shortest path visits only the connected
//! components of the jump graph ("jump classes"). With `D` the step-closure
//! between classes and `h(x, c)` the step distance from `x` to class `c`,
//!
//! ```text
//! d(x, y) = min( d_P(x, y), min_c g(x, c) + h(y, c) ),  g(x, c) = min_c' h(x, c') + D(c', c)
//! ```
//!
//! which equals Dijkstra on the full walk graph.

use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{GeometryError, Location, Point, Polygon, ReflexProfile};
use crate::scheme::{dedup_coords, find_coord, Scheme};
use crate::union_find::UnionFind;

pub const DEFAULT_NODE_BUDGET: usize = 20_000;
pub const NODE_BUDGET_ENV: &str = "PAPERFOLD_NODE_BUDGET";

/// Node budget from `PAPERFOLD_NODE_BUDGET`, or the default.
pub fn node_budget_from_env() -> usize {
    std::env::var(NODE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b: &usize| b > 0)
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuotientError {
    #[error("MeshTooFine: net needs {nodes} nodes, budget is {budget}")]
    MeshTooFine { nodes: usize, budget: usize },
    #[error("BudgetExceeded: refinement level {level} needs {nodes} nodes, budget is {budget}")]
    BudgetExceeded { level: u32, nodes: usize, budget: usize },
    #[error("InvalidMesh: mesh must be positive and finite, got {0}")]
    InvalidMesh(f64),
    #[error("InvalidTolerance: tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("PolygonMismatch: schemes are defined on different polygons")]
    PolygonMismatch,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Default mesh: perimeter / 200.
pub fn default_delta(polygon: &Polygon) -> f64 {
    polygon.perimeter() / 200.0
}

/// Default refinement tolerance: perimeter / 1000.
pub fn default_tol(polygon: &Polygon) -> f64 {
    1e-3 * polygon.perimeter()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NodeTag {
    Boundary(f64),
    Interior,
}

#[derive(Debug, Clone)]
pub struct NetOptions {
    /// Number of halvings applied to the base mesh.
    pub level: u32,
    /// Whether to add the interior grid.
    pub interior: bool,
    /// Extra points that must be nodes; boundary points are aligned like samples.
    pub queries: Vec<Point>,
    /// Extra boundary coordinates that must be nodes.
    pub extra_coords: Vec<f64>,
    pub budget: usize,
}

impl Default for NetOptions {
    fn default() -> Self {
        NetOptions {
            level: 0,
            interior: true,
            queries: Vec::new(),
            extra_coords: Vec::new(),
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Sample points of a polygon aligned with the pairings of one or more schemes.
///
/// Boundary nodes come first, sorted by coordinate, followed by interior nodes.
#[derive(Debug)]
pub struct Net {
    polygon: Polygon,
    delta: f64,
    level: u32,
    points: Vec<Point>,
    tags: Vec<NodeTag>,
    coords: Vec<f64>,
    queries: Vec<usize>,
    profiles: Vec<ReflexProfile>,
    bdist: OnceLock<Vec<f64>>,
}

const CLOSURE_ROUNDS: usize = 3;

/// Net for one scheme with default options.
pub fn build_net(sch: &Scheme, delta: f64) -> Result<Net, QuotientError> {
    Net::build(&[sch], delta, &NetOptions::default())
}

impl Net {
    /// Builds a net aligned with every pairing of every scheme in `schemes`.
    pub fn build(schemes: &[&Scheme], delta: f64, opts: &NetOptions) -> Result<Net, QuotientError> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(QuotientError::InvalidMesh(delta));
        }
        let polygon = schemes.first().expect("at least one scheme").polygon().clone();
        if schemes.iter().any(|s| *s.polygon() != polygon) {
            return Err(QuotientError::PolygonMismatch);
        }
        let scale = f64::from(1u32 << opts.level.min(30));
        let spacing = delta / scale;

        let mut interior_queries = Vec::new();
        let mut raw: Vec<f64> = polygon.vertex_coords().to_vec();
        raw.extend(opts.extra_coords.iter().copied());
        for (qi, &q) in opts.queries.iter().enumerate() {
            match polygon.locate(q) {
                Location::Outside => return Err(GeometryError::PointOutside(q).into()),
                Location::Boundary(s) => raw.push(s),
                Location::Interior => interior_queries.push(qi),
            }
        }
        for sch in schemes {
            raw.extend_from_slice(sch.boundary_classes().cut_points());
            for p in sch.pairings() {
                let len = p.len();
                let m = ((len / delta - 1e-9).ceil().max(1.0) * scale) as usize;
                if m > opts.budget {
                    return Err(QuotientError::MeshTooFine { nodes: m, budget: opts.budget });
                }
                for k in 0..=m {
                    let t = len * k as f64 / m as f64;
                    raw.push(p.a().start + t);
                    raw.push(p.b().start + t);
                }
            }
        }
        let mut coords = dedup_coords(&polygon, raw);
        coords = fill_gaps(&polygon, coords, spacing, opts.budget)?;
        for _ in 0..CLOSURE_ROUNDS {
            let before = coords.len();
            let mut grown = coords.clone();
            for sch in schemes {
                for p in sch.pairings() {
                    for &s in &coords {
                        if let Ok(q) = p.pair_point(&polygon, s) {
                            grown.push(q);
                        }
                    }
                }
            }
            coords = dedup_coords(&polygon, grown);
            if coords.len() > opts.budget {
                return Err(QuotientError::MeshTooFine {
                    nodes: coords.len(),
                    budget: opts.budget,
                });
            }
            if coords.len() == before {
                break;
            }
        }

        let mut points: Vec<Point> = coords.iter().map(|&s| polygon.boundary_point(s)).collect();
        let mut tags: Vec<NodeTag> = coords.iter().map(|&s| NodeTag::Boundary(s)).collect();
        if opts.interior {
            let grid = interior_grid(&polygon, spacing / std::f64::consts::SQRT_2, opts.budget - points.len().min(opts.budget))?;
            tags.extend(std::iter::repeat(NodeTag::Interior).take(grid.len()));
            points.extend(grid);
        }
        let mut queries = vec![usize::MAX; opts.queries.len()];
        for (qi, &q) in opts.queries.iter().enumerate() {
            if let Location::Boundary(s) = polygon.locate(q) {
                queries[qi] = find_coord(&coords, polygon.perimeter(), polygon.tol(), s).expect("query coordinate is a node");
            }
        }
        for qi in interior_queries {
            queries[qi] = points.len();
            points.push(opts.queries[qi]);
            tags.push(NodeTag::Interior);
        }
        if points.len() > opts.budget {
            return Err(QuotientError::MeshTooFine {
                nodes: points.len(),
                budget: opts.budget,
            });
        }
        let profiles = if polygon.is_convex() {
            Vec::new()
        } else {
            points.par_iter().map(|&p| polygon.profile(p)).collect()
        };
        Ok(Net {
            polygon,
            delta,
            level: opts.level,
            points,
            tags,
            coords,
            queries,
            profiles,
            bdist: OnceLock::new(),
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn n_boundary(&self) -> usize {
        self.coords.len()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn tags(&self) -> &[NodeTag] {
        &self.tags
    }

    /// Sorted boundary node coordinates.
    pub fn boundary_coords(&self) -> &[f64] {
        &self.coords
    }

    /// Base mesh before halving.
    pub fn base_delta(&self) -> f64 {
        self.delta
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Effective mesh `δ / 2^level`.
    pub fn mesh(&self) -> f64 {
        self.delta / f64::from(1u32 << self.level.min(30))
    }

    /// Node indices of the query points, in the order given.
    pub fn query_nodes(&self) -> &[usize] {
        &self.queries
    }

    pub fn node_of_coord(&self, s: f64) -> Option<usize> {
        find_coord(&self.coords, self.polygon.perimeter(), self.polygon.tol(), s)
    }

    /// Index of a node at exactly this position.
    pub fn node_of_point(&self, p: Point) -> Option<usize> {
        match self.polygon.locate(p) {
            Location::Boundary(s) => self.node_of_coord(s),
            _ => self.points.iter().position(|&q| q.dist(p) <= self.polygon.eps()),
        }
    }

    /// Euclidean distance from `p` to the nearest node.
    pub fn nearest_node_distance(&self, p: Point) -> f64 {
        self.points.iter().map(|&q| q.dist(p)).fold(f64::INFINITY, f64::min)
    }

    fn raw_dp(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if i == j {
            return 0.0;
        }
        let (p, q) = (self.points[i], self.points[j]);
        if self.profiles.is_empty() {
            p.dist(q)
        } else {
            self.polygon.profiled_distance(p, &self.profiles[i], q, &self.profiles[j])
        }
    }

    /// Intrinsic distances from every node to every boundary node, row-major.
    fn boundary_distances(&self) -> &[f64] {
        self.bdist.get_or_init(|| {
            let b = self.n_boundary();
            let rows: Vec<Vec<f64>> = (0..self.len())
                .into_par_iter()
                .map(|i| (0..b).map(|j| self.raw_dp(i, j)).collect())
                .collect();
            rows.concat()
        })
    }

    /// Intrinsic distance between nodes `i` and `j`; exactly symmetric.
    pub fn intrinsic(&self, i: usize, j: usize) -> f64 {
        let b = self.n_boundary();
        if j < b {
            self.boundary_distances()[i * b + j]
        } else if i < b {
            self.boundary_distances()[j * b + i]
        } else {
            self.raw_dp(i, j)
        }
    }
}

fn fill_gaps(polygon: &Polygon, coords: Vec<f64>, spacing: f64, budget: usize) -> Result<Vec<f64>, QuotientError> {
    let per = polygon.perimeter();
    let mut extra = Vec::new();
    for (k, &s) in coords.iter().enumerate() {
        let next = if k + 1 < coords.len() { coords[k + 1] } else { coords[0] + per };
        let gap = next - s;
        if gap > spacing + polygon.tol() {
            let q = (gap / spacing - 1e-9).ceil() as usize;
            if q > budget {
                return Err(QuotientError::MeshTooFine { nodes: q, budget });
            }
            extra.extend((1..q).map(|i| s + gap * i as f64 / q as f64));
        }
    }
    if extra.is_empty() {
        return Ok(coords);
    }
    extra.extend(coords);
    Ok(dedup_coords(polygon, extra))
}

fn interior_grid(polygon: &Polygon, h: f64, budget: usize) -> Result<Vec<Point>, QuotientError> {
    let (mut lo, mut hi) = (polygon.vertices()[0], polygon.vertices()[0]);
    for v in polygon.vertices() {
        lo = Point::new(lo.x.min(v.x), lo.y.min(v.y));
        hi = Point::new(hi.x.max(v.x), hi.y.max(v.y));
    }
    let nx = ((hi.x - lo.x) / h + 1e-9).floor() as usize;
    let ny = ((hi.y - lo.y) / h + 1e-9).floor() as usize;
    let cells = (nx + 1) as f64 * (ny + 1) as f64;
    let estimate = (cells * polygon.area() / ((hi.x - lo.x) * (hi.y - lo.y))).ceil() as usize;
    if estimate > budget {
        return Err(QuotientError::MeshTooFine { nodes: estimate, budget });
    }
    let margin = polygon.tol();
    let mut out = Vec::new();
    for i in 0..=nx {
        for j in 0..=ny {
            let p = Point::new(lo.x + i as f64 * h, lo.y + j as f64 * h);
            if polygon.locate(p) == Location::Interior && polygon.boundary_distance(p) > margin {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Symmetric matrix of pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| ((i + 1)..n).map(|j| f(i, j)).collect())
            .collect();
        let mut data = vec![0.0; n * n];
        for (i, row) in rows.into_iter().enumerate() {
            for (k, v) in row.into_iter().enumerate() {
                let j = i + 1 + k;
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        DistanceMatrix { n, data }
    }

    /// Builds from a full row-major table.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        DistanceMatrix { n, data: rows.concat() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Largest `d(x, z) - d(x, y) - d(y, z)` over all triples.
    pub fn max_triangle_violation(&self) -> f64 {
        (0..self.n)
            .into_par_iter()
            .map(|x| {
                let rx = self.row(x);
                let mut worst = f64::NEG_INFINITY;
                for y in 0..self.n {
                    let dxy = rx[y];
                    let ry = self.row(y);
                    for z in 0..self.n {
                        let v = rx[z] - dxy - ry[z];
                        if v > worst {
                            worst = v;
                        }
                    }
                }
                worst
            })
            .reduce(|| f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_diff(&self, other: &DistanceMatrix) -> f64 {
        assert_eq!(self.n, other.n, "matrices must have the same size");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Steps and jumps on a net for one scheme.
#[derive(Debug)]
pub struct WalkGraph<'a> {
    net: &'a Net,
    jumps: Vec<(usize, usize)>,
    unaligned: usize,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    closure: Vec<f64>,
}

const NO_CLASS: usize = usize::MAX;

impl<'a> WalkGraph<'a> {
    pub fn new(net: &'a Net, scheme: &Scheme) -> Result<Self, QuotientError> {
        if *scheme.polygon() != net.polygon {
            return Err(QuotientError::PolygonMismatch);
        }
        let polygon = &net.polygon;
        let b = net.n_boundary();
        let mut jumps = Vec::new();
        let mut unaligned = 0;
        for (i, &s) in net.coords.iter().enumerate() {
            for p in scheme.pairings() {
                if let Ok(q) = p.pair_point(polygon, s) {
                    match net.node_of_coord(q) {
                        Some(j) if i < j => jumps.push((i, j)),
                        Some(_) => {}
                        None => unaligned += 1,
                    }
                }
            }
        }
        let table = scheme.boundary_classes();
        for c in 0..table.class_count() {
            let nodes: Vec<usize> = table.members(c).into_iter().filter_map(|s| net.node_of_coord(s)).collect();
            for w in nodes.windows(2) {
                jumps.push((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        jumps.sort_unstable();
        jumps.dedup();

        let mut uf = UnionFind::new(b);
        for &(i, j) in &jumps {
            uf.union(i, j);
        }
        let members: Vec<Vec<usize>> = uf.blocks().into_iter().filter(|blk| blk.len() > 1).collect();
        let mut class_of = vec![NO_CLASS; b];
        for (c, blk) in members.iter().enumerate() {
            for &i in blk {
                class_of[i] = c;
            }
        }

        let k = members.len();
        let bd = net.boundary_distances();
        let mut closure = vec![f64::INFINITY; k * k];
        for c in 0..k {
            closure[c * k + c] = 0.0;
            for c2 in (c + 1)..k {
                let mut w = f64::INFINITY;
                for &i in &members[c] {
                    let row = &bd[i * b..(i + 1) * b];
                    for &j in &members[c2] {
                        w = w.min(row[j]);
                    }
                }
                closure[c * k + c2] = w;
                closure[c2 * k + c] = w;
            }
        }
        for m in 0..k {
            for i in 0..k {
                let dim = closure[i * k + m];
                for j in 0..k {
                    let cand = dim + closure[m * k + j];
                    if cand < closure[i * k + j] {
                        closure[i * k + j] = cand;
                    }
                }
            }
        }
        Ok(WalkGraph {
            net,
            jumps,
            unaligned,
            class_of,
            members,
            closure,
        })
    }

    pub fn net(&self) -> &Net {
        self.net
    }

    /// Zero-weight edges between identified boundary nodes.
    pub fn jump_edges(&self) -> &[(usize, usize)] {
        &self.jumps
    }

    /// Pairing points of boundary nodes whose partner is not a node.
    pub fn unaligned(&self) -> usize {
        self.unaligned
    }

    /// Number of jump classes (components of the jump graph with two or more nodes).
    pub fn class_count(&self) -> usize {
        self.members.len()
    }

    /// Jump class of a boundary node, if it has any jump edge.
    pub fn class_of_node(&self, i: usize) -> Option<usize> {
        self.class_of.get(i).copied().filter(|&c| c != NO_CLASS)
    }

    fn h_row(&self, x: usize) -> Vec<f64> {
        let b = self.net.n_boundary();
        let row = &self.net.boundary_distances()[x * b..(x + 1) * b];
        self.members
            .iter()
            .map(|blk| blk.iter().map(|&m| row[m]).fold(f64::INFINITY, f64::min))
            .collect()
    }

    fn g_row(&self, h: &[f64]) -> Vec<f64> {
        let k = self.members.len();
        let mut g = vec![f64::INFINITY; k];
        for (c2, &hv) in h.iter().enumerate() {
            let row = &self.closure[c2 * k..(c2 + 1) * k];
            for (gc, &d) in g.iter_mut().zip(row) {
                let cand = hv + d;
                if cand < *gc {
                    *gc = cand;
                }
            }
        }
        g
    }

    /// Per-node class distances `(h, g)`, row-major `N × K`.
    fn tables(&self) -> (Vec<f64>, Vec<f64>) {
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..self.net.len())
            .into_par_iter()
            .map(|x| {
                let h = self.h_row(x);
                let g = self.g_row(&h);
                (h, g)
            })
            .collect();
        let mut hs = Vec::with_capacity(rows.len() * self.members.len());
        let mut gs = Vec::with_capacity(rows.len() * self.members.len());
        for (h, g) in rows {
            hs.extend(h);
            gs.extend(g);
        }
        (hs, gs)
    }

    /// Graph distance between nodes `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        let (i, j) = (i.min(j), i.max(j));
        let g = self.g_row(&self.h_row(i));
        let h = self.h_row(j);
        combine(self.net.intrinsic(i, j), &g, &h)
    }

    /// Distances from node `i` to every node.
    pub fn distances_from(&self, i: usize) -> Vec<f64> {
        (0..self.net.len()).map(|j| self.distance(i, j)).collect()
    }

    pub fn all_pairs(&self) -> DistanceMatrix {
        let k = self.members.len();
        let (h, g) = self.tables();
        DistanceMatrix::from_fn(self.net.len(), |i, j| {
            combine(self.net.intrinsic(i, j), &g[i * k..(i + 1) * k], &h[j * k..(j + 1) * k])
        })
    }
}

#[inline]
fn combine(direct: f64, g: &[f64], h: &[f64]) -> f64 {
    let mut best = direct;
    for (a, b) in g.iter().zip(h) {
        let v = a + b;
        if v < best {
            best = v;
        }
    }
    best
}

/// All-pairs walk-graph distances of `sch` on `net`.
pub fn all_pairs_quotient(sch: &Scheme, net: &Net) -> Result<DistanceMatrix, QuotientError> {
    Ok(WalkGraph::new(net, sch)?.all_pairs())
}

/// Largest `|dA - dB|` over node pairs, with the first pair attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupDiff {
    pub value: f64,
    pub argmax: Option<(usize, usize)>,
}

/// Streams `sup |dA - dB|` over pairs of nodes with `include[i]` set
/// (all nodes when `include` is `None`), without storing either matrix.
pub fn sup_abs_diff(a: &WalkGraph<'_>, b: &WalkGraph<'_>, include: Option<&[bool]>) -> SupDiff {
    assert!(std::ptr::eq(a.net, b.net), "walk graphs must share a net");
    let net = a.net;
    let (ka, kb) = (a.members.len(), b.members.len());
    let (ha, ga) = a.tables();
    let (hb, gb) = b.tables();
    let keep = |i: usize| include.map_or(true, |m| m[i]);
    let best = (0..net.len())
        .into_par_iter()
        .filter(|&i| keep(i))
        .map(|i| {
            let mut best = SupDiff { value: 0.0, argmax: None };
            let (gai, gbi) = (&ga[i * ka..(i + 1) * ka], &gb[i * kb..(i + 1) * kb]);
            for j in (i + 1)..net.len() {
                if !keep(j) {
                    continue;
                }
                let direct = net.intrinsic(i, j);
                let da = combine(direct, gai, &ha[j * ka..(j + 1) * ka]);
                let db = combine(direct, gbi, &hb[j * kb..(j + 1) * kb]);
                let diff = (da - db).abs();
                if best.argmax.is_none() || diff > best.value {
                    best = SupDiff { value: diff, argmax: Some((i, j)) };
                }
            }
            best
        })
        .reduce(
            || SupDiff { value: 0.0, argmax: None },
            |x, y| match (x.argmax, y.argmax) {
                (None, _) => y,
                (_, None) => x,
                (Some(px), Some(py)) => {
                    if y.value > x.value || (y.value == x.value && py < px) {
                        y
                    } else {
                        x
                    }
                }
            },
        );
    best
}

/// A quotient distance value; always an upper bound for the true semi-metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuotientDistanceResult {
    pub value: f64,
    pub mesh: f64,
    pub certified: bool,
}

/// Walk-graph distance between two points of the polygon.
///
/// Interior nodes never shorten a walk (two steps through an interior point
/// merge into one), so the net uses boundary samples plus the two queries.
pub fn quotient_distance(sch: &Scheme, x: Point, y: Point, delta: f64) -> Result<QuotientDistanceResult, QuotientError> {
    quotient_distance_at(sch, x, y, delta, 0, DEFAULT_NODE_BUDGET)
}

fn quotient_distance_at(
    sch: &Scheme,
    x: Point,
    y: Point,
    delta: f64,
    level: u32,
    budget: usize,
) -> Result<QuotientDistanceResult, QuotientError> {
    let opts = NetOptions {
        level,
        interior: false,
        queries: vec![x, y],
        budget,
        ..NetOptions::default()
    };
    let net = Net::build(&[sch], delta, &opts)?;
    let value = if x == y {
        0.0
    } else {
        let graph = WalkGraph::new(&net, sch)?;
        let q = net.query_nodes();
        graph.distance(q[0], q[1])
    };
    Ok(QuotientDistanceResult {
        value,
        mesh: net.mesh(),
        certified: true,
    })
}

#[derive(Debug, Clone)]
pub struct RefineOptions {
    pub delta: Option<f64>,
    pub tol: Option<f64>,
    pub budget: usize,
    pub max_levels: u32,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions {
            delta: None,
            tol: None,
            budget: DEFAULT_NODE_BUDGET,
            max_levels: 16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub result: QuotientDistanceResult,
    /// `(mesh, value)` per level, coarse to fine.
    pub history: Vec<(f64, f64)>,
}

/// Halves the mesh on nested nets until successive values differ by less than `tol`.
pub fn refine_until(sch: &Scheme, x: Point, y: Point, tol: f64) -> Result<Refinement, QuotientError> {
    refine_until_with(
        sch,
        x,
        y,
        &RefineOptions {
            tol: Some(tol),
            ..RefineOptions::default()
        },
    )
}

pub fn refine_until_with(sch: &Scheme, x: Point, y: Point, opts: &RefineOptions) -> Result<Refinement, QuotientError> {
    let polygon = sch.polygon();
    let delta = opts.delta.unwrap_or_else(|| default_delta(polygon));
    let tol = opts.tol.unwrap_or_else(|| default_tol(polygon));
    if !(tol > 0.0) {
        return Err(QuotientError::InvalidTolerance(tol));
    }
    let mut history: Vec<(f64, f64)> = Vec::new();
    for level in 0..=opts.max_levels {
        let r = match quotient_distance_at(sch, x, y, delta, level, opts.budget) {
            Ok(r) => r,
            Err(QuotientError::MeshTooFine { nodes, budget }) => {
                return Err(QuotientError::BudgetExceeded { level, nodes, budget })
            }
            Err(e) => return Err(e),
        };
        // Nested nets cannot lengthen a shortest walk; clamp rounding noise.
        let value = history.last().map_or(r.value, |&(_, prev)| r.value.min(prev));
        let done = value == 0.0 || history.last().is_some_and(|&(_, prev)| prev - value < tol);
        history.push((r.mesh, value));
        if done {
            return Ok(Refinement {
                result: QuotientDistanceResult { value, ..r },
                history,
            });
        }
    }
    Err(QuotientError::BudgetExceeded {
        level: opts.max_levels,
        nodes: 0,
        budget: opts.budget,
    })
}
