//! Infinite pattern schemes, their finite truncations, and fold replacement.
//!
//! A pattern places infinitely many pairings in blocks of geometrically
//! decreasing length that accumulate at an anchor point `p`. With first block
//! length `L0` and ratio `r`, the tail beyond block `k` on one side has length
//! `T_k = L0·r^k / (1 - r)` and block `k` covers `[p + T_k, p + T_{k-1}]`
//! (mirrored for the side before `p`). The level-`n` truncation keeps blocks
//! `1..=n` and fills the remaining tail arc `γ_n` with folds.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis;
use crate::geometry::{BoundaryInterval, Polygon};
use crate::gh::{self, DiffOptions, GHBound, GhError};
use crate::quotient::{QuotientError, DEFAULT_NODE_BUDGET};
use crate::scheme::{Pairing, Scheme, SchemeError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("PatternInvalid: {0}")]
    PatternInvalid(String),
    #[error("ArcNotPlain: arc {0} is not plain")]
    ArcNotPlain(BoundaryInterval),
    #[error("ArcCrossesTwoVertices: arc {0} contains more than one vertex")]
    ArcCrossesTwoVertices(BoundaryInterval),
    #[error("InvalidLevel: level must be at least {min}, got {got}")]
    InvalidLevel { min: u32, got: u32 },
    #[error("InvalidTarget: target must be positive, got {0}")]
    InvalidTarget(f64),
    #[error("BudgetExceeded: net needs {nodes} nodes, budget is {budget}")]
    BudgetExceeded { nodes: usize, budget: usize },
    #[error(transparent)]
    Gh(GhError),
}

impl From<GhError> for ApproxError {
    fn from(e: GhError) -> Self {
        match e {
            GhError::Quotient(QuotientError::MeshTooFine { nodes, budget })
            | GhError::Quotient(QuotientError::BudgetExceeded { nodes, budget, .. }) => {
                ApproxError::BudgetExceeded { nodes, budget }
            }
            other => ApproxError::Gh(other),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    /// Folds on both sides of the anchor.
    Canon1,
    /// Folds on the side after the anchor only.
    Canon2,
    /// Pairs spanning the anchor, nested, separated by folds before the anchor.
    Singular1,
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PatternKind::Canon1 => "canon1",
            PatternKind::Canon2 => "canon2",
            PatternKind::Singular1 => "singular1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternSpec {
    pub kind: PatternKind,
    pub anchor: f64,
    pub ratio: f64,
    pub first_len: f64,
}

type RawPairing = (BoundaryInterval, BoundaryInterval);

fn iv(start: f64, len: f64) -> BoundaryInterval {
    BoundaryInterval::new(start, len)
}

/// A fold covering `[start, start + len]`, folded at its midpoint.
fn midpoint_fold(start: f64, len: f64) -> RawPairing {
    (iv(start, 0.5 * len), iv(start + 0.5 * len, 0.5 * len))
}

impl PatternSpec {
    /// Tail length `T_k` beyond block `k` on one side.
    pub fn tail(&self, k: u32) -> f64 {
        self.first_len * self.ratio.powi(k as i32) / (1.0 - self.ratio)
    }

    /// Length of block `k >= 1`.
    pub fn block_len(&self, k: u32) -> f64 {
        self.first_len * self.ratio.powi(k as i32 - 1)
    }

    /// Arc length used before and after the anchor.
    pub fn side_budget(&self) -> (f64, f64) {
        let t0 = self.tail(0);
        match self.kind {
            PatternKind::Canon1 => (t0, t0),
            PatternKind::Canon2 => (0.0, t0),
            PatternKind::Singular1 => (t0, 0.5 * t0),
        }
    }

    /// The whole arc occupied by the pattern.
    pub fn support(&self) -> BoundaryInterval {
        let (before, after) = self.side_budget();
        iv(self.anchor - before, before + after)
    }

    /// The tail arc `γ_n` left after blocks `1..=n`.
    pub fn gamma(&self, n: u32) -> BoundaryInterval {
        let t = self.tail(n);
        match self.kind {
            PatternKind::Canon1 => iv(self.anchor - t, 2.0 * t),
            PatternKind::Canon2 => iv(self.anchor, t),
            PatternKind::Singular1 => iv(self.anchor - t, 1.5 * t),
        }
    }

    /// Pairings of block `k`.
    pub fn block(&self, k: u32) -> Vec<RawPairing> {
        let p = self.anchor;
        let (t_prev, t_k, len) = (self.tail(k - 1), self.tail(k), self.block_len(k));
        match self.kind {
            PatternKind::Canon1 => vec![midpoint_fold(p - t_prev, len), midpoint_fold(p + t_k, len)],
            PatternKind::Canon2 => vec![midpoint_fold(p + t_k, len)],
            PatternKind::Singular1 => {
                let half = 0.5 * len;
                vec![
                    (iv(p - t_prev, half), iv(p + 0.5 * t_k, half)),
                    midpoint_fold(p - t_prev + half, half),
                ]
            }
        }
    }

    fn validate(&self) -> Result<(), ApproxError> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(ApproxError::PatternInvalid(format!("ratio must lie in (0, 1), got {}", self.ratio)));
        }
        if !(self.first_len > 0.0 && self.first_len.is_finite()) {
            return Err(ApproxError::PatternInvalid(format!(
                "first block length must be positive, got {}",
                self.first_len
            )));
        }
        if !self.anchor.is_finite() {
            return Err(ApproxError::PatternInvalid(format!("anchor must be finite, got {}", self.anchor)));
        }
        Ok(())
    }
}

/// Folds covering a plain arc: one fold if the arc lies on one side, one
/// fold per sub-arc if it turns at a single vertex.
pub fn folds_on_arc(polygon: &Polygon, arc: &BoundaryInterval) -> Result<Vec<RawPairing>, ApproxError> {
    if arc.len <= polygon.tol() {
        return Ok(Vec::new());
    }
    match polygon.vertices_in_open(arc)[..] {
        [] => Ok(vec![midpoint_fold(arc.start, arc.len)]),
        [v] => {
            let a = polygon.ccw_offset(arc.start, polygon.vertex_coords()[v]);
            Ok(vec![midpoint_fold(arc.start, a), midpoint_fold(arc.start + a, arc.len - a)])
        }
        _ => Err(ApproxError::ArcCrossesTwoVertices(*arc)),
    }
}

/// Fold replacement for an arc that is plain in `sch`.
pub fn replace_with_folds(sch: &Scheme, arc: &BoundaryInterval) -> Result<Vec<Pairing>, ApproxError> {
    if !sch.is_plain_arc(arc) {
        return Err(ApproxError::ArcNotPlain(*arc));
    }
    folds_on_arc(sch.polygon(), arc)?
        .into_iter()
        .map(|(a, b)| Pairing::new(sch.polygon(), a, b).map_err(|e| ApproxError::PatternInvalid(e.to_string())))
        .collect()
}

/// A finite base collection plus one or more patterns.
#[derive(Debug, Clone)]
pub struct InfiniteScheme {
    polygon: Polygon,
    base: Vec<RawPairing>,
    patterns: Vec<PatternSpec>,
}

impl InfiniteScheme {
    pub fn new(polygon: Polygon, base: &[RawPairing], patterns: Vec<PatternSpec>) -> Result<Self, ApproxError> {
        if patterns.is_empty() {
            return Err(ApproxError::PatternInvalid("at least one pattern is required".into()));
        }
        for p in &patterns {
            p.validate()?;
        }
        let inf = InfiniteScheme {
            polygon,
            base: base.to_vec(),
            patterns,
        };
        let s1 = inf.truncate(1)?;
        if !s1.is_plain() {
            return Err(ApproxError::PatternInvalid("level-1 truncation is not plain".into()));
        }
        Ok(inf)
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn base_pairings(&self) -> &[RawPairing] {
        &self.base
    }

    pub fn patterns(&self) -> &[PatternSpec] {
        &self.patterns
    }

    /// `γ_n` of the first pattern.
    pub fn gamma_n(&self, n: u32) -> BoundaryInterval {
        self.patterns[0].gamma(n)
    }

    /// All patterns at level `n`.
    pub fn truncate(&self, n: u32) -> Result<Scheme, ApproxError> {
        self.truncate_levels(&vec![n; self.patterns.len()])
    }

    /// Pattern `i` truncated at `levels[i]`.
    pub fn truncate_levels(&self, levels: &[u32]) -> Result<Scheme, ApproxError> {
        assert_eq!(levels.len(), self.patterns.len(), "one level per pattern");
        let mut raw = self.base.clone();
        for (pat, &n) in self.patterns.iter().zip(levels) {
            if n < 1 {
                return Err(ApproxError::InvalidLevel { min: 1, got: n });
            }
            for k in 1..=n {
                raw.extend(pat.block(k));
            }
            raw.extend(folds_on_arc(&self.polygon, &pat.gamma(n)).map_err(|e| ApproxError::PatternInvalid(e.to_string()))?);
        }
        Scheme::new(self.polygon.clone(), &raw).map_err(|e: SchemeError| ApproxError::PatternInvalid(e.to_string()))
    }
}

/// One row of a convergence experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: u32,
    pub gamma_len: f64,
    pub gamma_diam: f64,
    pub sup_diff: f64,
    /// Net radius used in the lemma: mesh plus the collapse diameter.
    pub r: f64,
    pub gh_bound: f64,
    pub theorem_bound: f64,
    pub total_abs_curv: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentOptions {
    pub delta: f64,
    pub delta0: f64,
    pub budget: usize,
}

impl ExperimentOptions {
    pub fn new(delta: f64) -> Self {
        ExperimentOptions {
            delta,
            delta0: gh::DEFAULT_DELTA0,
            budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Compares each truncation `S_n` of the first pattern with the reference `S_{n_max}`.
///
/// The metric difference is taken over net nodes outside the open arc
/// `γ_n`. Those nodes, together with the endpoints of `γ_n`, form a net of
/// radius `δ + diam γ_n` in both quotients, which is the radius fed to the
/// lemma bound.
pub fn approximation_sequence(inf: &InfiniteScheme, n_max: u32, opts: &ExperimentOptions) -> Result<Vec<ExperimentRow>, ApproxError> {
    if n_max < 2 {
        return Err(ApproxError::InvalidLevel { min: 2, got: n_max });
    }
    let levels = |n: u32| -> Vec<u32> {
        let mut l = vec![n_max; inf.patterns.len()];
        l[0] = n;
        l
    };
    let reference = inf.truncate_levels(&levels(n_max))?;
    (1..=n_max)
        .map(|n| {
            let sn = inf.truncate_levels(&levels(n))?;
            let gamma = inf.gamma_n(n);
            let gamma_diam = inf.polygon.arc_diameter(&gamma);
            let diff = gh::sup_metric_diff_with(
                &sn,
                &reference,
                opts.delta,
                &DiffOptions {
                    exclude: Some(gamma),
                    interior: true,
                    budget: opts.budget,
                },
            )?;
            let r = diff.mesh + gamma_diam;
            let bound = gh::gh_bound_lemma(r, diff.sup_diff);
            Ok(ExperimentRow {
                n,
                gamma_len: gamma.len,
                gamma_diam,
                sup_diff: diff.sup_diff,
                r,
                gh_bound: bound.bound,
                theorem_bound: gh::theorem_bound(gamma_diam, opts.delta0),
                total_abs_curv: analysis::total_abs_curvature(&sn),
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub anchor: f64,
    pub n: u32,
    pub gamma_diam: f64,
    pub theorem_bound: f64,
    /// Lemma bound between consecutive stages, when requested.
    pub empirical: Option<GHBound>,
}

#[derive(Debug, Clone)]
pub struct SimplifyResult {
    pub stages: Vec<Stage>,
    pub levels: Vec<u32>,
    pub scheme: Scheme,
    pub total_bound: f64,
}

/// Largest level tried when searching for a stage level.
pub const MAX_STAGE_LEVEL: u32 = 60;

/// Replaces the patterns one at a time, choosing for pattern `i` the smallest
/// level whose collapse bound is below `ε/m`.
///
/// With `empirical` set, each stage is also compared with the previous one on
/// a shared net; patterns not yet replaced are evaluated at a reference level
/// two above the largest chosen level.
pub fn repeat_simplify(inf: &InfiniteScheme, eps: f64, opts: &ExperimentOptions, empirical: bool) -> Result<SimplifyResult, ApproxError> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(ApproxError::InvalidTarget(eps));
    }
    let m = inf.patterns.len();
    let target = eps / m as f64;
    let mut stages = Vec::with_capacity(m);
    for pat in &inf.patterns {
        let (n, diam) = (1..=MAX_STAGE_LEVEL)
            .map(|n| (n, inf.polygon.arc_diameter(&pat.gamma(n))))
            .find(|&(_, d)| gh::theorem_bound(d, opts.delta0) < target)
            .ok_or(ApproxError::InvalidTarget(eps))?;
        stages.push(Stage {
            anchor: pat.anchor,
            n,
            gamma_diam: diam,
            theorem_bound: gh::theorem_bound(diam, opts.delta0),
            empirical: None,
        });
    }
    let levels: Vec<u32> = stages.iter().map(|s| s.n).collect();
    if empirical {
        let reference = levels.iter().copied().max().unwrap_or(1) + 2;
        let mut current = vec![reference; m];
        let mut prev = inf.truncate_levels(&current)?;
        for (i, stage) in stages.iter_mut().enumerate() {
            current[i] = stage.n;
            let next = inf.truncate_levels(&current)?;
            let gamma = inf.patterns[i].gamma(stage.n);
            let diff = gh::sup_metric_diff_with(
                &prev,
                &next,
                opts.delta,
                &DiffOptions {
                    exclude: Some(gamma),
                    interior: true,
                    budget: opts.budget,
                },
            )?;
            stage.empirical =
                Some(gh::gh_bound_lemma(diff.mesh + stage.gamma_diam, diff.sup_diff).with_collapse(stage.gamma_diam, opts.delta0));
            prev = next;
        }
    }
    let scheme = inf.truncate_levels(&levels)?;
    let total_bound = stages.iter().map(|s| s.theorem_bound).sum();
    Ok(SimplifyResult {
        stages,
        levels,
        scheme,
        total_bound,
    })
}
