//! Cone angles, curvature and Euler characteristic of finite quotients.
//!
//! A full finite scheme glues the polygon into a closed surface with one
//! face, one edge per pairing and one vertex per class of cut points. The
//! total angle at a class is the sum of the interior angles of the polygon at
//! its members; interior pairs always get two straight angles and are flat.

use std::f64::consts::PI;

use serde::Serialize;

use crate::approx::{ApproxError, InfiniteScheme};
use crate::scheme::Scheme;

/// Curvatures within this of zero count as flat.
pub const FLAT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConePoint {
    pub class_id: usize,
    pub members: Vec<f64>,
    pub total_angle: f64,
    pub curvature: f64,
}

impl ConePoint {
    pub fn is_flat(&self) -> bool {
        self.curvature.abs() <= FLAT_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub cone_points: Vec<ConePoint>,
    pub euler_char: i64,
    pub gauss_bonnet_residual: f64,
    pub total_abs_curvature: f64,
}

/// Every class of cut points with its total angle, flat ones included.
pub fn class_angles(sch: &Scheme) -> Vec<ConePoint> {
    let table = sch.boundary_classes();
    let polygon = sch.polygon();
    (0..table.class_count())
        .map(|c| {
            let members = table.members(c);
            let total_angle: f64 = members.iter().map(|&s| polygon.interior_angle_at(s)).sum();
            ConePoint {
                class_id: c,
                members,
                total_angle,
                curvature: 2.0 * PI - total_angle,
            }
        })
        .collect()
}

/// Non-flat classes.
pub fn cone_points(sch: &Scheme) -> Vec<ConePoint> {
    class_angles(sch).into_iter().filter(|c| !c.is_flat()).collect()
}

/// `#classes - #pairings + 1`.
pub fn euler_characteristic(sch: &Scheme) -> i64 {
    sch.boundary_classes().class_count() as i64 - sch.pairings().len() as i64 + 1
}

/// `Σκ - 2πχ`.
pub fn gauss_bonnet_residual(sch: &Scheme) -> f64 {
    let total: f64 = class_angles(sch).iter().map(|c| c.curvature).sum();
    total - 2.0 * PI * euler_characteristic(sch) as f64
}

pub fn total_abs_curvature(sch: &Scheme) -> f64 {
    class_angles(sch)
        .iter()
        .filter(|c| !c.is_flat())
        .map(|c| c.curvature.abs())
        .sum()
}

pub fn curvature_report(sch: &Scheme, include_flat: bool) -> CurvatureReport {
    let classes = class_angles(sch);
    let total_abs_curvature = classes.iter().filter(|c| !c.is_flat()).map(|c| c.curvature.abs()).sum();
    CurvatureReport {
        cone_points: classes.into_iter().filter(|c| include_flat || !c.is_flat()).collect(),
        euler_char: euler_characteristic(sch),
        gauss_bonnet_residual: gauss_bonnet_residual(sch),
        total_abs_curvature,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndicatorRow {
    pub n: u32,
    /// Cone points with `κ >= π/2` meeting `γ_1` of the first pattern.
    pub near_count: usize,
    /// Largest total angle among classes meeting `γ_1`.
    pub max_angle: f64,
    pub total_abs_curv: f64,
}

pub fn singularity_indicators(inf: &InfiniteScheme, n_max: u32) -> Result<Vec<IndicatorRow>, ApproxError> {
    let gamma1 = inf.gamma_n(1);
    (1..=n_max)
        .map(|n| {
            let sn = inf.truncate(n)?;
            let polygon = sn.polygon();
            let classes = class_angles(&sn);
            let near: Vec<&ConePoint> = classes
                .iter()
                .filter(|c| c.members.iter().any(|&s| polygon.interval_contains(&gamma1, s)))
                .collect();
            Ok(IndicatorRow {
                n,
                near_count: near.iter().filter(|c| c.curvature >= 0.5 * PI - FLAT_TOL).count(),
                max_angle: near.iter().map(|c| c.total_angle).fold(0.0, f64::max),
                total_abs_curv: total_abs_curvature(&sn),
            })
        })
        .collect()
}
