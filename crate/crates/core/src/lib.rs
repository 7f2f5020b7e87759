//! Metric quotients of Euclidean polygons under paper-folding schemes.
//!
//! A scheme glues boundary segments of a polygon in pairs. The crate builds
//! the quotient semi-metric on nets, bounds Gromov–Hausdorff distances
//! between quotients, truncates infinite pattern schemes and reports cone
//! curvature of the resulting surfaces.

pub mod analysis;
pub mod approx;
pub mod geometry;
pub mod gh;
pub mod io;
pub mod presets;
pub mod quotient;
pub mod random;
pub mod scheme;
mod union_find;

pub use approx::{ApproxError, InfiniteScheme, PatternKind, PatternSpec};
pub use geometry::{validate_polygon, BoundaryInterval, GeometryError, Location, Point, Polygon};
pub use gh::{CollapseWitness, Correspondence, GHBound, GhError};
pub use quotient::{DistanceMatrix, Net, QuotientDistanceResult, QuotientError, WalkGraph};
pub use scheme::{pairings_linked, validate_scheme, ClassTable, Pairing, Scheme, SchemeError};
