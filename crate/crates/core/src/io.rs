//! JSON file formats for schemes and patterns.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{ApproxError, InfiniteScheme, PatternKind, PatternSpec};
use crate::geometry::{BoundaryInterval, GeometryError, Point, Polygon};
use crate::scheme::{Scheme, SchemeError};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("ReadError: {path}: {message}")]
    Read { path: String, message: String },
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("UnsupportedVersion: {0}")]
    UnsupportedVersion(u32),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Approx(#[from] ApproxError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalJson {
    pub start: f64,
    pub len: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingJson {
    pub a: IntervalJson,
    pub b: IntervalJson,
}

impl PairingJson {
    fn intervals(&self) -> (BoundaryInterval, BoundaryInterval) {
        (
            BoundaryInterval::new(self.a.start, self.a.len),
            BoundaryInterval::new(self.b.start, self.b.len),
        )
    }

    fn from_intervals(a: BoundaryInterval, b: BoundaryInterval) -> Self {
        PairingJson {
            a: IntervalJson { start: a.start, len: a.len },
            b: IntervalJson { start: b.start, len: b.len },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub polygon: Vec<[f64; 2]>,
    pub pairings: Vec<PairingJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternJson {
    pub kind: PatternKind,
    pub anchor: f64,
    #[serde(default = "half")]
    pub ratio: f64,
    pub first_len: f64,
}

fn half() -> f64 {
    0.5
}

/// A pattern file holds either one pattern inline or a `patterns` list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub version: Option<u32>,
    pub polygon: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PatternKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_len: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patterns: Option<Vec<PatternJson>>,
    #[serde(default)]
    pub base_pairings: Vec<PairingJson>,
}

/// Either kind of input file.
#[derive(Debug, Clone)]
pub enum Document {
    Scheme(SchemeFile),
    Pattern(PatternFile),
}

fn check_version(v: Option<u32>) -> Result<(), IoError> {
    match v {
        Some(v) if v != FORMAT_VERSION => Err(IoError::UnsupportedVersion(v)),
        _ => Ok(()),
    }
}

fn polygon_from(points: &[[f64; 2]]) -> Result<Polygon, IoError> {
    Ok(Polygon::new(points.iter().map(|&[x, y]| Point::new(x, y)).collect())?)
}

fn polygon_to(polygon: &Polygon) -> Vec<[f64; 2]> {
    polygon.vertices().iter().map(|p| [p.x, p.y]).collect()
}

impl SchemeFile {
    pub fn polygon(&self) -> Result<Polygon, IoError> {
        check_version(self.version)?;
        polygon_from(&self.polygon)
    }

    pub fn intervals(&self) -> Vec<(BoundaryInterval, BoundaryInterval)> {
        self.pairings.iter().map(PairingJson::intervals).collect()
    }

    /// A validated full scheme.
    pub fn to_scheme(&self) -> Result<Scheme, IoError> {
        Ok(Scheme::new(self.polygon()?, &self.intervals())?)
    }

    /// A validated scheme that may leave part of the boundary unpaired.
    pub fn to_partial_scheme(&self) -> Result<Scheme, IoError> {
        Ok(Scheme::new_partial(self.polygon()?, &self.intervals())?)
    }

    pub fn from_scheme(sch: &Scheme) -> Self {
        SchemeFile {
            version: Some(FORMAT_VERSION),
            polygon: polygon_to(sch.polygon()),
            pairings: sch.pairings().iter().map(|p| PairingJson::from_intervals(p.a(), p.b())).collect(),
        }
    }
}

impl PatternFile {
    pub fn pattern_specs(&self) -> Result<Vec<PatternSpec>, IoError> {
        let inline = [self.kind.is_some(), self.anchor.is_some(), self.first_len.is_some()];
        let spec = |p: &PatternJson| PatternSpec {
            kind: p.kind,
            anchor: p.anchor,
            ratio: p.ratio,
            first_len: p.first_len,
        };
        match (&self.patterns, inline) {
            (Some(list), [false, false, false]) if self.ratio.is_none() => Ok(list.iter().map(spec).collect()),
            (None, [true, true, true]) => Ok(vec![PatternSpec {
                kind: self.kind.unwrap(),
                anchor: self.anchor.unwrap(),
                ratio: self.ratio.unwrap_or(0.5),
                first_len: self.first_len.unwrap(),
            }]),
            (Some(_), _) => Err(IoError::Parse("use either inline pattern fields or a patterns list, not both".into())),
            (None, _) => Err(IoError::Parse("a pattern needs kind, anchor and first_len".into())),
        }
    }

    pub fn to_infinite_scheme(&self) -> Result<InfiniteScheme, IoError> {
        check_version(self.version)?;
        let polygon = polygon_from(&self.polygon)?;
        let base: Vec<_> = self.base_pairings.iter().map(PairingJson::intervals).collect();
        Ok(InfiniteScheme::new(polygon, &base, self.pattern_specs()?)?)
    }

    pub fn from_infinite_scheme(inf: &InfiniteScheme) -> Self {
        let patterns = inf.patterns();
        let mut file = PatternFile {
            version: Some(FORMAT_VERSION),
            polygon: polygon_to(inf.polygon()),
            kind: None,
            anchor: None,
            ratio: None,
            first_len: None,
            patterns: None,
            base_pairings: inf.base_pairings().iter().map(|&(a, b)| PairingJson::from_intervals(a, b)).collect(),
        };
        if let [p] = patterns {
            file.kind = Some(p.kind);
            file.anchor = Some(p.anchor);
            file.ratio = Some(p.ratio);
            file.first_len = Some(p.first_len);
        } else {
            file.patterns = Some(
                patterns
                    .iter()
                    .map(|p| PatternJson {
                        kind: p.kind,
                        anchor: p.anchor,
                        ratio: p.ratio,
                        first_len: p.first_len,
                    })
                    .collect(),
            );
        }
        file
    }
}

fn parse_err(e: serde_json::Error) -> IoError {
    IoError::Parse(e.to_string())
}

/// Parses a scheme or pattern document; pattern files are recognized by
/// their pattern fields.
pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(parse_err)?;
    let is_pattern = value
        .as_object()
        .is_some_and(|o| o.contains_key("kind") || o.contains_key("patterns") || o.contains_key("base_pairings"));
    if is_pattern {
        Ok(Document::Pattern(serde_json::from_value(value).map_err(parse_err)?))
    } else {
        Ok(Document::Scheme(serde_json::from_value(value).map_err(parse_err)?))
    }
}

pub fn read_document(path: &Path) -> Result<Document, IoError> {
    let text = std::fs::read_to_string(path).map_err(|e| IoError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_document(&text)
}

pub fn parse_scheme(text: &str) -> Result<Scheme, IoError> {
    let file: SchemeFile = serde_json::from_str(text).map_err(parse_err)?;
    file.to_scheme()
}

pub fn parse_pattern(text: &str) -> Result<InfiniteScheme, IoError> {
    let file: PatternFile = serde_json::from_str(text).map_err(parse_err)?;
    file.to_infinite_scheme()
}

pub fn scheme_to_json(sch: &Scheme) -> String {
    serde_json::to_string_pretty(&SchemeFile::from_scheme(sch)).expect("scheme serializes")
}

pub fn pattern_to_json(inf: &InfiniteScheme) -> String {
    serde_json::to_string_pretty(&PatternFile::from_infinite_scheme(inf)).expect("pattern serializes")
}
