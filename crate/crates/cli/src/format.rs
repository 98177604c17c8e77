//! Diagram file format: three components as arrays of exact rational
//! coordinate pairs, plus (for links) one over/under record per crossing,
//! keyed by the segments that meet there. Rationals are serialized as
//! strings ("p/q" or a plain integer) so files round-trip bit-exactly.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use trilink::doodle::{Doodle, DoodleError};
use trilink::geometry::{GeoError, Point2, Polyline, Rat};
use trilink::link::{
    link_from_over_map, Branch, CrossingKey, LinkDiagram, LinkError, OverMapError,
};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format version {0}, expected {FORMAT_VERSION}")]
    Version(u32),
    #[error("component {component}, vertex {vertex}: bad rational '{text}'")]
    BadRational {
        component: usize,
        vertex: usize,
        text: String,
    },
    #[error("expected 3 components, found {0}")]
    ComponentCount(usize),
    #[error("component {component}: {source}")]
    BadComponent {
        component: usize,
        source: GeoError,
    },
    #[error("this file has no crossing records; it describes a doodle, not a link")]
    MissingCrossings,
    #[error("duplicate crossing key ({0}, {1}, {2}, {3})")]
    DuplicateKey(usize, usize, usize, usize),
    #[error(transparent)]
    OverMap(#[from] OverMapError),
    #[error(transparent)]
    Doodle(#[from] DoodleError),
    #[error(transparent)]
    Link(#[from] LinkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverTag {
    A,
    B,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingRecord {
    /// (comp_a, seg_a, comp_b, seg_b).
    pub key: [usize; 4],
    pub over: OverTag,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramFile {
    pub version: u32,
    /// One array of [x, y] rational strings per component.
    pub components: Vec<Vec<[String; 2]>>,
    /// Present for link files; omitted entirely for doodle files.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossings: Option<Vec<CrossingRecord>>,
}

pub fn rat_to_string(r: &Rat) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_string(s: &str) -> Option<Rat> {
    match s.split_once('/') {
        None => Some(Rat::from_integer(BigInt::from_str(s.trim()).ok()?)),
        Some((n, d)) => {
            let numer = BigInt::from_str(n.trim()).ok()?;
            let denom = BigInt::from_str(d.trim()).ok()?;
            if denom == BigInt::from(0) {
                None
            } else {
                Some(Rat::new(numer, denom))
            }
        }
    }
}

pub fn read_file(path: &Path) -> Result<DiagramFile, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|source| FormatError::Read {
        path: path.display().to_string(),
        source,
    })?;
    let file: DiagramFile = serde_json::from_str(&text)?;
    if file.version != FORMAT_VERSION {
        return Err(FormatError::Version(file.version));
    }
    Ok(file)
}

fn parse_components(file: &DiagramFile) -> Result<Vec<Polyline>, FormatError> {
    if file.components.len() != 3 {
        return Err(FormatError::ComponentCount(file.components.len()));
    }
    let mut out = Vec::with_capacity(3);
    for (ci, comp) in file.components.iter().enumerate() {
        let mut vertices = Vec::with_capacity(comp.len());
        for (vi, [x, y]) in comp.iter().enumerate() {
            let parse = |text: &String| {
                rat_from_string(text).ok_or_else(|| FormatError::BadRational {
                    component: ci,
                    vertex: vi,
                    text: text.clone(),
                })
            };
            vertices.push(Point2::new(parse(x)?, parse(y)?));
        }
        out.push(Polyline::new(vertices).map_err(|source| FormatError::BadComponent {
            component: ci,
            source,
        })?);
    }
    Ok(out)
}

/// Loads a doodle: the components of any diagram file, validated for
/// general position. Crossing records, if present, are ignored here.
pub fn load_doodle(path: &Path) -> Result<Doodle, FormatError> {
    let file = read_file(path)?;
    let components = parse_components(&file)?;
    Ok(Doodle::new(components)?)
}

/// Loads a link: requires crossing records exactly covering the detected
/// crossings.
pub fn load_link(path: &Path) -> Result<LinkDiagram, FormatError> {
    let file = read_file(path)?;
    let components = parse_components(&file)?;
    let records = file.crossings.ok_or(FormatError::MissingCrossings)?;
    let mut map: BTreeMap<CrossingKey, Branch> = BTreeMap::new();
    for r in &records {
        let key = CrossingKey {
            comp_a: r.key[0],
            seg_a: r.key[1],
            comp_b: r.key[2],
            seg_b: r.key[3],
        };
        let branch = match r.over {
            OverTag::A => Branch::A,
            OverTag::B => Branch::B,
        };
        if map.insert(key, branch).is_some() {
            return Err(FormatError::DuplicateKey(
                key.comp_a, key.seg_a, key.comp_b, key.seg_b,
            ));
        }
    }
    Ok(link_from_over_map(components, &map)?)
}

fn components_to_json(components: &[Polyline]) -> Vec<Vec<[String; 2]>> {
    components
        .iter()
        .map(|c| {
            c.vertices()
                .iter()
                .map(|p| [rat_to_string(&p.x), rat_to_string(&p.y)])
                .collect()
        })
        .collect()
}

pub fn doodle_to_file(d: &Doodle) -> DiagramFile {
    DiagramFile {
        version: FORMAT_VERSION,
        components: components_to_json(d.components()),
        crossings: None,
    }
}

pub fn link_to_file(l: &LinkDiagram) -> DiagramFile {
    let mut records: Vec<CrossingRecord> = l
        .crossings()
        .iter()
        .map(|c| {
            let key = c.key();
            CrossingRecord {
                key: [key.comp_a, key.seg_a, key.comp_b, key.seg_b],
                over: match c.over {
                    Branch::A => OverTag::A,
                    Branch::B => OverTag::B,
                },
            }
        })
        .collect();
    records.sort_by_key(|r| r.key);
    DiagramFile {
        version: FORMAT_VERSION,
        components: components_to_json(l.components()),
        crossings: Some(records),
    }
}

/// Canonical serialization: pretty JSON with sorted crossing records and a
/// trailing newline, so load-then-save is byte-identical.
pub fn save(path: &Path, file: &DiagramFile) -> Result<(), FormatError> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|source| FormatError::Write {
        path: path.display().to_string(),
        source,
    })
}
