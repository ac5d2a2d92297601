use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::netpbm::write_file;
use crate::ambiguity::{AmbiguityId, AmbiguityRegistry};
use crate::baselines::{Method, SegmentSet};
use crate::error::{Error, Result};
use crate::grid::{BinaryImage, Point};
use crate::trace::{Edge, EdgeId, TraceResult};

pub const DOCUMENT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ImageMeta {
    pub width: u32,
    pub height: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    pub set_pixel_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_ambiguity_id: Option<AmbiguityId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_ambiguity_id: Option<AmbiguityId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AmbiguityRecord {
    pub id: AmbiguityId,
    pub points: Vec<Point>,
    pub connected_edge_ids: Vec<EdgeId>,
}

/// Serializable form of a [`TraceResult`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TraceDocument {
    pub version: u32,
    pub image: ImageMeta,
    pub edges: Vec<EdgeRecord>,
    pub ambiguities: Vec<AmbiguityRecord>,
}

impl TraceDocument {
    pub fn from_result(result: &TraceResult, source: Option<&str>) -> Self {
        let edges = result
            .edges
            .iter()
            .enumerate()
            .map(|(id, edge)| {
                let (start, end) = result.terminal_ambiguities(id).expect("id is in range");
                EdgeRecord {
                    id,
                    points: edge.points.clone(),
                    start_ambiguity_id: start,
                    end_ambiguity_id: end,
                }
            })
            .collect();
        let ambiguities = result
            .ambiguities
            .iter()
            .map(|a| AmbiguityRecord {
                id: a.id,
                points: a.points.clone(),
                connected_edge_ids: result.connected_edges(a.id),
            })
            .collect();
        Self {
            version: DOCUMENT_VERSION,
            image: ImageMeta {
                width: result.width(),
                height: result.height(),
                source: source.map(str::to_owned),
                set_pixel_count: result.image.count_set(),
            },
            edges,
            ambiguities,
        }
    }

    /// Rebuilds the trace. The working image is the union of edge and
    /// ambiguity points; derived fields are checked against it.
    pub fn to_result(&self) -> std::result::Result<TraceResult, String> {
        if self.version != DOCUMENT_VERSION {
            return Err(format!("unsupported version {}", self.version));
        }
        let (w, h) = (self.image.width, self.image.height);
        let mut image = BinaryImage::new(w, h);
        let check = |p: Point| {
            if p.x < w && p.y < h {
                Ok(p)
            } else {
                Err(format!("point {p} is outside the {w}x{h} image"))
            }
        };
        for (expected, a) in self.ambiguities.iter().enumerate() {
            if a.id != expected {
                return Err(format!("ambiguity ids must be 0..n in order, found {} at {expected}", a.id));
            }
            for &p in &a.points {
                image.set(check(p)?, true);
            }
        }
        for (expected, e) in self.edges.iter().enumerate() {
            if e.id != expected {
                return Err(format!("edge ids must be 0..n in order, found {} at {expected}", e.id));
            }
            for &p in &e.points {
                image.set(check(p)?, true);
            }
        }
        let registry = AmbiguityRegistry::from_clusters(
            w,
            h,
            self.ambiguities.iter().map(|a| a.points.clone()).collect(),
        );
        if registry.iter().any(|a| a.points.iter().any(|&p| registry.id_at(p) != Some(a.id))) {
            return Err("ambiguities overlap".into());
        }
        let edges = self.edges.iter().map(|e| Edge::new(e.points.clone())).collect();
        let result = TraceResult::from_parts(image, edges, registry);
        if result.image.count_set() != self.image.set_pixel_count {
            return Err(format!(
                "setPixelCount is {} but edges and ambiguities cover {} pixels",
                self.image.set_pixel_count,
                result.image.count_set()
            ));
        }
        if *self != TraceDocument::from_result(&result, self.image.source.as_deref()) {
            return Err("terminal ambiguity ids or connected edge ids disagree with the points".into());
        }
        Ok(result)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_json().as_bytes())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text).map_err(|reason| Error::Document {
            path: path.to_path_buf(),
            reason,
        })
    }
}

/// Writes a trace as a JSON document.
pub fn export_trace_document(result: &TraceResult, source: Option<&str>, path: &Path) -> Result<()> {
    TraceDocument::from_result(result, source).write(path)
}

/// Reads a JSON document and rebuilds the trace.
pub fn import_trace_document(path: &Path) -> Result<TraceResult> {
    TraceDocument::read(path)?.to_result().map_err(|reason| Error::Document {
        path: path.to_path_buf(),
        reason,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SegmentRecord {
    pub id: usize,
    pub points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<usize>,
}

/// Serializable form of a baseline [`SegmentSet`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SegmentDocument {
    pub version: u32,
    pub method: Method,
    pub image: ImageMeta,
    pub segments: Vec<SegmentRecord>,
}

impl SegmentDocument {
    pub fn from_set(image: &BinaryImage, set: &SegmentSet, source: Option<&str>) -> Self {
        let segments = set
            .segments
            .iter()
            .enumerate()
            .map(|(id, points)| SegmentRecord {
                id,
                points: points.clone(),
                parent: set.parents.as_ref().and_then(|p| p[id]),
            })
            .collect();
        Self {
            version: DOCUMENT_VERSION,
            method: set.method,
            image: ImageMeta {
                width: image.width(),
                height: image.height(),
                source: source.map(str::to_owned),
                set_pixel_count: image.count_set(),
            },
            segments,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("document serializes");
        text.push('\n');
        text
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_file(path, self.to_json().as_bytes())
    }
}
