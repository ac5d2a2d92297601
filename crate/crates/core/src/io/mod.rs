//! File formats: netpbm images in, JSON documents and PPM overlays out.

mod document;
mod netpbm;
mod render;

pub use document::{
    export_trace_document, import_trace_document, AmbiguityRecord, EdgeRecord, ImageMeta, SegmentDocument,
    SegmentRecord, TraceDocument, DOCUMENT_VERSION,
};
pub use netpbm::{encode_pbm, load_binary_image, parse_netpbm, write_pbm, NetpbmError, DEFAULT_THRESHOLD};
pub use render::{render_overlay, render_segments, write_overlay, RenderStyle, Rgb};

use std::path::Path;

use crate::error::Result;

/// Writes raw bytes, reporting failures as write errors on `path`.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    netpbm::write_file(path, bytes)
}
