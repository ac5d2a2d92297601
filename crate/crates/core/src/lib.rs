//! Edge tracing for binary edge images with explicit ambiguity modeling.
//!
//! An image is decomposed into ordered edges plus ambiguities: pixel
//! clusters at junctions, crossings and thick regions where the path of an
//! edge is undefined. Every edge that touches an ambiguity ends on exactly
//! one of its pixels, and every set pixel ends up in an edge, an ambiguity,
//! or both.
//!
//! ```
//! use edgetrace::{trace_all, BinaryImage};
//!
//! let image = BinaryImage::from_ascii(
//!     "#####
//!      ..#..
//!      ..#..",
//! );
//! let result = trace_all(&image);
//! assert_eq!(result.edges.len(), 3);
//! assert_eq!(result.ambiguities.len(), 1);
//! ```

pub mod ambiguity;
pub mod baselines;
pub mod bench;
pub mod check;
pub mod error;
pub mod grid;
pub mod io;
pub mod metrics;
pub mod pattern;
pub mod pipeline;
pub mod postprocess;
pub mod trace;

pub use ambiguity::{preprocess_ambiguities, Ambiguity, AmbiguityId, AmbiguityRegistry};
pub use baselines::{Method, SegmentSet};
pub use error::{Error, Result};
pub use grid::{BinaryImage, NeighborIndex, Point};
pub use metrics::MetricsReport;
pub use trace::{merge_point_lists, trace_all, Edge, EdgeId, EdgeIdMap, MergeCase, TraceResult};
