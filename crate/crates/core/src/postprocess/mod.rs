//! Modular postprocessing of a [`TraceResult`]: removing edges by class and
//! length, merging nearby ambiguities, and connecting edges across an
//! ambiguity by a continuity cost.
//!
//! Every operation returns a new result. The working image inside the
//! result is kept in sync, so the union of edge and ambiguity points always
//! equals its set pixels.

mod connect;
mod line;
mod merge;

use serde::{Deserialize, Serialize};

pub use connect::{
    connect_all_ambiguities, connect_edges_at_ambiguity, endpoint_angle, plan_connections, Connection,
    ConnectionCostParams, EdgeEnd, Terminal,
};
pub use line::bresenham_line;
pub use merge::{connector_length, merge_nearby_ambiguities};

use crate::error::Result;
use crate::trace::{trace_all, Edge, EdgeId, TraceResult};

/// How an edge attaches to ambiguities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    /// No ambiguity at either end.
    Free,
    /// An ambiguity at exactly one end.
    Dangling,
    /// Ambiguities at both ends (possibly the same one).
    Bridged,
}

/// Classifies an edge by whether its first and last points lie in
/// ambiguities.
pub fn classify_edge(result: &TraceResult, id: EdgeId) -> Result<EdgeClass> {
    let (start, end) = result.terminal_ambiguities(id)?;
    Ok(match (start.is_some(), end.is_some()) {
        (true, true) => EdgeClass::Bridged,
        (false, false) => EdgeClass::Free,
        _ => EdgeClass::Dangling,
    })
}

/// Selects edges for removal. All present conditions must hold.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeFilter {
    pub class: Option<EdgeClass>,
    /// Matches edges with fewer points than this.
    pub shorter_than: Option<usize>,
    /// Matches edges with more points than this.
    pub longer_than: Option<usize>,
}

impl EdgeFilter {
    pub fn class(class: EdgeClass) -> Self {
        Self {
            class: Some(class),
            ..Self::default()
        }
    }

    pub fn shorter_than(mut self, len: usize) -> Self {
        self.shorter_than = Some(len);
        self
    }

    pub fn longer_than(mut self, len: usize) -> Self {
        self.longer_than = Some(len);
        self
    }

    pub fn matches(&self, result: &TraceResult, id: EdgeId) -> Result<bool> {
        let len = result.edge(id)?.len();
        if self.shorter_than.is_some_and(|max| len >= max) || self.longer_than.is_some_and(|min| len <= min) {
            return Ok(false);
        }
        match self.class {
            Some(class) => Ok(classify_edge(result, id)? == class),
            None => Ok(true),
        }
    }
}

/// Removes every edge matching `filter`.
///
/// Ambiguities are left untouched. Pixels of removed edges that are neither
/// ambiguity points nor part of a remaining edge are cleared from the
/// working image; remaining edges are renumbered densely in their original
/// order.
pub fn remove_edges_where(result: &TraceResult, filter: &EdgeFilter) -> Result<TraceResult> {
    let mut keep = Vec::with_capacity(result.edges.len());
    for id in 0..result.edges.len() {
        keep.push(!filter.matches(result, id)?);
    }
    let mut image = result.image.clone();
    for (edge, _) in result.edges.iter().zip(&keep).filter(|(_, &k)| !k) {
        for &p in &edge.points {
            let still_used = result.ambiguities.contains(p)
                || result.edge_ids.ids(p).iter().any(|&other| keep[other]);
            if !still_used {
                image.set(p, false);
            }
        }
    }
    let edges: Vec<Edge> = result
        .edges
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(e, _)| e.clone())
        .collect();
    Ok(TraceResult::from_parts(image, edges, result.ambiguities.clone()))
}

/// How many remove-and-retrace rounds to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounds {
    Count(usize),
    UntilFixpoint,
}

/// Repeats {remove matching edges; re-trace the working image}.
///
/// Stops early once a round removes nothing. Returns the final result and
/// the number of rounds that removed at least one edge.
pub fn remove_iterative(result: &TraceResult, filter: &EdgeFilter, rounds: Rounds) -> Result<(TraceResult, usize)> {
    let mut current = result.clone();
    let mut effective = 0;
    loop {
        if let Rounds::Count(n) = rounds {
            if effective >= n {
                break;
            }
        }
        let pruned = remove_edges_where(&current, filter)?;
        if pruned.edges.len() == current.edges.len() {
            break;
        }
        current = trace_all(&pruned.image);
        effective += 1;
    }
    Ok((current, effective))
}

/// Removes dangling edges shorter than `max_len` points, re-tracing after
/// each round since removal can dissolve ambiguities and turn bridged
/// edges into dangling ones.
pub fn remove_dangling_iterative(result: &TraceResult, max_len: usize, rounds: Rounds) -> Result<(TraceResult, usize)> {
    remove_iterative(result, &EdgeFilter::class(EdgeClass::Dangling).shorter_than(max_len), rounds)
}

/// The edge with its point order reversed.
pub fn reverse_edge(edge: &Edge) -> Edge {
    edge.reversed()
}

/// Reverses one edge of a result in place of the original.
pub fn reverse_edge_in(result: &TraceResult, id: EdgeId) -> Result<TraceResult> {
    let reversed = reverse_edge(result.edge(id)?);
    let mut out = result.clone();
    out.edges[id] = reversed;
    Ok(out)
}
