//! Second pass: trace all remaining edge pixels as ordered edges and attach
//! them to neighboring ambiguities through a single connection pixel.
//!
//! Tracing walks iteratively rather than recursively, so the maximum edge
//! length is bounded by memory only. The result matches the recursive
//! two-direction formulation: a trace that starts in the middle of an edge
//! runs in both directions and the two halves are merged at the start point.

use crate::ambiguity::{preprocess_ambiguities, AmbiguityId, AmbiguityRegistry};
use crate::error::{Error, Result};
use crate::grid::{BinaryImage, Point};

pub type EdgeId = usize;

/// An ordered sequence of 8-connected points. Its position in
/// [`TraceResult::edges`] is its id.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Edge {
    pub points: Vec<Point>,
}

impl Edge {
    pub fn new(points: Vec<Point>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn first(&self) -> Option<Point> {
        self.points.first().copied()
    }

    pub fn last(&self) -> Option<Point> {
        self.points.last().copied()
    }

    /// The same points in reverse order.
    pub fn reversed(&self) -> Edge {
        let mut points = self.points.clone();
        points.reverse();
        Edge { points }
    }
}

/// Per-pixel lists of the ids of every edge running through that pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeIdMap {
    width: u32,
    height: u32,
    cells: Vec<Vec<EdgeId>>,
}

impl EdgeIdMap {
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            cells: vec![Vec::new(); width as usize * height as usize],
        }
    }

    /// Builds the map from an edge list; ids within a cell are ascending and
    /// unique.
    pub fn from_edges(width: u32, height: u32, edges: &[Edge]) -> Self {
        let mut map = Self::new(width, height);
        for (id, edge) in edges.iter().enumerate() {
            for &p in &edge.points {
                map.insert(p, id);
            }
        }
        map
    }

    fn index(&self, p: Point) -> Option<usize> {
        (p.x < self.width && p.y < self.height)
            .then(|| p.y as usize * self.width as usize + p.x as usize)
    }

    /// Edge ids at `p`; empty for untraced or out-of-bounds pixels.
    pub fn ids(&self, p: Point) -> &[EdgeId] {
        match self.index(p) {
            Some(i) => &self.cells[i],
            None => &[],
        }
    }

    #[inline]
    pub fn is_untraced(&self, p: Point) -> bool {
        self.ids(p).is_empty()
    }

    /// Adds `id` to the cell of `p` unless it is already there.
    pub(crate) fn insert(&mut self, p: Point, id: EdgeId) {
        if let Some(i) = self.index(p) {
            let cell = &mut self.cells[i];
            if !cell.contains(&id) {
                cell.push(id);
            }
        }
    }
}

/// The augmented edge map: edge list, per-pixel edge ids and the
/// ambiguity registry, together with the working image they describe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceResult {
    pub image: BinaryImage,
    pub edges: Vec<Edge>,
    pub edge_ids: EdgeIdMap,
    pub ambiguities: AmbiguityRegistry,
}

impl TraceResult {
    /// Assembles a result from parts, rebuilding the edge-id map.
    pub fn from_parts(image: BinaryImage, edges: Vec<Edge>, ambiguities: AmbiguityRegistry) -> Self {
        let edge_ids = EdgeIdMap::from_edges(image.width(), image.height(), &edges);
        Self {
            image,
            edges,
            edge_ids,
            ambiguities,
        }
    }

    pub fn width(&self) -> u32 {
        self.image.width()
    }

    pub fn height(&self) -> u32 {
        self.image.height()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge> {
        self.edges.get(id).ok_or(Error::UnknownEdge(id))
    }

    /// Ambiguity id at the first and last point of an edge.
    pub fn terminal_ambiguities(&self, id: EdgeId) -> Result<(Option<AmbiguityId>, Option<AmbiguityId>)> {
        let edge = self.edge(id)?;
        let start = edge.first().and_then(|p| self.ambiguities.id_at(p));
        let end = edge.last().and_then(|p| self.ambiguities.id_at(p));
        Ok((start, end))
    }

    /// Ids of all edges whose first or last point lies in the ambiguity,
    /// ascending.
    pub fn connected_edges(&self, ambiguity: AmbiguityId) -> Vec<EdgeId> {
        let Some(amb) = self.ambiguities.get(ambiguity) else {
            return Vec::new();
        };
        let mut ids: Vec<EdgeId> = amb
            .points
            .iter()
            .flat_map(|&p| self.edge_ids.ids(p).iter().copied())
            .filter(|&e| {
                let edge = &self.edges[e];
                [edge.first(), edge.last()]
                    .into_iter()
                    .flatten()
                    .any(|t| self.ambiguities.id_at(t) == Some(ambiguity))
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Merges two edges sharing a terminal point. The merged edge keeps the
    /// smaller id; the other id is retired and every larger id shifts down
    /// by one so ids stay dense.
    pub fn merge_edges(&mut self, a: EdgeId, b: EdgeId) -> Result<EdgeId> {
        if a == b {
            return Err(Error::InvalidParameter(format!("cannot merge edge {a} with itself")));
        }
        let ea = self.edge(a)?;
        let eb = self.edge(b)?;
        let merged = merge_point_lists(&ea.points, &eb.points).ok_or(Error::NoSharedTerminal { a, b })?;
        let (keep, retire) = (a.min(b), a.max(b));
        self.edges[keep] = Edge::new(merged);
        self.edges.remove(retire);
        self.edge_ids = EdgeIdMap::from_edges(self.width(), self.height(), &self.edges);
        Ok(keep)
    }
}

/// How two edges overlap at their terminals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeCase {
    /// Both edges start at the shared point.
    StartStart,
    /// Both edges end at the shared point.
    EndEnd,
    /// The first edge starts where the second ends.
    StartEnd,
    /// The first edge ends where the second starts.
    EndStart,
}

impl MergeCase {
    /// First matching case, checked in declaration order.
    pub fn detect(a: &[Point], b: &[Point]) -> Option<MergeCase> {
        let (a0, a1) = (a.first()?, a.last()?);
        let (b0, b1) = (b.first()?, b.last()?);
        if a0 == b0 {
            Some(MergeCase::StartStart)
        } else if a1 == b1 {
            Some(MergeCase::EndEnd)
        } else if a0 == b1 {
            Some(MergeCase::StartEnd)
        } else if a1 == b0 {
            Some(MergeCase::EndStart)
        } else {
            None
        }
    }
}

/// Joins two point sequences at a shared terminal. The shared point
/// appears once at the seam.
pub fn merge_point_lists(a: &[Point], b: &[Point]) -> Option<Vec<Point>> {
    let case = MergeCase::detect(a, b)?;
    Some(merge_with_case(a, b, case))
}

pub(crate) fn merge_with_case(a: &[Point], b: &[Point], case: MergeCase) -> Vec<Point> {
    let mut out = Vec::with_capacity(a.len() + b.len().saturating_sub(1));
    match case {
        MergeCase::StartStart => {
            out.extend(a.iter().rev());
            out.extend(&b[1..]);
        }
        MergeCase::EndEnd => {
            out.extend(a);
            out.extend(b.iter().rev().skip(1));
        }
        MergeCase::StartEnd => {
            out.extend(b);
            out.extend(&a[1..]);
        }
        MergeCase::EndStart => {
            out.extend(a);
            out.extend(&b[1..]);
        }
    }
    out
}

struct Tracer<'a> {
    image: &'a BinaryImage,
    ambiguities: &'a AmbiguityRegistry,
    edge_ids: EdgeIdMap,
    edges: Vec<Edge>,
}

impl Tracer<'_> {
    #[inline]
    fn is_unvisited(&self, p: Point) -> bool {
        self.edge_ids.is_untraced(p) || self.ambiguities.contains(p)
    }

    /// Unvisited direct neighbors of a non-ambiguity point.
    fn unvisited_neighbors(&self, p: Point) -> impl Iterator<Item = Point> + '_ {
        self.image
            .direct_neighbors_unchecked(p)
            .filter(move |&n| self.is_unvisited(n))
    }

    fn visit(&mut self, path: &mut Vec<Point>, p: Point, id: EdgeId) {
        path.push(p);
        self.edge_ids.insert(p, id);
    }

    /// Follows the edge from `next` until it runs out of unvisited neighbors
    /// or enters an ambiguity.
    fn walk(&mut self, path: &mut Vec<Point>, next: Point, id: EdgeId) {
        let mut current = next;
        loop {
            self.visit(path, current, id);
            if self.ambiguities.contains(current) {
                return;
            }
            let mut unvisited = self.unvisited_neighbors(current);
            let step = unvisited.next();
            // a point reached mid-edge has its predecessor among its at most
            // two direct neighbors, so at most one is left
            debug_assert!(unvisited.next().is_none(), "branch inside edge at {current}");
            match step {
                Some(n) => current = n,
                None => return,
            }
        }
    }

    fn trace_from(&mut self, start: Point) {
        let id = self.edges.len();
        let mut first = Vec::new();
        self.visit(&mut first, start, id);
        let unvisited: Vec<Point> = self.unvisited_neighbors(start).collect();
        let points = match unvisited[..] {
            [] => first,
            [next] => {
                self.walk(&mut first, next, id);
                first
            }
            [one, two] => {
                self.walk(&mut first, one, id);
                // on a closed loop the first half already came back around
                if self.is_unvisited(two) {
                    let mut second = vec![start];
                    self.walk(&mut second, two, id);
                    merge_with_case(&first, &second, MergeCase::StartStart)
                } else {
                    first
                }
            }
            _ => unreachable!("scan start {start} has more than two direct neighbors"),
        };
        self.edges.push(Edge { points });
    }
}

/// Traces a binary edge image into edges and ambiguities.
///
/// Ambiguities are found first; then every set pixel that is neither an
/// ambiguity point nor already traced starts a new edge, scanning in
/// row-major order.
pub fn trace_all(image: &BinaryImage) -> TraceResult {
    let ambiguities = preprocess_ambiguities(image);
    trace_with_ambiguities(image, ambiguities)
}

pub(crate) fn trace_with_ambiguities(image: &BinaryImage, ambiguities: AmbiguityRegistry) -> TraceResult {
    let mut tracer = Tracer {
        image,
        ambiguities: &ambiguities,
        edge_ids: EdgeIdMap::new(image.width(), image.height()),
        edges: Vec::new(),
    };
    for p in image.set_points() {
        if !ambiguities.contains(p) && tracer.edge_ids.is_untraced(p) {
            tracer.trace_from(p);
        }
    }
    let Tracer { edge_ids, edges, .. } = tracer;
    TraceResult {
        image: image.clone(),
        edges,
        edge_ids,
        ambiguities,
    }
}
