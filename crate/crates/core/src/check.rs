//! Structural checks over a [`TraceResult`]. Each function returns a list of
//! human-readable violations; an empty list means the property holds.

use std::collections::HashSet;

use crate::grid::{BinaryImage, NeighborIndex, Point};
use crate::trace::TraceResult;

/// Set pixels of the working image versus the union of edge and ambiguity
/// points.
pub fn coverage(result: &TraceResult) -> Vec<String> {
    let mut covered: HashSet<Point> = result.edges.iter().flat_map(|e| e.points.iter().copied()).collect();
    covered.extend(result.ambiguities.iter().flat_map(|a| a.points.iter().copied()));
    let mut out = Vec::new();
    for p in result.image.set_points() {
        if !covered.remove(&p) {
            out.push(format!("set pixel {p} is in no edge and no ambiguity"));
        }
    }
    for p in covered {
        out.push(format!("point {p} is not a set pixel"));
    }
    out
}

/// Repeated pixels inside one edge (a closed loop whose first and last
/// point are the same ambiguity pixel is allowed), and non-ambiguity pixels
/// carried by more than one edge.
pub fn no_double_trace(result: &TraceResult) -> Vec<String> {
    let mut out = Vec::new();
    for (id, edge) in result.edges.iter().enumerate() {
        let n = edge.points.len();
        let body = if n >= 2 && edge.points[0] == edge.points[n - 1] && result.ambiguities.contains(edge.points[0]) {
            &edge.points[..n - 1]
        } else {
            &edge.points[..]
        };
        let mut seen = HashSet::with_capacity(body.len());
        for p in body {
            if !seen.insert(*p) {
                out.push(format!("edge {id} visits {p} twice"));
            }
        }
    }
    for p in result.image.set_points() {
        let ids = result.edge_ids.ids(p);
        if !result.ambiguities.contains(p) && ids.len() > 1 {
            out.push(format!("non-ambiguity pixel {p} is in edges {ids:?}"));
        }
    }
    out
}

/// Consecutive points are 8-adjacent, and no diagonal step is taken when
/// either orthogonal pixel between the two points is set.
pub fn ordering(result: &TraceResult) -> Vec<String> {
    let mut out = Vec::new();
    for (id, edge) in result.edges.iter().enumerate() {
        for pair in edge.points.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if !a.is_adjacent(b) {
                out.push(format!("edge {id}: {a} -> {b} is not a neighbor step"));
                continue;
            }
            if let Some(detour) = diagonal_detour(&result.image, a, b) {
                out.push(format!("edge {id}: diagonal step {a} -> {b} skips set pixel {detour}"));
            }
        }
    }
    out
}

fn diagonal_detour(image: &BinaryImage, a: Point, b: Point) -> Option<Point> {
    let n = NeighborIndex::between(a, b)?;
    if n.is_orthogonal() {
        return None;
    }
    [Point::new(a.x, b.y), Point::new(b.x, a.y)]
        .into_iter()
        .find(|&q| image.is_set(q))
}

/// Ambiguity points inside an edge appear only as its first or last point.
pub fn endpoint_duality(result: &TraceResult) -> Vec<String> {
    let mut out = Vec::new();
    for (id, edge) in result.edges.iter().enumerate() {
        let n = edge.points.len();
        if n <= 2 {
            continue;
        }
        for p in &edge.points[1..n - 1] {
            if result.ambiguities.contains(*p) {
                out.push(format!("edge {id} runs through ambiguity point {p}"));
            }
        }
    }
    out
}

/// The edge-id map lists exactly the edges containing each pixel, and
/// ambiguity lookups agree with the cluster point lists.
pub fn bookkeeping(result: &TraceResult) -> Vec<String> {
    let mut out = Vec::new();
    let mut expected: Vec<Vec<usize>> = vec![Vec::new(); result.width() as usize * result.height() as usize];
    for (id, edge) in result.edges.iter().enumerate() {
        for p in &edge.points {
            let cell = &mut expected[p.y as usize * result.width() as usize + p.x as usize];
            if !cell.contains(&id) {
                cell.push(id);
            }
        }
    }
    for p in result.image.points() {
        let mut want = expected[p.y as usize * result.width() as usize + p.x as usize].clone();
        let mut got = result.edge_ids.ids(p).to_vec();
        want.sort_unstable();
        got.sort_unstable();
        if want != got {
            out.push(format!("edge-id cell at {p} is {got:?}, edges through it are {want:?}"));
        }
    }
    let mut members = 0;
    for amb in result.ambiguities.iter() {
        for &p in &amb.points {
            members += 1;
            if result.ambiguities.id_at(p) != Some(amb.id) {
                out.push(format!("ambiguity {} member {p} maps elsewhere", amb.id));
            }
        }
    }
    let registered = result.image.points().filter(|&p| result.ambiguities.contains(p)).count();
    if registered != members {
        out.push(format!("{registered} registered pixels but {members} cluster members"));
    }
    out
}

/// All of the above.
pub fn all(result: &TraceResult) -> Vec<String> {
    let mut out = coverage(result);
    out.extend(no_double_trace(result));
    out.extend(ordering(result));
    out.extend(endpoint_duality(result));
    out.extend(bookkeeping(result));
    out
}
