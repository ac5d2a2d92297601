use crate::ambiguity::AmbiguityRegistry;
use crate::trace::{Edge, TraceResult};

/// Number of points of an edge that are not ambiguity points, i.e. the
/// length of the connector between its terminals.
pub fn connector_length(result: &TraceResult, edge: &Edge) -> usize {
    edge.points
        .iter()
        .filter(|&&p| !result.ambiguities.contains(p))
        .count()
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// The smaller root becomes the representative.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Merges ambiguities joined by short edges into combined ambiguities.
///
/// Every edge whose two terminals lie in distinct ambiguities and whose
/// connector (its non-ambiguity points) has at most `max_connector_len`
/// points is absorbed: its pixels and both clusters become one ambiguity.
/// Merging is transitive. Combined ambiguities list the member clusters'
/// points in id order followed by the absorbed connector pixels; ids are
/// renumbered by their smallest original id.
pub fn merge_nearby_ambiguities(result: &TraceResult, max_connector_len: usize) -> TraceResult {
    let n = result.ambiguities.len();
    let mut sets = DisjointSet::new(n);
    let mut absorbed = vec![false; result.edges.len()];
    for (id, edge) in result.edges.iter().enumerate() {
        let (Some(a), Some(b)) = (
            edge.first().and_then(|p| result.ambiguities.id_at(p)),
            edge.last().and_then(|p| result.ambiguities.id_at(p)),
        ) else {
            continue;
        };
        if a != b && connector_length(result, edge) <= max_connector_len {
            absorbed[id] = true;
            sets.union(a, b);
        }
    }
    if !absorbed.contains(&true) {
        return result.clone();
    }

    // new id for every root, in order of the smallest member id
    let mut new_id = vec![usize::MAX; n];
    let mut clusters: Vec<Vec<_>> = Vec::new();
    for amb in result.ambiguities.iter() {
        let root = sets.find(amb.id);
        if new_id[root] == usize::MAX {
            new_id[root] = clusters.len();
            clusters.push(Vec::new());
        }
        clusters[new_id[root]].extend(amb.points.iter().copied());
    }
    let mut edges = Vec::with_capacity(result.edges.len());
    for (id, edge) in result.edges.iter().enumerate() {
        if !absorbed[id] {
            edges.push(edge.clone());
            continue;
        }
        let start = edge.first().and_then(|p| result.ambiguities.id_at(p)).expect("absorbed edges are bridged");
        let target = new_id[sets.find(start)];
        clusters[target].extend(edge.points.iter().copied().filter(|&p| !result.ambiguities.contains(p)));
    }
    let registry = AmbiguityRegistry::from_clusters(result.width(), result.height(), clusters);
    TraceResult::from_parts(result.image.clone(), edges, registry)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::check;
    use crate::grid::{BinaryImage, Point};
    use crate::postprocess::{classify_edge, EdgeClass};
    use crate::trace::trace_all;

    /// A horizontal line crossed by vertical bars at the given columns.
    fn crossings(columns: &[u32], width: u32) -> BinaryImage {
        let mut image = BinaryImage::new(width, 7);
        for x in 0..width {
            image.set(Point::new(x, 3), true);
        }
        for &c in columns {
            for y in 1..=5 {
                image.set(Point::new(c, y), true);
            }
        }
        image
    }

    #[test]
    fn two_junctions_with_a_three_pixel_bridge() {
        let r = trace_all(&crossings(&[2, 6], 9));
        assert_eq!(r.ambiguities.len(), 2);
        let out = merge_nearby_ambiguities(&r, 3);
        assert_eq!(out.ambiguities.len(), 1);
        let combined = out.ambiguities.get(0).unwrap();
        assert_eq!(combined.len(), 5);
        assert_eq!(
            combined.points,
            vec![
                Point::new(2, 3),
                Point::new(6, 3),
                Point::new(5, 3),
                Point::new(4, 3),
                Point::new(3, 3)
            ]
        );
        // 2 outer tails + 4 vertical arms, all attached to the combined ambiguity
        assert_eq!(out.edges.len(), 6);
        for id in 0..out.edges.len() {
            assert_eq!(classify_edge(&out, id).unwrap(), EdgeClass::Dangling);
        }
        assert!(check::coverage(&out).is_empty());
        assert!(check::bookkeeping(&out).is_empty());
    }

    #[test]
    fn bridge_longer_than_limit_is_kept() {
        let r = trace_all(&crossings(&[2, 7], 10));
        let out = merge_nearby_ambiguities(&r, 3);
        assert_eq!(out, r);
    }

    #[test]
    fn chain_merges_transitively() {
        let r = trace_all(&crossings(&[2, 6, 10], 13));
        assert_eq!(r.ambiguities.len(), 3);
        let out = merge_nearby_ambiguities(&r, 3);
        assert_eq!(out.ambiguities.len(), 1);
        assert_eq!(out.ambiguities.get(0).unwrap().len(), 9);
        assert_eq!(out.edges.len(), 8);
    }
}
