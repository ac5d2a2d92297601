//! First pass: find every ambiguity point and grow each pixel cluster into
//! a single coherent ambiguity.

use serde::{Deserialize, Serialize};

use crate::grid::{BinaryImage, Point};

pub type AmbiguityId = usize;

/// A coherent cluster of ambiguity points. Members are kept in discovery
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ambiguity {
    pub id: AmbiguityId,
    pub points: Vec<Point>,
}

impl Ambiguity {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Single-pixel ambiguity (T/Y/X junction centers and the like).
    pub fn is_single_pixel(&self) -> bool {
        self.points.len() == 1
    }
}

/// All ambiguities of an image plus a per-pixel lookup of the containing
/// cluster.
///
/// Each pixel stores the id of its ambiguity, so the full point list of a
/// cluster is reachable from any member in time proportional to its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmbiguityRegistry {
    width: u32,
    height: u32,
    ambiguities: Vec<Ambiguity>,
    per_pixel: Vec<Option<AmbiguityId>>,
}

impl AmbiguityRegistry {
    pub fn empty(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            ambiguities: Vec::new(),
            per_pixel: vec![None; width as usize * height as usize],
        }
    }

    /// Rebuilds a registry from cluster point lists; ids follow list order.
    ///
    /// Points outside the bounds are ignored. A point listed by more than
    /// one cluster is registered to the last one.
    pub fn from_clusters(width: u32, height: u32, clusters: Vec<Vec<Point>>) -> Self {
        let mut registry = Self::empty(width, height);
        for points in clusters {
            registry.push(points);
        }
        registry
    }

    pub(crate) fn push(&mut self, points: Vec<Point>) -> AmbiguityId {
        let id = self.ambiguities.len();
        for &p in &points {
            if let Some(i) = self.index(p) {
                self.per_pixel[i] = Some(id);
            }
        }
        self.ambiguities.push(Ambiguity { id, points });
        id
    }

    fn index(&self, p: Point) -> Option<usize> {
        (p.x < self.width && p.y < self.height)
            .then(|| p.y as usize * self.width as usize + p.x as usize)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn len(&self) -> usize {
        self.ambiguities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ambiguities.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Ambiguity> {
        self.ambiguities.iter()
    }

    pub fn get(&self, id: AmbiguityId) -> Option<&Ambiguity> {
        self.ambiguities.get(id)
    }

    /// Id of the ambiguity containing `p`, if any.
    #[inline]
    pub fn id_at(&self, p: Point) -> Option<AmbiguityId> {
        self.index(p).and_then(|i| self.per_pixel[i])
    }

    /// The ambiguity containing `p`, if any.
    pub fn ambiguity_at(&self, p: Point) -> Option<&Ambiguity> {
        self.id_at(p).map(|id| &self.ambiguities[id])
    }

    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        self.id_at(p).is_some()
    }

    /// Total number of ambiguity points over all clusters.
    pub fn point_count(&self) -> usize {
        self.ambiguities.iter().map(Ambiguity::len).sum()
    }
}

/// Scans the image row by row and region-grows every unregistered
/// ambiguity point into its cluster.
///
/// Growth follows direct neighbors only and appends a neighbor if it also
/// satisfies the ambiguity criterion. Cluster ids are assigned in scan
/// order starting at 0.
pub fn preprocess_ambiguities(image: &BinaryImage) -> AmbiguityRegistry {
    let mut registry = AmbiguityRegistry::empty(image.width(), image.height());
    for p in image.set_points() {
        if registry.contains(p) || !image.is_ambiguity_unchecked(p) {
            continue;
        }
        let id = registry.ambiguities.len();
        let mut cluster = vec![p];
        registry.per_pixel[image.index(p)] = Some(id);
        let mut cursor = 0;
        while cursor < cluster.len() {
            let current = cluster[cursor];
            for n in image.direct_neighbors_unchecked(current) {
                let i = image.index(n);
                if registry.per_pixel[i].is_none() && image.is_ambiguity_unchecked(n) {
                    registry.per_pixel[i] = Some(id);
                    cluster.push(n);
                }
            }
            cursor += 1;
        }
        registry.ambiguities.push(Ambiguity { id, points: cluster });
    }
    registry
}
