//! Reference segmentations to compare against: connected component
//! labeling, Moore-neighbor boundary tracing and border following with a
//! parent hierarchy. All produce a [`SegmentSet`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::grid::{BinaryImage, Point};
use crate::trace::trace_all;

/// A segmentation method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Ambiguity-aware edge tracing; segments are edges.
    #[serde(rename = "ours")]
    Ours,
    #[serde(rename = "ccl")]
    Ccl,
    /// Moore-neighbor tracing.
    #[serde(rename = "mnt")]
    Moore,
    /// Border following with hierarchy.
    #[serde(rename = "fcm")]
    BorderFollowing,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Ours, Method::Ccl, Method::Moore, Method::BorderFollowing];

    pub fn label(self) -> &'static str {
        match self {
            Method::Ours => "ours",
            Method::Ccl => "ccl",
            Method::Moore => "mnt",
            Method::BorderFollowing => "fcm",
        }
    }

    pub fn segment(self, image: &BinaryImage) -> SegmentSet {
        match self {
            Method::Ours => SegmentSet {
                method: self,
                segments: trace_all(image).edges.into_iter().map(|e| e.points).collect(),
                parents: None,
            },
            Method::Ccl => ccl(image),
            Method::Moore => moore_trace(image),
            Method::BorderFollowing => border_following_with_hierarchy(image),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Method::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::Usage(format!("unknown method '{s}', expected ours, ccl, mnt or fcm")))
    }
}

/// Segments produced by one method on one image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegmentSet {
    pub method: Method,
    /// CCL segments are in scan order; traced segments in traversal order
    /// and may repeat pixels.
    pub segments: Vec<Vec<Point>>,
    /// Parent segment per segment, for border following only. `None` at a
    /// position means the border's parent is the image frame.
    pub parents: Option<Vec<Option<usize>>>,
}

impl SegmentSet {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Total number of segment entries, counting repeats.
    pub fn entry_count(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }
}

/// 8-connected component label per pixel (`None` for background) and the
/// component count. Components are numbered by their first pixel in scan
/// order.
pub fn component_labels(image: &BinaryImage) -> (Vec<Option<usize>>, usize) {
    let (w, h) = (image.width() as usize, image.height() as usize);
    let mut provisional = vec![usize::MAX; w * h];
    let mut parent: Vec<usize> = Vec::new();

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    for y in 0..h {
        for x in 0..w {
            if image.pixels()[y * w + x] == 0 {
                continue;
            }
            // already-scanned neighbors: W, NW, N, NE
            let mut label = usize::MAX;
            let candidates = [
                (x > 0).then(|| y * w + x - 1),
                (x > 0 && y > 0).then(|| (y - 1) * w + x - 1),
                (y > 0).then(|| (y - 1) * w + x),
                (x + 1 < w && y > 0).then(|| (y - 1) * w + x + 1),
            ];
            for idx in candidates.into_iter().flatten() {
                let other = provisional[idx];
                if other == usize::MAX {
                    continue;
                }
                if label == usize::MAX {
                    label = find(&mut parent, other);
                } else {
                    let (a, b) = (find(&mut parent, label), find(&mut parent, other));
                    if a != b {
                        let (lo, hi) = (a.min(b), a.max(b));
                        parent[hi] = lo;
                        label = lo;
                    }
                }
            }
            if label == usize::MAX {
                label = parent.len();
                parent.push(label);
            }
            provisional[y * w + x] = label;
        }
    }

    let mut dense = vec![usize::MAX; parent.len()];
    let mut count = 0;
    let labels = provisional
        .into_iter()
        .map(|l| {
            if l == usize::MAX {
                return None;
            }
            let root = find(&mut parent, l);
            if dense[root] == usize::MAX {
                dense[root] = count;
                count += 1;
            }
            Some(dense[root])
        })
        .collect();
    (labels, count)
}

/// Two-pass connected component labeling with 8-connectivity.
pub fn ccl(image: &BinaryImage) -> SegmentSet {
    let (labels, count) = component_labels(image);
    let mut segments = vec![Vec::new(); count];
    for (p, label) in image.points().zip(labels) {
        if let Some(l) = label {
            segments[l].push(p);
        }
    }
    SegmentSet {
        method: Method::Ccl,
        segments,
        parents: None,
    }
}

/// Moore-neighbor tracing of the outer boundary of every 8-connected
/// component.
///
/// Each component is entered at its first pixel in scan order with the
/// backtrack pointing west. Tracing stops when the start pixel is about to
/// repeat its first move (same next pixel, same backtrack), so components
/// that pass through the start pixel twice are still fully traced.
pub fn moore_trace(image: &BinaryImage) -> SegmentSet {
    let (labels, count) = component_labels(image);
    let mut done = vec![false; count];
    let mut segments = Vec::with_capacity(count);
    for (p, label) in image.points().zip(&labels) {
        let Some(l) = *label else { continue };
        if done[l] {
            continue;
        }
        done[l] = true;
        segments.push(moore_boundary(image, p));
    }
    SegmentSet {
        method: Method::Moore,
        segments,
        parents: None,
    }
}

/// Neighbor offsets in [`crate::grid::NeighborIndex`] order: clockwise from the top left.
const MOORE: [(i64, i64); 8] = [(-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)];
const WEST: usize = 7;

/// Next boundary pixel clockwise around `p`, starting after the backtrack
/// direction `from`. Returns the pixel and the backtrack direction
/// relative to it.
fn moore_step(image: &BinaryImage, p: Point, from: usize) -> Option<(Point, usize)> {
    for k in 1..=8 {
        let d = (from + k) % 8;
        let Some(q) = p.offset(MOORE[d].0 as i32, MOORE[d].1 as i32).filter(|&q| image.is_set(q)) else {
            continue;
        };
        // the previously examined cell is background and adjacent to q
        let prev = MOORE[(from + k - 1) % 8];
        let rel = (prev.0 - MOORE[d].0, prev.1 - MOORE[d].1);
        let back = MOORE.iter().position(|&o| o == rel).expect("consecutive neighbors are adjacent");
        return Some((q, back));
    }
    None
}

fn moore_boundary(image: &BinaryImage, start: Point) -> Vec<Point> {
    let Some(first) = moore_step(image, start, WEST) else {
        return vec![start];
    };
    let cap = 8 * image.count_set() + 8;
    let mut out = vec![start];
    let (mut p, mut back) = first;
    while out.len() < cap {
        let next = moore_step(image, p, back).expect("a traced pixel has a set neighbor");
        if p == start && next == first {
            break;
        }
        out.push(p);
        (p, back) = next;
    }
    out
}

/// Border following with parent links over 8-connected foreground and
/// 4-connected background.
///
/// Reports outer borders and hole borders in order of discovery by a
/// raster scan. A pixel can lie on several borders; pixels on no border
/// (the interior of thick regions) are absent.
pub fn border_following_with_hierarchy(image: &BinaryImage) -> SegmentSet {
    let (w, h) = (image.width() as i64 + 2, image.height() as i64 + 2);
    // padded label grid: 0 background, 1 unvisited foreground, ±k border k
    let mut f = vec![0i64; (w * h) as usize];
    for p in image.set_points() {
        f[((p.y as i64 + 1) * w + p.x as i64 + 1) as usize] = 1;
    }
    let at = |r: i64, c: i64| (r * w + c) as usize;

    // border 1 is the frame, a hole border with no parent
    let mut is_hole = vec![true, true];
    let mut parent_nbd: Vec<usize> = vec![0, 0];
    let mut segments = Vec::new();
    let mut nbd = 1usize;

    for r in 1..h - 1 {
        let mut lnbd = 1usize;
        for c in 1..w - 1 {
            let v = f[at(r, c)];
            let from = if v == 1 && f[at(r, c - 1)] == 0 {
                Some((false, (r, c - 1)))
            } else if v >= 1 && f[at(r, c + 1)] == 0 {
                if v > 1 {
                    lnbd = v as usize;
                }
                Some((true, (r, c + 1)))
            } else {
                None
            };
            if let Some((hole, from)) = from {
                nbd += 1;
                let prior_is_hole = is_hole[lnbd];
                let parent = if hole == prior_is_hole { parent_nbd[lnbd] } else { lnbd };
                is_hole.push(hole);
                parent_nbd.push(parent);
                segments.push(follow_border(&mut f, w, (r, c), from, nbd as i64));
            }
            let v = f[at(r, c)];
            if v != 1 && v != 0 {
                lnbd = v.unsigned_abs() as usize;
            }
        }
    }
    let parents = (2..=nbd)
        .map(|b| (parent_nbd[b] >= 2).then(|| parent_nbd[b] - 2))
        .collect();
    SegmentSet {
        method: Method::BorderFollowing,
        segments,
        parents: Some(parents),
    }
}

/// Row/column offsets clockwise on screen, starting east.
const CLOCKWISE: [(i64, i64); 8] = [(0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1)];

fn direction(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    CLOCKWISE.iter().position(|&o| o == d).expect("cells are adjacent")
}

fn follow_border(f: &mut [i64], w: i64, start: (i64, i64), from: (i64, i64), nbd: i64) -> Vec<Point> {
    let at = |(r, c): (i64, i64)| (r * w + c) as usize;
    let to_point = |(r, c): (i64, i64)| Point::new((c - 1) as u32, (r - 1) as u32);
    let step = |p: (i64, i64), d: usize| (p.0 + CLOCKWISE[d].0, p.1 + CLOCKWISE[d].1);

    // clockwise search for the last pixel of the border before returning here
    let d0 = direction(start, from);
    let Some(first) = (0..8)
        .map(|k| step(start, (d0 + k) % 8))
        .find(|&q| f[at(q)] != 0)
    else {
        f[at(start)] = -nbd;
        return vec![to_point(start)];
    };

    let mut out = Vec::new();
    let (mut prev, mut cur) = (first, start);
    loop {
        out.push(to_point(cur));
        // counterclockwise search around cur, starting after prev
        let dp = direction(cur, prev);
        let mut east_examined_zero = false;
        let mut next = cur;
        for k in 1..=8 {
            let d = (dp + 8 - k) % 8;
            let q = step(cur, d);
            if f[at(q)] != 0 {
                next = q;
                break;
            }
            if d == 0 {
                east_examined_zero = true;
            }
        }
        if east_examined_zero {
            f[at(cur)] = -nbd;
        } else if f[at(cur)] == 1 {
            f[at(cur)] = nbd;
        }
        if next == start && cur == first {
            return out;
        }
        prev = cur;
        cur = next;
    }
}
