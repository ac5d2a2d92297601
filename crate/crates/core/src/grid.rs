//! Pixel-grid primitives and the 8-neighborhood analysis shared by both
//! tracing passes.
//!
//! Neighbors of a center pixel `p = (x, y)` are numbered clockwise from the
//! top-left corner:
//!
//! ```text
//!   p0 p1 p2
//!   p7  p  p3
//!   p6 p5 p4
//! ```
//!
//! Odd indices are orthogonal neighbors, even indices are diagonal. The
//! groups `(p7, p0, p1)`, `(p1, p2, p3)`, `(p3, p4, p5)` and `(p5, p6, p7)`
//! each close a 2×2 block with the center.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A pixel position. `x` is the column, `y` the row; the origin is the
/// top-left corner of the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u32; 2]", into = "[u32; 2]")]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// True if `other` is one of the 8 neighbors of `self`.
    pub fn is_adjacent(self, other: Point) -> bool {
        let dx = self.x.abs_diff(other.x);
        let dy = self.y.abs_diff(other.y);
        dx <= 1 && dy <= 1 && (dx, dy) != (0, 0)
    }

    /// Offset by a signed delta, `None` when the result would be negative.
    pub fn offset(self, dx: i32, dy: i32) -> Option<Point> {
        let x = self.x.checked_add_signed(dx)?;
        let y = self.y.checked_add_signed(dy)?;
        Some(Point { x, y })
    }
}

impl From<[u32; 2]> for Point {
    fn from([x, y]: [u32; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [u32; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Index `0..8` of a neighbor around a center pixel, see the module docs
/// for the layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborIndex(u8);

impl NeighborIndex {
    pub const ALL: [NeighborIndex; 8] = [
        NeighborIndex(0),
        NeighborIndex(1),
        NeighborIndex(2),
        NeighborIndex(3),
        NeighborIndex(4),
        NeighborIndex(5),
        NeighborIndex(6),
        NeighborIndex(7),
    ];

    const OFFSETS: [(i32, i32); 8] = [
        (-1, -1),
        (0, -1),
        (1, -1),
        (1, 0),
        (1, 1),
        (0, 1),
        (-1, 1),
        (-1, 0),
    ];

    pub fn new(index: u8) -> Option<Self> {
        (index < 8).then_some(NeighborIndex(index))
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn is_orthogonal(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn is_diagonal(self) -> bool {
        !self.is_orthogonal()
    }

    /// `(dx, dy)` from the center to this neighbor.
    pub fn offset(self) -> (i32, i32) {
        Self::OFFSETS[self.0 as usize]
    }

    /// The neighbor index pointing from `from` to `to`, if they are adjacent.
    pub fn between(from: Point, to: Point) -> Option<Self> {
        let dx = to.x as i64 - from.x as i64;
        let dy = to.y as i64 - from.y as i64;
        Self::OFFSETS
            .iter()
            .position(|&(ox, oy)| ox as i64 == dx && oy as i64 == dy)
            .map(|i| NeighborIndex(i as u8))
    }

    pub fn bit(self) -> u8 {
        1 << self.0
    }
}

const ORTHOGONAL_BITS: u8 = 0b1010_1010;

const FOUR_CLUSTER_GROUPS: [u8; 4] = [
    (1 << 7) | (1 << 0) | (1 << 1),
    (1 << 1) | (1 << 2) | (1 << 3),
    (1 << 3) | (1 << 4) | (1 << 5),
    (1 << 5) | (1 << 6) | (1 << 7),
];

/// Direct-neighbor mask for every occupancy mask.
const DIRECT_NEIGHBOR_TABLE: [u8; 256] = build_direct_table();

const fn build_direct_table() -> [u8; 256] {
    let mut table = [0u8; 256];
    let mut mask = 0usize;
    while mask < 256 {
        let m = mask as u8;
        let mut direct = m & ORTHOGONAL_BITS;
        let mut d = 0;
        while d < 8 {
            let prev = (d + 7) % 8;
            let next = (d + 1) % 8;
            if m & (1 << d) != 0 && m & (1 << prev) == 0 && m & (1 << next) == 0 {
                direct |= 1 << d;
            }
            d += 2;
        }
        table[mask] = direct;
        mask += 1;
    }
    table
}

/// Direct-neighbor mask for an occupancy mask: every set orthogonal bit, plus
/// each set diagonal bit whose two adjacent orthogonal bits are clear.
pub fn direct_neighbor_mask(occupancy: u8) -> u8 {
    DIRECT_NEIGHBOR_TABLE[occupancy as usize]
}

/// True if the occupancy mask closes a 2×2 block with the center.
pub fn mask_has_four_cluster(occupancy: u8) -> bool {
    FOUR_CLUSTER_GROUPS
        .iter()
        .any(|&group| group & !occupancy == 0)
}

/// Ambiguity criterion on an occupancy mask alone.
pub fn mask_is_ambiguity(occupancy: u8) -> bool {
    direct_neighbor_mask(occupancy).count_ones() > 2 || mask_has_four_cluster(occupancy)
}

/// A binary image. Pixels are stored row-major as 0 or 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl fmt::Debug for BinaryImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryImage {}x{}", self.width, self.height)?;
        for y in 0..self.height {
            for x in 0..self.width {
                f.write_str(if self.is_set(Point::new(x, y)) { "#" } else { "." })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl BinaryImage {
    /// A blank image.
    pub fn new(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width as usize * height as usize],
        }
    }

    /// Builds an image from row-major values; any non-zero value is set.
    pub fn from_pixels(width: u32, height: u32, values: &[u8]) -> Result<Self> {
        let expected = width as usize * height as usize;
        if values.len() != expected {
            return Err(Error::Usage(format!(
                "pixel buffer has {} values, expected {width}x{height} = {expected}",
                values.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels: values.iter().map(|&v| u8::from(v != 0)).collect(),
        })
    }

    /// Parses an ASCII picture: `#`, `1`, `x` or `X` are set, anything else
    /// is background. Rows may have different lengths; short rows are padded.
    pub fn from_ascii(art: &str) -> Self {
        let rows: Vec<&str> = art
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let height = rows.len() as u32;
        let width = rows.iter().map(|r| r.chars().count()).max().unwrap_or(0) as u32;
        let mut image = Self::new(width, height);
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                if matches!(c, '#' | '1' | 'x' | 'X') {
                    image.set(Point::new(x as u32, y as u32), true);
                }
            }
        }
        image
    }

    /// Builds an image of the given size with the listed pixels set.
    /// Points outside the image are ignored.
    pub fn from_points(width: u32, height: u32, points: impl IntoIterator<Item = Point>) -> Self {
        let mut image = Self::new(width, height);
        for p in points {
            if image.contains(p) {
                image.set(p, true);
            }
        }
        image
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Row-major pixel values, each 0 or 1.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x < self.width && p.y < self.height
    }

    #[inline]
    pub(crate) fn index(&self, p: Point) -> usize {
        p.y as usize * self.width as usize + p.x as usize
    }

    /// Pixel value; out-of-bounds reads as unset.
    #[inline]
    pub fn is_set(&self, p: Point) -> bool {
        self.contains(p) && self.pixels[self.index(p)] != 0
    }

    #[inline]
    fn is_set_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && (x as u64) < self.width as u64
            && (y as u64) < self.height as u64
            && self.pixels[y as usize * self.width as usize + x as usize] != 0
    }

    /// Sets or clears a pixel.
    ///
    /// # Panics
    ///
    /// If `p` lies outside the image.
    pub fn set(&mut self, p: Point, value: bool) {
        assert!(self.contains(p), "pixel {p} outside {}x{} image", self.width, self.height);
        let i = self.index(p);
        self.pixels[i] = u8::from(value);
    }

    pub fn count_set(&self) -> usize {
        self.pixels.iter().filter(|&&v| v != 0).count()
    }

    /// All set pixels in row-major order.
    pub fn set_points(&self) -> impl Iterator<Item = Point> + '_ {
        let w = self.width as usize;
        self.pixels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, _)| Point::new((i % w) as u32, (i / w) as u32))
    }

    /// All pixel positions in row-major order.
    pub fn points(&self) -> impl Iterator<Item = Point> {
        let (w, h) = (self.width, self.height);
        (0..h).flat_map(move |y| (0..w).map(move |x| Point::new(x, y)))
    }

    /// The neighbor of `p` at `n`, if it lies inside the image.
    pub fn neighbor(&self, p: Point, n: NeighborIndex) -> Option<Point> {
        let (dx, dy) = n.offset();
        p.offset(dx, dy).filter(|q| self.contains(*q))
    }

    fn check_bounds(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                point: p,
                width: self.width,
                height: self.height,
            })
        }
    }

    /// 8-bit occupancy mask of the neighbors of `p`; bit `i` is set iff
    /// neighbor `p_i` lies inside the image and is set.
    pub fn neighbor_occupancy(&self, p: Point) -> Result<u8> {
        self.check_bounds(p)?;
        Ok(self.occupancy_unchecked(p))
    }

    #[inline]
    pub(crate) fn occupancy_unchecked(&self, p: Point) -> u8 {
        let (x, y) = (p.x as i64, p.y as i64);
        let mut mask = 0u8;
        for (i, &(dx, dy)) in NeighborIndex::OFFSETS.iter().enumerate() {
            if self.is_set_signed(x + dx as i64, y + dy as i64) {
                mask |= 1 << i;
            }
        }
        mask
    }

    /// Direct neighbors of `p` in ascending neighbor-index order: all set
    /// orthogonal neighbors, and set diagonal neighbors that have no set
    /// adjacent orthogonal neighbor.
    pub fn direct_neighbors(&self, p: Point) -> Result<Vec<Point>> {
        self.check_bounds(p)?;
        Ok(self.direct_neighbors_unchecked(p).collect())
    }

    #[inline]
    pub(crate) fn direct_neighbors_unchecked(&self, p: Point) -> impl Iterator<Item = Point> {
        let mask = direct_neighbor_mask(self.occupancy_unchecked(p));
        NeighborIndex::ALL
            .into_iter()
            .filter(move |n| mask & n.bit() != 0)
            .map(move |n| {
                let (dx, dy) = n.offset();
                // set bits are always in bounds
                Point::new((p.x as i64 + dx as i64) as u32, (p.y as i64 + dy as i64) as u32)
            })
    }

    /// True if `p` is a member of at least one fully set 2×2 block.
    pub fn contains_four_cluster(&self, p: Point) -> Result<bool> {
        Ok(mask_has_four_cluster(self.neighbor_occupancy(p)?))
    }

    /// Ambiguity criterion: more than two direct neighbors, or part of a
    /// 2×2 block of set pixels.
    pub fn is_ambiguity_point(&self, p: Point) -> Result<bool> {
        Ok(mask_is_ambiguity(self.neighbor_occupancy(p)?))
    }

    #[inline]
    pub(crate) fn is_ambiguity_unchecked(&self, p: Point) -> bool {
        mask_is_ambiguity(self.occupancy_unchecked(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn center_with(bits: &[u8]) -> BinaryImage {
        let mut image = BinaryImage::new(3, 3);
        image.set(Point::new(1, 1), true);
        for &b in bits {
            let n = NeighborIndex::new(b).unwrap();
            image.set(image.neighbor(Point::new(1, 1), n).unwrap(), true);
        }
        image
    }

    fn indices(image: &BinaryImage, p: Point) -> Vec<u8> {
        image
            .direct_neighbors(p)
            .unwrap()
            .into_iter()
            .map(|q| NeighborIndex::between(p, q).unwrap().index())
            .collect()
    }

    const C: Point = Point::new(1, 1);

    #[test]
    fn occupancy_zero_and_saturated() {
        assert_eq!(center_with(&[]).neighbor_occupancy(C).unwrap(), 0);
        let full = center_with(&[0, 1, 2, 3, 4, 5, 6, 7]);
        assert_eq!(full.neighbor_occupancy(C).unwrap(), 0xff);
    }

    #[test]
    fn occupancy_at_corner_reads_outside_as_unset() {
        let mut image = BinaryImage::new(3, 3);
        image.set(Point::new(0, 0), true);
        image.set(Point::new(1, 0), true);
        assert_eq!(image.neighbor_occupancy(Point::new(0, 0)).unwrap(), 1 << 3);
    }

    #[test]
    fn occupancy_out_of_bounds_is_an_error() {
        let image = BinaryImage::new(2, 2);
        assert!(matches!(
            image.neighbor_occupancy(Point::new(2, 0)),
            Err(Error::OutOfBounds { .. })
        ));
    }

    #[test]
    fn direct_neighbors_examples() {
        assert_eq!(indices(&center_with(&[3, 7]), C), vec![3, 7]);
        assert_eq!(indices(&center_with(&[2, 3]), C), vec![3]);
        assert_eq!(indices(&center_with(&[0, 4]), C), vec![0, 4]);
        assert_eq!(indices(&center_with(&[1, 3, 5, 7]), C), vec![1, 3, 5, 7]);
    }

    #[test]
    fn four_cluster_examples() {
        assert!(center_with(&[7, 0, 1]).contains_four_cluster(C).unwrap());
        assert!(!center_with(&[1, 3, 5, 7]).contains_four_cluster(C).unwrap());
        assert!(center_with(&[0, 1, 2, 3, 4, 5, 6, 7])
            .contains_four_cluster(C)
            .unwrap());
    }

    #[test]
    fn ambiguity_examples() {
        assert!(center_with(&[1, 3, 5, 7]).is_ambiguity_point(C).unwrap());
        assert!(!center_with(&[3, 7]).is_ambiguity_point(C).unwrap());

        // top-left pixel of an isolated 2x2 block: two direct neighbors,
        // but the (p3, p4, p5) group is set
        let block = BinaryImage::from_ascii(
            "....
             .##.
             .##.
             ....",
        );
        let tl = Point::new(1, 1);
        assert_eq!(block.direct_neighbors(tl).unwrap().len(), 2);
        assert!(block.is_ambiguity_point(tl).unwrap());
    }

    #[test]
    fn no_diagonal_with_set_adjacent_orthogonal_over_all_masks() {
        for mask in 0..=255u8 {
            let direct = direct_neighbor_mask(mask);
            assert_eq!(direct & !mask, 0);
            for d in [0u8, 2, 4, 6] {
                if direct & (1 << d) != 0 {
                    assert_eq!(mask & (1 << ((d + 7) % 8)), 0, "mask {mask:08b}");
                    assert_eq!(mask & (1 << ((d + 1) % 8)), 0, "mask {mask:08b}");
                }
            }
            assert_eq!(direct & ORTHOGONAL_BITS, mask & ORTHOGONAL_BITS);
        }
    }

    #[test]
    fn neighbor_index_between_roundtrips() {
        let p = Point::new(5, 5);
        for n in NeighborIndex::ALL {
            let (dx, dy) = n.offset();
            let q = p.offset(dx, dy).unwrap();
            assert_eq!(NeighborIndex::between(p, q), Some(n));
            assert!(p.is_adjacent(q));
        }
        assert_eq!(NeighborIndex::between(p, p), None);
    }

    #[test]
    fn ascii_parsing() {
        let img = BinaryImage::from_ascii("#.\n.#\n");
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.count_set(), 2);
        assert_eq!(
            img.set_points().collect::<Vec<_>>(),
            vec![Point::new(0, 0), Point::new(1, 1)]
        );
    }
}
