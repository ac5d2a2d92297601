//! Synthetic test images: chained plus-shaped crosses for runtime scaling
//! and a few small junction figures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{BinaryImage, Point};

/// Arrangement of crosses in a cross pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layout {
    /// One horizontal chain.
    Row,
    /// A square grid linked horizontally and vertically.
    Square,
}

impl Layout {
    pub fn label(self) -> &'static str {
        match self {
            Layout::Row => "row",
            Layout::Square => "square",
        }
    }

    /// Number of crosses actually generated for a requested count.
    pub fn cross_count(self, n: usize) -> usize {
        match self {
            Layout::Row => n,
            Layout::Square => {
                let k = square_side(n);
                k * k
            }
        }
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Layout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" => Ok(Layout::Row),
            "square" => Ok(Layout::Square),
            _ => Err(Error::Usage(format!("unknown layout '{s}', expected row or square"))),
        }
    }
}

fn square_side(n: usize) -> usize {
    let mut k = (n as f64).sqrt() as usize;
    while k * k < n {
        k += 1;
    }
    k
}

/// Arm length of a cross; a cross spans `2 * ARM + 1` pixels.
pub const CROSS_ARM: u32 = 2;

/// Draws a plus centered on `center`, clipped to the image.
pub fn stamp_cross(image: &mut BinaryImage, center: Point) {
    let arm = CROSS_ARM as i32;
    for d in -arm..=arm {
        for p in [center.offset(d, 0), center.offset(0, d)].into_iter().flatten() {
            if image.contains(p) {
                image.set(p, true);
            }
        }
    }
}

/// A `columns` by `rows` grid of crosses whose centers are `spacing`
/// pixels apart, joined by straight lines between neighboring centers,
/// with a one-pixel blank margin.
///
/// With `spacing == 4` neighboring crosses share their touching arm tips.
/// Every cross center is a single-pixel ambiguity and every other pixel
/// lies on a line between two centers or on an outer arm.
pub fn cross_grid(columns: u32, rows: u32, spacing: u32) -> Result<BinaryImage> {
    if columns == 0 || rows == 0 {
        return Err(Error::InvalidParameter("a cross grid needs at least one cross".into()));
    }
    if spacing < 2 * CROSS_ARM {
        return Err(Error::InvalidParameter(format!(
            "spacing {spacing} is below the cross span {}",
            2 * CROSS_ARM
        )));
    }
    let margin = 1 + CROSS_ARM;
    let width = (columns - 1) * spacing + 2 * margin + 1;
    let height = (rows - 1) * spacing + 2 * margin + 1;
    let mut image = BinaryImage::new(width, height);
    for row in 0..rows {
        for col in 0..columns {
            let c = Point::new(margin + col * spacing, margin + row * spacing);
            stamp_cross(&mut image, c);
            if col + 1 < columns {
                for x in c.x..=c.x + spacing {
                    image.set(Point::new(x, c.y), true);
                }
            }
            if row + 1 < rows {
                for y in c.y..=c.y + spacing {
                    image.set(Point::new(c.x, y), true);
                }
            }
        }
    }
    Ok(image)
}

/// `n` crosses chained arm to arm, in a row or on a `⌈√n⌉` square grid.
pub fn generate_cross_pattern(n: usize, layout: Layout) -> Result<BinaryImage> {
    if n == 0 {
        return Err(Error::InvalidParameter("cross count must be at least 1".into()));
    }
    let too_large = || Error::InvalidParameter(format!("cross count {n} is too large"));
    match layout {
        Layout::Row => cross_grid(u32::try_from(n).map_err(|_| too_large())?, 1, 2 * CROSS_ARM),
        Layout::Square => {
            let k = u32::try_from(square_side(n)).map_err(|_| too_large())?;
            cross_grid(k, k, 2 * CROSS_ARM)
        }
    }
}

/// Square outline with `side` pixels per side, one-pixel margin.
pub fn ring(side: u32) -> Result<BinaryImage> {
    if side < 3 {
        return Err(Error::InvalidParameter(format!("ring side {side} is below 3")));
    }
    let mut image = BinaryImage::new(side + 2, side + 2);
    for i in 1..=side {
        for p in [Point::new(i, 1), Point::new(i, side), Point::new(1, i), Point::new(side, i)] {
            image.set(p, true);
        }
    }
    Ok(image)
}

/// A horizontal bar with a stem hanging from its middle; every arm has
/// `arm` pixels besides the junction.
pub fn t_junction(arm: u32) -> Result<BinaryImage> {
    if arm == 0 {
        return Err(Error::InvalidParameter("arm length must be at least 1".into()));
    }
    let mut image = BinaryImage::new(2 * arm + 3, arm + 3);
    let c = Point::new(arm + 1, 1);
    for x in 1..=2 * arm + 1 {
        image.set(Point::new(x, 1), true);
    }
    for y in 1..=arm + 1 {
        image.set(Point::new(c.x, y), true);
    }
    Ok(image)
}

/// Two perpendicular lines crossing in one pixel, arms of `arm` pixels.
pub fn x_junction(arm: u32) -> Result<BinaryImage> {
    if arm == 0 {
        return Err(Error::InvalidParameter("arm length must be at least 1".into()));
    }
    let size = 2 * arm + 3;
    let mut image = BinaryImage::new(size, size);
    for i in 1..=2 * arm + 1 {
        image.set(Point::new(i, arm + 1), true);
        image.set(Point::new(arm + 1, i), true);
    }
    Ok(image)
}

/// Midpoint-algorithm circle points around `center`, without duplicates.
pub fn midpoint_circle(center: Point, radius: u32) -> Vec<Point> {
    let (cx, cy, r) = (center.x as i64, center.y as i64, radius as i64);
    let (mut x, mut y, mut d) = (r, 0i64, 1 - r);
    let mut out = Vec::new();
    while x >= y {
        for (dx, dy) in [(x, y), (y, x), (-y, x), (-x, y), (-x, -y), (-y, -x), (y, -x), (x, -y)] {
            let (px, py) = (cx + dx, cy + dy);
            if px >= 0 && py >= 0 {
                let p = Point::new(px as u32, py as u32);
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        y += 1;
        if d < 0 {
            d += 2 * y + 1;
        } else {
            x -= 1;
            d += 2 * (y - x) + 1;
        }
    }
    out
}

/// A circle of `radius` crossed by a vertical diameter that sticks out two
/// pixels above and below, with a one-pixel margin.
pub fn circle_with_diameter(radius: u32) -> Result<BinaryImage> {
    if radius < 2 {
        return Err(Error::InvalidParameter(format!("radius {radius} is below 2")));
    }
    let half = radius + 2;
    let size = 2 * half + 3;
    let center = Point::new(half + 1, half + 1);
    let mut image = BinaryImage::from_points(size, size, midpoint_circle(center, radius));
    for y in 1..=2 * half + 1 {
        image.set(Point::new(center.x, y), true);
    }
    Ok(image)
}

/// Figures selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternKind {
    CrossRow,
    CrossSquare,
    Ring,
    TJunction,
    XJunction,
    CircleWithDiameter,
}

impl PatternKind {
    /// Generates the figure; `n` is the cross count, ring side, arm length
    /// or circle radius.
    pub fn generate(self, n: usize) -> Result<BinaryImage> {
        let size = || u32::try_from(n).map_err(|_| Error::InvalidParameter(format!("size {n} is too large")));
        match self {
            PatternKind::CrossRow => generate_cross_pattern(n, Layout::Row),
            PatternKind::CrossSquare => generate_cross_pattern(n, Layout::Square),
            PatternKind::Ring => ring(size()?),
            PatternKind::TJunction => t_junction(size()?),
            PatternKind::XJunction => x_junction(size()?),
            PatternKind::CircleWithDiameter => circle_with_diameter(size()?),
        }
    }
}

impl FromStr for PatternKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cross-row" => PatternKind::CrossRow,
            "cross-square" => PatternKind::CrossSquare,
            "ring" => PatternKind::Ring,
            "t-junction" => PatternKind::TJunction,
            "x-junction" => PatternKind::XJunction,
            "circle" => PatternKind::CircleWithDiameter,
            _ => {
                return Err(Error::Usage(format!(
                    "unknown pattern '{s}', expected cross-row, cross-square, ring, t-junction, x-junction or circle"
                )))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::postprocess::{classify_edge, EdgeClass};
    use crate::trace::trace_all;

    #[test]
    fn single_cross() {
        let image = generate_cross_pattern(1, Layout::Row).unwrap();
        assert_eq!(image.count_set(), 9);
        let r = trace_all(&image);
        assert_eq!(r.ambiguities.len(), 1);
        assert_eq!(r.edges.len(), 4);
    }

    #[test]
    fn two_crosses_share_the_connecting_arm() {
        let image = generate_cross_pattern(2, Layout::Row).unwrap();
        // 9 + 9 minus the shared tip
        assert_eq!(image.count_set(), 17);
        let r = trace_all(&image);
        assert_eq!(r.ambiguities.len(), 2);
        assert_eq!(r.edges.len(), 7);
        let bridged: Vec<_> = (0..r.edges.len())
            .filter(|&id| classify_edge(&r, id).unwrap() == EdgeClass::Bridged)
            .collect();
        assert_eq!(bridged.len(), 1);
        assert_eq!(r.edges[bridged[0]].len(), 5);
    }

    #[test]
    fn row_width_is_linear_and_ambiguities_match() {
        let widths: Vec<u32> = (1..=4)
            .map(|n| generate_cross_pattern(n, Layout::Row).unwrap().width())
            .collect();
        assert_eq!(widths, vec![7, 11, 15, 19]);
        for n in [1, 5, 17] {
            let r = trace_all(&generate_cross_pattern(n, Layout::Row).unwrap());
            assert_eq!(r.ambiguities.len(), n);
            assert!(r.ambiguities.iter().all(|a| a.is_single_pixel()));
        }
    }

    #[test]
    fn square_rounds_up_to_a_full_grid() {
        assert_eq!(Layout::Square.cross_count(5), 9);
        assert_eq!(Layout::Square.cross_count(9), 9);
        assert_eq!(Layout::Row.cross_count(5), 5);
        let r = trace_all(&generate_cross_pattern(5, Layout::Square).unwrap());
        assert_eq!(r.ambiguities.len(), 9);
        // 12 inner links plus 12 outer arms
        assert_eq!(r.edges.len(), 24);
    }

    #[test]
    fn spaced_grid() {
        let image = cross_grid(3, 2, 9).unwrap();
        assert_eq!((image.width(), image.height()), (25, 16));
        let r = trace_all(&image);
        assert_eq!(r.ambiguities.len(), 6);
        assert!(cross_grid(2, 2, 3).is_err());
        assert!(generate_cross_pattern(0, Layout::Row).is_err());
    }

    #[test]
    fn small_figures() {
        let t = trace_all(&t_junction(2).unwrap());
        assert_eq!((t.edges.len(), t.ambiguities.len()), (3, 1));
        let x = trace_all(&x_junction(3).unwrap());
        assert_eq!((x.edges.len(), x.ambiguities.len()), (4, 1));
        let ring = trace_all(&ring(5).unwrap());
        assert_eq!((ring.edges.len(), ring.ambiguities.len()), (1, 0));
        assert_eq!(ring.edges[0].len(), 16);
    }

    #[test]
    fn circle_radius_five_has_twenty_eight_points() {
        let c = midpoint_circle(Point::new(10, 10), 5);
        assert_eq!(c.len(), 28);
        for p in &c {
            let d = ((p.x as f64 - 10.0).powi(2) + (p.y as f64 - 10.0).powi(2)).sqrt();
            assert!((d - 5.0).abs() < 0.75, "{p}");
        }
    }

    #[test]
    fn names() {
        assert_eq!("cross-row".parse::<PatternKind>().unwrap(), PatternKind::CrossRow);
        assert!("spiral".parse::<PatternKind>().is_err());
        assert_eq!("square".parse::<Layout>().unwrap(), Layout::Square);
    }
}
