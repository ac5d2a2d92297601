use std::path::Path;

use super::netpbm::write_file;
use crate::error::{Error, Result};
use crate::grid::Point;
use crate::trace::TraceResult;

pub type Rgb = [u8; 3];

/// Colors and magnification of an overlay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderStyle {
    /// Rotates the hue sequence; edge `i` gets the same color for a fixed seed.
    pub palette_seed: u64,
    /// Ambiguity points and pixels shared by several segments.
    pub highlight: Rgb,
    /// Output pixels per image pixel, at least 1.
    pub scale: u32,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            palette_seed: 0,
            highlight: [255, 255, 255],
            scale: 1,
        }
    }
}

const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_895;

impl RenderStyle {
    /// Color of segment `index`: hues spaced by the golden ratio, fully
    /// saturated enough to never equal the white default highlight.
    pub fn segment_color(&self, index: usize) -> Rgb {
        let offset = (self.palette_seed % 1_000_003) as f64 * GOLDEN_RATIO_CONJUGATE;
        let hue = (offset + index as f64 * GOLDEN_RATIO_CONJUGATE).fract();
        hsv_to_rgb(hue, 0.85, 1.0)
    }
}

fn hsv_to_rgb(h: f64, s: f64, v: f64) -> Rgb {
    let sector = (h * 6.0).floor();
    let f = h * 6.0 - sector;
    let (p, q, t) = (v * (1.0 - s), v * (1.0 - f * s), v * (1.0 - (1.0 - f) * s));
    let (r, g, b) = match sector as i64 % 6 {
        0 => (v, t, p),
        1 => (q, v, p),
        2 => (p, v, t),
        3 => (p, q, v),
        4 => (t, p, v),
        _ => (v, p, q),
    };
    [r, g, b].map(|c| (c * 255.0).round() as u8)
}

/// Draws segments in palette colors on black, with `highlighted` points and
/// points shared by several segments in the highlight color. Returns a
/// binary PPM (P6).
pub fn render_segments(
    width: u32,
    height: u32,
    segments: &[Vec<Point>],
    highlighted: impl IntoIterator<Item = Point>,
    style: &RenderStyle,
) -> Result<Vec<u8>> {
    if style.scale == 0 {
        return Err(Error::InvalidParameter("render scale must be at least 1".into()));
    }
    let (w, h) = (width as usize, height as usize);
    let mut owner: Vec<Option<usize>> = vec![None; w * h];
    let mut shared = vec![false; w * h];
    for (id, seg) in segments.iter().enumerate() {
        for p in seg.iter().filter(|p| p.x < width && p.y < height) {
            let i = p.y as usize * w + p.x as usize;
            match owner[i] {
                None => owner[i] = Some(id),
                Some(o) if o != id => shared[i] = true,
                Some(_) => {}
            }
        }
    }
    for p in highlighted.into_iter().filter(|p| p.x < width && p.y < height) {
        shared[p.y as usize * w + p.x as usize] = true;
    }

    let s = style.scale as usize;
    let (ow, oh) = (w * s, h * s);
    let mut out = format!("P6\n{ow} {oh}\n255\n").into_bytes();
    let header = out.len();
    out.resize(header + ow * oh * 3, 0);
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            let color = if shared[i] {
                style.highlight
            } else if let Some(id) = owner[i] {
                style.segment_color(id)
            } else {
                continue;
            };
            for sy in 0..s {
                let row = header + ((y * s + sy) * ow + x * s) * 3;
                for sx in 0..s {
                    out[row + sx * 3..row + sx * 3 + 3].copy_from_slice(&color);
                }
            }
        }
    }
    Ok(out)
}

/// Renders a trace: one color per edge, ambiguities highlighted on top.
pub fn render_overlay(result: &TraceResult, style: &RenderStyle) -> Result<Vec<u8>> {
    let segments: Vec<Vec<Point>> = result.edges.iter().map(|e| e.points.clone()).collect();
    let ambiguity_points = result.ambiguities.iter().flat_map(|a| a.points.iter().copied());
    render_segments(result.width(), result.height(), &segments, ambiguity_points, style)
}

pub fn write_overlay(result: &TraceResult, style: &RenderStyle, path: &Path) -> Result<()> {
    write_file(path, &render_overlay(result, style)?)
}
