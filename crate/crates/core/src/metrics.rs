//! Segmentation quality metrics and a least-squares line fit for runtime
//! scaling.

use std::io::Write;

use serde::Serialize;

use crate::baselines::{component_labels, Method, SegmentSet};
use crate::error::{Error, Result};
use crate::grid::{BinaryImage, Point};
use crate::trace::TraceResult;

/// Histogram bins: pixels in 0, 1, 2, 3 and more than 3 segments.
pub const HISTOGRAM_BINS: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsReport {
    /// Segment entries (with repeats) per segment.
    pub avg_pixels_per_segment: f64,
    /// Segments per 8-connected component.
    pub segments_per_component: f64,
    /// Segment entries (with repeats) per set pixel.
    pub segment_pixel_ratio: f64,
    /// Fraction of set pixels lying in 0, 1, 2, 3 and >3 distinct segments.
    pub assignment_histogram: [f64; HISTOGRAM_BINS],
    pub segment_count: usize,
    pub component_count: usize,
    pub segment_pixels: usize,
    pub set_pixels: usize,
}

impl MetricsReport {
    /// Pixel counts per histogram bin, recovered from the fractions.
    pub fn histogram_counts(&self) -> [usize; HISTOGRAM_BINS] {
        self.assignment_histogram
            .map(|f| (f * self.set_pixels as f64).round() as usize)
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Metrics of arbitrary segments over `image`. Every segment point must be
/// a set pixel of the image.
pub fn compute_metrics(image: &BinaryImage, segments: &[Vec<Point>]) -> Result<MetricsReport> {
    let width = image.width() as usize;
    let mut per_pixel = vec![0usize; width * image.height() as usize];
    // last segment that counted each pixel, so repeats within a segment count once
    let mut last_seen = vec![usize::MAX; per_pixel.len()];
    let mut segment_pixels = 0;
    for (id, segment) in segments.iter().enumerate() {
        for &p in segment {
            if !image.is_set(p) {
                return Err(Error::Mismatch(format!("segment {id} point {p} is not a set pixel of the image")));
            }
            let idx = p.y as usize * width + p.x as usize;
            if last_seen[idx] != id {
                last_seen[idx] = id;
                per_pixel[idx] += 1;
            }
            segment_pixels += 1;
        }
    }

    let set_pixels = image.count_set();
    let mut counts = [0usize; HISTOGRAM_BINS];
    for (idx, &v) in image.pixels().iter().enumerate() {
        if v != 0 {
            counts[per_pixel[idx].min(HISTOGRAM_BINS - 1)] += 1;
        }
    }
    let (_, component_count) = component_labels(image);
    Ok(MetricsReport {
        avg_pixels_per_segment: ratio(segment_pixels, segments.len()),
        segments_per_component: ratio(segments.len(), component_count),
        segment_pixel_ratio: ratio(segment_pixels, set_pixels),
        assignment_histogram: counts.map(|c| ratio(c, set_pixels)),
        segment_count: segments.len(),
        component_count,
        segment_pixels,
        set_pixels,
    })
}

pub fn segment_set_metrics(image: &BinaryImage, set: &SegmentSet) -> Result<MetricsReport> {
    compute_metrics(image, &set.segments)
}

/// Metrics of a trace over `image`. Edges are the segments; ambiguity
/// points outside every edge land in the 0-segment bin.
pub fn trace_metrics(image: &BinaryImage, result: &TraceResult) -> Result<MetricsReport> {
    if (image.width(), image.height()) != (result.width(), result.height()) {
        return Err(Error::Mismatch(format!(
            "image is {}x{} but the trace is {}x{}",
            image.width(),
            image.height(),
            result.width(),
            result.height()
        )));
    }
    let segments: Vec<Vec<Point>> = result.edges.iter().map(|e| e.points.clone()).collect();
    compute_metrics(image, &segments)
}

/// Writes one CSV row per method's report.
pub fn write_metrics_csv<W: Write>(writer: W, rows: &[(Method, MetricsReport)]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record([
        "method",
        "avg_pixels_per_segment",
        "segments_per_component",
        "segment_pixel_ratio",
        "bin_0",
        "bin_1",
        "bin_2",
        "bin_3",
        "bin_over_3",
        "segments",
        "components",
        "segment_pixels",
        "set_pixels",
    ])?;
    for (method, r) in rows {
        let mut record = vec![
            method.label().to_string(),
            format!("{:.6}", r.avg_pixels_per_segment),
            format!("{:.6}", r.segments_per_component),
            format!("{:.6}", r.segment_pixel_ratio),
        ];
        record.extend(r.assignment_histogram.iter().map(|f| format!("{f:.6}")));
        record.extend([r.segment_count, r.component_count, r.segment_pixels, r.set_pixels].map(|n| n.to_string()));
        csv.write_record(&record)?;
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 when `y` is constant.
    pub r_squared: f64,
}

/// Fits a line through `(x, y)` pairs. `None` for fewer than two points or
/// when all `x` are equal.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}
