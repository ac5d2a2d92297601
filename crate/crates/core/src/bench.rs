//! Runtime scaling over cross patterns of growing size.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::baselines::Method;
use crate::error::{Error, Result};
use crate::metrics::{linear_fit, LinearFit};
use crate::pattern::{generate_cross_pattern, Layout};

/// Mean runtimes of one method over pattern sizes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkSeries {
    pub method: Method,
    pub layout: Layout,
    /// Actual cross counts, strictly increasing.
    pub sizes: Vec<usize>,
    pub mean_ms: Vec<f64>,
    pub runs: usize,
}

impl BenchmarkSeries {
    pub fn fit(&self) -> Option<LinearFit> {
        let xs: Vec<f64> = self.sizes.iter().map(|&n| n as f64).collect();
        linear_fit(&xs, &self.mean_ms)
    }
}

/// Times `method` on a generated pattern per requested size, averaging
/// `runs` sequential calls. Only the segmentation call is timed.
pub fn run_benchmark(method: Method, layout: Layout, sizes: &[usize], runs: usize) -> Result<BenchmarkSeries> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no benchmark sizes given".into()));
    }
    if runs == 0 {
        return Err(Error::InvalidParameter("at least one run per size is required".into()));
    }
    let actual: Vec<usize> = sizes.iter().map(|&n| layout.cross_count(n)).collect();
    if actual.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(format!(
            "sizes must be strictly increasing after rounding to the layout, got {actual:?}"
        )));
    }
    let mut mean_ms = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let image = generate_cross_pattern(n, layout)?;
        let start = Instant::now();
        for _ in 0..runs {
            black_box(method.segment(black_box(&image)));
        }
        let total = start.elapsed().as_secs_f64() * 1e3;
        // positive even when a coarse clock reads zero
        mean_ms.push((total / runs as f64).max(f64::MIN_POSITIVE));
    }
    Ok(BenchmarkSeries {
        method,
        layout,
        sizes: actual,
        mean_ms,
        runs,
    })
}

/// Writes rows `method,layout,n,mean_ms,runs` with a header.
pub fn write_benchmark_csv<W: Write>(writer: W, series: &[BenchmarkSeries]) -> Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["method", "layout", "n", "mean_ms", "runs"])?;
    for s in series {
        for (n, ms) in s.sizes.iter().zip(&s.mean_ms) {
            csv.write_record([
                s.method.label().to_string(),
                s.layout.label().to_string(),
                n.to_string(),
                format!("{ms:.6}"),
                s.runs.to_string(),
            ])?;
        }
    }
    csv.flush().map_err(csv::Error::from)?;
    Ok(())
}
