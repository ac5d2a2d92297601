use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use edgetrace::bench::{run_benchmark, write_benchmark_csv};
use edgetrace::io::{
    load_binary_image, parse_netpbm, render_overlay, render_segments, write_bytes, write_pbm, RenderStyle, SegmentDocument,
    TraceDocument, DEFAULT_THRESHOLD,
};
use edgetrace::metrics::{segment_set_metrics, trace_metrics, write_metrics_csv};
use edgetrace::pattern::{Layout, PatternKind};
use edgetrace::pipeline::{parse_pipeline, run_pipeline};
use edgetrace::{trace_all, BinaryImage, Error, Method, Result, TraceResult};

/// Trace binary edge images into ordered edges and ambiguities.
#[derive(Parser, Debug)]
#[command(name = "edgetrace", version)]
struct Cli {
    /// Gray level (0-255) at or above which a PGM pixel counts as set.
    #[arg(long, global = true, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u8,

    /// Palette seed for rendered overlays.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Print nothing on success.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Segment an image and optionally write a document and an overlay.
    Trace {
        input: PathBuf,
        #[arg(long, default_value = "ours")]
        method: Method,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Apply postprocessing steps to a trace document or an image.
    Post {
        input: PathBuf,
        /// Steps separated by ';', e.g. "remove:dangling,<10,x2; connect".
        #[arg(long)]
        ops: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compute segmentation metrics for one or more methods.
    Metrics {
        input: PathBuf,
        /// Comma-separated methods; all four when omitted.
        #[arg(long, value_delimiter = ',')]
        method: Vec<Method>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Time a method on cross patterns of growing size.
    Bench {
        #[arg(long, default_value = "row")]
        layout: Layout,
        /// Comma-separated cross counts.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        runs: usize,
        #[arg(long, default_value = "ours")]
        method: Method,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Write a synthetic PBM image.
    Generate {
        /// cross-row, cross-square, ring, t-junction, x-junction or circle.
        #[arg(long)]
        pattern: PatternKind,
        /// Cross count, ring side, arm length or circle radius.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// JSON document path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// PPM overlay path.
    #[arg(long)]
    render: Option<PathBuf>,
    /// Overlay magnification.
    #[arg(long, default_value_t = 1)]
    scale: u32,
}

impl OutputArgs {
    fn style(&self, seed: u64) -> RenderStyle {
        RenderStyle {
            palette_seed: seed,
            scale: self.scale,
            ..RenderStyle::default()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("edgetrace: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}

fn say(cli: &Cli, line: impl AsRef<str>) {
    if !cli.quiet {
        println!("{}", line.as_ref());
    }
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// A trace document when the file starts with `{`, otherwise an image to
/// trace. Also returns the name of the original image.
fn load_trace(path: &Path, threshold: u8) -> Result<(TraceResult, String)> {
    let head = fs::read(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    if head.iter().find(|b| !b.is_ascii_whitespace()) == Some(&b'{') {
        let doc = String::from_utf8(head)
            .map_err(|e| e.to_string())
            .and_then(|text| TraceDocument::from_json(&text));
        let parsed = doc.and_then(|doc| {
            let source = doc.image.source.clone().unwrap_or_else(|| source_name(path));
            doc.to_result().map(|r| (r, source))
        });
        parsed.map_err(|reason| Error::Document {
            path: path.to_path_buf(),
            reason,
        })
    } else {
        let image = parse_netpbm(&head, threshold).map_err(|e| e.at(path))?;
        Ok((trace_all(&image), source_name(path)))
    }
}

fn write_trace_outputs(cli: &Cli, result: &TraceResult, source: &str, output: &OutputArgs) -> Result<()> {
    if let Some(out) = &output.out {
        TraceDocument::from_result(result, Some(source)).write(out)?;
    }
    if let Some(render) = &output.render {
        write_bytes(render, &render_overlay(result, &output.style(cli.seed))?)?;
    }
    say(
        cli,
        format!(
            "{source}: {} edges, {} ambiguities",
            result.edges.len(),
            result.ambiguities.len()
        ),
    );
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Trace { input, method, output } => {
            let image = load_binary_image(input, cli.threshold)?;
            let source = source_name(input);
            if *method == Method::Ours {
                return write_trace_outputs(cli, &trace_all(&image), &source, output);
            }
            let set = method.segment(&image);
            if let Some(out) = &output.out {
                SegmentDocument::from_set(&image, &set, Some(&source)).write(out)?;
            }
            if let Some(render) = &output.render {
                let ppm = render_segments(image.width(), image.height(), &set.segments, [], &output.style(cli.seed))?;
                write_bytes(render, &ppm)?;
            }
            say(cli, format!("{source}: {} segments ({method})", set.len()));
            Ok(())
        }
        Command::Post { input, ops, output } => {
            let steps = parse_pipeline(ops)?;
            let (traced, source) = load_trace(input, cli.threshold)?;
            write_trace_outputs(cli, &run_pipeline(&traced, &steps)?, &source, output)
        }
        Command::Metrics { input, method, csv } => {
            let image = load_binary_image(input, cli.threshold)?;
            let methods = if method.is_empty() { Method::ALL.to_vec() } else { method.clone() };
            let mut rows = Vec::with_capacity(methods.len());
            for m in methods {
                let report = match m {
                    Method::Ours => trace_metrics(&image, &trace_all(&image))?,
                    other => segment_set_metrics(&image, &other.segment(&image))?,
                };
                say(
                    cli,
                    format!(
                        "{:<5} px/segment {:>8.3}  segments/CC {:>8.3}  segment/set px {:>6.3}  assigned 0/1/2/3/>3 {}",
                        m.label(),
                        report.avg_pixels_per_segment,
                        report.segments_per_component,
                        report.segment_pixel_ratio,
                        report
                            .assignment_histogram
                            .iter()
                            .map(|f| format!("{:.1}%", f * 100.0))
                            .collect::<Vec<_>>()
                            .join("/")
                    ),
                );
                rows.push((m, report));
            }
            if let Some(path) = csv {
                let mut bytes = Vec::new();
                write_metrics_csv(&mut bytes, &rows)?;
                write_bytes(path, &bytes)?;
            }
            Ok(())
        }
        Command::Bench {
            layout,
            sizes,
            runs,
            method,
            csv,
        } => {
            let series = run_benchmark(*method, *layout, sizes, *runs)?;
            for (n, ms) in series.sizes.iter().zip(&series.mean_ms) {
                say(cli, format!("{method} {layout} n={n}: {ms:.4} ms"));
            }
            if let Some(fit) = series.fit() {
                say(cli, format!("linear fit: R^2 = {:.4}", fit.r_squared));
            }
            if let Some(path) = csv {
                let mut bytes = Vec::new();
                write_benchmark_csv(&mut bytes, &[series])?;
                write_bytes(path, &bytes)?;
            }
            Ok(())
        }
        Command::Generate { pattern, n, out } => {
            let image: BinaryImage = pattern.generate(*n)?;
            write_pbm(&image, out)?;
            say(
                cli,
                format!("{}: {}x{}, {} set pixels", out.display(), image.width(), image.height(), image.count_set()),
            );
            Ok(())
        }
    }
}
