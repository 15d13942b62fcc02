//! Minimal deterministic SVG line charts.
//!
//! One polyline per curve on linear axes auto-scaled to the data with a 5%
//! margin, round-number ticks, a legend from the curve labels. Rendering
//! is a pure function of the input, so identical data produce
//! byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::series::{Period, Series};

/// A labelled series to draw.
#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub series: Series,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 44.0;
const BOTTOM: f64 = 52.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

fn period_x(p: Period) -> f64 {
    match p {
        Period::Year(y) => y as f64,
        Period::Quarter(y, q) => y as f64 + (q as f64 - 1.0) / 4.0,
    }
}

/// Round-number tick positions covering `[lo, hi]` at no more than
/// `max_ticks` points: steps are 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64, max_ticks: usize) -> (Vec<f64>, usize) {
    let range = (hi - lo).max(1e-12);
    let raw = range / (max_ticks - 1) as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| range / s <= (max_ticks - 1) as f64)
        .unwrap_or(10.0 * mag);
    let decimals = if step >= 1.0 {
        0
    } else {
        (-step.log10()).ceil() as usize
    };
    let first = (lo / step).ceil() * step;
    let mut out = Vec::new();
    let mut t = first;
    while t <= hi + 1e-9 * range {
        // snap to the grid so labels never carry float dust
        out.push((t / step).round() * step);
        t += step;
    }
    (out, decimals)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the chart as an SVG document.
pub fn render_svg(curves: &[Curve], title: &str) -> Result<String> {
    if curves.is_empty() {
        return Err(Error::InvalidArgument {
            detail: "cannot render an empty curve set".into(),
        });
    }
    let freq = curves[0].series.frequency();
    for c in &curves[1..] {
        if c.series.frequency() != freq {
            return Err(Error::FrequencyMismatch {
                left: freq,
                right: c.series.frequency(),
            });
        }
    }
    if curves.iter().all(|c| c.series.is_empty()) {
        return Err(Error::InvalidArgument {
            detail: "all curves are empty".into(),
        });
    }

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for c in curves {
        for (p, v) in c.series.iter() {
            let x = period_x(p);
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    let pad = |lo: &mut f64, hi: &mut f64| {
        let span = (*hi - *lo).abs();
        let m = if span > 0.0 {
            0.05 * span
        } else {
            0.5 * lo.abs().max(1.0)
        };
        *lo -= m;
        *hi += m;
    };
    pad(&mut x_min, &mut x_max);
    pad(&mut y_min, &mut y_max);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{:.2}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{LEFT:.2}" y="{TOP:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="black" stroke-width="1"/>"#
    )
    .unwrap();

    let (xticks, xdec) = ticks(x_min, x_max, 10);
    for t in &xticks {
        let x = sx(*t);
        writeln!(
            s,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#cccccc" stroke-width="0.5"/>"##,
            TOP,
            TOP + plot_h
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="middle">{:.*}</text>"#,
            TOP + plot_h + 16.0,
            xdec,
            t
        )
        .unwrap();
    }
    let (yticks, ydec) = ticks(y_min, y_max, 10);
    for t in &yticks {
        let y = sy(*t);
        writeln!(
            s,
            r##"<line x1="{LEFT:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#cccccc" stroke-width="0.5"/>"##,
            LEFT + plot_w
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{:.*}</text>"#,
            LEFT - 6.0,
            y + 4.0,
            ydec,
            t
        )
        .unwrap();
    }

    for (i, c) in curves.iter().enumerate() {
        if c.series.is_empty() {
            continue;
        }
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (p, v) in c.series.iter() {
            write!(points, "{:.2},{:.2} ", sx(period_x(p)), sy(v)).unwrap();
        }
        writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            points.trim_end()
        )
        .unwrap();
    }

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let y = TOP + 14.0 + 16.0 * i as f64;
        let x = LEFT + plot_w - 150.0;
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="2"/>"#,
            x + 22.0
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{}</text>"#,
            x + 28.0,
            y + 4.0,
            escape(&c.label)
        )
        .unwrap();
    }

    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

/// Renders and writes the chart to `path`.
pub fn emit_svg(curves: &[Curve], title: &str, path: &Path) -> Result<()> {
    let doc = render_svg(curves, title)?;
    std::fs::write(path, doc).map_err(|e| Error::io(path.display().to_string(), e))
}
