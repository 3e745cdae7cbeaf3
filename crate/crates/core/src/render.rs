//! SVG curve plots and 3D point export.
//!
//! Plots use a fixed 960×480 canvas with 40 px margins. Time runs left to
//! right in minutes; axis functions are drawn red, green and blue, the
//! combined function black. Instant plots span values `[-1, 1]`;
//! accumulated plots are auto-ranged with 5% padding.

use std::fmt::Write as _;

use crate::curves::{sample, CurveFn, Grid, SampledSeries, SeriesValues};
use crate::error::{MomentError, Result};
use crate::moment::{Track, Weights};

pub const CANVAS_WIDTH: f64 = 960.0;
pub const CANVAS_HEIGHT: f64 = 480.0;
pub const MARGIN: f64 = 40.0;
pub const STROKE_WIDTH: f64 = 2.0;
/// Padding added on each side of an auto-ranged value axis, as a fraction
/// of the data span.
pub const AUTO_RANGE_PADDING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesRole {
    Axis(usize),
    Combined,
}

impl SeriesRole {
    pub fn color(&self) -> &'static str {
        match self {
            SeriesRole::Axis(0) => "#ff0000",
            SeriesRole::Axis(1) => "#00a000",
            SeriesRole::Axis(_) => "#0000ff",
            SeriesRole::Combined => "#000000",
        }
    }

    pub fn name(&self) -> String {
        match self {
            SeriesRole::Axis(i) => format!("axis{i}"),
            SeriesRole::Combined => "combined".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSeries {
    pub role: SeriesRole,
    pub label: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

/// Affine map between (minutes, value) and canvas pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotFrame {
    pub time_range: (f64, f64),
    pub value_range: (f64, f64),
}

impl PlotFrame {
    const PLOT_WIDTH: f64 = CANVAS_WIDTH - 2.0 * MARGIN;
    const PLOT_HEIGHT: f64 = CANVAS_HEIGHT - 2.0 * MARGIN;

    pub fn to_px(&self, t: f64, v: f64) -> (f64, f64) {
        let (t0, t1) = self.time_range;
        let (v0, v1) = self.value_range;
        let x = MARGIN + (t - t0) / (t1 - t0) * Self::PLOT_WIDTH;
        let y = MARGIN + (v1 - v) / (v1 - v0) * Self::PLOT_HEIGHT;
        (x, y)
    }

    pub fn from_px(&self, x: f64, y: f64) -> (f64, f64) {
        let (t0, t1) = self.time_range;
        let (v0, v1) = self.value_range;
        let t = t0 + (x - MARGIN) / Self::PLOT_WIDTH * (t1 - t0);
        let v = v1 - (y - MARGIN) / Self::PLOT_HEIGHT * (v1 - v0);
        (t, v)
    }

    /// Value change corresponding to one vertical pixel.
    pub fn value_per_px(&self) -> f64 {
        (self.value_range.1 - self.value_range.0) / Self::PLOT_HEIGHT
    }

    pub fn time_per_px(&self) -> f64 {
        (self.time_range.1 - self.time_range.0) / Self::PLOT_WIDTH
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    /// Free-form provenance line written into the SVG description.
    pub note: String,
    pub series: Vec<PlotSeries>,
    pub frame: PlotFrame,
}

fn extent(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })
}

/// `[min, max]` widened by 5% of the span on each side.
pub fn auto_range(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    let pad = if span > 0.0 {
        span * AUTO_RANGE_PADDING
    } else {
        lo.abs().max(1.0) * AUTO_RANGE_PADDING
    };
    (lo - pad, hi + pad)
}

impl PlotSpec {
    /// Frame fitted to the series: time span of the data, value range
    /// `[-1, 1]` unless `accumulated`, in which case auto-ranged.
    pub fn new(title: impl Into<String>, series: Vec<PlotSeries>, accumulated: bool) -> Result<Self> {
        if series.is_empty() || series.iter().all(|s| s.times.is_empty()) {
            return Err(MomentError::EmptySeries);
        }
        let (t0, t1) = extent(series.iter().flat_map(|s| s.times.iter().copied()))
            .expect("nonempty series");
        let time_range = if t1 > t0 { (t0, t1) } else { (t0 - 0.5, t1 + 0.5) };
        let (v0, v1) = extent(series.iter().flat_map(|s| s.values.iter().copied()))
            .expect("nonempty series");
        let value_range = if accumulated {
            auto_range(v0, v1)
        } else {
            ((-1.0f64).min(v0), 1.0f64.max(v1))
        };
        Ok(PlotSpec {
            title: title.into(),
            note: String::new(),
            series,
            frame: PlotFrame {
                time_range,
                value_range,
            },
        })
    }

    /// One plot series per channel of a sampled function: three axis
    /// series for vector functions, a single combined series otherwise.
    pub fn from_sampled(title: impl Into<String>, sampled: &SampledSeries) -> Result<Self> {
        let axes = sampled.kind.axes();
        let series = match &sampled.values {
            SeriesValues::Vector(_) => (0..3)
                .map(|i| PlotSeries {
                    role: SeriesRole::Axis(i),
                    label: format!(
                        "{} (+{} / -{})",
                        axes[i],
                        axes[i].positive_pole(),
                        axes[i].negative_pole()
                    ),
                    times: sampled.times.clone(),
                    values: sampled.values.channel(i),
                })
                .collect(),
            SeriesValues::Scalar(v) => vec![PlotSeries {
                role: SeriesRole::Combined,
                label: if sampled.function.is_accumulated() {
                    "attraction F\u{304}".to_string()
                } else {
                    "combined f\u{304}".to_string()
                },
                times: sampled.times.clone(),
                values: v.clone(),
            }],
        };
        let mut spec = PlotSpec::new(title, series, sampled.function.is_accumulated())?;
        let mut note = format!("function {}", sampled.function);
        if let Some(d) = sampled.function.degree() {
            let _ = write!(note, "; degree {d}");
        }
        if let Some(w) = sampled.weights {
            let [a, b, c] = w.as_array();
            let _ = write!(note, "; weights {a}, {b}, {c}");
        }
        if let Some(s) = sampled.step_seconds {
            let _ = write!(note, "; step {s} s");
        }
        spec.note = note;
        Ok(spec)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Renders the spec as an SVG 1.1 document. Same spec, same bytes.
pub fn plot_curves(spec: &PlotSpec) -> Result<String> {
    if spec.series.is_empty() {
        return Err(MomentError::EmptySeries);
    }
    let f = &spec.frame;
    let (t0, t1) = f.time_range;
    let (v0, v1) = f.value_range;
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = CANVAS_WIDTH,
        h = CANVAS_HEIGHT
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&spec.title));
    let _ = writeln!(
        out,
        "<desc>time [{t0}, {t1}] min; value [{v0}, {v1}]{}{}</desc>",
        if spec.note.is_empty() { "" } else { "; " },
        escape(&spec.note)
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{CANVAS_WIDTH}\" height=\"{CANVAS_HEIGHT}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        out,
        "<rect x=\"{MARGIN}\" y=\"{MARGIN}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>",
        CANVAS_WIDTH - 2.0 * MARGIN,
        CANVAS_HEIGHT - 2.0 * MARGIN
    );
    if v0 <= 0.0 && 0.0 <= v1 {
        let (xa, y) = f.to_px(t0, 0.0);
        let (xb, _) = f.to_px(t1, 0.0);
        let _ = writeln!(
            out,
            "<line class=\"zero\" x1=\"{xa:.2}\" y1=\"{y:.2}\" x2=\"{xb:.2}\" y2=\"{y:.2}\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>"
        );
    }
    // axis labels
    let text = |out: &mut String, x: f64, y: f64, anchor: &str, s: &str| {
        let _ = writeln!(
            out,
            "<text x=\"{x:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"{anchor}\">{}</text>",
            escape(s)
        );
    };
    text(&mut out, MARGIN, CANVAS_HEIGHT - MARGIN + 16.0, "start", &format!("{t0:.2} min"));
    text(&mut out, CANVAS_WIDTH - MARGIN, CANVAS_HEIGHT - MARGIN + 16.0, "end", &format!("{t1:.2} min"));
    text(&mut out, MARGIN - 4.0, MARGIN + 4.0, "end", &format!("{v1:.2}"));
    text(&mut out, MARGIN - 4.0, CANVAS_HEIGHT - MARGIN + 4.0, "end", &format!("{v0:.2}"));
    text(&mut out, CANVAS_WIDTH / 2.0, MARGIN - 16.0, "middle", &spec.title);

    for s in &spec.series {
        let points: Vec<String> = s
            .times
            .iter()
            .zip(&s.values)
            .map(|(&t, &v)| {
                let (x, y) = f.to_px(t, v);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            out,
            "<polyline class=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"{STROKE_WIDTH}\" stroke-linejoin=\"round\" points=\"{}\"/>",
            s.role.name(),
            s.role.color(),
            points.join(" ")
        );
    }
    for (i, s) in spec.series.iter().enumerate() {
        let y = MARGIN + 16.0 + 16.0 * i as f64;
        let x = MARGIN + 8.0;
        let _ = writeln!(
            out,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"{STROKE_WIDTH}\"/>",
            y - 4.0,
            x + 16.0,
            y - 4.0,
            s.role.color()
        );
        let _ = writeln!(
            out,
            "<text x=\"{:.2}\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            x + 22.0,
            escape(&s.label)
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Samples `function` of `track` and plots it.
pub fn plot_track(track: &Track, function: CurveFn, weights: &Weights, grid: &Grid) -> Result<String> {
    let sampled = sample(track, function, weights, grid)?;
    let title = format!("{} ({}): {}", track.subject(), track.kind(), function);
    plot_curves(&PlotSpec::from_sampled(title, &sampled)?)
}

/// Extracts the vertices of every `<polyline>` in document order.
pub fn polyline_vertices(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.lines()
        .filter(|l| l.starts_with("<polyline"))
        .filter_map(|l| {
            let start = l.find("points=\"")? + "points=\"".len();
            let end = start + l[start..].find('"')?;
            Some(
                l[start..end]
                    .split_whitespace()
                    .filter_map(|p| {
                        let (x, y) = p.split_once(',')?;
                        Some((x.parse().ok()?, y.parse().ok()?))
                    })
                    .collect(),
            )
        })
        .collect()
}

/// CSV rows `t,x,y,z` (six decimals) of the parametric curve
/// `(f_0, f_1, f_2)` or `(F_0, F_1, F_2)`.
pub fn export_curve3d(track: &Track, accumulated: bool, grid: &Grid) -> Result<String> {
    let function = if accumulated {
        CurveFn::Accumulated
    } else {
        CurveFn::Instant
    };
    let sampled = sample(track, function, &Weights::uniform(), grid)?;
    Ok(curve3d_csv(&sampled))
}

pub fn curve3d_csv(sampled: &SampledSeries) -> String {
    let mut out = String::from("t,x,y,z\n");
    let rows: Vec<[f64; 3]> = match &sampled.values {
        SeriesValues::Vector(v) => v.clone(),
        SeriesValues::Scalar(v) => v.iter().map(|&x| [x, x, x]).collect(),
    };
    for (t, [x, y, z]) in sampled.times.iter().zip(rows) {
        let _ = writeln!(out, "{t:.6},{x:.6},{y:.6},{z:.6}");
    }
    out
}
