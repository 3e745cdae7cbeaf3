//! Color charts: moments as RGB via `c = (m + I) / 2`, `I = (1, 1, 1)`.
//!
//! Accumulated values leave the cube, so they are brought back either by
//! component-wise clamping or by an affine rescale that sends the series
//! minimum to -1 and its maximum to +1. A strip has time on the x axis and
//! one band of rows per subject.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curves::{accumulate, AccumulatedTrack};
use crate::error::{MomentError, Result};
use crate::moment::{MomentVector, Track, TrackKind, Weights};

/// A color of `[0, 1]^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RgbColor {
    r: f64,
    g: f64,
    b: f64,
}

impl RgbColor {
    pub const BLACK: RgbColor = RgbColor {
        r: 0.0,
        g: 0.0,
        b: 0.0,
    };

    pub fn new(r: f64, g: f64, b: f64) -> Result<Self> {
        for (index, c) in [r, g, b].into_iter().enumerate() {
            if !c.is_finite() {
                return Err(MomentError::NotFinite { index });
            }
            if !(0.0..=1.0).contains(&c) {
                return Err(MomentError::OutOfRange { index, value: c });
            }
        }
        Ok(RgbColor { r, g, b })
    }

    pub fn channels(&self) -> [f64; 3] {
        [self.r, self.g, self.b]
    }

    /// 8-bit channels, `round(c * 255)` with halves rounded up.
    pub fn to_bytes(&self) -> [u8; 3] {
        self.channels().map(quantize)
    }
}

pub(crate) fn quantize(c: f64) -> u8 {
    (c.clamp(0.0, 1.0) * 255.0 + 0.5).floor() as u8
}

pub fn moment_to_rgb(m: &MomentVector) -> RgbColor {
    let [r, g, b] = m.components().map(|x| (x + 1.0) / 2.0);
    RgbColor { r, g, b }
}

pub fn rgb_to_moment(c: &RgbColor) -> MomentVector {
    MomentVector::from_array(c.channels().map(|x| 2.0 * x - 1.0))
        .expect("a valid color maps into the cube")
}

/// Component-wise truncation into `[-1, 1]`.
pub fn clamp_to_cube(value: [f64; 3]) -> MomentVector {
    MomentVector::from_array(value.map(|x| x.clamp(-1.0, 1.0)))
        .expect("clamped finite components lie in the cube")
}

/// Whether rescaling uses one range for all three components or one per
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RescaleScope {
    #[default]
    Global,
    PerComponent,
}

/// Affine map `x ↦ 2 (x - min) / (max - min) - 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaler {
    min: [f64; 3],
    max: [f64; 3],
}

impl Rescaler {
    /// Range over every component of every entry (or per component).
    pub fn fit(entries: &[[f64; 3]], scope: RescaleScope) -> Result<Self> {
        if entries.is_empty() {
            return Err(MomentError::EmptyInput);
        }
        let mut min = [f64::INFINITY; 3];
        let mut max = [f64::NEG_INFINITY; 3];
        for e in entries {
            for i in 0..3 {
                min[i] = min[i].min(e[i]);
                max[i] = max[i].max(e[i]);
            }
        }
        if scope == RescaleScope::Global {
            let lo = min.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = max.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            min = [lo; 3];
            max = [hi; 3];
        }
        if let Some(i) = (0..3).find(|&i| max[i] == min[i]) {
            return Err(MomentError::DegenerateRange {
                value: min[i],
                fallback: vec![MomentVector::ZERO; entries.len()],
            });
        }
        Ok(Rescaler { min, max })
    }

    pub fn range(&self) -> ([f64; 3], [f64; 3]) {
        (self.min, self.max)
    }

    /// Raw affine image; may leave the cube for values outside the fitted
    /// range.
    pub fn map(&self, value: [f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = 2.0 * ((value[i] - self.min[i]) / (self.max[i] - self.min[i])) - 1.0;
        }
        out
    }

    pub fn apply(&self, value: [f64; 3]) -> MomentVector {
        clamp_to_cube(self.map(value))
    }
}

/// Rescales a series of accumulated values with one global min/max.
pub fn rescale_series(entries: &[[f64; 3]]) -> Result<Vec<MomentVector>> {
    rescale_series_with(entries, RescaleScope::Global)
}

pub fn rescale_series_with(entries: &[[f64; 3]], scope: RescaleScope) -> Result<Vec<MomentVector>> {
    let rescaler = Rescaler::fit(entries, scope)?;
    Ok(entries.iter().map(|e| rescaler.apply(*e)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StripMode {
    #[default]
    Instant,
    AccumulatedClamped,
    AccumulatedRescaled,
}

impl StripMode {
    pub fn name(&self) -> &'static str {
        match self {
            StripMode::Instant => "instant",
            StripMode::AccumulatedClamped => "accumulated-clamped",
            StripMode::AccumulatedRescaled => "accumulated-rescaled",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "instant" => Some(StripMode::Instant),
            "accumulated-clamped" | "clamped" | "clamp" => Some(StripMode::AccumulatedClamped),
            "accumulated-rescaled" | "rescaled" | "rescale" => Some(StripMode::AccumulatedRescaled),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StripOptions {
    pub mode: StripMode,
    pub seconds_per_pixel: f64,
    pub row_height: u32,
    /// Left edge of the chart in minutes.
    pub start_minute: f64,
    /// Right edge; defaults to the latest moment over all rows.
    pub end_minute: Option<f64>,
    pub scope: RescaleScope,
}

impl Default for StripOptions {
    fn default() -> Self {
        StripOptions {
            mode: StripMode::Instant,
            seconds_per_pixel: 1.0,
            row_height: 24,
            start_minute: 0.0,
            end_minute: None,
            scope: RescaleScope::Global,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChartPixels {
    Rgb(Vec<RgbColor>),
    Gray(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartRow {
    pub subject: String,
    pub kind: TrackKind,
    pub y: u32,
    pub height: u32,
}

/// A raster strip chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartImage {
    pub width: u32,
    pub height: u32,
    pub pixels: ChartPixels,
    pub rows: Vec<ChartRow>,
    pub start_minute: f64,
    pub seconds_per_pixel: f64,
    pub mode: StripMode,
    pub weights: Option<Weights>,
}

/// Height in pixels of the separator between subject bands.
pub const SEPARATOR_HEIGHT: u32 = 1;

struct Geometry {
    width: u32,
    height: u32,
    columns: Vec<f64>,
    start: f64,
}

fn geometry(tracks: &[Track], opts: &StripOptions) -> Result<Geometry> {
    if tracks.is_empty() {
        return Err(MomentError::EmptyInput);
    }
    if tracks.iter().any(Track::is_empty) {
        return Err(MomentError::EmptyTrack);
    }
    let spp = opts.seconds_per_pixel;
    if !(spp.is_finite() && spp > 0.0) {
        return Err(MomentError::InvalidGeometry(format!("seconds per pixel {spp}")));
    }
    if opts.row_height == 0 {
        return Err(MomentError::InvalidGeometry("row height 0".into()));
    }
    let start = opts.start_minute;
    let end = opts.end_minute.unwrap_or_else(|| {
        tracks
            .iter()
            .filter_map(Track::last_time)
            .fold(f64::NEG_INFINITY, f64::max)
    });
    if !(start.is_finite() && end.is_finite()) || end <= start {
        return Err(MomentError::InvalidGeometry(format!(
            "time window [{start}, {end}] is empty"
        )));
    }
    let width = strip_width(end - start, spp);
    let n = tracks.len() as u32;
    let height = n * opts.row_height + (n - 1) * SEPARATOR_HEIGHT;
    let columns = (0..width).map(|x| start + x as f64 * spp / 60.0).collect();
    Ok(Geometry {
        width,
        height,
        columns,
        start,
    })
}

/// `ceil(duration / seconds_per_pixel)` for a duration in minutes.
pub fn strip_width(duration_minutes: f64, seconds_per_pixel: f64) -> u32 {
    (duration_minutes * 60.0 / seconds_per_pixel).ceil() as u32
}

/// Per-row evaluator producing the displayed (in-cube) vector at a time.
enum RowEval {
    Instant(Track),
    Clamped(AccumulatedTrack),
    Rescaled(AccumulatedTrack, Option<Rescaler>),
}

impl RowEval {
    fn new(track: &Track, opts: &StripOptions) -> Result<Self> {
        Ok(match opts.mode {
            StripMode::Instant => RowEval::Instant(track.clone()),
            StripMode::AccumulatedClamped => RowEval::Clamped(accumulate(track)?),
            StripMode::AccumulatedRescaled => {
                let acc = accumulate(track)?;
                let mut entries = acc.sums().to_vec();
                // The chart shows F = 0 left of the first moment.
                if opts.start_minute < acc.first_time() {
                    entries.push([0.0; 3]);
                }
                let rescaler = match Rescaler::fit(&entries, opts.scope) {
                    Ok(r) => Some(r),
                    Err(MomentError::DegenerateRange { .. }) => None,
                    Err(e) => return Err(e),
                };
                RowEval::Rescaled(acc, rescaler)
            }
        })
    }

    fn at(&self, t: f64) -> MomentVector {
        match self {
            RowEval::Instant(track) => {
                let v = crate::curves::eval_instant(track, t).expect("nonempty track");
                clamp_to_cube(v)
            }
            RowEval::Clamped(acc) => clamp_to_cube(acc.eval(t)),
            RowEval::Rescaled(acc, Some(r)) => r.apply(acc.eval(t)),
            RowEval::Rescaled(_, None) => MomentVector::ZERO,
        }
    }
}

fn render<P: Copy>(
    tracks: &[Track],
    opts: &StripOptions,
    separator: P,
    pixel: impl Fn(MomentVector) -> P,
) -> Result<(Geometry, Vec<P>, Vec<ChartRow>)> {
    let geo = geometry(tracks, opts)?;
    let mut pixels = Vec::with_capacity((geo.width * geo.height) as usize);
    let mut rows = Vec::with_capacity(tracks.len());
    for (i, track) in tracks.iter().enumerate() {
        if i > 0 {
            for _ in 0..SEPARATOR_HEIGHT * geo.width {
                pixels.push(separator);
            }
        }
        let eval = RowEval::new(track, opts)?;
        let line: Vec<P> = geo.columns.iter().map(|&t| pixel(eval.at(t))).collect();
        rows.push(ChartRow {
            subject: track.subject().to_string(),
            kind: track.kind(),
            y: i as u32 * (opts.row_height + SEPARATOR_HEIGHT),
            height: opts.row_height,
        });
        for _ in 0..opts.row_height {
            pixels.extend_from_slice(&line);
        }
    }
    Ok((geo, pixels, rows))
}

/// One band per track, colored by `moment_to_rgb` of the displayed value.
pub fn render_strip(tracks: &[Track], opts: &StripOptions) -> Result<ChartImage> {
    let (geo, pixels, rows) = render(tracks, opts, RgbColor::BLACK, |m| moment_to_rgb(&m))?;
    Ok(ChartImage {
        width: geo.width,
        height: geo.height,
        pixels: ChartPixels::Rgb(pixels),
        rows,
        start_minute: geo.start,
        seconds_per_pixel: opts.seconds_per_pixel,
        mode: opts.mode,
        weights: None,
    })
}

/// Single-channel strip: gray level `(Σ a_i v_i + 1) / 2` of the displayed
/// vector `v`, i.e. the weighted average of its color channels.
pub fn render_grayscale_strip(
    tracks: &[Track],
    weights: &Weights,
    opts: &StripOptions,
) -> Result<ChartImage> {
    let (geo, pixels, rows) = render(tracks, opts, 0.0, |m| {
        (weights.combine(m.components()) + 1.0) / 2.0
    })?;
    Ok(ChartImage {
        width: geo.width,
        height: geo.height,
        pixels: ChartPixels::Gray(pixels),
        rows,
        start_minute: geo.start,
        seconds_per_pixel: opts.seconds_per_pixel,
        mode: opts.mode,
        weights: Some(*weights),
    })
}

#[derive(Serialize)]
struct Sidecar<'a> {
    width: u32,
    height: u32,
    channels: &'static str,
    mode: &'static str,
    start_minute: f64,
    seconds_per_pixel: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    weights: Option<Weights>,
    separator_height: u32,
    rows: &'a [ChartRow],
}

impl ChartImage {
    pub fn is_gray(&self) -> bool {
        matches!(self.pixels, ChartPixels::Gray(_))
    }

    /// Channel values of pixel `(x, y)`; gray pixels repeat the level.
    pub fn pixel(&self, x: u32, y: u32) -> [f64; 3] {
        let i = (y * self.width + x) as usize;
        match &self.pixels {
            ChartPixels::Rgb(p) => p[i].channels(),
            ChartPixels::Gray(p) => [p[i]; 3],
        }
    }

    /// Film minute at the left edge of column `x`.
    pub fn column_time(&self, x: u32) -> f64 {
        self.start_minute + x as f64 * self.seconds_per_pixel / 60.0
    }

    fn rgb_bytes(&self) -> Vec<u8> {
        match &self.pixels {
            ChartPixels::Rgb(p) => p.iter().flat_map(RgbColor::to_bytes).collect(),
            ChartPixels::Gray(p) => p.iter().flat_map(|&g| [quantize(g); 3]).collect(),
        }
    }

    fn gray_bytes(&self) -> Vec<u8> {
        match &self.pixels {
            ChartPixels::Rgb(p) => p
                .iter()
                .map(|c| {
                    let [r, g, b] = c.channels();
                    quantize((r + g + b) / 3.0)
                })
                .collect(),
            ChartPixels::Gray(p) => p.iter().map(|&g| quantize(g)).collect(),
        }
    }

    /// Binary PPM (P6, maxval 255). Gray charts repeat the level in all
    /// three channels.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.rgb_bytes());
        out
    }

    /// Binary PGM (P5, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend(self.gray_bytes());
        out
    }

    /// PNG, 8-bit RGB or 8-bit grayscale.
    #[cfg(feature = "png")]
    pub fn to_png(&self) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width, self.height);
            enc.set_depth(png::BitDepth::Eight);
            let data = if self.is_gray() {
                enc.set_color(png::ColorType::Grayscale);
                self.gray_bytes()
            } else {
                enc.set_color(png::ColorType::Rgb);
                self.rgb_bytes()
            };
            let mut writer = enc.write_header().expect("in-memory PNG header");
            writer.write_image_data(&data).expect("in-memory PNG data");
        }
        out
    }

    /// JSON description of the axis calibration and row layout.
    pub fn sidecar_json(&self) -> String {
        let sidecar = Sidecar {
            width: self.width,
            height: self.height,
            channels: if self.is_gray() { "gray" } else { "rgb" },
            mode: self.mode.name(),
            start_minute: self.start_minute,
            seconds_per_pixel: self.seconds_per_pixel,
            weights: self.weights,
            separator_height: SEPARATOR_HEIGHT,
            rows: &self.rows,
        };
        let mut s = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        let _ = writeln!(s);
        s
    }
}
