//! Track summaries and cross-track comparison of attraction curves.

use std::fmt::Write as _;

use serde::Serialize;

use crate::curves::{accumulate, align_tracks, sample, CurveFn, Grid, SampledSeries, SeriesValues};
use crate::error::{MomentError, Result};
use crate::moment::{Track, TrackKind, Weights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Rising,
    Falling,
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendInterval {
    pub start: f64,
    pub end: f64,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackSummary {
    pub subject: String,
    pub kind: TrackKind,
    pub moments: usize,
    /// `M_N`
    pub final_accumulated: [f64; 3],
    /// `F̄(t_N)`
    pub final_combined: f64,
    pub accumulated_min: [f64; 3],
    pub accumulated_max: [f64; 3],
    /// Share of `[t_1, t_N]` where `F̄ > 0`.
    pub positive_fraction: f64,
    /// `∫ F̄ dt` over `[t_1, t_N]`, in value·minutes.
    pub combined_area: f64,
    /// Maximal runs of equal slope sign of `F̄`, partitioning `[t_1, t_N]`.
    pub intervals: Vec<TrendInterval>,
}

fn trend_of(slope: f64) -> Trend {
    if slope > 0.0 {
        Trend::Rising
    } else if slope < 0.0 {
        Trend::Falling
    } else {
        Trend::Flat
    }
}

/// Length of `[t0, t1]` on which the line through `(t0, g0)`, `(t1, g1)`
/// is strictly positive.
fn positive_length(t0: f64, t1: f64, g0: f64, g1: f64) -> f64 {
    match (g0 > 0.0, g1 > 0.0) {
        (true, true) => t1 - t0,
        (false, false) => 0.0,
        (true, false) => (t1 - t0) * g0 / (g0 - g1),
        (false, true) => (t1 - t0) * g1 / (g1 - g0),
    }
}

/// Statistics of the exact piecewise-linear `F_i` and `F̄` of a track.
pub fn summarize(track: &Track, weights: &Weights) -> Result<TrackSummary> {
    let acc = accumulate(track)?;
    let times = acc.times();
    let sums = acc.sums();
    let combined: Vec<f64> = sums.iter().map(|m| weights.combine(*m)).collect();

    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for m in sums {
        for i in 0..3 {
            lo[i] = lo[i].min(m[i]);
            hi[i] = hi[i].max(m[i]);
        }
    }

    let n = times.len();
    let (t_first, t_last) = (times[0], times[n - 1]);
    let mut intervals: Vec<TrendInterval> = Vec::new();
    let mut positive = 0.0;
    let mut area = 0.0;
    for k in 0..n.saturating_sub(1) {
        let (t0, t1) = (times[k], times[k + 1]);
        let (g0, g1) = (combined[k], combined[k + 1]);
        positive += positive_length(t0, t1, g0, g1);
        area += 0.5 * (g0 + g1) * (t1 - t0);
        let trend = trend_of(g1 - g0);
        match intervals.last_mut() {
            Some(last) if last.trend == trend => last.end = t1,
            _ => intervals.push(TrendInterval {
                start: t0,
                end: t1,
                trend,
            }),
        }
    }
    let positive_fraction = if n == 1 {
        intervals.push(TrendInterval {
            start: t_first,
            end: t_last,
            trend: Trend::Flat,
        });
        if combined[0] > 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        (positive / (t_last - t_first)).clamp(0.0, 1.0)
    };

    Ok(TrackSummary {
        subject: track.subject().to_string(),
        kind: track.kind(),
        moments: n,
        final_accumulated: acc.final_value(),
        final_combined: combined[n - 1],
        accumulated_min: lo,
        accumulated_max: hi,
        positive_fraction,
        combined_area: area,
        intervals,
    })
}

/// Pearson correlation. Identical series give exactly 1; otherwise a
/// series with zero variance gives 0.
pub fn correlation(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "series lengths differ");
    let n = x.len() as f64;
    if x.is_empty() {
        return 0.0;
    }
    if x == y {
        return 1.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankEntry {
    pub label: String,
    pub final_value: f64,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub offset_minutes: f64,
    pub weights: Weights,
    pub step_seconds: f64,
    /// Shared window `[offset, min_j t_N(j)]` after alignment.
    pub window: [f64; 2],
    pub labels: Vec<String>,
    /// Aligned first-moment time of every input (all equal `offset`).
    pub first_times: Vec<f64>,
    /// Aligned `F̄` sampled on the shared window.
    pub series: Vec<SampledSeries>,
    /// Symmetric, unit diagonal.
    pub similarity: Vec<Vec<f64>>,
    /// Inputs ordered by `F̄` at the end of the window, highest first.
    pub ranking: Vec<RankEntry>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareOptions {
    pub weights: Weights,
    pub offset_minutes: f64,
    pub step_seconds: f64,
}

impl Default for CompareOptions {
    fn default() -> Self {
        CompareOptions {
            weights: Weights::uniform(),
            offset_minutes: crate::curves::DEFAULT_ALIGN_OFFSET,
            step_seconds: Grid::DEFAULT_STEP_SECONDS,
        }
    }
}

/// Compares tracks labelled by their subjects.
pub fn compare(tracks: &[Track], opts: &CompareOptions) -> Result<ComparisonReport> {
    let labelled: Vec<(String, Track)> = tracks
        .iter()
        .map(|t| (t.subject().to_string(), t.clone()))
        .collect();
    compare_labelled(&labelled, opts)
}

/// Aligns the tracks at `offset`, samples `F̄` on the shared window and
/// reports pairwise correlations and a ranking by final value.
pub fn compare_labelled(inputs: &[(String, Track)], opts: &CompareOptions) -> Result<ComparisonReport> {
    if inputs.len() < 2 {
        return Err(MomentError::TooFewTracks(inputs.len()));
    }
    let tracks: Vec<Track> = inputs.iter().map(|(_, t)| t.clone()).collect();
    let aligned = align_tracks(&tracks, opts.offset_minutes)?;
    let start = opts.offset_minutes;
    let end = aligned
        .iter()
        .filter_map(Track::last_time)
        .fold(f64::INFINITY, f64::min);
    if end <= start {
        return Err(MomentError::NoOverlap);
    }
    let grid = Grid::Explicit(Grid::uniform(start, end, opts.step_seconds)?);

    let mut series = Vec::with_capacity(aligned.len());
    let mut columns = Vec::with_capacity(aligned.len());
    for track in &aligned {
        let mut s = sample(track, CurveFn::AccumulatedCombined, &opts.weights, &grid)?;
        s.step_seconds = Some(opts.step_seconds);
        let SeriesValues::Scalar(values) = &s.values else {
            unreachable!("combined functions are scalar")
        };
        columns.push(values.clone());
        series.push(s);
    }

    let n = columns.len();
    let mut similarity = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let r = correlation(&columns[i], &columns[j]);
            similarity[i][j] = r;
            similarity[j][i] = r;
        }
    }

    let times = &series[0].times;
    let mut ranking: Vec<RankEntry> = inputs
        .iter()
        .zip(&columns)
        .map(|((label, _), values)| {
            let area = times
                .windows(2)
                .zip(values.windows(2))
                .map(|(t, v)| 0.5 * (v[0] + v[1]) * (t[1] - t[0]))
                .sum();
            RankEntry {
                label: label.clone(),
                final_value: values[values.len() - 1],
                area,
            }
        })
        .collect();
    ranking.sort_by(|a, b| b.final_value.total_cmp(&a.final_value));

    Ok(ComparisonReport {
        offset_minutes: opts.offset_minutes,
        weights: opts.weights,
        step_seconds: opts.step_seconds,
        window: [start, end],
        labels: inputs.iter().map(|(l, _)| l.clone()).collect(),
        first_times: aligned.iter().filter_map(Track::first_time).collect(),
        series,
        similarity,
        ranking,
    })
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary: ranking then the similarity matrix.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let w = self.weights.as_array();
        let _ = writeln!(
            out,
            "aligned at {} min, window [{:.3}, {:.3}] min, weights ({}, {}, {}), step {} s",
            self.offset_minutes, self.window[0], self.window[1], w[0], w[1], w[2], self.step_seconds
        );
        let width = self.labels.iter().map(String::len).max().unwrap_or(0).max(5);
        let _ = writeln!(out);
        let _ = writeln!(out, "{:>4}  {:<width$}  {:>10}  {:>12}", "rank", "track", "final F̄", "area");
        for (i, r) in self.ranking.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:>4}  {:<width$}  {:>10.4}  {:>12.4}",
                i + 1,
                r.label,
                r.final_value,
                r.area
            );
        }
        let row_labels: Vec<String> = self
            .labels
            .iter()
            .enumerate()
            .map(|(i, l)| format!("[{i}] {l}"))
            .collect();
        let width = row_labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let _ = writeln!(out);
        let _ = write!(out, "{:<width$}", "");
        for j in 0..self.labels.len() {
            let _ = write!(out, "  {:>8}", format!("[{j}]"));
        }
        let _ = writeln!(out);
        for (i, row) in self.similarity.iter().enumerate() {
            let _ = write!(out, "{:<width$}", row_labels[i]);
            for r in row {
                let _ = write!(out, "  {r:>8.4}");
            }
            let _ = writeln!(out);
        }
        out
    }
}
