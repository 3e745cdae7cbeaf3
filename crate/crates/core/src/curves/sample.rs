use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{accumulate, interpolate, smooth_accumulated, BSplineCurve};
use crate::error::{MomentError, Result};
use crate::moment::{Track, TrackKind, Weights};

/// Which function of a track to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFn {
    /// `f_i`
    Instant,
    /// `f̄`
    Combined,
    /// `F_i`
    Accumulated,
    /// `F̄`
    AccumulatedCombined,
    /// degree-`p` B-spline through the moments
    Smooth { degree: usize },
    /// degree-`p` B-spline through the prefix sums
    SmoothAccumulated { degree: usize },
}

impl CurveFn {
    pub fn name(&self) -> &'static str {
        match self {
            CurveFn::Instant => "instant",
            CurveFn::Combined => "combined",
            CurveFn::Accumulated => "accumulated",
            CurveFn::AccumulatedCombined => "accumulated_combined",
            CurveFn::Smooth { .. } => "smooth",
            CurveFn::SmoothAccumulated { .. } => "smooth_accumulated",
        }
    }

    pub fn is_accumulated(&self) -> bool {
        matches!(
            self,
            CurveFn::Accumulated | CurveFn::AccumulatedCombined | CurveFn::SmoothAccumulated { .. }
        )
    }

    pub fn is_combined(&self) -> bool {
        matches!(self, CurveFn::Combined | CurveFn::AccumulatedCombined)
    }

    pub fn degree(&self) -> Option<usize> {
        match self {
            CurveFn::Smooth { degree } | CurveFn::SmoothAccumulated { degree } => Some(*degree),
            _ => None,
        }
    }

    /// Same selector with a different smoothing degree (no-op for the
    /// linear functions).
    pub fn with_degree(self, degree: usize) -> Self {
        match self {
            CurveFn::Smooth { .. } => CurveFn::Smooth { degree },
            CurveFn::SmoothAccumulated { .. } => CurveFn::SmoothAccumulated { degree },
            other => other,
        }
    }
}

impl fmt::Display for CurveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Accepts the long names plus the short forms `f`, `fbar`, `F`, `Fbar`.
/// Smooth selectors default to degree 2.
impl FromStr for CurveFn {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "instant" | "f" => CurveFn::Instant,
            "combined" | "fbar" => CurveFn::Combined,
            "accumulated" | "F" => CurveFn::Accumulated,
            "accumulated_combined" | "Fbar" => CurveFn::AccumulatedCombined,
            "smooth" => CurveFn::Smooth { degree: 2 },
            "smooth_accumulated" => CurveFn::SmoothAccumulated { degree: 2 },
            other => return Err(format!("unknown function {other:?}")),
        })
    }
}

/// Sample times, in minutes.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// Uniform step (seconds of film time) over the track's `[t_1, t_N]`.
    Step { seconds: f64 },
    /// Uniform step over an explicit window.
    Window { start: f64, end: f64, seconds: f64 },
    Explicit(Vec<f64>),
}

impl Default for Grid {
    fn default() -> Self {
        Grid::Step {
            seconds: Grid::DEFAULT_STEP_SECONDS,
        }
    }
}

impl Grid {
    pub const DEFAULT_STEP_SECONDS: f64 = 1.0;

    /// `start, start + h, ...` strictly below `end`, then `end` itself.
    pub fn uniform(start: f64, end: f64, seconds: f64) -> Result<Vec<f64>> {
        if !(start.is_finite() && end.is_finite() && seconds.is_finite())
            || seconds <= 0.0
            || end < start
        {
            return Err(MomentError::InvalidGrid);
        }
        let h = seconds / 60.0;
        let mut times = Vec::new();
        let mut k = 0u64;
        loop {
            let t = start + k as f64 * h;
            if t >= end - h * 1e-9 {
                break;
            }
            times.push(t);
            k += 1;
        }
        times.push(end);
        Ok(times)
    }

    pub fn step_seconds(&self) -> Option<f64> {
        match self {
            Grid::Step { seconds } | Grid::Window { seconds, .. } => Some(*seconds),
            Grid::Explicit(_) => None,
        }
    }

    fn times_for(&self, track: &Track) -> Result<Vec<f64>> {
        match self {
            Grid::Step { seconds } => {
                let (Some(a), Some(b)) = (track.first_time(), track.last_time()) else {
                    return Err(MomentError::EmptyTrack);
                };
                Grid::uniform(a, b, *seconds)
            }
            Grid::Window {
                start,
                end,
                seconds,
            } => Grid::uniform(*start, *end, *seconds),
            Grid::Explicit(times) => {
                let ok = times.iter().all(|t| t.is_finite())
                    && times.windows(2).all(|w| w[0] < w[1]);
                if !ok {
                    return Err(MomentError::InvalidGrid);
                }
                Ok(times.clone())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum SeriesValues {
    Vector(Vec<[f64; 3]>),
    Scalar(Vec<f64>),
}

impl SeriesValues {
    pub fn len(&self) -> usize {
        match self {
            SeriesValues::Vector(v) => v.len(),
            SeriesValues::Scalar(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Values of one channel: an axis index for vector series, ignored for
    /// scalar series.
    pub fn channel(&self, axis: usize) -> Vec<f64> {
        match self {
            SeriesValues::Vector(v) => v.iter().map(|x| x[axis]).collect(),
            SeriesValues::Scalar(v) => v.clone(),
        }
    }
}

/// Evaluations of one function of one track on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledSeries {
    pub subject: String,
    pub kind: TrackKind,
    pub function: CurveFn,
    pub weights: Option<Weights>,
    pub step_seconds: Option<f64>,
    pub times: Vec<f64>,
    pub values: SeriesValues,
}

impl Serialize for CurveFn {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CurveFn", 2)?;
        st.serialize_field("name", self.name())?;
        st.serialize_field("degree", &self.degree())?;
        st.end()
    }
}

/// Evaluates `function` of `track` at every grid time.
pub fn sample(track: &Track, function: CurveFn, weights: &Weights, grid: &Grid) -> Result<SampledSeries> {
    if track.is_empty() {
        return Err(MomentError::EmptyTrack);
    }
    let times = grid.times_for(track)?;
    let knot_times: Vec<f64> = track.times().collect();
    let knot_values: Vec<[f64; 3]> = track.moments().iter().map(|m| m.moment.components()).collect();

    let values = match function {
        CurveFn::Instant => SeriesValues::Vector(
            times.iter().map(|&t| interpolate(&knot_times, &knot_values, t)).collect(),
        ),
        CurveFn::Combined => SeriesValues::Scalar(
            times
                .iter()
                .map(|&t| weights.combine(interpolate(&knot_times, &knot_values, t)))
                .collect(),
        ),
        CurveFn::Accumulated => {
            let acc = accumulate(track)?;
            SeriesValues::Vector(times.iter().map(|&t| acc.eval(t)).collect())
        }
        CurveFn::AccumulatedCombined => {
            let acc = accumulate(track)?;
            SeriesValues::Scalar(times.iter().map(|&t| acc.eval_combined(weights, t)).collect())
        }
        CurveFn::Smooth { degree } => {
            let curve = BSplineCurve::clamped(&knot_times, &knot_values, degree)?;
            SeriesValues::Vector(times.iter().map(|&t| curve.eval(t)).collect())
        }
        CurveFn::SmoothAccumulated { degree } => {
            let acc = accumulate(track)?;
            SeriesValues::Vector(
                times
                    .iter()
                    .map(|&t| smooth_accumulated(&acc, degree, t))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    Ok(SampledSeries {
        subject: track.subject().to_string(),
        kind: track.kind(),
        function,
        weights: function.is_combined().then_some(*weights),
        step_seconds: grid.step_seconds(),
        times,
        values,
    })
}
