//! Continuous functions over a track.
//!
//! * `f_i(t)`: piecewise-linear interpolation of the moments (a degree-1
//!   non-uniform B-spline), clamped to the end values outside `[t_1, t_N]`.
//! * `F_i(t)`: piecewise-linear interpolation of the prefix sums `M_K`.
//!   It is zero before the first moment and holds `M_N` after the last.
//! * `f̄`, `F̄`: barycentric combinations `Σ a_i f_i`, `Σ a_i F_i`.

mod bspline;
mod sample;

pub use bspline::{smooth_accumulated, smooth_instant, BSplineCurve};
pub use sample::{sample, CurveFn, Grid, SampledSeries, SeriesValues};

use crate::error::{MomentError, Result};
use crate::moment::{Track, TrackKind, Weights};

/// Evaluates a piecewise-linear function through `(times[k], values[k])`.
/// Knots are returned exactly; outside the knot range the nearest end
/// value is returned.
pub(crate) fn interpolate(times: &[f64], values: &[[f64; 3]], t: f64) -> [f64; 3] {
    debug_assert_eq!(times.len(), values.len());
    let n = times.len();
    if t <= times[0] {
        return values[0];
    }
    if t >= times[n - 1] {
        return values[n - 1];
    }
    // First knot strictly greater than t; 1 <= hi <= n-1 here.
    let hi = times.partition_point(|&k| k <= t);
    let lo = hi - 1;
    if times[lo] == t {
        return values[lo];
    }
    let (t0, t1) = (times[lo], times[hi]);
    let span = t1 - t0;
    let w0 = (t1 - t) / span;
    let w1 = (t - t0) / span;
    let (a, b) = (values[lo], values[hi]);
    [
        a[0] * w0 + b[0] * w1,
        a[1] * w0 + b[1] * w1,
        a[2] * w0 + b[2] * w1,
    ]
}

fn knots_of(track: &Track) -> Result<(Vec<f64>, Vec<[f64; 3]>)> {
    if track.is_empty() {
        return Err(MomentError::EmptyTrack);
    }
    Ok(track
        .moments()
        .iter()
        .map(|m| (m.t, m.moment.components()))
        .unzip())
}

/// `f_i(t)` for all three axes.
pub fn eval_instant(track: &Track, t: f64) -> Result<[f64; 3]> {
    let (times, values) = knots_of(track)?;
    Ok(interpolate(&times, &values, t))
}

/// `f̄(t) = Σ a_i f_i(t)`.
pub fn eval_combined(track: &Track, weights: &Weights, t: f64) -> Result<f64> {
    Ok(weights.combine(eval_instant(track, t)?))
}

/// Prefix sums `M_K` of a track, keyed by the track's own timestamps.
/// Components are not bounded.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedTrack {
    subject: String,
    kind: TrackKind,
    times: Vec<f64>,
    sums: Vec<[f64; 3]>,
}

/// Component-wise prefix sums, added left to right in track order.
pub fn accumulate(track: &Track) -> Result<AccumulatedTrack> {
    let (times, values) = knots_of(track)?;
    let mut acc = [0.0; 3];
    let sums = values
        .iter()
        .map(|v| {
            for i in 0..3 {
                acc[i] += v[i];
            }
            acc
        })
        .collect();
    Ok(AccumulatedTrack {
        subject: track.subject().to_string(),
        kind: track.kind(),
        times,
        sums,
    })
}

impl AccumulatedTrack {
    /// Builds an accumulated track from already-summed entries, e.g. a
    /// re-loaded accumulated export.
    pub fn from_entries(
        subject: impl Into<String>,
        kind: TrackKind,
        entries: &[(f64, [f64; 3])],
    ) -> Result<Self> {
        if entries.is_empty() {
            return Err(MomentError::EmptyTrack);
        }
        for (i, pair) in entries.windows(2).enumerate() {
            if pair[1].0 <= pair[0].0 {
                return Err(MomentError::NonMonotoneTime {
                    index: i + 1,
                    previous: pair[0].0,
                    current: pair[1].0,
                });
            }
        }
        if let Some(&(t, _)) = entries.iter().find(|(t, _)| !(t.is_finite() && *t >= 0.0)) {
            return Err(MomentError::InvalidTime(t));
        }
        let (times, sums) = entries.iter().copied().unzip();
        Ok(AccumulatedTrack {
            subject: subject.into(),
            kind,
            times,
            sums,
        })
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn kind(&self) -> TrackKind {
        self.kind
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sums(&self) -> &[[f64; 3]] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (f64, [f64; 3])> + '_ {
        self.times.iter().copied().zip(self.sums.iter().copied())
    }

    /// `M_N`, the sum of all moments.
    pub fn final_value(&self) -> [f64; 3] {
        self.sums[self.sums.len() - 1]
    }

    pub fn first_time(&self) -> f64 {
        self.times[0]
    }

    pub fn last_time(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// `F_i(t)`.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        if t < self.times[0] {
            return [0.0; 3];
        }
        interpolate(&self.times, &self.sums, t)
    }

    /// `F̄(t)`.
    pub fn eval_combined(&self, weights: &Weights, t: f64) -> f64 {
        weights.combine(self.eval(t))
    }
}

pub fn eval_accumulated(acc: &AccumulatedTrack, t: f64) -> [f64; 3] {
    acc.eval(t)
}

pub fn eval_accumulated_combined(acc: &AccumulatedTrack, weights: &Weights, t: f64) -> f64 {
    acc.eval_combined(weights, t)
}

/// Default alignment offset in minutes for comparison views.
pub const DEFAULT_ALIGN_OFFSET: f64 = 1.5;

/// Translates each track so its first moment sits at `offset` minutes.
///
/// New times are `offset + (t_k - t_1)`, so the first time equals `offset`
/// exactly and gaps are kept up to floating-point rounding.
pub fn align_tracks(tracks: &[Track], offset: f64) -> Result<Vec<Track>> {
    if !(offset.is_finite() && offset >= 0.0) {
        return Err(MomentError::InvalidTime(offset));
    }
    tracks
        .iter()
        .map(|track| {
            let first = track.first_time().ok_or(MomentError::EmptyTrack)?;
            let moments = track.moments().iter().map(|m| crate::moment::TimedMoment {
                t: offset + (m.t - first),
                ..m.clone()
            });
            Track::with_moments(track.subject(), track.kind(), moments)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn track(values: &[(f64, [f64; 3])]) -> Track {
        Track::from_values("Marion", TrackKind::Discourse, values).unwrap()
    }

    #[test]
    fn instant_examples() {
        let tr = track(&[(1.0, [0.2, 0.0, 0.0]), (3.0, [0.8, 0.0, 0.0])]);
        let v = eval_instant(&tr, 1.5).unwrap();
        assert!((v[0] - 0.35).abs() < 1e-15);
        assert_eq!(v[1], 0.0);
        assert_eq!(eval_instant(&tr, 1.0).unwrap(), [0.2, 0.0, 0.0]);
        assert_eq!(eval_instant(&tr, 3.0).unwrap(), [0.8, 0.0, 0.0]);
        let mid = eval_instant(&tr, 2.0).unwrap();
        assert!((mid[0] - 0.5).abs() < 1e-15);
        // clamp
        assert_eq!(eval_instant(&tr, 0.0).unwrap(), [0.2, 0.0, 0.0]);
        assert_eq!(eval_instant(&tr, 99.0).unwrap(), [0.8, 0.0, 0.0]);
    }

    #[test]
    fn empty_track_errors() {
        let tr = Track::new("x", TrackKind::Discourse).unwrap();
        assert_eq!(eval_instant(&tr, 0.0), Err(MomentError::EmptyTrack));
        assert_eq!(accumulate(&tr), Err(MomentError::EmptyTrack));
        assert_eq!(
            align_tracks(&[tr], 1.5),
            Err(MomentError::EmptyTrack)
        );
    }

    #[test]
    fn combined_examples() {
        let tr = track(&[(1.0, [0.3, -0.3, 0.6]), (2.0, [0.1, 0.9, -0.4])]);
        let w = Weights::uniform();
        assert!((eval_combined(&tr, &w, 1.0).unwrap() - 0.2).abs() < 1e-15);
        let red = Weights::new(1.0, 0.0, 0.0).unwrap();
        for t in [0.5, 1.0, 1.3, 2.0, 4.0] {
            assert_eq!(
                eval_combined(&tr, &red, t).unwrap(),
                eval_instant(&tr, t).unwrap()[0]
            );
        }
        let flat = track(&[(1.0, [0.4; 3]), (2.0, [0.4; 3])]);
        let w = Weights::new(0.2, 0.5, 0.3).unwrap();
        assert_eq!(eval_combined(&flat, &w, 1.7).unwrap(), 0.4);
    }

    #[test]
    fn accumulate_examples() {
        let one = accumulate(&track(&[(1.0, [0.5, 0.0, -0.5])])).unwrap();
        assert_eq!(one.sums(), &[[0.5, 0.0, -0.5]]);

        let cancel = accumulate(&track(&[(1.0, [1.0, 0.0, 0.0]), (2.0, [-1.0, 0.0, 0.0])])).unwrap();
        assert_eq!(cancel.sums(), &[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);

        let three = accumulate(&track(&[
            (1.0, [0.4, 0.1, -0.2]),
            (2.0, [0.4, 0.1, -0.2]),
            (3.0, [0.4, 0.1, -0.2]),
        ]))
        .unwrap();
        let f = three.final_value();
        assert!((f[0] - 1.2).abs() < 1e-12);
        assert!((f[1] - 0.3).abs() < 1e-12);
        assert!((f[2] + 0.6).abs() < 1e-12);
    }

    #[test]
    fn accumulated_eval_examples() {
        let acc = AccumulatedTrack::from_entries(
            "Marion",
            TrackKind::Discourse,
            &[(1.0, [0.5, 0.0, 0.0]), (2.0, [1.0, 0.0, 0.0])],
        )
        .unwrap();
        assert_eq!(acc.eval(1.0), [0.5, 0.0, 0.0]);
        assert_eq!(acc.eval(0.5), [0.0; 3]);
        assert_eq!(acc.eval(1.5), [0.75, 0.0, 0.0]);
        assert_eq!(acc.eval(9.0), [1.0, 0.0, 0.0]);

        let acc = AccumulatedTrack::from_entries(
            "Marion",
            TrackKind::Discourse,
            &[(1.0, [1.2, 0.3, -0.6])],
        )
        .unwrap();
        let w = Weights::uniform();
        assert!((acc.eval_combined(&w, 1.0) - 0.3).abs() < 1e-15);
        let green = Weights::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(acc.eval_combined(&green, 1.0), 0.3);
    }

    #[test]
    fn accumulated_combined_nondecreasing_for_nonnegative_moments() {
        let tr = track(&[
            (0.5, [0.1, 0.0, 0.3]),
            (1.0, [0.0, 0.2, 0.0]),
            (4.0, [0.9, 0.9, 0.1]),
        ]);
        let acc = accumulate(&tr).unwrap();
        let w = Weights::new(0.6, 0.1, 0.3).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=100 {
            let v = acc.eval_combined(&w, k as f64 * 0.05);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn align_examples() {
        let a = track(&[(1.5, [0.1, 0.0, 0.0]), (4.0, [0.2, 0.0, 0.0])]);
        let b = track(&[(10.0, [0.1, 0.0, 0.0]), (12.5, [0.2, 0.0, 0.0])]);
        let out = align_tracks(&[a.clone(), b], DEFAULT_ALIGN_OFFSET).unwrap();
        assert_eq!(out[0], a);
        assert_eq!(out[1].times().collect::<Vec<_>>(), vec![1.5, 4.0]);
        assert_eq!(out[1].moments()[1].moment, a.moments()[1].moment);
    }
}
