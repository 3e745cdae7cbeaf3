//! Higher-degree smoothing with clamped non-uniform B-splines.
//!
//! Control values are the moment (or prefix-sum) components; the knot
//! vector repeats the first and last timestamps `p + 1` times and places
//! interior knots at running averages of `p` consecutive timestamps. For
//! `p = 1` the interior knots are the timestamps themselves and the curve
//! coincides with the piecewise-linear `f_i` / `F_i`.

use super::AccumulatedTrack;
use crate::error::{MomentError, Result};
use crate::moment::Track;

#[derive(Debug, Clone, PartialEq)]
pub struct BSplineCurve {
    degree: usize,
    knots: Vec<f64>,
    control: Vec<[f64; 3]>,
}

impl BSplineCurve {
    /// Clamped curve of `degree` through control values located at `times`.
    pub fn clamped(times: &[f64], control: &[[f64; 3]], degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(MomentError::ZeroDegree);
        }
        let n = control.len();
        debug_assert_eq!(times.len(), n);
        if n < degree + 1 {
            return Err(MomentError::DegreeTooHigh {
                degree,
                points: n,
            });
        }
        let mut knots = Vec::with_capacity(n + degree + 1);
        knots.extend(std::iter::repeat_n(times[0], degree + 1));
        for j in 1..n - degree {
            let window = &times[j..j + degree];
            knots.push(window.iter().sum::<f64>() / degree as f64);
        }
        knots.extend(std::iter::repeat_n(times[n - 1], degree + 1));
        Ok(BSplineCurve {
            degree,
            knots,
            control: control.to_vec(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn control(&self) -> &[[f64; 3]] {
        &self.control
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.knots[self.degree], self.knots[self.control.len()])
    }

    /// Index `k` with `knots[k] <= t < knots[k + 1]`, restricted to the
    /// domain; the right end uses the last non-empty span.
    fn span(&self, t: f64) -> usize {
        let p = self.degree;
        let n = self.control.len();
        let k = self.knots.partition_point(|&u| u <= t);
        k.saturating_sub(1).clamp(p, n - 1)
    }

    /// De Boor evaluation; `t` is clamped to the domain.
    pub fn eval(&self, t: f64) -> [f64; 3] {
        let (lo, hi) = self.domain();
        let t = t.clamp(lo, hi);
        let p = self.degree;
        let k = self.span(t);
        let u = &self.knots;
        let mut d: Vec<[f64; 3]> = (0..=p).map(|j| self.control[j + k - p]).collect();
        for r in 1..=p {
            for j in (r..=p).rev() {
                let left = u[j + k - p];
                let denom = u[j + 1 + k - r] - left;
                let alpha = if denom == 0.0 { 0.0 } else { (t - left) / denom };
                for c in 0..3 {
                    d[j][c] = (1.0 - alpha) * d[j - 1][c] + alpha * d[j][c];
                }
            }
        }
        d[p]
    }
}

/// Degree-`p` smoothing of the instant functions `f_i`.
pub fn smooth_instant(track: &Track, degree: usize, t: f64) -> Result<[f64; 3]> {
    if track.is_empty() {
        return Err(MomentError::EmptyTrack);
    }
    let times: Vec<f64> = track.times().collect();
    let control: Vec<[f64; 3]> = track.moments().iter().map(|m| m.moment.components()).collect();
    Ok(BSplineCurve::clamped(&times, &control, degree)?.eval(t))
}

/// Degree-`p` smoothing of the accumulated functions `F_i`; zero before
/// the first moment, like `F_i` itself.
pub fn smooth_accumulated(acc: &AccumulatedTrack, degree: usize, t: f64) -> Result<[f64; 3]> {
    let curve = BSplineCurve::clamped(acc.times(), acc.sums(), degree)?;
    if t < acc.first_time() {
        return Ok([0.0; 3]);
    }
    Ok(curve.eval(t))
}
