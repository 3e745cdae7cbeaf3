//! Reference implementations used only by tests. Each one is written
//! from the textbook definition, without calling into the library's
//! evaluation code.
#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use story_moments::{Track, TrackKind};

/// Linear interpolation by scanning for the bracketing segment.
pub fn lerp(times: &[f64], values: &[f64], t: f64) -> f64 {
    let n = times.len();
    if t <= times[0] {
        return values[0];
    }
    if t >= times[n - 1] {
        return values[n - 1];
    }
    for k in 0..n - 1 {
        if times[k] == t {
            return values[k];
        }
        if times[k] < t && t < times[k + 1] {
            let s = (t - times[k]) / (times[k + 1] - times[k]);
            return values[k] + s * (values[k + 1] - values[k]);
        }
    }
    values[n - 1]
}

/// `M_K = Σ_{k ≤ K} m_k`, each entry summed from scratch in index order.
pub fn prefix_sums(values: &[[f64; 3]]) -> Vec<[f64; 3]> {
    (0..values.len())
        .map(|k| {
            let mut s = [0.0; 3];
            for v in &values[..=k] {
                for i in 0..3 {
                    s[i] += v[i];
                }
            }
            s
        })
        .collect()
}

/// Clamped knot vector with knot averaging: `p + 1` copies of each end
/// time and interior knots `(t_j + … + t_{j+p-1}) / p`, `j = 1..N-p-1`.
pub fn averaged_knots(times: &[f64], p: usize) -> Vec<f64> {
    let n = times.len();
    let mut u = vec![times[0]; p + 1];
    for j in 1..=(n - p - 1) {
        let mut s = 0.0;
        for t in &times[j..j + p] {
            s += t;
        }
        u.push(s / p as f64);
    }
    u.extend(vec![times[n - 1]; p + 1]);
    u
}

/// De Boor's algorithm, following the usual statement of the recurrence:
/// find `k` with `u_k ≤ t < u_{k+1}`, then for `r = 1..=p` and
/// `j = p..=r` (descending) blend `d_j = (1-α) d_{j-1} + α d_j` with
/// `α = (t - u_{j+k-p}) / (u_{j+1+k-r} - u_{j+k-p})`.
pub fn de_boor(knots: &[f64], control: &[f64], p: usize, t: f64) -> f64 {
    let n = control.len();
    let t = t.clamp(knots[p], knots[n]);
    let mut k = p;
    while k < n - 1 && knots[k + 1] <= t {
        k += 1;
    }
    let mut d: Vec<f64> = (0..=p).map(|j| control[j + k - p]).collect();
    for r in 1..=p {
        for j in (r..=p).rev() {
            let lo = knots[j + k - p];
            let hi = knots[j + 1 + k - r];
            let alpha = if hi == lo { 0.0 } else { (t - lo) / (hi - lo) };
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j];
        }
    }
    d[p]
}

/// Cox–de Boor basis function `N_{i,p}(t)` with the convention `0/0 = 0`.
/// The last nonempty span is closed on the right so the curve reaches its
/// final control point.
pub fn basis(knots: &[f64], i: usize, p: usize, t: f64, last_span: usize) -> f64 {
    if p == 0 {
        let inside = knots[i] <= t && t < knots[i + 1];
        let closing = i == last_span && t == knots[i + 1];
        return if inside || closing { 1.0 } else { 0.0 };
    }
    let mut v = 0.0;
    let a = knots[i + p] - knots[i];
    if a > 0.0 {
        v += (t - knots[i]) / a * basis(knots, i, p - 1, t, last_span);
    }
    let b = knots[i + p + 1] - knots[i + 1];
    if b > 0.0 {
        v += (knots[i + p + 1] - t) / b * basis(knots, i + 1, p - 1, t, last_span);
    }
    v
}

/// `Σ_i N_{i,p}(t) c_i`.
pub fn basis_sum(knots: &[f64], control: &[f64], p: usize, t: f64) -> f64 {
    let n = control.len();
    let t = t.clamp(knots[p], knots[n]);
    let last_span = (0..knots.len() - 1)
        .rev()
        .find(|&i| knots[i] < knots[i + 1])
        .unwrap();
    (0..n).map(|i| basis(knots, i, p, t, last_span) * control[i]).sum()
}

/// Random strictly increasing times in `[0, 120]` minutes with values in
/// the cube.
pub fn random_track(rng: &mut StdRng, max_len: usize) -> Track {
    let n = rng.gen_range(1..=max_len);
    let mut times: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..120.0)).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let values: Vec<(f64, [f64; 3])> = times
        .into_iter()
        .map(|t| (t, [rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)]))
        .collect();
    Track::from_values("Marion", TrackKind::Discourse, &values).unwrap()
}

/// Random track whose components all have the given sign (or are zero).
pub fn random_signed_track(rng: &mut StdRng, max_len: usize, sign: f64) -> Track {
    let base = random_track(rng, max_len);
    let values: Vec<(f64, [f64; 3])> = base
        .moments()
        .iter()
        .map(|m| (m.t, m.moment.components().map(|x| sign * x.abs())))
        .collect();
    Track::from_values("Marion", TrackKind::Discourse, &values).unwrap()
}

pub fn columns(track: &Track) -> (Vec<f64>, [Vec<f64>; 3]) {
    let times = track.times().collect();
    let ch = |i: usize| track.moments().iter().map(|m| m.moment.components()[i]).collect();
    (times, [ch(0), ch(1), ch(2)])
}

/// `c = (m + 1) / 2` per channel.
pub fn to_rgb(m: [f64; 3]) -> [f64; 3] {
    m.map(|x| (x + 1.0) / 2.0)
}

/// Weighted mean `Σ w_k m_k / Σ w_k`.
pub fn weighted_mean(points: &[([f64; 3], f64)]) -> [f64; 3] {
    let total: f64 = points.iter().map(|p| p.1).sum();
    let mut s = [0.0; 3];
    for (m, w) in points {
        for i in 0..3 {
            s[i] += w * m[i];
        }
    }
    s.map(|x| x / total)
}
