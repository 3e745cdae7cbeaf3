mod oracle;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use story_moments::curves::{
    accumulate, align_tracks, eval_accumulated, eval_accumulated_combined, eval_combined, eval_instant,
    smooth_accumulated, smooth_instant, BSplineCurve,
};
use story_moments::{Track, TrackKind, Weights};

#[test]
fn knots_are_returned_exactly_and_midpoints_are_means() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let tr = oracle::random_track(&mut rng, 50);
        for m in tr.moments() {
            assert_eq!(eval_instant(&tr, m.t).unwrap(), m.moment.components());
        }
        for w in tr.moments().windows(2) {
            let t = 0.5 * (w[0].t + w[1].t);
            let mid = eval_instant(&tr, t).unwrap();
            for i in 0..3 {
                let mean = 0.5 * (w[0].moment.get(i) + w[1].moment.get(i));
                // the midpoint itself is rounded to within one ulp of t
                let slope = (w[1].moment.get(i) - w[0].moment.get(i)) / (w[1].t - w[0].t);
                let bound = 1e-12 + slope.abs() * t * f64::EPSILON;
                assert!((mid[i] - mean).abs() <= bound, "{} vs {mean} on [{}, {}]", mid[i], w[0].t, w[1].t);
            }
        }
    }
}

#[test]
fn instant_matches_scan_interpolation() {
    let mut rng = StdRng::seed_from_u64(8);
    for _ in 0..100 {
        let tr = oracle::random_track(&mut rng, 30);
        let (times, ch) = oracle::columns(&tr);
        for _ in 0..50 {
            let t = rng.gen_range(-5.0..125.0);
            let got = eval_instant(&tr, t).unwrap();
            for i in 0..3 {
                assert!((got[i] - oracle::lerp(&times, &ch[i], t)).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn degree_one_spline_equals_linear() {
    let mut rng = StdRng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 1000 {
        let tr = oracle::random_track(&mut rng, 20);
        if tr.len() < 2 {
            continue;
        }
        for _ in 0..10 {
            let t = rng.gen_range(tr.first_time().unwrap()..=tr.last_time().unwrap());
            let s = smooth_instant(&tr, 1, t).unwrap();
            let f = eval_instant(&tr, t).unwrap();
            for i in 0..3 {
                assert!((s[i] - f[i]).abs() <= 1e-9);
            }
            checked += 1;
        }
    }
}

#[test]
fn higher_degrees_match_de_boor_and_basis_sums() {
    let mut rng = StdRng::seed_from_u64(12);
    for p in [1, 2, 3] {
        let mut checked = 0;
        while checked < 1000 {
            let tr = oracle::random_track(&mut rng, 25);
            if tr.len() < p + 1 {
                continue;
            }
            let (times, ch) = oracle::columns(&tr);
            let knots = oracle::averaged_knots(&times, p);
            let control: Vec<[f64; 3]> = tr.moments().iter().map(|m| m.moment.components()).collect();
            assert_eq!(BSplineCurve::clamped(&times, &control, p).unwrap().knots(), &knots[..]);
            for _ in 0..10 {
                let t = rng.gen_range(times[0]..=times[times.len() - 1]);
                let s = smooth_instant(&tr, p, t).unwrap();
                for i in 0..3 {
                    let a = oracle::de_boor(&knots, &ch[i], p, t);
                    let b = oracle::basis_sum(&knots, &ch[i], p, t);
                    assert!((a - b).abs() <= 1e-9, "oracles disagree p={p} t={t}");
                    assert!((s[i] - a).abs() <= 1e-9, "p={p} t={t}: {} vs {a}", s[i]);
                }
                checked += 1;
            }
        }
    }
}

#[test]
fn smoothed_accumulation_uses_prefix_sums_as_control() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..100 {
        let tr = oracle::random_track(&mut rng, 20);
        if tr.len() < 3 {
            continue;
        }
        let (times, _) = oracle::columns(&tr);
        let sums = oracle::prefix_sums(&tr.moments().iter().map(|m| m.moment.components()).collect::<Vec<_>>());
        let knots = oracle::averaged_knots(&times, 2);
        let acc = accumulate(&tr).unwrap();
        let t = rng.gen_range(times[0]..=times[times.len() - 1]);
        let s = smooth_accumulated(&acc, 2, t).unwrap();
        for i in 0..3 {
            let col: Vec<f64> = sums.iter().map(|v| v[i]).collect();
            assert!((s[i] - oracle::de_boor(&knots, &col, 2, t)).abs() <= 1e-9);
        }
        assert_eq!(smooth_accumulated(&acc, 2, times[0] - 1.0).unwrap(), [0.0; 3]);
    }
}

#[test]
fn prefix_sums_match_brute_force() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..200 {
        let tr = oracle::random_track(&mut rng, 50);
        let values: Vec<[f64; 3]> = tr.moments().iter().map(|m| m.moment.components()).collect();
        let acc = accumulate(&tr).unwrap();
        assert_eq!(acc.sums(), &oracle::prefix_sums(&values)[..]);
        for (k, m) in tr.moments().iter().enumerate() {
            assert_eq!(eval_accumulated(&acc, m.t), acc.sums()[k]);
        }
        let fin = acc.final_value();
        for i in 0..3 {
            let total: f64 = values.iter().map(|v| v[i]).sum();
            assert!((fin[i] - total).abs() <= 1e-12);
        }
    }
}

#[test]
fn sign_constrained_tracks_accumulate_monotonically() {
    let mut rng = StdRng::seed_from_u64(15);
    for sign in [1.0, -1.0] {
        for _ in 0..100 {
            let tr = oracle::random_signed_track(&mut rng, 30, sign);
            let acc = accumulate(&tr).unwrap();
            let mut prev = [0.0; 3];
            let mut t = -1.0;
            while t <= 121.0 {
                let v = eval_accumulated(&acc, t);
                for i in 0..3 {
                    assert!(sign * (v[i] - prev[i]) >= -1e-12, "t={t}");
                }
                prev = v;
                t += 0.25;
            }
        }
    }
}

#[test]
fn alignment_pins_first_time_and_keeps_gaps() {
    let mut rng = StdRng::seed_from_u64(16);
    let tracks: Vec<Track> = (0..50)
        .map(|k| oracle::random_track(&mut rng, 40).renamed(format!("s{k}")).unwrap())
        .collect();
    let aligned = align_tracks(&tracks, 1.5).unwrap();
    for (a, b) in tracks.iter().zip(&aligned) {
        assert_eq!(b.first_time(), Some(1.5));
        let ta: Vec<f64> = a.times().collect();
        let tb: Vec<f64> = b.times().collect();
        for j in 0..ta.len() {
            for k in j + 1..ta.len() {
                assert!(((tb[k] - tb[j]) - (ta[k] - ta[j])).abs() <= 1e-9);
            }
        }
    }
}

fn arb_track() -> impl Strategy<Value = Track> {
    prop::collection::btree_map(0u32..120_000, prop::array::uniform3(-1.0f64..=1.0), 1..30).prop_map(|m| {
        let values: Vec<(f64, [f64; 3])> = m.into_iter().map(|(t, v)| (t as f64 / 1000.0, v)).collect();
        Track::from_values("Lady Bird", TrackKind::Discourse, &values).unwrap()
    })
}

fn arb_weights() -> impl Strategy<Value = Weights> {
    (0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(a, b, c)| {
        let s = a + b + c;
        Weights::new(a / s, b / s, 1.0 - a / s - b / s).unwrap_or_else(|_| Weights::uniform())
    })
}

proptest! {
    #[test]
    fn combined_is_convex(tr in arb_track(), w in arb_weights(), t in -10.0f64..130.0) {
        let f = eval_instant(&tr, t).unwrap();
        let fbar = eval_combined(&tr, &w, t).unwrap();
        let lo = f.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= fbar && fbar <= hi);

        let acc = accumulate(&tr).unwrap();
        let g = eval_accumulated(&acc, t);
        let gbar = eval_accumulated_combined(&acc, &w, t);
        let lo = g.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= gbar && gbar <= hi);
    }

    #[test]
    fn instant_stays_in_cube(tr in arb_track(), t in -10.0f64..130.0) {
        for x in eval_instant(&tr, t).unwrap() {
            prop_assert!((-1.0..=1.0).contains(&x));
        }
    }

    #[test]
    fn accumulated_is_zero_before_and_final_after(tr in arb_track()) {
        let acc = accumulate(&tr).unwrap();
        prop_assert_eq!(eval_accumulated(&acc, tr.first_time().unwrap() - 0.001), [0.0; 3]);
        prop_assert_eq!(eval_accumulated(&acc, 1e6), acc.final_value());
    }

    #[test]
    fn smoothing_stays_in_control_hull(tr in arb_track(), p in 1usize..4, t in 0.0f64..120.0) {
        prop_assume!(tr.len() > p);
        for x in smooth_instant(&tr, p, t).unwrap() {
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&x));
        }
    }
}
