use std::fs;
use std::path::Path;

use story_moments::analyze::{compare_labelled, summarize, CompareOptions, Trend};
use story_moments::curves::{accumulate, eval_accumulated_combined};
use story_moments::ingest::parse_session;
use story_moments::{Session, Track, Weights};

fn load(name: &str) -> Session {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.json"));
    parse_session(&fs::read_to_string(path).unwrap()).unwrap().value
}

fn only_track(name: &str) -> Track {
    load(name).tracks()[0].clone()
}

#[test]
fn positive_hero_keeps_rising() {
    let s = summarize(&only_track("fugitive_like"), &Weights::uniform()).unwrap();
    assert!(s.final_combined > 1.0);
    assert!(s.intervals.iter().all(|i| i.trend == Trend::Rising));
    assert_eq!(s.positive_fraction, 1.0);
}

#[test]
fn indifferent_hero_stays_near_zero() {
    let s = summarize(&only_track("solace_like"), &Weights::uniform()).unwrap();
    assert!(s.final_combined.abs() < 0.1);
    for i in 0..3 {
        assert!(s.accumulated_max[i] <= 0.25 && s.accumulated_min[i] >= -0.35);
    }
}

#[test]
fn comparison_aligns_first_moments_and_ranks_by_attraction() {
    let inputs = vec![
        ("Kimble".to_string(), only_track("fugitive_like")),
        ("Bond".to_string(), only_track("solace_like")),
    ];
    let report = compare_labelled(&inputs, &CompareOptions::default()).unwrap();
    assert_eq!(report.first_times, vec![1.5, 1.5]);
    assert_eq!(report.ranking[0].label, "Kimble");
    let acc = accumulate(&inputs[0].1).unwrap();
    let values = report.series[0].values.channel(0);
    for (t, v) in report.series[0].times.iter().zip(values) {
        assert!((v - eval_accumulated_combined(&acc, &Weights::uniform(), *t)).abs() <= 1e-12);
    }
}

#[test]
fn psycho_heroine_final_attraction_exceeds_norman() {
    let s = load("psycho");
    let marion = summarize(s.track("Marion Crane").unwrap(), &Weights::uniform()).unwrap();
    let norman = summarize(s.track("Norman Bates").unwrap(), &Weights::uniform()).unwrap();
    assert!(marion.final_combined > norman.final_combined);
}
