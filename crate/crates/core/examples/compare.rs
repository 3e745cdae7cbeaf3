//! Summaries of each hero's attraction curve and an aligned comparison.

use std::fs;

use story_moments::analyze::{compare_labelled, summarize, CompareOptions};
use story_moments::ingest::parse_session;
use story_moments::{Track, Weights};

fn first_track(name: &str) -> Result<Track, Box<dyn std::error::Error>> {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let session = parse_session(&fs::read_to_string(path)?)?.value;
    Ok(session.tracks()[0].clone())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let heroes = vec![
        ("Kimble".to_string(), first_track("fugitive_like")?),
        ("Bond".to_string(), first_track("solace_like")?),
        ("Marion".to_string(), first_track("psycho")?),
    ];
    for (label, track) in &heroes {
        let s = summarize(track, &Weights::uniform())?;
        println!(
            "{label:<8} F-bar(t_N) = {:>6.3}  positive {:>5.1}%  trend runs {}",
            s.final_combined,
            100.0 * s.positive_fraction,
            s.intervals.len()
        );
    }
    let report = compare_labelled(&heroes, &CompareOptions::default())?;
    print!("{}", report.to_table());
    Ok(())
}
