//! Instant, accumulated and smoothed functions of one track.
//!
//! `cargo run -p story-moments --example curves [session.json] [subject]`

use std::env;
use std::fs;

use story_moments::curves::{accumulate, eval_accumulated, eval_combined, eval_instant, smooth_instant};
use story_moments::ingest::parse_session;
use story_moments::Weights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = env::args().collect();
    let path = args
        .get(1)
        .cloned()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/lady_bird.json").to_string());
    let subject = args.get(2).map_or("Marion", String::as_str);

    let session = parse_session(&fs::read_to_string(&path)?)?.value;
    let track = session.track(subject).ok_or("no such track")?;
    let acc = accumulate(track)?;
    let w = Weights::uniform();

    println!("{:>6}  {:>22}  {:>7}  {:>22}  {:>22}", "t", "f", "f-bar", "F", "smooth p=2");
    let (t0, t1) = (track.first_time().unwrap(), track.last_time().unwrap());
    for k in 0..=12 {
        let t = t0 + (t1 - t0) * k as f64 / 12.0;
        let f = eval_instant(track, t)?;
        let big_f = eval_accumulated(&acc, t);
        let s = smooth_instant(track, 2, t)?;
        println!(
            "{t:>6.2}  {}  {:>7.3}  {}  {}",
            fmt3(f),
            eval_combined(track, &w, t)?,
            fmt3(big_f),
            fmt3(s)
        );
    }
    println!("final M_N = {}", fmt3(acc.final_value()));
    Ok(())
}

fn fmt3(v: [f64; 3]) -> String {
    format!("[{:>6.3},{:>6.3},{:>6.3}]", v[0], v[1], v[2])
}
