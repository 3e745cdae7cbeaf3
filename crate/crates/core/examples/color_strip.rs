//! Color-chart strips for every track of a session, written next to the
//! system temp dir as PPM (and PNG when the `png` feature is on).

use std::fs;

use story_moments::colorchart::{render_grayscale_strip, render_strip, StripMode, StripOptions};
use story_moments::ingest::parse_session;
use story_moments::Weights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/psycho.json").to_string());
    let session = parse_session(&fs::read_to_string(path)?)?.value;
    let out = std::env::temp_dir();

    for mode in [StripMode::Instant, StripMode::AccumulatedClamped, StripMode::AccumulatedRescaled] {
        let opts = StripOptions {
            mode,
            seconds_per_pixel: 5.0,
            ..Default::default()
        };
        let img = render_strip(session.tracks(), &opts)?;
        let file = out.join(format!("strip-{}.ppm", mode.name()));
        fs::write(&file, img.to_ppm())?;
        #[cfg(feature = "png")]
        fs::write(file.with_extension("png"), img.to_png())?;
        println!("{} {}x{} -> {}", mode.name(), img.width, img.height, file.display());
        for row in &img.rows {
            println!("  row y={:<3} {}", row.y, row.subject);
        }
    }

    let gray = render_grayscale_strip(session.tracks(), &Weights::uniform(), &StripOptions::default())?;
    let file = out.join("strip-gray.pgm");
    fs::write(&file, gray.to_pgm())?;
    println!("grayscale -> {}", file.display());
    println!("{}", gray.sidecar_json());
    Ok(())
}
