//! SVG plots of f and F-bar, plus a 3D point list of the moment curve.

use std::fs;

use story_moments::curves::{CurveFn, Grid};
use story_moments::ingest::parse_session;
use story_moments::render::{export_curve3d, plot_track};
use story_moments::Weights;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/lady_bird.json");
    let session = parse_session(&fs::read_to_string(path)?)?.value;
    let marion = session.track("Marion").ok_or("missing track")?;
    let out = std::env::temp_dir();
    let grid = Grid::Step { seconds: 5.0 };

    for f in [CurveFn::Instant, CurveFn::AccumulatedCombined, CurveFn::Smooth { degree: 3 }] {
        let svg = plot_track(marion, f, &Weights::uniform(), &grid)?;
        let file = out.join(format!("marion-{}.svg", f.name()));
        fs::write(&file, svg)?;
        println!("{}", file.display());
    }

    let csv = export_curve3d(marion, true, &Grid::Step { seconds: 60.0 })?;
    for line in csv.lines().take(5) {
        println!("{line}");
    }
    Ok(())
}
