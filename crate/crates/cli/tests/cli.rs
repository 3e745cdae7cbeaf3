use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use story_moments::curves::{sample, CurveFn, Grid};
use story_moments::ingest::{parse_accumulated, parse_session};
use story_moments::render::{polyline_vertices, PlotSpec};
use story_moments::Weights;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fx(name: &str) -> String {
    fixtures().join(name).to_string_lossy().into_owned()
}

fn moments(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moments"))
        .args(args)
        .env("MOMENTS_NO_COLOR", "1")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn validate_accepts_bundled_fixtures() {
    let o = moments(&["validate", &fx("lady_bird.json"), &fx("psycho.json")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2);
    assert!(out.lines().all(|l| l.ends_with("0 errors, 0 warnings")));
}

#[test]
fn validate_reports_every_error() {
    let o = moments(&["validate", &fx("malformed/several_errors.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("3 errors, 0 warnings"));
    let err = stderr(&o);
    for code in ["NonMonotoneTime", "OutOfRange", "MissingField"] {
        assert!(err.contains(&format!("error[{code}]")), "{err}");
    }
    assert!(!err.contains('\x1b'));
}

#[test]
fn json_diagnostics_are_one_line_per_document() {
    let o = moments(&["--json-diagnostics", "validate", &fx("malformed/out_of_range.json"), &fx("psycho.json")]);
    assert_eq!(o.status.code(), Some(1));
    let lines: Vec<Value> = stderr(&o)
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["errors"], 1);
    assert_eq!(lines[0]["diagnostics"][0]["code"], "OutOfRange");
    assert_eq!(lines[1]["errors"], 0);
}

#[test]
fn validate_reads_stdin() {
    let text = std::fs::read(fixtures().join("solace_like.json")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_moments"))
        .args(["validate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&text).unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "<stdin>: 0 errors, 0 warnings");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(moments(&["validate", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(moments(&["validate"]).status.code(), Some(2));
    assert_eq!(moments(&["frobnicate"]).status.code(), Some(2));
    let o = moments(&["plot", &fx("psycho.json"), "--track", "Lila"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Marion Crane"));
    assert_eq!(moments(&["plot", &fx("psycho.json"), "--track", "story", "--weights", "1,1,1"]).status.code(), Some(2));
}

#[test]
fn help_lists_defaults() {
    let o = moments(&["strip", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let help = stdout(&o);
    assert!(help.contains("[default: instant]"));
    assert!(help.contains("[default: 24]"));
    let o = moments(&["compare", "--help"]);
    assert!(stdout(&o).contains("[default: 1.5]"));
}

#[test]
fn plot_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.svg");
    let o = moments(&[
        "plot",
        &fx("lady_bird.json"),
        "--track",
        "Marion",
        "--accumulated",
        "--combined",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<polyline").count(), 1);

    let o = moments(&["plot", &fx("lady_bird.json"), "--track", "story", "--degree", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("<polyline").count(), 3);
}

#[test]
fn plotted_vertices_follow_prefix_sums() {
    let o = moments(&["plot", &fx("lady_bird.json"), "--track", "Marion", "--accumulated", "--step", "30"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = stdout(&o);

    let text = std::fs::read_to_string(fixtures().join("lady_bird.json")).unwrap();
    let session = parse_session(&text).unwrap().value;
    let track = session.track("Marion").unwrap();
    let sampled = sample(track, CurveFn::Accumulated, &Weights::uniform(), &Grid::Step { seconds: 30.0 }).unwrap();
    let frame = PlotSpec::from_sampled("", &sampled).unwrap().frame;

    // F_i by hand: running sums, linearly interpolated between knots
    let times: Vec<f64> = track.times().collect();
    let mut sums = [0.0; 3].map(|_| Vec::new());
    let mut run = [0.0; 3];
    for m in track.moments() {
        for (i, s) in sums.iter_mut().enumerate() {
            run[i] += m.moment.get(i);
            s.push(run[i]);
        }
    }
    let reference = |i: usize, t: f64| -> f64 {
        if t < times[0] {
            return 0.0;
        }
        let k = times.partition_point(|&x| x <= t) - 1;
        if k + 1 == times.len() {
            return sums[i][k];
        }
        let s = (t - times[k]) / (times[k + 1] - times[k]);
        sums[i][k] + s * (sums[i][k + 1] - sums[i][k])
    };

    let lines = polyline_vertices(&svg);
    assert_eq!(lines.len(), 3);
    // coordinates are written with two decimals
    let tol_v = 0.005 * frame.value_per_px() + 1e-12;
    for (i, line) in lines.iter().enumerate() {
        assert_eq!(line.len(), sampled.times.len());
        for (&(x, y), &t) in line.iter().zip(&sampled.times) {
            let (_, v) = frame.from_px(x, y);
            assert!((v - reference(i, t)).abs() <= tol_v, "axis {i} t={t}: {v} vs {}", reference(i, t));
        }
    }
}

#[test]
fn compare_pins_first_moments_at_offset() {
    let o = moments(&["compare", &fx("lady_bird.json"), &fx("psycho.json"), "--offset", "1.5", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let firsts = report["first_times"].as_array().unwrap();
    assert!(firsts.len() >= 2);
    assert!(firsts.iter().all(|t| t.as_f64() == Some(1.5)));
}

#[test]
fn repeated_runs_give_identical_bytes() {
    for args in [
        vec!["strip", "psycho.json", "--mode", "rescale", "--spp", "20"],
        vec!["plot", "lady_bird.json", "--track", "story", "--degree", "2"],
        vec!["compare", "fugitive_like.json", "solace_like.json"],
    ] {
        let args: Vec<String> = args.iter().map(|a| if a.ends_with(".json") { fx(a) } else { a.to_string() }).collect();
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        assert_eq!(moments(&args).stdout, moments(&args).stdout, "{args:?}");
    }
}

#[test]
fn strip_formats_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let side = dir.path().join("s.json");
    let o = moments(&["strip", &fx("psycho.json"), "--spp", "60", "--sidecar", side.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // three rows of 24 with two separators, 104 minutes at one column per minute
    assert!(o.stdout.starts_with(b"P6\n104 74\n255\n"));
    assert_eq!(o.stdout.len(), "P6\n104 74\n255\n".len() + 104 * 74 * 3);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(&side).unwrap()).unwrap();
    assert_eq!(meta["width"], 104);
    assert_eq!(meta["rows"].as_array().unwrap().len(), 3);

    let o = moments(&["strip", &fx("psycho.json"), "--gray", "--format", "pgm", "--track", "story", "--spp", "60"]);
    assert!(o.stdout.starts_with(b"P5\n104 24\n255\n"));
    let o = moments(&["strip", &fx("psycho.json"), "--format", "png", "--mode", "rescale"]);
    assert!(o.stdout.starts_with(b"\x89PNG"));
    assert_eq!(moments(&["strip", &fx("psycho.json"), "--format", "pgm"]).status.code(), Some(2));
}

#[test]
fn accumulate_produces_marked_document() {
    let o = moments(&["accumulate", &fx("fugitive_like.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(parse_session(&text).is_err());
    let doc = parse_accumulated(&text).unwrap().value;
    assert_eq!(doc.tracks.len(), 1);
}

#[test]
fn compare_ranks_tracks() {
    let o = moments(&["compare", &fx("fugitive_like.json"), &fx("solace_like.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["offset_minutes"], 1.5);
    let ranking = report["ranking"].as_array().unwrap();
    assert!(ranking[0]["label"].as_str().unwrap().starts_with("fugitive_like"));

    let o = moments(&["compare", &format!("{}#Marion Crane", fx("psycho.json")), &format!("{}#Norman Bates", fx("psycho.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("psycho#Norman Bates"));
    assert_eq!(moments(&["compare", &format!("{}#story", fx("psycho.json"))]).status.code(), Some(2));
}

#[test]
fn export3d_rows() {
    let o = moments(&["export3d", &fx("psycho.json"), "--track", "Marion Crane", "--accumulated", "--step", "60"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x,y,z"));
    for l in lines {
        assert_eq!(l.split(',').count(), 4);
    }
}

#[test]
fn library_entry_point_matches_binary() {
    assert_eq!(moments_cli::run(["moments", "validate", &fx("lady_bird.json")]), moments_cli::EXIT_OK);
    assert_eq!(moments_cli::run(["moments", "validate", &fx("malformed/syntax.json")]), moments_cli::EXIT_INVALID);
    assert_eq!(moments_cli::run(["moments", "export3d"]), moments_cli::EXIT_USAGE);
}
