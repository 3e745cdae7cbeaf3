//! Validating documents, importing a CSV track and writing canonical JSON.

use story_moments::ingest::{
    import_csv_track, parse_session, parse_session_with, write_session, ValidationMode,
};
use story_moments::{Film, Session, TrackKind};

const BROKEN: &str = r#"{
  "schema_version": "1",
  "film": {"title": "Psycho", "runtime_minutes": 109},
  "tracks": [
    {"subject": "story", "kind": "story", "axes": ["curiosity", "surprise", "clarity"],
     "moments": [{"t": 47, "v": [0.6, 0.9, 0.4]}, {"t": 40, "v": [0.2, 1.3, 0]}]}
  ]
}"#;

const TABLE: &str = "t_minutes,concern,endearment,justice,note
2.0,0.2,0.1,0,hotel room
9.0,0.3,,-0.4,takes the money
47.0,0.9,0.2,0.4,shower
";

fn main() {
    match parse_session(BROKEN) {
        Ok(p) => println!("accepted with {} warning(s)", p.diagnostics.len()),
        Err(rejected) => {
            println!("{rejected}");
            for d in &rejected.diagnostics {
                println!("  {d}");
            }
        }
    }
    // Strict mode turns the positive-clarity warning into an error.
    let strict = parse_session_with(BROKEN, ValidationMode::strict()).unwrap_err();
    println!("strict: {} error(s)", strict.error_count());

    let imported = import_csv_track(TABLE, "Marion Crane", TrackKind::Discourse).expect("valid table");
    for d in &imported.diagnostics {
        println!("csv {d}");
    }
    let mut session = Session::new(Film {
        title: "Psycho".into(),
        runtime_minutes: Some(109.0),
    });
    session.add_track(imported.value).unwrap();
    let text = write_session(&session);
    print!("{text}");
    assert_eq!(write_session(&parse_session(&text).unwrap().value), text);
}
