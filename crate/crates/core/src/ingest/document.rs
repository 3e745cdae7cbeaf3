use std::collections::HashSet;
use std::fmt::Write as _;

use serde_json::{Map, Value};

use super::{
    finish, fraction_digits, ClarityRule, Code, Diagnostic, Location, Parsed, Rejected, Strictness,
    ValidationMode, MAX_FRACTION_DIGITS,
};
use crate::curves::{accumulate, AccumulatedTrack};
use crate::moment::{Axis, Film, MomentVector, Session, TimedMoment, Track, TrackKind};

const TOP_LEVEL_FIELDS: &[&str] = &[
    "schema_version",
    "accumulated",
    "film",
    "analyst",
    "created",
    "modified",
    "tracks",
];
const FILM_FIELDS: &[&str] = &["title", "runtime_minutes"];
const TRACK_FIELDS: &[&str] = &["subject", "kind", "axes", "moments"];
const MOMENT_FIELDS: &[&str] = &["t", "v", "note"];

/// An accumulated export: prefix sums per track, marked
/// `"accumulated": true` so it cannot be mistaken for raw moments.
#[derive(Debug, Clone, PartialEq)]
pub struct AccumulatedDocument {
    pub film: Film,
    pub analyst: Option<String>,
    pub tracks: Vec<AccumulatedTrack>,
}

struct RawMoment {
    t: f64,
    v: [f64; 3],
    note: Option<String>,
}

struct RawTrack {
    subject: String,
    kind: TrackKind,
    moments: Vec<RawMoment>,
}

struct RawDocument {
    film: Film,
    analyst: Option<String>,
    created: Option<String>,
    modified: Option<String>,
    tracks: Vec<RawTrack>,
}

struct Walker {
    mode: ValidationMode,
    accumulated: bool,
    diagnostics: Vec<Diagnostic>,
}

fn at_track(index: usize, subject: Option<&str>) -> Location {
    Location {
        track: Some(index),
        subject: subject.map(str::to_string),
        ..Default::default()
    }
}

fn at_moment(index: usize, subject: Option<&str>, moment: usize) -> Location {
    Location {
        moment: Some(moment),
        ..at_track(index, subject)
    }
}

fn type_name(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

impl Walker {
    fn error(&mut self, code: Code, message: impl Into<String>, location: Location) {
        self.diagnostics.push(Diagnostic::error(code, message, location));
    }

    fn warning(&mut self, code: Code, message: impl Into<String>, location: Location) {
        self.diagnostics.push(Diagnostic::warning(code, message, location));
    }

    fn unknown_fields(&mut self, obj: &Map<String, Value>, known: &[&str], what: &str, loc: &Location) {
        for key in obj.keys().filter(|k| !known.contains(&k.as_str())) {
            self.warning(
                Code::UnknownField,
                format!("unknown field {key:?} in {what} ignored"),
                loc.clone(),
            );
        }
    }

    fn required<'v>(
        &mut self,
        obj: &'v Map<String, Value>,
        key: &str,
        what: &str,
        loc: &Location,
    ) -> Option<&'v Value> {
        let v = obj.get(key);
        if v.is_none() {
            self.error(Code::MissingField, format!("{what} is missing {key:?}"), loc.clone());
        }
        v
    }

    fn string(&mut self, v: &Value, key: &str, loc: &Location) -> Option<String> {
        match v {
            Value::String(s) => Some(s.clone()),
            other => {
                self.error(
                    Code::WrongType,
                    format!("{key:?} must be a string, found {}", type_name(other)),
                    loc.clone(),
                );
                None
            }
        }
    }

    fn optional_string(&mut self, obj: &Map<String, Value>, key: &str, loc: &Location) -> Option<String> {
        match obj.get(key) {
            None | Some(Value::Null) => None,
            Some(v) => self.string(v, key, loc),
        }
    }

    fn number(&mut self, v: &Value, key: &str, loc: &Location) -> Option<f64> {
        match v.as_f64() {
            Some(x) if v.is_number() => {
                if fraction_digits(x) > MAX_FRACTION_DIGITS {
                    self.warning(
                        Code::ExcessPrecision,
                        format!("{key:?} = {x} has more than {MAX_FRACTION_DIGITS} fractional digits"),
                        loc.clone(),
                    );
                }
                Some(x)
            }
            _ => {
                self.error(
                    Code::WrongType,
                    format!("{key:?} must be a number, found {}", type_name(v)),
                    loc.clone(),
                );
                None
            }
        }
    }

    fn document(&mut self, root: &Value) -> Option<RawDocument> {
        let root_loc = Location::default();
        let Value::Object(obj) = root else {
            self.error(
                Code::WrongType,
                format!("document must be an object, found {}", type_name(root)),
                root_loc,
            );
            return None;
        };

        let accumulated = matches!(obj.get("accumulated"), Some(Value::Bool(true)));
        if accumulated != self.accumulated {
            if accumulated {
                self.error(
                    Code::AccumulatedDocument,
                    "document holds accumulated values (\"accumulated\": true); load the raw session instead of accumulating twice",
                    root_loc,
                );
            } else {
                self.error(
                    Code::NotAccumulated,
                    "expected an accumulated export (\"accumulated\": true)",
                    root_loc,
                );
            }
            return None;
        }

        match self.required(obj, "schema_version", "document", &root_loc) {
            Some(Value::String(v)) if v == Session::SCHEMA_VERSION => {}
            Some(Value::String(v)) => {
                self.error(
                    Code::SchemaVersionUnsupported,
                    format!("schema_version {v:?} is not supported (expected \"1\")"),
                    root_loc,
                );
                return None;
            }
            Some(other) => {
                self.error(
                    Code::WrongType,
                    format!("\"schema_version\" must be a string, found {}", type_name(other)),
                    root_loc,
                );
                return None;
            }
            None => return None,
        }

        let film = self.film(obj, &root_loc);
        let analyst = self.optional_string(obj, "analyst", &root_loc);
        let created = self.optional_string(obj, "created", &root_loc);
        let modified = self.optional_string(obj, "modified", &root_loc);
        self.unknown_fields(obj, TOP_LEVEL_FIELDS, "document", &root_loc);

        let runtime = film.as_ref().and_then(|f| f.runtime_minutes);
        let tracks = match self.required(obj, "tracks", "document", &root_loc) {
            Some(Value::Array(items)) => self.tracks(items, runtime),
            Some(other) => {
                self.error(
                    Code::WrongType,
                    format!("\"tracks\" must be an array, found {}", type_name(other)),
                    root_loc,
                );
                None
            }
            None => None,
        };

        Some(RawDocument {
            film: film?,
            analyst,
            created,
            modified,
            tracks: tracks?,
        })
    }

    fn film(&mut self, obj: &Map<String, Value>, root: &Location) -> Option<Film> {
        let film = match self.required(obj, "film", "document", root)? {
            Value::Object(f) => f,
            other => {
                self.error(
                    Code::WrongType,
                    format!("\"film\" must be an object, found {}", type_name(other)),
                    root.clone(),
                );
                return None;
            }
        };
        let title = self
            .required(film, "title", "film", root)
            .and_then(|v| self.string(v, "title", root));
        let runtime_minutes = match film.get("runtime_minutes") {
            None | Some(Value::Null) => Some(None),
            Some(v) => match self.number(v, "runtime_minutes", root) {
                Some(r) if r.is_finite() && r > 0.0 => Some(Some(r)),
                Some(r) => {
                    self.error(
                        Code::InvalidRuntime,
                        format!("runtime_minutes must be positive, found {r}"),
                        root.clone(),
                    );
                    None
                }
                None => None,
            },
        };
        self.unknown_fields(film, FILM_FIELDS, "film", root);
        Some(Film {
            title: title?,
            runtime_minutes: runtime_minutes?,
        })
    }

    fn tracks(&mut self, items: &[Value], runtime: Option<f64>) -> Option<Vec<RawTrack>> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.track(i, item, runtime, &mut seen) {
                Some(t) => out.push(t),
                None => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn track(
        &mut self,
        index: usize,
        item: &Value,
        runtime: Option<f64>,
        seen: &mut HashSet<(String, TrackKind)>,
    ) -> Option<RawTrack> {
        let loc = at_track(index, None);
        let Value::Object(obj) = item else {
            self.error(
                Code::WrongType,
                format!("track must be an object, found {}", type_name(item)),
                loc,
            );
            return None;
        };
        let subject = self
            .required(obj, "subject", "track", &loc)
            .and_then(|v| self.string(v, "subject", &loc));
        let loc = at_track(index, subject.as_deref());
        if subject.as_deref() == Some("") {
            self.error(Code::KindSubjectMismatch, "subject must not be empty", loc.clone());
        }

        let kind = match self.required(obj, "kind", "track", &loc) {
            Some(v) => match self.string(v, "kind", &loc) {
                Some(k) => match TrackKind::parse(&k) {
                    Some(kind) => Some(kind),
                    None => {
                        self.error(
                            Code::UnknownKind,
                            format!("kind {k:?} must be \"discourse\" or \"story\""),
                            loc.clone(),
                        );
                        None
                    }
                },
                None => None,
            },
            None => None,
        };

        if let (Some(s), Some(k)) = (&subject, kind) {
            if TrackKind::for_subject(s) != k {
                self.error(
                    Code::KindSubjectMismatch,
                    format!("subject {s:?} cannot have kind {k}; the subject \"story\" is reserved for story tracks"),
                    loc.clone(),
                );
            } else if !seen.insert((s.clone(), k)) {
                self.error(
                    Code::DuplicateSubject,
                    format!("a {k} track for {s:?} already exists"),
                    loc.clone(),
                );
            }
        }

        if let Some(axes) = self.required(obj, "axes", "track", &loc) {
            self.axes(axes, kind, &loc);
        }

        self.unknown_fields(obj, TRACK_FIELDS, "track", &loc);

        let moments = match self.required(obj, "moments", "track", &loc) {
            Some(Value::Array(items)) => {
                if items.is_empty() {
                    self.warning(Code::EmptyTrack, "track has no moments", loc.clone());
                }
                self.moments(index, subject.as_deref(), kind, items, runtime)
            }
            Some(other) => {
                self.error(
                    Code::WrongType,
                    format!("\"moments\" must be an array, found {}", type_name(other)),
                    loc,
                );
                None
            }
            None => None,
        };

        Some(RawTrack {
            subject: subject?,
            kind: kind?,
            moments: moments?,
        })
    }

    fn axes(&mut self, axes: &Value, kind: Option<TrackKind>, loc: &Location) {
        let names: Option<Vec<&str>> = axes
            .as_array()
            .and_then(|a| a.iter().map(Value::as_str).collect());
        let Some(names) = names else {
            self.error(Code::WrongType, "\"axes\" must be an array of strings", loc.clone());
            return;
        };
        let Some(kind) = kind else { return };
        let expected = kind.axis_names();
        if names != expected {
            let hint = if names.len() == 3 && names.iter().all(|n| Axis::parse(n).is_some()) {
                " (axis order is fixed)"
            } else {
                ""
            };
            self.error(
                Code::AxesMismatch,
                format!("{kind} tracks use axes {expected:?}, found {names:?}{hint}"),
                loc.clone(),
            );
        }
    }

    fn moments(
        &mut self,
        index: usize,
        subject: Option<&str>,
        kind: Option<TrackKind>,
        items: &[Value],
        runtime: Option<f64>,
    ) -> Option<Vec<RawMoment>> {
        let mut out = Vec::with_capacity(items.len());
        let mut ok = true;
        let mut previous: Option<f64> = None;
        for (j, item) in items.iter().enumerate() {
            let loc = at_moment(index, subject, j);
            let Value::Object(obj) = item else {
                self.error(
                    Code::WrongType,
                    format!("moment must be an object, found {}", type_name(item)),
                    loc,
                );
                ok = false;
                continue;
            };

            let t = self
                .required(obj, "t", "moment", &loc)
                .and_then(|v| self.number(v, "t", &loc))
                .and_then(|t| {
                    if t.is_finite() && t >= 0.0 {
                        Some(t)
                    } else {
                        self.error(Code::InvalidTime, format!("t = {t} must be non-negative"), loc.clone());
                        None
                    }
                });
            if let Some(t) = t {
                if let Some(prev) = previous {
                    if t <= prev {
                        self.error(
                            Code::NonMonotoneTime,
                            format!("t = {t} does not exceed the previous time {prev}"),
                            loc.clone(),
                        );
                    }
                }
                if let Some(r) = runtime {
                    if t > r {
                        self.error(
                            Code::BeyondRuntime,
                            format!("t = {t} exceeds the film runtime of {r} minutes"),
                            loc.clone(),
                        );
                    }
                }
                previous = Some(previous.map_or(t, |p: f64| p.max(t)));
            }

            let v = self.required(obj, "v", "moment", &loc).and_then(|v| self.vector(v, kind, &loc));
            let note = self.optional_string(obj, "note", &loc);
            self.unknown_fields(obj, MOMENT_FIELDS, "moment", &loc);

            match (t, v) {
                (Some(t), Some(v)) => out.push(RawMoment { t, v, note }),
                _ => ok = false,
            }
        }
        ok.then_some(out)
    }

    fn vector(&mut self, v: &Value, kind: Option<TrackKind>, loc: &Location) -> Option<[f64; 3]> {
        let Some(items) = v.as_array() else {
            self.error(
                Code::WrongType,
                format!("\"v\" must be an array of three numbers, found {}", type_name(v)),
                loc.clone(),
            );
            return None;
        };
        if items.len() != 3 {
            self.error(
                Code::ValueArity,
                format!("\"v\" must have exactly 3 components, found {}", items.len()),
                loc.clone(),
            );
            return None;
        }
        let mut out = [0.0; 3];
        let mut ok = true;
        for (i, item) in items.iter().enumerate() {
            match self.number(item, "v", loc) {
                Some(x) if !self.accumulated && !(-1.0..=1.0).contains(&x) => {
                    let axis = kind.map_or_else(|| format!("component {i}"), |k| k.axes()[i].to_string());
                    self.error(Code::OutOfRange, format!("{axis} = {x} lies outside [-1, 1]"), loc.clone());
                    ok = false;
                }
                Some(x) => out[i] = x,
                None => ok = false,
            }
        }
        if ok && !self.accumulated && kind == Some(TrackKind::Story) && out[2] > 0.0
            && self.mode.clarity == ClarityRule::ConfusionOnly {
                let msg = format!(
                    "clarity = {} is positive; only confusion (clarity <= 0) is recorded under the confusion-only rule",
                    out[2]
                );
                match self.mode.strictness {
                    Strictness::Lenient => self.warning(Code::ClarityPositive, msg, loc.clone()),
                    Strictness::Strict => self.error(Code::ClarityPositive, msg, loc.clone()),
                }
            }
        ok.then_some(out)
    }
}

fn walk(doc: &str, mode: ValidationMode, accumulated: bool) -> (Option<RawDocument>, Vec<Diagnostic>) {
    let root: Value = match serde_json::from_str(doc) {
        Ok(v) => v,
        Err(e) => {
            let d = Diagnostic::error(
                Code::Syntax,
                e.to_string(),
                Location {
                    line: Some(e.line()),
                    column: Some(e.column()),
                    ..Default::default()
                },
            );
            return (None, vec![d]);
        }
    };
    let mut walker = Walker {
        mode,
        accumulated,
        diagnostics: Vec::new(),
    };
    let raw = walker.document(&root);
    (raw, walker.diagnostics)
}

/// Parses a session document with the default (lenient, confusion-only)
/// validation mode.
pub fn parse_session(doc: &str) -> Result<Parsed<Session>, Rejected> {
    parse_session_with(doc, ValidationMode::default())
}

pub fn parse_session_with(doc: &str, mode: ValidationMode) -> Result<Parsed<Session>, Rejected> {
    let (raw, diagnostics) = walk(doc, mode, false);
    finish(diagnostics, move || {
        let raw = raw.expect("no errors implies a complete document");
        let mut session = Session::new(raw.film);
        session.analyst = raw.analyst;
        session.created = raw.created;
        session.modified = raw.modified;
        for t in raw.tracks {
            let moments = t.moments.into_iter().map(|m| TimedMoment {
                t: m.t,
                moment: MomentVector::from_array(m.v).expect("validated"),
                note: m.note,
            });
            let track = Track::with_moments(t.subject, t.kind, moments).expect("validated");
            session.add_track(track).expect("validated");
        }
        session
    })
}

/// Parses an accumulated export written by [`write_accumulated`].
pub fn parse_accumulated(doc: &str) -> Result<Parsed<AccumulatedDocument>, Rejected> {
    let (raw, mut diagnostics) = walk(doc, ValidationMode::default(), true);
    // an accumulated track needs at least one entry
    if let Some(raw) = &raw {
        for (i, t) in raw.tracks.iter().enumerate() {
            if t.moments.is_empty() {
                diagnostics.retain(|d| !(d.code == Code::EmptyTrack && d.location.track == Some(i)));
                diagnostics.push(Diagnostic::error(
                    Code::EmptyTrack,
                    "accumulated track has no entries",
                    at_track(i, Some(&t.subject)),
                ));
            }
        }
    }
    finish(diagnostics, move || {
        let raw = raw.expect("no errors implies a complete document");
        AccumulatedDocument {
            film: raw.film,
            analyst: raw.analyst,
            tracks: raw
                .tracks
                .into_iter()
                .map(|t| {
                    let entries: Vec<(f64, [f64; 3])> = t.moments.iter().map(|m| (m.t, m.v)).collect();
                    AccumulatedTrack::from_entries(t.subject, t.kind, &entries).expect("validated")
                })
                .collect(),
        }
    })
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_num(x: f64) -> String {
    serde_json::to_string(&x).expect("finite numbers serialize")
}

struct TrackOut<'a> {
    subject: &'a str,
    kind: TrackKind,
    moments: Vec<(f64, [f64; 3], Option<&'a str>)>,
}

fn write_document(
    accumulated: bool,
    film: &Film,
    analyst: Option<&str>,
    created: Option<&str>,
    modified: Option<&str>,
    tracks: &[TrackOut<'_>],
) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"schema_version\": {},", json_str(Session::SCHEMA_VERSION));
    if accumulated {
        out.push_str("  \"accumulated\": true,\n");
    }
    let _ = write!(out, "  \"film\": {{\"title\": {}", json_str(&film.title));
    if let Some(r) = film.runtime_minutes {
        let _ = write!(out, ", \"runtime_minutes\": {}", json_num(r));
    }
    out.push_str("},\n");
    for (key, value) in [("analyst", analyst), ("created", created), ("modified", modified)] {
        if let Some(v) = value {
            let _ = writeln!(out, "  {}: {},", json_str(key), json_str(v));
        }
    }
    if tracks.is_empty() {
        out.push_str("  \"tracks\": []\n}\n");
        return out;
    }
    out.push_str("  \"tracks\": [\n");
    for (i, t) in tracks.iter().enumerate() {
        out.push_str("    {\n");
        let _ = writeln!(out, "      \"subject\": {},", json_str(t.subject));
        let _ = writeln!(out, "      \"kind\": {},", json_str(t.kind.as_str()));
        let axes = t.kind.axis_names().map(json_str).join(", ");
        let _ = writeln!(out, "      \"axes\": [{axes}],");
        if t.moments.is_empty() {
            out.push_str("      \"moments\": []\n");
        } else {
            out.push_str("      \"moments\": [\n");
            for (j, (time, v, note)) in t.moments.iter().enumerate() {
                let _ = write!(
                    out,
                    "        {{\"t\": {}, \"v\": [{}, {}, {}]",
                    json_num(*time),
                    json_num(v[0]),
                    json_num(v[1]),
                    json_num(v[2])
                );
                if let Some(n) = note {
                    let _ = write!(out, ", \"note\": {}", json_str(n));
                }
                out.push('}');
                out.push_str(if j + 1 < t.moments.len() { ",\n" } else { "\n" });
            }
            out.push_str("      ]\n");
        }
        out.push_str(if i + 1 < tracks.len() { "    },\n" } else { "    }\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

/// Canonical serialization: fixed field order, two-space layout with one
/// moment per line, numbers in shortest round-trip form.
pub fn write_session(session: &Session) -> String {
    let tracks: Vec<TrackOut<'_>> = session
        .tracks()
        .iter()
        .map(|t| TrackOut {
            subject: t.subject(),
            kind: t.kind(),
            moments: t
                .moments()
                .iter()
                .map(|m| (m.t, m.moment.components(), m.note.as_deref()))
                .collect(),
        })
        .collect();
    write_document(
        false,
        &session.film,
        session.analyst.as_deref(),
        session.created.as_deref(),
        session.modified.as_deref(),
        &tracks,
    )
}

/// Accumulated export of every nonempty track: moments replaced by their
/// prefix sums, document marked `"accumulated": true`.
pub fn write_accumulated(session: &Session) -> String {
    let accumulated: Vec<AccumulatedTrack> = session
        .tracks()
        .iter()
        .filter_map(|t| accumulate(t).ok())
        .collect();
    let tracks: Vec<TrackOut<'_>> = accumulated
        .iter()
        .map(|a| TrackOut {
            subject: a.subject(),
            kind: a.kind(),
            moments: a.entries().map(|(t, v)| (t, v, None)).collect(),
        })
        .collect();
    write_document(
        true,
        &session.film,
        session.analyst.as_deref(),
        session.created.as_deref(),
        session.modified.as_deref(),
        &tracks,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"schema_version": "1", "film": {"title": "Lady Bird"},
        "tracks": [{"subject": "Marion", "kind": "discourse",
                    "axes": ["concern", "endearment", "justice"],
                    "moments": [{"t": 1.5, "v": [0.2, 0, 0]}]}]}"#;

    fn codes(doc: &str) -> Vec<Code> {
        match parse_session(doc) {
            Ok(p) => p.diagnostics.iter().map(|d| d.code).collect(),
            Err(r) => r.codes(),
        }
    }

    #[test]
    fn minimal_document() {
        let p = parse_session(MINIMAL).unwrap();
        assert!(p.diagnostics.is_empty());
        let s = p.value;
        assert_eq!(s.tracks().len(), 1);
        assert_eq!(s.tracks()[0].len(), 1);
        assert_eq!(s.tracks()[0].moments()[0].moment.components(), [0.2, 0.0, 0.0]);
    }

    #[test]
    fn duplicate_time_rejected() {
        let doc = MINIMAL.replace(
            r#"[{"t": 1.5, "v": [0.2, 0, 0]}]"#,
            r#"[{"t": 5.0, "v": [0.2, 0, 0]}, {"t": 5.0, "v": [0.1, 0, 0]}]"#,
        );
        let err = parse_session(&doc).unwrap_err();
        assert_eq!(err.codes(), vec![Code::NonMonotoneTime]);
        assert_eq!(err.diagnostics[0].location.moment, Some(1));
    }

    #[test]
    fn positive_clarity_warns_in_lenient_mode() {
        let doc = r#"{"schema_version": "1", "film": {"title": "Psycho"},
            "tracks": [{"subject": "story", "kind": "story",
                        "axes": ["curiosity", "surprise", "clarity"],
                        "moments": [{"t": 2.0, "v": [0, 0, 0.5]}]}]}"#;
        let p = parse_session(doc).unwrap();
        assert_eq!(p.diagnostics.len(), 1);
        assert_eq!(p.diagnostics[0].code, Code::ClarityPositive);
        assert!(!p.diagnostics[0].is_error());

        let err = parse_session_with(doc, ValidationMode::strict()).unwrap_err();
        assert_eq!(err.codes(), vec![Code::ClarityPositive]);

        let free = ValidationMode {
            clarity: ClarityRule::Free,
            ..Default::default()
        };
        assert!(parse_session_with(doc, free).unwrap().diagnostics.is_empty());
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_session("{\n  \"schema_version\": \"1\",\n  oops\n}").unwrap_err();
        assert_eq!(err.codes(), vec![Code::Syntax]);
        assert_eq!(err.diagnostics[0].location.line, Some(3));
    }

    #[test]
    fn collects_multiple_errors_in_order() {
        let doc = r#"{"schema_version": "1", "film": {"title": "x", "runtime_minutes": 10},
            "tracks": [
              {"subject": "A", "kind": "discourse", "axes": ["concern", "endearment", "justice"],
               "moments": [{"t": 1, "v": [1.2, 0, 0]}, {"t": 11, "v": [0, 0, 0]}]},
              {"subject": "A", "kind": "discourse", "axes": ["concern", "endearment", "justice"],
               "moments": []}
            ]}"#;
        assert_eq!(
            codes(doc),
            vec![
                Code::OutOfRange,
                Code::BeyondRuntime,
                Code::DuplicateSubject,
                Code::EmptyTrack
            ]
        );
    }

    #[test]
    fn empty_tracks_session_round_trip() {
        let s = Session::new(Film {
            title: "Empty".into(),
            runtime_minutes: None,
        });
        let doc = write_session(&s);
        assert_eq!(doc, "{\n  \"schema_version\": \"1\",\n  \"film\": {\"title\": \"Empty\"},\n  \"tracks\": []\n}\n");
        assert_eq!(parse_session(&doc).unwrap().value, s);
    }

    #[test]
    fn canonical_write_is_fixed_point() {
        let first = write_session(&parse_session(MINIMAL).unwrap().value);
        let second = write_session(&parse_session(&first).unwrap().value);
        assert_eq!(first, second);
        assert!(first.contains("{\"t\": 1.5, \"v\": [0.2, 0.0, 0.0]}"));
    }

    #[test]
    fn accumulated_documents_are_distinct() {
        let s = parse_session(MINIMAL).unwrap().value;
        let acc = write_accumulated(&s);
        assert!(acc.contains("\"accumulated\": true"));
        let err = parse_session(&acc).unwrap_err();
        assert_eq!(err.codes(), vec![Code::AccumulatedDocument]);
        let back = parse_accumulated(&acc).unwrap().value;
        assert_eq!(back.tracks[0].final_value(), [0.2, 0.0, 0.0]);
        assert_eq!(parse_accumulated(MINIMAL).unwrap_err().codes(), vec![Code::NotAccumulated]);
    }

    #[test]
    fn accumulated_values_may_leave_cube() {
        let mut s = Session::new(Film {
            title: "x".into(),
            runtime_minutes: None,
        });
        s.add_track(
            Track::from_values(
                "A",
                TrackKind::Discourse,
                &[(1.0, [0.9, 0.0, 0.0]), (2.0, [0.9, 0.0, 0.0])],
            )
            .unwrap(),
        )
        .unwrap();
        let back = parse_accumulated(&write_accumulated(&s)).unwrap().value;
        assert_eq!(back.tracks[0].final_value()[0], 1.8);
    }
}
