//! Single-track CSV import.
//!
//! Header: `t_minutes,axis0,axis1,axis2` with an optional trailing `note`
//! column. The axis columns may instead carry the kind's axis names, in
//! order (`concern,endearment,justice` or `curiosity,surprise,clarity`).
//! A blank axis cell reads as 0 and produces a `BlankCell` warning.

use super::{
    finish, fraction_digits, ClarityRule, Code, Diagnostic, Location, Parsed, Rejected, ValidationMode,
    MAX_FRACTION_DIGITS,
};
use crate::moment::{MomentVector, TimedMoment, Track, TrackKind};

fn at_row(subject: &str, moment: usize, line: usize, column: Option<usize>) -> Location {
    Location {
        subject: Some(subject.to_string()),
        moment: Some(moment),
        line: Some(line),
        column,
        ..Default::default()
    }
}

fn header_ok(header: &csv::StringRecord, kind: TrackKind) -> Option<bool> {
    let cols: Vec<&str> = header.iter().map(str::trim).collect();
    let named = kind.axis_names();
    let axes_ok = |a: &[&str]| a == ["axis0", "axis1", "axis2"] || a == named;
    match cols.as_slice() {
        ["t_minutes", a @ ..] if a.len() == 3 && axes_ok(a) => Some(false),
        ["t_minutes", a @ .., "note"] if a.len() == 3 && axes_ok(a) => Some(true),
        _ => None,
    }
}

pub fn import_csv_track(table: &str, subject: &str, kind: TrackKind) -> Result<Parsed<Track>, Rejected> {
    import_csv_track_with(table, subject, kind, ValidationMode::default())
}

pub fn import_csv_track_with(
    table: &str,
    subject: &str,
    kind: TrackKind,
    mode: ValidationMode,
) -> Result<Parsed<Track>, Rejected> {
    let mut diagnostics = Vec::new();
    let header_loc = Location {
        subject: Some(subject.to_string()),
        line: Some(1),
        ..Default::default()
    };
    if TrackKind::for_subject(subject) != kind || subject.is_empty() {
        diagnostics.push(Diagnostic::error(
            Code::KindSubjectMismatch,
            format!("subject {subject:?} cannot have kind {kind}"),
            header_loc.clone(),
        ));
        return Err(Rejected { diagnostics });
    }

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(table.as_bytes());
    let has_note = match reader.headers() {
        Ok(h) => header_ok(h, kind),
        Err(e) => {
            diagnostics.push(Diagnostic::error(Code::Syntax, e.to_string(), header_loc));
            return Err(Rejected { diagnostics });
        }
    };
    let Some(has_note) = has_note else {
        diagnostics.push(Diagnostic::error(
            Code::CsvHeader,
            "header must be \"t_minutes,axis0,axis1,axis2\" with an optional trailing \"note\"",
            header_loc,
        ));
        return Err(Rejected { diagnostics });
    };

    let mut moments: Vec<TimedMoment> = Vec::new();
    let mut previous: Option<f64> = None;
    for (index, record) in reader.records().enumerate() {
        let line = index + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(Diagnostic::error(
                    Code::Syntax,
                    e.to_string(),
                    at_row(subject, index, line, None),
                ));
                continue;
            }
        };
        let expected = if has_note { 5 } else { 4 };
        if record.len() < 4 || record.len() > expected {
            diagnostics.push(Diagnostic::error(
                Code::ValueArity,
                format!("expected {expected} columns, found {}", record.len()),
                at_row(subject, index, line, None),
            ));
            continue;
        }

        let mut ok = true;
        let number = |col: usize, blank_default: Option<f64>, diagnostics: &mut Vec<Diagnostic>| {
            let cell = record[col].trim();
            let loc = at_row(subject, index, line, Some(col + 1));
            if cell.is_empty() {
                return match blank_default {
                    Some(d) => {
                        diagnostics.push(Diagnostic::warning(
                            Code::BlankCell,
                            format!("blank cell in column {} read as {d}", col + 1),
                            loc,
                        ));
                        Some(d)
                    }
                    None => {
                        diagnostics.push(Diagnostic::error(Code::MissingField, "t_minutes is blank", loc));
                        None
                    }
                };
            }
            match cell.parse::<f64>() {
                Ok(x) if !x.is_finite() => {
                    diagnostics.push(Diagnostic::error(Code::NotFinite, format!("{cell:?} is not finite"), loc));
                    None
                }
                Ok(x) => {
                    if fraction_digits(x) > MAX_FRACTION_DIGITS {
                        diagnostics.push(Diagnostic::warning(
                            Code::ExcessPrecision,
                            format!("{cell} has more than {MAX_FRACTION_DIGITS} fractional digits"),
                            loc,
                        ));
                    }
                    Some(x)
                }
                Err(_) => {
                    diagnostics.push(Diagnostic::error(Code::WrongType, format!("{cell:?} is not a number"), loc));
                    None
                }
            }
        };

        let t = number(0, None, &mut diagnostics);
        let mut v = [0.0; 3];
        for i in 0..3 {
            match number(i + 1, Some(0.0), &mut diagnostics) {
                Some(x) if !(-1.0..=1.0).contains(&x) => {
                    diagnostics.push(Diagnostic::error(
                        Code::OutOfRange,
                        format!("{} = {x} lies outside [-1, 1]", kind.axes()[i]),
                        at_row(subject, index, line, Some(i + 2)),
                    ));
                    ok = false;
                }
                Some(x) => v[i] = x,
                None => ok = false,
            }
        }
        let Some(t) = t else { continue };
        if t < 0.0 {
            diagnostics.push(Diagnostic::error(
                Code::InvalidTime,
                format!("t = {t} must be non-negative"),
                at_row(subject, index, line, Some(1)),
            ));
            continue;
        }
        if let Some(prev) = previous {
            if t <= prev {
                diagnostics.push(Diagnostic::error(
                    Code::NonMonotoneTime,
                    format!("t = {t} does not exceed the previous time {prev}"),
                    at_row(subject, index, line, Some(1)),
                ));
                ok = false;
            }
        }
        previous = Some(previous.map_or(t, |p| p.max(t)));
        if kind == TrackKind::Story && v[2] > 0.0 && mode.clarity == ClarityRule::ConfusionOnly {
            let msg = format!("clarity = {} is positive under the confusion-only rule", v[2]);
            let loc = at_row(subject, index, line, Some(4));
            diagnostics.push(match mode.strictness {
                super::Strictness::Lenient => Diagnostic::warning(Code::ClarityPositive, msg, loc),
                super::Strictness::Strict => Diagnostic::error(Code::ClarityPositive, msg, loc),
            });
        }
        if ok {
            let note = has_note
                .then(|| record.get(4).map(str::to_string))
                .flatten()
                .filter(|n| !n.is_empty());
            moments.push(TimedMoment {
                t,
                moment: MomentVector::from_array(v).expect("validated"),
                note,
            });
        }
    }

    finish(diagnostics, move || {
        Track::with_moments(subject, kind, moments).expect("validated")
    })
}
