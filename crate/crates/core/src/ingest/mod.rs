//! Session documents: parsing, validation and canonical writing.
//!
//! A session document is UTF-8 JSON:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "film": {"title": "Lady Bird", "runtime_minutes": 94.0},
//!   "analyst": "ana",
//!   "tracks": [
//!     {
//!       "subject": "Marion",
//!       "kind": "discourse",
//!       "axes": ["concern", "endearment", "justice"],
//!       "moments": [{"t": 1.5, "v": [0.2, 0.0, 0.0], "note": "..."}]
//!     }
//!   ]
//! }
//! ```
//!
//! Parsing never stops at the first problem: every diagnostic is collected
//! in document order, and any error-severity diagnostic rejects the
//! document.

mod csv_track;
mod document;

use std::fmt;

use serde::Serialize;

pub use csv_track::{import_csv_track, import_csv_track_with};
pub use document::{
    parse_accumulated, parse_session, parse_session_with, write_accumulated, write_session,
    AccumulatedDocument,
};

use crate::moment::Session;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Code {
    Syntax,
    SchemaVersionUnsupported,
    MissingField,
    WrongType,
    UnknownField,
    UnknownKind,
    AxesMismatch,
    KindSubjectMismatch,
    DuplicateSubject,
    ValueArity,
    OutOfRange,
    NotFinite,
    InvalidTime,
    NonMonotoneTime,
    BeyondRuntime,
    InvalidRuntime,
    EmptyTrack,
    ClarityPositive,
    ExcessPrecision,
    AccumulatedDocument,
    NotAccumulated,
    CsvHeader,
    BlankCell,
}

impl Code {
    pub fn as_str(&self) -> &'static str {
        match self {
            Code::Syntax => "Syntax",
            Code::SchemaVersionUnsupported => "SchemaVersionUnsupported",
            Code::MissingField => "MissingField",
            Code::WrongType => "WrongType",
            Code::UnknownField => "UnknownField",
            Code::UnknownKind => "UnknownKind",
            Code::AxesMismatch => "AxesMismatch",
            Code::KindSubjectMismatch => "KindSubjectMismatch",
            Code::DuplicateSubject => "DuplicateSubject",
            Code::ValueArity => "ValueArity",
            Code::OutOfRange => "OutOfRange",
            Code::NotFinite => "NotFinite",
            Code::InvalidTime => "InvalidTime",
            Code::NonMonotoneTime => "NonMonotoneTime",
            Code::BeyondRuntime => "BeyondRuntime",
            Code::InvalidRuntime => "InvalidRuntime",
            Code::EmptyTrack => "EmptyTrack",
            Code::ClarityPositive => "ClarityPositive",
            Code::ExcessPrecision => "ExcessPrecision",
            Code::AccumulatedDocument => "AccumulatedDocument",
            Code::NotAccumulated => "NotAccumulated",
            Code::CsvHeader => "CsvHeader",
            Code::BlankCell => "BlankCell",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a diagnostic applies. Line and column are 1-based and only set
/// where the syntax layer reports them (JSON syntax errors, CSV rows).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub track: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl Location {
    pub fn is_empty(&self) -> bool {
        *self == Location::default()
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match (&self.subject, self.track) {
            (Some(s), _) => parts.push(format!("track {s:?}")),
            (None, Some(i)) => parts.push(format!("track #{i}")),
            _ => {}
        }
        if let Some(m) = self.moment {
            parts.push(format!("moment #{m}"));
        }
        if let Some(l) = self.line {
            match self.column {
                Some(c) => parts.push(format!("line {l}, column {c}")),
                None => parts.push(format!("line {l}")),
            }
        }
        f.write_str(&parts.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    #[serde(skip_serializing_if = "Location::is_empty")]
    pub location: Location,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>, location: Location) -> Self {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>, location: Location) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]", self.code)?;
        if !self.location.is_empty() {
            write!(f, " {}", self.location)?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strictness {
    /// Clarity-rule violations are warnings.
    #[default]
    Lenient,
    /// Clarity-rule violations are errors.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClarityRule {
    /// Story tracks should only record confusion (clarity ≤ 0).
    #[default]
    ConfusionOnly,
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ValidationMode {
    pub strictness: Strictness,
    pub clarity: ClarityRule,
}

impl ValidationMode {
    pub fn strict() -> Self {
        ValidationMode {
            strictness: Strictness::Strict,
            clarity: ClarityRule::ConfusionOnly,
        }
    }
}

/// A successfully validated session and its warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed<T = Session> {
    pub value: T,
    pub diagnostics: Vec<Diagnostic>,
}

/// A rejected document: at least one diagnostic is an error.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("document rejected with {} error(s)", self.error_count())]
pub struct Rejected {
    pub diagnostics: Vec<Diagnostic>,
}

impl Rejected {
    pub fn error_count(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.is_error()).count()
    }

    pub fn codes(&self) -> Vec<Code> {
        self.diagnostics.iter().map(|d| d.code).collect()
    }
}

pub(crate) fn finish<T>(
    diagnostics: Vec<Diagnostic>,
    build: impl FnOnce() -> T,
) -> Result<Parsed<T>, Rejected> {
    if diagnostics.iter().any(Diagnostic::is_error) {
        Err(Rejected { diagnostics })
    } else {
        Ok(Parsed {
            value: build(),
            diagnostics,
        })
    }
}

/// Maximum number of fractional digits accepted without a warning.
pub const MAX_FRACTION_DIGITS: usize = 6;

/// Number of fractional digits in the shortest round-trip decimal form.
pub(crate) fn fraction_digits(x: f64) -> usize {
    let s = format!("{x}");
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_digit_count() {
        assert_eq!(fraction_digits(0.2), 1);
        assert_eq!(fraction_digits(1.0), 0);
        assert_eq!(fraction_digits(0.123456), 6);
        assert_eq!(fraction_digits(0.1234567), 7);
        assert_eq!(fraction_digits(1e-7), 7);
    }

    #[test]
    fn diagnostic_display() {
        let d = Diagnostic::error(
            Code::NonMonotoneTime,
            "t = 5 does not exceed previous 5",
            Location {
                subject: Some("Marion".into()),
                moment: Some(1),
                ..Default::default()
            },
        );
        assert_eq!(
            d.to_string(),
            "error[NonMonotoneTime] track \"Marion\", moment #1: t = 5 does not exceed previous 5"
        );
    }
}
