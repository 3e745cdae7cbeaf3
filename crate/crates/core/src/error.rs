use thiserror::Error;

use crate::moment::MomentVector;

pub type Result<T, E = MomentError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MomentError {
    #[error("component {index} = {value} lies outside [-1, 1]")]
    OutOfRange { index: usize, value: f64 },

    #[error("component {index} is not finite")]
    NotFinite { index: usize },

    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("invalid barycentric weights ({0}, {1}, {2}): each must be in [0, 1] and sum to 1")]
    InvalidWeights(f64, f64, f64),

    #[error("empty input")]
    EmptyInput,

    #[error("track has no moments")]
    EmptyTrack,

    #[error("invalid time {0}: must be finite and non-negative")]
    InvalidTime(f64),

    #[error("timestamps must strictly increase: t[{index}] = {current} follows {previous}")]
    NonMonotoneTime {
        index: usize,
        previous: f64,
        current: f64,
    },

    #[error("subject {subject:?} is not valid for a {kind} track")]
    KindSubjectMismatch { subject: String, kind: &'static str },

    #[error("duplicate track for subject {0:?}")]
    DuplicateSubject(String),

    #[error("moment at t = {t} exceeds the declared runtime of {runtime} minutes")]
    BeyondRuntime { t: f64, runtime: f64 },

    #[error("B-spline of degree {degree} needs at least {} control points, got {points}", degree + 1)]
    DegreeTooHigh { degree: usize, points: usize },

    #[error("B-spline degree must be at least 1")]
    ZeroDegree,

    #[error("sample grid must be finite and strictly increasing")]
    InvalidGrid,

    #[error("value range is degenerate (all values equal {value}); output set to zero")]
    DegenerateRange {
        value: f64,
        fallback: Vec<MomentVector>,
    },

    #[error("tracks share no overlapping time window")]
    NoOverlap,

    #[error("comparison needs at least two tracks, got {0}")]
    TooFewTracks(usize),

    #[error("invalid chart geometry: {0}")]
    InvalidGeometry(String),

    #[error("nothing to plot")]
    EmptySeries,
}
