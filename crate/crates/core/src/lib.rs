//! Story and discourse moments: recording, curves, color charts and plots.
//!
//! A [`Track`] holds the timed moment vectors of one subject. From it the
//! [`curves`] module derives the instant functions `f_i`, their
//! accumulation `F_i` and barycentric combinations; [`colorchart`] turns
//! them into RGB strips; [`render`] draws SVG plots; [`analyze`] compares
//! tracks; [`ingest`] reads and writes session documents.

pub mod analyze;
pub mod colorchart;
pub mod curves;
pub mod error;
pub mod ingest;
pub mod moment;
pub mod render;

pub use error::{MomentError, Result};
pub use moment::{
    dot_similarity, point_average, Axis, Film, MomentPoint, MomentVector, RotationAxis, Session,
    TimedMoment, Track, TrackKind, Weights, STORY_SUBJECT,
};
