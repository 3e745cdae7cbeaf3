//! Moment vectors, axes, tracks and sessions.
//!
//! A moment is a point of the cube `[-1, 1]^3`. Discourse moments are
//! recorded per character along (Concern, Endearment, Justice); story
//! moments are recorded for the film as a whole along (Curiosity,
//! Surprise, Clarity). Index order is fixed: component `i` of a vector
//! always refers to axis `i` of its track kind, and maps to color channel
//! `i` (red, green, blue).

use std::fmt;

use serde::Serialize;

use crate::error::{MomentError, Result};

/// Reserved subject name for story tracks.
pub const STORY_SUBJECT: &str = "story";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TrackKind {
    Discourse,
    Story,
}

impl TrackKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TrackKind::Discourse => "discourse",
            TrackKind::Story => "story",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "discourse" => Some(TrackKind::Discourse),
            "story" => Some(TrackKind::Story),
            _ => None,
        }
    }

    /// The three axes of this kind in index order.
    pub fn axes(self) -> [Axis; 3] {
        match self {
            TrackKind::Discourse => [Axis::Concern, Axis::Endearment, Axis::Justice],
            TrackKind::Story => [Axis::Curiosity, Axis::Surprise, Axis::Clarity],
        }
    }

    pub fn axis_names(self) -> [&'static str; 3] {
        self.axes().map(Axis::name)
    }

    /// The kind a subject name implies.
    pub fn for_subject(subject: &str) -> Self {
        if subject == STORY_SUBJECT {
            TrackKind::Story
        } else {
            TrackKind::Discourse
        }
    }
}

impl Serialize for TrackKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl fmt::Display for TrackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One of the six universal moment axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Concern,
    Endearment,
    Justice,
    Curiosity,
    Surprise,
    Clarity,
}

impl Axis {
    pub const ALL: [Axis; 6] = [
        Axis::Concern,
        Axis::Endearment,
        Axis::Justice,
        Axis::Curiosity,
        Axis::Surprise,
        Axis::Clarity,
    ];

    pub fn kind(self) -> TrackKind {
        match self {
            Axis::Concern | Axis::Endearment | Axis::Justice => TrackKind::Discourse,
            Axis::Curiosity | Axis::Surprise | Axis::Clarity => TrackKind::Story,
        }
    }

    /// Component index within the kind's vector.
    pub fn index(self) -> usize {
        match self {
            Axis::Concern | Axis::Curiosity => 0,
            Axis::Endearment | Axis::Surprise => 1,
            Axis::Justice | Axis::Clarity => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Concern => "concern",
            Axis::Endearment => "endearment",
            Axis::Justice => "justice",
            Axis::Curiosity => "curiosity",
            Axis::Surprise => "surprise",
            Axis::Clarity => "clarity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Axis::ALL.into_iter().find(|a| a.name() == s)
    }

    /// Label of the positive pole.
    pub fn positive_pole(self) -> &'static str {
        match self {
            Axis::Concern => "concern",
            Axis::Endearment => "love",
            Axis::Justice => "comeuppance",
            Axis::Curiosity => "curiosity",
            Axis::Surprise => "surprise",
            Axis::Clarity => "clarity",
        }
    }

    /// Label of the negative pole.
    pub fn negative_pole(self) -> &'static str {
        match self {
            Axis::Concern => "envy",
            Axis::Endearment => "hate",
            Axis::Justice => "getting away with it",
            Axis::Curiosity => "apathy",
            Axis::Surprise => "predictable",
            Axis::Clarity => "confusion",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A validated point of `[-1, 1]^3`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentVector([f64; 3]);

impl MomentVector {
    pub const ZERO: MomentVector = MomentVector([0.0; 3]);

    pub fn new(m0: f64, m1: f64, m2: f64) -> Result<Self> {
        Self::from_array([m0, m1, m2])
    }

    pub fn from_array(components: [f64; 3]) -> Result<Self> {
        for (index, &value) in components.iter().enumerate() {
            if !value.is_finite() {
                return Err(MomentError::NotFinite { index });
            }
            if !(-1.0..=1.0).contains(&value) {
                return Err(MomentError::OutOfRange { index, value });
            }
        }
        Ok(MomentVector(components))
    }

    /// A single-axis moment, e.g. `(Concern, 0.2)`.
    pub fn along(axis: Axis, magnitude: f64) -> Result<Self> {
        let mut c = [0.0; 3];
        c[axis.index()] = magnitude;
        Self::from_array(c)
    }

    /// Builds a vector from components already known to lie in the cube.
    /// Components are clamped, so rounding noise cannot escape the cube.
    pub(crate) fn saturating(components: [f64; 3]) -> Self {
        MomentVector(components.map(|c| c.clamp(-1.0, 1.0)))
    }

    pub fn components(&self) -> [f64; 3] {
        self.0
    }

    pub fn get(&self, index: usize) -> f64 {
        self.0[index]
    }

    pub fn dot(&self, other: &MomentVector) -> f64 {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    /// Rotates by +90 degrees about `axis` (right-hand rule).
    pub fn rotate_90(&self, axis: RotationAxis) -> MomentVector {
        let [x, y, z] = self.0;
        MomentVector(match axis {
            RotationAxis::X => [x, -z, y],
            RotationAxis::Y => [z, y, -x],
            RotationAxis::Z => [-y, x, z],
        })
    }

    pub fn negated(&self) -> MomentVector {
        MomentVector(self.0.map(|c| -c))
    }

    pub fn to_point(&self, weight: f64) -> Result<MomentPoint> {
        MomentPoint::new(*self, weight)
    }
}

impl TryFrom<[f64; 3]> for MomentVector {
    type Error = MomentError;

    fn try_from(value: [f64; 3]) -> Result<Self> {
        Self::from_array(value)
    }
}

impl From<MomentVector> for [f64; 3] {
    fn from(m: MomentVector) -> Self {
        m.0
    }
}

/// Dot-product similarity of two moments, in `[-3, 3]`.
pub fn dot_similarity(a: &MomentVector, b: &MomentVector) -> f64 {
    a.dot(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

/// A moment in homogeneous coordinates `(T m0, T m1, T m2, T)`, where `T`
/// is a duration or importance weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentPoint {
    weighted: [f64; 3],
    weight: f64,
}

impl MomentPoint {
    pub fn new(moment: MomentVector, weight: f64) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(MomentError::NonPositiveWeight(weight));
        }
        Ok(MomentPoint {
            weighted: moment.0.map(|c| c * weight),
            weight,
        })
    }

    /// The four homogeneous coordinates.
    pub fn coords(&self) -> [f64; 4] {
        let [a, b, c] = self.weighted;
        [a, b, c, self.weight]
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Divides out the weight.
    pub fn moment(&self) -> MomentVector {
        MomentVector::saturating(self.weighted.map(|c| c / self.weight))
    }
}

/// Sums homogeneous points and projects back: the weighted average
/// `Σ T_k m_k / Σ T_k`, which always lies inside the cube.
pub fn point_average(points: &[MomentPoint]) -> Result<MomentVector> {
    if points.is_empty() {
        return Err(MomentError::EmptyInput);
    }
    let mut sum = [0.0; 4];
    for p in points {
        for (acc, c) in sum.iter_mut().zip(p.coords()) {
            *acc += c;
        }
    }
    let total = sum[3];
    Ok(MomentVector::saturating([
        sum[0] / total,
        sum[1] / total,
        sum[2] / total,
    ]))
}

/// Barycentric weights `(a0, a1, a2)`: each in `[0, 1]`, summing to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights([f64; 3]);

impl Weights {
    /// Tolerance on the sum when validating user-supplied weights.
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(a0: f64, a1: f64, a2: f64) -> Result<Self> {
        let a = [a0, a1, a2];
        let sum = a0 + a1 + a2;
        let valid = a.iter().all(|w| w.is_finite() && (0.0..=1.0).contains(w))
            && (sum - 1.0).abs() <= Self::SUM_TOLERANCE;
        if !valid {
            return Err(MomentError::InvalidWeights(a0, a1, a2));
        }
        Ok(Weights(a.map(|w| w / sum)))
    }

    pub fn uniform() -> Self {
        Weights([1.0 / 3.0; 3])
    }

    pub fn as_array(&self) -> [f64; 3] {
        self.0
    }

    /// `Σ a_i v_i`, kept within `[min v_i, max v_i]`.
    pub fn combine(&self, values: [f64; 3]) -> f64 {
        let raw = self.0[0] * values[0] + self.0[1] * values[1] + self.0[2] * values[2];
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        raw.clamp(lo, hi)
    }
}

impl Default for Weights {
    fn default() -> Self {
        Self::uniform()
    }
}

impl Serialize for Weights {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.as_array().serialize(s)
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.0[0], self.0[1], self.0[2])
    }
}

/// A moment at a film time, in minutes from the start.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedMoment {
    pub t: f64,
    pub moment: MomentVector,
    pub note: Option<String>,
}

impl TimedMoment {
    pub fn new(t: f64, moment: MomentVector) -> Result<Self> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(MomentError::InvalidTime(t));
        }
        Ok(TimedMoment {
            t,
            moment,
            note: None,
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// The strictly time-increasing moments recorded for one subject.
#[derive(Debug, Clone, PartialEq)]
pub struct Track {
    subject: String,
    kind: TrackKind,
    moments: Vec<TimedMoment>,
}

impl Track {
    pub fn new(subject: impl Into<String>, kind: TrackKind) -> Result<Self> {
        let subject = subject.into();
        if TrackKind::for_subject(&subject) != kind || subject.is_empty() {
            return Err(MomentError::KindSubjectMismatch {
                subject,
                kind: kind.as_str(),
            });
        }
        Ok(Track {
            subject,
            kind,
            moments: Vec::new(),
        })
    }

    pub fn with_moments(
        subject: impl Into<String>,
        kind: TrackKind,
        moments: impl IntoIterator<Item = TimedMoment>,
    ) -> Result<Self> {
        let mut track = Track::new(subject, kind)?;
        for m in moments {
            track.push(m)?;
        }
        Ok(track)
    }

    /// Convenience constructor from `(t, [m0, m1, m2])` pairs.
    pub fn from_values(
        subject: impl Into<String>,
        kind: TrackKind,
        values: &[(f64, [f64; 3])],
    ) -> Result<Self> {
        let moments = values
            .iter()
            .map(|&(t, v)| TimedMoment::new(t, MomentVector::from_array(v)?))
            .collect::<Result<Vec<_>>>()?;
        Track::with_moments(subject, kind, moments)
    }

    /// Appends a moment; its time must exceed the current last time.
    pub fn push(&mut self, moment: TimedMoment) -> Result<()> {
        if !(moment.t.is_finite() && moment.t >= 0.0) {
            return Err(MomentError::InvalidTime(moment.t));
        }
        if let Some(last) = self.moments.last() {
            if moment.t <= last.t {
                return Err(MomentError::NonMonotoneTime {
                    index: self.moments.len(),
                    previous: last.t,
                    current: moment.t,
                });
            }
        }
        self.moments.push(moment);
        Ok(())
    }

    pub fn pop(&mut self) -> Option<TimedMoment> {
        self.moments.pop()
    }

    pub fn subject(&self) -> &str {
        &self.subject
    }

    pub fn kind(&self) -> TrackKind {
        self.kind
    }

    pub fn moments(&self) -> &[TimedMoment] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.moments.iter().map(|m| m.t)
    }

    pub fn first_time(&self) -> Option<f64> {
        self.moments.first().map(|m| m.t)
    }

    pub fn last_time(&self) -> Option<f64> {
        self.moments.last().map(|m| m.t)
    }

    /// Shifts every timestamp by `delta`. Fails if a time would become
    /// negative; spacing and values are untouched.
    pub fn translated(&self, delta: f64) -> Result<Track> {
        let moments = self
            .moments
            .iter()
            .map(|m| {
                let t = m.t + delta;
                if !(t.is_finite() && t >= 0.0) {
                    return Err(MomentError::InvalidTime(t));
                }
                Ok(TimedMoment { t, ..m.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Track {
            subject: self.subject.clone(),
            kind: self.kind,
            moments,
        })
    }

    /// The same track with every moment sign-flipped.
    pub fn negated(&self) -> Track {
        Track {
            subject: self.subject.clone(),
            kind: self.kind,
            moments: self
                .moments
                .iter()
                .map(|m| TimedMoment {
                    moment: m.moment.negated(),
                    ..m.clone()
                })
                .collect(),
        }
    }

    pub fn renamed(&self, subject: impl Into<String>) -> Result<Track> {
        let mut t = Track::new(subject, self.kind)?;
        t.moments = self.moments.clone();
        Ok(t)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Film {
    pub title: String,
    pub runtime_minutes: Option<f64>,
}

/// A film's annotation: metadata plus one track per (subject, kind).
#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    pub film: Film,
    pub analyst: Option<String>,
    pub created: Option<String>,
    pub modified: Option<String>,
    tracks: Vec<Track>,
}

impl Session {
    pub const SCHEMA_VERSION: &'static str = "1";

    pub fn new(film: Film) -> Self {
        Session {
            film,
            analyst: None,
            created: None,
            modified: None,
            tracks: Vec::new(),
        }
    }

    pub fn tracks(&self) -> &[Track] {
        &self.tracks
    }

    pub fn track(&self, subject: &str) -> Option<&Track> {
        self.tracks.iter().find(|t| t.subject() == subject)
    }

    pub fn track_mut(&mut self, subject: &str) -> Option<&mut Track> {
        self.tracks.iter_mut().find(|t| t.subject() == subject)
    }

    pub fn add_track(&mut self, track: Track) -> Result<()> {
        if self
            .tracks
            .iter()
            .any(|t| t.subject() == track.subject() && t.kind() == track.kind())
        {
            return Err(MomentError::DuplicateSubject(track.subject().to_string()));
        }
        if let (Some(runtime), Some(last)) = (self.film.runtime_minutes, track.last_time()) {
            if last > runtime {
                return Err(MomentError::BeyondRuntime { t: last, runtime });
            }
        }
        self.tracks.push(track);
        Ok(())
    }

    /// Appends a moment to the subject's track, creating the track on
    /// first use.
    pub fn append(&mut self, subject: &str, kind: TrackKind, moment: TimedMoment) -> Result<()> {
        if let Some(runtime) = self.film.runtime_minutes {
            if moment.t > runtime {
                return Err(MomentError::BeyondRuntime {
                    t: moment.t,
                    runtime,
                });
            }
        }
        match self
            .tracks
            .iter_mut()
            .find(|t| t.subject() == subject && t.kind() == kind)
        {
            Some(track) => track.push(moment),
            None => {
                let mut track = Track::new(subject, kind)?;
                track.push(moment)?;
                self.tracks.push(track);
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: f64, b: f64, c: f64) -> MomentVector {
        MomentVector::new(a, b, c).unwrap()
    }

    #[test]
    fn make_moment_examples() {
        assert_eq!(v(0.0, 0.0, 0.0).components(), [0.0; 3]);
        assert_eq!(v(0.2, 0.0, 0.0).get(0), 0.2);
        assert_eq!(
            MomentVector::new(0.0, 0.0, 1.5),
            Err(MomentError::OutOfRange {
                index: 2,
                value: 1.5
            })
        );
        assert_eq!(
            MomentVector::new(f64::NAN, 0.0, 0.0),
            Err(MomentError::NotFinite { index: 0 })
        );
        assert!(MomentVector::new(0.0, f64::INFINITY, 0.0).is_err());
    }

    #[test]
    fn dot_examples() {
        assert_eq!(dot_similarity(&v(1.0, 0.0, 0.0), &v(1.0, 0.0, 0.0)), 1.0);
        assert_eq!(dot_similarity(&v(1.0, 0.0, 0.0), &v(0.0, 1.0, 0.0)), 0.0);
        assert_eq!(dot_similarity(&v(0.5, -0.5, 1.0), &v(1.0, 1.0, 1.0)), 1.0);
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(v(1.0, 0.0, 0.0).rotate_90(RotationAxis::Z), v(0.0, 1.0, 0.0));
        assert_eq!(v(0.0, 0.0, 1.0).rotate_90(RotationAxis::X), v(0.0, -1.0, 0.0));
        let m = v(0.3, -0.7, 0.9);
        for axis in [RotationAxis::X, RotationAxis::Y, RotationAxis::Z] {
            let r = (0..4).fold(m, |acc, _| acc.rotate_90(axis));
            assert_eq!(r, m);
        }
    }

    #[test]
    fn point_examples() {
        let p = v(0.5, 0.0, 0.0).to_point(1.0).unwrap();
        assert_eq!(p.coords(), [0.5, 0.0, 0.0, 1.0]);
        let p = v(0.5, 0.0, 0.0).to_point(2.0).unwrap();
        assert_eq!(p.coords(), [1.0, 0.0, 0.0, 2.0]);
        let p = v(0.0, 0.0, 0.0).to_point(3.0).unwrap();
        assert_eq!(p.coords(), [0.0, 0.0, 0.0, 3.0]);
        assert_eq!(
            v(0.1, 0.0, 0.0).to_point(0.0),
            Err(MomentError::NonPositiveWeight(0.0))
        );
        assert!(v(0.1, 0.0, 0.0).to_point(-1.0).is_err());
    }

    #[test]
    fn point_average_examples() {
        let one = [v(0.4, -0.2, 0.0).to_point(5.0).unwrap()];
        assert_eq!(point_average(&one).unwrap(), v(0.4, -0.2, 0.0));

        let sym = [
            v(1.0, 0.0, 0.0).to_point(1.0).unwrap(),
            v(-1.0, 0.0, 0.0).to_point(1.0).unwrap(),
        ];
        assert_eq!(point_average(&sym).unwrap(), v(0.0, 0.0, 0.0));

        let mixed = [
            v(1.0, 0.0, 0.0).to_point(3.0).unwrap(),
            v(0.0, 1.0, 0.0).to_point(1.0).unwrap(),
        ];
        assert_eq!(point_average(&mixed).unwrap(), v(0.75, 0.25, 0.0));
        assert_eq!(point_average(&[]), Err(MomentError::EmptyInput));
    }

    #[test]
    fn weights_validate_and_renormalize() {
        assert!(Weights::new(0.5, 0.5, 0.0).is_ok());
        assert!(Weights::new(0.5, 0.6, 0.0).is_err());
        assert!(Weights::new(-0.1, 0.6, 0.5).is_err());
        let w = Weights::new(0.2, 0.3, 0.5 + 5e-10).unwrap();
        let s: f64 = w.as_array().iter().sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn track_rejects_duplicate_and_backward_times() {
        let mut t = Track::new("Marion", TrackKind::Discourse).unwrap();
        t.push(TimedMoment::new(5.0, MomentVector::ZERO).unwrap())
            .unwrap();
        let err = t
            .push(TimedMoment::new(5.0, MomentVector::ZERO).unwrap())
            .unwrap_err();
        assert!(matches!(err, MomentError::NonMonotoneTime { index: 1, .. }));
        assert!(t
            .push(TimedMoment::new(4.0, MomentVector::ZERO).unwrap())
            .is_err());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn story_kind_iff_story_subject() {
        assert!(Track::new("story", TrackKind::Story).is_ok());
        assert!(Track::new("story", TrackKind::Discourse).is_err());
        assert!(Track::new("Marion", TrackKind::Story).is_err());
        assert!(Track::new("", TrackKind::Discourse).is_err());
    }

    #[test]
    fn session_enforces_unique_subjects_and_runtime() {
        let mut s = Session::new(Film {
            title: "x".into(),
            runtime_minutes: Some(10.0),
        });
        s.add_track(Track::from_values("A", TrackKind::Discourse, &[(1.0, [0.1, 0.0, 0.0])]).unwrap())
            .unwrap();
        assert!(matches!(
            s.add_track(Track::new("A", TrackKind::Discourse).unwrap()),
            Err(MomentError::DuplicateSubject(_))
        ));
        let late = TimedMoment::new(11.0, MomentVector::ZERO).unwrap();
        assert!(matches!(
            s.append("A", TrackKind::Discourse, late),
            Err(MomentError::BeyondRuntime { .. })
        ));
        s.append("B", TrackKind::Discourse, TimedMoment::new(2.0, MomentVector::ZERO).unwrap())
            .unwrap();
        assert_eq!(s.tracks().len(), 2);
    }

    #[test]
    fn pole_labels() {
        assert_eq!(Axis::Endearment.positive_pole(), "love");
        assert_eq!(Axis::Endearment.negative_pole(), "hate");
        assert_eq!(Axis::Surprise.negative_pole(), "predictable");
        assert_eq!(Axis::Clarity.negative_pole(), "confusion");
        for kind in [TrackKind::Discourse, TrackKind::Story] {
            for (i, axis) in kind.axes().into_iter().enumerate() {
                assert_eq!(axis.index(), i);
                assert_eq!(axis.kind(), kind);
            }
        }
    }
}
