use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use story_moments::ingest::Location;
use story_moments::MomentError;

/// Error body `{code, message, location?}` with an HTTP status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code,
            message: message.into(),
            location: None,
        }
    }

    pub fn at(mut self, location: Location) -> Self {
        self.location = Some(location);
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "BadRequest", message)
    }

    pub fn unknown_session(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "UnknownSession", format!("no session {id:?}"))
    }

    pub fn unknown_track(subject: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "UnknownTrack", format!("no track for subject {subject:?}"))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message)
    }
}

impl From<MomentError> for ApiError {
    fn from(e: MomentError) -> Self {
        use StatusCode as S;
        let (status, code) = match &e {
            MomentError::OutOfRange { .. } => (S::UNPROCESSABLE_ENTITY, "OutOfRange"),
            MomentError::NotFinite { .. } => (S::UNPROCESSABLE_ENTITY, "NotFinite"),
            MomentError::InvalidTime(_) => (S::UNPROCESSABLE_ENTITY, "InvalidTime"),
            MomentError::NonMonotoneTime { .. } => (S::CONFLICT, "NonMonotoneTime"),
            MomentError::KindSubjectMismatch { .. } => (S::UNPROCESSABLE_ENTITY, "KindSubjectMismatch"),
            MomentError::DuplicateSubject(_) => (S::CONFLICT, "DuplicateSubject"),
            MomentError::BeyondRuntime { .. } => (S::UNPROCESSABLE_ENTITY, "BeyondRuntime"),
            MomentError::EmptyTrack => (S::CONFLICT, "EmptyTrack"),
            MomentError::InvalidWeights(..) | MomentError::NonPositiveWeight(_) => {
                (S::BAD_REQUEST, "InvalidWeights")
            }
            MomentError::DegreeTooHigh { .. } | MomentError::ZeroDegree => (S::UNPROCESSABLE_ENTITY, "InvalidDegree"),
            MomentError::InvalidGrid => (S::BAD_REQUEST, "InvalidGrid"),
            MomentError::InvalidGeometry(_) => (S::BAD_REQUEST, "InvalidGeometry"),
            _ => (S::UNPROCESSABLE_ENTITY, "InvalidInput"),
        };
        ApiError::new(status, code, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(&self)).into_response()
    }
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}
