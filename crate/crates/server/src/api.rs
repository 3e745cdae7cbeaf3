//! HTTP routes.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{delete, get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::Serialize;
use story_moments::colorchart::{render_strip, StripMode, StripOptions};
use story_moments::curves::{sample, CurveFn, Grid, SampledSeries, SeriesValues};
use story_moments::ingest::write_session;
use story_moments::{Track, Weights};
use tower_http::services::ServeDir;

use crate::error::ApiError;
use crate::live::{AppendMoment, ClockRequest, CreateSession, Store};

pub const REVISION_HEADER: &str = "x-revision";

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
}

type Params = Query<HashMap<String, String>>;

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request(format!("invalid JSON body: {e}")))
}

fn param<T: std::str::FromStr>(q: &HashMap<String, String>, key: &str) -> Result<Option<T>, ApiError> {
    match q.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| ApiError::bad_request(format!("invalid {key}: {v:?}"))),
    }
}

fn weights(q: &HashMap<String, String>) -> Result<Weights, ApiError> {
    let Some(text) = q.get("weights") else {
        return Ok(Weights::uniform());
    };
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ApiError::bad_request(format!("invalid weights: {text:?}")))?;
    match parts.as_slice() {
        [a, b, c] => Ok(Weights::new(*a, *b, *c)?),
        _ => Err(ApiError::bad_request("weights need three comma-separated numbers")),
    }
}

fn with_revision(revision: u64, mut response: Response) -> Response {
    response.headers_mut().insert(
        HeaderName::from_static(REVISION_HEADER),
        HeaderValue::from_str(&revision.to_string()).expect("digits"),
    );
    response
}

#[derive(Serialize)]
struct Created {
    id: String,
    revision: u64,
}

async fn create_session(State(app): State<AppState>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: CreateSession = body(&bytes)?;
    let id = app.store.create(&req)?;
    Ok((StatusCode::CREATED, Json(Created { id, revision: 0 })).into_response())
}

async fn list_sessions(State(app): State<AppState>) -> Json<Vec<String>> {
    Json(app.store.ids())
}

#[derive(Serialize)]
struct TrackInfo {
    subject: String,
    kind: &'static str,
    moments: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    last_t: Option<f64>,
}

#[derive(Serialize)]
struct SessionView {
    id: String,
    revision: u64,
    clock: crate::clock::ClockView,
    film: FilmView,
    #[serde(skip_serializing_if = "Option::is_none")]
    analyst: Option<String>,
    tracks: Vec<TrackInfo>,
}

#[derive(Serialize)]
struct FilmView {
    title: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_minutes: Option<f64>,
}

async fn get_session(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let snap = app.store.snapshot(&id)?;
    let view = SessionView {
        id: snap.id,
        revision: snap.revision,
        clock: snap.clock,
        film: FilmView {
            title: snap.session.film.title.clone(),
            runtime_minutes: snap.session.film.runtime_minutes,
        },
        analyst: snap.session.analyst.clone(),
        tracks: snap
            .session
            .tracks()
            .iter()
            .map(|t| TrackInfo {
                subject: t.subject().to_string(),
                kind: t.kind().as_str(),
                moments: t.len(),
                last_t: t.last_time(),
            })
            .collect(),
    };
    Ok(with_revision(snap.revision, Json(view).into_response()))
}

async fn clock(State(app): State<AppState>, Path(id): Path<String>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: ClockRequest = body(&bytes)?;
    let view = app.store.with_session(&id, |s, now| s.clock_control(&req, now))?;
    Ok(Json(view).into_response())
}

async fn append(State(app): State<AppState>, Path(id): Path<String>, bytes: Bytes) -> Result<Response, ApiError> {
    let req: AppendMoment = body(&bytes)?;
    let done = app.store.with_session(&id, |s, now| s.append(req, now))?;
    Ok(with_revision(done.revision, (StatusCode::CREATED, Json(done)).into_response()))
}

async fn undo(State(app): State<AppState>, Path(id): Path<String>, q: Params) -> Result<Response, ApiError> {
    let subject = q
        .get("subject")
        .cloned()
        .ok_or_else(|| ApiError::bad_request("missing subject"))?;
    let done = app.store.with_session(&id, |s, _| s.undo(&subject))?;
    Ok(with_revision(done.revision, Json(done).into_response()))
}

#[derive(Serialize)]
struct CurvesResponse {
    revision: u64,
    series: SampledSeries,
}

fn empty_series(track: &Track, function: CurveFn, weights: &Weights, grid: &Grid) -> SampledSeries {
    SampledSeries {
        subject: track.subject().to_string(),
        kind: track.kind(),
        function,
        weights: function.is_combined().then_some(*weights),
        step_seconds: grid.step_seconds(),
        times: Vec::new(),
        values: if matches!(function, CurveFn::Combined | CurveFn::AccumulatedCombined) {
            SeriesValues::Scalar(Vec::new())
        } else {
            SeriesValues::Vector(Vec::new())
        },
    }
}

/// Query: `subject` (required), `fn` (default `Fbar`), `step` seconds
/// (default 1), `degree` for smooth functions, `weights=a,b,c`, or an
/// explicit `times=t1,t2,...` list instead of a step.
async fn curves(State(app): State<AppState>, Path(id): Path<String>, q: Params) -> Result<Response, ApiError> {
    let subject = q
        .get("subject")
        .ok_or_else(|| ApiError::bad_request("missing subject"))?;
    let mut function: CurveFn = match q.get("fn") {
        None => CurveFn::AccumulatedCombined,
        Some(f) => f.parse().map_err(ApiError::bad_request)?,
    };
    if let Some(d) = param::<usize>(&q, "degree")? {
        function = function.with_degree(d);
    }
    let weights = weights(&q)?;
    let grid = match q.get("times") {
        Some(list) => Grid::Explicit(
            list.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| p.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| ApiError::bad_request(format!("invalid times: {list:?}")))?,
        ),
        None => Grid::Step {
            seconds: param(&q, "step")?.unwrap_or(Grid::DEFAULT_STEP_SECONDS),
        },
    };
    let snap = app.store.snapshot(&id)?;
    let track = snap
        .session
        .track(subject)
        .ok_or_else(|| ApiError::unknown_track(subject))?;
    let empty_grid = matches!(&grid, Grid::Explicit(t) if t.is_empty());
    let series = if track.is_empty() || empty_grid {
        empty_series(track, function, &weights, &grid)
    } else {
        sample(track, function, &weights, &grid)?
    };
    let response = Json(CurvesResponse {
        revision: snap.revision,
        series,
    });
    Ok(with_revision(snap.revision, response.into_response()))
}

/// Query: `subject` (all tracks when absent), `mode`, `spp` seconds per
/// pixel, `row_height`, `format=ppm|png`.
async fn strip(State(app): State<AppState>, Path(id): Path<String>, q: Params) -> Result<Response, ApiError> {
    let mode = match q.get("mode") {
        None => StripMode::Instant,
        Some(m) => StripMode::parse(m).ok_or_else(|| ApiError::bad_request(format!("unknown mode {m:?}")))?,
    };
    let defaults = StripOptions::default();
    let opts = StripOptions {
        mode,
        seconds_per_pixel: param(&q, "spp")?.unwrap_or(defaults.seconds_per_pixel),
        row_height: param(&q, "row_height")?.unwrap_or(defaults.row_height),
        ..defaults
    };
    let snap = app.store.snapshot(&id)?;
    let tracks: Vec<Track> = match q.get("subject") {
        Some(s) => vec![snap
            .session
            .track(s)
            .cloned()
            .ok_or_else(|| ApiError::unknown_track(s))?],
        None => snap.session.tracks().iter().filter(|t| !t.is_empty()).cloned().collect(),
    };
    if tracks.is_empty() {
        return Err(ApiError::new(StatusCode::CONFLICT, "EmptyTrack", "no moments to draw yet"));
    }
    let image = render_strip(&tracks, &opts)?;
    let (bytes, content_type) = match q.get("format").map(String::as_str) {
        None | Some("ppm") => (image.to_ppm(), "image/x-portable-pixmap"),
        Some("png") => (image.to_png(), "image/png"),
        Some(other) => return Err(ApiError::bad_request(format!("unknown format {other:?}"))),
    };
    let response = ([(header::CONTENT_TYPE, content_type)], bytes).into_response();
    Ok(with_revision(snap.revision, response))
}

async fn export(State(app): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let snap = app.store.snapshot(&id)?;
    let response = ([(header::CONTENT_TYPE, "application/json")], write_session(&snap.session)).into_response();
    Ok(with_revision(snap.revision, response))
}

const UI_PLACEHOLDER: &str = "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>moments</title></head>\n<body><p>No UI bundle is installed. Start the server with a UI directory to serve it here.</p></body></html>\n";

async fn ui_placeholder() -> Html<&'static str> {
    Html(UI_PLACEHOLDER)
}

pub fn router(store: Arc<Store>, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session).get(list_sessions))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/clock", post(clock))
        .route("/sessions/{id}/moments", post(append))
        .route("/sessions/{id}/moments/last", delete(undo))
        .route("/sessions/{id}/curves", get(curves))
        .route("/sessions/{id}/strip", get(strip))
        .route("/sessions/{id}/export", get(export))
        .with_state(AppState { store });
    match ui_dir {
        Some(dir) => api.nest_service("/ui", ServeDir::new(dir).append_index_html_on_directories(true)),
        None => api
            .route("/ui", get(ui_placeholder))
            .route("/ui/", get(ui_placeholder)),
    }
}
