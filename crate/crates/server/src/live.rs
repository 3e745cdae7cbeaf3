//! Live sessions and the registry that owns them.

use std::collections::HashMap;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use axum::http::StatusCode;
use serde::{Deserialize, Serialize};
use story_moments::ingest::Location;
use story_moments::{Film, MomentVector, Session, TimedMoment, TrackKind};

use crate::clock::{Clock, ClockAction, ClockState, ClockView};
use crate::error::ApiError;
use crate::journal::{self, Event, Journal};

/// One session being annotated, with its film clock and revision.
pub struct LiveSession {
    pub id: String,
    pub session: Session,
    pub clock: ClockState,
    /// Number of successful appends and undos.
    pub revision: u64,
    journal: Option<Journal>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct FilmInfo {
    pub title: String,
    #[serde(default)]
    pub runtime_minutes: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CreateSession {
    pub film: FilmInfo,
    #[serde(default)]
    pub analyst: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AppendMoment {
    pub subject: String,
    #[serde(default)]
    pub kind: Option<String>,
    pub v: [f64; 3],
    /// Film time in minutes; taken from the running clock when absent.
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ClockRequest {
    pub action: ClockAction,
    #[serde(default)]
    pub offset_minutes: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Appended {
    pub revision: u64,
    pub subject: String,
    pub index: usize,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Undone {
    pub revision: u64,
    pub subject: String,
    pub t: f64,
    pub v: [f64; 3],
}

/// A consistent copy of a session at one revision.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub id: String,
    pub revision: u64,
    pub session: Session,
    pub clock: ClockView,
}

fn validate_film(film: &FilmInfo) -> Result<Film, ApiError> {
    if film.title.trim().is_empty() {
        return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "MissingField", "film title is empty"));
    }
    if let Some(r) = film.runtime_minutes {
        if !(r.is_finite() && r > 0.0) {
            return Err(ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "InvalidRuntime",
                format!("runtime_minutes must be positive, found {r}"),
            ));
        }
    }
    Ok(Film {
        title: film.title.clone(),
        runtime_minutes: film.runtime_minutes,
    })
}

impl LiveSession {
    fn new(id: String, req: &CreateSession) -> Result<Self, ApiError> {
        let mut session = Session::new(validate_film(&req.film)?);
        session.analyst = req.analyst.clone();
        Ok(LiveSession {
            id,
            session,
            clock: ClockState::default(),
            revision: 0,
            journal: None,
        })
    }

    fn record(&mut self, event: &Event) -> Result<(), ApiError> {
        if let Some(j) = self.journal.as_mut() {
            j.record(event)
                .map_err(|e| ApiError::internal(format!("journal write failed: {e}")))?;
        }
        Ok(())
    }

    /// Appends a moment; `now` feeds the clock when `t` is absent.
    pub fn append(&mut self, req: AppendMoment, now: f64) -> Result<Appended, ApiError> {
        let subject = req.subject.trim().to_string();
        if subject.is_empty() {
            return Err(ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "MissingField", "subject is empty"));
        }
        let kind = match req.kind.as_deref() {
            None => TrackKind::for_subject(&subject),
            Some(k) => TrackKind::parse(k).ok_or_else(|| {
                ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "UnknownKind",
                    format!("kind {k:?} must be \"discourse\" or \"story\""),
                )
            })?,
        };
        let t = match req.t {
            Some(t) => t,
            None if self.clock.is_running() => self.clock.film_time(now),
            None => {
                return Err(ApiError::new(
                    StatusCode::CONFLICT,
                    "ClockStopped",
                    "no time given and the session clock is not running",
                ))
            }
        };
        let index = self.session.track(&subject).map_or(0, |tr| tr.len());
        let location = Location {
            subject: Some(subject.clone()),
            moment: Some(index),
            ..Default::default()
        };
        let moment = MomentVector::from_array(req.v)
            .and_then(|m| TimedMoment::new(t, m))
            .map_err(|e| ApiError::from(e).at(location.clone()))?;
        let moment = match &req.note {
            Some(n) if !n.is_empty() => moment.with_note(n.clone()),
            _ => moment,
        };
        self.session
            .append(&subject, kind, moment)
            .map_err(|e| ApiError::from(e).at(location))?;
        let event = Event::Append {
            subject: subject.clone(),
            kind: kind.as_str().to_string(),
            t,
            v: req.v,
            note: req.note.filter(|n| !n.is_empty()),
        };
        if let Err(e) = self.record(&event) {
            self.session.track_mut(&subject).and_then(|tr| tr.pop());
            return Err(e);
        }
        self.revision += 1;
        Ok(Appended {
            revision: self.revision,
            subject,
            index,
            t,
        })
    }

    pub fn undo(&mut self, subject: &str) -> Result<Undone, ApiError> {
        let track = self
            .session
            .track_mut(subject)
            .ok_or_else(|| ApiError::unknown_track(subject))?;
        let removed = track.pop().ok_or_else(|| {
            ApiError::new(StatusCode::CONFLICT, "EmptyTrack", format!("track {subject:?} has no moments"))
        })?;
        if let Err(e) = self.record(&Event::Undo {
            subject: subject.to_string(),
        }) {
            if let Some(tr) = self.session.track_mut(subject) {
                let _ = tr.push(removed);
            }
            return Err(e);
        }
        self.revision += 1;
        Ok(Undone {
            revision: self.revision,
            subject: subject.to_string(),
            t: removed.t,
            v: removed.moment.components(),
        })
    }

    pub fn clock_control(&mut self, req: &ClockRequest, now: f64) -> Result<ClockView, ApiError> {
        if let Some(o) = req.offset_minutes {
            if !(o.is_finite() && o >= 0.0) {
                return Err(ApiError::new(
                    StatusCode::UNPROCESSABLE_ENTITY,
                    "InvalidTime",
                    format!("offset {o} must be a non-negative number of minutes"),
                ));
            }
        }
        match req.action {
            ClockAction::Start => self.clock.start(now, req.offset_minutes),
            ClockAction::Pause => self.clock.pause(now),
            ClockAction::Seek => {
                let o = req
                    .offset_minutes
                    .ok_or_else(|| ApiError::bad_request("seek needs offset_minutes"))?;
                self.clock.seek(now, o);
            }
        }
        Ok(self.clock.view(now))
    }

    pub fn snapshot(&self, now: f64) -> Snapshot {
        Snapshot {
            id: self.id.clone(),
            revision: self.revision,
            session: self.session.clone(),
            clock: self.clock.view(now),
        }
    }

    fn apply(&mut self, event: Event) -> Result<(), ApiError> {
        match event {
            Event::Create { .. } => Err(ApiError::internal("duplicate create event")),
            Event::Append {
                subject,
                kind,
                t,
                v,
                note,
            } => self
                .append(
                    AppendMoment {
                        subject,
                        kind: Some(kind),
                        v,
                        t: Some(t),
                        note,
                    },
                    0.0,
                )
                .map(|_| ()),
            Event::Undo { subject } => self.undo(&subject).map(|_| ()),
        }
    }
}

/// All live sessions, optionally journaled under a data directory.
pub struct Store {
    sessions: RwLock<HashMap<String, Arc<Mutex<LiveSession>>>>,
    data_dir: Option<PathBuf>,
    clock: Arc<dyn Clock>,
}

impl Store {
    pub fn in_memory(clock: Arc<dyn Clock>) -> Self {
        Store {
            sessions: RwLock::new(HashMap::new()),
            data_dir: None,
            clock,
        }
    }

    /// Opens `dir`, replaying every journal found there. Replayed clocks
    /// start stopped at minute 0.
    pub fn open(dir: &Path, clock: Arc<dyn Clock>) -> io::Result<Self> {
        std::fs::create_dir_all(dir)?;
        let mut sessions = HashMap::new();
        for path in journal::list(dir)? {
            let id = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidData, "bad journal name"))?
                .to_string();
            let live = replay(&id, &path)?;
            sessions.insert(id, Arc::new(Mutex::new(live)));
        }
        Ok(Store {
            sessions: RwLock::new(sessions),
            data_dir: Some(dir.to_path_buf()),
            clock,
        })
    }

    pub fn now(&self) -> f64 {
        self.clock.now_seconds()
    }

    pub fn create(&self, req: &CreateSession) -> Result<String, ApiError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let mut live = LiveSession::new(id.clone(), req)?;
        if let Some(dir) = &self.data_dir {
            let mut j = Journal::create(dir, &id).map_err(|e| ApiError::internal(e.to_string()))?;
            j.record(&Event::Create {
                title: live.session.film.title.clone(),
                runtime_minutes: live.session.film.runtime_minutes,
                analyst: live.session.analyst.clone(),
            })
            .map_err(|e| ApiError::internal(e.to_string()))?;
            live.journal = Some(j);
        }
        self.sessions
            .write()
            .unwrap()
            .insert(id.clone(), Arc::new(Mutex::new(live)));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<LiveSession>>, ApiError> {
        self.sessions
            .read()
            .unwrap()
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::unknown_session(id))
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<String> = self.sessions.read().unwrap().keys().cloned().collect();
        ids.sort();
        ids
    }

    /// Runs `f` with exclusive access to one session.
    pub fn with_session<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut LiveSession, f64) -> Result<T, ApiError>,
    ) -> Result<T, ApiError> {
        let live = self.get(id)?;
        let mut guard = live.lock().unwrap();
        let now = self.now();
        f(&mut guard, now)
    }

    pub fn snapshot(&self, id: &str) -> Result<Snapshot, ApiError> {
        self.with_session(id, |s, now| Ok(s.snapshot(now)))
    }
}

fn replay(id: &str, path: &Path) -> io::Result<LiveSession> {
    let bad = |msg: String| io::Error::new(io::ErrorKind::InvalidData, format!("{}: {msg}", path.display()));
    let mut events = journal::read_events(path)?.into_iter();
    let Some(Event::Create {
        title,
        runtime_minutes,
        analyst,
    }) = events.next()
    else {
        return Err(bad("journal does not start with a create event".into()));
    };
    let req = CreateSession {
        film: FilmInfo {
            title,
            runtime_minutes,
        },
        analyst,
    };
    let mut live = LiveSession::new(id.to_string(), &req).map_err(|e| bad(e.to_string()))?;
    for event in events {
        live.apply(event).map_err(|e| bad(e.to_string()))?;
    }
    live.journal = Some(Journal::reopen(path)?);
    Ok(live)
}
