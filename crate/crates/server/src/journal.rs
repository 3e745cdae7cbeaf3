//! Append-only JSON-lines journal, one file per session.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const JOURNAL_EXTENSION: &str = "jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Event {
    Create {
        title: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        runtime_minutes: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        analyst: Option<String>,
    },
    Append {
        subject: String,
        kind: String,
        t: f64,
        v: [f64; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    Undo {
        subject: String,
    },
}

pub struct Journal {
    path: PathBuf,
    file: File,
}

impl Journal {
    pub fn path_for(dir: &Path, id: &str) -> PathBuf {
        dir.join(format!("{id}.{JOURNAL_EXTENSION}"))
    }

    pub fn create(dir: &Path, id: &str) -> io::Result<Self> {
        let path = Self::path_for(dir, id);
        let file = OpenOptions::new().create_new(true).append(true).open(&path)?;
        Ok(Journal { path, file })
    }

    /// Opens an existing journal for appending, cutting off a torn last
    /// line first.
    pub fn reopen(path: &Path) -> io::Result<Self> {
        let bytes = fs::read(path)?;
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        let file = OpenOptions::new().append(true).open(path)?;
        if keep < bytes.len() {
            file.set_len(keep as u64)?;
        }
        Ok(Journal {
            path: path.to_path_buf(),
            file,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Writes one event as a line and flushes it to the OS.
    pub fn record(&mut self, event: &Event) -> io::Result<()> {
        let mut line = serde_json::to_string(event).map_err(io::Error::other)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()
    }
}

/// Reads every event of a journal. A final line without a newline is a
/// torn write and is ignored; any other unreadable line is an error.
pub fn read_events(path: &Path) -> io::Result<Vec<Event>> {
    let bytes = fs::read(path)?;
    let complete = bytes.last().is_none_or(|&b| b == b'\n');
    let text = String::from_utf8_lossy(&bytes);
    let lines: Vec<&str> = text.split_terminator('\n').collect();
    let mut events = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Event>(line) {
            Ok(e) => events.push(e),
            Err(_) if i + 1 == lines.len() && !complete => break,
            Err(e) => {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("{}: line {}: {e}", path.display(), i + 1),
                ))
            }
        }
    }
    Ok(events)
}

/// Journal files in `dir`, sorted by name.
pub fn list(dir: &Path) -> io::Result<Vec<PathBuf>> {
    let mut out: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == JOURNAL_EXTENSION))
        .collect();
    out.sort();
    Ok(out)
}
