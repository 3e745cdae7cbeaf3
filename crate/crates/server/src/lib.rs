//! Live annotation sessions over HTTP.
//!
//! | method | path | body / query |
//! |---|---|---|
//! | POST | `/sessions` | `{"film": {"title", "runtime_minutes"?}, "analyst"?}` |
//! | GET | `/sessions/{id}` | |
//! | POST | `/sessions/{id}/clock` | `{"action": "start" \| "pause" \| "seek", "offset_minutes"?}` |
//! | POST | `/sessions/{id}/moments` | `{"subject", "kind"?, "v": [a, b, c], "t"?, "note"?}` |
//! | DELETE | `/sessions/{id}/moments/last` | `?subject=` |
//! | GET | `/sessions/{id}/curves` | `?subject&fn&step&degree&weights&times` |
//! | GET | `/sessions/{id}/strip` | `?subject&mode&spp&row_height&format` |
//! | GET | `/sessions/{id}/export` | session document |
//! | GET | `/ui/...` | static files |
//!
//! Errors are JSON `{code, message, location?}`. Responses that depend on
//! session content carry an `x-revision` header; the revision counts
//! successful appends and undos.

#![allow(clippy::result_large_err)]

pub mod api;
pub mod clock;
pub mod error;
pub mod journal;
pub mod live;

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

pub use api::{router, REVISION_HEADER};
pub use clock::{Clock, ClockAction, ClockState, FakeClock, SystemClock};
pub use error::ApiError;
pub use live::{LiveSession, Store};

pub const DEFAULT_PORT: u16 = 7878;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    /// Journal directory; sessions live only in memory without one.
    pub data_dir: Option<PathBuf>,
    pub ui_dir: Option<PathBuf>,
}

impl Default for ServerConfig {
    fn default() -> Self {
        ServerConfig {
            addr: SocketAddr::from(([127, 0, 0, 1], DEFAULT_PORT)),
            data_dir: None,
            ui_dir: None,
        }
    }
}

pub fn open_store(config: &ServerConfig, clock: Arc<dyn Clock>) -> std::io::Result<Store> {
    match &config.data_dir {
        Some(dir) => Store::open(dir, clock),
        None => Ok(Store::in_memory(clock)),
    }
}

/// Binds and serves until Ctrl-C.
pub async fn serve(config: ServerConfig) -> std::io::Result<()> {
    let store = Arc::new(open_store(&config, Arc::new(SystemClock::new()))?);
    let listener = tokio::net::TcpListener::bind(config.addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(store, config.ui_dir))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

/// Serves on an already bound listener; used by tests and embedders.
pub async fn serve_on(listener: tokio::net::TcpListener, store: Arc<Store>, ui_dir: Option<PathBuf>) -> std::io::Result<()> {
    axum::serve(listener, router(store, ui_dir)).await
}
