//! Runs the service on a free port and drives one annotation session
//! through it: create, start the clock, record moments, undo, export.
//!
//! Pass `--serve` to keep the server running afterwards.

use std::sync::Arc;

use serde_json::{json, Value};
use story_moments_server::{serve_on, Store, SystemClock};

#[tokio::main]
async fn main() -> Result<(), Box<dyn std::error::Error>> {
    let store = Arc::new(Store::in_memory(Arc::new(SystemClock::new())));
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await?;
    let base = format!("http://{}", listener.local_addr()?);
    let server = tokio::spawn(serve_on(listener, store, None));
    let http = reqwest::Client::new();

    let created: Value = http
        .post(format!("{base}/sessions"))
        .json(&json!({"film": {"title": "Lady Bird", "runtime_minutes": 94}}))
        .send()
        .await?
        .json()
        .await?;
    let id = created["id"].as_str().unwrap().to_string();
    println!("session {id}");

    let clock: Value = http
        .post(format!("{base}/sessions/{id}/clock"))
        .json(&json!({"action": "start", "offset_minutes": 1.5}))
        .send()
        .await?
        .json()
        .await?;
    println!("clock {clock}");

    // Without "t" the running clock stamps the moment.
    for (subject, v) in [("Marion", [0.2, 0.0, 0.0]), ("Lady Bird", [0.1, 0.3, 0.0])] {
        let r: Value = http
            .post(format!("{base}/sessions/{id}/moments"))
            .json(&json!({"subject": subject, "v": v}))
            .send()
            .await?
            .json()
            .await?;
        println!("appended {r}");
    }
    for (t, v) in [(2.5, [0.0, -0.4, 0.0]), (3.0, [0.3, 0.0, 0.0]), (3.2, [0.9, 0.9, 0.9])] {
        http.post(format!("{base}/sessions/{id}/moments"))
            .json(&json!({"subject": "Marion", "v": v, "t": t}))
            .send()
            .await?;
    }
    let undone: Value = http
        .delete(format!("{base}/sessions/{id}/moments/last?subject=Marion"))
        .send()
        .await?
        .json()
        .await?;
    println!("undone {undone}");

    let curves: Value = http
        .get(format!("{base}/sessions/{id}/curves?subject=Marion&fn=Fbar&step=30"))
        .send()
        .await?
        .json()
        .await?;
    println!("F-bar at revision {}: {}", curves["revision"], curves["series"]["values"]);

    print!("{}", http.get(format!("{base}/sessions/{id}/export")).send().await?.text().await?);

    if std::env::args().any(|a| a == "--serve") {
        println!("serving on {base}");
        server.await??;
    }
    Ok(())
}
