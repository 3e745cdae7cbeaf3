//! Wall clocks and the per-session film clock.

use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

/// Source of wall time in seconds from an arbitrary origin.
pub trait Clock: Send + Sync + 'static {
    fn now_seconds(&self) -> f64;
}

pub struct SystemClock {
    origin: Instant,
}

impl SystemClock {
    pub fn new() -> Self {
        SystemClock {
            origin: Instant::now(),
        }
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now_seconds(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}

/// Manually advanced clock for tests.
#[derive(Default)]
pub struct FakeClock {
    seconds: Mutex<f64>,
}

impl FakeClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, seconds: f64) {
        *self.seconds.lock().unwrap() += seconds;
    }

    pub fn set(&self, seconds: f64) {
        *self.seconds.lock().unwrap() = seconds;
    }
}

impl Clock for FakeClock {
    fn now_seconds(&self) -> f64 {
        *self.seconds.lock().unwrap()
    }
}

/// Film times read from a clock are rounded to `1 / FILM_TIME_STEPS`
/// minutes.
pub const FILM_TIME_STEPS: f64 = 1000.0;

pub fn quantize_minutes(t: f64) -> f64 {
    (t * FILM_TIME_STEPS).round() / FILM_TIME_STEPS
}

/// Film clock: stopped at an offset, or running from a wall-time anchor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClockState {
    Stopped { offset_minutes: f64 },
    Running { anchor_seconds: f64, offset_minutes: f64 },
}

impl Default for ClockState {
    fn default() -> Self {
        ClockState::Stopped { offset_minutes: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClockAction {
    Start,
    Pause,
    Seek,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClockView {
    pub state: &'static str,
    /// Film time at the anchor (running) or the frozen time (stopped).
    pub offset_minutes: f64,
    /// Current film time, quantized.
    pub film_time: f64,
}

impl ClockState {
    pub fn is_running(&self) -> bool {
        matches!(self, ClockState::Running { .. })
    }

    /// Film time in minutes at wall time `now`, quantized.
    pub fn film_time(&self, now: f64) -> f64 {
        match *self {
            ClockState::Stopped { offset_minutes } => quantize_minutes(offset_minutes),
            ClockState::Running {
                anchor_seconds,
                offset_minutes,
            } => quantize_minutes(offset_minutes + (now - anchor_seconds) / 60.0),
        }
    }

    /// Starts at `offset`, or resumes from the current film time.
    pub fn start(&mut self, now: f64, offset: Option<f64>) {
        let offset_minutes = offset.unwrap_or_else(|| self.film_time(now));
        *self = ClockState::Running {
            anchor_seconds: now,
            offset_minutes,
        };
    }

    pub fn pause(&mut self, now: f64) {
        *self = ClockState::Stopped {
            offset_minutes: self.film_time(now),
        };
    }

    /// Moves the film time; a running clock keeps running from there.
    pub fn seek(&mut self, now: f64, offset: f64) {
        *self = match self {
            ClockState::Stopped { .. } => ClockState::Stopped {
                offset_minutes: offset,
            },
            ClockState::Running { .. } => ClockState::Running {
                anchor_seconds: now,
                offset_minutes: offset,
            },
        };
    }

    pub fn view(&self, now: f64) -> ClockView {
        let (state, offset_minutes) = match *self {
            ClockState::Stopped { offset_minutes } => ("stopped", offset_minutes),
            ClockState::Running { offset_minutes, .. } => ("running", offset_minutes),
        };
        ClockView {
            state,
            offset_minutes,
            film_time: self.film_time(now),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_pause_seek() {
        let clock = FakeClock::new();
        let mut c = ClockState::default();
        c.start(clock.now_seconds(), Some(10.0));
        assert!(c.is_running());
        clock.advance(30.0);
        c.pause(clock.now_seconds());
        assert_eq!(c, ClockState::Stopped { offset_minutes: 10.5 });
        clock.advance(100.0);
        assert_eq!(c.film_time(clock.now_seconds()), 10.5);
        c.seek(clock.now_seconds(), 3.0);
        assert_eq!(c.film_time(clock.now_seconds()), 3.0);
        c.start(clock.now_seconds(), None);
        clock.advance(60.0);
        assert_eq!(c.film_time(clock.now_seconds()), 4.0);
    }

    #[test]
    fn running_time_is_quantized() {
        let mut c = ClockState::default();
        c.start(0.0, Some(0.0));
        assert_eq!(c.film_time(95.0), 1.583);
        assert_eq!(c.view(95.0).state, "running");
    }
}
