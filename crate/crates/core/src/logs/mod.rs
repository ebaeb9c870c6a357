//! Raw log streams to fixed-length vectors: parsing, filtering, windowing
//! and a small self-contained skip-gram embedding.

mod embedding;
mod filter;
mod window;

pub use embedding::{
    train_embedding, vectorize_window, EmbeddingModel, EmbeddingParams, TrainingMetadata,
};
pub use filter::{filter_text, tokenize};
pub use window::{extract_windows, LogWindow, WindowKind};

use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Line severity. Window extraction triggers on `Warn` and above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Trace,
    Debug,
    Info,
    Warn,
    Error,
    Fatal,
}

impl FromStr for Severity {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_uppercase().as_str() {
            "TRACE" => Ok(Severity::Trace),
            "DEBUG" => Ok(Severity::Debug),
            "INFO" => Ok(Severity::Info),
            "WARN" | "WARNING" => Ok(Severity::Warn),
            "ERROR" | "ERR" => Ok(Severity::Error),
            "FATAL" | "CRITICAL" => Ok(Severity::Fatal),
            _ => Err(()),
        }
    }
}

impl Severity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Severity::Trace => "TRACE",
            Severity::Debug => "DEBUG",
            Severity::Info => "INFO",
            Severity::Warn => "WARN",
            Severity::Error => "ERROR",
            Severity::Fatal => "FATAL",
        }
    }
}

/// One log record: timestamp, severity, and everything else as free text.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    /// UTC seconds.
    pub timestamp: f64,
    pub severity: Severity,
    pub text: String,
}

/// Parses a timestamp the tooling accepts on the command line and in log
/// lines: RFC 3339, a naive `YYYY-MM-DDTHH:MM:SS[.f]` (assumed UTC), or raw
/// epoch seconds.
pub fn parse_timestamp(s: &str) -> Option<f64> {
    if let Ok(dt) = chrono::DateTime::parse_from_rfc3339(s) {
        return Some(dt.timestamp() as f64 + f64::from(dt.timestamp_subsec_nanos()) * 1e-9);
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(dt) = chrono::NaiveDateTime::parse_from_str(s, fmt) {
            let utc = dt.and_utc();
            return Some(utc.timestamp() as f64 + f64::from(utc.timestamp_subsec_nanos()) * 1e-9);
        }
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Formats epoch seconds as RFC 3339 with `Z`, the shape the parser and the
/// scenario exporter agree on.
pub fn format_timestamp(epoch_secs: f64) -> String {
    let secs = epoch_secs.floor() as i64;
    let nanos = ((epoch_secs - secs as f64) * 1e9).round() as u32;
    let dt = chrono::DateTime::from_timestamp(secs, nanos.min(999_999_999))
        .unwrap_or_else(|| chrono::DateTime::from_timestamp(0, 0).expect("epoch"));
    if nanos == 0 {
        dt.format("%Y-%m-%dT%H:%M:%SZ").to_string()
    } else {
        dt.format("%Y-%m-%dT%H:%M:%S%.3fZ").to_string()
    }
}

/// Parses `<timestamp> <SEVERITY> <free text>` lines. A line that does not
/// match the shape is treated as a continuation (stack trace) and appended
/// to the previous entry; leading garbage without a previous entry is
/// dropped. Entries whose text trims to nothing are dropped.
pub fn parse_log_lines(input: &str) -> Vec<LogEntry> {
    let mut entries: Vec<LogEntry> = Vec::new();
    for line in input.lines() {
        if let Some(entry) = parse_line(line) {
            entries.push(entry);
        } else if !line.trim().is_empty() {
            if let Some(prev) = entries.last_mut() {
                prev.text.push('\n');
                prev.text.push_str(line.trim_end());
            }
        }
    }
    entries.retain(|e| !e.text.trim().is_empty());
    entries
}

fn parse_line(line: &str) -> Option<LogEntry> {
    let mut parts = line.splitn(3, char::is_whitespace);
    let ts = parse_timestamp(parts.next()?)?;
    let severity = Severity::from_str(parts.next()?).ok()?;
    let text = parts.next()?.trim();
    if text.is_empty() {
        return None;
    }
    Some(LogEntry {
        timestamp: ts,
        severity,
        text: text.to_string(),
    })
}
