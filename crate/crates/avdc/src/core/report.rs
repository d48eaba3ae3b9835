use serde::{Deserialize, Serialize};

use super::bounds::Bounds;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Status {
    Pass,
    Fail { detail: String },
    Skipped { reason: String },
}

/// One checked condition inside a report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Line {
    pub label: String,
    pub status: Status,
    /// Steps charged while checking this condition.
    pub steps: u64,
    /// False when the step budget ran out before the enumeration finished;
    /// a passing incomplete line means "no violation found within budget".
    pub complete: bool,
}

/// Result of a bounded check, stamped with the bounds it ran under.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub instance: String,
    pub bounds: Bounds,
    pub pass: bool,
    pub complete: bool,
    pub steps: u64,
    pub lines: Vec<Line>,
}

impl Report {
    pub fn new(title: impl Into<String>, instance: impl Into<String>, bounds: Bounds) -> Report {
        Report {
            title: title.into(),
            instance: instance.into(),
            bounds,
            pass: true,
            complete: true,
            steps: 0,
            lines: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, status: Status, steps: u64, complete: bool) {
        if matches!(status, Status::Fail { .. }) {
            self.pass = false;
        }
        if !complete {
            self.complete = false;
        }
        self.steps += steps;
        self.lines.push(Line { label: label.into(), status, steps, complete });
    }

    /// Plain-text rendering, one line per condition.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{} on {} (max_src_len={}, budget={})\n",
            self.title, self.instance, self.bounds.max_src_len, self.bounds.budget
        ));
        for line in &self.lines {
            let mark = match &line.status {
                Status::Pass => "PASS".to_string(),
                Status::Fail { .. } => "FAIL".to_string(),
                Status::Skipped { .. } => "SKIP".to_string(),
            };
            let extra = match &line.status {
                Status::Fail { detail } => format!(" :: {detail}"),
                Status::Skipped { reason } => format!(" :: {reason}"),
                Status::Pass => String::new(),
            };
            let cov = if line.complete { "" } else { " [budget exhausted]" };
            out.push_str(&format!("  {mark} {}{cov}{extra}\n", line.label));
        }
        out.push_str(&format!(
            "overall: {} ({} steps{})\n",
            if self.pass { "PASS" } else { "FAIL" },
            self.steps,
            if self.complete { "" } else { ", incomplete" }
        ));
        out
    }
}
