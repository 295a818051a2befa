//! Line-oriented run reports with stable output.
//!
//! Identical inputs produce byte-identical reports; wall-clock lines are the
//! only nondeterministic part and are suppressed under `--deterministic`.

use sha2::{Digest, Sha256};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CAP: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

pub struct RunReport {
    lines: Vec<String>,
    pub exit_code: i32,
    deterministic: bool,
    started: Instant,
}

impl RunReport {
    pub fn new(command: &str, deterministic: bool) -> RunReport {
        RunReport {
            lines: vec![format!("command: {command}")],
            exit_code: EXIT_OK,
            deterministic,
            started: Instant::now(),
        }
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// Records an input path with a content hash.
    pub fn input(&mut self, path: &str, bytes: &[u8]) {
        let mut hasher = Sha256::new();
        hasher.update(bytes);
        let digest = hasher.finalize();
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.lines.push(format!("input: {path} sha256={hex}"));
    }

    pub fn fail(&mut self, code: i32, text: impl Into<String>) {
        self.lines.push(text.into());
        if self.exit_code == EXIT_OK {
            self.exit_code = code;
        }
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        if !self.deterministic {
            out.push_str(&format!("\ntime_ms: {}", self.started.elapsed().as_millis()));
        }
        out.push('\n');
        out
    }
}
