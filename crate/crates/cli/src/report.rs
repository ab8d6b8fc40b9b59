//! Report assembly: a verdict line, optional artifact lines, and a
//! machine-readable `key=value` block. Output is byte-stable for fixed
//! inputs and options.

use std::fmt::Display;

pub struct Report {
    pub verdict: String,
    pub lines: Vec<String>,
    pub pairs: Vec<(String, String)>,
    pub exit: u8,
}

impl Report {
    pub fn new(verdict: impl Into<String>, exit: u8) -> Self {
        Report {
            verdict: verdict.into(),
            lines: Vec::new(),
            pairs: Vec::new(),
            exit,
        }
    }

    /// An artifact line shown under the verdict in text mode.
    pub fn line(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    pub fn kv(&mut self, key: impl Into<String>, value: impl Display) {
        self.pairs.push((key.into(), value.to_string()));
    }

    pub fn print(&self, kv_only: bool) {
        if !kv_only {
            println!("{}", self.verdict);
            for line in &self.lines {
                println!("{line}");
            }
        }
        for (k, v) in &self.pairs {
            println!("{k}={v}");
        }
    }
}
