//! Plain-text run reports: config echo, versions, timings, output
//! manifest, and summary statistics. With `stable = true` the timestamp
//! and timings are omitted so identical runs produce identical bytes.

use std::fmt::Write as _;
use std::time::{SystemTime, UNIX_EPOCH};

/// Accumulates everything a run wants to report.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub subcommand: String,
    pub config_echo: String,
    /// (stage name, seconds).
    pub timings: Vec<(String, f64)>,
    /// (file name, bytes written).
    pub outputs: Vec<(String, usize)>,
    /// (label, value) summary lines.
    pub summary: Vec<(String, String)>,
    /// Omit timestamp and timings for bitwise-reproducible output.
    pub stable: bool,
}

impl RunReport {
    pub fn new(subcommand: &str, config_echo: String, stable: bool) -> Self {
        RunReport {
            subcommand: subcommand.to_string(),
            config_echo,
            timings: Vec::new(),
            outputs: Vec::new(),
            summary: Vec::new(),
            stable,
        }
    }

    pub fn add_timing(&mut self, stage: &str, seconds: f64) {
        self.timings.push((stage.to_string(), seconds));
    }

    pub fn add_output(&mut self, name: &str, bytes: usize) {
        self.outputs.push((name.to_string(), bytes));
    }

    pub fn add_summary(&mut self, label: &str, value: impl Into<String>) {
        self.summary.push((label.to_string(), value.into()));
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = &mut s;
        let _ = writeln!(w, "wirefield run report");
        let _ = writeln!(w, "====================");
        let _ = writeln!(w, "subcommand: {}", self.subcommand);
        let _ = writeln!(w, "version: {}", env!("CARGO_PKG_VERSION"));
        if self.stable {
            let _ = writeln!(w, "timestamp: (omitted)");
        } else {
            let t = SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            let _ = writeln!(w, "timestamp: {t} (unix seconds)");
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "summary");
        let _ = writeln!(w, "-------");
        for (label, value) in &self.summary {
            let _ = writeln!(w, "{label}: {value}");
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "outputs");
        let _ = writeln!(w, "-------");
        for (name, bytes) in &self.outputs {
            let _ = writeln!(w, "{name} ({bytes} bytes)");
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "timings");
        let _ = writeln!(w, "-------");
        if self.stable {
            let _ = writeln!(w, "(omitted)");
        } else {
            for (stage, secs) in &self.timings {
                let _ = writeln!(w, "{stage}: {secs:.3} s");
            }
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "config echo");
        let _ = writeln!(w, "-----------");
        let _ = write!(w, "{}", self.config_echo);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_reports_are_identical() {
        let mut a = RunReport::new("simulate", "[nv]\n".into(), true);
        a.add_timing("forward", 1.25);
        a.add_output("map.csv", 1024);
        a.add_summary("max_abs_b_T", "0.0005");
        let mut b = a.clone();
        b.timings[0].1 = 9.75;
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.to_text().contains("map.csv"));
        assert!(a.to_text().contains("max_abs_b_T: 0.0005"));
    }
}
