//! Run summaries as UTF-8 `key=value` lines.

use std::fmt::Write as _;

use gbsp_core::{Normalization, ScaleSchedule};

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub input_height: usize,
    pub input_width: usize,
    pub normalization: Normalization,
    pub schedule: ScaleSchedule<f64>,
    pub metric: &'static str,
    pub policy: String,
    pub region_count: usize,
    /// `None` under threshold selection, where the count is data-dependent.
    pub expected_cardinality: Option<usize>,
    pub selected_per_stage: Vec<usize>,
    pub pixel_visits: u64,
    pub wall_time_ms: f64,
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl RunReport {
    pub fn to_text(&self) -> String {
        let s = &self.schedule;
        let n = &self.normalization;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k}={v}");
        };
        kv("input_height", self.input_height.to_string());
        kv("input_width", self.input_width.to_string());
        kv("image_side", n.side.to_string());
        kv("padded", n.padded().to_string());
        kv("resized", n.resized().to_string());
        kv("stages", s.stages().to_string());
        kv("grid_sizes", join(s.grid_sizes()));
        kv("side_lengths", join(s.side_lengths()));
        kv("budgets", join(s.budgets()));
        kv("center_window", s.center_window().to_string());
        kv("tau", s.tau().to_string());
        kv("metric", self.metric.to_string());
        kv("policy", self.policy.clone());
        kv("region_count", self.region_count.to_string());
        kv(
            "expected_cardinality",
            self.expected_cardinality.map_or("n/a".into(), |c| c.to_string()),
        );
        kv("selected_per_stage", join(&self.selected_per_stage));
        kv("pixel_visits", self.pixel_visits.to_string());
        kv("wall_time_ms", format!("{:.3}", self.wall_time_ms));
        out
    }
}

/// Parses `key=value` lines in order; blank lines are skipped.
pub fn parse_key_values(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .filter_map(|l| l.split_once('=').map(|(k, v)| (k.to_string(), v.to_string())))
        .collect()
}

pub fn lookup<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}
