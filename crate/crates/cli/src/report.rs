//! Machine-readable reports.
//!
//! JSON is the canonical encoding: a single document with top-level keys
//! `{command, config, stages, timing}` in that order. Key order is fixed by
//! struct declaration order, and every float is rounded to 12 significant
//! digits before serialization, so identical inputs and flags produce
//! byte-identical output (pass --omit-timing to drop the one run-dependent
//! section). CSV output covers the flat tables only: `dcov` metrics,
//! `relevant` rankings, and `order` tiers.

use serde::Serialize;

use crate::error::{CliError, Result};

/// Round to 12 significant digits; normalizes -0.0 to 0.0.
pub fn sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Wall-clock milliseconds rounded to 3 decimals.
pub fn ms(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e3 * 1e3).round() / 1e3
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ConfigEcho,
    pub stages: Vec<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Echo of the effective configuration, resolved defaults included.
#[derive(Debug, Serialize)]
pub struct ConfigEcho {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub response: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<String>>,
    pub exponent: f64,
    pub standardize: bool,
    pub eps: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub experiment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
    pub format: String,
}

/// One pipeline stage: what it selected and the numbers behind the choice.
/// Only the fields a command actually produces are emitted.
#[derive(Debug, Serialize)]
pub struct Stage {
    pub name: String,
    pub selected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<ClusterOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ranking: Option<Vec<RankEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tiers: Option<Vec<TierOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Vec<Metric>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<Check>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_sets: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximizer_count: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsets_evaluated: Option<u64>,
}

impl Stage {
    pub fn new(name: &str, selected: Vec<String>) -> Stage {
        Stage {
            name: name.to_owned(),
            selected,
            objective: None,
            clusters: None,
            ranking: None,
            trace: None,
            tiers: None,
            metrics: None,
            checks: None,
            minimal_sets: None,
            maximizer_count: None,
            subsets_evaluated: None,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ClusterOut {
    pub members: Vec<String>,
    pub value: f64,
    pub origin_start: String,
}

#[derive(Debug, Serialize)]
pub struct RankEntry {
    pub feature: String,
    pub rho2: f64,
}

#[derive(Debug, Serialize)]
pub struct TierOut {
    pub tier: usize,
    pub features: Vec<String>,
    pub objective: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub load_ms: f64,
    pub compute_ms: f64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report contains only finite numbers")
    }

    /// Flat-table CSV for the commands that have one; everything else is a
    /// usage error directing the caller to JSON.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        let stage = self
            .stages
            .last()
            .expect("every command emits at least one stage");
        match self.command.as_str() {
            "dcov" => {
                w.write_record(["metric", "value"]).ok();
                for m in stage.metrics.as_deref().unwrap_or(&[]) {
                    w.write_record([m.name.as_str(), &m.value.to_string()]).ok();
                }
            }
            "relevant" => {
                w.write_record(["position", "feature", "rho2", "selected", "nu_trace"])
                    .ok();
                let ranking = stage.ranking.as_deref().unwrap_or(&[]);
                let trace = stage.trace.as_deref().unwrap_or(&[]);
                for (pos, entry) in ranking.iter().enumerate() {
                    let selected = stage.selected.contains(&entry.feature);
                    let nu = if selected && pos < trace.len() {
                        trace[pos].to_string()
                    } else {
                        String::new()
                    };
                    let position = (pos + 1).to_string();
                    let rho2 = entry.rho2.to_string();
                    w.write_record([
                        position.as_str(),
                        entry.feature.as_str(),
                        rho2.as_str(),
                        if selected { "true" } else { "false" },
                        nu.as_str(),
                    ])
                    .ok();
                }
            }
            "order" => {
                w.write_record(["tier", "feature", "objective"]).ok();
                for t in stage.tiers.as_deref().unwrap_or(&[]) {
                    for feature in &t.features {
                        let obj = t.objective.map(|v| v.to_string()).unwrap_or_default();
                        w.write_record([&t.tier.to_string(), feature, &obj]).ok();
                    }
                }
            }
            other => {
                return Err(CliError::CsvFormatUnsupported {
                    command: match other {
                        "diverse" => "diverse",
                        "select" => "select",
                        _ => "enumerate",
                    },
                })
            }
        }
        let bytes = w.into_inner().expect("in-memory writer cannot fail");
        Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => Ok(self.to_json()),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}
