//! JSON report document emitted by `run` and `bench`.

use chrono::{SecondsFormat, Utc};
use kmeans_ccl::{BenchReport, RunSummary};
use serde::Serialize;

/// Schema version of the emitted documents; bump on breaking field changes.
pub const SCHEMA_VERSION: &str = "1";

/// Envelope around a run or bench payload. Reports are deterministic for a
/// fixed command line except for `timestamp` and the `wall_time_ms` fields.
#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub schema_version: &'static str,
    /// The invocation that produced this document, without the binary name.
    pub command: String,
    pub timestamp: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchReport>,
}

impl ReportDocument {
    fn new(command: String) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            timestamp: Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true),
            run: None,
            bench: None,
        }
    }

    pub fn for_run(command: String, run: RunSummary) -> Self {
        let mut doc = Self::new(command);
        doc.run = Some(run);
        doc
    }

    pub fn for_bench(command: String, bench: BenchReport) -> Self {
        let mut doc = Self::new(command);
        doc.bench = Some(bench);
        doc
    }

    /// All numeric payload fields must be finite for the document to be
    /// well formed.
    pub fn check_finite(&self) -> Result<(), String> {
        let check = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(format!("non-finite report field {name}: {v}"))
            }
        };
        if let Some(run) = &self.run {
            check("run.wall_time_ms", run.wall_time_ms)?;
            check("run.final_mse", run.final_mse)?;
        }
        if let Some(bench) = &self.bench {
            for (side, summary) in [("base", &bench.base), ("augmented", &bench.augmented)] {
                check(&format!("bench.{side}.wall_time_ms"), summary.wall_time_ms)?;
                check(&format!("bench.{side}.final_mse"), summary.final_mse)?;
            }
            check("bench.speedup", bench.speedup)?;
            check("bench.pim", bench.pim)?;
            check("bench.ccl_recall", bench.ccl_recall)?;
            if let Some(ratio) = bench.counter_ratio {
                check("bench.counter_ratio", ratio)?;
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, String> {
        self.check_finite()?;
        serde_json::to_string_pretty(self)
            .map(|mut s| {
                s.push('\n');
                s
            })
            .map_err(|e| format!("report serialization failed: {e}"))
    }
}
