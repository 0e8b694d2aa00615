//! Versioned JSON report assembled by every subcommand.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA: &str = "pde-struct/1";

/// Report document: configuration echo, scalar metrics, verdicts, and inline
/// artifacts (profiles, fields). Key order is fixed by the struct and the
/// sorted maps, so identical analyses yield byte-identical sections.
#[derive(Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub config: Value,
    pub metrics: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, Value>,
    pub artifacts: BTreeMap<String, Value>,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            config,
            metrics: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            artifacts: BTreeMap::new(),
        }
    }

    pub fn metric(&mut self, key: &str, value: impl Serialize) {
        self.metrics
            .insert(key.into(), serde_json::to_value(value).expect("serializable metric"));
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        self.verdicts
            .insert(key.into(), serde_json::to_value(value).expect("serializable verdict"));
    }

    pub fn artifact(&mut self, key: &str, value: impl Serialize) {
        self.artifacts
            .insert(key.into(), serde_json::to_value(value).expect("serializable artifact"));
    }

    pub fn pass(&self) -> bool {
        self.verdicts.get("pass") == Some(&Value::Bool(true))
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The run-invariant sections (everything except the config echo, which
    /// legitimately records the thread count).
    pub fn deterministic_bytes(&self) -> Vec<u8> {
        #[derive(Serialize)]
        struct Sections<'a> {
            metrics: &'a BTreeMap<String, Value>,
            verdicts: &'a BTreeMap<String, Value>,
            artifacts: &'a BTreeMap<String, Value>,
        }
        serde_json::to_vec(&Sections {
            metrics: &self.metrics,
            verdicts: &self.verdicts,
            artifacts: &self.artifacts,
        })
        .expect("report serializes")
    }
}
