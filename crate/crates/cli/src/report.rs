use std::time::Duration;

use serde_json::{json, Map, Value};

/// Text lines and a JSON object built side by side, plus the outcome.
#[derive(Debug, Default)]
pub struct Report {
    lines: Vec<String>,
    results: Map<String, Value>,
    pub failed: bool,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn render_text(&self, timing: Option<Duration>) -> String {
        let mut out = self.lines.join("\n");
        if let Some(t) = timing {
            out.push_str(&format!("\ntime: {:.3} ms", t.as_secs_f64() * 1e3));
        }
        out.push('\n');
        out
    }

    pub fn render_json(&self, command: Value, timing: Option<Duration>) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), command);
        doc.insert("results".into(), Value::Object(self.results.clone()));
        doc.insert(
            "status".into(),
            json!(if self.failed { "fail" } else { "ok" }),
        );
        if let Some(t) = timing {
            doc.insert("timing_ms".into(), json!(t.as_secs_f64() * 1e3));
        }
        let mut s =
            serde_json::to_string_pretty(&Value::Object(doc)).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
