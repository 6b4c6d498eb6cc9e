//! Deterministic CSV/JSON rendering: 9 significant digits, scientific
//! notation, `#`-prefixed comment lines echoing the configuration.

use serde_json::{json, Value};

use crate::config::Format;

pub fn fmt_float(x: f64) -> String {
    format!("{x:.8e}")
}

/// A column-oriented series result plus comment metadata.
pub struct Table {
    pub comments: Vec<(String, String)>,
    pub columns: Vec<String>,
    /// Row-major cells, pre-formatted (sweeps mix text and numbers).
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn numeric(
        comments: Vec<(String, String)>,
        columns: Vec<String>,
        series: Vec<Vec<f64>>,
    ) -> Table {
        debug_assert!(series.iter().all(|c| c.len() == series[0].len()));
        let n = series.first().map_or(0, |c| c.len());
        let rows = (0..n)
            .map(|i| series.iter().map(|c| fmt_float(c[i])).collect())
            .collect();
        Table {
            comments,
            columns,
            rows,
        }
    }

    pub fn render(&self, format: Format, task: &str, config_echo: &str) -> String {
        match format {
            Format::Csv => self.render_csv(task, config_echo),
            Format::Json => self.render_json(task, config_echo),
        }
    }

    fn render_csv(&self, task: &str, config_echo: &str) -> String {
        let mut out = String::new();
        out.push_str(&format!("# rfbeats {task}\n"));
        out.push_str(&format!("# config={config_echo}\n"));
        for (k, v) in &self.comments {
            out.push_str(&format!("# {k}={v}\n"));
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self, task: &str, config_echo: &str) -> String {
        let meta: Value = self
            .comments
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect::<serde_json::Map<_, _>>()
            .into();
        let v = json!({
            "task": task,
            "config": serde_json::from_str::<Value>(config_echo).unwrap_or(Value::Null),
            "meta": meta,
            "columns": self.columns,
            "rows": self.rows,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("table serializes");
        s.push('\n');
        s
    }
}

/// Scalar (single-record) result.
pub fn render_scalar(fields: &[(&str, Value)], format: Format, task: &str, echo: &str) -> String {
    match format {
        Format::Json => {
            let map: serde_json::Map<String, Value> = fields
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("serializes");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut out = String::new();
            out.push_str(&format!("# rfbeats {task}\n"));
            out.push_str(&format!("# config={echo}\n"));
            out.push_str("name,value\n");
            for (k, v) in fields {
                let cell = match v {
                    Value::Number(n) => n
                        .as_f64()
                        .map(fmt_float)
                        .unwrap_or_else(|| n.to_string()),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k},{cell}\n"));
            }
            out
        }
    }
}
