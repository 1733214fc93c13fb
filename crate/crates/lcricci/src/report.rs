//! Verification reports: JSON and a plain-text table rendered from the same JSON.

use std::fmt::Write as _;

use lcricci_core::jet::DerivMode;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check_id: String,
    pub metric: String,
    pub status: Status,
    pub points: usize,
    pub max_residual: Option<f64>,
    pub mean_residual: Option<f64>,
    pub min_residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub criterion: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub metrics: Vec<String>,
    pub points: usize,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub mode: String,
    pub step: Option<f64>,
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub version: String,
    pub derivatives: String,
    pub step_rule: String,
    pub wirtinger: String,
    pub metric_storage: String,
    pub reduction: String,
}

impl Environment {
    pub fn current(mode: DerivMode, step: Option<f64>) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION").to_string(),
            derivatives: mode.name().to_string(),
            step_rule: match step {
                Some(h) => format!("fixed h = {h:e}"),
                None => "h = 1e-4 * max(1, |p|)".to_string(),
            },
            wirtinger: "d/dz = (d/dx - i d/dy)/2, d/dzbar = (d/dx + i d/dy)/2".to_string(),
            metric_storage: "g[i][j] = g_{i jbar}; omega = i g_{i jbar} dz^i ^ dzbar^j".to_string(),
            reduction: "points evaluated in parallel, reduced sequentially in point order".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coverage {
    pub check_id: String,
    pub formula: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub config: ConfigEcho,
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
    pub coverage: Vec<Coverage>,
    pub overall_pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        render_table(&self.to_value())
    }
}

fn num(v: &Value) -> String {
    match v {
        Value::Number(n) => n.as_f64().map_or_else(|| n.to_string(), |x| format!("{x:.3e}")),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn text(v: &Value) -> &str {
    v.as_str().unwrap_or("")
}

/// Renders a report's JSON as a fixed-width table. Only fields present in the JSON are shown.
pub fn render_table(report: &Value) -> String {
    let mut out = String::new();
    let cfg = &report["config"];
    let _ = writeln!(
        out,
        "suite {}  mode {}  points {}  seed {}",
        text(&report["suite"]),
        text(&cfg["mode"]),
        cfg["points"],
        cfg["seed"]
    );
    let headers = ["status", "check", "metric", "pts", "max", "mean", "tol"];
    let rows: Vec<[String; 7]> = report["checks"]
        .as_array()
        .map(|a| a.as_slice())
        .unwrap_or(&[])
        .iter()
        .map(|c| {
            [
                text(&c["status"]).to_uppercase(),
                text(&c["check_id"]).to_string(),
                text(&c["metric"]).to_string(),
                c["points"].to_string(),
                num(&c["max_residual"]),
                num(&c["mean_residual"]),
                if c["criterion"].as_str().is_some_and(|s| !s.is_empty()) {
                    text(&c["criterion"]).to_string()
                } else {
                    "-".into()
                },
            ]
        })
        .collect();
    let mut width = headers.map(|h| h.chars().count());
    for r in &rows {
        for (w, cell) in width.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let mut l = String::new();
        for (k, c) in cells.iter().enumerate() {
            if k > 0 {
                l.push_str("  ");
            }
            let pad = width[k] - c.chars().count();
            l.push_str(c);
            if k + 1 < cells.len() {
                l.extend(std::iter::repeat_n(' ', pad));
            }
        }
        l
    };
    let _ = writeln!(out, "{}", line(&headers.map(String::from)));
    for r in &rows {
        let _ = writeln!(out, "{}", line(r));
    }
    for c in report["checks"].as_array().map(|a| a.as_slice()).unwrap_or(&[]) {
        if let Some(note) = c["note"].as_str() {
            let _ = writeln!(out, "  note {} [{}]: {}", text(&c["check_id"]), text(&c["metric"]), note);
        }
    }
    let _ = writeln!(out, "overall: {}", if report["overall_pass"].as_bool() == Some(true) { "PASS" } else { "FAIL" });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_reflects_json_fields() {
        let v = serde_json::json!({
            "suite": "demo",
            "config": {"mode": "analytic", "points": 3, "seed": 7},
            "checks": [{"status": "pass", "check_id": "x.y", "metric": "flat:n=2", "points": 3,
                        "max_residual": 1.5e-9, "mean_residual": null, "criterion": "max <= 1e-6"}],
            "overall_pass": true
        });
        let t = render_table(&v);
        let row: Vec<&str> = t.lines().find(|l| l.starts_with("PASS")).unwrap().split_whitespace().collect();
        assert_eq!(&row[..4], ["PASS", "x.y", "flat:n=2", "3"]);
        assert!(t.contains("1.500e-9"));
        assert!(t.contains("overall: PASS"));
    }
}
