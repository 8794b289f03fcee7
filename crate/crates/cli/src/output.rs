//! Report rendering and the exit-code contract.

use serde_json::Value;

use crate::args::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("hypotheses not satisfied: {0} (rerun with --force to evaluate anyway)")]
    Hypothesis(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Hypothesis(_) => EXIT_HYPOTHESIS,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl From<frobstab::Error> for CliError {
    fn from(e: frobstab::Error) -> Self {
        match e.kind() {
            frobstab::ErrorKind::Hypothesis => CliError::Hypothesis(e.to_string()),
            frobstab::ErrorKind::Validation => CliError::Validation(e.to_string()),
        }
    }
}

/// A finished command: what to print and how to exit.
#[derive(Debug)]
pub struct Outcome {
    pub report: Value,
    pub exit: i32,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome { report, exit: EXIT_OK }
    }
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("json values always serialize");
            s.push('\n');
            s
        }
        Format::Table => {
            let mut out = String::new();
            if let Some(banner) = report.get("banner").and_then(Value::as_str) {
                let bar = "!".repeat(banner.len() + 8);
                out.push_str(&format!("{bar}\n!!! {} !!!\n{bar}\n", banner.to_uppercase()));
            }
            table(report, 0, &mut out);
            out
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn is_flat_object(v: &Value) -> bool {
    v.as_object()
        .map(|m| m.values().all(|x| !x.is_object() && !x.is_array()))
        .unwrap_or(false)
}

fn table(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if k == "banner" && depth == 0 {
                    continue;
                }
                match x {
                    Value::Object(_) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        table(x, depth + 1, out);
                    }
                    Value::Array(items) if !items.is_empty() && items.iter().all(is_flat_object) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        grid(items, depth + 1, out);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        for item in items {
                            out.push_str(&format!("{pad}  -\n"));
                            table(item, depth + 2, out);
                        }
                    }
                    Value::Array(items) => {
                        let parts: Vec<String> = items.iter().map(scalar).collect();
                        out.push_str(&format!("{pad}{k}: [{}]\n", parts.join(", ")));
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                table(item, depth, out);
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

fn grid(rows: &[Value], depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let mut cols: Vec<String> = Vec::new();
    for row in rows {
        for k in row.as_object().expect("flat object").keys() {
            if !cols.contains(k) {
                cols.push(k.clone());
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| r.get(c).map(scalar).unwrap_or_default()).collect())
        .collect();
    let widths: Vec<usize> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| cells.iter().map(|row| row[j].chars().count()).chain([c.chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |items: &[String]| {
        let parts: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}", w = *w))
            .collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(&cols));
    for row in &cells {
        out.push_str(&line(row));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn table_aligns_rows() {
        let v = json!({"rows": [{"i": 0, "rank": "1"}, {"i": 10, "rank": "26"}]});
        let s = render(&v, Format::Table);
        assert_eq!(s, "rows:\n   i  rank\n   0     1\n  10    26\n");
    }

    #[test]
    fn banner_is_shouted_first() {
        let v = json!({"banner": "hypotheses not satisfied", "x": "1/1"});
        let s = render(&v, Format::Table);
        assert!(s.starts_with("!!!"));
        assert!(s.contains("HYPOTHESES NOT SATISFIED"));
        assert!(s.ends_with("x: 1/1\n"));
    }
}
