use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// Result of one reproduction case.
///
/// `expected` and `abs_error` hold a number or the string `"n/a"`.
/// `runtime_ms` is left out of JSON and CSV unless timing was requested, so
/// that identical runs serialize to identical bytes.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case_id: String,
    pub computed: Value,
    pub expected: Value,
    pub abs_error: Value,
    pub tol: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub details: Map<String, Value>,
}

pub fn na() -> Value {
    Value::String("n/a".into())
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn render(reports: &[CaseReport], format: Format, timing: bool) -> Result<String> {
    match format {
        Format::Json => {
            let stripped: Vec<CaseReport> = reports
                .iter()
                .cloned()
                .map(|mut r| {
                    if !timing {
                        r.runtime_ms = None;
                    }
                    r
                })
                .collect();
            Ok(serde_json::to_string_pretty(&stripped).expect("reports serialize") + "\n")
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header = vec!["case_id", "computed", "expected", "abs_error", "tol", "passed"];
            if timing {
                header.push("runtime_ms");
            }
            w.write_record(&header)?;
            for r in reports {
                let mut row = vec![
                    r.case_id.clone(),
                    plain(&r.computed),
                    plain(&r.expected),
                    plain(&r.abs_error),
                    format!("{:e}", r.tol),
                    r.passed.to_string(),
                ];
                if timing {
                    row.push(r.runtime_ms.unwrap_or(0).to_string());
                }
                w.write_record(&row)?;
            }
            let bytes = w.into_inner().map_err(|e| e.into_error())?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        Format::Pretty => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&format!(
                    "{} {}\n    computed  {}\n    expected  {}\n    abs_error {}  (tol {:e})\n",
                    if r.passed { "PASS" } else { "FAIL" },
                    r.case_id,
                    plain(&r.computed),
                    plain(&r.expected),
                    plain(&r.abs_error),
                    r.tol,
                ));
                for (k, v) in &r.details {
                    out.push_str(&format!("    {k}: {}\n", plain(v)));
                }
                if let Some(ms) = r.runtime_ms {
                    out.push_str(&format!("    runtime   {ms} ms\n"));
                }
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            out.push_str(&format!("{passed}/{} cases passed\n", reports.len()));
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> CaseReport {
        let mut details = Map::new();
        details.insert("trials".into(), Value::from(3));
        CaseReport {
            case_id: "demo".into(),
            computed: Value::from(0.5),
            expected: na(),
            abs_error: na(),
            tol: 1e-10,
            passed: true,
            runtime_ms: Some(12),
            details,
        }
    }

    #[test]
    fn json_omits_runtime_unless_asked() {
        let r = [sample()];
        let plain = render(&r, Format::Json, false).unwrap();
        assert!(!plain.contains("runtime_ms"));
        assert!(plain.contains("\"expected\": \"n/a\""));
        assert!(render(&r, Format::Json, true).unwrap().contains("\"runtime_ms\": 12"));
    }

    #[test]
    fn csv_layout() {
        let text = render(&[sample()], Format::Csv, false).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("case_id,computed,expected,abs_error,tol,passed"));
        assert_eq!(lines.next(), Some("demo,0.5,n/a,n/a,1e-10,true"));
        assert!(render(&[sample()], Format::Csv, true).unwrap().starts_with("case_id,computed,expected,abs_error,tol,passed,runtime_ms\n"));
    }

    #[test]
    fn pretty_summary() {
        let text = render(&[sample()], Format::Pretty, false).unwrap();
        assert!(text.starts_with("PASS demo"));
        assert!(text.contains("trials: 3"));
        assert!(text.ends_with("1/1 cases passed\n"));
    }
}
