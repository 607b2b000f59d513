//! Line-oriented reports. Every line is one JSON object: a header echoing the
//! command and tolerances, then values, checks and failures, then a summary
//! carrying the exit status. `--human` prints the same content as a table.

use std::io::{self, Write};

use ppt_core::ToleranceConfig;
use serde_json::{json, Value};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

enum Line {
    Value { name: String, value: Value },
    Check { name: String, pass: bool, residual: Option<f64>, detail: Value },
    Failure { suite: String, trial: u64, seed: u64, message: String },
}

pub struct Report {
    command: Vec<String>,
    tol: ToleranceConfig,
    lines: Vec<Line>,
}

impl Report {
    pub fn new(command: Vec<String>, tol: ToleranceConfig) -> Self {
        Self { command, tol, lines: Vec::new() }
    }

    pub fn value(&mut self, name: &str, value: impl Into<Value>) {
        self.lines.push(Line::Value { name: name.into(), value: value.into() });
    }

    pub fn check(&mut self, name: &str, pass: bool, residual: Option<f64>, detail: Value) {
        self.lines.push(Line::Check { name: name.into(), pass, residual, detail });
    }

    pub fn failure(&mut self, suite: &str, trial: u64, seed: u64, message: String) {
        self.lines.push(Line::Failure { suite: suite.into(), trial, seed, message });
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| match l {
            Line::Check { pass, .. } => *pass,
            Line::Failure { .. } => false,
            Line::Value { .. } => true,
        })
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        }
    }

    fn json_lines(&self) -> Vec<Value> {
        let mut out = vec![json!({
            "command": self.command,
            "tolerances": {
                "rank_rel_tol": self.tol.rank_rel_tol,
                "psd_tol": self.tol.psd_tol,
                "eq_tol": self.tol.eq_tol,
            },
        })];
        for line in &self.lines {
            out.push(match line {
                Line::Value { name, value } => json!({ "value": name, "data": value }),
                Line::Check { name, pass, residual, detail } => {
                    json!({ "check": name, "pass": pass, "residual": residual, "detail": detail })
                }
                Line::Failure { suite, trial, seed, message } => {
                    json!({ "failure": suite, "trial": trial, "seed": seed, "message": message })
                }
            });
        }
        out.push(json!({ "summary": { "pass": self.passed(), "exit": self.exit_code() } }));
        out
    }

    pub fn write(&self, human: bool, w: &mut impl Write) -> io::Result<()> {
        if !human {
            for v in self.json_lines() {
                writeln!(w, "{v}")?;
            }
            return Ok(());
        }
        writeln!(w, "command     {}", self.command.join(" "))?;
        writeln!(
            w,
            "tolerances  rank {:e}  psd {:e}  eq {:e}",
            self.tol.rank_rel_tol, self.tol.psd_tol, self.tol.eq_tol
        )?;
        for line in &self.lines {
            match line {
                Line::Value { name, value } => writeln!(w, "  {name:<24} {value}")?,
                Line::Check { name, pass, residual, detail } => {
                    let verdict = if *pass { "PASS" } else { "FAIL" };
                    let res = residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
                    let detail = if detail.is_null() { String::new() } else { detail.to_string() };
                    writeln!(w, "{verdict} {name:<24} {res:>10}  {detail}")?;
                }
                Line::Failure { suite, trial, seed, message } => {
                    writeln!(w, "  failure {suite} trial {trial} seed {seed}: {message}")?
                }
            }
        }
        writeln!(w, "{} (exit {})", if self.passed() { "all checks passed" } else { "checks failed" }, self.exit_code())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_line_is_json_and_summary_matches_checks() {
        let mut r = Report::new(vec!["ppt".into(), "x".into()], ToleranceConfig::default());
        r.value("n", 3);
        r.check("ok", true, Some(1e-12), Value::Null);
        assert_eq!(r.exit_code(), EXIT_OK);
        r.check("bad", false, None, json!({ "why": "test" }));
        assert_eq!(r.exit_code(), EXIT_CHECK_FAILED);

        let mut buf = Vec::new();
        r.write(false, &mut buf).unwrap();
        let lines: Vec<Value> = String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0]["tolerances"]["eq_tol"], json!(ToleranceConfig::default().eq_tol));
        assert_eq!(lines[4]["summary"]["exit"], json!(1));
    }

    #[test]
    fn failures_fail_the_report() {
        let mut r = Report::new(vec![], ToleranceConfig::default());
        r.failure("penrose", 3, 99, "boom".into());
        assert!(!r.passed());
        let mut buf = Vec::new();
        r.write(true, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains("seed 99"));
    }
}
