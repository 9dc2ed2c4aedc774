//! Canonical JSON and markdown rendering.

use super::suites::SuiteReport;
use crate::error::Result;
use crate::report::Finding;
use crate::tower_sim::corpus::CorpusReport;
use crate::tower_sim::TowerReport;
use serde::Serialize;
use std::fmt::Write;

/// Pretty JSON with sorted keys and a trailing newline, so equal inputs
/// give byte-identical output.
pub fn canonical_json<T: Serialize>(v: &T) -> Result<String> {
    let v = serde_json::to_value(v)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn findings_table(findings: &[Finding]) -> String {
    let mut s = String::from("| check | status | witness |\n|---|---|---|\n");
    for f in findings {
        let status = serde_json::to_value(f.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        let _ = writeln!(s, "| {} | {} | {} |", cell(&f.name), status, cell(&f.witness));
    }
    s
}

pub fn suite_markdown(r: &SuiteReport) -> String {
    let mut s = String::new();
    let name = serde_json::to_value(r.suite).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    let _ = writeln!(s, "# Suite `{name}`\n");
    let _ = writeln!(s, "tool {} · seed {} · precision {}\n", r.tool_version, r.config.seed, r.config.precision);
    let _ = writeln!(s, "passed {} · failed {} · inapplicable {}\n", r.passed, r.failed, r.inapplicable);
    s.push_str(&findings_table(&r.findings));
    s
}

pub fn tower_markdown(r: &TowerReport) -> String {
    let mut s = String::new();
    let what = match (&r.spec.f, r.spec.flat) {
        (Some(f), _) => format!("f = {f:?}"),
        (None, Some(k)) => format!("flat, k = {k}"),
        _ => String::new(),
    };
    let _ = writeln!(s, "# Tower p = {}, {what}\n", r.spec.p);
    let _ = writeln!(s, "precision {} · n0 {:?} · z {:?} · degenerate {}\n", r.precision, r.n0, r.z, r.degenerate);
    s.push_str("| n | orders | rank | exp | sexp |\n|---|---|---|---|---|\n");
    for l in &r.levels {
        let _ = writeln!(s, "| {} | {:?} | {} | p^{} | p^{} |", l.level, l.orders, l.rank, l.exp_log, l.sexp_log);
    }
    s.push_str("\n| transition | r | r' | d | label |\n|---|---|---|---|---|\n");
    for t in &r.transitions {
        let _ = writeln!(s, "| {} → {} | {} | {} | {} | {} |", t.from, t.from + 1, t.r, t.r_prime, t.d, t.label);
    }
    s.push('\n');
    s.push_str(&findings_table(&r.properties));
    s.push_str("\nObservations:\n\n");
    s.push_str(&findings_table(&r.observations));
    s
}

pub fn corpus_markdown(r: &CorpusReport) -> String {
    let mut s = String::new();
    let c = &r.config;
    let _ = writeln!(s, "# Corpus p = {}, {} towers, degree ≤ {}, seed {}\n", c.p, c.count, c.max_deg, c.seed);
    let _ = writeln!(s, "tool {} · horizon {} · precision {}\n", r.tool_version, c.horizon, c.precision);
    let table = |title: &str, m: &std::collections::BTreeMap<String, usize>| {
        let mut t = format!("| {title} | count |\n|---|---|\n");
        for (k, v) in m {
            let _ = writeln!(t, "| {} | {v} |", cell(k));
        }
        t
    };
    s.push_str(&table("label", &r.label_counts));
    s.push('\n');
    s.push_str(&table("n0", &r.n0_distribution));
    s.push('\n');
    s.push_str(&table("violated property", &r.violations));
    s.push('\n');
    s.push_str(&table("failed observation", &r.observations_failed));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_sorted() {
        #[derive(Serialize)]
        struct X {
            b: u8,
            a: u8,
        }
        assert_eq!(canonical_json(&X { b: 1, a: 2 }).unwrap(), "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
    }

    #[test]
    fn pipes_are_escaped() {
        let t = findings_table(&[Finding::pass("x", "a|b")]);
        assert!(t.contains("a\\|b"));
    }
}
