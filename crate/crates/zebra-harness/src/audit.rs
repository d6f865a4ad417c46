use std::collections::HashMap;
use std::fs;
use std::path::Path;

use anyhow::Context;
use zebra::textio::CertificateDump;

use crate::experiments::certificate_hash;

/// Outcome of re-verifying every success in a records file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub records: usize,
    pub successes: usize,
    pub verified: usize,
    pub problems: Vec<String>,
}

impl AuditReport {
    pub fn clean(&self) -> bool {
        self.problems.is_empty() && self.verified == self.successes
    }
}

/// `(trial label, success flag, certificate hash)` for each record.
fn success_rows(text: &str) -> anyhow::Result<Vec<(String, bool, Option<String>)>> {
    let label = |n: &str, t: &str| format!("n = {n}, trial {t}");
    if text.trim_start().starts_with('{') {
        let doc: serde_json::Value = serde_json::from_str(text)?;
        let records = doc.get("records").and_then(|r| r.as_array()).context("JSON records file has no records array")?;
        return Ok(records
            .iter()
            .map(|r| {
                (
                    label(&r["n"].to_string(), &r["trial"].to_string()),
                    r.get("success").and_then(|s| s.as_bool()) == Some(true),
                    r.get("certificate").and_then(|s| s.as_str()).map(str::to_string),
                )
            })
            .collect());
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.deserialize::<HashMap<String, String>>() {
        let row = row?;
        let get = |k: &str| row.get(k).cloned().unwrap_or_default();
        let cert = get("certificate");
        out.push((label(&get("n"), &get("trial")), get("success") == "true", (!cert.is_empty()).then_some(cert)));
    }
    Ok(out)
}

/// Re-verifies the certificate of every successful record from the dumps in `certs`.
pub fn audit(records_text: &str, certs: &Path) -> anyhow::Result<AuditReport> {
    let rows = success_rows(records_text)?;
    let mut report = AuditReport {
        records: rows.len(),
        ..Default::default()
    };
    for (label, success, hash) in rows {
        if !success {
            continue;
        }
        report.successes += 1;
        let Some(hash) = hash else {
            report.problems.push(format!("{label}: success without a certificate"));
            continue;
        };
        let path = certs.join(format!("{hash}.cert"));
        let Ok(text) = fs::read_to_string(&path) else {
            report.problems.push(format!("{label}: missing {}", path.display()));
            continue;
        };
        if certificate_hash(&text) != hash {
            report.problems.push(format!("{label}: certificate hash mismatch"));
            continue;
        }
        match CertificateDump::read(&text) {
            Ok(dump) if dump.verify().passed() => report.verified += 1,
            Ok(_) => report.problems.push(format!("{label}: certificate does not verify")),
            Err(e) => report.problems.push(format!("{label}: unreadable certificate: {e}")),
        }
    }
    Ok(report)
}
