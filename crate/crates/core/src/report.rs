//! Certificate reports: assembly, deterministic JSON and text output, and
//! parsing back.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certifier::{
    completeness_notes, summarize, Certification, CheckOptions, CheckStatus, DerivationOutcome, StageVerdict,
    SystemVerdict,
};
use crate::error::{Error, Result};

pub const TOOL: &str = "jicert";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub wilson: bool,
    pub star: bool,
    pub strengthened: bool,
    pub dense_bound: usize,
    pub subgroup_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the input bytes, hex.
    pub input_digest: String,
    pub seed: u64,
    pub options: ReportOptions,
    pub stages: Vec<StageVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<DerivationOutcome>,
    pub summary: SystemVerdict,
    pub completeness: Vec<String>,
}

pub fn input_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl CertificateReport {
    pub fn new(input: &[u8], seed: u64, opts: &CheckOptions, dense_bound: usize, cert: Certification) -> Self {
        CertificateReport {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: input_digest(input),
            seed,
            options: ReportOptions {
                wilson: opts.wilson,
                star: opts.star,
                strengthened: opts.strengthened,
                dense_bound,
                subgroup_bound: opts.subgroup_bound,
            },
            stages: cert.stages,
            derivation: cert.derivation,
            summary: cert.summary,
            completeness: completeness_notes(opts),
        }
    }

    /// A report with no stages, as produced for an empty stage list.
    pub fn empty(input: &[u8], seed: u64, opts: &CheckOptions, dense_bound: usize) -> Self {
        CertificateReport {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digest: input_digest(input),
            seed,
            options: ReportOptions {
                wilson: opts.wilson,
                star: opts.star,
                strengthened: opts.strengthened,
                dense_bound,
                subgroup_bound: opts.subgroup_bound,
            },
            stages: Vec::new(),
            derivation: None,
            summary: summarize(&[], false),
            completeness: completeness_notes(opts),
        }
    }

    pub fn overall(&self) -> CheckStatus {
        self.summary.overall
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

/// Serializes deterministically. JSON goes through `serde_json::Value`,
/// whose maps are ordered, so keys come out sorted.
pub fn emit_report(report: &CertificateReport, format: Format) -> String {
    match format {
        Format::Json => {
            let value = serde_json::to_value(report).expect("report serializes");
            let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
            out.push('\n');
            out
        }
        Format::Text => emit_text(report),
    }
}

fn status_word(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::NotApplicable => "n/a",
        CheckStatus::Inconclusive => "inconclusive",
    }
}

fn emit_text(r: &CertificateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}  input sha256 {}", r.tool, r.version, r.input_digest);
    if let Some(d) = &r.derivation {
        match (&d.report, &d.error) {
            (Some(rep), _) => {
                let _ = writeln!(out, "derived marks (B_0 order {}):", rep.b0_order);
                for l in &rep.levels {
                    let _ = writeln!(out, "  A_{} order {}: {}", l.stage, l.a_order, l.detail);
                }
                for n in &rep.notes {
                    let _ = writeln!(out, "  note: {n}");
                }
            }
            (None, Some(e)) => {
                let _ = writeln!(out, "mark derivation failed: {e}");
            }
            (None, None) => {}
        }
    }
    for v in &r.stages {
        let _ = write!(out, "stage {}: |G| = {}", v.stage, v.info.order);
        for (label, value) in [("A", &v.info.a_order), ("B", &v.info.b_order), ("P", &v.info.p_order)] {
            if let Some(x) = value {
                let _ = write!(out, ", |{label}| = {x}");
            }
        }
        if let Some(f) = &v.info.critical_factor {
            let _ = write!(out, ", A/B = {f}");
        }
        out.push('\n');
        for (name, c) in &v.checks {
            let _ = writeln!(out, "  {:<28} {:<12} {}", name, status_word(c.status), c.detail);
        }
        for n in &v.notes {
            let _ = writeln!(out, "  note: {n}");
        }
    }
    let _ = writeln!(out, "overall: {}", status_word(r.summary.overall));
    for c in &r.summary.limit_claims {
        let _ = writeln!(out, "  {c}");
    }
    out
}

pub fn parse_report(text: &str) -> Result<CertificateReport> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}
