//! Structured and text renderings of verification reports.

use serde::{Deserialize, Serialize};

use phizeta::identities::{VerificationReport, Verdict};

use crate::config::RunConfig;

/// Run metadata. Numbers are strings, like every report field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub tool_version: String,
    pub precision: String,
    pub tolerance_exponent: String,
    pub seed: String,
    pub timestamp: String,
}

impl Header {
    pub fn new(cfg: &RunConfig) -> Header {
        Header {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            precision: cfg.precision.digits().to_string(),
            tolerance_exponent: (-cfg.tol_exp).to_string(),
            seed: cfg.seed.to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub header: Header,
    pub reports: Vec<VerificationReport>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<ReportDocument> {
        serde_json::from_str(s)
    }
}

/// Any JSON payload under the common header.
#[derive(Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub header: &'a Header,
    #[serde(flatten)]
    pub body: &'a T,
}

pub fn to_json<T: Serialize>(header: &Header, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { header, body }).expect("payload serializes");
    s.push('\n');
    s
}

/// Identities with no failing report, out of all identities covered.
pub fn pass_count(reports: &[VerificationReport]) -> (usize, usize) {
    let mut ids: Vec<(&str, bool)> = Vec::new();
    for r in reports {
        match ids.last_mut() {
            Some((id, ok)) if *id == r.id => *ok &= !r.verdict.is_failure(),
            _ => ids.push((&r.id, !r.verdict.is_failure())),
        }
    }
    (ids.iter().filter(|(_, ok)| *ok).count(), ids.len())
}

fn short(s: Option<&str>) -> String {
    match s {
        None => "-".to_string(),
        Some(v) => match v.parse::<f64>() {
            Ok(0.0) => "0".to_string(),
            Ok(x) => format!("{x:.3e}"),
            Err(_) => v.to_string(),
        },
    }
}

/// One aligned row per report and a `passed X/Y` footer.
pub fn render_text(reports: &[VerificationReport]) -> String {
    let rows: Vec<[String; 6]> = reports
        .iter()
        .map(|r| {
            [
                r.id.clone(),
                r.mode.to_string(),
                r.verdict.to_string(),
                short(r.abs_error.as_deref()),
                r.terms_used.clone(),
                format!("{}ms", r.elapsed_ms),
            ]
        })
        .collect();
    let head = ["id", "mode", "verdict", "abs_error", "terms", "time"].map(String::from);
    let mut widths = head.clone().map(|h| h.chars().count());
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: &[String; 6]| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            s.push_str(c);
            if i + 1 < cells.len() {
                s.push_str(&" ".repeat(w - c.chars().count()));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(&head);
    for (row, r) in rows.iter().zip(reports) {
        out.push_str(&line(row));
        if r.verdict == Verdict::Fail {
            if let Some(d) = &r.diagnostic {
                out.push_str(&format!("  ! {d}\n"));
            }
        }
    }
    let (passed, total) = pass_count(reports);
    out.push_str(&format!("passed {passed}/{total}\n"));
    out
}
