//! Certificate documents and human-readable summaries.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use charsub::certificate::{Basis, CharMode, CharSubspaceCertificate, LevelDetail, Route, SeriesCertificate};
use charsub::verify::VerifyReport;

/// The command line that produced a certificate, enough to re-derive the verifier's inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CommandEcho {
    CharSubspace {
        input: String,
        subspace: String,
        automorphisms: Vec<String>,
        t: Option<usize>,
        words: Vec<String>,
        mode: CharMode,
        target_word: Option<String>,
        closure_cap: usize,
    },
    Series {
        input: String,
        automorphisms: Vec<String>,
        route: Route,
        closure_cap: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    CharSubspace(CharSubspaceCertificate),
    Series(SeriesCertificate),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Verification {
    pub status: Status,
    pub checks: usize,
    pub discrepancies: Vec<String>,
}

impl From<&VerifyReport> for Verification {
    fn from(r: &VerifyReport) -> Self {
        Verification {
            status: if r.passed() { Status::Pass } else { Status::Fail },
            checks: r.checks.len(),
            discrepancies: r
                .discrepancies()
                .into_iter()
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect(),
        }
    }
}

/// Everything written by `char-subspace` and `series`; timing is reported on stderr only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub command: CommandEcho,
    pub certificate: Certificate,
    pub verification: Verification,
}

impl CertificateDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate documents serialize");
        s.push('\n');
        s
    }
}

/// The serde name of a unit enum variant.
pub fn label<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default()
}

pub fn basis(b: &Basis) -> String {
    if b.is_empty() {
        return "0".into();
    }
    let rows: Vec<String> = b
        .iter()
        .map(|r| format!("({})", r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("span{{{}}}", rows.join(", "))
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "  {key:<18} {value}");
}

pub fn char_summary(c: &CharSubspaceCertificate, v: &Verification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "characteristic subspace over GF({})^{}", c.field, c.dimension);
    row(&mut out, "mode", label(&c.mode));
    row(&mut out, "N", basis(&c.n));
    row(&mut out, "codim N", c.codim_n);
    row(&mut out, "t", c.t);
    row(&mut out, "H", basis(&c.h));
    row(&mut out, "codim H", c.codim_h);
    row(
        &mut out,
        "bound",
        format!("f^{}({}) = {}  trace {:?}", c.t - 1, c.codim_n, c.bound, c.f_trace),
    );
    row(&mut out, "|Φ|", c.phi_size);
    row(&mut out, "orbit size", c.orbit.len());
    row(&mut out, "closure size", c.closure_size);
    row(&mut out, "invariant", c.invariant_count);
    row(&mut out, "qualifying", c.qualifying_count);
    row(&mut out, "words checked", c.words.len());
    if let Some(t) = &c.target {
        match c.mode {
            CharMode::Identity => {
                let _ = writeln!(out, "  proof: {} vanishes on N, so {}(H, …, H) = 0", t.name, t.name);
                let _ = writeln!(out, "  proof: dim {}(H, …, H) = {}", t.name, t.lhs_dim);
            }
            _ => {
                let _ = writeln!(
                    out,
                    "  proof: dim {}(H, …, H) = {} <= |Φ| · dim {}(N, …, N) = {} · {} = {}",
                    t.name, t.lhs_dim, t.name, c.phi_size, t.image_dim, t.ceiling
                );
            }
        }
    }
    row(&mut out, "verification", status_line(v));
    out
}

pub fn series_summary(c: &SeriesCertificate, v: &Verification) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "characteristic series over GF({})^{}", c.field, c.dimension);
    row(&mut out, "route", label(&c.route));
    row(&mut out, "codim N", c.codim_n);
    row(&mut out, "codim M", c.codim_m);
    row(&mut out, "|Φ|", c.phi_size);
    row(&mut out, "closure size", c.closure_size);
    row(&mut out, "U_n arity", c.predicate_arity);
    if let Some(d) = c.direct_codim {
        row(&mut out, "direct codim", d);
    }
    if let Some(p) = c.predicate_codim {
        row(&mut out, "predicate codim", p);
    }
    for (i, b) in c.chain.iter().enumerate() {
        row(&mut out, &format!("B_{i}"), basis(b));
    }
    for e in &c.evidence {
        let detail = match &e.detail {
            LevelDetail::IdentityVanishes { word, .. } => format!("{word} = 0 in the quotient"),
            LevelDetail::Nilpotent { index } => format!("nilpotent, index {index}"),
            LevelDetail::Abelian => "abelian".into(),
        };
        row(
            &mut out,
            &format!("level {}", e.level),
            format!("dim {}: {detail}", e.quotient_dim),
        );
    }
    row(&mut out, "verification", status_line(v));
    out
}

fn status_line(v: &Verification) -> String {
    match v.status {
        Status::Pass => format!("pass ({} checks)", v.checks),
        Status::Fail => format!("FAIL: {}", v.discrepancies.join("; ")),
    }
}
