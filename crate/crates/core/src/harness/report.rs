use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::ParamTuple;
use crate::formal_coeffs::FormalPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Chern,
    Coeffsum,
    DegreeVanishing,
    Lemma13,
    Lemma22,
    Prop21,
    Thm1,
    Thm24,
    Wu,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::Thm1,
        CheckKind::Lemma13,
        CheckKind::DegreeVanishing,
        CheckKind::Wu,
        CheckKind::Coeffsum,
        CheckKind::Chern,
        CheckKind::Lemma22,
        CheckKind::Prop21,
        CheckKind::Thm24,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Chern => "chern",
            CheckKind::Coeffsum => "coeffsum",
            CheckKind::DegreeVanishing => "degree_vanishing",
            CheckKind::Lemma13 => "lemma13",
            CheckKind::Lemma22 => "lemma22",
            CheckKind::Prop21 => "prop21",
            CheckKind::Thm1 => "thm1",
            CheckKind::Thm24 => "thm24",
            CheckKind::Wu => "wu",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One surviving term: an integer times a product of named factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ResidualTerm {
    #[serde(serialize_with = "serialize_bigint")]
    pub coeff: BigInt,
    pub monomial: Vec<String>,
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(x) => s.serialize_i64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

impl ResidualTerm {
    /// Terms of `p`, each tagged with `context` as a leading factor name when
    /// given.
    pub fn from_polynomial(p: &FormalPolynomial, context: Option<&str>) -> Vec<Self> {
        p.terms()
            .map(|(m, c)| {
                let mut monomial = Vec::new();
                if let Some(ctx) = context {
                    monomial.push(format!("@{ctx}"));
                }
                monomial.extend(m.factor_names());
                Self {
                    coeff: c.clone(),
                    monomial,
                }
            })
            .collect()
    }

    /// A failed side condition, recorded as a named unit term.
    pub fn marker(label: impl Into<String>) -> Self {
        Self {
            coeff: BigInt::from(1),
            monomial: vec![label.into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub check: CheckKind,
    pub params: ParamTuple,
    pub status: Status,
    pub residual: Vec<ResidualTerm>,
    pub duration_ms: u64,
    /// Parameters outside `(n, m, j)`, e.g. `k` or `r`.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(check: CheckKind, params: ParamTuple, residual: Vec<ResidualTerm>) -> Self {
        let status = if residual.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check,
            params,
            status,
            residual,
            duration_ms: 0,
            extra: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_extra(mut self, key: &str, value: i64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Canonical ordering key for merged reports.
    pub fn sort_key(&self) -> (CheckKind, u32, u32, u32, Vec<(String, i64)>) {
        (
            self.check,
            self.params.n,
            self.params.m,
            self.params.j,
            self.extra.iter().map(|(k, v)| (k.clone(), *v)).collect(),
        )
    }

    /// Copy with the timing zeroed, for reproducibility comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            duration_ms: 0,
            ..self.clone()
        }
    }
}

pub fn render_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn render_markdown(reports: &[VerificationReport]) -> String {
    let mut by_check: BTreeMap<CheckKind, Vec<&VerificationReport>> = BTreeMap::new();
    for r in reports {
        by_check.entry(r.check).or_default().push(r);
    }
    let mut out = String::new();
    for (check, rows) in by_check {
        let passed = rows.iter().filter(|r| r.passed()).count();
        let _ = writeln!(out, "## {check}\n");
        let _ = writeln!(out, "{passed}/{} passed\n", rows.len());
        out.push_str("| n | m | j | t | d | extra | status | residual | duration_ms |\n");
        out.push_str("|---|---|---|---|---|---|---|---|---|\n");
        for r in rows {
            let extra = r
                .extra
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            let residual = if r.residual.is_empty() {
                "0".to_string()
            } else {
                r.residual
                    .iter()
                    .map(|t| format!("{}*{}", t.coeff, t.monomial.join("*")))
                    .collect::<Vec<_>>()
                    .join(" + ")
            };
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
            };
            let p = &r.params;
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | `{}` | {} |",
                p.n, p.m, p.j, p.t, p.d, extra, status, residual, r.duration_ms
            );
        }
        out.push('\n');
    }
    out
}
