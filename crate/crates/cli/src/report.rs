//! Serializable report. Everything here is plain data so that a report
//! written to disk parses back to an equal value.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exit;
use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Refused,
    Internal,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => exit::PASS,
            Verdict::Fail => exit::FAIL,
            Verdict::Refused => exit::REFUSED,
            Verdict::Internal => exit::INTERNAL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub mode: String,
    pub problem: ProblemSpec,
    /// Resolved tolerances by name.
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinity: Option<InfinitySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<IndexSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundRow>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss: Option<GaussSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability: Option<StabilitySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub refusal: Option<Refusal>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data") + "\n"
    }

    /// Every named check in the report with its outcome.
    pub fn all_checks(&self) -> Vec<&CheckRow> {
        let mut out: Vec<&CheckRow> = Vec::new();
        if let Some(i) = &self.index {
            out.extend(&i.checks);
        }
        if let Some(g) = &self.gauss {
            out.extend(&g.checks);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRow {
    pub label: String,
    pub order: usize,
    pub representative: Vec<String>,
    pub conjugates: usize,
    pub weyl_order: usize,
    pub fixed_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub order: usize,
    pub faithful: bool,
    pub classes: Vec<ClassRow>,
    /// `marks[k][h] = |(G/K)^H|`.
    pub marks: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfinitySummary {
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSummary {
    pub coefficients: Vec<i64>,
    pub characters: Vec<i64>,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub name: String,
    pub pass: bool,
    /// `None` when the residual is unbounded.
    pub residual: Option<f64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrataRow {
    pub label: String,
    pub fixed_dim: usize,
    pub chi_x: i64,
    pub chi_plus1: i64,
    pub chi_minus1: i64,
    pub chi_plus2: i64,
    pub chi_minus2: i64,
    pub alternating_sum: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroRow {
    pub location: Vec<f64>,
    pub det: f64,
    pub stabilizer: String,
    pub q_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub representative: usize,
    pub size: usize,
    pub stabilizer: String,
    /// Local degree in the stabilizer's ring.
    pub local: String,
    pub induced: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyRow {
    pub location: [f64; 2],
    pub derivative: f64,
    pub plus: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexSummary {
    pub local: ElementSummary,
    pub strata: ElementSummary,
    pub per_class: Vec<StrataRow>,
    pub zeros: Vec<ZeroRow>,
    pub orbits: Vec<OrbitRow>,
    pub loops: usize,
    pub tangencies: Vec<TangencyRow>,
    pub checks: Vec<CheckRow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundRow {
    pub label: String,
    pub value: i64,
    /// Decimal string: counts can exceed the JSON integer range.
    pub bound: String,
    pub subset: Vec<usize>,
    pub restricted_degree: usize,
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussRow {
    pub label: String,
    pub fixed_dim: usize,
    pub direct: i64,
    pub strata: i64,
    pub euler: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature_integral: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussSummary {
    pub per_class: Vec<GaussRow>,
    pub degree: ElementSummary,
    pub checks: Vec<CheckRow>,
}

/// Integers that must not move under refinement or perturbation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub index: Vec<i64>,
    pub strata: Vec<StrataRow>,
    pub zeros: usize,
    pub tangencies: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<Fingerprint>,
    pub matches: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilitySummary {
    pub pass: bool,
    pub seed: u64,
    pub base: Fingerprint,
    pub variants: Vec<Variant>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refusal {
    pub stage: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<String>,
    pub message: String,
}
