//! Serialisable report shapes. Big lengths are carried as decimal strings.

use crate::growth::{GrowthType, Lambda, LengthSequence, Provenance};
use crate::invariants::CheckResult;
use crate::lamination::{LaminationPoset, PosetReport};
use crate::sweep::SweepReport;
use crate::word::Alphabet;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaJson {
    pub approx: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<Vec<String>>,
}

impl LambdaJson {
    pub fn from_lambda(l: &Lambda) -> Self {
        LambdaJson {
            approx: l.approx,
            minpoly: l
                .algebraic
                .as_ref()
                .map(|a| a.poly.coeffs().iter().map(|c| c.to_string()).collect()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthTypeJson {
    pub lambda: LambdaJson,
    pub m: u32,
    pub provenance: String,
    pub confidence: f64,
}

impl GrowthTypeJson {
    pub fn from_growth(g: &GrowthType) -> Self {
        GrowthTypeJson {
            lambda: LambdaJson::from_lambda(&g.lambda),
            m: g.m,
            provenance: match g.provenance {
                Provenance::Exact => "exact".into(),
                Provenance::Fitted => "fitted".into(),
            },
            confidence: g.confidence,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthReportJson {
    pub subject: String,
    pub class: bool,
    pub lengths: Vec<String>,
    pub truncated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthTypeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn lengths_as_strings(seq: &LengthSequence) -> Vec<String> {
    seq.values.iter().map(|v| v.to_string()).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

impl CheckJson {
    pub fn from_check(c: &CheckResult) -> Self {
        CheckJson {
            name: c.name.clone(),
            lhs: c.lhs,
            rhs: c.rhs,
            pass: c.pass,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasuredTypeJson {
    pub lambda: LambdaJson,
    pub m: u32,
    pub provenance: String,
    pub witness: String,
    pub classes: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasuredJson {
    #[serde(rename = "ePrime")]
    pub e_prime: usize,
    pub d: u32,
    #[serde(rename = "fixRankLower", skip_serializing_if = "Option::is_none")]
    pub fix_rank_lower: Option<u32>,
    #[serde(rename = "kLower", skip_serializing_if = "Option::is_none")]
    pub k_lower: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepJson {
    pub n: u32,
    pub max_len: usize,
    pub classes: usize,
    pub measured: MeasuredJson,
    pub types: Vec<MeasuredTypeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_witness: Option<String>,
    pub polynomial_classes: usize,
    pub exponential_classes: usize,
    pub inconclusive: usize,
    pub checks: Vec<CheckJson>,
}

pub fn sweep_json(report: &SweepReport, names: &Alphabet) -> SweepJson {
    SweepJson {
        n: report.rank,
        max_len: report.max_len,
        classes: report.classes,
        measured: MeasuredJson {
            e_prime: report.e_prime(),
            d: report.d,
            fix_rank_lower: report.fix_rank_lower,
            k_lower: report.k_lower,
        },
        types: report
            .exponential_types
            .iter()
            .map(|t| MeasuredTypeJson {
                lambda: LambdaJson::from_lambda(&t.growth.lambda),
                m: t.growth.m,
                provenance: match t.growth.provenance {
                    Provenance::Exact => "exact".into(),
                    Provenance::Fitted => "fitted".into(),
                },
                witness: t.witness.display(names),
                classes: t.classes,
            })
            .collect(),
        d_witness: report.d_witness.as_ref().map(|w| w.display(names)),
        polynomial_classes: report.polynomial_classes,
        exponential_classes: report.exponential_classes,
        inconclusive: report.inconclusive,
        checks: report.checks.iter().map(CheckJson::from_check).collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetNodeJson {
    pub label: String,
    pub lambda: LambdaJson,
    pub growth: GrowthTypeJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetJson {
    pub nodes: Vec<PosetNodeJson>,
    pub edges: Vec<[String; 2]>,
    pub e: usize,
    pub s: usize,
    #[serde(rename = "ePrime")]
    pub e_prime: usize,
    pub m_le_s: bool,
}

pub fn poset_json(poset: &LaminationPoset, report: &PosetReport) -> PosetJson {
    PosetJson {
        nodes: poset
            .nodes()
            .iter()
            .zip(&report.types)
            .map(|(n, t)| PosetNodeJson {
                label: n.label.clone(),
                lambda: LambdaJson::from_lambda(&n.lambda),
                growth: GrowthTypeJson::from_growth(t),
            })
            .collect(),
        edges: poset
            .edges()
            .iter()
            .map(|&(a, b)| {
                [
                    poset.nodes()[a].label.clone(),
                    poset.nodes()[b].label.clone(),
                ]
            })
            .collect(),
        e: report.e,
        s: report.s,
        e_prime: report.e_prime,
        m_le_s: crate::lamination::check_m_le_s(report),
    }
}

/// Sidecar of expected invariants written next to constructed automorphisms.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpectedJson {
    pub family: String,
    pub rank: u32,
    #[serde(rename = "ePrimeExpected", skip_serializing_if = "Option::is_none")]
    pub e_prime: Option<u32>,
    #[serde(rename = "dExpected", skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(rename = "fixRankExpected", skip_serializing_if = "Option::is_none")]
    pub fix_rank: Option<u32>,
    #[serde(rename = "fixedWitnesses")]
    pub fixed_witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poset: Option<String>,
}

pub fn expected_json(c: &crate::families::Construction) -> ExpectedJson {
    ExpectedJson {
        family: c.name.clone(),
        rank: c.rank(),
        e_prime: c.expected.e_prime,
        d: c.expected.d,
        fix_rank: c.expected.fix_rank,
        fixed_witnesses: c
            .expected
            .fixed_witnesses
            .iter()
            .map(|w| w.display(&c.named.names))
            .collect(),
        poset: c.expected.poset.as_ref().map(|p| p.print()),
    }
}
