//! The JSON spectrum report. Key order is fixed by struct declaration
//! order and arrays are ordered by element encoding, so reports diff
//! cleanly and golden tests stay stable.

use serde::Serialize;

use pnfield_core::{ActionSpec, FieldSpec, PnFailure, PnVerdict};

#[derive(Serialize)]
pub struct FieldDesc {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
    pub gamma: u64,
}

#[derive(Serialize)]
pub struct ActionDesc {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<u64>>,
}

#[derive(Serialize)]
pub struct SpectrumRow {
    pub alpha: u64,
    pub counts: Vec<u64>,
}

#[derive(Serialize)]
pub struct SpectrumReport {
    pub field: FieldDesc,
    pub action: ActionDesc,
    pub target_group: String,
    pub target_ratio: Option<u64>,
    pub spectrum: Vec<SpectrumRow>,
    pub pn: bool,
    pub uniformity: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

pub fn failure_reason(failure: &PnFailure) -> String {
    match failure {
        PnFailure::Divisibility { carrier, target } => format!(
            "divisibility: carrier size {carrier} is not a multiple of the target order {target}"
        ),
        PnFailure::Unbalanced {
            alpha_label,
            beta_label,
            count,
            expected,
            ..
        } => format!(
            "unbalanced: N(alpha={alpha_label}, beta={beta_label}) = {count}, expected {expected}"
        ),
    }
}

/// Assembles the report; spectrum rows are sorted by the acting element's
/// encoding, and count columns already follow the target group's label
/// order (labels ascend with group index in every built-in group).
pub fn build_report(
    field: &FieldSpec,
    action_desc: ActionDesc,
    target_group: &str,
    verdict: &PnVerdict,
    action: &ActionSpec,
) -> SpectrumReport {
    let mut rows: Vec<SpectrumRow> = verdict
        .spectrum
        .rows()
        .map(|(alpha, counts)| SpectrumRow {
            alpha: action.group().label(alpha),
            counts: counts.iter().map(|&c| c as u64).collect(),
        })
        .collect();
    rows.sort_by_key(|r| r.alpha);
    SpectrumReport {
        field: FieldDesc {
            p: field.p(),
            m: field.m(),
            modulus: field.modulus(),
            gamma: field.gamma(),
        },
        action: action_desc,
        target_group: target_group.to_string(),
        target_ratio: verdict.spectrum.target_ratio(),
        spectrum: rows,
        pn: verdict.pn,
        uniformity: verdict.spectrum.max_count() as u64,
        reason: verdict.failure.as_ref().map(failure_reason),
    }
}
