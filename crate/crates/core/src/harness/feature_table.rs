use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::label::{LabelFileA, LabelFileB, QuarantineEntry};
use super::problem::{ProblemInstance, FORMAT_VERSION};
use crate::error::HarnessError;
use crate::features::{extract_case_a, extract_case_b};
use crate::groebner::{buchberger, MonomialOrder};
use crate::heuristics::Heuristic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseKind {
    A,
    B,
}

pub const PRECONDITION_TARGET: &str = "precondition";

/// Feature rows keyed by problem id, with optional ±1 targets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureTable {
    pub format_version: u64,
    pub case: CaseKind,
    pub ids: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub targets: BTreeMap<String, Vec<Option<i8>>>,
}

impl FeatureTable {
    /// Rows and labels for which `target` is known.
    pub fn labelled(&self, target: &str) -> Result<(Vec<String>, Vec<Vec<f64>>, Vec<i8>), HarnessError> {
        let t = self.targets.get(target).ok_or_else(|| {
            HarnessError::Corrupt(format!(
                "no target `{target}`; available: {}",
                self.targets.keys().cloned().collect::<Vec<_>>().join(", ")
            ))
        })?;
        let mut out = (Vec::new(), Vec::new(), Vec::new());
        for (i, y) in t.iter().enumerate() {
            if let Some(y) = y {
                out.0.push(self.ids[i].clone());
                out.1.push(self.rows[i].clone());
                out.2.push(*y);
            }
        }
        Ok(out)
    }

    /// The single target of a Case B table, or the named one.
    pub fn default_target(&self) -> Option<&str> {
        match self.case {
            CaseKind::B => Some(PRECONDITION_TARGET),
            CaseKind::A => None,
        }
    }
}

fn row_for(p: &ProblemInstance, case: CaseKind) -> Result<Vec<f64>, HarnessError> {
    match case {
        CaseKind::A => Ok(extract_case_a(&p.all_polys()?)?.values),
        CaseKind::B => {
            let e = p.equalities()?;
            let g = buchberger(&e, &MonomialOrder::lex_descending(e.nvars()))?;
            Ok(extract_case_b(&e, &p.constraints()?, &g)?.values)
        }
    }
}

/// Extracts features for every problem; problems that fail extraction are
/// returned separately.
pub fn build_feature_table(
    problems: &[ProblemInstance],
    case: CaseKind,
    labels_a: Option<&LabelFileA>,
    labels_b: Option<&LabelFileB>,
) -> (FeatureTable, Vec<QuarantineEntry>) {
    let mut table = FeatureTable {
        format_version: FORMAT_VERSION,
        case,
        ids: Vec::new(),
        rows: Vec::new(),
        targets: BTreeMap::new(),
    };
    let mut bad = Vec::new();
    for p in problems {
        match row_for(p, case) {
            Ok(r) => {
                table.ids.push(p.id.clone());
                table.rows.push(r);
            }
            Err(e) => bad.push(QuarantineEntry {
                id: p.id.clone(),
                reason: format!("invalid: {e}"),
            }),
        }
    }
    if let Some(la) = labels_a {
        let by_id: BTreeMap<&str, _> = la
            .records
            .iter()
            .filter(|r| !r.excluded)
            .map(|r| (r.id.as_str(), r))
            .collect();
        for h in Heuristic::ALL {
            let col = table
                .ids
                .iter()
                .map(|id| by_id.get(id.as_str()).map(|r| if r.correct(h) { 1 } else { -1 }))
                .collect();
            table.targets.insert(h.name().to_string(), col);
        }
    }
    if let Some(lb) = labels_b {
        let by_id: BTreeMap<&str, Option<i8>> =
            lb.records.iter().map(|r| (r.id.as_str(), r.label)).collect();
        let col = table
            .ids
            .iter()
            .map(|id| by_id.get(id.as_str()).copied().flatten())
            .collect();
        table.targets.insert(PRECONDITION_TARGET.to_string(), col);
    }
    (table, bad)
}
