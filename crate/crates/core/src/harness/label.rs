use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::problem::{ProblemInstance, FORMAT_VERSION};
use crate::cad::{cell_count, CadResult, Limits, VariableOrdering};
use crate::error::HarnessError;
use crate::exec::{self, ExecMode};
use crate::features::{extract_case_a, extract_case_b};
use crate::groebner::{precondition, MonomialOrder};
use crate::heuristics::{brown_order, ndrr_order, sotd_order, tnoi, Heuristic, HeuristicVerdict};
use crate::poly::PolySet;

/// Serializable form of [`Limits`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimitsSpec {
    pub cell_cap: u64,
    pub time_cap_secs: Option<f64>,
}

impl Default for LimitsSpec {
    fn default() -> Self {
        let d = Limits::default();
        LimitsSpec {
            cell_cap: d.cell_cap,
            time_cap_secs: d.time_cap.map(|t| t.as_secs_f64()),
        }
    }
}

impl LimitsSpec {
    pub fn to_limits(&self) -> Limits {
        Limits {
            cell_cap: self.cell_cap,
            time_cap: self.time_cap_secs.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuarantineEntry {
    pub id: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingRun {
    pub ordering: VariableOrdering,
    pub result: CadResult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicPick {
    pub heuristic: Heuristic,
    /// `None` when the heuristic could not score any ordering.
    pub ordering: Option<VariableOrdering>,
    pub correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelRecordA {
    pub id: String,
    pub runs: Vec<OrderingRun>,
    pub min_cells: Option<u64>,
    pub optimal: Vec<VariableOrdering>,
    /// Brown, sotd, ndrr in that order.
    pub picks: Vec<HeuristicPick>,
    /// Set when no ordering completed.
    pub excluded: bool,
    pub features: Vec<f64>,
}

impl LabelRecordA {
    pub fn pick(&self, h: Heuristic) -> &HeuristicPick {
        self.picks.iter().find(|p| p.heuristic == h).expect("all heuristics recorded")
    }

    pub fn correct(&self, h: Heuristic) -> bool {
        self.pick(h).correct
    }

    pub fn cells_for(&self, o: &VariableOrdering) -> Option<u64> {
        self.runs
            .iter()
            .find(|r| &r.ordering == o)
            .and_then(|r| r.result.cell_count)
    }

    pub fn all_completed(&self) -> bool {
        self.runs.iter().all(|r| r.result.completed())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelRecordB {
    pub id: String,
    pub before: CadResult,
    pub after: CadResult,
    /// +1 iff the preconditioned set gives strictly fewer cells; `None`
    /// unless both runs completed.
    pub label: Option<i8>,
    pub tnoi_before: usize,
    pub tnoi_after: usize,
    pub tnoi_decision: bool,
    pub basis: Vec<String>,
    pub features: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelFileA {
    pub format_version: u64,
    pub limits: LimitsSpec,
    pub records: Vec<LabelRecordA>,
    pub quarantined: Vec<QuarantineEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelFileB {
    pub format_version: u64,
    pub limits: LimitsSpec,
    pub records: Vec<LabelRecordB>,
    pub quarantined: Vec<QuarantineEntry>,
}

/// The fixed Case B ordering: z eliminated first.
pub fn case_b_ordering() -> VariableOrdering {
    VariableOrdering {
        elimination: vec![2, 1, 0],
    }
}

fn failure_reason(runs: &[(&str, &CadResult)]) -> Option<String> {
    let bad: Vec<String> = runs
        .iter()
        .filter(|(_, r)| !r.completed())
        .map(|(name, r)| format!("{name}:{}", r.status.as_str()))
        .collect();
    (!bad.is_empty()).then(|| bad.join(" "))
}

fn verdict_pick(
    h: Heuristic,
    v: Option<HeuristicVerdict>,
    optimal: &[VariableOrdering],
) -> HeuristicPick {
    let ordering = v.map(|v| v.chosen);
    HeuristicPick {
        heuristic: h,
        correct: ordering.as_ref().is_some_and(|o| optimal.contains(o)),
        ordering,
    }
}

struct PreparedA {
    id: String,
    set: PolySet,
    features: Vec<f64>,
}

/// Runs all six orderings on `E ∪ F` and scores the three heuristics.
pub fn label_case_a(problems: &[ProblemInstance], limits: &LimitsSpec, mode: ExecMode) -> LabelFileA {
    let lim = limits.to_limits();
    let mut quarantined = Vec::new();
    let mut prepared = Vec::new();
    for p in problems {
        let set = p.all_polys().and_then(|s| Ok((extract_case_a(&s)?, s)));
        match set {
            Ok((fv, s)) => prepared.push(PreparedA {
                id: p.id.clone(),
                set: s,
                features: fv.values,
            }),
            Err(e) => quarantined.push(QuarantineEntry {
                id: p.id.clone(),
                reason: format!("invalid: {e}"),
            }),
        }
    }
    let orderings = VariableOrdering::all(3);
    let tasks: Vec<(usize, usize)> = (0..prepared.len())
        .flat_map(|i| (0..orderings.len()).map(move |o| (i, o)))
        .collect();
    let results = exec::map(mode, &tasks, |&(i, o)| cell_count(&prepared[i].set, &orderings[o], &lim));
    let verdicts = exec::map(mode, &prepared, |p| {
        (
            brown_order(&p.set),
            sotd_order(&p.set, &orderings).ok(),
            ndrr_order(&p.set, &orderings).ok(),
        )
    });

    let mut records = Vec::new();
    for (i, p) in prepared.into_iter().enumerate() {
        let chunk = &results[i * orderings.len()..(i + 1) * orderings.len()];
        if let Some(Err(e)) = chunk.iter().find(|r| r.is_err()) {
            quarantined.push(QuarantineEntry {
                id: p.id,
                reason: format!("invalid: {e}"),
            });
            continue;
        }
        let runs: Vec<OrderingRun> = orderings
            .iter()
            .zip(chunk)
            .map(|(o, r)| OrderingRun {
                ordering: o.clone(),
                result: r.clone().expect("checked"),
            })
            .collect();
        let min_cells = runs.iter().filter_map(|r| r.result.cell_count).min();
        let optimal: Vec<VariableOrdering> = runs
            .iter()
            .filter(|r| min_cells.is_some() && r.result.cell_count == min_cells)
            .map(|r| r.ordering.clone())
            .collect();
        let names: Vec<String> = runs.iter().map(|r| elimination_tag(&r.ordering)).collect();
        let labelled: Vec<(&str, &CadResult)> =
            names.iter().map(|n| n.as_str()).zip(runs.iter().map(|r| &r.result)).collect();
        if let Some(reason) = failure_reason(&labelled) {
            quarantined.push(QuarantineEntry { id: p.id.clone(), reason });
        }
        let (brown, sotd, ndrr) = verdicts[i].clone();
        records.push(LabelRecordA {
            id: p.id,
            excluded: min_cells.is_none(),
            picks: vec![
                verdict_pick(Heuristic::Brown, Some(brown), &optimal),
                verdict_pick(Heuristic::Sotd, sotd, &optimal),
                verdict_pick(Heuristic::Ndrr, ndrr, &optimal),
            ],
            runs,
            min_cells,
            optimal,
            features: p.features,
        });
    }
    quarantined.sort_by(|a, b| a.id.cmp(&b.id));
    LabelFileA {
        format_version: FORMAT_VERSION,
        limits: limits.clone(),
        records,
        quarantined,
    }
}

struct PreparedB {
    id: String,
    before: PolySet,
    after: PolySet,
    basis: Vec<String>,
    features: Vec<f64>,
}

fn prepare_b(p: &ProblemInstance) -> Result<PreparedB, HarnessError> {
    let e = p.equalities()?;
    let f = p.constraints()?;
    if e.len() < 2 {
        return Err(HarnessError::InvalidProblem {
            id: p.id.clone(),
            reason: "fewer than two equalities".into(),
        });
    }
    let pre = precondition(&e, &f, &MonomialOrder::lex_descending(3))?;
    let fv = extract_case_b(&e, &f, &pre.g)?;
    Ok(PreparedB {
        id: p.id.clone(),
        basis: pre.g.generators.to_strings(),
        before: pre.before,
        after: pre.after,
        features: fv.values,
    })
}

/// Runs CAD under the fixed ordering before and after preconditioning.
pub fn label_case_b(problems: &[ProblemInstance], limits: &LimitsSpec, mode: ExecMode) -> LabelFileB {
    let lim = limits.to_limits();
    let ord = case_b_ordering();
    let mut quarantined = Vec::new();
    let mut prepared = Vec::new();
    for (p, r) in problems.iter().zip(exec::map(mode, problems, prepare_b)) {
        match r {
            Ok(x) => prepared.push(x),
            Err(e) => quarantined.push(QuarantineEntry {
                id: p.id.clone(),
                reason: format!("invalid: {e}"),
            }),
        }
    }
    let tasks: Vec<(usize, bool)> = (0..prepared.len())
        .flat_map(|i| [(i, false), (i, true)])
        .collect();
    let results = exec::map(mode, &tasks, |&(i, after)| {
        let s = if after { &prepared[i].after } else { &prepared[i].before };
        cell_count(s, &ord, &lim)
    });
    let mut records = Vec::new();
    for (i, p) in prepared.into_iter().enumerate() {
        let (before, after) = match (&results[2 * i], &results[2 * i + 1]) {
            (Ok(b), Ok(a)) => (b.clone(), a.clone()),
            (Err(e), _) | (_, Err(e)) => {
                quarantined.push(QuarantineEntry {
                    id: p.id,
                    reason: format!("invalid: {e}"),
                });
                continue;
            }
        };
        if let Some(reason) = failure_reason(&[("before", &before), ("after", &after)]) {
            quarantined.push(QuarantineEntry { id: p.id.clone(), reason });
        }
        let label = match (before.cell_count, after.cell_count) {
            (Some(b), Some(a)) => Some(if a < b { 1 } else { -1 }),
            _ => None,
        };
        let (tb, ta) = (tnoi(&p.before), tnoi(&p.after));
        records.push(LabelRecordB {
            id: p.id,
            before,
            after,
            label,
            tnoi_before: tb,
            tnoi_after: ta,
            tnoi_decision: ta < tb,
            basis: p.basis,
            features: p.features,
        });
    }
    quarantined.sort_by(|a, b| a.id.cmp(&b.id));
    LabelFileB {
        format_version: FORMAT_VERSION,
        limits: limits.clone(),
        records,
        quarantined,
    }
}

/// Variable names in elimination order, e.g. `zyx`.
pub fn elimination_tag(o: &VariableOrdering) -> String {
    o.elimination
        .iter()
        .map(|&v| super::generate::VARIABLES[v])
        .collect()
}

fn cells(r: &CadResult) -> String {
    r.cell_count.map(|c| c.to_string()).unwrap_or_default()
}

fn pick_text(p: &HeuristicPick) -> String {
    p.ordering.as_ref().map(elimination_tag).unwrap_or_default()
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String, HarnessError> {
    let bytes = w.into_inner().map_err(|e| HarnessError::Corrupt(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf8"))
}

/// One row per record; column order is fixed.
pub fn results_csv_a(file: &LabelFileA) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let orderings = VariableOrdering::all(3);
    let mut header = vec!["id".to_string()];
    for o in &orderings {
        let t = elimination_tag(o);
        header.push(format!("cells_{t}"));
        header.push(format!("status_{t}"));
    }
    header.extend(
        ["min_cells", "optimal", "brown", "brown_ok", "sotd", "sotd_ok", "ndrr", "ndrr_ok", "excluded"]
            .map(String::from),
    );
    w.write_record(&header)?;
    for r in &file.records {
        let mut row = vec![r.id.clone()];
        for o in &orderings {
            let run = r.runs.iter().find(|x| &x.ordering == o).expect("six runs");
            row.push(cells(&run.result));
            row.push(run.result.status.as_str().into());
        }
        row.push(r.min_cells.map(|c| c.to_string()).unwrap_or_default());
        row.push(r.optimal.iter().map(elimination_tag).collect::<Vec<_>>().join(";"));
        for h in Heuristic::ALL {
            row.push(pick_text(r.pick(h)));
            row.push(r.correct(h).to_string());
        }
        row.push(r.excluded.to_string());
        w.write_record(&row)?;
    }
    finish(w)
}

pub fn results_csv_b(file: &LabelFileB) -> Result<String, HarnessError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "id",
        "cells_before",
        "status_before",
        "cells_after",
        "status_after",
        "label",
        "tnoi_before",
        "tnoi_after",
        "tnoi_decision",
    ])?;
    for r in &file.records {
        w.write_record([
            r.id.clone(),
            cells(&r.before),
            r.before.status.as_str().into(),
            cells(&r.after),
            r.after.status.as_str().into(),
            r.label.map(|l| l.to_string()).unwrap_or_default(),
            r.tnoi_before.to_string(),
            r.tnoi_after.to_string(),
            r.tnoi_decision.to_string(),
        ])?;
    }
    finish(w)
}
