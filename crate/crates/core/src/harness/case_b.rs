use std::collections::BTreeMap;
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::label::{LabelFileB, LabelRecordB};
use super::table::{num, pct, Table};
use crate::error::{FeatureError, HarnessError};
use crate::exec::ExecMode;
use crate::features::{fit_standardization, FeatureMode, CASE_B_LEN};
use crate::modelsel::{
    cfs_filter_select, grid_search, stratified_folds, wrapper_select, ConfusionCounts,
    Objective,
};
use crate::svm::{default_cost_factor, train, SvmModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    All,
    Before,
    After,
    Filter,
    Wrapper,
}

impl SelectionMode {
    pub fn name(self) -> &'static str {
        match self {
            SelectionMode::All => "all",
            SelectionMode::Before => "before",
            SelectionMode::After => "after",
            SelectionMode::Filter => "filter",
            SelectionMode::Wrapper => "wrapper",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::All, Self::Before, Self::After, Self::Filter, Self::Wrapper]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBConfig {
    pub test_fraction: f64,
    pub folds: usize,
    pub grid: Vec<(f64, f64)>,
    pub wrapper_pairs: Vec<(f64, f64)>,
    pub modes: Vec<SelectionMode>,
    pub repeats: usize,
    pub seed: u64,
}

impl CaseBConfig {
    pub fn new(grid: Vec<(f64, f64)>, modes: Vec<SelectionMode>, repeats: usize, seed: u64) -> Self {
        CaseBConfig {
            test_fraction: 0.2,
            folds: 5,
            grid,
            wrapper_pairs: crate::modelsel::wrapper_pairs(),
            modes,
            repeats,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepeatResult {
    pub repeat: usize,
    pub columns: Vec<usize>,
    pub c: f64,
    pub gamma: f64,
    pub cv_mcc: f64,
    pub confusion: ConfusionCounts,
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineResult {
    pub repeat: usize,
    pub majority_class: i8,
    pub majority_accuracy: f64,
    pub tnoi_confusion: ConfusionCounts,
    pub tnoi_accuracy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Distribution {
    pub mean: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl Distribution {
    pub fn of(v: &[f64]) -> Distribution {
        let mut s = v.to_vec();
        s.sort_by(f64::total_cmp);
        let n = s.len();
        let median = if n % 2 == 1 { s[n / 2] } else { (s[n / 2 - 1] + s[n / 2]) / 2.0 };
        Distribution {
            mean: s.iter().sum::<f64>() / n as f64,
            min: s[0],
            median,
            max: s[n - 1],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeResult {
    pub mode: SelectionMode,
    pub repeats: Vec<RepeatResult>,
    pub accuracy: Distribution,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseBReport {
    pub labeled: usize,
    pub unusable: usize,
    pub usable: usize,
    pub positives: usize,
    pub negatives: usize,
    pub train: usize,
    pub test: usize,
    pub baselines: Vec<BaselineResult>,
    pub majority: Distribution,
    pub tnoi: Distribution,
    pub modes: Vec<ModeResult>,
}

impl CaseBReport {
    pub fn mode(&self, m: SelectionMode) -> Option<&ModeResult> {
        self.modes.iter().find(|r| r.mode == m)
    }
}

/// Holds out `frac` of each class, rounded, after a seeded shuffle.
pub fn stratified_split(labels: &[i8], frac: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>), HarnessError> {
    if !(frac > 0.0 && frac < 1.0) {
        return Err(HarnessError::DegenerateSplit("test fraction must lie in (0, 1)".into()));
    }
    let mut classes: BTreeMap<i8, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut tr, mut te) = (Vec::new(), Vec::new());
    for (_, mut m) in classes {
        m.shuffle(&mut rng);
        let k = (m.len() as f64 * frac).round() as usize;
        te.extend_from_slice(&m[..k]);
        tr.extend_from_slice(&m[k..]);
    }
    tr.sort_unstable();
    te.sort_unstable();
    if te.is_empty() || tr.len() < 2 {
        return Err(HarnessError::DegenerateSplit(format!(
            "{} labeled problems cannot fill a train/test split",
            labels.len()
        )));
    }
    Ok((tr, te))
}

fn accuracy(c: &ConfusionCounts) -> f64 {
    (c.tp + c.tn) as f64 / c.total() as f64
}

/// Everything needed to train a classifier on one split.
pub struct Trained {
    pub model: SvmModel,
    pub columns: Vec<usize>,
    pub cv_mcc: f64,
}

/// Selects columns per `mode`, standardizes on the training rows, grid
/// searches with stratified folds on MCC, and fits the final model.
pub fn train_mode(
    rows: &[Vec<f64>],
    labels: &[i8],
    mode: SelectionMode,
    cfg: &CaseBConfig,
    seed: u64,
    exec: ExecMode,
) -> Result<Trained, HarnessError> {
    let folds = stratified_folds(labels, cfg.folds, seed)?;
    let full = fit_standardization(rows)?;
    let width = full.width();
    if matches!(mode, SelectionMode::Before | SelectionMode::After) && width != CASE_B_LEN {
        return Err(FeatureError::SchemaMismatch {
            expected: CASE_B_LEN,
            got: width,
        }
        .into());
    }
    let columns = match mode {
        SelectionMode::All => (0..width).collect(),
        SelectionMode::Before => FeatureMode::Before.columns(),
        SelectionMode::After => FeatureMode::After.columns(),
        SelectionMode::Filter => cfs_filter_select(rows, labels)?,
        SelectionMode::Wrapper => {
            let z: Vec<Vec<f64>> = rows.iter().map(|r| full.apply_row(r)).collect::<Result<_, _>>()?;
            wrapper_select(&z, labels, &cfg.wrapper_pairs, &folds, exec)?.subset
        }
    };
    let stats = full.select(&columns);
    let x: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| stats.apply_row(&columns.iter().map(|&c| r[c]).collect::<Vec<_>>()))
        .collect::<Result<_, _>>()?;
    let g = grid_search(&x, labels, &cfg.grid, &folds, Objective::Mcc, exec)?;
    let mut model = train(&x, labels, g.best_gamma, g.best_c, default_cost_factor(labels))?;
    model.stats = Some(stats);
    model.feature_mask = Some(columns.clone());
    Ok(Trained {
        model,
        columns,
        cv_mcc: g.cv_score,
    })
}

/// Repeated stratified 80/20 evaluation of each feature mode against the
/// majority-class and TNoI baselines.
pub fn run_case_b(file: &LabelFileB, cfg: &CaseBConfig, exec: ExecMode) -> Result<CaseBReport, HarnessError> {
    if cfg.repeats == 0 || cfg.modes.is_empty() {
        return Err(HarnessError::DegenerateSplit("need at least one repeat and one mode".into()));
    }
    let usable: Vec<&LabelRecordB> = file.records.iter().filter(|r| r.label.is_some()).collect();
    if let Some(r) = usable.iter().find(|r| r.features.len() != CASE_B_LEN) {
        return Err(HarnessError::InvalidProblem {
            id: r.id.clone(),
            reason: format!("{} features", r.features.len()),
        });
    }
    let labels: Vec<i8> = usable.iter().map(|r| r.label.expect("usable")).collect();
    let positives = labels.iter().filter(|&&l| l > 0).count();

    let mut baselines = Vec::new();
    let mut per_mode: Vec<Vec<RepeatResult>> = vec![Vec::new(); cfg.modes.len()];
    let (mut ntr, mut nte) = (0, 0);
    for rep in 0..cfg.repeats {
        let seed = cfg.seed.wrapping_add(rep as u64);
        let (tr, te) = stratified_split(&labels, cfg.test_fraction, seed)?;
        (ntr, nte) = (tr.len(), te.len());
        let xtr: Vec<Vec<f64>> = tr.iter().map(|&i| usable[i].features.clone()).collect();
        let ytr: Vec<i8> = tr.iter().map(|&i| labels[i]).collect();
        let yte: Vec<i8> = te.iter().map(|&i| labels[i]).collect();

        let pos = ytr.iter().filter(|&&y| y > 0).count();
        let majority: i8 = if 2 * pos >= ytr.len() { 1 } else { -1 };
        let maj = ConfusionCounts::from_predictions(&yte, &vec![majority; yte.len()]);
        let tn_pred: Vec<i8> = te
            .iter()
            .map(|&i| if usable[i].tnoi_decision { 1 } else { -1 })
            .collect();
        let tn = ConfusionCounts::from_predictions(&yte, &tn_pred);
        baselines.push(BaselineResult {
            repeat: rep,
            majority_class: majority,
            majority_accuracy: accuracy(&maj),
            tnoi_accuracy: accuracy(&tn),
            tnoi_confusion: tn,
        });

        for (k, &mode) in cfg.modes.iter().enumerate() {
            let t = train_mode(&xtr, &ytr, mode, cfg, seed, exec)?;
            let pred: Vec<i8> = te
                .iter()
                .map(|&i| t.model.decision_value_raw(&usable[i].features).map(|d| if d >= 0.0 { 1 } else { -1 }))
                .collect::<Result<_, _>>()?;
            let confusion = ConfusionCounts::from_predictions(&yte, &pred);
            per_mode[k].push(RepeatResult {
                repeat: rep,
                columns: t.columns,
                c: t.model.c,
                gamma: t.model.gamma,
                cv_mcc: t.cv_mcc,
                accuracy: accuracy(&confusion),
                confusion,
            });
        }
    }
    let dist = |f: &dyn Fn(&BaselineResult) -> f64| Distribution::of(&baselines.iter().map(f).collect::<Vec<_>>());
    Ok(CaseBReport {
        labeled: file.records.len(),
        unusable: file.records.len() - usable.len(),
        usable: usable.len(),
        positives,
        negatives: usable.len() - positives,
        train: ntr,
        test: nte,
        majority: dist(&|b| b.majority_accuracy),
        tnoi: dist(&|b| b.tnoi_accuracy),
        baselines,
        modes: cfg
            .modes
            .iter()
            .zip(per_mode)
            .map(|(&mode, repeats)| ModeResult {
                mode,
                accuracy: Distribution::of(&repeats.iter().map(|r| r.accuracy).collect::<Vec<_>>()),
                repeats,
            })
            .collect(),
    })
}

impl CaseBReport {
    pub fn reconcile(&self) -> Result<(), String> {
        let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        check(self.usable + self.unusable == self.labeled, "usable + unusable = labeled")?;
        check(self.positives + self.negatives == self.usable, "class counts")?;
        check(self.train + self.test == self.usable, "split sizes")?;
        for b in &self.baselines {
            check(b.tnoi_confusion.total() as usize == self.test, "baseline confusion total")?;
            check((b.tnoi_accuracy - accuracy(&b.tnoi_confusion)).abs() < 1e-12, "baseline accuracy")?;
        }
        for m in &self.modes {
            check(m.repeats.len() == self.baselines.len(), "one result per repeat")?;
            for r in &m.repeats {
                check(r.confusion.total() as usize == self.test, "confusion counts sum to test size")?;
                check((r.accuracy - accuracy(&r.confusion)).abs() < 1e-12, "accuracy matches confusion")?;
                check(!r.columns.is_empty() && r.columns.iter().all(|&c| c < CASE_B_LEN), "columns")?;
            }
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "Preconditioning report").unwrap();
        writeln!(
            out,
            "labeled {}  unusable {}  usable {} (+1: {}, -1: {})  train {}  test {}  repeats {}\n",
            self.labeled,
            self.unusable,
            self.usable,
            self.positives,
            self.negatives,
            self.train,
            self.test,
            self.baselines.len()
        )
        .unwrap();

        let mut t = Table::new("Accuracy", &["predictor", "mean", "min", "median", "max"]);
        let mut line = |name: &str, d: &Distribution| {
            t.row(vec![name.to_string(), pct(d.mean), pct(d.min), pct(d.median), pct(d.max)]);
        };
        line("always majority", &self.majority);
        line("TNoI", &self.tnoi);
        for m in &self.modes {
            line(&format!("SVM {}", m.mode.name()), &m.accuracy);
        }
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new(
            "Per repeat",
            &["predictor", "repeat", "features", "C", "gamma", "CV MCC", "TP", "TN", "FP", "FN", "correct", "accuracy"],
        );
        for b in &self.baselines {
            let k = &b.tnoi_confusion;
            t.row(vec![
                "TNoI".into(),
                b.repeat.to_string(),
                "-".into(),
                "-".into(),
                "-".into(),
                "-".into(),
                k.tp.to_string(),
                k.tn.to_string(),
                k.fp.to_string(),
                k.fn_.to_string(),
                (k.tp + k.tn).to_string(),
                pct(b.tnoi_accuracy),
            ]);
        }
        for m in &self.modes {
            for r in &m.repeats {
                let k = &r.confusion;
                t.row(vec![
                    format!("SVM {}", m.mode.name()),
                    r.repeat.to_string(),
                    r.columns.len().to_string(),
                    format!("{}", r.c),
                    format!("{}", r.gamma),
                    num(r.cv_mcc),
                    k.tp.to_string(),
                    k.tn.to_string(),
                    k.fp.to_string(),
                    k.fn_.to_string(),
                    (k.tp + k.tn).to_string(),
                    pct(r.accuracy),
                ]);
            }
        }
        out.push_str(&t.render());

        let selected: Vec<&ModeResult> = self
            .modes
            .iter()
            .filter(|m| matches!(m.mode, SelectionMode::Filter | SelectionMode::Wrapper))
            .collect();
        if !selected.is_empty() {
            out.push('\n');
            let mut t = Table::new("Selected features (1-based)", &["method", "repeat", "features"]);
            for m in selected {
                for r in &m.repeats {
                    let cols: Vec<String> = r.columns.iter().map(|c| (c + 1).to_string()).collect();
                    t.row(vec![m.mode.name().into(), r.repeat.to_string(), cols.join(",")]);
                }
            }
            out.push_str(&t.render());
        }
        out
    }
}
