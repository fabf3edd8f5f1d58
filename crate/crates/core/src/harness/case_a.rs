use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::label::{LabelFileA, LabelRecordA};
use super::table::{num, pct, yn, Table};
use crate::error::HarnessError;
use crate::exec::ExecMode;
use crate::features::fit_standardization;
use crate::heuristics::Heuristic;
use crate::modelsel::{holdout_search, metrics, ConfusionCounts, Objective};
use crate::svm::{default_cost_factor, train, SvmModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseAConfig {
    /// Train, validation, test fractions.
    pub split: (f64, f64, f64),
    pub grid: Vec<(f64, f64)>,
    pub seed: u64,
}

impl CaseAConfig {
    pub fn new(grid: Vec<(f64, f64)>, seed: u64) -> Self {
        CaseAConfig {
            split: (0.5, 0.25, 0.25),
            grid,
            seed,
        }
    }
}

/// Which fixed heuristics were optimal, in sotd, ndrr, Brown column order.
pub type Pattern = [bool; 3];

/// The 14 mutually exclusive (ML, sotd, ndrr, Brown) outcomes; the last row
/// covers problems where no heuristic was optimal.
pub const CASES: [(bool, Pattern); 14] = [
    (true, [true, true, true]),
    (true, [true, true, false]),
    (false, [true, true, false]),
    (true, [true, false, true]),
    (false, [true, false, true]),
    (true, [false, true, true]),
    (false, [false, true, true]),
    (true, [true, false, false]),
    (false, [true, false, false]),
    (true, [false, true, false]),
    (false, [false, true, false]),
    (true, [false, false, true]),
    (false, [false, false, true]),
    (false, [false, false, false]),
];

const COLUMN_ORDER: [Heuristic; 3] = [Heuristic::Sotd, Heuristic::Ndrr, Heuristic::Brown];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifierSummary {
    pub heuristic: Heuristic,
    pub c: f64,
    pub gamma: f64,
    pub validation_mcc: f64,
    pub test_confusion: ConfusionCounts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub id: String,
    pub ml_pick: Heuristic,
    pub margins: [f64; 3],
    /// Correctness of sotd, ndrr, Brown.
    pub pattern: Pattern,
    pub ml_correct: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SavingsRow {
    pub name: String,
    pub problems: usize,
    pub mean: f64,
    pub median: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseAReport {
    pub labeled: usize,
    pub excluded: usize,
    pub train: usize,
    pub validation: usize,
    pub test: usize,
    pub classifiers: Vec<ClassifierSummary>,
    pub outcomes: Vec<TestOutcome>,
    /// Counts per entry of [`CASES`].
    pub breakdown: Vec<usize>,
    /// Test-set successes of ML, sotd, ndrr, Brown.
    pub totals: [usize; 4],
    /// Whole-dataset successes of sotd, ndrr, Brown.
    pub dataset_totals: [usize; 3],
    /// Test problems with exactly m optimal heuristics, m = 0..=3.
    pub optimal_multiplicity: [usize; 4],
    pub random_baseline: f64,
    pub ml_success: f64,
    /// ML, sotd, ndrr, Brown.
    pub savings: Vec<SavingsRow>,
    /// Test problems with at least one failed ordering, then completed picks
    /// for ML, sotd, ndrr, Brown.
    pub timeout_problems: usize,
    pub timeout_avoided: [usize; 4],
}

fn split3(n: usize, f: (f64, f64, f64), seed: u64) -> Result<[Vec<usize>; 3], HarnessError> {
    let sum = f.0 + f.1 + f.2;
    if !(f.0 > 0.0 && f.1 > 0.0 && f.2 > 0.0 && (sum - 1.0).abs() < 1e-9) {
        return Err(HarnessError::DegenerateSplit(
            "fractions must be positive and sum to 1".into(),
        ));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let a = (n as f64 * f.0).round() as usize;
    let b = ((n as f64 * f.1).round() as usize).min(n - a.min(n));
    if a < 2 || b < 1 || n < a + b + 1 {
        return Err(HarnessError::DegenerateSplit(format!(
            "{n} problems cannot fill train/validation/test"
        )));
    }
    let mut parts = [idx[..a].to_vec(), idx[a..a + b].to_vec(), idx[a + b..].to_vec()];
    for p in &mut parts {
        p.sort_unstable();
    }
    Ok(parts)
}

fn labels_for(recs: &[&LabelRecordA], h: Heuristic) -> Vec<i8> {
    recs.iter().map(|r| if r.correct(h) { 1 } else { -1 }).collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// Chooses the heuristic with the largest decision value; ties keep the
/// earlier heuristic in Brown, sotd, ndrr order.
pub fn max_margin(margins: &[(Heuristic, f64)]) -> Heuristic {
    let mut best = margins[0];
    for &(h, m) in &margins[1..] {
        if m > best.1 {
            best = (h, m);
        }
    }
    best.0
}

/// `sum_m m * count_m / 3`, over the number of problems.
pub fn random_baseline(multiplicity: &[usize; 4]) -> f64 {
    let n: usize = multiplicity.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let hits: f64 = multiplicity
        .iter()
        .enumerate()
        .map(|(m, &c)| m as f64 * c as f64 / 3.0)
        .sum();
    hits / n as f64
}

pub struct CaseAModels {
    pub models: Vec<(Heuristic, SvmModel)>,
}

/// Trains one classifier per heuristic and evaluates max-margin selection.
pub fn run_case_a(
    file: &LabelFileA,
    cfg: &CaseAConfig,
    mode: ExecMode,
) -> Result<(CaseAReport, CaseAModels), HarnessError> {
    let usable: Vec<&LabelRecordA> = file.records.iter().filter(|r| !r.excluded).collect();
    let [tr, va, te] = split3(usable.len(), cfg.split, cfg.seed)?;
    let pick = |ix: &[usize]| -> Vec<&LabelRecordA> { ix.iter().map(|&i| usable[i]).collect() };
    let (rtr, rva, rte) = (pick(&tr), pick(&va), pick(&te));

    let raw = |rs: &[&LabelRecordA]| -> Vec<Vec<f64>> { rs.iter().map(|r| r.features.clone()).collect() };
    let stats = fit_standardization(&raw(&rtr))?;
    let std_rows = |rs: &[&LabelRecordA]| -> Result<Vec<Vec<f64>>, HarnessError> {
        rs.iter()
            .map(|r| stats.apply_row(&r.features).map_err(HarnessError::from))
            .collect()
    };
    let (xtr, xva, xte) = (std_rows(&rtr)?, std_rows(&rva)?, std_rows(&rte)?);

    let mut classifiers = Vec::new();
    let mut models = Vec::new();
    for h in Heuristic::ALL {
        let (ytr, yva) = (labels_for(&rtr, h), labels_for(&rva, h));
        let g = holdout_search((&xtr, &ytr), (&xva, &yva), &cfg.grid, Objective::Mcc, mode)?;
        let mut model = train(&xtr, &ytr, g.best_gamma, g.best_c, default_cost_factor(&ytr))?;
        model.stats = Some(stats.clone());
        let yte = labels_for(&rte, h);
        let pred: Vec<i8> = xte.iter().map(|x| model.classify(x)).collect();
        classifiers.push(ClassifierSummary {
            heuristic: h,
            c: g.best_c,
            gamma: g.best_gamma,
            validation_mcc: g.cv_score,
            test_confusion: ConfusionCounts::from_predictions(&yte, &pred),
        });
        models.push((h, model));
    }

    let mut outcomes = Vec::new();
    for (r, x) in rte.iter().zip(&xte) {
        let margins: Vec<(Heuristic, f64)> =
            models.iter().map(|(h, m)| (*h, m.decision_value(x))).collect();
        let ml = max_margin(&margins);
        outcomes.push(TestOutcome {
            id: r.id.clone(),
            ml_pick: ml,
            margins: [margins[0].1, margins[1].1, margins[2].1],
            pattern: COLUMN_ORDER.map(|h| r.correct(h)),
            ml_correct: r.correct(ml),
        });
    }

    let mut breakdown = vec![0; CASES.len()];
    let mut totals = [0; 4];
    let mut multiplicity = [0; 4];
    for o in &outcomes {
        let i = CASES
            .iter()
            .position(|&(ml, p)| ml == o.ml_correct && p == o.pattern)
            .expect("cases are exhaustive");
        breakdown[i] += 1;
        totals[0] += o.ml_correct as usize;
        for k in 0..3 {
            totals[k + 1] += o.pattern[k] as usize;
        }
        multiplicity[o.pattern.iter().filter(|&&b| b).count()] += 1;
    }
    let dataset_totals = COLUMN_ORDER.map(|h| usable.iter().filter(|r| r.correct(h)).count());

    let choosers: Vec<(String, Box<dyn Fn(&LabelRecordA, &TestOutcome) -> Heuristic>)> = vec![
        ("ML".into(), Box::new(|_, o| o.ml_pick)),
        ("sotd".into(), Box::new(|_, _| Heuristic::Sotd)),
        ("ndrr".into(), Box::new(|_, _| Heuristic::Ndrr)),
        ("Brown".into(), Box::new(|_, _| Heuristic::Brown)),
    ];
    let mut savings = Vec::new();
    let mut timeout_avoided = [0; 4];
    let timeout_set: Vec<usize> = (0..rte.len()).filter(|&i| !rte[i].all_completed()).collect();
    for (k, (name, choose)) in choosers.iter().enumerate() {
        let mut vals = Vec::new();
        for (r, o) in rte.iter().zip(&outcomes) {
            if !r.all_completed() {
                continue;
            }
            let avg = r.runs.iter().map(|x| x.result.cell_count.unwrap() as f64).sum::<f64>()
                / r.runs.len() as f64;
            let picked = r.pick(choose(r, o)).ordering.as_ref().and_then(|p| r.cells_for(p));
            if let Some(c) = picked {
                vals.push(100.0 * (avg - c as f64) / avg);
            }
        }
        savings.push(SavingsRow {
            name: name.clone(),
            problems: vals.len(),
            mean: if vals.is_empty() { 0.0 } else { vals.iter().sum::<f64>() / vals.len() as f64 },
            median: median(vals),
        });
        for &i in &timeout_set {
            let r = rte[i];
            let picked = r.pick(choose(r, &outcomes[i])).ordering.as_ref().and_then(|p| r.cells_for(p));
            timeout_avoided[k] += picked.is_some() as usize;
        }
    }

    let report = CaseAReport {
        labeled: file.records.len(),
        excluded: file.records.len() - usable.len(),
        train: tr.len(),
        validation: va.len(),
        test: te.len(),
        classifiers,
        ml_success: totals[0] as f64 / outcomes.len() as f64,
        outcomes,
        breakdown,
        totals,
        dataset_totals,
        random_baseline: random_baseline(&multiplicity),
        optimal_multiplicity: multiplicity,
        savings,
        timeout_problems: timeout_set.len(),
        timeout_avoided,
    };
    Ok((report, CaseAModels { models }))
}

impl CaseAReport {
    /// Checks the bookkeeping identities; returns the first violated one.
    pub fn reconcile(&self) -> Result<(), String> {
        let check = |ok: bool, what: &str| if ok { Ok(()) } else { Err(what.to_string()) };
        check(self.train + self.validation + self.test + self.excluded == self.labeled, "split sizes")?;
        check(self.breakdown.iter().sum::<usize>() == self.test, "breakdown rows sum to test size")?;
        check(self.outcomes.len() == self.test, "one outcome per test problem")?;
        let ml_rows: usize = CASES
            .iter()
            .zip(&self.breakdown)
            .filter(|((ml, _), _)| *ml)
            .map(|(_, c)| c)
            .sum();
        check(ml_rows == self.totals[0], "ML total equals its Y rows")?;
        for k in 0..3 {
            let rows: usize = CASES
                .iter()
                .zip(&self.breakdown)
                .filter(|((_, p), _)| p[k])
                .map(|(_, c)| c)
                .sum();
            check(rows == self.totals[k + 1], "heuristic total equals its Y rows")?;
        }
        check(
            self.optimal_multiplicity.iter().sum::<usize>() == self.test,
            "multiplicity counts sum to test size",
        )?;
        let hits: usize = (0..4).map(|m| m * self.optimal_multiplicity[m]).sum();
        check(
            hits == self.totals[1] + self.totals[2] + self.totals[3],
            "multiplicities match heuristic totals",
        )?;
        check(
            (self.random_baseline - random_baseline(&self.optimal_multiplicity)).abs() < 1e-12,
            "random baseline",
        )?;
        for c in &self.classifiers {
            check(c.test_confusion.total() as usize == self.test, "confusion counts sum to test size")?;
        }
        for o in &self.outcomes {
            check(Heuristic::ALL.contains(&o.ml_pick), "ML pick is a heuristic")?;
        }
        for (k, s) in self.savings.iter().enumerate() {
            check(s.problems <= self.test - self.timeout_problems, "savings problem count")?;
            check(self.timeout_avoided[k] <= self.timeout_problems, "timeout counts")?;
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "Heuristic selection report").unwrap();
        writeln!(
            out,
            "labeled {}  excluded {}  train {}  validation {}  test {}\n",
            self.labeled, self.excluded, self.train, self.validation, self.test
        )
        .unwrap();

        let mut t = Table::new("Classifiers", &["heuristic", "C", "gamma", "val MCC", "TP", "TN", "FP", "FN", "test MCC"]);
        for c in &self.classifiers {
            let m = metrics(&c.test_confusion).map(|m| num(m.mcc)).unwrap_or_default();
            let k = &c.test_confusion;
            t.row(vec![
                c.heuristic.name().into(),
                format!("{}", c.c),
                format!("{}", c.gamma),
                num(c.validation_mcc),
                k.tp.to_string(),
                k.tn.to_string(),
                k.fp.to_string(),
                k.fn_.to_string(),
                m,
            ]);
        }
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new("Outcome breakdown", &["case", "ML", "sotd", "ndrr", "Brown", "problems"]);
        for (i, ((ml, p), c)) in CASES.iter().zip(&self.breakdown).enumerate() {
            t.row(vec![
                (i + 1).to_string(),
                yn(*ml),
                yn(p[0]),
                yn(p[1]),
                yn(p[2]),
                c.to_string(),
            ]);
        }
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new("ML success by pattern", &["sotd", "ndrr", "Brown", "ML success", "random"]);
        for pair in [1, 3, 5, 7, 9, 11] {
            let (_, p) = CASES[pair];
            let (y, n) = (self.breakdown[pair], self.breakdown[pair + 1]);
            let rate = if y + n == 0 { "-".to_string() } else { pct(y as f64 / (y + n) as f64) };
            let m = p.iter().filter(|&&b| b).count();
            t.row(vec![yn(p[0]), yn(p[1]), yn(p[2]), rate, pct(m as f64 / 3.0)]);
        }
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new("Test problems with an optimal pick", &["", "ML", "sotd", "ndrr", "Brown"]);
        t.row(std::iter::once("test".to_string()).chain(self.totals.iter().map(|x| x.to_string())).collect());
        out.push_str(&t.render());
        writeln!(
            out,
            "random choice {}  machine learning {}\n",
            pct(self.random_baseline),
            pct(self.ml_success)
        )
        .unwrap();

        let n = (self.labeled - self.excluded).max(1) as f64;
        let mut t = Table::new("Whole dataset", &["", "sotd", "ndrr", "Brown"]);
        t.row(
            std::iter::once("optimal".to_string())
                .chain(self.dataset_totals.iter().map(|&x| format!("{x} ({})", pct(x as f64 / n))))
                .collect(),
        );
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new("Cell count savings (test, all orderings completed)", &["", "problems", "mean", "median"]);
        for s in &self.savings {
            t.row(vec![
                s.name.clone(),
                s.problems.to_string(),
                format!("{:.2}%", s.mean),
                format!("{:.2}%", s.median),
            ]);
        }
        out.push_str(&t.render());
        out.push('\n');

        let mut t = Table::new(
            &format!("Failed orderings avoided ({} test problems with a failure)", self.timeout_problems),
            &["", "ML", "sotd", "ndrr", "Brown"],
        );
        t.row(std::iter::once("avoided".to_string()).chain(self.timeout_avoided.iter().map(|x| x.to_string())).collect());
        out.push_str(&t.render());
        out
    }
}
