//! Classifier metrics, stratified folds, grid search, and the filter (CFS)
//! and wrapper feature-selection procedures.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::SelectionError;
use crate::exec::{self, ExecMode};
use crate::svm::{default_cost_factor, solve};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    pub tn: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionCounts {
    pub fn from_predictions(truth: &[i8], predicted: &[i8]) -> Self {
        let mut c = ConfusionCounts::default();
        for (&t, &p) in truth.iter().zip(predicted) {
            match (t > 0, p > 0) {
                (true, true) => c.tp += 1,
                (false, false) => c.tn += 1,
                (false, true) => c.fp += 1,
                (true, false) => c.fn_ += 1,
            }
        }
        c
    }

    pub fn total(&self) -> u64 {
        self.tp + self.tn + self.fp + self.fn_
    }

    pub fn add(&mut self, o: &ConfusionCounts) {
        self.tp += o.tp;
        self.tn += o.tn;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub mcc: f64,
    pub f1: f64,
    pub accuracy: f64,
}

/// MCC (denominator 1 when any of its sums is zero), F1 (0 when undefined)
/// and accuracy.
pub fn metrics(c: &ConfusionCounts) -> Result<Metrics, SelectionError> {
    let n = c.total();
    if n == 0 {
        return Err(SelectionError::EmptyCounts);
    }
    let (tp, tn, fp, fn_) = (c.tp as f64, c.tn as f64, c.fp as f64, c.fn_ as f64);
    let sums = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    let den = if sums.contains(&0.0) {
        1.0
    } else {
        sums.iter().product::<f64>().sqrt()
    };
    let f1_den = 2.0 * tp + fp + fn_;
    Ok(Metrics {
        mcc: (tp * tn - fp * fn_) / den,
        f1: if f1_den == 0.0 { 0.0 } else { 2.0 * tp / f1_den },
        accuracy: (tp + tn) / n as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    Mcc,
    F1,
    Accuracy,
}

impl Objective {
    pub fn of(self, m: &Metrics) -> f64 {
        match self {
            Objective::Mcc => m.mcc,
            Objective::F1 => m.f1,
            Objective::Accuracy => m.accuracy,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub folds: Vec<Vec<usize>>,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.folds.len()
    }

    /// Every row index outside fold `i`, ascending.
    pub fn train_indices(&self, i: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .flat_map(|(_, f)| f.iter().copied())
            .collect();
        v.sort_unstable();
        v
    }
}

/// Shuffles each class with a seeded ChaCha8 stream and deals its members
/// round-robin, continuing the deal across classes.
pub fn stratified_folds(labels: &[i8], k: usize, seed: u64) -> Result<FoldPlan, SelectionError> {
    if k < 2 {
        return Err(SelectionError::TooFewFolds(k));
    }
    let mut classes: BTreeMap<i8, Vec<usize>> = BTreeMap::new();
    for (i, &l) in labels.iter().enumerate() {
        classes.entry(l).or_default().push(i);
    }
    for (&label, members) in &classes {
        if members.len() < k {
            return Err(SelectionError::ClassTooSmall {
                label,
                count: members.len(),
                k,
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (_, mut members) in classes {
        members.shuffle(&mut rng);
        for m in members {
            folds[next % k].push(m);
            next += 1;
        }
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    Ok(FoldPlan { folds })
}

/// `(C, gamma)` pairs with `C = 2^a`, `gamma = 2^b` for the given exponent
/// ranges and step.
pub fn exponent_grid(c_exp: (i32, i32), gamma_exp: (i32, i32), step: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for a in (c_exp.0..=c_exp.1).step_by(step) {
        for b in (gamma_exp.0..=gamma_exp.1).step_by(step) {
            out.push((2f64.powi(a), 2f64.powi(b)));
        }
    }
    out
}

/// `C` in `2^-5..2^15`, `gamma` in `2^-15..2^3`.
pub fn default_grid() -> Vec<(f64, f64)> {
    exponent_grid((-5, 15), (-15, 3), 1)
}

/// The 36 wrapper pairs: `C` in `2^5..2^10`, `gamma` in `2^-10..2^-5`.
pub fn wrapper_pairs() -> Vec<(f64, f64)> {
    exponent_grid((5, 10), (-10, -5), 1)
}

/// Row-major squared Euclidean distances.
pub fn squared_distances(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut d = vec![0.0; n * n];
    for a in 0..n {
        for b in a + 1..n {
            let v: f64 = rows[a]
                .iter()
                .zip(&rows[b])
                .map(|(x, y)| (x - y) * (x - y))
                .sum();
            d[a * n + b] = v;
            d[b * n + a] = v;
        }
    }
    d
}

/// Predictions for `test` rows from a model trained on `train` rows, using a
/// precomputed distance matrix over all rows.
pub fn fit_predict(
    d2: &[f64],
    n: usize,
    labels: &[i8],
    train: &[usize],
    test: &[usize],
    c: f64,
    gamma: f64,
) -> Vec<i8> {
    let ytr: Vec<i8> = train.iter().map(|&i| labels[i]).collect();
    if ytr.iter().all(|&y| y == ytr[0]) {
        return vec![ytr[0]; test.len()];
    }
    let m = train.len();
    let mut k = vec![0.0; m * m];
    for (a, &i) in train.iter().enumerate() {
        for (b, &j) in train.iter().enumerate() {
            k[a * m + b] = (-gamma * d2[i * n + j]).exp();
        }
    }
    let sol = solve(&k, &ytr, c, default_cost_factor(&ytr));
    test.iter()
        .map(|&t| {
            let f = sol.decision(&ytr, |s| (-gamma * d2[train[s] * n + t]).exp());
            if f >= 0.0 {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// Mean over folds of the objective.
pub fn cv_score(
    d2: &[f64],
    labels: &[i8],
    folds: &FoldPlan,
    c: f64,
    gamma: f64,
    objective: Objective,
) -> f64 {
    let n = labels.len();
    let mut total = 0.0;
    for (i, test) in folds.folds.iter().enumerate() {
        let train = folds.train_indices(i);
        let pred = fit_predict(d2, n, labels, &train, test, c, gamma);
        let truth: Vec<i8> = test.iter().map(|&t| labels[t]).collect();
        let m = metrics(&ConfusionCounts::from_predictions(&truth, &pred)).expect("nonempty fold");
        total += objective.of(&m);
    }
    total / folds.k() as f64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridResult {
    pub best_c: f64,
    pub best_gamma: f64,
    pub cv_score: f64,
    /// `(C, gamma, score)` in canonical order.
    pub scores: Vec<(f64, f64, f64)>,
}

fn canonical(grid: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    g.dedup();
    g
}

/// Maximizes the mean fold objective; ties go to the smallest `C`, then the
/// smallest `gamma`.
pub fn grid_search(
    rows: &[Vec<f64>],
    labels: &[i8],
    grid: &[(f64, f64)],
    folds: &FoldPlan,
    objective: Objective,
    mode: ExecMode,
) -> Result<GridResult, SelectionError> {
    if grid.is_empty() {
        return Err(SelectionError::EmptyGrid);
    }
    if rows.len() != labels.len() {
        return Err(SelectionError::LengthMismatch(rows.len(), labels.len()));
    }
    let d2 = squared_distances(rows);
    let grid = canonical(grid);
    let scores = exec::map(mode, &grid, |&(c, g)| cv_score(&d2, labels, folds, c, g, objective));
    let mut best = 0;
    for i in 1..grid.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Ok(GridResult {
        best_c: grid[best].0,
        best_gamma: grid[best].1,
        cv_score: scores[best],
        scores: grid
            .iter()
            .zip(&scores)
            .map(|(&(c, g), &s)| (c, g, s))
            .collect(),
    })
}

/// Trains on `train` and scores each pair on `valid`; same tie rule as
/// [`grid_search`].
pub fn holdout_search(
    train: (&[Vec<f64>], &[i8]),
    valid: (&[Vec<f64>], &[i8]),
    grid: &[(f64, f64)],
    objective: Objective,
    mode: ExecMode,
) -> Result<GridResult, SelectionError> {
    if grid.is_empty() {
        return Err(SelectionError::EmptyGrid);
    }
    for (r, y) in [train, valid] {
        if r.len() != y.len() {
            return Err(SelectionError::LengthMismatch(r.len(), y.len()));
        }
        if r.is_empty() {
            return Err(SelectionError::EmptyCounts);
        }
    }
    let rows: Vec<Vec<f64>> = train.0.iter().chain(valid.0).cloned().collect();
    let labels: Vec<i8> = train.1.iter().chain(valid.1).copied().collect();
    let n = rows.len();
    let d2 = squared_distances(&rows);
    let tr: Vec<usize> = (0..train.0.len()).collect();
    let te: Vec<usize> = (train.0.len()..n).collect();
    let grid = canonical(grid);
    let scores = exec::map(mode, &grid, |&(c, g)| {
        let pred = fit_predict(&d2, n, &labels, &tr, &te, c, g);
        let m = metrics(&ConfusionCounts::from_predictions(valid.1, &pred)).expect("nonempty");
        objective.of(&m)
    });
    let mut best = 0;
    for i in 1..grid.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Ok(GridResult {
        best_c: grid[best].0,
        best_gamma: grid[best].1,
        cv_score: scores[best],
        scores: grid
            .iter()
            .zip(&scores)
            .map(|(&(c, g), &s)| (c, g, s))
            .collect(),
    })
}

fn entropy_counts(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n as f64;
            -p * p.log2()
        })
        .sum()
}

fn class_counts(ys: &[usize], nclass: usize) -> Vec<usize> {
    let mut c = vec![0; nclass];
    for &y in ys {
        c[y] += 1;
    }
    c
}

// sorted (value, class) pairs
fn mdlp(pairs: &[(f64, usize)], nclass: usize, cuts: &mut Vec<f64>) {
    let n = pairs.len();
    if n < 2 {
        return;
    }
    let ys: Vec<usize> = pairs.iter().map(|p| p.1).collect();
    let total = class_counts(&ys, nclass);
    let ent = entropy_counts(&total);
    let mut left = vec![0; nclass];
    let mut best: Option<(f64, usize)> = None;
    for i in 0..n - 1 {
        left[pairs[i].1] += 1;
        if pairs[i].0 == pairs[i + 1].0 {
            continue;
        }
        let right: Vec<usize> = total.iter().zip(&left).map(|(t, l)| t - l).collect();
        let nl = (i + 1) as f64;
        let e = (nl * entropy_counts(&left) + (n as f64 - nl) * entropy_counts(&right)) / n as f64;
        if best.is_none_or(|(b, _)| e < b) {
            best = Some((e, i));
        }
    }
    let Some((e, i)) = best else {
        return;
    };
    let (l, r) = pairs.split_at(i + 1);
    let k = |s: &[(f64, usize)]| {
        class_counts(&s.iter().map(|p| p.1).collect::<Vec<_>>(), nclass)
            .iter()
            .filter(|&&c| c > 0)
            .count() as f64
    };
    let ent_of = |s: &[(f64, usize)]| {
        entropy_counts(&class_counts(&s.iter().map(|p| p.1).collect::<Vec<_>>(), nclass))
    };
    let gain = ent - e;
    let delta = (3f64.powf(k(pairs)) - 2.0).log2()
        - (k(pairs) * ent - k(l) * ent_of(l) - k(r) * ent_of(r));
    let threshold = ((n as f64 - 1.0).log2() + delta) / n as f64;
    if gain <= threshold {
        return;
    }
    cuts.push((pairs[i].0 + pairs[i + 1].0) / 2.0);
    mdlp(l, nclass, cuts);
    mdlp(r, nclass, cuts);
}

fn class_index(labels: &[i8]) -> (Vec<usize>, usize) {
    let mut keys: Vec<i8> = labels.to_vec();
    keys.sort_unstable();
    keys.dedup();
    let idx = labels
        .iter()
        .map(|l| keys.binary_search(l).expect("present"))
        .collect();
    (idx, keys.len())
}

/// Entropy-minimizing recursive binary cuts accepted by the MDL criterion,
/// at midpoints between adjacent distinct values. Returned ascending.
pub fn fayyad_irani_discretize(column: &[f64], labels: &[i8]) -> Vec<f64> {
    let (ys, nclass) = class_index(labels);
    let mut pairs: Vec<(f64, usize)> = column.iter().copied().zip(ys).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut cuts = Vec::new();
    mdlp(&pairs, nclass, &mut cuts);
    cuts.sort_by(f64::total_cmp);
    cuts
}

/// Bin index of each value: the number of cuts below it.
pub fn apply_cuts(column: &[f64], cuts: &[f64]) -> Vec<usize> {
    column
        .iter()
        .map(|x| cuts.iter().filter(|&&c| c < *x).count())
        .collect()
}

fn entropy_of(xs: &[usize]) -> f64 {
    let mut m: BTreeMap<usize, usize> = BTreeMap::new();
    for &x in xs {
        *m.entry(x).or_default() += 1;
    }
    entropy_counts(&m.into_values().collect::<Vec<_>>())
}

fn joint_entropy(xs: &[usize], ys: &[usize]) -> f64 {
    let mut m: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (&x, &y) in xs.iter().zip(ys) {
        *m.entry((x, y)).or_default() += 1;
    }
    entropy_counts(&m.into_values().collect::<Vec<_>>())
}

/// `2 IG / (H(X) + H(Y))`, 0 when both entropies vanish.
pub fn symmetric_uncertainty(xs: &[usize], ys: &[usize]) -> Result<f64, SelectionError> {
    if xs.len() != ys.len() {
        return Err(SelectionError::LengthMismatch(xs.len(), ys.len()));
    }
    let (hx, hy) = (entropy_of(xs), entropy_of(ys));
    if hx + hy == 0.0 {
        return Ok(0.0);
    }
    let ig = hx + hy - joint_entropy(xs, ys);
    Ok((2.0 * ig / (hx + hy)).clamp(0.0, 1.0))
}

/// Subset merit `k r_cf / sqrt(k + k(k-1) r_ff)` from mean feature-class and
/// mean feature-feature correlations.
pub fn cfs_merit(k: usize, mean_cf: f64, mean_ff: f64) -> f64 {
    let k = k as f64;
    let den = (k + k * (k - 1.0) * mean_ff).sqrt();
    if den == 0.0 {
        0.0
    } else {
        k * mean_cf / den
    }
}

/// Greedy forward CFS on discretized columns. The best single feature is
/// always taken; further features are added while the merit strictly
/// improves. Ties go to the lowest index.
pub fn cfs_filter_select(rows: &[Vec<f64>], labels: &[i8]) -> Result<Vec<usize>, SelectionError> {
    let w = rows.first().map_or(0, |r| r.len());
    if w == 0 {
        return Err(SelectionError::NoFeatures);
    }
    if rows.len() != labels.len() {
        return Err(SelectionError::LengthMismatch(rows.len(), labels.len()));
    }
    let (class, _) = class_index(labels);
    let disc: Vec<Vec<usize>> = (0..w)
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            apply_cuts(&col, &fayyad_irani_discretize(&col, labels))
        })
        .collect();
    let rcf: Vec<f64> = disc
        .iter()
        .map(|d| symmetric_uncertainty(d, &class).expect("same length"))
        .collect();
    let mut rff = vec![vec![None::<f64>; w]; w];
    let mut ff = |a: usize, b: usize| -> f64 {
        let (a, b) = (a.min(b), a.max(b));
        *rff[a][b].get_or_insert_with(|| symmetric_uncertainty(&disc[a], &disc[b]).expect("same length"))
    };

    let mut chosen: Vec<usize> = Vec::new();
    let mut merit = f64::NEG_INFINITY;
    loop {
        let mut best: Option<(f64, usize)> = None;
        for f in (0..w).filter(|f| !chosen.contains(f)) {
            let k = chosen.len() + 1;
            let cf = (chosen.iter().map(|&c| rcf[c]).sum::<f64>() + rcf[f]) / k as f64;
            let mut pair_sum = 0.0;
            let mut pairs = 0usize;
            for (i, &a) in chosen.iter().enumerate() {
                for &b in &chosen[i + 1..] {
                    pair_sum += ff(a, b);
                    pairs += 1;
                }
                pair_sum += ff(a, f);
                pairs += 1;
            }
            let mean_ff = if pairs == 0 { 0.0 } else { pair_sum / pairs as f64 };
            let m = cfs_merit(k, cf, mean_ff);
            if best.is_none_or(|(bm, _)| m > bm) {
                best = Some((m, f));
            }
        }
        match best {
            Some((m, f)) if m > merit => {
                chosen.push(f);
                merit = m;
            }
            _ => break,
        }
    }
    Ok(chosen)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrapperResult {
    pub subset: Vec<usize>,
    pub best_c: f64,
    pub best_gamma: f64,
    pub cv_accuracy: f64,
    /// `(C, gamma, subset, accuracy)` per pair in canonical order.
    pub per_pair: Vec<(f64, f64, Vec<usize>, f64)>,
}

fn forward_select(
    rows: &[Vec<f64>],
    labels: &[i8],
    folds: &FoldPlan,
    c: f64,
    gamma: f64,
) -> (Vec<usize>, f64) {
    let n = rows.len();
    let w = rows[0].len();
    let mut base = vec![0.0; n * n];
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc = f64::NEG_INFINITY;
    while chosen.len() < w {
        let mut best: Option<(f64, usize, Vec<f64>)> = None;
        for f in (0..w).filter(|f| !chosen.contains(f)) {
            let mut d2 = base.clone();
            for a in 0..n {
                for b in a + 1..n {
                    let t = rows[a][f] - rows[b][f];
                    d2[a * n + b] += t * t;
                    d2[b * n + a] += t * t;
                }
            }
            let s = cv_score(&d2, labels, folds, c, gamma, Objective::Accuracy);
            if best.as_ref().is_none_or(|(bs, _, _)| s > *bs) {
                best = Some((s, f, d2));
            }
        }
        match best {
            Some((s, f, d2)) if s > acc => {
                chosen.push(f);
                acc = s;
                base = d2;
            }
            _ => break,
        }
    }
    (chosen, acc)
}

/// Greedy forward selection scored by mean fold accuracy, run for each
/// `(C, gamma)` pair; returns the best pair's subset. Ties between pairs go
/// to the smallest `C`, then the smallest `gamma`.
pub fn wrapper_select(
    rows: &[Vec<f64>],
    labels: &[i8],
    pairs: &[(f64, f64)],
    folds: &FoldPlan,
    mode: ExecMode,
) -> Result<WrapperResult, SelectionError> {
    if pairs.is_empty() {
        return Err(SelectionError::EmptyGrid);
    }
    if rows.first().is_none_or(|r| r.is_empty()) {
        return Err(SelectionError::NoFeatures);
    }
    if rows.len() != labels.len() {
        return Err(SelectionError::LengthMismatch(rows.len(), labels.len()));
    }
    let grid = canonical(pairs);
    let results = exec::map(mode, &grid, |&(c, g)| forward_select(rows, labels, folds, c, g));
    let mut best = 0;
    for i in 1..grid.len() {
        if results[i].1 > results[best].1 {
            best = i;
        }
    }
    Ok(WrapperResult {
        subset: results[best].0.clone(),
        best_c: grid[best].0,
        best_gamma: grid[best].1,
        cv_accuracy: results[best].1,
        per_pair: grid
            .iter()
            .zip(results)
            .map(|(&(c, g), (s, a))| (c, g, s, a))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn cc(tp: u64, tn: u64, fp: u64, fn_: u64) -> ConfusionCounts {
        ConfusionCounts { tp, tn, fp, fn_ }
    }

    #[test]
    fn mcc_cases() {
        assert_eq!(metrics(&cc(1, 1, 0, 0)).unwrap().mcc, 1.0);
        assert_eq!(metrics(&cc(0, 0, 1, 1)).unwrap().mcc, -1.0);
        assert!((metrics(&cc(5, 3, 1, 1)).unwrap().mcc - 14.0 / 24.0).abs() < 1e-12);
        // constant predictor on mixed labels
        assert_eq!(metrics(&cc(4, 0, 6, 0)).unwrap().mcc, 0.0);
        assert_eq!(metrics(&cc(0, 0, 0, 0)), Err(SelectionError::EmptyCounts));
        let m = metrics(&cc(5, 3, 1, 1)).unwrap();
        assert!((m.f1 - 10.0 / 12.0).abs() < 1e-15);
        assert!((m.accuracy - 0.8).abs() < 1e-15);
    }

    #[test]
    fn folds_stratified() {
        let labels = [1, 1, 1, 1, 1, 1, -1, -1, -1, -1];
        let p = stratified_folds(&labels, 4, 3).unwrap();
        assert_eq!(p, stratified_folds(&labels, 4, 3).unwrap());
        let mut all: Vec<usize> = p.folds.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        for f in &p.folds {
            assert!(f.len() == 2 || f.len() == 3);
            let pos = f.iter().filter(|&&i| labels[i] > 0).count() as f64;
            assert!((pos - 6.0 / 4.0).abs() <= 1.0);
        }
        assert_eq!(
            stratified_folds(&[1, 1, 1, 1, 1, -1, -1, -1], 5, 0),
            Err(SelectionError::ClassTooSmall { label: -1, count: 3, k: 5 })
        );
        assert_eq!(stratified_folds(&labels, 1, 0), Err(SelectionError::TooFewFolds(1)));
    }

    fn separable(n: usize) -> (Vec<Vec<f64>>, Vec<i8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 } + rng.gen_range(-0.3..0.3), rng.gen_range(-1.0..1.0)]).collect();
        let labels = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        (rows, labels)
    }

    #[test]
    fn grid_search_cases() {
        let (rows, labels) = separable(30);
        let folds = stratified_folds(&labels, 5, 1).unwrap();
        let grid = exponent_grid((-1, 5), (-3, 1), 2);
        let r = grid_search(&rows, &labels, &grid, &folds, Objective::Mcc, ExecMode::Sequential).unwrap();
        assert_eq!(r.cv_score, 1.0);
        let mut shuffled = grid.clone();
        shuffled.reverse();
        let r2 = grid_search(&rows, &labels, &shuffled, &folds, Objective::Mcc, ExecMode::Parallel).unwrap();
        assert_eq!(r, r2);
        // ties go to the smallest C: every pair here is perfect
        let smallest = grid.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        assert_eq!(r.best_c, smallest);
        let one = grid_search(&rows, &labels, &[(4.0, 0.25)], &folds, Objective::Mcc, ExecMode::Sequential).unwrap();
        assert_eq!((one.best_c, one.best_gamma), (4.0, 0.25));
        assert_eq!(
            grid_search(&rows, &labels, &[], &folds, Objective::Mcc, ExecMode::Sequential),
            Err(SelectionError::EmptyGrid)
        );
    }

    #[test]
    fn holdout_cases() {
        let (rows, labels) = separable(40);
        let r = holdout_search(
            (&rows[..30], &labels[..30]),
            (&rows[30..], &labels[30..]),
            &exponent_grid((-1, 5), (-3, 1), 2),
            Objective::Mcc,
            ExecMode::Sequential,
        )
        .unwrap();
        assert_eq!(r.cv_score, 1.0);
        assert_eq!(r.best_c, 0.5);
    }

    #[test]
    fn discretization() {
        assert_eq!(fayyad_irani_discretize(&[1.0, 2.0, 3.0, 4.0], &[-1, -1, 1, 1]), vec![2.5]);
        assert!(fayyad_irani_discretize(&[7.0; 6], &[-1, 1, -1, 1, 1, -1]).is_empty());
        assert_eq!(apply_cuts(&[0.0, 2.5, 3.0], &[2.5]), vec![0, 0, 1]);
    }

    #[test]
    fn independent_column_has_no_cuts() {
        // For every candidate cut, the gain stays below the MDL threshold.
        let col = [0.61, 0.12, 0.93, 0.35, 0.48, 0.77, 0.05, 0.29, 0.84, 0.56];
        let labels = [1, -1, -1, 1, -1, 1, 1, -1, 1, -1];
        assert!(fayyad_irani_discretize(&col, &labels).is_empty());
        let mut idx: Vec<usize> = (0..10).collect();
        idx.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
        let ys: Vec<i8> = idx.iter().map(|&i| labels[i]).collect();
        let h = |s: &[i8]| {
            let p = s.iter().filter(|&&y| y > 0).count() as f64 / s.len() as f64;
            [p, 1.0 - p].iter().filter(|&&q| q > 0.0).map(|q| -q * q.log2()).sum::<f64>()
        };
        let kinds = |s: &[i8]| {
            let pos = s.iter().any(|&y| y > 0) as u8 + s.iter().any(|&y| y < 0) as u8;
            pos as f64
        };
        for cut in 1..10 {
            let (l, r) = ys.split_at(cut);
            let e = (l.len() as f64 * h(l) + r.len() as f64 * h(r)) / 10.0;
            let gain = h(&ys) - e;
            let delta = (3f64.powf(kinds(&ys)) - 2.0).log2()
                - (kinds(&ys) * h(&ys) - kinds(l) * h(l) - kinds(r) * h(r));
            assert!(gain <= (9f64.log2() + delta) / 10.0);
        }
    }

    #[test]
    fn su_cases() {
        let x = [0, 0, 1, 1];
        assert!((symmetric_uncertainty(&x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!(symmetric_uncertainty(&x, &[0, 1, 0, 1]).unwrap().abs() < 1e-12);
        assert!((entropy_of(&x) - 1.0).abs() < 1e-15);
        let a = [0, 1, 2, 1, 0, 2, 2];
        let b = [1, 1, 0, 0, 1, 0, 1];
        let (s1, s2) = (symmetric_uncertainty(&a, &b).unwrap(), symmetric_uncertainty(&b, &a).unwrap());
        assert!((s1 - s2).abs() < 1e-12 && (0.0..=1.0).contains(&s1));
        assert_eq!(symmetric_uncertainty(&[0], &[0, 1]), Err(SelectionError::LengthMismatch(1, 2)));
        assert_eq!(cfs_merit(1, 0.7, 0.0), 0.7);
    }

    fn planted(n: usize, w: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<i8>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels: Vec<i8> = (0..n).map(|i| if i % 3 == 0 { 1 } else { -1 }).collect();
        let rows = labels
            .iter()
            .map(|&l| {
                let mut r = vec![l as f64];
                r.extend((1..w).map(|_| rng.gen_range(-1.0..1.0)));
                r
            })
            .collect();
        (rows, labels)
    }

    #[test]
    fn cfs_planted_and_duplicate() {
        let (rows, labels) = planted(60, 5, 4);
        let s = cfs_filter_select(&rows, &labels).unwrap();
        assert_eq!(s[0], 0);
        let dup: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.push(r[0]);
                r
            })
            .collect();
        let s = cfs_filter_select(&dup, &labels).unwrap();
        assert_eq!(s[0], 0);
        assert!(!s.contains(&5));
    }

    #[test]
    fn wrapper_planted() {
        let (rows, labels) = planted(40, 4, 9);
        let folds = stratified_folds(&labels, 5, 0).unwrap();
        let r = wrapper_select(&rows, &labels, &[(32.0, 0.01), (64.0, 0.001)], &folds, ExecMode::Sequential).unwrap();
        assert_eq!(r.subset, vec![0]);
        assert_eq!(r.cv_accuracy, 1.0);
        assert_eq!((r.best_c, r.best_gamma), (32.0, 0.01));
        let one = wrapper_select(&rows, &labels, &[(64.0, 0.001)], &folds, ExecMode::Sequential).unwrap();
        assert_eq!((one.best_c, one.best_gamma), (64.0, 0.001));
    }

    #[test]
    fn wrapper_noise_only() {
        let (rows, labels) = planted(40, 4, 9);
        let noise: Vec<Vec<f64>> = rows.iter().map(|r| r[1..].to_vec()).collect();
        let folds = stratified_folds(&labels, 5, 0).unwrap();
        let r = wrapper_select(&noise, &labels, &[(32.0, 0.01)], &folds, ExecMode::Sequential).unwrap();
        assert!(!r.subset.is_empty());
        let majority = labels.iter().filter(|&&l| l < 0).count() as f64 / labels.len() as f64;
        assert!(r.cv_accuracy <= majority + 0.2);
    }
}
