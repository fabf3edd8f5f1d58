//! Soft-margin binary SVM with an RBF kernel, trained by SMO.

use serde::{Deserialize, Serialize};

use crate::error::SvmError;
use crate::features::StandardizationStats;

/// KKT violation tolerance.
pub const TOLERANCE: f64 = 1e-3;

pub fn rbf_kernel(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    assert_eq!(a.len(), b.len(), "kernel argument length mismatch");
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

/// A trained classifier. Support vectors are stored after masking and
/// standardization; `stats` and `feature_mask` describe how raw rows are
/// prepared.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub gamma: f64,
    pub c: f64,
    pub j: f64,
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` per support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
    /// Set when training saw a single class; every prediction is that class.
    pub constant: Option<i8>,
    pub stats: Option<StandardizationStats>,
    pub feature_mask: Option<Vec<usize>>,
    /// Dual objective `1/2 a'Qa - sum(a)` at the solution.
    pub objective: f64,
    pub iterations: u64,
}

impl SvmModel {
    /// `sum alpha_i y_i K(x_i, x) + b`; infinite for a constant model.
    pub fn decision_value(&self, x: &[f64]) -> f64 {
        if let Some(c) = self.constant {
            return f64::INFINITY * c as f64;
        }
        let s: f64 = self
            .support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(sv, a)| a * rbf_kernel(sv, x, self.gamma))
            .sum();
        s + self.bias
    }

    /// Sign of the decision value, with 0 classified as +1.
    pub fn classify(&self, x: &[f64]) -> i8 {
        if self.decision_value(x) >= 0.0 {
            1
        } else {
            -1
        }
    }

    /// Masks and standardizes a raw feature row.
    pub fn prepare(&self, raw: &[f64]) -> Result<Vec<f64>, crate::error::FeatureError> {
        let masked: Vec<f64> = match &self.feature_mask {
            Some(m) => m.iter().map(|&i| raw[i]).collect(),
            None => raw.to_vec(),
        };
        match &self.stats {
            Some(s) => s.apply_row(&masked),
            None => Ok(masked),
        }
    }

    pub fn decision_value_raw(&self, raw: &[f64]) -> Result<f64, crate::error::FeatureError> {
        Ok(self.decision_value(&self.prepare(raw)?))
    }
}

/// `j` for a training split: negatives over positives (1 if either is absent).
pub fn default_cost_factor(labels: &[i8]) -> f64 {
    let pos = labels.iter().filter(|&&y| y > 0).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        1.0
    } else {
        neg as f64 / pos as f64
    }
}

fn validate(rows: &[Vec<f64>], labels: &[i8]) -> Result<(), SvmError> {
    if rows.is_empty() {
        return Err(SvmError::Empty);
    }
    if rows.len() != labels.len() {
        return Err(SvmError::LabelCount {
            rows: rows.len(),
            labels: labels.len(),
        });
    }
    if labels.iter().any(|&y| y != 1 && y != -1) {
        return Err(SvmError::BadLabel);
    }
    let w = rows[0].len();
    for r in rows {
        if r.len() != w {
            return Err(SvmError::LengthMismatch {
                expected: w,
                got: r.len(),
            });
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(SvmError::NonFinite);
        }
    }
    Ok(())
}

/// Trains with box constraints `C+ = j*C` for positives and `C- = C`.
pub fn train(
    rows: &[Vec<f64>],
    labels: &[i8],
    gamma: f64,
    c: f64,
    j: f64,
) -> Result<SvmModel, SvmError> {
    validate(rows, labels)?;
    if !(gamma >= 0.0 && c > 0.0 && j > 0.0) {
        return Err(SvmError::BadParameter);
    }
    let base = SvmModel {
        gamma,
        c,
        j,
        support_vectors: Vec::new(),
        coefficients: Vec::new(),
        bias: 0.0,
        constant: None,
        stats: None,
        feature_mask: None,
        objective: 0.0,
        iterations: 0,
    };
    if labels.iter().all(|&y| y == labels[0]) {
        return Ok(SvmModel {
            constant: Some(labels[0]),
            ..base
        });
    }

    let sol = solve(&gram(rows, gamma), labels, c, j);
    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (t, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(rows[t].clone());
            coefficients.push(a * labels[t] as f64);
        }
    }
    Ok(SvmModel {
        support_vectors,
        coefficients,
        bias: sol.bias,
        objective: sol.objective,
        iterations: sol.iterations,
        ..base
    })
}

/// Dual solution for a precomputed row-major Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub objective: f64,
    pub iterations: u64,
}

impl Solution {
    /// Decision value given kernel values against every training row.
    pub fn decision(&self, labels: &[i8], kernel_row: impl Fn(usize) -> f64) -> f64 {
        let mut s = self.bias;
        for (t, &a) in self.alpha.iter().enumerate() {
            if a > 0.0 {
                s += a * labels[t] as f64 * kernel_row(t);
            }
        }
        s
    }
}

/// SMO on a Gram matrix. Both classes must be present.
pub fn solve(k: &[f64], labels: &[i8], c: f64, j: f64) -> Solution {
    let n = labels.len();
    assert_eq!(k.len(), n * n, "gram matrix size");
    let y: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
    let cap: Vec<f64> = labels.iter().map(|&l| if l > 0 { j * c } else { c }).collect();
    let q = |a: usize, b: usize| y[a] * y[b] * k[a * n + b];

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = (100 * n as u64).max(10_000_000);
    let mut iter = 0;
    let tau = 1e-12;
    let up = |t: usize, al: &[f64]| (y[t] > 0.0 && al[t] < cap[t]) || (y[t] < 0.0 && al[t] > 0.0);
    let low = |t: usize, al: &[f64]| (y[t] > 0.0 && al[t] > 0.0) || (y[t] < 0.0 && al[t] < cap[t]);

    while iter < max_iter {
        // i: maximal violating index from the "up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut i = usize::MAX;
        for t in 0..n {
            if up(t, &alpha) && -y[t] * grad[t] > gmax {
                gmax = -y[t] * grad[t];
                i = t;
            }
        }
        // j: second-order choice from the "low" set
        let mut gmin = f64::INFINITY;
        let mut best = f64::INFINITY;
        let mut jj = usize::MAX;
        for t in 0..n {
            if !low(t, &alpha) {
                continue;
            }
            let v = -y[t] * grad[t];
            gmin = gmin.min(v);
            if i != usize::MAX && v < gmax {
                let b = gmax - v;
                let mut a = k[i * n + i] + k[t * n + t] - 2.0 * k[i * n + t];
                if a <= 0.0 {
                    a = tau;
                }
                let score = -(b * b) / a;
                if score < best {
                    best = score;
                    jj = t;
                }
            }
        }
        if i == usize::MAX || jj == usize::MAX || gmax - gmin < TOLERANCE {
            break;
        }
        iter += 1;
        let j_ = jj;
        let (ai_old, aj_old) = (alpha[i], alpha[j_]);
        let (ci, cj) = (cap[i], cap[j_]);
        if y[i] != y[j_] {
            let mut quad = q(i, i) + q(j_, j_) + 2.0 * q(i, j_);
            if quad <= 0.0 {
                quad = tau;
            }
            let delta = (-grad[i] - grad[j_]) / quad;
            let diff = alpha[i] - alpha[j_];
            alpha[i] += delta;
            alpha[j_] += delta;
            if diff > 0.0 {
                if alpha[j_] < 0.0 {
                    alpha[j_] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j_] = -diff;
            }
            if diff > ci - cj {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j_] = ci - diff;
                }
            } else if alpha[j_] > cj {
                alpha[j_] = cj;
                alpha[i] = cj + diff;
            }
        } else {
            let mut quad = q(i, i) + q(j_, j_) - 2.0 * q(i, j_);
            if quad <= 0.0 {
                quad = tau;
            }
            let delta = (grad[i] - grad[j_]) / quad;
            let sum = alpha[i] + alpha[j_];
            alpha[i] -= delta;
            alpha[j_] += delta;
            if sum > ci {
                if alpha[i] > ci {
                    alpha[i] = ci;
                    alpha[j_] = sum - ci;
                }
            } else if alpha[j_] < 0.0 {
                alpha[j_] = 0.0;
                alpha[i] = sum;
            }
            if sum > cj {
                if alpha[j_] > cj {
                    alpha[j_] = cj;
                    alpha[i] = sum - cj;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j_] = sum;
            }
        }
        let (di, dj) = (alpha[i] - ai_old, alpha[j_] - aj_old);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j_) * dj;
        }
    }

    // bias from free vectors, else the midpoint of the feasible range
    let mut sum = 0.0;
    let mut free = 0usize;
    let mut ub = f64::INFINITY;
    let mut lb = f64::NEG_INFINITY;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < cap[t] {
            sum += yg;
            free += 1;
        } else if (alpha[t] >= cap[t] && y[t] < 0.0) || (alpha[t] <= 0.0 && y[t] > 0.0) {
            ub = ub.min(yg);
        } else {
            lb = lb.max(yg);
        }
    }
    let rho = if free > 0 { sum / free as f64 } else { (ub + lb) / 2.0 };
    let objective = 0.5 * (0..n).map(|t| alpha[t] * (grad[t] - 1.0)).sum::<f64>();
    Solution {
        alpha,
        bias: -rho,
        objective,
        iterations: iter,
    }
}

/// Row-major RBF Gram matrix.
pub fn gram(rows: &[Vec<f64>], gamma: f64) -> Vec<f64> {
    let n = rows.len();
    let mut k = vec![0.0; n * n];
    for a in 0..n {
        for b in a..n {
            let v = rbf_kernel(&rows[a], &rows[b], gamma);
            k[a * n + b] = v;
            k[b * n + a] = v;
        }
    }
    k
}
