//! Problem features for both case studies and train-fitted standardization.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::FeatureError;
use crate::groebner::{buchberger, GroebnerBasis};
use crate::heuristics::tnoi;
use crate::poly::{degree_metrics, PolySet};

pub const CASE_A_LEN: usize = 11;
pub const CASE_B_LEN: usize = 28;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    CaseA11,
    CaseB28,
    /// Columns of the 28-feature layout, zero-based.
    Subset(Vec<usize>),
}

impl Schema {
    pub fn len(&self) -> usize {
        match self {
            Schema::CaseA11 => CASE_A_LEN,
            Schema::CaseB28 => CASE_B_LEN,
            Schema::Subset(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub schema: Schema,
}

impl FeatureVector {
    /// Restricts a 28-feature vector to `mask`.
    pub fn select(&self, mask: &[usize]) -> FeatureVector {
        FeatureVector {
            values: mask.iter().map(|&i| self.values[i]).collect(),
            schema: Schema::Subset(mask.to_vec()),
        }
    }
}

/// Column subsets of the 28 Case B features.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureMode {
    All,
    Before,
    After,
}

impl FeatureMode {
    pub fn columns(self) -> Vec<usize> {
        match self {
            FeatureMode::All => (0..28).collect(),
            FeatureMode::Before => (0..12).collect(),
            FeatureMode::After => (12..25).collect(),
        }
    }
}

fn ratio(a: usize, b: usize) -> BigRational {
    if b == 0 {
        return BigRational::from_integer(0.into());
    }
    BigRational::new(a.into(), b.into())
}

fn int(a: i64) -> BigRational {
    BigRational::from_integer(a.into())
}

// max degree per variable, proportion of polynomials and of monomials per variable
fn per_variable(s: &PolySet) -> Vec<BigRational> {
    let r = degree_metrics(s);
    let mut out = Vec::with_capacity(9);
    out.extend(r.per_var_max_degree.iter().map(|&d| int(d as i64)));
    out.extend(r.poly_occurrence.iter().map(|&c| ratio(c, s.len())));
    out.extend(
        r.monomial_occurrence
            .iter()
            .map(|&c| ratio(c, r.total_monomials)),
    );
    out
}

fn check_vars(s: &PolySet) -> Result<(), FeatureError> {
    if s.nvars() != 3 {
        return Err(FeatureError::WrongVariableCount {
            expected: 3,
            got: s.nvars(),
        });
    }
    Ok(())
}

/// The 11 Case A features as exact rationals.
pub fn extract_case_a_exact(s: &PolySet) -> Result<Vec<BigRational>, FeatureError> {
    check_vars(s)?;
    if s.is_empty() {
        return Err(FeatureError::NoPolynomials);
    }
    let r = degree_metrics(s);
    let mut out = vec![int(s.len() as i64), int(r.tds)];
    out.extend(per_variable(s));
    Ok(out)
}

pub fn extract_case_a(s: &PolySet) -> Result<FeatureVector, FeatureError> {
    Ok(FeatureVector {
        values: to_f64(&extract_case_a_exact(s)?),
        schema: Schema::CaseA11,
    })
}

fn to_f64(v: &[BigRational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().expect("finite")).collect()
}

// log2 with values below 1 clamped to 1
fn log2c(x: i64) -> f64 {
    (x.max(1) as f64).log2()
}

/// The first 25 Case B features (all rational) and the 3 log features.
pub fn extract_case_b_parts(
    e: &PolySet,
    f: &PolySet,
    g: &GroebnerBasis,
) -> Result<(Vec<BigRational>, [f64; 3]), FeatureError> {
    check_vars(e)?;
    check_vars(f)?;
    if e.is_empty() {
        return Err(FeatureError::NoPolynomials);
    }
    let expect = buchberger(e, &g.order).map_err(|_| FeatureError::InconsistentBasis)?;
    if !expect.generators.same_set(&g.generators) {
        return Err(FeatureError::InconsistentBasis);
    }
    let before = e.union(f);
    let after = g.generators.union(f);
    let rb = degree_metrics(&before);
    let ra = degree_metrics(&after);
    let (tb, ta) = (tnoi(&before) as i64, tnoi(&after) as i64);
    let mut out = vec![int(tb), int(rb.stds), int(rb.tds)];
    out.extend(per_variable(&before));
    out.extend([int(after.len() as i64), int(ta), int(ra.stds), int(ra.tds)]);
    out.extend(per_variable(&after));
    let logs = [
        log2c(tb) - log2c(ta),
        log2c(rb.stds) - log2c(ra.stds),
        log2c(rb.tds) - log2c(ra.tds),
    ];
    Ok((out, logs))
}

pub fn extract_case_b(
    e: &PolySet,
    f: &PolySet,
    g: &GroebnerBasis,
) -> Result<FeatureVector, FeatureError> {
    let (exact, logs) = extract_case_b_parts(e, f, g)?;
    let mut values = to_f64(&exact);
    values.extend(logs);
    Ok(FeatureVector {
        values,
        schema: Schema::CaseB28,
    })
}

/// Per-column mean and population standard deviation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandardizationStats {
    pub mean: Vec<f64>,
    pub sd: Vec<f64>,
}

impl StandardizationStats {
    pub fn width(&self) -> usize {
        self.mean.len()
    }

    /// Columns with zero variance.
    pub fn flagged(&self) -> Vec<usize> {
        (0..self.sd.len()).filter(|&i| self.sd[i] == 0.0).collect()
    }

    /// Standardizes one row; zero-variance columns map to 0.
    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>, FeatureError> {
        if row.len() != self.width() {
            return Err(FeatureError::SchemaMismatch {
                expected: self.width(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                if self.sd[i] == 0.0 {
                    0.0
                } else {
                    (x - self.mean[i]) / self.sd[i]
                }
            })
            .collect())
    }

    /// Inverse of [`apply_row`](Self::apply_row) on columns with nonzero variance.
    pub fn unapply_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(i, &z)| z * self.sd[i] + self.mean[i])
            .collect()
    }

    /// Keeps only the columns in `mask`.
    pub fn select(&self, mask: &[usize]) -> StandardizationStats {
        StandardizationStats {
            mean: mask.iter().map(|&i| self.mean[i]).collect(),
            sd: mask.iter().map(|&i| self.sd[i]).collect(),
        }
    }
}

pub fn fit_standardization(rows: &[Vec<f64>]) -> Result<StandardizationStats, FeatureError> {
    if rows.len() < 2 {
        return Err(FeatureError::TooFewRows(rows.len()));
    }
    let w = rows[0].len();
    if let Some(r) = rows.iter().find(|r| r.len() != w) {
        return Err(FeatureError::SchemaMismatch {
            expected: w,
            got: r.len(),
        });
    }
    let n = rows.len() as f64;
    let mean: Vec<f64> = (0..w)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n)
        .collect();
    let sd = (0..w)
        .map(|j| {
            let var = rows.iter().map(|r| (r[j] - mean[j]).powi(2)).sum::<f64>() / n;
            var.sqrt()
        })
        .collect();
    Ok(StandardizationStats { mean, sd })
}

pub fn apply_standardization(
    stats: &StandardizationStats,
    rows: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>, FeatureError> {
    rows.iter().map(|r| stats.apply_row(r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::MonomialOrder;
    use crate::poly::{Polynomial, Variable};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn xyz(t: &[&str]) -> PolySet {
        PolySet::parse(Variable::named(&["x", "y", "z"]), t).unwrap()
    }

    #[test]
    fn case_a_vectors() {
        let s = PolySet::parse(
            Variable::indexed(3),
            &["-6*x0^2 - x2^3 - 1", "x0^4*x2 + 9*x1", "x0 + x0^2 - x2*x0 - 5"],
        )
        .unwrap();
        let want = [
            q(3, 1), q(5, 1), q(4, 1), q(1, 1), q(3, 1), q(1, 1),
            q(1, 3), q(1, 1), q(5, 9), q(1, 9), q(1, 3),
        ];
        assert_eq!(extract_case_a_exact(&s).unwrap(), want);
        let s = PolySet::parse(Variable::indexed(3), &["x0"]).unwrap();
        let v = extract_case_a(&s).unwrap();
        assert_eq!(v.values, [1.0, 1.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn case_a_errors() {
        let empty = PolySet::empty(Variable::indexed(3));
        assert_eq!(extract_case_a(&empty), Err(FeatureError::NoPolynomials));
        let two = PolySet::parse(Variable::indexed(2), &["x0"]).unwrap();
        assert_eq!(
            extract_case_a(&two),
            Err(FeatureError::WrongVariableCount { expected: 3, got: 2 })
        );
    }

    #[test]
    fn case_b_identical_sets() {
        let e = xyz(&["x", "y"]);
        let g = buchberger(&e, &MonomialOrder::lex_descending(3)).unwrap();
        let v = extract_case_b(&e, &e, &g).unwrap();
        assert_eq!(&v.values[25..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn case_b_unit_ideal() {
        let e = xyz(&["x*y - 1", "x"]);
        let f = xyz(&["y^2 + z", "x*z - 2"]);
        let g = buchberger(&e, &MonomialOrder::lex_descending(3)).unwrap();
        let (exact, _) = extract_case_b_parts(&e, &f, &g).unwrap();
        assert_eq!(exact[12], q(3, 1));
        assert_eq!(exact[13], q(tnoi(&f) as i64, 1));
    }

    #[test]
    fn case_b_rejects_foreign_basis() {
        let e = xyz(&["x*y - 1", "x - 2"]);
        let g = buchberger(&xyz(&["x"]), &MonomialOrder::lex_descending(3)).unwrap();
        assert_eq!(
            extract_case_b(&e, &e, &g),
            Err(FeatureError::InconsistentBasis)
        );
    }

    #[test]
    fn standardization_examples() {
        let rows = vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]];
        let st = fit_standardization(&rows).unwrap();
        assert_eq!(st.mean, vec![2.0, 5.0]);
        assert!((st.sd[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(st.flagged(), vec![1]);
        let z = st.apply_row(&[4.0, 9.0]).unwrap();
        assert!((z[0] - 2.449_489_742_783_178).abs() < 1e-12);
        assert_eq!(z[1], 0.0);
        let sym = fit_standardization(&[vec![-1.0], vec![1.0]]).unwrap();
        assert_eq!((sym.mean[0], sym.sd[0]), (0.0, 1.0));
        assert_eq!(fit_standardization(&[vec![1.0]]), Err(FeatureError::TooFewRows(1)));
        assert!(matches!(st.apply_row(&[1.0]), Err(FeatureError::SchemaMismatch { .. })));
    }

    proptest! {
        #[test]
        fn standardized_training_columns(rows in prop::collection::vec(prop::collection::vec(-100i32..100, 3), 2..20)) {
            let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            let st = fit_standardization(&rows).unwrap();
            let z = apply_standardization(&st, &rows).unwrap();
            for j in 0..3 {
                let m = z.iter().map(|r| r[j]).sum::<f64>() / z.len() as f64;
                prop_assert!(m.abs() < 1e-9);
                if st.sd[j] > 0.0 {
                    let v = z.iter().map(|r| r[j] * r[j]).sum::<f64>() / z.len() as f64;
                    prop_assert!((v - 1.0).abs() < 1e-9);
                    for (r, zr) in rows.iter().zip(&z) {
                        prop_assert!((st.unapply_row(zr)[j] - r[j]).abs() < 1e-9);
                    }
                }
            }
        }

        #[test]
        fn scaling_invariance(k in 1i64..50, neg in any::<bool>()) {
            let s = PolySet::parse(Variable::indexed(3), &["x0^2*x1 - 3", "x2 + x1*x0"]).unwrap();
            let c = BigRational::from_integer(if neg { -k } else { k }.into());
            let scaled = PolySet::new(s.variables().to_vec(), s.polys().iter().map(|p: &Polynomial| p.scale(&c)));
            prop_assert_eq!(extract_case_a(&s).unwrap(), extract_case_a(&scaled).unwrap());
        }
    }
}
