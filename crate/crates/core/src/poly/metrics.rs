use serde::{Deserialize, Serialize};

use super::PolySet;

/// Degree and occurrence statistics of a polynomial set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    /// Maximum degree of each variable over all polynomials.
    pub per_var_max_degree: Vec<u32>,
    pub per_poly_total_degree: Vec<i64>,
    /// Maximum total degree; -1 for an empty set.
    pub tds: i64,
    /// Sum of total degrees.
    pub stds: i64,
    /// Number of polynomials containing each variable.
    pub poly_occurrence: Vec<usize>,
    /// Number of monomials (over all polynomials) containing each variable.
    pub monomial_occurrence: Vec<usize>,
    pub total_monomials: usize,
    /// Number of distinct variables in each polynomial.
    pub noi: Vec<usize>,
}

pub fn degree_metrics(s: &PolySet) -> DegreeReport {
    let n = s.nvars();
    let mut r = DegreeReport {
        per_var_max_degree: vec![0; n],
        per_poly_total_degree: Vec::with_capacity(s.len()),
        tds: -1,
        stds: 0,
        poly_occurrence: vec![0; n],
        monomial_occurrence: vec![0; n],
        total_monomials: 0,
        noi: Vec::with_capacity(s.len()),
    };
    for p in s.polys() {
        let td = p.total_degree();
        r.per_poly_total_degree.push(td);
        r.tds = r.tds.max(td);
        r.stds += td.max(0);
        r.noi.push(p.noi());
        r.total_monomials += p.num_terms();
        for v in 0..n {
            if p.contains_var(v) {
                r.poly_occurrence[v] += 1;
                r.per_var_max_degree[v] = r.per_var_max_degree[v].max(p.degree(v) as u32);
            }
        }
        for t in p.terms() {
            for (v, &e) in t.exponents.iter().enumerate() {
                if e > 0 {
                    r.monomial_occurrence[v] += 1;
                }
            }
        }
    }
    r
}
