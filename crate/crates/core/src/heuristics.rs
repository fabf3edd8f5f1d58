//! Human variable-ordering heuristics (Brown, sotd, ndrr) and the TNoI
//! preconditioning rule.

use serde::{Deserialize, Serialize};

use crate::cad::{project_all, ProjectionLevels, VariableOrdering};
use crate::error::HeuristicError;
use crate::poly::{squarefree_basis, PolySet};
use crate::realroot::count_distinct_real_roots;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    Brown,
    Sotd,
    Ndrr,
}

impl Heuristic {
    /// In cheapness order, which is also the tie-break order.
    pub const ALL: [Heuristic; 3] = [Heuristic::Brown, Heuristic::Sotd, Heuristic::Ndrr];

    pub fn name(self) -> &'static str {
        match self {
            Heuristic::Brown => "brown",
            Heuristic::Sotd => "sotd",
            Heuristic::Ndrr => "ndrr",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicVerdict {
    pub chosen: VariableOrdering,
    /// Score per admissible ordering; `None` marks a failed projection.
    /// Empty for Brown, which scores variables.
    pub scores: Vec<(VariableOrdering, Option<u64>)>,
    /// Orderings attaining the optimum, in canonical order.
    pub tie_set: Vec<VariableOrdering>,
}

/// Brown's key for one variable: max degree, max total degree of a monomial
/// containing it, number of monomials containing it.
pub fn brown_key(s: &PolySet, v: usize) -> (u32, u32, usize) {
    let mut deg = 0;
    let mut td = 0;
    let mut count = 0;
    for t in s.polys().iter().flat_map(|p| p.terms()) {
        let e = t.exponents[v];
        if e > 0 {
            deg = deg.max(e);
            td = td.max(t.total_degree());
            count += 1;
        }
    }
    (deg, td, count)
}

/// Eliminates variables in ascending order of [`brown_key`], ties by index.
pub fn brown_order(s: &PolySet) -> HeuristicVerdict {
    let n = s.nvars();
    let keys: Vec<_> = (0..n).map(|v| brown_key(s, v)).collect();
    let mut elim: Vec<usize> = (0..n).collect();
    elim.sort_by_key(|&v| (keys[v], v));
    let tie_set = VariableOrdering::all(n)
        .into_iter()
        .filter(|o| o.elimination.windows(2).all(|w| keys[w[0]] <= keys[w[1]]))
        .collect();
    HeuristicVerdict {
        chosen: VariableOrdering { elimination: elim },
        scores: Vec::new(),
        tie_set,
    }
}

/// Sum of total degrees of all monomials in all projection levels.
pub fn sotd_score(levels: &ProjectionLevels) -> u64 {
    levels.sum_of_total_degrees()
}

/// Distinct real roots of the product of the univariate level, counted as
/// the sum over its pairwise-coprime square-free basis.
pub fn ndrr_score(levels: &ProjectionLevels) -> u64 {
    squarefree_basis(levels.univariate(), 0)
        .polys()
        .iter()
        .map(|p| count_distinct_real_roots(p).expect("univariate level") as u64)
        .sum()
}

/// Sum of per-polynomial distinct real root counts of the univariate level.
pub fn ndrr_per_polynomial(levels: &ProjectionLevels) -> u64 {
    levels
        .univariate()
        .polys()
        .iter()
        .map(|p| count_distinct_real_roots(p).expect("univariate level") as u64)
        .sum()
}

/// Minimizes `scores` (aligned with `admissible`); ties go to the first
/// admissible ordering.
pub fn verdict_from_scores(
    admissible: &[VariableOrdering],
    scores: Vec<Option<u64>>,
) -> Result<HeuristicVerdict, HeuristicError> {
    if admissible.is_empty() {
        return Err(HeuristicError::NoAdmissible);
    }
    let best = scores.iter().flatten().min().copied().ok_or(HeuristicError::AllFailed)?;
    let tie_set: Vec<VariableOrdering> = admissible
        .iter()
        .zip(&scores)
        .filter(|(_, s)| **s == Some(best))
        .map(|(o, _)| o.clone())
        .collect();
    Ok(HeuristicVerdict {
        chosen: tie_set[0].clone(),
        scores: admissible.iter().cloned().zip(scores).collect(),
        tie_set,
    })
}

fn by_projection(
    s: &PolySet,
    admissible: &[VariableOrdering],
    score: impl Fn(&ProjectionLevels) -> u64,
) -> Result<HeuristicVerdict, HeuristicError> {
    let scores = admissible
        .iter()
        .map(|o| project_all(s, o).ok().map(|l| score(&l)))
        .collect();
    verdict_from_scores(admissible, scores)
}

pub fn sotd_order(
    s: &PolySet,
    admissible: &[VariableOrdering],
) -> Result<HeuristicVerdict, HeuristicError> {
    by_projection(s, admissible, sotd_score)
}

pub fn ndrr_order(
    s: &PolySet,
    admissible: &[VariableOrdering],
) -> Result<HeuristicVerdict, HeuristicError> {
    by_projection(s, admissible, ndrr_score)
}

/// Total number of indeterminates: the sum over polynomials of the number of
/// variables each one contains.
pub fn tnoi(s: &PolySet) -> usize {
    s.polys().iter().map(|p| p.noi()).sum()
}

/// Precondition iff TNoI strictly decreases.
pub fn tnoi_decision(before: &PolySet, after: &PolySet) -> bool {
    tnoi(after) < tnoi(before)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Variable;

    fn x012(texts: &[&str]) -> PolySet {
        PolySet::parse(Variable::indexed(3), texts).unwrap()
    }

    fn xy(texts: &[&str]) -> PolySet {
        PolySet::parse(Variable::named(&["x", "y"]), texts).unwrap()
    }

    fn ord(e: &[usize]) -> VariableOrdering {
        VariableOrdering::new(e.to_vec()).unwrap()
    }

    #[test]
    fn brown_on_three_variable_set() {
        let s = x012(&["-6*x0^2 - x2^3 - 1", "x0^4*x2 + 9*x1", "x0 + x0^2 - x2*x0 - 5"]);
        let v = brown_order(&s);
        assert_eq!(v.chosen, ord(&[1, 2, 0]));
        assert_eq!(v.tie_set, vec![ord(&[1, 2, 0])]);
        assert!(v.scores.is_empty());
    }

    #[test]
    fn brown_symmetric_and_degree() {
        let v = brown_order(&xy(&["x^2 + y^2 - 1"]));
        assert_eq!(v.chosen, ord(&[0, 1]));
        assert_eq!(v.tie_set.len(), 2);
        assert_eq!(brown_order(&xy(&["x^2*y + 1"])).chosen, ord(&[1, 0]));
    }

    #[test]
    fn brown_later_tiers() {
        // equal degrees; z only occurs in a lower-degree monomial
        assert_eq!(brown_order(&x012(&["x0*x1 + x2"])).chosen, ord(&[2, 0, 1]));
        // equal degree and monomial degree; x occurs in more monomials
        assert_eq!(brown_order(&xy(&["x + y", "x - 1"])).chosen, ord(&[1, 0]));
    }

    #[test]
    fn sotd_symmetric_tie() {
        let s = xy(&["x^2 + y^2 - 1"]);
        let v = sotd_order(&s, &VariableOrdering::all(2)).unwrap();
        assert_eq!(v.chosen, ord(&[0, 1]));
        assert_eq!(v.tie_set.len(), 2);
    }

    #[test]
    fn sotd_prefers_smaller_projection() {
        // eliminating y: {y - x^2} -> {x} (coefficient -x^2); sotd 2+2+1 = 5 with x
        // eliminating x: {y - x^2} -> {y} via discriminant 4y; sotd 2+1+1 = 4
        let s = xy(&["y - x^2"]);
        let v = sotd_order(&s, &VariableOrdering::all(2)).unwrap();
        let scores: Vec<_> = v.scores.iter().map(|(_, s)| s.unwrap()).collect();
        for (o, sc) in &v.scores {
            let l = project_all(&s, o).unwrap();
            assert_eq!(sc.unwrap(), l.sum_of_total_degrees());
        }
        assert_ne!(scores[0], scores[1]);
        let best = if scores[0] < scores[1] { ord(&[0, 1]) } else { ord(&[1, 0]) };
        assert_eq!(v.chosen, best);
    }

    #[test]
    fn sotd_univariate() {
        let s = PolySet::parse(Variable::named(&["x"]), &["x^3 - x + 1"]).unwrap();
        let v = sotd_order(&s, &VariableOrdering::all(1)).unwrap();
        assert_eq!(v.scores[0].1, Some(4));
    }

    #[test]
    fn ndrr_counts() {
        let one = |t: &[&str]| {
            let s = PolySet::parse(Variable::named(&["x"]), t).unwrap();
            ndrr_score(&project_all(&s, &ord(&[0])).unwrap())
        };
        assert_eq!(one(&["x^2 + 1"]), 0);
        assert_eq!(one(&["x^2 - 1"]), 2);
        assert_eq!(one(&["x^2 - 1", "x - 1"]), 2);
        let s = PolySet::parse(Variable::named(&["x"]), &["x^2 - 1", "x - 1"]).unwrap();
        assert_eq!(ndrr_per_polynomial(&project_all(&s, &ord(&[0])).unwrap()), 3);
    }

    #[test]
    fn ndrr_matches_product() {
        let s = xy(&["x^2 - 2*y", "y^2 - x - 1", "x*y - 1"]);
        for o in VariableOrdering::all(2) {
            let l = project_all(&s, &o).unwrap();
            let s1 = l.univariate();
            let prod = s1
                .polys()
                .iter()
                .fold(crate::poly::Polynomial::one(s1.nvars()), |acc, p| &acc * p);
            assert_eq!(ndrr_score(&l), count_distinct_real_roots(&prod).unwrap() as u64);
        }
    }

    #[test]
    fn ndrr_picks_fewer_roots() {
        // eliminating y leaves x^2 + 1; eliminating x leaves y^2 - 1 (via y - ...)
        let s = xy(&["x^2 + 1", "y^2 - 1"]);
        let v = ndrr_order(&s, &VariableOrdering::all(2)).unwrap();
        assert_eq!(v.chosen, ord(&[1, 0]));
        assert_eq!(v.scores[1].1, Some(0));
        let all_zero = xy(&["x^2 + 1", "y^2 + 1"]);
        let v = ndrr_order(&all_zero, &VariableOrdering::all(2)).unwrap();
        assert_eq!(v.chosen, ord(&[0, 1]));
        assert_eq!(v.tie_set.len(), 2);
    }

    #[test]
    fn verdict_errors() {
        assert_eq!(verdict_from_scores(&[], vec![]), Err(HeuristicError::NoAdmissible));
        assert_eq!(
            verdict_from_scores(&[ord(&[0])], vec![None]),
            Err(HeuristicError::AllFailed)
        );
    }

    #[test]
    fn tnoi_values() {
        let v = Variable::named(&["x", "y", "z"]);
        let ef = PolySet::parse(
            v.clone(),
            &[
                "-12*y*z - 3*z",
                "17*x^2 - 6",
                "-2*y*z + 5*x",
                "-2*y*z - 9*y",
                "-15*x^2 - 19*y",
                "6*x*z + 3",
            ],
        )
        .unwrap();
        let gf = PolySet::parse(
            v.clone(),
            &["17*x^2 - 6", "4*y + 1", "z + 10*x", "-2*y*z - 9*y", "-15*x^2 - 19*y", "6*x*z + 3"],
        )
        .unwrap();
        assert_eq!(tnoi(&ef), 12);
        assert_eq!(tnoi(&gf), 10);
        assert!(tnoi_decision(&ef, &gf));
        assert!(!tnoi_decision(&gf, &ef));
        assert!(!tnoi_decision(&ef, &ef));
        assert_eq!(tnoi(&PolySet::empty(v)), 0);
    }
}
