//! Cylindrical algebraic decomposition by McCallum projection and lifting,
//! reporting cell counts.

mod lift;
mod projection;
pub mod tower;

use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::CadError;
use crate::poly::{PolySet, Variable};

pub use lift::{cell_count, sign_at, SamplePoint};
pub use projection::mccallum_step;

/// A variable ordering, listed from the first-eliminated variable to the
/// last-eliminated one. Entries are problem variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VariableOrdering {
    pub elimination: Vec<usize>,
}

impl VariableOrdering {
    pub fn new(elimination: Vec<usize>) -> Result<Self, CadError> {
        let n = elimination.len();
        let mut seen = vec![false; n];
        for &v in &elimination {
            if v >= n || seen[v] {
                return Err(CadError::InvalidOrdering(n));
            }
            seen[v] = true;
        }
        Ok(VariableOrdering { elimination })
    }

    /// All orderings of `n` variables, lexicographic in the elimination sequence.
    pub fn all(n: usize) -> Vec<VariableOrdering> {
        fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<VariableOrdering>) {
            if cur.len() == used.len() {
                out.push(VariableOrdering {
                    elimination: cur.clone(),
                });
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.elimination.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elimination.is_empty()
    }

    /// Problem-to-internal renaming: the last-eliminated variable becomes
    /// internal variable 0 and the first-eliminated becomes `n - 1`.
    pub fn internal_perm(&self) -> Vec<usize> {
        let n = self.len();
        let mut perm = vec![0; n];
        for (pos, &v) in self.elimination.iter().enumerate() {
            perm[v] = n - 1 - pos;
        }
        perm
    }

    /// Internal-to-problem renaming.
    pub fn external_perm(&self) -> Vec<usize> {
        let n = self.len();
        (0..n).map(|i| self.elimination[n - 1 - i]).collect()
    }

    pub fn display<'a>(&'a self, vars: &'a [Variable]) -> OrderingDisplay<'a> {
        OrderingDisplay { ord: self, vars }
    }
}

pub struct OrderingDisplay<'a> {
    ord: &'a VariableOrdering,
    vars: &'a [Variable],
}

impl fmt::Display for OrderingDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.ord.elimination.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&self.vars[v].name)?;
        }
        Ok(())
    }
}

/// Projection sets `S_n, ..., S_1`. Level `S_k` holds polynomials in the
/// last `k` variables of the elimination sequence, stored in internal
/// variables (internal variable `i` is the `(n - i)`-th eliminated).
#[derive(Clone, Debug)]
pub struct ProjectionLevels {
    pub ordering: VariableOrdering,
    /// `levels[0]` is `S_n`, the last entry is `S_1`.
    pub levels: Vec<PolySet>,
}

impl ProjectionLevels {
    /// `S_k` for `k` in `1..=n`.
    pub fn level(&self, k: usize) -> &PolySet {
        &self.levels[self.levels.len() - k]
    }

    pub fn univariate(&self) -> &PolySet {
        self.levels.last().expect("at least one level")
    }

    /// Sum over every polynomial of every level of the total degrees of its
    /// monomials.
    pub fn sum_of_total_degrees(&self) -> u64 {
        self.levels
            .iter()
            .flat_map(|s| s.polys())
            .flat_map(|p| p.terms())
            .map(|t| t.total_degree() as u64)
            .sum()
    }

    /// The levels renamed back to problem variables.
    pub fn external(&self, vars: &[Variable]) -> Vec<PolySet> {
        let back = self.ordering.external_perm();
        self.levels
            .iter()
            .map(|s| {
                PolySet::new(
                    vars.to_vec(),
                    s.polys().iter().map(|p| p.rename(&back, vars.len())),
                )
            })
            .collect()
    }
}

/// Renames a problem set into internal variables for `ord`.
pub(crate) fn to_internal(s: &PolySet, ord: &VariableOrdering) -> PolySet {
    let perm = ord.internal_perm();
    let n = s.nvars();
    let vars: Vec<Variable> = (0..n)
        .map(|i| Variable::new(i, s.variables()[ord.external_perm()[i]].name.clone()))
        .collect();
    PolySet::new(vars, s.polys().iter().map(|p| p.rename(&perm, n)))
}

pub fn project_all(s: &PolySet, ord: &VariableOrdering) -> Result<ProjectionLevels, CadError> {
    if ord.len() != s.nvars() {
        return Err(CadError::InvalidOrdering(s.nvars()));
    }
    let internal = to_internal(s, ord);
    let top = projection::clean(&internal, internal.polys().to_vec());
    if top.is_empty() {
        return Err(CadError::EmptyInput);
    }
    let n = s.nvars();
    let mut levels = vec![top];
    for k in (1..n).rev() {
        let next = projection::step(levels.last().expect("nonempty"), k);
        levels.push(next);
    }
    Ok(ProjectionLevels {
        ordering: ord.clone(),
        levels,
    })
}

#[derive(Clone, Debug)]
pub struct Limits {
    pub cell_cap: u64,
    pub time_cap: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            cell_cap: 200_000,
            time_cap: Some(Duration::from_secs(60)),
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            cell_cap: u64::MAX,
            time_cap: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CadStatus {
    Completed,
    CellCapExceeded,
    TimeCapExceeded,
    NotWellOriented,
}

impl CadStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CadStatus::Completed => "completed",
            CadStatus::CellCapExceeded => "cell_cap_exceeded",
            CadStatus::TimeCapExceeded => "time_cap_exceeded",
            CadStatus::NotWellOriented => "not_well_oriented",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CadResult {
    /// Number of cells of the full-dimensional decomposition; present only
    /// when the run completed.
    pub cell_count: Option<u64>,
    /// Cells of the induced decomposition of each `R^k`, `k = 1..=n`, as far
    /// as lifting got.
    pub per_level_cells: Vec<u64>,
    pub status: CadStatus,
}

impl CadResult {
    pub fn completed(&self) -> bool {
        self.status == CadStatus::Completed
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(texts: &[&str]) -> PolySet {
        PolySet::parse(Variable::named(&["x", "y"]), texts).unwrap()
    }

    #[test]
    fn ordering_enumeration() {
        let all = VariableOrdering::all(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].elimination, vec![0, 1, 2]);
        assert_eq!(all[1].elimination, vec![0, 2, 1]);
        assert_eq!(all[5].elimination, vec![2, 1, 0]);
        assert!(VariableOrdering::new(vec![0, 0]).is_err());
    }

    #[test]
    fn circle_projection() {
        let s = xy(&["x^2 + y^2 - 1"]);
        let ord = VariableOrdering::new(vec![1, 0]).unwrap();
        let levels = project_all(&s, &ord).unwrap();
        let ext = levels.external(s.variables());
        assert_eq!(ext[0].to_strings(), vec!["x^2 + y^2 - 1"]);
        assert_eq!(ext[1].to_strings(), vec!["x^2 - 1"]);
    }

    #[test]
    fn step_examples() {
        let s = xy(&["x^2 + y^2 - 1"]);
        assert_eq!(mccallum_step(&s, 1).unwrap().to_strings(), vec!["x^2 - 1"]);
        let s = xy(&["y - x"]);
        assert_eq!(mccallum_step(&s, 1).unwrap().to_strings(), vec!["x"]);
        let s = xy(&[]);
        assert!(mccallum_step(&s, 1).unwrap().is_empty());
        let s = xy(&["x"]);
        assert_eq!(mccallum_step(&s, 1), Err(CadError::VariableAbsent(1)));
    }

    #[test]
    fn univariate_projection_is_identity() {
        let s = PolySet::parse(Variable::named(&["x"]), &["x^2 - 2"]).unwrap();
        let ord = VariableOrdering::new(vec![0]).unwrap();
        let levels = project_all(&s, &ord).unwrap();
        assert_eq!(levels.levels.len(), 1);
        assert_eq!(levels.univariate().to_strings(), vec!["x^2 - 2"]);
    }
}
