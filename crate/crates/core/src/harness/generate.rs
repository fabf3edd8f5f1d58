use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::problem::{Constraint, ProblemInstance, Relation, FORMAT_VERSION};
use crate::error::HarnessError;
use crate::poly::Polynomial;

pub const VARIABLES: [&str; 3] = ["x", "y", "z"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSpec {
    pub count: usize,
    pub degrees: Vec<u32>,
    pub coeff_range: (i64, i64),
    pub max_terms: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(count: usize, degrees: Vec<u32>, seed: u64) -> Self {
        GenSpec {
            count,
            degrees,
            coeff_range: (-20, 20),
            max_terms: 2,
            seed,
        }
    }

    fn check(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::InfeasibleSpec(m.to_string()));
        if self.count == 0 {
            return bad("count must be positive");
        }
        if self.degrees.is_empty() || self.degrees.iter().any(|d| !(2..=4).contains(d)) {
            return bad("degrees must be a nonempty subset of {2, 3, 4}");
        }
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d.dedup();
        if d.len() != self.degrees.len() {
            return bad("repeated degree");
        }
        if !self.count.is_multiple_of(self.degrees.len()) {
            return bad("count must be a multiple of the number of degrees");
        }
        let (lo, hi) = self.coeff_range;
        if lo > hi || (lo == 0 && hi == 0) {
            return bad("coefficient range has no nonzero integer");
        }
        if self.max_terms == 0 {
            return bad("max_terms must be positive");
        }
        Ok(())
    }
}

/// A generated dataset: the generator spec plus the problems.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub format_version: u64,
    pub generator: GenSpec,
    pub problems: Vec<ProblemInstance>,
}

// Exponent vectors over three variables with total degree exactly d.
fn monomials_of_degree(d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for a in 0..=d {
        for b in 0..=d - a {
            out.push(vec![a, b, d - a - b]);
        }
    }
    out
}

fn coefficient(rng: &mut ChaCha8Rng, (lo, hi): (i64, i64)) -> i64 {
    loop {
        let c = rng.gen_range(lo..=hi);
        if c != 0 {
            return c;
        }
    }
}

/// One term of total degree exactly `d`, the rest of degree at most `d`, all
/// monomials distinct.
fn random_poly(rng: &mut ChaCha8Rng, d: u32, spec: &GenSpec) -> Polynomial {
    let top = monomials_of_degree(d);
    let all: Vec<Vec<u32>> = (0..=d).flat_map(monomials_of_degree).collect();
    let mut chosen = vec![top.choose(rng).expect("nonempty").clone()];
    let want = spec.max_terms.min(all.len());
    while chosen.len() < want {
        let m = all.choose(rng).expect("nonempty");
        if !chosen.contains(m) {
            chosen.push(m.clone());
        }
    }
    Polynomial::from_terms(
        3,
        chosen.into_iter().map(|e| {
            let c = coefficient(rng, spec.coeff_range);
            (e, BigRational::from_integer(c.into()))
        }),
    )
}

fn three_distinct(rng: &mut ChaCha8Rng, d: u32, spec: &GenSpec) -> Vec<Polynomial> {
    let mut out: Vec<Polynomial> = Vec::new();
    while out.len() < 3 {
        let p = random_poly(rng, d, spec);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Problem `i` gets degree `degrees[i % len]` and its own ChaCha8 stream, so
/// each problem depends only on `(seed, i)`.
pub fn generate_problem(spec: &GenSpec, i: usize) -> ProblemInstance {
    let d = spec.degrees[i % spec.degrees.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(i as u64);
    let names: Vec<String> = VARIABLES.iter().map(|s| s.to_string()).collect();
    let show = |p: &Polynomial| p.display(&names).to_string();
    let e = three_distinct(&mut rng, d, spec);
    let f = three_distinct(&mut rng, d, spec);
    ProblemInstance {
        id: format!("p{i:05}"),
        variables: names.clone(),
        e: e.iter().map(show).collect(),
        f: f.iter()
            .map(|p| Constraint {
                poly: show(p),
                rel: *Relation::ALL.choose(&mut rng).expect("nonempty"),
            })
            .collect(),
        seed: spec.seed,
    }
}

pub fn gen_dataset(spec: &GenSpec) -> Result<Dataset, HarnessError> {
    spec.check()?;
    Ok(Dataset {
        format_version: FORMAT_VERSION,
        generator: spec.clone(),
        problems: (0..spec.count).map(|i| generate_problem(spec, i)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_spec() {
        let d = gen_dataset(&GenSpec::new(4, vec![2], 1)).unwrap();
        assert_eq!(d.problems.len(), 4);
        for p in &d.problems {
            let s = p.all_polys().unwrap();
            assert!(s.polys().iter().all(|q| q.total_degree() <= 2));
        }
    }

    #[test]
    fn infeasible() {
        for spec in [
            GenSpec::new(0, vec![2], 1),
            GenSpec::new(3, vec![2, 3], 1),
            GenSpec::new(2, vec![5], 1),
            GenSpec { coeff_range: (0, 0), ..GenSpec::new(2, vec![2], 1) },
        ] {
            assert!(matches!(gen_dataset(&spec), Err(HarnessError::InfeasibleSpec(_))));
        }
    }

    #[test]
    fn reproducible() {
        let s = GenSpec::new(6, vec![2, 3, 4], 42);
        assert_eq!(gen_dataset(&s).unwrap(), gen_dataset(&s).unwrap());
        assert_ne!(
            gen_dataset(&s).unwrap().problems,
            gen_dataset(&GenSpec { seed: 43, ..s }).unwrap().problems
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn constraints_hold(seed in any::<u64>(), per in 1usize..4) {
            let spec = GenSpec::new(3 * per, vec![2, 3, 4], seed);
            let d = gen_dataset(&spec).unwrap();
            for (i, p) in d.problems.iter().enumerate() {
                let deg = spec.degrees[i % 3] as i64;
                prop_assert_eq!(p.e.len(), 3);
                prop_assert_eq!(p.f.len(), 3);
                let e = p.equalities().unwrap();
                let f = p.constraints().unwrap();
                prop_assert_eq!(e.len(), 3);
                prop_assert_eq!(f.len(), 3);
                for q in e.polys().iter().chain(f.polys()) {
                    prop_assert!(q.num_terms() <= 2);
                    prop_assert_eq!(q.total_degree(), deg);
                    for t in q.terms() {
                        let c = t.coefficient.to_integer();
                        prop_assert!(t.coefficient.is_integer());
                        prop_assert!(c != 0.into() && c >= (-20).into() && c <= 20.into());
                    }
                }
            }
            for deg in [2, 3, 4] {
                let n = d.problems.iter().enumerate().filter(|(i, _)| spec.degrees[i % 3] == deg).count();
                prop_assert_eq!(n, per);
            }
        }
    }
}
