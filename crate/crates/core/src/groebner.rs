//! Reduced Gröbner bases under pure lexicographic order (Buchberger).

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cad::VariableOrdering;
use crate::error::GroebnerError;
use crate::poly::{PolySet, Polynomial};
use crate::qarith::{igcd, qdiv, qmul, qneg, qsub};

/// Pure lexicographic order. `ranking[0]` is the highest variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialOrder {
    ranking: Vec<usize>,
}

impl MonomialOrder {
    /// Lex order ranking variables by a CAD ordering: the first variable
    /// eliminated is the highest.
    pub fn lex(ord: &VariableOrdering) -> Self {
        MonomialOrder {
            ranking: ord.elimination.clone(),
        }
    }

    /// `x_{n-1} > ... > x_0`.
    pub fn lex_descending(n: usize) -> Self {
        MonomialOrder {
            ranking: (0..n).rev().collect(),
        }
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn nvars(&self) -> usize {
        self.ranking.len()
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for &v in &self.ranking {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }

    fn to_lex(&self, p: &Polynomial) -> LPoly {
        let mut terms: LPoly = p
            .terms()
            .iter()
            .map(|t| {
                let e = self.ranking.iter().map(|&v| t.exponents[v]).collect();
                (e, t.coefficient.clone())
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        terms
    }

    fn from_lex(&self, p: &LPoly) -> Polynomial {
        let n = self.ranking.len();
        Polynomial::from_terms(
            n,
            p.iter().map(|(e, c)| {
                let mut x = vec![0; n];
                for (i, &v) in self.ranking.iter().enumerate() {
                    x[v] = e[i];
                }
                (x, c.clone())
            }),
        )
    }

    /// Leading exponent vector of a nonzero polynomial.
    pub fn leading_exponents(&self, p: &Polynomial) -> Option<Vec<u32>> {
        p.terms()
            .iter()
            .map(|t| &t.exponents)
            .max_by(|a, b| self.cmp(a, b))
            .cloned()
    }
}

// Terms in lex-permuted exponent order, sorted descending.
type LPoly = Vec<(Vec<u32>, BigRational)>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

// p - c * x^m * g
fn sub_scaled(p: &LPoly, c: &BigRational, m: &[u32], g: &LPoly) -> LPoly {
    let mut out = Vec::with_capacity(p.len() + g.len());
    let mut gi = g.iter().map(|(e, k)| {
        let e: Vec<u32> = e.iter().zip(m).map(|(a, b)| a + b).collect();
        (e, qmul(k, c))
    });
    let mut pi = p.iter();
    let mut a = pi.next().cloned();
    let mut b = gi.next();
    loop {
        match (a.take(), b.take()) {
            (None, None) => break,
            (Some(x), None) => {
                out.push(x);
                a = pi.next().cloned();
            }
            (None, Some(y)) => {
                out.push((y.0, qneg(&y.1)));
                b = gi.next();
            }
            (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                Ordering::Greater => {
                    out.push(x);
                    a = pi.next().cloned();
                    b = Some(y);
                }
                Ordering::Less => {
                    out.push((y.0, qneg(&y.1)));
                    a = Some(x);
                    b = gi.next();
                }
                Ordering::Equal => {
                    let d = qsub(&x.1, &y.1);
                    if !d.is_zero() {
                        out.push((x.0, d));
                    }
                    a = pi.next().cloned();
                    b = gi.next();
                }
            },
        }
    }
    out
}

// Full reduction of `f` by `gs`.
fn reduce(f: &LPoly, gs: &[LPoly]) -> LPoly {
    let mut p = f.clone();
    let mut r = Vec::new();
    while !p.is_empty() {
        let (m, c) = &p[0];
        match gs.iter().find(|g| divides(&g[0].0, m)) {
            Some(g) => {
                let q: Vec<u32> = m.iter().zip(&g[0].0).map(|(a, b)| a - b).collect();
                let k = qdiv(c, &g[0].1);
                p = sub_scaled(&p, &k, &q, g);
            }
            None => {
                r.push(p.remove(0));
            }
        }
    }
    r
}

// Integer-primitive with positive leading coefficient (in lex).
fn primitive(mut p: LPoly) -> LPoly {
    if p.is_empty() {
        return p;
    }
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for (_, c) in &p {
        den = &den / igcd(&den, c.denom()) * c.denom();
        num = igcd(&num, c.numer());
    }
    let mut f = crate::qarith::qnew(den, num);
    if p[0].1 < BigRational::zero() {
        f = qneg(&f);
    }
    for (_, c) in p.iter_mut() {
        *c = qmul(c, &f);
    }
    p
}

fn s_poly(f: &LPoly, g: &LPoly) -> LPoly {
    let l = lcm(&f[0].0, &g[0].0);
    let mf: Vec<u32> = l.iter().zip(&f[0].0).map(|(a, b)| a - b).collect();
    let mg: Vec<u32> = l.iter().zip(&g[0].0).map(|(a, b)| a - b).collect();
    // x^mf/lc(f) * f - x^mg/lc(g) * g
    let a = sub_scaled(&Vec::new(), &qneg(&f[0].1.recip()), &mf, f);
    sub_scaled(&a, &g[0].1.recip(), &mg, g)
}

/// S-polynomial of `f` and `g` under `order`, with leading coefficients
/// divided out.
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let (lf, lg) = (order.to_lex(f), order.to_lex(g));
    if lf.is_empty() || lg.is_empty() {
        return Polynomial::zero(order.nvars());
    }
    order.from_lex(&s_poly(&lf, &lg))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub generators: PolySet,
    pub order: MonomialOrder,
    pub reduced: bool,
}

/// Remainder of multivariate division of `f` by the generators of `g`.
pub fn normal_form(f: &Polynomial, g: &GroebnerBasis) -> Result<Polynomial, GroebnerError> {
    if g.generators.is_empty() {
        return Err(GroebnerError::EmptyBasis);
    }
    check_order(&g.order, f.nvars())?;
    let gs: Vec<LPoly> = g.generators.polys().iter().map(|p| g.order.to_lex(p)).collect();
    Ok(g.order.from_lex(&reduce(&g.order.to_lex(f), &gs)))
}

fn check_order(order: &MonomialOrder, n: usize) -> Result<(), GroebnerError> {
    if order.nvars() != n {
        return Err(GroebnerError::OrderMismatch {
            expected: n,
            got: order.nvars(),
        });
    }
    Ok(())
}

/// Reduced Gröbner basis of the ideal generated by `e`.
///
/// Pairs are taken smallest lcm first; pairs with coprime leading monomials
/// and pairs covered by Buchberger's chain criterion are skipped.
pub fn buchberger(e: &PolySet, order: &MonomialOrder) -> Result<GroebnerBasis, GroebnerError> {
    check_order(order, e.nvars())?;
    if e.is_empty() {
        return Err(GroebnerError::EmptyInput);
    }
    let mut gs: Vec<LPoly> = e.polys().iter().map(|p| primitive(order.to_lex(p))).collect();
    gs.sort();
    gs.dedup();
    let finish = |gs: Vec<LPoly>| -> GroebnerBasis {
        let polys = gs.iter().map(|p| order.from_lex(p).normalize());
        GroebnerBasis {
            generators: PolySet::new(e.variables().to_vec(), polys),
            order: order.clone(),
            reduced: true,
        }
    };
    if gs.iter().any(|g| g[0].0.iter().all(|&x| x == 0)) {
        let one = vec![(vec![0; e.nvars()], BigRational::one())];
        return Ok(finish(vec![one]));
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..gs.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while !pairs.is_empty() {
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                let (i, j) = pairs[a];
                let (k, l) = pairs[b];
                lcm(&gs[i][0].0, &gs[j][0].0)
                    .cmp(&lcm(&gs[k][0].0, &gs[l][0].0))
                    .then((i, j).cmp(&(k, l)))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pick);
        let (li, lj) = (&gs[i][0].0, &gs[j][0].0);
        if coprime(li, lj) {
            continue;
        }
        let l = lcm(li, lj);
        let chain = (0..gs.len()).any(|k| {
            k != i
                && k != j
                && divides(&gs[k][0].0, &l)
                && !pairs.contains(&(i.min(k), i.max(k)))
                && !pairs.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let h = primitive(reduce(&s_poly(&gs[i], &gs[j]), &gs));
        if h.is_empty() {
            continue;
        }
        if h[0].0.iter().all(|&x| x == 0) {
            return Ok(finish(vec![h]));
        }
        let n = gs.len();
        gs.push(h);
        for k in 0..n {
            pairs.push((k, n));
        }
    }

    // Minimal basis: drop generators whose leading monomial is a multiple of
    // another's (keeping the first of equal leading monomials).
    let mut keep: Vec<LPoly> = Vec::new();
    for (i, g) in gs.iter().enumerate() {
        let redundant = gs.iter().enumerate().any(|(k, h)| {
            k != i && divides(&h[0].0, &g[0].0) && (h[0].0 != g[0].0 || k < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // Inter-reduce.
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<LPoly> = keep
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, p)| p.clone())
            .collect();
        let head = vec![keep[i][0].clone()];
        let tail: LPoly = keep[i][1..].to_vec();
        let mut r = head;
        r.extend(reduce(&tail, &others));
        reduced.push(primitive(r));
    }
    reduced.sort_by(|a, b| a[0].0.cmp(&b[0].0));
    Ok(finish(reduced))
}

/// Result of Gröbner preconditioning: `before = E ∪ F`, `after = G ∪ F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preconditioned {
    pub g: GroebnerBasis,
    pub before: PolySet,
    pub after: PolySet,
}

pub fn precondition(
    e: &PolySet,
    f: &PolySet,
    order: &MonomialOrder,
) -> Result<Preconditioned, GroebnerError> {
    let g = buchberger(e, order)?;
    Ok(Preconditioned {
        before: e.union(f),
        after: g.generators.union(f),
        g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Variable;
    use proptest::prelude::*;

    fn xyz() -> Vec<Variable> {
        Variable::named(&["x", "y", "z"])
    }

    fn set(texts: &[&str]) -> PolySet {
        PolySet::parse(xyz(), texts).unwrap()
    }

    fn zyx() -> MonomialOrder {
        MonomialOrder::lex_descending(3)
    }

    #[test]
    fn worked_basis() {
        let e = set(&["-12*y*z - 3*z", "17*x^2 - 6", "-2*y*z + 5*x"]);
        let g = buchberger(&e, &zyx()).unwrap();
        assert!(g
            .generators
            .same_set(&set(&["17*x^2 - 6", "4*y + 1", "z + 10*x"])));
    }

    #[test]
    fn already_reduced() {
        let g = buchberger(&set(&["x", "y"]), &zyx()).unwrap();
        assert_eq!(g.generators.to_strings(), vec!["x", "y"]);
    }

    #[test]
    fn redundant_generator_removed() {
        let g = buchberger(&set(&["x^2 - 1", "x - 1"]), &zyx()).unwrap();
        assert_eq!(g.generators.to_strings(), vec!["x - 1"]);
    }

    #[test]
    fn unit_ideal() {
        let g = buchberger(&set(&["x*y - 1", "x"]), &zyx()).unwrap();
        assert_eq!(g.generators.to_strings(), vec!["1"]);
    }

    #[test]
    fn normal_forms() {
        let g = buchberger(&set(&["x - 1"]), &zyx()).unwrap();
        let nf = |t: &str| normal_form(&set(&[t]).polys()[0], &g).unwrap();
        assert_eq!(nf("x^2"), Polynomial::one(3));
        assert!(nf("x - 1").is_zero());
        assert_eq!(nf("5"), Polynomial::from_int(3, 5));
        let empty = GroebnerBasis {
            generators: PolySet::empty(xyz()),
            order: zyx(),
            reduced: true,
        };
        assert_eq!(
            normal_form(&Polynomial::one(3), &empty),
            Err(GroebnerError::EmptyBasis)
        );
    }

    #[test]
    fn preconditioning() {
        let e = set(&["-12*y*z - 3*z", "17*x^2 - 6", "-2*y*z + 5*x"]);
        let f = set(&["-2*y*z - 9*y", "-15*x^2 - 19*y", "6*x*z + 3"]);
        let p = precondition(&e, &f, &zyx()).unwrap();
        assert_eq!(p.before.len(), 6);
        assert_eq!(p.after.len(), 6);
        let q = precondition(&set(&["1"]), &PolySet::empty(xyz()), &zyx()).unwrap();
        assert_eq!(q.after.to_strings(), vec!["1"]);
    }

    #[test]
    fn order_from_cad_ordering() {
        let ord = VariableOrdering::new(vec![2, 1, 0]).unwrap();
        assert_eq!(MonomialOrder::lex(&ord), zyx());
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -5i64..=5), 1..3).prop_map(|ts| {
            Polynomial::from_terms(
                3,
                ts.into_iter()
                    .map(|((a, b, c), k)| (vec![a, b, c], BigRational::from_integer(k.into()))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn basis_certificate(ps in prop::collection::vec(small_poly(), 1..4)) {
            let ps: Vec<_> = ps.into_iter().filter(|p| !p.is_zero()).collect();
            prop_assume!(!ps.is_empty());
            let e = PolySet::new(xyz(), ps.clone());
            let g = buchberger(&e, &zyx()).unwrap();
            for p in &ps {
                prop_assert!(normal_form(p, &g).unwrap().is_zero());
            }
            let gens = g.generators.polys();
            for a in gens {
                for b in gens {
                    let s = s_polynomial(a, b, &g.order);
                    prop_assert!(normal_form(&s, &g).unwrap().is_zero());
                }
            }
            let mut rev = ps.clone();
            rev.reverse();
            let g2 = buchberger(&PolySet::new(xyz(), rev), &zyx()).unwrap();
            prop_assert_eq!(g2.generators.to_strings(), g.generators.to_strings());
        }
    }
}
