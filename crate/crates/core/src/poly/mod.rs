//! Exact sparse multivariate polynomials over the rationals.
//!
//! Terms are stored in graded-lexicographic order (total degree first, then
//! exponents compared from variable 0 upwards). This order is only a storage
//! canon; CAD variable orderings and Groebner monomial orders are handled by
//! the modules that need them.

mod algebra;
mod metrics;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use algebra::{
    content_in, discriminant, gcd, primitive_part_in, pseudo_remainder, resultant,
    resultant_sylvester, squarefree_basis, squarefree_part_in,
};
pub use metrics::{degree_metrics, DegreeReport};
pub use parse::{parse_polynomial, ParseError};

use crate::error::PolyError;
use crate::qarith::{igcd, qadd, qdiv, qmul, qnew, qsub};

/// A problem variable. Indices are dense `0..n` within a problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub index: usize,
    pub name: String,
}

impl Variable {
    pub fn new(index: usize, name: impl Into<String>) -> Self {
        Variable {
            index,
            name: name.into(),
        }
    }

    /// `n` variables named `x0..x{n-1}`.
    pub fn indexed(n: usize) -> Vec<Variable> {
        (0..n).map(|i| Variable::new(i, format!("x{i}"))).collect()
    }

    pub fn named(names: &[&str]) -> Vec<Variable> {
        names
            .iter()
            .enumerate()
            .map(|(i, n)| Variable::new(i, *n))
            .collect()
    }
}

/// A single term: nonzero coefficient times a power product.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exponents: Vec<u32>,
    pub coefficient: BigRational,
}

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.exponents.get(v).is_some_and(|&e| e > 0)
    }
}

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    nvars: usize,
    // descending grlex, no zero coefficients, no repeated exponents
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, BigRational::from_integer(c.into()))
    }

    /// The variable `x_v` as a polynomial.
    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Self::from_terms(nvars, [(e, BigRational::one())])
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging repeated
    /// exponent vectors and dropping zero coefficients.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&e) {
                Some(slot) => *slot = qadd(slot, &c),
                None => {
                    acc.insert(e, c);
                }
            }
        }
        Self::from_map(nvars, acc)
    }

    fn from_map(nvars: usize, acc: HashMap<Vec<u32>, BigRational>) -> Self {
        let mut terms: Vec<Monomial> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(exponents, coefficient)| Monomial {
                exponents,
                coefficient,
            })
            .collect();
        terms.sort_by(|a, b| grlex_cmp(&b.exponents, &a.exponents));
        Polynomial { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].total_degree() == 0)
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].coefficient.clone())
        } else {
            None
        }
    }

    /// Leading term under the storage order.
    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    /// Total degree; the zero polynomial has total degree -1.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .iter()
            .map(|t| t.total_degree() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Degree in `v`; -1 for the zero polynomial.
    pub fn degree(&self, v: usize) -> i64 {
        self.terms
            .iter()
            .map(|t| t.exponents[v] as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.iter().any(|t| t.exponents[v] > 0)
    }

    /// Indices of the variables that occur.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.contains_var(v)).collect()
    }

    /// Number of indeterminates that occur; 0 for constants.
    pub fn noi(&self) -> usize {
        self.vars().len()
    }

    /// Highest-index variable that occurs.
    pub fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.contains_var(v))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|t| Monomial {
                    exponents: t.exponents.clone(),
                    coefficient: qmul(&t.coefficient, c),
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by `x_v^k`.
    pub fn shift(&self, v: usize, k: u32) -> Self {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.exponents[v] += k;
        }
        p
    }

    pub fn derivative(&self, v: usize) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().filter(|t| t.exponents[v] > 0).map(|t| {
                let mut e = t.exponents.clone();
                let k = e[v];
                e[v] -= 1;
                (e, &t.coefficient * BigRational::from_integer(k.into()))
            }),
        )
    }

    /// Substitutes the rational `value` for `x_v`. The variable count is kept.
    pub fn substitute(&self, v: usize, value: &BigRational) -> Self {
        let maxd = self.degree(v).max(0) as usize;
        let mut powers = Vec::with_capacity(maxd + 1);
        powers.push(BigRational::one());
        for i in 1..=maxd {
            let p = qmul(&powers[i - 1], value);
            powers.push(p);
        }
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|t| {
                let mut e = t.exponents.clone();
                let k = e[v] as usize;
                e[v] = 0;
                (e, qmul(&t.coefficient, &powers[k]))
            }),
        )
    }

    /// Evaluates at a full rational point.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for t in &self.terms {
            let mut m = t.coefficient.clone();
            for (v, &k) in t.exponents.iter().enumerate() {
                if k > 0 {
                    m = qmul(&m, &num_traits::pow(point[v].clone(), k as usize));
                }
            }
            acc = qadd(&acc, &m);
        }
        acc
    }

    /// Coefficients with respect to `x_v`: entry `i` is the coefficient of
    /// `x_v^i`, a polynomial free of `x_v`. Empty for the zero polynomial.
    pub fn coeffs_in(&self, v: usize) -> Vec<Polynomial> {
        let d = self.degree(v);
        if d < 0 {
            return Vec::new();
        }
        let mut buckets: Vec<Vec<Monomial>> = vec![Vec::new(); d as usize + 1];
        for t in &self.terms {
            let k = t.exponents[v] as usize;
            let mut e = t.exponents.clone();
            e[v] = 0;
            buckets[k].push(Monomial {
                exponents: e,
                coefficient: t.coefficient.clone(),
            });
        }
        buckets
            .into_iter()
            .map(|terms| {
                // filtering by x_v exponent preserves the relative grlex order
                Polynomial {
                    nvars: self.nvars,
                    terms,
                }
            })
            .collect()
    }

    /// Inverse of [`Polynomial::coeffs_in`].
    pub fn from_coeffs_in(nvars: usize, v: usize, coeffs: &[Polynomial]) -> Self {
        let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            for t in &c.terms {
                let mut e = t.exponents.clone();
                e[v] += k as u32;
                *acc.entry(e).or_insert_with(BigRational::zero) += &t.coefficient;
            }
        }
        Self::from_map(nvars, acc)
    }

    /// Leading coefficient with respect to `x_v`.
    pub fn lc_in(&self, v: usize) -> Polynomial {
        self.coeffs_in(v)
            .pop()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    /// Renames variables: `x_i` becomes `x_{perm[i]}` in a ring of
    /// `new_nvars` variables.
    pub fn rename(&self, perm: &[usize], new_nvars: usize) -> Self {
        Self::from_terms(
            new_nvars,
            self.terms.iter().map(|t| {
                let mut e = vec![0; new_nvars];
                for (i, &k) in t.exponents.iter().enumerate() {
                    if k > 0 {
                        e[perm[i]] = k;
                    }
                }
                (e, t.coefficient.clone())
            }),
        )
    }

    /// Scales to an integer-primitive polynomial whose leading coefficient
    /// (storage order) is positive. Zero stays zero.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        let mut num_gcd = BigInt::zero();
        for t in &self.terms {
            let d = t.coefficient.denom();
            if !d.is_one() {
                den_lcm = &den_lcm / igcd(&den_lcm, d) * d;
            }
            if !num_gcd.is_one() {
                num_gcd = igcd(&num_gcd, t.coefficient.numer());
            }
        }
        let mut factor = qnew(den_lcm, num_gcd);
        if self.terms[0].coefficient.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn is_normalized(&self) -> bool {
        self == &self.normalize()
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Polynomial) -> Option<Polynomial> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(self.clone());
        }
        if let Some(c) = other.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let lt = &other.terms[0];
        let mut rem = self.clone();
        let mut quot: Vec<(Vec<u32>, BigRational)> = Vec::new();
        while let Some(r) = rem.terms.first() {
            if r.exponents.iter().zip(&lt.exponents).any(|(a, b)| a < b) {
                return None;
            }
            let e: Vec<u32> = r
                .exponents
                .iter()
                .zip(&lt.exponents)
                .map(|(a, b)| a - b)
                .collect();
            let c = qdiv(&r.coefficient, &lt.coefficient);
            let t = Polynomial {
                nvars: self.nvars,
                terms: vec![Monomial {
                    exponents: e.clone(),
                    coefficient: c.clone(),
                }],
            };
            rem = &rem - &(&t * other);
            quot.push((e, c));
        }
        Some(Self::from_terms(self.nvars, quot))
    }

    /// Formats with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }

    /// Formats with default names `x0, x1, ...`.
    pub fn to_string_default(&self) -> String {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        self.display(&names).to_string()
    }
}

fn combine(a: &Polynomial, b: &Polynomial, negate_b: bool) -> Polynomial {
    assert_eq!(a.nvars, b.nvars, "variable count mismatch");
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let ord = match (a.terms.get(i), b.terms.get(j)) {
            (Some(x), Some(y)) => grlex_cmp(&x.exponents, &y.exponents),
            (Some(_), None) => Ordering::Greater,
            (None, Some(_)) => Ordering::Less,
            (None, None) => unreachable!(),
        };
        match ord {
            Ordering::Greater => {
                out.push(a.terms[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let mut t = b.terms[j].clone();
                if negate_b {
                    t.coefficient = -t.coefficient;
                }
                out.push(t);
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b {
                    qsub(&a.terms[i].coefficient, &b.terms[j].coefficient)
                } else {
                    qadd(&a.terms[i].coefficient, &b.terms[j].coefficient)
                };
                if !c.is_zero() {
                    out.push(Monomial {
                        exponents: a.terms[i].exponents.clone(),
                        coefficient: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    Polynomial {
        nvars: a.nvars,
        terms: out,
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        combine(self, rhs, true)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        let mut acc: HashMap<Vec<u32>, BigRational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let e: Vec<u32> = a
                    .exponents
                    .iter()
                    .zip(&b.exponents)
                    .map(|(x, y)| x + y)
                    .collect();
                let c = qmul(&a.coefficient, &b.coefficient);
                match acc.get_mut(&e) {
                    Some(slot) => *slot = qadd(slot, &c),
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        Polynomial::from_map(self.nvars, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (i, t) in self.poly.terms.iter().enumerate() {
            let c = &t.coefficient;
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = t.total_degree() == 0;
            if !mag.is_one() || is_const {
                factors.push(mag.to_string());
            }
            for (v, &k) in t.exponents.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(self.names[v].clone()),
                    _ => factors.push(format!("{}^{}", self.names[v], k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_default())
    }
}

/// A set of polynomials over a shared variable list.
///
/// Zero polynomials are dropped and exact duplicates removed; insertion order
/// of first occurrences is kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySet {
    polys: Vec<Polynomial>,
    variables: Vec<Variable>,
}

impl PolySet {
    pub fn new(variables: Vec<Variable>, polys: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut out = PolySet {
            polys: Vec::new(),
            variables,
        };
        for p in polys {
            out.insert(p);
        }
        out
    }

    pub fn empty(variables: Vec<Variable>) -> Self {
        PolySet {
            polys: Vec::new(),
            variables,
        }
    }

    /// Parses each string with the given variables.
    pub fn parse(variables: Vec<Variable>, texts: &[&str]) -> Result<Self, PolyError> {
        let polys = texts
            .iter()
            .map(|t| parse_polynomial(t, &variables))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PolySet::new(variables, polys))
    }

    pub fn insert(&mut self, p: Polynomial) {
        assert_eq!(p.nvars(), self.variables.len(), "variable count mismatch");
        if !p.is_zero() && !self.polys.contains(&p) {
            self.polys.push(p);
        }
    }

    pub fn union(&self, other: &PolySet) -> PolySet {
        let mut out = self.clone();
        for p in &other.polys {
            out.insert(p.clone());
        }
        out
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn nvars(&self) -> usize {
        self.variables.len()
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    /// Same polynomials up to order.
    pub fn same_set(&self, other: &PolySet) -> bool {
        self.len() == other.len() && self.polys.iter().all(|p| other.polys.contains(p))
    }

    /// Normalized copies with constants dropped, deduplicated.
    pub fn normalized(&self) -> PolySet {
        PolySet::new(
            self.variables.clone(),
            self.polys
                .iter()
                .filter(|p| !p.is_constant())
                .map(|p| p.normalize()),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        let names = self.names();
        self.polys
            .iter()
            .map(|p| p.display(&names).to_string())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &Variable::named(&["x", "y", "z"])).unwrap()
    }

    #[test]
    fn zero_polynomial_conventions() {
        let z = Polynomial::zero(2);
        assert_eq!(z.total_degree(), -1);
        assert_eq!(z.noi(), 0);
        assert_eq!(z.degree(0), -1);
    }

    #[test]
    fn coefficient_views_round_trip() {
        let f = p("x^2*y + 3*y^2 - x + 7");
        let cs = f.coeffs_in(1);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[2], p("3"));
        assert_eq!(cs[1], p("x^2"));
        assert_eq!(Polynomial::from_coeffs_in(3, 1, &cs), f);
    }

    #[test]
    fn normalize_makes_integer_primitive_positive() {
        let f = p("-6*x^2 - 4*y");
        assert_eq!(f.normalize(), p("3*x^2 + 2*y"));
        let g = p("1/2*x + 1/3");
        assert_eq!(g.normalize(), p("3*x + 2"));
    }

    #[test]
    fn exact_division() {
        let a = p("x^2 - y^2");
        let b = p("x - y");
        assert_eq!(a.div_exact(&b), Some(p("x + y")));
        assert_eq!(p("x^2 + 1").div_exact(&b), None);
    }

    #[test]
    fn substitution_and_eval() {
        let f = p("x^2*y + z");
        let g = f.substitute(0, &rat(2));
        assert_eq!(g, p("4*y + z"));
        assert_eq!(f.eval(&[rat(1), rat(2), rat(3)]), rat(5));
    }

    #[test]
    fn polyset_deduplicates_and_drops_zero() {
        let vars = Variable::named(&["x", "y", "z"]);
        let s = PolySet::new(vars, [p("x"), p("0"), p("x"), p("y")]);
        assert_eq!(s.len(), 2);
    }
}
