//! Exact arithmetic at a real algebraic sample point.
//!
//! Level `k` of a [`Tower`] adjoins one real algebraic number `t_k`, given by
//! a monic defining polynomial with coefficients at level `k - 1` and a
//! rational isolating interval. Elements at level `k` are polynomials in
//! `t_k` of degree below the defining degree. Equality is equality of values
//! at the point: when a zero test finds a nontrivial common factor with a
//! defining polynomial, that polynomial is replaced by the factor that
//! vanishes at the point, so each level behaves as a field.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::qarith::{qadd, qmid, qmul, qneg};
use crate::univar::{self, RealField};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Q(BigRational),
    P(Vec<Elem>),
}

impl Elem {
    fn is_struct_zero(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_zero(),
            Elem::P(cs) => cs.is_empty(),
        }
    }

    fn coeffs(&self) -> &[Elem] {
        match self {
            Elem::P(cs) => cs,
            Elem::Q(_) => panic!("rational element has no coefficients"),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Q(q) => Some(q),
            Elem::P(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Level {
    def: Vec<Elem>,
    lo: BigRational,
    hi: BigRational,
    sign_lo: i8,
}

impl Level {
    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug, Default)]
pub struct Tower {
    levels: Vec<Level>,
}

fn strip(mut cs: Vec<Elem>) -> Vec<Elem> {
    while cs.last().is_some_and(|c| c.is_struct_zero()) {
        cs.pop();
    }
    cs
}

fn imul(a: (&BigRational, &BigRational), b: (&BigRational, &BigRational)) -> (BigRational, BigRational) {
    let c = [qmul(a.0, b.0), qmul(a.0, b.1), qmul(a.1, b.0), qmul(a.1, b.1)];
    let mut lo = &c[0];
    let mut hi = &c[0];
    for x in &c[1..] {
        if x < lo {
            lo = x;
        }
        if x > hi {
            hi = x;
        }
    }
    (lo.clone(), hi.clone())
}

impl Tower {
    pub fn new() -> Self {
        Tower::default()
    }

    /// Number of adjoined algebraic numbers.
    pub fn height(&self) -> usize {
        self.levels.len()
    }

    /// Adjoins a root of `def` (square-free over level `height()`) isolated by
    /// `(lo, hi)`; `lo` and `hi` must not be roots. Returns the new level.
    pub fn push(&mut self, def: Vec<Elem>, lo: BigRational, hi: BigRational) -> usize {
        let k = self.levels.len();
        let def = univar::monic(&mut AtLevel::new(self, k), &def);
        let v = univar::eval_rat(&mut AtLevel::new(self, k), &def, &lo);
        let sign_lo = self.sign(k, &v);
        self.levels.push(Level {
            def,
            lo,
            hi,
            sign_lo,
        });
        k + 1
    }

    /// Current isolating interval of level `k` (1-based).
    pub fn interval(&self, k: usize) -> (BigRational, BigRational) {
        let l = &self.levels[k - 1];
        (l.lo.clone(), l.hi.clone())
    }

    pub fn defining_degree(&self, k: usize) -> usize {
        self.levels[k - 1].def.len() - 1
    }

    pub fn zero(&self, k: usize) -> Elem {
        if k == 0 {
            Elem::Q(BigRational::zero())
        } else {
            Elem::P(Vec::new())
        }
    }

    pub fn from_rat(&self, k: usize, r: &BigRational) -> Elem {
        if k == 0 {
            Elem::Q(r.clone())
        } else if r.is_zero() {
            Elem::P(Vec::new())
        } else {
            Elem::P(vec![self.from_rat(k - 1, r)])
        }
    }

    /// Builds a level-`k` element from coefficients at level `k - 1`.
    pub fn from_coeffs(&self, k: usize, cs: Vec<Elem>) -> Elem {
        Elem::P(self.reduce(k, cs))
    }

    pub fn add(&self, k: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(qadd(x, y)),
            (Elem::P(x), Elem::P(y)) => {
                let n = x.len().max(y.len());
                let cs = (0..n)
                    .map(|i| match (x.get(i), y.get(i)) {
                        (Some(p), Some(q)) => self.add(k - 1, p, q),
                        (Some(p), None) => p.clone(),
                        (None, Some(q)) => q.clone(),
                        (None, None) => unreachable!(),
                    })
                    .collect();
                Elem::P(strip(cs))
            }
            _ => panic!("level mismatch"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match a {
            Elem::Q(x) => Elem::Q(qneg(x)),
            Elem::P(cs) => Elem::P(cs.iter().map(|c| self.neg(c)).collect()),
        }
    }

    pub fn sub(&self, k: usize, a: &Elem, b: &Elem) -> Elem {
        self.add(k, a, &self.neg(b))
    }

    pub fn scale(&self, a: &Elem, r: &BigRational) -> Elem {
        if r.is_zero() {
            return match a {
                Elem::Q(_) => Elem::Q(BigRational::zero()),
                Elem::P(_) => Elem::P(Vec::new()),
            };
        }
        match a {
            Elem::Q(x) => Elem::Q(qmul(x, r)),
            Elem::P(cs) => Elem::P(cs.iter().map(|c| self.scale(c, r)).collect()),
        }
    }

    pub fn mul(&self, k: usize, a: &Elem, b: &Elem) -> Elem {
        match (a, b) {
            (Elem::Q(x), Elem::Q(y)) => Elem::Q(qmul(x, y)),
            (Elem::P(x), Elem::P(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Elem::P(Vec::new());
                }
                let mut out = vec![self.zero(k - 1); x.len() + y.len() - 1];
                for (i, p) in x.iter().enumerate() {
                    if p.is_struct_zero() {
                        continue;
                    }
                    for (j, q) in y.iter().enumerate() {
                        if q.is_struct_zero() {
                            continue;
                        }
                        let t = self.mul(k - 1, p, q);
                        out[i + j] = self.add(k - 1, &out[i + j], &t);
                    }
                }
                Elem::P(self.reduce(k, out))
            }
            _ => panic!("level mismatch"),
        }
    }

    fn reduce(&self, k: usize, mut v: Vec<Elem>) -> Vec<Elem> {
        let def = &self.levels[k - 1].def;
        let d = def.len() - 1;
        v = strip(v);
        while v.len() > d {
            let top = v.pop().expect("nonempty");
            let i = v.len();
            for j in 0..d {
                let t = self.mul(k - 1, &top, &def[j]);
                v[i - d + j] = self.sub(k - 1, &v[i - d + j], &t);
            }
            v = strip(v);
        }
        v
    }

    /// Rational interval containing the value of `a`.
    pub fn enclose(&self, k: usize, a: &Elem) -> (BigRational, BigRational) {
        match a {
            Elem::Q(x) => (x.clone(), x.clone()),
            Elem::P(cs) => {
                let l = &self.levels[k - 1];
                let mut lo = BigRational::zero();
                let mut hi = BigRational::zero();
                for c in cs.iter().rev() {
                    let (clo, chi) = self.enclose(k - 1, c);
                    let (plo, phi) = if l.is_exact() {
                        let x = &l.lo;
                        if x.is_negative() {
                            (qmul(&hi, x), qmul(&lo, x))
                        } else {
                            (qmul(&lo, x), qmul(&hi, x))
                        }
                    } else {
                        imul((&lo, &hi), (&l.lo, &l.hi))
                    };
                    lo = qadd(&plo, &clo);
                    hi = qadd(&phi, &chi);
                }
                (lo, hi)
            }
        }
    }

    fn enclosure_sign(&self, k: usize, a: &Elem) -> Option<i8> {
        let (lo, hi) = self.enclose(k, a);
        if lo.is_positive() {
            Some(1)
        } else if hi.is_negative() {
            Some(-1)
        } else if lo.is_zero() && hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    /// Whether the value of `a` at the point is zero.
    pub fn is_zero(&mut self, k: usize, a: &Elem) -> bool {
        if a.is_struct_zero() {
            return true;
        }
        if k == 0 {
            return false;
        }
        for round in 0..2 {
            match self.enclosure_sign(k, a) {
                Some(s) => return s == 0,
                None if round == 0 => self.refine(k),
                None => {}
            }
        }
        let mut g = a.coeffs().to_vec();
        univar::trim(&mut AtLevel::new(self, k - 1), &mut g);
        match g.len() {
            0 => return true,
            1 => return false,
            _ => {}
        }
        let def = self.levels[k - 1].def.clone();
        let h = univar::gcd(&mut AtLevel::new(self, k - 1), &g, &def);
        if h.len() <= 1 {
            return false;
        }
        let vanishes = self.has_root(k, &h);
        if vanishes {
            self.set_def(k, h);
        } else {
            let (q, _) = univar::divrem(&mut AtLevel::new(self, k - 1), &def, &h);
            self.set_def(k, q);
        }
        vanishes
    }

    // Whether t_k is a root of `h`, a factor of the defining polynomial.
    fn has_root(&mut self, k: usize, h: &[Elem]) -> bool {
        let (lo, hi) = self.interval(k);
        let vlo = univar::eval_rat(&mut AtLevel::new(self, k - 1), h, &lo);
        if lo == hi {
            return self.is_zero(k - 1, &vlo);
        }
        let vhi = univar::eval_rat(&mut AtLevel::new(self, k - 1), h, &hi);
        let slo = self.sign(k - 1, &vlo);
        let shi = self.sign(k - 1, &vhi);
        slo * shi < 0
    }

    fn set_def(&mut self, k: usize, def: Vec<Elem>) {
        let def = univar::monic(&mut AtLevel::new(self, k - 1), &def);
        let lo = self.levels[k - 1].lo.clone();
        let v = univar::eval_rat(&mut AtLevel::new(self, k - 1), &def, &lo);
        let s = self.sign(k - 1, &v);
        let l = &mut self.levels[k - 1];
        l.def = def;
        if !l.is_exact() {
            l.sign_lo = s;
        }
    }

    /// Halves the isolating interval of every level up to `k`.
    pub fn refine(&mut self, k: usize) {
        for j in 1..=k {
            if self.levels[j - 1].is_exact() {
                continue;
            }
            let (lo, hi) = self.interval(j);
            let m = qmid(&lo, &hi);
            let def = self.levels[j - 1].def.clone();
            let v = univar::eval_rat(&mut AtLevel::new(self, j - 1), &def, &m);
            let s = self.sign(j - 1, &v);
            let l = &mut self.levels[j - 1];
            if s == 0 {
                l.lo = m.clone();
                l.hi = m;
            } else if s == l.sign_lo {
                l.lo = m;
            } else {
                l.hi = m;
            }
        }
    }

    pub fn sign(&mut self, k: usize, a: &Elem) -> i8 {
        if let Elem::Q(x) = a {
            return univar::sign_of(x);
        }
        if let Some(s) = self.enclosure_sign(k, a) {
            return s;
        }
        if self.is_zero(k, a) {
            return 0;
        }
        loop {
            if let Some(s) = self.enclosure_sign(k, a) {
                return s;
            }
            self.refine(k);
        }
    }

    /// Inverse of an element with nonzero value.
    pub fn inv(&mut self, k: usize, a: &Elem) -> Elem {
        if let Elem::Q(x) = a {
            return Elem::Q(x.recip());
        }
        let mut cs = a.coeffs().to_vec();
        loop {
            univar::trim(&mut AtLevel::new(self, k - 1), &mut cs);
            assert!(!cs.is_empty(), "inverse of zero");
            if cs.len() == 1 {
                let c = self.inv(k - 1, &cs[0]);
                return Elem::P(strip(vec![c]));
            }
            let def = self.levels[k - 1].def.clone();
            let (h, s) = univar::gcdex_half(&mut AtLevel::new(self, k - 1), &cs, &def);
            if h.len() == 1 {
                return Elem::P(self.reduce(k, s));
            }
            let (q, _) = univar::divrem(&mut AtLevel::new(self, k - 1), &def, &h);
            self.set_def(k, q);
            cs = self.reduce(k, cs);
        }
    }
}

/// The field at one level of a tower.
pub struct AtLevel<'a> {
    pub tower: &'a mut Tower,
    pub k: usize,
}

impl<'a> AtLevel<'a> {
    pub fn new(tower: &'a mut Tower, k: usize) -> Self {
        AtLevel { tower, k }
    }
}

impl RealField for AtLevel<'_> {
    type E = Elem;

    fn zero(&self) -> Elem {
        self.tower.zero(self.k)
    }
    fn from_rat(&self, r: &BigRational) -> Elem {
        self.tower.from_rat(self.k, r)
    }
    fn add(&mut self, a: &Elem, b: &Elem) -> Elem {
        self.tower.add(self.k, a, b)
    }
    fn sub(&mut self, a: &Elem, b: &Elem) -> Elem {
        self.tower.sub(self.k, a, b)
    }
    fn mul(&mut self, a: &Elem, b: &Elem) -> Elem {
        self.tower.mul(self.k, a, b)
    }
    fn neg(&mut self, a: &Elem) -> Elem {
        self.tower.neg(a)
    }
    fn inv(&mut self, a: &Elem) -> Elem {
        self.tower.inv(self.k, a)
    }
    fn is_zero(&mut self, a: &Elem) -> bool {
        self.tower.is_zero(self.k, a)
    }
    fn sign(&mut self, a: &Elem) -> i8 {
        self.tower.sign(self.k, a)
    }
    fn abs_bound(&mut self, a: &Elem) -> BigRational {
        let (lo, hi) = self.tower.enclose(self.k, a);
        lo.abs().max(hi.abs())
    }
    fn scale(&mut self, a: &Elem, r: &BigRational) -> Elem {
        self.tower.scale(a, r)
    }
    fn scale_positive(&mut self, p: &mut Vec<Elem>) {
        if self.k == 0 {
            let mut qs: Vec<BigRational> = p
                .iter()
                .map(|e| e.as_rational().expect("level 0").clone())
                .collect();
            univar::make_primitive(&mut qs);
            *p = qs.into_iter().map(Elem::Q).collect();
        }
    }
}

impl Tower {
    /// An element known to equal one at every level.
    pub fn one(&self, k: usize) -> Elem {
        self.from_rat(k, &BigRational::one())
    }
}
