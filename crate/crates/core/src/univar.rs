//! Univariate polynomial algorithms over an ordered field whose elements can
//! be sign-tested exactly: remainders, gcds, Sturm sequences and real root
//! isolation. Coefficient vectors are stored low degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::qarith::{igcd, qadd, qmid, qmul, qneg, qnew, qrecip, qsub};

/// A computable real field: exact zero and sign tests on element values.
///
/// Methods take `&mut self` because some fields refine internal state (for
/// example isolating intervals) while answering sign queries.
pub trait RealField {
    type E: Clone + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn from_rat(&self, r: &BigRational) -> Self::E;
    fn add(&mut self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&mut self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&mut self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&mut self, a: &Self::E) -> Self::E;
    /// Inverse of an element whose value is nonzero.
    fn inv(&mut self, a: &Self::E) -> Self::E;
    fn is_zero(&mut self, a: &Self::E) -> bool;
    fn sign(&mut self, a: &Self::E) -> i8;
    /// An upper bound on the absolute value.
    fn abs_bound(&mut self, a: &Self::E) -> BigRational;

    fn scale(&mut self, a: &Self::E, r: &BigRational) -> Self::E {
        let r = self.from_rat(r);
        self.mul(a, &r)
    }

    /// Multiplies `p` by some positive constant to keep coefficients small.
    fn scale_positive(&mut self, _p: &mut Vec<Self::E>) {}
}

/// The rationals.
#[derive(Clone, Copy, Debug, Default)]
pub struct Rationals;

impl RealField for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn from_rat(&self, r: &BigRational) -> BigRational {
        r.clone()
    }
    fn add(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        qadd(a, b)
    }
    fn sub(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        qsub(a, b)
    }
    fn mul(&mut self, a: &BigRational, b: &BigRational) -> BigRational {
        qmul(a, b)
    }
    fn neg(&mut self, a: &BigRational) -> BigRational {
        qneg(a)
    }
    fn inv(&mut self, a: &BigRational) -> BigRational {
        qrecip(a)
    }
    fn is_zero(&mut self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn sign(&mut self, a: &BigRational) -> i8 {
        sign_of(a)
    }
    fn abs_bound(&mut self, a: &BigRational) -> BigRational {
        a.abs()
    }
    fn scale(&mut self, a: &BigRational, r: &BigRational) -> BigRational {
        qmul(a, r)
    }
    fn scale_positive(&mut self, p: &mut Vec<BigRational>) {
        make_primitive(p);
    }
}

pub fn sign_of(a: &BigRational) -> i8 {
    if a.is_zero() {
        0
    } else if a.is_positive() {
        1
    } else {
        -1
    }
}

/// Rescales a rational vector to coprime integers, keeping signs.
pub fn make_primitive(p: &mut [BigRational]) {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in p.iter() {
        if !c.is_zero() {
            if !c.denom().is_one() {
                den = &den / igcd(&den, c.denom()) * c.denom();
            }
            if !num.is_one() {
                num = igcd(&num, c.numer());
            }
        }
    }
    if num.is_zero() {
        return;
    }
    let f = qnew(den, num);
    if f.is_one() {
        return;
    }
    for c in p.iter_mut() {
        *c = qmul(c, &f);
    }
}

/// Drops leading coefficients whose value is zero.
pub fn trim<F: RealField>(f: &mut F, p: &mut Vec<F::E>) {
    while let Some(c) = p.last() {
        if f.is_zero(c) {
            p.pop();
        } else {
            break;
        }
    }
}

pub fn derivative<F: RealField>(f: &mut F, p: &[F::E]) -> Vec<F::E> {
    (1..p.len())
        .map(|i| f.scale(&p[i], &BigRational::from_integer(i.into())))
        .collect()
}

/// Scales a trimmed, nonzero polynomial to be monic.
pub fn monic<F: RealField>(f: &mut F, p: &[F::E]) -> Vec<F::E> {
    let l = f.inv(p.last().expect("nonzero polynomial"));
    let mut out: Vec<F::E> = p[..p.len() - 1].iter().map(|c| f.mul(c, &l)).collect();
    out.push(f.from_rat(&BigRational::one()));
    out
}

/// Quotient and remainder of `a` by the trimmed, nonzero `b`.
pub fn divrem<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    let mut r = a.to_vec();
    trim(f, &mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = f.inv(&b[db]);
    let mut q = vec![f.zero(); r.len() - db];
    while r.len() >= b.len() {
        let d = r.len() - 1;
        let c = f.mul(&r[d], &lb);
        let shift = d - db;
        for j in 0..db {
            let t = f.mul(&c, &b[j]);
            r[j + shift] = f.sub(&r[j + shift], &t);
        }
        q[shift] = c;
        r.pop();
        trim(f, &mut r);
    }
    (q, r)
}

pub fn rem<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    divrem(f, a, b).1
}

/// Monic gcd of two polynomials; empty when both are zero.
pub fn gcd<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(f, &mut a);
    trim(f, &mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(f, &a)
    }
}

/// Extended Euclid: returns `(g, s)` with `s*a ≡ g (mod b)` and `g` the monic gcd.
pub fn gcdex_half<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(f, &mut r0);
    trim(f, &mut r1);
    let one = f.from_rat(&BigRational::one());
    let mut s0 = vec![one];
    let mut s1: Vec<F::E> = Vec::new();
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let qs = mul_poly(f, &q, &s1);
        let s2 = sub_poly(f, &s0, &qs);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if r0.is_empty() {
        return (r0, s0);
    }
    let l = f.inv(r0.last().expect("nonzero"));
    let g = r0.iter().map(|c| f.mul(c, &l)).collect();
    let s = s0.iter().map(|c| f.mul(c, &l)).collect();
    (g, s)
}

pub fn mul_poly<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let t = f.mul(x, y);
            out[i + j] = f.add(&out[i + j], &t);
        }
    }
    out
}

pub fn sub_poly<F: RealField>(f: &mut F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f.sub(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => f.neg(y),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// Square-free part of a trimmed, nonconstant polynomial, made monic.
pub fn squarefree<F: RealField>(f: &mut F, p: &[F::E]) -> Vec<F::E> {
    let d = derivative(f, p);
    let g = gcd(f, p, &d);
    if g.len() <= 1 {
        return monic(f, p);
    }
    let (q, _) = divrem(f, p, &g);
    monic(f, &q)
}

pub fn eval_rat<F: RealField>(f: &mut F, p: &[F::E], x: &BigRational) -> F::E {
    let mut acc = f.zero();
    for c in p.iter().rev() {
        let t = f.scale(&acc, x);
        acc = f.add(&t, c);
    }
    acc
}

/// Sturm sequence of a square-free polynomial.
pub fn sturm<F: RealField>(f: &mut F, q: &[F::E]) -> Vec<Vec<F::E>> {
    let mut seq = vec![q.to_vec()];
    let mut d = derivative(f, q);
    trim(f, &mut d);
    if d.is_empty() {
        return seq;
    }
    f.scale_positive(&mut d);
    seq.push(d);
    loop {
        let n = seq.len();
        let r = rem(f, &seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        let mut r: Vec<F::E> = r.iter().map(|c| f.neg(c)).collect();
        f.scale_positive(&mut r);
        seq.push(r);
    }
    seq
}

/// Sign variations of a Sturm sequence at `x`, plus the sign of its first member.
pub fn variations<F: RealField>(f: &mut F, seq: &[Vec<F::E>], x: &BigRational) -> (usize, i8) {
    let mut count = 0;
    let mut last = 0i8;
    let mut first = 0i8;
    for (i, p) in seq.iter().enumerate() {
        let v = eval_rat(f, p, x);
        let s = f.sign(&v);
        if i == 0 {
            first = s;
        }
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    (count, first)
}

fn variations_at_infinity<F: RealField>(f: &mut F, seq: &[Vec<F::E>], positive: bool) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let mut s = f.sign(p.last().expect("trimmed"));
        if !positive && p.len() % 2 == 0 {
            s = -s;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of a trimmed square-free polynomial.
pub fn count_roots_squarefree<F: RealField>(f: &mut F, q: &[F::E]) -> usize {
    if q.len() <= 1 {
        return 0;
    }
    let seq = sturm(f, q);
    variations_at_infinity(f, &seq, false) - variations_at_infinity(f, &seq, true)
}

/// An isolating interval. `lo == hi` marks an exactly known rational root;
/// otherwise the open interval holds exactly one root and the endpoints are
/// not roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootBox {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootBox {
    pub fn exact(x: BigRational) -> Self {
        RootBox {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn mid(&self) -> BigRational {
        qmid(&self.lo, &self.hi)
    }
}

/// Smallest power of two strictly exceeding the Cauchy root bound.
pub fn root_bound<F: RealField>(f: &mut F, q: &[F::E]) -> BigRational {
    let n = q.len() - 1;
    let li = f.inv(&q[n]);
    let mut m = BigRational::zero();
    for c in &q[..n] {
        let t = f.mul(c, &li);
        let b = f.abs_bound(&t);
        if b > m {
            m = b;
        }
    }
    let bound = m + BigRational::one();
    let mut p = BigRational::one();
    let two = BigRational::from_integer(2.into());
    while p <= bound {
        p = &p * &two;
    }
    p
}

/// Isolates the real roots of a trimmed square-free polynomial in ascending
/// order. When `den` is given, every rational root is known to have a
/// denominator dividing it, and such roots are returned exactly.
pub fn isolate_squarefree<F: RealField>(
    f: &mut F,
    q: &[F::E],
    den: Option<&BigInt>,
) -> Vec<RootBox> {
    if q.len() <= 1 {
        return Vec::new();
    }
    let seq = sturm(f, q);
    let b = root_bound(f, q);
    let lo = -b.clone();
    let (vlo, _) = variations(f, &seq, &lo);
    let (vhi, _) = variations(f, &seq, &b);
    let mut out = Vec::new();
    isolate_rec(f, &seq, lo, vlo, b, vhi, &mut out);
    if let Some(d) = den {
        for r in out.iter_mut() {
            if !r.is_exact() {
                detect_rational(f, q, r, d);
            }
        }
    }
    out
}

fn isolate_rec<F: RealField>(
    f: &mut F,
    seq: &[Vec<F::E>],
    lo: BigRational,
    vlo: usize,
    hi: BigRational,
    vhi: usize,
    out: &mut Vec<RootBox>,
) {
    let n = vlo - vhi;
    if n == 0 {
        return;
    }
    if n == 1 {
        out.push(RootBox { lo, hi });
        return;
    }
    let two = BigRational::from_integer(2.into());
    let m = qmid(&lo, &hi);
    let (vm, sm) = variations(f, seq, &m);
    if sm != 0 {
        isolate_rec(f, seq, lo, vlo, m.clone(), vm, out);
        isolate_rec(f, seq, m, vm, hi, vhi, out);
        return;
    }
    // m is a root: find non-root neighbours with no other root in between.
    let mut delta = (&m - &lo) / &two;
    let (a, va) = loop {
        let a = &m - &delta;
        let (va, sa) = variations(f, seq, &a);
        if sa != 0 && va == vm + 1 {
            break (a, va);
        }
        delta /= &two;
    };
    let mut delta = (&hi - &m) / &two;
    let (b, vb) = loop {
        let b = &m + &delta;
        let (vb, sb) = variations(f, seq, &b);
        if sb != 0 && vb == vm {
            break (b, vb);
        }
        delta /= &two;
    };
    isolate_rec(f, seq, lo, vlo, a, va, out);
    out.push(RootBox::exact(m));
    isolate_rec(f, seq, b, vb, hi, vhi, out);
}

/// Halves an isolating interval of the square-free `q`. `sign_lo` is the sign
/// of `q` at the lower endpoint.
pub fn bisect<F: RealField>(f: &mut F, q: &[F::E], r: &mut RootBox, sign_lo: i8) {
    if r.is_exact() {
        return;
    }
    let m = r.mid();
    let v = eval_rat(f, q, &m);
    let s = f.sign(&v);
    if s == 0 {
        *r = RootBox::exact(m);
    } else if s == sign_lo {
        r.lo = m;
    } else {
        r.hi = m;
    }
}

fn detect_rational<F: RealField>(f: &mut F, q: &[F::E], r: &mut RootBox, den: &BigInt) {
    let v = eval_rat(f, q, &r.lo);
    let sign_lo = f.sign(&v);
    let width_goal = BigRational::new(BigInt::one(), den.abs());
    while !r.is_exact() && &r.hi - &r.lo >= width_goal {
        bisect(f, q, r, sign_lo);
    }
    if r.is_exact() {
        return;
    }
    let d = BigRational::from_integer(den.abs());
    let cand = (&r.lo * &d).ceil() / &d;
    if cand > r.lo && cand < r.hi {
        let v = eval_rat(f, q, &cand);
        if f.is_zero(&v) {
            *r = RootBox::exact(cand);
        }
    }
}

/// Simplest dyadic rational in an interval: smallest power-of-two
/// denominator, then smallest absolute numerator.
pub fn simplest_dyadic(
    lo: &BigRational,
    lo_open: bool,
    hi: &BigRational,
    hi_open: bool,
) -> BigRational {
    assert!(lo < hi || (lo == hi && !lo_open && !hi_open), "empty interval");
    let mut scale = BigInt::one();
    loop {
        let s = BigRational::from_integer(scale.clone());
        let a = lo * &s;
        let b = hi * &s;
        let mut first = a.ceil();
        if lo_open && first == a {
            first += BigRational::one();
        }
        let mut last = b.floor();
        if hi_open && last == b {
            last -= BigRational::one();
        }
        if first <= last {
            let n = if first.is_positive() {
                first
            } else if last.is_negative() {
                last
            } else {
                BigRational::zero()
            };
            return n / s;
        }
        scale *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[i64]) -> Vec<BigRational> {
        cs.iter().map(|&c| BigRational::from_integer(c.into())).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_and_squarefree() {
        let mut f = Rationals;
        // (x-1)^2 (x+3) = x^3 + x^2 - 5x + 3
        let p = q(&[3, -5, 1, 1]);
        assert_eq!(squarefree(&mut f, &p), q(&[-3, 2, 1]));
        let g = gcd(&mut f, &q(&[-1, 0, 1]), &q(&[1, 1]));
        assert_eq!(g, q(&[1, 1]));
    }

    #[test]
    fn extended_euclid_inverts() {
        let mut f = Rationals;
        let a = q(&[1, 1]);
        let m = q(&[-2, 0, 1]);
        let (g, s) = gcdex_half(&mut f, &a, &m);
        assert_eq!(g, q(&[1]));
        let prod = mul_poly(&mut f, &s, &a);
        assert_eq!(rem(&mut f, &prod, &m), q(&[1]));
    }

    #[test]
    fn isolation_with_exact_roots() {
        let mut f = Rationals;
        // x^3 - x
        let p = q(&[0, -1, 0, 1]);
        let roots = isolate_squarefree(&mut f, &p, Some(&BigInt::one()));
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|b| b.is_exact()));
        assert_eq!(roots[1].lo, r(0, 1));
        // 3x^2 - 2x... (3x - 1)(x + 2)
        let p = q(&[-2, 5, 3]);
        let roots = isolate_squarefree(&mut f, &p, Some(&BigInt::from(3)));
        assert_eq!(roots[1], RootBox::exact(r(1, 3)));
        assert_eq!(roots[0], RootBox::exact(r(-2, 1)));
    }

    #[test]
    fn irrational_roots_are_bracketed() {
        let mut f = Rationals;
        let p = q(&[-2, 0, 1]);
        let roots = isolate_squarefree(&mut f, &p, Some(&BigInt::one()));
        assert_eq!(roots.len(), 2);
        for b in &roots {
            assert!(!b.is_exact());
            let slo = sign_of(&eval_rat(&mut f, &p, &b.lo));
            let shi = sign_of(&eval_rat(&mut f, &p, &b.hi));
            assert_eq!(slo * shi, -1);
        }
        assert!(roots[0].hi <= roots[1].lo);
    }

    #[test]
    fn dyadic_choice() {
        assert_eq!(simplest_dyadic(&r(-1, 1), false, &r(1, 1), false), r(0, 1));
        assert_eq!(simplest_dyadic(&r(1, 3), true, &r(2, 3), true), r(1, 2));
        assert_eq!(simplest_dyadic(&r(0, 1), true, &r(1, 1), false), r(1, 1));
        assert_eq!(simplest_dyadic(&r(-1, 1), false, &r(0, 1), true), r(-1, 1));
        assert_eq!(simplest_dyadic(&r(5, 4), true, &r(7, 4), false), r(3, 2));
    }
}
