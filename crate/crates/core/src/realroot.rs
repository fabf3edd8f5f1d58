//! Real roots of univariate polynomials with rational coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{PolyError, RootError};
use crate::poly::Polynomial;
use crate::univar::{self, RootBox, Rationals};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// A real root of a square-free integer polynomial, identified by an
/// isolating interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealAlgebraicNumber {
    /// Square-free, integer-primitive coefficients, low degree first.
    pub defining: Vec<BigInt>,
    pub isolating: Interval,
    pub exact_rational: Option<BigRational>,
}

impl RealAlgebraicNumber {
    pub fn rational(x: BigRational) -> Self {
        let defining = vec![-x.numer().clone(), x.denom().clone()];
        RealAlgebraicNumber {
            defining,
            isolating: Interval {
                lo: x.clone(),
                hi: x.clone(),
            },
            exact_rational: Some(x),
        }
    }

    fn coeffs(&self) -> Vec<BigRational> {
        self.defining
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if self.exact_rational.is_some() {
            return;
        }
        let mut f = Rationals;
        let q = self.coeffs();
        let sign_lo = univar::sign_of(&univar::eval_rat(&mut f, &q, &self.isolating.lo));
        let mut b = RootBox {
            lo: self.isolating.lo.clone(),
            hi: self.isolating.hi.clone(),
        };
        univar::bisect(&mut f, &q, &mut b, sign_lo);
        if b.is_exact() {
            *self = RealAlgebraicNumber::rational(b.lo);
        } else {
            self.isolating = Interval { lo: b.lo, hi: b.hi };
        }
    }

    /// Refines until the interval is narrower than `eps`.
    pub fn refine_to(&mut self, eps: &BigRational) {
        while self.exact_rational.is_none() && &self.isolating.width() >= eps {
            self.refine();
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.exact_rational {
            Some(x) => x.to_f64().unwrap_or(f64::NAN),
            None => {
                let mut c = self.clone();
                c.refine_to(&BigRational::new(BigInt::one(), BigInt::one() << 60));
                let m = (&c.isolating.lo + &c.isolating.hi) / BigRational::from_integer(2.into());
                m.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
}

/// A coordinate of a one-dimensional sample: either a chosen rational in an
/// open gap or one of the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleCoordinate {
    Rational(BigRational),
    Root(RealAlgebraicNumber),
}

fn univariate_coeffs(p: &Polynomial) -> Result<Vec<BigRational>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let vars = p.vars();
    if vars.len() > 1 {
        return Err(PolyError::NotUnivariate);
    }
    let Some(&v) = vars.first() else {
        return Ok(vec![p.constant_value().expect("constant")]);
    };
    Ok(p
        .coeffs_in(v)
        .iter()
        .map(|c| c.constant_value().expect("univariate"))
        .collect())
}

/// Square-free part as coprime integers with positive leading coefficient.
fn squarefree_integer(cs: &[BigRational]) -> Vec<BigRational> {
    let mut f = Rationals;
    let mut q = univar::squarefree(&mut f, cs);
    univar::make_primitive(&mut q);
    q
}

pub fn count_distinct_real_roots(p: &Polynomial) -> Result<usize, PolyError> {
    let cs = univariate_coeffs(p)?;
    if cs.len() <= 1 {
        return Ok(0);
    }
    Ok(univar::count_roots_squarefree(&mut Rationals, &squarefree_integer(&cs)))
}

/// The distinct real roots in ascending order.
pub fn isolate_real_roots(p: &Polynomial) -> Result<Vec<RealAlgebraicNumber>, PolyError> {
    let cs = univariate_coeffs(p)?;
    if cs.len() <= 1 {
        return Ok(Vec::new());
    }
    let q = squarefree_integer(&cs);
    let den = q.last().expect("nonconstant").numer().clone();
    let defining: Vec<BigInt> = q.iter().map(|c| c.numer().clone()).collect();
    let boxes = univar::isolate_squarefree(&mut Rationals, &q, Some(&den));
    Ok(boxes
        .into_iter()
        .map(|b| {
            if b.is_exact() {
                RealAlgebraicNumber::rational(b.lo)
            } else {
                RealAlgebraicNumber {
                    defining: defining.clone(),
                    isolating: Interval { lo: b.lo, hi: b.hi },
                    exact_rational: None,
                }
            }
        })
        .collect())
}

/// Ordering of two roots whose intervals are known to be disjoint or equal.
fn separated(a: &RealAlgebraicNumber, b: &RealAlgebraicNumber) -> bool {
    match (&a.exact_rational, &b.exact_rational) {
        (Some(x), Some(y)) => x < y,
        (Some(x), None) => x <= &b.isolating.lo,
        (None, Some(y)) => &a.isolating.hi <= y,
        (None, None) => a.isolating.hi <= b.isolating.lo,
    }
}

/// Rationals between and around the given ascending roots: `2k + 1`
/// coordinates alternating gap samples and roots.
pub fn interleave_sample_points(
    roots: &[RealAlgebraicNumber],
) -> Result<Vec<SampleCoordinate>, RootError> {
    if roots.is_empty() {
        return Ok(vec![SampleCoordinate::Rational(BigRational::zero())]);
    }
    for w in roots.windows(2) {
        if !separated(&w[0], &w[1]) {
            return Err(RootError::OverlappingIntervals);
        }
    }
    let one = BigRational::one();
    let mut out = Vec::with_capacity(2 * roots.len() + 1);
    let first = &roots[0];
    let (lo, lo_exact) = lower_end(first);
    out.push(SampleCoordinate::Rational(univar::simplest_dyadic(
        &(&lo - &one),
        false,
        &lo,
        lo_exact,
    )));
    for (i, r) in roots.iter().enumerate() {
        out.push(SampleCoordinate::Root(r.clone()));
        if let Some(next) = roots.get(i + 1) {
            let (a, a_exact) = upper_end(r);
            let (b, b_exact) = lower_end(next);
            out.push(SampleCoordinate::Rational(univar::simplest_dyadic(
                &a, a_exact, &b, b_exact,
            )));
        }
    }
    let (hi, hi_exact) = upper_end(roots.last().expect("nonempty"));
    out.push(SampleCoordinate::Rational(univar::simplest_dyadic(
        &hi,
        hi_exact,
        &(&hi + &one),
        false,
    )));
    Ok(out)
}

fn lower_end(r: &RealAlgebraicNumber) -> (BigRational, bool) {
    match &r.exact_rational {
        Some(x) => (x.clone(), true),
        None => (r.isolating.lo.clone(), false),
    }
}

fn upper_end(r: &RealAlgebraicNumber) -> (BigRational, bool) {
    match &r.exact_rational {
        Some(x) => (x.clone(), true),
        None => (r.isolating.hi.clone(), false),
    }
}

/// Exact sign of an integer polynomial at a real algebraic number.
pub fn sign_at_root(p: &[BigRational], x: &RealAlgebraicNumber) -> i8 {
    let mut f = Rationals;
    if let Some(v) = &x.exact_rational {
        return univar::sign_of(&univar::eval_rat(&mut f, p, v));
    }
    let g = univar::gcd(&mut f, p, &x.coeffs());
    if g.len() > 1 {
        let slo = univar::sign_of(&univar::eval_rat(&mut f, &g, &x.isolating.lo));
        let shi = univar::sign_of(&univar::eval_rat(&mut f, &g, &x.isolating.hi));
        if slo * shi < 0 {
            return 0;
        }
    }
    let mut x = x.clone();
    loop {
        let (lo, hi) = enclose(p, &x.isolating);
        if lo.is_positive() {
            return 1;
        }
        if hi.is_negative() {
            return -1;
        }
        x.refine();
        if let Some(v) = &x.exact_rational {
            return univar::sign_of(&univar::eval_rat(&mut f, p, v));
        }
    }
}

/// Interval enclosure of `p` over `iv` by Horner's rule.
fn enclose(p: &[BigRational], iv: &Interval) -> (BigRational, BigRational) {
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    for c in p.iter().rev() {
        let cands = [&lo * &iv.lo, &lo * &iv.hi, &hi * &iv.lo, &hi * &iv.hi];
        let mn = cands.iter().min().expect("nonempty").clone();
        let mx = cands.iter().max().expect("nonempty").clone();
        lo = mn + c;
        hi = mx + c;
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, Variable};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &Variable::named(&["x"])).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn counts() {
        assert_eq!(count_distinct_real_roots(&p("x^2 - 2")).unwrap(), 2);
        assert_eq!(count_distinct_real_roots(&p("x^2 + 1")).unwrap(), 0);
        assert_eq!(count_distinct_real_roots(&p("(x - 1)^2*(x + 3)")).unwrap(), 2);
        assert_eq!(count_distinct_real_roots(&p("7")).unwrap(), 0);
        assert!(matches!(
            count_distinct_real_roots(&p("0")),
            Err(PolyError::ZeroPolynomial)
        ));
        let xy = parse_polynomial("x*y", &Variable::named(&["x", "y"])).unwrap();
        assert!(matches!(
            count_distinct_real_roots(&xy),
            Err(PolyError::NotUnivariate)
        ));
    }

    #[test]
    fn isolation() {
        let roots = isolate_real_roots(&p("x^2 - 2")).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].isolating.hi <= roots[1].isolating.lo);
        assert!(roots.iter().all(|x| x.exact_rational.is_none()));
        assert!((roots[1].to_f64() - 2f64.sqrt()).abs() < 1e-12);

        let roots = isolate_real_roots(&p("x^3")).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].exact_rational, Some(r(0, 1)));

        assert!(isolate_real_roots(&p("x^2 + 1")).unwrap().is_empty());
    }

    #[test]
    fn rational_roots_with_denominators() {
        let roots = isolate_real_roots(&p("6*x^2 - x - 1")).unwrap();
        let exact: Vec<_> = roots.iter().map(|x| x.exact_rational.clone()).collect();
        assert_eq!(exact, vec![Some(r(-1, 3)), Some(r(1, 2))]);
    }

    #[test]
    fn sample_points() {
        let roots = isolate_real_roots(&p("x^2 - 2")).unwrap();
        let s = interleave_sample_points(&roots).unwrap();
        assert_eq!(s.len(), 5);
        assert_eq!(s[2], SampleCoordinate::Rational(r(0, 1)));
        let lo = match &s[0] {
            SampleCoordinate::Rational(x) => x.clone(),
            _ => panic!(),
        };
        assert!(lo < r(-1, 1) && &lo * &lo > r(2, 1));

        assert_eq!(
            interleave_sample_points(&[]).unwrap(),
            vec![SampleCoordinate::Rational(r(0, 1))]
        );

        let zero = isolate_real_roots(&p("x")).unwrap();
        let s = interleave_sample_points(&zero).unwrap();
        assert_eq!(s[0], SampleCoordinate::Rational(r(-1, 1)));
        assert_eq!(s[2], SampleCoordinate::Rational(r(1, 1)));
    }

    #[test]
    fn overlapping_roots_rejected() {
        let roots = isolate_real_roots(&p("x^2 - 2")).unwrap();
        let bad = vec![roots[1].clone(), roots[0].clone()];
        assert!(matches!(
            interleave_sample_points(&bad),
            Err(RootError::OverlappingIntervals)
        ));
    }

    #[test]
    fn refinement_keeps_the_root() {
        let mut roots = isolate_real_roots(&p("x^3 - 3*x + 1")).unwrap();
        let before: Vec<f64> = roots.iter().map(|x| x.to_f64()).collect();
        for x in roots.iter_mut() {
            x.refine_to(&r(1, 1 << 20));
        }
        for (x, b) in roots.iter().zip(before) {
            assert!((x.to_f64() - b).abs() < 1e-9);
            assert!(x.isolating.width() < r(1, 1 << 20));
        }
    }

    #[test]
    fn signs_at_roots() {
        let roots = isolate_real_roots(&p("x^2 - 2")).unwrap();
        let sqrt2 = &roots[1];
        let two = |cs: &[i64]| cs.iter().map(|&c| r(c, 1)).collect::<Vec<_>>();
        assert_eq!(sign_at_root(&two(&[-2, 0, 1]), sqrt2), 0);
        assert_eq!(sign_at_root(&two(&[-1, 1]), sqrt2), 1);
        assert_eq!(sign_at_root(&two(&[-3, 0, 1]), sqrt2), -1);
    }

    proptest::proptest! {
        #[test]
        fn isolates_planted_roots(
            planted in proptest::collection::vec((-12i64..12, 1i64..4, 1u32..3), 1..5),
            k in 1i64..6,
            irrational in proptest::bool::ANY,
        ) {
            let x = Polynomial::var(1, 0);
            let mut f = Polynomial::from_int(1, 1);
            let mut want: Vec<BigRational> = Vec::new();
            for &(n, d, m) in &planted {
                let lin = &(&x * &Polynomial::from_int(1, d)) - &Polynomial::from_int(1, n);
                f = &f * &lin.pow(m);
                want.push(r(n, d));
            }
            // no real roots
            f = &f * &(&x.pow(2) + &Polynomial::from_int(1, k));
            if irrational {
                f = &f * &(&x.pow(2) - &Polynomial::from_int(1, 2));
            }
            want.sort();
            want.dedup();
            let expected = want.len() + if irrational { 2 } else { 0 };
            proptest::prop_assert_eq!(count_distinct_real_roots(&f).unwrap(), expected);
            let roots = isolate_real_roots(&f).unwrap();
            proptest::prop_assert_eq!(roots.len(), expected);
            for w in roots.windows(2) {
                proptest::prop_assert!(w[0].isolating.hi <= w[1].isolating.lo);
                proptest::prop_assert!(w[0].to_f64() < w[1].to_f64());
            }
            for q in &want {
                let hits = roots
                    .iter()
                    .filter(|z| z.isolating.lo <= *q && *q <= z.isolating.hi)
                    .count();
                proptest::prop_assert_eq!(hits, 1);
            }
        }
    }
}
