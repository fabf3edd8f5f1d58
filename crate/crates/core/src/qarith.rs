//! Rational arithmetic without `Ratio`'s operator overhead.
//!
//! `num-rational` normalizes every result with a binary gcd, which is
//! quadratic when one operand is much larger than the other. These helpers
//! skip normalization for integers and reduce with Euclidean steps otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Nonnegative gcd by remainder steps.
pub fn igcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    if x < y {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        if let (Some(xs), Some(ys)) = (x.to_u64(), y.to_u64()) {
            return BigInt::from(xs.gcd(&ys));
        }
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Reduced `n / d`; `d` must be nonzero.
pub fn qnew(mut n: BigInt, mut d: BigInt) -> BigRational {
    assert!(!d.is_zero(), "zero denominator");
    if d.is_negative() {
        n = -n;
        d = -d;
    }
    if n.is_zero() {
        return BigRational::zero();
    }
    if !d.is_one() {
        let g = igcd(&n, &d);
        if !g.is_one() {
            n /= &g;
            d /= &g;
        }
    }
    BigRational::new_raw(n, d)
}

pub fn qadd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.denom() == b.denom() {
        if a.is_integer() {
            return BigRational::new_raw(a.numer() + b.numer(), BigInt::one());
        }
        return qnew(a.numer() + b.numer(), a.denom().clone());
    }
    if a.is_integer() {
        return BigRational::new_raw(a.numer() * b.denom() + b.numer(), b.denom().clone());
    }
    if b.is_integer() {
        return BigRational::new_raw(a.numer() + b.numer() * a.denom(), a.denom().clone());
    }
    qnew(
        a.numer() * b.denom() + b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

pub fn qneg(a: &BigRational) -> BigRational {
    BigRational::new_raw(-a.numer(), a.denom().clone())
}

pub fn qsub(a: &BigRational, b: &BigRational) -> BigRational {
    qadd(a, &qneg(b))
}

pub fn qmul(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() || b.is_zero() {
        return BigRational::zero();
    }
    if a.is_integer() && b.is_integer() {
        return BigRational::new_raw(a.numer() * b.numer(), BigInt::one());
    }
    let g1 = igcd(a.numer(), b.denom());
    let g2 = igcd(b.numer(), a.denom());
    let n = (a.numer() / &g1) * (b.numer() / &g2);
    let d = (a.denom() / &g2) * (b.denom() / &g1);
    BigRational::new_raw(n, d)
}

pub fn qrecip(a: &BigRational) -> BigRational {
    assert!(!a.is_zero(), "reciprocal of zero");
    if a.numer().is_negative() {
        BigRational::new_raw(-a.denom(), -a.numer())
    } else {
        BigRational::new_raw(a.denom().clone(), a.numer().clone())
    }
}

pub fn qdiv(a: &BigRational, b: &BigRational) -> BigRational {
    qmul(a, &qrecip(b))
}

/// Midpoint of `a` and `b`.
pub fn qmid(a: &BigRational, b: &BigRational) -> BigRational {
    let s = qadd(a, b);
    let (n, d) = (s.numer().clone(), s.denom() * 2);
    if n.is_even() {
        qnew(n, d)
    } else {
        BigRational::new_raw(n, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_basic() {
        assert_eq!(igcd(&BigInt::from(12), &BigInt::from(-18)), BigInt::from(6));
        assert_eq!(igcd(&BigInt::from(0), &BigInt::from(5)), BigInt::from(5));
        let big = BigInt::from(3).pow(200u32) * 7;
        assert_eq!(igcd(&big, &BigInt::from(21)), BigInt::from(21));
    }

    #[test]
    fn midpoint() {
        assert_eq!(qmid(&r(1, 2), &r(3, 2)), r(1, 1));
        assert_eq!(qmid(&r(0, 1), &r(1, 1)), r(1, 2));
    }

    proptest! {
        #[test]
        fn agrees_with_ratio(an in -1000i64..1000, ad in 1i64..50, bn in -1000i64..1000, bd in 1i64..50) {
            let (a, b) = (r(an, ad), r(bn, bd));
            prop_assert_eq!(qadd(&a, &b), &a + &b);
            prop_assert_eq!(qsub(&a, &b), &a - &b);
            prop_assert_eq!(qmul(&a, &b), &a * &b);
            if !b.is_zero() {
                prop_assert_eq!(qdiv(&a, &b), &a / &b);
            }
            prop_assert_eq!(qmid(&a, &b), (&a + &b) / BigRational::from_integer(2.into()));
        }
    }
}
