//! Multivariate gcd, resultants, discriminants and square-free bases.

use super::{PolySet, Polynomial};
use crate::error::PolyError;

/// A polynomial viewed as univariate in some variable, coefficients low to high.
type UPoly = Vec<Polynomial>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn udeg(p: &[Polynomial]) -> usize {
    debug_assert!(!p.is_empty());
    p.len() - 1
}

/// Pseudo-remainder of `a` by `b` (both viewed in the same main variable):
/// `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
fn prem_u(a: &[Polynomial], b: &[Polynomial]) -> UPoly {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.len() < b.len() {
        return r;
    }
    let db = udeg(b);
    let lcb = &b[db];
    let mut e = r.len() - b.len() + 1;
    while !r.is_empty() && r.len() >= b.len() {
        let d = r.len() - 1;
        let lr = r[d].clone();
        let shift = d - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = &r[j + shift] - &(&lr * bj);
        }
        debug_assert!(r[d].is_zero());
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lcb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Pseudo-remainder of `a` by `b` with respect to `x_v`.
pub fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    assert!(!b.is_zero(), "pseudo-division by zero");
    let r = prem_u(&a.coeffs_in(v), &b.coeffs_in(v));
    Polynomial::from_coeffs_in(a.nvars(), v, &r)
}

/// Normalized gcd over the rationals. `gcd(0, 0) = 0`; constants give 1.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let n = a.nvars();
    if a.is_zero() {
        return b.normalize();
    }
    if b.is_zero() {
        return a.normalize();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n);
    }
    if a == b {
        return a.normalize();
    }
    let v = a
        .main_var()
        .into_iter()
        .chain(b.main_var())
        .max()
        .expect("non-constant");
    match (a.contains_var(v), b.contains_var(v)) {
        (true, true) => {
            let ca = content_in(a, v);
            let cb = content_in(b, v);
            let c = gcd(&ca, &cb);
            let pa = a.div_exact(&ca).expect("content divides");
            let pb = b.div_exact(&cb).expect("content divides");
            let g = prs_gcd(pa, pb, v);
            (&c * &g).normalize()
        }
        (true, false) => gcd(&content_in(a, v), b),
        (false, true) => gcd(a, &content_in(b, v)),
        (false, false) => unreachable!(),
    }
}

const MODP: u64 = 4_294_967_291;

fn mulm(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

fn powm(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a);
        }
        a = mulm(a, a);
        e >>= 1;
    }
    r
}

fn invm(a: u64) -> u64 {
    powm(a, MODP - 2)
}

fn int_mod(n: &num_bigint::BigInt) -> u64 {
    use num_traits::ToPrimitive;
    let m = num_bigint::BigInt::from(MODP);
    let r = ((n % &m) + &m) % &m;
    r.to_u64().expect("reduced")
}

// Image of `f` in F_p[x_v] after substituting `pt` for the other variables.
// `None` when a denominator vanishes mod p.
fn image_modp(f: &Polynomial, v: usize, pt: &[u64]) -> Option<Vec<u64>> {
    let d = f.degree(v).max(0) as usize;
    let mut out = vec![0u64; d + 1];
    for t in f.terms() {
        let num = int_mod(t.coefficient.numer());
        let den = int_mod(t.coefficient.denom());
        if den == 0 {
            return None;
        }
        let mut c = mulm(num, invm(den));
        for (j, &e) in t.exponents.iter().enumerate() {
            if j != v && e > 0 {
                c = mulm(c, powm(pt[j], e as u64));
            }
        }
        let k = t.exponents[v] as usize;
        out[k] = (out[k] + c) % MODP;
    }
    Some(out)
}

fn trim_modp(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn gcd_degree_modp(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim_modp(&mut a);
    trim_modp(&mut b);
    while !b.is_empty() {
        let inv = invm(*b.last().expect("nonempty"));
        while a.len() >= b.len() {
            let q = mulm(*a.last().expect("nonempty"), inv);
            let shift = a.len() - b.len();
            for (j, &bj) in b.iter().enumerate() {
                a[j + shift] = (a[j + shift] + MODP - mulm(q, bj)) % MODP;
            }
            trim_modp(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

// Sufficient test for `gcd(a, b)` having degree 0 in `x_v`: specialize the
// other variables modulo a prime where both leading coefficients survive.
fn coprime_modp(a: &Polynomial, b: &Polynomial, v: usize) -> bool {
    let n = a.nvars();
    for attempt in 0..3u64 {
        let pt: Vec<u64> = (0..n as u64)
            .map(|j| (1_000_003 * (attempt + 1) + 7919 * j * j + 104_729 * j) % MODP)
            .collect();
        let (Some(ia), Some(ib)) = (image_modp(a, v, &pt), image_modp(b, v, &pt)) else {
            return false;
        };
        if ia.last() == Some(&0) || ib.last() == Some(&0) {
            continue;
        }
        return gcd_degree_modp(ia, ib) == 0;
    }
    false
}

// Primitive PRS on inputs primitive in x_v.
fn prs_gcd(a: Polynomial, b: Polynomial, v: usize) -> Polynomial {
    if coprime_modp(&a, &b, v) {
        return Polynomial::one(a.nvars());
    }
    let (mut a, mut b) = if a.degree(v) >= b.degree(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            return primitive_part_in(&b, v);
        }
        if r.degree(v) == 0 {
            return Polynomial::one(a.nvars());
        }
        a = b;
        b = primitive_part_in(&r, v);
    }
}

/// Content with respect to `x_v`: the normalized gcd of the coefficients.
/// A polynomial free of `x_v` is its own content.
pub fn content_in(f: &Polynomial, v: usize) -> Polynomial {
    if f.is_zero() {
        return f.clone();
    }
    if !f.contains_var(v) {
        return f.normalize();
    }
    let mut acc = Polynomial::zero(f.nvars());
    for c in f.coeffs_in(v).iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_constant() {
            return Polynomial::one(f.nvars());
        }
    }
    acc
}

/// Normalized primitive part with respect to `x_v`.
pub fn primitive_part_in(f: &Polynomial, v: usize) -> Polynomial {
    if f.is_zero() {
        return f.clone();
    }
    let c = content_in(f, v);
    f.div_exact(&c).expect("content divides").normalize()
}

/// Square-free part with respect to `x_v` of the primitive part of `f`.
pub fn squarefree_part_in(f: &Polynomial, v: usize) -> Polynomial {
    let p = primitive_part_in(f, v);
    if p.degree(v) <= 1 {
        return p;
    }
    let g = gcd(&p, &p.derivative(v));
    if g.degree(v) <= 0 {
        return p;
    }
    p.div_exact(&g).expect("gcd divides").normalize()
}

/// Resultant with respect to `x_v` via the subresultant PRS.
pub fn resultant(p: &Polynomial, q: &Polynomial, v: usize) -> Result<Polynomial, PolyError> {
    for f in [p, q] {
        if f.degree(v) < 1 {
            return Err(PolyError::DegreeTooLow {
                var: v,
                degree: f.degree(v),
                required: 1,
            });
        }
    }
    let n = p.nvars();
    let mut a = p.coeffs_in(v);
    let mut b = q.coeffs_in(v);
    let mut negate = false;
    if udeg(&a) < udeg(&b) {
        if (udeg(&a) * udeg(&b)) % 2 == 1 {
            negate = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Polynomial::one(n);
    let mut h = Polynomial::one(n);
    loop {
        let (da, db) = (udeg(&a), udeg(&b));
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = prem_u(&a, &b);
        if r.is_empty() {
            return Ok(Polynomial::zero(n));
        }
        a = b;
        let divisor = &g * &h.pow(delta);
        b = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = a.last().expect("nonzero").clone();
        h = if delta == 0 {
            h
        } else {
            g.pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
        if udeg(&b) == 0 {
            let da = udeg(&a) as u32;
            let res = b[0]
                .pow(da)
                .div_exact(&h.pow(da - 1))
                .expect("subresultant division is exact");
            return Ok(if negate { -res } else { res });
        }
    }
}

/// Sylvester-matrix determinant, kept as an independent check on
/// [`resultant`] for small degrees.
pub fn resultant_sylvester(
    p: &Polynomial,
    q: &Polynomial,
    v: usize,
) -> Result<Polynomial, PolyError> {
    for f in [p, q] {
        if f.degree(v) < 1 {
            return Err(PolyError::DegreeTooLow {
                var: v,
                degree: f.degree(v),
                required: 1,
            });
        }
    }
    let n = p.nvars();
    let a = p.coeffs_in(v);
    let b = q.coeffs_in(v);
    let (m, k) = (udeg(&a), udeg(&b));
    let size = m + k;
    let mut mat = vec![vec![Polynomial::zero(n); size]; size];
    for row in 0..k {
        for (j, c) in a.iter().rev().enumerate() {
            mat[row][row + j] = c.clone();
        }
    }
    for row in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[k + row][row + j] = c.clone();
        }
    }
    Ok(bareiss_det(mat, n))
}

fn bareiss_det(mut m: Vec<Vec<Polynomial>>, nvars: usize) -> Polynomial {
    let size = m.len();
    let mut sign_flip = false;
    let mut prev = Polynomial::one(nvars);
    for k in 0..size {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Polynomial::zero(nvars),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Discriminant with respect to `x_v`:
/// `(-1)^(d(d-1)/2) * res(p, dp/dv) / lc(p)`.
pub fn discriminant(p: &Polynomial, v: usize) -> Result<Polynomial, PolyError> {
    let d = p.degree(v);
    if d < 2 {
        return Err(PolyError::DegreeTooLow {
            var: v,
            degree: d,
            required: 2,
        });
    }
    let r = resultant(p, &p.derivative(v), v)?;
    let lc = p.lc_in(v);
    let q = r.div_exact(&lc).expect("leading coefficient divides resultant");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}

/// Pairwise-coprime, square-free, primitive, normalized polynomials (with
/// respect to `x_v`) whose product has the same `x_v`-roots as the product of
/// the inputs. Polynomials free of `x_v` are dropped.
pub fn squarefree_basis(s: &PolySet, v: usize) -> PolySet {
    let mut items: Vec<Polynomial> = Vec::new();
    for f in s.polys() {
        if f.degree(v) >= 1 {
            let g = squarefree_part_in(f, v);
            if !items.contains(&g) {
                items.push(g);
            }
        }
    }
    'refine: loop {
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                let g = gcd(&items[i], &items[j]);
                if g.degree(v) < 1 {
                    continue;
                }
                let a = items[i].div_exact(&g).expect("gcd divides");
                let b = items[j].div_exact(&g).expect("gcd divides");
                items.remove(j);
                items.remove(i);
                for h in [g, a, b] {
                    if h.degree(v) >= 1 {
                        let h = h.normalize();
                        if !items.contains(&h) {
                            items.push(h);
                        }
                    }
                }
                continue 'refine;
            }
        }
        break;
    }
    items.sort();
    PolySet::new(s.variables().to_vec(), items)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use crate::poly::{parse_polynomial, Variable};
    use proptest::prelude::*;

    fn vars() -> Vec<Variable> {
        Variable::named(&["x", "a", "b", "c", "d"])
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s, &vars()).unwrap()
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&p("x^2 - 2"), &p("x - 1"), 0).unwrap(), p("-1"));
        assert_eq!(resultant(&p("x - 1"), &p("x^2 - 1"), 0).unwrap(), p("0"));
        assert_eq!(
            resultant(&p("a*x + b"), &p("c*x + d"), 0).unwrap(),
            p("a*d - b*c")
        );
    }

    #[test]
    fn resultant_requires_positive_degree() {
        assert!(matches!(
            resultant(&p("a"), &p("x"), 0),
            Err(PolyError::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p("x^2 + b*x + c"), 0).unwrap(), p("b^2 - 4*c"));
        assert_eq!(discriminant(&p("(x - 1)^2"), 0).unwrap(), p("0"));
        assert_eq!(discriminant(&p("x^2 - 1"), 0).unwrap(), p("4"));
        assert!(discriminant(&p("x + 1"), 0).is_err());
    }

    #[test]
    fn general_quadratic_and_cubic_discriminants() {
        assert_eq!(
            discriminant(&p("a*x^2 + b*x + c"), 0).unwrap(),
            p("b^2 - 4*a*c")
        );
        // x^3 + a x + b: -4a^3 - 27b^2
        assert_eq!(
            discriminant(&p("x^3 + a*x + b"), 0).unwrap(),
            p("-4*a^3 - 27*b^2")
        );
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&p("x^2 - a^2"), &p("x*a + a^2")), p("x + a"));
        assert_eq!(gcd(&p("6*x"), &p("4*x^2")), p("x"));
        assert_eq!(gcd(&p("x + 1"), &p("x - 1")), p("1"));
        assert_eq!(gcd(&p("a*b*x"), &p("a*c")), p("a"));
    }

    #[test]
    fn squarefree_basis_examples() {
        let vs = vars();
        let s = PolySet::new(vs.clone(), [p("(x - 1)^2*(x + 3)")]);
        let b = squarefree_basis(&s, 0);
        assert_eq!(b.polys(), &[p("x^2 + 2*x - 3")]);

        let s = PolySet::new(vs.clone(), [p("x^2"), p("x^3")]);
        assert_eq!(squarefree_basis(&s, 0).polys(), &[p("x")]);

        let s = PolySet::new(vs, [p("5")]);
        assert!(squarefree_basis(&s, 0).is_empty());
    }

    #[test]
    fn squarefree_basis_splits_common_factors() {
        let vs = vars();
        let s = PolySet::new(vs, [p("(x - a)*(x + 1)"), p("(x - a)*(x - 2)")]);
        let b = squarefree_basis(&s, 0);
        assert_eq!(b.len(), 3);
        for q in b.polys() {
            assert!(gcd(q, &q.derivative(0)).degree(0) <= 0);
        }
    }

    fn small_poly(maxdeg: u32) -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((0..=maxdeg, 0u32..2, 0u32..2, -5i64..=5), 1..4).prop_map(|ts| {
            Polynomial::from_terms(
                5,
                ts.into_iter()
                    .map(|(x, a, b, c)| (vec![x, a, b, 0, 0], BigRational::from_integer(c.into()))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(f in small_poly(3), g in small_poly(3), h in small_poly(3)) {
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f * &g, &g * &f);
        }

        #[test]
        fn subresultant_matches_sylvester(f in small_poly(4), g in small_poly(4)) {
            prop_assume!(f.degree(0) >= 1 && g.degree(0) >= 1);
            prop_assert_eq!(resultant(&f, &g, 0).unwrap(), resultant_sylvester(&f, &g, 0).unwrap());
        }

        #[test]
        fn resultant_antisymmetry(f in small_poly(4), g in small_poly(4)) {
            prop_assume!(f.degree(0) >= 1 && g.degree(0) >= 1);
            let fg = resultant(&f, &g, 0).unwrap();
            let gf = resultant(&g, &f, 0).unwrap();
            if (f.degree(0) * g.degree(0)) % 2 == 1 {
                prop_assert_eq!(fg, -gf);
            } else {
                prop_assert_eq!(fg, gf);
            }
        }

        #[test]
        fn common_root_forces_zero_resultant(f in small_poly(2), g in small_poly(2)) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            let common = p("x - a");
            let ff = &f * &common;
            let gg = &g * &common;
            prop_assert!(resultant(&ff, &gg, 0).unwrap().is_zero());
        }

        #[test]
        fn gcd_divides_both(f in small_poly(3), g in small_poly(3), h in small_poly(2)) {
            let a = &f * &h;
            let b = &g * &h;
            prop_assume!(!a.is_zero() && !b.is_zero());
            let d = gcd(&a, &b);
            prop_assert!(a.div_exact(&d).is_some());
            prop_assert!(b.div_exact(&d).is_some());
            prop_assert!(d.div_exact(&h.normalize()).is_some() || h.is_constant());
        }

        #[test]
        fn squarefree_basis_is_coprime_and_squarefree(
            fs in prop::collection::vec(small_poly(3), 1..4)
        ) {
            let s = PolySet::new(vars(), fs);
            let b = squarefree_basis(&s, 0);
            for (i, q) in b.polys().iter().enumerate() {
                prop_assert!(gcd(q, &q.derivative(0)).degree(0) <= 0);
                for r in &b.polys()[i + 1..] {
                    prop_assert!(gcd(q, r).degree(0) <= 0);
                }
            }
        }
    }
}
