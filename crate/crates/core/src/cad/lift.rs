use std::rc::Rc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::tower::{AtLevel, Elem, Tower};
use super::{project_all, CadResult, CadStatus, Limits, VariableOrdering};
use crate::error::CadError;
use crate::poly::{squarefree_basis, PolySet, Polynomial};
use crate::univar::{self, RootBox};

#[derive(Clone, Debug)]
enum Coord {
    Rat(BigRational),
    /// Tower level holding the coordinate.
    Alg(usize),
}

/// A point of `R^k` whose coordinates are rationals or real algebraic
/// numbers represented in a [`Tower`].
#[derive(Clone, Debug, Default)]
pub struct SamplePoint {
    tower: Tower,
    coords: Vec<Coord>,
}

impl SamplePoint {
    pub fn new() -> Self {
        SamplePoint::default()
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn push_rational(&mut self, r: BigRational) {
        self.coords.push(Coord::Rat(r));
    }

    /// Appends the `index`-th real root (ascending, from 0) of `p` in the
    /// next variable, with the earlier variables fixed at this point.
    pub fn push_root(&mut self, p: &Polynomial, index: usize) -> Result<(), CadError> {
        let k = self.coords.len();
        for v in k + 1..p.nvars() {
            if p.contains_var(v) {
                return Err(CadError::MissingCoordinate(v));
            }
        }
        let roots = match stack_roots(&mut self.tower, &self.coords, std::slice::from_ref(p), k, 0) {
            Ok(r) => r,
            Err(_) => return Err(CadError::Nullified),
        };
        let count = roots.len();
        let r = roots
            .into_iter()
            .nth(index)
            .ok_or(CadError::NoSuchRoot { index, count })?;
        let c = section_coord(&mut self.tower, r);
        self.coords.push(c);
        Ok(())
    }

    /// Midpoint approximation of each coordinate.
    pub fn approximate(&self) -> Vec<BigRational> {
        self.coords
            .iter()
            .map(|c| match c {
                Coord::Rat(r) => r.clone(),
                Coord::Alg(l) => {
                    let (lo, hi) = self.tower.interval(*l);
                    (lo + hi) / BigRational::from_integer(2.into())
                }
            })
            .collect()
    }
}

/// Exact sign of `p` at `pt`.
pub fn sign_at(p: &Polynomial, pt: &mut SamplePoint) -> Result<i8, CadError> {
    for v in pt.dim()..p.nvars() {
        if p.contains_var(v) {
            return Err(CadError::MissingCoordinate(v));
        }
    }
    let level_var = level_vars(&pt.coords);
    let q = substitute_rationals(p, &pt.coords);
    let h = pt.tower.height();
    let e = to_elem(&pt.tower, &q, h, &level_var);
    Ok(pt.tower.sign(h, &e))
}

fn level_vars(coords: &[Coord]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, c) in coords.iter().enumerate() {
        if let Coord::Alg(l) = c {
            debug_assert_eq!(*l, out.len() + 1);
            out.push(i);
        }
    }
    out
}

fn substitute_rationals(p: &Polynomial, coords: &[Coord]) -> Polynomial {
    let mut q = p.clone();
    for (i, c) in coords.iter().enumerate() {
        if let Coord::Rat(r) = c {
            if q.contains_var(i) {
                q = q.substitute(i, r);
            }
        }
    }
    q
}

/// Converts a polynomial in the algebraic coordinates' variables to an
/// element at tower level `l`.
fn to_elem(t: &Tower, p: &Polynomial, l: usize, level_var: &[usize]) -> Elem {
    if l == 0 {
        return Elem::Q(p.constant_value().expect("all coordinates substituted"));
    }
    let v = level_var[l - 1];
    let cs: Vec<Elem> = p
        .coeffs_in(v)
        .iter()
        .map(|c| to_elem(t, c, l - 1, level_var))
        .collect();
    t.from_coeffs(l, cs)
}

#[derive(Clone, Debug)]
struct Root {
    def: Rc<Vec<Elem>>,
    b: RootBox,
    sign_lo: i8,
}

enum Abort {
    Nullified,
    CellCap,
    TimeCap,
}

fn overlap(a: &RootBox, b: &RootBox) -> bool {
    match (a.is_exact(), b.is_exact()) {
        (true, true) => a.lo == b.lo,
        (true, false) => b.lo < a.lo && a.lo < b.hi,
        (false, true) => a.lo < b.lo && b.lo < a.hi,
        (false, false) => a.lo.clone().max(b.lo.clone()) < a.hi.clone().min(b.hi.clone()),
    }
}

/// Distinct real roots, in ascending order with disjoint boxes, of the
/// polynomials in variable `k` over the point `coords`. A polynomial that
/// vanishes identically is skipped over a zero-dimensional cell and aborts
/// otherwise.
fn stack_roots(
    tower: &mut Tower,
    coords: &[Coord],
    polys: &[Polynomial],
    k: usize,
    dim: usize,
) -> Result<Vec<Root>, Abort> {
    let l = tower.height();
    let level_var = level_vars(coords);
    let mut roots: Vec<Root> = Vec::new();
    for b in polys {
        let p = substitute_rationals(b, coords);
        let mut cs: Vec<Elem> = p
            .coeffs_in(k)
            .iter()
            .map(|c| to_elem(tower, c, l, &level_var))
            .collect();
        let mut f = AtLevel::new(tower, l);
        univar::trim(&mut f, &mut cs);
        if cs.is_empty() {
            if dim > 0 {
                return Err(Abort::Nullified);
            }
            continue;
        }
        if cs.len() == 1 {
            continue;
        }
        let mut q = univar::squarefree(&mut f, &cs);
        let den = if l == 0 {
            let mut qs: Vec<BigRational> = q
                .iter()
                .map(|e| e.as_rational().expect("level 0").clone())
                .collect();
            univar::make_primitive(&mut qs);
            let d = qs.last().expect("nonconstant").numer().clone();
            q = qs.into_iter().map(Elem::Q).collect();
            Some(d)
        } else {
            None
        };
        let boxes = univar::isolate_squarefree(&mut f, &q, den.as_ref());
        let def = Rc::new(q);
        for b in boxes {
            let sign_lo = if b.is_exact() {
                0
            } else {
                let v = univar::eval_rat(&mut f, &def, &b.lo);
                univar::RealField::sign(&mut f, &v)
            };
            roots.push(Root {
                def: def.clone(),
                b,
                sign_lo,
            });
        }
    }
    merge_roots(tower, l, &mut roots);
    Ok(roots)
}

fn merge_roots(tower: &mut Tower, l: usize, roots: &mut Vec<Root>) {
    loop {
        roots.sort_by(|a, b| a.b.lo.cmp(&b.b.lo).then_with(|| a.b.hi.cmp(&b.b.hi)));
        let Some(i) = (0..roots.len().saturating_sub(1)).find(|&i| overlap(&roots[i].b, &roots[i + 1].b))
        else {
            separate_touching(tower, l, roots);
            return;
        };
        let mut f = AtLevel::new(tower, l);
        let (a, b) = (roots[i].clone(), roots[i + 1].clone());
        match (a.b.is_exact(), b.b.is_exact()) {
            (true, true) => {
                roots.remove(i + 1);
            }
            (true, false) | (false, true) => {
                let (x, oi) = if a.b.is_exact() { (a.b.lo.clone(), i + 1) } else { (b.b.lo.clone(), i) };
                let o = &roots[oi];
                let v = univar::eval_rat(&mut f, &o.def, &x);
                let s = univar::RealField::sign(&mut f, &v);
                if s == 0 {
                    roots.remove(oi);
                } else if s == o.sign_lo {
                    roots[oi].b.lo = x;
                } else {
                    roots[oi].b.hi = x;
                }
            }
            (false, false) => {
                let jlo = a.b.lo.clone().max(b.b.lo.clone());
                let jhi = a.b.hi.clone().min(b.b.hi.clone());
                let c = univar::gcd(&mut f, &a.def, &b.def);
                if c.len() >= 2 {
                    let vlo = univar::eval_rat(&mut f, &c, &jlo);
                    let vhi = univar::eval_rat(&mut f, &c, &jhi);
                    let slo = univar::RealField::sign(&mut f, &vlo);
                    let shi = univar::RealField::sign(&mut f, &vhi);
                    if slo * shi < 0 {
                        roots[i] = Root {
                            def: Rc::new(c),
                            b: RootBox { lo: jlo, hi: jhi },
                            sign_lo: slo,
                        };
                        roots.remove(i + 1);
                        continue;
                    }
                }
                for j in [i, i + 1] {
                    let r = &mut roots[j];
                    univar::bisect(&mut f, &r.def, &mut r.b, r.sign_lo);
                }
            }
        }
    }
}

// An exact root sitting on the endpoint of its neighbour's box leaves no
// room for a sector sample; shrink the neighbour away from it.
fn separate_touching(tower: &mut Tower, l: usize, roots: &mut [Root]) {
    let mut f = AtLevel::new(tower, l);
    for i in 0..roots.len().saturating_sub(1) {
        let (left, right) = roots.split_at_mut(i + 1);
        let (a, b) = (&mut left[i], &mut right[0]);
        if a.b.hi != b.b.lo {
            continue;
        }
        if a.b.is_exact() && !b.b.is_exact() {
            let x = a.b.hi.clone();
            while !b.b.is_exact() && b.b.lo == x {
                univar::bisect(&mut f, &b.def, &mut b.b, b.sign_lo);
            }
        } else if b.b.is_exact() && !a.b.is_exact() {
            let x = b.b.lo.clone();
            while !a.b.is_exact() && a.b.hi == x {
                univar::bisect(&mut f, &a.def, &mut a.b, a.sign_lo);
            }
        }
    }
}

fn section_coord(tower: &mut Tower, r: Root) -> Coord {
    if r.b.is_exact() {
        Coord::Rat(r.b.lo)
    } else {
        let def = Rc::try_unwrap(r.def).unwrap_or_else(|rc| (*rc).clone());
        Coord::Alg(tower.push(def, r.b.lo, r.b.hi))
    }
}

/// Rational samples of the `m + 1` sectors around ascending disjoint roots.
fn sector_samples(roots: &[Root]) -> Vec<BigRational> {
    let one = BigRational::one();
    if roots.is_empty() {
        return vec![BigRational::from_integer(BigInt::from(0))];
    }
    let lower = |r: &Root| (r.b.lo.clone(), r.b.is_exact());
    let upper = |r: &Root| (r.b.hi.clone(), r.b.is_exact());
    let mut out = Vec::with_capacity(roots.len() + 1);
    let (lo, open) = lower(&roots[0]);
    out.push(univar::simplest_dyadic(&(&lo - &one), false, &lo, open));
    for w in roots.windows(2) {
        let (a, ao) = upper(&w[0]);
        let (b, bo) = lower(&w[1]);
        out.push(univar::simplest_dyadic(&a, ao, &b, bo));
    }
    let (hi, open) = upper(roots.last().expect("nonempty"));
    out.push(univar::simplest_dyadic(&hi, open, &(&hi + &one), false));
    out
}

struct Lifter<'a> {
    bases: Vec<Vec<Polynomial>>,
    limits: &'a Limits,
    start: Instant,
    leaves: u64,
    per_level: Vec<u64>,
}

impl Lifter<'_> {
    fn lift(
        &mut self,
        coords: &mut Vec<Coord>,
        mut tower: Tower,
        dim: usize,
    ) -> Result<(), Abort> {
        if let Some(cap) = self.limits.time_cap {
            if self.start.elapsed() > cap {
                return Err(Abort::TimeCap);
            }
        }
        let k = coords.len();
        let n = self.bases.len();
        let roots = stack_roots(&mut tower, coords, &self.bases[k], k, dim)?;
        let cells = 2 * roots.len() as u64 + 1;
        self.per_level[k] += cells;
        if k + 1 == n {
            self.leaves += cells;
            if self.leaves > self.limits.cell_cap {
                return Err(Abort::CellCap);
            }
            return Ok(());
        }
        let sectors = sector_samples(&roots);
        let mut sectors = sectors.into_iter();
        let first = sectors.next().expect("at least one sector");
        coords.push(Coord::Rat(first));
        self.lift(coords, tower.clone(), dim + 1)?;
        coords.pop();
        for (r, s) in roots.into_iter().zip(sectors) {
            let mut t = tower.clone();
            let c = section_coord(&mut t, r);
            coords.push(c);
            self.lift(coords, t, dim)?;
            coords.pop();
            coords.push(Coord::Rat(s));
            self.lift(coords, tower.clone(), dim + 1)?;
            coords.pop();
        }
        Ok(())
    }
}

/// Cells of the sign-invariant decomposition of `R^n` for `s` under `ord`.
pub fn cell_count(
    s: &PolySet,
    ord: &VariableOrdering,
    limits: &Limits,
) -> Result<CadResult, CadError> {
    let n = s.nvars();
    if ord.len() != n {
        return Err(CadError::InvalidOrdering(n));
    }
    if n == 0 {
        return Ok(CadResult {
            cell_count: Some(1),
            per_level_cells: Vec::new(),
            status: CadStatus::Completed,
        });
    }
    let levels = match project_all(s, ord) {
        Ok(l) => l,
        Err(CadError::EmptyInput) => {
            return Ok(CadResult {
                cell_count: Some(1),
                per_level_cells: vec![1; n],
                status: CadStatus::Completed,
            })
        }
        Err(e) => return Err(e),
    };
    let bases: Vec<Vec<Polynomial>> = (0..n)
        .map(|k| squarefree_basis(levels.level(k + 1), k).polys().to_vec())
        .collect();
    let mut lifter = Lifter {
        bases,
        limits,
        start: Instant::now(),
        leaves: 0,
        per_level: vec![0; n],
    };
    let outcome = lifter.lift(&mut Vec::new(), Tower::new(), 0);
    let status = match outcome {
        Ok(()) => CadStatus::Completed,
        Err(Abort::CellCap) => CadStatus::CellCapExceeded,
        Err(Abort::TimeCap) => CadStatus::TimeCapExceeded,
        Err(Abort::Nullified) => CadStatus::NotWellOriented,
    };
    Ok(CadResult {
        cell_count: (status == CadStatus::Completed).then_some(lifter.leaves),
        per_level_cells: lifter.per_level,
        status,
    })
}
