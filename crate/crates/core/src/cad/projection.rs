use crate::error::CadError;
use crate::poly::{
    content_in, discriminant, resultant, squarefree_basis, PolySet, Polynomial,
};

/// One McCallum projection step eliminating `x_v`.
pub fn mccallum_step(s: &PolySet, v: usize) -> Result<PolySet, CadError> {
    if !s.is_empty() && !s.polys().iter().any(|p| p.contains_var(v)) {
        return Err(CadError::VariableAbsent(v));
    }
    Ok(step(s, v))
}

pub(crate) fn step(s: &PolySet, v: usize) -> PolySet {
    let mut out: Vec<Polynomial> = Vec::new();
    for f in s.polys() {
        out.push(content_in(f, v));
    }
    let basis = squarefree_basis(s, v);
    let b = basis.polys();
    for (i, p) in b.iter().enumerate() {
        out.extend(p.coeffs_in(v));
        if p.degree(v) >= 2 {
            out.push(discriminant(p, v).expect("degree checked"));
        }
        for q in &b[i + 1..] {
            out.push(resultant(p, q, v).expect("both contain the variable"));
        }
    }
    clean(s, out)
}

/// Normalizes, drops constants and duplicates, and sorts for determinism.
pub(crate) fn clean(s: &PolySet, polys: Vec<Polynomial>) -> PolySet {
    let mut v: Vec<Polynomial> = polys
        .into_iter()
        .filter(|p| !p.is_constant())
        .map(|p| p.normalize())
        .collect();
    v.sort();
    v.dedup();
    PolySet::new(s.variables().to_vec(), v)
}
