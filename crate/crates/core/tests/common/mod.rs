//! Independent oracles shared by integration tests.
#![allow(dead_code)]

use cadsel::svm::rbf_kernel;

/// Minimum of `1/2 a'Qa - sum(a)` over `0 <= a_i <= cap_i`, `y'a = 0`, by
/// accelerated projected gradient.
pub fn qp_oracle(rows: &[Vec<f64>], y: &[f64], cap: &[f64], gamma: f64) -> f64 {
    let n = rows.len();
    let q: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| y[a] * y[b] * rbf_kernel(&rows[a], &rows[b], gamma))
                .collect()
        })
        .collect();
    let lip: f64 = q
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
        .max(1e-12);
    let obj = |a: &[f64]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += 0.5 * a[i] * q[i][j] * a[j];
            }
            s -= a[i];
        }
        s
    };
    let project = |v: &[f64]| -> Vec<f64> {
        let at = |lam: f64| -> Vec<f64> {
            (0..n)
                .map(|i| (v[i] - lam * y[i]).clamp(0.0, cap[i]))
                .collect()
        };
        let h = |lam: f64| at(lam).iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
        let r = v.iter().map(|x| x.abs()).fold(0.0, f64::max)
            + cap.iter().fold(0.0, |a: f64, b| a.max(*b))
            + 1.0;
        let (mut lo, mut hi) = (-r, r);
        for _ in 0..100 {
            let m = 0.5 * (lo + hi);
            if h(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        at(0.5 * (lo + hi))
    };
    let mut x = vec![0.0; n];
    let mut z = x.clone();
    let mut t = 1.0f64;
    for _ in 0..200_000 {
        let g: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| q[i][j] * z[j]).sum::<f64>() - 1.0)
            .collect();
        let step: Vec<f64> = (0..n).map(|i| z[i] - g[i] / lip).collect();
        let nx = project(&step);
        let moved = nx.iter().zip(&x).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let nt = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        z = (0..n)
            .map(|i| nx[i] + (t - 1.0) / nt * (nx[i] - x[i]))
            .collect();
        x = nx;
        t = nt;
        if moved < 1e-13 {
            break;
        }
    }
    obj(&x)
}

/// Number of distinct real roots of an integer polynomial (coefficients low
/// to high) by Aberth iteration in double precision plus clustering.
pub fn numeric_real_root_count(coeffs: &[i64]) -> usize {
    let mut c: Vec<f64> = coeffs.iter().map(|&v| v as f64).collect();
    while c.last() == Some(&0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return 0;
    }
    let lead = c[d];
    let c: Vec<f64> = c.iter().map(|v| v / lead).collect();
    let roots = aberth(&c);
    // cluster roots closer than a tolerance that grows with multiplicity
    let tol = 1e-4;
    let mut reals: Vec<f64> = roots
        .iter()
        .filter(|r| r.1.abs() < tol * (1.0 + r.0.abs()))
        .map(|r| r.0)
        .collect();
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut count = 0;
    let mut last = f64::NEG_INFINITY;
    for r in reals {
        if r - last > 1e-3 * (1.0 + r.abs()) {
            count += 1;
        }
        last = r;
    }
    count
}

type C = (f64, f64);

fn cmul(a: C, b: C) -> C {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn cdiv(a: C, b: C) -> C {
    let d = b.0 * b.0 + b.1 * b.1;
    ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
}

fn aberth(c: &[f64]) -> Vec<C> {
    let d = c.len() - 1;
    let bound = 1.0 + c[..d].iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut z: Vec<C> = (0..d)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
            (0.5 * bound * th.cos(), 0.5 * bound * th.sin())
        })
        .collect();
    let eval = |x: C| -> (C, C) {
        let mut p = (c[d], 0.0);
        let mut dp = (0.0, 0.0);
        for i in (0..d).rev() {
            dp = (cmul(dp, x).0 + p.0, cmul(dp, x).1 + p.1);
            p = (cmul(p, x).0 + c[i], cmul(p, x).1);
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = eval(z[k]);
            if p.0 == 0.0 && p.1 == 0.0 {
                continue;
            }
            let ratio = cdiv(p, dp);
            let mut s = (0.0, 0.0);
            for m in 0..d {
                if m != k {
                    let diff = (z[k].0 - z[m].0, z[k].1 - z[m].1);
                    let inv = cdiv((1.0, 0.0), diff);
                    s = (s.0 + inv.0, s.1 + inv.1);
                }
            }
            let denom = (1.0 - cmul(ratio, s).0, -cmul(ratio, s).1);
            let w = cdiv(ratio, denom);
            z[k] = (z[k].0 - w.0, z[k].1 - w.1);
            moved = moved.max(w.0.abs() + w.1.abs());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}
