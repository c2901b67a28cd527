//! Multivariate factorization over Q(i).
//!
//! Bivariate inputs are handled by evaluating one variable, factoring the
//! univariate image, lifting the factors in K[[y]][x] and recombining.
//! More variables are folded into two by a Kronecker substitution.

use crate::field::Field;
use crate::gauss::GaussRat;
use crate::poly::mpoly::{gcd, Exps, MPoly};
use crate::poly::upoly::UPoly;
use crate::poly::zfactor::factor_gauss;

type G = GaussRat;
type Series = Vec<UPoly<G>>;

/// Factors `f` into monic irreducibles (leading term under lex order has
/// coefficient one) with multiplicities. Monomial factors appear as bare
/// variables. Returns the leading coefficient separately.
pub fn factor(f: &MPoly<G>) -> (G, Vec<(MPoly<G>, usize)>) {
    assert!(!f.is_zero(), "factor of zero polynomial");
    let n = f.nvars();
    let lc = f.lc();
    let mut out = Vec::new();
    let m = f.min_exps();
    for (v, &k) in m.iter().enumerate() {
        if k > 0 {
            out.push((MPoly::var(n, v), k as usize));
        }
    }
    let g = f.div_monomial(&m).monic();
    factor_rec(&g, 1, &mut out);
    let mut merged: Vec<(MPoly<G>, usize)> = Vec::new();
    for (h, k) in out {
        match merged.iter_mut().find(|(g, _)| *g == h) {
            Some(e) => e.1 += k,
            None => merged.push((h, k)),
        }
    }
    merged.sort_by_key(|(h, _)| sort_key(h));
    (lc, merged)
}

/// Whether `f` is irreducible over Q(i). Constants and zero are not.
pub fn is_irreducible(f: &MPoly<G>) -> bool {
    if f.is_zero() || f.is_constant() {
        return false;
    }
    let (_, fs) = factor(f);
    fs.len() == 1 && fs[0].1 == 1
}

pub fn sort_key(h: &MPoly<G>) -> (u32, Vec<(Exps, G)>) {
    (h.total_degree(), h.terms().map(|(e, c)| (e.clone(), c.clone())).collect())
}

fn factor_rec(f: &MPoly<G>, mult: usize, out: &mut Vec<(MPoly<G>, usize)>) {
    let used = f.vars_used();
    let Some(&v) = used.iter().min_by_key(|&&v| f.degree_in(v)) else {
        return;
    };
    let c = f.content_in(v);
    if !c.is_constant() {
        factor_rec(&c.monic(), mult, out);
    }
    let p = f.div_exact(&c).expect("content divides");
    for (a, k) in squarefree_in(&p, v) {
        for h in irreducibles(&a, v) {
            out.push((h, k * mult));
        }
    }
}

/// Yun's decomposition with respect to `x_v` of a polynomial primitive in `x_v`.
fn squarefree_in(p: &MPoly<G>, v: usize) -> Vec<(MPoly<G>, usize)> {
    let mut out = Vec::new();
    let dp = p.derivative(v);
    let a0 = gcd(p, &dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = c.sub(&b.derivative(v));
    let mut k = 1;
    while b.degree_in(v) > 0 {
        let a = gcd(&b, &d);
        b = b.div_exact(&a).expect("gcd divides");
        let c = d.div_exact(&a).expect("gcd divides");
        d = c.sub(&b.derivative(v));
        if !a.is_constant() {
            out.push((a.monic(), k));
        }
        k += 1;
    }
    out
}

/// Irreducible factors of a square-free polynomial primitive in `x_v`.
fn irreducibles(a: &MPoly<G>, v: usize) -> Vec<MPoly<G>> {
    let used = a.vars_used();
    match used.len() {
        0 => Vec::new(),
        1 => {
            let (_, fs) = factor_gauss(&a.to_upoly(v));
            fs.into_iter().map(|(g, _)| MPoly::from_upoly(a.nvars(), v, &g)).collect()
        }
        2 => {
            let y = *used.iter().find(|&&u| u != v).unwrap();
            bivariate(a, v, y)
        }
        _ => {
            let others: Vec<usize> = used.into_iter().filter(|&u| u != v).collect();
            kronecker(a, v, &others)
        }
    }
}

fn to_series(f: &MPoly<G>, x: usize, y: usize) -> Series {
    f.to_univariate(y).iter().map(|c| c.to_upoly(x)).collect()
}

fn from_series(s: &Series, nvars: usize, x: usize, y: usize) -> MPoly<G> {
    let mut r = MPoly::zero(nvars);
    for (k, c) in s.iter().enumerate() {
        let mut e = vec![0; nvars];
        e[y] = k as u32;
        r = r.add(&MPoly::from_upoly(nvars, x, c).mul_monomial(&e));
    }
    r
}

fn series_mul(a: &Series, b: &Series, prec: usize) -> Series {
    let mut out = vec![UPoly::zero(); prec.min(a.len() + b.len() - 1)];
    for (i, p) in a.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        for (j, q) in b.iter().enumerate() {
            if i + j < out.len() {
                out[i + j] = out[i + j].add(&p.mul(q));
            }
        }
    }
    out
}

/// Power-series inverse of `a` modulo `y^prec`; requires `a(0) != 0`.
fn series_inverse(a: &UPoly<G>, prec: usize) -> Vec<G> {
    let a0inv = a.coeff(0).inv();
    let mut inv = vec![a0inv.clone()];
    for k in 1..prec {
        let mut s = G::zero();
        for j in 1..=k {
            s = s.add(&a.coeff(j).mul(&inv[k - j]));
        }
        inv.push(s.neg().mul(&a0inv));
    }
    inv
}

fn small_points() -> impl Iterator<Item = G> {
    (0i64..).map(|t| G::from_i64(if t % 2 == 0 { t / 2 } else { -(t + 1) / 2 }))
}

/// Irreducible factors of a square-free bivariate polynomial, primitive in `x`.
fn bivariate(f: &MPoly<G>, x: usize, y: usize) -> Vec<MPoly<G>> {
    let n = f.nvars();
    if f.degree_in(x) == 1 {
        return vec![f.monic()];
    }
    let lcx = f.to_univariate(x).last().unwrap().to_upoly(y);
    let mut best: Option<(G, Vec<UPoly<G>>)> = None;
    let mut good = 0;
    for y0 in small_points().take(400) {
        if lcx.eval(&y0).is_zero() {
            continue;
        }
        let u = f.eval_var(y, &y0).to_upoly(x);
        if !u.is_squarefree() {
            continue;
        }
        let (_, fs) = factor_gauss(&u);
        let fs: Vec<UPoly<G>> = fs.into_iter().map(|(g, _)| g).collect();
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((y0, fs));
        }
        good += 1;
        if good >= 3 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (y0, us) = best.expect("a square-free specialization exists");
    if us.len() == 1 {
        return vec![f.monic()];
    }
    let mut g = f.shift_var(y, &y0);
    let m = g.degree_in(y) as usize;
    let prec = m + 1;
    let gs = to_series(&g, x, y);
    let lc_series = g.to_univariate(x).last().unwrap().to_upoly(y);
    let inv = series_inverse(&lc_series, prec);
    let monic_series: Series = (0..prec)
        .map(|k| {
            (0..=k).fold(UPoly::zero(), |acc, a| match gs.get(k - a) {
                Some(p) => acc.add(&p.scale(&inv[a])),
                None => acc,
            })
        })
        .collect();
    let mut lifted = hensel_lift(&monic_series, &us, prec);

    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let lcg: Series = g.to_univariate(x).last().unwrap().to_upoly(y).coeffs().iter().map(|c| UPoly::constant(c.clone())).collect();
        let mut hit = None;
        for subset in combinations(lifted.len(), s) {
            let cand = subset.iter().fold(lcg.clone(), |acc, &i| series_mul(&acc, &lifted[i], prec));
            let h = from_series(&cand, n, x, y).primitive_part_in(x);
            if h.degree_in(x) == 0 {
                continue;
            }
            if let Some(q) = g.div_exact(&h) {
                hit = Some((subset, h, q));
                break;
            }
        }
        match hit {
            Some((subset, h, q)) => {
                found.push(h);
                g = q;
                let mut k = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
            }
            None => s += 1,
        }
    }
    found.push(g);
    let back = y0.neg();
    found.into_iter().map(|h| h.shift_var(y, &back).monic()).collect()
}

/// Lifts `target = prod us (mod y)` to a factorization modulo `y^prec`.
fn hensel_lift(target: &Series, us: &[UPoly<G>], prec: usize) -> Vec<Series> {
    let r = us.len();
    let bezout: Vec<UPoly<G>> = (0..r)
        .map(|i| {
            let others = (0..r).filter(|&j| j != i).fold(UPoly::one(), |acc, j| acc.mul(&us[j]));
            others.inv_mod(&us[i]).expect("factors are coprime")
        })
        .collect();
    let mut lifted: Vec<Series> = us.iter().map(|u| vec![u.clone()]).collect();
    // prefix[j][k] = coefficient of y^k in lifted[0] * ... * lifted[j]
    let mut prefix: Vec<Series> = Vec::with_capacity(r);
    let mut acc = UPoly::one();
    for u in us {
        acc = acc.mul(u);
        prefix.push(vec![acc.clone()]);
    }
    let coeff_k = |lifted: &Vec<Series>, prefix: &Vec<Series>, k: usize| -> Series {
        let mut col: Series = Vec::with_capacity(r);
        col.push(lifted[0][k].clone());
        for j in 1..r {
            let mut c = UPoly::zero();
            for a in 0..=k {
                let p = if a == k { &col[j - 1] } else { &prefix[j - 1][a] };
                c = c.add(&p.mul(&lifted[j][k - a]));
            }
            col.push(c);
        }
        col
    };
    for k in 1..prec {
        for l in lifted.iter_mut() {
            l.push(UPoly::zero());
        }
        let col = coeff_k(&lifted, &prefix, k);
        let e = target.get(k).cloned().unwrap_or_else(UPoly::zero).sub(&col[r - 1]);
        if !e.is_zero() {
            for i in 0..r {
                lifted[i][k] = e.mul(&bezout[i]).rem(&us[i]);
            }
        }
        let col = coeff_k(&lifted, &prefix, k);
        for (j, c) in col.into_iter().enumerate() {
            prefix[j].push(c);
        }
    }
    lifted
}

/// Folds the variables `others` into one by `x_{o_j} -> y^(N^j)` and
/// recombines factors of the image.
fn kronecker(f: &MPoly<G>, x: usize, others: &[usize]) -> Vec<MPoly<G>> {
    let n = f.nvars();
    let base = others.iter().map(|&v| f.degree_in(v)).max().unwrap() as u64 + 1;
    let fold = |e: &Exps| -> Exps {
        let mut w = 0u64;
        let mut p = 1u64;
        for &v in others {
            w += e[v] as u64 * p;
            p *= base;
        }
        vec![e[x], w as u32]
    };
    let limit = base.pow(others.len() as u32);
    let unfold = |e: &Exps| -> Option<Exps> {
        let mut w = e[1] as u64;
        if w >= limit {
            return None;
        }
        let mut out = vec![0u32; n];
        out[x] = e[0];
        for &v in others {
            out[v] = (w % base) as u32;
            w /= base;
        }
        Some(out)
    };
    let image = MPoly::from_terms(2, f.terms().map(|(e, c)| (fold(e), c.clone())));
    let (_, fs) = factor(&image);
    let mut pool: Vec<MPoly<G>> = Vec::new();
    for (h, k) in fs {
        for _ in 0..k {
            pool.push(h.clone());
        }
    }
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= pool.len() {
        let mut hit = None;
        for subset in combinations(pool.len(), s) {
            let prod = subset.iter().fold(MPoly::one(2), |acc, &i| acc.mul(&pool[i]));
            let terms: Option<Vec<(Exps, G)>> = prod.terms().map(|(e, c)| unfold(e).map(|u| (u, c.clone()))).collect();
            let Some(terms) = terms else { continue };
            let h = MPoly::from_terms(n, terms);
            if h.is_constant() || h.degree_in(x) == 0 {
                continue;
            }
            if let Some(q) = rest.div_exact(&h) {
                hit = Some((subset, h, q));
                break;
            }
        }
        match hit {
            Some((subset, h, q)) => {
                found.push(h.monic());
                rest = q;
                let mut k = 0;
                pool.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
            }
            None => s += 1,
        }
    }
    if !rest.is_constant() {
        found.push(rest.monic());
    }
    found
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(nvars: usize, terms: &[(&[u32], i64, i64)]) -> MPoly<G> {
        MPoly::from_terms(nvars, terms.iter().map(|(e, re, im)| (e.to_vec(), G::from_ints(*re, *im))))
    }

    fn product(fs: &[(MPoly<G>, usize)], n: usize) -> MPoly<G> {
        fs.iter().fold(MPoly::one(n), |acc, (h, k)| acc.mul(&h.pow(*k as u32)))
    }

    #[test]
    fn difference_of_squares_bivariate() {
        // x^2 y^2 - 1
        let f = poly(2, &[(&[2, 2], 1, 0), (&[0, 0], -1, 0)]);
        let (lc, fs) = factor(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, 2).scale(&lc), f);
    }

    #[test]
    fn irreducible_plane_line() {
        // x + y + 1
        assert!(is_irreducible(&poly(2, &[(&[1, 0], 1, 0), (&[0, 1], 1, 0), (&[0, 0], 1, 0)])));
        // x^2 + y^3 + 1: irreducible although every specialization splits differently
        assert!(is_irreducible(&poly(2, &[(&[2, 0], 1, 0), (&[0, 3], 1, 0), (&[0, 0], 1, 0)])));
    }

    #[test]
    fn sum_of_squares_splits_over_gaussians() {
        // x^2 + y^2 = (x + iy)(x - iy)
        let f = poly(2, &[(&[2, 0], 1, 0), (&[0, 2], 1, 0)]);
        let (_, fs) = factor(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, 2), f);
    }

    #[test]
    fn repeated_and_monomial_factors() {
        let a = poly(2, &[(&[1, 1], 1, 0), (&[0, 0], 1, 0)]);
        let b = poly(2, &[(&[2, 0], 1, 0), (&[0, 1], 2, 0), (&[0, 0], 3, 0)]);
        let f = a.mul(&a).mul(&b).mul_monomial(&[0, 2]);
        let (lc, fs) = factor(&f);
        assert_eq!(product(&fs, 2).scale(&lc), f);
        assert_eq!(fs.len(), 3);
        assert!(fs.iter().any(|(h, k)| *h == a && *k == 2));
    }

    #[test]
    fn trivariate_via_kronecker() {
        let a = poly(3, &[(&[1, 0, 0], 1, 0), (&[0, 1, 0], 1, 0), (&[0, 0, 1], 1, 0)]);
        let b = poly(3, &[(&[1, 0, 1], 1, 0), (&[0, 1, 0], -1, 0), (&[0, 0, 0], 1, 0)]);
        let f = a.mul(&b);
        let (lc, fs) = factor(&f);
        assert_eq!(fs.len(), 2);
        assert_eq!(product(&fs, 3).scale(&lc), f);
    }

    #[test]
    fn content_in_second_variable() {
        // (y^2 - 1)(x + y)
        let f = poly(2, &[(&[0, 2], 1, 0), (&[0, 0], -1, 0)]).mul(&poly(2, &[(&[1, 0], 1, 0), (&[0, 1], 1, 0)]));
        let (_, fs) = factor(&f);
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs, 2), f);
    }
}
