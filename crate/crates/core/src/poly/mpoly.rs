//! Sparse multivariate polynomials with dense exponent vectors.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration
//! order is lexicographic with variable 0 most significant and the
//! leading term is the last entry.

use crate::field::Field;
use crate::poly::upoly::UPoly;
use std::collections::BTreeMap;

pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly<F: Field> {
    nvars: usize,
    terms: BTreeMap<Exps, F>,
}

impl<F: Field> MPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Self::monomial(e, F::one())
    }

    pub fn monomial(e: Exps, c: F) -> Self {
        let nvars = e.len();
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exps, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &F)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_value(&self) -> Option<F> {
        if self.is_zero() {
            return Some(F::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn add_term(&mut self, e: Exps, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = v.add(&c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn lt(&self) -> Option<(&Exps, &F)> {
        self.terms.iter().next_back()
    }

    pub fn lc(&self) -> F {
        self.lt().map(|(_, c)| c.clone()).unwrap_or_else(F::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul(s))).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1.mul(c2));
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Componentwise minimum exponent (monomial content).
    pub fn min_exps(&self) -> Exps {
        let mut m: Option<Exps> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(cur) => cur.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.nvars])
    }

    /// Divides by the monomial `m`; all exponents must dominate it.
    pub fn div_monomial(&self, m: &[u32]) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.degree_in(v) > 0).collect()
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    /// Exact division, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let (de, dc) = d.lt().map(|(e, c)| (e.clone(), c.inv()))?;
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = r.lt().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let te: Exps = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let tc = c.mul(&dc);
            let t = Self::monomial(te, tc);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[v] > 0 {
                let mut e2 = e.clone();
                e2[v] -= 1;
                r.add_term(e2, c.mul(&F::from_i64(e[v] as i64)));
            }
        }
        r
    }

    /// Substitutes `x_v = value`.
    pub fn eval_var(&self, v: usize, value: &F) -> Self {
        let mut r = Self::zero(self.nvars);
        let mut powers: Vec<F> = vec![F::one()];
        for (e, c) in &self.terms {
            let k = e[v] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap().mul(value);
                powers.push(next);
            }
            let mut e2 = e.clone();
            e2[v] = 0;
            r.add_term(e2, c.mul(&powers[k]));
        }
        r
    }

    /// Substitutes `x_v -> x_v + shift`.
    pub fn shift_var(&self, v: usize, shift: &F) -> Self {
        let coeffs = self.to_univariate(v);
        let lin = MPoly::from_terms(self.nvars, [(unit_exps(self.nvars, v), F::one()), (vec![0; self.nvars], shift.clone())]);
        let mut acc = Self::zero(self.nvars);
        for c in coeffs.iter().rev() {
            acc = acc.mul(&lin).add(c);
        }
        acc
    }

    /// Substitutes `x_v -> x_v^k`.
    pub fn inflate_var(&self, v: usize, k: u32) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = e.clone();
                    e2[v] *= k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `x_v`, indexed by degree, with `x_v` removed.
    pub fn to_univariate(&self, v: usize) -> Vec<Self> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Self::zero(self.nvars); if self.is_zero() { 0 } else { d + 1 }];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[v] as usize;
            e2[v] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_univariate(nvars: usize, v: usize, coeffs: &[Self]) -> Self {
        let mut r = Self::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2[v] += k as u32;
                r.add_term(e2, a.clone());
            }
        }
        r
    }

    /// Converts to a dense univariate polynomial if only `x_v` occurs.
    pub fn to_upoly(&self, v: usize) -> UPoly<F> {
        let d = self.degree_in(v) as usize;
        let mut c = vec![F::zero(); d + 1];
        for (e, a) in &self.terms {
            debug_assert!(e.iter().enumerate().all(|(i, &k)| i == v || k == 0));
            c[e[v] as usize] = a.clone();
        }
        UPoly::new(c)
    }

    pub fn from_upoly(nvars: usize, v: usize, p: &UPoly<F>) -> Self {
        Self::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[v] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Gcd of the coefficients with respect to `x_v`.
    pub fn content_in(&self, v: usize) -> Self {
        let mut g = Self::zero(self.nvars);
        for c in self.to_univariate(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_constant() {
                return Self::one(self.nvars);
            }
        }
        g
    }

    pub fn primitive_part_in(&self, v: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    /// Remaps variables: new variable `j` is old variable `map[j]`.
    pub fn with_nvars(&self, nvars: usize, map: impl Fn(&Exps) -> Exps) -> Self {
        Self::from_terms(nvars, self.terms.iter().map(|(e, c)| (map(e), c.clone())))
    }

    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> G) -> MPoly<G> {
        MPoly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

fn unit_exps(nvars: usize, v: usize) -> Exps {
    let mut e = vec![0; nvars];
    e[v] = 1;
    e
}

/// Pseudo-remainder of `a` by `b` with respect to `x_v`.
fn prem<F: Field>(a: &MPoly<F>, b: &MPoly<F>, v: usize) -> MPoly<F> {
    let n = a.nvars;
    let bu = b.to_univariate(v);
    let db = bu.len() - 1;
    let lb = bu[db].clone();
    let mut r = a.to_univariate(v);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        // r <- lb*r - lr*x^(dr-db)*b
        let shift = dr - db;
        let mut next: Vec<MPoly<F>> = r.iter().map(|c| c.mul(&lb)).collect();
        for (k, bc) in bu.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&lr.mul(bc));
        }
        while next.last().is_some_and(|c| c.is_zero()) {
            next.pop();
        }
        r = next;
    }
    MPoly::from_univariate(n, v, &r)
}

/// Whether images at an integer point of the other variables prove that
/// `a` and `b`, both primitive in `x_v`, have no common factor involving
/// `x_v`. A common factor keeps its degree in any image where the leading
/// coefficient of `a` survives, so a constant image gcd rules it out.
fn coprime_images<F: Field>(a: &MPoly<F>, b: &MPoly<F>, v: usize) -> bool {
    let mut others: Vec<usize> = a.vars_used().into_iter().chain(b.vars_used()).filter(|&w| w != v).collect();
    others.sort_unstable();
    others.dedup();
    for attempt in 0..2i64 {
        let (mut ia, mut ib) = (a.clone(), b.clone());
        for (k, &w) in others.iter().enumerate() {
            let x = F::from_i64(2 + 7 * attempt + 3 * k as i64);
            ia = ia.eval_var(w, &x);
            ib = ib.eval_var(w, &x);
        }
        if ia.degree_in(v) != a.degree_in(v) || ib.is_zero() {
            continue;
        }
        if ia.to_upoly(v).gcd(&ib.to_upoly(v)).degree() == Some(0) {
            return true;
        }
    }
    false
}

/// Greatest common divisor, normalized to leading coefficient one.
pub fn gcd<F: Field>(a: &MPoly<F>, b: &MPoly<F>) -> MPoly<F> {
    let n = a.nvars;
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(n);
    }
    // monomial content is handled directly; it keeps the PRS small
    let ma = a.min_exps();
    let mb = b.min_exps();
    let m: Exps = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    if ma.iter().any(|&k| k > 0) || mb.iter().any(|&k| k > 0) {
        let g = gcd(&a.div_monomial(&ma), &b.div_monomial(&mb));
        return g.mul_monomial(&m);
    }
    let v = match (0..n).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) {
        Some(v) => v,
        None => return MPoly::one(n),
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &b.content_in(v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&a.content_in(v), b);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let g = gcd(&ca, &cb);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    if coprime_images(&pa, &pb, v) {
        return g.monic();
    }
    if pa.degree_in(v) < pb.degree_in(v) {
        std::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = prem(&pa, &pb, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            pb = MPoly::one(n);
            break;
        }
        pa = pb;
        // scalar normalization keeps coefficient growth in check
        pb = r.primitive_part_in(v).monic();
    }
    g.mul(&pb.primitive_part_in(v)).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;
    use num_rational::BigRational;

    type P = MPoly<BigRational>;

    fn p(terms: &[(&[u32], i64)]) -> P {
        MPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), rat(*c, 1))))
    }

    #[test]
    fn exact_division() {
        // (x + y)(x - y) = x^2 - y^2
        let a = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(&[(&[1, 0], 1), (&[0, 1], -1)]);
        let f = a.mul(&b);
        assert_eq!(f.div_exact(&a), Some(b.clone()));
        assert_eq!(f.div_exact(&p(&[(&[1, 0], 1), (&[0, 0], 1)])), None);
    }

    #[test]
    fn bivariate_gcd() {
        let a = p(&[(&[1, 0], 1), (&[0, 1], 1), (&[0, 0], 1)]);
        let b = p(&[(&[1, 1], 1), (&[0, 0], -2)]);
        let c = p(&[(&[2, 0], 1), (&[0, 1], 3)]);
        let g = gcd(&a.mul(&b), &a.mul(&c));
        assert_eq!(g, a.monic());
        assert!(gcd(&b, &c).is_constant());
    }

    #[test]
    fn gcd_with_monomial_content() {
        let x = P::var(2, 0);
        let y = P::var(2, 1);
        let a = x.mul(&x).mul(&y);
        let b = x.mul(&y).mul(&y);
        assert_eq!(gcd(&a, &b), x.mul(&y));
    }

    #[test]
    fn shift_and_eval() {
        let f = p(&[(&[2, 0], 1), (&[0, 1], 1)]);
        let g = f.shift_var(0, &rat(1, 1));
        // (x+1)^2 + y at x = 0 is 1 + y
        assert_eq!(g.eval_var(0, &rat(0, 1)), p(&[(&[0, 0], 1), (&[0, 1], 1)]));
    }
}
