//! Sparse polynomials in the context generators.
//!
//! Ordinary generators carry nonnegative integer exponents. Exponential
//! generators (flagged by the high bit of the id) are units and may carry
//! any rational exponent.

use crate::field::Field;
use crate::gauss::GaussRat;
use crate::poly::mpoly::{gcd, MPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

pub type GenId = u32;

/// Marks exponential-constant generator ids.
pub const EXP_FLAG: GenId = 1 << 31;

pub fn is_exp_var(v: GenId) -> bool {
    v & EXP_FLAG != 0
}

/// Power product; entries sorted by generator with nonzero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(Vec<(GenId, BigRational)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: GenId) -> Self {
        Mono(vec![(v, BigRational::from_integer(1.into()))])
    }

    pub fn power(v: GenId, e: BigRational) -> Self {
        if e.is_zero() {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(GenId, BigRational)] {
        &self.0
    }

    pub fn exponent(&self, v: GenId) -> BigRational {
        self.0.iter().find(|(w, _)| *w == v).map_or_else(BigRational::zero, |(_, e)| e.clone())
    }

    fn combine(&self, o: &Self, sign: bool) -> Self {
        let mut out: Vec<(GenId, BigRational)> = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < o.0.len() {
            let take_left = j >= o.0.len() || (i < self.0.len() && self.0[i].0 < o.0[j].0);
            let take_right = i >= self.0.len() || (j < o.0.len() && o.0[j].0 < self.0[i].0);
            if take_left {
                out.push(self.0[i].clone());
                i += 1;
            } else if take_right {
                let e = if sign { o.0[j].1.clone() } else { -o.0[j].1.clone() };
                out.push((o.0[j].0, e));
                j += 1;
            } else {
                let e = if sign { &self.0[i].1 + &o.0[j].1 } else { &self.0[i].1 - &o.0[j].1 };
                if !e.is_zero() {
                    out.push((self.0[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
        Mono(out)
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    pub fn div(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn pow(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Mono::one();
        }
        Mono(self.0.iter().map(|(v, e)| (*v, e * k)).collect())
    }

    pub fn has_ordinary(&self) -> bool {
        self.0.iter().any(|(v, _)| !is_exp_var(*v))
    }

    /// Total degree over all generators.
    pub fn degree(&self) -> BigRational {
        self.0.iter().map(|(_, e)| e.clone()).sum()
    }

    /// Graded-lex comparison.
    pub fn grlex_cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.cmp(o))
    }
}

/// Polynomial with Gaussian-rational coefficients over [`Mono`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SPoly(BTreeMap<Mono, GaussRat>);

impl SPoly {
    pub fn zero() -> Self {
        SPoly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::term(Mono::one(), c)
    }

    pub fn term(m: Mono, c: GaussRat) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.0.insert(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0.get(&Mono::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Mono) -> GaussRat {
        self.0.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    /// The value if the polynomial is a constant of Q(i).
    pub fn constant_value(&self) -> Option<GaussRat> {
        match self.0.len() {
            0 => Some(GaussRat::zero()),
            1 => self.0.get(&Mono::one()).cloned(),
            _ => None,
        }
    }

    pub fn single_term(&self) -> Option<(&Mono, &GaussRat)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.neg());
        }
        r
    }

    pub fn neg(&self) -> Self {
        SPoly(self.0.iter().map(|(m, c)| (m.clone(), c.neg())).collect())
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        SPoly(self.0.iter().map(|(m, c)| (m.clone(), c.mul(s))).collect())
    }

    pub fn mul_term(&self, m: &Mono, s: &GaussRat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        SPoly(self.0.iter().map(|(k, c)| (k.mul(m), c.mul(s))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut r = Self::zero();
        for (m, c) in &a.0 {
            for (n, d) in &b.0 {
                r.add_term(m.mul(n), c.mul(d));
            }
        }
        r
    }

    pub fn vars(&self) -> BTreeSet<GenId> {
        self.0.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect()
    }

    /// Leading term under graded-lex order.
    pub fn leading(&self) -> Option<(&Mono, &GaussRat)> {
        self.0.iter().max_by(|a, b| a.0.grlex_cmp(b.0))
    }

    /// Per-generator minimum exponent over all terms (absent counts as 0).
    pub fn min_mono(&self) -> Mono {
        let vars = self.vars();
        let mut out = Vec::new();
        for v in vars {
            let m = self.0.keys().map(|k| k.exponent(v)).min().unwrap();
            if !m.is_zero() {
                out.push((v, m));
            }
        }
        Mono(out)
    }
}

/// Dictionary between [`SPoly`] and dense-exponent [`MPoly`] for a fixed set of polynomials.
struct Embedding {
    vars: Vec<GenId>,
    scale: Vec<BigInt>,
    shift: Vec<BigRational>,
}

impl Embedding {
    fn new(polys: &[&SPoly]) -> Self {
        let vars: Vec<GenId> = polys.iter().flat_map(|p| p.vars()).collect::<BTreeSet<_>>().into_iter().collect();
        let mut scale = Vec::new();
        let mut shift = Vec::new();
        for &v in &vars {
            let exps: Vec<BigRational> = polys.iter().flat_map(|p| p.0.keys().map(move |m| m.exponent(v))).collect();
            let l = exps.iter().fold(BigInt::from(1), |acc, e| acc.lcm(e.denom()));
            let s = exps.iter().min().cloned().unwrap_or_else(BigRational::zero);
            scale.push(l);
            shift.push(s);
        }
        Embedding { vars, scale, shift }
    }

    fn to_mpoly(&self, p: &SPoly) -> MPoly<GaussRat> {
        let n = self.vars.len();
        MPoly::from_terms(
            n,
            p.0.iter().map(|(m, c)| {
                let e: Vec<u32> = (0..n)
                    .map(|i| {
                        let x = (m.exponent(self.vars[i]) - &self.shift[i]) * BigRational::from_integer(self.scale[i].clone());
                        x.to_integer().to_u32().expect("exponent fits")
                    })
                    .collect();
                (e, c.clone())
            }),
        )
    }

    /// Inverse map without the shift; only meaningful for ratios.
    fn from_mpoly(&self, p: &MPoly<GaussRat>) -> SPoly {
        let mut out = SPoly::zero();
        for (e, c) in p.terms() {
            let m = Mono(
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (self.vars[i], BigRational::new(BigInt::from(k), self.scale[i].clone())))
                    .collect(),
            );
            out.add_term(m, c.clone());
        }
        out
    }
}

/// Cancels the common factor of `num / den` and normalizes: the denominator
/// has no exponential-generator content and leading coefficient one.
pub fn reduce_fraction(num: &SPoly, den: &SPoly) -> (SPoly, SPoly) {
    assert!(!den.is_zero());
    if num.is_zero() {
        return (SPoly::zero(), SPoly::one());
    }
    let (mut n, mut d) = if den.len() == 1 {
        cancel_monomial(num, den)
    } else {
        let emb = Embedding::new(&[num, den]);
        let a = emb.to_mpoly(num);
        let b = emb.to_mpoly(den);
        let g = gcd(&a, &b);
        if g.is_constant() {
            (num.clone(), den.clone())
        } else {
            let a2 = a.div_exact(&g).expect("gcd divides");
            let b2 = b.div_exact(&g).expect("gcd divides");
            // the shift cancels in the ratio
            (emb.from_mpoly(&a2), emb.from_mpoly(&b2))
        }
    };
    // move exponential content of the denominator into the numerator
    let exp_part = exp_content(&d);
    if !exp_part.is_one() {
        let inv = Mono::one().div(&exp_part);
        n = n.mul_term(&inv, &GaussRat::one());
        d = d.mul_term(&inv, &GaussRat::one());
    }
    let lc = d.leading().unwrap().1.inv();
    (n.scale(&lc), d.scale(&lc))
}

/// Single-term denominators: cancel the monomial gcd directly.
fn cancel_monomial(num: &SPoly, den: &SPoly) -> (SPoly, SPoly) {
    let (dm, dc) = den.single_term().unwrap();
    let nmin = num.min_mono();
    let mut common = Vec::new();
    for (v, e) in dm.factors() {
        if is_exp_var(*v) {
            common.push((*v, e.clone()));
        } else {
            let k = nmin.exponent(*v).min(e.clone());
            if k.is_positive() {
                common.push((*v, k));
            }
        }
    }
    let common = Mono(common);
    let inv = dc.inv();
    let n = SPoly(num.0.iter().map(|(m, c)| (m.div(&common), c.mul(&inv))).collect());
    let d = SPoly::term(dm.div(&common), GaussRat::one());
    (n, d)
}

/// Exact quotient `a / b`, `None` if `b` does not divide `a` in the
/// Laurent ring of the exponential generators.
pub fn div_exact(a: &SPoly, b: &SPoly) -> Option<SPoly> {
    if b.len() == 1 {
        let (m, c) = b.single_term().unwrap();
        let inv = Mono::one().div(m);
        let q = a.mul_term(&inv, &c.inv());
        let ok = q.0.keys().all(|k| k.0.iter().all(|(v, e)| is_exp_var(*v) || (e.is_integer() && !e.is_negative())));
        return ok.then_some(q);
    }
    let amin = exp_content(a);
    let bmin = exp_content(b);
    let a1 = a.mul_term(&Mono::one().div(&amin), &GaussRat::one());
    let b1 = b.mul_term(&Mono::one().div(&bmin), &GaussRat::one());
    let emb = Embedding::new(&[&a1, &b1]);
    let q = emb.to_mpoly(&a1).div_exact(&emb.to_mpoly(&b1))?;
    Some(emb.from_mpoly(&q).mul_term(&amin.div(&bmin), &GaussRat::one()))
}

fn exp_content(p: &SPoly) -> Mono {
    Mono(p.min_mono().0.into_iter().filter(|(v, _)| is_exp_var(*v)).collect())
}

/// Least common multiple, normalized like a denominator.
pub fn lcm(a: &SPoly, b: &SPoly) -> SPoly {
    if a.is_one() {
        return b.clone();
    }
    if b.is_one() || a == b {
        return a.clone();
    }
    let emb = Embedding::new(&[a, b]);
    let ma = emb.to_mpoly(a);
    let mb = emb.to_mpoly(b);
    let g = gcd(&ma, &mb);
    let l = ma.mul(&mb.div_exact(&g).expect("gcd divides"));
    let (_, d) = reduce_fraction(&SPoly::one(), &emb.from_mpoly(&l));
    d
}
