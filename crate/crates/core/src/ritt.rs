//! Factorization of exponential polynomials into a unit, simple factors
//! and irreducible factors.
//!
//! A polynomial is read as a Laurent polynomial in `Y_j = e^(beta_j z)` for
//! a Z-basis `beta` of its exponent group. Factors over Q(i) whose support
//! spans a single line are simple. The others are irreducible in the whole
//! ring exactly when they stay irreducible over every finer lattice; finer
//! lattices of prime index up to `qmax` are searched.

use crate::constants::{coordinates, Const, Context};
use crate::error::{Error, Result};
use crate::expring::ExpPoly;
use crate::gauss::GaussRat;
use crate::lattice::{exponent_basis, hnf, saturated_basis, ExpBasis, IntMatrix};
use crate::linalg::{self, QVec};
use crate::poly::{multifactor, zfactor, MPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

pub const DEFAULT_QMAX: u32 = 6;
pub const DEFAULT_REFINE_MAX: u32 = 6;

/// Laurent polynomial with exponent vectors in `Z^nvars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, Const>,
}

impl LaurentPoly {
    pub fn new(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, Const)>) -> Self {
        let mut p = Self::new(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_ints(nvars: usize, terms: &[(Vec<i64>, i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.clone(), Const::from_int(*c))))
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Const) {
        assert_eq!(e.len(), self.nvars, "exponent length");
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&e) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(e, s);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Const)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn min_exps(&self) -> Vec<i64> {
        (0..self.nvars).map(|v| self.terms.keys().map(|e| e[v]).min().unwrap_or(0)).collect()
    }

    fn shifted(&self, shift: &[i64]) -> impl Iterator<Item = (Vec<u32>, &Const)> + '_ {
        let shift = shift.to_vec();
        self.terms
            .iter()
            .map(move |(e, c)| (e.iter().zip(&shift).map(|(a, s)| (a - s) as u32).collect(), c))
    }

    /// Polynomial over Q(i) after removing the monomial content.
    pub fn to_gauss_poly(&self) -> Result<MPoly<GaussRat>> {
        let shift = self.min_exps();
        let mut terms = Vec::with_capacity(self.len());
        for (e, c) in self.shifted(&shift) {
            terms.push((e, c.as_gauss().ok_or(Error::CoefficientsOutsideBaseField)?));
        }
        Ok(MPoly::from_terms(self.nvars, terms))
    }

    /// Polynomial over the constant field and the removed monomial.
    pub fn to_const_poly(&self) -> (Vec<i64>, MPoly<Const>) {
        let shift = self.min_exps();
        let p = MPoly::from_terms(self.nvars, self.shifted(&shift).map(|(e, c)| (e, c.clone())).collect::<Vec<_>>());
        (shift, p)
    }

    pub fn from_gauss_poly(p: &MPoly<GaussRat>) -> Self {
        Self::from_terms(p.nvars(), p.terms().map(|(e, c)| (e.iter().map(|&k| k as i64).collect(), Const::from_gauss(c.clone()))))
    }

    fn from_const_poly(p: &MPoly<Const>, shift: &[i64]) -> Self {
        Self::from_terms(
            p.nvars(),
            p.terms().map(|(e, c)| (e.iter().zip(shift).map(|(&k, s)| k as i64 + s).collect(), c.clone())),
        )
    }

    /// Rewrites exponents in a basis (rows, in current coordinates) of a
    /// lattice containing them all.
    fn rewrite(&self, rows: &[QVec]) -> Self {
        let terms = self.terms.iter().map(|(e, c)| {
            let t: QVec = e.iter().map(|&k| BigRational::from_integer(k.into())).collect();
            let s = linalg::solve(rows, &t).expect("lattice contains the exponents");
            (s.iter().map(|q| q.to_integer().to_i64().expect("small exponent")).collect(), c.clone())
        });
        Self::from_terms(rows.len(), terms.collect::<Vec<_>>())
    }
}

fn show_qvec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

/// Reads `f` as a Laurent polynomial in the basis.
pub fn to_laurent(f: &ExpPoly, basis: &ExpBasis) -> Result<LaurentPoly> {
    let exps = f.exponents();
    let coords = basis.express(&exps);
    let mut p = LaurentPoly::new(basis.dim());
    for ((e, v), c) in exps.iter().zip(coords).zip(f.coefficients()) {
        let v = v.ok_or_else(|| Error::BasisDoesNotSpan { exponent: format!("exponent outside the span ({:?})", e.generators()) })?;
        if v.iter().any(|q| !q.is_integer()) {
            return Err(Error::BasisDoesNotSpan { exponent: show_qvec(&v) });
        }
        p.add_term(v.iter().map(|q| q.to_integer().to_i64().expect("small exponent")).collect(), c);
    }
    Ok(p)
}

fn from_laurent_in(p: &LaurentPoly, basis: &[Const]) -> Result<ExpPoly> {
    if p.nvars != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), got: p.nvars });
    }
    ExpPoly::normalize(p.terms.iter().map(|(e, c)| {
        let exp = e
            .iter()
            .zip(basis)
            .filter(|(k, _)| **k != 0)
            .fold(Const::zero(), |acc, (k, b)| &acc + &b.scale_rational(&BigRational::from_integer((*k).into())));
        (exp, c.clone())
    }))
}

pub fn from_laurent(p: &LaurentPoly, basis: &ExpBasis) -> Result<ExpPoly> {
    from_laurent_in(p, &basis.basis)
}

/// `coef * e^(exponent z)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Unit {
    pub coef: Const,
    pub exponent: Const,
}

impl Unit {
    pub fn one() -> Self {
        Unit { coef: Const::one(), exponent: Const::zero() }
    }

    pub fn to_exppoly(&self) -> ExpPoly {
        ExpPoly::term(self.coef.clone(), self.exponent.clone())
    }
}

/// The unit `u` with `f = u * prod`, matching the lexicographically first terms.
fn unit_between(f: &ExpPoly, prod: &ExpPoly) -> Result<Unit> {
    let (ef, cf) = f.ordered_terms().swap_remove(0);
    let (ep, cp) = prod.ordered_terms().swap_remove(0);
    Ok(Unit { coef: cf.checked_div(&cp)?, exponent: ef.checked_sub(&ep)? })
}

fn product(factors: &[(ExpPoly, usize)]) -> Result<ExpPoly> {
    factors.iter().try_fold(ExpPoly::one(), |acc, (g, k)| acc.checked_mul(&g.pow(*k as u32)))
}

fn non_monomial(fs: Vec<(MPoly<GaussRat>, usize)>) -> Vec<(MPoly<GaussRat>, usize)> {
    fs.into_iter().filter(|(h, _)| h.len() > 1).collect()
}

// ---------------------------------------------------------------------------
// divisibility

/// Necessary conditions for `g | f`: the difference span of `g` lies in that
/// of `f`, and along test functionals the width of the exponent set of `g`
/// does not exceed that of `f` (Newton polytopes add under products).
pub fn support_compatible(g: &ExpPoly, f: &ExpPoly) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    if f.is_zero() {
        return Ok(true);
    }
    let fe = f.exponents();
    let ge = g.exponents();
    let mut all = fe.clone();
    all.extend(ge.iter().cloned());
    let coords = coordinates(&all);
    let (fc, gc) = coords.split_at(fe.len());
    let diffs = |c: &[QVec]| -> Vec<QVec> { c[1..].iter().map(|v| v.iter().zip(&c[0]).map(|(a, b)| a - b).collect()).collect() };
    let fd = diffs(fc);
    let mut both = fd.clone();
    both.extend(diffs(gc));
    if linalg::rank(&both) > linalg::rank(&fd) {
        return Ok(false);
    }
    let n = coords.first().map_or(0, |v| v.len());
    let mut functionals: Vec<Vec<i64>> = (0..n).map(|k| (0..n).map(|j| i64::from(j == k)).collect()).collect();
    functionals.push(vec![1; n]);
    for seed in 1..4i64 {
        functionals.push((0..n as i64).map(|j| (seed * 7 + j * 13 + seed * j * j) % 11 - 5).collect());
    }
    let width = |c: &[QVec], w: &[i64]| -> BigRational {
        let vals: Vec<BigRational> =
            c.iter().map(|v| v.iter().zip(w).map(|(a, &k)| a * BigRational::from_integer(k.into())).sum()).collect();
        let max = vals.iter().max().unwrap().clone();
        let min = vals.iter().min().unwrap().clone();
        max - min
    };
    Ok(functionals.iter().all(|w| width(gc, w) <= width(fc, w)))
}

/// The quotient `f / g` when it is an exponential polynomial.
///
/// A quotient always lies in the group algebra of the group generated by the
/// exponents of `f` and `g`, so no lattice refinement is ever needed;
/// `refine_max` is accepted for interface stability.
pub fn divides(g: &ExpPoly, f: &ExpPoly, refine_max: u32) -> Result<Option<ExpPoly>> {
    let _ = refine_max;
    if g.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    crate::constants::merge_ctx(g.context_id(), f.context_id())?;
    if f.is_zero() {
        return Ok(Some(ExpPoly::zero()));
    }
    if !support_compatible(g, f)? {
        return Ok(None);
    }
    let (gc, ge, ga) = g.canonical_associate();
    let inv = Const::one().checked_div(&gc)?;
    if ga.len() == 1 {
        return Ok(Some(f.mul_unit(&inv, &-&ge)));
    }
    let mut exps = f.exponents();
    exps.extend(ga.exponents());
    let basis = exponent_basis(&exps)?;
    let (sf, pf) = to_laurent(f, &basis)?.to_const_poly();
    let (sg, pg) = to_laurent(&ga, &basis)?.to_const_poly();
    let Some(q) = pf.div_exact(&pg) else {
        return Ok(None);
    };
    let shift: Vec<i64> = sf.iter().zip(&sg).map(|(a, b)| a - b).collect();
    let q = from_laurent(&LaurentPoly::from_const_poly(&q, &shift), &basis)?;
    Ok(Some(q.mul_unit(&inv, &-&ge)))
}

// ---------------------------------------------------------------------------
// simple polynomials

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleFactorization {
    pub unit: Unit,
    /// Canonical associates, irreducible over Q(i) in the line lattice.
    pub factors: Vec<(ExpPoly, usize)>,
}

impl SimpleFactorization {
    pub fn expand(&self) -> Result<ExpPoly> {
        Ok(product(&self.factors)?.mul_unit(&self.unit.coef, &self.unit.exponent))
    }
}

/// Splits a polynomial whose exponents lie on one line into factors that
/// are irreducible over Q(i) as polynomials in the line generator.
pub fn factor_simple(f: &ExpPoly) -> Result<SimpleFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.support()?.q_dimension != 1 {
        return Err(Error::NotSimple);
    }
    let (_, _, a) = f.canonical_associate();
    let basis = saturated_basis(&a.exponents())?;
    let m = to_laurent(&a, &basis)?.to_gauss_poly()?;
    let (_, fs) = multifactor::factor(&m);
    let mut factors: Vec<(ExpPoly, usize)> = Vec::new();
    for (h, k) in non_monomial(fs) {
        let e = from_laurent(&LaurentPoly::from_gauss_poly(&h), &basis)?;
        factors.push((e.canonical_associate().2, k));
    }
    factors.sort();
    let unit = unit_between(f, &product(&factors)?)?;
    Ok(SimpleFactorization { unit, factors })
}

// ---------------------------------------------------------------------------
// irreducibility under lattice refinement

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PowerIrreducibility {
    Irreducible,
    /// Substituting `Y_j -> Y_j^(n_j)` makes the polynomial reducible.
    ReducibleAt(Vec<u32>),
}

impl PowerIrreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, PowerIrreducibility::Irreducible)
    }
}

fn primes_up_to(n: u32) -> Vec<u32> {
    (2..=n).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// Nonzero vectors of `F_p^d` with first nonzero entry 1.
fn directions(p: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let total = (p as u64).pow(d as u32);
    for code in 1..total {
        let mut c = code;
        let v: Vec<u32> = (0..d)
            .map(|_| {
                let x = (c % p as u64) as u32;
                c /= p as u64;
                x
            })
            .collect();
        if v.iter().find(|&&x| x != 0) == Some(&1) {
            out.push(v);
        }
    }
    out
}

/// Basis rows of `Z^d + Z * u/p`.
fn refined_lattice(p: u32, u: &[u32]) -> Vec<QVec> {
    let d = u.len();
    let mut rows: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| if i == j { p as i64 } else { 0 }).collect()).collect();
    rows.push(u.iter().map(|&x| x as i64).collect());
    let h = hnf(&IntMatrix::from_i64(&rows));
    let pq = BigInt::from(p);
    h.entries().iter().map(|r| r.iter().map(|x| BigRational::new(x.clone(), pq.clone())).collect()).collect()
}

/// Irreducibility over Q(i), trying cheap univariate specializations first.
fn gauss_irreducible(m: &MPoly<GaussRat>) -> bool {
    let used = m.vars_used();
    if used.is_empty() {
        return false;
    }
    if used.len() == 1 {
        return zfactor::is_irreducible_gauss(&m.to_upoly(used[0]));
    }
    let v = *used.iter().max_by_key(|&&v| m.degree_in(v)).unwrap();
    if !m.content_in(v).is_constant() {
        return false;
    }
    let lc_in_v = m.to_univariate(v).pop().unwrap();
    for attempt in 0..3i64 {
        let mut s = m.clone();
        let mut lc = lc_in_v.clone();
        for (k, &w) in used.iter().filter(|&&w| w != v).enumerate() {
            let value = GaussRat::from_ints(2 + attempt * 3 + k as i64 * 5, attempt);
            s = s.eval_var(w, &value);
            lc = lc.eval_var(w, &value);
        }
        if lc.is_zero() {
            continue;
        }
        if zfactor::is_irreducible_gauss(&s.to_upoly(v)) {
            return true;
        }
    }
    multifactor::is_irreducible(m)
}

/// First refinement (prime index at most `qmax`) where `q` splits, with the
/// refined lattice basis and the rewritten polynomial.
fn first_split(q: &LaurentPoly, qmax: u32) -> Result<Option<(Vec<u32>, Vec<QVec>, MPoly<GaussRat>)>> {
    let d = q.nvars();
    for p in primes_up_to(qmax) {
        for u in directions(p, d) {
            let rows = refined_lattice(p, &u);
            let m = q.rewrite(&rows).to_gauss_poly()?;
            if !gauss_irreducible(&m) {
                let witness = u.iter().map(|&x| if x == 0 { 1 } else { p }).collect();
                return Ok(Some((witness, rows, m)));
            }
        }
    }
    Ok(None)
}

/// Whether an irreducible Laurent polynomial over Q(i) stays irreducible
/// under `Y_j -> Y_j^(n_j)` for refinements of prime index up to `qmax`.
pub fn is_power_irreducible(q: &LaurentPoly, qmax: u32) -> Result<PowerIrreducibility> {
    let m = q.to_gauss_poly()?;
    if !gauss_irreducible(&m) {
        return Err(Error::ReducibleInput);
    }
    Ok(match first_split(q, qmax)? {
        None => PowerIrreducibility::Irreducible,
        Some((w, _, _)) => PowerIrreducibility::ReducibleAt(w),
    })
}

// ---------------------------------------------------------------------------
// full factorization

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimpleFactor {
    pub factor: ExpPoly,
    pub mult: usize,
    /// Primitive exponent spanning the factor's line, in the lattice of the input.
    pub support_line: Const,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RittFactorization {
    pub unit: Unit,
    /// Sorted by support line.
    pub simple: Vec<SimpleFactor>,
    pub irreducible: Vec<(ExpPoly, usize)>,
    /// Part left unfactored (coefficients outside Q(i) on a plane or higher,
    /// or refinement depth exhausted); `1` when empty.
    pub residual: ExpPoly,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorReport {
    pub factor: String,
    pub mult: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub support_line: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RittReport {
    pub unit: String,
    pub simple: Vec<FactorReport>,
    pub irreducible: Vec<FactorReport>,
    pub residual: String,
}

impl RittFactorization {
    pub fn has_residual(&self) -> bool {
        !self.residual.is_one()
    }

    /// Product of all simple factors on one line.
    pub fn simple_part(&self, line: &Const) -> Result<ExpPoly> {
        let fs: Vec<(ExpPoly, usize)> =
            self.simple.iter().filter(|s| &s.support_line == line).map(|s| (s.factor.clone(), s.mult)).collect();
        product(&fs)
    }

    pub fn expand(&self) -> Result<ExpPoly> {
        let simple: Vec<(ExpPoly, usize)> = self.simple.iter().map(|s| (s.factor.clone(), s.mult)).collect();
        let p = product(&simple)?.checked_mul(&product(&self.irreducible)?)?.checked_mul(&self.residual)?;
        Ok(p.mul_unit(&self.unit.coef, &self.unit.exponent))
    }

    pub fn report(&self, ctx: &Context) -> RittReport {
        RittReport {
            unit: self.unit.to_exppoly().show(ctx),
            simple: self
                .simple
                .iter()
                .map(|s| FactorReport { factor: s.factor.show(ctx), mult: s.mult, support_line: Some(ctx.show(&s.support_line)) })
                .collect(),
            irreducible: self
                .irreducible
                .iter()
                .map(|(g, k)| FactorReport { factor: g.show(ctx), mult: *k, support_line: None })
                .collect(),
            residual: self.residual.show(ctx),
        }
    }
}

struct Collector {
    qmax: u32,
    refine_max: u32,
    simple: BTreeMap<ExpPoly, usize>,
    irreducible: BTreeMap<ExpPoly, usize>,
    residual: Vec<(ExpPoly, usize)>,
}

fn bump(map: &mut BTreeMap<ExpPoly, usize>, g: ExpPoly, k: usize) {
    *map.entry(g).or_insert(0) += k;
}

impl Collector {
    fn process(&mut self, g: &ExpPoly, mult: usize, depth: u32) -> Result<()> {
        let (_, _, a) = g.canonical_associate();
        if a.len() <= 1 {
            return Ok(());
        }
        let basis = saturated_basis(&a.exponents())?;
        let lp = to_laurent(&a, &basis)?;
        let m = match lp.to_gauss_poly() {
            Ok(m) => m,
            Err(Error::CoefficientsOutsideBaseField) => {
                if basis.dim() == 1 {
                    bump(&mut self.simple, a, mult);
                } else {
                    self.residual.push((a, mult));
                }
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let fs = non_monomial(multifactor::factor(&m).1);
        if fs.iter().map(|(_, k)| k).sum::<usize>() > 1 {
            for (h, k) in fs {
                let e = from_laurent(&LaurentPoly::from_gauss_poly(&h), &basis)?;
                self.process(&e, mult * k, depth)?;
            }
            return Ok(());
        }
        if basis.dim() == 1 {
            bump(&mut self.simple, a, mult);
            return Ok(());
        }
        match first_split(&lp, self.qmax)? {
            None => bump(&mut self.irreducible, a, mult),
            Some(_) if depth >= self.refine_max => self.residual.push((a, mult)),
            Some((_, rows, refined)) => {
                let fine: Vec<Const> = rows.iter().map(|r| basis.combine(r)).collect();
                for (h, k) in non_monomial(multifactor::factor(&refined).1) {
                    let e = from_laurent_in(&LaurentPoly::from_gauss_poly(&h), &fine)?;
                    self.process(&e, mult * k, depth + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// Primitive lattice vector on the line of `g`, sign fixed by its first
/// nonzero coordinate.
fn support_line(g: &ExpPoly, lattice: &ExpBasis) -> Result<Const> {
    let b = saturated_basis(&g.exponents())?;
    let v = lattice.express(&b.basis).pop().flatten().expect("factor exponents lie in the input span");
    let l = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g0 = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    let prim: Vec<BigRational> = ints.iter().map(|x| BigRational::from_integer(x * &sign / &g0)).collect();
    Ok(lattice.combine(&prim))
}

/// Unit, simple factors grouped by line, irreducible factors and residual,
/// with `f = unit * prod(simple) * prod(irreducible) * residual`.
pub fn ritt_factor(f: &ExpPoly, qmax: u32, refine_max: u32) -> Result<RittFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut c = Collector { qmax, refine_max, simple: BTreeMap::new(), irreducible: BTreeMap::new(), residual: Vec::new() };
    c.process(f, 1, 0)?;
    let (_, _, a) = f.canonical_associate();
    let lattice = saturated_basis(&a.exponents())?;
    let mut simple = Vec::new();
    for (g, mult) in c.simple {
        let line = support_line(&g, &lattice)?;
        simple.push(SimpleFactor { factor: g, mult, support_line: line });
    }
    simple.sort_by(|x, y| (&x.support_line, &x.factor).cmp(&(&y.support_line, &y.factor)));
    let irreducible: Vec<(ExpPoly, usize)> = c.irreducible.into_iter().collect();
    let residual = product(&c.residual)?;
    let mut r = RittFactorization { unit: Unit::one(), simple, irreducible, residual };
    r.unit = unit_between(f, &r.expand()?)?;
    debug_assert_eq!(&r.expand()?, f);
    Ok(r)
}
