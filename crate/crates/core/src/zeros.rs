//! Zeros of exponential polynomials: behaviour on the integers, the sine
//! divisor, zero progressions of simple factors and common divisors.

use crate::constants::{rational_ratio, Const, Context};
use crate::error::{Error, Result};
use crate::expring::ExpPoly;
use crate::gauss::GaussRat;
use crate::lattice::saturated_basis;
use crate::numeric::gauss_to_complex;
use crate::poly::{mpoly, zfactor, MPoly, UPoly};
use crate::ritt::{divides, factor_simple, from_laurent, to_laurent, LaurentPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::HashMap;

/// `Phi_n` over Q.
pub fn cyclotomic(n: u64) -> UPoly<BigRational> {
    let mut p = UPoly::monomial(BigRational::from_integer(1.into()), n as usize).sub(&UPoly::one());
    for d in (1..n).filter(|d| n % d == 0) {
        p = p.div_exact(&cyclotomic(d)).expect("cyclotomic factor");
    }
    p
}

/// Minimal polynomials over Q(i) of `e^(2 pi i / n)`, by order.
#[derive(Default)]
struct RootsOfUnity {
    cache: HashMap<u64, UPoly<Const>>,
}

impl RootsOfUnity {
    fn modulus(&mut self, n: u64) -> &UPoly<Const> {
        self.cache.entry(n).or_insert_with(|| {
            let phi = cyclotomic(n).map(|q| GaussRat::from_rat(q.clone()));
            let (_, factors) = zfactor::factor_gauss(&phi);
            let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
            let value = |p: &UPoly<GaussRat>| -> f64 {
                p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * omega + gauss_to_complex(c)).norm()
            };
            let best = factors
                .iter()
                .map(|(p, _)| p)
                .min_by(|a, b| value(a).total_cmp(&value(b)))
                .expect("cyclotomic polynomial has a factor");
            best.map(|g| Const::from_gauss(g.clone()))
        })
    }

    /// Whether `sum c_k omega^k = 0` for `omega = e^(2 pi i / n)`.
    fn vanishes(&mut self, n: u64, terms: &[(u64, Const)]) -> bool {
        if n == 1 {
            return terms.iter().fold(Const::zero(), |acc, (_, c)| &acc + c).is_zero();
        }
        let mut coeffs = vec![Const::zero(); n as usize];
        for (k, c) in terms {
            let slot = &mut coeffs[(*k % n) as usize];
            *slot = &*slot + c;
        }
        UPoly::new(coeffs).rem(self.modulus(n)).is_zero()
    }
}

/// Terms whose exponents differ by rational multiples of `2 pi i`, with
/// those multiples relative to the first exponent of the block.
struct Block {
    terms: Vec<(BigRational, Const)>,
    order: u64,
}

fn blocks(f: &ExpPoly, ctx: &Context) -> Result<Vec<Block>> {
    let tpi = ctx.two_pi_i();
    let mut out: Vec<(Const, Block)> = Vec::new();
    for (e, c) in f.terms() {
        ctx.check(e)?;
        ctx.check(c)?;
        let mut placed = false;
        for (rep, b) in out.iter_mut() {
            if let Some(q) = rational_ratio(&e.checked_sub(rep)?, &tpi)? {
                b.terms.push((q, c.clone()));
                placed = true;
                break;
            }
        }
        if !placed {
            out.push((e.clone(), Block { terms: vec![(BigRational::from_integer(0.into()), c.clone())], order: 1 }));
        }
    }
    let mut blocks: Vec<Block> = out.into_iter().map(|(_, b)| b).collect();
    for b in &mut blocks {
        b.order = b.terms.iter().fold(BigInt::from(1), |acc, (q, _)| acc.lcm(q.denom())).to_u64().expect("small order");
    }
    Ok(blocks)
}

impl Block {
    /// Block sum at residue `d` without the common factor `e^(d*rep)`.
    fn vanishes_at(&self, d: i64, roots: &mut RootsOfUnity) -> bool {
        let n = self.order as i64;
        let terms: Vec<(u64, Const)> = self
            .terms
            .iter()
            .map(|(q, c)| {
                let k = (q * BigRational::from_integer(n.into())).to_integer().to_i64().expect("small exponent");
                ((k * d).rem_euclid(n) as u64, c.clone())
            })
            .collect();
        roots.vanishes(self.order, &terms)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Residue {
    pub d: u64,
    /// Vanishing on `d + delta * Z` was proved exactly.
    pub certified: bool,
}

/// Zero set on the integers: full progressions `d + delta * Z`, plus finitely
/// many sporadic zeros as described by `note`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SMLPattern {
    pub delta: u64,
    pub residues: Vec<Residue>,
    pub note: String,
}

impl SMLPattern {
    pub fn contains(&self, n: i64) -> bool {
        let d = n.rem_euclid(self.delta as i64) as u64;
        self.residues.iter().any(|r| r.d == d)
    }
}

/// Exact zero pattern of `n -> f(n)`. Terms are grouped into blocks whose
/// exponents differ by rational multiples of `2 pi i`; distinct blocks have
/// non-torsion ratios, so a progression is a zero set exactly when every
/// block sum vanishes on it, which is decided in a cyclotomic extension.
pub fn integer_zero_pattern(f: &ExpPoly, ctx: &Context) -> Result<SMLPattern> {
    if f.is_zero() {
        return Ok(SMLPattern {
            delta: 1,
            residues: vec![Residue { d: 0, certified: true }],
            note: "zero polynomial".to_string(),
        });
    }
    let bs = blocks(f, ctx)?;
    let delta = bs.iter().fold(1u64, |acc, b| acc.lcm(&b.order));
    // residues are independent; each worker keeps its own modulus cache
    let alive: Vec<usize> = (0..delta)
        .into_par_iter()
        .map_init(RootsOfUnity::default, |roots, d| bs.iter().filter(|b| !b.vanishes_at(d as i64, roots)).count())
        .collect();
    let residues: Vec<Residue> =
        (0..delta).zip(&alive).filter(|(_, &a)| a == 0).map(|(d, _)| Residue { d, certified: true }).collect();
    let mixed = alive.iter().any(|&a| a >= 2);
    let note = if mixed {
        "other residues may carry finitely many sporadic zeros".to_string()
    } else {
        "no zeros outside the listed progressions".to_string()
    };
    Ok(SMLPattern { delta, residues, note })
}

pub fn vanishes_on_integers(f: &ExpPoly, ctx: &Context) -> Result<bool> {
    let p = integer_zero_pattern(f, ctx)?;
    Ok(p.residues.len() as u64 == p.delta)
}

/// `h` with `f = sin(pi z) * h`.
pub fn sine_divisor_witness(f: &ExpPoly, ctx: &Context) -> Result<ExpPoly> {
    if !vanishes_on_integers(f, ctx)? {
        return Err(Error::DoesNotVanish);
    }
    if f.is_zero() {
        return Ok(ExpPoly::zero());
    }
    divides(&ExpPoly::sin_pi(ctx), f, 0)?.ok_or(Error::DoesNotVanish)
}

/// Zeros `offset + k * step`, `k` in Z.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Progression {
    pub offset: Const,
    pub step: Const,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProgressionReport {
    pub offset: String,
    pub step: String,
}

impl Progression {
    pub fn report(&self, ctx: &Context) -> ProgressionReport {
        ProgressionReport { offset: ctx.show(&self.offset), step: ctx.show(&self.step) }
    }
}

/// Zeros of a two-term factor: for `1 - a e^(alpha z)` (after taking the
/// canonical associate) they are `-log(a)/alpha + 2 pi i k/alpha`.
pub fn simple_zero_progressions(factor: &ExpPoly, ctx: &mut Context) -> Result<Progression> {
    if factor.len() != 2 {
        return Err(Error::NotLinearFactor);
    }
    let (_, _, a) = factor.canonical_associate();
    let (alpha, c) = a.terms().find(|(e, _)| !e.is_zero()).map(|(e, c)| (e.clone(), c.clone())).expect("two terms");
    let log_a = ctx.log(&-&c)?;
    let offset = (-&log_a).checked_div(&alpha)?;
    let step = ctx.two_pi_i().checked_div(&alpha)?;
    Ok(Progression { offset, step })
}

fn to_gauss_mpoly(p: &LaurentPoly) -> Option<MPoly<GaussRat>> {
    p.to_gauss_poly().ok()
}

/// Gcd in the group algebra of the lattice generated by both supports.
fn exp_gcd(f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
    let mut exps = f.exponents();
    exps.extend(g.exponents());
    let basis = saturated_basis(&exps)?;
    let lf = to_laurent(f, &basis)?;
    let lg = to_laurent(g, &basis)?;
    let h = match (to_gauss_mpoly(&lf), to_gauss_mpoly(&lg)) {
        (Some(a), Some(b)) => LaurentPoly::from_gauss_poly(&mpoly::gcd(&a, &b)),
        _ => {
            let (_, a) = lf.to_const_poly();
            let (_, b) = lg.to_const_poly();
            let h = mpoly::gcd(&a, &b);
            LaurentPoly::from_terms(h.nvars(), h.terms().map(|(e, c)| (e.iter().map(|&k| k as i64).collect(), c.clone())).collect::<Vec<_>>())
        }
    };
    Ok(from_laurent(&h, &basis)?.canonical_associate().2)
}

/// The common divisor of `f` and `g` when `f` is simple, verified by exact
/// division; `None` when it is a unit (finitely many common zeros).
pub fn common_divisor_case1(f: &ExpPoly, g: &ExpPoly, qmax: u32, refine_max: u32) -> Result<Option<ExpPoly>> {
    let _ = qmax;
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.support()?.q_dimension != 1 {
        return Err(Error::NotSimple);
    }
    crate::constants::merge_ctx(f.context_id(), g.context_id())?;
    let h = exp_gcd(f, g)?;
    if h.len() <= 1 {
        return Ok(None);
    }
    let ok = divides(&h, f, refine_max)?.is_some() && divides(&h, g, refine_max)?.is_some();
    debug_assert!(ok, "gcd divides both inputs");
    Ok(ok.then_some(h))
}

#[derive(Clone, Debug, Serialize)]
pub struct CommonZerosReport {
    pub divisor: Option<String>,
    pub factors: Vec<String>,
    pub progressions: Vec<ProgressionReport>,
}

/// Common divisor together with the zero progressions of its two-term factors.
pub fn common_zeros_report(f: &ExpPoly, g: &ExpPoly, ctx: &mut Context, qmax: u32, refine_max: u32) -> Result<CommonZerosReport> {
    let Some(h) = common_divisor_case1(f, g, qmax, refine_max)? else {
        return Ok(CommonZerosReport { divisor: None, factors: vec![], progressions: vec![] });
    };
    let mut factors = Vec::new();
    let mut progressions = Vec::new();
    let split = match factor_simple(&h) {
        Ok(s) => s.factors,
        Err(Error::CoefficientsOutsideBaseField) => vec![(h.clone(), 1)],
        Err(e) => return Err(e),
    };
    for (s, _) in &split {
        factors.push(s.show(ctx));
        if s.len() == 2 {
            progressions.push(simple_zero_progressions(s, ctx)?.report(ctx));
        }
    }
    Ok(CommonZerosReport { divisor: Some(h.show(ctx)), factors, progressions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Evaluator;

    fn term(c: Const, e: Const) -> ExpPoly {
        ExpPoly::term(c, e)
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic(1).degree(), Some(1));
        assert_eq!(cyclotomic(12).degree(), Some(4));
        assert_eq!(cyclotomic(7).degree(), Some(6));
    }

    #[test]
    fn zero_patterns() {
        let ctx = Context::new();
        let f = &ExpPoly::one() - &term(Const::one(), ctx.pi_i());
        let p = integer_zero_pattern(&f, &ctx).unwrap();
        assert_eq!((p.delta, p.residues.clone()), (2, vec![Residue { d: 0, certified: true }]));
        let s = ExpPoly::sin_pi(&ctx);
        let p = integer_zero_pattern(&s, &ctx).unwrap();
        assert_eq!((p.delta, p.residues.len()), (1, 1));
        assert!(vanishes_on_integers(&s, &ctx).unwrap());
        let f = &ExpPoly::one() + &term(Const::one(), Const::one());
        let p = integer_zero_pattern(&f, &ctx).unwrap();
        assert_eq!((p.delta, p.residues.len()), (1, 0));
        assert!(p.note.contains("sporadic"));
        // 1 + w + w^2 with w = e^(2 pi i z/3) vanishes off multiples of 3
        let w = ctx.two_pi_i().scale_rational(&crate::field::rat(1, 3));
        let f = &(&ExpPoly::one() + &term(Const::one(), w.clone())) + &term(Const::one(), w.scale_rational(&crate::field::rat(2, 1)));
        let p = integer_zero_pattern(&f, &ctx).unwrap();
        assert_eq!(p.delta, 3);
        assert_eq!(p.residues.iter().map(|r| r.d).collect::<Vec<_>>(), vec![1, 2]);
        let mut ev = Evaluator::new(&ctx, 1);
        for n in -6..6i64 {
            let v = ev.exppoly(&f, Complex64::new(n as f64, 0.0)).norm();
            assert_eq!(v < 1e-9, p.contains(n), "n = {n}");
        }
    }

    #[test]
    fn sine_witness() {
        let ctx = Context::new();
        let f = &term(Const::one(), ctx.two_pi_i()) - &ExpPoly::one();
        let h = sine_divisor_witness(&f, &ctx).unwrap();
        assert_eq!(h, term(Const::i().scale_rational(&crate::field::rat(2, 1)), ctx.pi_i()));
        assert_eq!(&h * &ExpPoly::sin_pi(&ctx), f);
        let g = &ExpPoly::one() + &term(Const::one(), Const::one());
        assert_eq!(sine_divisor_witness(&g, &ctx), Err(Error::DoesNotVanish));
    }

    #[test]
    fn progressions_of_linear_factor() {
        let mut ctx = Context::new();
        let f = &ExpPoly::one() - &term(Const::from_int(2), Const::from_int(3));
        let p = simple_zero_progressions(&f, &mut ctx).unwrap();
        let mut ev = Evaluator::new(&ctx, 3);
        for k in -2..=2 {
            let z = ev.constant(&p.offset) + ev.constant(&p.step) * k as f64;
            assert!(ev.exppoly(&f, z).norm() < 1e-9);
        }
        let three = &(&ExpPoly::one() + &term(Const::one(), Const::one())) + &term(Const::one(), Const::from_int(2));
        assert_eq!(simple_zero_progressions(&three, &mut ctx), Err(Error::NotLinearFactor));
    }

    #[test]
    fn common_divisors() {
        let mut ctx = Context::new();
        let pi = ctx.pi();
        let f = &ExpPoly::one() - &term(Const::one(), Const::one());
        let half = &ExpPoly::one() + &term(Const::one(), Const::ratio(1, 2));
        let g = &half * &(&ExpPoly::one() + &term(Const::one(), pi.clone()));
        let h = common_divisor_case1(&f, &g, 6, 6).unwrap().unwrap();
        assert_eq!(h, half);
        let far = &ExpPoly::one() + &term(Const::from_int(3), Const::one());
        assert_eq!(common_divisor_case1(&f, &far, 6, 6).unwrap(), None);
        let plane = &f + &term(Const::one(), pi);
        assert_eq!(common_divisor_case1(&plane, &f, 6, 6), Err(Error::NotSimple));
        let r = common_zeros_report(&f, &g, &mut ctx, 6, 6).unwrap();
        assert_eq!(r.progressions.len(), 1);
    }
}
