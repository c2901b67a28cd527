//! The symbolic constant field: rational functions over Q(i) in
//! algebraically independent generators.

mod context;
mod coords;
mod spoly;

pub use context::{Context, Generator, GeneratorKind, DEFAULT_DENOMINATOR_BOUND, PI};
pub use coords::{coordinates, q_rank, rational_ratio, transcendence_degree};
pub use spoly::{is_exp_var, GenId, Mono, SPoly, EXP_FLAG};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::gauss::GaussRat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use std::collections::BTreeSet;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Canonical element of the constant field.
///
/// Invariants: `num / den` is reduced, `den` has leading coefficient one
/// under graded-lex order and no exponential-generator content, and `ctx`
/// is 0 exactly when no generator occurs.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Const {
    num: SPoly,
    den: SPoly,
    ctx: u32,
}

pub(crate) fn merge_ctx(a: u32, b: u32) -> Result<u32> {
    match (a, b) {
        (0, x) | (x, 0) => Ok(x),
        (x, y) if x == y => Ok(x),
        _ => Err(Error::ContextMismatch),
    }
}

impl Const {
    pub fn zero() -> Self {
        Const { num: SPoly::zero(), den: SPoly::one(), ctx: 0 }
    }

    pub fn one() -> Self {
        Self::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        Self::from_gauss(GaussRat::i())
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        Const { num: SPoly::constant(g), den: SPoly::one(), ctx: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRat::from_ints(n, 0))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Self::from_gauss(GaussRat::from_rat(q))
    }

    /// `n / d` as a rational constant; panics if `d == 0`.
    pub fn ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// A polynomial (denominator one) constant.
    pub(crate) fn poly(num: SPoly, ctx: u32) -> Self {
        let ctx = if num.vars().is_empty() { 0 } else { ctx };
        Const { num, den: SPoly::one(), ctx }
    }

    pub(crate) fn from_parts(num: SPoly, den: SPoly, ctx: u32) -> Self {
        if den.is_one() {
            return Self::poly(num, ctx);
        }
        let (num, den) = spoly::reduce_fraction(&num, &den);
        let ctx = if num.vars().is_empty() && den.vars().is_empty() { 0 } else { ctx };
        Const { num, den, ctx }
    }

    pub fn numerator(&self) -> &SPoly {
        &self.num
    }

    pub fn denominator(&self) -> &SPoly {
        &self.den
    }

    /// Context id; 0 for constants of Q(i), which fit any context.
    pub fn context_id(&self) -> u32 {
        self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_gauss(&self) -> Option<GaussRat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.as_gauss().filter(|g| g.is_real()).map(|g| g.re)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Generators occurring in the canonical form.
    pub fn generators(&self) -> BTreeSet<GenId> {
        let mut s = self.num.vars();
        s.extend(self.den.vars());
        s
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        let ctx = merge_ctx(self.ctx, o.ctx)?;
        Ok(if self.den.is_one() && o.den.is_one() {
            Self::poly(self.num.add(&o.num), ctx)
        } else if self.den == o.den {
            Self::from_parts(self.num.add(&o.num), self.den.clone(), ctx)
        } else {
            let n = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            Self::from_parts(n, self.den.mul(&o.den), ctx)
        })
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&o.neg_ref())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        let ctx = merge_ctx(self.ctx, o.ctx)?;
        if self.is_zero() || o.is_zero() {
            return Ok(Self::zero());
        }
        Ok(if self.den.is_one() && o.den.is_one() {
            Self::poly(self.num.mul(&o.num), ctx)
        } else {
            Self::from_parts(self.num.mul(&o.num), self.den.mul(&o.den), ctx)
        })
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_parts(self.den.clone(), self.num.clone(), self.ctx))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        self.checked_mul(&o.checked_inv()?)
    }

    fn neg_ref(&self) -> Self {
        Const { num: self.num.neg(), den: self.den.clone(), ctx: self.ctx }
    }

    /// Integer power; negative powers require a nonzero value.
    pub fn pow(&self, k: i64) -> Result<Self> {
        let base = if k < 0 { self.checked_inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Const { num: self.num.scale(&GaussRat::from_rat(q.clone())), den: self.den.clone(), ctx: self.ctx }
    }

    /// Single monomial in exponential generators times a Q(i) scalar.
    pub fn is_exp_unit(&self) -> bool {
        self.den.is_one() && self.num.single_term().is_some_and(|(m, _)| !m.has_ordinary())
    }

    pub(crate) fn exp_monomial(m: Mono, c: GaussRat, ctx: u32) -> Self {
        Self::poly(SPoly::term(m, c), ctx)
    }

    /// Sign of the first nonzero coordinate in the fixed key order.
    pub(crate) fn leading_sign_negative(&self) -> bool {
        let (_, c) = self.num.terms().next().expect("nonzero");
        if c.re.is_zero() {
            c.im.is_negative()
        } else {
            c.re.is_negative()
        }
    }
}

fn same_context(r: Result<Const>) -> Const {
    r.expect("constants from different contexts")
}

impl Add for &Const {
    type Output = Const;
    fn add(self, o: &Const) -> Const {
        same_context(self.checked_add(o))
    }
}

impl Sub for &Const {
    type Output = Const;
    fn sub(self, o: &Const) -> Const {
        same_context(self.checked_sub(o))
    }
}

impl Mul for &Const {
    type Output = Const;
    fn mul(self, o: &Const) -> Const {
        same_context(self.checked_mul(o))
    }
}

/// Panics on division by zero or mixed contexts; use [`Const::checked_div`] otherwise.
impl Div for &Const {
    type Output = Const;
    fn div(self, o: &Const) -> Const {
        self.checked_div(o).expect("division by zero or mixed contexts")
    }
}

impl Neg for &Const {
    type Output = Const;
    fn neg(self) -> Const {
        self.neg_ref()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Const {
            type Output = Const;
            fn $m(self, o: Const) -> Const {
                <&Const as $tr<&Const>>::$m(&self, &o)
            }
        }
        impl $tr<&Const> for Const {
            type Output = Const;
            fn $m(self, o: &Const) -> Const {
                <&Const as $tr<&Const>>::$m(&self, o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Const {
    type Output = Const;
    fn neg(self) -> Const {
        self.neg_ref()
    }
}

impl From<i64> for Const {
    fn from(n: i64) -> Self {
        Const::from_int(n)
    }
}

impl From<GaussRat> for Const {
    fn from(g: GaussRat) -> Self {
        Const::from_gauss(g)
    }
}

/// `const_add` from the public contract.
pub fn const_add(a: &Const, b: &Const) -> Result<Const> {
    a.checked_add(b)
}

pub fn const_mul(a: &Const, b: &Const) -> Result<Const> {
    a.checked_mul(b)
}

pub fn const_inv(a: &Const) -> Result<Const> {
    a.checked_inv()
}

pub fn const_eq(a: &Const, b: &Const) -> Result<bool> {
    merge_ctx(a.ctx, b.ctx)?;
    Ok(a == b)
}

/// Field operations for generic polynomial code; panics on mixed contexts.
impl Field for Const {
    fn zero() -> Self {
        Const::zero()
    }
    fn one() -> Self {
        Const::one()
    }
    fn is_zero(&self) -> bool {
        Const::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero")
    }
    fn from_i64(n: i64) -> Self {
        Const::from_int(n)
    }
}
