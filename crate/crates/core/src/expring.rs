//! Exponential polynomials `sum lambda_j e^(mu_j z)` as the group algebra
//! of the additive group of constants.

use crate::constants::{coordinates, merge_ctx, Const, Context};
use crate::error::{Error, Result};
use crate::linalg::{self, QVec};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent to coefficient; coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Const, Const>,
}

/// Q-span of the exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Support {
    /// Exponents of the source forming a Q-basis of the span.
    pub spanning_exponents: Vec<Const>,
    pub q_dimension: usize,
    /// Coordinates of every exponent (in display order) in that basis.
    pub coordinates: Vec<QVec>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Const::one())
    }

    pub fn constant(c: Const) -> Self {
        Self::term(c, Const::zero())
    }

    /// `coef * e^(exponent z)`.
    pub fn term(coef: Const, exponent: Const) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exponent, coef);
        }
        ExpPoly { terms }
    }

    /// Merges duplicate exponents and drops zero coefficients.
    pub fn normalize(raw: impl IntoIterator<Item = (Const, Const)>) -> Result<Self> {
        let mut f = ExpPoly::zero();
        let mut ctx = 0;
        for (exp, coef) in raw {
            ctx = merge_ctx(ctx, exp.context_id())?;
            ctx = merge_ctx(ctx, coef.context_id())?;
            f.add_term(exp, coef);
        }
        Ok(f)
    }

    fn add_term(&mut self, exp: Const, coef: Const) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &coef;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// `sin(c z) = (e^(icz) - e^(-icz)) / 2i`.
    pub fn sin(c: &Const) -> Self {
        let ic = c * &Const::i();
        let half_i = Const::from_gauss(crate::GaussRat::new(crate::field::rat(0, 1), crate::field::rat(1, 2)));
        let mut f = Self::term(-&half_i, ic.clone());
        f.add_term(-&ic, half_i);
        f
    }

    /// `cos(c z) = (e^(icz) + e^(-icz)) / 2`.
    pub fn cos(c: &Const) -> Self {
        let ic = c * &Const::i();
        let half = Const::ratio(1, 2);
        let mut f = Self::term(half.clone(), ic.clone());
        f.add_term(-&ic, half);
        f
    }

    /// `sin(pi z)` in the given context.
    pub fn sin_pi(ctx: &Context) -> Self {
        Self::sin(&ctx.pi())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.len() == 1 && self.coeff(&Const::zero()).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn length(&self) -> usize {
        self.terms.len()
    }

    /// Terms keyed by exponent in storage order: `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Const, &Const)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: &Const) -> Const {
        self.terms.get(exponent).cloned().unwrap_or_else(Const::zero)
    }

    pub fn exponents(&self) -> Vec<Const> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficients(&self) -> Vec<Const> {
        self.terms.values().cloned().collect()
    }

    pub fn context_id(&self) -> u32 {
        self.terms
            .iter()
            .flat_map(|(e, c)| [e.context_id(), c.context_id()])
            .find(|&id| id != 0)
            .unwrap_or(0)
    }

    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    /// The single term of a unit.
    pub fn as_unit(&self) -> Option<(&Const, &Const)> {
        if self.is_unit() {
            self.terms.iter().next().map(|(e, c)| (c, e))
        } else {
            None
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self> {
        merge_ctx(self.context_id(), o.context_id())?;
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self> {
        self.checked_add(&-o)
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self> {
        merge_ctx(self.context_id(), o.context_id())?;
        let mut r = ExpPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &Const) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect() }
    }

    /// Multiplies by the unit `coef * e^(exponent z)`.
    pub fn mul_unit(&self, coef: &Const, exponent: &Const) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(e, k)| (e + exponent, k * coef)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `f(scale * z + shift)`.
    pub fn substitute_affine(&self, ctx: &mut Context, scale: &Const, shift: &Const) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::DivisionByZero);
        }
        ctx.check(scale)?;
        ctx.check(shift)?;
        let mut r = ExpPoly::zero();
        for (e, c) in &self.terms {
            ctx.check(e)?;
            let factor = if shift.is_zero() { Const::one() } else { ctx.formal_exp(&(e * shift))? };
            r.add_term(e * scale, c * &factor);
        }
        Ok(r)
    }

    /// Exact value at `z`, each `e^(mu z)` taken as a formal exponential.
    pub fn eval_at(&self, ctx: &mut Context, z: &Const) -> Result<Const> {
        let mut acc = Const::zero();
        for (e, c) in &self.terms {
            let u = ctx.formal_exp(&e.checked_mul(z)?)?;
            acc = acc.checked_add(&c.checked_mul(&u)?)?;
        }
        Ok(acc)
    }

    /// Terms sorted lexicographically by the joint coordinates of their exponents.
    pub fn ordered_terms(&self) -> Vec<(Const, Const)> {
        let exps = self.exponents();
        let coords = coordinates(&exps);
        let mut idx: Vec<usize> = (0..exps.len()).collect();
        idx.sort_by(|&a, &b| lex_cmp(&coords[a], &coords[b]));
        idx.into_iter().map(|k| (exps[k].clone(), self.terms[&exps[k]].clone())).collect()
    }

    /// Splits off the unit making the lexicographically least exponent 0
    /// with coefficient 1. Returns `(coef, exponent, associate)` with
    /// `self = coef * e^(exponent z) * associate`.
    pub fn canonical_associate(&self) -> (Const, Const, ExpPoly) {
        if self.is_zero() {
            return (Const::one(), Const::zero(), ExpPoly::zero());
        }
        let (e0, c0) = self.ordered_terms().swap_remove(0);
        let inv = Const::one().checked_div(&c0).expect("nonzero coefficient");
        let assoc = self.mul_unit(&inv, &-&e0);
        (c0, e0, assoc)
    }

    pub fn support(&self) -> Result<Support> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let ordered: Vec<Const> = self.ordered_terms().into_iter().map(|(e, _)| e).collect();
        let coords = coordinates(&ordered);
        let mut basis_idx: Vec<usize> = Vec::new();
        let mut rows: Vec<QVec> = Vec::new();
        for (k, v) in coords.iter().enumerate() {
            rows.push(v.clone());
            if linalg::rank(&rows) > basis_idx.len() {
                basis_idx.push(k);
            } else {
                rows.pop();
            }
        }
        let cols: Vec<QVec> = basis_idx.iter().map(|&k| coords[k].clone()).collect();
        let in_basis = coords.iter().map(|v| linalg::solve(&cols, v).expect("in span")).collect();
        Ok(Support {
            spanning_exponents: basis_idx.iter().map(|&k| ordered[k].clone()).collect(),
            q_dimension: basis_idx.len(),
            coordinates: in_basis,
        })
    }

    pub fn is_simple(&self) -> Result<bool> {
        Ok(self.support()?.q_dimension == 1)
    }

    /// Expression text readable by the command-line parser.
    pub fn show(&self, ctx: &Context) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.ordered_terms().iter().enumerate() {
            let t = show_term(ctx, c, e);
            if k == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn is_atomic(c: &Const) -> bool {
    c.is_polynomial() && c.numerator().len() <= 1
}

fn show_term(ctx: &Context, c: &Const, e: &Const) -> String {
    let cs = ctx.show(c);
    if e.is_zero() {
        return if is_atomic(c) { cs } else { format!("({cs})") };
    }
    let es = if e.is_one() {
        "z".to_string()
    } else if (-e).is_one() {
        "-z".to_string()
    } else if is_atomic(e) {
        format!("{}*z", ctx.show(e))
    } else {
        format!("({})*z", ctx.show(e))
    };
    let ex = format!("e^({es})");
    if c.is_one() {
        ex
    } else if (-c).is_one() {
        format!("-{ex}")
    } else if is_atomic(c) {
        format!("{cs}*{ex}")
    } else {
        format!("({cs})*{ex}")
    }
}

pub fn lex_cmp(a: &[num_rational::BigRational], b: &[num_rational::BigRational]) -> Ordering {
    a.cmp(b)
}

impl Add for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, o: &ExpPoly) -> ExpPoly {
        self.checked_add(o).expect("polynomials from different contexts")
    }
}

impl Sub for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, o: &ExpPoly) -> ExpPoly {
        self.checked_sub(o).expect("polynomials from different contexts")
    }
}

impl Mul for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, o: &ExpPoly) -> ExpPoly {
        self.checked_mul(o).expect("polynomials from different contexts")
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

pub fn ep_add(f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
    f.checked_add(g)
}

pub fn ep_mul(f: &ExpPoly, g: &ExpPoly) -> Result<ExpPoly> {
    f.checked_mul(g)
}

pub fn ep_neg(f: &ExpPoly) -> ExpPoly {
    -f
}
