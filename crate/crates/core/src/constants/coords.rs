//! Q-linear coordinates of constants.
//!
//! A finite family is brought to a common denominator; each numerator is
//! then a Q-linear combination of (monomial, real|imaginary) keys, which are
//! Q-linearly independent in the generic model.

use super::spoly::{self, Mono, SPoly};
use super::{merge_ctx, Const};
use crate::error::{Error, Result};
use crate::linalg::{self, QVec};
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};

/// Joint coordinate vectors, one per input, over a shared key set.
pub fn coordinates(cs: &[Const]) -> Vec<QVec> {
    let mut common = SPoly::one();
    for c in cs {
        if !c.is_zero() {
            common = spoly::lcm(&common, c.denominator());
        }
    }
    let nums: Vec<SPoly> = cs
        .iter()
        .map(|c| {
            if c.denominator() == &common {
                c.numerator().clone()
            } else {
                let f = spoly::div_exact(&common, c.denominator()).expect("lcm is a multiple");
                c.numerator().mul(&f)
            }
        })
        .collect();
    let mut keys: BTreeSet<(Mono, bool)> = BTreeSet::new();
    for p in &nums {
        for (m, c) in p.terms() {
            if !c.re.is_zero() {
                keys.insert((m.clone(), false));
            }
            if !c.im.is_zero() {
                keys.insert((m.clone(), true));
            }
        }
    }
    let index: BTreeMap<&(Mono, bool), usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    nums.iter()
        .map(|p| {
            let mut v = vec![BigRational::zero(); keys.len()];
            for (m, c) in p.terms() {
                if !c.re.is_zero() {
                    v[index[&(m.clone(), false)]] = c.re.clone();
                }
                if !c.im.is_zero() {
                    v[index[&(m.clone(), true)]] = c.im.clone();
                }
            }
            v
        })
        .collect()
}

/// Dimension of the Q-span.
pub fn q_rank(cs: &[Const]) -> usize {
    linalg::rank(&coordinates(cs))
}

/// `q` with `a = q * b`, if `a / b` is rational.
pub fn rational_ratio(a: &Const, b: &Const) -> Result<Option<BigRational>> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    merge_ctx(a.context_id(), b.context_id())?;
    if a.is_zero() {
        return Ok(Some(BigRational::zero()));
    }
    if a.numerator().len() != b.numerator().len() && a.is_polynomial() && b.is_polynomial() {
        return Ok(None);
    }
    Ok(a.checked_div(b)?.as_rational())
}

/// Number of distinct generators occurring in the family.
pub fn transcendence_degree(cs: &[Const]) -> usize {
    cs.iter().flat_map(|c| c.generators()).collect::<BTreeSet<_>>().len()
}
