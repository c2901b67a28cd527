//! Common zeros as solutions of the linear equation `sum lambda_i X_i = 0`:
//! solution vectors, vanishing subsums, distinctness, term splits and the
//! audit of transcendence-degree inequalities.

use crate::constants::{coordinates, q_rank, transcendence_degree, Const, Context};
use crate::error::{Error, Result};
use crate::expring::ExpPoly;
use crate::lattice::exponent_basis;
use crate::linalg::{self, QVec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub const MAX_SUBSET_TERMS: usize = 20;

/// `omega_i = e^(mu_i s)` in display order of the terms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitVector {
    pub entries: Vec<Const>,
    /// Whether `sum lambda_i omega_i` is exactly zero.
    pub is_solution: bool,
}

impl UnitVector {
    /// Inhomogeneous form: `x_i = lambda_i omega_i / (-lambda_N omega_N)`
    /// for `i < N`, so that `sum x_i = 1` on solutions.
    pub fn normalized(&self, lambda: &[Const]) -> Result<Vec<Const>> {
        if lambda.len() != self.entries.len() {
            return Err(Error::LengthMismatch { left: lambda.len(), right: self.entries.len() });
        }
        let n = lambda.len();
        if n == 0 {
            return Ok(vec![]);
        }
        let last = -&lambda[n - 1].checked_mul(&self.entries[n - 1])?;
        (0..n - 1).map(|i| lambda[i].checked_mul(&self.entries[i])?.checked_div(&last)).collect()
    }
}

/// Coefficients of `f` in the order matching [`solution_vector`].
pub fn coefficients_in_order(f: &ExpPoly) -> Vec<Const> {
    f.ordered_terms().into_iter().map(|(_, c)| c).collect()
}

pub fn solution_vector(f: &ExpPoly, s: &Const, ctx: &mut Context) -> Result<UnitVector> {
    if s.is_zero() {
        return Err(Error::ZeroSolution);
    }
    let mut entries = Vec::with_capacity(f.len());
    let mut sum = Const::zero();
    for (mu, lambda) in f.ordered_terms() {
        let w = ctx.formal_exp(&mu.checked_mul(s)?)?;
        sum = sum.checked_add(&lambda.checked_mul(&w)?)?;
        entries.push(w);
    }
    Ok(UnitVector { entries, is_solution: sum.is_zero() })
}

/// Integer coordinate rows of the products `lambda_i omega_i`.
fn product_coordinates(lambda: &[Const], omega: &UnitVector) -> Result<Vec<Vec<BigInt>>> {
    if lambda.len() != omega.entries.len() {
        return Err(Error::LengthMismatch { left: lambda.len(), right: omega.entries.len() });
    }
    if lambda.len() > MAX_SUBSET_TERMS {
        return Err(Error::TooLong { len: lambda.len(), max: MAX_SUBSET_TERMS });
    }
    let products = lambda.iter().zip(&omega.entries).map(|(l, w)| l.checked_mul(w)).collect::<Result<Vec<_>>>()?;
    let coords = coordinates(&products);
    let l = coords.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lq = BigRational::from_integer(l);
    Ok(coords.iter().map(|r| r.iter().map(|q| (q * &lq).to_integer()).collect()).collect())
}

/// Masks of all proper nonempty subsets with zero sum, by Gray-code walk.
fn zero_masks(rows: &[Vec<BigInt>]) -> Vec<u32> {
    let n = rows.len();
    let dim = rows.first().map_or(0, |r| r.len());
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let small: Option<Vec<Vec<i64>>> = rows.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect();
    let mut out = Vec::new();
    let steps = 1u64 << n;
    macro_rules! walk {
        ($rows:expr, $zero:expr) => {{
            let rows = $rows;
            let mut sum = vec![$zero; dim];
            let mut mask = 0u32;
            for k in 1..steps {
                let bit = k.trailing_zeros() as usize;
                mask ^= 1 << bit;
                let adding = mask & (1 << bit) != 0;
                for (s, x) in sum.iter_mut().zip(&rows[bit]) {
                    if adding {
                        *s += x.clone();
                    } else {
                        *s -= x.clone();
                    }
                }
                if mask != full && sum.iter().all(|s| *s == $zero) {
                    out.push(mask);
                }
            }
        }};
    }
    match small {
        Some(r) => {
            let r: Vec<Vec<i128>> = r.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
            walk!(&r, 0i128)
        }
        None => walk!(rows, BigInt::zero()),
    }
    out
}

/// Minimal proper nonempty subsets `I` (0-based term indices) with
/// `sum_{i in I} lambda_i omega_i = 0`, sorted.
pub fn vanishing_subsums(lambda: &[Const], omega: &UnitVector) -> Result<Vec<Vec<usize>>> {
    let rows = product_coordinates(lambda, omega)?;
    let mut masks = zero_masks(&rows);
    masks.sort_by_key(|m| (m.count_ones(), *m));
    let mut minimal: Vec<u32> = Vec::new();
    for m in masks {
        if !minimal.iter().any(|&k| k & m == k) {
            minimal.push(m);
        }
    }
    let mut out: Vec<Vec<usize>> =
        minimal.iter().map(|&m| (0..lambda.len()).filter(|&i| m & (1 << i) != 0).collect()).collect();
    out.sort();
    Ok(out)
}

pub fn is_degenerate(lambda: &[Const], omega: &UnitVector) -> Result<bool> {
    Ok(!vanishing_subsums(lambda, omega)?.is_empty())
}

/// Whether two distinct nonzero points give different solution vectors of a
/// non-simple `f`.
pub fn distinct_solution_check(f: &ExpPoly, s1: &Const, s2: &Const, ctx: &mut Context) -> Result<bool> {
    if f.is_simple()? {
        return Err(Error::SimpleInput);
    }
    if s1 == s2 {
        return Err(Error::EqualSolutions);
    }
    let a = solution_vector(f, s1, ctx)?;
    let b = solution_vector(f, s2, ctx)?;
    Ok(a.entries != b.entries)
}

/// Splits `g` by term indices (display order) into `(g1, g2)`, `g1 + g2 = g`.
pub fn split_by_subset(g: &ExpPoly, subset: &[usize]) -> Result<(ExpPoly, ExpPoly)> {
    let terms = g.ordered_terms();
    let mut chosen = vec![false; terms.len()];
    for &i in subset {
        if i >= terms.len() || chosen[i] {
            return Err(Error::BadSubset);
        }
        chosen[i] = true;
    }
    if subset.is_empty() || subset.len() == terms.len() {
        return Err(Error::BadSubset);
    }
    let (mut g1, mut g2) = (Vec::new(), Vec::new());
    for ((e, c), inside) in terms.into_iter().zip(chosen) {
        if inside {
            g1.push((e, c));
        } else {
            g2.push((e, c));
        }
    }
    Ok((ExpPoly::normalize(g1)?, ExpPoly::normalize(g2)?))
}

/// A Q-basis of a set of solutions and every solution's coordinates in it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolutionBasisExpansion {
    pub basis_solutions: Vec<Const>,
    pub coefficients: Vec<QVec>,
}

pub fn solution_basis(solutions: &[Const]) -> SolutionBasisExpansion {
    let coords = coordinates(solutions);
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
    SolutionBasisExpansion {
        basis_solutions: basis_idx.iter().map(|&k| solutions[k].clone()).collect(),
        coefficients: coords.iter().map(|v| linalg::solve(&cols, v).expect("in span")).collect(),
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Inequality {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct AuditReport {
    #[serde(rename = "D")]
    pub d: usize,
    pub delta1: usize,
    pub delta2: usize,
    #[serde(rename = "DT")]
    pub dt: usize,
    pub inequalities: Vec<Inequality>,
}

impl AuditReport {
    pub fn all_pass(&self) -> bool {
        self.inequalities.iter().all(|i| i.pass)
    }
}

fn inequality(name: &str, lhs: usize, rhs: i64) -> Inequality {
    let lhs = lhs as i64;
    Inequality { name: name.to_string(), lhs, rhs, pass: lhs <= rhs }
}

/// Checks, for a finite set `T` of common zeros:
/// `D(T) <= kD - k + delta1 + delta2`; `|T| <= delta1 + delta2` when
/// `D(T) = kD`; and `td(BT) <= delta1 + 2 delta2`. Failures are reported.
pub fn schanuel_audit(f: &ExpPoly, g: &ExpPoly, t: &[Const]) -> Result<AuditReport> {
    if t.is_empty() {
        return Err(Error::EmptySet);
    }
    if t.iter().any(|s| s.is_zero()) {
        return Err(Error::ZeroSolution);
    }
    let mut exps = f.exponents();
    exps.extend(g.exponents());
    let mut coefs = f.coefficients();
    coefs.extend(g.coefficients());
    let d = q_rank(&exps);
    let delta1 = transcendence_degree(&coefs);
    let delta2 = transcendence_degree(&exps);
    let basis = exponent_basis(&exps)?.basis;
    let mut bt = Vec::with_capacity(basis.len() * t.len());
    for s in t {
        for b in &basis {
            bt.push(b.checked_mul(s)?);
        }
    }
    let dt = q_rank(&bt);
    let k = t.len() as i64;
    let (di, d1, d2) = (d as i64, delta1 as i64, delta2 as i64);
    let mut inequalities = vec![inequality("schanuel", dt, k * di - k + d1 + d2)];
    if dt as i64 == k * di {
        inequalities.push(inequality("maximum", t.len(), d1 + d2));
    }
    inequalities.push(inequality("finitetd", transcendence_degree(&bt), d1 + 2 * d2));
    Ok(AuditReport { d, delta1, delta2, dt, inequalities })
}
