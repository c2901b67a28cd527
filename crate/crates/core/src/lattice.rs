//! Integer lattices: Hermite normal form, bases of exponent groups,
//! relation lattices and subgroup cosets of the torus.

use crate::constants::{coordinates, Const};
use crate::error::{Error, Result};
use crate::linalg::{self, QVec};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(cols: usize, entries: Vec<Vec<BigInt>>) -> Self {
        assert!(entries.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix { rows: entries.len(), cols, entries }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::new(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(cols, vec![vec![BigInt::zero(); cols]; rows])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i]
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let entries = (0..self.rows)
            .map(|i| {
                (0..o.cols)
                    .map(|j| (0..self.cols).map(|k| &self.entries[i][k] * &o.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        Self::new(o.cols, entries)
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.rows, (0..self.cols).map(|j| (0..self.rows).map(|i| self.entries[i][j].clone()).collect()).collect())
    }

    /// Rows as strings of integers, for text output.
    pub fn to_rows_i(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

/// Row-style Hermite normal form with transform: returns `(u, h)` with
/// `u * m = h`, `u` unimodular, zero rows of `h` at the bottom.
pub fn hnf_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.entries.clone();
    let mut u = IntMatrix::identity(rows).entries;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            let (g, x, y) = ext_gcd(&h[r][c], &h[i][c]);
            let a = &h[r][c] / &g;
            let b = &h[i][c] / &g;
            for mat in [&mut h, &mut u] {
                let (top, rest) = mat.split_at_mut(i);
                let (pr, pi) = (&mut top[r], &mut rest[0]);
                for k in 0..pr.len() {
                    let nr = &x * &pr[k] + &y * &pi[k];
                    let ni = &a * &pi[k] - &b * &pr[k];
                    pr[k] = nr;
                    pi[k] = ni;
                }
            }
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            for mat in [&mut h, &mut u] {
                for x in mat[r].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        for k in 0..r {
            let q = h[k][c].div_floor(&h[r][c]);
            if q.is_zero() {
                continue;
            }
            for mat in [&mut h, &mut u] {
                let pivot_row = mat[r].clone();
                for (x, p) in mat[k].iter_mut().zip(&pivot_row) {
                    *x -= &q * p;
                }
            }
        }
        r += 1;
    }
    (IntMatrix::new(rows, u), IntMatrix::new(cols, h))
}

/// Hermite normal form: nonzero rows only, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> IntMatrix {
    let (_, h) = hnf_with_transform(m);
    let rows: Vec<Vec<BigInt>> = h.entries.into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    IntMatrix::new(m.cols, rows)
}

pub fn int_rank(m: &IntMatrix) -> usize {
    hnf(m).rows
}

/// Basis (rows, in HNF) of `{x in Z^rows : x * m = 0}`.
pub fn left_kernel(m: &IntMatrix) -> IntMatrix {
    let (u, h) = hnf_with_transform(m);
    let rows: Vec<Vec<BigInt>> = (0..m.rows)
        .filter(|&i| h.entries[i].iter().all(|x| x.is_zero()))
        .map(|i| u.entries[i].clone())
        .collect();
    hnf(&IntMatrix::new(m.rows, rows))
}

/// The saturation `(Q-span of the rows) intersected with Z^n`, in HNF.
pub fn saturation(m: &IntMatrix) -> IntMatrix {
    if m.rows == 0 {
        return m.clone();
    }
    // vectors orthogonal to the rows, then everything orthogonal to those
    let k = left_kernel(&m.transpose());
    if k.rows == 0 {
        return IntMatrix::identity(m.cols);
    }
    left_kernel(&k.transpose())
}

pub fn is_saturated(m: &IntMatrix) -> bool {
    hnf(m) == saturation(m)
}

/// Integer matrix of the coordinates of `values`, denominators cleared.
fn cleared_coordinates(values: &[Const]) -> IntMatrix {
    let coords = coordinates(values);
    let cols = coords.first().map_or(0, |r| r.len());
    let l = coords.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lq = BigRational::from_integer(l);
    IntMatrix::new(cols, coords.iter().map(|r| r.iter().map(|q| (q * &lq).to_integer()).collect()).collect())
}

/// A Z-basis of the group generated by some exponents.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpBasis {
    pub basis: Vec<Const>,
    /// Row `i` expresses input exponent `i` in the basis.
    pub transition: Vec<Vec<BigInt>>,
}

impl ExpBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Rational coordinates of each value in the basis; `None` outside the Q-span.
    pub fn express(&self, values: &[Const]) -> Vec<Option<QVec>> {
        let mut family = self.basis.clone();
        family.extend(values.iter().cloned());
        let coords = coordinates(&family);
        let cols: Vec<QVec> = coords[..self.basis.len()].to_vec();
        coords[self.basis.len()..].iter().map(|v| linalg::solve(&cols, v)).collect()
    }

    /// `sum_j v_j * basis_j`.
    pub fn combine(&self, v: &[BigRational]) -> Const {
        self.basis
            .iter()
            .zip(v)
            .filter(|(_, q)| !q.is_zero())
            .fold(Const::zero(), |acc, (b, q)| &acc + &b.scale_rational(q))
    }
}

/// Z-basis of the group generated by `exponents`, with integer transitions.
pub fn exponent_basis(exponents: &[Const]) -> Result<ExpBasis> {
    if exponents.is_empty() {
        return Err(Error::EmptySet);
    }
    let m = cleared_coordinates(exponents);
    let (u, h) = hnf_with_transform(&m);
    let rank = h.entries.iter().filter(|r| r.iter().any(|x| !x.is_zero())).count();
    let basis: Vec<Const> = (0..rank)
        .map(|j| {
            exponents
                .iter()
                .zip(&u.entries[j])
                .filter(|(_, k)| !k.is_zero())
                .fold(Const::zero(), |acc, (e, k)| &acc + &e.scale_rational(&BigRational::from_integer(k.clone())))
        })
        .collect();
    let mut eb = ExpBasis { basis, transition: Vec::new() };
    eb.transition = eb
        .express(exponents)
        .into_iter()
        .map(|v| {
            v.expect("exponent lies in its own group")
                .into_iter()
                .map(|q| {
                    debug_assert!(q.is_integer());
                    q.to_integer()
                })
                .collect()
        })
        .collect();
    Ok(eb)
}

/// Z-basis of the group generated by `exponents` together with the
/// integral points of their Q-span (integrality read off the joint
/// coordinates). Every exponent has integer transitions.
pub fn saturated_basis(exponents: &[Const]) -> Result<ExpBasis> {
    if exponents.is_empty() {
        return Err(Error::EmptySet);
    }
    let coords = coordinates(exponents);
    let cols = coords.first().map_or(0, |r| r.len());
    let l = coords.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let lq = BigRational::from_integer(l.clone());
    let m = IntMatrix::new(cols, coords.iter().map(|r| r.iter().map(|q| (q * &lq).to_integer()).collect()).collect());
    let mut rows: Vec<Vec<BigInt>> = saturation(&m).entries.iter().map(|r| r.iter().map(|x| x * &l).collect()).collect();
    rows.extend(m.entries.iter().cloned());
    let h = hnf(&IntMatrix::new(cols, rows));
    let basis: Vec<Const> = h
        .entries
        .iter()
        .map(|r| {
            let target: QVec = r.iter().map(|x| BigRational::new(x.clone(), l.clone())).collect();
            let x = linalg::solve(&coords, &target).expect("saturation stays in the span");
            exponents
                .iter()
                .zip(&x)
                .filter(|(_, q)| !q.is_zero())
                .fold(Const::zero(), |acc, (e, q)| &acc + &e.scale_rational(q))
        })
        .collect();
    let mut eb = ExpBasis { basis, transition: Vec::new() };
    eb.transition = eb
        .express(exponents)
        .into_iter()
        .map(|v| v.expect("in span").into_iter().map(|q| q.to_integer()).collect())
        .collect();
    Ok(eb)
}

/// Z-basis (rows, in HNF) of the integer relations `sum a_i values_i = 0`.
pub fn linear_relations(values: &[Const]) -> IntMatrix {
    if values.is_empty() {
        return IntMatrix::zero(0, 0);
    }
    left_kernel(&cleared_coordinates(values))
}

/// `Y^a = theta` for each exponent vector `a`; a subgroup when all `theta` are 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupCoset {
    pub exponent_vectors: Vec<Vec<BigInt>>,
    pub theta: Vec<Const>,
}

impl SubgroupCoset {
    pub fn subgroup(exponent_vectors: Vec<Vec<BigInt>>) -> Self {
        let theta = vec![Const::one(); exponent_vectors.len()];
        SubgroupCoset { exponent_vectors, theta }
    }

    pub fn coset(exponent_vectors: Vec<Vec<BigInt>>, theta: Vec<Const>) -> Result<Self> {
        if exponent_vectors.len() != theta.len() {
            return Err(Error::LengthMismatch { left: exponent_vectors.len(), right: theta.len() });
        }
        Ok(SubgroupCoset { exponent_vectors, theta })
    }

    pub fn rank(&self, d: usize) -> usize {
        if self.exponent_vectors.is_empty() {
            return 0;
        }
        int_rank(&IntMatrix::new(d, self.exponent_vectors.clone()))
    }

    /// Whether the defining lattice is saturated (the subgroup is connected).
    pub fn is_torus(&self, d: usize) -> bool {
        self.exponent_vectors.is_empty() || is_saturated(&IntMatrix::new(d, self.exponent_vectors.clone()))
    }
}

/// `D - rank` of the exponent vectors.
pub fn subgroup_dim(s: &SubgroupCoset, d: usize) -> Result<usize> {
    if let Some(v) = s.exponent_vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: v.len() });
    }
    Ok(d - s.rank(d))
}

/// Exact membership of a torus point.
pub fn coset_contains(s: &SubgroupCoset, point: &[Const]) -> Result<bool> {
    if point.iter().any(|c| c.is_zero()) {
        return Err(Error::ZeroCoordinate);
    }
    for (a, theta) in s.exponent_vectors.iter().zip(&s.theta) {
        if a.len() != point.len() {
            return Err(Error::DimensionMismatch { expected: point.len(), got: a.len() });
        }
        let mut value = Const::one();
        for (k, y) in a.iter().zip(point) {
            let k = i64::try_from(k).map_err(|_| Error::DimensionMismatch { expected: 64, got: 65 })?;
            if k != 0 {
                value = value.checked_mul(&y.pow(k)?)?;
            }
        }
        if &value != theta {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `dim W > max(0, dim V - codim Gamma)`.
pub fn is_anomalous(dim_w: usize, dim_v: usize, codim_gamma: usize) -> bool {
    dim_w > dim_v.saturating_sub(codim_gamma)
}
