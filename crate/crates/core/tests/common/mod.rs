//! Random instance builders shared by the integration suites.
#![allow(dead_code)]

use expoly::{Const, ExpPoly};
use rand::Rng;

/// `a + b i` with small integer parts.
pub fn gauss<R: Rng>(rng: &mut R, bound: i64) -> Const {
    let re = rng.gen_range(-bound..=bound);
    let im = rng.gen_range(-bound..=bound);
    &Const::from_int(re) + &(&Const::i() * &Const::from_int(im))
}

pub fn gauss_nonzero<R: Rng>(rng: &mut R, bound: i64) -> Const {
    loop {
        let c = gauss(rng, bound);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Small rational `n / d` with `d` in `1..=den`.
pub fn rational<R: Rng>(rng: &mut R, num: i64, den: i64) -> Const {
    Const::ratio(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// Integer combination of the given constants.
pub fn combo(basis: &[Const], coeffs: &[i64]) -> Const {
    basis.iter().zip(coeffs).fold(Const::zero(), |acc, (b, &k)| &acc + &(b * &Const::from_int(k)))
}

pub fn poly(terms: impl IntoIterator<Item = (Const, Const)>) -> ExpPoly {
    ExpPoly::normalize(terms.into_iter().map(|(c, e)| (e, c))).expect("single context")
}

/// Random polynomial with `lo..=hi` raw terms drawn from the given
/// coefficient and exponent pools; merging may shorten it.
pub fn random_poly<R: Rng>(rng: &mut R, coefs: &[Const], exps: &[Const], lo: usize, hi: usize) -> ExpPoly {
    let len = rng.gen_range(lo..=hi);
    poly((0..len).map(|_| {
        let c = &coefs[rng.gen_range(0..coefs.len())] * &gauss_nonzero(rng, 3);
        let e = &exps[rng.gen_range(0..exps.len())] * &Const::from_int(rng.gen_range(-2..=2));
        let e2 = &exps[rng.gen_range(0..exps.len())] * &Const::ratio(rng.gen_range(-2..=2), rng.gen_range(1..=2));
        (c, &e + &e2)
    }))
}

pub fn product(fs: &[ExpPoly]) -> ExpPoly {
    fs.iter().fold(ExpPoly::one(), |acc, f| &acc * f)
}
