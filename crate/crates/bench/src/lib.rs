//! Deterministic workloads for the benchmarks.

use expoly::lattice::IntMatrix;
use expoly::unitcheck::UnitVector;
use expoly::{Const, Context, ExpPoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gauss(r: &mut ChaCha8Rng) -> Const {
    loop {
        let c = &Const::from_int(r.gen_range(-3..=3)) + &(&Const::i() * &Const::from_int(r.gen_range(-3..=3)));
        if !c.is_zero() {
            return c;
        }
    }
}

/// Square integer matrix with entries bounded by `bound`.
pub fn int_matrix(n: usize, bound: i64, seed: u64) -> IntMatrix {
    let mut r = rng(seed);
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| r.gen_range(-bound..=bound)).collect()).collect();
    IntMatrix::from_i64(&rows)
}

/// Product of `k` trinomials in `e^z`, `e^(pi z)` times a simple factor.
pub fn plane_product(ctx: &Context, k: usize, seed: u64) -> ExpPoly {
    let mut r = rng(seed);
    let pi = ctx.pi();
    let mut f = &ExpPoly::one() - &ExpPoly::term(gauss(&mut r), Const::one());
    for _ in 0..k {
        let a = r.gen_range(1..=2);
        let b = r.gen_range(1..=2);
        let tri = &(&ExpPoly::one() + &ExpPoly::term(gauss(&mut r), Const::from_int(a)))
            + &ExpPoly::term(gauss(&mut r), &pi * &Const::from_int(b));
        f = &f * &tri;
    }
    f
}

/// Sum of `terms` exponentials with frequencies in `2 pi i Z / n`.
pub fn periodic(ctx: &Context, n: i64, terms: usize, seed: u64) -> ExpPoly {
    let mut r = rng(seed);
    let mut f = ExpPoly::zero();
    for _ in 0..terms {
        let e = &ctx.two_pi_i() * &Const::ratio(r.gen_range(-n..=n), n);
        f = &f + &ExpPoly::term(gauss(&mut r), e);
    }
    f
}

/// Unit-equation data of length `n` with planted vanishing pairs.
pub fn unit_equation(ctx: &mut Context, n: usize, seed: u64) -> (Vec<Const>, UnitVector) {
    let mut r = rng(seed);
    let t = ctx.declare("t");
    let mut lambda = Vec::with_capacity(n);
    let mut omega = Vec::with_capacity(n);
    for k in 0..n {
        let c = if k % 2 == 1 && r.gen_bool(0.5) { -&lambda[k - 1] } else { Const::from_int(r.gen_range(1..=3)) };
        lambda.push(c);
        omega.push(t.pow(r.gen_range(0..3)).expect("nonzero base"));
    }
    (lambda, UnitVector { entries: omega, is_solution: false })
}
