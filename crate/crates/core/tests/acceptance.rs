//! Acceptance suite: one line per criterion, nonzero exit on any failure.

mod common;

use common::*;
use expoly::constants::q_rank;
use expoly::lattice::{hnf, hnf_with_transform, int_rank, is_anomalous, subgroup_dim, IntMatrix, SubgroupCoset};
use expoly::numeric::Evaluator;
use expoly::ritt::{divides, ritt_factor, support_compatible};
use expoly::unitcheck::{distinct_solution_check, schanuel_audit, vanishing_subsums, UnitVector};
use expoly::zeros::{common_divisor_case1, integer_zero_pattern, sine_divisor_witness};
use expoly::{Const, Context, ExpPoly};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("ring and unit axioms", ring_and_units),
        ("factorization round trip", factorization_round_trip),
        ("divisibility", divisibility),
        ("sine divisor witness", sine_witness),
        ("integer zero patterns", integer_zero_patterns),
        ("common divisor of a simple polynomial", common_divisor),
        ("vanishing subsums against brute force", subsum_oracle),
        ("transcendence audit", transcendence_audit),
        ("lattice identities", lattice_identities),
        ("distinct solution vectors", distinct_solutions),
    ];
    // optional criterion numbers select a subset
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(k + 1)) {
            continue;
        }
        let start = Instant::now();
        let o = catch_unwind(run).unwrap_or_else(|_| outcome(false, "panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {:>2} {:<40} {}  {} ({secs:.1}s)", k + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------

fn ring_and_units() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let pi = ctx.pi();
    let coefs = [Const::one(), t.clone(), &t + &Const::i(), &Const::one() / &t];
    let exps = [Const::one(), pi.clone(), t.clone(), ctx.two_pi_i()];
    let (mut checks, mut bad) = (0, 0);
    while checks < 1000 {
        let f = random_poly(&mut rng, &coefs, &exps, 0, 3);
        let g = random_poly(&mut rng, &coefs, &exps, 0, 3);
        let h = random_poly(&mut rng, &coefs, &exps, 0, 3);
        let axioms = [
            &f + &g == &g + &f,
            &(&f + &g) + &h == &f + &(&g + &h),
            &f * &g == &g * &f,
            &(&f * &g) * &h == &f * &(&g * &h),
            &f * &(&g + &h) == &(&f * &g) + &(&f * &h),
            &f + &(-&f) == ExpPoly::zero(),
            &f * &ExpPoly::one() == f,
            &f + &ExpPoly::zero() == f,
        ];
        checks += axioms.len();
        bad += axioms.iter().filter(|ok| !**ok).count();
    }
    let mut unit_bad = 0;
    for _ in 0..200 {
        let f = random_poly(&mut rng, &coefs, &exps, 0, 3);
        let single = f.len() == 1;
        // a unit has an explicit inverse; a longer polynomial keeps two extreme terms in any product
        let behaves_as_unit = match f.ordered_terms().as_slice() {
            [(e, c)] => &f * &ExpPoly::term(&Const::one() / c, -e) == ExpPoly::one(),
            [] => false,
            _ => {
                let g = random_poly(&mut rng, &coefs, &exps, 1, 3);
                !g.is_zero() && (&f * &g).len() < 2
            }
        };
        if f.is_unit() != single || behaves_as_unit != single {
            unit_bad += 1;
        }
    }
    outcome(bad == 0 && unit_bad == 0, format!("{} axiom checks, {bad} failed; 200 unit checks, {unit_bad} failed", checks))
}

// ---------------------------------------------------------------------------

fn laurent_term(basis: &[Const], coef: Const, e: &[i64]) -> (Const, Const) {
    (coef, combo(basis, e))
}

fn primitive_vector<R: Rng>(rng: &mut R, d: usize) -> Vec<i64> {
    loop {
        let v: Vec<i64> = (0..d).map(|_| rng.gen_range(-2..=2)).collect();
        let g = v.iter().fold(0i64, |a, &b| a.gcd(&b));
        if g == 1 {
            return v;
        }
    }
}

fn spread(vs: &[Vec<i64>], d: usize) -> i64 {
    (0..d).map(|j| vs.iter().map(|v| v[j]).max().unwrap() - vs.iter().map(|v| v[j]).min().unwrap()).max().unwrap_or(0)
}

fn canonical_show(f: &ExpPoly, ctx: &Context) -> String {
    f.canonical_associate().2.show(ctx)
}

fn factorization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ctx = Context::new();
    let pi = ctx.pi();
    // bases already saturated, so linear factors in a primitive direction cannot split further
    let bases = [
        vec![Const::one()],
        vec![ctx.pi_i()],
        vec![pi.clone()],
        vec![Const::one(), pi.clone()],
        vec![&Const::one() + &pi, pi.clone()],
        vec![Const::one(), Const::i()],
        vec![ctx.pi_i(), Const::one()],
    ];
    let (mut identity_bad, mut resolved, mut multiset_bad) = (0, 0, 0);
    for _ in 0..200 {
        let basis = &bases[rng.gen_range(0..bases.len())];
        let d = basis.len();
        let nf = rng.gen_range(2..=4);
        let mut factors: Vec<ExpPoly> = Vec::new();
        let mut spreads: Vec<i64> = Vec::new();
        // total degree spread of the product stays within 6
        let mut budget = 6;
        while factors.len() < nf {
            if !factors.is_empty() && rng.gen_bool(0.15) {
                let k = rng.gen_range(0..factors.len());
                if spreads[k] <= budget {
                    budget -= spreads[k];
                    factors.push(factors[k].clone());
                    spreads.push(spreads[k]);
                }
                continue;
            }
            let (terms, vs): (Vec<(Const, Const)>, Vec<Vec<i64>>) = if d == 1 || rng.gen_bool(0.5) {
                let u = primitive_vector(&mut rng, d);
                let zero = vec![0; d];
                let a = gauss_nonzero(&mut rng, 3);
                (vec![laurent_term(basis, Const::one(), &zero), laurent_term(basis, -&a, &u)], vec![zero, u])
            } else {
                let mut vs = vec![vec![0, 0], vec![rng.gen_range(1..=2), rng.gen_range(-1..=1)], vec![rng.gen_range(-1..=1), rng.gen_range(1..=2)]];
                if vs[1][0] * vs[2][1] == vs[1][1] * vs[2][0] {
                    continue;
                }
                if rng.gen_bool(0.4) {
                    vs.push(vec![rng.gen_range(0..=2), rng.gen_range(0..=2)]);
                }
                let terms = vs.iter().map(|v| laurent_term(basis, gauss_nonzero(&mut rng, 3), v)).collect();
                (terms, vs)
            };
            let s = spread(&vs, d);
            if s > budget {
                if factors.len() >= 2 {
                    break;
                }
                continue;
            }
            let f = poly(terms);
            if f.len() < 2 {
                continue;
            }
            budget -= s;
            factors.push(f);
            spreads.push(s);
        }
        let unit = ExpPoly::term(gauss_nonzero(&mut rng, 2), combo(basis, &(0..d).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>()));
        let f = &unit * &product(&factors);
        let Ok(r) = ritt_factor(&f, 6, 6) else {
            identity_bad += 1;
            continue;
        };
        let mut rebuilt = r.unit.to_exppoly();
        for s in &r.simple {
            rebuilt = &rebuilt * &s.factor.pow(s.mult as u32);
        }
        for (g, k) in &r.irreducible {
            rebuilt = &rebuilt * &g.pow(*k as u32);
        }
        rebuilt = &rebuilt * &r.residual;
        if rebuilt != f || r.expand().ok().as_ref() != Some(&f) {
            identity_bad += 1;
            continue;
        }
        if r.has_residual() {
            continue;
        }
        resolved += 1;
        let mut want: Vec<String> = factors.iter().map(|g| canonical_show(g, &ctx)).collect();
        let mut got: Vec<String> = Vec::new();
        for s in &r.simple {
            got.extend(std::iter::repeat(canonical_show(&s.factor, &ctx)).take(s.mult));
        }
        for (g, k) in &r.irreducible {
            got.extend(std::iter::repeat(canonical_show(g, &ctx)).take(*k));
        }
        want.sort();
        got.sort();
        if want != got {
            multiset_bad += 1;
        }
    }
    let pass = identity_bad == 0 && multiset_bad == 0 && resolved >= 190;
    outcome(pass, format!("identity failures {identity_bad}/200, resolved {resolved}/200, multiset mismatches {multiset_bad}"))
}

// ---------------------------------------------------------------------------

fn divisibility() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let pi = ctx.pi();
    let coefs = [Const::one(), t.clone(), &Const::one() + &t];
    let exps = [Const::one(), pi.clone(), Const::ratio(1, 2), Const::i()];
    let (mut missed, mut bad_product, mut bad_support) = (0, 0, 0);
    for _ in 0..500 {
        let g = random_poly(&mut rng, &coefs, &exps, 1, 3);
        let q = random_poly(&mut rng, &coefs, &exps, 1, 3);
        if g.is_zero() || q.is_zero() {
            continue;
        }
        let f = &g * &q;
        match divides(&g, &f, 6) {
            Ok(Some(q2)) => {
                if &g * &q2 != f {
                    bad_product += 1;
                }
                // containment holds once units pin a term of each at exponent 0
                let fe = f.canonical_associate().2.exponents();
                let mut all = fe.clone();
                all.extend(g.canonical_associate().2.exponents());
                if q_rank(&all) != q_rank(&fe) || support_compatible(&g, &f) != Ok(true) {
                    bad_support += 1;
                }
            }
            _ => missed += 1,
        }
    }
    // fractional exponents in the quotient need a refined lattice
    let g = poly([(Const::one(), Const::zero()), (-&Const::one(), Const::one())]);
    let mut planted_bad = 0;
    for k in 2..=6 {
        let frac = Const::ratio(1, k);
        let q = poly([
            (Const::one(), Const::zero()),
            (gauss_nonzero(&mut rng, 3), frac.clone()),
            (t.clone(), &pi * &frac),
        ]);
        let f = &g * &q;
        match divides(&g, &f, 2) {
            Ok(Some(q2)) if q2 == q => {}
            _ => planted_bad += 1,
        }
        // 1 - e^(z/k) is a proper divisor of g, not a multiple
        let h = poly([(Const::one(), Const::zero()), (-&Const::one(), frac)]);
        if divides(&g, &h, 2) != Ok(None) || divides(&h, &g, 2).ok().flatten().map(|q| &q * &h) != Some(g.clone()) {
            planted_bad += 1;
        }
    }
    let pass = missed == 0 && bad_product == 0 && bad_support == 0 && planted_bad == 0;
    outcome(pass, format!("500 pairs: {missed} missed, {bad_product} bad products, {bad_support} support violations; planted fractional failures {planted_bad}/10"))
}

// ---------------------------------------------------------------------------

fn sine_witness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let pi = ctx.pi();
    let two_pi_i = ctx.two_pi_i();
    let coefs = [Const::one(), t.clone(), &t * &t];
    let exps = [Const::one(), pi.clone(), t.clone(), ctx.pi_i(), Const::ratio(1, 3)];
    let sine = ExpPoly::sin_pi(&ctx);
    let (mut n, mut bad) = (0, 0);
    while n < 100 {
        let pairs = rng.gen_range(1..=3);
        let f = (0..pairs).fold(ExpPoly::zero(), |acc, _| {
            let c = &coefs[rng.gen_range(0..coefs.len())] * &gauss_nonzero(&mut rng, 3);
            let mu = &exps[rng.gen_range(0..exps.len())] * &rational(&mut rng, 3, 2);
            let shift = &two_pi_i * &Const::from_int([-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]);
            &acc + &poly([(c.clone(), mu.clone()), (-&c, &mu + &shift)])
        });
        if f.is_zero() {
            continue;
        }
        n += 1;
        match sine_divisor_witness(&f, &ctx) {
            Ok(q) if &sine * &q == f => {}
            _ => bad += 1,
        }
    }
    outcome(bad == 0, format!("{bad}/100 failed"))
}

// ---------------------------------------------------------------------------

type Gi = (i64, i64);

fn gi_mul(a: Gi, b: Gi) -> Gi {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

/// Laurent polynomial in `e^(2 pi i z / n)`; each exponent carries Q(i)
/// coefficients of `1` and of the generator `t`.
#[derive(Clone)]
struct Cyclic {
    n: i64,
    terms: BTreeMap<i64, [Gi; 2]>,
}

impl Cyclic {
    fn mul_scalar_poly(&self, o: &BTreeMap<i64, Gi>) -> Cyclic {
        let mut terms: BTreeMap<i64, [Gi; 2]> = BTreeMap::new();
        for (&k, c) in &self.terms {
            for (&j, &a) in o {
                let e = terms.entry(k + j).or_insert([(0, 0); 2]);
                for s in 0..2 {
                    let p = gi_mul(c[s], a);
                    e[s] = (e[s].0 + p.0, e[s].1 + p.1);
                }
            }
        }
        terms.retain(|_, c| c.iter().any(|&x| x != (0, 0)));
        Cyclic { n: self.n, terms }
    }

    fn to_poly(&self, ctx: &Context, t: &Const) -> ExpPoly {
        let gi = |c: Gi| &Const::from_int(c.0) + &(&Const::i() * &Const::from_int(c.1));
        poly(self.terms.iter().map(|(&k, c)| {
            (&gi(c[0]) + &(&gi(c[1]) * t), &ctx.two_pi_i() * &Const::ratio(k, self.n))
        }))
    }
}

fn poly_rem(mut a: Vec<i128>, m: &[i128]) -> Vec<i128> {
    // m monic
    let dm = m.len() - 1;
    while a.len() > dm {
        let c = a.pop().unwrap();
        if c != 0 {
            let off = a.len() - dm;
            for (j, &mj) in m[..dm].iter().enumerate() {
                a[off + j] -= c * mj;
            }
        }
    }
    a
}

fn poly_div_exact(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i128; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] / b[db];
        q[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    assert!(r.iter().all(|&x| x == 0));
    q
}

/// Integer coefficients of the n-th cyclotomic polynomial, low degree first.
fn phi(n: i64) -> Vec<i128> {
    let mut p = vec![0i128; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            p = poly_div_exact(&p, &phi(d));
        }
    }
    p
}

/// Exact test of `f(m) = 0` in Z[x]/Phi_M with `M = lcm(n, 4)`, `x = e^(2 pi i / M)`.
fn vanishes_exactly(f: &Cyclic, m: i64, cyclo: &[i128]) -> bool {
    let big = f.n.lcm(&4);
    let scale = big / f.n;
    (0..2).all(|s| {
        let mut acc = vec![0i128; big as usize];
        for (&k, c) in &f.terms {
            let e = (scale * k * m).rem_euclid(big) as usize;
            acc[e] += c[s].0 as i128;
            acc[(e + big as usize / 4) % big as usize] += c[s].1 as i128;
        }
        poly_rem(acc, cyclo).iter().all(|&x| x == 0)
    })
}

fn random_cyclic<R: Rng>(rng: &mut R) -> Cyclic {
    let n = rng.gen_range(1..=12);
    let mut f = Cyclic { n, terms: BTreeMap::new() };
    for _ in 0..rng.gen_range(1..=3) {
        let k = rng.gen_range(-n..=n);
        let with_t = rng.gen_bool(0.3);
        let e = f.terms.entry(k).or_insert([(0, 0); 2]);
        e[usize::from(with_t)] = (rng.gen_range(-3..=3), rng.gen_range(-2..=2));
    }
    // planted factors: 1 - w e^(2 pi i a z / n) with w a fourth root of unity, or a full root-of-unity sum
    for _ in 0..rng.gen_range(0..=2) {
        let mut fac = BTreeMap::new();
        if rng.gen_bool(0.5) {
            let w = [(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
            fac.insert(0, (1, 0));
            fac.insert(rng.gen_range(1..=n), (-w.0, -w.1));
        } else {
            let divisors: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
            let m = divisors[rng.gen_range(0..divisors.len())];
            for j in 0..m {
                fac.insert(j * (n / m), (1, 0));
            }
        }
        f = f.mul_scalar_poly(&fac);
    }
    f.terms.retain(|_, c| c.iter().any(|&x| x != (0, 0)));
    f
}

fn integer_zero_patterns() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let (mut cases, mut bad_certified, mut missed, mut float_missed, mut sporadic_flags) = (0, 0, 0, 0, 0);
    while cases < 100 {
        let f = random_cyclic(&mut rng);
        if f.terms.is_empty() {
            continue;
        }
        cases += 1;
        let p = f.to_poly(&ctx, &t);
        let cyclo = phi(f.n.lcm(&4));
        let Ok(pat) = integer_zero_pattern(&p, &ctx) else {
            bad_certified += 1;
            continue;
        };
        let sporadic_possible = pat.note.contains("sporadic");
        sporadic_flags += usize::from(sporadic_possible);
        for r in &pat.residues {
            let delta = pat.delta as i64;
            if !(-2..3).all(|k| vanishes_exactly(&f, r.d as i64 + k * delta, &cyclo)) {
                bad_certified += 1;
            }
        }
        let mut ev = Evaluator::new(&ctx, 99);
        let scale: f64 = p.terms().map(|(_, c)| ev.constant(c).norm()).sum();
        for m in -20i64..=20 {
            let exact = vanishes_exactly(&f, m, &cyclo);
            let float = ev.exppoly(&p, Complex64::new(m as f64, 0.0)).norm() < 1e-6 * scale;
            if !pat.contains(m) && !sporadic_possible {
                missed += usize::from(exact);
                float_missed += usize::from(float);
            }
        }
    }
    let pass = bad_certified == 0 && missed == 0 && float_missed == 0 && sporadic_flags <= 1;
    outcome(
        pass,
        format!("100 instances: {bad_certified} unsound residues, {missed} exact and {float_missed} float zeros off the pattern, {sporadic_flags} sporadic flags"),
    )
}

// ---------------------------------------------------------------------------

fn simple_product<R: Rng>(rng: &mut R, mu: &Const, values: &[(Const, i64)]) -> ExpPoly {
    let _ = rng;
    product(&values.iter().map(|(a, k)| poly([(Const::one(), Const::zero()), (-a, mu * &Const::from_int(*k))])).collect::<Vec<_>>())
}

fn common_divisor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let pi = ctx.pi();
    let lines = [Const::one(), pi.clone(), Const::ratio(1, 2), ctx.two_pi_i(), t.clone()];
    let coefs = [Const::one(), Const::i()];
    let mut shared_bad = 0;
    for _ in 0..50 {
        let mu = &lines[rng.gen_range(0..lines.len())];
        let vals: Vec<(Const, i64)> = (0..rng.gen_range(1..=3)).map(|_| (gauss_nonzero(&mut rng, 3), 1)).collect();
        let f = simple_product(&mut rng, mu, &vals);
        let h = random_poly(&mut rng, &coefs, &[Const::one(), pi.clone(), mu.clone()], 1, 3);
        if h.is_zero() {
            shared_bad += 1;
            continue;
        }
        let g = &f * &h;
        let ok = match common_divisor_case1(&f, &g, 6, 6) {
            Ok(Some(d)) => {
                !d.is_unit()
                    && divides(&d, &f, 6).ok().flatten().is_some()
                    && divides(&d, &g, 6).ok().flatten().is_some()
                    && divides(&f, &d, 6).ok().flatten().is_some()
            }
            _ => false,
        };
        shared_bad += usize::from(!ok);
    }
    let mut disjoint_bad = 0;
    let mut n = 0;
    while n < 50 {
        let mu = &lines[rng.gen_range(0..lines.len())];
        let a: Vec<(Const, i64)> = (0..rng.gen_range(1..=2)).map(|_| (gauss_nonzero(&mut rng, 3), 1)).collect();
        let b: Vec<(Const, i64)> = (0..rng.gen_range(1..=2)).map(|_| (gauss_nonzero(&mut rng, 3), rng.gen_range(1..=2))).collect();
        // zeros of 1 - b e^(k mu z) meet those of 1 - a e^(mu z) only if b = a^k
        if b.iter().any(|(bv, k)| a.iter().any(|(av, _)| av.pow(*k).unwrap() == *bv)) {
            continue;
        }
        n += 1;
        let f = simple_product(&mut rng, mu, &a);
        let g = simple_product(&mut rng, mu, &b);
        disjoint_bad += usize::from(common_divisor_case1(&f, &g, 6, 6) != Ok(None));
    }
    outcome(shared_bad == 0 && disjoint_bad == 0, format!("shared {shared_bad}/50 failed, disjoint {disjoint_bad}/50 failed"))
}

// ---------------------------------------------------------------------------

/// Entry `lambda_i omega_i = c t^k`, tracked independently as `(c, k)`.
fn brute_force_minimal(entries: &[(Gi, i64)]) -> Vec<Vec<usize>> {
    let n = entries.len();
    let full = (1u32 << n) - 1;
    let mut zero: Vec<u32> = Vec::new();
    for mask in 1..full {
        let mut sums: BTreeMap<i64, Gi> = BTreeMap::new();
        for (i, &(c, k)) in entries.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let s = sums.entry(k).or_insert((0, 0));
                *s = (s.0 + c.0, s.1 + c.1);
            }
        }
        if sums.values().all(|&s| s == (0, 0)) {
            zero.push(mask);
        }
    }
    let mut out: Vec<Vec<usize>> = zero
        .iter()
        .filter(|&&m| !zero.iter().any(|&o| o != m && o & m == o))
        .map(|&m| (0..n).filter(|&i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

fn library_subsums(lambda: &[Gi], omega: &[(Gi, i64)], t: &Const) -> Vec<Vec<usize>> {
    let gi = |c: Gi| &Const::from_int(c.0) + &(&Const::i() * &Const::from_int(c.1));
    let l: Vec<Const> = lambda.iter().map(|&c| gi(c)).collect();
    let w = UnitVector { entries: omega.iter().map(|&(u, k)| &gi(u) * &t.pow(k).unwrap()).collect(), is_solution: false };
    vanishing_subsums(&l, &w).expect("within enumeration limit")
}

fn subsum_oracle() -> Outcome {
    let mut ctx = Context::new();
    let t = ctx.declare("t");
    let lambdas: [Gi; 3] = [(1, 0), (-1, 0), (0, 1)];
    let omegas: [(Gi, i64); 2] = [((1, 0), 0), ((1, 0), 1)];
    let (mut exhaustive, mut bad) = (0, 0);
    for n in 1..=6usize {
        let choices = 6usize.pow(n as u32);
        for code in 0..choices {
            let mut c = code;
            let (mut lambda, mut omega) = (Vec::new(), Vec::new());
            for _ in 0..n {
                lambda.push(lambdas[c % 3]);
                omega.push(omegas[(c / 3) % 2]);
                c /= 6;
            }
            let entries: Vec<(Gi, i64)> = lambda.iter().zip(&omega).map(|(&l, &(u, k))| (gi_mul(l, u), k)).collect();
            exhaustive += 1;
            bad += usize::from(library_subsums(&lambda, &omega, &t) != brute_force_minimal(&entries));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut random_bad = 0;
    for _ in 0..500 {
        let n = rng.gen_range(7..=12);
        let mut lambda: Vec<Gi> = (0..n).map(|_| (rng.gen_range(-2..=2), rng.gen_range(-1..=1))).collect();
        for l in lambda.iter_mut() {
            if *l == (0, 0) {
                *l = (1, 0);
            }
        }
        let omega: Vec<(Gi, i64)> =
            (0..n).map(|_| ([(1, 0), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)], rng.gen_range(-1..=1))).collect();
        let entries: Vec<(Gi, i64)> = lambda.iter().zip(&omega).map(|(&l, &(u, k))| (gi_mul(l, u), k)).collect();
        random_bad += usize::from(library_subsums(&lambda, &omega, &t) != brute_force_minimal(&entries));
    }
    outcome(bad == 0 && random_bad == 0, format!("exhaustive {exhaustive} cases with {bad} mismatches; random 500 with {random_bad} mismatches"))
}

// ---------------------------------------------------------------------------

fn transcendence_audit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut generic, mut generic_bad, mut adversarial_bad) = (0, 0, 0);
    let mut case = 0;
    while generic < 200 {
        case += 1;
        let mut ctx = Context::new();
        let cg: Vec<Const> = (0..rng.gen_range(1..=3)).map(|k| ctx.declare(&format!("c{k}"))).collect();
        let eg: Vec<Const> = (0..rng.gen_range(1..=3)).map(|k| ctx.declare(&format!("m{k}"))).collect();
        let mut exps = eg.clone();
        exps.push(Const::one());
        let coefs: Vec<Const> = cg.iter().chain([&Const::one()]).cloned().collect();
        let f = random_poly(&mut rng, &coefs, &exps, 2, 4);
        let g = random_poly(&mut rng, &coefs, &exps, 2, 4);
        if f.is_zero() || g.is_zero() {
            continue;
        }
        let Ok(probe) = schanuel_audit(&f, &g, &[Const::one()]) else {
            generic_bad += 1;
            continue;
        };
        // points built only from generators the inputs carry, at most delta1 + delta2 of them
        let budget = probe.delta1 + probe.delta2;
        let mut used: Vec<Const> = Vec::new();
        for c in f.coefficients().iter().chain(&g.coefficients()).chain(&f.exponents()).chain(&g.exponents()) {
            for id in c.generators() {
                let c = ctx.gen(id);
                if !used.contains(&c) {
                    used.push(c);
                }
            }
        }
        if budget == 0 || used.is_empty() {
            continue;
        }
        let k = rng.gen_range(1..=budget);
        let points: Vec<Const> = (0..k)
            .map(|_| loop {
                let s = &used[rng.gen_range(0..used.len())] * &rational(&mut rng, 3, 2);
                let s = &s + &rational(&mut rng, 2, 2);
                if !s.is_zero() {
                    break s;
                }
            })
            .collect();
        generic += 1;
        match catch_unwind(AssertUnwindSafe(|| schanuel_audit(&f, &g, &points))) {
            Ok(Ok(r)) if r.all_pass() => {}
            _ => generic_bad += 1,
        }
        // dependent or oversized point sets must be reported, not crash
        let mut adversarial = points.clone();
        adversarial.push(&points[0] * &Const::from_int(2));
        adversarial.push(ctx.two_pi_i());
        adversarial.push(ctx.declare(&format!("fresh{case}")));
        match catch_unwind(AssertUnwindSafe(|| schanuel_audit(&f, &g, &adversarial))) {
            Ok(Ok(_)) => {}
            _ => adversarial_bad += 1,
        }
    }
    outcome(generic >= 200 && generic_bad == 0 && adversarial_bad == 0, format!("generic failures {generic_bad}/{generic}, adversarial crashes {adversarial_bad}/{case}"))
}

// ---------------------------------------------------------------------------

fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    for _ in 0..3 * n {
        let mut e: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        match rng.gen_range(0..3) {
            0 if i != j => e[i][j] = rng.gen_range(-3..=3),
            1 => e.swap(i, j),
            _ => e[i][i] = -1,
        }
        u = IntMatrix::from_i64(&e).mul(&u);
    }
    u
}

fn lattice_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut hnf_bad = 0;
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let bound = if rng.gen_bool(0.5) { 1_000_000 } else { 5 };
        let mut rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect();
        if r > 1 && rng.gen_bool(0.3) {
            // force a dependency
            let k = rng.gen_range(-3..=3);
            rows[r - 1] = rows[0].iter().zip(&rows[1 % r]).map(|(a, b)| a + k * b).collect();
        }
        let m = IntMatrix::from_i64(&rows);
        let h = hnf(&m);
        let (u, h2) = hnf_with_transform(&m);
        let uni = random_unimodular(&mut rng, r);
        let ok = hnf(&h) == h
            && hnf(&uni.mul(&m)) == h
            && u.mul(&m) == h2
            && int_rank(&m) == rational_rank(&rows)
            && h.rows() == rational_rank(&rows);
        hnf_bad += usize::from(!ok);
    }
    let mut dim_bad = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=6);
        let vecs: Vec<Vec<i64>> = (0..rng.gen_range(0..=6)).map(|_| (0..d).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let s = SubgroupCoset::subgroup(vecs.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect());
        let rank = if vecs.is_empty() { 0 } else { rational_rank(&vecs) };
        dim_bad += usize::from(subgroup_dim(&s, d) != Ok(d - rank) || s.rank(d) != rank);
    }
    let mut table_bad = 0;
    for w in 0..=6usize {
        for v in 0..=6usize {
            for c in 0..=6usize {
                let expected = w as i64 > 0i64.max(v as i64 - c as i64);
                table_bad += usize::from(is_anomalous(w, v, c) != expected);
            }
        }
    }
    outcome(
        hnf_bad == 0 && dim_bad == 0 && table_bad == 0,
        format!("hnf {hnf_bad}/500 failed, subgroup dimension {dim_bad}/200 failed, anomaly table {table_bad}/343 failed"),
    )
}

// ---------------------------------------------------------------------------

fn distinct_solutions() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut n, mut bad) = (0, 0);
    while n < 200 {
        // one context per instance: exponential atoms accumulate denominators within a context
        let mut ctx = Context::new();
        let t = ctx.declare("t");
        let pi = ctx.pi();
        let s = ctx.declare("s");
        let r = ctx.declare("r");
        let coefs = [Const::one(), t.clone()];
        let exps = [Const::one(), pi.clone(), t.clone(), Const::i()];
        let f = random_poly(&mut rng, &coefs, &exps, 2, 4);
        if f.is_zero() || f.is_simple() != Ok(false) {
            continue;
        }
        let mut pick = || -> Const {
            let base = [&s, &r][rng.gen_range(0..2)];
            &(base * &rational(&mut rng, 3, 2)) + &rational(&mut rng, 2, 3)
        };
        let (s1, s2) = (pick(), pick());
        if s1 == s2 || s1.is_zero() || s2.is_zero() {
            continue;
        }
        n += 1;
        bad += usize::from(distinct_solution_check(&f, &s1, &s2, &mut ctx) != Ok(true));
    }
    outcome(bad == 0, format!("{bad}/200 failed"))
}
