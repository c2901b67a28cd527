//! Factorization in Z[x] (Cantor-Zassenhaus mod p, Hensel lifting, recombination)
//! and its extension to Q(i)[x] by Trager's norm method.

use crate::gauss::GaussRat;
use crate::poly::modp;
use crate::poly::upoly::UPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;

pub type ZPoly = Vec<BigInt>;

fn ztrim(mut a: ZPoly) -> ZPoly {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn zdeg(a: &ZPoly) -> usize {
    a.len().saturating_sub(1)
}

fn zmul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ztrim(out)
}

fn zmod(a: &ZPoly, m: &BigInt) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

fn zsub(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn zadd(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let n = a.len().max(b.len());
    let z = BigInt::zero();
    ztrim((0..n).map(|k| a.get(k).unwrap_or(&z) + b.get(k).unwrap_or(&z)).collect())
}

/// Division by a monic polynomial modulo `m`.
fn zdivrem_monic(a: &ZPoly, b: &ZPoly, m: &BigInt) -> (ZPoly, ZPoly) {
    let db = zdeg(b);
    debug_assert!(b.last().is_some_and(|c| c.is_one()));
    if a.len() < b.len() {
        return (Vec::new(), zmod(a, m));
    }
    let mut r = zmod(a, m);
    r.resize(a.len(), BigInt::zero());
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] = (&r[k + j] - &c * y).mod_floor(m);
        }
        q[k] = c;
    }
    r.truncate(db);
    (ztrim(q), zmod(&r, m))
}

/// Exact division over Z.
fn zdiv_exact(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let db = zdeg(b);
    let lb = b.last().unwrap();
    let mut r = a.clone();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        if c.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[k + j] -= &c * y;
        }
        q[k] = c;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(ztrim(q))
}

fn content(a: &ZPoly) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(a: &ZPoly) -> ZPoly {
    let c = content(a);
    if c.is_zero() {
        return Vec::new();
    }
    let sign = if a.last().unwrap().is_negative() { -BigInt::one() } else { BigInt::one() };
    a.iter().map(|x| x / &c * &sign).collect()
}

fn symmetric(a: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m >> 1;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_modp(a: &ZPoly, p: u64) -> modp::Fp {
    let pb = BigInt::from(p);
    modp::trim(a.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn from_modp(a: &modp::Fp) -> ZPoly {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Lifts `f = g*h mod p` (with `g`, `h` monic, `f` monic mod the target) to modulus `target`.
fn hensel_pair(f: &ZPoly, g: &modp::Fp, h: &modp::Fp, p: u64, target: &BigInt) -> (ZPoly, ZPoly) {
    let (_, s, t) = modp::ext_gcd(g, h, p);
    let mut g = from_modp(g);
    let mut h = from_modp(h);
    let mut s = from_modp(&s);
    let mut t = from_modp(&t);
    let mut m = BigInt::from(p);
    while &m < target {
        let m2 = {
            let sq = &m * &m;
            if &sq >= target {
                target.clone()
            } else {
                sq
            }
        };
        let e = zmod(&zsub(f, &zmul(&g, &h)), &m2);
        let (q, r) = zdivrem_monic(&zmul(&s, &e), &h, &m2);
        let g2 = zmod(&zadd(&zadd(&g, &zmul(&t, &e)), &zmul(&q, &g)), &m2);
        let h2 = zmod(&zadd(&h, &r), &m2);
        let b = zmod(&zsub(&zadd(&zmul(&s, &g2), &zmul(&t, &h2)), &vec![BigInt::one()]), &m2);
        let (c, d) = zdivrem_monic(&zmul(&s, &b), &h2, &m2);
        s = zmod(&zsub(&s, &d), &m2);
        t = zmod(&zsub(&zsub(&t, &zmul(&t, &b)), &zmul(&c, &g2)), &m2);
        g = g2;
        h = h2;
        m = m2;
    }
    (g, h)
}

/// Irreducible factors of a primitive square-free polynomial of positive degree.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![primitive(f)];
    }
    let lc = f.last().unwrap().clone();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
    // pick the prime giving the fewest modular factors among a few candidates
    let mut best: Option<(u64, Vec<modp::Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = to_modp(f, p);
        if modp::deg(&modp::gcd(&fp, &modp::derivative(&fp, p), p)) > 0 {
            continue;
        }
        let fs = modp::factor_squarefree(&modp::monic(&fp, p), p, &mut rng);
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
        tried += 1;
        if tried >= 5 || best.as_ref().is_some_and(|(_, b)| b.len() == 1) {
            break;
        }
    }
    let (p, modular) = best.expect("some prime is good");
    if modular.len() == 1 {
        return vec![primitive(f)];
    }
    // Mignotte-style bound on factor coefficients, times the leading coefficient
    let maxc = f.iter().map(|c| c.abs()).max().unwrap();
    let bound: BigInt = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * BigInt::from(n + 1) * maxc + 1;
    let pb = BigInt::from(p);
    let mut target = pb.clone();
    while target < bound {
        target *= &pb;
    }
    let lc_inv = lc.modinv(&target).expect("lc invertible mod p^k");
    let mut current = zmod(&f.iter().map(|c| c * &lc_inv).collect(), &target);
    let mut lifted: Vec<ZPoly> = Vec::new();
    for i in 0..modular.len() - 1 {
        let rest = modular[i + 1..].iter().fold(vec![1u64], |acc, g| modp::mul(&acc, g, p));
        let (g, h) = hensel_pair(&current, &modular[i], &rest, p, &target);
        lifted.push(g);
        current = h;
    }
    lifted.push(current);

    let mut out = Vec::new();
    let mut f = f.clone();
    let mut s = 1;
    while 2 * s <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), s) {
            let lcf = f.last().unwrap().clone();
            let cand = subset.iter().fold(vec![lcf.clone()], |acc, &i| zmod(&zmul(&acc, &lifted[i]), &target));
            let cand = primitive(&symmetric(&cand, &target));
            if let Some(q) = zdiv_exact(&f, &cand) {
                out.push(cand);
                f = q;
                let mut k = 0;
                lifted.retain(|_| {
                    let keep = !subset.contains(&k);
                    k += 1;
                    keep
                });
                found = true;
                break;
            }
        }
        if !found {
            s += 1;
        }
    }
    if zdeg(&f) > 0 {
        out.push(primitive(&f));
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn q_to_z(f: &UPoly<BigRational>) -> ZPoly {
    let l = f.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    primitive(&f.coeffs().iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect())
}

fn z_to_q(f: &ZPoly) -> UPoly<BigRational> {
    UPoly::new(f.iter().map(|c| BigRational::from_integer(c.clone())).collect())
}

/// Factors over Q into primitive integer polynomials with multiplicities.
/// Constant polynomials give an empty list.
pub fn factor_rational(f: &UPoly<BigRational>) -> Vec<(ZPoly, usize)> {
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        for g in zassenhaus(&q_to_z(&part)) {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| (zdeg(&a.0), &a.0).cmp(&(zdeg(&b.0), &b.0)));
    out
}

fn conj_poly(f: &UPoly<GaussRat>) -> UPoly<GaussRat> {
    f.map(|c| c.conj())
}

/// Trager splitting of a square-free polynomial over Q(i) into monic irreducibles.
fn trager(f: &UPoly<GaussRat>) -> Vec<UPoly<GaussRat>> {
    let f = f.monic();
    if f.deg() <= 1 {
        return vec![f];
    }
    for s in 0i64.. {
        let shift = GaussRat::from_ints(0, -s);
        let fs = f.shift(&shift); // f(x - s*i)
        let norm = fs.mul(&conj_poly(&fs));
        let nq: UPoly<BigRational> = norm.map(|c| {
            debug_assert!(c.is_real());
            c.re.clone()
        });
        if !nq.is_squarefree() {
            continue;
        }
        let back = GaussRat::from_ints(0, s);
        let mut out = Vec::new();
        let mut rest = fs.clone();
        for (g, _) in factor_rational(&nq) {
            let gi = z_to_q(&g).map(|c| GaussRat::from_rat(c.clone()));
            let h = rest.gcd(&gi);
            if h.deg() > 0 {
                rest = rest.divrem(&h).0;
                out.push(h.shift(&back).monic());
            }
        }
        debug_assert!(rest.deg() == 0);
        return out;
    }
    unreachable!()
}

/// Factors a univariate polynomial over Q(i) into monic irreducibles with
/// multiplicities. The leading coefficient is returned separately.
pub fn factor_gauss(f: &UPoly<GaussRat>) -> (GaussRat, Vec<(UPoly<GaussRat>, usize)>) {
    let lc = f.lc();
    let mut out = Vec::new();
    for (part, mult) in f.squarefree_decomposition() {
        let real = part.coeffs().iter().all(|c| c.is_real());
        if real {
            let pq: UPoly<BigRational> = part.map(|c| c.re.clone());
            for (g, _) in factor_rational(&pq) {
                let gi = z_to_q(&g).map(|c| GaussRat::from_rat(c.clone()));
                for h in trager(&gi) {
                    out.push((h, mult));
                }
            }
        } else {
            for h in trager(&part) {
                out.push((h, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
    (lc, out)
}

/// Whether a nonconstant polynomial is irreducible over Q(i).
pub fn is_irreducible_gauss(f: &UPoly<GaussRat>) -> bool {
    let (_, fs) = factor_gauss(f);
    fs.len() == 1 && fs[0].1 == 1
}
