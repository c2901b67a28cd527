//! Floating-point oracle: every generator gets a concrete complex value,
//! consistent with its definition.

use crate::constants::{is_exp_var, Const, Context, GenId, GeneratorKind, Mono, SPoly};
use crate::expring::ExpPoly;
use crate::gauss::GaussRat;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Assigns seeded values in `[1, 2]` to declared symbols; `pi`, logs and
/// exponential generators take their defining values.
pub struct Evaluator<'a> {
    ctx: &'a Context,
    seed: u64,
    cache: HashMap<GenId, Complex64>,
}

pub fn gauss_to_complex(g: &GaussRat) -> Complex64 {
    Complex64::new(g.re.to_f64().unwrap_or(f64::NAN), g.im.to_f64().unwrap_or(f64::NAN))
}

impl<'a> Evaluator<'a> {
    pub fn new(ctx: &'a Context, seed: u64) -> Self {
        Evaluator { ctx, seed, cache: HashMap::new() }
    }

    fn declared(&self, id: GenId) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ (u64::from(id) << 17));
        rng.gen_range(1.0..2.0)
    }

    fn generator(&mut self, id: GenId) -> Complex64 {
        if let Some(&v) = self.cache.get(&id) {
            return v;
        }
        let kind = self.ctx.generator(id).expect("generator of this context").kind;
        let v = match kind {
            GeneratorKind::Pi => Complex64::new(std::f64::consts::PI, 0.0),
            GeneratorKind::Declared(_) => Complex64::new(self.declared(id), 0.0),
            GeneratorKind::Log(a) => self.constant(&a).ln(),
            // value of the atom itself; powers are taken in `monomial`
            GeneratorKind::ExpConst(atom) => self.constant(&atom),
        };
        self.cache.insert(id, v);
        v
    }

    fn monomial(&mut self, m: &Mono) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (v, e) in m.factors() {
            let e = e.to_f64().unwrap_or(f64::NAN);
            let g = self.generator(*v);
            acc *= if is_exp_var(*v) { (g * e).exp() } else { g.powf(e) };
        }
        acc
    }

    pub fn spoly(&mut self, p: &SPoly) -> Complex64 {
        p.terms().map(|(m, c)| gauss_to_complex(c) * self.monomial(m)).sum()
    }

    pub fn constant(&mut self, c: &Const) -> Complex64 {
        let n = self.spoly(c.numerator());
        if c.is_polynomial() {
            n
        } else {
            n / self.spoly(c.denominator())
        }
    }

    pub fn exppoly(&mut self, f: &ExpPoly, z: Complex64) -> Complex64 {
        let terms: Vec<(Complex64, Complex64)> = f.terms().map(|(e, c)| (self.constant(e), self.constant(c))).collect();
        terms.into_iter().map(|(e, c)| c * (e * z).exp()).sum()
    }
}
