//! Generator registry, logarithms and formal exponentials.

use super::coords::coordinates;
use super::spoly::{is_exp_var, GenId, Mono, SPoly, EXP_FLAG};
use super::{merge_ctx, Const};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gauss::GaussRat;
use crate::linalg;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU32, Ordering};

static NEXT_CONTEXT: AtomicU32 = AtomicU32::new(1);

/// Generator id of the built-in symbol `pi`.
pub const PI: GenId = 0;

pub const DEFAULT_DENOMINATOR_BOUND: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Pi,
    Declared(String),
    /// A fixed logarithm of the argument.
    Log(Const),
    /// `e^argument`; the argument is the atom this generator exponentiates.
    ExpConst(Const),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GenId,
    pub kind: GeneratorKind,
}

/// Registry of generators for one logical computation.
///
/// Atoms (arguments of exponential generators) stay Q-linearly independent
/// together with `2*pi*i`, so every formal exponential has exactly one
/// representation as a root of unity times a monomial in the atoms.
#[derive(Clone, Debug)]
pub struct Context {
    id: u32,
    ordinary: Vec<GeneratorKind>,
    atoms: Vec<Const>,
    names: BTreeMap<String, GenId>,
    logs: BTreeMap<Const, GenId>,
    denominator_bound: i64,
}

impl Default for Context {
    fn default() -> Self {
        Self::new()
    }
}

impl Context {
    pub fn new() -> Self {
        Self::with_denominator_bound(DEFAULT_DENOMINATOR_BOUND)
    }

    pub fn with_denominator_bound(bound: i64) -> Self {
        Context {
            id: NEXT_CONTEXT.fetch_add(1, Ordering::Relaxed),
            ordinary: vec![GeneratorKind::Pi],
            atoms: Vec::new(),
            names: BTreeMap::new(),
            logs: BTreeMap::new(),
            denominator_bound: bound,
        }
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn denominator_bound(&self) -> i64 {
        self.denominator_bound
    }

    pub fn check(&self, c: &Const) -> Result<()> {
        merge_ctx(self.id, c.context_id()).map(|_| ())
    }

    /// The generator with this id as a constant.
    pub fn gen(&self, id: GenId) -> Const {
        Const::poly(SPoly::term(Mono::var(id), GaussRat::one()), self.id)
    }

    pub fn generator(&self, id: GenId) -> Option<Generator> {
        let kind = if is_exp_var(id) {
            GeneratorKind::ExpConst(self.atoms.get((id & !EXP_FLAG) as usize)?.clone())
        } else {
            self.ordinary.get(id as usize)?.clone()
        };
        Some(Generator { id, kind })
    }

    pub fn generators(&self) -> Vec<Generator> {
        let ord = (0..self.ordinary.len() as u32).map(|id| self.generator(id).unwrap());
        let exp = (0..self.atoms.len() as u32).map(|k| self.generator(EXP_FLAG | k).unwrap());
        ord.chain(exp).collect()
    }

    pub fn pi(&self) -> Const {
        self.gen(PI)
    }

    pub fn two_pi_i(&self) -> Const {
        Const::poly(SPoly::term(Mono::var(PI), GaussRat::from_ints(0, 2)), self.id)
    }

    pub fn pi_i(&self) -> Const {
        Const::poly(SPoly::term(Mono::var(PI), GaussRat::from_ints(0, 1)), self.id)
    }

    /// Declares (or returns the existing) transcendental named `name`.
    pub fn declare(&mut self, name: &str) -> Const {
        if let Some(&id) = self.names.get(name) {
            return self.gen(id);
        }
        let id = self.ordinary.len() as GenId;
        self.ordinary.push(GeneratorKind::Declared(name.to_string()));
        self.names.insert(name.to_string(), id);
        self.gen(id)
    }

    pub fn lookup(&self, name: &str) -> Option<Const> {
        self.names.get(name).map(|&id| self.gen(id))
    }

    /// Logarithm with the fixed branch: `log 1 = 0`, logs of `i, -1, -i`
    /// are `pi*i/2, pi*i, -pi*i/2`; anything else is a fresh generator.
    pub fn log(&mut self, a: &Const) -> Result<Const> {
        self.check(a)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(k) = a.as_gauss().and_then(|g| g.unit_power_of_i()) {
            let q = [(0, 1), (1, 2), (1, 1), (-1, 2)][k as usize];
            return Ok(self.pi_i().scale_rational(&BigRational::new(q.0.into(), q.1.into())));
        }
        if let Some(&id) = self.logs.get(a) {
            return Ok(self.gen(id));
        }
        let id = self.ordinary.len() as GenId;
        self.ordinary.push(GeneratorKind::Log(a.clone()));
        self.logs.insert(a.clone(), id);
        Ok(self.gen(id))
    }

    fn log_argument(&self, m: &Mono) -> Option<&Const> {
        match m.factors() {
            [(v, e)] if !is_exp_var(*v) && e == &BigRational::from_integer(1.into()) => match &self.ordinary[*v as usize] {
                GeneratorKind::Log(a) => Some(a),
                _ => None,
            },
            _ => None,
        }
    }

    pub fn atoms(&self) -> &[Const] {
        &self.atoms
    }

    /// Canonical `e^c`.
    ///
    /// Integer multiples of a logarithm become powers of its argument. The
    /// rest is written as `q0*2*pi*i + sum q_j*atom_j`, registering a new
    /// atom when needed; `q0 mod 1` must be a multiple of 1/4.
    pub fn formal_exp(&mut self, c: &Const) -> Result<Const> {
        self.check(c)?;
        let mut result = Const::one();
        let mut rest = c.clone();
        if c.is_polynomial() {
            let mut rest_num = SPoly::zero();
            for (m, coef) in c.numerator().terms() {
                if let Some(arg) = self.log_argument(m) {
                    if coef.is_real() {
                        if !coef.re.is_integer() {
                            return Err(Error::FractionalLogPower);
                        }
                        let k = coef.re.to_integer().to_i64().ok_or(Error::FractionalLogPower)?;
                        result = &result * &arg.pow(k)?;
                        continue;
                    }
                }
                rest_num.add_term(m.clone(), coef.clone());
            }
            rest = Const::poly(rest_num, c.context_id());
        }
        if rest.is_zero() {
            return Ok(result);
        }
        let mut family = vec![self.two_pi_i()];
        family.extend(self.atoms.iter().cloned());
        family.push(rest.clone());
        let mut coords = coordinates(&family);
        let target = coords.pop().unwrap();
        let (q0, powers) = match linalg::solve(&coords, &target) {
            Some(x) => (x[0].clone(), x[1..].to_vec()),
            None => {
                // strip the period component, then register the remainder
                let mut q0 = BigRational::zero();
                let mut atom = rest.clone();
                if rest.is_polynomial() {
                    let im = rest.numerator().coeff(&Mono::var(super::PI)).im;
                    if !im.is_zero() {
                        q0 = im / BigRational::from_integer(2.into());
                        atom = &rest - &self.two_pi_i().scale_rational(&q0);
                    }
                }
                root_of_unity(&q0)?;
                let sign = if atom.leading_sign_negative() {
                    atom = -atom;
                    -1
                } else {
                    1
                };
                self.atoms.push(atom);
                let mut powers = vec![BigRational::zero(); self.atoms.len()];
                *powers.last_mut().unwrap() = BigRational::from_integer(sign.into());
                (q0, powers)
            }
        };
        let zeta = root_of_unity(&q0)?;
        let mut mono = Vec::new();
        for (k, q) in powers.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let d = q.denom();
            if d > &BigInt::from(self.denominator_bound) {
                return Err(Error::ExponentDenominatorBound {
                    denominator: d.to_i64().unwrap_or(i64::MAX),
                    bound: self.denominator_bound,
                });
            }
            mono.push((EXP_FLAG | k as u32, q.clone()));
        }
        let m = mono.into_iter().fold(Mono::one(), |acc, (v, q)| acc.mul(&Mono::power(v, q)));
        Ok(&result * &Const::exp_monomial(m, zeta, self.id))
    }

    /// `e^(q * atom_k)` for a registered atom.
    pub fn atom_power(&self, k: usize, q: BigRational) -> Const {
        Const::exp_monomial(Mono::power(EXP_FLAG | k as u32, q), GaussRat::one(), self.id)
    }

    /// Human-readable form that the expression parser reads back.
    pub fn show(&self, c: &Const) -> String {
        if c.is_polynomial() {
            return self.show_poly(c.numerator());
        }
        let num = self.show_poly(c.numerator());
        let num = if c.numerator().len() > 1 { format!("({num})") } else { num };
        let den = c.denominator();
        let bare = den.single_term().is_some_and(|(m, k)| k.is_one() && m.factors().len() == 1);
        let d = self.show_poly(den);
        if bare {
            format!("{num}/{d}")
        } else {
            format!("{num}/({d})")
        }
    }

    pub fn show_poly(&self, p: &SPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().enumerate() {
            let t = self.show_term(m, c);
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

    fn show_term(&self, m: &Mono, c: &GaussRat) -> String {
        if m.is_one() {
            return c.to_string();
        }
        let ms = self.show_mono(m);
        if c.is_one() {
            ms
        } else if c.neg().is_one() {
            format!("-{ms}")
        } else {
            format!("{c}*{ms}")
        }
    }

    fn show_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        let mut exp_arg = Const::zero();
        for (v, e) in m.factors() {
            if is_exp_var(*v) {
                let atom = &self.atoms[(v & !EXP_FLAG) as usize];
                exp_arg = &exp_arg + &atom.scale_rational(e);
                continue;
            }
            let name = match &self.ordinary[*v as usize] {
                GeneratorKind::Pi => "pi".to_string(),
                GeneratorKind::Declared(n) => n.clone(),
                GeneratorKind::Log(a) => format!("log({})", self.show(a)),
                GeneratorKind::ExpConst(_) => unreachable!("exponential generators are flagged"),
            };
            if e.is_one() {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        if !exp_arg.is_zero() {
            parts.push(format!("e^({})", self.show(&exp_arg)));
        }
        parts.join("*")
    }
}

/// `i^k` for `q0 = k/4 mod 1`.
fn root_of_unity(q0: &BigRational) -> Result<GaussRat> {
    let frac = q0 - q0.floor();
    let four = &frac * BigRational::from_integer(4.into());
    if !four.is_integer() {
        return Err(Error::UnsupportedRootOfUnity { order: frac.denom().to_u64().unwrap_or(u64::MAX) });
    }
    Ok(GaussRat::i().powi(four.to_integer().to_i64().unwrap()))
}
