//! Expression syntax for exponential polynomials.
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := ('-' | '+') unary | power
//! power   := atom ('^' unary)?
//! atom    := integer | 'i' | 'pi' | 'z' | name | '(' sum ')'
//!          | 'e' '^' atom | ('sin' | 'cos' | 'log') '(' sum ')'
//! ```
//!
//! Exponentials, sines and cosines take arguments affine in `z`; `log` and
//! division take constants. The printer of the library emits this syntax.

use expoly::{Const, Context, Error, ExpPoly};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use std::collections::BTreeSet;
use thiserror::Error as ThisError;

#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    SyntaxError { pos: usize, msg: String },
    #[error("undeclared symbol `{name}` at position {pos}")]
    UndeclaredSymbol { name: String, pos: usize },
    #[error("at position {pos}: {source}")]
    Domain { pos: usize, source: Error },
}

/// How unknown names are treated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Symbols {
    /// Unknown names become fresh transcendental constants.
    Auto,
    /// Only names already declared in the context are accepted.
    Strict,
}

const RESERVED: [&str; 7] = ["e", "i", "pi", "z", "sin", "cos", "log"];

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !RESERVED.contains(&name)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                k += 1;
            }
            let s: String = chars[start..k].iter().map(|(_, c)| c).collect();
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                k += 1;
            }
            out.push((Tok::Name(chars[start..k].iter().map(|(_, c)| c).collect()), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), pos));
            k += 1;
        } else {
            return Err(ParseError::SyntaxError { pos, msg: format!("unexpected character `{c}`") });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

/// Intermediate value: an exponential polynomial, or `a*z + b` inside
/// arguments.
#[derive(Clone, Debug)]
enum Val {
    Poly(ExpPoly),
    Affine(Const, Const),
}

impl Val {
    fn constant(&self) -> Option<Const> {
        match self {
            Val::Poly(p) if p.exponents().iter().all(|e| e.is_zero()) => Some(p.coeff(&Const::zero())),
            Val::Affine(a, b) if a.is_zero() => Some(b.clone()),
            _ => None,
        }
    }

    fn affine(&self) -> Option<(Const, Const)> {
        match self {
            Val::Affine(a, b) => Some((a.clone(), b.clone())),
            _ => self.constant().map(|c| (Const::zero(), c)),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    k: usize,
    ctx: &'a mut Context,
    symbols: Symbols,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> usize {
        self.toks[self.k].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn syntax<T>(&self, pos: usize, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError::SyntaxError { pos, msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.peek() == &Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            let pos = self.pos();
            self.syntax(pos, format!("expected `{c}`"))
        }
    }

    fn domain<T>(pos: usize, r: Result<T, Error>) -> PResult<T> {
        r.map_err(|source| ParseError::Domain { pos, source })
    }

    fn sum(&mut self) -> PResult<Val> {
        let mut acc = self.product()?;
        loop {
            let (op, pos) = match self.peek() {
                Tok::Sym(c @ ('+' | '-')) => (*c, self.pos()),
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.product()?;
            acc = self.add(acc, rhs, op == '-', pos)?;
        }
    }

    fn add(&self, a: Val, b: Val, negate: bool, pos: usize) -> PResult<Val> {
        let b = if negate { self.neg(b) } else { b };
        match (&a, &b) {
            (Val::Poly(p), Val::Poly(q)) => Ok(Val::Poly(Self::domain(pos, p.checked_add(q))?)),
            _ => match (a.affine(), b.affine()) {
                (Some((a1, b1)), Some((a2, b2))) => {
                    Ok(Val::Affine(Self::domain(pos, a1.checked_add(&a2))?, Self::domain(pos, b1.checked_add(&b2))?))
                }
                _ => self.syntax(pos, "`z` may only appear linearly inside e^( ), sin( ) or cos( )"),
            },
        }
    }

    fn neg(&self, v: Val) -> Val {
        match v {
            Val::Poly(p) => Val::Poly(-&p),
            Val::Affine(a, b) => Val::Affine(-a, -b),
        }
    }

    fn product(&mut self) -> PResult<Val> {
        let mut acc = self.unary()?;
        loop {
            let (op, pos) = match self.peek() {
                Tok::Sym(c @ ('*' | '/')) => (*c, self.pos()),
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.unary()?;
            acc = if op == '*' { self.mul(acc, rhs, pos)? } else { self.div(acc, rhs, pos)? };
        }
    }

    fn mul(&self, a: Val, b: Val, pos: usize) -> PResult<Val> {
        if let (Val::Poly(p), Val::Poly(q)) = (&a, &b) {
            return Ok(Val::Poly(Self::domain(pos, p.checked_mul(q))?));
        }
        let (c, other) = match (a.constant(), b.constant()) {
            (Some(c), _) => (c, b),
            (_, Some(c)) => (c, a),
            _ => return self.syntax(pos, "products of `z` terms are not exponential polynomials"),
        };
        let Some((x, y)) = other.affine() else {
            return self.syntax(pos, "`z` may only appear linearly inside e^( ), sin( ) or cos( )");
        };
        Ok(Val::Affine(Self::domain(pos, c.checked_mul(&x))?, Self::domain(pos, c.checked_mul(&y))?))
    }

    fn div(&self, a: Val, b: Val, pos: usize) -> PResult<Val> {
        let Some(d) = b.constant() else {
            return self.syntax(pos, "division by a non-constant");
        };
        let inv = Self::domain(pos, Const::one().checked_div(&d))?;
        self.mul(a, Val::Poly(ExpPoly::constant(inv)), pos)
    }

    fn unary(&mut self) -> PResult<Val> {
        match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                let v = self.unary()?;
                Ok(self.neg(v))
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Val> {
        if matches!(self.peek(), Tok::Name(n) if n == "e") && self.toks[self.k + 1].0 == Tok::Sym('^') {
            let pos = self.pos();
            self.bump();
            self.bump();
            let arg = self.atom()?;
            return self.exp(arg, pos);
        }
        let base = self.atom()?;
        if self.peek() != &Tok::Sym('^') {
            return Ok(base);
        }
        let pos = self.pos();
        self.bump();
        let e = self.unary()?;
        let n = e
            .constant()
            .and_then(|c| c.as_integer())
            .and_then(|n| n.to_i64())
            .ok_or(ParseError::SyntaxError { pos, msg: "exponent must be an integer".into() })?;
        match (&base, base.constant()) {
            (_, Some(c)) => Ok(Val::Poly(ExpPoly::constant(Self::domain(pos, c.pow(n))?))),
            (Val::Poly(p), None) if n >= 0 => Ok(Val::Poly(p.pow(n as u32))),
            _ => self.syntax(pos, "only constants take negative or affine powers"),
        }
    }

    fn exp(&mut self, arg: Val, pos: usize) -> PResult<Val> {
        let Some((a, b)) = arg.affine() else {
            return self.syntax(pos, "argument of e^ must be affine in z");
        };
        let c = Self::domain(pos, self.ctx.formal_exp(&b))?;
        Ok(Val::Poly(ExpPoly::term(c, a)))
    }

    fn trig(&mut self, name: &str, arg: Val, pos: usize) -> PResult<Val> {
        let Some((a, b)) = arg.affine() else {
            return self.syntax(pos, format!("argument of {name} must be affine in z"));
        };
        let i = Const::i();
        let plus = self.exp(Val::Affine(&i * &a, &i * &b), pos)?;
        let minus = self.exp(Val::Affine(-(&i * &a), -(&i * &b)), pos)?;
        let (Val::Poly(p), Val::Poly(m)) = (plus, minus) else { unreachable!() };
        let two = Const::from_int(2);
        Ok(Val::Poly(if name == "sin" {
            (&p - &m).scale(&Const::one().checked_div(&(&two * &i)).expect("nonzero"))
        } else {
            (&p + &m).scale(&Const::ratio(1, 2))
        }))
    }

    fn atom(&mut self) -> PResult<Val> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Val::Poly(ExpPoly::constant(Const::from_rational(n.into())))),
            Tok::Sym('(') => {
                let v = self.sum()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Name(n) => match n.as_str() {
                "i" => Ok(Val::Poly(ExpPoly::constant(Const::i()))),
                "pi" => Ok(Val::Poly(ExpPoly::constant(self.ctx.pi()))),
                "z" => Ok(Val::Affine(Const::one(), Const::zero())),
                "e" => Ok(Val::Poly(ExpPoly::constant(Self::domain(pos, self.ctx.formal_exp(&Const::one()))?))),
                "sin" | "cos" | "log" => {
                    self.expect('(')?;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    if n == "log" {
                        let Some(c) = arg.constant() else {
                            return self.syntax(pos, "argument of log must be constant");
                        };
                        let l = Self::domain(pos, self.ctx.log(&c))?;
                        return Ok(Val::Poly(ExpPoly::constant(l)));
                    }
                    self.trig(&n, arg, pos)
                }
                _ => {
                    let c = match (self.ctx.lookup(&n), &self.symbols) {
                        (Some(c), _) => c,
                        (None, Symbols::Auto) => self.ctx.declare(&n),
                        (None, Symbols::Strict) => return Err(ParseError::UndeclaredSymbol { name: n, pos }),
                    };
                    Ok(Val::Poly(ExpPoly::constant(c)))
                }
            },
            Tok::End => self.syntax(pos, "unexpected end of input"),
            Tok::Sym(c) => self.syntax(pos, format!("unexpected `{c}`")),
        }
    }
}

fn parse_val(text: &str, ctx: &mut Context, symbols: Symbols) -> PResult<Val> {
    let toks = lex(text)?;
    let mut p = Parser { toks, k: 0, ctx, symbols };
    let v = p.sum()?;
    if p.peek() != &Tok::End {
        let pos = p.pos();
        return p.syntax(pos, "unexpected trailing input");
    }
    Ok(v)
}

pub fn parse_exp_poly(text: &str, ctx: &mut Context, symbols: Symbols) -> PResult<ExpPoly> {
    match parse_val(text, ctx, symbols)? {
        Val::Poly(p) => Ok(p),
        Val::Affine(a, _) if a.is_zero() => unreachable!("constants are polynomials"),
        Val::Affine(..) => Err(ParseError::SyntaxError { pos: 0, msg: "`z` outside an exponential".into() }),
    }
}

pub fn parse_const(text: &str, ctx: &mut Context, symbols: Symbols) -> PResult<Const> {
    parse_val(text, ctx, symbols)?
        .constant()
        .ok_or(ParseError::SyntaxError { pos: 0, msg: "expected a constant".into() })
}

/// Names referenced in `text` that would be treated as symbols.
pub fn symbol_names(text: &str) -> BTreeSet<String> {
    lex(text)
        .map(|toks| {
            toks.into_iter()
                .filter_map(|(t, _)| match t {
                    Tok::Name(n) if is_valid_name(&n) => Some(n),
                    _ => None,
                })
                .collect()
        })
        .unwrap_or_default()
}
