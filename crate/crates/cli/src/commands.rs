//! Verbs, dispatch and output formatting.

use crate::parser::{is_valid_name, parse_const, parse_exp_poly, ParseError, Symbols};
use clap::{Parser, Subcommand};
use expoly::lattice::{exponent_basis, hnf, int_rank, linear_relations};
use expoly::numeric::Evaluator;
use expoly::ritt::{divides, factor_simple, ritt_factor, support_compatible};
use expoly::unitcheck::schanuel_audit;
use expoly::zeros::{common_zeros_report, integer_zero_pattern};
use expoly::{Const, Context, Error, ExpPoly};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use std::fmt::Write as _;

#[derive(Parser, Debug)]
#[command(name = "expoly", version, about = "Exact factorization and zero analysis of exponential polynomials")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest prime index tried when refining exponent lattices.
    #[arg(long, global = true, default_value_t = 6)]
    pub qmax: u32,
    /// Maximum number of successive lattice refinements.
    #[arg(long, global = true, default_value_t = 6)]
    pub refine: u32,
    /// Declare a symbol; once any is declared, undeclared names are rejected.
    #[arg(long, global = true, value_name = "NAME")]
    pub declare: Vec<String>,
    /// Seed for numeric checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for parallel stages.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Unit, simple factors, irreducible factors and residual.
    Factor {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Whether G divides F, with the quotient.
    Divides {
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Factor a polynomial whose exponents lie on one line.
    Simple {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Q-span of the exponents.
    Support {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Zero pattern on the integers.
    IntZeros {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Common divisor of F and G when one of them is simple.
    CommonZeros {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
    /// Transcendence-degree inequalities for common zeros T.
    Audit {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Z-basis and integer relations of a list of exponents.
    Lattice {
        #[arg(required = true, allow_hyphen_values = true)]
        exponents: Vec<String>,
    },
    /// Compare F with its factorization at seeded random points.
    EvalCheck {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Domain { .. } => CliError::Domain(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

struct Session {
    ctx: Context,
    symbols: Symbols,
}

impl Session {
    fn new(declare: &[String]) -> Result<Self, CliError> {
        let mut ctx = Context::new();
        for name in declare {
            if !is_valid_name(name) {
                return Err(CliError::Usage(format!("invalid symbol name `{name}`")));
            }
            ctx.declare(name);
        }
        let symbols = if declare.is_empty() { Symbols::Auto } else { Symbols::Strict };
        Ok(Session { ctx, symbols })
    }

    fn poly(&mut self, text: &str) -> Result<ExpPoly, CliError> {
        Ok(parse_exp_poly(text, &mut self.ctx, self.symbols.clone())?)
    }

    fn constant(&mut self, text: &str) -> Result<Const, CliError> {
        Ok(parse_const(text, &mut self.ctx, self.symbols.clone())?)
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output")
}

fn show_complex(z: Complex64) -> String {
    format!("{:.12e}{:+.12e}i", z.re, z.im)
}

/// Runs one command and returns its standard output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let mut s = Session::new(&cli.declare)?;
    let mut out = String::new();
    match &cli.command {
        Command::Factor { f } => {
            let f = s.poly(f)?;
            let r = ritt_factor(&f, cli.qmax, cli.refine)?;
            let rep = r.report(&s.ctx);
            if cli.json {
                return Ok(to_json(&rep));
            }
            writeln!(out, "unit: {}", rep.unit).unwrap();
            for x in &rep.simple {
                writeln!(out, "simple [line {}]: {} ^{}", x.support_line.as_deref().unwrap_or("?"), x.factor, x.mult).unwrap();
            }
            for x in &rep.irreducible {
                writeln!(out, "irreducible: {} ^{}", x.factor, x.mult).unwrap();
            }
            writeln!(out, "residual: {}", rep.residual).unwrap();
        }
        Command::Divides { g, f } => {
            let g = s.poly(g)?;
            let f = s.poly(f)?;
            let compatible = support_compatible(&g, &f)?;
            let q = divides(&g, &f, cli.refine)?;
            let quotient = q.as_ref().map(|q| q.show(&s.ctx));
            if cli.json {
                return Ok(to_json(&json!({ "divides": q.is_some(), "quotient": quotient, "support_compatible": compatible })));
            }
            match quotient {
                Some(q) => writeln!(out, "divides: quotient {q}").unwrap(),
                None => writeln!(out, "does not divide").unwrap(),
            }
        }
        Command::Simple { f } => {
            let f = s.poly(f)?;
            let r = factor_simple(&f)?;
            let unit = r.unit.to_exppoly().show(&s.ctx);
            let factors: Vec<_> = r.factors.iter().map(|(g, k)| json!({ "factor": g.show(&s.ctx), "mult": k })).collect();
            if cli.json {
                return Ok(to_json(&json!({ "unit": unit, "factors": factors })));
            }
            writeln!(out, "unit: {unit}").unwrap();
            for (g, k) in &r.factors {
                writeln!(out, "factor: {} ^{k}", g.show(&s.ctx)).unwrap();
            }
        }
        Command::Support { f } => {
            let f = s.poly(f)?;
            let sp = f.support()?;
            let spanning: Vec<String> = sp.spanning_exponents.iter().map(|e| s.ctx.show(e)).collect();
            let coords: Vec<Vec<String>> = sp.coordinates.iter().map(|v| v.iter().map(|q| q.to_string()).collect()).collect();
            let exps: Vec<String> = f.ordered_terms().iter().map(|(e, _)| s.ctx.show(e)).collect();
            if cli.json {
                return Ok(to_json(&json!({
                    "q_dimension": sp.q_dimension,
                    "spanning_exponents": spanning,
                    "exponents": exps,
                    "coordinates": coords,
                })));
            }
            writeln!(out, "q-dimension: {}", sp.q_dimension).unwrap();
            writeln!(out, "spanning exponents: {}", spanning.join(", ")).unwrap();
            for (e, c) in exps.iter().zip(&coords) {
                writeln!(out, "  {e} -> [{}]", c.join(", ")).unwrap();
            }
        }
        Command::IntZeros { f } => {
            let f = s.poly(f)?;
            let p = integer_zero_pattern(&f, &s.ctx)?;
            if cli.json {
                return Ok(to_json(&p));
            }
            writeln!(out, "delta: {}", p.delta).unwrap();
            let rs: Vec<String> = p.residues.iter().map(|r| format!("{} (certified: {})", r.d, r.certified)).collect();
            writeln!(out, "residues: {}", if rs.is_empty() { "none".to_string() } else { rs.join(", ") }).unwrap();
            writeln!(out, "note: {}", p.note).unwrap();
        }
        Command::CommonZeros { f, g } => {
            let mut f = s.poly(f)?;
            let mut g = s.poly(g)?;
            if !f.is_zero() && !g.is_zero() && f.support()?.q_dimension != 1 && g.support()?.q_dimension == 1 {
                std::mem::swap(&mut f, &mut g);
            }
            let r = common_zeros_report(&f, &g, &mut s.ctx, cli.qmax, cli.refine)?;
            let verified = r.divisor.is_some();
            if cli.json {
                return Ok(to_json(&json!({
                    "divisor": r.divisor,
                    "verified": verified,
                    "factors": r.factors,
                    "progressions": r.progressions,
                })));
            }
            match &r.divisor {
                None => writeln!(out, "no common divisor; finitely many common zeros").unwrap(),
                Some(d) => {
                    writeln!(out, "common divisor: {d} (verified by exact division)").unwrap();
                    for p in &r.progressions {
                        writeln!(out, "zeros: {} + k*{}", p.offset, p.step).unwrap();
                    }
                }
            }
        }
        Command::Audit { f, g, points } => {
            let f = s.poly(f)?;
            let g = s.poly(g)?;
            let t = points.iter().map(|p| s.constant(p)).collect::<Result<Vec<_>, _>>()?;
            let r = schanuel_audit(&f, &g, &t)?;
            if cli.json {
                return Ok(to_json(&r));
            }
            writeln!(out, "D = {}, delta1 = {}, delta2 = {}, D(T) = {}", r.d, r.delta1, r.delta2, r.dt).unwrap();
            for i in &r.inequalities {
                writeln!(out, "{}: {} <= {} {}", i.name, i.lhs, i.rhs, if i.pass { "pass" } else { "FAIL" }).unwrap();
            }
        }
        Command::Lattice { exponents } => {
            let exps = exponents.iter().map(|e| s.constant(e)).collect::<Result<Vec<_>, _>>()?;
            let b = exponent_basis(&exps)?;
            let rel = linear_relations(&exps);
            let rank = if rel.rows() == 0 { 0 } else { int_rank(&hnf(&rel)) };
            let basis: Vec<String> = b.basis.iter().map(|c| s.ctx.show(c)).collect();
            let transition: Vec<Vec<String>> = b.transition.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
            let relations = rel.to_rows_i();
            if cli.json {
                return Ok(to_json(&json!({
                    "basis": basis,
                    "transition": transition,
                    "relations": relations,
                    "relation_rank": rank,
                })));
            }
            writeln!(out, "basis: {}", basis.join(", ")).unwrap();
            for (e, t) in exponents.iter().zip(&transition) {
                writeln!(out, "  {e} -> [{}]", t.join(", ")).unwrap();
            }
            for r in &relations {
                writeln!(out, "relation: [{}]", r.join(", ")).unwrap();
            }
        }
        Command::EvalCheck { f, points } => {
            let f = s.poly(f)?;
            let r = ritt_factor(&f, cli.qmax, cli.refine)?;
            let expanded = r.expand()?;
            let ctx = &s.ctx;
            let mut ev = Evaluator::new(ctx, cli.seed);
            let generators: Vec<_> = ctx
                .generators()
                .iter()
                .map(|g| {
                    let c = ctx.gen(g.id);
                    json!({ "name": ctx.show(&c), "value": show_complex(ev.constant(&c)) })
                })
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let mut rows = Vec::new();
            let mut max_err = 0f64;
            for _ in 0..*points {
                let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let a = ev.exppoly(&f, z);
                let mut b = ev.constant(&r.unit.coef) * (ev.constant(&r.unit.exponent) * z).exp();
                for sf in &r.simple {
                    b *= ev.exppoly(&sf.factor, z).powu(sf.mult as u32);
                }
                for (g, k) in &r.irreducible {
                    b *= ev.exppoly(g, z).powu(*k as u32);
                }
                b *= ev.exppoly(&r.residual, z);
                let err = (a - b).norm() / a.norm().max(1.0);
                max_err = max_err.max(err);
                rows.push(json!({ "z": show_complex(z), "value": show_complex(a), "factored": show_complex(b), "error": err }));
            }
            let pass = expanded == f && max_err < 1e-8;
            if cli.json {
                return Ok(to_json(&json!({
                    "seed": cli.seed,
                    "generators": generators,
                    "points": rows,
                    "max_error": max_err,
                    "exact_product": expanded == f,
                    "pass": pass,
                })));
            }
            writeln!(out, "seed: {}", cli.seed).unwrap();
            for g in &generators {
                writeln!(out, "  {} = {}", g["name"].as_str().unwrap(), g["value"].as_str().unwrap()).unwrap();
            }
            writeln!(out, "exact product: {}", expanded == f).unwrap();
            writeln!(out, "max relative error over {points} points: {max_err:.3e}").unwrap();
            writeln!(out, "{}", if pass { "pass" } else { "FAIL" }).unwrap();
        }
    }
    Ok(out)
}
