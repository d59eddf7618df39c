//! Line-oriented text format for structure equations.
//!
//! ```text
//! # Iwasawa manifold
//! model iwasawa dim 3
//! holo p1 p2 p3
//! d p3 = -p1*p2
//! ```
//!
//! Statements:
//! - `model NAME dim N` (or `algebra NAME dim N`) must come first;
//! - `param NAME [= VALUE]` declares a parameter, optionally with a default;
//! - `holo A B ...` declares (1,0) odd generators, each followed in canonical order
//!   by its conjugate (`pK` pairs with `qK`, any other name `X` with `Xbar`);
//! - `gen NAME : (p,q) [odd | even trunc K] [conj OTHER | real]`;
//! - `d NAME = EXPR` splits the right side by bidegree into ∂ and ∂̄ parts,
//!   `del NAME = EXPR` and `dbar NAME = EXPR` assign one operator.
//!
//! A generator whose conjugate has an assignment but which has none itself gets
//! `∂(conj g) = conj(∂̄g)` and `∂̄(conj g) = conj(∂g)`.
//!
//! `EXPR` is a sum of products of factors; a factor is a number (`3`, `-2/5`,
//! `3i`, `i`), a parameter, a generator with optional `^K`, or a parenthesised
//! expression. Write complex coefficients in parentheses: `(1-2i)*p1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::algebra::{AlgebraError, Form, Generator, GradedAlgebra, Model, ModelSpec, Monomial, Parity};
use num_traits::Zero;

use crate::linalg::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DslErrorKind {
    Syntax(String),
    UnknownGenerator(String),
    UnknownParameter(String),
    MissingParameter(String),
    Duplicate(String),
    BidegreeMismatch { generator: String, term: (usize, usize) },
    Invalid(AlgebraError),
}

/// A parse or validation failure; `line` and `column` are 1-based, 0 when not tied to a position.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct DslError {
    pub line: usize,
    pub column: usize,
    pub kind: DslErrorKind,
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}, column {}: ", self.line, self.column)?;
        }
        match &self.kind {
            DslErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            DslErrorKind::UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            DslErrorKind::UnknownParameter(p) => write!(f, "unknown parameter `{p}`"),
            DslErrorKind::MissingParameter(p) => write!(f, "parameter `{p}` has no value"),
            DslErrorKind::Duplicate(m) => write!(f, "duplicate {m}"),
            DslErrorKind::BidegreeMismatch { generator, term } => {
                write!(
                    f,
                    "a term of bidegree {term:?} cannot appear in the differential of `{generator}`"
                )
            }
            DslErrorKind::Invalid(e) => write!(f, "invalid model: {e}"),
        }
    }
}

fn err(line: usize, column: usize, kind: DslErrorKind) -> DslError {
    DslError { line, column, kind }
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> DslError {
    err(line, column, DslErrorKind::Syntax(msg.into()))
}

/// Name given to the automatic conjugate of a holomorphic generator.
pub fn auto_conjugate_name(name: &str) -> String {
    match name.strip_prefix('p') {
        Some(k) if !k.is_empty() && k.bytes().all(|b| b.is_ascii_digit()) => format!("q{k}"),
        _ => format!("{name}bar"),
    }
}

// ---- lexer ----

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Scalar),
    Int(u32),
    Punct(char),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line_no: usize, text: &str) -> Result<Vec<Token>, DslError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..k].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let mut has_frac = false;
            if k + 1 < chars.len() && chars[k] == '/' && chars[k + 1].is_ascii_digit() {
                has_frac = true;
                k += 1;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
            }
            let mut imag = false;
            if k < chars.len()
                && chars[k] == 'i'
                && !(k + 1 < chars.len() && (chars[k + 1].is_ascii_alphanumeric() || chars[k + 1] == '_'))
            {
                imag = true;
                k += 1;
            }
            let lit: String = chars[start..k].iter().collect();
            if !has_frac && !imag {
                if let Ok(n) = lit.parse::<u32>() {
                    out.push(Token { tok: Tok::Int(n), col });
                    continue;
                }
            }
            let v: Scalar = lit
                .parse()
                .map_err(|_| syntax(line_no, col, format!("bad number `{lit}`")))?;
            out.push(Token { tok: Tok::Num(v), col });
        } else if "()=,:+-*^".contains(c) {
            out.push(Token {
                tok: Tok::Punct(c),
                col,
            });
            k += 1;
        } else {
            return Err(syntax(line_no, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        self.pos += 1;
        t
    }

    fn expect_punct(&mut self, c: char) -> Result<(), DslError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Punct(x)) if x == c => Ok(()),
            _ => Err(syntax(self.line, col, format!("expected `{c}`"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), DslError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Ident(s)) => Ok((s, col)),
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<u32, DslError> {
        let col = self.col();
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            _ => Err(syntax(self.line, col, format!("expected {what}"))),
        }
    }

    fn done(&self) -> Result<(), DslError> {
        if self.pos < self.toks.len() {
            return Err(syntax(self.line, self.col(), "unexpected trailing input"));
        }
        Ok(())
    }
}

// ---- expressions ----

struct Scope<'a> {
    alg: &'a GradedAlgebra,
    params: &'a BTreeMap<String, Scalar>,
}

impl Scope<'_> {
    fn expr(&self, c: &mut Cursor) -> Result<Form, DslError> {
        let n = self.alg.ngens();
        let mut acc = Form::zero(n);
        let mut sign = match c.peek() {
            Some(Tok::Punct('-')) => {
                c.next();
                -1
            }
            Some(Tok::Punct('+')) => {
                c.next();
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term(c)?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match c.peek() {
                Some(Tok::Punct('+')) => sign = 1,
                Some(Tok::Punct('-')) => sign = -1,
                _ => return Ok(acc),
            }
            c.next();
        }
    }

    fn term(&self, c: &mut Cursor) -> Result<Form, DslError> {
        let mut acc = self.factor(c)?;
        while let Some(Tok::Punct('*')) = c.peek() {
            c.next();
            let f = self.factor(c)?;
            acc = self.alg.wedge(&acc, &f).expect("forms share the algebra");
        }
        Ok(acc)
    }

    fn factor(&self, c: &mut Cursor) -> Result<Form, DslError> {
        let n = self.alg.ngens();
        let col = c.col();
        let base = match c.next() {
            Some(Tok::Num(v)) => Form::constant(n, v),
            Some(Tok::Int(v)) => Form::constant(n, Scalar::from_int(v as i64)),
            Some(Tok::Punct('(')) => {
                let e = self.expr(c)?;
                c.expect_punct(')')?;
                e
            }
            Some(Tok::Ident(name)) => {
                if let Some(g) = self.alg.index_of(&name) {
                    Form::generator(n, g)
                } else if let Some(v) = self.params.get(&name) {
                    Form::constant(n, v.clone())
                } else if name == "i" {
                    Form::constant(n, Scalar::i())
                } else {
                    return Err(err(c.line, col, DslErrorKind::UnknownGenerator(name)));
                }
            }
            _ => return Err(syntax(c.line, col, "expected a number, parameter, generator or `(`")),
        };
        if let Some(Tok::Punct('^')) = c.peek() {
            c.next();
            let k = c.int("an exponent")?;
            return Ok(self.alg.power(&base, k).expect("forms share the algebra"));
        }
        Ok(base)
    }
}

/// Evaluates a standalone expression against an existing algebra.
pub fn parse_expression(alg: &GradedAlgebra, params: &BTreeMap<String, Scalar>, expr: &str) -> Result<Form, DslError> {
    let toks = lex(1, expr)?;
    let mut c = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
        end_col: expr.chars().count() + 1,
    };
    let f = Scope { alg, params }.expr(&mut c)?;
    c.done()?;
    Ok(f)
}

// ---- statements ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Op {
    D,
    Del,
    Dbar,
}

struct GenDecl {
    name: String,
    bidegree: (usize, usize),
    parity: Option<Parity>,
    trunc: Option<u32>,
    conj: Option<Conj>,
    line: usize,
    col: usize,
}

#[derive(Clone, PartialEq, Eq)]
enum Conj {
    Named(String, usize),
    Real,
}

struct Assign {
    op: Op,
    target: String,
    target_col: usize,
    line: usize,
    tokens: Vec<Token>,
    end_col: usize,
}

/// Parses a model using the defaults declared in the source for every parameter.
pub fn parse(source: &str) -> Result<ModelSpec, DslError> {
    parse_with_params(source, &BTreeMap::new())
}

/// Parses and validates a model; `params` overrides declared defaults.
pub fn parse_with_params(source: &str, params: &BTreeMap<String, Scalar>) -> Result<ModelSpec, DslError> {
    let mut header: Option<(String, usize)> = None;
    let mut declared_params: Vec<(String, Option<Scalar>, usize, usize)> = Vec::new();
    let mut gens: Vec<GenDecl> = Vec::new();
    let mut assigns: Vec<Assign> = Vec::new();

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.trim_end_matches('\r');
        let text = text.split('#').next().unwrap_or("");
        if text.trim().is_empty() {
            continue;
        }
        let first_col = text.len() - text.trim_start().len() + 1;
        let words: Vec<&str> = text.split_whitespace().collect();
        let keyword = words[0];
        if header.is_none() && keyword != "model" && keyword != "algebra" {
            return Err(syntax(line, first_col, "file must start with `model NAME dim N`"));
        }
        match keyword {
            "model" | "algebra" => {
                if header.is_some() {
                    return Err(err(line, first_col, DslErrorKind::Duplicate("model header".into())));
                }
                if words.len() != 4 || words[2] != "dim" {
                    return Err(syntax(line, first_col, "expected `model NAME dim N`"));
                }
                let n: usize = words[3]
                    .parse()
                    .map_err(|_| syntax(line, first_col, format!("bad dimension `{}`", words[3])))?;
                header = Some((words[1].to_string(), n));
            }
            "param" => {
                let toks = lex(line, text)?;
                let mut c = Cursor {
                    toks: &toks,
                    pos: 1,
                    line,
                    end_col: text.len() + 1,
                };
                let (name, col) = c.ident("a parameter name")?;
                let default = if c.peek().is_some() {
                    c.expect_punct('=')?;
                    let empty = BTreeMap::new();
                    let alg = GradedAlgebra::new(Vec::new()).expect("empty algebra");
                    let value = Scope {
                        alg: &alg,
                        params: &empty,
                    }
                    .expr(&mut c)?;
                    c.done()?;
                    Some(value.coefficient(&Monomial::unit(0)))
                } else {
                    None
                };
                if declared_params.iter().any(|p| p.0 == name) {
                    return Err(err(line, col, DslErrorKind::Duplicate(format!("parameter `{name}`"))));
                }
                declared_params.push((name, default, line, col));
            }
            "holo" => {
                let toks = lex(line, text)?;
                let mut c = Cursor {
                    toks: &toks,
                    pos: 1,
                    line,
                    end_col: text.len() + 1,
                };
                let mut names = Vec::new();
                while c.peek().is_some() {
                    names.push(c.ident("a generator name")?);
                }
                if names.is_empty() {
                    return Err(syntax(line, first_col, "`holo` needs at least one name"));
                }
                for (name, col) in &names {
                    gens.push(GenDecl {
                        name: name.clone(),
                        bidegree: (1, 0),
                        parity: Some(Parity::Odd),
                        trunc: Some(2),
                        conj: Some(Conj::Named(auto_conjugate_name(name), *col)),
                        line,
                        col: *col,
                    });
                }
                for (name, col) in &names {
                    gens.push(GenDecl {
                        name: auto_conjugate_name(name),
                        bidegree: (0, 1),
                        parity: Some(Parity::Odd),
                        trunc: Some(2),
                        conj: Some(Conj::Named(name.clone(), *col)),
                        line,
                        col: *col,
                    });
                }
            }
            "gen" => gens.push(parse_gen(line, text)?),
            "d" | "del" | "dbar" => {
                let toks = lex(line, text)?;
                let mut c = Cursor {
                    toks: &toks,
                    pos: 1,
                    line,
                    end_col: text.len() + 1,
                };
                let (target, target_col) = c.ident("a generator name")?;
                c.expect_punct('=')?;
                let op = match keyword {
                    "d" => Op::D,
                    "del" => Op::Del,
                    _ => Op::Dbar,
                };
                if c.peek().is_none() {
                    return Err(syntax(line, c.col(), "expected an expression"));
                }
                assigns.push(Assign {
                    op,
                    target,
                    target_col,
                    line,
                    tokens: toks[c.pos..].to_vec(),
                    end_col: text.len() + 1,
                });
            }
            other => return Err(syntax(line, first_col, format!("unknown statement `{other}`"))),
        }
    }

    let (name, dim) = header.ok_or_else(|| syntax(0, 0, "empty source: missing `model NAME dim N`"))?;

    // parameters
    let mut values = BTreeMap::new();
    for key in params.keys() {
        if !declared_params.iter().any(|p| &p.0 == key) {
            return Err(err(0, 0, DslErrorKind::UnknownParameter(key.clone())));
        }
    }
    for (pname, default, line, col) in &declared_params {
        let v = params
            .get(pname)
            .cloned()
            .or_else(|| default.clone())
            .ok_or_else(|| err(*line, *col, DslErrorKind::MissingParameter(pname.clone())))?;
        values.insert(pname.clone(), v);
    }

    let algebra = build_algebra(&gens)?;
    let k = algebra.ngens();
    let scope = Scope {
        alg: &algebra,
        params: &values,
    };
    let mut del: Vec<Option<Form>> = vec![None; k];
    let mut dbar: Vec<Option<Form>> = vec![None; k];
    for a in &assigns {
        let g = algebra
            .index_of(&a.target)
            .ok_or_else(|| err(a.line, a.target_col, DslErrorKind::UnknownGenerator(a.target.clone())))?;
        let mut c = Cursor {
            toks: &a.tokens,
            pos: 0,
            line: a.line,
            end_col: a.end_col,
        };
        let value = scope.expr(&mut c)?;
        c.done()?;
        let (p, q) = algebra.generators()[g].bidegree;
        let mut dpart = Form::zero(k);
        let mut bpart = Form::zero(k);
        for (m, coeff) in value.terms() {
            let b = algebra.bidegree(m);
            let ok_del = b == (p + 1, q) && a.op != Op::Dbar;
            let ok_dbar = b == (p, q + 1) && a.op != Op::Del;
            if ok_del {
                dpart.add_term(m.clone(), coeff.clone());
            } else if ok_dbar {
                bpart.add_term(m.clone(), coeff.clone());
            } else {
                return Err(err(
                    a.line,
                    a.target_col,
                    DslErrorKind::BidegreeMismatch {
                        generator: a.target.clone(),
                        term: b,
                    },
                ));
            }
        }
        let dup = || {
            err(
                a.line,
                a.target_col,
                DslErrorKind::Duplicate(format!("assignment to `{}`", a.target)),
            )
        };
        if a.op != Op::Dbar {
            if del[g].is_some() {
                return Err(dup());
            }
            del[g] = Some(dpart);
        }
        if a.op != Op::Del {
            if dbar[g].is_some() {
                return Err(dup());
            }
            dbar[g] = Some(bpart);
        }
    }

    // conjugate completion
    for g in 0..k {
        let c = algebra.generators()[g].conjugate;
        if c == g || del[c].is_some() || dbar[c].is_some() {
            continue;
        }
        if del[g].is_none() && dbar[g].is_none() {
            continue;
        }
        let zero = Form::zero(k);
        let dg = del[g].clone().unwrap_or_else(|| zero.clone());
        let bg = dbar[g].clone().unwrap_or_else(|| zero.clone());
        del[c] = Some(algebra.conj(&bg).expect("same algebra"));
        dbar[c] = Some(algebra.conj(&dg).expect("same algebra"));
    }

    let spec = ModelSpec {
        name,
        dim,
        del: del.into_iter().map(|f| f.unwrap_or_else(|| Form::zero(k))).collect(),
        dbar: dbar.into_iter().map(|f| f.unwrap_or_else(|| Form::zero(k))).collect(),
        algebra,
        params: values,
    };
    Model::new(spec.clone()).map_err(|e| err(0, 0, DslErrorKind::Invalid(e)))?;
    Ok(spec)
}

fn parse_gen(line: usize, text: &str) -> Result<GenDecl, DslError> {
    let toks = lex(line, text)?;
    let mut c = Cursor {
        toks: &toks,
        pos: 1,
        line,
        end_col: text.len() + 1,
    };
    let (name, col) = c.ident("a generator name")?;
    c.expect_punct(':')?;
    c.expect_punct('(')?;
    let p = c.int("p")? as usize;
    c.expect_punct(',')?;
    let q = c.int("q")? as usize;
    c.expect_punct(')')?;
    let mut decl = GenDecl {
        name,
        bidegree: (p, q),
        parity: None,
        trunc: None,
        conj: None,
        line,
        col,
    };
    while c.peek().is_some() {
        let (word, wcol) = c.ident("`odd`, `even`, `trunc`, `conj` or `real`")?;
        match word.as_str() {
            "odd" => decl.parity = Some(Parity::Odd),
            "even" => decl.parity = Some(Parity::Even),
            "trunc" => decl.trunc = Some(c.int("a truncation exponent")?),
            "conj" => {
                let (other, ocol) = c.ident("a generator name")?;
                decl.conj = Some(Conj::Named(other, ocol));
            }
            "real" => decl.conj = Some(Conj::Real),
            _ => return Err(syntax(line, wcol, format!("unexpected `{word}`"))),
        }
    }
    Ok(decl)
}

fn build_algebra(decls: &[GenDecl]) -> Result<GradedAlgebra, DslError> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (k, d) in decls.iter().enumerate() {
        if index.insert(&d.name, k).is_some() {
            return Err(err(
                d.line,
                d.col,
                DslErrorKind::Duplicate(format!("generator `{}`", d.name)),
            ));
        }
    }
    let mut conj: Vec<Option<usize>> = vec![None; decls.len()];
    for (k, d) in decls.iter().enumerate() {
        match &d.conj {
            Some(Conj::Real) => conj[k] = Some(k),
            Some(Conj::Named(other, ocol)) => {
                let j = *index
                    .get(other.as_str())
                    .ok_or_else(|| err(d.line, *ocol, DslErrorKind::UnknownGenerator(other.clone())))?;
                conj[k] = Some(j);
            }
            None => {}
        }
    }
    // one-sided declarations link both ways
    for k in 0..decls.len() {
        if let Some(j) = conj[k] {
            if conj[j].is_none() {
                conj[j] = Some(k);
            }
        }
    }
    let mut gens = Vec::with_capacity(decls.len());
    for (k, d) in decls.iter().enumerate() {
        let (p, q) = d.bidegree;
        let parity = d
            .parity
            .unwrap_or(if (p + q) % 2 == 1 { Parity::Odd } else { Parity::Even });
        let truncation = match (parity, d.trunc) {
            (Parity::Odd, t) => t.unwrap_or(2),
            (Parity::Even, Some(t)) => t,
            (Parity::Even, None) => {
                return Err(syntax(
                    d.line,
                    d.col,
                    format!("even generator `{}` needs `trunc K`", d.name),
                ))
            }
        };
        let conjugate = match conj[k] {
            Some(j) => j,
            None if p == q => k,
            None => {
                return Err(syntax(
                    d.line,
                    d.col,
                    format!("generator `{}` needs `conj NAME`", d.name),
                ))
            }
        };
        gens.push(Generator {
            name: d.name.clone(),
            bidegree: (p, q),
            parity,
            truncation,
            conjugate,
        });
    }
    GradedAlgebra::new(gens).map_err(|e| err(0, 0, DslErrorKind::Invalid(e)))
}

// ---- printer ----

fn print_coeff(c: &Scalar) -> (bool, String) {
    if c.is_real() || c.re().is_zero() {
        let s = c.to_string();
        match s.strip_prefix('-') {
            Some(r) => (true, r.to_string()),
            None => (false, s),
        }
    } else {
        (false, format!("({c})"))
    }
}

fn print_monomial(alg: &GradedAlgebra, m: &Monomial) -> String {
    m.0.iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(g, &e)| {
            let name = &alg.generators()[g].name;
            if e > 1 {
                format!("{name}^{e}")
            } else {
                name.clone()
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Renders a form in expression syntax that [`parse`] reads back exactly.
pub fn print_expr(alg: &GradedAlgebra, f: &Form) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in f.terms().enumerate() {
        let (neg, mag) = print_coeff(c);
        out.push_str(match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        });
        if m.is_unit() {
            out.push_str(&mag);
        } else if mag == "1" {
            out.push_str(&print_monomial(alg, m));
        } else {
            out.push_str(&format!("{mag}*{}", print_monomial(alg, m)));
        }
    }
    out
}

/// Source text for `spec`; parsing it gives back an identical specification.
pub fn print(spec: &ModelSpec) -> String {
    let alg = &spec.algebra;
    let gens = alg.generators();
    let k = gens.len();
    let mut out = format!("model {} dim {}\n", spec.name, spec.dim);
    for (name, v) in &spec.params {
        out.push_str(&format!(
            "param {name} = {}\n",
            print_expr(&GradedAlgebra::new(vec![]).unwrap(), &Form::constant(0, v.clone()))
        ));
    }
    // (1,0) runs immediately followed by their automatic conjugates print as `holo`
    let mut auto_conj = vec![false; k];
    let mut g = 0;
    while g < k {
        let mut run = 0;
        while g + run < k && gens[g + run].bidegree == (1, 0) && gens[g + run].parity == Parity::Odd {
            run += 1;
        }
        let is_holo_run = run > 0
            && g + 2 * run <= k
            && (0..run).all(|j| {
                let h = &gens[g + j];
                let c = &gens[g + run + j];
                h.conjugate == g + run + j && c.name == auto_conjugate_name(&h.name)
            });
        if is_holo_run {
            let names: Vec<&str> = (0..run).map(|j| gens[g + j].name.as_str()).collect();
            out.push_str(&format!("holo {}\n", names.join(" ")));
            for j in 0..run {
                auto_conj[g + run + j] = true;
            }
            g += 2 * run;
        } else {
            let gen = &gens[g];
            let mut line = format!("gen {} : ({},{})", gen.name, gen.bidegree.0, gen.bidegree.1);
            match gen.parity {
                Parity::Odd => line.push_str(" odd"),
                Parity::Even => line.push_str(&format!(" even trunc {}", gen.truncation)),
            }
            if gen.conjugate == g {
                line.push_str(" real");
            } else {
                line.push_str(&format!(" conj {}", gens[gen.conjugate].name));
            }
            out.push_str(&line);
            out.push('\n');
            g += 1;
        }
    }
    for (g, gen) in gens.iter().enumerate() {
        let c = gen.conjugate;
        if auto_conj[g] {
            // skip when automatic completion from the partner reproduces the values
            let from_partner = (alg.conj(&spec.dbar[c]).ok(), alg.conj(&spec.del[c]).ok());
            let partner_assigned = !(spec.del[c].is_zero() && spec.dbar[c].is_zero());
            let own_zero = spec.del[g].is_zero() && spec.dbar[g].is_zero();
            let reproduced = from_partner == (Some(spec.del[g].clone()), Some(spec.dbar[g].clone()));
            if (partner_assigned && reproduced) || (!partner_assigned && own_zero) {
                continue;
            }
            // an explicit zero keeps completion from overriding it
            out.push_str(&format!("del {} = {}\n", gen.name, print_expr(alg, &spec.del[g])));
            out.push_str(&format!("dbar {} = {}\n", gen.name, print_expr(alg, &spec.dbar[g])));
            continue;
        }
        let total = &spec.del[g] + &spec.dbar[g];
        if !total.is_zero() {
            out.push_str(&format!("d {} = {}\n", gen.name, print_expr(alg, &total)));
        } else if c != g && !(spec.del[c].is_zero() && spec.dbar[c].is_zero()) {
            // an explicit zero keeps completion from the partner away
            out.push_str(&format!("d {} = 0\n", gen.name));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const III2: &str = "model iii2 dim 3\nholo p1 p2 p3\nd p3 = -1 * p1*p2\n";

    #[test]
    fn holo_shorthand_and_completion() {
        let spec = parse(III2).unwrap();
        let alg = &spec.algebra;
        let names: Vec<&str> = alg.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, ["p1", "p2", "p3", "q1", "q2", "q3"]);
        let q3 = alg.index_of("q3").unwrap();
        assert_eq!(print_expr(alg, &spec.dbar[q3]), "-q1*q2");
        assert!(spec.del[q3].is_zero());
    }

    #[test]
    fn unknown_generator_reports_line() {
        let e = parse("model x dim 3\nholo p1 p2 p3\nd p3 = p1*pX\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, DslErrorKind::UnknownGenerator("pX".into()));
        assert_eq!(e.column, 11);
    }

    #[test]
    fn bidegree_mismatch_rejected() {
        let e = parse("model x dim 2\nholo p1 p2\ndel p2 = p1*q1\n").unwrap_err();
        assert!(matches!(e.kind, DslErrorKind::BidegreeMismatch { .. }), "{e}");
    }

    #[test]
    fn non_differential_rejected() {
        // d(d p3) = p1 p3 p2 is nonzero
        let e = parse("model x dim 3\nholo p1 p2 p3\nd p1 = p1*p3\nd p3 = p1*p2\n").unwrap_err();
        assert!(matches!(e.kind, DslErrorKind::Invalid(_)), "{e}");
    }

    #[test]
    fn parameters_and_complex_coefficients() {
        let src = "model t dim 2\nparam a = 2\nholo p1 p2\nd p2 = (1-2i)*a*p1*p2\n";
        let spec = parse(src).unwrap();
        let p2 = spec.algebra.index_of("p2").unwrap();
        assert_eq!(print_expr(&spec.algebra, &spec.del[p2]), "(2-4i)*p1*p2");
        let over: BTreeMap<_, _> = [("a".to_string(), Scalar::from_int(3))].into();
        let spec3 = parse_with_params(src, &over).unwrap();
        assert_eq!(print_expr(&spec3.algebra, &spec3.del[p2]), "(3-6i)*p1*p2");
        let bad: BTreeMap<_, _> = [("b".to_string(), Scalar::one())].into();
        assert!(matches!(
            parse_with_params(src, &bad).unwrap_err().kind,
            DslErrorKind::UnknownParameter(_)
        ));
        let e = parse("model t dim 1\nparam a\nholo p1\n").unwrap_err();
        assert_eq!(e.kind, DslErrorKind::MissingParameter("a".into()));
    }

    #[test]
    fn imaginary_literals() {
        let spec = parse("model t dim 2\nholo p1 p2\nd p2 = 3/2i*p1*p2\n").unwrap();
        let p2 = spec.algebra.index_of("p2").unwrap();
        assert_eq!(
            spec.del[p2].terms().next().unwrap().1,
            &"3/2i".parse::<Scalar>().unwrap()
        );
    }

    #[test]
    fn crlf_and_comments() {
        let spec = parse("# torus\r\nalgebra T3 dim 3\r\nholo p1 p2 p3 # coframe\r\nd p1 = 0\r\n").unwrap();
        assert!(spec.del.iter().chain(&spec.dbar).all(Form::is_zero));
    }

    #[test]
    fn round_trip() {
        let spec = parse(III2).unwrap();
        let printed = print(&spec);
        assert_eq!(parse(&printed).unwrap(), spec);
        assert_eq!(print(&parse(&printed).unwrap()), printed);
    }
}
