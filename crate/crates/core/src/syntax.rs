//! The text format: lexer, parser and printer.
//!
//! ```text
//! # comment
//! signature G { mul/2; }
//! algebra Z3 over G { elements 0 1 2; mul = [[0, 2, 1], [1, 0, 2], [2, 1, 0]]; }
//! hypersub dual over G { mul(x, y) -> mul(y, x); }
//! monoid M over G { elements id, dual }
//! theory T over G { vars x, y, z; mul(x, z) = mul(y, z) => x = y; }
//! proof P over G in MHQ(M) from T
//!   1: mul(x, z) = mul(y, z) => x = y by hyp 0
//!   2: mul(z, x) = mul(z, y) => x = y by hypsub 1 dual
//! ```
//!
//! Variables are `x0, x1, ...`. Any other bare name that is not a constant
//! of the signature is an alias: inside one statement, aliases get the
//! smallest indices not already used explicitly, in order of first
//! appearance. `vars a, b;` in a theory or proof fixes aliases for the
//! whole block; a proof inherits the declaration of its theory.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::FiniteAlgebra;
use crate::hypersub::{Hypersubstitution, MonoidSpec, Preset};
use crate::proof::{Justification, Logic, Proof, ProofLine};
use crate::semantics::TheorySet;
use crate::term::{parse_var_name, Identity, QuasiIdentity, Signature, Term, Var, VarSubstitution};
use crate::workspace::{MonoidDef, MonoidSource, NamedHypersub, Workspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("`{op}` takes {expected} argument(s), found {found}")]
    ArityMismatch {
        op: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("{kind} `{name}` is already defined differently")]
    Redefinition { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

type PResult<T> = Result<T, ParseError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Pos {
    line: usize,
    col: usize,
}

impl Pos {
    fn err(self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col,
            kind,
        }
    }

    fn syntax(self, msg: impl Into<String>) -> ParseError {
        self.err(ParseErrorKind::Syntax(msg.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Colon,
    Slash,
    Eq,
    Implies,
    Arrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Implies => "`=>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> PResult<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                bump(&mut chars);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                bump(&mut chars);
            }
            let n = s
                .parse()
                .map_err(|_| pos.syntax(format!("number `{s}` too large")))?;
            out.push((Tok::Num(n), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                bump(&mut chars);
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            ':' => Tok::Colon,
            '/' => Tok::Slash,
            '≈' => Tok::Eq,
            '→' | '⇒' => Tok::Implies,
            '↦' => Tok::Arrow,
            '=' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Implies
            }
            '=' => Tok::Eq,
            '-' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Arrow
            }
            other => return Err(pos.syntax(format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

/// A term before variable names are resolved.
#[derive(Debug, Clone)]
enum Raw {
    Name(String, Pos),
    App(String, Vec<Raw>, Pos),
}

impl Raw {
    fn names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Raw::Name(n, _) => out.push(n),
            Raw::App(_, args, _) => args.iter().for_each(|a| a.names(out)),
        }
    }
}

#[derive(Debug, Clone)]
struct RawId(Raw, Raw);

#[derive(Debug, Clone)]
struct RawQuasi {
    premises: Vec<RawId>,
    conclusion: RawId,
}

enum RawJust {
    Hyp(usize),
    E1(Raw),
    E2(Raw, Raw),
    E3(Raw, Raw, Raw),
    E4(String, Vec<Raw>, Vec<Raw>, Pos),
    Subst(usize, Vec<(Raw, Raw)>),
    Cut(usize, usize),
    Ext(usize, RawId),
    HypSubNamed(usize, String, Pos),
    HypSubInline(usize, Hypersubstitution),
    Mp(usize, usize),
    Ge4(Raw, Vec<Raw>, Vec<Raw>),
}

impl RawJust {
    fn terms(&self) -> Vec<&Raw> {
        match self {
            RawJust::E1(p) => vec![p],
            RawJust::E2(p, q) => vec![p, q],
            RawJust::E3(p, q, r) => vec![p, q, r],
            RawJust::E4(_, l, r, _) => l.iter().chain(r).collect(),
            RawJust::Subst(_, b) => b.iter().flat_map(|(v, t)| [v, t]).collect(),
            RawJust::Ext(_, RawId(l, r)) => vec![l, r],
            RawJust::Ge4(p, l, r) => std::iter::once(p).chain(l).chain(r).collect(),
            _ => Vec::new(),
        }
    }
}

/// Variable names in force for one statement.
struct Names<'s> {
    sig: &'s Signature,
    map: HashMap<String, u32>,
    /// Pattern scope: only the pattern's names are variables.
    closed: bool,
}

impl<'s> Names<'s> {
    fn statement(sig: &'s Signature, declared: &HashMap<String, u32>, raws: &[&Raw]) -> Self {
        let mut names = Vec::new();
        for r in raws {
            r.names(&mut names);
        }
        let mut map = declared.clone();
        let mut taken: BTreeSet<u32> = declared.values().copied().collect();
        taken.extend(names.iter().filter_map(|n| parse_var_name(n)));
        let mut next = 0u32;
        for n in names {
            if map.contains_key(n) || parse_var_name(n).is_some() || sig.arity(n).is_some() {
                continue;
            }
            while taken.contains(&next) {
                next += 1;
            }
            map.insert(n.to_string(), next);
            taken.insert(next);
        }
        Names {
            sig,
            map,
            closed: false,
        }
    }

    fn term(&self, raw: &Raw) -> PResult<Term> {
        match raw {
            Raw::Name(n, pos) => {
                if let Some(arity) = self.sig.arity(n) {
                    if arity != 0 {
                        return Err(pos.err(ParseErrorKind::ArityMismatch {
                            op: n.clone(),
                            expected: arity,
                            found: 0,
                        }));
                    }
                    return Ok(Term::constant(n.as_str()));
                }
                if let Some(&i) = self.map.get(n) {
                    return Ok(Term::var(i));
                }
                match parse_var_name(n) {
                    Some(i) if !self.closed => Ok(Term::var(i)),
                    _ => Err(pos.err(ParseErrorKind::UnknownSymbol(n.clone()))),
                }
            }
            Raw::App(op, args, pos) => {
                let arity = self
                    .sig
                    .arity(op)
                    .ok_or_else(|| pos.err(ParseErrorKind::UnknownSymbol(op.clone())))?;
                if arity != args.len() {
                    return Err(pos.err(ParseErrorKind::ArityMismatch {
                        op: op.clone(),
                        expected: arity,
                        found: args.len(),
                    }));
                }
                let args = args
                    .iter()
                    .map(|a| self.term(a))
                    .collect::<PResult<Vec<_>>>()?;
                Ok(Term::app(op.as_str(), args))
            }
        }
    }

    fn terms(&self, raws: &[Raw]) -> PResult<Vec<Term>> {
        raws.iter().map(|r| self.term(r)).collect()
    }

    fn identity(&self, raw: &RawId) -> PResult<Identity> {
        Ok(Identity::new(self.term(&raw.0)?, self.term(&raw.1)?))
    }

    fn quasi(&self, raw: &RawQuasi) -> PResult<QuasiIdentity> {
        let premises = raw
            .premises
            .iter()
            .map(|p| self.identity(p))
            .collect::<PResult<Vec<_>>>()?;
        Ok(QuasiIdentity::new(
            premises,
            self.identity(&raw.conclusion)?,
        ))
    }

    fn var(&self, raw: &Raw) -> PResult<Var> {
        match self.term(raw)? {
            Term::Var(v) => Ok(v),
            _ => {
                let pos = match raw {
                    Raw::Name(_, p) | Raw::App(_, _, p) => *p,
                };
                Err(pos.syntax("expected a variable"))
            }
        }
    }
}

fn quasi_raws(q: &RawQuasi) -> Vec<&Raw> {
    q.premises
        .iter()
        .chain(std::iter::once(&q.conclusion))
        .flat_map(|RawId(l, r)| [l, r])
        .collect()
}

struct Parser<'t> {
    toks: &'t [(Tok, Pos)],
    at: usize,
}

impl<'t> Parser<'t> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> PResult<Pos> {
        let pos = self.pos();
        if self.eat(&t) {
            Ok(pos)
        } else {
            Err(pos.syntax(format!(
                "expected {}, found {}",
                t.describe(),
                self.peek().describe()
            )))
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.next() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (t, p) => Err(p.syntax(format!("expected a name, found {}", t.describe()))),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Pos> {
        match self.next() {
            (Tok::Ident(s), p) if s == kw => Ok(p),
            (t, p) => Err(p.syntax(format!("expected `{kw}`, found {}", t.describe()))),
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn number(&mut self) -> PResult<(u64, Pos)> {
        match self.next() {
            (Tok::Num(n), p) => Ok((n, p)),
            (t, p) => Err(p.syntax(format!("expected a number, found {}", t.describe()))),
        }
    }

    /// Element label: a name or a number.
    fn label(&mut self) -> PResult<(String, Pos)> {
        match self.next() {
            (Tok::Ident(s), p) => Ok((s, p)),
            (Tok::Num(n), p) => Ok((n.to_string(), p)),
            (t, p) => Err(p.syntax(format!("expected an element, found {}", t.describe()))),
        }
    }

    fn comma_names(&mut self) -> PResult<Vec<(String, Pos)>> {
        let mut out = vec![self.ident()?];
        while self.eat(&Tok::Comma) {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn raw_term(&mut self) -> PResult<Raw> {
        let (name, pos) = self.ident()?;
        if !self.eat(&Tok::LParen) {
            return Ok(Raw::Name(name, pos));
        }
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.raw_term()?);
                if self.eat(&Tok::RParen) {
                    break;
                }
                self.expect(Tok::Comma)?;
            }
        }
        Ok(Raw::App(name, args, pos))
    }

    fn raw_identity(&mut self) -> PResult<RawId> {
        let l = self.raw_term()?;
        self.expect(Tok::Eq)?;
        Ok(RawId(l, self.raw_term()?))
    }

    fn raw_quasi(&mut self) -> PResult<RawQuasi> {
        if self.eat(&Tok::Implies) {
            return Ok(RawQuasi {
                premises: Vec::new(),
                conclusion: self.raw_identity()?,
            });
        }
        let mut ids = vec![self.raw_identity()?];
        while self.eat(&Tok::Comma) {
            ids.push(self.raw_identity()?);
        }
        if self.eat(&Tok::Implies) {
            return Ok(RawQuasi {
                premises: ids,
                conclusion: self.raw_identity()?,
            });
        }
        if ids.len() > 1 {
            return Err(self.pos().syntax("expected `=>` after premises"));
        }
        Ok(RawQuasi {
            premises: Vec::new(),
            conclusion: ids.pop().expect("one identity"),
        })
    }

    fn raw_list(&mut self, end: Tok) -> PResult<Vec<Raw>> {
        let mut out = Vec::new();
        if self.peek() == &end {
            return Ok(out);
        }
        loop {
            out.push(self.raw_term()?);
            if !self.eat(&Tok::Comma) {
                return Ok(out);
            }
        }
    }

    fn table(&mut self, out: &mut Vec<(String, Pos)>) -> PResult<()> {
        if self.eat(&Tok::LBrack) {
            if self.eat(&Tok::RBrack) {
                return Ok(());
            }
            loop {
                self.table(out)?;
                if self.eat(&Tok::RBrack) {
                    return Ok(());
                }
                self.expect(Tok::Comma)?;
            }
        }
        out.push(self.label()?);
        Ok(())
    }

    /// `{ f(x, y) -> t; c -> c; }` over `sig`.
    fn hypersub_body(&mut self, sig: &Signature) -> PResult<Hypersubstitution> {
        let open = self.expect(Tok::LBrace)?;
        let mut images: Vec<(String, Term)> = Vec::new();
        while !self.eat(&Tok::RBrace) {
            let pattern = self.raw_term()?;
            self.expect(Tok::Arrow)?;
            let image = self.raw_term()?;
            let (op, args, pos) = match pattern {
                Raw::Name(n, p) => (n, Vec::new(), p),
                Raw::App(n, a, p) => (n, a, p),
            };
            let arity = sig
                .arity(&op)
                .ok_or_else(|| pos.err(ParseErrorKind::UnknownSymbol(op.clone())))?;
            if arity != args.len() {
                return Err(pos.err(ParseErrorKind::ArityMismatch {
                    op,
                    expected: arity,
                    found: args.len(),
                }));
            }
            let mut map = HashMap::new();
            for (i, a) in args.iter().enumerate() {
                let Raw::Name(n, p) = a else {
                    return Err(pos.syntax("pattern arguments must be variable names"));
                };
                if sig.arity(n).is_some() {
                    return Err(p.syntax(format!("`{n}` is a symbol, not a variable")));
                }
                if let Some(k) = parse_var_name(n) {
                    if k as usize != i {
                        return Err(
                            p.syntax(format!("pattern position {i} must be x{i} or a name"))
                        );
                    }
                }
                if map.insert(n.clone(), i as u32).is_some() {
                    return Err(p.syntax(format!("pattern variable `{n}` repeated")));
                }
            }
            let names = Names {
                sig,
                map,
                closed: true,
            };
            let image = names.term(&image)?;
            if images.iter().any(|(o, _)| *o == op) {
                return Err(pos.err(ParseErrorKind::Invalid(format!("`{op}` has two images"))));
            }
            images.push((op, image));
            self.eat(&Tok::Semi);
        }
        Hypersubstitution::new(sig, images)
            .map_err(|e| open.err(ParseErrorKind::Invalid(e.to_string())))
    }
}

/// Loads every block of `text` into `ws`.
pub(crate) fn parse_into(ws: &mut Workspace, text: &str) -> PResult<()> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, at: 0 };
    while p.peek() != &Tok::Eof {
        let (kw, pos) = p.ident()?;
        match kw.as_str() {
            "signature" => signature_item(ws, &mut p)?,
            "algebra" => algebra_item(ws, &mut p)?,
            "hypersub" => hypersub_item(ws, &mut p)?,
            "monoid" => monoid_item(ws, &mut p)?,
            "theory" => theory_item(ws, &mut p)?,
            "proof" => proof_item(ws, &mut p)?,
            other => return Err(pos.syntax(format!("unknown block `{other}`"))),
        }
    }
    Ok(())
}

fn lookup_sig(ws: &Workspace, p: &mut Parser) -> PResult<Signature> {
    p.keyword("over")?;
    let (name, pos) = p.ident()?;
    ws.signatures.get(&name).cloned().ok_or_else(|| {
        pos.err(ParseErrorKind::UnknownName {
            kind: "signature",
            name,
        })
    })
}

fn define<T: PartialEq>(
    map: &mut std::collections::BTreeMap<String, T>,
    kind: &'static str,
    name: String,
    value: T,
    pos: Pos,
) -> PResult<()> {
    if let Some(old) = map.get(&name) {
        if *old != value {
            return Err(pos.err(ParseErrorKind::Redefinition { kind, name }));
        }
        return Ok(());
    }
    map.insert(name, value);
    Ok(())
}

fn signature_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let (name, pos) = p.ident()?;
    p.expect(Tok::LBrace)?;
    let mut ops = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let (op, _) = p.ident()?;
        p.expect(Tok::Slash)?;
        let (arity, _) = p.number()?;
        ops.push((op, arity as usize));
        if !p.eat(&Tok::Semi) {
            p.eat(&Tok::Comma);
        }
    }
    let sig = Signature::new(name.clone(), ops)
        .map_err(|e| pos.err(ParseErrorKind::Invalid(e.to_string())))?;
    define(&mut ws.signatures, "signature", name, sig, pos)
}

fn algebra_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let (name, pos) = p.ident()?;
    let sig = lookup_sig(ws, p)?;
    p.expect(Tok::LBrace)?;
    p.keyword("elements")?;
    let mut universe = Vec::new();
    while !p.eat(&Tok::Semi) {
        universe.push(p.label()?.0);
        p.eat(&Tok::Comma);
    }
    let index: HashMap<&str, usize> = universe
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let mut tables: Vec<(String, Vec<usize>)> = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let (op, op_pos) = p.ident()?;
        let arity = sig
            .arity(&op)
            .ok_or_else(|| op_pos.err(ParseErrorKind::UnknownSymbol(op.clone())))?;
        p.expect(Tok::Eq)?;
        let mut cells = Vec::new();
        p.table(&mut cells)?;
        let expected = universe.len().pow(arity as u32);
        if cells.len() != expected {
            return Err(op_pos.err(ParseErrorKind::Invalid(format!(
                "table for `{op}` has {} entries, expected {expected}",
                cells.len()
            ))));
        }
        let table = cells
            .into_iter()
            .map(|(l, lp)| {
                index.get(l.as_str()).copied().ok_or_else(|| {
                    lp.err(ParseErrorKind::UnknownName {
                        kind: "element",
                        name: l,
                    })
                })
            })
            .collect::<PResult<Vec<_>>>()?;
        tables.push((op, table));
        p.eat(&Tok::Semi);
    }
    let a = FiniteAlgebra::new(name.clone(), sig, universe.clone(), tables)
        .map_err(|e| pos.err(ParseErrorKind::Invalid(e.to_string())))?;
    define(&mut ws.algebras, "algebra", name, a, pos)
}

fn hypersub_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let (name, pos) = p.ident()?;
    let sig = lookup_sig(ws, p)?;
    let sigma = p.hypersub_body(&sig)?;
    let h = NamedHypersub {
        name: name.clone(),
        sig: sig.name().to_string(),
        sigma,
    };
    define(&mut ws.hypersubs, "hypersub", name, h, pos)
}

fn named_hypersub(
    ws: &Workspace,
    sig: &Signature,
    name: &str,
    pos: Pos,
) -> PResult<Hypersubstitution> {
    match ws.hypersubs.get(name) {
        Some(h) if h.sig == sig.name() => Ok(h.sigma.clone()),
        Some(h) => Err(pos.err(ParseErrorKind::Invalid(format!(
            "hypersub `{name}` is over `{}`, not `{}`",
            h.sig,
            sig.name()
        )))),
        None => Err(pos.err(ParseErrorKind::UnknownName {
            kind: "hypersub",
            name: name.to_string(),
        })),
    }
}

fn preset(p: &mut Parser) -> PResult<Preset> {
    let (name, pos) = p.ident()?;
    Ok(match name.as_str() {
        "Trivial" => Preset::Trivial,
        "MF" => Preset::MF,
        "AllUpToDepth" => {
            p.expect(Tok::LParen)?;
            let (d, _) = p.number()?;
            p.expect(Tok::RParen)?;
            Preset::AllUpToDepth(d as usize)
        }
        "ZeroMeetPreserving" => {
            p.expect(Tok::LParen)?;
            let (d, _) = p.number()?;
            p.expect(Tok::Comma)?;
            let (zero, _) = p.ident()?;
            p.expect(Tok::Comma)?;
            let (meet, _) = p.ident()?;
            p.expect(Tok::RParen)?;
            Preset::ZeroMeetPreserving {
                depth: d as usize,
                zero,
                meet,
            }
        }
        "ZeroMeetFundamental" => {
            p.expect(Tok::LParen)?;
            let (zero, _) = p.ident()?;
            p.expect(Tok::Comma)?;
            let (meet, _) = p.ident()?;
            p.expect(Tok::RParen)?;
            Preset::ZeroMeetFundamental { zero, meet }
        }
        other => return Err(pos.syntax(format!("unknown preset `{other}`"))),
    })
}

fn monoid_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let (name, pos) = p.ident()?;
    let sig = lookup_sig(ws, p)?;
    p.expect(Tok::LBrace)?;
    let (kw, kw_pos) = p.ident()?;
    let invalid = |e: crate::hypersub::HypersubError| {
        pos.err(ParseErrorKind::Invalid(format!("monoid `{name}`: {e}")))
    };
    let (source, spec) = match kw.as_str() {
        "elements" | "generators" => {
            let names = p.comma_names()?;
            let sigmas = names
                .iter()
                .map(|(n, np)| named_hypersub(ws, &sig, n, *np))
                .collect::<PResult<Vec<_>>>()?;
            let names: Vec<String> = names.into_iter().map(|(n, _)| n).collect();
            if kw == "elements" {
                let spec = MonoidSpec::explicit(&sig, sigmas).map_err(invalid)?;
                (MonoidSource::Elements(names), spec)
            } else {
                p.eat(&Tok::Semi);
                p.keyword("cap")?;
                let (cap, _) = p.number()?;
                let spec = MonoidSpec::Generated {
                    generators: sigmas,
                    cap: cap as usize,
                };
                (MonoidSource::Generators(names, cap as usize), spec)
            }
        }
        "preset" => {
            let pr = preset(p)?;
            let spec = MonoidSpec::Preset(pr.clone());
            spec.membership(&sig).map_err(invalid)?;
            (MonoidSource::Preset(pr), spec)
        }
        other => {
            return Err(kw_pos.syntax(format!(
                "expected `elements`, `generators` or `preset`, found `{other}`"
            )))
        }
    };
    p.eat(&Tok::Semi);
    p.expect(Tok::RBrace)?;
    let def = MonoidDef {
        name: name.clone(),
        sig: sig.name().to_string(),
        spec,
        source,
    };
    define(&mut ws.monoids, "monoid", name, def, pos)
}

fn vars_decl(p: &mut Parser, sig: &Signature) -> PResult<Option<Vec<String>>> {
    if !p.is_keyword("vars") {
        return Ok(None);
    }
    p.next();
    let mut names: Vec<String> = Vec::new();
    for (n, np) in p.comma_names()? {
        if sig.arity(&n).is_some() || parse_var_name(&n).is_some() {
            return Err(np.syntax(format!("`{n}` cannot be declared as a variable name")));
        }
        if names.contains(&n) {
            return Err(np.syntax(format!("variable `{n}` declared twice")));
        }
        names.push(n);
    }
    p.eat(&Tok::Semi);
    Ok(Some(names))
}

fn declared_map(names: &[String]) -> HashMap<String, u32> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.clone(), i as u32))
        .collect()
}

fn theory_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let (name, pos) = p.ident()?;
    let sig = lookup_sig(ws, p)?;
    p.expect(Tok::LBrace)?;
    let vars = vars_decl(p, &sig)?;
    let declared = declared_map(vars.as_deref().unwrap_or(&[]));
    let mut items = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let raw = p.raw_quasi()?;
        let names = Names::statement(&sig, &declared, &quasi_raws(&raw));
        items.push(names.quasi(&raw)?);
        if !p.eat(&Tok::Semi) && p.peek() != &Tok::RBrace {
            return Err(p
                .pos()
                .syntax(format!("expected `;`, found {}", p.peek().describe())));
        }
    }
    let t = TheorySet {
        name: name.clone(),
        sig,
        items,
    };
    define(&mut ws.theories, "theory", name.clone(), t, pos)?;
    if let Some(vars) = vars {
        ws.theory_vars.insert(name, vars);
    }
    Ok(())
}

fn line_ref(p: &mut Parser) -> PResult<usize> {
    let (n, pos) = p.number()?;
    if n == 0 {
        return Err(pos.syntax("proof lines are numbered from 1"));
    }
    Ok(n as usize - 1)
}

fn raw_just(ws: &Workspace, sig: &Signature, p: &mut Parser) -> PResult<RawJust> {
    let (rule, pos) = p.ident()?;
    Ok(match rule.as_str() {
        "hyp" => RawJust::Hyp(p.number()?.0 as usize),
        "E1" | "E2" | "E3" => {
            p.expect(Tok::LParen)?;
            let mut ts = p.raw_list(Tok::RParen)?;
            p.expect(Tok::RParen)?;
            let want = (rule.as_bytes()[1] - b'0') as usize;
            if ts.len() != want {
                return Err(pos.syntax(format!("{rule} takes {want} term(s), found {}", ts.len())));
            }
            let mut it = ts.drain(..);
            let mut next = || it.next().expect("counted");
            match want {
                1 => RawJust::E1(next()),
                2 => RawJust::E2(next(), next()),
                _ => RawJust::E3(next(), next(), next()),
            }
        }
        "E4" | "ge4" => {
            p.expect(Tok::LParen)?;
            let head = if rule == "E4" {
                let (op, op_pos) = p.ident()?;
                Err((op, op_pos))
            } else {
                Ok(p.raw_term()?)
            };
            p.expect(Tok::Semi)?;
            let lhs = p.raw_list(Tok::Semi)?;
            p.expect(Tok::Semi)?;
            let rhs = p.raw_list(Tok::RParen)?;
            p.expect(Tok::RParen)?;
            match head {
                Ok(pat) => RawJust::Ge4(pat, lhs, rhs),
                Err((op, op_pos)) => RawJust::E4(op, lhs, rhs, op_pos),
            }
        }
        "subst" => {
            let m = line_ref(p)?;
            p.expect(Tok::LBrace)?;
            let mut bindings = Vec::new();
            while !p.eat(&Tok::RBrace) {
                let v = p.raw_term()?;
                p.expect(Tok::Arrow)?;
                bindings.push((v, p.raw_term()?));
                if !p.eat(&Tok::Comma) {
                    p.eat(&Tok::Semi);
                }
            }
            RawJust::Subst(m, bindings)
        }
        "cut" | "mp" => {
            let minor = line_ref(p)?;
            let major = line_ref(p)?;
            if rule == "cut" {
                RawJust::Cut(minor, major)
            } else {
                RawJust::Mp(minor, major)
            }
        }
        "ext" => {
            let m = line_ref(p)?;
            RawJust::Ext(m, p.raw_identity()?)
        }
        "hypsub" => {
            let m = line_ref(p)?;
            if p.peek() == &Tok::LBrace {
                RawJust::HypSubInline(m, p.hypersub_body(sig)?)
            } else {
                let (n, np) = p.ident()?;
                named_hypersub(ws, sig, &n, np)?;
                RawJust::HypSubNamed(m, n, np)
            }
        }
        other => return Err(pos.syntax(format!("unknown justification `{other}`"))),
    })
}

fn resolve_just(
    ws: &Workspace,
    sig: &Signature,
    names: &Names,
    j: RawJust,
) -> PResult<Justification> {
    Ok(match j {
        RawJust::Hyp(k) => Justification::Hyp(k),
        RawJust::E1(p) => Justification::E1(names.term(&p)?),
        RawJust::E2(p, q) => Justification::E2(names.term(&p)?, names.term(&q)?),
        RawJust::E3(p, q, r) => {
            Justification::E3(names.term(&p)?, names.term(&q)?, names.term(&r)?)
        }
        RawJust::E4(op, l, r, pos) => {
            let sym = sig
                .symbol(&op)
                .cloned()
                .ok_or_else(|| pos.err(ParseErrorKind::UnknownSymbol(op.clone())))?;
            Justification::E4 {
                op: sym,
                lhs: names.terms(&l)?,
                rhs: names.terms(&r)?,
            }
        }
        RawJust::Ge4(pat, l, r) => Justification::Ge4 {
            p: names.term(&pat)?,
            lhs: names.terms(&l)?,
            rhs: names.terms(&r)?,
        },
        RawJust::Subst(m, bindings) => {
            let pairs = bindings
                .iter()
                .map(|(v, t)| Ok((names.var(v)?, names.term(t)?)))
                .collect::<PResult<Vec<_>>>()?;
            Justification::Subst {
                line: m,
                delta: VarSubstitution::from_pairs(pairs),
            }
        }
        RawJust::Cut(minor, major) => Justification::Cut { minor, major },
        RawJust::Mp(minor, major) => Justification::Mp { minor, major },
        RawJust::Ext(m, id) => Justification::Ext {
            line: m,
            premise: names.identity(&id)?,
        },
        RawJust::HypSubNamed(m, n, pos) => Justification::HypSub {
            line: m,
            sigma: named_hypersub(ws, sig, &n, pos)?,
            name: Some(n),
        },
        RawJust::HypSubInline(m, sigma) => Justification::HypSub {
            line: m,
            sigma,
            name: None,
        },
    })
}

fn proof_item(ws: &mut Workspace, p: &mut Parser) -> PResult<()> {
    let start = p.pos();
    let name = if p.is_keyword("over") {
        None
    } else {
        Some(p.ident()?.0)
    };
    let sig = lookup_sig(ws, p)?;
    p.keyword("in")?;
    let (logic_name, logic_pos) = p.ident()?;
    let logic = match logic_name.as_str() {
        "Q" => Logic::Q,
        "HQ" => Logic::HQ,
        "MHQ" => {
            p.expect(Tok::LParen)?;
            let (m, mp) = p.ident()?;
            p.expect(Tok::RParen)?;
            let def = ws.monoids.get(&m).ok_or_else(|| {
                mp.err(ParseErrorKind::UnknownName {
                    kind: "monoid",
                    name: m.clone(),
                })
            })?;
            if def.sig != sig.name() {
                return Err(mp.err(ParseErrorKind::Invalid(format!(
                    "monoid `{m}` is over `{}`, not `{}`",
                    def.sig,
                    sig.name()
                ))));
            }
            Logic::MHQ {
                monoid: m,
                spec: def.spec.clone(),
            }
        }
        other => {
            return Err(logic_pos.syntax(format!("expected Q, HQ or MHQ(...), found `{other}`")))
        }
    };
    let mut inherited = None;
    let theory = if p.is_keyword("from") {
        p.next();
        let (t, tp) = p.ident()?;
        inherited = ws.theory_vars.get(&t).cloned();
        let theory = ws.theories.get(&t).cloned().ok_or_else(|| {
            tp.err(ParseErrorKind::UnknownName {
                kind: "theory",
                name: t.clone(),
            })
        })?;
        if theory.sig != sig {
            return Err(tp.err(ParseErrorKind::Invalid(format!(
                "theory `{t}` is over `{}`, not `{}`",
                theory.sig.name(),
                sig.name()
            ))));
        }
        theory
    } else {
        TheorySet::empty("none", sig.clone())
    };
    let braced = p.eat(&Tok::LBrace);
    let vars = vars_decl(p, &sig)?.or(inherited);
    let declared = declared_map(vars.as_deref().unwrap_or(&[]));
    let mut lines = Vec::new();
    while let Tok::Num(_) = p.peek() {
        if p.peek2() != &Tok::Colon {
            break;
        }
        let (n, np) = p.number()?;
        if n as usize != lines.len() + 1 {
            return Err(np.syntax(format!("expected line {}, found {n}", lines.len() + 1)));
        }
        p.expect(Tok::Colon)?;
        let raw = p.raw_quasi()?;
        p.keyword("by")?;
        let just = raw_just(ws, &sig, p)?;
        let mut raws = quasi_raws(&raw);
        raws.extend(just.terms());
        let names = Names::statement(&sig, &declared, &raws);
        let stated = names.quasi(&raw)?;
        let just = resolve_just(ws, &sig, &names, just)?;
        lines.push(ProofLine { stated, just });
        p.eat(&Tok::Semi);
    }
    if braced {
        p.expect(Tok::RBrace)?;
    }
    if lines.is_empty() {
        return Err(p.pos().syntax("a proof needs at least one line"));
    }
    let key = name
        .clone()
        .unwrap_or_else(|| format!("proof{}", ws.proofs.len() + 1));
    let proof = Proof {
        name,
        theory,
        logic,
        lines,
    };
    define(&mut ws.proofs, "proof", key, proof, start)
}

fn parse_standalone<T>(text: &str, f: impl FnOnce(&mut Parser) -> PResult<T>) -> PResult<T> {
    let toks = lex(text)?;
    let mut p = Parser { toks: &toks, at: 0 };
    let v = f(&mut p)?;
    if p.peek() != &Tok::Eof {
        return Err(p
            .pos()
            .syntax(format!("unexpected {}", p.peek().describe())));
    }
    Ok(v)
}

/// Parses a single term over `sig`; names other than constants and `x<n>` are aliases.
pub fn parse_term(text: &str, sig: &Signature) -> PResult<Term> {
    parse_standalone(text, |p| {
        let raw = p.raw_term()?;
        Names::statement(sig, &HashMap::new(), &[&raw]).term(&raw)
    })
}

pub fn parse_identity(text: &str, sig: &Signature) -> PResult<Identity> {
    parse_standalone(text, |p| {
        let raw = p.raw_identity()?;
        Names::statement(sig, &HashMap::new(), &[&raw.0, &raw.1]).identity(&raw)
    })
}

pub fn parse_quasi(text: &str, sig: &Signature) -> PResult<QuasiIdentity> {
    parse_standalone(text, |p| {
        let raw = p.raw_quasi()?;
        p.eat(&Tok::Semi);
        Names::statement(sig, &HashMap::new(), &quasi_raws(&raw)).quasi(&raw)
    })
}

/// Parses a hypersubstitution body `{ f(x, y) -> ...; }` over `sig`.
pub fn parse_hypersub(text: &str, sig: &Signature) -> PResult<Hypersubstitution> {
    parse_standalone(text, |p| p.hypersub_body(sig))
}

/// Parses text holding a signature and an algebra; returns the last algebra defined.
pub fn load_algebra(text: &str) -> PResult<FiniteAlgebra> {
    let mut ws = Workspace::new();
    parse_into(&mut ws, text)?;
    let toks = lex(text)?;
    let last = toks
        .windows(2)
        .rev()
        .find_map(|w| match (&w[0].0, &w[1].0) {
            (Tok::Ident(k), Tok::Ident(n)) if k == "algebra" => Some(n.clone()),
            _ => None,
        });
    last.and_then(|n| ws.algebras.get(&n).cloned())
        .ok_or_else(|| Pos { line: 1, col: 1 }.syntax("no algebra block"))
}

pub fn dump_signature(sig: &Signature) -> String {
    let ops: Vec<String> = sig
        .ops()
        .iter()
        .map(|d| format!("{}/{};", d.name, d.arity))
        .collect();
    format!("signature {} {{ {} }}\n", sig.name(), ops.join(" "))
}

pub fn dump_hypersub(name: &str, sig: &Signature, sigma: &Hypersubstitution) -> String {
    format!("hypersub {name} over {} {sigma}\n", sig.name())
}

pub fn dump_monoid(def: &MonoidDef) -> String {
    let body = match &def.source {
        MonoidSource::Elements(names) => format!("elements {}", names.join(", ")),
        MonoidSource::Generators(names, cap) => {
            format!("generators {}; cap {cap}", names.join(", "))
        }
        MonoidSource::Preset(p) => format!("preset {p}"),
    };
    format!("monoid {} over {} {{ {body} }}\n", def.name, def.sig)
}

pub fn dump_theory(t: &TheorySet) -> String {
    dump_theory_vars(t, &[])
}

/// Theory block with a `vars` line; the items are still printed with `x<n>`.
pub fn dump_theory_vars(t: &TheorySet, vars: &[String]) -> String {
    let mut out = format!("theory {} over {} {{\n", t.name, t.sig.name());
    if !vars.is_empty() {
        let _ = writeln!(out, "  vars {};", vars.join(", "));
    }
    for e in &t.items {
        let _ = writeln!(out, "  {e};");
    }
    out.push_str("}\n");
    out
}

fn terms(ts: &[Term]) -> String {
    ts.iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn dump_justification(j: &Justification) -> String {
    match j {
        Justification::Hyp(k) => format!("hyp {k}"),
        Justification::E1(p) => format!("E1({p})"),
        Justification::E2(p, q) => format!("E2({p}, {q})"),
        Justification::E3(p, q, r) => format!("E3({p}, {q}, {r})"),
        Justification::E4 { op, lhs, rhs } => format!("E4({op}; {}; {})", terms(lhs), terms(rhs)),
        Justification::Subst { line, delta } => {
            let b: Vec<String> = delta
                .bindings()
                .iter()
                .map(|(v, t)| format!("{v} -> {t}"))
                .collect();
            format!("subst {} {{{}}}", line + 1, b.join(", "))
        }
        Justification::Cut { minor, major } => format!("cut {} {}", minor + 1, major + 1),
        Justification::Mp { minor, major } => format!("mp {} {}", minor + 1, major + 1),
        Justification::Ext { line, premise } => format!("ext {} {premise}", line + 1),
        Justification::HypSub {
            line,
            name: Some(n),
            ..
        } => format!("hypsub {} {n}", line + 1),
        Justification::HypSub { line, sigma, .. } => format!("hypsub {} {sigma}", line + 1),
        Justification::Ge4 { p, lhs, rhs } => format!("ge4({p}; {}; {})", terms(lhs), terms(rhs)),
    }
}

/// The proof block only; the theory it refers to is printed by name.
pub fn dump_proof(proof: &Proof) -> String {
    let mut out = String::from("proof");
    if let Some(n) = &proof.name {
        let _ = write!(out, " {n}");
    }
    let _ = write!(out, " over {} in {}", proof.signature().name(), proof.logic);
    if proof.theory.name != "none" || !proof.theory.items.is_empty() {
        let _ = write!(out, " from {}", proof.theory.name);
    }
    out.push('\n');
    for (i, line) in proof.lines.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {}: {} by {}",
            i + 1,
            line.stated,
            dump_justification(&line.just)
        );
    }
    out
}
