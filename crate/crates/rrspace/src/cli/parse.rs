//! Text formats: polynomials, elements, place ids, divisors and curve files.
//!
//! Expressions use integer literals, `+ - * / ^`, parentheses and the
//! variables `t x` (affine) or `X0 X1 X2` (projective). Whitespace is ignored.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::divisors::Divisor;
use crate::error::{Error, Result};
use crate::field_tower::{is_irreducible, Field, Poly, PrimeField};
use crate::funcfield::{BiPoly, CurveModel, FunctionFieldElement, RationalFunction, TPoly};
use crate::om_places::{Center, PlaceId};
use crate::rr_engine::{prepare_curve, HomogeneousPoly};

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number `{s}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(src: &str, start: Pos) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut pos = start;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        if c == '\n' {
            chars.next();
            pos.line += 1;
            pos.column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            pos.column += 1;
            continue;
        }
        if c.is_ascii_digit() || c.is_ascii_alphabetic() {
            let mut s = String::new();
            let digits = c.is_ascii_digit();
            while let Some(&d) = chars.peek() {
                let ok = if digits {
                    d.is_ascii_digit()
                } else {
                    d.is_ascii_alphanumeric()
                };
                if !ok {
                    break;
                }
                s.push(d);
                chars.next();
                pos.column += 1;
            }
            out.push((if digits { Tok::Int(s) } else { Tok::Ident(s) }, here));
            continue;
        }
        if "+-*/^()[];".contains(c) {
            chars.next();
            pos.column += 1;
            out.push((Tok::Sym(c), here));
            continue;
        }
        return Err(syntax(here, format!("unexpected character `{c}`")));
    }
    out.push((Tok::End, pos));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Expr {
    Int(String),
    Var(String, Pos),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, usize),
}

#[derive(Clone, Debug)]
struct Node {
    expr: Expr,
    pos: Pos,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn new(src: &str, start: Pos) -> Result<Self> {
        Ok(Parser {
            toks: lex(src, start)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<Pos> {
        let pos = self.pos();
        if self.eat(c) {
            Ok(pos)
        } else {
            Err(syntax(
                pos,
                format!("expected `{c}`, found {}", self.peek().describe()),
            ))
        }
    }

    fn finish(&self) -> Result<()> {
        match self.peek() {
            Tok::End => Ok(()),
            t => Err(syntax(self.pos(), format!("unexpected {}", t.describe()))),
        }
    }

    fn uint(&mut self) -> Result<(usize, Pos)> {
        match self.bump() {
            (Tok::Int(s), pos) => s
                .parse()
                .map(|v| (v, pos))
                .map_err(|_| syntax(pos, "integer too large")),
            (t, pos) => Err(syntax(pos, format!("expected an integer, found {}", t.describe()))),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let pos = self.pos();
        let mut acc = if self.eat('-') {
            let t = self.term()?;
            Node {
                expr: Expr::Neg(Box::new(t.expr)),
                pos,
            }
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('+' | '-')) => *c,
                _ => return Ok(acc),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.term()?;
            acc = Node {
                expr: Expr::Bin(op, Box::new(acc.expr), Box::new(rhs.expr), pos),
                pos,
            };
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut acc = self.power()?;
        loop {
            let op = match self.peek() {
                Tok::Sym(c @ ('*' | '/')) => *c,
                _ => return Ok(acc),
            };
            let pos = self.pos();
            self.bump();
            let rhs = self.power()?;
            acc = Node {
                expr: Expr::Bin(op, Box::new(acc.expr), Box::new(rhs.expr), pos),
                pos,
            };
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let (e, pos) = self.uint()?;
        if e > MAX_EXPONENT {
            return Err(syntax(pos, format!("exponent above {MAX_EXPONENT}")));
        }
        Ok(Node {
            expr: Expr::Pow(Box::new(base.expr), e),
            pos: base.pos,
        })
    }

    fn atom(&mut self) -> Result<Node> {
        match self.bump() {
            (Tok::Int(s), pos) => Ok(Node {
                expr: Expr::Int(s),
                pos,
            }),
            (Tok::Ident(s), pos) => Ok(Node {
                expr: Expr::Var(s, pos),
                pos,
            }),
            (Tok::Sym('('), _) => {
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            (t, pos) => Err(syntax(pos, format!("expected a term, found {}", t.describe()))),
        }
    }
}

fn int_mod(k: &PrimeField, s: &str) -> u64 {
    s.bytes()
        .fold(0u64, |a, d| (a * 10 + (d - b'0') as u64) % k.p())
}

type Sparse = BTreeMap<[usize; 3], u64>;

fn sp_add(k: &PrimeField, a: &Sparse, b: &Sparse, sign: bool) -> Sparse {
    let mut out = a.clone();
    for (e, c) in b {
        let s = out.entry(*e).or_insert(0);
        *s = if sign { k.add(s, c) } else { k.sub(s, c) };
    }
    out.retain(|_, c| *c != 0);
    out
}

fn sp_mul(k: &PrimeField, a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
            let s = out.entry(e).or_insert(0);
            *s = k.add(s, &k.mul(ca, cb));
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn sp_const(c: u64) -> Sparse {
    [([0; 3], c)].into_iter().filter(|(_, c)| *c != 0).collect()
}

// `pos` locates the whole expression; variables and operators carry their own.
fn to_sparse(k: &PrimeField, e: &Expr, vars: &[&str], pos: Pos) -> Result<Sparse> {
    Ok(match e {
        Expr::Int(s) => sp_const(int_mod(k, s)),
        Expr::Var(v, at) => {
            let i = vars
                .iter()
                .position(|w| w == v)
                .ok_or_else(|| syntax(*at, format!("unknown variable `{v}`")))?;
            let mut ex = [0; 3];
            ex[i] = 1;
            [(ex, 1)].into_iter().collect()
        }
        Expr::Neg(a) => sp_add(k, &Sparse::new(), &to_sparse(k, a, vars, pos)?, false),
        Expr::Bin(op, a, b, at) => {
            let (a, b) = (to_sparse(k, a, vars, pos)?, to_sparse(k, b, vars, pos)?);
            match op {
                '+' => sp_add(k, &a, &b, true),
                '-' => sp_add(k, &a, &b, false),
                '*' => sp_mul(k, &a, &b),
                _ => return Err(syntax(*at, "division is not allowed in a polynomial")),
            }
        }
        Expr::Pow(a, n) => {
            let a = to_sparse(k, a, vars, pos)?;
            (0..*n).fold(sp_const(1), |acc, _| sp_mul(k, &acc, &a))
        }
    })
}

fn vars_of(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Int(_) => {}
        Expr::Var(v, _) => out.push(v.clone()),
        Expr::Neg(a) | Expr::Pow(a, _) => vars_of(a, out),
        Expr::Bin(_, a, b, _) => {
            vars_of(a, out);
            vars_of(b, out);
        }
    }
}

/// A complete expression; its position is that of its first token.
fn whole(src: &str, start: Pos) -> Result<Node> {
    let mut p = Parser::new(src, start)?;
    let first = p.pos();
    let n = p.expr()?;
    p.finish()?;
    Ok(Node {
        expr: n.expr,
        pos: first,
    })
}

const ORIGIN: Pos = Pos { line: 1, column: 1 };

fn bipoly_from_sparse(k: &PrimeField, s: &Sparse) -> BiPoly {
    let n = s.keys().map(|e| e[1]).max().unwrap_or(0);
    let mut rows: Vec<Vec<u64>> = vec![Vec::new(); n + 1];
    for (e, c) in s {
        let row = &mut rows[e[1]];
        if row.len() <= e[0] {
            row.resize(e[0] + 1, 0);
        }
        row[e[0]] = *c;
    }
    BiPoly::from_coeffs(rows.into_iter().map(|r| Poly::from_vec(k, r)).collect())
}

/// A polynomial in t.
pub fn parse_tpoly(k: &PrimeField, src: &str) -> Result<TPoly> {
    parse_tpoly_at(k, src, ORIGIN)
}

fn parse_tpoly_at(k: &PrimeField, src: &str, start: Pos) -> Result<TPoly> {
    let n = whole(src, start)?;
    let s = to_sparse(k, &n.expr, &["t"], n.pos)?;
    Ok(bipoly_from_sparse(k, &s).coeff(0))
}

/// A polynomial in t and x.
pub fn parse_bipoly(k: &PrimeField, src: &str) -> Result<BiPoly> {
    let n = whole(src, ORIGIN)?;
    Ok(bipoly_from_sparse(k, &to_sparse(k, &n.expr, &["t", "x"], n.pos)?))
}

/// A homogeneous polynomial in X0, X1, X2.
pub fn parse_projective(k: &PrimeField, src: &str) -> Result<HomogeneousPoly> {
    let n = whole(src, ORIGIN)?;
    let s = to_sparse(k, &n.expr, &["X0", "X1", "X2"], n.pos)?;
    HomogeneousPoly::new(*k, s).map_err(|e| match e {
        Error::InvalidInput(m) => syntax(n.pos, m),
        e => e,
    })
}

fn eval_element(m: &Arc<CurveModel>, e: &Expr, pos: Pos) -> Result<FunctionFieldElement> {
    let k = *m.field();
    Ok(match e {
        Expr::Int(s) => {
            FunctionFieldElement::from_rational(m, RationalFunction::constant(&k, int_mod(&k, s)))
        }
        Expr::Var(v, at) => match v.as_str() {
            "t" => FunctionFieldElement::t(m),
            "x" => FunctionFieldElement::x(m),
            _ => return Err(syntax(*at, format!("unknown variable `{v}`"))),
        },
        Expr::Neg(a) => eval_element(m, a, pos)?.neg(),
        Expr::Bin(op, a, b, at) => {
            let (a, b) = (eval_element(m, a, pos)?, eval_element(m, b, pos)?);
            match op {
                '+' => a.add(&b)?,
                '-' => a.sub(&b)?,
                '*' => a.mul(&b)?,
                _ => {
                    if b.is_zero() {
                        return Err(syntax(*at, "division by zero"));
                    }
                    a.div(&b)?
                }
            }
        }
        Expr::Pow(a, n) => eval_element(m, a, pos)?.pow(*n),
    })
}

/// An element of the function field, written as an expression in t and x.
pub fn parse_element(m: &Arc<CurveModel>, src: &str) -> Result<FunctionFieldElement> {
    let n = whole(src, ORIGIN)?;
    eval_element(m, &n.expr, n.pos)
}

/// `h` or `(h)/(c)`, which [`parse_element`] reads back.
pub fn format_element(b: &FunctionFieldElement) -> String {
    let k = *b.model().field();
    let (h, c) = b.to_common();
    let num = crate::funcfield::format_bipoly(&k, &h, "t", "x");
    if c.deg() == 0 {
        num
    } else {
        format!("({num})/({})", crate::funcfield::format_tpoly(&k, &c, "t"))
    }
}

fn center_at(k: &PrimeField, p: &mut Parser) -> Result<Center> {
    let start = p.pos();
    if let Tok::Ident(s) = p.peek() {
        if s == "inf" {
            p.bump();
            return Ok(Center::Infinity);
        }
    }
    let n = p.expr()?;
    let s = to_sparse(k, &n.expr, &["t"], n.pos)?;
    let c = bipoly_from_sparse(k, &s).coeff(0);
    if c.deg() < 1 || !c.is_monic(k) || !is_irreducible(k, &c) {
        return Err(syntax(start, "place center must be monic irreducible in t, or `inf`"));
    }
    Ok(Center::Finite(c))
}

fn place_at(k: &PrimeField, p: &mut Parser) -> Result<PlaceId> {
    p.expect('[')?;
    let c = center_at(k, p)?;
    p.expect(';')?;
    let (i, _) = p.uint()?;
    p.expect(']')?;
    Ok(PlaceId::new(c, i))
}

/// `[center;index]`, e.g. `[t-1;0]` or `[inf;0]`.
pub fn parse_place_id(k: &PrimeField, src: &str) -> Result<PlaceId> {
    let mut p = Parser::new(src, ORIGIN)?;
    let id = place_at(k, &mut p)?;
    p.finish()?;
    Ok(id)
}

/// `2*[t;0] + 3*[t;1] - [t-1;0] + [inf;0]`; empty or `0` is the zero divisor.
pub fn parse_divisor(k: &PrimeField, src: &str) -> Result<Divisor> {
    let mut p = Parser::new(src, ORIGIN)?;
    let mut d = Divisor::zero();
    if *p.peek() == Tok::End {
        return Ok(d);
    }
    if p.toks.len() == 2 && *p.peek() == Tok::Int("0".into()) {
        return Ok(d);
    }
    let mut first = true;
    loop {
        let sign = if p.eat('-') {
            -1
        } else {
            if !p.eat('+') && !first {
                p.finish()?;
                return Ok(d);
            }
            1
        };
        first = false;
        let mult = if let Tok::Int(_) = p.peek() {
            let (m, pos) = p.uint()?;
            p.expect('*')?;
            i64::try_from(m).map_err(|_| syntax(pos, "multiplicity too large"))?
        } else {
            1
        };
        let id = place_at(k, &mut p)?;
        d.add_term(id, sign * mult);
        if *p.peek() == Tok::End {
            return Ok(d);
        }
    }
}

/// Where a curve came from.
#[derive(Clone, Debug)]
pub enum CurveSource {
    Affine(BiPoly),
    Projective(HomogeneousPoly),
}

/// The contents of a curve file.
#[derive(Clone, Debug)]
pub struct CurveFile {
    pub field: PrimeField,
    pub source: CurveSource,
}

impl CurveFile {
    /// Affine input must be monic in x; projective input is prepared first.
    pub fn model(&self, cap: usize) -> Result<CurveModel> {
        match &self.source {
            CurveSource::Affine(f) => CurveModel::new(self.field, f.clone()),
            CurveSource::Projective(g) => prepare_curve(g, cap),
        }
    }
}

/// A polynomial for the given field, affine or projective by its variables.
pub fn parse_curve(k: PrimeField, src: &str) -> Result<CurveFile> {
    parse_curve_at(k, src, ORIGIN)
}

fn parse_curve_at(k: PrimeField, src: &str, start: Pos) -> Result<CurveFile> {
    let n = whole(src, start)?;
    let mut vars = Vec::new();
    vars_of(&n.expr, &mut vars);
    let projective = vars.iter().any(|v| v.starts_with('X'));
    let source = if projective {
        let s = to_sparse(&k, &n.expr, &["X0", "X1", "X2"], n.pos)?;
        CurveSource::Projective(HomogeneousPoly::new(k, s).map_err(|e| match e {
            Error::InvalidInput(m) => syntax(n.pos, m),
            e => e,
        })?)
    } else {
        let s = to_sparse(&k, &n.expr, &["t", "x"], n.pos)?;
        CurveSource::Affine(bipoly_from_sparse(&k, &s))
    };
    Ok(CurveFile { field: k, source })
}

/// Curve file: `field = p` and `polynomial = ...` lines, `#` comments.
/// The polynomial may continue over the following lines.
pub fn parse_curve_file(src: &str) -> Result<CurveFile> {
    let mut field: Option<PrimeField> = None;
    let mut poly: Option<(String, Pos)> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let pos = Pos {
            line: i + 1,
            column: 1,
        };
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(['=', ':']) else {
            match &mut poly {
                Some((s, _)) => {
                    s.push('\n');
                    s.push_str(line);
                    continue;
                }
                None => return Err(syntax(pos, "expected `key = value`")),
            }
        };
        let vpos = Pos {
            line: i + 1,
            column: key.chars().count() + 2,
        };
        match key.trim() {
            "field" | "p" => {
                let at = Pos {
                    column: vpos.column + value.chars().take_while(|c| c.is_whitespace()).count(),
                    ..vpos
                };
                let p: u64 = value
                    .trim()
                    .parse()
                    .map_err(|_| syntax(at, "expected a prime"))?;
                field = Some(PrimeField::new(p).map_err(|e| syntax(at, e.to_string()))?);
            }
            "polynomial" | "curve" => poly = Some((value.to_string(), vpos)),
            other => return Err(syntax(pos, format!("unknown key `{other}`"))),
        }
    }
    let end = Pos {
        line: src.lines().count().max(1),
        column: 1,
    };
    let k = field.ok_or_else(|| syntax(end, "missing `field`"))?;
    let (text, pos) = poly.ok_or_else(|| syntax(end, "missing `polynomial`"))?;
    parse_curve_at(k, &text, pos)
}

/// `inf` or a monic irreducible polynomial in t.
pub fn parse_center(k: &PrimeField, src: &str) -> Result<Center> {
    let mut p = Parser::new(src, ORIGIN)?;
    let c = center_at(k, &mut p)?;
    p.finish()?;
    Ok(c)
}
