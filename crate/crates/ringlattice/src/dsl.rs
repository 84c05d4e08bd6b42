//! Instance-spec language.
//!
//! A spec is a list of statements, one per line or separated by `;`:
//!
//! ```text
//! # comments run to the end of the line
//! option cap = 4096
//! ring k = zmod(2)
//! ring A = quotient(k, [x^2])
//! ring F = gf(2, 2)
//! ring S = product(A, F)
//! ext E = extension(S, base=[])
//! ```
//!
//! Constructors are `zmod(n)`, `gf(p, k)` or `gf(p, k, name)`,
//! `quotient(R, [poly, ...])`, `product(R, ...)` and
//! `idealization(R, module([orders...], {r: [[...], ...], ...}))`.
//! Element expressions are integer polynomials in named generators, with
//! tuples `(a, b)` for elements of products.

use std::fmt;

/// Position of a token, 1-based, columns counted in characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {}, column {}: {message}", pos.line, pos.col)]
pub struct DslError {
    pub pos: Pos,
    pub message: String,
}

impl DslError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        DslError { pos, message: message.into() }
    }
}

/// Integer-coefficient polynomial expression over named generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Name(String),
    Tuple(Vec<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// An expression together with where it starts, for semantic errors.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub pos: Pos,
    pub value: T,
}

impl<T: PartialEq> PartialEq for Located<T> {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl<T: Eq> Eq for Located<T> {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingExpr {
    Zmod(u64),
    Gf { p: u64, k: u32, generator: Option<String> },
    Quotient { ring: Located<String>, relations: Vec<Located<Expr>> },
    Product(Vec<Located<String>>),
    Idealization { ring: Located<String>, orders: Vec<u32>, action: Vec<(Located<Expr>, Vec<Vec<u32>>)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Option { name: String, value: u64 },
    Ring { name: String, expr: RingExpr },
    Ext { name: String, ring: Located<String>, base: Vec<Located<Expr>> },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct InstanceSpec {
    pub statements: Vec<Located<Statement>>,
}

/// Options a spec may set.
pub const OPTION_NAMES: [&str; 3] = ["cap", "seed", "node_limit"];

/// Name, base ring and base generators of an `ext` statement.
pub type ExtParts<'a> = (&'a str, &'a Located<String>, &'a [Located<Expr>]);

impl InstanceSpec {
    pub fn option(&self, name: &str) -> Option<u64> {
        self.statements.iter().rev().find_map(|s| match &s.value {
            Statement::Option { name: n, value } if n == name => Some(*value),
            _ => None,
        })
    }

    pub fn extension(&self) -> Option<ExtParts<'_>> {
        self.statements.iter().find_map(|s| match &s.value {
            Statement::Ext { name, ring, base } => Some((name.as_str(), ring, base.as_slice())),
            _ => None,
        })
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(char),
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const SYMBOLS: &str = "()[]{},=+-*^:;";

fn lex(text: &str) -> Result<Vec<(Pos, Tok)>, DslError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            out.push((pos, Tok::Newline));
            line += 1;
            col = 1;
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                chars.next();
                col += 1;
            }
        } else if c.is_whitespace() {
            chars.next();
            col += 1;
        } else if c.is_ascii_digit() {
            let mut value: u64 = 0;
            while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                value = value
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as u64))
                    .ok_or_else(|| DslError::new(pos, "integer literal too large"))?;
                chars.next();
                col += 1;
            }
            out.push((pos, Tok::Int(value)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric() || **c == '_') {
                s.push(c);
                chars.next();
                col += 1;
            }
            out.push((pos, Tok::Ident(s)));
        } else if SYMBOLS.contains(c) {
            chars.next();
            col += 1;
            out.push((pos, if c == ';' { Tok::Newline } else { Tok::Sym(c) }));
        } else {
            return Err(DslError::new(pos, format!("unexpected character {c:?}")));
        }
    }
    out.push((Pos { line, col }, Tok::Eof));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

/// Nesting bound for expressions, so hostile input cannot exhaust the stack.
const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u64 = 1 << 16;

struct Parser {
    toks: Vec<(Pos, Tok)>,
    at: usize,
    /// Set inside brackets, where line breaks are insignificant.
    nesting: usize,
    depth: usize,
}

pub fn parse_spec(text: &str) -> Result<InstanceSpec, DslError> {
    let mut p = Parser { toks: lex(text)?, at: 0, nesting: 0, depth: 0 };
    let mut spec = InstanceSpec::default();
    let mut names: Vec<String> = Vec::new();
    let mut ext_seen = false;
    loop {
        while p.peek() == &Tok::Newline {
            p.at += 1;
        }
        if p.peek() == &Tok::Eof {
            break;
        }
        let stmt = p.statement()?;
        match &stmt.value {
            Statement::Ring { name, expr } => {
                for r in referenced(expr) {
                    if !names.contains(&r.value) {
                        return Err(DslError::new(r.pos, format!("unknown ring `{}`", r.value)));
                    }
                }
                if names.contains(name) {
                    return Err(DslError::new(stmt.pos, format!("`{name}` is already declared")));
                }
                names.push(name.clone());
            }
            Statement::Ext { name, ring, .. } => {
                if ext_seen {
                    return Err(DslError::new(stmt.pos, "only one extension may be declared"));
                }
                if !names.contains(&ring.value) {
                    return Err(DslError::new(ring.pos, format!("unknown ring `{}`", ring.value)));
                }
                if names.contains(name) {
                    return Err(DslError::new(stmt.pos, format!("`{name}` is already declared")));
                }
                ext_seen = true;
            }
            Statement::Option { .. } => {}
        }
        spec.statements.push(stmt);
        if !matches!(p.peek(), Tok::Newline | Tok::Eof) {
            return p.unexpected("end of statement");
        }
    }
    if !ext_seen {
        return Err(DslError::new(p.pos(), "missing `ext <name> = extension(<ring>, base=[...])` declaration"));
    }
    Ok(spec)
}

/// Ring names a constructor refers to.
fn referenced(expr: &RingExpr) -> Vec<&Located<String>> {
    match expr {
        RingExpr::Zmod(_) | RingExpr::Gf { .. } => Vec::new(),
        RingExpr::Quotient { ring, .. } | RingExpr::Idealization { ring, .. } => vec![ring],
        RingExpr::Product(rs) => rs.iter().collect(),
    }
}

impl Parser {
    fn peek(&mut self) -> &Tok {
        if self.nesting > 0 {
            while self.toks[self.at].1 == Tok::Newline {
                self.at += 1;
            }
        }
        &self.toks[self.at].1
    }

    fn pos(&mut self) -> Pos {
        self.peek();
        self.toks[self.at].0
    }

    fn next(&mut self) -> (Pos, Tok) {
        self.peek();
        let t = self.toks[self.at].clone();
        if t.1 != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&mut self, wanted: &str) -> Result<T, DslError> {
        let pos = self.pos();
        let found = self.peek().describe();
        Err(DslError::new(pos, format!("expected {wanted}, found {found}")))
    }

    fn sym(&mut self, c: char) -> Result<Pos, DslError> {
        if self.peek() == &Tok::Sym(c) {
            Ok(self.next().0)
        } else {
            self.unexpected(&format!("`{c}`"))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == &Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<Located<String>, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let pos = self.next().0;
                Ok(Located { pos, value: s })
            }
            _ => self.unexpected("a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, DslError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.next().0),
            _ => self.unexpected(&format!("`{kw}`")),
        }
    }

    fn int(&mut self) -> Result<Located<u64>, DslError> {
        match *self.peek() {
            Tok::Int(n) => {
                let pos = self.next().0;
                Ok(Located { pos, value: n })
            }
            _ => self.unexpected("an integer"),
        }
    }

    fn small_int(&mut self) -> Result<Located<u32>, DslError> {
        let n = self.int()?;
        let value = u32::try_from(n.value).map_err(|_| DslError::new(n.pos, "integer does not fit in 32 bits"))?;
        Ok(Located { pos: n.pos, value })
    }

    fn open(&mut self, c: char) -> Result<(), DslError> {
        self.sym(c)?;
        self.nesting += 1;
        Ok(())
    }

    fn close(&mut self, c: char) -> Result<(), DslError> {
        self.sym(c)?;
        self.nesting -= 1;
        Ok(())
    }

    /// Comma-separated items up to the closing delimiter (already opened).
    fn list<T>(&mut self, close: char, mut item: impl FnMut(&mut Self) -> Result<T, DslError>) -> Result<Vec<T>, DslError> {
        let mut out = Vec::new();
        if self.peek() != &Tok::Sym(close) {
            loop {
                out.push(item(self)?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.close(close)?;
        Ok(out)
    }

    fn statement(&mut self) -> Result<Located<Statement>, DslError> {
        let head = self.ident()?;
        let pos = head.pos;
        let value = match head.value.as_str() {
            "option" => {
                let name = self.ident()?;
                if !OPTION_NAMES.contains(&name.value.as_str()) {
                    return Err(DslError::new(
                        name.pos,
                        format!("unknown option `{}` (known: {})", name.value, OPTION_NAMES.join(", ")),
                    ));
                }
                self.sym('=')?;
                let value = self.int()?.value;
                Statement::Option { name: name.value, value }
            }
            "ring" => {
                let name = self.ident()?;
                self.sym('=')?;
                let expr = self.ring_expr()?;
                Statement::Ring { name: name.value, expr }
            }
            "ext" => {
                let name = self.ident()?;
                self.sym('=')?;
                self.keyword("extension")?;
                self.open('(')?;
                let ring = self.ident()?;
                self.sym(',')?;
                self.keyword("base")?;
                self.sym('=')?;
                self.open('[')?;
                let base = self.list(']', |p| p.located_expr())?;
                self.close(')')?;
                Statement::Ext { name: name.value, ring, base }
            }
            other => {
                return Err(DslError::new(pos, format!("expected `ring`, `ext` or `option`, found `{other}`")));
            }
        };
        Ok(Located { pos, value })
    }

    fn ring_expr(&mut self) -> Result<RingExpr, DslError> {
        let ctor = self.ident()?;
        self.open('(')?;
        let expr = match ctor.value.as_str() {
            "zmod" => {
                let n = self.int()?;
                if n.value < 2 {
                    return Err(DslError::new(n.pos, format!("modulus must be ≥ 2 (got {})", n.value)));
                }
                RingExpr::Zmod(n.value)
            }
            "gf" => {
                let p = self.int()?;
                if p.value < 2 {
                    return Err(DslError::new(p.pos, format!("modulus must be ≥ 2 (got {})", p.value)));
                }
                if !is_prime(p.value) {
                    return Err(DslError::new(p.pos, format!("characteristic {} is not a prime", p.value)));
                }
                self.sym(',')?;
                let k = self.small_int()?;
                if k.value == 0 {
                    return Err(DslError::new(k.pos, "extension degree must be ≥ 1"));
                }
                let generator = if self.eat(',') { Some(self.ident()?.value) } else { None };
                RingExpr::Gf { p: p.value, k: k.value, generator }
            }
            "quotient" => {
                let ring = self.ident()?;
                self.sym(',')?;
                self.open('[')?;
                let relations = self.list(']', |p| p.located_expr())?;
                RingExpr::Quotient { ring, relations }
            }
            "product" => {
                let first = self.ident()?;
                let mut rings = vec![first];
                while self.eat(',') {
                    rings.push(self.ident()?);
                }
                RingExpr::Product(rings)
            }
            "idealization" => {
                let ring = self.ident()?;
                self.sym(',')?;
                self.keyword("module")?;
                self.open('(')?;
                self.open('[')?;
                let orders_at = self.pos();
                let orders: Vec<u32> = self.list(']', |p| p.small_int().map(|n| n.value))?;
                if orders.is_empty() {
                    return Err(DslError::new(orders_at, "a module needs at least one generator"));
                }
                if let Some(o) = orders.iter().find(|&&o| o < 2) {
                    return Err(DslError::new(orders_at, format!("module generator orders must be ≥ 2 (got {o})")));
                }
                self.sym(',')?;
                self.open('{')?;
                let action = self.list('}', |p| {
                    let key = p.located_expr()?;
                    p.sym(':')?;
                    let at = p.pos();
                    let m = p.matrix()?;
                    if m.len() != orders.len() || m.iter().any(|r| r.len() != orders.len()) {
                        return Err(DslError::new(
                            at,
                            format!("action matrix must be {0}×{0}", orders.len()),
                        ));
                    }
                    Ok((key, m))
                })?;
                self.close(')')?;
                RingExpr::Idealization { ring, orders, action }
            }
            other => {
                return Err(DslError::new(
                    ctor.pos,
                    format!("unknown constructor `{other}` (expected zmod, gf, quotient, product or idealization)"),
                ));
            }
        };
        self.close(')')?;
        Ok(expr)
    }

    fn matrix(&mut self) -> Result<Vec<Vec<u32>>, DslError> {
        self.open('[')?;
        self.list(']', |p| {
            p.open('[')?;
            p.list(']', |q| q.small_int().map(|n| n.value))
        })
    }

    fn located_expr(&mut self) -> Result<Located<Expr>, DslError> {
        let pos = self.pos();
        Ok(Located { pos, value: self.expr()? })
    }

    fn deeper(&mut self) -> Result<(), DslError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            let pos = self.pos();
            return Err(DslError::new(pos, "expression nested too deeply"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        self.deeper()?;
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                break;
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut lhs = self.unary()?;
        while self.eat('*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        if self.eat('-') {
            self.deeper()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.int()?;
            if e.value > MAX_EXPONENT {
                return Err(DslError::new(e.pos, format!("exponent {} is too large", e.value)));
            }
            return Ok(Expr::Pow(Box::new(base), e.value as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.at += 1;
                Ok(Expr::Name(s))
            }
            Tok::Sym('(') => {
                self.open('(')?;
                let first = self.expr()?;
                if self.eat(',') {
                    let mut items = vec![first, self.expr()?];
                    while self.eat(',') {
                        items.push(self.expr()?);
                    }
                    self.close(')')?;
                    Ok(Expr::Tuple(items))
                } else {
                    self.close(')')?;
                    Ok(first)
                }
            }
            _ => self.unexpected("an expression"),
        }
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

// ---------------------------------------------------------------------------
// Printer

/// Binding strength used to decide where parentheses are needed.
fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(..) => 3,
        Expr::Pow(..) => 4,
        Expr::Int(_) | Expr::Name(_) | Expr::Tuple(_) => 5,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if precedence(e) < min {
        write!(f, "(")?;
        write_at(f, e, 0)?;
        return write!(f, ")");
    }
    match e {
        Expr::Int(n) => write!(f, "{n}"),
        Expr::Name(s) => write!(f, "{s}"),
        Expr::Tuple(items) => {
            write!(f, "(")?;
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write_at(f, x, 0)?;
            }
            write!(f, ")")
        }
        Expr::Neg(x) => {
            write!(f, "-")?;
            write_at(f, x, 3)
        }
        Expr::Add(a, b) => {
            write_at(f, a, 1)?;
            write!(f, " + ")?;
            write_at(f, b, 2)
        }
        Expr::Sub(a, b) => {
            write_at(f, a, 1)?;
            write!(f, " - ")?;
            write_at(f, b, 2)
        }
        Expr::Mul(a, b) => {
            write_at(f, a, 2)?;
            write!(f, "*")?;
            write_at(f, b, 3)
        }
        Expr::Pow(a, n) => {
            write_at(f, a, 5)?;
            write!(f, "^{n}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(f, self, 0)
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn matrix_text(m: &[Vec<u32>]) -> String {
    format!("[{}]", join(m.iter().map(|r| format!("[{}]", join(r)))))
}

impl fmt::Display for RingExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingExpr::Zmod(n) => write!(f, "zmod({n})"),
            RingExpr::Gf { p, k, generator: None } => write!(f, "gf({p}, {k})"),
            RingExpr::Gf { p, k, generator: Some(g) } => write!(f, "gf({p}, {k}, {g})"),
            RingExpr::Quotient { ring, relations } => {
                write!(f, "quotient({}, [{}])", ring.value, join(relations.iter().map(|r| &r.value)))
            }
            RingExpr::Product(rings) => write!(f, "product({})", join(rings.iter().map(|r| &r.value))),
            RingExpr::Idealization { ring, orders, action } => {
                let entries = join(action.iter().map(|(k, m)| format!("{}: {}", k.value, matrix_text(m))));
                write!(f, "idealization({}, module([{}], {{{entries}}}))", ring.value, join(orders))
            }
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Option { name, value } => write!(f, "option {name} = {value}"),
            Statement::Ring { name, expr } => write!(f, "ring {name} = {expr}"),
            Statement::Ext { name, ring, base } => {
                write!(f, "ext {name} = extension({}, base=[{}])", ring.value, join(base.iter().map(|b| &b.value)))
            }
        }
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_modulus_is_rejected_with_position() {
        let err = parse_spec("ring R = zmod(0)\next E = extension(R, base=[])").unwrap_err();
        assert_eq!(err.pos, Pos { line: 1, col: 15 });
        assert!(err.message.contains("modulus must be ≥ 2"), "{err}");
    }

    #[test]
    fn single_ring_declaration() {
        let spec = parse_spec("ring R = zmod(4)\next E = extension(R, base=[])").unwrap();
        assert_eq!(spec.statements.len(), 2);
        assert_eq!(spec.statements[0].value, Statement::Ring { name: "R".into(), expr: RingExpr::Zmod(4) });
    }

    #[test]
    fn printer_parenthesizes_by_precedence() {
        let spec = parse_spec("ring k = zmod(2)\nring A = quotient(k, [(x+1)^2*(x - (1 - x)), -x^3, -(x*x)])\next E = extension(A, base=[])").unwrap();
        let text = spec.to_string();
        assert!(text.contains("quotient(k, [(x + 1)^2*(x - (1 - x)), -x^3, -(x*x)])"), "{text}");
        assert_eq!(parse_spec(&text).unwrap(), spec);
    }

    #[test]
    fn brackets_allow_line_breaks() {
        let spec = parse_spec("ring k = zmod(2)\nring A = quotient(k, [\n  x^2,\n  y^2,\n  x*y\n])\next E = extension(A, base=[])").unwrap();
        assert_eq!(spec.statements.len(), 3);
    }

    #[test]
    fn errors_point_at_the_offending_token() {
        let cases = [
            ("ring R = zmod(4", Pos { line: 1, col: 16 }),
            ("ring R = foo(4)", Pos { line: 1, col: 10 }),
            ("ring R = zmod(4)\nring S = product(R, T)", Pos { line: 2, col: 21 }),
            ("ring R = zmod(4)\nring R = zmod(2)", Pos { line: 2, col: 1 }),
            ("ring R = zmod(4) $", Pos { line: 1, col: 18 }),
            ("ring R = gf(4, 2)", Pos { line: 1, col: 13 }),
            ("ring R = zmod(4)", Pos { line: 1, col: 17 }),
        ];
        for (text, pos) in cases {
            let err = parse_spec(text).unwrap_err();
            assert_eq!(err.pos, pos, "{text:?}: {err}");
        }
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let text = format!("ring k = zmod(2)\nring A = quotient(k, [{}x{}])\next E = extension(A, base=[])", "(".repeat(5000), ")".repeat(5000));
        assert!(parse_spec(&text).unwrap_err().message.contains("nested"));
        let text = format!("ring k = zmod(2)\nring A = quotient(k, [{}x])\next E = extension(A, base=[])", "-".repeat(5000));
        assert!(parse_spec(&text).is_err());
    }
}
