//! The definition-file format.
//!
//! Line oriented: `[section]` headers followed by `key = value` lines. `#`
//! at the start of a line (after optional spaces) starts a comment; inside a
//! value `#` is part of an identifier such as `t#1`. A value that opens a
//! bracket may continue over several lines until the bracket closes.
//!
//! ```text
//! file     = { blank | comment | header | entry }
//! header   = "[" word { word } "]"
//! entry    = key "=" value
//! value    = words | exprs | matrix
//! words    = word { "," word }            (keys listed in WORD_KEYS)
//! exprs    = expr { "," expr }            (any other key)
//! matrix   = "[" [ row { ";" row } ] "]"
//! row      = expr { "," expr }
//! expr     = term { ("+" | "-") term }
//! term     = factor { "*" factor }
//! factor   = "-" factor | power
//! power    = atom [ "^" integer ]
//! atom     = integer [ "/" integer ] | ident | "(" expr ")"
//! ident    = letter { letter | digit | "_" | "#" | "'" }
//! ```
//!
//! Parsing then printing then parsing gives back the same syntax tree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebroid::{Algebroid, AlgebroidBuilder, Flatness};
use crate::comodule::Comodule;
use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::module::FPModule;
use crate::ring::{Algebra, Budget, Field, Matrix, MonomialOrder, OrderKind, Poly, PresentedAlgebra};

/// Keys whose values are comma-separated words rather than expressions.
pub const WORD_KEYS: &[&str] = &[
    "characteristic",
    "generators",
    "kind",
    "low",
    "name",
    "order",
    "ranking",
    "terms",
    "variables",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// A non-negative rational literal.
    Num(BigRational),
    Var(String),
    Neg(Box<Expr>),
    /// At least two summands.
    Add(Vec<Expr>),
    /// At least two factors.
    Mul(Vec<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Words(Vec<String>),
    Exprs(Vec<Expr>),
    Matrix(Vec<Vec<Expr>>),
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: Value,
    pub line: usize,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.value == other.value
    }
}

#[derive(Clone, Debug)]
pub struct Section {
    /// Header words, e.g. `["comodule", "A_mod_x2"]`.
    pub header: Vec<String>,
    pub entries: Vec<Entry>,
    pub line: usize,
}

impl PartialEq for Section {
    fn eq(&self, other: &Self) -> bool {
        self.header == other.header && self.entries == other.entries
    }
}

impl Section {
    pub fn kind(&self) -> &str {
        &self.header[0]
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Document {
    pub sections: Vec<Section>,
}

fn perr<T>(line: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        line,
        message: message.into(),
    })
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '#' || c == '\''
}

fn lex(s: &str, line: usize) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[st..i].iter().collect();
            out.push(Tok::Int(digits.parse().unwrap()));
        } else if is_ident_start(c) {
            let st = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Tok::Ident(chars[st..i].iter().collect()));
        } else if "+-*/^(),;[]".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return perr(line, format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

// --------------------------------------------------------------- parser

struct P<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

impl P<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Sym(c))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(self.line, format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![self.term()?];
        loop {
            if self.eat('+') {
                items.push(self.term()?);
            } else if self.eat('-') {
                items.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Add(items) })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut items = vec![self.factor()?];
        while self.eat('*') {
            items.push(self.factor()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Mul(items) })
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| Error::Parse {
                            line: self.line,
                            message: "exponent too large".into(),
                        })?;
                    self.pos += 1;
                    return Ok(Expr::Pow(Box::new(base), e));
                }
                _ => return perr(self.line, "expected an integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                if self.is_sym('/') {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            self.pos += 1;
                            Ok(Expr::Num(BigRational::new(n, d)))
                        }
                        _ => perr(self.line, "expected a nonzero integer denominator"),
                    }
                } else {
                    Ok(Expr::Num(BigRational::from_integer(n)))
                }
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(t) => perr(self.line, format!("unexpected token {t:?}")),
            None => perr(self.line, "unexpected end of expression"),
        }
    }

    fn done(&self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(t) => perr(self.line, format!("trailing token {t:?}")),
        }
    }
}

/// Parses a single expression.
pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s, 0)?;
    let mut p = P {
        toks: &toks,
        pos: 0,
        line: 0,
    };
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

fn parse_value(key: &str, text: &str, line: usize) -> Result<Value> {
    let text = text.trim();
    if WORD_KEYS.contains(&key) {
        if text.is_empty() {
            return Ok(Value::Words(Vec::new()));
        }
        let mut words = Vec::new();
        for w in text.split(',') {
            let w = w.trim();
            if w.is_empty() || !w.chars().all(|c| is_ident_char(c) || c == '-') {
                return perr(line, format!("bad word {w:?} for key {key}"));
            }
            words.push(w.to_string());
        }
        return Ok(Value::Words(words));
    }
    let toks = lex(text, line)?;
    let mut p = P {
        toks: &toks,
        pos: 0,
        line,
    };
    if p.eat('[') {
        let mut rows = Vec::new();
        if !p.eat(']') {
            loop {
                let mut row = vec![p.expr()?];
                while p.eat(',') {
                    row.push(p.expr()?);
                }
                rows.push(row);
                if p.eat(']') {
                    break;
                }
                p.expect(';')?;
            }
            if rows.iter().any(|r| r.len() != rows[0].len()) {
                return perr(line, "matrix rows have different lengths");
            }
        }
        p.done()?;
        return Ok(Value::Matrix(rows));
    }
    let mut items = Vec::new();
    if p.peek().is_some() {
        items.push(p.expr()?);
        while p.eat(',') {
            items.push(p.expr()?);
        }
    }
    p.done()?;
    Ok(Value::Exprs(items))
}

fn bracket_depth(s: &str) -> i64 {
    s.chars()
        .map(|c| match c {
            '[' => 1,
            ']' => -1,
            _ => 0,
        })
        .sum()
}

pub fn parse_document(text: &str) -> Result<Document> {
    let mut doc = Document::default();
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let lineno = i + 1;
        let raw = lines[i].trim();
        i += 1;
        if raw.is_empty() || raw.starts_with('#') {
            continue;
        }
        if let Some(rest) = raw.strip_prefix('[') {
            let Some(inner) = rest.strip_suffix(']') else {
                return perr(lineno, "unterminated section header");
            };
            let header: Vec<String> = inner.split_whitespace().map(str::to_string).collect();
            if header.is_empty() {
                return perr(lineno, "empty section header");
            }
            doc.sections.push(Section {
                header,
                entries: Vec::new(),
                line: lineno,
            });
            continue;
        }
        let Some((key, val)) = raw.split_once('=') else {
            return perr(lineno, "expected 'key = value' or a section header");
        };
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| is_ident_char(c) || c == '-') {
            return perr(lineno, format!("bad key {key:?}"));
        }
        let mut val = val.to_string();
        let mut depth = bracket_depth(&val);
        while depth > 0 && i < lines.len() {
            val.push(' ');
            val.push_str(lines[i].trim());
            depth = bracket_depth(&val);
            i += 1;
        }
        if depth != 0 {
            return perr(lineno, "unbalanced brackets");
        }
        let Some(sec) = doc.sections.last_mut() else {
            return perr(lineno, "entry before any section header");
        };
        if sec.get(key).is_some() {
            return perr(lineno, format!("duplicate key {key}"));
        }
        let value = parse_value(key, &val, lineno)?;
        sec.entries.push(Entry {
            key: key.to_string(),
            value,
            line: lineno,
        });
    }
    Ok(doc)
}

// -------------------------------------------------------------- printer

/// Precedence contexts for printing.
#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum Ctx {
    Sum,
    Term,
    Factor,
    Base,
}

fn write_num(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, ctx: Ctx) -> fmt::Result {
    let paren = match e {
        Expr::Num(r) => ctx == Ctx::Base && !r.denom().is_one(),
        Expr::Var(_) => false,
        Expr::Neg(_) | Expr::Pow(..) => ctx == Ctx::Base,
        Expr::Add(_) => ctx >= Ctx::Term,
        Expr::Mul(_) => ctx >= Ctx::Factor,
    };
    if paren {
        write!(f, "(")?;
        write_expr(f, e, Ctx::Sum)?;
        return write!(f, ")");
    }
    match e {
        Expr::Num(r) => write_num(f, r),
        Expr::Var(v) => write!(f, "{v}"),
        Expr::Neg(x) => {
            write!(f, "-")?;
            write_expr(f, x, Ctx::Factor)
        }
        Expr::Add(items) => {
            for (i, it) in items.iter().enumerate() {
                match (i, it) {
                    (0, _) => write_expr(f, it, Ctx::Term)?,
                    (_, Expr::Neg(x)) => {
                        write!(f, " - ")?;
                        write_expr(f, x, Ctx::Term)?;
                    }
                    _ => {
                        write!(f, " + ")?;
                        write_expr(f, it, Ctx::Term)?;
                    }
                }
            }
            Ok(())
        }
        Expr::Mul(items) => {
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    write!(f, "*")?;
                }
                write_expr(f, it, Ctx::Factor)?;
            }
            Ok(())
        }
        Expr::Pow(b, n) => {
            write_expr(f, b, Ctx::Base)?;
            write!(f, "^{n}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, Ctx::Sum)
    }
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Words(w) => write!(f, "{}", w.join(", ")),
            Value::Exprs(e) => write!(f, "{}", join(e, ", ")),
            Value::Matrix(rows) => {
                let rows: Vec<String> = rows.iter().map(|r| join(r, ", ")).collect();
                write!(f, "[{}]", rows.join("; "))
            }
        }
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "[{}]", s.header.join(" "))?;
            for e in &s.entries {
                let v = e.value.to_string();
                if v.is_empty() {
                    writeln!(f, "{} =", e.key)?;
                } else {
                    writeln!(f, "{} = {v}", e.key)?;
                }
            }
        }
        Ok(())
    }
}

// ----------------------------------------------------------- evaluation

/// Evaluates an expression in a presented algebra, resolving variables by
/// name.
pub fn eval(e: &Expr, alg: &Algebra, line: usize) -> Result<Poly> {
    Ok(match e {
        Expr::Num(r) => {
            let s = alg.field().from_rational(r).map_err(|err| Error::Parse {
                line,
                message: err.to_string(),
            })?;
            alg.constant(s)
        }
        Expr::Var(v) => match alg.var_index(v) {
            Some(i) => alg.var(i),
            None => return perr(line, format!("unknown variable {v} in {}", alg.name())),
        },
        Expr::Neg(x) => alg.neg(&eval(x, alg, line)?),
        Expr::Add(items) => {
            let mut acc = alg.zero();
            for it in items {
                acc = alg.add(&acc, &eval(it, alg, line)?);
            }
            acc
        }
        Expr::Mul(items) => {
            let mut acc = alg.one();
            for it in items {
                acc = alg.mul(&acc, &eval(it, alg, line)?);
            }
            acc
        }
        Expr::Pow(b, n) => alg.pow(&eval(b, alg, line)?, *n),
    })
}

/// Renders a polynomial as an expression, terms in the ring's order.
pub fn poly_to_expr(alg: &Algebra, p: &Poly) -> Expr {
    let names = alg.var_names();
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let r = c.to_rational();
        let neg = r < BigRational::zero();
        let mag = if neg { -r } else { r };
        let mut factors = Vec::new();
        if !mag.is_one() || m.is_one() {
            factors.push(Expr::Num(mag));
        }
        for (i, &e) in m.exponents().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(Expr::Var(names[i].clone())),
                _ => factors.push(Expr::Pow(Box::new(Expr::Var(names[i].clone())), e as u32)),
            }
        }
        let t = if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Mul(factors) };
        terms.push(if neg { Expr::Neg(Box::new(t)) } else { t });
    }
    match terms.len() {
        0 => Expr::Num(BigRational::zero()),
        1 => terms.pop().unwrap(),
        _ => Expr::Add(terms),
    }
}

// ---------------------------------------------------------- elaboration

/// Everything a definition file declares, built and ready to use.
#[derive(Clone)]
pub struct Definition {
    pub algebroid: Algebroid,
    pub comodules: Vec<(String, Comodule)>,
    pub complexes: Vec<(String, Complex)>,
    /// Where each comodule was declared.
    pub comodule_lines: BTreeMap<String, usize>,
}

impl fmt::Debug for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Definition")
            .field("algebroid", &self.algebroid.name)
            .field("comodules", &self.comodules.iter().map(|c| &c.0).collect::<Vec<_>>())
            .field("complexes", &self.complexes.iter().map(|c| &c.0).collect::<Vec<_>>())
            .finish()
    }
}

impl Definition {
    pub fn comodule(&self, name: &str) -> Option<&Comodule> {
        self.comodules.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn complex(&self, name: &str) -> Option<&Complex> {
        self.complexes.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

fn section<'a>(doc: &'a Document, kind: &str) -> Result<&'a Section> {
    let mut it = doc.sections.iter().filter(|s| s.kind() == kind);
    let s = it.next().ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("missing [{kind}] section"),
    })?;
    if let Some(dup) = it.next() {
        return perr(dup.line, format!("duplicate [{kind}] section"));
    }
    Ok(s)
}

fn words<'a>(s: &'a Section, key: &str) -> Result<Option<(&'a [String], usize)>> {
    match s.get(key) {
        None => Ok(None),
        Some(Entry {
            value: Value::Words(w),
            line,
            ..
        }) => Ok(Some((w, *line))),
        Some(e) => perr(e.line, format!("{key} expects words")),
    }
}

fn word<'a>(s: &'a Section, key: &str) -> Result<Option<(&'a str, usize)>> {
    match words(s, key)? {
        None => Ok(None),
        Some((w, line)) if w.len() == 1 => Ok(Some((&w[0], line))),
        Some((_, line)) => perr(line, format!("{key} expects a single word")),
    }
}

fn int_word(s: &Section, key: &str) -> Result<Option<(i64, usize)>> {
    match word(s, key)? {
        None => Ok(None),
        Some((w, line)) => w
            .parse()
            .map(|n| Some((n, line)))
            .map_err(|_| Error::Parse {
                line,
                message: format!("{key} expects an integer"),
            }),
    }
}

fn exprs<'a>(s: &'a Section, key: &str) -> Result<Option<(&'a [Expr], usize)>> {
    match s.get(key) {
        None => Ok(None),
        Some(Entry {
            value: Value::Exprs(e),
            line,
            ..
        }) => Ok(Some((e, *line))),
        Some(e) => perr(e.line, format!("{key} expects a list of expressions")),
    }
}

fn matrix<'a>(s: &'a Section, key: &str) -> Result<Option<(&'a [Vec<Expr>], usize)>> {
    match s.get(key) {
        None => Ok(None),
        Some(Entry {
            value: Value::Matrix(m),
            line,
            ..
        }) => Ok(Some((m, *line))),
        Some(e) => perr(e.line, format!("{key} expects a matrix")),
    }
}

fn known_keys(s: &Section, keys: &[&str]) -> Result<()> {
    for e in &s.entries {
        if !keys.contains(&e.key.as_str()) {
            return perr(e.line, format!("unknown key {} in [{}]", e.key, s.header.join(" ")));
        }
    }
    Ok(())
}

fn build_algebra(s: &Section, field: Field, budget: Budget) -> Result<Algebra> {
    known_keys(s, &["name", "variables", "relations", "order", "ranking"])?;
    let name = word(s, "name")?.map_or(s.kind().to_string(), |(w, _)| w.to_string());
    let vars: Vec<String> = words(s, "variables")?.map_or(Vec::new(), |(w, _)| w.to_vec());
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return perr(s.line, format!("variable {v} declared twice"));
        }
    }
    let n = vars.len();
    let kind = match word(s, "order")? {
        None | Some(("degrevlex", _)) => OrderKind::Degrevlex,
        Some(("lex", _)) => OrderKind::Lex,
        Some((w, line)) => return perr(line, format!("unknown order {w}")),
    };
    let ranking = match words(s, "ranking")? {
        None => (0..n).collect(),
        Some((ws, line)) => {
            let mut r = Vec::new();
            for w in ws {
                match vars.iter().position(|v| v == w) {
                    Some(i) => r.push(i),
                    None => return perr(line, format!("unknown variable {w} in ranking")),
                }
            }
            r
        }
    };
    let order = MonomialOrder::with_ranking(kind, ranking);
    if !order.is_valid_for(n) {
        return perr(s.line, "ranking must list every variable once");
    }
    // evaluate relations in a bare ring with the same names
    let bare = PresentedAlgebra::new(&name, field, vars.clone(), Vec::new(), order.clone(), budget)?;
    let mut rels = Vec::new();
    if let Some((es, line)) = exprs(s, "relations")? {
        for e in es {
            rels.push(eval(e, &bare, line)?);
        }
    }
    PresentedAlgebra::new(name, field, vars, rels, order, budget)
}

/// Images of the source variables, one `var = expr` line each.
fn build_images(s: &Section, source: &Algebra, target: &Algebra) -> Result<Vec<Poly>> {
    let mut out = Vec::with_capacity(source.nvars());
    for v in source.var_names() {
        let Some((es, line)) = exprs(s, v)? else {
            return perr(s.line, format!("[{}] has no image for {v}", s.kind()));
        };
        if es.len() != 1 {
            return perr(line, "expected a single expression");
        }
        out.push(eval(&es[0], target, line)?);
    }
    for e in &s.entries {
        if source.var_index(&e.key).is_none() {
            return perr(e.line, format!("{} is not a variable of {}", e.key, source.name()));
        }
    }
    Ok(out)
}

fn build_matrix(rows: &[Vec<Expr>], nrows: usize, ncols: usize, alg: &Algebra, line: usize) -> Result<Matrix> {
    if rows.is_empty() && (nrows == 0 || ncols == 0) {
        return Ok(Matrix::zero(nrows, ncols));
    }
    if rows.len() != nrows || rows[0].len() != ncols {
        return perr(
            line,
            format!(
                "matrix is {}x{}, expected {nrows}x{ncols}",
                rows.len(),
                rows.first().map_or(0, |r| r.len())
            ),
        );
    }
    let mut m = Matrix::zero(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            m.set(r, c, eval(e, alg, line)?);
        }
    }
    Ok(m)
}

fn build_comodule(s: &Section, alg: &Algebroid) -> Result<Comodule> {
    known_keys(s, &["generators", "relations", "coaction"])?;
    let (n, _) = int_word(s, "generators")?.ok_or_else(|| Error::Parse {
        line: s.line,
        message: "comodule needs generators".into(),
    })?;
    if n < 0 {
        return perr(s.line, "negative generator count");
    }
    let n = n as usize;
    let rels = match matrix(s, "relations")? {
        None => Matrix::zero(n, 0),
        Some((rows, line)) => {
            let cols = rows.first().map_or(0, |r| r.len());
            build_matrix(rows, n, cols, &alg.a0, line)?
        }
    };
    let (rows, line) = matrix(s, "coaction")?.ok_or_else(|| Error::Parse {
        line: s.line,
        message: "comodule needs a coaction".into(),
    })?;
    let c = build_matrix(rows, n, n, &alg.a1, line)?;
    let module = FPModule::new(&alg.a0, n, rels)?;
    Comodule::new(alg, module, c).map_err(|e| match e {
        Error::Invalid(m) => Error::Parse { line, message: m },
        e => e,
    })
}

fn build_complex(s: &Section, alg: &Algebroid, comods: &[(String, Comodule)]) -> Result<Complex> {
    let (lo, _) = int_word(s, "low")?.unwrap_or((0, s.line));
    let (names, tline) = words(s, "terms")?.ok_or_else(|| Error::Parse {
        line: s.line,
        message: "complex needs terms".into(),
    })?;
    let mut terms = Vec::new();
    for n in names {
        match comods.iter().find(|(k, _)| k == n) {
            Some((_, c)) => terms.push(c.clone()),
            None => return perr(tline, format!("comodule {n} is not defined before this complex")),
        }
    }
    let mut diffs = Vec::new();
    for k in 0..terms.len().saturating_sub(1) {
        let key = format!("d{}", lo + k as i64);
        let (src, tgt) = (&terms[k], &terms[k + 1]);
        let m = match matrix(s, &key)? {
            Some((rows, line)) => build_matrix(rows, tgt.ngens(), src.ngens(), &alg.a0, line)?,
            None => return perr(s.line, format!("complex is missing {key}")),
        };
        diffs.push(m);
    }
    let allowed: Vec<String> = (0..terms.len().saturating_sub(1))
        .map(|k| format!("d{}", lo + k as i64))
        .chain(["low".to_string(), "terms".to_string()])
        .collect();
    for e in &s.entries {
        if !allowed.contains(&e.key) {
            return perr(e.line, format!("unknown key {} in complex", e.key));
        }
    }
    Complex::from_matrices(alg, lo, terms, diffs).map_err(|e| match e {
        Error::Invalid(m) => Error::Parse { line: s.line, message: m },
        e => e,
    })
}

/// Builds the algebroid, comodules and complexes a document declares.
pub fn elaborate(doc: &Document, budget: Budget) -> Result<Definition> {
    const KNOWN: &[&str] = &[
        "field",
        "algebroid",
        "A0",
        "A1",
        "etaL",
        "etaR",
        "counit",
        "comult",
        "antipode",
        "flatness",
        "comodule",
        "complex",
    ];
    for s in &doc.sections {
        if !KNOWN.contains(&s.kind()) {
            return perr(s.line, format!("unknown section [{}]", s.kind()));
        }
        let named = matches!(s.kind(), "comodule" | "complex");
        if named != (s.header.len() == 2) || s.header.len() > 2 {
            return perr(s.line, "malformed section header");
        }
    }
    let fs = section(doc, "field")?;
    known_keys(fs, &["characteristic"])?;
    let field = match int_word(fs, "characteristic")? {
        Some((0, _)) | None => Field::Rationals,
        Some((p, line)) if p > 0 && p < u32::MAX as i64 => Field::prime(p as u32).map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?,
        Some((_, line)) => return perr(line, "bad characteristic"),
    };
    let als = section(doc, "algebroid")?;
    known_keys(als, &["name"])?;
    let name = word(als, "name")?.map_or("unnamed".to_string(), |(w, _)| w.to_string());
    let a0 = build_algebra(section(doc, "A0")?, field, budget)?;
    let a1 = build_algebra(section(doc, "A1")?, field, budget)?;
    let eta_l = build_images(section(doc, "etaL")?, &a0, &a1)?;
    let eta_r = build_images(section(doc, "etaR")?, &a0, &a1)?;
    let builder = AlgebroidBuilder::new(&name, a0.clone(), a1.clone(), eta_l, eta_r)?;
    let counit = build_images(section(doc, "counit")?, &a1, &a0)?;
    let comult = build_images(section(doc, "comult")?, &a1, builder.tensor_square())?;
    let antipode = build_images(section(doc, "antipode")?, &a1, &a1)?;
    let fl = section(doc, "flatness")?;
    known_keys(fl, &["kind", "basis"])?;
    let flatness = match word(fl, "kind")? {
        Some(("free-finite", line)) => {
            let (es, bline) = exprs(fl, "basis")?.ok_or_else(|| Error::Parse {
                line,
                message: "free-finite flatness needs a basis".into(),
            })?;
            let basis = es.iter().map(|e| eval(e, &a1, bline)).collect::<Result<Vec<_>>>()?;
            Flatness::FreeFinite { basis }
        }
        Some(("projective-certified", _)) => Flatness::ProjectiveCertified,
        Some(("user-declared", _)) => Flatness::UserDeclared,
        Some((w, line)) => return perr(line, format!("unknown flatness kind {w}")),
        None => return perr(fl.line, "flatness needs a kind"),
    };
    let alg: Algebroid = Arc::new(builder.finish(counit, comult, antipode, flatness)?);

    let mut comodules: Vec<(String, Comodule)> = Vec::new();
    let mut complexes: Vec<(String, Complex)> = Vec::new();
    let mut comodule_lines = BTreeMap::new();
    for s in &doc.sections {
        match s.kind() {
            "comodule" => {
                let n = &s.header[1];
                if comodules.iter().any(|(k, _)| k == n) {
                    return perr(s.line, format!("comodule {n} defined twice"));
                }
                comodules.push((n.clone(), build_comodule(s, &alg)?));
                comodule_lines.insert(n.clone(), s.line);
            }
            "complex" => {
                let n = &s.header[1];
                if complexes.iter().any(|(k, _)| k == n) {
                    return perr(s.line, format!("complex {n} defined twice"));
                }
                complexes.push((n.clone(), build_complex(s, &alg, &comodules)?));
            }
            _ => {}
        }
    }
    Ok(Definition {
        algebroid: alg,
        comodules,
        complexes,
        comodule_lines,
    })
}

fn matrix_value(alg: &Algebra, m: &Matrix) -> Value {
    Value::Matrix(
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| poly_to_expr(alg, m.get(r, c))).collect())
            .collect(),
    )
}

/// A comodule as a `[comodule NAME]` section that [`elaborate`] reads back.
pub fn comodule_section(name: &str, m: &Comodule) -> Section {
    let entry = |key: &str, value| Entry {
        key: key.into(),
        value,
        line: 0,
    };
    let mut entries = vec![entry("generators", Value::Words(vec![m.ngens().to_string()]))];
    let rels = m.module().relations();
    if rels.cols() > 0 {
        entries.push(entry("relations", matrix_value(m.a0(), rels)));
    }
    entries.push(entry("coaction", matrix_value(m.a1(), m.coaction())));
    Section {
        header: vec!["comodule".into(), name.into()],
        entries,
        line: 0,
    }
}

/// Parses and elaborates in one step.
pub fn load(text: &str, budget: Budget) -> Result<Definition> {
    elaborate(&parse_document(text)?, budget)
}

/// The shipped fixture files.
pub const FIXTURES: &[(&str, &str, &str)] = &[
    (
        "F1",
        "dual group algebra of Z/2 over F2",
        include_str!("../fixtures/F1.hopf"),
    ),
    (
        "F2",
        "Laurent polynomials Q[t, 1/t], the graded case",
        include_str!("../fixtures/F2.hopf"),
    ),
    (
        "F3",
        "Z/2 acting on Q[x] by x -> -x, as a split algebroid",
        include_str!("../fixtures/F3.hopf"),
    ),
];

pub fn fixture_text(id: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|f| f.0 == id).map(|f| f.2)
}

pub fn fixture(id: &str) -> Result<Definition> {
    let text = fixture_text(id).ok_or_else(|| Error::Invalid(format!("unknown fixture {id}")))?;
    load(text, Budget::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_round_trip() {
        for s in [
            "x",
            "-x^2 + 3*y - 1/2",
            "(a + b)*(c - d)",
            "-(a*b)",
            "a*-b",
            "a - -b",
            "(1/2)^3",
            "(x^2)^3",
            "(a*b)*c",
            "a + (b + c)",
            "-(a + b)",
            "t#1*t#2",
        ] {
            let e = parse_expr(s).unwrap();
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{s} printed as {printed}");
        }
    }

    #[test]
    fn precedence() {
        let e = parse_expr("-x^2").unwrap();
        assert_eq!(
            e,
            Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var("x".into())), 2)))
        );
        assert!(parse_expr("x +").is_err());
        assert!(parse_expr("1/0").is_err());
    }

    #[test]
    fn line_numbers_in_errors() {
        let text = "[field]\ncharacteristic = 0\n\n[A0]\nrelations = x $ 1\n";
        match parse_document(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn multi_line_matrix() {
        let doc = parse_document("[comodule M]\ncoaction = [1, 0;\n  0, t]\ngenerators = 2\n").unwrap();
        let s = &doc.sections[0];
        assert!(matches!(&s.get("coaction").unwrap().value, Value::Matrix(r) if r.len() == 2));
        assert_eq!(s.get("generators").unwrap().line, 4);
    }

    #[test]
    fn fixtures_round_trip() {
        for (id, _, text) in FIXTURES {
            let doc = parse_document(text).unwrap();
            let again = parse_document(&doc.to_string()).unwrap();
            assert_eq!(doc, again, "{id}");
        }
    }

    #[test]
    fn comodules_serialize_and_reload() {
        for (id, _, text) in FIXTURES {
            let def = load(text, Budget::default()).unwrap();
            let mut doc = parse_document(text).unwrap();
            doc.sections.retain(|s| !matches!(s.kind(), "comodule" | "complex"));
            for (name, m) in &def.comodules {
                doc.sections.push(comodule_section(name, m));
            }
            let back = load(&doc.to_string(), Budget::default()).unwrap();
            for (name, m) in &def.comodules {
                let r = back.comodule(name).unwrap();
                assert_eq!(r.coaction(), m.coaction(), "{id} {name}");
                assert_eq!(r.module().relations(), m.module().relations(), "{id} {name}");
            }
        }
    }
}
