//! Map files and generator files.
//!
//! Both formats are line oriented. `#` starts a comment. A map file holds
//! `orbit`, `xrows` and `image` statements; a generator file holds `orbit` and
//! `xrows` statements followed by one polynomial per line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use incgb::poly::Polynomial;
use incgb::scalar::Field;
use incgb::symmetry::{Index, Monomial, OrbitLabel, OrbitSpec, RingKind, RingSignature, Variable};
use incgb::toric::{MonomialMapSpec, ToricError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{line}: {message}")]
    Semantic { line: usize, message: String },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(u64),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
        }
    }
}

/// Tokens of one line, each with its 1-based column.
struct Cursor {
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Cursor {
    fn new(line: usize, text: &str) -> Result<Cursor, ParseError> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| syntax(line, col, "integer too large"))?;
                toks.push((Tok::Int(n), col));
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                toks.push((Tok::Word(chars[start..i].iter().collect()), col));
            } else if "()[],=^+-*/".contains(c) {
                toks.push((Tok::Sym(c), col));
                i += 1;
            } else {
                return Err(syntax(line, col, format!("unexpected character `{c}`")));
            }
        }
        Ok(Cursor {
            line,
            toks,
            pos: 0,
            end: chars.len() + 1,
        })
    }

    fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, c)| *c)
    }

    fn error(&self, expected: &str) -> ParseError {
        let found = self.peek().map_or("end of line".to_string(), Tok::describe);
        syntax(self.line, self.column(), format!("expected {expected}, found {found}"))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.pos += 1;
        t
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(&Tok::Sym(c));
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("an integer")),
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = w.clone();
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("a name")),
        }
    }

    fn keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Word(k.to_string())) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{k}`")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.error("end of line"))
        } else {
            Ok(())
        }
    }

    /// `( INT , ... )` or `[ INT , ... ]`.
    fn index_list(&mut self, open: char, close: char) -> Result<Vec<u64>, ParseError> {
        self.sym(open)?;
        let mut out = vec![self.int()?];
        while self.eat_sym(',') {
            out.push(self.int()?);
        }
        self.sym(close)?;
        Ok(out)
    }

    /// Optional `^ INT`.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        if !self.eat_sym('^') {
            return Ok(1);
        }
        let col = self.column();
        let e = self.int()?;
        u32::try_from(e)
            .ok()
            .filter(|&e| e > 0)
            .ok_or_else(|| syntax(self.line, col, "exponent must be a positive 32-bit integer"))
    }
}

fn lines(text: &str) -> impl Iterator<Item = Result<Cursor, ParseError>> + '_ {
    text.lines()
        .enumerate()
        .map(|(i, l)| Cursor::new(i + 1, l))
        .filter(|c| !matches!(c, Ok(c) if c.is_empty()))
}

/// Orbit and row declarations shared by both file kinds.
#[derive(Debug, Default)]
struct Decls {
    orbits: Vec<OrbitSpec>,
    rows: Option<usize>,
}

impl Decls {
    /// Consumes an `orbit` or `xrows` statement. Returns false for other lines.
    fn statement(&mut self, c: &mut Cursor) -> Result<bool, ParseError> {
        match c.peek() {
            Some(Tok::Word(w)) if w == "orbit" => {
                c.next();
                let name = c.word()?;
                if name == "x" {
                    return Err(semantic(c.line, "`x` is reserved for the target rows"));
                }
                c.keyword("arity")?;
                let k = c.int()? as usize;
                let symmetric = match c.peek() {
                    Some(Tok::Word(w)) if w == "symmetric" => {
                        c.next();
                        true
                    }
                    _ => false,
                };
                c.finish()?;
                if self.orbits.iter().any(|o| o.name() == name) {
                    return Err(semantic(c.line, format!("orbit `{name}` declared twice")));
                }
                if k == 0 {
                    return Err(semantic(c.line, format!("orbit `{name}` must have positive arity")));
                }
                if k > incgb::symmetry::MAX_ARITY {
                    return Err(semantic(
                        c.line,
                        format!("orbit `{name}` has arity above {}", incgb::symmetry::MAX_ARITY),
                    ));
                }
                self.orbits.push(if symmetric {
                    OrbitSpec::symmetric(name, k)
                } else {
                    OrbitSpec::tuple(name, k)
                });
                Ok(true)
            }
            Some(Tok::Word(w)) if w == "xrows" => {
                c.next();
                let n = c.int()? as usize;
                c.finish()?;
                if self.rows.is_some() {
                    return Err(semantic(c.line, "`xrows` declared twice"));
                }
                if n == 0 || n > 256 {
                    return Err(semantic(c.line, "`xrows` must be between 1 and 256"));
                }
                self.rows = Some(n);
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn tuple_ring(&self) -> Result<Arc<RingSignature>, ParseError> {
        RingSignature::new(self.orbits.clone(), RingKind::Y)
            .map(Arc::new)
            .map_err(|e| semantic(0, e.to_string()))
    }
}

fn index(c: &Cursor, col: usize, n: u64) -> Result<Index, ParseError> {
    if n == 0 || n > incgb::symmetry::MAX_INDEX as u64 {
        Err(syntax(
            c.line,
            col,
            format!("index {n} outside 1..={}", incgb::symmetry::MAX_INDEX),
        ))
    } else {
        Ok(n as Index)
    }
}

/// `x [ r , j ]` after the `x` has been read; returns `(r, j)`.
fn x_variable(c: &mut Cursor, rows: usize) -> Result<(usize, Index), ParseError> {
    let col = c.column();
    let ix = c.index_list('[', ']')?;
    if ix.len() != 2 {
        return Err(syntax(c.line, col, "target variables are written x[row,column]"));
    }
    let r = ix[0] as usize;
    if r == 0 || r > rows {
        return Err(semantic(c.line, format!("row {r} outside 1..={rows}")));
    }
    Ok((r, index(c, col, ix[1])?))
}

pub fn parse_map_file(text: &str) -> Result<MonomialMapSpec, ParseError> {
    let mut decls = Decls::default();
    let mut images: BTreeMap<String, Monomial> = BTreeMap::new();
    let mut image_lines: BTreeMap<String, usize> = BTreeMap::new();
    for cursor in lines(text) {
        let mut c = cursor?;
        if decls.statement(&mut c)? {
            continue;
        }
        c.keyword("image").map_err(|_| c.error("`orbit`, `xrows` or `image`"))?;
        let name = c.word()?;
        let tuple_col = c.column();
        let tuple = c.index_list('(', ')')?;
        c.sym('=')?;
        let Some(orbit) = decls.orbits.iter().find(|o| o.name() == name) else {
            return Err(semantic(c.line, format!("unknown orbit `{name}`")));
        };
        let rows = decls
            .rows
            .ok_or_else(|| semantic(c.line, "`xrows` must come before `image`"))?;
        let rep: Vec<u64> = (1..=orbit.arity as u64).collect();
        if tuple != rep {
            let shown: Vec<String> = rep.iter().map(u64::to_string).collect();
            return Err(ParseError::Semantic {
                line: c.line,
                message: format!(
                    "column {tuple_col}: image must be given for the representative {name}({})",
                    shown.join(",")
                ),
            });
        }
        let mut factors = Vec::new();
        while c.peek().is_some() {
            let col = c.column();
            let w = c.word()?;
            if w != "x" {
                return Err(syntax(c.line, col, format!("expected `x`, found `{w}`")));
            }
            let (r, j) = x_variable(&mut c, rows)?;
            let e = c.exponent()?;
            factors.push((Variable::raw(r as u16 - 1, &[j]), e));
        }
        if factors.is_empty() {
            return Err(c.error("at least one factor"));
        }
        if images.insert(name.clone(), Monomial::from_factors(factors)).is_some() {
            return Err(semantic(c.line, format!("second image for `{name}`")));
        }
        image_lines.insert(name, c.line);
    }
    if decls.orbits.is_empty() {
        return Err(semantic(0, "no orbit declared"));
    }
    let rows = decls.rows.ok_or_else(|| semantic(0, "no `xrows` declaration"))?;
    let mut imgs = Vec::new();
    for o in &decls.orbits {
        let m = images
            .remove(o.name())
            .ok_or_else(|| semantic(0, format!("no image for orbit `{}`", o.name())))?;
        imgs.push(m);
    }
    let domain = decls.tuple_ring()?;
    MonomialMapSpec::new(domain, rows, imgs).map_err(|e| {
        let orbit = match &e {
            ToricError::NotEquivariant { orbit, .. } | ToricError::ImageTooWide { orbit, .. } => Some(orbit),
            _ => None,
        };
        let line = orbit.and_then(|o| image_lines.get(o)).copied().unwrap_or(0);
        semantic(line, e.to_string())
    })
}

pub fn print_map_file(spec: &MonomialMapSpec) -> String {
    let mut out = String::new();
    for o in spec.domain.orbits() {
        let sym = if o.has_trivial_stabilizer() { "" } else { " symmetric" };
        writeln!(out, "orbit {} arity {}{sym}", o.name(), o.arity).unwrap();
    }
    writeln!(out, "xrows {}", spec.rows).unwrap();
    let x = spec.x_ring();
    for (o, img) in spec.domain.orbits().iter().zip(&spec.images) {
        let tuple: Vec<String> = (1..=o.arity).map(|i| i.to_string()).collect();
        writeln!(out, "image {}({}) = {}", o.name(), tuple.join(","), x.fmt_monomial(img)).unwrap();
    }
    out
}

/// A parsed generator file: the ring and its polynomials.
#[derive(Debug, Clone)]
pub struct GensFile<C> {
    pub ring: Arc<RingSignature>,
    pub gens: Vec<Polynomial<C>>,
}

/// Ring of a generator file: tuple orbits, `x` rows, or both.
fn gens_ring(decls: &Decls) -> Result<Arc<RingSignature>, ParseError> {
    let x = decls.rows.map(RingSignature::x_ring);
    match (decls.orbits.is_empty(), x) {
        (true, None) => Err(semantic(0, "declare at least one orbit or `xrows`")),
        (true, Some(x)) => Ok(Arc::new(x)),
        (false, None) => decls.tuple_ring(),
        (false, Some(x)) => Ok(Arc::new(RingSignature::product(&*decls.tuple_ring()?, &x))),
    }
}

pub fn parse_gens_file<C: Field>(text: &str) -> Result<GensFile<C>, ParseError> {
    let mut decls = Decls::default();
    let mut pending = Vec::new();
    for cursor in lines(text) {
        let mut c = cursor?;
        if decls.statement(&mut c)? {
            if !pending.is_empty() {
                return Err(semantic(c.line, "declarations must precede the polynomials"));
            }
            continue;
        }
        pending.push(c);
    }
    let ring = gens_ring(&decls)?;
    let mut gens = Vec::new();
    for mut c in pending {
        let p = polynomial(&mut c, &ring)?;
        c.finish()?;
        gens.push(p);
    }
    Ok(GensFile { ring, gens })
}

/// One polynomial in the generator grammar over `ring`.
pub fn parse_polynomial<C: Field>(text: &str, ring: &RingSignature) -> Result<Polynomial<C>, ParseError> {
    let mut c = Cursor::new(1, text)?;
    let p = polynomial(&mut c, ring)?;
    c.finish()?;
    Ok(p)
}

fn polynomial<C: Field>(c: &mut Cursor, ring: &RingSignature) -> Result<Polynomial<C>, ParseError> {
    let mut out = Polynomial::zero();
    let mut sign = if c.eat_sym('-') {
        -C::one()
    } else {
        c.eat_sym('+');
        C::one()
    };
    loop {
        let (m, coef) = term::<C>(c, ring)?;
        out.add_term(m, sign * coef);
        if c.eat_sym('+') {
            sign = C::one();
        } else if c.eat_sym('-') {
            sign = -C::one();
        } else {
            return Ok(out);
        }
    }
}

fn term<C: Field>(c: &mut Cursor, ring: &RingSignature) -> Result<(Monomial, C), ParseError> {
    let mut coef = C::one();
    let mut m = Monomial::one();
    let mut any = false;
    loop {
        match c.peek() {
            Some(Tok::Int(_)) => {
                let col = c.column();
                let num = c.int()?;
                let mut s = num.to_string();
                if c.eat_sym('/') {
                    let den = c.int()?;
                    if den == 0 {
                        return Err(syntax(c.line, col, "zero denominator"));
                    }
                    write!(s, "/{den}").unwrap();
                }
                let q = C::from_str(&s).map_err(|_| syntax(c.line, col, format!("coefficient {s} out of range")))?;
                let e = c.exponent()?;
                for _ in 0..e {
                    coef = coef * q.clone();
                }
            }
            Some(Tok::Word(_)) => {
                let v = variable(c, ring)?;
                let e = c.exponent()?;
                m = m.mul(&Monomial::var_pow(v, e));
            }
            _ if any => return Ok((m, coef)),
            _ => return Err(c.error("a coefficient or a variable")),
        }
        any = true;
        if c.eat_sym('*') && !matches!(c.peek(), Some(Tok::Int(_) | Tok::Word(_))) {
            return Err(c.error("a coefficient or a variable"));
        }
    }
}

fn variable(c: &mut Cursor, ring: &RingSignature) -> Result<Variable, ParseError> {
    let col = c.column();
    let name = c.word()?;
    if c.peek() == Some(&Tok::Sym('[')) {
        let rows = ring
            .orbits()
            .iter()
            .filter(|o| matches!(&o.label, OrbitLabel::Row { name: n, .. } if *n == name))
            .count();
        if rows == 0 {
            return Err(semantic(c.line, format!("no row variables named `{name}`")));
        }
        let (r, j) = x_variable(c, rows)?;
        let orbit = ring
            .find_row_orbit(&name, &[r as u32])
            .ok_or_else(|| semantic(c.line, format!("unknown row {name}[{r},*]")))?;
        return ring.variable(orbit, &[j]).map_err(|e| semantic(c.line, e.to_string()));
    }
    let orbit = ring
        .find_tuple_orbit(&name)
        .ok_or_else(|| syntax(c.line, col, format!("unknown variable `{name}`")))?;
    let ix_col = c.column();
    let ix = c
        .index_list('(', ')')?
        .into_iter()
        .map(|n| index(c, ix_col, n))
        .collect::<Result<Vec<_>, _>>()?;
    ring.variable(orbit, &ix).map_err(|e| semantic(c.line, e.to_string()))
}
