//! Canonical text format for polynomials, endomorphisms, and generator words.
//!
//! The grammar is shared with the CLI.  Variables are `x1..xn`, with `x`,
//! `y`, `z`, `t` accepted as aliases for the first four; operators are `+`,
//! `-`, `*`, `^` (juxtaposition is not multiplication); coefficients are
//! integers or `a/b` fractions.  The printer emits sorted monomials with
//! reduced coefficients, and `parse(format(v)) == v` exactly.
//!
//! An endomorphism file starts with a header line `[comm] n=<k> field=<f>`
//! (or `[nc]`), followed by one assignment `xi = <expr>;` per variable.  A
//! word file has the same header followed by one generator per line, either
//! `LIN [[a,b,..],..]` or `ELEM xi <expr>`, each with an optional `^-1`
//! suffix.

use crate::coeffs::{FieldSpec, Scalar};
use crate::endo::Endo;
use crate::poly::{Flavor, Mono, Poly, PolyCtx};
use crate::word::{GenWord, Generator};
use crate::{Error, Result};
use num_bigint::BigInt;

const ALIASES: [&str; 4] = ["x", "y", "z", "t"];

fn var_name(i: usize, n: usize) -> String {
    if n <= 4 {
        ALIASES[i].to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn var_index(name: &str, n: usize) -> Option<usize> {
    if let Some(pos) = ALIASES.iter().position(|a| *a == name) {
        if pos < n {
            return Some(pos);
        }
    }
    if let Some(rest) = name.strip_prefix('x') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) && !rest.starts_with('0') {
            let k: usize = rest.parse().ok()?;
            if 1 <= k && k <= n {
                return Some(k - 1);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Printing

fn format_mono(m: &Mono, n: usize) -> String {
    let mut factors = Vec::new();
    match m {
        Mono::Comm(exps) => {
            for (i, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(var_name(i, n)),
                    _ => factors.push(format!("{}^{}", var_name(i, n), e)),
                }
            }
        }
        Mono::Free(word) => {
            // run-length encode consecutive repeats
            let mut i = 0;
            while i < word.len() {
                let v = word[i];
                let mut j = i;
                while j < word.len() && word[j] == v {
                    j += 1;
                }
                let run = j - i;
                if run == 1 {
                    factors.push(var_name(v as usize, n));
                } else {
                    factors.push(format!("{}^{}", var_name(v as usize, n), run));
                }
                i = j;
            }
        }
    }
    factors.join("*")
}

/// Canonical form of a polynomial: monomials in increasing degree order,
/// coefficients reduced, unit coefficients omitted.
pub fn format_poly(p: &Poly<Scalar>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let n = p.ctx().n;
    let mut out = String::new();
    for (m, c) in p.terms() {
        let (sign_neg, mag) = if c.is_negative() {
            (true, c.neg())
        } else {
            (false, c.clone())
        };
        if out.is_empty() {
            if sign_neg {
                out.push('-');
            }
        } else {
            out.push_str(if sign_neg { " - " } else { " + " });
        }
        let ms = format_mono(m, n);
        if ms.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&ms);
        } else {
            out.push_str(&format!("{}*{}", mag, ms));
        }
    }
    out
}

fn format_header(ctx: &PolyCtx) -> String {
    let flavor = match ctx.flavor {
        Flavor::Comm => "comm",
        Flavor::Free => "nc",
    };
    format!("[{}] n={} field={}", flavor, ctx.n, ctx.field)
}

/// Canonical text of an endomorphism: header line, then one assignment per
/// variable.  `parse_endo(format_endo(f)) == f` exactly.
pub fn format_endo(f: &Endo<Scalar>) -> String {
    let ctx = f.ctx();
    let mut out = format_header(ctx);
    for i in 0..ctx.n {
        out.push('\n');
        out.push_str(&format!(
            "{} = {};",
            var_name(i, ctx.n),
            format_poly(f.image(i))
        ));
    }
    out
}

/// Canonical text of a generator word: header line, then one generator per
/// line (`LIN [[..],..]` or `ELEM xi <expr>`, with `^-1` marking inverses).
pub fn format_word(w: &GenWord) -> String {
    let ctx = &w.ctx;
    let mut out = format_header(ctx);
    for letter in &w.letters {
        out.push('\n');
        match &letter.gen {
            Generator::Linear(mat) => {
                let rows: Vec<String> = mat
                    .iter()
                    .map(|row| {
                        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                        format!("[{}]", cells.join(","))
                    })
                    .collect();
                out.push_str(&format!("LIN [{}]", rows.join(",")));
            }
            Generator::Elementary { target, addend } => {
                out.push_str(&format!(
                    "ELEM {} {}",
                    var_name(*target, ctx.n),
                    format_poly(addend)
                ));
            }
        }
        if letter.inverted {
            out.push_str(" ^-1");
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Tokenizing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err_at(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

fn tokenize(text: &str, first_line: usize) -> Result<Vec<Spanned>> {
    let mut toks = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = first_line + li;
        let chars: Vec<char> = raw.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v: BigInt = s.parse().expect("digits");
                toks.push(Spanned {
                    tok: Tok::Int(v),
                    line,
                    col,
                });
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Spanned {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line,
                    col,
                });
            } else if "+-*^/()=;[],".contains(c) {
                toks.push(Spanned {
                    tok: Tok::Sym(c),
                    line,
                    col,
                });
                i += 1;
            } else {
                return Err(err_at(line, col, format!("unexpected character '{}'", c)));
            }
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// Expression parsing

struct Parser<'a> {
    toks: &'a [Spanned],
    pos: usize,
    ctx: PolyCtx,
    end_line: usize,
}

impl<'a> Parser<'a> {
    fn new(toks: &'a [Spanned], ctx: PolyCtx, end_line: usize) -> Self {
        Parser {
            toks,
            pos: 0,
            ctx,
            end_line,
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.end_line, 1),
        }
    }

    fn bump(&mut self) -> Option<&Spanned> {
        let s = self.toks.get(self.pos);
        if s.is_some() {
            self.pos += 1;
        }
        s
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        let (line, col) = self.here();
        match self.bump() {
            Some(s) if s.tok == Tok::Sym(c) => Ok(()),
            _ => Err(err_at(line, col, format!("expected '{}'", c))),
        }
    }

    fn parse_expr(&mut self) -> Result<Poly<Scalar>> {
        let mut negate = false;
        if self.peek() == Some(&Tok::Sym('-')) {
            self.bump();
            negate = true;
        }
        let mut acc = self.parse_term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t)?;
                }
                Some(Tok::Sym('-')) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Poly<Scalar>> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(&Tok::Sym('*')) {
            self.bump();
            let f = self.parse_factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<Poly<Scalar>> {
        let base = self.parse_atom()?;
        // `^` binds only to a nonnegative integer exponent; a `^` followed by
        // anything else (like the word-level `^-1` marker) is left in place
        let exponent_next = matches!(self.toks.get(self.pos + 1).map(|s| &s.tok), Some(Tok::Int(_)));
        if self.peek() == Some(&Tok::Sym('^')) && exponent_next {
            self.bump();
            let (line, col) = self.here();
            match self.bump().map(|s| s.tok.clone()) {
                Some(Tok::Int(k)) => {
                    let k: usize = k
                        .try_into()
                        .map_err(|_| err_at(line, col, "exponent too large"))?;
                    return base.pow_capped(k, None);
                }
                _ => return Err(err_at(line, col, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn parse_scalar(&mut self) -> Result<Scalar> {
        let (line, col) = self.here();
        match self.bump().map(|s| s.tok.clone()) {
            Some(Tok::Int(num)) => {
                if self.peek() == Some(&Tok::Sym('/')) {
                    self.bump();
                    let (l2, c2) = self.here();
                    match self.bump().map(|s| s.tok.clone()) {
                        Some(Tok::Int(den)) => {
                            let n = Scalar::from_bigint(self.ctx.field, num);
                            let d = Scalar::from_bigint(self.ctx.field, den);
                            n.div(&d).map_err(|_| err_at(l2, c2, "zero denominator"))
                        }
                        _ => Err(err_at(l2, c2, "expected a denominator")),
                    }
                } else {
                    Ok(Scalar::from_bigint(self.ctx.field, num))
                }
            }
            _ => Err(err_at(line, col, "expected a number")),
        }
    }

    fn parse_atom(&mut self) -> Result<Poly<Scalar>> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(_)) => {
                let c = self.parse_scalar()?;
                Ok(Poly::constant(self.ctx, c))
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                match var_index(&name, self.ctx.n) {
                    Some(i) => Poly::var(self.ctx, i),
                    None => Err(err_at(line, col, format!("undeclared variable '{}'", name))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => Err(err_at(line, col, "expected a number, variable, or '('")),
        }
    }
}

/// Parse a single expression over the given context; the whole input must be
/// consumed.
pub fn parse_expr(text: &str, ctx: &PolyCtx) -> Result<Poly<Scalar>> {
    let toks = tokenize(text, 1)?;
    let mut p = Parser::new(&toks, *ctx, text.lines().count().max(1));
    let e = p.parse_expr()?;
    let (line, col) = p.here();
    if p.peek().is_some() {
        return Err(err_at(line, col, "trailing input after expression"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Headers, endos, and words

fn parse_header(line: &str, lineno: usize) -> Result<PolyCtx> {
    let bad = |msg: &str| err_at(lineno, 1, msg.to_string());
    let line = line.trim();
    let (flavor, rest) = if let Some(r) = line.strip_prefix("[comm]") {
        (Flavor::Comm, r)
    } else if let Some(r) = line.strip_prefix("[nc]") {
        (Flavor::Free, r)
    } else {
        return Err(bad("expected header '[comm] n=<k> field=<f>' or '[nc] ...'"));
    };
    let mut n = None;
    let mut field = None;
    for part in rest.split_whitespace() {
        if let Some(v) = part.strip_prefix("n=") {
            n = Some(
                v.parse::<usize>()
                    .map_err(|_| bad("invalid variable count"))?,
            );
        } else if let Some(v) = part.strip_prefix("field=") {
            field = Some(if v == "q" {
                FieldSpec::Q
            } else if let Some(p) = v.strip_prefix("fp:") {
                let p: u64 = p.parse().map_err(|_| bad("invalid prime"))?;
                FieldSpec::prime(p)?
            } else {
                return Err(bad("field must be 'q' or 'fp:<p>'"));
            });
        } else {
            return Err(bad("unexpected token in header"));
        }
    }
    let n = n.ok_or_else(|| bad("header is missing n=<k>"))?;
    if n == 0 {
        return Err(bad("need at least one variable"));
    }
    let field = field.ok_or_else(|| bad("header is missing field=<f>"))?;
    Ok(match flavor {
        Flavor::Comm => PolyCtx::comm(n, field),
        Flavor::Free => PolyCtx::free(n, field),
    })
}

/// Split a text into its header line (context) and the remaining numbered
/// lines.
fn split_header(text: &str) -> Result<(PolyCtx, Vec<(usize, &str)>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (hno, header) = lines
        .next()
        .ok_or_else(|| err_at(1, 1, "empty input"))?;
    let ctx = parse_header(header, hno)?;
    Ok((ctx, lines.collect()))
}

/// Parse an endomorphism file: header plus one `xi = <expr>;` assignment per
/// variable, in any order, each variable exactly once.
pub fn parse_endo(text: &str) -> Result<Endo<Scalar>> {
    let (ctx, lines) = split_header(text)?;
    let mut images: Vec<Option<Poly<Scalar>>> = vec![None; ctx.n];
    for (lineno, line) in lines {
        let toks = tokenize(line, lineno)?;
        let mut p = Parser::new(&toks, ctx, lineno);
        let (l0, c0) = p.here();
        let name = match p.bump().map(|s| s.tok.clone()) {
            Some(Tok::Ident(name)) => name,
            _ => return Err(err_at(l0, c0, "expected a variable assignment")),
        };
        let i = var_index(&name, ctx.n)
            .ok_or_else(|| err_at(l0, c0, format!("undeclared variable '{}'", name)))?;
        if images[i].is_some() {
            return Err(err_at(l0, c0, format!("'{}' assigned twice", name)));
        }
        p.expect_sym('=')?;
        let e = p.parse_expr()?;
        p.expect_sym(';')?;
        let (l1, c1) = p.here();
        if p.peek().is_some() {
            return Err(err_at(l1, c1, "trailing input after ';'"));
        }
        images[i] = Some(e);
    }
    let images: Vec<Poly<Scalar>> = images
        .into_iter()
        .enumerate()
        .map(|(i, im)| {
            im.ok_or_else(|| {
                err_at(1, 1, format!("missing assignment for '{}'", var_name(i, ctx.n)))
            })
        })
        .collect::<Result<_>>()?;
    Endo::new(ctx, images)
}

/// Parse a word file: header plus one generator per line.
pub fn parse_word(text: &str) -> Result<GenWord> {
    let (ctx, lines) = split_header(text)?;
    let mut word = GenWord::empty(ctx);
    for (lineno, line) in lines {
        let toks = tokenize(line, lineno)?;
        let mut p = Parser::new(&toks, ctx, lineno);
        let (l0, c0) = p.here();
        let kind = match p.bump().map(|s| s.tok.clone()) {
            Some(Tok::Ident(k)) => k,
            _ => return Err(err_at(l0, c0, "expected 'LIN' or 'ELEM'")),
        };
        let gen = match kind.as_str() {
            "LIN" => {
                let mat = parse_matrix(&mut p, ctx.n)?;
                Generator::linear(mat)?
            }
            "ELEM" => {
                let (l1, c1) = p.here();
                let name = match p.bump().map(|s| s.tok.clone()) {
                    Some(Tok::Ident(name)) => name,
                    _ => return Err(err_at(l1, c1, "expected a target variable")),
                };
                let target = var_index(&name, ctx.n)
                    .ok_or_else(|| err_at(l1, c1, format!("undeclared variable '{}'", name)))?;
                let addend = p.parse_expr()?;
                Generator::elementary(&ctx, target, addend)?
            }
            other => {
                return Err(err_at(
                    l0,
                    c0,
                    format!("expected 'LIN' or 'ELEM', got '{}'", other),
                ))
            }
        };
        let mut inverted = false;
        if p.peek() == Some(&Tok::Sym('^')) {
            p.bump();
            let (l2, c2) = p.here();
            match (p.bump().map(|s| s.tok.clone()), p.bump().map(|s| s.tok.clone())) {
                (Some(Tok::Sym('-')), Some(Tok::Int(k))) if k == BigInt::from(1) => {
                    inverted = true;
                }
                _ => return Err(err_at(l2, c2, "expected '^-1'")),
            }
        }
        let (l3, c3) = p.here();
        if p.peek().is_some() {
            return Err(err_at(l3, c3, "trailing input after generator"));
        }
        word.push(gen, inverted);
    }
    Ok(word)
}

fn parse_matrix(p: &mut Parser<'_>, n: usize) -> Result<Vec<Vec<Scalar>>> {
    p.expect_sym('[')?;
    let mut rows = Vec::new();
    loop {
        p.expect_sym('[')?;
        let mut row = Vec::new();
        loop {
            let mut neg = false;
            if p.peek() == Some(&Tok::Sym('-')) {
                p.bump();
                neg = true;
            }
            let c = p.parse_scalar()?;
            row.push(if neg { c.neg() } else { c });
            match p.peek() {
                Some(Tok::Sym(',')) => {
                    p.bump();
                }
                _ => break,
            }
        }
        p.expect_sym(']')?;
        rows.push(row);
        match p.peek() {
            Some(Tok::Sym(',')) => {
                p.bump();
            }
            _ => break,
        }
    }
    p.expect_sym(']')?;
    let (line, col) = p.here();
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(err_at(line, col, format!("matrix must be {}x{}", n, n)));
    }
    Ok(rows)
}
