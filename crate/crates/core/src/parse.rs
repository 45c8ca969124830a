//! Tiny polynomial expression parser, e.g. `"x^4 + x*y^3 - gamma^2*(y+z)^2"`.
//!
//! Supports `+ - * ^`, parentheses, implicit multiplication (`t^2(t^2-1)`),
//! integer literals (reduced mod p) and the field generator written `gamma`,
//! `γ` or `g`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::{BinaryForm, TernaryForm};
use crate::poly::Poly;

type Sparse = BTreeMap<Vec<u32>, FieldElement>;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Num(s.parse().map_err(|_| Error::Parse(format!("bad number {s}")))?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: &'a Field,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn constant(&self, c: FieldElement) -> Sparse {
        let mut m = Sparse::new();
        if !c.is_zero() {
            m.insert(vec![0; self.vars.len()], c);
        }
        m
    }

    fn add(&self, a: &mut Sparse, b: Sparse, negate: bool) {
        let f = self.field;
        for (e, c) in b {
            let c = if negate { f.neg(c) } else { c };
            let v = a.entry(e.clone()).or_insert(f.zero());
            *v = f.add(*v, c);
            if v.is_zero() {
                a.remove(&e);
            }
        }
    }

    fn mul(&self, a: &Sparse, b: &Sparse) -> Sparse {
        let f = self.field;
        let mut out = Sparse::new();
        for (ea, &ca) in a {
            for (eb, &cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let mut m = Sparse::new();
                m.insert(e, f.mul(ca, cb));
                self.add(&mut out, m, false);
            }
        }
        out
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = Sparse::new();
        let mut negate = false;
        if let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            negate = *c == '-';
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            self.add(&mut acc, t, negate);
            match self.peek() {
                Some(Tok::Op('+')) => negate = false,
                Some(Tok::Op('-')) => negate = true,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::Op('(')) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
    }

    fn factor(&mut self) -> Result<Sparse> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(n)) = self.peek().cloned() else {
                return Err(Error::Parse("expected exponent".into()));
            };
            self.pos += 1;
            let mut acc = self.constant(self.field.one());
            for _ in 0..n {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Sparse> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(self.constant(self.field.from_int(n))),
            Tok::Ident(name) => {
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    let mut e = vec![0; self.vars.len()];
                    e[i] = 1;
                    let mut m = Sparse::new();
                    m.insert(e, self.field.one());
                    Ok(m)
                } else if matches!(name.as_str(), "gamma" | "γ" | "g") {
                    if self.field.k() < 2 {
                        return Err(Error::Parse("generator used in a prime field".into()));
                    }
                    Ok(self.constant(self.field.generator()))
                } else {
                    Err(Error::Parse(format!("unknown identifier {name}")))
                }
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Op('-') => {
                let f = self.factor()?;
                let mut out = Sparse::new();
                self.add(&mut out, f, true);
                Ok(out)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
}

/// Parse into a sparse map from exponent vectors (ordered as `vars`).
pub fn parse_sparse(field: &Field, vars: &[&str], src: &str) -> Result<BTreeMap<Vec<u32>, FieldElement>> {
    let mut p = Parser { toks: lex(src)?, pos: 0, field, vars };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// Parse a homogeneous form in `x, y, z`; the degree is inferred (0 for the
/// zero polynomial).
pub fn parse_ternary(field: &Field, src: &str) -> Result<TernaryForm> {
    let sp = parse_sparse(field, &["x", "y", "z"], src)?;
    let degree = sp.keys().next().map_or(0, |e| e.iter().sum::<u32>() as usize);
    parse_ternary_with(field, sp, degree)
}

/// Parse a form of the given degree (needed for the zero form).
pub fn parse_ternary_of_degree(field: &Field, src: &str, degree: usize) -> Result<TernaryForm> {
    let sp = parse_sparse(field, &["x", "y", "z"], src)?;
    parse_ternary_with(field, sp, degree)
}

fn parse_ternary_with(field: &Field, sp: Sparse, degree: usize) -> Result<TernaryForm> {
    TernaryForm::new(field, degree, sp.into_iter().map(|(e, c)| ([e[0], e[1], e[2]], c)))
        .map_err(|_| Error::Parse("form is not homogeneous".into()))
}

/// Parse a univariate polynomial in `var`.
pub fn parse_univariate(field: &Field, var: &str, src: &str) -> Result<Poly> {
    let sp = parse_sparse(field, &[var], src)?;
    let deg = sp.keys().map(|e| e[0] as usize).max().unwrap_or(0);
    let mut c = vec![field.zero(); deg + 1];
    for (e, v) in sp {
        c[e[0] as usize] = v;
    }
    Ok(Poly::from_coeffs(c))
}

/// Parse an affine polynomial in `var` and homogenize it to `degree`
/// (`var ↦ u`, homogenizing variable `v`).
pub fn parse_homogenized(field: &Field, var: &str, src: &str, degree: usize) -> Result<BinaryForm> {
    BinaryForm::from_poly(field, &parse_univariate(field, var, src)?, degree)
}
