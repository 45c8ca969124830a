use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::BinaryForm;
use crate::linalg::Mat3;

/// Homogeneous polynomial in `(x, y, z)`, stored sparsely. Keys are exponent
/// triples `[e_x, e_y, e_z]`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryForm {
    field: Field,
    degree: usize,
    terms: BTreeMap<[u32; 3], FieldElement>,
}

impl TernaryForm {
    pub fn new(field: &Field, degree: usize, terms: impl IntoIterator<Item = ([u32; 3], FieldElement)>) -> Result<TernaryForm> {
        let mut out = TernaryForm::zero(field, degree);
        for (e, c) in terms {
            let d = (e[0] + e[1] + e[2]) as usize;
            if d != degree {
                return Err(Error::DegreeMismatch(d, degree));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn zero(field: &Field, degree: usize) -> TernaryForm {
        TernaryForm { field: field.clone(), degree, terms: BTreeMap::new() }
    }

    pub fn monomial(field: &Field, e: [u32; 3], c: FieldElement) -> TernaryForm {
        let mut out = TernaryForm::zero(field, (e[0] + e[1] + e[2]) as usize);
        out.add_term(e, c);
        out
    }

    /// `x`, `y` or `z` for `i = 0, 1, 2`.
    pub fn variable(field: &Field, i: usize) -> TernaryForm {
        let mut e = [0u32; 3];
        e[i] = 1;
        TernaryForm::monomial(field, e, field.one())
    }

    /// Linear form `c_0 x + c_1 y + c_2 z`.
    pub fn linear(field: &Field, c: [FieldElement; 3]) -> TernaryForm {
        let mut out = TernaryForm::zero(field, 1);
        for (i, &ci) in c.iter().enumerate() {
            let mut e = [0u32; 3];
            e[i] = 1;
            out.add_term(e, ci);
        }
        out
    }

    fn add_term(&mut self, e: [u32; 3], c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v = f.add(*v, c);
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 3], &FieldElement)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: [u32; 3]) -> FieldElement {
        self.terms.get(&e).copied().unwrap_or_default()
    }

    fn check_field(&self, other: &TernaryForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &TernaryForm) -> Result<TernaryForm> {
        self.check_field(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TernaryForm) -> Result<TernaryForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TernaryForm {
        let f = &self.field;
        TernaryForm { field: f.clone(), degree: self.degree, terms: self.terms.iter().map(|(&e, &c)| (e, f.neg(c))).collect() }
    }

    pub fn scale(&self, s: FieldElement) -> TernaryForm {
        let f = &self.field;
        if s.is_zero() {
            return TernaryForm::zero(f, self.degree);
        }
        TernaryForm { field: f.clone(), degree: self.degree, terms: self.terms.iter().map(|(&e, &c)| (e, f.mul(c, s))).collect() }
    }

    pub fn mul(&self, other: &TernaryForm) -> Result<TernaryForm> {
        self.check_field(other)?;
        let f = &self.field;
        let mut out = TernaryForm::zero(f, self.degree + other.degree);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: usize) -> TernaryForm {
        let f = &self.field;
        let mut acc = TernaryForm::monomial(f, [0, 0, 0], f.one());
        for _ in 0..e {
            acc = acc.mul(self).unwrap();
        }
        acc
    }

    pub fn eval(&self, pt: [FieldElement; 3]) -> FieldElement {
        let f = &self.field;
        let mut pows = [[f.one(); 17]; 3];
        let maxd = self.degree.min(16);
        for (i, row) in pows.iter_mut().enumerate() {
            for j in 1..=maxd {
                row[j] = f.mul(row[j - 1], pt[i]);
            }
        }
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for i in 0..3 {
                let ei = e[i] as usize;
                t = f.mul(t, if ei <= 16 { pows[i][ei] } else { f.pow(pt[i], ei as u128) });
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Checked evaluation at a projective point (some coordinate nonzero).
    pub fn evaluate(&self, pt: [FieldElement; 3]) -> Result<FieldElement> {
        if pt.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(self.eval(pt))
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> TernaryForm {
        let f = &self.field;
        let mut out = TernaryForm::zero(f, self.degree.saturating_sub(1));
        for (e, &c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            out.add_term(ne, f.mul(f.from_int(e[i] as i64), c));
        }
        out
    }

    /// `h(M·X)`: each variable `x_i` is replaced by `Σ_j M[i][j] X_j`.
    pub fn substitute_linear(&self, m: &Mat3) -> TernaryForm {
        let f = &self.field;
        let lin: Vec<TernaryForm> = (0..3).map(|i| TernaryForm::linear(f, m.0[i])).collect();
        let pw: Vec<Vec<TernaryForm>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![TernaryForm::monomial(f, [0, 0, 0], f.one())];
                for j in 1..=self.degree {
                    let next = v[j - 1].mul(l).unwrap();
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = TernaryForm::zero(f, self.degree);
        for (e, &c) in &self.terms {
            let t = pw[0][e[0] as usize].mul(&pw[1][e[1] as usize]).unwrap().mul(&pw[2][e[2] as usize]).unwrap();
            for (&te, &tc) in &t.terms {
                out.add_term(te, f.mul(tc, c));
            }
        }
        out
    }

    /// `h(θ_x, θ_y, θ_z)` for binary forms of a common degree.
    pub fn compose(&self, theta: [&BinaryForm; 3]) -> Result<BinaryForm> {
        let e = theta[0].degree();
        for t in theta {
            if t.field() != &self.field {
                return Err(Error::FieldMismatch);
            }
            if t.degree() != e {
                return Err(Error::DegreeMismatch(t.degree(), e));
            }
        }
        let f = &self.field;
        let n = self.degree;
        let pw: Vec<Vec<BinaryForm>> = theta
            .iter()
            .map(|t| {
                let mut v = vec![BinaryForm::constant(f, f.one())];
                for j in 1..=n {
                    let next = v[j - 1].mul_unchecked(t);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = BinaryForm::zero(f, n * e);
        for (ex, &c) in &self.terms {
            let t = pw[0][ex[0] as usize].mul_unchecked(&pw[1][ex[1] as usize]).mul_unchecked(&pw[2][ex[2] as usize]);
            out.add_assign_unchecked(&t.scale(c));
        }
        Ok(out)
    }

    pub fn embed(&self, target: &Field) -> Result<TernaryForm> {
        let mut out = TernaryForm::zero(target, self.degree);
        for (&e, &c) in &self.terms {
            out.add_term(e, self.field.embed(c, target)?);
        }
        Ok(out)
    }

    /// The coefficient of `z^(d-k)` as a binary form of degree `k` in `(x, y)`
    /// (`u = x`, `v = y`).
    pub fn z_part(&self, k: usize) -> BinaryForm {
        let f = &self.field;
        let mut c = vec![f.zero(); k + 1];
        for (e, &v) in &self.terms {
            if (e[0] + e[1]) as usize == k {
                c[e[0] as usize] = v;
            }
        }
        BinaryForm::new(f, c)
    }

    /// Degree in the variable `i`.
    pub fn degree_in(&self, i: usize) -> usize {
        self.terms.keys().map(|e| e[i] as usize).max().unwrap_or(0)
    }

    /// Leading term in lex order `x > y > z`.
    pub fn leading_term(&self) -> Option<([u32; 3], FieldElement)> {
        self.terms.iter().next_back().map(|(&e, &c)| (e, c))
    }

    pub fn monic(&self) -> (FieldElement, TernaryForm) {
        match self.leading_term() {
            None => (self.field.zero(), self.clone()),
            Some((_, c)) => (c, self.scale(self.field.inv(c).unwrap())),
        }
    }

    /// Division by a single form in lex order; the remainder is zero exactly
    /// when `d` divides `self`.
    pub fn div_rem(&self, d: &TernaryForm) -> Result<(TernaryForm, TernaryForm)> {
        self.check_field(d)?;
        let (le, lc) = d.leading_term().ok_or(Error::ZeroForm)?;
        let f = &self.field;
        let inv = f.inv(lc)?;
        let mut quo = TernaryForm::zero(f, self.degree.saturating_sub(d.degree));
        let mut rem = TernaryForm::zero(f, self.degree);
        let mut r = self.clone();
        while let Some((e, c)) = r.leading_term() {
            if e[0] >= le[0] && e[1] >= le[1] && e[2] >= le[2] && self.degree >= d.degree {
                let qe = [e[0] - le[0], e[1] - le[1], e[2] - le[2]];
                let qc = f.mul(c, inv);
                quo.add_term(qe, qc);
                for (&de, &dc) in &d.terms {
                    r.add_term([qe[0] + de[0], qe[1] + de[1], qe[2] + de[2]], f.neg(f.mul(qc, dc)));
                }
            } else {
                r.terms.remove(&e);
                rem.add_term(e, c);
            }
        }
        Ok((quo, rem))
    }

    /// Exponent-sorted `(exponents, coefficient)` list.
    pub fn to_terms(&self) -> Vec<([u32; 3], FieldElement)> {
        self.terms.iter().map(|(&e, &c)| (e, c)).collect()
    }
}

fn fmt_monomial(names: &[&str], e: &[u32]) -> String {
    let mut parts = Vec::new();
    for (n, &k) in names.iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(n.to_string()),
            _ => parts.push(format!("{n}^{k}")),
        }
    }
    parts.join("*")
}

pub(crate) fn fmt_sparse<'a>(
    out: &mut fmt::Formatter<'_>,
    field: &Field,
    names: &[&str],
    terms: impl DoubleEndedIterator<Item = (&'a [u32], FieldElement)>,
) -> fmt::Result {
    let mut s = Vec::new();
    for (e, c) in terms.rev() {
        let mono = fmt_monomial(names, e);
        let cs = field.fmt_element(c);
        let cs = if cs.contains('+') { format!("({cs})") } else { cs };
        s.push(if mono.is_empty() {
            cs
        } else if c == field.one() {
            mono
        } else {
            format!("{cs}*{mono}")
        });
    }
    if s.is_empty() {
        write!(out, "0")
    } else {
        write!(out, "{}", s.join(" + "))
    }
}

impl fmt::Display for TernaryForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sparse(out, &self.field, &["x", "y", "z"], self.terms.iter().map(|(e, &c)| (&e[..], c)))
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
