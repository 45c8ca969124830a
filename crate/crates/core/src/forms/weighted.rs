use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::ternary::fmt_sparse;
use crate::forms::{BinaryForm, TernaryForm};

/// Weighted-homogeneous polynomial in `(x, y, z, w)` with `w` of weight 2.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedForm {
    field: Field,
    degree: usize,
    terms: BTreeMap<[u32; 4], FieldElement>,
}

fn weight(e: &[u32; 4]) -> usize {
    (e[0] + e[1] + e[2] + 2 * e[3]) as usize
}

impl WeightedForm {
    pub fn new(field: &Field, degree: usize, terms: impl IntoIterator<Item = ([u32; 4], FieldElement)>) -> Result<WeightedForm> {
        let mut out = WeightedForm { field: field.clone(), degree, terms: BTreeMap::new() };
        for (e, c) in terms {
            if weight(&e) != degree {
                return Err(Error::DegreeMismatch(weight(&e), degree));
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: [u32; 4], c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let f = self.field.clone();
        let v = self.terms.entry(e).or_insert(f.zero());
        *v = f.add(*v, c);
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// `Σ_j w^j · parts[j]` where `parts[j]` has degree `degree - 2j`.
    pub fn from_w_parts(field: &Field, degree: usize, parts: &[TernaryForm]) -> Result<WeightedForm> {
        let mut out = WeightedForm { field: field.clone(), degree, terms: BTreeMap::new() };
        for (j, part) in parts.iter().enumerate() {
            if part.is_zero() {
                continue;
            }
            if part.degree() + 2 * j != degree {
                return Err(Error::DegreeMismatch(part.degree() + 2 * j, degree));
            }
            for (e, &c) in part.terms() {
                out.add_term([e[0], e[1], e[2], j as u32], c);
            }
        }
        Ok(out)
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

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 4], &FieldElement)> {
        self.terms.iter()
    }

    pub fn eval(&self, pt: [FieldElement; 4]) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, &c) in &self.terms {
            let mut t = c;
            for i in 0..4 {
                t = f.mul(t, f.pow(pt[i], e[i] as u128));
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Checked evaluation; `(x, y, z) = 0` is not a point of P(1,1,1,2) here.
    pub fn evaluate(&self, pt: [FieldElement; 4]) -> Result<FieldElement> {
        if pt[..3].iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroVector);
        }
        Ok(self.eval(pt))
    }

    /// Pull back along `(ρ_x, ρ_y, ρ_z, ρ_w)` with `deg ρ_w = 2 deg ρ_x`.
    pub fn compose(&self, rho: [&BinaryForm; 4]) -> Result<BinaryForm> {
        let e = rho[0].degree();
        for (i, r) in rho.iter().enumerate() {
            if r.field() != &self.field {
                return Err(Error::FieldMismatch);
            }
            let want = if i == 3 { 2 * e } else { e };
            if r.degree() != want {
                return Err(Error::DegreeMismatch(r.degree(), want));
            }
        }
        let f = &self.field;
        let mut out = BinaryForm::zero(f, self.degree * e);
        for (ex, &c) in &self.terms {
            let mut t = BinaryForm::constant(f, c);
            for i in 0..4 {
                t = t.mul_unchecked(&rho[i].pow(ex[i] as usize));
            }
            out.add_assign_unchecked(&t);
        }
        Ok(out)
    }

    pub fn embed(&self, target: &Field) -> Result<WeightedForm> {
        let mut out = WeightedForm { field: target.clone(), degree: self.degree, terms: BTreeMap::new() };
        for (&e, &c) in &self.terms {
            out.add_term(e, self.field.embed(c, target)?);
        }
        Ok(out)
    }
}

impl fmt::Display for WeightedForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_sparse(out, &self.field, &["x", "y", "z", "w"], self.terms.iter().map(|(e, &c)| (&e[..], c)))
    }
}

impl fmt::Debug for WeightedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
