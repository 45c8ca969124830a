use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{Poly, PolyRing};

/// Homogeneous polynomial in `(u, v)`; `coeffs[i]` is the coefficient of
/// `u^i v^(n-i)`. The zero form keeps a nominal degree and is recognised by
/// [`BinaryForm::is_zero`].
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    coeffs: Vec<FieldElement>,
}

/// `H = unit · ∏ factor^multiplicity`, factors monic, squarefree over the
/// algebraic closure and pairwise coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: FieldElement,
    pub factors: Vec<(BinaryForm, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormSqrt {
    /// `s` with `H = unit · s²`.
    pub root: BinaryForm,
    pub unit: FieldElement,
    pub unit_is_square: bool,
}

/// A projective root of a binary form, over the extension of degree
/// `extension_degree` of the base field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRoot {
    pub field: Field,
    pub extension_degree: usize,
    pub point: (FieldElement, FieldElement),
    pub multiplicity: usize,
}

impl BinaryForm {
    pub fn new(field: &Field, coeffs: Vec<FieldElement>) -> BinaryForm {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinaryForm { field: field.clone(), coeffs }
    }

    pub fn from_ints(field: &Field, coeffs: &[i64]) -> BinaryForm {
        BinaryForm::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field, degree: usize) -> BinaryForm {
        BinaryForm::new(field, vec![field.zero(); degree + 1])
    }

    pub fn constant(field: &Field, c: FieldElement) -> BinaryForm {
        BinaryForm::new(field, vec![c])
    }

    /// `u` (if `u_var`) or `v`.
    pub fn variable(field: &Field, u_var: bool) -> BinaryForm {
        if u_var {
            BinaryForm::new(field, vec![field.zero(), field.one()])
        } else {
            BinaryForm::new(field, vec![field.one(), field.zero()])
        }
    }

    /// Homogenize a univariate polynomial to the given degree.
    pub fn from_poly(field: &Field, p: &Poly, degree: usize) -> Result<BinaryForm> {
        if let Some(d) = p.deg() {
            if d > degree {
                return Err(Error::DegreeMismatch(d, degree));
            }
        }
        let c = (0..=degree).map(|i| p.coeff(i)).collect();
        Ok(BinaryForm::new(field, c))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    /// Dehomogenization at `v = 1`.
    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.clone())
    }

    /// Multiplicity of the root `(1:0)`, i.e. the power of `v` dividing the form.
    pub fn order_at_infinity(&self) -> usize {
        match self.to_poly().deg() {
            Some(d) => self.degree() - d,
            None => self.degree(),
        }
    }

    /// Leading coefficient in lex order `u > v` (highest power of `u`).
    pub fn leading_coefficient(&self) -> FieldElement {
        self.coeffs.iter().rev().find(|c| !c.is_zero()).copied().unwrap_or_default()
    }

    fn check_field(&self, other: &BinaryForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.check_field(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(self.degree(), other.degree()));
        }
        let f = &self.field;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(BinaryForm::new(f, c))
    }

    pub fn sub(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BinaryForm {
        let f = &self.field;
        BinaryForm::new(f, self.coeffs.iter().map(|&a| f.neg(a)).collect())
    }

    pub fn scale(&self, s: FieldElement) -> BinaryForm {
        let f = &self.field;
        BinaryForm::new(f, self.coeffs.iter().map(|&a| f.mul(a, s)).collect())
    }

    pub fn mul(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.check_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &BinaryForm) -> BinaryForm {
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        BinaryForm::new(f, out)
    }

    /// In-place `self += other` for forms of equal degree.
    pub(crate) fn add_assign_unchecked(&mut self, other: &BinaryForm) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = self.field.add(*a, b);
        }
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::constant(&self.field, self.field.one());
        for _ in 0..e {
            acc = acc.mul_unchecked(self);
        }
        acc
    }

    pub fn eval(&self, u: FieldElement, v: FieldElement) -> FieldElement {
        let f = &self.field;
        let n = self.degree();
        let mut vpow = vec![f.one(); n + 1];
        for j in 1..=n {
            vpow[j] = f.mul(vpow[j - 1], v);
        }
        let mut acc = f.zero();
        let mut upow = f.one();
        for i in 0..=n {
            acc = f.add(acc, f.mul(self.coeffs[i], f.mul(upow, vpow[n - i])));
            upow = f.mul(upow, u);
        }
        acc
    }

    /// Substitute `u ↦ a, v ↦ b` for binary forms `a, b` of equal degree.
    pub fn compose(&self, a: &BinaryForm, b: &BinaryForm) -> Result<BinaryForm> {
        self.check_field(a)?;
        self.check_field(b)?;
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch(a.degree(), b.degree()));
        }
        let n = self.degree();
        let apow = powers(a, n);
        let bpow = powers(b, n);
        let mut out = BinaryForm::zero(&self.field, n * a.degree());
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            let term = apow[i].mul_unchecked(&bpow[n - i]).scale(self.coeffs[i]);
            out.add_assign_unchecked(&term);
        }
        Ok(out)
    }

    /// Coefficients mapped into an extension field.
    pub fn embed(&self, target: &Field) -> Result<BinaryForm> {
        let c = self.coeffs.iter().map(|&a| self.field.embed(a, target)).collect::<Result<_>>()?;
        Ok(BinaryForm::new(target, c))
    }

    /// Monic normalization and the removed unit.
    pub fn monic(&self) -> (FieldElement, BinaryForm) {
        let lc = self.leading_coefficient();
        if lc.is_zero() {
            return (lc, self.clone());
        }
        let inv = self.field.inv(lc).unwrap();
        (lc, self.scale(inv))
    }

    pub fn gcd(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.check_field(other)?;
        let f = &self.field;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroForm);
        }
        if other.is_zero() {
            return Ok(self.monic().1);
        }
        if self.is_zero() {
            return Ok(other.monic().1);
        }
        let ring = PolyRing::new(f);
        let g = ring.gcd(&self.to_poly(), &other.to_poly());
        let inf = self.order_at_infinity().min(other.order_at_infinity());
        let d = g.deg().unwrap() + inf;
        BinaryForm::from_poly(f, &g, d)
    }

    /// Exact quotient `self / d`; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BinaryForm) -> Result<Option<BinaryForm>> {
        self.check_field(d)?;
        if d.is_zero() {
            return Err(Error::ZeroForm);
        }
        if d.degree() > self.degree() {
            return Ok(if self.is_zero() { Some(BinaryForm::zero(&self.field, 0)) } else { None });
        }
        let ring = PolyRing::new(&self.field);
        let (q, r) = ring.divrem(&self.to_poly(), &d.to_poly());
        if !r.is_zero() || self.order_at_infinity() < d.order_at_infinity() {
            return Ok(None);
        }
        BinaryForm::from_poly(&self.field, &q, self.degree() - d.degree()).map(Some)
    }

    pub fn divides(&self, other: &BinaryForm) -> bool {
        matches!(other.div_exact(self), Ok(Some(_)))
    }

    pub fn derivative_u(&self) -> BinaryForm {
        let f = &self.field;
        if self.degree() == 0 {
            return BinaryForm::zero(f, 0);
        }
        BinaryForm::new(f, (1..=self.degree()).map(|i| f.mul(f.from_int(i as i64), self.coeffs[i])).collect())
    }

    pub fn derivative_v(&self) -> BinaryForm {
        let f = &self.field;
        let n = self.degree();
        if n == 0 {
            return BinaryForm::zero(f, 0);
        }
        BinaryForm::new(f, (0..n).map(|i| f.mul(f.from_int((n - i) as i64), self.coeffs[i])).collect())
    }

    pub fn squarefree_decomposition(&self) -> Result<SquarefreeDecomposition> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = &self.field;
        let ring = PolyRing::new(f);
        let (unit, parts) = ring.squarefree(&self.to_poly());
        let inf = self.order_at_infinity();
        let mut factors: Vec<(BinaryForm, usize)> = parts
            .into_iter()
            .map(|(p, m)| {
                let d = p.deg().unwrap();
                (BinaryForm::from_poly(f, &p, d).unwrap(), m)
            })
            .collect();
        if inf > 0 {
            let v = BinaryForm::variable(f, false);
            match factors.iter_mut().find(|(_, m)| *m == inf) {
                Some(entry) => entry.0 = entry.0.mul_unchecked(&v),
                None => {
                    factors.push((v, inf));
                    factors.sort_by_key(|(_, m)| *m);
                }
            }
        }
        Ok(SquarefreeDecomposition { unit, factors })
    }

    /// Squarefree over the algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        self.squarefree_decomposition().is_ok_and(|d| d.factors.iter().all(|(_, m)| *m == 1))
    }

    /// `self = unit · root²`; the square root of the unit is absorbed into
    /// `root` when it exists in the base field.
    pub fn sqrt(&self) -> Result<FormSqrt> {
        let dec = self.squarefree_decomposition()?;
        if dec.factors.iter().any(|(_, m)| m % 2 == 1) {
            return Err(Error::NotASquareUpToUnit);
        }
        let f = &self.field;
        let mut root = BinaryForm::constant(f, f.one());
        for (s, m) in &dec.factors {
            root = root.mul_unchecked(&s.pow(m / 2));
        }
        if f.is_square(dec.unit) {
            let r = f.sqrt(dec.unit)?;
            Ok(FormSqrt { root: root.scale(r), unit: f.one(), unit_is_square: true })
        } else {
            Ok(FormSqrt { root, unit: dec.unit, unit_is_square: false })
        }
    }

    /// Irreducible factorization over the base field: monic irreducible
    /// forms with multiplicities; `v` (root at infinity) appears as a factor.
    pub fn factor(&self) -> Result<(FieldElement, Vec<(BinaryForm, usize)>)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let f = &self.field;
        let ring = PolyRing::new(f);
        let (unit, parts) = ring.factor(&self.to_poly());
        let mut out: Vec<(BinaryForm, usize)> = parts
            .into_iter()
            .map(|(p, m)| {
                let d = p.deg().unwrap();
                (BinaryForm::from_poly(f, &p, d).unwrap(), m)
            })
            .collect();
        let inf = self.order_at_infinity();
        if inf > 0 {
            out.insert(0, (BinaryForm::variable(f, false), inf));
        }
        Ok((unit, out))
    }

    /// All projective roots over extensions of degree `<= max_extension`,
    /// conjugates included, each with its multiplicity.
    pub fn roots(&self, max_extension: usize) -> Result<Vec<BinaryRoot>> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let (_, factors) = self.factor()?;
        let mut out = Vec::new();
        for (phi, m) in factors {
            let e = phi.degree();
            if e > max_extension {
                continue;
            }
            let ext = self.field.extension(e)?;
            out.extend(irreducible_roots(&phi, &ext)?.into_iter().map(|pt| BinaryRoot {
                field: ext.clone(),
                extension_degree: e,
                point: pt,
                multiplicity: m,
            }));
        }
        Ok(out)
    }
}

/// The roots of a monic irreducible binary form over an extension where it
/// splits, listed as the Frobenius orbit of the least root.
pub(crate) fn irreducible_roots(phi: &BinaryForm, ext: &Field) -> Result<Vec<(FieldElement, FieldElement)>> {
    if phi.order_at_infinity() > 0 {
        return Ok(vec![(ext.one(), ext.zero())]);
    }
    let e = phi.degree();
    let lifted = phi.embed(ext)?;
    let ring = PolyRing::new(ext);
    let roots = ring.roots(&lifted.to_poly());
    let r0 = roots.first().ok_or(Error::InvalidField("form does not split".into()))?.0;
    let q = phi.field().q();
    let mut orbit = vec![(r0, ext.one())];
    let mut r = r0;
    for _ in 1..e {
        r = ext.pow(r, q as u128);
        orbit.push((r, ext.one()));
    }
    Ok(orbit)
}

fn powers(a: &BinaryForm, n: usize) -> Vec<BinaryForm> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BinaryForm::constant(a.field(), a.field().one()));
    for i in 1..=n {
        out.push(out[i - 1].mul_unchecked(a));
    }
    out
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let f = &self.field;
        let n = self.degree();
        let mut terms = Vec::new();
        for i in (0..=n).rev() {
            let c = self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let mut mono = Vec::new();
            match i {
                0 => {}
                1 => mono.push("u".to_string()),
                _ => mono.push(format!("u^{i}")),
            }
            match n - i {
                0 => {}
                1 => mono.push("v".to_string()),
                j => mono.push(format!("v^{j}")),
            }
            let cs = f.fmt_element(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            terms.push(if mono.is_empty() {
                cs
            } else if c == f.one() {
                mono.join("*")
            } else {
                format!("{cs}*{}", mono.join("*"))
            });
        }
        if terms.is_empty() {
            write!(out, "0")
        } else {
            write!(out, "{}", terms.join(" + "))
        }
    }
}
