use crate::error::{Error, Result};
use crate::forms::{BinaryForm, TernaryForm};
use crate::poly::{Poly, PolyRing};

/// Sylvester resultant of two ternary forms with respect to variable
/// `eliminate` (0 = x, 1 = y, 2 = z). The result is a binary form in the two
/// remaining variables, in their original order.
///
/// The formal degrees in the eliminated variable are used, so the result
/// vanishes at `(x₀:y₀)` iff the specialisations share a root or both
/// leading coefficients vanish there.
pub fn resultant(a: &TernaryForm, b: &TernaryForm, eliminate: usize) -> Result<BinaryForm> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let f = a.field();
    let keep: Vec<usize> = (0..3).filter(|&i| i != eliminate).collect();
    let r = if a.is_zero() { 0 } else { a.degree_in(eliminate) };
    let s = if b.is_zero() { 0 } else { b.degree_in(eliminate) };
    if r == 0 || s == 0 {
        return Err(Error::EliminationDegenerate);
    }
    let ring = PolyRing::new(f);
    // coefficient of (eliminated)^j, dehomogenized at the second kept variable
    let coeff = |h: &TernaryForm, j: usize| -> Poly {
        let mut c = vec![f.zero(); h.degree() + 1];
        for (e, &v) in h.terms() {
            if e[eliminate] as usize == j {
                c[e[keep[0]] as usize] = v;
            }
        }
        Poly::from_coeffs(c)
    };
    let n = r + s;
    let mut m = vec![vec![Poly::zero(); n]; n];
    for i in 0..s {
        for t in 0..=r {
            m[i][i + t] = coeff(a, r - t);
        }
    }
    for i in 0..r {
        for t in 0..=s {
            m[s + i][i + t] = coeff(b, s - t);
        }
    }
    let det = bareiss_det(&ring, m);
    let total = s * a.degree() + r * b.degree() - r * s;
    BinaryForm::from_poly(f, &det, total)
}

fn bareiss_det(ring: &PolyRing<'_>, mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    let mut prev = ring.one();
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = ring.div_exact(&t, &prev);
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        ring.neg(&d)
    } else {
        d
    }
}
