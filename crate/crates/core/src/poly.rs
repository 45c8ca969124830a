//! Dense univariate polynomials over a [`Field`].
//!
//! This is the workhorse behind binary forms: a binary form of degree `n` is a
//! univariate polynomial of degree `<= n` (its dehomogenization at `v = 1`)
//! plus the multiplicity of the root at infinity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FieldElement};

const EDF_SEED: u64 = 0x5eed_d0b1_e0c0_4e12;

/// Coefficients low-to-high with no trailing zeros; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly {
    c: Vec<FieldElement>,
}

impl Poly {
    pub fn from_coeffs(mut c: Vec<FieldElement>) -> Poly {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Poly {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: FieldElement) -> Poly {
        Poly::from_coeffs(vec![a])
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> FieldElement {
        self.c.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.c.get(i).copied().unwrap_or_default()
    }

    /// Multiplicity of 0 as a root.
    pub fn low_order(&self) -> usize {
        self.c.iter().take_while(|x| x.is_zero()).count()
    }
}

pub struct PolyRing<'a> {
    f: &'a Field,
}

impl<'a> PolyRing<'a> {
    pub fn new(f: &'a Field) -> Self {
        PolyRing { f }
    }

    pub fn field(&self) -> &Field {
        self.f
    }

    pub fn one(&self) -> Poly {
        Poly::constant(self.f.one())
    }

    pub fn x(&self) -> Poly {
        Poly::from_coeffs(vec![self.f.zero(), self.f.one()])
    }

    pub fn is_one(&self, a: &Poly) -> bool {
        a.c.len() == 1 && a.c[0] == self.f.one()
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.c.len().max(b.c.len());
        Poly::from_coeffs((0..n).map(|i| self.f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.c.len().max(b.c.len());
        Poly::from_coeffs((0..n).map(|i| self.f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly { c: a.c.iter().map(|&x| self.f.neg(x)).collect() }
    }

    pub fn scale(&self, a: &Poly, s: FieldElement) -> Poly {
        Poly::from_coeffs(a.c.iter().map(|&x| self.f.mul(x, s)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.f.zero(); a.c.len() + b.c.len() - 1];
        for (i, &x) in a.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.c.iter().enumerate() {
                out[i + j] = self.f.add(out[i + j], self.f.mul(x, y));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn pow(&self, a: &Poly, e: usize) -> Poly {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.deg().expect("division by the zero polynomial");
        let inv = self.f.inv(b.lead()).unwrap();
        let mut r = a.c.clone();
        if r.len() <= db {
            return (Poly::zero(), a.clone());
        }
        let mut q = vec![self.f.zero(); r.len() - db];
        for i in (db..r.len()).rev() {
            let t = self.f.mul(r[i], inv);
            if t.is_zero() {
                continue;
            }
            q[i - db] = t;
            for j in 0..=db {
                r[i - db + j] = self.f.sub(r[i - db + j], self.f.mul(t, b.c[j]));
            }
        }
        r.truncate(db);
        (Poly::from_coeffs(q), Poly::from_coeffs(r))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Poly {
        self.divrem(a, b).1
    }

    pub fn div_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, d: &Poly, a: &Poly) -> bool {
        if d.is_zero() {
            return a.is_zero();
        }
        self.rem(a, d).is_zero()
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let inv = self.f.inv(a.lead()).unwrap();
        self.scale(a, inv)
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn derivative(&self, a: &Poly) -> Poly {
        Poly::from_coeffs(
            a.c.iter().enumerate().skip(1).map(|(i, &x)| self.f.mul(self.f.from_int(i as i64), x)).collect(),
        )
    }

    pub fn eval(&self, a: &Poly, x: FieldElement) -> FieldElement {
        a.c.iter().rev().fold(self.f.zero(), |acc, &c| self.f.add(self.f.mul(acc, x), c))
    }

    /// `base^e mod m`.
    pub fn powmod(&self, base: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut acc = self.rem(&self.one(), m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), m);
            }
            b = self.rem(&self.mul(&b, &b), m);
            e >>= 1;
        }
        acc
    }

    /// `a^q mod m` where `q` is the field order.
    fn frob_mod(&self, a: &Poly, m: &Poly) -> Poly {
        self.powmod(a, self.f.q() as u128, m)
    }

    /// For `a` with zero derivative, the polynomial `b` with `b^p = a`.
    fn pth_root(&self, a: &Poly) -> Poly {
        let p = self.f.p() as usize;
        Poly::from_coeffs(a.c.iter().step_by(p).map(|&x| self.f.pth_root(x)).collect())
    }

    /// Squarefree decomposition of a nonzero polynomial in characteristic p:
    /// returns the leading coefficient and monic pairwise coprime squarefree
    /// factors with their multiplicities, sorted by multiplicity.
    pub fn squarefree(&self, a: &Poly) -> (FieldElement, Vec<(Poly, usize)>) {
        assert!(!a.is_zero());
        let unit = a.lead();
        let mut out = Vec::new();
        self.sqf_monic(&self.monic(a), 1, &mut out);
        out.sort_by_key(|(_, m)| *m);
        let mut merged: Vec<(Poly, usize)> = Vec::new();
        for (s, m) in out {
            match merged.last_mut() {
                Some((t, mm)) if *mm == m => *t = self.mul(t, &s),
                _ => merged.push((s, m)),
            }
        }
        (unit, merged)
    }

    fn sqf_monic(&self, f: &Poly, scale: usize, out: &mut Vec<(Poly, usize)>) {
        if f.deg().unwrap_or(0) == 0 {
            return;
        }
        let d = self.derivative(f);
        if d.is_zero() {
            let r = self.pth_root(f);
            self.sqf_monic(&r, scale * self.f.p() as usize, out);
            return;
        }
        let mut c = self.gcd(f, &d);
        let mut w = self.div_exact(f, &c);
        let mut i = 1;
        while !self.is_one(&w) {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y);
            if z.deg().unwrap() > 0 {
                out.push((z, i * scale));
            }
            i += 1;
            w = y;
            c = self.div_exact(&c, &w);
        }
        if c.deg().unwrap() > 0 {
            let r = self.pth_root(&c);
            self.sqf_monic(&r, scale * self.f.p() as usize, out);
        }
    }

    pub fn is_squarefree(&self, a: &Poly) -> bool {
        let (_, parts) = self.squarefree(a);
        parts.iter().all(|(_, m)| *m == 1)
    }

    /// Rabin-style test: no irreducible factor of degree `<= n/2`.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let n = match f.deg() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let f = self.monic(f);
        let x = self.x();
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = self.frob_mod(&h, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if !self.is_one(&g) {
                return false;
            }
        }
        true
    }

    /// Distinct-degree factorization of a monic squarefree polynomial: pairs
    /// (product of all irreducible factors of degree e, e).
    pub fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(f);
        let x = self.x();
        let mut h = x.clone();
        let mut e = 1;
        while rest.deg().unwrap_or(0) >= 2 * e {
            h = self.frob_mod(&h, &rest);
            let g = self.gcd(&self.sub(&h, &x), &rest);
            if !self.is_one(&g) {
                rest = self.div_exact(&rest, &g);
                h = self.rem(&h, &rest);
                out.push((g, e));
            }
            e += 1;
        }
        if let Some(d) = rest.deg() {
            if d > 0 {
                out.push((rest, d));
            }
        }
        out
    }

    /// Cantor–Zassenhaus equal-degree splitting of a monic squarefree `f`
    /// whose irreducible factors all have degree `e`.
    pub fn equal_degree(&self, f: &Poly, e: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = f.deg().unwrap();
        if n == e {
            return vec![f.clone()];
        }
        let q = self.f.q();
        loop {
            let a = Poly::from_coeffs((0..n).map(|_| self.f.from_index(rng.gen_range(0..q))).collect());
            if a.deg().unwrap_or(0) == 0 {
                continue;
            }
            // a^((q^e - 1)/2) = (a^(1 + q + ... + q^(e-1)))^((q - 1)/2)
            let mut t = self.rem(&a, f);
            let mut norm = t.clone();
            for _ in 1..e {
                t = self.frob_mod(&t, f);
                norm = self.rem(&self.mul(&norm, &t), f);
            }
            let b = self.powmod(&norm, ((q - 1) / 2) as u128, f);
            let g = self.gcd(&self.sub(&b, &self.one()), f);
            let dg = g.deg().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.div_exact(f, &g);
                let mut out = self.equal_degree(&g, e, rng);
                out.extend(self.equal_degree(&h, e, rng));
                return out;
            }
        }
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted by (degree, coefficients).
    pub fn factor(&self, a: &Poly) -> (FieldElement, Vec<(Poly, usize)>) {
        let (unit, parts) = self.squarefree(a);
        let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
        let mut out = Vec::new();
        for (s, m) in parts {
            for (g, e) in self.distinct_degree(&s) {
                for irr in self.equal_degree(&g, e, &mut rng) {
                    out.push((irr, m));
                }
            }
        }
        out.sort_by(|x, y| (x.0.deg(), &x.0.c).cmp(&(y.0.deg(), &y.0.c)));
        (unit, out)
    }

    /// Roots in the field itself, with multiplicities, in increasing order.
    pub fn roots(&self, a: &Poly) -> Vec<(FieldElement, usize)> {
        let (_, parts) = self.squarefree(a);
        let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED);
        let mut out = Vec::new();
        let x = self.x();
        for (s, m) in parts {
            if s.deg() == Some(1) {
                out.push((self.f.neg(self.monic(&s).c[0]), m));
                continue;
            }
            let h = self.frob_mod(&x, &s);
            let lin = self.gcd(&self.sub(&h, &x), &s);
            if lin.deg().unwrap_or(0) == 0 {
                continue;
            }
            for r in self.equal_degree(&lin, 1, &mut rng) {
                out.push((self.f.neg(r.c[0]), m));
            }
        }
        out.sort();
        out
    }
}
