//! Exact arithmetic in `F_p` and `F_{p^k}` for odd primes `p`.
//!
//! A [`Field`] is a cheaply clonable handle to an immutable [`FieldDescriptor`]
//! holding the prime, the (monic, irreducible) modulus and, for small fields,
//! log/exp tables. Elements are plain `Copy` values ([`FieldElement`]); all
//! arithmetic goes through the field handle.
//!
//! Elements are packed as integers in `[0, q)` with the coefficient of `T^0`
//! in the most significant base-`p` digit, so the numeric order of the
//! packing is the lexicographic order of the coefficient vector
//! `(c_0, c_1, ..., c_{k-1})`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyRing};

/// Largest field order for which log/exp tables are built.
const TABLE_LIMIT: u64 = 1 << 16;
/// Largest field order for which a full addition table is built.
const ADD_TABLE_LIMIT: u64 = 729;
/// Field orders must stay below this bound so products of packed values fit.
pub const MAX_ORDER: u64 = 1 << 62;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElement(pub(crate) u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Position of the element in the lexicographic enumeration of the field.
    pub fn index(self) -> u64 {
        self.0
    }
}

struct Tables {
    // exp has length 2(q-1) so that log a + log b never needs reduction.
    exp: Vec<u64>,
    log: Vec<u32>,
    add: Vec<u32>,
    neg: Vec<u32>,
}

/// How a field was obtained from a smaller one by [`Field::extension`].
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source_modulus: Vec<u64>,
    pub degree: usize,
    /// Image of the source generator `T`; `None` when the source is prime.
    pub generator_image: Option<FieldElement>,
}

pub struct FieldDescriptor {
    p: u64,
    k: usize,
    modulus: Vec<u64>,
    q: u64,
    place: Vec<u64>,
    tables: Option<Tables>,
    embedding: Option<Embedding>,
    extensions: Mutex<BTreeMap<usize, Field>>,
}

#[derive(Clone)]
pub struct Field(Arc<FieldDescriptor>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}; modulus {:?})", self.0.p, self.0.k, self.0.modulus)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}", self.0.q)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, &[0, 1])
    }

    /// `F_p[T]/(modulus)`; `modulus` is given low-to-high and reduced mod `p`.
    pub fn new(p: u64, modulus: &[i64]) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharTwo);
        }
        if !is_prime(p) || p >= (1 << 31) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime below 2^31")));
        }
        let mut m: Vec<u64> = modulus.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
        while m.last() == Some(&0) {
            m.pop();
        }
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let k = m.len() - 1;
        if k >= 2 {
            let prime = Field::build(p, vec![0, 1], None)?;
            let ring = PolyRing::new(&prime);
            let f = Poly::from_coeffs(m.iter().map(|&c| FieldElement(c)).collect());
            if !ring.is_irreducible(&f) {
                return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
            }
        }
        Field::build(p, m, None)
    }

    /// `F_9 = F_3[γ]/(γ² − γ − 1)`.
    pub fn gf9() -> Field {
        Field::new(3, &[-1, -1, 1]).expect("T^2 - T - 1 is irreducible over F_3")
    }

    fn build(p: u64, modulus: Vec<u64>, embedding: Option<Embedding>) -> Result<Field> {
        let k = modulus.len() - 1;
        let mut q: u64 = 1;
        for _ in 0..k {
            q = q
                .checked_mul(p)
                .filter(|&v| v < MAX_ORDER)
                .ok_or_else(|| Error::InvalidField(format!("field order {p}^{k} is too large")))?;
        }
        let mut place = vec![1u64; k];
        for i in (0..k.saturating_sub(1)).rev() {
            place[i] = place[i + 1] * p;
        }
        let mut desc = FieldDescriptor {
            p,
            k,
            modulus,
            q,
            place,
            tables: None,
            embedding,
            extensions: Mutex::new(BTreeMap::new()),
        };
        if q <= TABLE_LIMIT {
            desc.tables = Some(desc.build_tables());
        }
        Ok(Field(Arc::new(desc)))
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.0
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn embedding(&self) -> Option<&Embedding> {
        self.0.embedding.as_ref()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(self.0.place[0])
    }

    /// The class of `T` (γ for the default `F_9`); equals `0` in a prime field
    /// presented as `F_p[T]/(T)`.
    pub fn generator(&self) -> FieldElement {
        if self.0.k == 1 {
            let c = (self.0.p - self.0.modulus[0]) % self.0.p;
            return FieldElement(c);
        }
        FieldElement(self.0.place[1])
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        let r = n.rem_euclid(self.0.p as i64) as u64;
        FieldElement(r * self.0.place[0])
    }

    pub fn from_index(&self, idx: u64) -> FieldElement {
        debug_assert!(idx < self.0.q);
        FieldElement(idx)
    }

    pub fn contains(&self, a: FieldElement) -> bool {
        a.0 < self.0.q
    }

    /// Element with coefficient vector `coeffs` (length `k`, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.k {
            return Err(Error::FieldMismatch);
        }
        let p = self.0.p as i64;
        let mut v = 0u64;
        for (i, &c) in coeffs.iter().enumerate() {
            v += (c.rem_euclid(p) as u64) * self.0.place[i];
        }
        Ok(FieldElement(v))
    }

    pub fn coeffs(&self, a: FieldElement) -> Vec<u64> {
        let mut d = [0u64; 64];
        self.0.unpack(a.0, &mut d);
        d[..self.0.k].to_vec()
    }

    /// The element as an integer if it lies in the prime field.
    pub fn as_prime(&self, a: FieldElement) -> Option<u64> {
        if a.0 % self.0.place[0] == 0 {
            Some(a.0 / self.0.place[0])
        } else {
            None
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.0.q).map(FieldElement)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.0.add(a, b)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.0.add(a, self.0.neg(b))
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        self.0.neg(a)
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.0.mul(a, b)
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.0.inv_nonzero(a))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, e: u128) -> FieldElement {
        self.0.pow(a, e)
    }

    /// Checked binary operation on possibly foreign values.
    pub fn arith(&self, a: FieldElement, b: FieldElement, op: ArithOp) -> Result<FieldElement> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
            ArithOp::Div => self.div(a, b)?,
        })
    }

    /// `a^(p^i)`.
    pub fn frobenius(&self, a: FieldElement, i: usize) -> FieldElement {
        let k = self.0.k;
        if k == 1 || i % k == 0 {
            return a;
        }
        let mut x = a;
        for _ in 0..(i % k) {
            x = self.pow(x, self.0.p as u128);
        }
        x
    }

    /// The unique `p`-th root, i.e. `frobenius(a, k - 1)`.
    pub fn pth_root(&self, a: FieldElement) -> FieldElement {
        self.frobenius(a, self.0.k - 1)
    }

    /// Euler's criterion.
    pub fn is_square(&self, a: FieldElement) -> bool {
        if a.is_zero() {
            return true;
        }
        if let Some(t) = &self.0.tables {
            return t.log[a.0 as usize] % 2 == 0;
        }
        self.pow(a, ((self.0.q - 1) / 2) as u128) == self.one()
    }

    /// Square root, choosing the lexicographically smaller of `{s, -s}`.
    pub fn sqrt(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Ok(a);
        }
        let s = if let Some(t) = &self.0.tables {
            let l = t.log[a.0 as usize];
            if l % 2 == 1 {
                return Err(Error::NotASquare);
            }
            FieldElement(t.exp[(l / 2) as usize])
        } else {
            self.tonelli_shanks(a)?
        };
        Ok(s.min(self.neg(s)))
    }

    fn tonelli_shanks(&self, a: FieldElement) -> Result<FieldElement> {
        if !self.is_square(a) {
            return Err(Error::NotASquare);
        }
        let q = self.0.q;
        let mut t = q - 1;
        let mut s = 0u32;
        while t % 2 == 0 {
            t /= 2;
            s += 1;
        }
        let z = self
            .elements()
            .skip(1)
            .find(|&z| !self.is_square(z))
            .expect("odd-order field has a nonsquare");
        let mut m = s;
        let mut c = self.pow(z, t as u128);
        let mut tt = self.pow(a, t as u128);
        let mut r = self.pow(a, t.div_ceil(2) as u128);
        let one = self.one();
        while tt != one {
            let mut i = 0u32;
            let mut t2 = tt;
            while t2 != one {
                t2 = self.mul(t2, t2);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            tt = self.mul(tt, c);
            r = self.mul(r, b);
        }
        Ok(r)
    }

    /// `F_{p^{k m}}` with the lexicographically least irreducible modulus over
    /// `F_p`, together with a recorded embedding of `self`. Results are cached,
    /// so repeated calls return the same handle.
    pub fn extension(&self, m: usize) -> Result<Field> {
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be >= 1".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        if let Some(f) = self.0.extensions.lock().unwrap().get(&m) {
            return Ok(f.clone());
        }
        let built = self.build_extension(m)?;
        let mut cache = self.0.extensions.lock().unwrap();
        Ok(cache.entry(m).or_insert(built).clone())
    }

    fn build_extension(&self, m: usize) -> Result<Field> {
        let p = self.0.p;
        let n = self.0.k * m;
        let prime = Field::prime(p)?;
        let modulus = least_irreducible(&prime, n)?;
        let bare = Field::build(p, modulus.clone(), None)?;
        let generator_image = if self.0.k == 1 {
            None
        } else {
            let ring = PolyRing::new(&bare);
            let f = Poly::from_coeffs(
                self.0.modulus.iter().map(|&c| bare.from_int(c as i64)).collect(),
            );
            let roots = ring.roots(&f);
            if roots.len() != self.0.k {
                return Err(Error::InvalidField("source modulus does not split in target".into()));
            }
            Some(roots.iter().map(|r| r.0).min().unwrap())
        };
        Field::build(
            p,
            modulus,
            Some(Embedding { source_modulus: self.0.modulus.clone(), degree: m, generator_image }),
        )
    }

    /// Image of `a` (an element of `self`) in `target`.
    pub fn embed(&self, a: FieldElement, target: &Field) -> Result<FieldElement> {
        if !self.contains(a) {
            return Err(Error::FieldMismatch);
        }
        if target == self {
            return Ok(a);
        }
        if target.p() != self.p() {
            return Err(Error::NoEmbeddingRecorded);
        }
        if self.k() == 1 {
            return Ok(target.from_int(self.as_prime(a).unwrap() as i64));
        }
        let emb = target.embedding().ok_or(Error::NoEmbeddingRecorded)?;
        if emb.source_modulus != self.0.modulus {
            return Err(Error::NoEmbeddingRecorded);
        }
        let g = emb.generator_image.ok_or(Error::NoEmbeddingRecorded)?;
        let c = self.coeffs(a);
        let mut acc = target.zero();
        for &ci in c.iter().rev() {
            acc = target.add(target.mul(acc, g), target.from_int(ci as i64));
        }
        Ok(acc)
    }

    pub fn fmt_element(&self, a: FieldElement) -> String {
        let c = self.coeffs(a);
        if self.k() == 1 {
            return c[0].to_string();
        }
        let mut parts = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "g".to_string(),
                _ => format!("g^{i}"),
            };
            parts.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => mono,
                _ => format!("{ci}*{mono}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn least_irreducible(prime: &Field, n: usize) -> Result<Vec<u64>> {
    let p = prime.p();
    if n == 1 {
        return Ok(vec![0, 1]);
    }
    let ring = PolyRing::new(prime);
    let total = (p as u128).pow(n as u32);
    let lead_place = total / p as u128;
    // c_0 is the most significant digit; c_0 = 0 gives a root at 0.
    for idx in lead_place..total {
        let mut c = vec![0u64; n + 1];
        let mut r = idx;
        for i in (0..n).rev() {
            c[i] = (r % p as u128) as u64;
            r /= p as u128;
        }
        c[n] = 1;
        let f = Poly::from_coeffs(c.iter().map(|&x| FieldElement(x)).collect());
        if ring.is_irreducible(&f) {
            return Ok(c);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {n}")))
}

impl FieldDescriptor {
    fn unpack(&self, mut v: u64, out: &mut [u64; 64]) {
        let p = self.p;
        for i in (0..self.k).rev() {
            out[i] = v % p;
            v /= p;
        }
    }

    fn pack(&self, d: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in d.iter().take(self.k) {
            v = v * self.p + c;
        }
        v
    }

    fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if let Some(t) = &self.tables {
            if !t.add.is_empty() {
                return FieldElement(t.add[(a.0 * self.q + b.0) as usize] as u64);
            }
        }
        self.add_generic(a, b)
    }

    fn add_generic(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.unpack(a.0, &mut x);
        self.unpack(b.0, &mut y);
        for i in 0..self.k {
            x[i] = (x[i] + y[i]) % self.p;
        }
        FieldElement(self.pack(&x))
    }

    fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            return a;
        }
        if self.k == 1 {
            return FieldElement(self.p - a.0);
        }
        if let Some(t) = &self.tables {
            return FieldElement(t.neg[a.0 as usize] as u64);
        }
        self.neg_generic(a)
    }

    fn neg_generic(&self, a: FieldElement) -> FieldElement {
        let mut x = [0u64; 64];
        self.unpack(a.0, &mut x);
        for c in x.iter_mut().take(self.k) {
            *c = (self.p - *c) % self.p;
        }
        FieldElement(self.pack(&x))
    }

    fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if self.k == 1 {
            return FieldElement(a.0 * b.0 % self.p);
        }
        if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return FieldElement(t.exp[l]);
        }
        self.mul_generic(a, b)
    }

    fn mul_generic(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let k = self.k;
        let p = self.p;
        let (mut x, mut y) = ([0u64; 64], [0u64; 64]);
        self.unpack(a.0, &mut x);
        self.unpack(b.0, &mut y);
        let mut prod = [0u64; 128];
        for i in 0..k {
            if x[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let t = prod[i];
            if t == 0 {
                continue;
            }
            for j in 0..k {
                prod[i - k + j] = (prod[i - k + j] + (p - t) * self.modulus[j]) % p;
            }
            prod[i] = 0;
        }
        FieldElement(self.pack(&prod[..k]))
    }

    fn pow(&self, a: FieldElement, mut e: u128) -> FieldElement {
        let one = FieldElement(self.place[0]);
        if e == 0 {
            return one;
        }
        if a.0 == 0 {
            return a;
        }
        if let Some(t) = &self.tables {
            let ord = (self.q - 1) as u128;
            let l = (t.log[a.0 as usize] as u128 * (e % ord)) % ord;
            return FieldElement(t.exp[l as usize]);
        }
        let mut base = a;
        let mut acc = one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        if let Some(t) = &self.tables {
            let ord = (self.q - 1) as usize;
            let l = t.log[a.0 as usize] as usize;
            return FieldElement(t.exp[(ord - l) % ord]);
        }
        self.pow(a, (self.q - 2) as u128)
    }

    fn generic_pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut acc = FieldElement(self.place[0]);
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.generic_mul_any(acc, base);
            }
            base = self.generic_mul_any(base, base);
            e >>= 1;
        }
        acc
    }

    fn generic_mul_any(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.k == 1 {
            FieldElement(a.0 * b.0 % self.p)
        } else if a.0 == 0 || b.0 == 0 {
            FieldElement(0)
        } else {
            self.mul_generic(a, b)
        }
    }

    fn build_tables(&self) -> Tables {
        let q = self.q;
        let one = FieldElement(self.place[0]);
        let factors = prime_factors(q - 1);
        let g = (1..q)
            .map(FieldElement)
            .find(|&g| factors.iter().all(|&r| self.generic_pow(g, (q - 1) / r) != one))
            .expect("multiplicative group is cyclic");
        let ord = (q - 1) as usize;
        let mut exp = vec![0u64; 2 * ord];
        let mut log = vec![0u32; q as usize];
        let mut x = one;
        for i in 0..ord {
            exp[i] = x.0;
            exp[i + ord] = x.0;
            log[x.0 as usize] = i as u32;
            x = self.generic_mul_any(x, g);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| if self.k == 1 { ((self.p - a) % self.p) as u32 } else { self.neg_generic(FieldElement(a)).0 as u32 })
            .collect();
        let mut add = Vec::new();
        if q <= ADD_TABLE_LIMIT && self.k > 1 {
            add = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    add.push(self.add_generic(FieldElement(a), FieldElement(b)).0 as u32);
                }
            }
        }
        Tables { exp, log, add, neg }
    }
}
