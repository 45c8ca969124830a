//! Enumeration of curves of degree `d` with a `(d−1)`-fold point at `Q`,
//! filtered by the even-contact conditions.

use rayon::prelude::*;

use crate::cover::{self, CaseClassification, ContactProfile, RationalMapToX};
use crate::curve::{centering_matrix, MarkedCurve, MAX_DEGREE};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::{BinaryForm, TernaryForm};
use crate::linalg::{nullspace, Mat3};
use crate::surface::{DelPezzo2, PlanePoint};

pub const DEFAULT_MAX_CANDIDATES: u128 = 1_000_000;
pub const MAX_CANDIDATES_ENV: &str = "DP2_MAX_CANDIDATES";

/// Degree-`d` forms with multiplicity at least `d − 1` at `q`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub field: Field,
    pub d: usize,
    pub q: PlanePoint,
    pub basis: Vec<TernaryForm>,
    /// Rank of the vanishing conditions.
    pub conditions_rank: usize,
}

impl LinearSystem {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Number of projective classes, `(q^dim − 1)/(q − 1)`.
    pub fn projective_size(&self) -> u128 {
        let q = self.field.q() as u128;
        (0..self.dimension()).fold(0u128, |acc, _| acc.saturating_mul(q).saturating_add(1))
    }

    /// Combination `Σ c_i · basis_i`.
    pub fn combine(&self, c: &[FieldElement]) -> TernaryForm {
        let mut out = TernaryForm::zero(&self.field, self.d);
        for (b, &ci) in self.basis.iter().zip(c) {
            if !ci.is_zero() {
                out = out.add(&b.scale(ci)).expect("same degree");
            }
        }
        out
    }
}

fn monomials(d: usize) -> Vec<[u32; 3]> {
    let d = d as u32;
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push([a, b, d - a - b]);
        }
    }
    out
}

pub fn linear_system(field: &Field, d: usize, q: &PlanePoint) -> Result<LinearSystem> {
    if d == 0 || d > MAX_DEGREE {
        return Err(Error::InvalidMarkedCurve(format!("degree {d} outside 1..={MAX_DEGREE}")));
    }
    if q.field() != field {
        return Err(Error::FieldMismatch);
    }
    let a = centering_matrix(q);
    let mons = monomials(d);
    // Row per centered monomial of (x, y)-degree below d − 1, column per original monomial.
    let conds: Vec<[u32; 3]> = monomials(d).into_iter().filter(|e| ((e[0] + e[1]) as usize) < d - 1).collect();
    let centered: Vec<TernaryForm> =
        mons.iter().map(|&e| TernaryForm::monomial(field, e, field.one()).substitute_linear(&a)).collect();
    let m: Vec<Vec<FieldElement>> = conds.iter().map(|&e| centered.iter().map(|c| c.coeff(e)).collect()).collect();
    let (rank, null) = if m.is_empty() {
        (0, (0..mons.len()).map(|i| (0..mons.len()).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect())
    } else {
        nullspace(field, &m, mons.len())
    };
    let basis = null
        .into_iter()
        .map(|v: Vec<FieldElement>| TernaryForm::new(field, d, mons.iter().copied().zip(v)).expect("homogeneous"))
        .collect();
    Ok(LinearSystem { field: field.clone(), d, q: q.clone(), basis, conditions_rank: rank })
}

#[derive(Clone, Debug)]
pub struct SearchCaps {
    pub max_candidates: u128,
    pub lift: bool,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_candidates: DEFAULT_MAX_CANDIDATES, lift: false }
    }
}

impl SearchCaps {
    /// Defaults, with the cap overridden by `DP2_MAX_CANDIDATES` when set.
    pub fn from_env() -> SearchCaps {
        let mut caps = SearchCaps::default();
        if let Some(n) = std::env::var(MAX_CANDIDATES_ENV).ok().and_then(|s| s.trim().parse().ok()) {
            caps.max_candidates = n;
        }
        caps
    }
}

#[derive(Clone, Debug)]
pub struct SearchHit {
    /// Curve equation normalized to leading coefficient 1.
    pub curve: MarkedCurve,
    pub profile: ContactProfile,
    pub case: CaseClassification,
    pub map: Option<RationalMapToX>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub dimension: usize,
    pub candidates: u64,
    pub rejected_multiplicity: u64,
    pub rejected_integrality: u64,
    pub rejected_ordinary: u64,
    pub rejected_inside_branch: u64,
    pub rejected_contact: u64,
    pub rejected_case: u64,
    pub rejected_invalid: u64,
    pub hits: u64,
    pub lifts_verified: u64,
    pub lift_failures: u64,
    /// Conic-case hits whose odd branches above `Q` number `d − 1` (odd `d`) or `d − 2` (even `d`).
    pub parity_checked: u64,
    pub parity_violations: u64,
}

impl SearchStats {
    fn merge(mut self, o: &SearchStats) -> SearchStats {
        self.candidates += o.candidates;
        self.rejected_multiplicity += o.rejected_multiplicity;
        self.rejected_integrality += o.rejected_integrality;
        self.rejected_ordinary += o.rejected_ordinary;
        self.rejected_inside_branch += o.rejected_inside_branch;
        self.rejected_contact += o.rejected_contact;
        self.rejected_case += o.rejected_case;
        self.rejected_invalid += o.rejected_invalid;
        self.hits += o.hits;
        self.lifts_verified += o.lifts_verified;
        self.lift_failures += o.lift_failures;
        self.parity_checked += o.parity_checked;
        self.parity_violations += o.parity_violations;
        self
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub hits: Vec<SearchHit>,
    pub stats: SearchStats,
}

/// Everything precomputed in the centered frame.
struct Frame<'a> {
    field: &'a Field,
    d: usize,
    low: Vec<BinaryForm>,
    top: Vec<BinaryForm>,
    /// `z_part(k)` of the centered branch form.
    branch_parts: Vec<BinaryForm>,
    q_on_branch: bool,
}

enum Outcome {
    Multiplicity,
    Integrality,
    Ordinary,
    InsideBranch,
    Contact,
    Survivor,
}

impl Frame<'_> {
    fn coefficients(&self, mut idx: u128, dim: usize) -> Vec<FieldElement> {
        let q = self.field.q() as u128;
        let mut c = vec![self.field.zero(); dim];
        let mut lead = 0;
        loop {
            let block = q.pow((dim - 1 - lead) as u32);
            if idx < block {
                break;
            }
            idx -= block;
            lead += 1;
        }
        c[lead] = self.field.one();
        for slot in c[lead + 1..].iter_mut().rev() {
            *slot = self.field.from_index((idx % q) as u64);
            idx /= q;
        }
        c
    }

    fn combine(&self, forms: &[BinaryForm], c: &[FieldElement], degree: usize) -> BinaryForm {
        let f = self.field;
        let mut out = vec![f.zero(); degree + 1];
        for (b, &ci) in forms.iter().zip(c) {
            if ci.is_zero() {
                continue;
            }
            for (o, &bc) in out.iter_mut().zip(b.coeffs()) {
                *o = f.add(*o, f.mul(ci, bc));
            }
        }
        BinaryForm::new(f, out)
    }

    fn screen(&self, c: &[FieldElement]) -> Outcome {
        let a = self.combine(&self.low, c, self.d - 1);
        if a.is_zero() {
            return Outcome::Multiplicity;
        }
        let top = self.combine(&self.top, c, self.d);
        if !top.gcd(&a).is_ok_and(|g| g.is_constant()) {
            return Outcome::Integrality;
        }
        if self.q_on_branch && !a.is_squarefree() {
            return Outcome::Ordinary;
        }
        // H = Σ_k B_{4−k}(u, v)·a^{4−k}·(−a_d)^k
        let f = self.field;
        let neg_top = top.neg();
        let mut h = BinaryForm::zero(f, 4 * self.d);
        let mut apow = vec![BinaryForm::constant(f, f.one())];
        let mut tpow = vec![BinaryForm::constant(f, f.one())];
        for i in 1..=4 {
            apow.push(apow[i - 1].mul_unchecked(&a));
            tpow.push(tpow[i - 1].mul_unchecked(&neg_top));
        }
        for k in 0..=4 {
            let part = &self.branch_parts[4 - k];
            if part.is_zero() {
                continue;
            }
            h.add_assign_unchecked(&part.mul_unchecked(&apow[4 - k]).mul_unchecked(&tpow[k]));
        }
        if h.is_zero() {
            return Outcome::InsideBranch;
        }
        match cover::quick_verdict(&h, &a) {
            Ok((true, _)) => Outcome::Survivor,
            _ => Outcome::Contact,
        }
    }
}

fn normalize(h: &TernaryForm) -> TernaryForm {
    h.monic().1
}

/// Staged search over all projective classes of the linear system.
pub fn search(x: &DelPezzo2, q: &PlanePoint, d: usize, caps: &SearchCaps) -> Result<SearchResult> {
    let field = x.field();
    if q.field() != field {
        return Err(Error::FieldMismatch);
    }
    if !x.is_smooth()?.smooth {
        return Err(Error::HypothesisViolated("surface is not smooth".into()));
    }
    let system = linear_system(field, d, q)?;
    let total = system.projective_size();
    if total > caps.max_candidates {
        return Err(Error::SearchSpaceTooLarge(total, caps.max_candidates));
    }
    let a: Mat3 = centering_matrix(q);
    let centered: Vec<TernaryForm> = system.basis.iter().map(|b| b.substitute_linear(&a)).collect();
    let bc = x.branch().substitute_linear(&a);
    let frame = Frame {
        field,
        d,
        low: centered.iter().map(|h| h.z_part(d - 1)).collect(),
        top: centered.iter().map(|h| h.z_part(d)).collect(),
        branch_parts: (0..=4).map(|k| bc.z_part(k)).collect(),
        q_on_branch: x.branch().eval(q.coords()).is_zero(),
    };
    let dim = system.dimension();
    let p_above = x.rational_point_above(q)?;
    let screened: Vec<(SearchStats, Option<u128>)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let c = frame.coefficients(i, dim);
            let mut s = SearchStats { candidates: 1, ..Default::default() };
            match frame.screen(&c) {
                Outcome::Multiplicity => s.rejected_multiplicity = 1,
                Outcome::Integrality => s.rejected_integrality = 1,
                Outcome::Ordinary => s.rejected_ordinary = 1,
                Outcome::InsideBranch => s.rejected_inside_branch = 1,
                Outcome::Contact => s.rejected_contact = 1,
                Outcome::Survivor => return (s, Some(i)),
            }
            (s, None)
        })
        .collect();
    let mut stats = SearchStats { dimension: dim, ..Default::default() };
    let mut survivors = Vec::new();
    for (s, i) in &screened {
        stats = stats.merge(s);
        survivors.extend(*i);
    }
    let certified: Vec<(SearchStats, Option<SearchHit>)> = survivors
        .par_iter()
        .map(|&i| certify(x, &system, &frame.coefficients(i, dim), p_above.as_ref(), caps.lift))
        .collect();
    let mut hits = Vec::new();
    for (s, hit) in certified {
        stats = stats.merge(&s);
        hits.extend(hit);
    }
    hits.sort_by_cached_key(|h: &SearchHit| h.curve.h().to_terms());
    Ok(SearchResult { hits, stats })
}

/// Rebuild the candidate from its equation alone and run the full checks.
fn certify(
    x: &DelPezzo2,
    system: &LinearSystem,
    c: &[FieldElement],
    p: Option<&crate::surface::SurfacePoint>,
    lift: bool,
) -> (SearchStats, Option<SearchHit>) {
    let mut s = SearchStats::default();
    let h = normalize(&system.combine(c));
    let Ok(curve) = MarkedCurve::new(h, system.q.clone()) else {
        s.rejected_invalid = 1;
        return (s, None);
    };
    let theta = curve.parametrize();
    let profile = match cover::pullback_branch(x, &theta) {
        Ok(p) => p,
        Err(_) => {
            s.rejected_inside_branch = 1;
            return (s, None);
        }
    };
    let case = match cover::classify(x, &curve, &profile, None) {
        Ok(CaseClassification::NotApplicable(_)) => {
            s.rejected_case = 1;
            return (s, None);
        }
        Ok(case) => case,
        Err(_) => {
            s.rejected_contact = 1;
            return (s, None);
        }
    };
    s.hits = 1;
    if case == CaseClassification::Conic {
        s.parity_checked = 1;
        let want = if curve.d() % 2 == 1 { curve.d() - 1 } else { curve.d() - 2 };
        if profile.odd_branches_above_q() != want {
            s.parity_violations = 1;
        }
    }
    let map = if lift {
        let made = match case {
            CaseClassification::Split => cover::lift_split(x, &theta, &profile, p),
            _ => cover::lift_conic(x, &theta, &profile),
        };
        match made.and_then(|m| cover::verify_map(&m, Some(curve.h())).map(|_| m)) {
            Ok(m) => {
                s.lifts_verified = 1;
                Some(m)
            }
            Err(_) => {
                s.lift_failures = 1;
                None
            }
        }
    } else {
        None
    };
    (s, Some(SearchHit { curve, profile, case, map }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        let f3 = Field::prime(3).unwrap();
        let q = PlanePoint::from_ints(&f3, [0, 0, 1]).unwrap();
        let s = linear_system(&f3, 4, &q).unwrap();
        assert_eq!((s.dimension(), s.conditions_rank), (9, 6));
        assert_eq!(s.projective_size(), 9841);
        for d in 2..=5 {
            let q = PlanePoint::from_ints(&f3, [1, 2, 1]).unwrap();
            let s = linear_system(&f3, d, &q).unwrap();
            assert_eq!(s.dimension(), (d + 1) * (d + 2) / 2 - (d - 1) * d / 2);
            for b in &s.basis {
                assert!(crate::curve::multiplicity_at(b, &q).unwrap() >= d - 1);
            }
        }
        let f9 = Field::gf9();
        let q3 = PlanePoint::from_ints(&f9, [1, 1, 1]).unwrap();
        assert_eq!(linear_system(&f9, 3, &q3).unwrap().dimension(), 7);
        assert_eq!(linear_system(&f9, 2, &q3).unwrap().dimension(), 5);
    }

    #[test]
    fn index_decoding_is_projective() {
        let f3 = Field::prime(3).unwrap();
        let frame = Frame { field: &f3, d: 2, low: vec![], top: vec![], branch_parts: vec![], q_on_branch: false };
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..13u128 {
            let c = frame.coefficients(i, 3);
            assert_eq!(c.iter().find(|x| !x.is_zero()), Some(&f3.one()));
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let f3 = Field::prime(3).unwrap();
        let x = crate::golden::cases()[0].surface().unwrap();
        let q = PlanePoint::from_ints(&f3, [0, 0, 1]).unwrap();
        let caps = SearchCaps { max_candidates: 100, lift: false };
        assert!(matches!(search(&x, &q, 4, &caps), Err(Error::SearchSpaceTooLarge(9841, 100))));
    }
}
