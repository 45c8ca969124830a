//! Pulling the branch quartic back to the normalization of a marked curve,
//! deciding the parity conditions, and lifting `θ` to explicit maps `P¹ → X`.

use crate::curve::{MarkedCurve, Parametrization};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::forms::{BinaryForm, SquarefreeDecomposition, TernaryForm};
use crate::linalg::row_reduce;
use crate::surface::{DelPezzo2, SurfacePoint};

/// A closed point of `P¹` where the pulled-back branch form vanishes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchPlace {
    /// Monic irreducible factor of `H` over the base field.
    pub factor: BinaryForm,
    /// Number of geometric points in the place (`deg factor`).
    pub degree: usize,
    pub multiplicity: usize,
    /// Lies over the marked point.
    pub above_q: bool,
}

#[derive(Clone, Debug)]
pub struct ContactProfile {
    /// `H = b ∘ θ`, of degree `4d`.
    pub h: BinaryForm,
    pub decomposition: SquarefreeDecomposition,
    pub places: Vec<BranchPlace>,
    pub even_off_q: bool,
    /// `Σ degree·multiplicity` over the places above the marked point.
    pub total_above_q: usize,
    pub even_everywhere: bool,
    /// Geometric points where `H` has odd multiplicity.
    pub odd_points: usize,
}

impl ContactProfile {
    /// Geometric points above `Q` at which `H` vanishes to odd order.
    pub fn odd_branches_above_q(&self) -> usize {
        self.places.iter().filter(|p| p.above_q && p.multiplicity % 2 == 1).map(|p| p.degree).sum()
    }

    pub fn above_q(&self) -> impl Iterator<Item = &BranchPlace> {
        self.places.iter().filter(|p| p.above_q)
    }
}

/// `b ∘ θ`, rejecting curves inside the branch locus.
pub fn pullback_form(x: &DelPezzo2, theta: &Parametrization) -> Result<BinaryForm> {
    if x.field() != theta.curve().field() {
        return Err(Error::FieldMismatch);
    }
    let h = x.branch().compose(theta.components())?;
    if h.is_zero() {
        return Err(Error::CurveInsideBranch);
    }
    Ok(h)
}

/// Parity verdict and number of odd geometric points, from the squarefree
/// decomposition alone: every odd part must lie above `Q`, and then the
/// total order above `Q` is even iff the odd parts have even total degree.
pub fn quick_verdict(h: &BinaryForm, tangent_cone: &BinaryForm) -> Result<(bool, usize)> {
    let dec = h.squarefree_decomposition()?;
    let radical = tangent_cone.squarefree_decomposition()?.factors.iter().fold(
        BinaryForm::constant(h.field(), h.field().one()),
        |acc, (s, _)| acc.mul_unchecked(s),
    );
    let mut odd = 0;
    let mut ok = true;
    for (s, m) in &dec.factors {
        if m % 2 == 1 {
            odd += s.degree();
            ok &= s.divides(&radical);
        }
    }
    Ok((ok && odd % 2 == 0, odd))
}

pub fn pullback_branch(x: &DelPezzo2, theta: &Parametrization) -> Result<ContactProfile> {
    let h = pullback_form(x, theta)?;
    let cone = theta.curve().tangent_cone();
    let decomposition = h.squarefree_decomposition()?;
    let (_, factors) = h.factor()?;
    let places: Vec<BranchPlace> = factors
        .into_iter()
        .map(|(phi, m)| BranchPlace { above_q: phi.divides(cone), degree: phi.degree(), multiplicity: m, factor: phi })
        .collect();
    let even_off_q = places.iter().all(|p| p.above_q || p.multiplicity % 2 == 0);
    let total_above_q = places.iter().filter(|p| p.above_q).map(|p| p.degree * p.multiplicity).sum::<usize>();
    let odd_points = places.iter().filter(|p| p.multiplicity % 2 == 1).map(|p| p.degree).sum();
    Ok(ContactProfile {
        h,
        decomposition,
        places,
        even_off_q,
        total_above_q,
        even_everywhere: even_off_q && total_above_q % 2 == 0,
        odd_points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseClassification {
    /// The marked point is off the branch curve.
    Split,
    /// The marked point is on the branch curve; the double cover is a conic.
    Conic,
    NotApplicable(String),
}

impl CaseClassification {
    pub fn label(&self) -> &'static str {
        match self {
            CaseClassification::Split => "split",
            CaseClassification::Conic => "conic",
            CaseClassification::NotApplicable(_) => "not-applicable",
        }
    }
}

pub fn classify(
    x: &DelPezzo2,
    c: &MarkedCurve,
    profile: &ContactProfile,
    p: Option<&SurfacePoint>,
) -> Result<CaseClassification> {
    if !profile.even_everywhere {
        return Err(Error::HypothesisViolated("contact with the branch curve is not even everywhere".into()));
    }
    if let Some(p) = p {
        if &p.project() != c.q() {
            return Err(Error::HypothesisViolated("the surface point does not lie over the marked point".into()));
        }
    }
    if !x.branch().eval(c.q().coords()).is_zero() {
        return Ok(CaseClassification::Split);
    }
    if !c.is_ordinary() {
        return Ok(CaseClassification::NotApplicable("marked point is not an ordinary singularity".into()));
    }
    if !(3..=4).contains(&c.d()) {
        return Ok(CaseClassification::NotApplicable(format!("degree {} with the marked point on the branch curve", c.d())));
    }
    if profile.odd_points != 2 {
        return Ok(CaseClassification::NotApplicable(format!("{} odd branch points instead of 2", profile.odd_points)));
    }
    Ok(CaseClassification::Conic)
}

/// Genus of `w² = H(u, v)`; `SplitCover` when every multiplicity is even.
pub fn genus_double_cover(profile: &ContactProfile) -> Result<usize> {
    match profile.odd_points {
        0 => Err(Error::SplitCover),
        r => Ok(r / 2 - 1),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// `H = c·s²` with `c` a square in the base field.
    Split,
    /// `H = c·s²` with `c` a nonsquare; the map lives over the quadratic extension.
    SplitTwisted,
    Conic,
    /// Supplied from outside, e.g. a stored certificate.
    External,
}

impl Construction {
    pub fn label(self) -> &'static str {
        match self {
            Construction::Split => "split",
            Construction::SplitTwisted => "split-twisted",
            Construction::Conic => "conic",
            Construction::External => "external",
        }
    }
}

/// `(ρ_x : ρ_y : ρ_z : ρ_w)` with `deg ρ_w = 2·deg ρ_x`, over the field of
/// `surface` (an extension of degree `field_of_definition` of the original one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMapToX {
    pub surface: DelPezzo2,
    pub rho: [BinaryForm; 4],
    pub field_of_definition: usize,
    pub construction: Construction,
}

impl RationalMapToX {
    pub fn new(surface: DelPezzo2, rho: [BinaryForm; 4], field_of_definition: usize) -> Result<RationalMapToX> {
        for r in &rho {
            if r.field() != surface.field() {
                return Err(Error::FieldMismatch);
            }
        }
        let e = rho[0].degree();
        for (i, r) in rho.iter().enumerate() {
            let want = if i == 3 { 2 * e } else { e };
            if r.degree() != want {
                return Err(Error::DegreeMismatch(r.degree(), want));
            }
        }
        Ok(RationalMapToX { surface, rho, field_of_definition, construction: Construction::External })
    }

    pub fn plane(&self) -> [&BinaryForm; 3] {
        [&self.rho[0], &self.rho[1], &self.rho[2]]
    }

    pub fn degrees(&self) -> [usize; 4] {
        self.rho.clone().map(|r| r.degree())
    }
}

fn half(f: &crate::field::Field) -> FieldElement {
    f.inv(f.from_int(2)).expect("odd characteristic")
}

/// `ρ_w = (w′·s − f∘ρ_xyz) / 2`.
fn w_component(x: &DelPezzo2, rho_xyz: [&BinaryForm; 3], ws: &BinaryForm) -> Result<BinaryForm> {
    let fr = x.f().compose(rho_xyz)?;
    let fr = if fr.is_zero() { BinaryForm::zero(x.field(), ws.degree()) } else { fr };
    Ok(ws.sub(&fr)?.scale(half(x.field())))
}

/// Lift when every multiplicity of `H` is even: `2w + f∘θ = √c·s`.
pub fn lift_split(x: &DelPezzo2, theta: &Parametrization, profile: &ContactProfile, p: Option<&SurfacePoint>) -> Result<RationalMapToX> {
    if profile.odd_points > 0 {
        return Err(Error::NotSplit(profile.odd_points));
    }
    let sq = profile.h.sqrt()?;
    let q_off_branch = !x.branch().eval(theta.curve().q().coords()).is_zero();
    if let (Some(_), true, false) = (p, q_off_branch, sq.unit_is_square) {
        // A rational branch over Q forces the two components to be defined over the base field.
        if theta.curve().preimages_of_q()?.iter().any(|b| b.extension_degree == 1) {
            return Err(Error::HypothesisViolated(
                "split constant is a nonsquare although a rational point lies over the marked point".into(),
            ));
        }
    }
    let (surface, th, s, e, construction) = if sq.unit_is_square {
        (x.clone(), theta.theta().clone(), sq.root, 1, Construction::Split)
    } else {
        let ext = x.field().extension(2)?;
        let r = ext.sqrt(x.field().embed(sq.unit, &ext)?)?;
        let th = theta.theta().clone().map(|t| t.embed(&ext).expect("base field embeds"));
        (x.base_change(&ext)?, th, sq.root.embed(&ext)?.scale(r), 2, Construction::SplitTwisted)
    };
    let w = w_component(&surface, [&th[0], &th[1], &th[2]], &s)?;
    let [a, b, c] = th;
    Ok(RationalMapToX { surface, rho: [a, b, c, w], field_of_definition: e, construction })
}

/// A point of `W² = r(U, V)` with `(U : V)` running over `P¹(F_q)`, `v = 0` last.
fn conic_point(r: &BinaryForm) -> Option<[FieldElement; 3]> {
    let f = r.field();
    let params = f.elements().map(|t| (t, f.one())).chain(std::iter::once((f.one(), f.zero())));
    for (u, v) in params {
        let val = r.eval(u, v);
        if f.is_square(val) {
            return Some([u, v, f.sqrt(val).ok()?]);
        }
    }
    None
}

/// Lift when `H = s²·r₂` with `r₂` a squarefree quadratic: parametrize the
/// conic `W² = r₂(U, V)` by lines through a rational point.
pub fn lift_conic(x: &DelPezzo2, theta: &Parametrization, profile: &ContactProfile) -> Result<RationalMapToX> {
    if profile.odd_points != 2 {
        return Err(Error::NotConicCase(profile.odd_points));
    }
    let f = x.field();
    let dec = &profile.decomposition;
    let mut s = BinaryForm::constant(f, f.one());
    let mut r2 = BinaryForm::constant(f, dec.unit);
    for (part, m) in &dec.factors {
        s = s.mul_unchecked(&part.pow(m / 2));
        if m % 2 == 1 {
            r2 = r2.mul_unchecked(part);
        }
    }
    if r2.degree() != 2 || !r2.is_squarefree() {
        return Err(Error::NotConicCase(r2.degree()));
    }
    let p0 = conic_point(&r2).ok_or(Error::ConicPointNotFound)?;
    // F(U, V, W) = W² − r₂(U, V) and its polar form.
    let (c0, c1, c2) = (r2.coeff(0), r2.coeff(1), r2.coeff(2));
    let quad = |pt: [FieldElement; 3]| f.sub(f.mul(pt[2], pt[2]), r2.eval(pt[0], pt[1]));
    let grad = |pt: [FieldElement; 3]| {
        let two = f.from_int(2);
        [
            f.neg(f.add(f.mul(two, f.mul(c2, pt[0])), f.mul(c1, pt[1]))),
            f.neg(f.add(f.mul(c1, pt[0]), f.mul(two, f.mul(c0, pt[1])))),
            f.mul(two, pt[2]),
        ]
    };
    let pivot = p0.iter().position(|c| !c.is_zero()).ok_or(Error::ConicPointNotFound)?;
    let basis: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    // X(m, n) = F(L)·P0 − (∇F(P0)·L)·L, L = m·E_a + n·E_b, as degree-2 forms in (m, n).
    let g0 = grad(p0);
    let mut ea = [f.zero(); 3];
    ea[basis[0]] = f.one();
    let mut eb = [f.zero(); 3];
    eb[basis[1]] = f.one();
    let add3 = |a: [FieldElement; 3], b: [FieldElement; 3]| [f.add(a[0], b[0]), f.add(a[1], b[1]), f.add(a[2], b[2])];
    // F(L) = F(E_a)·m² + B(E_a, E_b)·mn + F(E_b)·n² with m ↔ u, n ↔ v.
    let fa = quad(ea);
    let fb = quad(eb);
    let fab = f.sub(f.sub(quad(add3(ea, eb)), fa), fb);
    let fl = BinaryForm::new(f, vec![fb, fab, fa]);
    let dot = |a: [FieldElement; 3], b: [FieldElement; 3]| (0..3).fold(f.zero(), |acc, i| f.add(acc, f.mul(a[i], b[i])));
    let bl = BinaryForm::new(f, vec![dot(g0, eb), dot(g0, ea)]);
    let mu = BinaryForm::variable(f, true);
    let nu = BinaryForm::variable(f, false);
    let comps: Vec<BinaryForm> = (0..3)
        .map(|i| {
            let l = mu.scale(ea[i]).add(&nu.scale(eb[i])).expect("same degree");
            fl.scale(p0[i]).sub(&bl.mul_unchecked(&l)).expect("same degree")
        })
        .collect();
    let (um, vm, wm) = (&comps[0], &comps[1], &comps[2]);
    let rho_xyz: Vec<BinaryForm> = theta.theta().iter().map(|t| t.compose(um, vm)).collect::<Result<_>>()?;
    let ws = wm.mul_unchecked(&s.compose(um, vm)?);
    let w = w_component(x, [&rho_xyz[0], &rho_xyz[1], &rho_xyz[2]], &ws)?;
    let [a, b, c]: [BinaryForm; 3] = rho_xyz.try_into().expect("three components");
    Ok(RationalMapToX { surface: x.clone(), rho: [a, b, c, w], field_of_definition: 1, construction: Construction::Conic })
}

/// Full pipeline for one marked curve: profile, case, and lift.
#[derive(Clone, Debug)]
pub struct Lift {
    pub profile: ContactProfile,
    pub case: CaseClassification,
    pub genus: Option<usize>,
    pub map: RationalMapToX,
}

pub fn lift(x: &DelPezzo2, c: &MarkedCurve, p: Option<&SurfacePoint>) -> Result<Lift> {
    let theta = c.parametrize();
    let profile = pullback_branch(x, &theta)?;
    let case = classify(x, c, &profile, p)?;
    let genus = genus_double_cover(&profile).ok();
    let map = match &case {
        CaseClassification::Split => lift_split(x, &theta, &profile, p)?,
        CaseClassification::Conic => lift_conic(x, &theta, &profile)?,
        CaseClassification::NotApplicable(reason) => return Err(Error::HypothesisViolated(reason.clone())),
    };
    Ok(Lift { profile, case, genus, map })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub equation_holds: bool,
    pub nonconstant: bool,
    pub component_degrees: [usize; 4],
    /// Degree of the common factor removed from the plane components.
    pub gcd_degree: usize,
    pub reduced_degree: usize,
    pub plane_rank: usize,
    pub image_degree: Option<usize>,
    /// Degree of `P¹ → image curve`, when the image curve is supplied.
    pub degree_ratio: Option<usize>,
    pub on_curve: Option<bool>,
    pub field_of_definition: usize,
    pub construction: Construction,
}

/// Checks the weighted equation identically and nonconstancy; with `image`
/// also membership of the plane part in that curve and the covering degree.
pub fn verify_map(rho: &RationalMapToX, image: Option<&TernaryForm>) -> Result<MapReport> {
    let x = &rho.surface;
    let f = x.field();
    let [rx, ry, rz, rw] = &rho.rho;
    let residual = x.equation().compose([rx, ry, rz, rw])?;
    if !residual.is_zero() {
        return Err(Error::EquationFails(Box::new(residual)));
    }
    let plane = rho.plane();
    let nonzero: Vec<&BinaryForm> = plane.iter().copied().filter(|r| !r.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::ConstantMap);
    }
    let mut g = nonzero[0].clone();
    for r in &nonzero[1..] {
        g = g.gcd(r)?;
    }
    let reduced: Vec<BinaryForm> = plane
        .iter()
        .map(|r| if r.is_zero() { BinaryForm::zero(f, r.degree() - g.degree()) } else { r.div_exact(&g).unwrap().unwrap() })
        .collect();
    let reduced_degree = reduced[0].degree();
    let mut m: Vec<Vec<FieldElement>> = reduced.iter().map(|r| r.coeffs().to_vec()).collect();
    let plane_rank = row_reduce(f, &mut m).len();
    if plane_rank < 2 {
        return Err(Error::ConstantMap);
    }
    let (image_degree, degree_ratio, on_curve) = match image {
        None => (None, None, None),
        Some(h) => {
            let h = if h.field() == f { h.clone() } else { h.embed(f)? };
            let on = h.compose(plane)?.is_zero();
            let ratio = (on && reduced_degree % h.degree() == 0).then(|| reduced_degree / h.degree());
            (Some(h.degree()), ratio, Some(on))
        }
    };
    Ok(MapReport {
        equation_holds: true,
        nonconstant: true,
        component_degrees: rho.degrees(),
        gcd_degree: g.degree(),
        reduced_degree,
        plane_rank,
        image_degree,
        degree_ratio,
        on_curve,
        field_of_definition: rho.field_of_definition,
        construction: rho.construction,
    })
}
