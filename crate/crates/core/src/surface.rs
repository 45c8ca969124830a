//! Degree-2 del Pezzo surfaces `w² + f·w = g` in `P(1,1,1,2)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::binary::irreducible_roots;
use crate::forms::{resultant, BinaryForm, TernaryForm, WeightedForm};
use crate::linalg::Mat3;
use crate::poly::{Poly, PolyRing};

/// Retries with a fresh random coordinate change before giving up on elimination.
pub const MAX_ELIMINATION_RETRIES: usize = 8;
/// Bézout bound for the common zeros of two plane cubics.
pub const SINGULAR_CANDIDATE_BOUND: usize = 9;
const DRAWS_PER_RETRY: usize = 256;
/// Enumeration guard: `(q^e)^3` must not exceed this.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

/// Point of `P²`, normalized so the first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanePoint {
    field: Field,
    coords: [FieldElement; 3],
}

impl PlanePoint {
    pub fn new(field: &Field, coords: [FieldElement; 3]) -> Result<PlanePoint> {
        let lead = coords.iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        let s = field.inv(lead)?;
        Ok(PlanePoint { field: field.clone(), coords: coords.map(|c| field.mul(c, s)) })
    }

    pub fn from_ints(field: &Field, c: [i64; 3]) -> Result<PlanePoint> {
        PlanePoint::new(field, c.map(|x| field.from_int(x)))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> [FieldElement; 3] {
        self.coords
    }

    pub fn embed(&self, target: &Field) -> Result<PlanePoint> {
        let mut c = [target.zero(); 3];
        for i in 0..3 {
            c[i] = self.field.embed(self.coords[i], target)?;
        }
        PlanePoint::new(target, c)
    }

    /// All points of `P²` over `field`, in normalized order.
    pub fn all(field: &Field) -> impl Iterator<Item = PlanePoint> {
        let (o, z, q) = (field.one(), field.zero(), field.q());
        let fe = field.clone();
        let el = |i: u64| FieldElement(i);
        let a = (0..q).flat_map(move |y| (0..q).map(move |zz| [o, el(y), el(zz)]));
        let b = (0..q).map(move |zz| [z, o, el(zz)]);
        a.chain(b).chain(std::iter::once([z, z, o])).map(move |c| PlanePoint { field: fe.clone(), coords: c })
    }
}

/// Point of the surface, normalized on `(x, y, z)`; `w` scales with weight 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfacePoint {
    field: Field,
    coords: [FieldElement; 4],
}

impl SurfacePoint {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coords(&self) -> [FieldElement; 4] {
        self.coords
    }

    pub fn project(&self) -> PlanePoint {
        PlanePoint { field: self.field.clone(), coords: [self.coords[0], self.coords[1], self.coords[2]] }
    }
}

/// The points of `X` over a plane point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub points: Vec<SurfacePoint>,
    /// The fiber consists of two points conjugate over the quadratic extension.
    pub needs_quadratic_extension: bool,
    pub ramified: bool,
}

/// A root `(x₀:y₀)` of the eliminant together with the degree of the
/// common factor of the specialized partials.
#[derive(Clone, Debug)]
pub struct SingularCandidate {
    pub factor: BinaryForm,
    pub extension_degree: usize,
    pub root: (FieldElement, FieldElement),
    pub common_degree: usize,
}

#[derive(Clone, Debug)]
pub struct SmoothnessCertificate {
    pub smooth: bool,
    pub seed: u64,
    /// Random coordinate changes drawn (0 if the identity worked).
    pub retries: usize,
    /// Coordinate change `b ↦ b(M·X)` the elimination was done in.
    pub frame: Mat3,
    /// `Res_z(∂P/∂x, ∂P/∂y)` in the chosen frame; zero when the partials share a component.
    pub resultant: BinaryForm,
    pub candidates: Vec<SingularCandidate>,
    pub candidate_bound: usize,
    /// `4·b = x·b_x + y·b_y + z·b_z`, so `b` itself is not checked.
    pub euler_relation: bool,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct PointCount {
    pub extension_degree: usize,
    pub count: u64,
    pub points: Option<Vec<SurfacePoint>>,
}

/// `w² + f·w = g` with `deg f = 2`, `deg g = 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelPezzo2 {
    field: Field,
    f: TernaryForm,
    g: TernaryForm,
    branch: TernaryForm,
}

impl DelPezzo2 {
    pub fn new(f: TernaryForm, g: TernaryForm) -> Result<DelPezzo2> {
        let field = g.field().clone();
        if field.p() == 2 {
            return Err(Error::CharTwo);
        }
        if f.field() != &field {
            return Err(Error::FieldMismatch);
        }
        if f.degree() != 2 {
            return Err(Error::DegreeMismatch(f.degree(), 2));
        }
        if g.degree() != 4 {
            return Err(Error::DegreeMismatch(g.degree(), 4));
        }
        let branch = f.pow(2).add(&g.scale(field.from_int(4)))?;
        Ok(DelPezzo2 { field, f, g, branch })
    }

    /// From `c·w² + f′·w = g′`; with `complete_square` the result has `f = 0`
    /// and `g = (f² + 4g)/4`.
    pub fn normal_form(c: FieldElement, f: &TernaryForm, g: &TernaryForm, complete_square: bool) -> Result<DelPezzo2> {
        let field = g.field();
        if field.p() == 2 {
            return Err(Error::CharTwo);
        }
        if c.is_zero() {
            return Err(Error::ZeroUnit);
        }
        let ci = field.inv(c)?;
        let x = DelPezzo2::new(f.scale(ci), g.scale(ci))?;
        if !complete_square {
            return Ok(x);
        }
        let quarter = field.inv(field.from_int(4))?;
        DelPezzo2::new(TernaryForm::zero(field, 2), x.branch.scale(quarter))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn f(&self) -> &TernaryForm {
        &self.f
    }

    pub fn g(&self) -> &TernaryForm {
        &self.g
    }

    /// Branch quartic `f² + 4g`.
    pub fn branch(&self) -> &TernaryForm {
        &self.branch
    }

    /// Anticanonical degree `K_X²`.
    pub fn degree(&self) -> usize {
        2
    }

    /// `w² + f·w − g` as a weighted quartic.
    pub fn equation(&self) -> WeightedForm {
        let one = TernaryForm::monomial(&self.field, [0, 0, 0], self.field.one());
        WeightedForm::from_w_parts(&self.field, 4, &[self.g.neg(), self.f.clone(), one]).expect("degrees fixed by construction")
    }

    pub fn base_change(&self, target: &Field) -> Result<DelPezzo2> {
        DelPezzo2::new(self.f.embed(target)?, self.g.embed(target)?)
    }

    fn same_field(&self, f: &Field) -> Result<()> {
        if f != &self.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn contains(&self, pt: [FieldElement; 4]) -> bool {
        let fe = &self.field;
        let xyz = [pt[0], pt[1], pt[2]];
        let lhs = fe.add(fe.mul(pt[3], pt[3]), fe.mul(self.f.eval(xyz), pt[3]));
        lhs == self.g.eval(xyz)
    }

    /// Validated, normalized point of `X`.
    pub fn point(&self, pt: [FieldElement; 4]) -> Result<SurfacePoint> {
        let fe = &self.field;
        let lead = pt[..3].iter().copied().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        if !self.contains(pt) {
            return Err(Error::PointNotOnSurface);
        }
        let s = fe.inv(lead)?;
        let s2 = fe.mul(s, s);
        let c = [fe.mul(pt[0], s), fe.mul(pt[1], s), fe.mul(pt[2], s), fe.mul(pt[3], s2)];
        Ok(SurfacePoint { field: fe.clone(), coords: c })
    }

    /// `w ↦ −w − f(x, y, z)`.
    pub fn involution(&self, pt: &SurfacePoint) -> Result<SurfacePoint> {
        self.same_field(&pt.field)?;
        if !self.contains(pt.coords) {
            return Err(Error::PointNotOnSurface);
        }
        let fe = &self.field;
        let c = pt.coords;
        let w = fe.sub(fe.neg(c[3]), self.f.eval([c[0], c[1], c[2]]));
        Ok(SurfacePoint { field: fe.clone(), coords: [c[0], c[1], c[2], w] })
    }

    /// Solutions of `w² + f(Q)·w = g(Q)` over the field of definition of `Q`.
    pub fn fiber(&self, q: &PlanePoint) -> Result<Fiber> {
        self.same_field(&q.field)?;
        let fe = &self.field;
        let c = q.coords;
        let disc = self.branch.eval(c);
        let half = fe.inv(fe.from_int(2))?;
        let fq = self.f.eval(c);
        let mk = |w: FieldElement| SurfacePoint { field: fe.clone(), coords: [c[0], c[1], c[2], w] };
        if disc.is_zero() {
            let w = fe.mul(fe.neg(fq), half);
            return Ok(Fiber { points: vec![mk(w)], needs_quadratic_extension: false, ramified: true });
        }
        if !fe.is_square(disc) {
            return Ok(Fiber { points: vec![], needs_quadratic_extension: true, ramified: false });
        }
        let s = fe.sqrt(disc)?;
        let mut ws = [fe.mul(fe.sub(s, fq), half), fe.mul(fe.sub(fe.neg(s), fq), half)];
        ws.sort();
        Ok(Fiber { points: ws.iter().map(|&w| mk(w)).collect(), needs_quadratic_extension: false, ramified: false })
    }

    /// `#X(F_{q^e})`, optionally with the points sorted canonically.
    pub fn rational_points(&self, e: usize, list: bool) -> Result<PointCount> {
        let qe = (self.field.q() as u128).checked_pow(e as u32).ok_or(Error::EnumerationTooLarge(u128::MAX))?;
        let cube = qe.saturating_mul(qe).saturating_mul(qe);
        if e == 0 || cube > ENUMERATION_LIMIT {
            return Err(Error::EnumerationTooLarge(cube));
        }
        let big = if e == 1 { self.field.clone() } else { self.field.extension(e)? };
        let x = if e == 1 { self.clone() } else { self.base_change(&big)? };
        let mut count = 0u64;
        let mut points = list.then(Vec::new);
        for q in PlanePoint::all(&big) {
            let fib = x.fiber(&q)?;
            count += fib.points.len() as u64;
            if let Some(v) = points.as_mut() {
                v.extend(fib.points);
            }
        }
        if let Some(v) = points.as_mut() {
            v.sort_by_key(|p| p.coords);
        }
        Ok(PointCount { extension_degree: e, count, points })
    }

    /// Some `F_q`-point over `q`, if the fiber has one.
    pub fn rational_point_above(&self, q: &PlanePoint) -> Result<Option<SurfacePoint>> {
        Ok(self.fiber(q)?.points.into_iter().next())
    }

    pub fn is_smooth(&self) -> Result<SmoothnessCertificate> {
        self.is_smooth_with_seed(0)
    }

    /// Decides smoothness of the branch quartic `b` (equivalently of `X`,
    /// since `p ≠ 2`). In a frame where both `P_x` and `P_y` (with `P = b∘M`)
    /// are monic cubics in `z`, eliminate `z`; every singular point lies over
    /// a root of the eliminant, and one root per irreducible factor is
    /// checked against all three partials over its residue field.
    pub fn is_smooth_with_seed(&self, seed: u64) -> Result<SmoothnessCertificate> {
        let fe = &self.field;
        let b = &self.branch;
        let mut cert = SmoothnessCertificate {
            smooth: false,
            seed,
            retries: 0,
            frame: Mat3::identity(fe),
            resultant: BinaryForm::zero(fe, SINGULAR_CANDIDATE_BOUND),
            candidates: vec![],
            candidate_bound: SINGULAR_CANDIDATE_BOUND,
            euler_relation: true,
            reason: String::new(),
        };
        if b.is_zero() {
            cert.reason = "branch form is zero".into();
            return Ok(cert);
        }
        let grad: Vec<TernaryForm> = (0..3).map(|i| b.partial(i)).collect();
        let good = |m: &Mat3| {
            let c3 = [m.0[0][2], m.0[1][2], m.0[2][2]];
            let g = [grad[0].eval(c3), grad[1].eval(c3), grad[2].eval(c3)];
            (0..2).all(|j| {
                let cj = [m.0[0][j], m.0[1][j], m.0[2][j]];
                let s = (0..3).fold(fe.zero(), |acc, i| fe.add(acc, fe.mul(g[i], cj[i])));
                !s.is_zero()
            })
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut frame = Mat3::identity(fe);
        let mut retries = 0;
        while !good(&frame) {
            if retries == MAX_ELIMINATION_RETRIES {
                return Err(Error::EliminationFailedAfterRetries(retries));
            }
            retries += 1;
            for _ in 0..DRAWS_PER_RETRY {
                frame = Mat3::random_invertible(fe, &mut rng);
                if good(&frame) {
                    break;
                }
            }
        }
        cert.retries = retries;
        cert.frame = frame;
        let p = b.substitute_linear(&frame);
        let parts: Vec<TernaryForm> = (0..3).map(|i| p.partial(i)).collect();
        let r = resultant(&parts[0], &parts[1], 2)?;
        cert.resultant = r.clone();
        if r.is_zero() {
            // P_x and P_y share a curve component, which meets P_z = 0.
            cert.reason = "partials share a common component".into();
            return Ok(cert);
        }
        let (_, factors) = r.factor()?;
        for (phi, _) in factors {
            let e = phi.degree();
            let ext = fe.extension(e)?;
            let root = irreducible_roots(&phi, &ext)?[0];
            let ring = PolyRing::new(&ext);
            let mut g = Poly::zero();
            for part in &parts {
                let s = specialize_z(&part.embed(&ext)?, root.0, root.1);
                g = ring.gcd(&g, &s);
            }
            let common_degree = g.deg().unwrap_or(usize::MAX);
            cert.candidates.push(SingularCandidate { factor: phi, extension_degree: e, root, common_degree });
            if common_degree > 0 {
                cert.reason = format!("singular point over a field of degree {e} over the base field (or an extension of it)");
                return Ok(cert);
            }
        }
        cert.smooth = true;
        cert.reason = "no common zero of the partials".into();
        Ok(cert)
    }
}

/// `h(x₀, y₀, z)` as a polynomial in `z`.
fn specialize_z(h: &TernaryForm, x0: FieldElement, y0: FieldElement) -> Poly {
    let f = h.field();
    let mut c = vec![f.zero(); h.degree() + 1];
    for (e, &v) in h.terms() {
        let t = f.mul(v, f.mul(f.pow(x0, e[0] as u128), f.pow(y0, e[1] as u128)));
        c[e[2] as usize] = f.add(c[e[2] as usize], t);
    }
    Poly::from_coeffs(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_ternary, parse_ternary_of_degree};

    fn surface(field: &Field, c: i64, f: &str, g: &str) -> DelPezzo2 {
        let f2 = parse_ternary_of_degree(field, f, 2).unwrap();
        let g4 = parse_ternary_of_degree(field, g, 4).unwrap();
        DelPezzo2::normal_form(field.from_int(c), &f2, &g4, false).unwrap()
    }

    /// Singular points by brute force over `F_{q^e}` (oracle).
    fn brute_singular(x: &DelPezzo2, e: usize) -> bool {
        let big = x.field().extension(e).unwrap();
        let b = x.branch().embed(&big).unwrap();
        let parts: Vec<_> = (0..3).map(|i| b.partial(i)).collect();
        PlanePoint::all(&big).any(|q| parts.iter().all(|p| p.eval(q.coords()).is_zero()))
    }

    #[test]
    fn normal_form_divides_by_unit() {
        let f9 = Field::gf9();
        let g = parse_ternary(&f9, "x^4 + y^4 + z^4").unwrap();
        let x = DelPezzo2::normal_form(f9.generator(), &TernaryForm::zero(&f9, 2), &g, false).unwrap();
        assert_eq!(x.g(), &parse_ternary(&f9, "(g+2)*(x^4 + y^4 + z^4)").unwrap());
        let f3 = Field::prime(3).unwrap();
        let g1 = parse_ternary(&f3, "(x^2+y^2)^2 + y^3*z - y*z^3").unwrap();
        let x1 = DelPezzo2::normal_form(f3.from_int(-1), &TernaryForm::zero(&f3, 2), &g1, false).unwrap();
        assert_eq!(x1.g(), &g1.neg());
        assert!(matches!(DelPezzo2::normal_form(f3.zero(), &TernaryForm::zero(&f3, 2), &g1, false), Err(Error::ZeroUnit)));
        let f5 = Field::prime(5).unwrap();
        let f = parse_ternary(&f5, "x*y + z^2").unwrap();
        let g = parse_ternary(&f5, "x^4 + y^3*z").unwrap();
        let a = DelPezzo2::normal_form(f5.from_int(2), &f, &g, false).unwrap();
        let b = DelPezzo2::normal_form(f5.from_int(2), &f, &g, true).unwrap();
        assert!(b.f().is_zero());
        assert_eq!(a.branch(), b.branch());
    }

    #[test]
    fn quadruple_line_is_singular() {
        let f3 = Field::prime(3).unwrap();
        let x = surface(&f3, 1, "0", "x^4");
        assert!(!x.is_smooth().unwrap().smooth);
    }

    #[test]
    fn fermat_smooth_and_fibers() {
        let f9 = Field::gf9();
        let g = parse_ternary(&f9, "x^4 + y^4 + z^4").unwrap();
        let x3 = DelPezzo2::normal_form(f9.generator(), &TernaryForm::zero(&f9, 2), &g, false).unwrap();
        let cert = x3.is_smooth().unwrap();
        assert!(cert.smooth);
        let fib = x3.fiber(&PlanePoint::from_ints(&f9, [1, 0, 0]).unwrap()).unwrap();
        assert!(fib.points.is_empty() && fib.needs_quadratic_extension);
    }

    #[test]
    fn smoothness_matches_brute_force() {
        let f3 = Field::prime(3).unwrap();
        let cases = [
            ("x^4 + y^4 + z^4", true),
            ("x^4 + y^3*z - y*z^3", true),
            ("(x^2 + y^2 + z^2)^2", false),
            ("x^2*y^2 + z^4", false),
            ("x^3*y + y^3*z + z^3*x", true),
            ("x*y*z*(x + y + z)", false),
        ];
        for (g, _) in cases {
            let x = surface(&f3, 1, "0", g);
            let cert = x.is_smooth().unwrap();
            // A singular point of a plane quartic is defined over an extension of degree at most 6.
            let singular = (1..=6).any(|e| brute_singular(&x, e));
            assert_eq!(cert.smooth, !singular, "{g}");
        }
        for (g, smooth) in cases {
            assert_eq!(surface(&f3, 1, "0", g).is_smooth().unwrap().smooth, smooth, "{g}");
        }
    }

    #[test]
    fn ramified_fiber_and_involution() {
        let f3 = Field::prime(3).unwrap();
        let x1 = surface(&f3, -1, "0", "(x^2+y^2)^2 + y^3*z - y*z^3");
        let fib = x1.fiber(&PlanePoint::from_ints(&f3, [0, 0, 1]).unwrap()).unwrap();
        assert!(fib.ramified);
        assert_eq!(fib.points.len(), 1);
        assert_eq!(fib.points[0].coords(), [f3.zero(), f3.zero(), f3.one(), f3.zero()]);
        for q in PlanePoint::all(&f3) {
            for pt in x1.fiber(&q).unwrap().points {
                let i = x1.involution(&pt).unwrap();
                assert_eq!(x1.involution(&i).unwrap(), pt);
                assert_eq!(i.project(), q);
                assert_eq!(i == pt, x1.branch().eval(q.coords()).is_zero());
            }
        }
    }

    #[test]
    fn point_count_identity() {
        let f3 = Field::prime(3).unwrap();
        let x = surface(&f3, 1, "0", "-(x^4 + y^4 + z^4)");
        let b = x.branch();
        let mut expected = 0;
        for q in PlanePoint::all(&f3) {
            let v = b.eval(q.coords());
            expected += if v.is_zero() { 1 } else if f3.is_square(v) { 2 } else { 0 };
        }
        let n = x.rational_points(1, true).unwrap();
        assert_eq!(n.count, expected);
        assert_eq!(n.points.unwrap().len() as u64, expected);
        assert!(matches!(x.rational_points(6, false), Err(Error::EnumerationTooLarge(_))));
    }

    #[test]
    fn rejects_char_two_and_bad_points() {
        assert!(matches!(Field::prime(2), Err(Error::CharTwo)));
        let f3 = Field::prime(3).unwrap();
        let x = surface(&f3, 1, "0", "x^4 + y^4 + z^4");
        assert!(matches!(x.point([f3.one(), f3.zero(), f3.zero(), f3.zero()]), Err(Error::PointNotOnSurface)));
        assert!(matches!(x.point([f3.zero(); 4]), Err(Error::ZeroVector)));
    }
}
