//! Plane curves of degree `d` with a marked point of multiplicity `d − 1`,
//! and their parametrization by the pencil of lines through that point.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::binary::irreducible_roots;
use crate::forms::{BinaryForm, TernaryForm};
use crate::linalg::Mat3;
use crate::surface::PlanePoint;

pub const MIN_DEGREE: usize = 2;
pub const MAX_DEGREE: usize = 6;

/// Invertible matrix with columns `(e_a, e_b, Q)`, where `e_a, e_b` are the
/// standard basis vectors other than the one at `Q`'s first nonzero coordinate.
/// It sends `(0:0:1)` to `Q`.
pub fn centering_matrix(q: &PlanePoint) -> Mat3 {
    let f = q.field();
    let c = q.coords();
    let pivot = c.iter().position(|x| !x.is_zero()).expect("plane point is nonzero");
    let mut cols = [[f.zero(); 3]; 3];
    let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
    cols[0][others[0]] = f.one();
    cols[1][others[1]] = f.one();
    cols[2] = c;
    Mat3::from_columns(cols)
}

/// `h(A·X)` with `Q` moved to `(0:0:1)`.
fn centered(h: &TernaryForm, q: &PlanePoint) -> Result<(Mat3, TernaryForm)> {
    if h.field() != q.field() {
        return Err(Error::FieldMismatch);
    }
    let a = centering_matrix(q);
    Ok((a, h.substitute_linear(&a)))
}

fn lowest_part(hc: &TernaryForm) -> (usize, BinaryForm) {
    (0..=hc.degree())
        .map(|k| (k, hc.z_part(k)))
        .find(|(_, p)| !p.is_zero())
        .expect("nonzero form has a nonzero part")
}

/// Multiplicity of `h` at `q` (0 when `q` is not on the curve).
pub fn multiplicity_at(h: &TernaryForm, q: &PlanePoint) -> Result<usize> {
    if h.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (_, hc) = centered(h, q)?;
    Ok(lowest_part(&hc).0)
}

/// Lowest-degree part of `h` at `q`, in the centered coordinates.
pub fn tangent_cone(h: &TernaryForm, q: &PlanePoint) -> Result<BinaryForm> {
    if h.is_zero() {
        return Err(Error::ZeroForm);
    }
    let (_, hc) = centered(h, q)?;
    match lowest_part(&hc) {
        (0, _) => Err(Error::PointNotOnCurve),
        (_, cone) => Ok(cone),
    }
}

/// `gcd(a_{d−1}, a_d)` is constant. Valid once the multiplicity is exactly `d − 1`:
/// a factorization of `h` forces one factor to be a product of lines through
/// the point, and those divide both parts.
pub fn check_integral(a_low: &BinaryForm, a_top: &BinaryForm) -> bool {
    a_low.gcd(a_top).is_ok_and(|g| g.is_constant())
}

/// One point of the curve's normalization lying over the marked point.
#[derive(Clone, Debug)]
pub struct QPreimage {
    /// Irreducible factor of `a_{d−1}` over the base field.
    pub factor: BinaryForm,
    pub field: Field,
    pub extension_degree: usize,
    pub root: (FieldElement, FieldElement),
    /// Multiplicity of the factor in the tangent cone.
    pub multiplicity: usize,
    pub branch_index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedCurve {
    h: TernaryForm,
    q: PlanePoint,
    d: usize,
    centering: Mat3,
    a_low: BinaryForm,
    a_top: BinaryForm,
}

impl MarkedCurve {
    pub fn new(h: TernaryForm, q: PlanePoint) -> Result<MarkedCurve> {
        if h.is_zero() {
            return Err(Error::ZeroForm);
        }
        let d = h.degree();
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&d) {
            return Err(Error::InvalidMarkedCurve(format!("degree {d} outside {MIN_DEGREE}..={MAX_DEGREE}")));
        }
        let (centering, hc) = centered(&h, &q)?;
        let m = lowest_part(&hc).0;
        if m == 0 {
            return Err(Error::PointNotOnCurve);
        }
        if m != d - 1 {
            return Err(Error::InvalidMarkedCurve(format!("multiplicity {m} at the marked point, expected {}", d - 1)));
        }
        let a_low = hc.z_part(d - 1);
        let a_top = hc.z_part(d);
        if !check_integral(&a_low, &a_top) {
            return Err(Error::InvalidMarkedCurve("not geometrically integral".into()));
        }
        let c = MarkedCurve { h, q, d, centering, a_low, a_top };
        if !c.smooth_away_from_q()? {
            return Err(Error::InvalidMarkedCurve("singular away from the marked point".into()));
        }
        Ok(c)
    }

    /// Like `new`, also checking a declared degree.
    pub fn with_degree(h: TernaryForm, q: PlanePoint, d: usize) -> Result<MarkedCurve> {
        if h.degree() != d {
            return Err(Error::DegreeMismatch(h.degree(), d));
        }
        MarkedCurve::new(h, q)
    }

    pub fn field(&self) -> &Field {
        self.h.field()
    }

    pub fn h(&self) -> &TernaryForm {
        &self.h
    }

    pub fn q(&self) -> &PlanePoint {
        &self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn centering(&self) -> &Mat3 {
        &self.centering
    }

    /// `(a_{d−1}, a_d)` with `h(A·X) = z·a_{d−1}(x, y) + a_d(x, y)`.
    pub fn parts(&self) -> (&BinaryForm, &BinaryForm) {
        (&self.a_low, &self.a_top)
    }

    pub fn tangent_cone(&self) -> &BinaryForm {
        &self.a_low
    }

    pub fn is_ordinary(&self) -> bool {
        self.a_low.is_squarefree()
    }

    pub fn parametrize(&self) -> Parametrization {
        let f = self.field();
        let u = BinaryForm::variable(f, true);
        let v = BinaryForm::variable(f, false);
        let centered = [u.mul_unchecked(&self.a_low), v.mul_unchecked(&self.a_low), self.a_top.neg()];
        let m = &self.centering.0;
        let theta = std::array::from_fn(|i| {
            let mut t = BinaryForm::zero(f, self.d);
            for (j, c) in centered.iter().enumerate() {
                t.add_assign_unchecked(&c.scale(m[i][j]));
            }
            t
        });
        Parametrization { theta, curve: self.clone() }
    }

    /// Roots of the tangent cone, with conjugates, grouped by irreducible factor.
    pub fn preimages_of_q(&self) -> Result<Vec<QPreimage>> {
        let (_, factors) = self.a_low.factor()?;
        let mut out = Vec::new();
        for (phi, m) in factors {
            let e = phi.degree();
            let ext = self.field().extension(e)?;
            for root in irreducible_roots(&phi, &ext)? {
                out.push(QPreimage {
                    factor: phi.clone(),
                    field: ext.clone(),
                    extension_degree: e,
                    root,
                    multiplicity: m,
                    branch_index: out.len(),
                });
            }
        }
        Ok(out)
    }

    /// No parameter outside the tangent-cone roots maps to a singular point.
    fn smooth_away_from_q(&self) -> Result<bool> {
        let th = self.parametrize();
        let t = th.components();
        let mut g: Option<BinaryForm> = None;
        for i in 0..3 {
            let c = self.h.partial(i).compose(t)?;
            g = Some(match g {
                None => c,
                Some(prev) if prev.is_zero() => c,
                Some(prev) if c.is_zero() => prev,
                Some(prev) => prev.gcd(&c)?,
            });
        }
        let mut g = g.expect("three partials");
        if g.is_zero() {
            return Ok(false);
        }
        loop {
            let common = g.gcd(&self.a_low)?;
            if common.is_constant() {
                break;
            }
            g = g.div_exact(&common)?.expect("gcd divides");
        }
        Ok(g.is_constant())
    }
}

/// `θ: P¹ → C` of degree `d`, inverse to projection from the marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    theta: [BinaryForm; 3],
    curve: MarkedCurve,
}

impl Parametrization {
    pub fn theta(&self) -> &[BinaryForm; 3] {
        &self.theta
    }

    pub fn components(&self) -> [&BinaryForm; 3] {
        [&self.theta[0], &self.theta[1], &self.theta[2]]
    }

    pub fn curve(&self) -> &MarkedCurve {
        &self.curve
    }

    pub fn degree(&self) -> usize {
        self.curve.d
    }

    pub fn eval(&self, u: FieldElement, v: FieldElement) -> [FieldElement; 3] {
        [self.theta[0].eval(u, v), self.theta[1].eval(u, v), self.theta[2].eval(u, v)]
    }
}
