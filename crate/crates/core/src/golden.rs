//! Reference data: three surfaces `c·w² = G` with a known curve of degree
//! `d` marked at `Q` and an explicit map `P¹ → X` given affinely in `t`.

use crate::cover::RationalMapToX;
use crate::curve::MarkedCurve;
use crate::error::Result;
use crate::field::{Field, FieldElement};
use crate::forms::{BinaryForm, TernaryForm};
use crate::parse::{parse_homogenized, parse_ternary};
use crate::surface::{DelPezzo2, PlanePoint};

#[derive(Clone, Debug)]
pub struct GoldenCase {
    pub name: &'static str,
    pub field: Field,
    /// Unit in front of `w²`.
    pub c: &'static str,
    /// Right-hand side `G` of `c·w² = G`.
    pub rhs: &'static str,
    pub curve: &'static str,
    pub q: [i64; 3],
    pub d: usize,
    /// `x(t), y(t), z(t), w(t)`.
    pub rho: [&'static str; 4],
}

pub fn cases() -> Vec<GoldenCase> {
    let f3 = Field::prime(3).expect("3 is prime");
    vec![
        GoldenCase {
            name: "X1",
            field: f3.clone(),
            c: "-1",
            rhs: "(x^2+y^2)^2 + y^3*z - y*z^3",
            curve: "x^4 + x*y^3 + y^4 - x^2*y*z - x*y^2*z",
            q: [0, 0, 1],
            d: 4,
            rho: ["t^2(t^2-1)", "t^2(t^2-1)^2", "t^8 - t^2 + 1", "t(t^2-1)(t^4+1)(t^8+1)"],
        },
        GoldenCase {
            name: "X2",
            field: f3,
            c: "-1",
            rhs: "x^4 + y^3*z - y*z^3",
            curve: "x^4 - x^2*y^2 - y^4 + x^2*y*z + y*z^3",
            q: [0, 1, 1],
            d: 4,
            rho: ["t(t^2+1)(t^4-1)", "-t^4", "t^8 + 1", "t^2(t^2+1)(t^10-1)"],
        },
        GoldenCase {
            name: "X3",
            field: Field::gf9(),
            c: "gamma",
            rhs: "x^4 + y^4 + z^4",
            curve: "x^2*y + x*y^2 + x^2*z - x*y*z + y^2*z - x*z^2 - y*z^2 - z^3",
            q: [1, 1, 1],
            d: 3,
            rho: [
                "(t^4+1)(t^2-gamma^3)",
                "(t^4-1)(t^2+gamma^3)",
                "(t^4+gamma^2)(t^2-gamma)",
                "gamma^2*t(t^8-1)(t^2+gamma)",
            ],
        },
    ]
}

impl GoldenCase {
    pub fn unit(&self) -> Result<FieldElement> {
        let p = crate::parse::parse_univariate(&self.field, "t", self.c)?;
        Ok(p.coeff(0))
    }

    pub fn surface(&self) -> Result<DelPezzo2> {
        let g = parse_ternary(&self.field, self.rhs)?;
        DelPezzo2::normal_form(self.unit()?, &TernaryForm::zero(&self.field, 2), &g, false)
    }

    pub fn marked_point(&self) -> Result<PlanePoint> {
        PlanePoint::from_ints(&self.field, self.q)
    }

    pub fn curve_form(&self) -> Result<TernaryForm> {
        parse_ternary(&self.field, self.curve)
    }

    pub fn marked_curve(&self) -> Result<MarkedCurve> {
        MarkedCurve::with_degree(self.curve_form()?, self.marked_point()?, self.d)
    }

    /// The map homogenized to degrees `(2d, 2d, 2d; 4d)`.
    pub fn rho_forms(&self) -> Result<[BinaryForm; 4]> {
        let e = 2 * self.d;
        let deg = [e, e, e, 2 * e];
        let mut out = Vec::with_capacity(4);
        for (src, n) in self.rho.iter().zip(deg) {
            out.push(parse_homogenized(&self.field, "t", src, n)?);
        }
        Ok(out.try_into().expect("four components"))
    }

    pub fn rho(&self) -> Result<RationalMapToX> {
        RationalMapToX::new(self.surface()?, self.rho_forms()?, 1)
    }
}
