//! JSON encoding of fields, forms, surfaces, curves, maps and reports.
//!
//! Elements are integers in a prime field and coefficient arrays
//! `[c_0, c_1, …]` over the defining modulus otherwise; expression strings
//! such as `"gamma+1"` are accepted on input. Ternary forms are lists of
//! `{"e": [i, j, k], "c": elem}` or an expression string. Binary forms are
//! coefficient arrays with entry `i` belonging to `u^i v^(n−i)`, or
//! `{"affine": "t^2 + 1", "degree": n}`.

use serde_json::{json, Map, Value};

use crate::cover::{BranchPlace, ContactProfile, RationalMapToX, MapReport};
use crate::curve::{MarkedCurve, Parametrization};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::forms::{BinaryForm, TernaryForm};
use crate::linalg::Mat3;
use crate::parse::{parse_homogenized, parse_sparse, parse_ternary_of_degree};
use crate::surface::{DelPezzo2, PlanePoint, SmoothnessCertificate};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing key {key:?}")))
}

pub fn encode_field(f: &Field) -> Value {
    json!({ "p": f.p(), "k": f.k(), "modulus": f.modulus() })
}

pub fn decode_field(v: &Value) -> Result<Field> {
    let p = get(v, "p")?.as_u64().ok_or_else(|| bad("field p must be an integer"))?;
    let modulus: Vec<i64> = match v.get("modulus") {
        None => vec![0, 1],
        Some(m) => m
            .as_array()
            .ok_or_else(|| bad("modulus must be an array"))?
            .iter()
            .map(|c| c.as_i64().ok_or_else(|| bad("modulus entries must be integers")))
            .collect::<Result<_>>()?,
    };
    let f = Field::new(p, &modulus)?;
    if let Some(k) = v.get("k") {
        if k.as_u64() != Some(f.k() as u64) {
            return Err(bad("field k does not match the modulus degree"));
        }
    }
    Ok(f)
}

/// Prime-field elements are written as integers.
pub fn encode_element(f: &Field, a: FieldElement) -> Value {
    match f.as_prime(a) {
        Some(n) if f.k() == 1 => json!(n),
        _ => json!(f.coeffs(a)),
    }
}

pub fn decode_element(f: &Field, v: &Value) -> Result<FieldElement> {
    match v {
        Value::Number(n) => Ok(f.from_int(n.as_i64().ok_or_else(|| bad("element out of range"))?)),
        Value::Array(a) => {
            let c: Vec<i64> = a.iter().map(|x| x.as_i64().ok_or_else(|| bad("coefficients must be integers"))).collect::<Result<_>>()?;
            f.from_coeffs(&c).map_err(|_| bad(format!("element has more than {} coefficients", f.k())))
        }
        Value::String(s) => parse_constant(f, s),
        _ => Err(bad("element must be an array, integer or string")),
    }
}

/// A constant expression such as `"2*gamma + 1"`.
pub fn parse_constant(f: &Field, s: &str) -> Result<FieldElement> {
    let sp = parse_sparse(f, &[], s)?;
    Ok(sp.values().next().copied().unwrap_or(f.zero()))
}

pub fn encode_ternary(h: &TernaryForm) -> Value {
    let f = h.field();
    Value::Array(h.to_terms().into_iter().map(|(e, c)| json!({ "e": e, "c": encode_element(f, c) })).collect())
}

/// `degree` is required for forms given as an empty list or a zero expression.
pub fn decode_ternary(f: &Field, v: &Value, degree: Option<usize>) -> Result<TernaryForm> {
    let form = match v {
        Value::String(s) => match degree {
            Some(d) => parse_ternary_of_degree(f, s, d)?,
            None => crate::parse::parse_ternary(f, s)?,
        },
        Value::Array(terms) => {
            let mut parsed = Vec::with_capacity(terms.len());
            for t in terms {
                let e = get(t, "e")?.as_array().ok_or_else(|| bad("exponent must be an array"))?;
                if e.len() != 3 {
                    return Err(bad("exponent must have three entries"));
                }
                let e: Vec<u32> = e.iter().map(|x| x.as_u64().map(|n| n as u32).ok_or_else(|| bad("bad exponent"))).collect::<Result<_>>()?;
                parsed.push(([e[0], e[1], e[2]], decode_element(f, get(t, "c")?)?));
            }
            let d = match (degree, parsed.first()) {
                (Some(d), _) => d,
                (None, Some((e, _))) => (e[0] + e[1] + e[2]) as usize,
                (None, None) => return Err(bad("degree of an empty form is unknown")),
            };
            TernaryForm::new(f, d, parsed).map_err(|_| bad("form is not homogeneous of the expected degree"))?
        }
        _ => return Err(bad("form must be a term list or an expression string")),
    };
    if let Some(d) = degree {
        if form.degree() != d {
            return Err(bad(format!("expected a form of degree {d}, got degree {}", form.degree())));
        }
    }
    Ok(form)
}

pub fn encode_binary(b: &BinaryForm) -> Value {
    let f = b.field();
    Value::Array(b.coeffs().iter().map(|&c| encode_element(f, c)).collect())
}

pub fn decode_binary(f: &Field, v: &Value) -> Result<BinaryForm> {
    match v {
        Value::Array(a) => {
            if a.is_empty() {
                return Err(bad("binary form needs at least one coefficient"));
            }
            Ok(BinaryForm::new(f, a.iter().map(|c| decode_element(f, c)).collect::<Result<_>>()?))
        }
        Value::Object(_) => {
            let src = get(v, "affine")?.as_str().ok_or_else(|| bad("affine must be a string"))?;
            let n = get(v, "degree")?.as_u64().ok_or_else(|| bad("degree must be an integer"))? as usize;
            let var = v.get("var").and_then(Value::as_str).unwrap_or("t");
            parse_homogenized(f, var, src, n).map_err(|e| match e {
                Error::DegreeMismatch(..) | Error::InvalidField(_) => bad("affine polynomial exceeds the stated degree"),
                other => other,
            })
        }
        _ => Err(bad("binary form must be a coefficient array or an affine object")),
    }
}

pub fn encode_point(f: &Field, c: &[FieldElement]) -> Value {
    Value::Array(c.iter().map(|&a| encode_element(f, a)).collect())
}

pub fn decode_plane_point(f: &Field, v: &Value) -> Result<PlanePoint> {
    let a = v.as_array().ok_or_else(|| bad("point must be an array"))?;
    if a.len() != 3 {
        return Err(bad("plane point needs three coordinates"));
    }
    let c = [decode_element(f, &a[0])?, decode_element(f, &a[1])?, decode_element(f, &a[2])?];
    PlanePoint::new(f, c).map_err(|_| bad("plane point is zero"))
}

/// `"x,y,z"` on the command line.
pub fn parse_point_arg(f: &Field, s: &str) -> Result<PlanePoint> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(bad("point must be given as x,y,z"));
    }
    let c = [parse_constant(f, parts[0])?, parse_constant(f, parts[1])?, parse_constant(f, parts[2])?];
    PlanePoint::new(f, c).map_err(|_| bad("plane point is zero"))
}

pub fn encode_surface(x: &DelPezzo2) -> Value {
    json!({
        "field": encode_field(x.field()),
        "c": encode_element(x.field(), x.field().one()),
        "f": encode_ternary(x.f()),
        "g": encode_ternary(x.g()),
    })
}

pub fn decode_surface(v: &Value) -> Result<DelPezzo2> {
    let f = decode_field(get(v, "field")?)?;
    let c = match v.get("c") {
        Some(c) => decode_element(&f, c)?,
        None => f.one(),
    };
    let fw = match v.get("f") {
        Some(x) => decode_ternary(&f, x, Some(2))?,
        None => TernaryForm::zero(&f, 2),
    };
    let g = decode_ternary(&f, get(v, "g")?, Some(4))?;
    DelPezzo2::normal_form(c, &fw, &g, false)
}

pub fn encode_curve(c: &MarkedCurve) -> Value {
    json!({
        "field": encode_field(c.field()),
        "h": encode_ternary(c.h()),
        "Q": encode_point(c.field(), &c.q().coords()),
        "d": c.d(),
    })
}

/// Unvalidated curve data `(h, Q, d)`; the field comes from the file or `default`.
pub fn decode_curve_data(v: &Value, default: Option<&Field>) -> Result<(TernaryForm, PlanePoint, usize)> {
    let f = match (v.get("field"), default) {
        (Some(fv), None) => decode_field(fv)?,
        (Some(fv), Some(d)) => {
            let f = decode_field(fv)?;
            if &f != d {
                return Err(Error::FieldMismatch);
            }
            f
        }
        (None, Some(d)) => d.clone(),
        (None, None) => return Err(bad("curve needs a field")),
    };
    let d = get(v, "d")?.as_u64().ok_or_else(|| bad("d must be an integer"))? as usize;
    let h = decode_ternary(&f, get(v, "h")?, Some(d))?;
    let q = decode_plane_point(&f, get(v, "Q")?)?;
    Ok((h, q, d))
}

pub fn encode_theta(t: &Parametrization) -> Value {
    Value::Array(t.theta().iter().map(encode_binary).collect())
}

pub fn encode_mat(f: &Field, m: &Mat3) -> Value {
    Value::Array(m.0.iter().map(|r| encode_point(f, r)).collect())
}

pub fn encode_smoothness(f: &Field, c: &SmoothnessCertificate) -> Value {
    let cands: Vec<Value> = c
        .candidates
        .iter()
        .map(|s| {
            let ext = f.extension(s.extension_degree).expect("already built");
            json!({
                "factor": encode_binary(&s.factor),
                "extension_degree": s.extension_degree,
                "root": encode_point(&ext, &[s.root.0, s.root.1]),
                "common_degree": s.common_degree,
            })
        })
        .collect();
    json!({
        "smooth": c.smooth,
        "seed": c.seed,
        "retries": c.retries,
        "frame": encode_mat(f, &c.frame),
        "resultant": encode_binary(&c.resultant),
        "candidates": cands,
        "candidate_bound": c.candidate_bound,
        "euler_relation": c.euler_relation,
        "reason": c.reason,
    })
}

fn encode_place(p: &BranchPlace) -> Value {
    json!({
        "factor": encode_binary(&p.factor),
        "degree": p.degree,
        "multiplicity": p.multiplicity,
        "above_q": p.above_q,
    })
}

pub fn encode_profile(p: &ContactProfile) -> Value {
    let f = p.h.field();
    json!({
        "H": encode_binary(&p.h),
        "squarefree": {
            "unit": encode_element(f, p.decomposition.unit),
            "factors": p.decomposition.factors.iter().map(|(s, m)| json!({"form": encode_binary(s), "multiplicity": m})).collect::<Vec<_>>(),
        },
        "places": p.places.iter().map(encode_place).collect::<Vec<_>>(),
        "even_off_q": p.even_off_q,
        "total_above_q": p.total_above_q,
        "even_everywhere": p.even_everywhere,
        "odd_points": p.odd_points,
        "odd_branches_above_q": p.odd_branches_above_q(),
        "genus": crate::cover::genus_double_cover(p).ok(),
    })
}

pub fn encode_map(m: &RationalMapToX) -> Value {
    json!({
        "field": encode_field(m.surface.field()),
        "field_of_definition": m.field_of_definition,
        "construction": m.construction.label(),
        "rho": m.rho.iter().map(encode_binary).collect::<Vec<_>>(),
    })
}

/// A map onto `x`, with coefficients in the canonical extension of degree
/// `field_of_definition` (default 1) of the surface's field.
pub fn decode_map(x: &DelPezzo2, v: &Value) -> Result<RationalMapToX> {
    let e = v.get("field_of_definition").map_or(Some(1), Value::as_u64).ok_or_else(|| bad("field_of_definition must be an integer"))? as usize;
    if e == 0 {
        return Err(bad("field_of_definition must be positive"));
    }
    let ext = x.field().extension(e)?;
    if let Some(fv) = v.get("field") {
        let declared = decode_field(fv)?;
        if declared.p() != ext.p() || declared.modulus() != ext.modulus() {
            return Err(bad("map field differs from the canonical extension of the surface field"));
        }
    }
    let rho = get(v, "rho")?.as_array().ok_or_else(|| bad("rho must be an array"))?;
    if rho.len() != 4 {
        return Err(bad("rho needs four components"));
    }
    let forms: Vec<BinaryForm> = rho.iter().map(|r| decode_binary(&ext, r)).collect::<Result<_>>()?;
    let surface = if e == 1 { x.clone() } else { x.base_change(&ext)? };
    RationalMapToX::new(surface, forms.try_into().expect("four forms"), e)
}

pub fn encode_report(r: &MapReport) -> Value {
    json!({
        "equation_holds": r.equation_holds,
        "nonconstant": r.nonconstant,
        "component_degrees": r.component_degrees,
        "gcd_degree": r.gcd_degree,
        "reduced_degree": r.reduced_degree,
        "plane_rank": r.plane_rank,
        "image_degree": r.image_degree,
        "degree_ratio": r.degree_ratio,
        "on_curve": r.on_curve,
        "field_of_definition": r.field_of_definition,
        "construction": r.construction.label(),
    })
}

pub const CONCLUSION: &str = "verified nonconstant morphism P^1 -> X; X is unirational";

pub fn encode_certificate(x: &DelPezzo2, c: &MarkedCurve, case: &str, m: &RationalMapToX) -> Value {
    json!({
        "surface": encode_surface(x),
        "curve": encode_curve(c),
        "theta": encode_theta(&c.parametrize()),
        "case": case,
        "rho": encode_map(m)["rho"].clone(),
        "field": encode_field(m.surface.field()),
        "field_of_definition": m.field_of_definition,
        "conclusion": CONCLUSION,
    })
}

/// `{"error": …, "kind": …}`.
pub fn encode_error(e: &Error) -> Value {
    let mut m = Map::new();
    m.insert("error".into(), json!(e.to_string()));
    m.insert("kind".into(), json!(format!("{e:?}").split(['(', ' ']).next().unwrap_or("").to_string()));
    if let Error::EquationFails(r) = e {
        m.insert("residual".into(), encode_binary(r));
    }
    Value::Object(m)
}
