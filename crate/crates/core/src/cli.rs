//! Command-line front end. Every subcommand prints one JSON report; the exit
//! code is 0 on success, 1 when a mathematical check fails and 2 on
//! malformed input.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cover::{classify, genus_double_cover, lift, lift_conic, pullback_branch, verify_map, CaseClassification};
use crate::curve::{check_integral, multiplicity_at, MarkedCurve};
use crate::error::{Error, Result};
use crate::golden::{cases, GoldenCase};
use crate::json::*;
use crate::search::{search, SearchCaps};
use crate::surface::DelPezzo2;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dp2", version, about = "Rational curves and unirationality certificates on degree-2 del Pezzo surfaces")]
pub struct Cli {
    /// Seed for the random coordinate changes of the smoothness check.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LiftMode {
    None,
    Auto,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide smoothness and print the elimination certificate.
    Smooth {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Print the branch quartic.
    Branch {
        #[arg(long)]
        surface: PathBuf,
    },
    /// Count rational points over the extension of degree `ext`.
    Points {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long, default_value_t = 1)]
        ext: usize,
    },
    /// Validate a marked curve and report its contact with the branch curve.
    CheckCurve {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        curve: PathBuf,
    },
    /// Parametrize a marked curve by lines through its marked point.
    Parametrize {
        #[arg(long)]
        curve: PathBuf,
    },
    /// Build and verify a map P^1 -> X through the marked curve.
    Lift {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        curve: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a map satisfies the surface equation and is nonconstant.
    VerifyMap {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Marked curve whose plane equation the image should satisfy.
        #[arg(long)]
        curve: Option<PathBuf>,
    },
    /// Enumerate marked curves of degree `d` through `Q` with even contact.
    Search {
        #[arg(long)]
        surface: PathBuf,
        #[arg(long = "Q")]
        q: String,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        max_candidates: Option<u128>,
        #[arg(long, value_enum, default_value_t = LiftMode::None)]
        lift: LiftMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the full pipeline on the bundled surfaces.
    Demo {
        #[arg(long)]
        paper: bool,
    },
}

pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Parse(_)
            | Error::InvalidField(_)
            | Error::DegreeMismatch(..)
            | Error::FieldMismatch
            | Error::ZeroVector
            | Error::CharTwo
    )
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(v).expect("serializable");
    std::fs::write(path, text + "\n").map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_surface(path: &Path) -> Result<DelPezzo2> {
    decode_surface(&read_json(path)?)
}

fn load_curve(path: &Path, x: Option<&DelPezzo2>) -> Result<(crate::forms::TernaryForm, crate::surface::PlanePoint, usize)> {
    decode_curve_data(&read_json(path)?, x.map(DelPezzo2::field))
}

/// Runs one command, returning the exit code and the report to print.
pub fn run(cli: &Cli) -> (i32, Value) {
    match dispatch(cli) {
        Ok(r) => r,
        Err(e) => {
            let code = if is_input_error(&e) { EXIT_BAD_INPUT } else { EXIT_CHECK_FAILED };
            (code, json!({ "ok": false, "failure": encode_error(&e) }))
        }
    }
}

fn status(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, Value)> {
    match &cli.command {
        Command::Smooth { surface } => {
            let x = load_surface(surface)?;
            let cert = x.is_smooth_with_seed(cli.seed)?;
            Ok((status(cert.smooth), json!({ "ok": cert.smooth, "smooth": encode_smoothness(x.field(), &cert) })))
        }
        Command::Branch { surface } => {
            let x = load_surface(surface)?;
            Ok((EXIT_OK, json!({ "ok": true, "branch": encode_ternary(x.branch()), "degree": x.branch().degree() })))
        }
        Command::Points { surface, ext } => {
            let x = load_surface(surface)?;
            if *ext == 0 {
                return Err(Error::Parse("--ext must be positive".into()));
            }
            let pc = x.rational_points(*ext, false)?;
            let q = x.field().q().pow(*ext as u32);
            Ok((
                status(pc.count > 0),
                json!({ "ok": pc.count > 0, "extension_degree": ext, "field_order": q, "count": pc.count, "count_mod_q": pc.count % q }),
            ))
        }
        Command::CheckCurve { surface, curve } => {
            let x = load_surface(surface)?;
            let (h, q, d) = load_curve(curve, Some(&x))?;
            let (ok, report) = check_curve(&x, h, q, d)?;
            Ok((status(ok), report))
        }
        Command::Parametrize { curve } => {
            let (h, q, d) = load_curve(curve, None)?;
            let c = MarkedCurve::with_degree(h, q, d)?;
            let theta = c.parametrize();
            let identity = c.h().compose(theta.components())?.is_zero();
            Ok((
                status(identity),
                json!({ "ok": identity, "curve": encode_curve(&c), "theta": encode_theta(&theta), "degree": theta.degree(), "identity_holds": identity }),
            ))
        }
        Command::Lift { surface, curve, out } => {
            let x = load_surface(surface)?;
            let (h, q, d) = load_curve(curve, Some(&x))?;
            let c = MarkedCurve::with_degree(h, q, d)?;
            let p = x.rational_point_above(c.q())?;
            let l = lift(&x, &c, p.as_ref())?;
            let report = verify_map(&l.map, Some(c.h()))?;
            let cert = encode_certificate(&x, &c, l.case.label(), &l.map);
            if let Some(out) = out {
                write_json(out, &cert)?;
            }
            Ok((
                EXIT_OK,
                json!({ "ok": true, "certificate": cert, "verification": encode_report(&report), "genus": l.genus }),
            ))
        }
        Command::VerifyMap { surface, map, curve } => {
            let x = load_surface(surface)?;
            let m = decode_map(&x, &read_json(map)?)?;
            let h = match curve {
                Some(c) => Some(load_curve(c, Some(&x))?.0),
                None => None,
            };
            let report = verify_map(&m, h.as_ref())?;
            let ok = report.on_curve != Some(false);
            Ok((status(ok), json!({ "ok": ok, "report": encode_report(&report) })))
        }
        Command::Search { surface, q, d, max_candidates, lift, out } => {
            let x = load_surface(surface)?;
            let q = parse_point_arg(x.field(), q)?;
            let mut caps = SearchCaps::from_env();
            if let Some(n) = max_candidates {
                caps.max_candidates = *n;
            }
            caps.lift = *lift == LiftMode::Auto;
            let res = search(&x, &q, *d, &caps)?;
            let hits: Vec<Value> = res.hits.iter().map(encode_hit).collect();
            if let Some(out) = out {
                write_json(out, &Value::Array(hits.clone()))?;
            }
            let s = &res.stats;
            let ok = s.parity_violations == 0 && s.lift_failures == 0;
            Ok((
                status(ok),
                json!({
                    "ok": ok,
                    "stats": {
                        "dimension": s.dimension,
                        "candidates": s.candidates,
                        "rejected_multiplicity": s.rejected_multiplicity,
                        "rejected_integrality": s.rejected_integrality,
                        "rejected_ordinary": s.rejected_ordinary,
                        "rejected_inside_branch": s.rejected_inside_branch,
                        "rejected_contact": s.rejected_contact,
                        "rejected_case": s.rejected_case,
                        "rejected_invalid": s.rejected_invalid,
                        "hits": s.hits,
                        "lifts_verified": s.lifts_verified,
                        "lift_failures": s.lift_failures,
                        "parity_checked": s.parity_checked,
                        "parity_violations": s.parity_violations,
                    },
                    "hits": hits,
                }),
            ))
        }
        Command::Demo { paper } => {
            if !paper {
                return Err(Error::Parse("demo needs --paper".into()));
            }
            let reports: Vec<(bool, Value)> = cases().iter().map(|c| demo_case(c, cli.seed)).collect::<Result<_>>()?;
            let ok = reports.iter().all(|(ok, _)| *ok);
            Ok((status(ok), json!({ "ok": ok, "surfaces": reports.into_iter().map(|(_, v)| v).collect::<Vec<_>>() })))
        }
    }
}

pub fn encode_hit(hit: &crate::search::SearchHit) -> Value {
    json!({
        "curve": encode_curve(&hit.curve),
        "case": hit.case.label(),
        "profile": encode_profile(&hit.profile),
        "map": hit.map.as_ref().map(encode_map),
    })
}

fn check_curve(x: &DelPezzo2, h: crate::forms::TernaryForm, q: crate::surface::PlanePoint, d: usize) -> Result<(bool, Value)> {
    let mult = multiplicity_at(&h, &q)?;
    let on_branch = x.branch().eval(q.coords()).is_zero();
    let c = match MarkedCurve::with_degree(h.clone(), q.clone(), d) {
        Ok(c) => c,
        Err(e) if !is_input_error(&e) => {
            return Ok((
                false,
                json!({ "ok": false, "multiplicity": mult, "q_on_branch": on_branch, "valid": false, "failure": encode_error(&e) }),
            ))
        }
        Err(e) => return Err(e),
    };
    let (lo, hi) = c.parts();
    let integral = check_integral(lo, hi);
    let profile = pullback_branch(x, &c.parametrize())?;
    let p = x.rational_point_above(c.q())?;
    let (case, reason) = match classify(x, &c, &profile, p.as_ref()) {
        Ok(CaseClassification::NotApplicable(r)) => ("not-applicable", Some(r)),
        Ok(k) => (k.label(), None),
        Err(e) => ("not-applicable", Some(e.to_string())),
    };
    let ok = integral && profile.even_everywhere && reason.is_none();
    Ok((
        ok,
        json!({
            "ok": ok,
            "valid": true,
            "curve": encode_curve(&c),
            "multiplicity": mult,
            "ordinary": c.is_ordinary(),
            "q_on_branch": on_branch,
            "integral": integral,
            "tangent_cone": encode_binary(c.tangent_cone()),
            "profile": encode_profile(&profile),
            "case": case,
            "reason": reason,
        }),
    ))
}

fn demo_case(case: &GoldenCase, seed: u64) -> Result<(bool, Value)> {
    let x = case.surface()?;
    let f = x.field();
    let smooth = x.is_smooth_with_seed(seed)?.smooth;

    let c = case.marked_curve()?;
    let rho = case.rho()?;
    let golden = verify_map(&rho, Some(c.h()));
    let image_on_curve = c.h().compose(rho.plane())?.is_zero();

    let mult = multiplicity_at(c.h(), c.q())?;
    let on_branch = x.branch().eval(c.q().coords()).is_zero();
    let (lo, hi) = c.parts();
    let integral = check_integral(lo, hi);

    let theta = c.parametrize();
    let profile = pullback_branch(&x, &theta)?;
    let genus = genus_double_cover(&profile).ok();
    let case_kind = classify(&x, &c, &profile, None)?;
    let fresh = match case_kind {
        CaseClassification::Conic => lift_conic(&x, &theta, &profile).and_then(|m| Ok((verify_map(&m, Some(c.h()))?, m))),
        _ => lift(&x, &c, x.rational_point_above(c.q())?.as_ref()).and_then(|l| Ok((verify_map(&l.map, Some(c.h()))?, l.map))),
    };

    let points = x.rational_points(1, false)?;
    let q = f.q();

    let golden_ok = golden.as_ref().is_ok_and(|r| r.degree_ratio == Some(2));
    let fresh_ok = fresh.as_ref().is_ok_and(|(r, m)| r.degree_ratio == Some(2) && m.field_of_definition == 1);
    let checks = json!({
        "smooth": smooth,
        "golden_map_verified": golden_ok,
        "image_on_curve": image_on_curve,
        "multiplicity": mult == c.d() - 1,
        "ordinary": c.is_ordinary(),
        "q_on_branch": on_branch,
        "integral": integral,
        "even_contact": profile.even_everywhere,
        "genus_zero": genus == Some(0),
        "fresh_lift_verified": fresh_ok,
        "has_rational_point": points.count >= 1,
        "count_is_1_mod_q": points.count % q == 1,
    });
    let ok = checks.as_object().expect("object").values().all(|v| v == &Value::Bool(true));
    Ok((
        ok,
        json!({
            "name": case.name,
            "ok": ok,
            "checks": checks,
            "surface": encode_surface(&x),
            "curve": encode_curve(&c),
            "multiplicity_at_q": mult,
            "golden_map": match &golden { Ok(r) => encode_report(r), Err(e) => encode_error(e) },
            "profile": encode_profile(&profile),
            "genus": genus,
            "case": case_kind.label(),
            "fresh_certificate": match &fresh {
                Ok((r, m)) => json!({ "certificate": encode_certificate(&x, &c, case_kind.label(), m), "verification": encode_report(r) }),
                Err(e) => encode_error(e),
            },
            "rational_points": points.count,
        }),
    ))
}
