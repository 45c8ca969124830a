use dp2::cover::{lift, pullback_branch, verify_map, CaseClassification};
use dp2::curve::MarkedCurve;
use dp2::field::{Field, FieldElement};
use dp2::forms::{BinaryForm, TernaryForm};
use dp2::golden::cases;
use dp2::json::{decode_ternary, encode_ternary, parse_constant};
use dp2::linalg::Mat3;
use dp2::search::{search, SearchCaps};
use dp2::surface::{DelPezzo2, PlanePoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Field> {
    let f3 = Field::prime(3).unwrap();
    vec![f3.clone(), Field::gf9(), f3.extension(3).unwrap(), Field::prime(7).unwrap()]
}

fn elem(f: &Field, i: u64) -> FieldElement {
    f.from_index(i % f.q())
}

fn binary(f: &Field, c: &[u64]) -> BinaryForm {
    BinaryForm::new(f, c.iter().map(|&i| elem(f, i)).collect())
}

fn ternary(f: &Field, n: u32, c: &[u64]) -> TernaryForm {
    let mut it = c.iter().cycle();
    let terms: Vec<([u32; 3], FieldElement)> =
        (0..=n).flat_map(|i| (0..=n - i).map(move |j| [i, j, n - i - j])).map(|e| (e, elem(f, *it.next().unwrap()))).collect();
    TernaryForm::new(f, n as usize, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_inverse_and_sqrt(fi in 0usize..4, a in 1u64..10_000, b in 0u64..10_000) {
        let f = &fields()[fi];
        let (a, b) = (elem(f, a), elem(f, b));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(f.div(b, a).unwrap(), a), b);
        }
        let sq = f.mul(a, a);
        let s = f.sqrt(sq).unwrap();
        prop_assert!(s == a || s == f.neg(a));
        prop_assert_eq!(f.frobenius(f.pth_root(b), 1), b);
    }

    #[test]
    fn element_text_round_trip(fi in 0usize..4, a in 0u64..10_000) {
        let f = &fields()[fi];
        let a = elem(f, a);
        prop_assert_eq!(parse_constant(f, &f.fmt_element(a)).unwrap(), a);
    }

    #[test]
    fn gcd_divides_and_cofactors_are_coprime(fi in 0usize..4, a in prop::collection::vec(0u64..100, 1..6), b in prop::collection::vec(0u64..100, 1..6), c in prop::collection::vec(0u64..100, 1..4)) {
        let f = &fields()[fi];
        let (a, b, c) = (binary(f, &a), binary(f, &b), binary(f, &c));
        prop_assume!(!a.is_zero() && !b.is_zero() && !c.is_zero());
        let (ac, bc) = (a.mul(&c).unwrap(), b.mul(&c).unwrap());
        let g = ac.gcd(&bc).unwrap();
        prop_assert!(g.divides(&ac) && g.divides(&bc));
        prop_assert!(c.divides(&g));
        let x = ac.div_exact(&g).unwrap().unwrap();
        let y = bc.div_exact(&g).unwrap().unwrap();
        prop_assert!(x.gcd(&y).unwrap().is_constant());
    }

    #[test]
    fn factorization_multiplies_back(fi in 0usize..4, a in prop::collection::vec(0u64..100, 2..8)) {
        let f = &fields()[fi];
        let h = binary(f, &a);
        prop_assume!(!h.is_zero());
        let (unit, facs) = h.factor().unwrap();
        let mut back = BinaryForm::constant(f, unit);
        for (p, m) in &facs {
            back = back.mul(&p.pow(*m)).unwrap();
        }
        prop_assert_eq!(back, h);
    }

    #[test]
    fn linear_change_is_invertible(fi in 0usize..4, n in 1u32..5, c in prop::collection::vec(0u64..100, 15), seed in 0u64..1000) {
        let f = &fields()[fi];
        let h = ternary(f, n, &c);
        let m = Mat3::random_invertible(f, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = h.substitute_linear(&m).substitute_linear(&m.inverse(f).unwrap());
        prop_assert_eq!(back, h);
    }

    #[test]
    fn ternary_json_round_trip(fi in 0usize..4, n in 0u32..5, c in prop::collection::vec(0u64..100, 15)) {
        let f = &fields()[fi];
        let h = ternary(f, n, &c);
        prop_assert_eq!(decode_ternary(f, &encode_ternary(&h), Some(n as usize)).unwrap(), h);
    }

    #[test]
    fn involution_preserves_fibers(fi in 0usize..4, g in prop::collection::vec(0u64..100, 15), fc in prop::collection::vec(0u64..100, 6), p in prop::collection::vec(0u64..100, 3)) {
        let f = &fields()[fi];
        let x = DelPezzo2::new(ternary(f, 2, &fc), ternary(f, 4, &g)).unwrap();
        let Ok(pt) = PlanePoint::new(f, [elem(f, p[0]), elem(f, p[1]), elem(f, p[2])]) else { return Ok(()) };
        for s in x.fiber(&pt).unwrap().points {
            let t = x.involution(&s).unwrap();
            prop_assert_eq!(t.project(), pt.clone());
            prop_assert_eq!(x.involution(&t).unwrap(), s);
        }
    }
}

#[test]
fn smoothness_is_invariant_under_coordinate_changes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f3 = Field::prime(3).unwrap();
    let nodal = DelPezzo2::new(TernaryForm::zero(&f3, 2), ternary(&f3, 4, &[0; 15]).add(&dp2::parse::parse_ternary(&f3, "x^4 + y^4 + x^2*z^2 - y^2*z^2").unwrap()).unwrap()).unwrap();
    let mut surfaces: Vec<(DelPezzo2, bool)> = cases().iter().map(|c| (c.surface().unwrap(), true)).collect();
    surfaces.push((nodal.clone(), nodal.is_smooth().unwrap().smooth));
    assert!(!surfaces.last().unwrap().1, "x^4 + y^4 + x^2 z^2 - y^2 z^2 is singular at (0:0:1)");
    for (x, smooth) in &surfaces {
        let f = x.field();
        for _ in 0..10 {
            let m = Mat3::random_invertible(f, &mut rng);
            let y = DelPezzo2::new(x.f().substitute_linear(&m), x.g().substitute_linear(&m)).unwrap();
            assert_eq!(y.is_smooth().unwrap().smooth, *smooth);
        }
    }
}

#[test]
fn search_hits_recertify_and_are_distinct() {
    let c = &cases()[1];
    let x = c.surface().unwrap();
    let q = c.marked_point().unwrap();
    let r = search(&x, &q, 4, &SearchCaps::default()).unwrap();
    assert!(!r.hits.is_empty());
    for (i, hit) in r.hits.iter().enumerate() {
        let h = hit.curve.h();
        assert_eq!(h.monic().0, x.field().one());
        for other in &r.hits[i + 1..] {
            assert_ne!(other.curve.h(), h);
        }
        for s in [1, 2] {
            let scaled = h.scale(x.field().from_int(s));
            let again = MarkedCurve::new(scaled, q.clone()).unwrap();
            let p = pullback_branch(&x, &again.parametrize()).unwrap();
            assert_eq!(p.places, hit.profile.places);
            assert_eq!(p.even_everywhere, hit.profile.even_everywhere);
            assert_eq!(p.odd_points, hit.profile.odd_points);
        }
    }
}

#[test]
fn search_is_deterministic_across_thread_counts() {
    let c = &cases()[0];
    let x = c.surface().unwrap();
    let q = c.marked_point().unwrap();
    let a = search(&x, &q, 4, &SearchCaps::default()).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| search(&x, &q, 4, &SearchCaps::default()).unwrap());
    assert_eq!(a.stats, b.stats);
    let key = |r: &dp2::search::SearchResult| r.hits.iter().map(|h| h.curve.h().to_terms()).collect::<Vec<_>>();
    assert_eq!(key(&a), key(&b));
}

fn split_hits_verify(x: &DelPezzo2, q: &PlanePoint) -> Vec<usize> {
    assert!(!x.branch().eval(q.coords()).is_zero());
    let r = search(x, q, 2, &SearchCaps { lift: true, ..SearchCaps::default() }).unwrap();
    assert!(!r.hits.is_empty());
    assert_eq!(r.stats.lift_failures, 0);
    let mut fields = Vec::new();
    for hit in &r.hits {
        assert_eq!(hit.case, CaseClassification::Split);
        let m = hit.map.as_ref().expect("lift attached");
        let rep = verify_map(m, Some(hit.curve.h())).unwrap();
        assert!(rep.equation_holds && rep.nonconstant);
        assert_eq!(rep.on_curve, Some(true));
        fields.push(m.field_of_definition);
    }
    fields
}

#[test]
fn conic_search_off_the_branch_curve_gives_split_lifts() {
    // X1 has a single rational point, lying over the branch curve
    let x1 = cases()[0].surface().unwrap();
    assert_eq!(x1.rational_points(1, false).unwrap().count, 1);
    let q = PlanePoint::from_ints(x1.field(), [0, 1, 0]).unwrap();
    assert!(x1.rational_point_above(&q).unwrap().is_none());
    split_hits_verify(&x1, &q);

    // the reference surfaces have every rational point on the ramification curve,
    // so take a smooth surface over F_3 with a rational point off it
    let f3 = Field::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (x, q) = loop {
        let g: Vec<u64> = (0..15).map(|_| rand::Rng::gen_range(&mut rng, 0..3)).collect();
        let Ok(x) = DelPezzo2::new(TernaryForm::zero(&f3, 2), ternary(&f3, 4, &g)) else { continue };
        if !x.is_smooth().unwrap().smooth {
            continue;
        }
        let found = PlanePoint::all(&f3).find(|q| !x.branch().eval(q.coords()).is_zero() && x.rational_point_above(q).unwrap().is_some());
        if let Some(q) = found {
            break (x, q);
        }
    };
    assert!(split_hits_verify(&x, &q).iter().all(|&e| e == 1));
    let p = x.rational_point_above(&q).unwrap();
    let r = search(&x, &q, 2, &SearchCaps::default()).unwrap();
    let l = lift(&x, &r.hits[0].curve, p.as_ref()).unwrap();
    assert_eq!(l.case, CaseClassification::Split);
    assert_eq!(l.map.field_of_definition, 1);
}
