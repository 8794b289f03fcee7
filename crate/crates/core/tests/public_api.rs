//! End-to-end checks through the public API and the JSON wire formats.

use num_bigint::BigUint;
use proptest::prelude::*;

use frobstab::forms::{check_zi_instability, forms_recurrence, z1_hn};
use frobstab::frobenius::{
    bound_langer_gap, bound_pushforward_case_one, bound_pushforward_case_two, bound_sun, bound_tensor,
    pushforward_stats, HypothesisMode,
};
use frobstab::json::{ContextJson, DecompositionJson, PolygonJson, ProfileJson};
use frobstab::rational::{format_exact, parse_exact};
use frobstab::truncated::{instability_tl_exact, tl_decomposition, tl_extremes};
use frobstab::{Citation, ErrorKind, Rational, Rational128, Scalar, SheafStats, SlopeProfile, VarietyContext};

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

#[test]
fn profile_json_to_decomposition_json() {
    let input = r#"{"blocks":[{"rank":1,"slope":"-1"},{"rank":2,"slope":"1/2"}]}"#;
    let profile: SlopeProfile = serde_json::from_str::<ProfileJson>(input)
        .unwrap()
        .parse()
        .unwrap();
    let d = tl_decomposition(&profile.normalize(), 2, 2).unwrap();
    let out = serde_json::to_string(&DecompositionJson::from(&d)).unwrap();
    assert_eq!(
        out,
        r#"{"l":2,"p":2,"pieces":[{"slope":"1/1","rank":"1"},{"slope":"-1/2","rank":"2"}],"total_rank":"3"}"#
    );
}

#[test]
fn context_json_defaults_and_validation() {
    let c: ContextJson = serde_json::from_str(r#"{"n":2,"p":3,"mu_omega":"1/2","i_omega":"0"}"#).unwrap();
    let ctx: VarietyContext = c.parse().unwrap();
    assert_eq!(ctx.lmax_omega, None);
    assert!(!ctx.omega_is_semistable());
    let back = ContextJson::from(&ctx);
    assert_eq!(back.i_omega, "0/1");
    assert_eq!(back.parse::<Rational>().unwrap(), ctx);

    let bad: ContextJson =
        serde_json::from_str(r#"{"n":2,"p":4,"mu_omega":"0","i_omega":"0"}"#).unwrap();
    assert_eq!(bad.parse::<Rational>().unwrap_err().kind(), ErrorKind::Validation);
}

#[test]
fn polygon_json_round_trip() {
    let profile = SlopeProfile::from_pairs([(2, q(3, 2)), (1, q(-1, 1))]).unwrap();
    let poly = profile.polygon().unwrap();
    let j = PolygonJson::from(&poly);
    assert_eq!(j.vertices, vec![(0, "0/1".into()), (2, "3/1".into()), (3, "2/1".into())]);
    assert_eq!(j.parse::<Rational>().unwrap(), poly);
}

#[test]
fn bound_examples_compose() {
    assert_eq!(bound_langer_gap(4, 2, &q(1, 2), &q(3, 1)), q(5, 1));
    let parts = [
        SheafStats::new(2u32, q(0, 1), q(1, 1)).unwrap(),
        SheafStats::new(3u32, q(0, 1), q(0, 1)).unwrap(),
    ];
    assert_eq!(bound_tensor(&parts, 3, &q(3, 1)).unwrap(), q(4, 1));

    let curve = VarietyContext::basic(1, 3, q(1, 1)).unwrap();
    let sun = bound_sun(&curve, &BigUint::from(2u32), &[q(0, 1), q(1, 2), q(1, 1)], HypothesisMode::Enforce).unwrap();
    assert_eq!(sun.value, q(2, 1));
    assert_eq!(sun.citation, Citation::SunPushforward);

    let negative = VarietyContext::new(1, 2, q(-2, 1), None, q(0, 1), true, false).unwrap();
    let line = SheafStats::new(1u32, q(0, 1), q(0, 1)).unwrap();
    let one = bound_pushforward_case_one(&negative, &line, HypothesisMode::Enforce).unwrap();
    assert_eq!(one.value, q(1, 1));
    assert!(one.hypotheses_satisfied());

    let err = bound_pushforward_case_two(&negative, &line, HypothesisMode::Enforce).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Validation, "missing lmax is reported before hypotheses");
    let with_lmax = VarietyContext::new(1, 2, q(-2, 1), Some(q(0, 1)), q(0, 1), true, false).unwrap();
    let err = bound_pushforward_case_two(&with_lmax, &line, HypothesisMode::Enforce).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Hypothesis);
    let forced = bound_pushforward_case_two(&with_lmax, &line, HypothesisMode::Force).unwrap();
    assert!(forced.report.forced);
}

#[test]
fn pushforward_ledger_of_a_curve() {
    let ctx = VarietyContext::basic(1, 2, q(2, 1)).unwrap();
    let e = SheafStats::new(1u32, q(0, 1), q(0, 1)).unwrap();
    let l = pushforward_stats(&ctx, &e);
    assert_eq!(l.rank, BigUint::from(2u32));
    assert_eq!((l.slope, l.degree), (q(1, 2), q(1, 1)));
}

#[test]
fn forms_and_verdicts_agree() {
    let table = forms_recurrence::<Rational>(4, 3).unwrap();
    let v = check_zi_instability::<Rational>(4, 3, 1).unwrap();
    assert_eq!(table.row(1).unwrap().mu_b_coeff(), Some(v.mu_b_coeff.clone()));
    assert_eq!(v.mu_b_coeff, q(27, 20));
    let z1 = z1_hn::<Rational>(3, 3).unwrap();
    assert_eq!(z1.segment_slopes(), vec![q(27, 26), q(1, 1)]);
}

#[test]
fn fixed_width_instantiation_matches_big_rationals() {
    let big = SlopeProfile::from_pairs([(2, q(5, 3)), (3, q(1, 6)), (1, q(-2, 1))]).unwrap();
    let small = frobstab::hn::SlopeProfile::<Rational128>::from_pairs([
        (2, Rational128::ratio(5, 3)),
        (3, Rational128::ratio(1, 6)),
        (1, Rational128::ratio(-2, 1)),
    ])
    .unwrap();
    for p in [2, 3, 5] {
        for l in 0..=6 * (p - 1) {
            let a = instability_tl_exact(&big, p, l).unwrap();
            let b = instability_tl_exact(&small, p, l).unwrap();
            assert_eq!(format_exact(&a), format_exact(&b), "p={p} l={l}");
        }
    }
}

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-1000i64..=1000, 1i64..=1000).prop_map(|(n, d)| Rational::ratio(n, d))
}

proptest! {
    #[test]
    fn profile_json_round_trips(blocks in prop::collection::vec((1u64..=5, arb_rational()), 1..=5)) {
        let profile = SlopeProfile::from_pairs(blocks).unwrap();
        let text = serde_json::to_string(&ProfileJson::from(&profile)).unwrap();
        let back: SlopeProfile = serde_json::from_str::<ProfileJson>(&text).unwrap().parse().unwrap();
        prop_assert_eq!(back, profile);
    }

    #[test]
    fn extremes_bracket_every_piece(blocks in prop::collection::vec((1u64..=3, arb_rational()), 1..=3), l in 0u64..=6) {
        let profile = SlopeProfile::from_pairs(blocks).unwrap().normalize();
        let p = 3;
        prop_assume!(l <= profile.total_rank() * (p - 1));
        let d = tl_decomposition(&profile, p, l).unwrap();
        let (hi, lo) = tl_extremes(&profile, p, l).unwrap();
        for (s, _) in d.pieces_descending() {
            prop_assert!(&lo <= s && s <= &hi);
        }
    }

    #[test]
    fn parse_accepts_bare_integers(n in -10_000i64..=10_000) {
        let v: Rational = parse_exact(&n.to_string()).unwrap();
        prop_assert_eq!(format_exact(&v), format!("{n}/1"));
    }
}
