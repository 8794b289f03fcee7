//! One function per subcommand. Each resolves to a single library call (or
//! one named check suite) and returns the report as a JSON value.

use std::path::Path;

use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use frobstab::forms::{self, check_zi_instability, forms_closed, forms_recurrence, z1_hn};
use frobstab::frobenius::{
    bound_langer_gap, bound_pushforward_case_one, bound_pushforward_case_two, bound_sun,
    canonical_filtration_ranks, deg_pushforward_forms, filtration_degree, mu_pushforward, pushforward_stats,
    stability_advisor, AdvisorFlags, HypothesisMode,
};
use frobstab::hn::{compare, dominates};
use frobstab::json::{ContextJson, DecompositionJson, FormsTableJson, PolygonJson, ProfileJson, ZiVerdictJson};
use frobstab::rational::{format_exact, is_prime};
use frobstab::truncated::{
    bound_instab_tl, bound_tl2, dvec, dvec_mirror_gap, rank_tl, rank_tl_oracle, tl2_case_coefficient, tl_decomposition,
    tl_extremes, TlCase,
};
use frobstab::{Error, Rational, SheafStats, SlopeProfile, VarietyContext};

use crate::args::{
    AdvisorArgs, CheckZiArgs, Cli, Command, FormsArgs, HnpArgs, InstabTlArgs, PushArgs, PushforwardArgs, RankTlArgs,
    SelfcheckArgs, TlArgs,
};
use crate::output::{CliError, Outcome, EXIT_HYPOTHESIS, EXIT_INTERNAL, EXIT_VALIDATION};
use crate::selfcheck;

type CliResult<T> = std::result::Result<T, CliError>;

pub const UNITS_ABSOLUTE: &str = "absolute";
pub const UNITS_MU_OMEGA: &str = "mu_omega";
pub const BANNER: &str = "hypotheses not satisfied";

/// Largest rank for which `rank-tl` also enumerates the oracle.
const ORACLE_LIMIT: u64 = 5_000_000;

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let mode = if cli.force { HypothesisMode::Force } else { HypothesisMode::Enforce };
    match &cli.command {
        Command::RankTl(a) => rank_tl_cmd(a),
        Command::DecompTl(a) => decomp_tl_cmd(a),
        Command::InstabTl(a) => instab_tl_cmd(a),
        Command::Bounds(a) => bounds_cmd(a, mode),
        Command::Pushforward(a) => pushforward_cmd(a),
        Command::Forms(a) => forms_cmd(a),
        Command::CheckZi(a) => check_zi_cmd(a),
        Command::Hnp(a) => hnp_cmd(a),
        Command::Advisor(a) => advisor_cmd(a),
        Command::Selfcheck(a) => selfcheck_cmd(a),
    }
}

/// Reads a JSON argument: inline when it starts with `{`, a file path otherwise.
pub fn load_json<T: DeserializeOwned>(arg: &str, what: &str) -> CliResult<T> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg))
            .map_err(|e| CliError::Validation(format!("cannot read {what} file {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{what} JSON: {e}")))
}

fn load_profile(arg: &str) -> CliResult<SlopeProfile> {
    Ok(load_json::<ProfileJson>(arg, "profile")?.parse::<Rational>()?)
}

fn load_ctx(arg: &str) -> CliResult<VarietyContext> {
    Ok(load_json::<ContextJson>(arg, "ctx")?.parse::<Rational>()?)
}

fn exact(q: &Rational) -> Value {
    Value::String(format_exact(q))
}

fn count(n: &BigUint) -> Value {
    Value::String(n.to_string())
}

pub fn bound_json(b: &frobstab::BoundReport, quantity: &str) -> Value {
    json!({
        "quantity": quantity,
        "value": exact(&b.value),
        "citation": b.citation,
        "hypotheses": b.hypotheses,
        "forced": b.forced,
    })
}

fn plain_bound(value: &Rational, citation: frobstab::Citation, quantity: &str) -> Value {
    json!({
        "quantity": quantity,
        "value": exact(value),
        "citation": citation,
        "hypotheses": [],
        "forced": false,
    })
}

fn rank_tl_cmd(a: &RankTlArgs) -> CliResult<Outcome> {
    if a.r == 0 {
        return Err(Error::OutOfRange {
            what: "r",
            value: "0".into(),
            range: "[1, ∞)".into(),
        }
        .into());
    }
    if !is_prime(a.p) {
        return Err(Error::NotPrime(a.p).into());
    }
    let rank = rank_tl(a.r, a.p, a.l);
    let oracle = if rank <= BigUint::from(ORACLE_LIMIT) {
        Some(rank_tl_oracle(a.r, a.p, a.l))
    } else {
        None
    };
    let report = match oracle {
        Some(o) => json!({ "rank": count(&rank), "oracle": count(&o), "agrees": rank == o }),
        None => json!({ "rank": count(&rank), "oracle": Value::Null, "agrees": Value::Null }),
    };
    let exit = if report["agrees"] == Value::Bool(false) { EXIT_INTERNAL } else { 0 };
    Ok(Outcome { report, exit })
}

fn decomp_tl_cmd(a: &TlArgs) -> CliResult<Outcome> {
    let profile = load_profile(&a.profile)?.normalize();
    let d = tl_decomposition(&profile, a.p, a.l)?;
    let mut report = serde_json::to_value(DecompositionJson::from(&d)).expect("serializable");
    report
        .as_object_mut()
        .expect("object")
        .insert("units".into(), UNITS_ABSOLUTE.into());
    Ok(Outcome::ok(report))
}

fn case_name(c: TlCase) -> &'static str {
    match c {
        TlCase::Low => "low",
        TlCase::EvenHigh => "even-high",
        TlCase::OddMiddle => "odd-middle",
        TlCase::OddHigh => "odd-high",
    }
}

fn instab_tl_cmd(a: &InstabTlArgs) -> CliResult<Outcome> {
    let profile = load_profile(&a.tl.profile)?.normalize();
    let (p, l) = (a.tl.p, a.tl.l);
    let r = profile.total_rank();
    let (hi, lo) = tl_extremes(&profile, p, l)?;
    let d = dvec(r, p, l)?;
    let (case, coeff) = tl2_case_coefficient(r, p, l)?;
    let i_e = profile.instability();
    let mut bounds = vec![plain_bound(
        &bound_tl2(&profile, p, l),
        frobstab::Citation::TheoremTl2,
        "I(T^l(E))",
    )];
    if let Some(ctx_arg) = &a.ctx {
        let ctx = load_ctx(ctx_arg)?;
        if ctx.p != p {
            return Err(CliError::Validation(format!("ctx has p = {} but --p is {p}", ctx.p)));
        }
        let lmax = ctx.lmax_omega.clone().ok_or(Error::MissingInput("lmax_omega"))?;
        bounds.push(plain_bound(
            &bound_instab_tl(r, p, l, &i_e, &lmax),
            frobstab::Citation::TheoremInstabTl,
            "I(T^l(E))",
        ));
    }
    let report = json!({
        "units": UNITS_ABSOLUTE,
        "r": r,
        "p": p,
        "l": l,
        "dvec": d.0,
        "mu_max": exact(&hi),
        "mu_min": exact(&lo),
        "instability_exact": exact(&(hi.clone() - lo.clone())),
        "instability_e": exact(&i_e),
        "case_table": {
            "case": case_name(case),
            "coefficient": coeff,
            "mirror_gap": dvec_mirror_gap(r, p, l)?,
        },
        "bounds": bounds,
    });
    Ok(Outcome::ok(report))
}

fn sheaf_of(profile: &SlopeProfile) -> CliResult<SheafStats> {
    let st = profile.stats();
    Ok(SheafStats::new(profile.total_rank(), st.mu, st.instability)?)
}

fn bounds_cmd(a: &PushArgs, mode: HypothesisMode) -> CliResult<Outcome> {
    let ctx = load_ctx(&a.ctx)?;
    let profile = load_profile(&a.profile)?.normalize();
    let e = sheaf_of(&profile)?;
    let r = profile.total_rank();
    let mut bounds = Vec::new();
    let mut skipped = Vec::new();
    let mut hypothesis_skips = 0usize;
    let mut record = |res: frobstab::Result<Value>, citation: frobstab::Citation, bounds: &mut Vec<Value>| match res {
        Ok(v) => bounds.push(v),
        Err(Error::Hypothesis { failed, .. }) => {
            hypothesis_skips += 1;
            skipped.push(json!({ "citation": citation, "reason": "hypothesis", "failed": failed }));
        }
        Err(other) => skipped.push(json!({ "citation": citation, "reason": other.to_string(), "failed": [] })),
    };

    let langer = ctx
        .lmax_omega
        .as_ref()
        .map(|lmax| plain_bound(&bound_langer_gap(r, ctx.p, &e.instability, lmax), frobstab::Citation::LangerGap, "L_max(E) − L_min(E)"))
        .ok_or(Error::MissingInput("lmax_omega"));
    record(langer, frobstab::Citation::LangerGap, &mut bounds);

    let one = bound_pushforward_case_one(&ctx, &e, mode).map(|b| bound_json(&b, "I(F_*E)"));
    record(one, frobstab::Citation::TheoremDiImMinus, &mut bounds);

    let mut per_l = Value::Null;
    match bound_pushforward_case_two(&ctx, &e, mode) {
        Ok(two) => {
            per_l = Value::Array(two.per_l.iter().map(exact).collect());
            let sun = bound_sun(&ctx, &e.rank, &two.per_l, mode).map(|b| bound_json(&b, "I(F_*E)"));
            bounds.push(bound_json(&two.report, "I(F_*E)"));
            record(sun, frobstab::Citation::SunPushforward, &mut bounds);
        }
        Err(err) => {
            record(Err(err.clone()), frobstab::Citation::TheoremInstabDirIm, &mut bounds);
            record(Err(err), frobstab::Citation::SunPushforward, &mut bounds);
        }
    }

    let any_forced = bounds.iter().any(|b| b["forced"] == Value::Bool(true));
    let pushforward_bounds = bounds
        .iter()
        .filter(|b| b["quantity"] == "I(F_*E)")
        .count();
    let mut report = json!({
        "units": UNITS_ABSOLUTE,
        "e": { "rank": r, "slope": exact(&e.slope), "instability": exact(&e.instability) },
        "bounds": bounds,
        "case_two_per_l": per_l,
        "skipped": skipped,
    });
    if any_forced {
        report
            .as_object_mut()
            .expect("object")
            .insert("banner".into(), BANNER.into());
    }
    let exit = if pushforward_bounds > 0 {
        0
    } else if hypothesis_skips > 0 {
        EXIT_HYPOTHESIS
    } else {
        EXIT_VALIDATION
    };
    Ok(Outcome { report, exit })
}

fn pushforward_cmd(a: &PushforwardArgs) -> CliResult<Outcome> {
    let ctx = load_ctx(&a.push.ctx)?;
    let profile = load_profile(&a.push.profile)?.normalize();
    let e = sheaf_of(&profile)?;
    let r = profile.total_rank();
    let ledger = pushforward_stats(&ctx, &e);
    let filtration: Vec<Value> = canonical_filtration_ranks(&ctx, r)?
        .iter()
        .map(|s| json!({ "l": s.l, "rank": count(&s.rank), "slope_offset": exact(&s.slope_offset) }))
        .collect();
    let forms_rows = (0..=ctx.n)
        .map(|i| {
            let (rank, degree) = deg_pushforward_forms(&ctx, i)?;
            Ok(json!({ "i": i, "rank": count(&rank), "degree": exact(&degree) }))
        })
        .collect::<frobstab::Result<Vec<Value>>>()?;
    let report = json!({
        "units": UNITS_ABSOLUTE,
        "m": a.m,
        "mu_pushforward": exact(&mu_pushforward(&ctx, &e.slope, a.m)?),
        "ledger": {
            "rank": count(&ledger.rank),
            "slope": exact(&ledger.slope),
            "degree": exact(&ledger.degree),
        },
        "canonical_filtration": filtration,
        "filtration_degree": exact(&filtration_degree(&ctx, r, &e.slope)?),
        "forms_pushforward": forms_rows,
    });
    Ok(Outcome::ok(report))
}

fn forms_cmd(a: &FormsArgs) -> CliResult<Outcome> {
    let table = forms_recurrence::<Rational>(a.n, a.p)?;
    let closed_agrees = (1..=a.n)
        .map(|i| forms_closed::<Rational>(a.n, a.p, i).map(|row| Some(&row) == table.row(i)))
        .collect::<frobstab::Result<Vec<bool>>>()?
        .into_iter()
        .all(|x| x);
    let mut report = serde_json::to_value(FormsTableJson::from(&table)).expect("serializable");
    let obj = report.as_object_mut().expect("object");
    obj.insert("units".into(), UNITS_MU_OMEGA.into());
    obj.insert("closed_form_agrees".into(), closed_agrees.into());
    if let Some(r_b) = a.r {
        let bound = forms::bound_bn_subsheaf::<Rational>(a.n, a.p, &BigUint::from(r_b), &num_traits::One::one())?;
        obj.insert(
            "bn_subsheaf_bound".into(),
            json!({
                "r_b": r_b,
                "quantity": "(μ(B) − μ(B^n)) / μ(Ω¹)",
                "value": exact(&bound),
                "citation": frobstab::Citation::PropBnX,
                "hypotheses": [],
                "forced": false,
            }),
        );
    }
    let exit = if closed_agrees { 0 } else { EXIT_INTERNAL };
    Ok(Outcome { report, exit })
}

fn check_zi_cmd(a: &CheckZiArgs) -> CliResult<Outcome> {
    let range: Vec<u64> = match a.i {
        Some(i) => vec![i],
        None => (1..a.n).collect(),
    };
    if range.is_empty() {
        return Err(Error::OutOfRange {
            what: "n",
            value: a.n.to_string(),
            range: "[2, ∞) (needs some 1 ≤ i < n)".into(),
        }
        .into());
    }
    let verdicts = range
        .iter()
        .map(|&i| {
            let v = check_zi_instability::<Rational>(a.n, a.p, i)?;
            let mut j = serde_json::to_value(ZiVerdictJson::from(&v)).expect("serializable");
            let obj = j.as_object_mut().expect("object");
            obj.insert("citation".into(), serde_json::to_value(frobstab::Citation::PropInstZiX).expect("tag"));
            obj.insert("alternating_term_positive".into(), forms::alternating_term_positive(&v).into());
            Ok(j)
        })
        .collect::<frobstab::Result<Vec<Value>>>()?;
    let z1 = if a.n >= 3 {
        match z1_hn::<Rational>(a.n, a.p) {
            Ok(poly) => json!({ "citation": frobstab::Citation::LemmaBxZx, "polygon": PolygonJson::from(&poly) }),
            Err(e) => json!({ "citation": frobstab::Citation::LemmaBxZx, "slope_order_violation": e.to_string() }),
        }
    } else {
        Value::Null
    };
    let report = json!({
        "units": UNITS_MU_OMEGA,
        "n": a.n,
        "p": a.p,
        "verdicts": verdicts,
        "z1_filtration": z1,
    });
    Ok(Outcome::ok(report))
}

fn hnp_cmd(a: &HnpArgs) -> CliResult<Outcome> {
    let profile = load_profile(&a.profile)?.normalize();
    let st = profile.stats();
    let poly = profile.polygon()?;
    let mut report = json!({
        "units": UNITS_ABSOLUTE,
        "normalized": ProfileJson::from(&profile),
        "stats": {
            "mu": exact(&st.mu),
            "mu_max": exact(&st.mu_max),
            "mu_min": exact(&st.mu_min),
            "instability": exact(&st.instability),
        },
        "polygon": PolygonJson::from(&poly),
    });
    if let Some(other) = &a.against {
        let q = load_profile(other)?.normalize().polygon()?;
        let order = match compare(&poly, &q)? {
            Some(std::cmp::Ordering::Greater) => "above",
            Some(std::cmp::Ordering::Less) => "below",
            Some(std::cmp::Ordering::Equal) => "equal",
            None => "incomparable",
        };
        report.as_object_mut().expect("object").insert(
            "against".into(),
            json!({
                "polygon": PolygonJson::from(&q),
                "dominates": dominates(&poly, &q)?,
                "dominated_by": dominates(&q, &poly)?,
                "order": order,
            }),
        );
    }
    Ok(Outcome::ok(report))
}

fn advisor_cmd(a: &AdvisorArgs) -> CliResult<Outcome> {
    let ctx = load_ctx(&a.ctx)?;
    let flags = AdvisorFlags {
        e_semistable: a.e_semistable,
        e_strongly_semistable: a.e_strongly_semistable,
        omega_mu_max_nonpositive: a.omega_mu_max_nonpositive,
    };
    let conclusions = stability_advisor(&ctx, flags);
    let report = json!({
        "context": ContextJson::from(&ctx),
        "flags": {
            "e_semistable": flags.e_semistable,
            "e_strongly_semistable": flags.e_strongly_semistable,
            "omega_mu_max_nonpositive": flags.omega_mu_max_nonpositive,
        },
        "conclusions": conclusions,
    });
    Ok(Outcome::ok(report))
}

fn selfcheck_cmd(a: &SelfcheckArgs) -> CliResult<Outcome> {
    let seed = selfcheck::seed_from_env()?;
    let report = selfcheck::run(a.grid, seed);
    let exit = if report.passed { 0 } else { EXIT_INTERNAL };
    Ok(Outcome {
        report: serde_json::to_value(&report).expect("serializable"),
        exit,
    })
}

/// Compact `(rank, slope)` list for counterexample messages.
pub fn profile_label(p: &SlopeProfile) -> Vec<(u64, String)> {
    p.blocks().iter().map(|b| (b.rank, format_exact(&b.slope))).collect()
}
