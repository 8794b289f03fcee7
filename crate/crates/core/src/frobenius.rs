//! Slope calculus for Frobenius pushforwards `F_*E` and the instability
//! upper bounds that feed on truncated symmetric powers of `Ω¹_X`.
//!
//! Every bound is an explicit formula in user-supplied invariants
//! (`μ(Ω¹)`, `L_max(Ω¹)`, `I(Ω¹)`, `I(E)`). Where a formula is only
//! meaningful under sign or semistability hypotheses, the hypotheses are
//! checked and reported; [`HypothesisMode::Force`] evaluates anyway.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::citation::Citation;
use crate::error::{Error, Result};
use crate::rational::{binomial, pow, require_prime, to_scalar};
use crate::scalar::Scalar;
use crate::truncated::{bound_instab_tl, rank_tl, tl_bound_factor};

/// The ambient variety `X` as far as the formulas need it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietyContext<S> {
    pub n: u64,
    pub p: u64,
    pub mu_omega: S,
    pub lmax_omega: Option<S>,
    pub i_omega: S,
    pub omega_semistable: bool,
    pub omega_strongly_semistable: bool,
}

impl<S: Scalar> VarietyContext<S> {
    pub fn new(
        n: u64,
        p: u64,
        mu_omega: S,
        lmax_omega: Option<S>,
        i_omega: S,
        omega_semistable: bool,
        omega_strongly_semistable: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::out_of_range("n", n, "[1, ∞)"));
        }
        require_prime(p)?;
        if i_omega.is_negative() {
            return Err(Error::InvalidContext("I(Ω¹) must be ≥ 0".into()));
        }
        let ctx = VarietyContext {
            n,
            p,
            mu_omega,
            lmax_omega,
            i_omega,
            omega_semistable,
            omega_strongly_semistable,
        };
        if ctx.omega_is_semistable() && !ctx.i_omega.is_zero() {
            return Err(Error::InvalidContext(
                "Ω¹ declared semistable but I(Ω¹) ≠ 0".into(),
            ));
        }
        Ok(ctx)
    }

    /// A context with only `(n, p, μ(Ω¹))` known and no stability flags.
    pub fn basic(n: u64, p: u64, mu_omega: S) -> Result<Self> {
        Self::new(n, p, mu_omega, None, S::zero(), false, false)
    }

    /// Strong semistability implies semistability.
    pub fn omega_is_semistable(&self) -> bool {
        self.omega_semistable || self.omega_strongly_semistable
    }

    /// Largest `l` with `T^l(Ω¹) ≠ 0`, i.e. `n(p−1)`.
    pub fn top_degree(&self) -> u64 {
        self.n * (self.p - 1)
    }

    fn lmax_clamped(&self) -> Result<S> {
        self.lmax_omega
            .as_ref()
            .map(Scalar::max_with_zero)
            .ok_or(Error::MissingInput("lmax_omega"))
    }
}

/// Rank, slope and instability of a sheaf, as bound inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafStats<S> {
    pub rank: BigUint,
    pub slope: S,
    pub instability: S,
}

impl<S: Scalar> SheafStats<S> {
    pub fn new(rank: impl Into<BigUint>, slope: S, instability: S) -> Result<Self> {
        let rank = rank.into();
        if rank.is_zero() {
            return Err(Error::out_of_range("rank", 0, "[1, ∞)"));
        }
        if instability.is_negative() {
            return Err(Error::out_of_range(
                "instability",
                crate::rational::format_exact(&instability),
                "[0, ∞)",
            ));
        }
        Ok(SheafStats {
            rank,
            slope,
            instability,
        })
    }

    pub fn is_semistable(&self) -> bool {
        self.instability.is_zero()
    }

    pub fn degree(&self) -> S {
        to_scalar::<S>(&self.rank) * self.slope.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisMode {
    Enforce,
    Force,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: String,
    pub satisfied: bool,
}

/// A bound together with what it rests on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport<S> {
    pub value: S,
    pub citation: Citation,
    pub hypotheses: Vec<HypothesisCheck>,
    /// Set when some hypothesis failed and the value was computed anyway.
    pub forced: bool,
}

impl<S> BoundReport<S> {
    pub fn hypotheses_satisfied(&self) -> bool {
        self.hypotheses.iter().all(|h| h.satisfied)
    }
}

fn gate(citation: Citation, checks: Vec<HypothesisCheck>, mode: HypothesisMode) -> Result<(Vec<HypothesisCheck>, bool)> {
    let failed: Vec<String> = checks
        .iter()
        .filter(|h| !h.satisfied)
        .map(|h| h.hypothesis.clone())
        .collect();
    match (failed.is_empty(), mode) {
        (true, _) => Ok((checks, false)),
        (false, HypothesisMode::Force) => Ok((checks, true)),
        (false, HypothesisMode::Enforce) => Err(Error::Hypothesis { citation, failed }),
    }
}

fn check(hypothesis: &str, satisfied: bool) -> HypothesisCheck {
    HypothesisCheck {
        hypothesis: hypothesis.to_string(),
        satisfied,
    }
}

/// `μ(F^m_* E) = n(p^m − 1)/(2p^m)·μ(Ω¹) + μ(E)/p^m`.
pub fn mu_pushforward<S: Scalar>(ctx: &VarietyContext<S>, mu_e: &S, m: u64) -> Result<S> {
    if m == 0 {
        return Err(Error::out_of_range("m", m, "[1, ∞)"));
    }
    let pm: S = to_scalar(&pow(ctx.p, m));
    let n = S::from_u64(ctx.n);
    let two = S::from_u64(2);
    Ok(n * (pm.clone() - S::one()) / (two * pm.clone()) * ctx.mu_omega.clone() + mu_e.clone() / pm)
}

/// Rank, slope and degree of `F_*E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardLedger<S> {
    pub rank: BigUint,
    pub slope: S,
    pub degree: S,
}

pub fn pushforward_stats<S: Scalar>(ctx: &VarietyContext<S>, stats: &SheafStats<S>) -> PushforwardLedger<S> {
    let rank = pow(ctx.p, ctx.n) * &stats.rank;
    let slope = mu_pushforward(ctx, &stats.slope, 1).expect("m = 1");
    let degree = to_scalar::<S>(&rank) * slope.clone();
    PushforwardLedger { rank, slope, degree }
}

/// One graded piece `E ⊗ T^l(Ω¹)` of the canonical filtration of `F^*F_*E`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiltrationStep<S> {
    pub l: u64,
    pub rank: BigUint,
    /// `l·μ(Ω¹)`: the slope of the piece minus `μ(E)`, when Ω¹ is a single
    /// semistable block.
    pub slope_offset: S,
}

pub fn canonical_filtration_ranks<S: Scalar>(ctx: &VarietyContext<S>, r_e: u64) -> Result<Vec<FiltrationStep<S>>> {
    if r_e == 0 {
        return Err(Error::out_of_range("r_e", r_e, "[1, ∞)"));
    }
    Ok((0..=ctx.top_degree())
        .map(|l| FiltrationStep {
            l,
            rank: rank_tl(ctx.n, ctx.p, l) * r_e,
            slope_offset: S::from_u64(l) * ctx.mu_omega.clone(),
        })
        .collect())
}

/// `deg(F^*F_*E)` summed over the canonical filtration:
/// `Σ_l r·rank T^l(Ω¹)·(μ(E) + l·μ(Ω¹))`. Equals `p·deg(F_*E)`.
pub fn filtration_degree<S: Scalar>(ctx: &VarietyContext<S>, r_e: u64, mu_e: &S) -> Result<S> {
    Ok(canonical_filtration_ranks(ctx, r_e)?
        .into_iter()
        .fold(S::zero(), |acc, step| {
            acc + to_scalar::<S>(&step.rank) * (mu_e.clone() + step.slope_offset)
        }))
}

/// Rank and degree coefficient of `F_*Ω^i` in units of `μ(Ω¹)`:
/// rank `C(n,i)·p^n`, degree `n·C(n,i)p^{n−1}(p−1)/2 + i·C(n,i)p^{n−1}`.
pub fn deg_pushforward_forms_coeff<S: Scalar>(n: u64, p: u64, i: u64) -> Result<(BigUint, S)> {
    if i > n {
        return Err(Error::out_of_range("i", i, format!("[0, {n}]")));
    }
    let c = binomial(n, i as i64);
    let rank = &c * pow(p, n);
    let cp: S = to_scalar(&(&c * pow(p, n - 1)));
    let coeff = S::from_u64(n) * cp.clone() * S::from_u64(p - 1) / S::from_u64(2) + S::from_u64(i) * cp;
    Ok((rank, coeff))
}

/// Rank and absolute degree of `F_*Ω^i`.
pub fn deg_pushforward_forms<S: Scalar>(ctx: &VarietyContext<S>, i: u64) -> Result<(BigUint, S)> {
    let (rank, coeff) = deg_pushforward_forms_coeff::<S>(ctx.n, ctx.p, i)?;
    Ok((rank, coeff * ctx.mu_omega.clone()))
}

/// `(r−1)/p·max{0, L_max(Ω¹)} + I(E)`: the bound on `L_max(E) − L_min(E)`.
pub fn bound_langer_gap<S: Scalar>(r: u64, p: u64, i_e: &S, lmax_omega: &S) -> S {
    S::from_u64(r.saturating_sub(1)) / S::from_u64(p) * lmax_omega.max_with_zero() + i_e.clone()
}

/// `(Σ r_i − m)/p·max{0, L_max(Ω¹)} + Σ I(E_i)`: instability of `⊗E_i`.
pub fn bound_tensor<S: Scalar>(parts: &[SheafStats<S>], p: u64, lmax_omega: &S) -> Result<S> {
    if parts.is_empty() {
        return Err(Error::MissingInput("tensor factors"));
    }
    let ranks: BigUint = parts.iter().map(|e| &e.rank).sum();
    let excess: S = to_scalar::<S>(&ranks) - S::from_u64(parts.len() as u64);
    let instab = parts.iter().fold(S::zero(), |acc, e| acc + e.instability.clone());
    Ok(excess / S::from_u64(p) * lmax_omega.max_with_zero() + instab)
}

/// `p^{n−1}·rk(E)·max_l I(E ⊗ T^l(Ω¹))`, given the per-`l` instabilities.
pub fn bound_sun<S: Scalar>(
    ctx: &VarietyContext<S>,
    r_e: &BigUint,
    i_tensor_by_l: &[S],
    mode: HypothesisMode,
) -> Result<BoundReport<S>> {
    let want = ctx.top_degree() as usize + 1;
    if i_tensor_by_l.len() != want {
        return Err(Error::out_of_range(
            "per-l instability count",
            i_tensor_by_l.len(),
            format!("{{{want}}}"),
        ));
    }
    if i_tensor_by_l.iter().any(Signed::is_negative) {
        return Err(Error::out_of_range("per-l instability", "negative", "[0, ∞)"));
    }
    let (hypotheses, forced) = gate(
        Citation::SunPushforward,
        vec![check("μ(Ω¹) ≥ 0", !ctx.mu_omega.is_negative())],
        mode,
    )?;
    let worst = i_tensor_by_l.iter().max().cloned().expect("non-empty");
    let value = to_scalar::<S>(&(pow(ctx.p, ctx.n - 1) * r_e)) * worst;
    Ok(BoundReport {
        value,
        citation: Citation::SunPushforward,
        hypotheses,
        forced,
    })
}

/// Case `Ω¹` semistable with `μ(Ω¹) ≤ 0`, `E` semistable:
/// `I(F_*E) ≤ −n(p−1)p^{n−1}·rk(E)·μ(Ω¹)/2`.
pub fn bound_pushforward_case_one<S: Scalar>(
    ctx: &VarietyContext<S>,
    e: &SheafStats<S>,
    mode: HypothesisMode,
) -> Result<BoundReport<S>> {
    let (hypotheses, forced) = gate(
        Citation::TheoremDiImMinus,
        vec![
            check("Ω¹ slope semistable", ctx.omega_is_semistable()),
            check("μ(Ω¹) ≤ 0", !ctx.mu_omega.is_positive()),
            check("E slope semistable", e.is_semistable()),
        ],
        mode,
    )?;
    let scale = S::from_u64(ctx.n * (ctx.p - 1)) * to_scalar::<S>(&(pow(ctx.p, ctx.n - 1) * &e.rank));
    let value = -(scale * ctx.mu_omega.clone()) / S::from_u64(2);
    Ok(BoundReport {
        value,
        citation: Citation::TheoremDiImMinus,
        hypotheses,
        forced,
    })
}

/// Case `μ(Ω¹) ≥ 0`. The bound is assembled per `l`:
///
/// `B_l = (rank T^l(Ω¹) + r − 2)/p·L + min{l, ⌊n/2⌋(p−1)}·((n−1)/p·L + I(Ω¹)) + I(E)`
///
/// with `L = max{0, L_max(Ω¹)}`, and the total is `p^{n−1}·r·max_l B_l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseTwoBound<S> {
    pub per_l: Vec<S>,
    pub report: BoundReport<S>,
}

pub fn bound_pushforward_case_two<S: Scalar>(
    ctx: &VarietyContext<S>,
    e: &SheafStats<S>,
    mode: HypothesisMode,
) -> Result<CaseTwoBound<S>> {
    let lmax = ctx.lmax_clamped()?;
    let (hypotheses, forced) = gate(
        Citation::TheoremInstabDirIm,
        vec![check("μ(Ω¹) ≥ 0", !ctx.mu_omega.is_negative())],
        mode,
    )?;
    let p = S::from_u64(ctx.p);
    let r: S = to_scalar(&e.rank);
    let two = S::from_u64(2);
    let omega_gap = S::from_u64(ctx.n - 1) / p.clone() * lmax.clone() + ctx.i_omega.clone();
    let per_l: Vec<S> = (0..=ctx.top_degree())
        .map(|l| {
            let rank_term: S = to_scalar(&rank_tl(ctx.n, ctx.p, l));
            (rank_term + r.clone() - two.clone()) / p.clone() * lmax.clone()
                + S::from_u64(tl_bound_factor(ctx.n, ctx.p, l)) * omega_gap.clone()
                + e.instability.clone()
        })
        .collect();
    let worst = per_l.iter().max().cloned().expect("l = 0 always present");
    let value = to_scalar::<S>(&(pow(ctx.p, ctx.n - 1) * &e.rank)) * worst;
    Ok(CaseTwoBound {
        per_l,
        report: BoundReport {
            value,
            citation: Citation::TheoremInstabDirIm,
            hypotheses,
            forced,
        },
    })
}

/// The same per-`l` quantities assembled from the tensor and truncated-power
/// bounds instead of the closed display: `I(T^l(Ω¹))` bounded via
/// [`bound_instab_tl`], then `E ⊗ T^l(Ω¹)` via [`bound_tensor`].
pub fn case_two_per_l_via_tensor<S: Scalar>(ctx: &VarietyContext<S>, e: &SheafStats<S>) -> Result<Vec<S>> {
    let lmax = ctx
        .lmax_omega
        .clone()
        .ok_or(Error::MissingInput("lmax_omega"))?;
    (0..=ctx.top_degree())
        .map(|l| {
            let tl = SheafStats {
                rank: rank_tl(ctx.n, ctx.p, l),
                slope: S::from_u64(l) * ctx.mu_omega.clone(),
                instability: bound_instab_tl(ctx.n, ctx.p, l, &ctx.i_omega, &lmax),
            };
            bound_tensor(&[tl, e.clone()], ctx.p, &lmax)
        })
        .collect()
}

/// Stability assertions the caller makes about `E` and `Ω¹` beyond the context.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdvisorFlags {
    pub e_semistable: bool,
    pub e_strongly_semistable: bool,
    /// The caller asserts `μ_max(Ω¹) ≤ 0`.
    pub omega_mu_max_nonpositive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conclusion {
    pub conclusion: String,
    pub citation: Citation,
}

/// Lists the sufficient stability criteria that fire under the given flags.
/// Purely qualitative.
pub fn stability_advisor<S: Scalar>(ctx: &VarietyContext<S>, flags: AdvisorFlags) -> Vec<Conclusion> {
    let mut out = Vec::new();
    let mut say = |conclusion: &str, citation| {
        out.push(Conclusion {
            conclusion: conclusion.to_string(),
            citation,
        })
    };
    let e_ss = flags.e_semistable || flags.e_strongly_semistable;
    let mu_zero = ctx.mu_omega.is_zero();
    let mu_nonneg = !ctx.mu_omega.is_negative();

    if flags.omega_mu_max_nonpositive {
        say(
            "every slope semistable sheaf on X is slope strongly semistable",
            Citation::MehtaRamanathan,
        );
        if flags.e_semistable && !flags.e_strongly_semistable {
            say("E is slope strongly semistable", Citation::MehtaRamanathan);
        }
    }
    if ctx.omega_strongly_semistable {
        say(
            "T^l(Ω¹) is slope strongly semistable for 0 ≤ l ≤ n(p−1)",
            Citation::PropSemiStabTl,
        );
    }
    if flags.e_strongly_semistable {
        say(
            "T^l(E) is slope strongly semistable for 0 ≤ l ≤ rk(E)(p−1)",
            Citation::PropSemiStabTl,
        );
    }
    if ctx.omega_strongly_semistable && mu_nonneg && flags.e_strongly_semistable {
        say("F_*E is slope semistable", Citation::PropFroDirIm);
    }
    if ctx.omega_is_semistable() && mu_zero && e_ss {
        say("F_*E is slope strongly semistable", Citation::PropFroDirIm);
    }
    if ctx.omega_is_semistable() && mu_zero {
        say(
            "B^i (1 ≤ i ≤ n) and Z^i (1 ≤ i ≤ n−1) are slope strongly semistable",
            Citation::PropBxZx0,
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn ctx(n: u64, p: u64, mu: Rational) -> VarietyContext<Rational> {
        VarietyContext::basic(n, p, mu).unwrap()
    }

    fn stats(r: u64, mu: Rational, i: Rational) -> SheafStats<Rational> {
        SheafStats::new(r, mu, i).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(VarietyContext::new(0, 3, q(0, 1), None, q(0, 1), false, false).is_err());
        assert!(VarietyContext::new(2, 4, q(0, 1), None, q(0, 1), false, false).is_err());
        assert!(VarietyContext::new(2, 3, q(0, 1), None, q(-1, 1), false, false).is_err());
        assert!(VarietyContext::new(2, 3, q(1, 1), None, q(1, 1), true, false).is_err());
        assert!(VarietyContext::new(2, 3, q(1, 1), None, q(1, 1), false, true).is_err());
        assert!(VarietyContext::new(2, 3, q(1, 1), None, q(1, 1), false, false).is_ok());
    }

    #[test]
    fn mu_pushforward_examples() {
        assert_eq!(mu_pushforward(&ctx(1, 2, q(2, 1)), &q(0, 1), 1).unwrap(), q(1, 2));
        let flat = ctx(3, 5, q(0, 1));
        for m in 1..4 {
            assert_eq!(mu_pushforward(&flat, &q(7, 3), m).unwrap(), q(7, 3) / q(5i64.pow(m as u32), 1));
        }
        let c = ctx(2, 3, q(5, 7));
        let once = mu_pushforward(&c, &q(-1, 2), 1).unwrap();
        assert_eq!(mu_pushforward(&c, &once, 1).unwrap(), mu_pushforward(&c, &q(-1, 2), 2).unwrap());
        assert!(mu_pushforward(&c, &q(0, 1), 0).is_err());
    }

    #[test]
    fn pushforward_stats_examples() {
        let mu = q(4, 3);
        let c = ctx(2, 3, mu.clone());
        let led = pushforward_stats(&c, &stats(2, mu.clone(), q(0, 1)));
        assert_eq!(led.rank, BigUint::from(18u32));
        assert_eq!(led.slope, mu);
        assert_eq!(led.degree, q(18, 1) * mu.clone());
        assert_eq!(deg_pushforward_forms(&c, 1).unwrap(), (BigUint::from(18u32), led.degree));

        let led = pushforward_stats(&ctx(4, 5, q(0, 1)), &stats(3, q(0, 1), q(0, 1)));
        assert!(led.slope.is_zero());

        let led = pushforward_stats(&ctx(1, 2, q(2, 1)), &stats(1, q(0, 1), q(0, 1)));
        assert_eq!((led.rank, led.slope, led.degree), (BigUint::from(2u32), q(1, 2), q(1, 1)));
    }

    #[test]
    fn canonical_filtration_examples() {
        let mu = q(3, 2);
        let steps = canonical_filtration_ranks(&ctx(1, 3, mu.clone()), 1).unwrap();
        let got: Vec<_> = steps.iter().map(|s| (s.l, s.rank.clone(), s.slope_offset.clone())).collect();
        let one = BigUint::from(1u32);
        assert_eq!(
            got,
            vec![(0, one.clone(), q(0, 1)), (1, one.clone(), mu.clone()), (2, one, q(2, 1) * mu)]
        );
        let ranks: Vec<_> = canonical_filtration_ranks(&ctx(2, 2, q(1, 1)), 1)
            .unwrap()
            .into_iter()
            .map(|s| s.rank)
            .collect();
        assert_eq!(ranks, [1u32, 2, 1].map(BigUint::from).to_vec());
        for (n, p, r) in [(3, 5, 2), (2, 7, 3), (4, 2, 1)] {
            let total: BigUint = canonical_filtration_ranks(&ctx(n, p, q(1, 1)), r)
                .unwrap()
                .into_iter()
                .map(|s| s.rank)
                .sum();
            assert_eq!(total, pow(p, n) * r);
        }
    }

    #[test]
    fn forms_degree_examples() {
        for (n, p) in [(1, 2), (2, 3), (3, 5)] {
            let (rank, coeff) = deg_pushforward_forms_coeff::<Rational>(n, p, 0).unwrap();
            assert_eq!(rank, pow(p, n));
            let want = q((n * p.pow(n as u32 - 1) * (p - 1)) as i64, 2);
            assert_eq!(coeff, want);
        }
        assert_eq!(
            deg_pushforward_forms_coeff::<Rational>(2, 3, 1).unwrap(),
            (BigUint::from(18u32), q(18, 1))
        );
        let zero = ctx(3, 3, q(0, 1));
        for i in 0..=3 {
            assert!(deg_pushforward_forms(&zero, i).unwrap().1.is_zero());
        }
        assert!(deg_pushforward_forms(&zero, 4).is_err());
    }

    #[test]
    fn simple_bound_examples() {
        assert_eq!(bound_langer_gap(1, 3, &q(2, 5), &q(9, 1)), q(2, 5));
        assert_eq!(bound_langer_gap(4, 3, &q(2, 5), &q(-9, 1)), q(2, 5));
        assert_eq!(bound_langer_gap(4, 2, &q(1, 2), &q(3, 1)), q(5, 1));

        let lines = [stats(1, q(0, 1), q(1, 3)), stats(1, q(2, 1), q(1, 2))];
        assert_eq!(bound_tensor(&lines, 5, &q(8, 1)).unwrap(), q(5, 6));
        let single = stats(3, q(0, 1), q(1, 4));
        assert_eq!(
            bound_tensor(std::slice::from_ref(&single), 3, &q(2, 1)).unwrap(),
            bound_langer_gap(3, 3, &q(1, 4), &q(2, 1))
        );
        let two = [stats(2, q(0, 1), q(1, 1)), stats(3, q(0, 1), q(0, 1))];
        assert_eq!(bound_tensor(&two, 3, &q(3, 1)).unwrap(), q(4, 1));
        assert!(bound_tensor::<Rational>(&[], 3, &q(0, 1)).is_err());
    }

    #[test]
    fn sun_bound_examples() {
        let c = ctx(1, 3, q(1, 1));
        let two = BigUint::from(2u32);
        let zeros = vec![q(0, 1); 3];
        assert!(bound_sun(&c, &two, &zeros, HypothesisMode::Enforce).unwrap().value.is_zero());
        let entries = [q(0, 1), q(1, 2), q(1, 1)];
        let rep = bound_sun(&c, &two, &entries, HypothesisMode::Enforce).unwrap();
        assert_eq!(rep.value, q(2, 1));
        assert_eq!(rep.citation, Citation::SunPushforward);
        assert!(bound_sun(&c, &two, &entries[..2], HypothesisMode::Enforce).is_err());

        let neg = ctx(1, 3, q(-1, 1));
        assert!(matches!(
            bound_sun(&neg, &two, &entries, HypothesisMode::Enforce),
            Err(Error::Hypothesis { .. })
        ));
        let forced = bound_sun(&neg, &two, &entries, HypothesisMode::Force).unwrap();
        assert!(forced.forced && !forced.hypotheses_satisfied());
    }

    fn ss_ctx(n: u64, p: u64, mu: Rational) -> VarietyContext<Rational> {
        VarietyContext::new(n, p, mu, Some(q(0, 1)), q(0, 1), true, false).unwrap()
    }

    #[test]
    fn case_one_examples() {
        let e = stats(1, q(0, 1), q(0, 1));
        let rep = bound_pushforward_case_one(&ss_ctx(3, 5, q(0, 1)), &e, HypothesisMode::Enforce).unwrap();
        assert!(rep.value.is_zero());
        let rep = bound_pushforward_case_one(&ss_ctx(1, 2, q(-2, 1)), &e, HypothesisMode::Enforce).unwrap();
        assert_eq!(rep.value, q(1, 1));
        let e2 = stats(2, q(0, 1), q(0, 1));
        let rep2 = bound_pushforward_case_one(&ss_ctx(1, 2, q(-2, 1)), &e2, HypothesisMode::Enforce).unwrap();
        assert_eq!(rep2.value, q(2, 1) * rep.value);

        let positive = ss_ctx(2, 3, q(1, 1));
        assert!(matches!(
            bound_pushforward_case_one(&positive, &e, HypothesisMode::Enforce),
            Err(Error::Hypothesis { citation: Citation::TheoremDiImMinus, .. })
        ));
        let unstable_e = stats(2, q(0, 1), q(1, 1));
        assert!(bound_pushforward_case_one(&ss_ctx(1, 2, q(-2, 1)), &unstable_e, HypothesisMode::Enforce).is_err());
        let forced = bound_pushforward_case_one(&positive, &e, HypothesisMode::Force).unwrap();
        assert!(forced.forced);
        assert_eq!(forced.value, q(-6, 1));
    }

    #[test]
    fn case_two_examples() {
        let c = ss_ctx(3, 5, q(0, 1));
        let r = bound_pushforward_case_two(&c, &stats(2, q(0, 1), q(0, 1)), HypothesisMode::Enforce).unwrap();
        assert!(r.report.value.is_zero());

        let c = VarietyContext::new(1, 2, q(0, 1), Some(q(0, 1)), q(0, 1), false, false).unwrap();
        let r = bound_pushforward_case_two(&c, &stats(1, q(0, 1), q(5, 3)), HypothesisMode::Enforce).unwrap();
        assert_eq!(r.per_l, vec![q(5, 3), q(5, 3)]);
        assert_eq!(r.report.value, q(5, 3));

        let c = VarietyContext::new(2, 2, q(1, 1), Some(q(2, 1)), q(1, 1), false, false).unwrap();
        let e = stats(1, q(0, 1), q(0, 1));
        let r = bound_pushforward_case_two(&c, &e, HypothesisMode::Enforce).unwrap();
        // Substitution by hand: (rank + 1 − 2)/2·2 + min{l,1}·(1/2·2 + 1).
        let by_hand: Vec<Rational> = [(1, 0), (2, 1), (1, 2)]
            .into_iter()
            .map(|(rank, l): (i64, i64)| q(rank - 1, 2) * q(2, 1) + q(l.min(1), 1) * (q(1, 2) * q(2, 1) + q(1, 1)))
            .collect();
        assert_eq!(r.per_l, by_hand);
        assert_eq!(r.per_l, vec![q(0, 1), q(3, 1), q(2, 1)]);
        assert_eq!(r.report.value, q(6, 1));
        assert_eq!(case_two_per_l_via_tensor(&c, &e).unwrap(), r.per_l);

        let no_lmax = ctx(2, 2, q(1, 1));
        assert_eq!(
            bound_pushforward_case_two(&no_lmax, &e, HypothesisMode::Enforce),
            Err(Error::MissingInput("lmax_omega"))
        );
        let neg = VarietyContext::new(2, 2, q(-1, 1), Some(q(2, 1)), q(0, 1), false, false).unwrap();
        assert!(bound_pushforward_case_two(&neg, &e, HypothesisMode::Enforce).is_err());
    }

    #[test]
    fn advisor_examples() {
        let c = VarietyContext::new(2, 3, q(0, 1), None, q(0, 1), true, true).unwrap();
        let flags = AdvisorFlags {
            e_semistable: true,
            ..Default::default()
        };
        let out = stability_advisor(&c, flags);
        assert!(out
            .iter()
            .any(|c| c.conclusion == "F_*E is slope strongly semistable" && c.citation == Citation::PropFroDirIm));

        assert!(stability_advisor(&ctx(2, 3, q(0, 1)), AdvisorFlags::default()).is_empty());

        let c = VarietyContext::new(2, 3, q(1, 1), None, q(0, 1), false, true).unwrap();
        let out = stability_advisor(
            &c,
            AdvisorFlags {
                e_strongly_semistable: true,
                ..Default::default()
            },
        );
        assert!(out.iter().any(|c| c.conclusion == "F_*E is slope semistable"));
        assert!(out.iter().any(|c| c.citation == Citation::PropSemiStabTl && c.conclusion.starts_with("T^l(Ω¹)")));
        assert!(!out.iter().any(|c| c.citation == Citation::PropBxZx0));
    }

    #[test]
    fn case_one_boundary_agrees_with_advisor() {
        let c = ss_ctx(3, 3, q(0, 1));
        let e = stats(4, q(1, 2), q(0, 1));
        let rep = bound_pushforward_case_one(&c, &e, HypothesisMode::Enforce).unwrap();
        assert!(rep.value.is_zero());
        let out = stability_advisor(
            &c,
            AdvisorFlags {
                e_semistable: true,
                ..Default::default()
            },
        );
        assert!(out.iter().any(|c| c.conclusion == "F_*E is slope strongly semistable"));
    }

    proptest! {
        #[test]
        fn filtration_degree_is_p_times_pushforward_degree(
            n in 1u64..=4,
            p in prop::sample::select(vec![2u64, 3, 5]),
            r in 1u64..4,
            (a, b, c, d) in (-20i64..20, 1i64..7, -20i64..20, 1i64..7),
        ) {
            let (mu_e, mu_omega) = (q(a, b), q(c, d));
            let cx = ctx(n, p, mu_omega);
            let led = pushforward_stats(&cx, &stats(r, mu_e.clone(), q(0, 1)));
            prop_assert_eq!(led.rank.clone(), pow(p, n) * r);
            let sum = filtration_degree(&cx, r, &mu_e).unwrap();
            prop_assert_eq!(sum, q(p as i64, 1) * led.degree);
        }

        #[test]
        fn iteration_coherence(m1 in 1u64..4, m2 in 1u64..4, a in -9i64..9, b in 1i64..5, c in -9i64..9) {
            let cx = ctx(3, 3, q(c, 2));
            let inner = mu_pushforward(&cx, &q(a, b), m1).unwrap();
            prop_assert_eq!(mu_pushforward(&cx, &inner, m2).unwrap(), mu_pushforward(&cx, &q(a, b), m1 + m2).unwrap());
        }

        #[test]
        fn bounds_monotone_in_instability(
            i1 in 0i64..10, di in 0i64..10, lmax in -5i64..5, n in 1u64..4,
            p in prop::sample::select(vec![2u64, 3, 5]),
        ) {
            let (lo, hi) = (q(i1, 3), q(i1 + di, 3));
            prop_assert!(bound_langer_gap(3, p, &lo, &q(lmax, 1)) <= bound_langer_gap(3, p, &hi, &q(lmax, 1)));
            for l in 0..=n * (p - 1) {
                prop_assert!(bound_instab_tl(n, p, l, &lo, &q(lmax, 1)) <= bound_instab_tl(n, p, l, &hi, &q(lmax, 1)));
            }
            let tl = |i: &Rational| bound_tensor(&[stats(2, q(0, 1), i.clone()), stats(3, q(0, 1), q(1, 1))], p, &q(lmax, 1)).unwrap();
            prop_assert!(tl(&lo) <= tl(&hi));
            let cx = VarietyContext::new(n, p, q(1, 1), Some(q(lmax, 1)), q(i1, 2), false, false).unwrap();
            let c2 = |i: &Rational| bound_pushforward_case_two(&cx, &stats(2, q(0, 1), i.clone()), HypothesisMode::Enforce).unwrap().report.value;
            prop_assert!(c2(&lo) <= c2(&hi));
            let cx_hi = VarietyContext::new(n, p, q(1, 1), Some(q(lmax, 1)), q(i1 + di, 2), false, false).unwrap();
            let e = stats(2, q(0, 1), lo.clone());
            prop_assert!(
                bound_pushforward_case_two(&cx, &e, HypothesisMode::Enforce).unwrap().report.value
                    <= bound_pushforward_case_two(&cx_hi, &e, HypothesisMode::Enforce).unwrap().report.value
            );
            let sun = |x: &Rational| {
                let v = vec![x.clone(); (n * (p - 1) + 1) as usize];
                bound_sun(&cx, &BigUint::from(2u32), &v, HypothesisMode::Enforce).unwrap().value
            };
            prop_assert!(sun(&lo) <= sun(&hi));
        }

        #[test]
        fn case_two_collapses_without_omega_terms(
            n in 1u64..=4, p in prop::sample::select(vec![2u64, 3, 5]), r in 1u64..5, i in 0i64..12,
        ) {
            let cx = VarietyContext::new(n, p, q(1, 1), Some(q(0, 1)), q(0, 1), false, false).unwrap();
            let e = stats(r, q(0, 1), q(i, 5));
            let two = bound_pushforward_case_two(&cx, &e, HypothesisMode::Enforce).unwrap();
            let direct = q((p.pow(n as u32 - 1) * r) as i64, 1) * q(i, 5);
            prop_assert_eq!(two.report.value.clone(), direct);
            let constant = vec![q(i, 5); (n * (p - 1) + 1) as usize];
            let sun = bound_sun(&cx, &BigUint::from(r), &constant, HypothesisMode::Enforce).unwrap();
            prop_assert_eq!(sun.value, two.report.value);
        }
    }
}
