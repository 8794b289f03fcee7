//! Ranks and degrees of the sheaves `B^i` (locally exact forms) and `Z^i`
//! (locally closed forms) inside `F_*Ω^i`, plus the slope comparisons built
//! on them.
//!
//! Degrees are stored as coefficients of `μ(Ω¹)`: every formula here is
//! linear in it. The table produced by [`forms_recurrence`] is the reference;
//! [`forms_closed`] evaluates the closed forms so they can be checked against
//! it.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::frobenius::deg_pushforward_forms_coeff;
use crate::hn::{HnPolygon, SlopeProfile};
use crate::rational::{binomial, pow, require_prime, to_scalar};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormsRow<S> {
    pub i: u64,
    pub rank_b: BigUint,
    pub rank_z: BigUint,
    pub degb_coeff: S,
    pub degz_coeff: S,
}

impl<S: Scalar> FormsRow<S> {
    pub fn mu_b_coeff(&self) -> Option<S> {
        (!self.rank_b.is_zero()).then(|| self.degb_coeff.clone() / to_scalar(&self.rank_b))
    }

    pub fn mu_z_coeff(&self) -> S {
        self.degz_coeff.clone() / to_scalar(&self.rank_z)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormsTable<S> {
    pub n: u64,
    pub p: u64,
    pub rows: Vec<FormsRow<S>>,
}

impl<S: Scalar> FormsTable<S> {
    pub fn row(&self, i: u64) -> Option<&FormsRow<S>> {
        self.rows.get(i as usize)
    }

    /// Row-by-row check of `Z^i/B^i ≅ Ω^i`: rank difference `C(n,i)`, degree
    /// difference `i·C(n,i)`. Returns the first failing `i`.
    pub fn cartier_violation(&self) -> Option<u64> {
        self.rows.iter().find_map(|row| {
            let c = binomial(self.n, row.i as i64);
            let rank_ok = &row.rank_b + &c == row.rank_z;
            let deg_ok = row.degz_coeff.clone() - row.degb_coeff.clone()
                == S::from_u64(row.i) * to_scalar::<S>(&c);
            (!(rank_ok && deg_ok)).then_some(row.i)
        })
    }
}

fn check_np(n: u64, p: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::out_of_range("n", n, "[1, ∞)"));
    }
    require_prime(p)
}

/// Builds the table from the two exact sequences
/// `0 → Z^{i−1} → F_*Ω^{i−1} → B^i → 0` and `0 → B^i → Z^i → Ω^i → 0`,
/// starting from `B^0 = 0`, `Z^0 = O_X`.
pub fn forms_recurrence<S: Scalar>(n: u64, p: u64) -> Result<FormsTable<S>> {
    check_np(n, p)?;
    let mut rows = vec![FormsRow {
        i: 0,
        rank_b: BigUint::zero(),
        rank_z: BigUint::one(),
        degb_coeff: S::zero(),
        degz_coeff: S::zero(),
    }];
    for i in 1..=n {
        let prev = rows.last().expect("row 0 present");
        let (push_rank, push_deg) = deg_pushforward_forms_coeff::<S>(n, p, i - 1)?;
        let rank_b = push_rank - &prev.rank_z;
        let degb_coeff = push_deg - prev.degz_coeff.clone();
        let c = binomial(n, i as i64);
        let rank_z = &rank_b + &c;
        let degz_coeff = degb_coeff.clone() + S::from_u64(i) * to_scalar::<S>(&c);
        rows.push(FormsRow {
            i,
            rank_b,
            rank_z,
            degb_coeff,
            degz_coeff,
        });
    }
    Ok(FormsTable { n, p, rows })
}

/// `Σ_{j=1}^{i−1} (−1)^{i+j+1} j·C(n,j)`, the alternating part of `deg B^i`
/// before the factor `(p^{n−1} − 1)`.
pub fn alternating_form_sum(n: u64, i: u64) -> BigInt {
    (1..i).fold(BigInt::zero(), |acc, j| {
        let term = BigInt::from(binomial(n, j as i64)) * j;
        if (i + j + 1).is_multiple_of(2) {
            acc + term
        } else {
            acc - term
        }
    })
}

/// Closed forms for row `i ≥ 1`:
/// `rk B^i = C(n−1,i−1)(p^n − 1)` and
/// `deg B^i = n·C(n−1,i−1)p^{n−1}(p−1)/2 + Σ_{j=1}^{i−1}(−1)^{i+j+1} j·C(n,j)(p^{n−1} − 1)`,
/// with `Z^i` obtained by adding `Ω^i`.
pub fn forms_closed<S: Scalar>(n: u64, p: u64, i: u64) -> Result<FormsRow<S>> {
    check_np(n, p)?;
    if i == 0 || i > n {
        return Err(Error::out_of_range("i", i, format!("[1, {n}]")));
    }
    let c_prev = binomial(n - 1, i as i64 - 1);
    let rank_b = &c_prev * (pow(p, n) - 1u32);
    let pn1 = pow(p, n - 1);
    let lead: S = S::from_u64(n) * to_scalar::<S>(&(&c_prev * &pn1)) * S::from_u64(p - 1) / S::from_u64(2);
    let alt = S::from_bigint(&(alternating_form_sum(n, i) * BigInt::from(pn1 - 1u32)));
    let degb_coeff = lead + alt;
    let c = binomial(n, i as i64);
    Ok(FormsRow {
        i,
        rank_z: &rank_b + &c,
        rank_b,
        degz_coeff: degb_coeff.clone() + S::from_u64(i) * to_scalar::<S>(&c),
        degb_coeff,
    })
}

/// Slope comparison between `B^i ⊂ Z^i` and the quotient `Ω^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZiVerdict<S> {
    pub n: u64,
    pub p: u64,
    pub i: u64,
    /// `μ(B^i)/μ(Ω¹)` from the recurrence table.
    pub mu_b_coeff: S,
    /// `μ(Ω^i)/μ(Ω¹) = i`.
    pub mu_omega_i_coeff: S,
    /// `μ(B^i) > μ(Ω^i)`, which destabilizes `Z^i` when `μ(Ω¹) > 0`.
    pub exact_destabilizes: bool,
    /// `n(p^n − p)/(2(p^n − 1))`, the simplified first-term ratio as printed.
    pub paper_sufficient_lhs: S,
    pub paper_sufficient_holds: bool,
    /// `n·p^{n−1}(p−1)/(2(p^n − 1))`, the first-term ratio recomputed.
    pub exact_first_term_ratio: S,
    pub exact_first_term_holds: bool,
    /// The alternating sum `Σ_{j=1}^{i−1}(−1)^{i+j+1} j·C(n,j)(p^{n−1} − 1)`
    /// divided by `C(n−1,i−1)(p^n − 1)`; claimed positive for `i ≥ 2`.
    pub alternating_term: S,
    /// `1 ≤ i < n/2`, the range where `Z^i` is claimed never semistable.
    pub in_claimed_range: bool,
    /// The printed and recomputed first-term ratios disagree on `> i`.
    pub first_term_conflict: bool,
}

pub fn check_zi_instability<S: Scalar>(n: u64, p: u64, i: u64) -> Result<ZiVerdict<S>> {
    check_np(n, p)?;
    if i == 0 || i >= n {
        return Err(Error::out_of_range("i", i, format!("[1, {}]", n.saturating_sub(1))));
    }
    let table = forms_recurrence::<S>(n, p)?;
    let row = table.row(i).expect("1 ≤ i < n");
    let mu_b_coeff = row.mu_b_coeff().expect("rank B^i > 0 for i ≥ 1");
    let i_s = S::from_u64(i);
    let pn: S = to_scalar(&pow(p, n));
    let pn1: S = to_scalar(&pow(p, n - 1));
    let two = S::from_u64(2);
    let n_s = S::from_u64(n);
    let denom = two * (pn.clone() - S::one());
    let paper_sufficient_lhs = n_s.clone() * (pn.clone() - S::from_u64(p)) / denom.clone();
    let exact_first_term_ratio = n_s * pn1 * S::from_u64(p - 1) / denom;
    let c_prev: S = to_scalar(&binomial(n - 1, i as i64 - 1));
    let alternating_term = S::from_bigint(&(alternating_form_sum(n, i) * (BigInt::from(pow(p, n - 1)) - 1)))
        / (c_prev * (pn - S::one()));
    let paper_sufficient_holds = paper_sufficient_lhs > i_s;
    let exact_first_term_holds = exact_first_term_ratio > i_s;
    Ok(ZiVerdict {
        n,
        p,
        i,
        exact_destabilizes: mu_b_coeff > i_s,
        mu_b_coeff,
        mu_omega_i_coeff: i_s,
        paper_sufficient_lhs,
        paper_sufficient_holds,
        exact_first_term_ratio,
        exact_first_term_holds,
        alternating_term,
        in_claimed_range: 2 * i < n,
        first_term_conflict: paper_sufficient_holds != exact_first_term_holds,
    })
}

/// The two-step filtration `0 ⊂ B^1 ⊂ Z^1` as an HN polygon in `μ(Ω¹)` units.
///
/// Fails when `n < 3`, or when `μ(B^1) ≤ μ(Ω¹)` so that the filtration would
/// not be slope-ordered.
pub fn z1_hn<S: Scalar>(n: u64, p: u64) -> Result<HnPolygon<S>> {
    if n < 3 {
        return Err(Error::out_of_range("n", n, "[3, ∞)"));
    }
    let table = forms_recurrence::<S>(n, p)?;
    let row = table.row(1).expect("n ≥ 1");
    let mu_b = row.mu_b_coeff().expect("rank B^1 = p^n − 1 > 0");
    let mu_omega = S::one();
    if mu_b <= mu_omega {
        return Err(Error::SlopeOrder(format!(
            "μ(B^1) = {}·μ(Ω¹) is not above μ(Ω¹) for n = {n}, p = {p}",
            crate::rational::format_exact(&mu_b)
        )));
    }
    let rank_b = row
        .rank_b
        .to_u64()
        .ok_or_else(|| Error::RankOverflow(row.rank_b.to_string()))?;
    SlopeProfile::from_pairs([(rank_b, mu_b), (n, mu_omega)])?.polygon()
}

/// Upper bound on `μ(B) − μ(B^n)` for a subsheaf `B ⊂ F_*ω_X` of rank `r_b`:
/// `−n(p−1)(p^n − r_b − 1) / (2p(p^n − 1)·r_b) · μ(Ω¹)`.
pub fn bound_bn_subsheaf<S: Scalar>(n: u64, p: u64, r_b: &BigUint, mu_omega: &S) -> Result<S> {
    check_np(n, p)?;
    let top = pow(p, n) - 1u32;
    if r_b.is_zero() || *r_b > top {
        return Err(Error::out_of_range("r_b", r_b, format!("[1, {top}]")));
    }
    let gap = S::from_bigint(&(BigInt::from(top.clone()) - BigInt::from(r_b.clone())));
    let num = S::from_u64(n * (p - 1)) * gap;
    let den = S::from_u64(2 * p) * to_scalar::<S>(&top) * to_scalar::<S>(r_b);
    Ok(-(num / den) * mu_omega.clone())
}

/// `μ(B^i)` and `μ(Z^i)` in `μ(Ω¹)` units vanish when every degree
/// coefficient is scaled by `μ(Ω¹) = 0`; kept as a helper for reports.
pub fn absolute_degrees<S: Scalar>(table: &FormsTable<S>, mu_omega: &S) -> Vec<(u64, S, S)> {
    table
        .rows
        .iter()
        .map(|r| {
            (
                r.i,
                r.degb_coeff.clone() * mu_omega.clone(),
                r.degz_coeff.clone() * mu_omega.clone(),
            )
        })
        .collect()
}

/// Whether the alternating term is positive whenever it is present (`i ≥ 2`).
pub fn alternating_term_positive<S: Scalar>(v: &ZiVerdict<S>) -> bool {
    v.i < 2 || v.alternating_term.is_positive()
}
