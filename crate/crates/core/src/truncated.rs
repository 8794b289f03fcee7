//! Truncated symmetric powers `T^l`: ranks, slope decompositions of
//! `T^l(⊕E_i)`, the greedy d-vector, and the instability bounds built on them.
//!
//! `T^l(V)` is the degree-`l` part of `Sym(V)` modulo `p`-th powers, so a
//! basis is indexed by exponent vectors with entries in `[0, p−1]` summing to
//! `l`. Ranks are computed two ways: by the alternating sum coming from the
//! Koszul-type resolution by `Sym^{l−qp} ⊗ ∧^q F^*`, and by direct counting.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hn::SlopeProfile;
use crate::rational::{binomial, bounded_compositions, require_prime, ExponentVector};
use crate::scalar::Scalar;

/// Validated `(r, p, l)` together with the two splittings of `l` used below:
/// `l = lp·p + (l − lp·p)` and the greedy `l = t·(p−1) + s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TlSpec {
    pub r: u64,
    pub p: u64,
    pub l: u64,
    pub lp: u64,
    pub t: u64,
    pub s: u64,
}

impl TlSpec {
    pub fn new(r: u64, p: u64, l: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::out_of_range("r", r, "[1, ∞)"));
        }
        require_prime(p)?;
        let top = r * (p - 1);
        if l > top {
            return Err(Error::out_of_range("l", l, format!("[0, {top}]")));
        }
        let t = l / (p - 1);
        Ok(TlSpec {
            r,
            p,
            l,
            lp: l / p,
            t,
            s: l - t * (p - 1),
        })
    }

    pub fn top_degree(&self) -> u64 {
        self.r * (self.p - 1)
    }
}

/// rank T^l of a rank-`r` sheaf: Σ_{q=0}^{⌊l/p⌋} (−1)^q C(r,q) C(r+l−qp−1, l−qp).
///
/// Zero beyond `l = r(p−1)`. `p` is not checked for primality here; the
/// formula is a counting identity for any `p ≥ 2`.
pub fn rank_tl(r: u64, p: u64, l: u64) -> BigUint {
    assert!(r >= 1 && p >= 2, "rank_tl needs r ≥ 1, p ≥ 2");
    let mut acc = BigInt::zero();
    for q in 0..=(l / p) {
        let rest = l - q * p;
        let term = BigInt::from(binomial(r, q as i64) * binomial(r + rest - 1, rest as i64));
        if q % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("alternating sum is a dimension")
}

/// Counts exponent vectors in `[0, p−1]^r` summing to `l`.
pub fn rank_tl_oracle(r: u64, p: u64, l: u64) -> BigUint {
    BigUint::from(bounded_compositions(l, &vec![p - 1; r as usize]).count())
}

/// Greedy d-vector `(p−1, …, p−1, s, 0, …, 0)` with `t = ⌊l/(p−1)⌋` leading
/// full entries and `s = l − t(p−1)`.
pub fn dvec(r: u64, p: u64, l: u64) -> Result<ExponentVector> {
    let spec = TlSpec::new(r, p, l)?;
    let mut v = vec![0u64; r as usize];
    for slot in v.iter_mut().take(spec.t as usize) {
        *slot = p - 1;
    }
    if spec.s > 0 {
        v[spec.t as usize] = spec.s;
    }
    Ok(ExponentVector(v))
}

/// The vector obtained by indexing with `⌊l/p⌋` instead of `⌊l/(p−1)⌋`:
/// `⌊l/p⌋` entries `p−1`, then `l − ⌊l/p⌋·p`, then zeros. Its entries do not
/// sum to `l` in general; kept only to report that discrepancy.
pub fn dvec_by_p_quotient(r: u64, p: u64, l: u64) -> Result<ExponentVector> {
    let spec = TlSpec::new(r, p, l)?;
    let mut v = vec![0u64; r as usize];
    let lead = (spec.lp as usize).min(v.len());
    for slot in v.iter_mut().take(lead) {
        *slot = p - 1;
    }
    if lead < v.len() {
        v[lead] = l - spec.lp * p;
    }
    Ok(ExponentVector(v))
}

/// `T^l(E)` split by slope: `slope → rank`, zero-rank pieces omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedDecomposition<S> {
    pub p: u64,
    pub l: u64,
    pieces: BTreeMap<S, BigUint>,
}

impl<S: Scalar> TruncatedDecomposition<S> {
    pub fn pieces(&self) -> &BTreeMap<S, BigUint> {
        &self.pieces
    }

    /// Pieces ordered by slope, highest first.
    pub fn pieces_descending(&self) -> impl Iterator<Item = (&S, &BigUint)> {
        self.pieces.iter().rev()
    }

    pub fn total_rank(&self) -> BigUint {
        self.pieces.values().sum()
    }

    pub fn mu_max(&self) -> &S {
        self.pieces.keys().next_back().expect("non-empty decomposition")
    }

    pub fn mu_min(&self) -> &S {
        self.pieces.keys().next().expect("non-empty decomposition")
    }

    pub fn slope(&self) -> S {
        let deg = self
            .pieces
            .iter()
            .fold(S::zero(), |acc, (mu, r)| acc + crate::rational::to_scalar::<S>(r) * mu.clone());
        deg / crate::rational::to_scalar(&self.total_rank())
    }
}

fn check_tl_range<S: Scalar>(profile: &SlopeProfile<S>, p: u64, l: u64) -> Result<u64> {
    require_prime(p)?;
    let r = profile.total_rank();
    if l > r * (p - 1) {
        return Err(Error::ZeroSheaf { r, p, l });
    }
    Ok(r)
}

/// Splits `T^l(⊕E_i)` into the summands `⊗_i T^{c_i}(E_i)`, grouped by
/// slope `Σ c_i μ_i`. Block `i` contributes only when `c_i ≤ r_i(p−1)`.
pub fn tl_decomposition<S: Scalar>(
    profile: &SlopeProfile<S>,
    p: u64,
    l: u64,
) -> Result<TruncatedDecomposition<S>> {
    check_tl_range(profile, p, l)?;
    let blocks = profile.blocks();
    let bounds: Vec<u64> = blocks.iter().map(|b| b.rank * (p - 1)).collect();
    let ranks: Vec<Vec<BigUint>> = blocks
        .iter()
        .zip(&bounds)
        .map(|(b, &top)| (0..=top.min(l)).map(|c| rank_tl(b.rank, p, c)).collect())
        .collect();
    let mut pieces: BTreeMap<S, BigUint> = BTreeMap::new();
    for c in bounded_compositions(l, &bounds) {
        let rank: BigUint = ranks
            .iter()
            .zip(c.iter())
            .map(|(row, &ci)| &row[ci as usize])
            .product();
        if rank.is_zero() {
            continue;
        }
        let slope = blocks
            .iter()
            .zip(c.iter())
            .fold(S::zero(), |acc, (b, &ci)| acc + S::from_u64(ci) * b.slope.clone());
        *pieces.entry(slope).or_insert_with(BigUint::zero) += rank;
    }
    Ok(TruncatedDecomposition { p, l, pieces })
}

/// `(μ_max, μ_min)` of `T^l(⊕E_i)` via the d-vector paired with unit slopes.
pub fn tl_extremes<S: Scalar>(profile: &SlopeProfile<S>, p: u64, l: u64) -> Result<(S, S)> {
    let r = check_tl_range(profile, p, l)?;
    let d = dvec(r, p, l)?;
    let x = profile.unit_slopes();
    let n = x.len();
    let mut hi = S::zero();
    let mut lo = S::zero();
    for (i, &di) in d.iter().enumerate() {
        if di == 0 {
            continue;
        }
        let w = S::from_u64(di);
        hi = hi + w.clone() * x[i].clone();
        lo = lo + w * x[n - 1 - i].clone();
    }
    Ok((hi, lo))
}

/// Exact I(T^l(⊕E_i)) = μ_max − μ_min.
pub fn instability_tl_exact<S: Scalar>(profile: &SlopeProfile<S>, p: u64, l: u64) -> Result<S> {
    let (hi, lo) = tl_extremes(profile, p, l)?;
    Ok(hi - lo)
}

/// `min{l, ⌊r/2⌋(p−1)}` as a scalar.
pub fn tl_bound_factor(r: u64, p: u64, l: u64) -> u64 {
    l.min((r / 2) * (p - 1))
}

/// `min{l, ⌊r/2⌋(p−1)} · I(E)`.
pub fn bound_tl2<S: Scalar>(profile: &SlopeProfile<S>, p: u64, l: u64) -> S {
    let r = profile.total_rank();
    S::from_u64(tl_bound_factor(r, p, l)) * profile.instability()
}

/// `min{l, ⌊r/2⌋(p−1)} · ((r−1)/p · max{0, L_max(Ω¹)} + I(E))`.
pub fn bound_instab_tl<S: Scalar>(r: u64, p: u64, l: u64, i_e: &S, lmax_omega: &S) -> S {
    let gap = S::from_u64(r - 1) / S::from_u64(p) * lmax_omega.max_with_zero() + i_e.clone();
    S::from_u64(tl_bound_factor(r, p, l)) * gap
}

/// Which row of the four-case table a given `(r, p, l)` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TlCase {
    /// `0 ≤ l ≤ ⌊r/2⌋(p−1)`: coefficient `l`.
    Low,
    /// `r` even, `r/2·(p−1) < l ≤ r(p−1)`: coefficient `r(p−1) − l`.
    EvenHigh,
    /// `r` odd, `⌊r/2⌋(p−1) < l ≤ (⌊r/2⌋+1)(p−1)`: coefficient `⌊r/2⌋(p−1)`.
    OddMiddle,
    /// `r` odd, `(⌊r/2⌋+1)(p−1) < l ≤ r(p−1)`: coefficient `r(p−1) − l`.
    OddHigh,
}

/// The case table for `Σ_{i ≤ ⌊r/2⌋} (d_i − d_{r−i+1})`, the coefficient of
/// `I(E)` in the Tl2 estimate before it is relaxed to `min{l, ⌊r/2⌋(p−1)}`.
///
/// The upper ends of `EvenHigh` and `OddHigh` are closed here so that
/// `l = r(p−1)` (coefficient 0) is covered.
pub fn tl2_case_coefficient(r: u64, p: u64, l: u64) -> Result<(TlCase, u64)> {
    let spec = TlSpec::new(r, p, l)?;
    let half = r / 2;
    let q = p - 1;
    let top = spec.top_degree();
    Ok(if l <= half * q {
        (TlCase::Low, l)
    } else if r.is_multiple_of(2) {
        (TlCase::EvenHigh, top - l)
    } else if l <= (half + 1) * q {
        (TlCase::OddMiddle, half * q)
    } else {
        (TlCase::OddHigh, top - l)
    })
}

/// `Σ_{i ≤ ⌊r/2⌋} (d_i − d_{r−i+1})` read off the d-vector directly.
pub fn dvec_mirror_gap(r: u64, p: u64, l: u64) -> Result<u64> {
    let d = dvec(r, p, l)?;
    let n = d.len();
    Ok((0..n / 2).map(|i| d[i] - d[n - 1 - i]).sum())
}

impl<S: Scalar> TruncatedDecomposition<S> {
    pub(crate) fn single(p: u64, l: u64, slope: S, rank: BigUint) -> Self {
        let mut pieces = BTreeMap::new();
        if !rank.is_zero() {
            pieces.insert(slope, rank);
        }
        TruncatedDecomposition { p, l, pieces }
    }
}

/// `T^l` of a single semistable block: one piece at slope `l·μ`.
pub fn tl_of_semistable<S: Scalar>(rank: u64, slope: &S, p: u64, l: u64) -> Result<TruncatedDecomposition<S>> {
    require_prime(p)?;
    if l > rank * (p - 1) {
        return Err(Error::ZeroSheaf { r: rank, p, l });
    }
    Ok(TruncatedDecomposition::single(
        p,
        l,
        S::from_u64(l) * slope.clone(),
        rank_tl(rank, p, l),
    ))
}

/// `Σ_l rank_tl(r, p, l)`; equals `p^r`.
pub fn total_truncated_dimension(r: u64, p: u64) -> BigUint {
    (0..=r * (p - 1)).map(|l| rank_tl(r, p, l)).sum()
}
