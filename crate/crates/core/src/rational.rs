//! Exact rational I/O and the combinatorial primitives the rest of the crate
//! is built on: binomial coefficients, bounded compositions, primality.

use std::ops::Deref;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Formats an exact value as `"num/den"` in lowest terms; zero is `"0/1"`.
pub fn format_exact<S: Scalar>(value: &S) -> String {
    let (n, d) = value.to_fraction();
    format!("{n}/{d}")
}

/// Parses `"num/den"` (optional leading minus, optional surrounding
/// whitespace) or a bare integer `"n"`. Non-reduced input is accepted and
/// reduced.
pub fn parse_exact<S: Scalar>(text: &str) -> Result<S> {
    let bad = || Error::ParseRational(text.to_string());
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (parse_int(n.trim()).ok_or_else(bad)?, parse_int(d.trim()).ok_or_else(bad)?),
        None => (parse_int(t).ok_or_else(bad)?, BigInt::one()),
    };
    S::from_fraction(num, den).ok_or_else(bad)
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// C(n, k); zero outside `0 ≤ k ≤ n`.
///
/// Multiplicative formula: after step `i` the accumulator is C(n−k+i, i),
/// so every division is exact.
pub fn binomial(n: u64, k: i64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// Σ_{j=0}^{n} (−1)^j · j · C(n, j). Vanishes for every n ≥ 2; equals −1 at n = 1.
pub fn alt_weighted_binomial_sum(n: u64) -> BigInt {
    (0..=n).fold(BigInt::zero(), |acc, j| {
        let term = BigInt::from(binomial(n, j as i64)) * j;
        if j % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub(crate) fn pow(base: u64, exp: u64) -> BigUint {
    num_traits::pow(BigUint::from(base), exp as usize)
}

pub(crate) fn to_scalar<S: Scalar>(n: &BigUint) -> S {
    S::from_bigint(&BigInt::from(n.clone()))
}

/// A vector of non-negative exponents, one per slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(pub Vec<u64>);

impl ExponentVector {
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn into_inner(self) -> Vec<u64> {
        self.0
    }
}

impl Deref for ExponentVector {
    type Target = [u64];

    fn deref(&self) -> &[u64] {
        &self.0
    }
}

impl From<Vec<u64>> for ExponentVector {
    fn from(v: Vec<u64>) -> Self {
        ExponentVector(v)
    }
}

/// Lazily enumerates every `(k_1, …, k_m)` with `Σ k_i = l` and
/// `0 ≤ k_i ≤ bounds[i]`, in lexicographic order.
pub fn bounded_compositions(l: u64, bounds: &[u64]) -> BoundedCompositions {
    BoundedCompositions::new(l, bounds)
}

#[derive(Debug, Clone)]
pub struct BoundedCompositions {
    bounds: Vec<u64>,
    // capacity[i] = Σ_{j ≥ i} bounds[j]
    capacity: Vec<u64>,
    current: Option<Vec<u64>>,
}

impl BoundedCompositions {
    fn new(l: u64, bounds: &[u64]) -> Self {
        let mut capacity = vec![0u64; bounds.len() + 1];
        for i in (0..bounds.len()).rev() {
            capacity[i] = capacity[i + 1].saturating_add(bounds[i]);
        }
        let mut it = BoundedCompositions {
            bounds: bounds.to_vec(),
            capacity,
            current: None,
        };
        if l <= it.capacity[0] {
            let mut v = vec![0; bounds.len()];
            it.fill_smallest(&mut v, 0, l);
            it.current = Some(v);
        }
        it
    }

    /// Lexicographically smallest placement of `rest` into slots `from..`.
    fn fill_smallest(&self, v: &mut [u64], from: usize, mut rest: u64) {
        for (slot, &cap_after) in v[from..].iter_mut().zip(&self.capacity[from + 1..]) {
            let k = rest.saturating_sub(cap_after);
            *slot = k;
            rest -= k;
        }
        debug_assert_eq!(rest, 0);
    }

    fn advance(&self, v: &mut [u64]) -> bool {
        let m = v.len();
        if m < 2 {
            return false;
        }
        let mut suffix = v[m - 1];
        for i in (0..m - 1).rev() {
            if v[i] < self.bounds[i] && suffix > 0 {
                v[i] += 1;
                self.fill_smallest(v, i + 1, suffix - 1);
                return true;
            }
            suffix += v[i];
        }
        false
    }
}

impl Iterator for BoundedCompositions {
    type Item = ExponentVector;

    fn next(&mut self) -> Option<ExponentVector> {
        let out = self.current.take()?;
        let mut succ = out.clone();
        if self.advance(&mut succ) {
            self.current = Some(succ);
        }
        Some(ExponentVector(out))
    }
}
