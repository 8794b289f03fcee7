//! Harder–Narasimhan slope profiles, their polygons, and the Shatz order.
//!
//! A [`SlopeProfile`] models a direct sum of semistable pieces `⊕E_i` as a list
//! of `(rank, slope)` blocks. Its HN-normal form has strictly decreasing
//! slopes, and the associated [`HnPolygon`] is the chain of cumulative
//! `(rank, degree)` points starting at the origin.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block<S> {
    pub rank: u64,
    pub slope: S,
}

impl<S: Scalar> Block<S> {
    pub fn new(rank: u64, slope: S) -> Self {
        Block { rank, slope }
    }

    pub fn degree(&self) -> S {
        S::from_u64(self.rank) * self.slope.clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeProfile<S> {
    blocks: Vec<Block<S>>,
}

/// μ, μ_max, μ_min and I = μ_max − μ_min of a profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileStats<S> {
    pub mu: S,
    pub mu_max: S,
    pub mu_min: S,
    pub instability: S,
}

impl<S: Scalar> SlopeProfile<S> {
    pub fn new(blocks: Vec<Block<S>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::EmptyProfile);
        }
        if let Some(index) = blocks.iter().position(|b| b.rank == 0) {
            return Err(Error::ZeroRankBlock { index });
        }
        Ok(SlopeProfile { blocks })
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u64, S)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(r, s)| Block::new(r, s)).collect())
    }

    /// A single semistable block.
    pub fn semistable(rank: u64, slope: S) -> Result<Self> {
        Self::new(vec![Block::new(rank, slope)])
    }

    pub fn blocks(&self) -> &[Block<S>] {
        &self.blocks
    }

    pub fn total_rank(&self) -> u64 {
        self.blocks.iter().map(|b| b.rank).sum()
    }

    pub fn total_degree(&self) -> S {
        self.blocks.iter().fold(S::zero(), |acc, b| acc + b.degree())
    }

    pub fn is_normal(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].slope > w[1].slope)
    }

    /// Merges equal slopes and sorts descending. Idempotent.
    pub fn normalize(&self) -> Self {
        let mut blocks = self.blocks.clone();
        blocks.sort_by(|a, b| b.slope.cmp(&a.slope));
        let mut merged: Vec<Block<S>> = Vec::with_capacity(blocks.len());
        for b in blocks {
            match merged.last_mut() {
                Some(last) if last.slope == b.slope => last.rank += b.rank,
                _ => merged.push(b),
            }
        }
        SlopeProfile { blocks: merged }
    }

    pub fn stats(&self) -> ProfileStats<S> {
        let total = S::from_u64(self.total_rank());
        let mu = self.total_degree() / total;
        let mu_max = self.blocks.iter().map(|b| &b.slope).max().cloned().expect("non-empty");
        let mu_min = self.blocks.iter().map(|b| &b.slope).min().cloned().expect("non-empty");
        let instability = mu_max.clone() - mu_min.clone();
        ProfileStats {
            mu,
            mu_max,
            mu_min,
            instability,
        }
    }

    pub fn instability(&self) -> S {
        self.stats().instability
    }

    /// Expands every block into `rank` copies of its slope, sorted descending.
    pub fn unit_slopes(&self) -> Vec<S> {
        let mut out: Vec<S> = self
            .blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.slope.clone(), b.rank as usize))
            .collect();
        out.sort_by(|a, b| b.cmp(a));
        out
    }

    /// Replaces block `index` by two blocks with the same total rank and degree.
    ///
    /// `upper_rank` copies take slope `upper_slope ≥ μ`; the remainder takes
    /// whatever slope keeps the degree fixed (necessarily `≤ μ`).
    pub fn refine(&self, index: usize, upper_rank: u64, upper_slope: S) -> Result<Self> {
        let block = self
            .blocks
            .get(index)
            .ok_or_else(|| Error::out_of_range("block index", index, format!("[0, {})", self.blocks.len())))?;
        if upper_rank == 0 || upper_rank >= block.rank {
            return Err(Error::out_of_range(
                "upper rank",
                upper_rank,
                format!("[1, {})", block.rank),
            ));
        }
        if upper_slope < block.slope {
            return Err(Error::SlopeOrder(
                "refinement must split off a piece of slope ≥ the block slope".into(),
            ));
        }
        let lower_rank = block.rank - upper_rank;
        let lower_slope =
            (block.degree() - S::from_u64(upper_rank) * upper_slope.clone()) / S::from_u64(lower_rank);
        let mut blocks = self.blocks.clone();
        blocks.splice(
            index..=index,
            [Block::new(upper_rank, upper_slope), Block::new(lower_rank, lower_slope)],
        );
        Ok(SlopeProfile { blocks })
    }
}

/// Vertex chain `(0,0) = v_0, v_1, …` of cumulative rank and degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HnPolygon<S> {
    vertices: Vec<(u64, S)>,
}

impl<S: Scalar> HnPolygon<S> {
    /// Validates a raw vertex chain: starts at the origin, strictly increasing
    /// ranks, strictly decreasing segment slopes.
    pub fn from_vertices(vertices: Vec<(u64, S)>) -> Result<Self> {
        match vertices.first() {
            Some((0, d)) if d.is_zero() => {}
            _ => {
                return Err(Error::out_of_range(
                    "first vertex",
                    "non-origin",
                    "{(0, 0)}",
                ))
            }
        }
        if vertices.len() < 2 {
            return Err(Error::EmptyProfile);
        }
        if vertices.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::out_of_range("vertex ranks", "non-increasing", "strictly increasing"));
        }
        let poly = HnPolygon { vertices };
        if poly.segment_slopes().windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::NotNormalized);
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[(u64, S)] {
        &self.vertices
    }

    pub fn total_rank(&self) -> u64 {
        self.vertices.last().map(|v| v.0).unwrap_or(0)
    }

    pub fn total_degree(&self) -> S {
        self.vertices.last().map(|v| v.1.clone()).unwrap_or_else(S::zero)
    }

    pub fn segment_slopes(&self) -> Vec<S> {
        self.vertices
            .windows(2)
            .map(|w| (w[1].1.clone() - w[0].1.clone()) / S::from_u64(w[1].0 - w[0].0))
            .collect()
    }

    /// Height of the piecewise-linear chain at `x ∈ [0, total_rank]`.
    pub fn height_at(&self, x: u64) -> S {
        let seg = self
            .vertices
            .windows(2)
            .find(|w| x <= w[1].0)
            .expect("x within [0, total_rank]");
        let (x0, y0) = (&seg[0].0, &seg[0].1);
        let (x1, y1) = (&seg[1].0, &seg[1].1);
        y0.clone() + (y1.clone() - y0.clone()) * S::from_u64(x - x0) / S::from_u64(x1 - x0)
    }

    /// Drops vertices that sit on a straight continuation of their neighbours.
    pub fn simplified(&self) -> Self {
        let mut out: Vec<(u64, S)> = vec![self.vertices[0].clone()];
        let slopes = self.segment_slopes();
        for (i, v) in self.vertices.iter().enumerate().skip(1) {
            let interior = i < slopes.len();
            if interior && slopes[i - 1] == slopes[i] {
                continue;
            }
            out.push(v.clone());
        }
        HnPolygon { vertices: out }
    }
}

impl<S: Scalar> SlopeProfile<S> {
    /// Cumulative polygon of an HN-normal profile.
    pub fn polygon(&self) -> Result<HnPolygon<S>> {
        if !self.is_normal() {
            return Err(Error::NotNormalized);
        }
        let mut vertices = Vec::with_capacity(self.blocks.len() + 1);
        let (mut rank, mut degree) = (0u64, S::zero());
        vertices.push((rank, degree.clone()));
        for b in &self.blocks {
            rank += b.rank;
            degree = degree + b.degree();
            vertices.push((rank, degree.clone()));
        }
        Ok(HnPolygon { vertices })
    }
}

/// True iff `p` lies on or above `q` at every rank in `[0, total_rank]`.
///
/// Both chains are piecewise linear, so comparing at the union of their vertex
/// ranks decides the question exactly.
pub fn dominates<S: Scalar>(p: &HnPolygon<S>, q: &HnPolygon<S>) -> Result<bool> {
    if p.total_rank() != q.total_rank() {
        return Err(Error::RankMismatch {
            left: p.total_rank(),
            right: q.total_rank(),
        });
    }
    let mut xs: Vec<u64> = p.vertices.iter().chain(&q.vertices).map(|v| v.0).collect();
    xs.sort_unstable();
    xs.dedup();
    Ok(xs.into_iter().all(|x| p.height_at(x) >= q.height_at(x)))
}

/// [`dominates`], additionally requiring both polygons to end at the same degree.
pub fn dominates_same_endpoint<S: Scalar>(p: &HnPolygon<S>, q: &HnPolygon<S>) -> Result<bool> {
    if p.total_degree() != q.total_degree() {
        return Err(Error::DegreeMismatch {
            left: crate::rational::format_exact(&p.total_degree()),
            right: crate::rational::format_exact(&q.total_degree()),
        });
    }
    dominates(p, q)
}

/// Compares two polygons in the dominance order, when they are comparable.
pub fn compare<S: Scalar>(p: &HnPolygon<S>, q: &HnPolygon<S>) -> Result<Option<Ordering>> {
    let pq = dominates(p, q)?;
    let qp = dominates(q, p)?;
    Ok(match (pq, qp) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Greater),
        (false, true) => Some(Ordering::Less),
        (false, false) => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn prof(pairs: &[(u64, i64, i64)]) -> SlopeProfile<Rational> {
        SlopeProfile::from_pairs(pairs.iter().map(|&(r, n, d)| (r, q(n, d)))).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(prof(&[(2, 1, 1), (3, 1, 1)]).normalize(), prof(&[(5, 1, 1)]));
        assert_eq!(prof(&[(1, 0, 1), (1, 2, 1)]).normalize(), prof(&[(1, 2, 1), (1, 0, 1)]));
        assert_eq!(
            prof(&[(1, 1, 2), (2, 1, 2), (1, -1, 3)]).normalize(),
            prof(&[(3, 1, 2), (1, -1, 3)])
        );
    }

    #[test]
    fn empty_and_zero_rank_rejected() {
        assert_eq!(SlopeProfile::<Rational>::new(vec![]), Err(Error::EmptyProfile));
        assert_eq!(
            SlopeProfile::from_pairs([(1, q(0, 1)), (0, q(1, 1))]),
            Err(Error::ZeroRankBlock { index: 1 })
        );
    }

    #[test]
    fn stats_examples() {
        let s = prof(&[(4, 3, 2)]).stats();
        assert_eq!((s.mu, s.mu_max, s.mu_min, s.instability), (q(3, 2), q(3, 2), q(3, 2), q(0, 1)));

        let s = prof(&[(1, 1, 1), (1, -1, 1)]).stats();
        assert_eq!((s.mu, s.mu_max, s.mu_min, s.instability), (q(0, 1), q(1, 1), q(-1, 1), q(2, 1)));

        let s = prof(&[(2, 5, 3), (3, 1, 6)]).stats();
        assert_eq!(s.mu, (q(10, 3) + q(1, 2)) / q(5, 1));
        assert_eq!(s.mu, q(23, 30));
        assert_eq!(s.instability, q(3, 2));
    }

    #[test]
    fn polygon_examples() {
        let v = |pairs: &[(u64, i64)]| pairs.iter().map(|&(r, d)| (r, q(d, 1))).collect::<Vec<_>>();
        assert_eq!(prof(&[(2, 1, 1)]).polygon().unwrap().vertices(), v(&[(0, 0), (2, 2)]));
        assert_eq!(
            prof(&[(1, 2, 1), (1, 0, 1)]).polygon().unwrap().vertices(),
            v(&[(0, 0), (1, 2), (2, 2)])
        );
        assert_eq!(
            prof(&[(2, 3, 2), (1, -1, 1)]).polygon().unwrap().vertices(),
            v(&[(0, 0), (2, 3), (3, 2)])
        );
        assert_eq!(prof(&[(1, 0, 1), (1, 2, 1)]).polygon(), Err(Error::NotNormalized));
    }

    #[test]
    fn dominance_examples() {
        let p = prof(&[(1, 1, 1), (1, -1, 1)]).polygon().unwrap();
        let qq = prof(&[(2, 0, 1)]).polygon().unwrap();
        assert!(dominates(&p, &p).unwrap());
        assert!(dominates(&p, &qq).unwrap());
        assert!(!dominates(&qq, &p).unwrap());

        let p = prof(&[(1, 2, 1), (1, 0, 1)]).polygon().unwrap();
        let qq = prof(&[(1, 1, 1), (1, 1, 1)]).normalize().polygon().unwrap();
        assert!(dominates(&p, &qq).unwrap());

        let r3 = prof(&[(3, 0, 1)]).polygon().unwrap();
        assert_eq!(dominates(&p, &r3), Err(Error::RankMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn endpoint_variant() {
        let p = prof(&[(2, 1, 1)]).polygon().unwrap();
        let lower = prof(&[(2, 0, 1)]).polygon().unwrap();
        assert!(dominates(&p, &lower).unwrap());
        assert!(matches!(dominates_same_endpoint(&p, &lower), Err(Error::DegreeMismatch { .. })));
        assert_eq!(compare(&p, &lower).unwrap(), Some(Ordering::Greater));
    }

    #[test]
    fn raw_vertices_validated() {
        assert!(HnPolygon::from_vertices(vec![(0, q(0, 1)), (2, q(3, 1)), (3, q(2, 1))]).is_ok());
        assert!(HnPolygon::from_vertices(vec![(1, q(0, 1)), (2, q(3, 1))]).is_err());
        assert!(HnPolygon::from_vertices(vec![(0, q(0, 1)), (1, q(0, 1)), (2, q(3, 1))]).is_err());
    }

    #[test]
    fn refine_keeps_rank_and_degree() {
        let p = prof(&[(3, 1, 1), (1, -2, 1)]);
        let r = p.refine(0, 1, q(2, 1)).unwrap();
        assert_eq!(r, prof(&[(1, 2, 1), (2, 1, 2), (1, -2, 1)]));
        assert_eq!(r.total_degree(), p.total_degree());
        assert!(p.refine(0, 3, q(2, 1)).is_err());
        assert!(p.refine(0, 1, q(0, 1)).is_err());
    }

    fn arb_profile(max_rank: u64) -> impl Strategy<Value = SlopeProfile<Rational>> {
        proptest::collection::vec((1u64..=3, -6i64..=6, 1i64..=3), 1..=4).prop_filter_map(
            "total rank bound",
            move |raw| {
                let p = SlopeProfile::from_pairs(raw.into_iter().map(|(r, n, d)| (r, q(n, d)))).ok()?;
                (p.total_rank() <= max_rank).then_some(p)
            },
        )
    }

    /// Profiles of exactly total rank `r`: block ranks are clipped to fit and
    /// the last block absorbs any remainder.
    fn of_rank(r: u64) -> impl Strategy<Value = SlopeProfile<Rational>> {
        proptest::collection::vec((1u64..=3, -4i64..=4, 1i64..=2), 1..=4).prop_map(move |raw| {
            let mut left = r;
            let mut blocks = Vec::new();
            for (rank, n, d) in raw {
                if left == 0 {
                    break;
                }
                let take = rank.min(left);
                left -= take;
                blocks.push((take, q(n, d)));
            }
            blocks.last_mut().unwrap().0 += left;
            SlopeProfile::from_pairs(blocks).unwrap()
        })
    }

    proptest! {
        #[test]
        fn normalize_invariants(p in arb_profile(8)) {
            let n = p.normalize();
            prop_assert!(n.is_normal());
            prop_assert_eq!(n.normalize(), n.clone());
            prop_assert_eq!(n.total_rank(), p.total_rank());
            prop_assert_eq!(n.total_degree(), p.total_degree());
            prop_assert_eq!(n.instability(), p.instability());
            prop_assert_eq!(p.instability().is_zero(), n.blocks().len() == 1);
            let poly = n.polygon().unwrap();
            prop_assert_eq!(poly.height_at(p.total_rank()), p.total_degree());
            prop_assert!(poly.segment_slopes().windows(2).all(|w| w[0] > w[1]));
        }

        #[test]
        fn dominance_is_a_partial_order(
            (a, b, c) in (1u64..=8).prop_flat_map(|r| (of_rank(r), of_rank(r), of_rank(r)))
        ) {
            let (pa, pb, pc) = (
                a.normalize().polygon().unwrap(),
                b.normalize().polygon().unwrap(),
                c.normalize().polygon().unwrap(),
            );
            prop_assert!(dominates(&pa, &pa).unwrap());
            if dominates(&pa, &pb).unwrap() && dominates(&pb, &pa).unwrap() {
                prop_assert_eq!(pa.simplified(), pb.simplified());
            }
            if dominates(&pa, &pb).unwrap() && dominates(&pb, &pc).unwrap() {
                prop_assert!(dominates(&pa, &pc).unwrap());
            }
        }

        #[test]
        fn refinement_rises(
            p in arb_profile(8),
            idx in 0usize..4,
            cut in 1u64..8,
            bump_n in 0i64..6,
            bump_d in 1i64..4,
        ) {
            let n = p.normalize();
            let idx = idx % n.blocks().len();
            let block = &n.blocks()[idx];
            prop_assume!(block.rank >= 2);
            let cut = 1 + cut % (block.rank - 1);
            let refined = n.refine(idx, cut, block.slope.clone() + q(bump_n, bump_d)).unwrap();
            let coarse = n.polygon().unwrap();
            let fine = refined.normalize().polygon().unwrap();
            prop_assert!(dominates(&fine, &coarse).unwrap());
            prop_assert!(refined.instability() >= n.instability());
        }
    }
}
