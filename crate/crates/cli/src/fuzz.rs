//! Random inputs for the self-check suites and the acceptance run.

use rand::seq::SliceRandom;
use rand::Rng;

use frobstab::{Block, Rational, Scalar, SlopeProfile};

/// Slopes are drawn as `num/den` with `|num| ≤ SLOPE_NUM`, `1 ≤ den ≤ SLOPE_DEN`.
pub const SLOPE_NUM: i64 = 12;
pub const SLOPE_DEN: i64 = 6;

pub fn slope<R: Rng>(rng: &mut R) -> Rational {
    Rational::ratio(rng.gen_range(-SLOPE_NUM..=SLOPE_NUM), rng.gen_range(1..=SLOPE_DEN))
}

/// `r` distinct slopes, strictly decreasing.
pub fn strict_slopes<R: Rng>(rng: &mut R, r: usize) -> Vec<Rational> {
    let mut out: Vec<Rational> = Vec::with_capacity(r);
    while out.len() < r {
        let s = slope(rng);
        if !out.contains(&s) {
            out.push(s);
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Random positive composition of `total` into `parts` pieces.
fn positive_parts<R: Rng>(rng: &mut R, total: u64, parts: usize) -> Vec<u64> {
    let mut cuts: Vec<u64> = (1..total).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<u64> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain([total]) {
        out.push(c - prev);
        prev = c;
    }
    out
}

/// A profile of at most `max_blocks` blocks and total rank in `[1, max_rank]`,
/// normalized (equal slopes merged).
pub fn profile<R: Rng>(rng: &mut R, max_blocks: usize, max_rank: u64) -> SlopeProfile {
    let total = rng.gen_range(1..=max_rank);
    let k = rng.gen_range(1..=max_blocks.min(total as usize));
    let blocks = positive_parts(rng, total, k)
        .into_iter()
        .map(|rank| Block::new(rank, slope(rng)))
        .collect();
    SlopeProfile::new(blocks).expect("positive ranks").normalize()
}

/// A profile of exactly rank `r`.
pub fn profile_of_rank<R: Rng>(rng: &mut R, max_blocks: usize, r: u64) -> SlopeProfile {
    let k = rng.gen_range(1..=max_blocks.min(r as usize));
    let blocks = positive_parts(rng, r, k)
        .into_iter()
        .map(|rank| Block::new(rank, slope(rng)))
        .collect();
    SlopeProfile::new(blocks).expect("positive ranks").normalize()
}

/// Splits a block of rank ≥ 2 into a higher and a lower piece. `None` when
/// every block has rank 1.
pub fn refinement<R: Rng>(rng: &mut R, profile: &SlopeProfile) -> Option<SlopeProfile> {
    let splittable: Vec<usize> = profile
        .blocks()
        .iter()
        .enumerate()
        .filter(|(_, b)| b.rank >= 2)
        .map(|(i, _)| i)
        .collect();
    let &index = splittable.choose(rng)?;
    let block = &profile.blocks()[index];
    let upper_rank = rng.gen_range(1..block.rank);
    let lift = Rational::ratio(rng.gen_range(0..=SLOPE_NUM), rng.gen_range(1..=SLOPE_DEN));
    let refined = profile
        .refine(index, upper_rank, block.slope.clone() + lift)
        .expect("valid split");
    Some(refined.normalize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_their_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let p = profile(&mut rng, 4, 6);
            assert!(p.is_normal());
            assert!((1..=6).contains(&p.total_rank()));
            assert!(p.blocks().len() <= 4);
            let q = profile_of_rank(&mut rng, 3, 5);
            assert_eq!(q.total_rank(), 5);
            let s = strict_slopes(&mut rng, 5);
            assert!(s.windows(2).all(|w| w[0] > w[1]));
            if let Some(r) = refinement(&mut rng, &p) {
                assert_eq!(r.total_rank(), p.total_rank());
                assert_eq!(r.total_degree(), p.total_degree());
            }
        }
    }
}
