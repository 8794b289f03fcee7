//! Batch oracle-equivalence runs over a parameter grid.
//!
//! Suites run on scoped worker threads, each with its own ChaCha stream
//! derived from one seed, and the report is assembled in a fixed order, so
//! the output depends only on the grid and the seed.

use std::thread;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use frobstab::forms::{
    alternating_term_positive, bound_bn_subsheaf, check_zi_instability, forms_closed, forms_recurrence,
};
use frobstab::frobenius::{
    bound_pushforward_case_one, bound_pushforward_case_two, bound_sun, case_two_per_l_via_tensor,
    deg_pushforward_forms, deg_pushforward_forms_coeff, filtration_degree, mu_pushforward, pushforward_stats,
    stability_advisor, AdvisorFlags, HypothesisMode,
};
use frobstab::hn::dominates;
use frobstab::rational::{
    alt_weighted_binomial_sum, binomial, bounded_compositions, format_exact, parse_exact,
};
use frobstab::truncated::{
    bound_tl2, dvec, dvec_by_p_quotient, dvec_mirror_gap, instability_tl_exact, rank_tl, rank_tl_oracle,
    tl2_case_coefficient, tl_bound_factor, tl_decomposition, tl_extremes, TlCase,
};
use frobstab::{Block, Citation, Rational, Rational128, Scalar, SheafStats, SlopeProfile, VarietyContext};

use crate::args::GridName;
use crate::fuzz;
use crate::output::CliError;

pub const SEED_ENV: &str = "FROBSTAB_SEED";
pub const DEFAULT_SEED: u64 = 0x5EED_F0B5;
/// Counterexamples kept per suite; the failure count is always exact.
const MAX_EXAMPLES: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub name: &'static str,
    pub max_rank: u64,
    pub max_dim: u64,
    pub primes: &'static [u64],
    pub slope_lists: usize,
    pub profiles: usize,
    pub refinements: usize,
    pub ledger_pairs: usize,
    pub fuzz_cases: usize,
}

pub const SMALL: Grid = Grid {
    name: "small",
    max_rank: 4,
    max_dim: 4,
    primes: &[2, 3],
    slope_lists: 20,
    profiles: 200,
    refinements: 200,
    ledger_pairs: 5,
    fuzz_cases: 1000,
};

pub const FULL: Grid = Grid {
    name: "full",
    max_rank: 6,
    max_dim: 6,
    primes: &[2, 3, 5, 7],
    slope_lists: 100,
    profiles: 1000,
    refinements: 1000,
    ledger_pairs: 20,
    fuzz_cases: 10_000,
};

impl Grid {
    pub fn of(name: GridName) -> Grid {
        match name {
            GridName::Small => SMALL,
            GridName::Full => FULL,
        }
    }

    /// Primes small enough for the decomposition-heavy suites.
    fn decomposition_primes(&self) -> Vec<u64> {
        self.primes.iter().copied().filter(|&p| p <= 5).collect()
    }
}

pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Err(_) => Ok(DEFAULT_SEED),
        Ok(s) => {
            let t = s.trim();
            let parsed = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
                Some(hex) => u64::from_str_radix(hex, 16),
                None => t.parse::<u64>(),
            };
            parsed.map_err(|e| CliError::Validation(format!("{SEED_ENV}={s:?}: {e}")))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub passed: bool,
    pub counterexamples: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PaperNote {
    pub id: &'static str,
    pub statement: &'static str,
    pub evidence: String,
    pub cases_checked: u64,
    pub cases_affected: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub suites: usize,
    pub passed: usize,
    pub failed: usize,
    pub cases: u64,
    pub failures: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfcheckReport {
    pub grid: &'static str,
    pub seed: String,
    pub max_rank: u64,
    pub max_dim: u64,
    pub primes: Vec<u64>,
    pub passed: bool,
    pub summary: Summary,
    pub suites: Vec<SuiteResult>,
    #[serde(rename = "paper-notes")]
    pub paper_notes: Vec<PaperNote>,
    pub observations: Vec<String>,
}

struct Tally {
    name: &'static str,
    cases: u64,
    failures: u64,
    examples: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: 0,
            examples: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(what());
            }
        }
    }

    /// A library error where none was expected counts as a failure.
    fn ok<T>(&mut self, r: frobstab::Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let msg = format!("{}: {e}", ctx());
                self.check(false, || msg);
                None
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name,
            cases: self.cases,
            failures: self.failures,
            passed: self.failures == 0 && self.cases > 0,
            counterexamples: self.examples,
            notes: self.notes,
        }
    }
}

type SuiteFn = fn(&Grid, &mut ChaCha8Rng) -> SuiteResult;

pub const SUITES: &[(&str, SuiteFn)] = &[
    ("binomial-identities", binomial_identities),
    ("rational-roundtrip", rational_roundtrip),
    ("rank-tl-oracle", rank_tl_suite),
    ("truncated-identities", truncated_identities),
    ("dvec-optimality", dvec_optimality),
    ("tl2-bound", tl2_bound),
    ("tl2-case-table", tl2_case_table),
    ("refinement-monotonicity", refinement_monotonicity),
    ("hn-partial-order", hn_partial_order),
    ("pushforward-ledger", pushforward_ledger),
    ("forms-table", forms_table),
    ("instzix-verdicts", instzix_verdicts),
    ("bn-subsheaf", bn_subsheaf),
    ("bound-pipeline", bound_pipeline),
];

pub fn run(name: GridName, seed: u64) -> SelfcheckReport {
    let grid = Grid::of(name);
    let suites: Vec<SuiteResult> = thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .map(|(stream, &(suite_name, f))| {
                let grid = &grid;
                let handle = scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(stream as u64);
                    f(grid, &mut rng)
                });
                (suite_name, handle)
            })
            .collect();
        handles
            .into_iter()
            .map(|(suite_name, h)| {
                h.join().unwrap_or_else(|panic| SuiteResult {
                    name: suite_name,
                    cases: 0,
                    failures: 1,
                    passed: false,
                    counterexamples: vec![format!("suite panicked: {}", panic_message(&panic))],
                    notes: Vec::new(),
                })
            })
            .collect()
    });
    let paper_notes = paper_notes(&grid);
    let mut observations = static_observations();
    for s in &suites {
        observations.extend(s.notes.iter().map(|n| format!("{}: {n}", s.name)));
    }
    let summary = Summary {
        suites: suites.len(),
        passed: suites.iter().filter(|s| s.passed).count(),
        failed: suites.iter().filter(|s| !s.passed).count(),
        cases: suites.iter().map(|s| s.cases).sum(),
        failures: suites.iter().map(|s| s.failures).sum(),
    };
    SelfcheckReport {
        grid: grid.name,
        seed: seed.to_string(),
        max_rank: grid.max_rank,
        max_dim: grid.max_dim,
        primes: grid.primes.to_vec(),
        passed: summary.failed == 0,
        summary,
        suites,
        paper_notes,
        observations,
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "non-string panic payload".into())
}

fn q(n: i64, d: i64) -> Rational {
    Rational::ratio(n, d)
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn binomial_identities(_: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("binomial-identities");
    for n in 0..=64u64 {
        let row: Vec<BigUint> = (0..=n).map(|k| binomial(n, k as i64)).collect();
        let sum: BigUint = row.iter().sum();
        t.check(sum == BigUint::one() << n, || format!("Σ_k C({n},k) ≠ 2^{n}"));
        for k in 0..=n {
            t.check(row[k as usize] == row[(n - k) as usize], || format!("C({n},{k}) ≠ C({n},{})", n - k));
            if n > 0 && k > 0 {
                let pascal = binomial(n - 1, k as i64 - 1) + binomial(n - 1, k as i64);
                t.check(row[k as usize] == pascal, || format!("Pascal fails at ({n},{k})"));
            }
        }
        t.check(binomial(n, -1).is_zero() && binomial(n, n as i64 + 1).is_zero(), || {
            format!("C({n},k) nonzero outside [0,{n}]")
        });
    }
    for n in 1..=30u64 {
        let want = if n == 1 { BigInt::from(-1) } else { BigInt::zero() };
        t.check(alt_weighted_binomial_sum(n) == want, || {
            format!("Σ(−1)^j j C({n},j) = {} ≠ {want}", alt_weighted_binomial_sum(n))
        });
    }
    for k in 1..=6usize {
        for l in 0..=8u64 {
            let count = bounded_compositions(l, &vec![l; k]).count();
            let want = binomial(l + k as u64 - 1, k as i64 - 1);
            t.check(big(count as u64) == want, || format!("compositions of {l} into {k} parts: {count} ≠ {want}"));
        }
    }
    t.finish()
}

fn rational_roundtrip(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("rational-roundtrip");
    let bound = 1i128 << 100;
    for _ in 0..g.fuzz_cases {
        let draw = |rng: &mut ChaCha8Rng| {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound);
            Rational::from_fraction(BigInt::from(num), BigInt::from(den)).expect("nonzero den")
        };
        let a = draw(rng);
        let c = draw(rng);
        let text = format_exact(&a);
        let back: frobstab::Result<Rational> = parse_exact(&text);
        t.check(back.as_ref() == Ok(&a), || format!("roundtrip of {text}"));
        t.check((a.clone() + c.clone()) - c.clone() == a, || format!("({text} + c) − c"));
        let small = Rational128::from_fraction(BigInt::from(rng.gen_range(-1000i64..=1000)), BigInt::from(rng.gen_range(1i64..=1000)));
        if let Some(s) = small {
            let (n, d) = s.to_fraction();
            let wide = Rational::from_fraction(n, d).expect("den > 0");
            t.check(format_exact(&s) == format_exact(&wide), || format!("fixed-width format of {}", format_exact(&s)));
        }
    }
    t.finish()
}

fn tl_grid(g: &Grid) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
    (1..=g.max_rank).flat_map(move |r| {
        g.primes
            .iter()
            .flat_map(move |&p| (0..=r * (p - 1) + 2).map(move |l| (r, p, l)))
    })
}

fn rank_tl_suite(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("rank-tl-oracle");
    for (r, p, l) in tl_grid(g) {
        let a = rank_tl(r, p, l);
        let b = rank_tl_oracle(r, p, l);
        t.check(a == b, || format!("rank_tl({r},{p},{l}) = {a}, oracle {b}"));
    }
    t.notes.push(format!(
        "alternating sum with l(p) = ⌊l/p⌋ matches the counting oracle on all {} cases",
        t.cases
    ));
    t.finish()
}

fn truncated_identities(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("truncated-identities");
    for r in 1..=g.max_rank {
        for &p in g.primes {
            let top = r * (p - 1);
            let ranks: Vec<BigUint> = (0..=top).map(|l| rank_tl(r, p, l)).collect();
            let total: BigUint = ranks.iter().sum();
            let pr = big(p).pow(r as u32);
            t.check(total == pr, || format!("Σ_l rank_tl({r},{p},l) = {total} ≠ {p}^{r}"));
            for l in 0..=top {
                t.check(ranks[l as usize] == ranks[(top - l) as usize], || format!("duality at ({r},{p},{l})"));
            }
            let moment: BigUint = ranks.iter().enumerate().map(|(l, k)| k * big(l as u64)).sum();
            let want = big(r * (p - 1)) * &pr / 2u32;
            t.check(moment == want, || format!("Σ l·rank_tl({r},{p},l) = {moment} ≠ {want}"));
            t.check(rank_tl(r, p, top + 1).is_zero(), || format!("rank_tl({r},{p},{}) ≠ 0", top + 1));
        }
    }
    t.finish()
}

/// All of `[0, p−1]^r`, in odometer order.
fn box_vectors(r: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut v = vec![0u64; r];
    loop {
        out.push(v.clone());
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

/// Slopes scaled to integers over their common denominator.
fn integer_slopes(xs: &[Rational]) -> Vec<i128> {
    let lcm = xs.iter().fold(BigInt::one(), |acc, x| {
        let d = x.denom().clone();
        let g = num_integer::Integer::gcd(&acc, &d);
        acc / g * d
    });
    xs.iter()
        .map(|x| {
            let v = x.numer() * (&lcm / x.denom());
            i128::try_from(v).expect("small slopes")
        })
        .collect()
}

fn dvec_optimality(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("dvec-optimality");
    for r in 1..=g.max_rank {
        for &p in g.primes {
            let top = r * (p - 1);
            let vectors = box_vectors(r as usize, p);
            for _ in 0..g.slope_lists {
                let xs = fuzz::strict_slopes(rng, r as usize);
                let ints = integer_slopes(&xs);
                let mut best: Vec<Option<(i128, usize)>> = vec![None; top as usize + 1];
                let mut worst: Vec<Option<(i128, usize)>> = vec![None; top as usize + 1];
                for (idx, v) in vectors.iter().enumerate() {
                    let l = v.iter().sum::<u64>() as usize;
                    let val: i128 = v.iter().zip(&ints).map(|(&d, &x)| d as i128 * x).sum();
                    if best[l].is_none_or(|(b, _)| val > b) {
                        best[l] = Some((val, idx));
                    }
                    if worst[l].is_none_or(|(w, _)| val < w) {
                        worst[l] = Some((val, idx));
                    }
                }
                let profile = SlopeProfile::new(xs.iter().map(|x| Block::new(1, x.clone())).collect())
                    .expect("rank-1 blocks");
                for l in 0..=top {
                    let Some(d) = t.ok(dvec(r, p, l), || format!("dvec({r},{p},{l})")) else {
                        continue;
                    };
                    let (_, arg) = best[l as usize].expect("every l in range is attained");
                    t.check(d.0 == vectors[arg], || {
                        format!("dvec({r},{p},{l}) = {:?}, argmax {:?} for slopes {:?}", d.0, vectors[arg], fmt_list(&xs))
                    });
                    let Some((hi, lo)) = t.ok(tl_extremes(&profile, p, l), || format!("tl_extremes r={r} p={p} l={l}")) else {
                        continue;
                    };
                    let hi_brute: Rational = vectors[arg].iter().zip(&xs).map(|(&d, x)| Rational::from_u64(d) * x).sum();
                    let (_, low_arg) = worst[l as usize].expect("attained");
                    let lo_brute: Rational = vectors[low_arg].iter().zip(&xs).map(|(&d, x)| Rational::from_u64(d) * x).sum();
                    t.check(hi == hi_brute && lo == lo_brute, || {
                        format!("extremes at r={r} p={p} l={l}: ({}, {}) vs brute ({}, {})",
                            format_exact(&hi), format_exact(&lo), format_exact(&hi_brute), format_exact(&lo_brute))
                    });
                }
            }
        }
    }
    t.finish()
}

fn fmt_list(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_exact).collect()
}

fn tl2_bound(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("tl2-bound");
    let primes = g.decomposition_primes();
    let (mut low_cases, mut low_equal) = (0u64, 0u64);
    for _ in 0..g.profiles {
        let profile = fuzz::profile(rng, 4, g.max_rank);
        let p = primes[rng.gen_range(0..primes.len())];
        let r = profile.total_rank();
        let i_e = profile.instability();
        let label = || format!("{:?} p={p}", crate::commands::profile_label(&profile));
        for l in 0..=r * (p - 1) {
            let Some(d) = t.ok(tl_decomposition(&profile, p, l), || format!("decomposition {} l={l}", label())) else {
                continue;
            };
            let Some((hi, lo)) = t.ok(tl_extremes(&profile, p, l), || format!("extremes {} l={l}", label())) else {
                continue;
            };
            t.check(d.total_rank() == rank_tl(r, p, l), || format!("decomposition rank {} l={l}", label()));
            t.check(d.mu_max() == &hi && d.mu_min() == &lo, || {
                format!("extremes differ {} l={l}: decomposition ({}, {}) vs d-vector ({}, {})", label(),
                    format_exact(d.mu_max()), format_exact(d.mu_min()), format_exact(&hi), format_exact(&lo))
            });
            let exact = hi - lo;
            let bound = bound_tl2(&profile, p, l);
            t.check(exact <= bound, || {
                format!("I(T^l) = {} > bound {} {} l={l}", format_exact(&exact), format_exact(&bound), label())
            });
            if let Ok(gap) = dvec_mirror_gap(r, p, l) {
                let sharp = Rational::from_u64(gap) * i_e.clone();
                t.check(exact <= sharp, || format!("I(T^l) above mirror-gap bound {} l={l}", label()));
            }
            if l <= (r / 2) * (p - 1) && !i_e.is_zero() {
                low_cases += 1;
                if exact == bound {
                    low_equal += 1;
                }
            }
        }
    }
    t.notes.push(format!(
        "equality in the Tl2 bound held in {low_equal} of {low_cases} unstable cases with l ≤ ⌊r/2⌋(p−1) (recorded, not asserted)"
    ));
    t.finish()
}

fn tl2_case_table(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("tl2-case-table");
    let mut strict = 0u64;
    for r in 1..=g.max_rank {
        for &p in g.primes {
            for l in 0..=r * (p - 1) {
                let (Some((case, coeff)), Some(gap)) = (
                    t.ok(tl2_case_coefficient(r, p, l), || format!("case ({r},{p},{l})")),
                    t.ok(dvec_mirror_gap(r, p, l), || format!("gap ({r},{p},{l})")),
                ) else {
                    continue;
                };
                let min = tl_bound_factor(r, p, l);
                t.check(coeff == gap, || format!("case coefficient {coeff} ≠ mirror gap {gap} at ({r},{p},{l})"));
                t.check(coeff <= min, || format!("case coefficient {coeff} > min {min} at ({r},{p},{l})"));
                let tight = matches!(case, TlCase::Low | TlCase::OddMiddle);
                t.check((coeff == min) == tight, || format!("equality pattern at ({r},{p},{l}): {case:?}"));
                if coeff < min {
                    strict += 1;
                }
            }
        }
    }
    t.notes.push(format!(
        "four-case coefficient is strictly below min{{l, ⌊r/2⌋(p−1)}} in {strict} of {} cases (even-high / odd-high rows)",
        t.cases / 3
    ));
    t.finish()
}

fn refinement_monotonicity(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("refinement-monotonicity");
    let primes = g.decomposition_primes();
    let mut done = 0;
    while done < g.refinements {
        let base = fuzz::profile(rng, 4, g.max_rank);
        let Some(refined) = fuzz::refinement(rng, &base) else {
            continue;
        };
        done += 1;
        let label = || format!("{:?} → {:?}", crate::commands::profile_label(&base), crate::commands::profile_label(&refined));
        let (Some(pb), Some(pr)) = (t.ok(base.polygon(), label), t.ok(refined.polygon(), label)) else {
            continue;
        };
        t.check(dominates(&pr, &pb) == Ok(true), || format!("refinement not above: {}", label()));
        t.check(refined.instability() >= base.instability(), || format!("I decreased: {}", label()));
        let p = primes[rng.gen_range(0..primes.len())];
        for l in 0..=base.total_rank() * (p - 1) {
            let (Some(a), Some(b)) = (
                t.ok(instability_tl_exact(&base, p, l), label),
                t.ok(instability_tl_exact(&refined, p, l), label),
            ) else {
                continue;
            };
            t.check(b >= a, || format!("I(T^{l}) decreased under refinement at p={p}: {}", label()));
        }
    }
    t.finish()
}

fn hn_partial_order(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("hn-partial-order");
    for _ in 0..g.fuzz_cases / 4 {
        let r = rng.gen_range(1..=g.max_rank);
        let ps: Vec<SlopeProfile> = (0..3).map(|_| fuzz::profile_of_rank(rng, 4, r)).collect();
        let polys: Vec<_> = ps.iter().map(|p| p.polygon().expect("normalized")).collect();
        let d = |i: usize, j: usize| dominates(&polys[i], &polys[j]).expect("equal rank");
        t.check(d(0, 0), || "dominance not reflexive".into());
        if d(0, 1) && d(1, 0) {
            t.check(polys[0].simplified() == polys[1].simplified(), || "dominance not antisymmetric".into());
        }
        if d(0, 1) && d(1, 2) {
            t.check(d(0, 2), || "dominance not transitive".into());
        }
        let line = SlopeProfile::semistable(r, ps[0].stats().mu).expect("r ≥ 1").polygon().expect("one block");
        t.check(dominates(&polys[0], &line) == Ok(true), || "HN polygon below its chord".into());
    }
    t.finish()
}

fn pushforward_ledger(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("pushforward-ledger");
    let mut literal_fails = 0u64;
    let mut literal_cases = 0u64;
    for n in 1..=g.max_dim {
        for &p in g.primes {
            for _ in 0..g.ledger_pairs {
                let mu_e = fuzz::slope(rng);
                let mu_o = fuzz::slope(rng);
                let r_e = rng.gen_range(1..=4u64);
                let label = || format!("n={n} p={p} r={r_e} μE={} μΩ={}", format_exact(&mu_e), format_exact(&mu_o));
                let Some(ctx) = t.ok(VarietyContext::basic(n, p, mu_o.clone()), label) else {
                    continue;
                };
                let e = SheafStats::new(r_e, mu_e.clone(), Rational::zero()).expect("valid");
                let ledger = pushforward_stats(&ctx, &e);
                let Some(fdeg) = t.ok(filtration_degree(&ctx, r_e, &mu_e), label) else {
                    continue;
                };
                let pq = Rational::from_u64(p);
                let lhs: Rational = Rational::from_bigint(&BigInt::from(big(p).pow(n as u32) * r_e)) * ledger.slope.clone();
                t.check(lhs.clone() * pq.clone() == fdeg, || format!("p·p^n·r·μ(F_*E) ≠ Σ_l filtration degree: {}", label()));
                t.check(lhs == ledger.degree, || format!("ledger degree ≠ rank·slope: {}", label()));
                literal_cases += 1;
                if lhs != fdeg {
                    literal_fails += 1;
                }
                for i in 0..=n {
                    let Some((rank, degree)) = t.ok(deg_pushforward_forms(&ctx, i), label) else {
                        continue;
                    };
                    let c = binomial(n, i as i64);
                    t.check(rank == &c * big(p).pow(n as u32), || format!("rank F_*Ω^{i}: {}", label()));
                    let via_slope = mu_pushforward(&ctx, &(Rational::from_u64(i) * mu_o.clone()), 1);
                    let ratio = degree / Rational::from_bigint(&BigInt::from(rank));
                    t.check(via_slope.as_ref() == Ok(&ratio), || format!("deg F_*Ω^{i}/rank vs μ formula: {}", label()));
                }
                let once = mu_pushforward(&ctx, &mu_e, 1).and_then(|m1| mu_pushforward(&ctx, &m1, 1));
                let twice = mu_pushforward(&ctx, &mu_e, 2);
                t.check(once.is_ok() && once == twice, || format!("iteration coherence: {}", label()));
            }
        }
    }
    t.notes.push(format!(
        "p^n·r·μ(F_*E) = Σ_l r·rank_tl·(μE + lμΩ) taken literally fails in {literal_fails} of {literal_cases} cases; \
         the right side is p times the left side in all of them"
    ));
    t.finish()
}

fn forms_table(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("forms-table");
    for n in 1..=g.max_dim {
        for &p in g.primes {
            let Some(table) = t.ok(forms_recurrence::<Rational>(n, p), || format!("recurrence n={n} p={p}")) else {
                continue;
            };
            t.check(table.rows.len() as u64 == n + 1, || format!("row count n={n} p={p}"));
            for i in 1..=n {
                let Some(closed) = t.ok(forms_closed::<Rational>(n, p, i), || format!("closed ({n},{p},{i})")) else {
                    continue;
                };
                t.check(table.row(i) == Some(&closed), || format!("closed ≠ recurrence at (n,p,i) = ({n},{p},{i})"));
            }
            t.check(table.cartier_violation().is_none(), || {
                format!("Cartier row delta fails at (n,p,i) = ({n},{p},{:?})", table.cartier_violation())
            });
            let top = table.row(n).expect("row n");
            if let Some((rank, coeff)) = t.ok(deg_pushforward_forms_coeff::<Rational>(n, p, n), || format!("F_*Ω^n ({n},{p})")) {
                t.check(top.rank_z == rank && top.degz_coeff == coeff, || format!("Z^n ≠ F_*Ω^n at n={n} p={p}"));
            }
            let zero = table.row(0).expect("row 0");
            t.check(zero.rank_b.is_zero() && zero.rank_z.is_one() && zero.degz_coeff.is_zero(), || {
                format!("row 0 at n={n} p={p}")
            });
        }
    }
    t.finish()
}

/// Upper dimension for the Z^i verdict grid.
const ZI_MAX_DIM: u64 = 8;

fn instzix_verdicts(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("instzix-verdicts");
    let mut outside = (0u64, 0u64);
    for n in 2..=ZI_MAX_DIM {
        for &p in g.primes.iter().filter(|&&p| p >= 3) {
            for i in 1..n {
                let Some(v) = t.ok(check_zi_instability::<Rational>(n, p, i), || format!("({n},{p},{i})")) else {
                    continue;
                };
                if v.in_claimed_range {
                    t.check(v.exact_destabilizes, || {
                        format!("μ(B^i) ≤ μ(Ω^i) at (n,p,i) = ({n},{p},{i}): {}", format_exact(&v.mu_b_coeff))
                    });
                } else {
                    outside.0 += 1;
                    if v.exact_destabilizes {
                        outside.1 += 1;
                    }
                }
                t.check(alternating_term_positive(&v), || {
                    format!("alternating term {} not positive at ({n},{p},{i})", format_exact(&v.alternating_term))
                });
            }
        }
    }
    t.notes.push(format!(
        "outside 1 ≤ i < n/2, μ(B^i) > μ(Ω^i) still held in {} of {} rows",
        outside.1, outside.0
    ));
    t.finish()
}

/// Upper dimension for the B^n subsheaf sweep.
const BN_MAX_DIM: u64 = 4;

fn bn_subsheaf(g: &Grid, _: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("bn-subsheaf");
    let one = Rational::one();
    for n in 1..=g.max_dim.min(BN_MAX_DIM) {
        for &p in g.primes {
            let top = p.pow(n as u32) - 1;
            for r_b in 1..=top {
                let Some(b) = t.ok(bound_bn_subsheaf(n, p, &big(r_b), &one), || format!("({n},{p},{r_b})")) else {
                    continue;
                };
                let ok = if r_b < top { b.is_negative() } else { b.is_zero() };
                t.check(ok, || format!("bound {} at n={n} p={p} r_b={r_b}", format_exact(&b)));
            }
        }
    }
    t.finish()
}

fn bound_pipeline(g: &Grid, rng: &mut ChaCha8Rng) -> SuiteResult {
    let mut t = Tally::new("bound-pipeline");
    let mode = HypothesisMode::Enforce;
    for n in 1..=g.max_dim {
        for &p in g.primes {
            for _ in 0..g.ledger_pairs {
                let r = rng.gen_range(1..=4u64);
                let i_e = fuzz::slope(rng).abs();
                let mu_o = fuzz::slope(rng).abs();
                let e = SheafStats::new(r, fuzz::slope(rng), i_e.clone()).expect("valid");
                let label = || format!("n={n} p={p} r={r} I(E)={} μΩ={}", format_exact(&i_e), format_exact(&mu_o));

                let ctx = VarietyContext::new(n, p, mu_o.clone(), Some(Rational::zero()), Rational::zero(), false, false)
                    .expect("valid");
                let want = Rational::from_bigint(&BigInt::from(big(p).pow(n as u32 - 1) * r)) * i_e.clone();
                if let Some(two) = t.ok(bound_pushforward_case_two(&ctx, &e, mode), label) {
                    t.check(two.report.value == want, || format!("case II collapse: {}", label()));
                    t.check(two.report.citation == Citation::TheoremInstabDirIm, || "case II citation".into());
                    let constant = vec![i_e.clone(); (n * (p - 1) + 1) as usize];
                    let sun = bound_sun(&ctx, &big(r), &constant, mode);
                    t.check(sun.map(|b| b.value).as_ref() == Ok(&want), || format!("Sun bound with constant entries: {}", label()));
                }

                let lmax = fuzz::slope(rng);
                let i_o = fuzz::slope(rng).abs();
                let general = VarietyContext::new(n, p, mu_o.clone(), Some(lmax.clone()), i_o, false, false).expect("valid");
                if let (Some(two), Some(via)) = (
                    t.ok(bound_pushforward_case_two(&general, &e, mode), label),
                    t.ok(case_two_per_l_via_tensor(&general, &e), label),
                ) {
                    t.check(two.per_l == via, || format!("per-l B_l ≠ tensor composition (lmax={}): {}", format_exact(&lmax), label()));
                }

                let flat = VarietyContext::new(n, p, Rational::zero(), None, Rational::zero(), true, true).expect("valid");
                let ss = SheafStats::new(r, fuzz::slope(rng), Rational::zero()).expect("valid");
                if let Some(one) = t.ok(bound_pushforward_case_one(&flat, &ss, mode), label) {
                    t.check(one.value.is_zero(), || format!("case I at μΩ = 0: {}", label()));
                }
                let advice = stability_advisor(
                    &flat,
                    AdvisorFlags {
                        e_semistable: true,
                        ..AdvisorFlags::default()
                    },
                );
                t.check(advice.iter().any(|c| c.citation == Citation::PropFroDirIm), || {
                    "advisor silent at μΩ = 0 with Ω¹, E semistable".into()
                });
                let neg = VarietyContext::new(n, p, -q(1, 1) - mu_o.clone(), Some(Rational::zero()), Rational::zero(), false, false)
                    .expect("valid");
                t.check(bound_pushforward_case_two(&neg, &e, mode).is_err(), || format!("case II accepted μΩ < 0: {}", label()));
            }
        }
    }
    t.finish()
}

fn paper_notes(g: &Grid) -> Vec<PaperNote> {
    let mut notes = Vec::new();

    let (mut checked, mut affected) = (0u64, 0u64);
    for r in 1..=g.max_rank {
        for &p in g.primes {
            for l in 0..=r * (p - 1) {
                checked += 1;
                if dvec_by_p_quotient(r, p, l).map(|v| v.total()) != Ok(l) {
                    affected += 1;
                }
            }
        }
    }
    let lit = dvec_by_p_quotient(3, 3, 4).expect("in range");
    let greedy = dvec(3, 3, 4).expect("in range");
    if affected > 0 && lit.total() != 4 {
        notes.push(PaperNote {
            id: "dvec-indexing",
            statement: "d-vector written with ⌊l/p⌋ leading entries p−1 and remainder l − ⌊l/p⌋p; \
                        the entries must sum to l, which needs ⌊l/(p−1)⌋ and l − ⌊l/(p−1)⌋(p−1)",
            evidence: format!(
                "r=3, p=3, l=4: literal reading gives {:?} (sum {}), greedy maximizer is {:?} (sum {})",
                lit.0,
                lit.total(),
                greedy.0,
                greedy.total()
            ),
            cases_checked: checked,
            cases_affected: affected,
        });
    }

    let (mut checked, mut affected) = (0u64, 0u64);
    for n in 2..=ZI_MAX_DIM {
        for &p in g.primes {
            for i in 1..n {
                checked += 1;
                if check_zi_instability::<Rational>(n, p, i).map(|v| v.first_term_conflict) == Ok(true) {
                    affected += 1;
                }
            }
        }
    }
    let v = check_zi_instability::<Rational>(3, 2, 1).expect("valid");
    if v.first_term_conflict {
        notes.push(PaperNote {
            id: "instzix-simplification",
            statement: "simplified first term n(p^n − p)/(2(p^n − 1)) differs from the unsimplified \
                        n·p^(n−1)(p−1)/(2(p^n − 1)); the two can disagree on whether the sufficient quantity exceeds i",
            evidence: format!(
                "(n,p,i) = (3,2,1): printed {} > 1 = {}, recomputed {} > 1 = {}",
                format_exact(&v.paper_sufficient_lhs),
                v.paper_sufficient_holds,
                format_exact(&v.exact_first_term_ratio),
                v.exact_first_term_holds
            ),
            cases_checked: checked,
            cases_affected: affected,
        });
    }

    let (mut checked, mut affected) = (0u64, 0u64);
    for r in 1..=g.max_rank {
        for &p in g.primes {
            checked += 1;
            if rank_tl(r, p, r * (p - 1)).is_one() {
                affected += 1;
            }
        }
    }
    let edge = SlopeProfile::from_pairs([(1, q(1, 1)), (1, q(0, 1))]).expect("valid");
    let edge_rank = tl_decomposition(&edge, 3, 4).map(|d| d.total_rank()).unwrap_or_default();
    let strict_rank: BigUint = bounded_compositions(4, &[2, 2])
        .filter(|c| c.iter().zip([2u64, 2]).all(|(&ci, b)| ci < b))
        .map(|_| BigUint::one())
        .sum();
    if affected > 0 && edge_rank != strict_rank {
        notes.push(PaperNote {
            id: "phi0-strict-inequality",
            statement: "summands of T^l(⊕E_i) are indexed with c_i < rk(E_i)(p−1); the top power \
                        T^{r(p−1)} is a line bundle, so c_i = rk(E_i)(p−1) must be allowed",
            evidence: format!(
                "rank_tl(r, p, r(p−1)) = 1 on every grid point; E = O(1) ⊕ O, p = 3, l = 4: \
                 inclusive rule gives rank {edge_rank} = rank_tl(2,3,4) = {}, strict rule gives {strict_rank}",
                rank_tl(2, 3, 4)
            ),
            cases_checked: checked,
            cases_affected: affected,
        });
    }
    notes
}

fn static_observations() -> Vec<String> {
    vec![
        "InstabDirIm side condition \"0 ≤ l − l(p) < p\" read as l − l(p)·p, i.e. l(p) = ⌊l/p⌋".to_string(),
    ]
}
