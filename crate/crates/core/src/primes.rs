//! Probabilistic primality testing and the prime sequences every scheme in
//! this crate deals over.
//!
//! A sequence is a secret-space modulus `p0` together with strictly
//! increasing, pairwise coprime share moduli `p_1 < ... < p_n`, all coprime
//! to `p0`. Four inequality checks are supported, each comparing exact
//! integer products (no logarithms, no floating point):
//!
//! * interval (`Mignotte { t }`): the t-1 largest moduli multiply to less
//!   than the t smallest, so a nonempty secret interval exists;
//! * classic (`AsmuthBloomClassic { t }`): same comparison with one factor
//!   of `p0` on the left;
//! * statistical (`AsmuthBloomStatistical { t }`): same with `p0` squared,
//!   the form the sharing schemes here rely on;
//! * `Anchor`: the statistical form pinned at `t = max(1, n/2)`. A sequence
//!   of consecutive primes starting at the first prime at or above
//!   `2*p0^2` satisfies the statistical form for every `t` in `[1, n]`,
//!   which the generator verifies exhaustively rather than trusting.

use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::RngCore;

use crate::error::{Error, Result};

/// Rounds used by the sequence generators for candidates above 64 bits.
pub const DEFAULT_PRIMALITY_ROUNDS: u32 = 40;

/// Start-bound doublings a generator attempts before giving up.
const MAX_ESCALATIONS: u32 = 16;

/// Witness set that makes the strong-pseudoprime test exact below 2^64.
const SMALL_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Primes below 256, for cheap trial division ahead of the full test.
const TRIAL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

fn two() -> BigUint {
    BigUint::from(2u32)
}

/// One strong-pseudoprime round. Expects `n` odd, `n > 3`, `witness < n`.
fn strong_round(n: &BigUint, witness: &BigUint) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n - 1 of odd n > 1 is even");
    let d = &n_minus_1 >> s;
    let mut x = witness.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

enum Screen {
    Decided(bool),
    Unknown,
}

fn trial_screen(n: &BigUint) -> Screen {
    if *n < two() {
        return Screen::Decided(false);
    }
    for p in TRIAL_PRIMES {
        let p = BigUint::from(p);
        if *n == p {
            return Screen::Decided(true);
        }
        if n.is_multiple_of(&p) {
            return Screen::Decided(false);
        }
    }
    Screen::Unknown
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Witness in `[2, n-2]` derived deterministically from `n` itself, so the
/// rng-free entry point stays reproducible for candidates above 64 bits.
fn derived_witness(n: &BigUint, state: &mut u64) -> BigUint {
    let span = n - BigUint::from(3u32);
    let blocks = (n.bits() / 64 + 2) as usize;
    let mut bytes = Vec::with_capacity(blocks * 8);
    for _ in 0..blocks {
        bytes.extend_from_slice(&splitmix64(state).to_le_bytes());
    }
    BigUint::from_bytes_le(&bytes) % span + two()
}

fn low_bits_seed(n: &BigUint) -> u64 {
    let digits = n.to_u64_digits();
    digits.first().copied().unwrap_or(0) ^ 0x6d74_7373_7072_696d
}

/// Strong-pseudoprime test. A `false` answer is always correct; a `true`
/// answer is exact below 2^64 (fixed witness set) and wrong with
/// probability at most `4^-rounds` above it.
///
/// Witnesses for large candidates are derived from the candidate, keeping
/// the function deterministic. Generators that hold a random source use
/// [`probable_prime_with`] instead.
pub fn is_probable_prime(n: &BigUint, rounds: u32) -> bool {
    match trial_screen(n) {
        Screen::Decided(answer) => answer,
        Screen::Unknown => {
            if n.bits() <= 64 {
                SMALL_WITNESSES
                    .iter()
                    .all(|w| strong_round(n, &BigUint::from(*w)))
            } else {
                let mut state = low_bits_seed(n);
                (0..rounds).all(|_| {
                    let w = derived_witness(n, &mut state);
                    strong_round(n, &w)
                })
            }
        }
    }
}

/// As [`is_probable_prime`], drawing large-candidate witnesses from `rng`.
pub(crate) fn probable_prime_with<R: RngCore + ?Sized>(
    n: &BigUint,
    rounds: u32,
    rng: &mut R,
) -> bool {
    match trial_screen(n) {
        Screen::Decided(answer) => answer,
        Screen::Unknown => {
            if n.bits() <= 64 {
                SMALL_WITNESSES
                    .iter()
                    .all(|w| strong_round(n, &BigUint::from(*w)))
            } else {
                let lo = two();
                let hi = n - BigUint::one();
                (0..rounds).all(|_| {
                    let w = rng.gen_biguint_range(&lo, &hi);
                    strong_round(n, &w)
                })
            }
        }
    }
}

/// Smallest probable prime at or above `start`.
pub(crate) fn next_prime_from<R: RngCore + ?Sized>(
    start: &BigUint,
    rounds: u32,
    rng: &mut R,
) -> BigUint {
    if *start <= two() {
        return two();
    }
    let mut candidate = start.clone();
    if candidate.is_even() {
        candidate += 1u32;
    }
    loop {
        if probable_prime_with(&candidate, rounds, rng) {
            return candidate;
        }
        candidate += 2u32;
    }
}

/// `count` consecutive probable primes starting at the first one >= `start`.
pub(crate) fn consecutive_primes_from<R: RngCore + ?Sized>(
    start: &BigUint,
    count: usize,
    rounds: u32,
    rng: &mut R,
) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(count);
    let mut from = start.clone();
    for _ in 0..count {
        let p = next_prime_from(&from, rounds, rng);
        from = &p + 1u32;
        out.push(p);
    }
    out
}

pub(crate) fn product(xs: &[BigUint]) -> BigUint {
    xs.iter().fold(BigUint::one(), |acc, x| acc * x)
}

/// Which inequality a sequence is asked to satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceKind {
    Mignotte { t: usize },
    AsmuthBloomClassic { t: usize },
    AsmuthBloomStatistical { t: usize },
    Anchor,
}

/// Secret-space modulus `p0` plus strictly increasing share moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeSequence {
    p0: BigUint,
    primes: Vec<BigUint>,
}

impl PrimeSequence {
    /// Validates ordering and coprimality: `p0 >= 1`, `p0 < p_1`, the
    /// moduli strictly increase, are pairwise coprime, and each is coprime
    /// to `p0`. Primality of the entries is the caller's responsibility;
    /// the generators below only ever emit probable primes.
    pub fn new(p0: BigUint, primes: Vec<BigUint>) -> Result<Self> {
        if p0 < BigUint::one() {
            return Err(Error::Invalid("p0 must be positive"));
        }
        if primes.is_empty() {
            return Err(Error::Invalid("sequence needs at least one modulus"));
        }
        if p0 >= primes[0] {
            return Err(Error::Invalid("p0 must be below the smallest modulus"));
        }
        for w in primes.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Invalid("moduli must strictly increase"));
            }
        }
        for (i, p) in primes.iter().enumerate() {
            if !p0.gcd(p).is_one() {
                return Err(Error::Invalid("modulus shares a factor with p0"));
            }
            for q in &primes[i + 1..] {
                if !p.gcd(q).is_one() {
                    return Err(Error::Invalid("moduli are not pairwise coprime"));
                }
            }
        }
        Ok(PrimeSequence { p0, primes })
    }

    pub fn p0(&self) -> &BigUint {
        &self.p0
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Modulus assigned to participant `k` (1-based).
    pub fn prime(&self, k: usize) -> &BigUint {
        &self.primes[k - 1]
    }

    /// Product of the `t` smallest moduli, the reconstruction bound for a
    /// threshold-`t` dealing.
    pub fn prefix_product(&self, t: usize) -> BigUint {
        product(&self.primes[..t])
    }

    /// Product of the `count` largest moduli.
    pub fn suffix_product(&self, count: usize) -> BigUint {
        product(&self.primes[self.primes.len() - count..])
    }

    /// Evaluates the requested inequality. Thresholds outside `[1, n]` are
    /// rejected with [`Error::BadThreshold`]; the anchor form carries its
    /// own pinned threshold and ignores none.
    pub fn check(&self, kind: &SequenceKind) -> Result<bool> {
        let n = self.len();
        let (t, p0_power) = match kind {
            SequenceKind::Mignotte { t } => (*t, 0u32),
            SequenceKind::AsmuthBloomClassic { t } => (*t, 1),
            SequenceKind::AsmuthBloomStatistical { t } => (*t, 2),
            SequenceKind::Anchor => (core::cmp::max(1, n / 2), 2),
        };
        if t < 1 || t > n {
            return Err(Error::BadThreshold);
        }
        let left = self.p0.pow(p0_power) * self.suffix_product(t - 1);
        Ok(left < self.prefix_product(t))
    }
}

/// Evaluates the inequality `kind` against `seq`. Thin free-function form
/// of [`PrimeSequence::check`].
pub fn check_condition(seq: &PrimeSequence, kind: &SequenceKind) -> Result<bool> {
    seq.check(kind)
}

/// The per-level inequality of the audited scheme on a raw modulus list:
/// `p0 * (product of t-1 largest) < (product of t smallest)`.
pub(crate) fn hf_condition(p0: &BigUint, primes: &[BigUint], t: usize) -> bool {
    p0 * product(&primes[primes.len() - (t - 1)..]) < product(&primes[..t])
}

/// Generates a sequence of `n` consecutive probable primes, starting at the
/// first prime at or above `2*p0^2`, that satisfies the statistical
/// inequality for every threshold in `[1, n]` (the anchor form included).
/// On a failed check the start bound doubles, up to 16 times.
///
/// The construction is deterministic for a given `p0` and `n`; `rng` only
/// feeds witness selection for candidates above 64 bits, so identical seeds
/// give identical sequences.
pub fn generate_anchor_sequence<R: RngCore + ?Sized>(
    p0: &BigUint,
    n: usize,
    rng: &mut R,
) -> Result<PrimeSequence> {
    if *p0 < two() {
        return Err(Error::Invalid("p0 must be at least 2"));
    }
    if n == 0 {
        return Err(Error::Invalid("sequence needs at least one modulus"));
    }
    let mut bound = two() * p0 * p0;
    for _ in 0..MAX_ESCALATIONS {
        let primes = consecutive_primes_from(&bound, n, DEFAULT_PRIMALITY_ROUNDS, rng);
        let seq = PrimeSequence::new(p0.clone(), primes)?;
        let all_hold = (1..=n).try_fold(true, |acc, t| {
            seq.check(&SequenceKind::AsmuthBloomStatistical { t })
                .map(|ok| acc && ok)
        })?;
        if all_hold {
            return Ok(seq);
        }
        bound *= 2u32;
    }
    Err(Error::GenerationFailure)
}

/// Generates `count` consecutive probable primes satisfying the audited
/// scheme's classic per-level inequality at threshold `t`, starting at the
/// first prime at or above `start`, doubling the bound on failure.
pub(crate) fn hf_sequence_from<R: RngCore + ?Sized>(
    p0: &BigUint,
    count: usize,
    t: usize,
    start: &BigUint,
    rng: &mut R,
) -> Result<Vec<BigUint>> {
    let mut bound = start.clone();
    for _ in 0..MAX_ESCALATIONS {
        let primes = consecutive_primes_from(&bound, count, DEFAULT_PRIMALITY_ROUNDS, rng);
        if hf_condition(p0, &primes, t) {
            return Ok(primes);
        }
        bound *= 2u32;
    }
    Err(Error::GenerationFailure)
}

/// Per-level sequence for the audited scheme: `count` moduli over secret
/// space `p0` meeting the classic inequality at threshold `t`.
pub fn generate_hf_sequence<R: RngCore + ?Sized>(
    p0: &BigUint,
    count: usize,
    t: usize,
    rng: &mut R,
) -> Result<PrimeSequence> {
    if *p0 < two() {
        return Err(Error::Invalid("p0 must be at least 2"));
    }
    if count == 0 {
        return Err(Error::Invalid("sequence needs at least one modulus"));
    }
    if t < 1 || t > count {
        return Err(Error::BadThreshold);
    }
    let start = two() * p0;
    let primes = hf_sequence_from(p0, count, t, &start, rng)?;
    PrimeSequence::new(p0.clone(), primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn uint(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn seq(p0: u64, primes: &[u64]) -> PrimeSequence {
        PrimeSequence::new(uint(p0), primes.iter().map(|&p| uint(p)).collect()).unwrap()
    }

    fn rng() -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(7)
    }

    #[test]
    fn primality_small_cases() {
        assert!(!is_probable_prime(&uint(0), 40));
        assert!(!is_probable_prime(&uint(1), 40));
        assert!(is_probable_prime(&uint(2), 40));
        assert!(is_probable_prime(&uint(3), 40));
        assert!(!is_probable_prime(&uint(4), 40));
        assert!(is_probable_prime(&uint(71), 40));
        assert!(!is_probable_prime(&uint(899), 40)); // 29 * 31
        assert!(is_probable_prime(&uint(65537), 40));
    }

    #[test]
    fn primality_matches_sieve_below_2000() {
        let mut is_prime = [true; 2000];
        is_prime[0] = false;
        is_prime[1] = false;
        for i in 2..2000usize {
            if is_prime[i] {
                let mut j = i * i;
                while j < 2000 {
                    is_prime[j] = false;
                    j += i;
                }
            }
        }
        for (n, &expected) in is_prime.iter().enumerate() {
            assert_eq!(
                is_probable_prime(&uint(n as u64), 40),
                expected,
                "disagreement at {n}"
            );
        }
    }

    #[test]
    fn primality_above_64_bits() {
        // First prime above 2^64, and the composite 2^64 + 1.
        let p = BigUint::from(u64::MAX) + uint(14);
        let c = BigUint::from(u64::MAX) + uint(2);
        assert!(is_probable_prime(&p, 40));
        assert!(!is_probable_prime(&c, 40));
    }

    #[test]
    fn sequence_validation_rejects_bad_inputs() {
        assert!(PrimeSequence::new(uint(0), vec![uint(5)]).is_err());
        assert!(PrimeSequence::new(uint(5), vec![]).is_err());
        assert!(PrimeSequence::new(uint(7), vec![uint(5)]).is_err());
        assert!(PrimeSequence::new(uint(2), vec![uint(7), uint(5)]).is_err());
        assert!(PrimeSequence::new(uint(2), vec![uint(7), uint(7)]).is_err());
        assert!(PrimeSequence::new(uint(2), vec![uint(9), uint(15)]).is_err());
        assert!(PrimeSequence::new(uint(3), vec![uint(9), uint(11)]).is_err());
    }

    #[test]
    fn interval_condition_holds_for_small_triple() {
        let s = seq(1, &[5, 7, 11]);
        assert!(s.check(&SequenceKind::Mignotte { t: 2 }).unwrap());
    }

    #[test]
    fn classic_holds_statistical_fails_on_audited_level_one() {
        // 5 * 23 = 115 < 143 = 11 * 13, but 25 * 23 = 575 > 143.
        let s = seq(5, &[11, 13, 17, 23]);
        assert!(s.check(&SequenceKind::AsmuthBloomClassic { t: 2 }).unwrap());
        assert!(!s
            .check(&SequenceKind::AsmuthBloomStatistical { t: 2 })
            .unwrap());
    }

    #[test]
    fn anchor_condition_example() {
        // 9 * 31 = 279 < 437 = 19 * 23.
        let s = seq(3, &[19, 23, 29, 31]);
        assert!(s.check(&SequenceKind::Anchor).unwrap());
    }

    #[test]
    fn threshold_bounds_are_enforced() {
        let s = seq(3, &[19, 23, 29, 31]);
        assert_eq!(
            s.check(&SequenceKind::AsmuthBloomClassic { t: 0 }),
            Err(Error::BadThreshold)
        );
        assert_eq!(
            s.check(&SequenceKind::AsmuthBloomClassic { t: 5 }),
            Err(Error::BadThreshold)
        );
    }

    #[test]
    fn checks_match_direct_product_evaluation() {
        // Oracle: recompute both sides of each inequality with plain loops.
        let cases = [
            (3u64, vec![19u64, 23, 29, 31]),
            (5, vec![11, 13, 17, 23]),
            (5, vec![53, 59, 61, 67, 71, 73]),
            (2, vec![11, 13, 17, 19]),
        ];
        for (p0, primes) in cases {
            let s = seq(p0, &primes);
            let n = primes.len();
            for t in 1..=n {
                let mut top = 1u128;
                for i in 0..(t - 1) {
                    top *= primes[n - 1 - i] as u128;
                }
                let mut bottom = 1u128;
                for p in primes.iter().take(t) {
                    bottom *= *p as u128;
                }
                let p0 = p0 as u128;
                assert_eq!(
                    s.check(&SequenceKind::Mignotte { t }).unwrap(),
                    top < bottom
                );
                assert_eq!(
                    s.check(&SequenceKind::AsmuthBloomClassic { t }).unwrap(),
                    p0 * top < bottom
                );
                assert_eq!(
                    s.check(&SequenceKind::AsmuthBloomStatistical { t }).unwrap(),
                    p0 * p0 * top < bottom
                );
            }
        }
    }

    #[test]
    fn anchor_generation_is_deterministic_consecutive() {
        let a = generate_anchor_sequence(&uint(3), 4, &mut rng()).unwrap();
        assert_eq!(
            a.primes(),
            &[uint(19), uint(23), uint(29), uint(31)],
            "first prime at or above 18, then consecutive"
        );
        let b = generate_anchor_sequence(&uint(3), 4, &mut rng()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn anchor_generation_single_modulus() {
        let s = generate_anchor_sequence(&uint(2), 1, &mut rng()).unwrap();
        assert!(s.primes()[0] > uint(4));
        assert!(s.check(&SequenceKind::Anchor).unwrap());
    }

    #[test]
    fn anchor_generation_holds_statistical_for_every_threshold() {
        for (p0, n) in [(5u64, 6usize), (2, 12), (7, 9), (101, 8)] {
            let s = generate_anchor_sequence(&uint(p0), n, &mut rng()).unwrap();
            assert!(s.primes()[0] > uint(p0) * uint(p0));
            for t in 1..=n {
                assert!(
                    s.check(&SequenceKind::AsmuthBloomStatistical { t }).unwrap(),
                    "statistical form failed at p0={p0} n={n} t={t}"
                );
            }
        }
    }

    #[test]
    fn any_threshold_subset_product_dominates_prefix() {
        let s = generate_anchor_sequence(&uint(5), 8, &mut rng()).unwrap();
        let t = 3;
        let bound = s.prefix_product(t);
        // All 3-subsets of 8 moduli.
        let n = s.len();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    let prod = &s.primes()[a] * &s.primes()[b] * &s.primes()[c];
                    assert!(prod >= bound);
                }
            }
        }
    }

    #[test]
    fn hf_generation_meets_classic_inequality() {
        let s = generate_hf_sequence(&uint(5), 4, 2, &mut rng()).unwrap();
        assert!(hf_condition(&uint(5), s.primes(), 2));
        let s = generate_hf_sequence(&uint(5), 6, 3, &mut rng()).unwrap();
        assert!(hf_condition(&uint(5), s.primes(), 3));
    }

    #[test]
    fn hf_generation_rejects_oversized_threshold() {
        assert_eq!(
            generate_hf_sequence(&uint(5), 3, 4, &mut rng()),
            Err(Error::BadThreshold)
        );
    }

    #[test]
    fn audited_level_two_moduli_satisfy_classic_form() {
        // 5 * 67 * 71 = 23785 < 33263 = 29 * 31 * 37.
        let s = seq(5, &[29, 31, 37, 61, 67, 71]);
        assert!(s.check(&SequenceKind::AsmuthBloomClassic { t: 3 }).unwrap());
    }
}
