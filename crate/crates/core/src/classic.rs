//! The two single-level CRT sharing schemes.
//!
//! The interval scheme (Mignotte) shares the secret itself, so each share
//! narrows the secret's interval: it is not perfect, and a test below
//! exhibits the leak. The blinded scheme (Asmuth-Bloom) lifts a secret in
//! `Z_p0` to `y = s + alpha*p0` below the reconstruction bound and shares
//! `y` instead; under the statistical inequality, deficient coalitions
//! learn almost nothing about `s`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::RngCore;

use crate::arith::{crt_solve, CongruenceSystem};
use crate::error::{Error, Result};
use crate::primes::{PrimeSequence, SequenceKind};

/// One participant's residue share.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicShare {
    pub participant: usize,
    pub modulus: BigUint,
    pub value: BigUint,
}

/// Dealer-side record of a blinding: `value = s + alpha*p0 < bound`.
/// Never hand this to participants; it determines the secret.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlindedSecret {
    pub value: BigUint,
    pub alpha: BigUint,
    pub bound: BigUint,
}

/// Uniform blinding factor: `alpha` in `[0, (bound-1-s)/p0]`, the full set
/// of choices keeping `s + alpha*p0` below `bound`.
pub(crate) fn sample_blinding<R: RngCore + ?Sized>(
    s: &BigUint,
    p0: &BigUint,
    bound: &BigUint,
    rng: &mut R,
) -> BigUint {
    debug_assert!(s < bound);
    let max = (bound - 1u32 - s) / p0;
    rng.gen_biguint_below(&(max + 1u32))
}

/// Uniform blinding factor with both ends pinned: `lower < s + alpha*p0 <
/// upper`. Fails when no non-negative `alpha` fits.
pub(crate) fn sample_blinding_in_range<R: RngCore + ?Sized>(
    s: &BigUint,
    p0: &BigUint,
    lower: &BigUint,
    upper: &BigUint,
    rng: &mut R,
) -> Result<BigUint> {
    let s_int = BigInt::from(s.clone());
    let p0_int = BigInt::from(p0.clone());
    let min = (BigInt::from(lower.clone()) - &s_int).div_floor(&p0_int) + BigInt::one();
    let min = if min.is_negative() { BigInt::zero() } else { min };
    let max = (BigInt::from(upper.clone()) - BigInt::one() - &s_int).div_floor(&p0_int);
    if max < min {
        return Err(Error::ConditionViolated);
    }
    let span = (&max - &min + 1u32).to_biguint().expect("max >= min");
    let offset = rng.gen_biguint_below(&span);
    Ok(min.to_biguint().expect("clamped non-negative") + offset)
}

/// The open interval the interval scheme draws secrets from:
/// `(product of t-1 largest moduli, product of t smallest)`.
pub(crate) fn mignotte_interval(seq: &PrimeSequence, t: usize) -> (BigUint, BigUint) {
    (seq.suffix_product(t - 1), seq.prefix_product(t))
}

/// Shares `s` directly: one residue per modulus. The secret must lie
/// strictly inside the scheme's interval.
pub fn mignotte_share(s: &BigUint, seq: &PrimeSequence, t: usize) -> Result<Vec<ClassicShare>> {
    if t < 2 || t > seq.len() {
        return Err(Error::BadThreshold);
    }
    let (lower, upper) = mignotte_interval(seq, t);
    if *s <= lower || *s >= upper {
        return Err(Error::SecretOutOfRange);
    }
    Ok(seq
        .primes()
        .iter()
        .enumerate()
        .map(|(idx, p)| ClassicShare {
            participant: idx + 1,
            modulus: p.clone(),
            value: s % p,
        })
        .collect())
}

/// Deduplicates shares by modulus, rejecting contradictory duplicates and
/// moduli foreign to the sequence.
fn distinct_pairs(shares: &[ClassicShare], seq: &PrimeSequence) -> Result<Vec<(BigUint, BigUint)>> {
    let mut pairs: Vec<(BigUint, BigUint)> = Vec::new();
    for share in shares {
        if !seq.primes().contains(&share.modulus) {
            return Err(Error::Invalid("share modulus not in the sequence"));
        }
        match pairs.iter().find(|(_, m)| *m == share.modulus) {
            Some((v, _)) if *v != share.value => return Err(Error::InconsistentShares),
            Some(_) => {}
            None => pairs.push((share.value.clone(), share.modulus.clone())),
        }
    }
    Ok(pairs)
}

/// Recovers the secret from at least `t` interval-scheme shares.
pub fn mignotte_reconstruct(
    shares: &[ClassicShare],
    seq: &PrimeSequence,
    t: usize,
) -> Result<BigUint> {
    if t < 2 || t > seq.len() {
        return Err(Error::BadThreshold);
    }
    let pairs = distinct_pairs(shares, seq)?;
    if pairs.len() < t {
        return Err(Error::InsufficientShares);
    }
    let y = crt_solve(&CongruenceSystem::new(pairs)?)?;
    let (lower, upper) = mignotte_interval(seq, t);
    if y <= lower || y >= upper {
        return Err(Error::InconsistentShares);
    }
    Ok(y)
}

/// Blinds `s` with a fresh uniform `alpha` and shares `y = s + alpha*p0`.
/// The sequence must satisfy the statistical inequality at `t`.
pub fn ab_share<R: RngCore + ?Sized>(
    s: &BigUint,
    seq: &PrimeSequence,
    t: usize,
    rng: &mut R,
) -> Result<(Vec<ClassicShare>, BlindedSecret)> {
    ab_precheck(s, seq, t)?;
    let bound = seq.prefix_product(t);
    let alpha = sample_blinding(s, seq.p0(), &bound, rng);
    ab_emit(s, seq, alpha, bound)
}

/// Deterministic variant of [`ab_share`] for reproducing a known dealing:
/// the caller supplies `alpha` instead of drawing it.
pub fn ab_share_with_alpha(
    s: &BigUint,
    seq: &PrimeSequence,
    t: usize,
    alpha: BigUint,
) -> Result<(Vec<ClassicShare>, BlindedSecret)> {
    ab_precheck(s, seq, t)?;
    let bound = seq.prefix_product(t);
    if s + &alpha * seq.p0() >= bound {
        return Err(Error::Invalid("blinding factor drives y past the bound"));
    }
    ab_emit(s, seq, alpha, bound)
}

fn ab_precheck(s: &BigUint, seq: &PrimeSequence, t: usize) -> Result<()> {
    if s >= seq.p0() {
        return Err(Error::SecretOutOfRange);
    }
    if !seq.check(&SequenceKind::AsmuthBloomStatistical { t })? {
        return Err(Error::ConditionViolated);
    }
    Ok(())
}

fn ab_emit(
    s: &BigUint,
    seq: &PrimeSequence,
    alpha: BigUint,
    bound: BigUint,
) -> Result<(Vec<ClassicShare>, BlindedSecret)> {
    let y = s + &alpha * seq.p0();
    let shares = seq
        .primes()
        .iter()
        .enumerate()
        .map(|(idx, p)| ClassicShare {
            participant: idx + 1,
            modulus: p.clone(),
            value: &y % p,
        })
        .collect();
    Ok((shares, BlindedSecret { value: y, alpha, bound }))
}

/// Recovers the secret from at least `t` blinded-scheme shares: solve for
/// `y`, insist it stays below the dealing bound, reduce by `p0`.
pub fn ab_reconstruct(shares: &[ClassicShare], seq: &PrimeSequence, t: usize) -> Result<BigUint> {
    if t < 1 || t > seq.len() {
        return Err(Error::BadThreshold);
    }
    let pairs = distinct_pairs(shares, seq)?;
    if pairs.len() < t {
        return Err(Error::InsufficientShares);
    }
    let y = crt_solve(&CongruenceSystem::new(pairs)?)?;
    if y >= seq.prefix_product(t) {
        return Err(Error::ReconstructionOverflow);
    }
    Ok(y % seq.p0())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use crate::primes::generate_anchor_sequence;

    fn uint(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn seq(p0: u64, primes: &[u64]) -> PrimeSequence {
        PrimeSequence::new(uint(p0), primes.iter().map(|&p| uint(p)).collect()).unwrap()
    }

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    #[test]
    fn interval_share_example() {
        let s = seq(1, &[5, 7, 11]);
        let shares = mignotte_share(&uint(17), &s, 2).unwrap();
        let values: Vec<u64> = shares.iter().map(|sh| sh.value.iter_u64_digits().next().unwrap_or(0)).collect();
        assert_eq!(values, vec![2, 3, 6]);
        assert_eq!(mignotte_reconstruct(&shares[..2], &s, 2).unwrap(), uint(17));
        assert_eq!(mignotte_reconstruct(&shares[1..], &s, 2).unwrap(), uint(17));
    }

    #[test]
    fn interval_share_rejects_out_of_range_secret() {
        let s = seq(1, &[5, 7, 11]);
        assert_eq!(mignotte_share(&uint(10), &s, 2), Err(Error::SecretOutOfRange));
        assert_eq!(mignotte_share(&uint(35), &s, 2), Err(Error::SecretOutOfRange));
    }

    #[test]
    fn interval_reconstruct_needs_threshold_shares() {
        let s = seq(1, &[5, 7, 11]);
        let shares = mignotte_share(&uint(17), &s, 2).unwrap();
        assert_eq!(
            mignotte_reconstruct(&shares[..1], &s, 2),
            Err(Error::InsufficientShares)
        );
        // A duplicated modulus does not count twice.
        let dup = vec![shares[0].clone(), shares[0].clone()];
        assert_eq!(mignotte_reconstruct(&dup, &s, 2), Err(Error::InsufficientShares));
    }

    #[test]
    fn interval_reconstruct_flags_out_of_interval_result() {
        let s = seq(1, &[5, 7, 11]);
        // Residues of 40, which lies above the interval (11, 35).
        let forged: Vec<ClassicShare> = s
            .primes()
            .iter()
            .enumerate()
            .map(|(idx, p)| ClassicShare {
                participant: idx + 1,
                modulus: p.clone(),
                value: uint(40) % p,
            })
            .collect();
        assert_eq!(
            mignotte_reconstruct(&forged, &s, 2),
            Err(Error::InconsistentShares)
        );
    }

    #[test]
    fn interval_scheme_leaks_from_single_share() {
        // One share restricts the secret to a strict subset of the
        // interval: the scheme is not perfect.
        let s = seq(1, &[5, 7, 11]);
        let secret = uint(17);
        let shares = mignotte_share(&secret, &s, 2).unwrap();
        let (lower, upper) = mignotte_interval(&s, 2);
        let first = &shares[0];
        let mut candidates = Vec::new();
        let mut y = lower.clone() + 1u32;
        while y < upper {
            if &y % &first.modulus == first.value {
                candidates.push(y.clone());
            }
            y += 1u32;
        }
        let interval_size = upper - lower - 1u32;
        assert!(candidates.contains(&secret));
        assert!(!candidates.is_empty());
        assert!(
            uint(candidates.len() as u64) < interval_size,
            "single share must rule out part of the interval"
        );
    }

    #[test]
    fn blinded_share_with_forced_alpha() {
        let s = seq(3, &[97, 101, 103]);
        let (shares, blinded) = ab_share_with_alpha(&uint(2), &s, 2, uint(10)).unwrap();
        assert_eq!(blinded.value, uint(32));
        for share in &shares {
            assert_eq!(share.value, uint(32));
        }
        assert_eq!(ab_reconstruct(&shares[..2], &s, 2).unwrap(), uint(2));
    }

    #[test]
    fn blinded_share_with_zero_alpha_exposes_secret_residues() {
        let s = seq(3, &[97, 101, 103]);
        let (shares, blinded) = ab_share_with_alpha(&uint(2), &s, 2, uint(0)).unwrap();
        assert_eq!(blinded.value, uint(2));
        for share in &shares {
            assert_eq!(share.value, uint(2));
        }
    }

    #[test]
    fn blinded_share_requires_statistical_inequality() {
        let s = seq(5, &[11, 13, 17, 23]);
        assert_eq!(
            ab_share(&uint(1), &s, 2, &mut rng(1)),
            Err(Error::ConditionViolated)
        );
    }

    #[test]
    fn blinded_share_rejects_oversized_secret() {
        let s = seq(3, &[97, 101, 103]);
        assert_eq!(
            ab_share(&uint(3), &s, 2, &mut rng(1)),
            Err(Error::SecretOutOfRange)
        );
    }

    #[test]
    fn blinded_round_trip_over_subsets() {
        let mut r = rng(42);
        let anchor = generate_anchor_sequence(&uint(5), 5, &mut r).unwrap();
        for secret in 0..5u64 {
            let (shares, blinded) = ab_share(&uint(secret), &anchor, 3, &mut r).unwrap();
            assert!(blinded.value < blinded.bound);
            assert_eq!(&blinded.value % uint(5), uint(secret));
            // Any 3 of 5 shares recover the secret; pairs are insufficient.
            for a in 0..5 {
                for b in (a + 1)..5 {
                    for c in (b + 1)..5 {
                        let subset =
                            vec![shares[a].clone(), shares[b].clone(), shares[c].clone()];
                        assert_eq!(ab_reconstruct(&subset, &anchor, 3).unwrap(), uint(secret));
                    }
                }
            }
            assert_eq!(
                ab_reconstruct(&shares[..2], &anchor, 3),
                Err(Error::InsufficientShares)
            );
        }
    }

    #[test]
    fn blinded_single_share_threshold_one() {
        let mut r = rng(9);
        let anchor = generate_anchor_sequence(&uint(7), 3, &mut r).unwrap();
        let (shares, _) = ab_share(&uint(4), &anchor, 1, &mut r).unwrap();
        assert_eq!(ab_reconstruct(&shares[..1], &anchor, 1).unwrap(), uint(4));
    }

    #[test]
    fn blinded_reconstruct_flags_overflow() {
        let mut r = rng(3);
        let anchor = generate_anchor_sequence(&uint(5), 4, &mut r).unwrap();
        // Residues of the bound itself: solvable, but out of range.
        let forged_y = anchor.prefix_product(2);
        let forged: Vec<ClassicShare> = anchor
            .primes()
            .iter()
            .enumerate()
            .map(|(idx, p)| ClassicShare {
                participant: idx + 1,
                modulus: p.clone(),
                value: &forged_y % p,
            })
            .collect();
        assert_eq!(
            ab_reconstruct(&forged, &anchor, 2),
            Err(Error::ReconstructionOverflow)
        );
    }

    #[test]
    fn deficient_coalition_sees_flat_secret_distribution() {
        // With t-1 shares, enumerate every y below the bound consistent
        // with them; each secret in Z_p0 must appear, within a count of 1
        // of every other.
        let mut r = rng(5);
        let anchor = generate_anchor_sequence(&uint(3), 4, &mut r).unwrap();
        let (shares, _) = ab_share(&uint(1), &anchor, 2, &mut r).unwrap();
        let bound = anchor.prefix_product(2);
        let known = &shares[1];
        let mut counts = [0u64; 3];
        let mut y = known.value.clone();
        while y < bound {
            let secret = (&y % uint(3)).iter_u64_digits().next().unwrap_or(0) as usize;
            counts[secret] += 1;
            y += &known.modulus;
        }
        let max = *counts.iter().max().unwrap();
        let min = *counts.iter().min().unwrap();
        assert!(min >= 1, "every secret stays possible");
        assert!(max - min <= 1, "candidate counts stay within 1: {counts:?}");
    }

    #[test]
    fn blinding_samplers_stay_in_range() {
        let mut r = rng(11);
        let p0 = uint(5);
        for _ in 0..200 {
            let alpha = sample_blinding(&uint(3), &p0, &uint(1000), &mut r);
            let y = uint(3) + alpha * &p0;
            assert!(y < uint(1000));
            let alpha = sample_blinding_in_range(&uint(3), &p0, &uint(50), &uint(400), &mut r)
                .unwrap();
            let y = uint(3) + alpha * &p0;
            assert!(y > uint(50) && y < uint(400));
        }
        assert_eq!(
            sample_blinding_in_range(&uint(3), &p0, &uint(395), &uint(398), &mut r),
            Err(Error::ConditionViolated)
        );
    }
}
