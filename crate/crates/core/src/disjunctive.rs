//! Disjunctive multilevel sharing over a single anchor sequence.
//!
//! One dealing serves every level: the dealer blinds the secret once per
//! level (`y_i = s + alpha_i * p0`, kept below that level's bound `M_i`)
//! and hands each participant a single private share, the residue of their
//! home level's blinded value. For every lower level the dealer publishes
//! a delta that converts the holder's hashed share into that level's
//! residue, so a senior participant can stand in at any junior level
//! without holding extra secrets.

use alloc::vec::Vec;

use num_bigint::BigUint;
use rand::RngCore;

use crate::access::{authorized_disjunctive, Coalition, LevelStructure};
use crate::arith::{crt_solve, CongruenceSystem};
use crate::classic::sample_blinding;
use crate::error::{Error, Result};
use crate::mask::mask;
use crate::primes::{PrimeSequence, SequenceKind};

/// A participant's single private share: their home level's blinded value
/// reduced by their modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MtssShare {
    pub participant: usize,
    pub home_level: usize,
    pub modulus: BigUint,
    pub value: BigUint,
}

/// Published correction letting `participant` act at `target_level`:
/// `(y_target - mask(participant, target, share)) mod p_participant`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicDelta {
    pub participant: usize,
    pub target_level: usize,
    pub value: BigUint,
}

/// Everything a dealing produces. `shares` are private, one per
/// participant; `deltas` and `level_bounds` are public. The blinded values
/// and blinding factors are deliberately not retained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DealerTranscript {
    pub structure: LevelStructure,
    pub sequence: PrimeSequence,
    pub shares: Vec<MtssShare>,
    pub deltas: Vec<PublicDelta>,
    pub level_bounds: Vec<BigUint>,
}

impl DealerTranscript {
    /// The private share of participant `k`.
    pub fn share_of(&self, k: usize) -> Option<&MtssShare> {
        self.shares.iter().find(|sh| sh.participant == k)
    }
}

pub(crate) struct LevelDealing {
    pub shares: Vec<MtssShare>,
    pub deltas: Vec<PublicDelta>,
    pub bounds: Vec<BigUint>,
}

/// Blinds `bases[i]` for level `i+1` and derives all shares and deltas.
/// Both schemes use this; they differ only in what the bases are.
pub(crate) fn deal_levels<R: RngCore + ?Sized>(
    bases: &[BigUint],
    structure: &LevelStructure,
    seq: &PrimeSequence,
    rng: &mut R,
) -> Result<LevelDealing> {
    let n = structure.participant_count();
    let m = structure.level_count();
    debug_assert_eq!(bases.len(), m);
    if seq.len() != n {
        return Err(Error::StructureMismatch);
    }
    if !seq.check(&SequenceKind::Anchor)? {
        return Err(Error::ConditionViolated);
    }
    let p0 = seq.p0();
    let mut bounds = Vec::with_capacity(m);
    let mut blinded = Vec::with_capacity(m);
    for (idx, base) in bases.iter().enumerate() {
        let bound = seq.prefix_product(structure.threshold(idx + 1));
        let alpha = sample_blinding(base, p0, &bound, rng);
        blinded.push(base + alpha * p0);
        bounds.push(bound);
    }
    let mut shares = Vec::with_capacity(n);
    let mut deltas = Vec::new();
    for k in 1..=n {
        let home = structure.home_level(k);
        let p_k = seq.prime(k);
        let value = &blinded[home - 1] % p_k;
        for target in (home + 1)..=m {
            let hashed = mask(k, target, &value, p_k);
            let residue = &blinded[target - 1] % p_k;
            deltas.push(PublicDelta {
                participant: k,
                target_level: target,
                value: (residue + p_k - hashed) % p_k,
            });
        }
        shares.push(MtssShare {
            participant: k,
            home_level: home,
            modulus: p_k.clone(),
            value,
        });
    }
    Ok(LevelDealing { shares, deltas, bounds })
}

/// Deals `s` disjunctively: every level blinds the same secret.
pub fn deal<R: RngCore + ?Sized>(
    s: &BigUint,
    structure: &LevelStructure,
    seq: &PrimeSequence,
    rng: &mut R,
) -> Result<DealerTranscript> {
    if s >= seq.p0() {
        return Err(Error::SecretOutOfRange);
    }
    let bases = alloc::vec![s.clone(); structure.level_count()];
    let dealing = deal_levels(&bases, structure, seq, rng)?;
    Ok(DealerTranscript {
        structure: structure.clone(),
        sequence: seq.clone(),
        shares: dealing.shares,
        deltas: dealing.deltas,
        level_bounds: dealing.bounds,
    })
}

/// The residue of level `target_level`'s blinded value under the share
/// holder's modulus: the share itself at home, or the holder's hashed
/// share plus the published delta at a lower level.
pub fn effective_residue(
    share: &MtssShare,
    target_level: usize,
    deltas: &[PublicDelta],
) -> Result<BigUint> {
    if share.home_level == target_level {
        return Ok(share.value.clone());
    }
    if target_level < share.home_level {
        return Err(Error::DeltaMissing);
    }
    let delta = deltas
        .iter()
        .find(|d| d.participant == share.participant && d.target_level == target_level)
        .ok_or(Error::DeltaMissing)?;
    let hashed = mask(share.participant, target_level, &share.value, &share.modulus);
    Ok((hashed + &delta.value) % &share.modulus)
}

/// Recovers the secret at the smallest level the coalition opens.
///
/// `shares` must contain the private shares of the members that end up
/// selected (the first `t_i*` usable members in index order).
pub fn reconstruct(
    coalition: &Coalition,
    shares: &[MtssShare],
    deltas: &[PublicDelta],
    structure: &LevelStructure,
    seq: &PrimeSequence,
) -> Result<BigUint> {
    if seq.len() != structure.participant_count() {
        return Err(Error::StructureMismatch);
    }
    let target = authorized_disjunctive(coalition, structure)?.ok_or(Error::AccessDenied)?;
    let y = recover_level(coalition, shares, deltas, structure, seq, target)?;
    Ok(y % seq.p0())
}

/// Solves for level `target`'s blinded value from the coalition's first
/// `t_target` usable members. Shared with the conjunctive scheme.
pub(crate) fn recover_level(
    coalition: &Coalition,
    shares: &[MtssShare],
    deltas: &[PublicDelta],
    structure: &LevelStructure,
    seq: &PrimeSequence,
    target: usize,
) -> Result<BigUint> {
    let t = structure.threshold(target);
    let mut pairs = Vec::with_capacity(t);
    for k in coalition.iter() {
        if structure.home_level(k) > target {
            continue;
        }
        let share = shares
            .iter()
            .find(|sh| sh.participant == k)
            .ok_or(Error::ShareMissing)?;
        if share.home_level != structure.home_level(k) || share.modulus != *seq.prime(k) {
            return Err(Error::StructureMismatch);
        }
        pairs.push((effective_residue(share, target, deltas)?, share.modulus.clone()));
        if pairs.len() == t {
            break;
        }
    }
    if pairs.len() < t {
        return Err(Error::InsufficientShares);
    }
    let y = crt_solve(&CongruenceSystem::new(pairs)?)?;
    if y >= seq.prefix_product(t) {
        return Err(Error::ReconstructionOverflow);
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    use crate::classic::ab_share;
    use crate::primes::generate_anchor_sequence;

    fn uint(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn rng(seed: u64) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(seed)
    }

    fn setup(
        sizes: &[usize],
        thresholds: &[usize],
        p0: u64,
        seed: u64,
    ) -> (LevelStructure, PrimeSequence, ChaCha20Rng) {
        let structure = LevelStructure::contiguous(sizes, thresholds).unwrap();
        let mut r = rng(seed);
        let seq =
            generate_anchor_sequence(&uint(p0), structure.participant_count(), &mut r).unwrap();
        (structure, seq, r)
    }

    /// Oracle: enumerate every value below the level bound consistent with
    /// all effective residues; exactly one must remain.
    fn brute_force_level(
        transcript: &DealerTranscript,
        level: usize,
    ) -> BigUint {
        let bound = &transcript.level_bounds[level - 1];
        let mut found = Vec::new();
        let mut y = uint(0);
        while &y < bound {
            let all_match = transcript.shares.iter().all(|share| {
                if share.home_level > level {
                    return true;
                }
                let r = effective_residue(share, level, &transcript.deltas).unwrap();
                &y % &share.modulus == r
            });
            if all_match {
                found.push(y.clone());
            }
            y += 1u32;
        }
        assert_eq!(found.len(), 1, "blinded value must be unique below the bound");
        found.pop().unwrap()
    }

    #[test]
    fn dealing_emits_one_share_per_participant_and_counted_deltas() {
        let (structure, seq, mut r) = setup(&[1, 2], &[1, 2], 5, 1);
        let t = deal(&uint(3), &structure, &seq, &mut r).unwrap();
        assert_eq!(t.shares.len(), 3);
        // Participant 1 (home level 1) gets one delta for level 2; the
        // level-2 members get none.
        assert_eq!(t.deltas.len(), 1);
        assert_eq!(t.deltas[0].participant, 1);
        assert_eq!(t.deltas[0].target_level, 2);
    }

    #[test]
    fn every_level_hides_the_same_secret() {
        let (structure, seq, mut r) = setup(&[1, 2], &[1, 2], 5, 2);
        let secret = uint(3);
        let t = deal(&secret, &structure, &seq, &mut r).unwrap();
        for level in 1..=2 {
            let y = brute_force_level(&t, level);
            assert!(y < t.level_bounds[level - 1]);
            assert_eq!(&y % seq.p0(), secret);
        }
    }

    #[test]
    fn single_level_dealing_matches_classic_blinded_scheme() {
        let structure = LevelStructure::contiguous(&[4], &[2]).unwrap();
        let mut r = rng(7);
        let seq = generate_anchor_sequence(&uint(5), 4, &mut r).unwrap();
        let mut r1 = rng(99);
        let t = deal(&uint(2), &structure, &seq, &mut r1).unwrap();
        let mut r2 = rng(99);
        let (classic_shares, _) = ab_share(&uint(2), &seq, 2, &mut r2).unwrap();
        for (a, b) in t.shares.iter().zip(&classic_shares) {
            assert_eq!(a.value, b.value);
            assert_eq!(a.modulus, b.modulus);
        }
        assert!(t.deltas.is_empty());
    }

    #[test]
    fn effective_residue_covers_all_reachable_levels() {
        let (structure, seq, mut r) = setup(&[2, 2, 2], &[2, 3, 4], 5, 3);
        let t = deal(&uint(4), &structure, &seq, &mut r).unwrap();
        for share in &t.shares {
            for level in share.home_level..=3 {
                let res = effective_residue(share, level, &t.deltas).unwrap();
                assert!(res < share.modulus);
            }
            if share.home_level > 1 {
                assert_eq!(
                    effective_residue(share, share.home_level - 1, &t.deltas),
                    Err(Error::DeltaMissing)
                );
            }
        }
    }

    #[test]
    fn delta_count_matches_levels_below_home() {
        let (structure, seq, mut r) = setup(&[2, 2, 2], &[2, 3, 4], 5, 4);
        let t = deal(&uint(0), &structure, &seq, &mut r).unwrap();
        let expected: usize = (1..=6)
            .map(|k| structure.level_count() - structure.home_level(k))
            .sum();
        assert_eq!(t.deltas.len(), expected);
    }

    #[test]
    fn round_trip_on_both_audit_settings() {
        // The settings the audited scheme cannot serve: sizes (2,3) with
        // thresholds (2,3), and sizes (3,3) with thresholds (2,4).
        for (sizes, thresholds, seed) in
            [(&[2usize, 3] as &[usize], &[2usize, 3] as &[usize], 10u64), (&[3, 3], &[2, 4], 11)]
        {
            let (structure, seq, mut r) = setup(sizes, thresholds, 5, seed);
            let secret = uint(4);
            let t = deal(&secret, &structure, &seq, &mut r).unwrap();
            let n = structure.participant_count();
            for bits in 0u32..(1 << n) {
                let coalition: Coalition =
                    (1..=n).filter(|k| bits & (1 << (k - 1)) != 0).collect();
                let authorized =
                    authorized_disjunctive(&coalition, &structure).unwrap().is_some();
                let got =
                    reconstruct(&coalition, &t.shares, &t.deltas, &structure, &seq);
                if authorized {
                    assert_eq!(got.unwrap(), secret);
                } else {
                    assert_eq!(got, Err(Error::AccessDenied));
                }
            }
        }
    }

    #[test]
    fn senior_member_substitutes_at_junior_level() {
        let (structure, seq, mut r) = setup(&[2, 3], &[2, 3], 5, 12);
        let secret = uint(2);
        let t = deal(&secret, &structure, &seq, &mut r).unwrap();
        // One senior with two juniors: only level 2 opens, and the senior
        // contributes through the published delta.
        let coalition = Coalition::new([1, 4, 5]);
        let got = reconstruct(&coalition, &t.shares, &t.deltas, &structure, &seq).unwrap();
        assert_eq!(got, secret);
    }

    #[test]
    fn missing_private_share_is_reported() {
        let (structure, seq, mut r) = setup(&[2, 3], &[2, 3], 5, 13);
        let t = deal(&uint(1), &structure, &seq, &mut r).unwrap();
        let coalition = Coalition::new([1, 2]);
        let only_first = vec![t.shares[0].clone()];
        assert_eq!(
            reconstruct(&coalition, &only_first, &t.deltas, &structure, &seq),
            Err(Error::ShareMissing)
        );
    }

    #[test]
    fn oversecret_is_rejected_before_sampling() {
        let (structure, seq, mut r) = setup(&[1, 2], &[1, 2], 5, 14);
        assert_eq!(
            deal(&uint(5), &structure, &seq, &mut r),
            Err(Error::SecretOutOfRange)
        );
    }

    #[test]
    fn dealing_is_deterministic_per_seed() {
        let (structure, seq, _) = setup(&[2, 3], &[2, 3], 5, 15);
        let a = deal(&uint(3), &structure, &seq, &mut rng(1234)).unwrap();
        let b = deal(&uint(3), &structure, &seq, &mut rng(1234)).unwrap();
        assert_eq!(a, b);
        let c = deal(&uint(3), &structure, &seq, &mut rng(1235)).unwrap();
        assert_ne!(a, c, "different seeds should blind differently");
    }

    #[test]
    fn deficient_coalition_sees_flat_secret_distribution() {
        let (structure, seq, mut r) = setup(&[1, 2], &[1, 2], 5, 16);
        let t = deal(&uint(3), &structure, &seq, &mut r).unwrap();
        // Participant 2 alone at level 2: one residue, threshold two.
        let share = t.share_of(2).unwrap();
        let bound = &t.level_bounds[1];
        let mut counts = [0u64; 5];
        let mut y = share.value.clone();
        while &y < bound {
            let secret = (&y % uint(5)).iter_u64_digits().next().unwrap_or(0) as usize;
            counts[secret] += 1;
            y += &share.modulus;
        }
        let max = *counts.iter().max().unwrap();
        let min = *counts.iter().min().unwrap();
        assert!(min >= 1);
        assert!(max - min <= 1, "deficient view must stay flat: {counts:?}");
    }

    #[test]
    fn statistical_margin_against_largest_deficient_coalition() {
        // The bound that keeps deficient views flat: the level bound
        // exceeds p0^2 times any t-1 moduli's product.
        let (structure, seq, mut r) = setup(&[2, 3], &[2, 3], 5, 17);
        let t = deal(&uint(0), &structure, &seq, &mut r).unwrap();
        for level in 1..=2 {
            let threshold = structure.threshold(level);
            let worst = seq.suffix_product(threshold - 1);
            let p0_sq = seq.p0() * seq.p0();
            assert!(t.level_bounds[level - 1].clone() > p0_sq * worst);
        }
    }

    #[test]
    fn published_delta_rules_out_no_share_value() {
        // Inversion count at tiny moduli: every candidate share value
        // pairs with exactly one blinded-value residue under the
        // published delta, so the delta alone narrows nothing.
        let (structure, seq, mut r) = setup(&[1, 2], &[1, 2], 5, 18);
        let t = deal(&uint(2), &structure, &seq, &mut r).unwrap();
        let delta = &t.deltas[0];
        let p1 = seq.prime(1);
        let share = t.share_of(1).unwrap();
        let true_residue = effective_residue(share, 2, &t.deltas).unwrap();
        let mut consistent = 0u64;
        let mut hit_true_pair = false;
        let mut x = uint(0);
        while &x < p1 {
            let implied = (mask(1, 2, &x, p1) + &delta.value) % p1;
            consistent += 1;
            if x == share.value {
                assert_eq!(implied, true_residue);
                hit_true_pair = true;
            }
            x += 1u32;
        }
        let p1_u64 = p1.iter_u64_digits().next().unwrap();
        assert_eq!(consistent, p1_u64, "full domain: no value is excluded");
        assert!(hit_true_pair);
    }
}
