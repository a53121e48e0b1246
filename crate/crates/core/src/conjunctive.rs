//! Conjunctive multilevel sharing: every level must be satisfied at once.
//!
//! The secret is split additively into one summand per level, each summand
//! is dealt with the same per-level machinery as the disjunctive scheme,
//! and recovering the secret means recovering every summand. A coalition
//! that clears all thresholds simultaneously learns the sum; one that
//! misses any single level learns nothing about it.

use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use rand::RngCore;

use crate::access::{authorized_conjunctive, Coalition, LevelStructure};
use crate::disjunctive::{deal_levels, recover_level, MtssShare, PublicDelta};
use crate::error::{Error, Result};
use crate::primes::PrimeSequence;

/// A conjunctive dealing. Same share and delta shapes as the disjunctive
/// transcript, but each level blinds its own additive summand rather than
/// the secret itself, so reconstruction must combine all levels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctiveTranscript {
    pub structure: LevelStructure,
    pub sequence: PrimeSequence,
    pub shares: Vec<MtssShare>,
    pub deltas: Vec<PublicDelta>,
    pub level_bounds: Vec<BigUint>,
}

impl ConjunctiveTranscript {
    /// The private share of participant `k`.
    pub fn share_of(&self, k: usize) -> Option<&MtssShare> {
        self.shares.iter().find(|sh| sh.participant == k)
    }
}

/// Splits `s` into uniform summands, one per level, and deals each.
pub fn deal_conjunctive<R: RngCore + ?Sized>(
    s: &BigUint,
    structure: &LevelStructure,
    seq: &PrimeSequence,
    rng: &mut R,
) -> Result<ConjunctiveTranscript> {
    let p0 = seq.p0();
    if s >= p0 {
        return Err(Error::SecretOutOfRange);
    }
    let m = structure.level_count();
    let mut bases = Vec::with_capacity(m);
    let mut drawn = BigUint::from(0u32);
    for _ in 0..m - 1 {
        let sigma = rng.gen_biguint_below(p0);
        drawn = (drawn + &sigma) % p0;
        bases.push(sigma);
    }
    // The last summand closes the sum to the secret modulo p0.
    bases.push((s + p0 - drawn) % p0);
    let dealing = deal_levels(&bases, structure, seq, rng)?;
    Ok(ConjunctiveTranscript {
        structure: structure.clone(),
        sequence: seq.clone(),
        shares: dealing.shares,
        deltas: dealing.deltas,
        level_bounds: dealing.bounds,
    })
}

/// Recovers the secret from a coalition that satisfies every level.
pub fn reconstruct_conjunctive(
    coalition: &Coalition,
    shares: &[MtssShare],
    deltas: &[PublicDelta],
    structure: &LevelStructure,
    seq: &PrimeSequence,
) -> Result<BigUint> {
    if seq.len() != structure.participant_count() {
        return Err(Error::StructureMismatch);
    }
    if !authorized_conjunctive(coalition, structure)? {
        return Err(Error::AccessDenied);
    }
    let p0 = seq.p0();
    let mut sum = BigUint::from(0u32);
    for level in 1..=structure.level_count() {
        let y = recover_level(coalition, shares, deltas, structure, seq, level)?;
        sum = (sum + y % p0) % p0;
    }
    Ok(sum)
}
