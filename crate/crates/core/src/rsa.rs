//! Multilevel threshold RSA signing on top of the disjunctive dealing.
//!
//! The signing exponent `d` is shared with [`crate::disjunctive::deal`]
//! over `p0 = phi(N)`, so any coalition the level structure authorizes can
//! sign, and nobody below a threshold can. Signing never reassembles `d`:
//! each member raises the message to their own exponent contribution, the
//! published deltas contribute their part through public exponents, and
//! the combiner multiplies everything and strips the leftover multiples of
//! the joint modulus by a short search.
//!
//! The modulus is built from safe primes so that `phi(N) = 4 p' q'` has no
//! small odd factors; the anchor sequence primes exceed `phi(N)` and are
//! therefore automatically coprime to it.

use alloc::vec::Vec;

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::One;
use rand::RngCore;

use crate::access::{authorized_disjunctive, Coalition, LevelStructure};
use crate::arith::mod_inverse;
use crate::disjunctive::{deal, DealerTranscript, MtssShare, PublicDelta};
use crate::error::{Error, Result};
use crate::mask::mask;
use crate::primes::{
    generate_anchor_sequence, is_probable_prime, PrimeSequence, DEFAULT_PRIMALITY_ROUNDS,
};

/// Public key of the signing group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsaGroupKey {
    pub modulus: BigUint,
    pub exponent: BigUint,
}

/// A safe prime `p = 2p' + 1` with `p'` prime, `bits` bits wide.
///
/// The search walks odd candidates upward from a random starting point and
/// gives up after a budget proportional to the expected gap, so a pathological
/// seed fails loudly instead of spinning forever.
pub fn generate_safe_prime<R: RngCore + ?Sized>(bits: u64, rng: &mut R) -> Result<BigUint> {
    if bits < 4 {
        return Err(Error::Invalid("safe primes need at least 4 bits"));
    }
    let mut remaining = 400 * bits;
    while remaining > 0 {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        // Walk odd candidates upward; a fresh random start replaces a walk
        // that runs off the top of the range.
        while candidate.bits() <= bits && remaining > 0 {
            remaining -= 1;
            let half: BigUint = &candidate >> 1;
            if is_probable_prime(&half, DEFAULT_PRIMALITY_ROUNDS)
                && is_probable_prime(&candidate, DEFAULT_PRIMALITY_ROUNDS)
            {
                return Ok(candidate);
            }
            candidate += 2u32;
        }
    }
    Err(Error::SafePrimeTimeout)
}

/// Builds the group key and deals the signing exponent from explicit
/// Sophie Germain halves: `p = 2*p_half + 1` and `q = 2*q_half + 1` must
/// both be safe primes.
pub fn rsa_setup_with_safe_primes<R: RngCore + ?Sized>(
    p_half: &BigUint,
    q_half: &BigUint,
    e: &BigUint,
    structure: &LevelStructure,
    rng: &mut R,
) -> Result<(RsaGroupKey, DealerTranscript)> {
    let two = BigUint::from(2u32);
    let p = &two * p_half + 1u32;
    let q = &two * q_half + 1u32;
    for half in [p_half, q_half] {
        if !is_probable_prime(half, DEFAULT_PRIMALITY_ROUNDS) {
            return Err(Error::Invalid("modulus half is not a safe prime"));
        }
    }
    for whole in [&p, &q] {
        if !is_probable_prime(whole, DEFAULT_PRIMALITY_ROUNDS) {
            return Err(Error::Invalid("modulus half is not a safe prime"));
        }
    }
    if p == q {
        return Err(Error::Invalid("modulus needs two distinct primes"));
    }
    let modulus = &p * &q;
    let phi = (&p - 1u32) * (&q - 1u32);
    let d = mod_inverse(e, &phi).map_err(|_| Error::BadExponent)?;
    let seq = generate_anchor_sequence(&phi, structure.participant_count(), rng)?;
    let transcript = deal(&d, structure, &seq, rng)?;
    let key = RsaGroupKey { modulus, exponent: e.clone() };
    Ok((key, transcript))
}

/// Builds a fresh group: two random safe primes of `bits/2` bits each, the
/// key `(N, e)`, and the dealt signing exponent.
pub fn rsa_setup<R: RngCore + ?Sized>(
    bits: u64,
    e: &BigUint,
    structure: &LevelStructure,
    rng: &mut R,
) -> Result<(RsaGroupKey, DealerTranscript)> {
    if bits < 16 || bits % 2 != 0 {
        return Err(Error::Invalid("modulus size must be an even number of bits, at least 16"));
    }
    let p = generate_safe_prime(bits / 2, rng)?;
    let mut q = generate_safe_prime(bits / 2, rng)?;
    for _ in 0..4 {
        if q != p {
            break;
        }
        q = generate_safe_prime(bits / 2, rng)?;
    }
    if q == p {
        return Err(Error::SafePrimeTimeout);
    }
    let p_half: BigUint = &p >> 1;
    let q_half: BigUint = &q >> 1;
    rsa_setup_with_safe_primes(&p_half, &q_half, e, structure, rng)
}

/// One signer inside a fixed coalition, with the CRT weights that turn
/// their residue into an additive exponent contribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionMember {
    pub participant: usize,
    pub home_level: usize,
    pub modulus: BigUint,
    /// Product of the other members' moduli.
    pub quotient: BigUint,
    /// Inverse of that product modulo the member's own modulus.
    pub inverse: BigUint,
}

/// The public signing context of one authorized coalition: the level it
/// opens, the selected members in index order, and their joint modulus.
/// Built entirely from public data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalitionContext {
    pub target_level: usize,
    pub joint_modulus: BigUint,
    pub members: Vec<CoalitionMember>,
}

impl CoalitionContext {
    /// Selects the signing members: the first `t` coalition participants,
    /// in index order, whose home level is at or above the level the
    /// coalition opens.
    pub fn build(
        coalition: &Coalition,
        structure: &LevelStructure,
        seq: &PrimeSequence,
    ) -> Result<Self> {
        if seq.len() != structure.participant_count() {
            return Err(Error::StructureMismatch);
        }
        let target = authorized_disjunctive(coalition, structure)?.ok_or(Error::AccessDenied)?;
        let t = structure.threshold(target);
        let mut selected = Vec::with_capacity(t);
        for k in coalition.iter() {
            if structure.home_level(k) > target {
                continue;
            }
            selected.push(k);
            if selected.len() == t {
                break;
            }
        }
        debug_assert_eq!(selected.len(), t, "authorization implies t usable members");
        let joint_modulus = selected
            .iter()
            .fold(BigUint::one(), |acc, &k| acc * seq.prime(k));
        let mut members = Vec::with_capacity(t);
        for &k in &selected {
            let modulus = seq.prime(k).clone();
            let quotient = &joint_modulus / &modulus;
            let inverse = mod_inverse(&quotient, &modulus)?;
            members.push(CoalitionMember {
                participant: k,
                home_level: structure.home_level(k),
                modulus,
                quotient,
                inverse,
            });
        }
        Ok(CoalitionContext { target_level: target, joint_modulus, members })
    }

    /// The member entry for participant `k`.
    pub fn member(&self, k: usize) -> Option<&CoalitionMember> {
        self.members.iter().find(|m| m.participant == k)
    }
}

fn unit_message(msg: &BigUint, key: &RsaGroupKey) -> Result<BigUint> {
    let reduced = msg % &key.modulus;
    if reduced.gcd(&key.modulus) != BigUint::one() {
        return Err(Error::MessageNotUnit);
    }
    Ok(reduced)
}

/// One member's signature fragment: the message raised to the member's
/// exponent contribution. A member signing away from home raises to their
/// hashed share; the published delta's part comes from [`public_part`].
pub fn partial_sign(
    msg: &BigUint,
    share: &MtssShare,
    ctx: &CoalitionContext,
    key: &RsaGroupKey,
) -> Result<BigUint> {
    let member = ctx.member(share.participant).ok_or(Error::NotMember)?;
    if share.modulus != member.modulus || share.home_level != member.home_level {
        return Err(Error::StructureMismatch);
    }
    let base = unit_message(msg, key)?;
    let residue = if member.home_level == ctx.target_level {
        share.value.clone()
    } else {
        mask(share.participant, ctx.target_level, &share.value, &share.modulus)
    };
    let exponent = residue * &member.quotient % &ctx.joint_modulus * &member.inverse
        % &ctx.joint_modulus;
    Ok(base.modpow(&exponent, &key.modulus))
}

/// The public complement of one member's fragment. Members signing at
/// their home level need no correction, so their part is 1; members from
/// higher levels contribute the published delta under the same CRT weights.
pub fn public_part(
    msg: &BigUint,
    participant: usize,
    deltas: &[PublicDelta],
    ctx: &CoalitionContext,
    key: &RsaGroupKey,
) -> Result<BigUint> {
    let member = ctx.member(participant).ok_or(Error::NotMember)?;
    if member.home_level == ctx.target_level {
        return Ok(BigUint::one());
    }
    let delta = deltas
        .iter()
        .find(|d| d.participant == participant && d.target_level == ctx.target_level)
        .ok_or(Error::DeltaMissing)?;
    let base = unit_message(msg, key)?;
    let exponent = &delta.value * &member.quotient % &ctx.joint_modulus * &member.inverse
        % &ctx.joint_modulus;
    Ok(base.modpow(&exponent, &key.modulus))
}

/// Multiplies the fragments and public parts, then strips the surplus
/// multiples of the joint modulus from the exponent. Each of the at most
/// `2t` contributions is reduced below the joint modulus, so the surplus
/// is below `2t` and the search is short. `partials` and `publics` must
/// line up with the context's member order.
pub fn combine(
    msg: &BigUint,
    partials: &[BigUint],
    publics: &[BigUint],
    ctx: &CoalitionContext,
    key: &RsaGroupKey,
) -> Result<BigUint> {
    let t = ctx.members.len();
    if partials.len() != t || publics.len() != t {
        return Err(Error::Invalid("one fragment and one public part per member"));
    }
    let base = unit_message(msg, key)?;
    let mut combined = BigUint::one();
    for piece in partials.iter().chain(publics) {
        combined = combined * piece % &key.modulus;
    }
    let overshoot = base.modpow(&ctx.joint_modulus, &key.modulus);
    let corrector = mod_inverse(&overshoot, &key.modulus)?;
    let mut candidate = combined;
    for _ in 0..(2 * t) {
        if candidate.modpow(&key.exponent, &key.modulus) == base {
            return Ok(candidate);
        }
        candidate = candidate * &corrector % &key.modulus;
    }
    Err(Error::CombinationFailure)
}

/// Checks an ordinary RSA signature against the group key.
pub fn verify(msg: &BigUint, signature: &BigUint, key: &RsaGroupKey) -> bool {
    signature.modpow(&key.exponent, &key.modulus) == msg % &key.modulus
}
