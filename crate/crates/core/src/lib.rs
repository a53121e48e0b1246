//! CRT-based threshold secret sharing with multilevel access structures.
//!
//! Everything here builds on one idea: a secret `s < p0` is blinded to
//! `y = s + alpha * p0`, and participants hold residues of `y` under
//! pairwise coprime moduli. Enough residues pin `y` by the Chinese
//! remainder theorem; too few leave every value of `s` (statistically)
//! equally likely, provided the moduli satisfy the right product
//! inequality.
//!
//! The crate provides, in dependency order:
//!
//! * [`arith`]: extended gcd, modular inverses, and a CRT solver over
//!   arbitrary-precision integers.
//! * [`primes`]: probabilistic primality, the product inequalities that
//!   make blinded residues safe (the interval form, the classic and
//!   statistical forms, and the anchor form pinned at `n/2`), and
//!   generators for modulus sequences satisfying them.
//! * [`access`]: multilevel structures mapping participants to levels,
//!   with disjunctive (any satisfied level) and conjunctive (every level)
//!   authorization.
//! * [`classic`]: the two single-level schemes, interval-based and
//!   blinded, as references and building blocks.
//! * [`mask`]: the keyless wide-hash share mask that lets one private
//!   share act at several levels without linking them.
//! * [`disjunctive`] / [`conjunctive`]: one dealing per access mode over a
//!   single anchor sequence, one private share per participant, public
//!   per-level deltas.
//! * [`harn_fuyou`]: a faithful reproduction of an earlier multilevel CRT
//!   scheme whose published cross-level values leak, plus the interval
//!   attack that exploits them. Kept as an executable audit.
//! * [`rsa`]: threshold RSA signing where the group exponent is dealt
//!   with the disjunctive scheme over `p0 = phi(N)`.
//!
//! The crate is `no_std` by default (with `alloc`); the `std` feature only
//! forwards to the dependencies' `std` features and adds
//! `std::error::Error` for [`error::Error`].
//!
//! Randomized routines take `&mut impl RngCore` and are deterministic per
//! seed, which the transcript tests rely on.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod access;
pub mod arith;
pub mod classic;
pub mod conjunctive;
pub mod disjunctive;
pub mod error;
pub mod harn_fuyou;
pub mod mask;
pub mod primes;
pub mod rsa;

pub use access::{authorized_conjunctive, authorized_disjunctive, Coalition, LevelStructure};
pub use arith::{crt_solve, extended_gcd, mod_inverse, CongruenceSystem};
pub use classic::{
    ab_reconstruct, ab_share, ab_share_with_alpha, mignotte_reconstruct, mignotte_share,
    BlindedSecret, ClassicShare,
};
pub use conjunctive::{deal_conjunctive, reconstruct_conjunctive, ConjunctiveTranscript};
pub use disjunctive::{
    deal, effective_residue, reconstruct, DealerTranscript, MtssShare, PublicDelta,
};
pub use error::{Error, Result};
pub use harn_fuyou::{
    attack, attack_at_level, attack_publics, example_dealing, hf_deal_fixed, hf_deal_original,
    hf_deal_with, hf_generate_parameters_fixed, hf_generate_parameters_original, hf_reconstruct,
    AttackCandidate, AttackPublic, AttackReport, HfCrossInfo, HfDeal, HfParameters,
    HfParticipant, HfShare, HfVariant, ResidueCheck,
};
pub use mask::mask;
pub use primes::{
    check_condition, generate_anchor_sequence, generate_hf_sequence, is_probable_prime,
    PrimeSequence, SequenceKind,
};
pub use rsa::{
    combine, generate_safe_prime, partial_sign, public_part, rsa_setup,
    rsa_setup_with_safe_primes, verify, CoalitionContext, CoalitionMember, RsaGroupKey,
};
