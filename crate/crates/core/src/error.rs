use core::fmt;

/// Failure cases surfaced by the library.
///
/// Every variant maps to a stable snake_case code (see [`Error::code`]) so
/// front ends can report failures machine-readably without string matching
/// on display text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The element has no inverse modulo the given modulus.
    NotInvertible,
    /// Two congruence moduli share a common factor.
    NonCoprimeModuli,
    /// A threshold lies outside the range the operation supports.
    BadThreshold,
    /// Sequence search exhausted its retry budget without a valid result.
    GenerationFailure,
    /// The secret lies outside the scheme's admissible range.
    SecretOutOfRange,
    /// The sequence fails the inequality the scheme requires.
    ConditionViolated,
    /// Fewer usable shares than the threshold demands.
    InsufficientShares,
    /// Shares are mutually inconsistent (recovered value out of range).
    InconsistentShares,
    /// The combined value exceeds the bound a valid dealing guarantees.
    ReconstructionOverflow,
    /// Sequence length or participant data does not match the structure.
    StructureMismatch,
    /// No published delta exists for the requested participant and level.
    DeltaMissing,
    /// A required private share was not supplied.
    ShareMissing,
    /// The coalition does not satisfy the access structure.
    AccessDenied,
    /// The level admits no primes between its threshold bounds.
    GapInfeasible,
    /// The candidate interval for the attack is empty.
    NoCandidates,
    /// The public exponent is not invertible modulo the group order.
    BadExponent,
    /// Safe-prime search exceeded its attempt budget.
    SafePrimeTimeout,
    /// The participant is not a member of the signing coalition.
    NotMember,
    /// The message is not a unit modulo N.
    MessageNotUnit,
    /// No correction exponent makes the combined signature verify.
    CombinationFailure,
    /// Malformed input that no other variant describes.
    Invalid(&'static str),
}

impl Error {
    /// Stable machine-readable identifier for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotInvertible => "not_invertible",
            Error::NonCoprimeModuli => "non_coprime_moduli",
            Error::BadThreshold => "bad_threshold",
            Error::GenerationFailure => "generation_failure",
            Error::SecretOutOfRange => "secret_out_of_range",
            Error::ConditionViolated => "condition_violated",
            Error::InsufficientShares => "insufficient_shares",
            Error::InconsistentShares => "inconsistent_shares",
            Error::ReconstructionOverflow => "reconstruction_overflow",
            Error::StructureMismatch => "structure_mismatch",
            Error::DeltaMissing => "delta_missing",
            Error::ShareMissing => "share_missing",
            Error::AccessDenied => "access_denied",
            Error::GapInfeasible => "gap_infeasible",
            Error::NoCandidates => "no_candidates",
            Error::BadExponent => "bad_exponent",
            Error::SafePrimeTimeout => "safe_prime_timeout",
            Error::NotMember => "not_member",
            Error::MessageNotUnit => "message_not_unit",
            Error::CombinationFailure => "combination_failure",
            Error::Invalid(_) => "invalid",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotInvertible => write!(f, "element is not invertible for the given modulus"),
            Error::NonCoprimeModuli => write!(f, "moduli are not pairwise coprime"),
            Error::BadThreshold => write!(f, "threshold out of range"),
            Error::GenerationFailure => write!(f, "sequence generation exhausted its retry budget"),
            Error::SecretOutOfRange => write!(f, "secret outside the admissible range"),
            Error::ConditionViolated => write!(f, "sequence fails the required inequality"),
            Error::InsufficientShares => write!(f, "not enough usable shares"),
            Error::InconsistentShares => write!(f, "shares are mutually inconsistent"),
            Error::ReconstructionOverflow => write!(f, "combined value exceeds the dealing bound"),
            Error::StructureMismatch => write!(f, "inputs do not match the level structure"),
            Error::DeltaMissing => write!(f, "no delta published for this participant and level"),
            Error::ShareMissing => write!(f, "required private share not supplied"),
            Error::AccessDenied => write!(f, "coalition is not authorized"),
            Error::GapInfeasible => write!(f, "no room for cross-level primes at this threshold"),
            Error::NoCandidates => write!(f, "candidate interval is empty"),
            Error::BadExponent => write!(f, "public exponent not invertible modulo the group order"),
            Error::SafePrimeTimeout => write!(f, "safe-prime search exceeded its attempt budget"),
            Error::NotMember => write!(f, "participant is not part of the coalition"),
            Error::MessageNotUnit => write!(f, "message is not a unit modulo N"),
            Error::CombinationFailure => write!(f, "no correction exponent yields a valid signature"),
            Error::Invalid(what) => write!(f, "invalid input: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
