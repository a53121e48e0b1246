//! Faithful reproduction of the audited multilevel CRT scheme, plus the
//! interval attack that breaks its published cross-level values.
//!
//! The scheme under audit deals each level like the classic blinded
//! construction and lets a senior participant help at any junior level
//! through an extra public value. Unlike the hash-masked deltas in
//! [`crate::disjunctive`], that public value is `(y_i - share) mod q` for a
//! fresh prime `q`: the share is small compared to `q`, so the public value
//! pins `y_i mod q` into an interval of width `p` (the holder's own
//! modulus). Collecting those intervals over all published values filters
//! the candidate blinded values down until, typically, a single one
//! survives. [`attack`] implements exactly that filter;
//! [`attack_at_level`] feeds it from captured shares of any seniority.
//!
//! Two dealing variants are kept side by side:
//!
//! * [`HfVariant::Original`]: each level draws its own primes, and the
//!   cross primes for seniors must fit strictly between the level's
//!   threshold-boundary primes. Feasibility fails outright for many level
//!   shapes ([`Error::GapInfeasible`]), and a level's threshold can never
//!   exceed its own size ([`Error::BadThreshold`]).
//! * [`HfVariant::Fixed`]: each level draws one prime per participant able
//!   to act there, seniors included, which lifts both restrictions. The
//!   published cross values still leak; the attack applies unchanged.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::arith::{crt_solve, CongruenceSystem};
use crate::classic::sample_blinding_in_range;
use crate::error::{Error, Result};
use crate::primes::{hf_condition, hf_sequence_from, product};

/// Position `u^level_index`: `index` counts within the level, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HfParticipant {
    pub level: usize,
    pub index: usize,
}

/// A private share: the holder's level value reduced by their own prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfShare {
    pub participant: HfParticipant,
    pub modulus: BigUint,
    pub value: BigUint,
}

/// Published helper for one senior at one junior level: the junior level's
/// blinded value minus the senior's private share, reduced by the cross
/// prime assigned to that pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfCrossInfo {
    pub participant: HfParticipant,
    pub target_level: usize,
    pub modulus: BigUint,
    pub delta: BigUint,
}

/// Which dealing rules produced a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HfVariant {
    Original,
    Fixed,
}

/// Public system parameters: secret space, level shapes, and every prime
/// each level uses (own moduli and cross moduli together, ascending).
/// Level `i` always carries one prime per participant able to act there,
/// so `level_primes[i-1].len()` equals the cumulative size through `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfParameters {
    pub p0: BigUint,
    pub variant: HfVariant,
    pub sizes: Vec<usize>,
    pub thresholds: Vec<usize>,
    pub level_primes: Vec<Vec<BigUint>>,
}

/// A complete dealing: `shares` go to participants privately, everything
/// else is public.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HfDeal {
    pub parameters: HfParameters,
    pub shares: Vec<HfShare>,
    pub cross: Vec<HfCrossInfo>,
}

impl HfParameters {
    /// Number of levels.
    pub fn level_count(&self) -> usize {
        self.sizes.len()
    }

    /// Participants in levels `1..=level` (each can act at `level`).
    pub fn cumulative_size(&self, level: usize) -> usize {
        self.sizes[..level].iter().sum()
    }

    /// The own modulus of `u^level_index`. In the fixed variant own moduli
    /// are the level's smallest primes; in the original variant they are
    /// the primes outside the reserved middle run kept for seniors.
    pub fn own_prime(&self, level: usize, index: usize) -> Result<&BigUint> {
        if level < 1 || level > self.level_count() {
            return Err(Error::Invalid("unknown level"));
        }
        if index < 1 || index > self.sizes[level - 1] {
            return Err(Error::Invalid("unknown participant"));
        }
        let primes = &self.level_primes[level - 1];
        let pos = match self.variant {
            HfVariant::Fixed => index - 1,
            HfVariant::Original => {
                let t = self.thresholds[level - 1];
                let reserved = self.cumulative_size(level) - self.sizes[level - 1];
                if index <= t {
                    index - 1
                } else {
                    index - 1 + reserved
                }
            }
        };
        Ok(&primes[pos])
    }

    /// The cross modulus a senior uses at `target`. Seniors are ranked by
    /// (level, index); rank 1 takes the largest eligible prime and later
    /// ranks walk downward.
    pub fn cross_prime(&self, senior: HfParticipant, target: usize) -> Result<&BigUint> {
        if target < 2 || target > self.level_count() {
            return Err(Error::Invalid("unknown level"));
        }
        if senior.level >= target {
            return Err(Error::Invalid("not a senior of the target level"));
        }
        if senior.index < 1 || senior.index > self.sizes[senior.level - 1] {
            return Err(Error::Invalid("unknown participant"));
        }
        let rank = self.cumulative_size(senior.level - 1) + senior.index;
        let primes = &self.level_primes[target - 1];
        let pos = match self.variant {
            HfVariant::Fixed => primes.len() - rank,
            HfVariant::Original => {
                let t = self.thresholds[target - 1];
                let reserved = self.cumulative_size(target) - self.sizes[target - 1];
                t + reserved - rank
            }
        };
        Ok(&primes[pos])
    }

    /// The open interval a level's blinded value is drawn from: strictly
    /// above the product of the `t-1` largest level primes, strictly below
    /// the product of the `t` smallest. The bounds are public.
    pub fn threshold_range(&self, level: usize) -> Result<(BigUint, BigUint)> {
        if level < 1 || level > self.level_count() {
            return Err(Error::Invalid("unknown level"));
        }
        let primes = &self.level_primes[level - 1];
        let t = self.thresholds[level - 1];
        if t < 1 || t > primes.len() {
            return Err(Error::BadThreshold);
        }
        let lower = product(&primes[primes.len() - (t - 1)..]);
        let upper = product(&primes[..t]);
        Ok((lower, upper))
    }

    /// Everything checkable before any primes exist: level shapes,
    /// threshold ordering, and the variant's feasibility rules.
    fn validate_shape(&self) -> Result<()> {
        if self.p0 < BigUint::from(2u32) {
            return Err(Error::Invalid("secret space needs p0 >= 2"));
        }
        let m = self.sizes.len();
        if m == 0 {
            return Err(Error::Invalid("at least one level is required"));
        }
        if self.sizes.contains(&0) {
            return Err(Error::Invalid("levels cannot be empty"));
        }
        if self.thresholds.len() != m {
            return Err(Error::StructureMismatch);
        }
        if self.thresholds[0] < 1 {
            return Err(Error::BadThreshold);
        }
        if self.thresholds.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadThreshold);
        }
        match self.variant {
            HfVariant::Original => {
                // The original rules: a level must be able to reconstruct
                // alone, and the reserved primes for seniors must fit in
                // the gap between the threshold prime and the prime at
                // position n - t + 2.
                for (&n, &t) in self.sizes.iter().zip(&self.thresholds) {
                    if t > n {
                        return Err(Error::BadThreshold);
                    }
                }
                for (i, (&n, &t)) in self.sizes.iter().zip(&self.thresholds).enumerate() {
                    if i > 0 && t + 1 > n - t + 2 {
                        return Err(Error::GapInfeasible);
                    }
                }
            }
            HfVariant::Fixed => {
                for (i, &t) in self.thresholds.iter().enumerate() {
                    if t > self.cumulative_size(i + 1) {
                        return Err(Error::BadThreshold);
                    }
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if self.level_primes.len() != self.sizes.len() {
            return Err(Error::StructureMismatch);
        }
        for (i, primes) in self.level_primes.iter().enumerate() {
            if primes.len() != self.cumulative_size(i + 1) {
                return Err(Error::StructureMismatch);
            }
            if primes[0] <= self.p0 {
                return Err(Error::Invalid("level primes must exceed p0"));
            }
            if primes.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invalid("level primes must strictly increase"));
            }
            for (a_idx, a) in primes.iter().enumerate() {
                if num_integer::Integer::gcd(a, &self.p0) != BigUint::one() {
                    return Err(Error::NonCoprimeModuli);
                }
                for b in &primes[a_idx + 1..] {
                    if num_integer::Integer::gcd(a, b) != BigUint::one() {
                        return Err(Error::NonCoprimeModuli);
                    }
                }
            }
            if !hf_condition(&self.p0, primes, self.thresholds[i]) {
                return Err(Error::ConditionViolated);
            }
        }
        Ok(())
    }
}

fn generate_parameters<R: RngCore + ?Sized>(
    variant: HfVariant,
    p0: &BigUint,
    sizes: &[usize],
    thresholds: &[usize],
    rng: &mut R,
) -> Result<HfParameters> {
    let mut params = HfParameters {
        p0: p0.clone(),
        variant,
        sizes: sizes.to_vec(),
        thresholds: thresholds.to_vec(),
        level_primes: Vec::with_capacity(sizes.len()),
    };
    // Shape errors surface before any prime search runs.
    params.validate_shape()?;
    let mut start = p0 * 2u32;
    for (i, &t) in thresholds.iter().enumerate() {
        let count = params.cumulative_size(i + 1);
        let primes = hf_sequence_from(p0, count, t, &start, rng)?;
        start = primes.last().expect("count >= 1") + 1u32;
        params.level_primes.push(primes);
    }
    params.validate()?;
    Ok(params)
}

/// Parameter generation under the original rules. Levels draw consecutive
/// primes from disjoint ascending ranges; each level's run is long enough
/// to reserve one cross prime per senior in the middle gap.
pub fn hf_generate_parameters_original<R: RngCore + ?Sized>(
    p0: &BigUint,
    sizes: &[usize],
    thresholds: &[usize],
    rng: &mut R,
) -> Result<HfParameters> {
    generate_parameters(HfVariant::Original, p0, sizes, thresholds, rng)
}

/// Parameter generation under the repaired sizing rules.
pub fn hf_generate_parameters_fixed<R: RngCore + ?Sized>(
    p0: &BigUint,
    sizes: &[usize],
    thresholds: &[usize],
    rng: &mut R,
) -> Result<HfParameters> {
    generate_parameters(HfVariant::Fixed, p0, sizes, thresholds, rng)
}

/// Deals `s` with the given blinded values, one per level. Each must sit
/// strictly inside its level's threshold range and reduce to `s` mod p0.
pub(crate) fn hf_deal_forced(
    params: &HfParameters,
    s: &BigUint,
    blinded: &[BigUint],
) -> Result<HfDeal> {
    params.validate()?;
    if s >= &params.p0 {
        return Err(Error::SecretOutOfRange);
    }
    let m = params.level_count();
    if blinded.len() != m {
        return Err(Error::StructureMismatch);
    }
    for (i, y) in blinded.iter().enumerate() {
        let (lower, upper) = params.threshold_range(i + 1)?;
        if *y <= lower || *y >= upper {
            return Err(Error::ConditionViolated);
        }
        if y % &params.p0 != s % &params.p0 {
            return Err(Error::Invalid("blinded value does not hide the secret"));
        }
    }
    let mut shares = Vec::new();
    for (i, &n) in params.sizes.iter().enumerate() {
        for index in 1..=n {
            let participant = HfParticipant { level: i + 1, index };
            let modulus = params.own_prime(i + 1, index)?.clone();
            let value = &blinded[i] % &modulus;
            shares.push(HfShare { participant, modulus, value });
        }
    }
    let mut cross = Vec::new();
    for target in 2..=m {
        for level in 1..target {
            for index in 1..=params.sizes[level - 1] {
                let participant = HfParticipant { level, index };
                let modulus = params.cross_prime(participant, target)?.clone();
                let own = shares
                    .iter()
                    .find(|sh| sh.participant == participant)
                    .expect("share dealt above");
                let delta = (&blinded[target - 1] + &modulus - &own.value % &modulus) % &modulus;
                cross.push(HfCrossInfo { participant, target_level: target, modulus, delta });
            }
        }
    }
    Ok(HfDeal { parameters: params.clone(), shares, cross })
}

/// Deals `s` under existing parameters, drawing each level's blinded value
/// uniformly from its threshold range.
pub fn hf_deal_with<R: RngCore + ?Sized>(
    params: &HfParameters,
    s: &BigUint,
    rng: &mut R,
) -> Result<HfDeal> {
    params.validate()?;
    if s >= &params.p0 {
        return Err(Error::SecretOutOfRange);
    }
    let mut blinded = Vec::with_capacity(params.level_count());
    for level in 1..=params.level_count() {
        let (lower, upper) = params.threshold_range(level)?;
        let alpha = sample_blinding_in_range(s, &params.p0, &lower, &upper, rng)?;
        blinded.push(s + alpha * &params.p0);
    }
    hf_deal_forced(params, s, &blinded)
}

/// One-call dealing under the original rules.
pub fn hf_deal_original<R: RngCore + ?Sized>(
    s: &BigUint,
    p0: &BigUint,
    sizes: &[usize],
    thresholds: &[usize],
    rng: &mut R,
) -> Result<HfDeal> {
    let params = hf_generate_parameters_original(p0, sizes, thresholds, rng)?;
    hf_deal_with(&params, s, rng)
}

/// One-call dealing under the repaired sizing rules.
pub fn hf_deal_fixed<R: RngCore + ?Sized>(
    s: &BigUint,
    p0: &BigUint,
    sizes: &[usize],
    thresholds: &[usize],
    rng: &mut R,
) -> Result<HfDeal> {
    let params = hf_generate_parameters_fixed(p0, sizes, thresholds, rng)?;
    hf_deal_with(&params, s, rng)
}

/// The worked two-level dealing the attack write-up walks through: secret
/// 1 over p0 = 5, four seniors at threshold 2, two deep members at
/// threshold 3, with blinded values 26 and 4761.
pub fn example_dealing() -> HfDeal {
    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }
    let params = HfParameters {
        p0: u(5),
        variant: HfVariant::Fixed,
        sizes: alloc::vec![4, 2],
        thresholds: alloc::vec![2, 3],
        level_primes: alloc::vec![
            alloc::vec![u(11), u(13), u(17), u(23)],
            alloc::vec![u(29), u(31), u(37), u(61), u(67), u(71)],
        ],
    };
    hf_deal_forced(&params, &u(1), &[u(26), u(4761)]).expect("fixture parameters are valid")
}

/// Recovers the secret at `target` from the given shares. A share from a
/// senior level contributes through its published cross value; shares from
/// deeper levels cannot help. The first `t_target` usable shares in
/// (level, index) order are combined.
pub fn hf_reconstruct(
    shares: &[HfShare],
    cross: &[HfCrossInfo],
    params: &HfParameters,
    target: usize,
) -> Result<BigUint> {
    let usable = effective_residues(shares, cross, params, target, true)?;
    let t = params.thresholds[target - 1];
    if usable.len() < t {
        return Err(Error::InsufficientShares);
    }
    let pairs: Vec<(BigUint, BigUint)> = usable.into_values().take(t).collect();
    let y = crt_solve(&CongruenceSystem::new(pairs)?)?;
    Ok(y % &params.p0)
}

/// What each distinct share holder knows of level `target`'s blinded value:
/// a target-level share is a residue as-is, a senior share becomes one by
/// adding its published cross value, and duplicate captures must agree. A
/// share from deeper than `target` carries no residue of this value; it is
/// skipped when `skip_deeper` is set and rejected otherwise.
fn effective_residues(
    shares: &[HfShare],
    cross: &[HfCrossInfo],
    params: &HfParameters,
    target: usize,
    skip_deeper: bool,
) -> Result<BTreeMap<HfParticipant, (BigUint, BigUint)>> {
    if target < 1 || target > params.level_count() {
        return Err(Error::Invalid("unknown level"));
    }
    let mut usable: BTreeMap<HfParticipant, (BigUint, BigUint)> = BTreeMap::new();
    for share in shares {
        let part = share.participant;
        if part.level < 1
            || part.level > params.level_count()
            || part.index < 1
            || part.index > params.sizes[part.level - 1]
        {
            return Err(Error::Invalid("unknown participant"));
        }
        if part.level > target {
            if skip_deeper {
                continue;
            }
            return Err(Error::Invalid("share from deeper than the target level"));
        }
        let pair = if part.level == target {
            (share.value.clone(), share.modulus.clone())
        } else {
            let info = cross
                .iter()
                .find(|c| c.participant == part && c.target_level == target)
                .ok_or(Error::DeltaMissing)?;
            (
                (&share.value + &info.delta) % &info.modulus,
                info.modulus.clone(),
            )
        };
        match usable.get(&part) {
            None => {
                usable.insert(part, pair);
            }
            Some(existing) if *existing == pair => {}
            Some(_) => return Err(Error::InconsistentShares),
        }
    }
    Ok(usable)
}

/// One published cross value as the attacker sees it: the value itself,
/// the cross prime it is reduced by, and the holder's own modulus, which
/// bounds the unknown share subtracted inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackPublic {
    pub cross_modulus: BigUint,
    pub delta: BigUint,
    pub own_modulus: BigUint,
}

/// All published cross values pointing at `target`, paired with the public
/// knowledge of each holder's own modulus.
pub fn attack_publics(
    params: &HfParameters,
    cross: &[HfCrossInfo],
    target: usize,
) -> Result<Vec<AttackPublic>> {
    let mut out = Vec::new();
    for info in cross {
        if info.target_level != target {
            continue;
        }
        let own = params.own_prime(info.participant.level, info.participant.index)?;
        out.push(AttackPublic {
            cross_modulus: info.modulus.clone(),
            delta: info.delta.clone(),
            own_modulus: own.clone(),
        });
    }
    Ok(out)
}

/// One residue test inside a candidate: the candidate reduced by a cross
/// prime, and whether it lands in the window the published value allows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueCheck {
    pub value: BigUint,
    pub in_range: bool,
}

/// A candidate blinded value: its residue checks against every published
/// cross value, whether all of them pass, and the secret it would imply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackCandidate {
    pub value: BigUint,
    pub residues: Vec<ResidueCheck>,
    pub feasible: bool,
    pub secret: BigUint,
}

/// Full transcript of an interval attack.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub base: BigUint,
    pub step: BigUint,
    pub k_min: BigUint,
    pub k_max: BigUint,
    pub publics: Vec<AttackPublic>,
    pub candidates: Vec<AttackCandidate>,
    pub survivors: Vec<BigUint>,
    pub secrets: Vec<BigUint>,
}

/// Runs the interval attack from an unauthorized coalition's captured
/// shares against the published cross values of one level.
///
/// The captured shares fix the blinded value modulo their product (the
/// step), the public threshold range bounds it, and every published cross
/// value `(y - share) mod q` confines `y mod q` to a window of width
/// `own_modulus` starting at the published value. Candidates are
/// enumerated and filtered; the survivors' implied secrets are what the
/// coalition actually learns.
pub fn attack(
    corrupted: &[HfShare],
    publics: &[AttackPublic],
    lower: &BigUint,
    upper: &BigUint,
    p0: &BigUint,
) -> Result<AttackReport> {
    if corrupted.is_empty() {
        return Err(Error::Invalid("attack needs at least one captured share"));
    }
    if lower >= upper {
        return Err(Error::Invalid("candidate range is empty"));
    }
    let pairs: Vec<(BigUint, BigUint)> = corrupted
        .iter()
        .map(|sh| (sh.value.clone(), sh.modulus.clone()))
        .collect();
    let base = crt_solve(&CongruenceSystem::new(pairs)?)?;
    let step = corrupted
        .iter()
        .fold(BigUint::one(), |acc, sh| acc * &sh.modulus);
    if base >= *upper {
        return Err(Error::NoCandidates);
    }
    let k_min = if base > *lower {
        BigUint::zero()
    } else {
        (lower - &base) / &step + 1u32
    };
    let k_max = (upper - 1u32 - &base) / &step;
    if k_min > k_max {
        return Err(Error::NoCandidates);
    }
    let mut candidates = Vec::new();
    let mut survivors = Vec::new();
    let mut secrets = BTreeSet::new();
    let mut value = &base + &k_min * &step;
    let mut k = k_min.clone();
    loop {
        let mut residues = Vec::with_capacity(publics.len());
        let mut feasible = true;
        for public in publics {
            let q = &public.cross_modulus;
            let r = &value % q;
            let offset = (&r + q - &public.delta % q) % q;
            let in_range = offset < public.own_modulus;
            feasible = feasible && in_range;
            residues.push(ResidueCheck { value: r, in_range });
        }
        let secret = &value % p0;
        if feasible {
            survivors.push(value.clone());
            secrets.insert(secret.clone());
        }
        candidates.push(AttackCandidate { value: value.clone(), residues, feasible, secret });
        if k == k_max {
            break;
        }
        k += 1u32;
        value += &step;
    }
    Ok(AttackReport {
        base,
        step,
        k_min,
        k_max,
        publics: publics.to_vec(),
        candidates,
        survivors,
        secrets: secrets.into_iter().collect(),
    })
}

/// Runs the interval attack for a coalition captured at any seniority.
///
/// A target-level capture constrains the blinded value directly; a senior
/// capture does so through its published cross value, which sharpens the
/// holder's public window into an exact residue. Windows belonging to
/// captured holders are dropped from the filter accordingly. A capture
/// from deeper than `target` is rejected: it carries no residue of this
/// level's blinded value.
pub fn attack_at_level(
    corrupted: &[HfShare],
    cross: &[HfCrossInfo],
    params: &HfParameters,
    target: usize,
) -> Result<AttackReport> {
    let usable = effective_residues(corrupted, cross, params, target, false)?;
    let effective: Vec<HfShare> = usable
        .iter()
        .map(|(&participant, (value, modulus))| HfShare {
            participant,
            modulus: modulus.clone(),
            value: value.clone(),
        })
        .collect();
    let mut publics = Vec::new();
    for info in cross {
        if info.target_level != target || usable.contains_key(&info.participant) {
            continue;
        }
        let own = params.own_prime(info.participant.level, info.participant.index)?;
        publics.push(AttackPublic {
            cross_modulus: info.modulus.clone(),
            delta: info.delta.clone(),
            own_modulus: own.clone(),
        });
    }
    let (lower, upper) = params.threshold_range(target)?;
    attack(&effective, &publics, &lower, &upper, &params.p0)
}
