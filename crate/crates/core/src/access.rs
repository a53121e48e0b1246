//! Multilevel access structures with increasing thresholds.
//!
//! Participants carry global 1-based indices and each lives in exactly one
//! level; level 1 outranks level 2 and so on. A coalition opens level `i`
//! disjunctively when the members drawn from levels `1..=i` reach that
//! level's threshold for at least one `i`, and conjunctively when they do
//! so for every level.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Level sizes, thresholds and the participant-to-level assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelStructure {
    sizes: Vec<usize>,
    thresholds: Vec<usize>,
    assignment: Vec<usize>,
}

impl LevelStructure {
    /// Structure whose participants are numbered level by level:
    /// `1..=n_1` in level 1, the next `n_2` in level 2, and so on.
    pub fn contiguous(sizes: &[usize], thresholds: &[usize]) -> Result<Self> {
        let mut assignment = Vec::new();
        for (level, &size) in sizes.iter().enumerate() {
            assignment.extend(core::iter::repeat(level + 1).take(size));
        }
        Self::with_assignment(sizes, thresholds, assignment)
    }

    /// Structure with an explicit map from participant `k` (1-based, entry
    /// `k-1`) to their level. Exactly `n_i` participants must map to level
    /// `i`, and thresholds must strictly increase with `t_i <= n_1+..+n_i`.
    pub fn with_assignment(
        sizes: &[usize],
        thresholds: &[usize],
        assignment: Vec<usize>,
    ) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::Invalid("structure needs at least one level"));
        }
        if sizes.len() != thresholds.len() {
            return Err(Error::Invalid("one threshold per level required"));
        }
        if sizes.contains(&0) {
            return Err(Error::Invalid("levels must be non-empty"));
        }
        let mut cumulative = 0usize;
        let mut previous = 0usize;
        for (&size, &t) in sizes.iter().zip(thresholds) {
            cumulative += size;
            if t <= previous {
                return Err(Error::Invalid("thresholds must strictly increase"));
            }
            if t > cumulative {
                return Err(Error::Invalid("threshold exceeds available members"));
            }
            previous = t;
        }
        if assignment.len() != cumulative {
            return Err(Error::StructureMismatch);
        }
        let mut counts = alloc::vec![0usize; sizes.len()];
        for &level in &assignment {
            if level == 0 || level > sizes.len() {
                return Err(Error::Invalid("assignment names a nonexistent level"));
            }
            counts[level - 1] += 1;
        }
        if counts != sizes {
            return Err(Error::StructureMismatch);
        }
        Ok(LevelStructure {
            sizes: sizes.to_vec(),
            thresholds: thresholds.to_vec(),
            assignment,
        })
    }

    /// Number of levels `m`.
    pub fn level_count(&self) -> usize {
        self.sizes.len()
    }

    /// Total participant count `n`.
    pub fn participant_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn thresholds(&self) -> &[usize] {
        &self.thresholds
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Threshold of level `i` (1-based).
    pub fn threshold(&self, level: usize) -> usize {
        self.thresholds[level - 1]
    }

    /// Home level of participant `k` (1-based).
    pub fn home_level(&self, k: usize) -> usize {
        self.assignment[k - 1]
    }

    /// Members of levels `1..=level`, ascending.
    pub fn members_through(&self, level: usize) -> impl Iterator<Item = usize> + '_ {
        self.assignment
            .iter()
            .enumerate()
            .filter(move |(_, &home)| home <= level)
            .map(|(idx, _)| idx + 1)
    }
}

/// A set of participants, identified by their global indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Coalition(BTreeSet<usize>);

impl Coalition {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        Coalition(members.into_iter().collect())
    }

    pub fn contains(&self, k: usize) -> bool {
        self.0.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for Coalition {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Coalition::new(iter)
    }
}

fn members_validated(coalition: &Coalition, structure: &LevelStructure) -> Result<()> {
    for k in coalition.iter() {
        if k == 0 || k > structure.participant_count() {
            return Err(Error::Invalid("coalition names an unknown participant"));
        }
    }
    Ok(())
}

/// Smallest level the coalition opens disjunctively, if any: the least `i`
/// with at least `t_i` members drawn from levels `1..=i`.
pub fn authorized_disjunctive(
    coalition: &Coalition,
    structure: &LevelStructure,
) -> Result<Option<usize>> {
    members_validated(coalition, structure)?;
    let mut count = 0usize;
    let mut counted = alloc::vec![0usize; structure.level_count()];
    for k in coalition.iter() {
        counted[structure.home_level(k) - 1] += 1;
    }
    for level in 1..=structure.level_count() {
        count += counted[level - 1];
        if count >= structure.threshold(level) {
            return Ok(Some(level));
        }
    }
    Ok(None)
}

/// Whether the coalition meets every level's threshold cumulatively.
pub fn authorized_conjunctive(coalition: &Coalition, structure: &LevelStructure) -> Result<bool> {
    members_validated(coalition, structure)?;
    let mut counted = alloc::vec![0usize; structure.level_count()];
    for k in coalition.iter() {
        counted[structure.home_level(k) - 1] += 1;
    }
    let mut count = 0usize;
    for level in 1..=structure.level_count() {
        count += counted[level - 1];
        if count < structure.threshold(level) {
            return Ok(false);
        }
    }
    Ok(true)
}
