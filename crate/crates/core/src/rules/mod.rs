//! Winning-set voting rules that accept truncated ballots.
//!
//! Every rule returns all co-winners. Majority thresholds are strict and
//! always measured against the full electorate `n`, including ballots that
//! no longer rank any candidate still in contention.

mod bucklin;
mod coombs;
mod plurality;
mod schulze;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::ballots::{Candidate, Profile};

pub use bucklin::bucklin_adapted;
pub use coombs::{coombs_adapted, coombs_adapted_with, last_place_tally, LastPlaceConvention};
pub use plurality::plurality_with_runoff;
pub use schulze::{condorcet_winner, path_strengths, schulze_beat_path};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("candidate set must not be empty")]
    EmptyCandidateSet,
    #[error("unknown rule `{0}` (expected bucklin, coombs, plurality_runoff or schulze)")]
    UnknownRule(String),
    #[error("unknown last-place convention `{0}` (expected full, split or ranked)")]
    UnknownConvention(String),
    #[error("fractional last-place tally overflowed")]
    TallyOverflow,
}

/// Nonempty, sorted set of co-winners.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WinningSet(Vec<Candidate>);

impl WinningSet {
    /// Sorts and deduplicates; panics on an empty set.
    pub fn new(mut winners: Vec<Candidate>) -> Self {
        assert!(!winners.is_empty(), "a winning set is never empty");
        winners.sort_unstable();
        winners.dedup();
        WinningSet(winners)
    }

    pub fn singleton(c: Candidate) -> Self {
        WinningSet(vec![c])
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: Candidate) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Candidate> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for WinningSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TallyKind {
    FirstPlace,
    LastPlace,
    /// Cumulative approvals through the given ballot level (1-based).
    BucklinLevel(usize),
}

/// Per-candidate counts, expressed in units of `1 / unit` votes.
///
/// `unit` is 1 for every tally except the split last-place convention,
/// which hands out fractional votes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub kind: TallyKind,
    pub unit: u64,
    pub counts: Vec<u64>,
}

impl Tally {
    fn whole(kind: TallyKind, counts: Vec<u64>) -> Self {
        Tally {
            kind,
            unit: 1,
            counts,
        }
    }

    pub fn get(&self, c: Candidate) -> u64 {
        self.counts[c.index()]
    }

    /// Candidates among `eligible` with the largest count.
    pub fn argmax(&self, eligible: &[bool]) -> Vec<Candidate> {
        let best = self
            .counts
            .iter()
            .zip(eligible)
            .filter(|(_, &e)| e)
            .map(|(&v, _)| v)
            .max();
        match best {
            None => Vec::new(),
            Some(best) => self
                .counts
                .iter()
                .enumerate()
                .filter(|&(c, &v)| eligible[c] && v == best)
                .map(|(c, _)| Candidate::new(c))
                .collect(),
        }
    }
}

/// First-place tally restricted to `remaining`: each ballot supports its
/// highest-ranked remaining candidate and abstains if it ranks none.
pub fn first_place_tally(profile: &Profile, remaining: &[bool]) -> Tally {
    let mut counts = vec![0u64; profile.num_candidates()];
    for (ranking, w) in profile.ballots() {
        if let Some(c) = ranking.candidates().iter().find(|c| remaining[c.index()]) {
            counts[c.index()] += w;
        }
    }
    Tally::whole(TallyKind::FirstPlace, counts)
}

#[inline]
pub(crate) fn is_strict_majority(count: u64, voters: u64) -> bool {
    2 * count > voters
}

/// The four rules under study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Bucklin,
    Coombs,
    PluralityRunoff,
    Schulze,
}

impl Rule {
    pub const ALL: [Rule; 4] = [
        Rule::Bucklin,
        Rule::Coombs,
        Rule::PluralityRunoff,
        Rule::Schulze,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Bucklin => "bucklin",
            Rule::Coombs => "coombs",
            Rule::PluralityRunoff => "plurality_runoff",
            Rule::Schulze => "schulze",
        }
    }

    pub fn apply(self, profile: &Profile, options: &RuleOptions) -> WinningSet {
        match self {
            Rule::Bucklin => bucklin_adapted(profile),
            Rule::Coombs => coombs_adapted_with(profile, options.coombs_last_place),
            Rule::PluralityRunoff => plurality_with_runoff(profile),
            Rule::Schulze => schulze_beat_path(profile),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Rule {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| RuleError::UnknownRule(s.to_string()))
    }
}

/// Knobs for sensitivity runs. The default is the documented convention.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RuleOptions {
    pub coombs_last_place: LastPlaceConvention,
}
