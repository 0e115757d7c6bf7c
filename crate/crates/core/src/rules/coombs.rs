use std::fmt;
use std::str::FromStr;

use crate::ballots::{Candidate, Profile};

use super::{first_place_tally, is_strict_majority, RuleError, Tally, TallyKind, WinningSet};

/// How a ballot that omits some remaining candidates casts its last-place
/// vote in Coombs elimination.
///
/// A ballot ranking every remaining candidate always gives its single vote
/// to the lowest of them; the conventions differ only for ballots that leave
/// some remaining candidates unranked.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum LastPlaceConvention {
    /// Every unranked remaining candidate receives a full last-place vote.
    #[default]
    Full,
    /// The ballot's one vote is split evenly among its unranked remaining
    /// candidates.
    Split,
    /// Unranked candidates are ignored; the lowest ranked remaining candidate
    /// gets the vote, and ballots ranking none of them abstain.
    Ranked,
}

impl LastPlaceConvention {
    pub fn name(self) -> &'static str {
        match self {
            LastPlaceConvention::Full => "full",
            LastPlaceConvention::Split => "split",
            LastPlaceConvention::Ranked => "ranked",
        }
    }
}

impl fmt::Display for LastPlaceConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LastPlaceConvention {
    type Err = RuleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(LastPlaceConvention::Full),
            "split" => Ok(LastPlaceConvention::Split),
            "ranked" => Ok(LastPlaceConvention::Ranked),
            other => Err(RuleError::UnknownConvention(other.to_string())),
        }
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Last-place tally over `remaining` using the default convention.
pub fn last_place_tally(profile: &Profile, remaining: &[Candidate]) -> Result<Tally, RuleError> {
    let mut mask = vec![false; profile.num_candidates()];
    for c in remaining {
        mask[c.index()] = true;
    }
    last_place_tally_with(profile, &mask, LastPlaceConvention::Full)
}

pub(crate) fn last_place_tally_with(
    profile: &Profile,
    remaining: &[bool],
    convention: LastPlaceConvention,
) -> Result<Tally, RuleError> {
    let m = profile.num_candidates();
    let alive = remaining.iter().filter(|&&r| r).count();
    if alive == 0 {
        return Err(RuleError::EmptyCandidateSet);
    }

    // Common denominator for the split convention.
    let unit = if convention == LastPlaceConvention::Split {
        (1..=alive as u64).try_fold(1u64, |acc, k| {
            (acc / gcd(acc, k))
                .checked_mul(k)
                .ok_or(RuleError::TallyOverflow)
        })?
    } else {
        1
    };

    let mut counts = vec![0u64; m];
    let mut listed = vec![false; m];
    for (ranking, w) in profile.ballots() {
        let mut lowest = None;
        let mut ranked_alive = 0;
        for &c in ranking.candidates() {
            listed[c.index()] = true;
            if remaining[c.index()] {
                ranked_alive += 1;
                lowest = Some(c);
            }
        }
        let unranked_alive = alive - ranked_alive;
        if unranked_alive == 0 || convention == LastPlaceConvention::Ranked {
            if let Some(c) = lowest {
                counts[c.index()] += w * unit;
            }
        } else {
            let share = match convention {
                LastPlaceConvention::Split => unit / unranked_alive as u64,
                _ => 1,
            };
            let add = w.checked_mul(share).ok_or(RuleError::TallyOverflow)?;
            for c in 0..m {
                if remaining[c] && !listed[c] {
                    counts[c] = counts[c].checked_add(add).ok_or(RuleError::TallyOverflow)?;
                }
            }
        }
        for &c in ranking.candidates() {
            listed[c.index()] = false;
        }
    }
    Ok(Tally {
        kind: TallyKind::LastPlace,
        unit,
        counts,
    })
}

/// Coombs adapted to truncated ballots, default last-place convention.
pub fn coombs_adapted(profile: &Profile) -> WinningSet {
    coombs_adapted_with(profile, LastPlaceConvention::Full)
}

/// Coombs elimination.
///
/// Each round first checks for a strict first-place majority among the
/// remaining candidates. Failing that, every candidate tied for the most
/// last-place votes is eliminated at once; when that would eliminate
/// everyone still standing, those candidates form the winning set.
pub fn coombs_adapted_with(profile: &Profile, convention: LastPlaceConvention) -> WinningSet {
    let m = profile.num_candidates();
    let mut remaining = vec![true; m];
    let mut alive = m;
    loop {
        let first = first_place_tally(profile, &remaining);
        let leaders = first.argmax(&remaining);
        if is_strict_majority(first.get(leaders[0]), profile.voters()) {
            return WinningSet::singleton(leaders[0]);
        }
        let standing: Vec<Candidate> = (0..m)
            .filter(|&c| remaining[c])
            .map(Candidate::new)
            .collect();
        if alive == 1 {
            return WinningSet::new(standing);
        }
        let last = last_place_tally_with(profile, &remaining, convention)
            .expect("candidate set is nonempty and the default limits hold");
        let eliminated = last.argmax(&remaining);
        if eliminated.len() == alive {
            return WinningSet::new(standing);
        }
        for c in eliminated {
            remaining[c.index()] = false;
            alive -= 1;
        }
    }
}
