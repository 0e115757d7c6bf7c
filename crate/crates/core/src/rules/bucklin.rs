use crate::ballots::Profile;

use super::{is_strict_majority, Tally, TallyKind, WinningSet};

/// Cumulative Bucklin scores after each ballot level `1..=m`.
pub(crate) fn bucklin_levels(profile: &Profile) -> Vec<Tally> {
    let m = profile.num_candidates();
    let mut per_level = vec![vec![0u64; m]; m];
    for (ranking, w) in profile.ballots() {
        for (level, c) in ranking.candidates().iter().enumerate() {
            per_level[level][c.index()] += w;
        }
    }
    let mut running = vec![0u64; m];
    per_level
        .into_iter()
        .enumerate()
        .map(|(level, counts)| {
            for (acc, v) in running.iter_mut().zip(counts) {
                *acc += v;
            }
            Tally::whole(TallyKind::BucklinLevel(level + 1), running.clone())
        })
        .collect()
}

/// Bucklin adapted to truncated ballots.
///
/// Levels are added one at a time until some candidate is approved by a
/// strict majority; the highest scorers at that level win. If no level ever
/// yields a majority, the highest scorers over all levels win.
pub fn bucklin_adapted(profile: &Profile) -> WinningSet {
    let everyone = vec![true; profile.num_candidates()];
    let levels = bucklin_levels(profile);
    for tally in &levels {
        let best = tally.argmax(&everyone);
        if is_strict_majority(tally.get(best[0]), profile.voters()) {
            return WinningSet::new(best);
        }
    }
    let last = levels.last().expect("at least one candidate");
    WinningSet::new(last.argmax(&everyone))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::testutil::*;

    #[test]
    fn majority_reached_at_level_two() {
        let p = profile(3, &[(2, "ABC"), (2, "BAC"), (1, "CAB")]);
        let levels = bucklin_levels(&p);
        assert_eq!(levels[0].counts, vec![2, 2, 1]);
        assert_eq!(levels[1].counts, vec![5, 4, 1]);
        assert_eq!(bucklin_adapted(&p).candidates(), set("A"));
    }

    #[test]
    fn fully_truncated_falls_back_to_top_score() {
        let p = profile(3, &[(1, "A"), (1, "B"), (1, "C")]);
        assert_eq!(bucklin_adapted(&p).candidates(), set("ABC"));
        let p = profile(3, &[(2, "A"), (1, "B"), (2, "C")]);
        assert_eq!(bucklin_adapted(&p).candidates(), set("AC"));
    }

    #[test]
    fn unanimous_first_level() {
        let p = profile(3, &[(7, "ABC")]);
        assert_eq!(bucklin_adapted(&p).candidates(), set("A"));
    }

    #[test]
    fn simultaneous_crossers_tie() {
        // level 2: A 4, B 4 of 4 voters
        let p = profile(3, &[(2, "ABC"), (2, "BAC")]);
        assert_eq!(bucklin_adapted(&p).candidates(), set("AB"));
    }
}
