use crate::ballots::Profile;

use super::{first_place_tally, is_strict_majority, WinningSet};

/// Plurality with runoff.
///
/// A first-place strict majority wins outright. Otherwise the two leading
/// candidates advance, together with anyone tied with the runner-up; when
/// several candidates share the lead, exactly those advance. In the
/// runoff each ballot backs its highest-ranked finalist; ballots ranking no
/// finalist abstain.
pub fn plurality_with_runoff(profile: &Profile) -> WinningSet {
    let m = profile.num_candidates();
    let everyone = vec![true; m];
    let first = first_place_tally(profile, &everyone);

    let leader = first.argmax(&everyone);
    if leader.len() == 1 && is_strict_majority(first.get(leader[0]), profile.voters()) {
        return WinningSet::singleton(leader[0]);
    }

    // second-highest count, ties counted with multiplicity
    let mut sorted = first.counts.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let threshold = sorted.get(1).copied().unwrap_or(sorted[0]);
    let finalists: Vec<bool> = first.counts.iter().map(|&v| v >= threshold).collect();

    let runoff = first_place_tally(profile, &finalists);
    WinningSet::new(runoff.argmax(&finalists))
}
