use crate::ballots::{support_matrix, Candidate, Profile, SupportMatrix};

use super::WinningSet;

/// Strongest-path strengths with margins as link weights.
///
/// `strength[a * m + b]` is the largest, over all paths from `a` to `b`, of
/// the smallest margin along the path. Computed with the Floyd–Warshall
/// bottleneck recurrence; diagonal entries are unused.
pub fn path_strengths(support: &SupportMatrix) -> Vec<i64> {
    let m = support.num_candidates();
    let mut strength = vec![0i64; m * m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                strength[a * m + b] = support.margin(Candidate::new(a), Candidate::new(b));
            }
        }
    }
    for k in 0..m {
        for i in 0..m {
            if i == k {
                continue;
            }
            let via = strength[i * m + k];
            for j in 0..m {
                if j == i || j == k {
                    continue;
                }
                let through = via.min(strength[k * m + j]);
                if through > strength[i * m + j] {
                    strength[i * m + j] = through;
                }
            }
        }
    }
    strength
}

/// Schulze beat-path winners: candidates whose strongest path to every rival
/// is at least as strong as the rival's strongest path back.
pub fn schulze_beat_path(profile: &Profile) -> WinningSet {
    let m = profile.num_candidates();
    let strength = path_strengths(&support_matrix(profile));
    let winners = (0..m)
        .filter(|&a| (0..m).all(|b| a == b || strength[a * m + b] >= strength[b * m + a]))
        .map(Candidate::new)
        .collect();
    WinningSet::new(winners)
}

/// The candidate beating every rival head-to-head, if one exists.
pub fn condorcet_winner(profile: &Profile) -> Option<Candidate> {
    let support = support_matrix(profile);
    profile.candidates().find(|&a| {
        profile
            .candidates()
            .all(|b| a == b || support.support(a, b) > support.support(b, a))
    })
}
