//! Brute-force reference implementations over expanded voter lists.
//!
//! Deliberately naive: one `Vec<usize>` per voter, no grouping, no shared
//! code with the library rules.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeSet;

use truncalab::{Candidate, Profile, Ranking};

pub type Voters = Vec<Vec<usize>>;
pub type Oracle = fn(usize, &Voters) -> BTreeSet<usize>;

pub fn expand(profile: &Profile) -> Voters {
    let mut out = Vec::new();
    for (ranking, count) in profile.ballots() {
        let order: Vec<usize> = ranking.candidates().iter().map(|c| c.index()).collect();
        for _ in 0..*count {
            out.push(order.clone());
        }
    }
    out
}

pub fn to_profile(m: usize, voters: &Voters) -> Profile {
    Profile::from_rankings(
        m,
        voters
            .iter()
            .map(|v| Ranking::new(v.iter().copied(), m).unwrap()),
    )
    .unwrap()
}

pub fn indices(set: &truncalab::WinningSet) -> BTreeSet<usize> {
    set.iter().map(Candidate::index).collect()
}

fn argmax(scores: &[i64], eligible: impl Fn(usize) -> bool) -> BTreeSet<usize> {
    let best = (0..scores.len())
        .filter(|&c| eligible(c))
        .map(|c| scores[c])
        .max()
        .unwrap();
    (0..scores.len())
        .filter(|&c| eligible(c) && scores[c] == best)
        .collect()
}

fn majority(count: i64, n: usize) -> bool {
    2 * count > n as i64
}

pub fn plurality_runoff(m: usize, voters: &Voters) -> BTreeSet<usize> {
    let n = voters.len();
    let mut first = vec![0i64; m];
    for v in voters {
        first[v[0]] += 1;
    }
    let leaders = argmax(&first, |_| true);
    if majority(first[*leaders.iter().next().unwrap()], n) {
        return leaders;
    }
    let mut sorted = first.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let threshold = if m > 1 { sorted[1] } else { sorted[0] };
    let finalists: Vec<usize> = (0..m).filter(|&c| first[c] >= threshold).collect();
    let mut runoff = vec![0i64; m];
    for v in voters {
        if let Some(&c) = v.iter().find(|c| finalists.contains(c)) {
            runoff[c] += 1;
        }
    }
    argmax(&runoff, |c| finalists.contains(&c))
}

pub fn bucklin(m: usize, voters: &Voters) -> BTreeSet<usize> {
    let n = voters.len();
    let mut score = vec![0i64; m];
    for k in 1..=m {
        score = vec![0i64; m];
        for v in voters {
            for &c in v.iter().take(k) {
                score[c] += 1;
            }
        }
        if score.iter().any(|&s| majority(s, n)) {
            return argmax(&score, |_| true);
        }
    }
    argmax(&score, |_| true)
}

/// Coombs where each ballot gives a last-place vote to every remaining
/// candidate it leaves unranked, or to its lowest remaining candidate when
/// it ranks them all.
pub fn coombs(m: usize, voters: &Voters) -> BTreeSet<usize> {
    let n = voters.len();
    let mut remaining: BTreeSet<usize> = (0..m).collect();
    loop {
        let mut first = vec![0i64; m];
        for v in voters {
            if let Some(&c) = v.iter().find(|c| remaining.contains(c)) {
                first[c] += 1;
            }
        }
        if let Some(c) = remaining.iter().copied().find(|&c| majority(first[c], n)) {
            return BTreeSet::from([c]);
        }
        if remaining.len() == 1 {
            return remaining;
        }
        let mut last = vec![0i64; m];
        for v in voters {
            let unranked: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|c| !v.contains(c))
                .collect();
            if unranked.is_empty() {
                let lowest = v.iter().rev().find(|c| remaining.contains(c)).unwrap();
                last[*lowest] += 1;
            } else {
                for c in unranked {
                    last[c] += 1;
                }
            }
        }
        let losers = argmax(&last, |c| remaining.contains(&c));
        if losers == remaining {
            return remaining;
        }
        remaining = remaining.difference(&losers).copied().collect();
    }
}

/// Pairwise support: voters ranking `a` strictly above `b`, with ranked
/// candidates above unranked ones.
pub fn support(m: usize, voters: &Voters) -> Vec<Vec<i64>> {
    let mut d = vec![vec![0i64; m]; m];
    for v in voters {
        let pos = |c: usize| v.iter().position(|&x| x == c);
        for a in 0..m {
            for b in 0..m {
                let above = match (pos(a), pos(b)) {
                    (Some(i), Some(j)) => i < j,
                    (Some(_), None) => true,
                    _ => false,
                };
                if a != b && above {
                    d[a][b] += 1;
                }
            }
        }
    }
    d
}

/// Textbook Schulze: links only where `d[a][b] > d[b][a]`, weighted by the
/// margin, and path strengths found by enumerating every simple path.
pub fn schulze(m: usize, voters: &Voters) -> BTreeSet<usize> {
    let d = support(m, voters);
    let link = |a: usize, b: usize| {
        let margin = d[a][b] - d[b][a];
        (margin > 0).then_some(margin)
    };

    fn best_path(
        at: usize,
        target: usize,
        visited: &mut Vec<bool>,
        floor: i64,
        link: &dyn Fn(usize, usize) -> Option<i64>,
    ) -> i64 {
        if at == target {
            return floor;
        }
        let mut best = 0;
        for next in 0..visited.len() {
            if visited[next] {
                continue;
            }
            if let Some(w) = link(at, next) {
                visited[next] = true;
                best = best.max(best_path(next, target, visited, floor.min(w), link));
                visited[next] = false;
            }
        }
        best
    }

    let mut p = vec![vec![0i64; m]; m];
    for a in 0..m {
        for b in 0..m {
            if a != b {
                let mut visited = vec![false; m];
                visited[a] = true;
                p[a][b] = best_path(a, b, &mut visited, i64::MAX, &link);
            }
        }
    }
    (0..m)
        .filter(|&a| (0..m).all(|b| a == b || p[a][b] >= p[b][a]))
        .collect()
}

pub fn condorcet(m: usize, voters: &Voters) -> Option<usize> {
    let d = support(m, voters);
    (0..m).find(|&a| (0..m).all(|b| a == b || d[a][b] > d[b][a]))
}

pub fn truncate(voters: &Voters, len: usize) -> Voters {
    voters
        .iter()
        .map(|v| v.iter().take(len).copied().collect())
        .collect()
}

/// Every permutation of `0..m` in lexicographic order.
pub fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == m {
            out.push(prefix.clone());
            return;
        }
        for c in 0..m {
            if !prefix.contains(&c) {
                prefix.push(c);
                go(prefix, m, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), m, &mut out);
    out
}

/// All ordered electorates of `n` voters drawn from `ballots`.
pub fn electorates(ballots: &[Vec<usize>], n: usize) -> Vec<Voters> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Voters| {
                ballots.iter().map(move |b| {
                    let mut next = e.clone();
                    next.push(b.clone());
                    next
                })
            })
            .collect();
    }
    out
}
