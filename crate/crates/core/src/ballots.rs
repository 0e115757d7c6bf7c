//! Candidates, strict (possibly truncated) rankings, grouped profiles and
//! pairwise support counts.
//!
//! A candidate that a ranking does not list is *unranked*: the voter prefers
//! every listed candidate to it, and two unranked candidates are
//! incomparable.

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

/// Largest election size representable by [`Candidate`].
pub const MAX_CANDIDATES: usize = 1 << 16;

/// Dense candidate index in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate(u16);

impl Candidate {
    /// Panics if `index` does not fit the candidate range.
    pub fn new(index: usize) -> Self {
        assert!(
            index < MAX_CANDIDATES,
            "candidate index {index} out of range"
        );
        Candidate(index as u16)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BallotError {
    #[error("election must have at least one candidate")]
    NoCandidates,
    #[error("{0} candidates exceeds the supported maximum")]
    TooManyCandidates(usize),
    #[error("ranking lists no candidates")]
    EmptyRanking,
    #[error("candidate {0} is ranked more than once")]
    DuplicateCandidate(usize),
    #[error("candidate {candidate} is out of range for an election with {m} candidates")]
    CandidateOutOfRange { candidate: usize, m: usize },
    #[error("ranking is over {found} candidates but the profile has {expected}")]
    CandidateCountMismatch { expected: usize, found: usize },
    #[error("ballot multiplicity must be positive")]
    ZeroMultiplicity,
    #[error("profile has no voters")]
    NoVoters,
    #[error("ballot length must be at least 1")]
    ZeroBallotLength,
    #[error("ranking ranks {len} of {m} candidates; a complete ranking is required")]
    IncompleteRanking { len: usize, m: usize },
}

type Order = SmallVec<[Candidate; 8]>;

/// One voter's strict ordering, most preferred first.
///
/// Field order matters: the derived `Ord` sorts lexicographically by the
/// listed candidates, which [`Profile`] relies on to keep truncation a
/// single merge pass.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ranking {
    order: Order,
    m: usize,
}

impl Ranking {
    /// Validates and builds a ranking over `m` candidates.
    pub fn new<I>(ordered: I, m: usize) -> Result<Self, BallotError>
    where
        I: IntoIterator<Item = usize>,
    {
        check_candidate_count(m)?;
        let mut seen = vec![false; m];
        let mut order = Order::new();
        for c in ordered {
            if c >= m {
                return Err(BallotError::CandidateOutOfRange { candidate: c, m });
            }
            if std::mem::replace(&mut seen[c], true) {
                return Err(BallotError::DuplicateCandidate(c));
            }
            order.push(Candidate::new(c));
        }
        if order.is_empty() {
            return Err(BallotError::EmptyRanking);
        }
        Ok(Ranking { order, m })
    }

    /// Builds `0 > 1 > ... > m-1`.
    pub fn identity(m: usize) -> Result<Self, BallotError> {
        Ranking::new(0..m, m)
    }

    pub(crate) fn from_order_unchecked(order: Order, m: usize) -> Self {
        debug_assert!(!order.is_empty() && order.len() <= m);
        Ranking { order, m }
    }

    #[inline]
    pub fn candidates(&self) -> &[Candidate] {
        &self.order
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// Always false for a validated ranking; present for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    #[inline]
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn is_complete(&self) -> bool {
        self.order.len() == self.m
    }

    pub fn top(&self) -> Candidate {
        self.order[0]
    }

    /// Zero-based rank of `c`, or `None` when `c` is unranked.
    pub fn position(&self, c: Candidate) -> Option<usize> {
        self.order.iter().position(|&x| x == c)
    }

    /// Whether the voter strictly prefers `a` to `b`.
    pub fn prefers(&self, a: Candidate, b: Candidate) -> bool {
        match (self.position(a), self.position(b)) {
            (Some(pa), Some(pb)) => pa < pb,
            (Some(_), None) => true,
            _ => false,
        }
    }

    /// Keeps the first `min(len, self.len())` entries.
    pub fn truncated(&self, len: usize) -> Result<Ranking, BallotError> {
        if len == 0 {
            return Err(BallotError::ZeroBallotLength);
        }
        let keep = len.min(self.order.len());
        Ok(Ranking {
            order: self.order[..keep].iter().copied().collect(),
            m: self.m,
        })
    }

    /// Applies `map` to every listed candidate; `map` must be a permutation
    /// of `0..m`.
    pub fn relabeled(&self, map: &[Candidate]) -> Ranking {
        assert_eq!(map.len(), self.m, "relabeling must cover every candidate");
        Ranking {
            order: self.order.iter().map(|c| map[c.index()]).collect(),
            m: self.m,
        }
    }
}

impl fmt::Display for Ranking {
    /// `>`-joined candidate indices, e.g. `2>0>1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str(">")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

fn check_candidate_count(m: usize) -> Result<(), BallotError> {
    if m == 0 {
        Err(BallotError::NoCandidates)
    } else if m > MAX_CANDIDATES {
        Err(BallotError::TooManyCandidates(m))
    } else {
        Ok(())
    }
}

/// A multiset of rankings over a fixed candidate set.
///
/// Identical rankings are stored once with a multiplicity. Ballot classes are
/// kept sorted by ranking, so iteration order is canonical and independent
/// of how the profile was assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    m: usize,
    ballots: Vec<(Ranking, u64)>,
    voters: u64,
}

impl Profile {
    pub fn new<I>(m: usize, ballots: I) -> Result<Self, BallotError>
    where
        I: IntoIterator<Item = (Ranking, u64)>,
    {
        check_candidate_count(m)?;
        let mut list = Vec::new();
        for (ranking, count) in ballots {
            if ranking.m != m {
                return Err(BallotError::CandidateCountMismatch {
                    expected: m,
                    found: ranking.m,
                });
            }
            if count == 0 {
                return Err(BallotError::ZeroMultiplicity);
            }
            list.push((ranking, count));
        }
        if list.is_empty() {
            return Err(BallotError::NoVoters);
        }
        list.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Profile::from_sorted(m, list))
    }

    /// One voter per ranking.
    pub fn from_rankings<I>(m: usize, rankings: I) -> Result<Self, BallotError>
    where
        I: IntoIterator<Item = Ranking>,
    {
        Profile::new(m, rankings.into_iter().map(|r| (r, 1)))
    }

    /// Merges adjacent equal rankings; `sorted` must be sorted by ranking.
    fn from_sorted(m: usize, sorted: Vec<(Ranking, u64)>) -> Self {
        let mut ballots: Vec<(Ranking, u64)> = Vec::with_capacity(sorted.len());
        let mut voters = 0;
        for (ranking, count) in sorted {
            voters += count;
            match ballots.last_mut() {
                Some((last, c)) if *last == ranking => *c += count,
                _ => ballots.push((ranking, count)),
            }
        }
        Profile { m, ballots, voters }
    }

    #[inline]
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    /// Total voter count `n`.
    #[inline]
    pub fn voters(&self) -> u64 {
        self.voters
    }

    /// Distinct ballot classes with their multiplicities.
    #[inline]
    pub fn ballots(&self) -> &[(Ranking, u64)] {
        &self.ballots
    }

    pub fn candidates(&self) -> impl Iterator<Item = Candidate> {
        (0..self.m).map(Candidate::new)
    }

    pub fn is_complete(&self) -> bool {
        self.ballots.iter().all(|(r, _)| r.is_complete())
    }

    /// Keeps only the first `len` entries of every ballot.
    ///
    /// Prefix truncation preserves the lexicographic order of ballot classes,
    /// so merging happens in one linear pass.
    pub fn truncate(&self, len: usize) -> Result<Profile, BallotError> {
        if len == 0 {
            return Err(BallotError::ZeroBallotLength);
        }
        let mut ballots: Vec<(Ranking, u64)> = Vec::with_capacity(self.ballots.len());
        for (ranking, count) in &self.ballots {
            let keep = len.min(ranking.len());
            let prefix = &ranking.order[..keep];
            match ballots.last_mut() {
                Some((last, c)) if last.order.as_slice() == prefix => *c += *count,
                _ => ballots.push((
                    Ranking::from_order_unchecked(prefix.iter().copied().collect(), self.m),
                    *count,
                )),
            }
        }
        Ok(Profile {
            m: self.m,
            ballots,
            voters: self.voters,
        })
    }

    /// Renames every candidate `c` to `map[c]`.
    pub fn relabeled(&self, map: &[Candidate]) -> Profile {
        let mut list: Vec<_> = self
            .ballots
            .iter()
            .map(|(r, c)| (r.relabeled(map), *c))
            .collect();
        list.sort_by(|a, b| a.0.cmp(&b.0));
        Profile::from_sorted(self.m, list)
    }
}

/// Ballot-length truncation of every ballot in `profile`.
pub fn truncate_profile(profile: &Profile, len: usize) -> Result<Profile, BallotError> {
    profile.truncate(len)
}

/// `support(a, b)` = number of voters strictly preferring `a` to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportMatrix {
    m: usize,
    counts: Vec<u64>,
}

impl SupportMatrix {
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn support(&self, a: Candidate, b: Candidate) -> u64 {
        self.counts[a.index() * self.m + b.index()]
    }

    /// `support(a, b) - support(b, a)`.
    #[inline]
    pub fn margin(&self, a: Candidate, b: Candidate) -> i64 {
        self.support(a, b) as i64 - self.support(b, a) as i64
    }
}

pub fn support_matrix(profile: &Profile) -> SupportMatrix {
    let m = profile.m;
    let mut counts = vec![0u64; m * m];
    let mut placed = vec![false; m];
    for (ranking, w) in &profile.ballots {
        placed.iter_mut().for_each(|p| *p = false);
        // each ranked candidate beats everything not yet placed above or at it
        for &a in ranking.candidates() {
            placed[a.index()] = true;
            let row = &mut counts[a.index() * m..(a.index() + 1) * m];
            for (b, cell) in row.iter_mut().enumerate() {
                if !placed[b] {
                    *cell += w;
                }
            }
        }
    }
    SupportMatrix { m, counts }
}

/// Number of candidate pairs ordered oppositely by two complete rankings.
pub fn kendall_tau(r1: &Ranking, r2: &Ranking) -> Result<u64, BallotError> {
    for r in [r1, r2] {
        if !r.is_complete() {
            return Err(BallotError::IncompleteRanking {
                len: r.len(),
                m: r.m,
            });
        }
    }
    if r1.m != r2.m {
        return Err(BallotError::CandidateCountMismatch {
            expected: r1.m,
            found: r2.m,
        });
    }
    let mut pos2 = vec![0usize; r2.m];
    for (i, c) in r2.candidates().iter().enumerate() {
        pos2[c.index()] = i;
    }
    let seq: Vec<usize> = r1.candidates().iter().map(|c| pos2[c.index()]).collect();
    let mut inversions = 0u64;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Ok(inversions)
}
