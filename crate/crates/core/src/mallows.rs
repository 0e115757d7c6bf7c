//! Mallows-φ electorates sampled with the repeated insertion model.
//!
//! `P(r) ∝ φ^d(r, reference)` where `d` is the Kendall tau distance. The
//! sampler walks the reference ranking top to bottom and inserts the `i`-th
//! item at position `j` (1 = top) of the partial list with probability
//! `φ^(i-j) / (1 + φ + ... + φ^(i-1))`. Placing item `i` at position `j`
//! puts it above `i - j` items it follows in the reference, so each
//! insertion contributes exactly `i - j` discordant pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;
use thiserror::Error;

use crate::ballots::{BallotError, Candidate, Profile, Ranking};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MallowsError {
    #[error("dispersion {0} is outside [0, 1]")]
    InvalidPhi(f64),
    #[error("reference ranking must be complete")]
    IncompleteReference,
    #[error("voter count must be at least 1")]
    NoVoters,
    #[error(transparent)]
    Ballot(#[from] BallotError),
}

/// A 64-bit seed for one independent random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Seed(pub u64);

impl Seed {
    /// ChaCha8 generator keyed by this seed.
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// SplitMix64 output function (Steele, Lea & Flood 2014).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `(master, cell, trial)` into an independent trial seed by chaining
/// SplitMix64 over each component.
pub fn derive_seed(master: Seed, cell: u64, trial: u64) -> Seed {
    let s = splitmix64(master.0);
    let s = splitmix64(s ^ cell);
    Seed(splitmix64(s ^ trial))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MallowsParams {
    reference: Ranking,
    phi: f64,
}

impl MallowsParams {
    pub fn new(reference: Ranking, phi: f64) -> Result<Self, MallowsError> {
        if !(0.0..=1.0).contains(&phi) {
            return Err(MallowsError::InvalidPhi(phi));
        }
        if !reference.is_complete() {
            return Err(MallowsError::IncompleteReference);
        }
        Ok(MallowsParams { reference, phi })
    }

    pub fn reference(&self) -> &Ranking {
        &self.reference
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn num_candidates(&self) -> usize {
        self.reference.num_candidates()
    }
}

/// Insertion distribution for the `i`-th reference item (1-based).
///
/// Entry `j - 1` is the probability of landing at position `j` counted from
/// the top of the partial list.
pub fn insertion_probabilities(i: usize, phi: f64) -> Vec<f64> {
    assert!(i >= 1);
    let weights: Vec<f64> = (1..=i).map(|j| phi.powi((i - j) as i32)).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// Repeated-insertion sampler with per-step weights precomputed.
#[derive(Debug, Clone)]
pub struct RimSampler {
    params: MallowsParams,
    // bottom_up[i-1][k] = φ^k, the weight of inserting item i at k places
    // above the bottom; totals[i-1] is their sum.
    bottom_up: Vec<Vec<f64>>,
    totals: Vec<f64>,
}

impl RimSampler {
    pub fn new(params: MallowsParams) -> Self {
        let m = params.num_candidates();
        let mut bottom_up = Vec::with_capacity(m);
        let mut totals = Vec::with_capacity(m);
        for i in 1..=m {
            let w: Vec<f64> = (0..i).map(|k| params.phi.powi(k as i32)).collect();
            totals.push(w.iter().sum());
            bottom_up.push(w);
        }
        RimSampler {
            params,
            bottom_up,
            totals,
        }
    }

    pub fn params(&self) -> &MallowsParams {
        &self.params
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Ranking {
        let reference = self.params.reference.candidates();
        let mut order: SmallVec<[Candidate; 8]> = SmallVec::with_capacity(reference.len());
        for (step, &item) in reference.iter().enumerate() {
            let len = step + 1;
            let weights = &self.bottom_up[step];
            let mut u = rng.random::<f64>() * self.totals[step];
            let mut above_bottom = len - 1;
            for (k, &w) in weights.iter().enumerate() {
                if u < w {
                    above_bottom = k;
                    break;
                }
                u -= w;
            }
            // zero-weight slots (φ = 0) can never be picked, even through
            // rounding at the tail of the scan
            if weights[above_bottom] == 0.0 {
                above_bottom = 0;
            }
            order.insert(len - 1 - above_bottom, item);
        }
        Ranking::from_order_unchecked(order, reference.len())
    }
}

/// Draws one complete ranking from the Mallows distribution.
pub fn sample_ranking_rim<R: Rng + ?Sized>(params: &MallowsParams, rng: &mut R) -> Ranking {
    RimSampler::new(params.clone()).sample(rng)
}

/// Draws a uniformly random reference ranking over `m` candidates.
pub fn random_reference<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Ranking, BallotError> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    Ranking::new(order, m)
}

/// Samples a fresh reference ranking, then `n` independent Mallows voters.
pub fn sample_profile<R: Rng + ?Sized>(
    m: usize,
    n: u64,
    phi: f64,
    rng: &mut R,
) -> Result<(Profile, MallowsParams), MallowsError> {
    if n == 0 {
        return Err(MallowsError::NoVoters);
    }
    let reference = random_reference(m, rng)?;
    let params = MallowsParams::new(reference, phi)?;
    let sampler = RimSampler::new(params);
    let mut rankings: Vec<Ranking> = (0..n).map(|_| sampler.sample(rng)).collect();
    rankings.sort_unstable();
    let profile = Profile::new(m, rankings.into_iter().map(|r| (r, 1)))?;
    Ok((profile, sampler.params))
}
