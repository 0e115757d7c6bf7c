mod common;

use std::collections::HashMap;

use common::permutations;
use truncalab::mallows::{sample_profile, MallowsParams, RimSampler};
use truncalab::{Ranking, Seed};

/// Upper 0.1% points of the chi-square distribution.
const CHI2_999_DF5: f64 = 20.515_005_652_432_873;
const CHI2_999_DF23: f64 = 49.728_232_466_431_5;

fn inversions(order: &[usize]) -> u32 {
    let mut count = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            count += (order[i] > order[j]) as u32;
        }
    }
    count
}

/// Chi-square statistic of `samples` draws against `P(r) ∝ φ^d(r, identity)`.
fn chi_square(m: usize, phi: f64, samples: usize, seed: u64) -> f64 {
    let perms = permutations(m);
    let weights: Vec<f64> = perms
        .iter()
        .map(|p| phi.powi(inversions(p) as i32))
        .collect();
    let z: f64 = weights.iter().sum();

    let sampler = RimSampler::new(MallowsParams::new(Ranking::identity(m).unwrap(), phi).unwrap());
    let mut rng = Seed(seed).rng();
    let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
    for _ in 0..samples {
        let r = sampler.sample(&mut rng);
        *counts
            .entry(r.candidates().iter().map(|c| c.index()).collect())
            .or_default() += 1;
    }
    perms
        .iter()
        .zip(&weights)
        .map(|(p, w)| {
            let expected = samples as f64 * w / z;
            let observed = *counts.get(p).unwrap_or(&0) as f64;
            (observed - expected).powi(2) / expected
        })
        .sum()
}

#[test]
fn three_candidates_fit_mallows() {
    for (phi, seed) in [(0.5, 1), (0.7, 2), (0.9, 3), (1.0, 4)] {
        let stat = chi_square(3, phi, 50_000, seed);
        assert!(stat < CHI2_999_DF5, "phi {phi}: chi-square {stat}");
    }
}

#[test]
fn four_candidates_fit_mallows() {
    for (phi, seed) in [(0.3, 5), (0.8, 6)] {
        let stat = chi_square(4, phi, 100_000, seed);
        assert!(stat < CHI2_999_DF23, "phi {phi}: chi-square {stat}");
    }
}

#[test]
fn adjacent_swap_ratio_is_phi() {
    // P(B>A>C) / P(A>B>C) = φ for reference A>B>C
    let phi = 0.7;
    let sampler = RimSampler::new(MallowsParams::new(Ranking::identity(3).unwrap(), phi).unwrap());
    let mut rng = Seed(11).rng();
    let (mut identity, mut swapped) = (0.0, 0.0);
    for _ in 0..200_000 {
        let r = sampler.sample(&mut rng);
        let order: Vec<usize> = r.candidates().iter().map(|c| c.index()).collect();
        if order == [0, 1, 2] {
            identity += 1.0;
        } else if order == [1, 0, 2] {
            swapped += 1.0;
        }
    }
    let ratio = swapped / identity;
    assert!((ratio - phi).abs() < 0.02, "ratio {ratio}");
}

#[test]
fn zero_dispersion_profiles_are_unanimous() {
    let mut rng = Seed(7).rng();
    for m in 2..=7 {
        let (profile, params) = sample_profile(m, 500, 0.0, &mut rng).unwrap();
        assert_eq!(profile.ballots().len(), 1);
        assert_eq!(&profile.ballots()[0].0, params.reference());
        assert_eq!(profile.voters(), 500);
    }
}

#[test]
fn sampled_profiles_use_reference_as_center() {
    // at φ = 0.2 the reference is by far the most common ballot
    let mut rng = Seed(9).rng();
    let (profile, params) = sample_profile(5, 2000, 0.2, &mut rng).unwrap();
    let (mode, _) = profile.ballots().iter().max_by_key(|(_, c)| *c).unwrap();
    assert_eq!(mode, params.reference());
}
