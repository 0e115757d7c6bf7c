//! Truncation sweeps over a grid of `(candidates, voters, φ)` cells.
//!
//! Each trial samples one Mallows profile, records every rule's winning set
//! on the complete ballots, then truncates all ballots to each length
//! `L = m-1, ..., 1` and flags whether the rule still returns exactly the
//! same set. Match counts per `(cell, rule, L)` make up the result table.
//!
//! Every trial draws from its own generator, seeded from the master seed,
//! the cell's parameters and the trial index. Results therefore do not
//! depend on scheduling or worker count.

use std::fmt;
use std::io;
use std::num::NonZeroUsize;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use thiserror::Error;

use crate::ballots::{Profile, Ranking};
use crate::mallows::{derive_seed, sample_profile, splitmix64, MallowsError, Seed};
use crate::rules::{Rule, RuleOptions};

/// CSV header emitted by [`emit_csv`].
pub const CSV_HEADER: &str = "candidates,voters,phi,rule,ballot_length,trials,matches,probability";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid grid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Mallows(#[from] MallowsError),
    #[error("failed to start worker pool: {0}")]
    WorkerPool(String),
    #[error("failed to record profile: {0}")]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub candidate_counts: Vec<usize>,
    pub voter_counts: Vec<u64>,
    pub phis: Vec<f64>,
    pub trials: u64,
    pub master_seed: Seed,
    pub rules: Vec<Rule>,
    pub store_profiles: bool,
    pub rule_options: RuleOptions,
}

impl Default for GridConfig {
    /// 4 candidate counts × 7 electorate sizes × 4 dispersions, 1000 trials
    /// per cell, all four rules.
    fn default() -> Self {
        GridConfig {
            candidate_counts: vec![4, 5, 6, 7],
            voter_counts: vec![100, 200, 300, 400, 500, 600, 2000],
            phis: vec![0.7, 0.8, 0.9, 1.0],
            trials: 1000,
            master_seed: Seed(42),
            rules: Rule::ALL.to_vec(),
            store_profiles: false,
            rule_options: RuleOptions::default(),
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |msg: &str| Err(ExperimentError::InvalidConfig(msg.to_string()));
        if self.candidate_counts.is_empty() || self.candidate_counts.contains(&0) {
            return fail("candidate counts must be a nonempty list of positive integers");
        }
        if self.voter_counts.is_empty() || self.voter_counts.contains(&0) {
            return fail("voter counts must be a nonempty list of positive integers");
        }
        if self.phis.is_empty() || self.phis.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return fail("dispersion values must be a nonempty list within [0, 1]");
        }
        if self.trials == 0 {
            return fail("trial count must be positive");
        }
        if self.rules.is_empty() {
            return fail("at least one rule is required");
        }
        Ok(())
    }

    /// Cells in sweep order: candidates, then voters, then φ.
    pub fn cells(&self) -> Vec<CellSpec> {
        let mut cells = Vec::new();
        for &m in &self.candidate_counts {
            for &n in &self.voter_counts {
                for &phi in &self.phis {
                    cells.push(CellSpec { m, n, phi });
                }
            }
        }
        cells
    }
}

/// One `(candidates, voters, φ)` grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub m: usize,
    pub n: u64,
    pub phi: f64,
}

impl CellSpec {
    /// Stream identifier for this cell, a function of its parameters only,
    /// so a cell reproduces the same trials inside any grid.
    pub fn key(&self) -> u64 {
        let k = splitmix64(self.m as u64);
        let k = splitmix64(k ^ self.n);
        splitmix64(k ^ self.phi.to_bits())
    }

    pub fn trial_seed(&self, master: Seed, trial: u64) -> Seed {
        derive_seed(master, self.key(), trial)
    }
}

impl fmt::Display for CellSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} n={} phi={:.2}", self.m, self.n, self.phi)
    }
}

/// Per-rule match flags of one trial, indexed by ballot length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialFlags {
    m: usize,
    rules: Vec<Rule>,
    // matched[r][L-1]
    matched: Vec<Vec<bool>>,
}

impl TrialFlags {
    pub fn num_candidates(&self) -> usize {
        self.m
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Whether `rule` returned its complete-ballot winning set at length
    /// `len`. Panics if `rule` was not evaluated or `len` is outside `1..=m`.
    pub fn matched(&self, rule: Rule, len: usize) -> bool {
        let r = self
            .rules
            .iter()
            .position(|&x| x == rule)
            .expect("rule was not evaluated in this trial");
        assert!((1..=self.m).contains(&len), "ballot length out of range");
        self.matched[r][len - 1]
    }

    /// Flags for `rule` as a slice indexed by `L - 1`.
    pub fn for_rule(&self, rule: Rule) -> Option<&[bool]> {
        let r = self.rules.iter().position(|&x| x == rule)?;
        Some(&self.matched[r])
    }
}

/// Compares every rule's winning set under each forced ballot length with
/// its winning set on `profile`.
///
/// `profile` is taken as the complete electorate; length `m` is a match by
/// definition.
pub fn truncation_flags(profile: &Profile, rules: &[Rule], options: &RuleOptions) -> TrialFlags {
    let m = profile.num_candidates();
    let truth: Vec<_> = rules.iter().map(|r| r.apply(profile, options)).collect();
    let mut matched = vec![vec![false; m]; rules.len()];
    for flags in &mut matched {
        flags[m - 1] = true;
    }
    // truncating the previous level's profile keeps each step small
    let mut current = profile.clone();
    for len in (1..m).rev() {
        current = current.truncate(len).expect("len >= 1");
        for (r, rule) in rules.iter().enumerate() {
            matched[r][len - 1] = rule.apply(&current, options) == truth[r];
        }
    }
    TrialFlags {
        m,
        rules: rules.to_vec(),
        matched,
    }
}

/// Outcome of one simulated election.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub flags: TrialFlags,
    pub reference: Ranking,
    pub profile: Profile,
}

/// Samples one Mallows profile and evaluates all truncation levels.
pub fn run_trial(
    m: usize,
    n: u64,
    phi: f64,
    rules: &[Rule],
    seed: Seed,
    options: &RuleOptions,
) -> Result<TrialOutcome, ExperimentError> {
    let mut rng = seed.rng();
    let (profile, params) = sample_profile(m, n, phi, &mut rng)?;
    let flags = truncation_flags(&profile, rules, options);
    Ok(TrialOutcome {
        flags,
        reference: params.reference().clone(),
        profile,
    })
}

/// Aggregated matches for one `(cell, rule, L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub m: usize,
    pub n: u64,
    pub phi: f64,
    pub rule: Rule,
    pub ballot_length: usize,
    pub trials: u64,
    pub matches: u64,
}

impl CellResult {
    pub fn probability(&self) -> f64 {
        self.matches as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub master_seed: Seed,
    pub build: String,
    /// Seconds since the Unix epoch when the run started.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    pub config: GridConfig,
    pub cells: Vec<CellResult>,
    pub provenance: Provenance,
}

impl ResultTable {
    pub fn get(&self, m: usize, n: u64, phi: f64, rule: Rule, len: usize) -> Option<&CellResult> {
        self.cells.iter().find(|c| {
            c.m == m && c.n == n && c.phi == phi && c.rule == rule && c.ballot_length == len
        })
    }
}

/// How trials are spread across threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Plain sequential loop on the calling thread.
    Single,
    /// A dedicated pool with this many threads.
    Threads(NonZeroUsize),
    /// Rayon's global pool.
    #[default]
    Auto,
}

/// One stored profile, rendered as
/// `m,n,phi,trial_index,reference,ballot:multiplicity;...`.
#[derive(Debug, Clone, Copy)]
pub struct ProfileRecord<'a> {
    pub cell: CellSpec,
    pub trial_index: u64,
    pub reference: &'a Ranking,
    pub profile: &'a Profile,
}

impl fmt::Display for ProfileRecord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{:.2},{},{},",
            self.cell.m, self.cell.n, self.cell.phi, self.trial_index, self.reference
        )?;
        for (i, (ranking, count)) in self.profile.ballots().iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{ranking}:{count}")?;
        }
        Ok(())
    }
}

/// Hooks into a running sweep.
pub trait GridObserver {
    fn cell_finished(&mut self, _cell: &CellSpec, _index: usize, _total: usize) {}

    /// Called in trial order for every trial when `store_profiles` is set.
    fn profile(&mut self, _record: &ProfileRecord<'_>) -> io::Result<()> {
        Ok(())
    }
}

impl GridObserver for () {}

pub fn run_grid(config: &GridConfig, workers: Workers) -> Result<ResultTable, ExperimentError> {
    run_grid_with(config, workers, &mut ())
}

pub fn run_grid_with(
    config: &GridConfig,
    workers: Workers,
    observer: &mut dyn GridObserver,
) -> Result<ResultTable, ExperimentError> {
    config.validate()?;
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    let pool = match workers {
        Workers::Threads(k) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(k.get())
                .build()
                .map_err(|e| ExperimentError::WorkerPool(e.to_string()))?,
        ),
        _ => None,
    };

    let cells = config.cells();
    let mut results = Vec::new();
    for (index, cell) in cells.iter().enumerate() {
        let run = |t: u64| {
            let seed = cell.trial_seed(config.master_seed, t);
            run_trial(
                cell.m,
                cell.n,
                cell.phi,
                &config.rules,
                seed,
                &config.rule_options,
            )
        };
        let outcomes: Result<Vec<TrialOutcome>, ExperimentError> = match (&pool, workers) {
            (_, Workers::Single) => (0..config.trials).map(run).collect(),
            (Some(pool), _) => {
                pool.install(|| (0..config.trials).into_par_iter().map(run).collect())
            }
            (None, _) => (0..config.trials).into_par_iter().map(run).collect(),
        };
        let outcomes = outcomes?;

        if config.store_profiles {
            for (t, outcome) in outcomes.iter().enumerate() {
                observer.profile(&ProfileRecord {
                    cell: *cell,
                    trial_index: t as u64,
                    reference: &outcome.reference,
                    profile: &outcome.profile,
                })?;
            }
        }

        for &rule in &config.rules {
            let mut matches = vec![0u64; cell.m];
            for outcome in &outcomes {
                let flags = outcome.flags.for_rule(rule).expect("rule evaluated");
                for (len, &hit) in flags.iter().enumerate() {
                    matches[len] += hit as u64;
                }
            }
            results.extend(
                matches
                    .into_iter()
                    .enumerate()
                    .map(|(len, matches)| CellResult {
                        m: cell.m,
                        n: cell.n,
                        phi: cell.phi,
                        rule,
                        ballot_length: len + 1,
                        trials: config.trials,
                        matches,
                    }),
            );
        }
        observer.cell_finished(cell, index, cells.len());
    }

    Ok(ResultTable {
        config: config.clone(),
        cells: results,
        provenance: Provenance {
            master_seed: config.master_seed,
            build: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
            timestamp,
        },
    })
}

/// Long-format CSV, one row per `(cell, rule, L)`, sorted by
/// `(candidates, voters, phi, rule, ballot_length)`.
pub fn emit_csv(table: &ResultTable) -> String {
    let mut rows: Vec<&CellResult> = table.cells.iter().collect();
    rows.sort_by(|a, b| {
        a.m.cmp(&b.m)
            .then(a.n.cmp(&b.n))
            .then(a.phi.total_cmp(&b.phi))
            .then(a.rule.cmp(&b.rule))
            .then(a.ballot_length.cmp(&b.ballot_length))
    });
    let mut out = String::with_capacity(48 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.2},{},{},{},{},{:.4}\n",
            r.m,
            r.n,
            r.phi,
            r.rule,
            r.ballot_length,
            r.trials,
            r.matches,
            r.probability()
        ));
    }
    out
}
