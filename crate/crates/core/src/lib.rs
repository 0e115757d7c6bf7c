//! Winning-set voting rules under forced ballot truncation.
//!
//! * [`ballots`]: rankings, grouped profiles, truncation and pairwise support.
//! * [`mallows`]: Mallows-φ electorates via repeated insertion.
//! * [`rules`]: Bucklin, Coombs, plurality with runoff and Schulze, all
//!   returning full sets of co-winners.
//! * [`experiment`]: the truncation sweep, its seeding and CSV output.

pub mod ballots;
pub mod experiment;
pub mod mallows;
pub mod rules;

pub use ballots::{Candidate, Profile, Ranking};
pub use experiment::{GridConfig, ResultTable, Workers};
pub use mallows::Seed;
pub use rules::{Rule, RuleOptions, WinningSet};
