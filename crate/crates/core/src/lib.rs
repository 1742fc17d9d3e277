//! Stable matchings when only some agents (the deviators) may act on a
//! blocking pair.

pub mod blocking;
pub mod classic;
pub mod cli;
pub mod format;
pub mod fpt;
pub mod generators;
pub mod instance;
pub mod matching;
pub mod oracle;
pub mod problem;
pub mod reductions;
pub mod shortlist;

pub use blocking::{blocking_report, BlockingReport, DeviatorSet};
pub use instance::{agent, AgentId, Instance, InstanceError};
pub use matching::{Matching, MatchingError};
pub use problem::{
    objective_value, verify_solution, Budget, DeviatorProblem, Objective, SizeRegime, SolveOutcome, Verdict,
    VerifyError,
};
