//! Deviator problems, solve outcomes and solution verification.

use std::fmt;

use thiserror::Error;

use crate::blocking::{deviator_agent_count, deviator_pair_count, DeviatorSet};
use crate::classic::max_cardinality_matching;
use crate::instance::Instance;
use crate::matching::Matching;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// `|⋃_{a ∈ D} bp_a(M)|`
    BlockingPairs,
    /// `|ba(M) ∩ D|`
    BlockingAgents,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SizeRegime {
    Any,
    MaxCardinality,
    Perfect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Budget {
    AtMost(usize),
    Optimize,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::BlockingPairs => "bp",
            Objective::BlockingAgents => "ba",
        })
    }
}

impl fmt::Display for SizeRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeRegime::Any => "any",
            SizeRegime::MaxCardinality => "max",
            SizeRegime::Perfect => "perfect",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeviatorProblem {
    pub instance: Instance,
    pub deviators: DeviatorSet,
    pub objective: Objective,
    pub regime: SizeRegime,
    pub budget: Budget,
}

impl DeviatorProblem {
    /// Panics if `deviators` is sized for a different instance.
    pub fn new(
        instance: Instance,
        deviators: DeviatorSet,
        objective: Objective,
        regime: SizeRegime,
        budget: Budget,
    ) -> Self {
        assert_eq!(
            instance.num_agents(),
            deviators.num_agents(),
            "deviator set must range over the instance's agents"
        );
        DeviatorProblem {
            instance,
            deviators,
            objective,
            regime,
            budget,
        }
    }

    pub fn with_budget(&self, budget: Budget) -> Self {
        DeviatorProblem {
            budget,
            ..self.clone()
        }
    }

    pub fn with_objective(&self, objective: Objective) -> Self {
        DeviatorProblem {
            objective,
            ..self.clone()
        }
    }

    pub fn with_regime(&self, regime: SizeRegime) -> Self {
        DeviatorProblem {
            regime,
            ..self.clone()
        }
    }

    /// The objective restricted to `D` for a given matching.
    pub fn value(&self, m: &Matching) -> usize {
        objective_value(&self.instance, m, &self.deviators, self.objective)
    }
}

pub fn objective_value(inst: &Instance, m: &Matching, d: &DeviatorSet, objective: Objective) -> usize {
    match objective {
        Objective::BlockingPairs => deviator_pair_count(inst, m, d),
        Objective::BlockingAgents => deviator_agent_count(inst, m, d),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Solution { matching: Matching, value: usize },
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    /// Names the algorithm and, where one exists, the accepted configuration.
    pub certificate_note: String,
}

impl SolveOutcome {
    pub fn solution(matching: Matching, value: usize, note: impl Into<String>) -> Self {
        SolveOutcome {
            verdict: Verdict::Solution { matching, value },
            certificate_note: note.into(),
        }
    }

    pub fn infeasible(note: impl Into<String>) -> Self {
        SolveOutcome {
            verdict: Verdict::Infeasible,
            certificate_note: note.into(),
        }
    }

    pub fn value(&self) -> Option<usize> {
        match &self.verdict {
            Verdict::Solution { value, .. } => Some(*value),
            Verdict::Infeasible => None,
        }
    }

    pub fn matching(&self) -> Option<&Matching> {
        match &self.verdict {
            Verdict::Solution { matching, .. } => Some(matching),
            Verdict::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self.verdict, Verdict::Solution { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("matching does not belong to the instance")]
    ForeignMatching,
    #[error("matching violates the {regime} regime: {reason}")]
    RegimeViolation { regime: SizeRegime, reason: String },
    #[error("claimed value {claimed}, actual value {actual}")]
    ValueMismatch { claimed: usize, actual: usize },
    #[error("value {value} exceeds budget {budget}")]
    BudgetExceeded { value: usize, budget: usize },
}

/// Checks regime, value and budget; returns the verified value.
///
/// Maximum cardinality is checked against a freshly computed maximum matching.
pub fn verify_solution(p: &DeviatorProblem, m: &Matching, claimed: usize) -> Result<usize, VerifyError> {
    let inst = &p.instance;
    if !m.is_valid_for(inst) {
        return Err(VerifyError::ForeignMatching);
    }
    match p.regime {
        SizeRegime::Any => {}
        SizeRegime::MaxCardinality => {
            let best = max_cardinality_matching(inst).len();
            if m.len() != best {
                return Err(VerifyError::RegimeViolation {
                    regime: p.regime,
                    reason: format!("size {} but maximum is {}", m.len(), best),
                });
            }
        }
        SizeRegime::Perfect => {
            if inst.num_agents() % 2 == 1 {
                return Err(VerifyError::RegimeViolation {
                    regime: p.regime,
                    reason: format!("odd number of agents ({})", inst.num_agents()),
                });
            }
            if !m.is_perfect() {
                return Err(VerifyError::RegimeViolation {
                    regime: p.regime,
                    reason: format!(
                        "{} of {} agents unmatched",
                        inst.num_agents() - 2 * m.len(),
                        inst.num_agents()
                    ),
                });
            }
        }
    }
    let actual = p.value(m);
    if actual != claimed {
        return Err(VerifyError::ValueMismatch { claimed, actual });
    }
    if let Budget::AtMost(k) = p.budget {
        if claimed > k {
            return Err(VerifyError::BudgetExceeded { value: claimed, budget: k });
        }
    }
    Ok(actual)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_problem(budget: Budget) -> DeviatorProblem {
        let inst = Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap();
        DeviatorProblem::new(
            inst,
            DeviatorSet::all(3),
            Objective::BlockingPairs,
            SizeRegime::Any,
            budget,
        )
    }

    #[test]
    fn empty_deviator_set_accepts_empty_matching() {
        let inst = Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap();
        let p = DeviatorProblem::new(
            inst,
            DeviatorSet::none(3),
            Objective::BlockingPairs,
            SizeRegime::Any,
            Budget::AtMost(0),
        );
        assert_eq!(verify_solution(&p, &Matching::empty(3), 0), Ok(0));
    }

    #[test]
    fn deviator_pair_exceeds_zero_budget() {
        let p = triangle_problem(Budget::AtMost(0));
        let m = Matching::from_raw(&p.instance, &[(1, 2)]).unwrap();
        assert_eq!(
            verify_solution(&p, &m, 0),
            Err(VerifyError::ValueMismatch { claimed: 0, actual: 1 })
        );
        assert_eq!(
            verify_solution(&p, &m, 1),
            Err(VerifyError::BudgetExceeded { value: 1, budget: 0 })
        );
        assert_eq!(verify_solution(&p.with_budget(Budget::AtMost(1)), &m, 1), Ok(1));
    }

    #[test]
    fn regimes_are_enforced() {
        let p = triangle_problem(Budget::Optimize);
        let empty = Matching::empty(3);
        assert!(matches!(
            verify_solution(&p.with_regime(SizeRegime::MaxCardinality), &empty, 3),
            Err(VerifyError::RegimeViolation { .. })
        ));
        let m = Matching::from_raw(&p.instance, &[(1, 2)]).unwrap();
        // odd n: the perfect regime is rejected outright
        assert!(matches!(
            verify_solution(&p.with_regime(SizeRegime::Perfect), &m, 1),
            Err(VerifyError::RegimeViolation { .. })
        ));
    }
}
