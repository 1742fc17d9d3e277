//! Exhaustive enumeration of matchings for small instances.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::blocking::{deviator_agent_count, deviator_pair_count, is_stable};
use crate::classic::max_cardinality_matching;
use crate::instance::{AgentId, Instance};
use crate::matching::Matching;
use crate::problem::{DeviatorProblem, Objective, SizeRegime};

pub const DEFAULT_AGENT_CAP: usize = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_agents: usize,
    /// Whether `oracle_solve` also walks every matching to find the stable
    /// ones. Turning it off lets gadget-scale perfect-regime checks enumerate
    /// only the regime family.
    pub stability_census: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_agents: DEFAULT_AGENT_CAP,
            stability_census: true,
        }
    }
}

impl OracleLimits {
    pub fn with_cap(max_agents: usize) -> Self {
        OracleLimits {
            max_agents,
            ..Default::default()
        }
    }

    pub fn without_census(self) -> Self {
        OracleLimits {
            stability_census: false,
            ..self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{agents} agents exceeds the oracle cap of {cap}")]
    TooLarge { agents: usize, cap: usize },
}

fn check_cap(inst: &Instance, limits: OracleLimits) -> Result<(), OracleError> {
    if inst.num_agents() > limits.max_agents {
        Err(OracleError::TooLarge {
            agents: inst.num_agents(),
            cap: limits.max_agents,
        })
    } else {
        Ok(())
    }
}

struct Walker<'a, F> {
    inst: &'a Instance,
    m: Matching,
    decided: Vec<bool>,
    undecided: usize,
    min_size: usize,
    allow_unmatched: bool,
    visit: F,
}

impl<F: FnMut(&Matching)> Walker<'_, F> {
    fn go(&mut self, from: usize) {
        // the smallest undecided agent is the branch variable
        let Some(v) = (from..self.decided.len()).find(|&i| !self.decided[i]) else {
            if self.m.len() >= self.min_size {
                (self.visit)(&self.m);
            }
            return;
        };
        if self.m.len() + self.undecided / 2 < self.min_size {
            return;
        }
        let a = AgentId::from_index(v);
        self.decided[v] = true;
        self.undecided -= 1;
        if self.allow_unmatched {
            self.go(v + 1);
        }
        // preference lists are unordered by id; visit partners in id order
        let mut partners: Vec<AgentId> = self
            .inst
            .prefs(a)
            .iter()
            .copied()
            .filter(|b| !self.decided[b.index()])
            .collect();
        partners.sort();
        for b in partners {
            self.decided[b.index()] = true;
            self.undecided -= 1;
            self.m.insert(a, b);
            self.go(v + 1);
            self.m.remove(a);
            self.decided[b.index()] = false;
            self.undecided += 1;
        }
        self.decided[v] = false;
        self.undecided += 1;
    }
}

/// Calls `visit` on every matching of the regime family exactly once, in a
/// fixed order.
pub fn for_each_matching(
    inst: &Instance,
    regime: SizeRegime,
    limits: OracleLimits,
    visit: impl FnMut(&Matching),
) -> Result<(), OracleError> {
    check_cap(inst, limits)?;
    let n = inst.num_agents();
    let (min_size, allow_unmatched) = match regime {
        SizeRegime::Any => (0, true),
        SizeRegime::MaxCardinality => (max_cardinality_matching(inst).len(), true),
        SizeRegime::Perfect => {
            if n % 2 == 1 {
                return Ok(());
            }
            (n / 2, false)
        }
    };
    let mut w = Walker {
        inst,
        m: Matching::empty(n),
        decided: vec![false; n],
        undecided: n,
        min_size,
        allow_unmatched,
        visit,
    };
    w.go(0);
    Ok(())
}

pub fn enumerate_matchings(inst: &Instance, regime: SizeRegime) -> Result<Vec<Matching>, OracleError> {
    enumerate_matchings_with(inst, regime, OracleLimits::default())
}

pub fn enumerate_matchings_with(
    inst: &Instance,
    regime: SizeRegime,
    limits: OracleLimits,
) -> Result<Vec<Matching>, OracleError> {
    let mut out = Vec::new();
    for_each_matching(inst, regime, limits, |m| out.push(m.clone()))?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegimeSizes {
    pub max_cardinality: usize,
    pub perfect_exists: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub regime: SizeRegime,
    pub regime_sizes: RegimeSizes,
    /// Number of matchings in the regime family.
    pub family_size: usize,
    /// `None` when the regime family is empty.
    pub optimum_bp: Option<usize>,
    pub optimum_ba: Option<usize>,
    pub witness_bp: Option<Matching>,
    pub witness_ba: Option<Matching>,
    /// `None` when the census was skipped.
    pub stable_exists: Option<bool>,
    /// Matched-agent set of every stable matching, in enumeration order.
    pub stable_matched_sets: Vec<BTreeSet<AgentId>>,
}

impl OracleReport {
    pub fn optimum(&self, objective: Objective) -> Option<usize> {
        match objective {
            Objective::BlockingPairs => self.optimum_bp,
            Objective::BlockingAgents => self.optimum_ba,
        }
    }

    pub fn witness(&self, objective: Objective) -> Option<&Matching> {
        match objective {
            Objective::BlockingPairs => self.witness_bp.as_ref(),
            Objective::BlockingAgents => self.witness_ba.as_ref(),
        }
    }
}

pub fn oracle_solve(p: &DeviatorProblem) -> Result<OracleReport, OracleError> {
    oracle_solve_with(p, OracleLimits::default())
}

/// Exact optima of both objectives over `p`'s regime plus a census of stable
/// matchings. The budget of `p` is ignored.
pub fn oracle_solve_with(p: &DeviatorProblem, limits: OracleLimits) -> Result<OracleReport, OracleError> {
    let inst = &p.instance;
    let d = &p.deviators;
    let n = inst.num_agents();
    check_cap(inst, limits)?;
    let max_card = max_cardinality_matching(inst).len();
    let in_regime = |m: &Matching| match p.regime {
        SizeRegime::Any => true,
        SizeRegime::MaxCardinality => m.len() == max_card,
        SizeRegime::Perfect => 2 * m.len() == n,
    };

    let mut report = OracleReport {
        regime: p.regime,
        regime_sizes: RegimeSizes {
            max_cardinality: max_card,
            perfect_exists: 2 * max_card == n,
        },
        family_size: 0,
        optimum_bp: None,
        optimum_ba: None,
        witness_bp: None,
        witness_ba: None,
        stable_exists: limits.stability_census.then_some(false),
        stable_matched_sets: Vec::new(),
    };
    let walk = if limits.stability_census { SizeRegime::Any } else { p.regime };
    for_each_matching(inst, walk, limits, |m| {
        if limits.stability_census && is_stable(inst, m) {
            report.stable_exists = Some(true);
            report.stable_matched_sets.push(m.matched_agents().into_iter().collect());
        }
        if !in_regime(m) {
            return;
        }
        report.family_size += 1;
        let bp = deviator_pair_count(inst, m, d);
        if report.optimum_bp.is_none_or(|best| bp < best) {
            report.optimum_bp = Some(bp);
            report.witness_bp = Some(m.clone());
        }
        let ba = deviator_agent_count(inst, m, d);
        if report.optimum_ba.is_none_or(|best| ba < best) {
            report.optimum_ba = Some(ba);
            report.witness_ba = Some(m.clone());
        }
    })?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::DeviatorSet;
    use crate::problem::Budget;

    fn ordered_triangle() -> Instance {
        Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap()
    }

    #[test]
    fn small_families() {
        let pair = Instance::from_lists(&[&[2], &[1]]).unwrap();
        assert_eq!(enumerate_matchings(&pair, SizeRegime::Any).unwrap().len(), 2);
        let tri = ordered_triangle();
        assert_eq!(enumerate_matchings(&tri, SizeRegime::Any).unwrap().len(), 4);
        assert_eq!(enumerate_matchings(&tri, SizeRegime::MaxCardinality).unwrap().len(), 3);
        assert!(enumerate_matchings(&tri, SizeRegime::Perfect).unwrap().is_empty());
    }

    #[test]
    fn matchings_are_distinct() {
        // K4 has 10 matchings: empty, 6 singles, 3 perfect
        let k4 = Instance::from_lists(&[&[2, 3, 4], &[1, 3, 4], &[1, 2, 4], &[1, 2, 3]]).unwrap();
        let all = enumerate_matchings(&k4, SizeRegime::Any).unwrap();
        assert_eq!(all.len(), 10);
        let distinct: BTreeSet<Vec<_>> = all.iter().map(|m| m.pairs().collect()).collect();
        assert_eq!(distinct.len(), 10);
        assert_eq!(enumerate_matchings(&k4, SizeRegime::Perfect).unwrap().len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::new(vec![vec![]; 15], None).unwrap();
        assert_eq!(
            enumerate_matchings(&inst, SizeRegime::Any),
            Err(OracleError::TooLarge { agents: 15, cap: 14 })
        );
        assert!(enumerate_matchings_with(&inst, SizeRegime::Any, OracleLimits::with_cap(15)).is_ok());
    }

    #[test]
    fn ordered_triangle_optima() {
        let p = DeviatorProblem::new(
            ordered_triangle(),
            DeviatorSet::all(3),
            Objective::BlockingPairs,
            SizeRegime::Any,
            Budget::Optimize,
        );
        let r = oracle_solve(&p).unwrap();
        assert_eq!(r.optimum_bp, Some(1));
        assert_eq!(r.optimum_ba, Some(2));
        assert_eq!(r.stable_exists, Some(false));
    }
}
