//! Blocking pairs, blocking agents, and their restriction to a deviator set.

use std::collections::BTreeSet;

use crate::instance::{AgentId, Instance};
use crate::matching::Matching;

/// A subset of agents, kept both as a sorted list and a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeviatorSet {
    members: Vec<AgentId>,
    mask: Vec<bool>,
}

impl DeviatorSet {
    /// Out-of-range ids are dropped; callers validate ids at the boundary.
    pub fn new(num_agents: usize, members: impl IntoIterator<Item = AgentId>) -> Self {
        let mut mask = vec![false; num_agents];
        for a in members {
            if a.index() < num_agents {
                mask[a.index()] = true;
            }
        }
        let members = (0..num_agents)
            .filter(|&i| mask[i])
            .map(AgentId::from_index)
            .collect();
        DeviatorSet { members, mask }
    }

    pub fn from_raw(num_agents: usize, ids: &[u32]) -> Self {
        DeviatorSet::new(num_agents, ids.iter().filter(|&&i| i > 0).map(|&i| AgentId::new(i)))
    }

    pub fn none(num_agents: usize) -> Self {
        DeviatorSet::new(num_agents, std::iter::empty())
    }

    pub fn all(num_agents: usize) -> Self {
        DeviatorSet::new(num_agents, (0..num_agents).map(AgentId::from_index))
    }

    #[inline]
    pub fn contains(&self, a: AgentId) -> bool {
        self.mask.get(a.index()).copied().unwrap_or(false)
    }

    pub fn members(&self) -> &[AgentId] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn num_agents(&self) -> usize {
        self.mask.len()
    }

    pub fn is_subset(&self, other: &DeviatorSet) -> bool {
        self.members.iter().all(|&a| other.contains(a))
    }
}

/// `bp(M)`, `ba(M)` and their restrictions to `D`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BlockingReport {
    pub blocking_pairs: BTreeSet<(AgentId, AgentId)>,
    pub blocking_agents: BTreeSet<AgentId>,
    pub deviator_pairs: BTreeSet<(AgentId, AgentId)>,
    pub deviator_agents: BTreeSet<AgentId>,
}

impl BlockingReport {
    pub fn is_stable(&self) -> bool {
        self.blocking_pairs.is_empty()
    }
}

/// Whether `{a, b}` blocks `m`. Assumes `a` and `b` are distinct.
#[inline]
pub fn blocks(inst: &Instance, m: &Matching, a: AgentId, b: AgentId) -> bool {
    inst.prefers(a, b, m.partner(a)) && inst.prefers(b, a, m.partner(b))
}

/// Entries of `a`'s list strictly better than its current partner.
#[inline]
fn improving<'a>(inst: &'a Instance, m: &Matching, a: AgentId) -> &'a [AgentId] {
    let list = inst.prefs(a);
    match m.partner(a) {
        None => list,
        Some(p) => match inst.rank(a, p) {
            Some(r) => &list[..r],
            None => list,
        },
    }
}

pub fn blocking_report(inst: &Instance, m: &Matching, d: &DeviatorSet) -> BlockingReport {
    let mut report = BlockingReport::default();
    for a in inst.agents() {
        for &b in improving(inst, m, a) {
            if a < b && inst.prefers(b, a, m.partner(b)) {
                report.blocking_pairs.insert((a, b));
                report.blocking_agents.insert(a);
                report.blocking_agents.insert(b);
                if d.contains(a) || d.contains(b) {
                    report.deviator_pairs.insert((a, b));
                }
                for x in [a, b] {
                    if d.contains(x) {
                        report.deviator_agents.insert(x);
                    }
                }
            }
        }
    }
    report
}

/// `|⋃_{a ∈ D} bp_a(M)|`, touching only deviators' lists and their neighbours.
pub fn deviator_pair_count(inst: &Instance, m: &Matching, d: &DeviatorSet) -> usize {
    let mut count = 0;
    for &a in d.members() {
        for &b in improving(inst, m, a) {
            // pairs with two deviators are counted from the smaller end only
            if d.contains(b) && b < a {
                continue;
            }
            if inst.prefers(b, a, m.partner(b)) {
                count += 1;
            }
        }
    }
    count
}

/// `|ba(M) ∩ D|`.
pub fn deviator_agent_count(inst: &Instance, m: &Matching, d: &DeviatorSet) -> usize {
    d.members()
        .iter()
        .filter(|&&a| {
            improving(inst, m, a)
                .iter()
                .any(|&b| inst.prefers(b, a, m.partner(b)))
        })
        .count()
}

pub fn is_stable(inst: &Instance, m: &Matching) -> bool {
    inst.agents().all(|a| {
        improving(inst, m, a)
            .iter()
            .all(|&b| !inst.prefers(b, a, m.partner(b)))
    })
}
