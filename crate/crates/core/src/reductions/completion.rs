//! Perfect SMI to SRI via companion agents, and list completion.

use thiserror::Error;

use crate::blocking::DeviatorSet;
use crate::instance::{agent, AgentId, Instance};
use crate::problem::{Budget, DeviatorProblem, SizeRegime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("needs the perfect regime with budget 0, got regime {regime} with {budget:?}")]
pub struct RegimeUnsupported {
    pub regime: SizeRegime,
    pub budget: Budget,
}

/// Companions of agent `i` (1-based) in an instance of `n` agents:
/// `b_i^1 = n + 2i - 1`, `b_i^2 = n + 2i`.
pub fn companions(n: usize, i: usize) -> (AgentId, AgentId) {
    (agent((n + 2 * i - 1) as u32), agent((n + 2 * i) as u32))
}

/// Gives every agent `a_i` two deviating companions forming a triangle
///
/// ```text
/// a_i   : P(a_i) b_i^1 b_i^2
/// b_i^1 : b_i^2 a_i
/// b_i^2 : a_i b_i^1
/// ```
///
/// so that a matching leaves no companion blocking only if every `a_i` is
/// matched within `P(a_i)`. The result uses the any-size regime.
pub fn smi_to_sri(p: &DeviatorProblem) -> Result<DeviatorProblem, RegimeUnsupported> {
    if p.regime != SizeRegime::Perfect || p.budget != Budget::AtMost(0) {
        return Err(RegimeUnsupported { regime: p.regime, budget: p.budget });
    }
    let n = p.instance.num_agents();
    let mut lists = p.instance.raw_lists();
    lists.resize(3 * n, Vec::new());
    for i in 1..=n {
        let (b1, b2) = companions(n, i);
        lists[i - 1].extend([b1.get(), b2.get()]);
        lists[b1.index()] = vec![b2.get(), i as u32];
        lists[b2.index()] = vec![i as u32, b1.get()];
    }
    let inst = Instance::new(lists, None).expect("companion lists are symmetric");
    let d = DeviatorSet::new(
        3 * n,
        p.deviators.members().iter().copied().chain((n..3 * n).map(AgentId::from_index)),
    );
    Ok(DeviatorProblem::new(inst, d, p.objective, SizeRegime::Any, p.budget))
}

/// Appends the `order` agents missing from each list, skipping the agent
/// itself.
fn complete_by(inst: &Instance, order: &[AgentId]) -> Instance {
    let n = inst.num_agents();
    let mut lists = inst.raw_lists();
    let mut present = vec![false; n];
    for a in inst.agents() {
        for &b in inst.prefs(a) {
            present[b.index()] = true;
        }
        present[a.index()] = true;
        lists[a.index()].extend(order.iter().filter(|b| !present[b.index()]).map(|b| b.get()));
        present.iter_mut().for_each(|x| *x = false);
    }
    Instance::new(lists, None).expect("complete lists are symmetric")
}

/// Appends every unranked agent in ascending id order; deviators, objective,
/// regime and budget are unchanged.
pub fn complete_lists(p: &DeviatorProblem) -> DeviatorProblem {
    let order: Vec<AgentId> = p.instance.agents().collect();
    DeviatorProblem {
        instance: complete_by(&p.instance, &order),
        ..p.clone()
    }
}

/// Dummy `a_i^s` (`1 ≤ s ≤ k`) of agent `i`: id `n + (i-1)k + s`.
pub fn dummy(n: usize, k: usize, i: usize, s: usize) -> AgentId {
    agent((n + (i - 1) * k + s) as u32)
}

/// `a_1, a_1^1, …, a_1^k, a_2, a_2^1, …, a_n^k`
pub fn global_ranking(n: usize, k: usize) -> Vec<AgentId> {
    (1..=n)
        .flat_map(|i| std::iter::once(agent(i as u32)).chain((1..=k).map(move |s| dummy(n, k, i, s))))
        .collect()
}

/// `a3` for an original agent, `a3^2` for a dummy.
pub fn minba_label(n: usize, k: usize, a: AgentId) -> String {
    let id = a.index();
    if id < n {
        format!("a{}", id + 1)
    } else {
        let rest = id - n;
        format!("a{}^{}", rest / k + 1, rest % k + 1)
    }
}

/// Complete-list instance preserving "some matching has at most `k`
/// blocking agents": `k` dummies per agent, appended to its list in order,
/// each dummy ranking its owner first, and then every list completed along
/// [`global_ranking`].
pub fn minba_complete(inst: &Instance, k: usize) -> Instance {
    let n = inst.num_agents();
    let mut lists = inst.raw_lists();
    lists.resize((k + 1) * n, Vec::new());
    for i in 1..=n {
        for s in 1..=k {
            let d = dummy(n, k, i, s);
            lists[i - 1].push(d.get());
            lists[d.index()] = vec![i as u32];
        }
    }
    let partial = Instance::new(lists, None).expect("dummy lists are symmetric");
    complete_by(&partial, &global_ranking(n, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::Objective;

    fn names(inst: &Instance, n: usize, k: usize, a: u32) -> String {
        inst.prefs(agent(a)).iter().map(|&b| minba_label(n, k, b)).collect::<Vec<_>>().join(", ")
    }

    #[test]
    fn worked_minba_lists() {
        let inst = Instance::from_lists(&[&[3], &[], &[1]]).unwrap();
        let out = minba_complete(&inst, 1);
        assert_eq!(out.num_agents(), 6);
        assert_eq!(names(&out, 3, 1, 1), "a3, a1^1, a2, a2^1, a3^1");
        let inst = Instance::from_lists(&[&[3, 2], &[1], &[1]]).unwrap();
        let out = minba_complete(&inst, 1);
        assert_eq!(names(&out, 3, 1, 1), "a3, a2, a1^1, a2^1, a3^1");
        assert_eq!(names(&out, 3, 1, 5), "a2, a1, a1^1, a3, a3^1");
    }

    #[test]
    fn companions_layout() {
        let inst = Instance::new(vec![vec![2], vec![1]], Some(vec![0, 1])).unwrap();
        let p = DeviatorProblem::new(
            inst,
            DeviatorSet::from_raw(2, &[1]),
            Objective::BlockingPairs,
            SizeRegime::Perfect,
            Budget::AtMost(0),
        );
        let out = smi_to_sri(&p).unwrap();
        assert_eq!(out.instance.num_agents(), 6);
        assert_eq!(out.instance.raw_lists(), vec![vec![2, 3, 4], vec![1, 5, 6], vec![4, 1], vec![1, 3], vec![6, 2], vec![2, 5]]);
        assert_eq!(out.deviators.members().len(), 5);
        assert_eq!(out.regime, SizeRegime::Any);
        assert!(smi_to_sri(&p.with_regime(SizeRegime::Any)).is_err());
        assert!(smi_to_sri(&p.with_budget(Budget::AtMost(1))).is_err());
    }

    #[test]
    fn completion_keeps_prefixes() {
        let inst = Instance::from_lists(&[&[3], &[], &[1]]).unwrap();
        let p = DeviatorProblem::new(inst.clone(), DeviatorSet::none(3), Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let out = complete_lists(&p);
        assert_eq!(out.instance.raw_lists(), vec![vec![3, 2], vec![1, 3], vec![1, 2]]);
    }
}
