//! Exact solvers for instances whose preference lists have length at most 2.
//!
//! The acceptability graph is then a disjoint union of paths and cycles, and
//! no blocking pair spans two components, so each component is solved alone.

use thiserror::Error;

use crate::blocking::DeviatorSet;
use crate::classic::{gale_shapley, irving_sr};
use crate::instance::{AgentId, Instance};
use crate::matching::Matching;
use crate::problem::{objective_value, Budget, DeviatorProblem, Objective, SizeRegime, SolveOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShortlistError {
    #[error("agent {0} has a preference list longer than 2")]
    ListTooLong(AgentId),
    #[error("this solver does not handle the {0} regime")]
    WrongRegime(SizeRegime),
}

/// Paths and cycles of a `d_max ≤ 2` instance.
///
/// Components are listed by smallest contained id. A path starts at its
/// smaller endpoint; an isolated agent is a path of one. A cycle starts at its
/// smallest id and continues towards that agent's first choice, so an ordered
/// cycle always reads with every agent preferring its successor.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub paths: Vec<Vec<AgentId>>,
    pub even_cycles: Vec<Vec<AgentId>>,
    pub odd_cycles: Vec<Vec<AgentId>>,
}

pub fn decompose(inst: &Instance) -> Result<ComponentDecomposition, ShortlistError> {
    if let Some(a) = inst.agents().find(|&a| inst.prefs(a).len() > 2) {
        return Err(ShortlistError::ListTooLong(a));
    }
    let n = inst.num_agents();
    let mut seen = vec![false; n];
    let mut out = ComponentDecomposition::default();
    let mut stack = Vec::new();
    for start in inst.agents() {
        if seen[start.index()] {
            continue;
        }
        let mut members = Vec::new();
        seen[start.index()] = true;
        stack.push(start);
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in inst.prefs(v) {
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        let endpoint = members.iter().copied().filter(|&v| inst.prefs(v).len() < 2).min();
        match endpoint {
            Some(first) => out.paths.push(walk(inst, first, None)),
            None => {
                // `start` is the smallest id of the component
                let cycle = walk(inst, start, Some(inst.prefs(start)[0]));
                if cycle.len().is_multiple_of(2) {
                    out.even_cycles.push(cycle);
                } else {
                    out.odd_cycles.push(cycle);
                }
            }
        }
    }
    Ok(out)
}

fn walk(inst: &Instance, first: AgentId, second: Option<AgentId>) -> Vec<AgentId> {
    let mut seq = vec![first];
    let mut prev = first;
    let mut cur = match second.or_else(|| inst.prefs(first).first().copied()) {
        Some(c) => c,
        None => return seq,
    };
    while cur != first {
        seq.push(cur);
        let Some(&next) = inst.prefs(cur).iter().find(|&&x| x != prev) else { break };
        prev = cur;
        cur = next;
    }
    seq
}

/// Whether every agent of the cycle ranks its successor first.
pub fn is_ordered_cycle(inst: &Instance, cycle: &[AgentId]) -> bool {
    let k = cycle.len();
    (0..k).all(|i| inst.prefs(cycle[i])[0] == cycle[(i + 1) % k])
}

/// How the any-size solver treated one odd cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OddCycleCase {
    /// The cycle admits a stable matching.
    Stable,
    /// Two consecutive conformists: the second stays unmatched, cost 0.
    ConformistPair,
    /// A conformist's first choice is a deviator who stays unmatched:
    /// one blocking pair, one blocking deviator.
    ConformistThenDeviator,
    /// Every agent is a deviator: one blocking pair, two blocking deviators.
    AllDeviators,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddCycleTreatment {
    pub cycle: Vec<AgentId>,
    pub case: OddCycleCase,
    pub unmatched: Option<AgentId>,
}

fn check_regime(p: &DeviatorProblem, allowed: &[SizeRegime]) -> Result<(), ShortlistError> {
    if allowed.contains(&p.regime) {
        Ok(())
    } else {
        Err(ShortlistError::WrongRegime(p.regime))
    }
}

fn finish(p: &DeviatorProblem, m: Matching, note: String) -> SolveOutcome {
    let value = p.value(&m);
    match p.budget {
        Budget::AtMost(k) if value > k => SolveOutcome::infeasible(format!("{note}; optimum {value} > k={k}")),
        _ => SolveOutcome::solution(m, value, note),
    }
}

/// Stable matching of a bipartite component via Gale–Shapley.
fn stable_bipartite(inst: &Instance, comp: &[AgentId], m: &mut Matching) {
    let (local, map) = inst.induced(comp);
    let sides = local.two_colouring().expect("paths and even cycles are bipartite");
    let local = local.with_sides(sides).expect("2-colouring separates every pair");
    let lm = gale_shapley(&local).expect("sides attached");
    for (a, b) in lm.pairs() {
        m.insert(map[a.index()], map[b.index()]);
    }
}

/// Matches the cycle around, leaving position `skip` unmatched.
fn leave_out(cycle: &[AgentId], skip: usize, m: &mut Matching) {
    let k = cycle.len();
    for x in 0..k / 2 {
        m.insert(cycle[(skip + 2 * x + 1) % k], cycle[(skip + 2 * x + 2) % k]);
    }
}

/// An optimal matching over all matchings, together with the
/// case taken on each odd cycle.
pub fn solve_shortlist_any_detailed(
    p: &DeviatorProblem,
) -> Result<(SolveOutcome, Vec<OddCycleTreatment>), ShortlistError> {
    check_regime(p, &[SizeRegime::Any])?;
    let inst = &p.instance;
    let d = &p.deviators;
    let dec = decompose(inst)?;
    let mut m = Matching::empty(inst.num_agents());

    for comp in dec.paths.iter().chain(&dec.even_cycles) {
        stable_bipartite(inst, comp, &mut m);
    }

    let mut treatments = Vec::with_capacity(dec.odd_cycles.len());
    for cycle in &dec.odd_cycles {
        if !is_ordered_cycle(inst, cycle) {
            let (local, map) = inst.induced(cycle);
            let lm = irving_sr(&local).expect("only ordered odd cycles lack a stable matching");
            for (a, b) in lm.pairs() {
                m.insert(map[a.index()], map[b.index()]);
            }
            treatments.push(OddCycleTreatment {
                cycle: cycle.clone(),
                case: OddCycleCase::Stable,
                unmatched: cycle.iter().copied().find(|&a| !m.is_matched(a)),
            });
            continue;
        }
        let k = cycle.len();
        // v = u + 1 is u's first choice on an ordered cycle
        let pick = |want_conformist_v: bool| {
            (0..k)
                .filter(|&u| !d.contains(cycle[u]))
                .map(|u| (u + 1) % k)
                .filter(|&v| d.contains(cycle[v]) != want_conformist_v)
                .min_by_key(|&v| cycle[v])
        };
        let (case, skip) = if let Some(v) = pick(true) {
            (OddCycleCase::ConformistPair, v)
        } else if let Some(v) = pick(false) {
            (OddCycleCase::ConformistThenDeviator, v)
        } else {
            (OddCycleCase::AllDeviators, k - 1)
        };
        leave_out(cycle, skip, &mut m);
        treatments.push(OddCycleTreatment {
            cycle: cycle.clone(),
            case,
            unmatched: Some(cycle[skip]),
        });
    }

    let unsolvable = treatments.iter().filter(|t| t.case != OddCycleCase::Stable).count();
    let note = format!(
        "shortlist-any: {} paths, {} even cycles, {} odd cycles ({} unsolvable)",
        dec.paths.len(),
        dec.even_cycles.len(),
        dec.odd_cycles.len(),
        unsolvable
    );
    Ok((finish(p, m, note), treatments))
}

pub fn solve_shortlist_any(p: &DeviatorProblem) -> Result<SolveOutcome, ShortlistError> {
    solve_shortlist_any_detailed(p).map(|(outcome, _)| outcome)
}

/// Objective of a component-local matching, evaluated on the component alone.
struct Local {
    inst: Instance,
    map: Vec<AgentId>,
    d: DeviatorSet,
}

impl Local {
    fn new(inst: &Instance, comp: &[AgentId], d: &DeviatorSet) -> Self {
        let (local, map) = inst.induced(comp);
        let ld = DeviatorSet::new(
            comp.len(),
            (0..comp.len()).filter(|&i| d.contains(comp[i])).map(AgentId::from_index),
        );
        Local {
            inst: local,
            map,
            d: ld,
        }
    }

    /// Pairs given as local positions along the component sequence.
    fn cost(&self, pairs: &[(usize, usize)], objective: Objective) -> usize {
        let mut m = Matching::empty(self.map.len());
        for &(a, b) in pairs {
            m.insert(AgentId::from_index(a), AgentId::from_index(b));
        }
        objective_value(&self.inst, &m, &self.d, objective)
    }

    fn commit(&self, pairs: &[(usize, usize)], m: &mut Matching) {
        for &(a, b) in pairs {
            m.insert(self.map[a], self.map[b]);
        }
    }
}

/// Pairs of the cycle positions leaving `skip` out (odd cycles) or starting
/// at `offset` (even cycles).
fn around(k: usize, start: usize, count: usize) -> Vec<(usize, usize)> {
    (0..count).map(|x| ((start + 2 * x) % k, (start + 2 * x + 1) % k)).collect()
}

/// An optimal maximum-cardinality matching. Under the perfect
/// regime the answer is the same matching when it is perfect, and infeasible
/// otherwise.
pub fn solve_shortlist_max(p: &DeviatorProblem) -> Result<SolveOutcome, ShortlistError> {
    check_regime(p, &[SizeRegime::MaxCardinality, SizeRegime::Perfect])?;
    let inst = &p.instance;
    let d = &p.deviators;
    let obj = p.objective;
    let dec = decompose(inst)?;
    let mut m = Matching::empty(inst.num_agents());

    for path in &dec.paths {
        let k = path.len();
        let local = Local::new(inst, path, d);
        if k % 2 == 0 {
            local.commit(&around(k, 0, k / 2), &mut m);
            continue;
        }
        // leave position s unmatched, s even (0-based), pairing everything else
        let option = |s: usize| -> Vec<(usize, usize)> {
            (0..s / 2)
                .map(|x| (2 * x, 2 * x + 1))
                .chain((0..(k - 1 - s) / 2).map(|x| (s + 1 + 2 * x, s + 2 + 2 * x)))
                .collect()
        };
        let mut best = option(0);
        let mut best_cost = local.cost(&best, obj);
        for s in (2..k).step_by(2) {
            let cand = option(s);
            let c = local.cost(&cand, obj);
            if c < best_cost {
                best = cand;
                best_cost = c;
            }
        }
        local.commit(&best, &mut m);
    }

    for cycle in &dec.even_cycles {
        let k = cycle.len();
        let local = Local::new(inst, cycle, d);
        let m1 = around(k, 0, k / 2);
        let m2 = around(k, 1, k / 2);
        if local.cost(&m1, obj) <= local.cost(&m2, obj) {
            local.commit(&m1, &mut m);
        } else {
            local.commit(&m2, &mut m);
        }
    }

    for cycle in &dec.odd_cycles {
        let k = cycle.len();
        let local = Local::new(inst, cycle, d);
        // leaving position s out pairs (s+1, s+2), (s+3, s+4), ...
        let mut best = around(k, 1, k / 2);
        let mut best_cost = local.cost(&best, obj);
        for s in 1..k {
            let cand = around(k, s + 1, k / 2);
            let c = local.cost(&cand, obj);
            if c < best_cost {
                best = cand;
                best_cost = c;
            }
        }
        local.commit(&best, &mut m);
    }

    let note = format!(
        "shortlist-max: {} paths, {} even cycles, {} odd cycles",
        dec.paths.len(),
        dec.even_cycles.len(),
        dec.odd_cycles.len()
    );
    if p.regime == SizeRegime::Perfect && !m.is_perfect() {
        return Ok(SolveOutcome::infeasible(format!("{note}; no perfect matching")));
    }
    Ok(finish(p, m, note))
}

/// Dispatches on the regime.
pub fn solve_shortlist(p: &DeviatorProblem) -> Result<SolveOutcome, ShortlistError> {
    match p.regime {
        SizeRegime::Any => solve_shortlist_any(p),
        _ => solve_shortlist_max(p),
    }
}
