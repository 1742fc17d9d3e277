//! Parametrised solvers: enumerate the deviators' partners and a candidate
//! set of blocking pairs (or blocking deviators), truncate the lists of the
//! agents that must then do better, and complete the matching with a
//! maximum-weight matching.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::blocking::DeviatorSet;
use crate::classic::{gale_shapley, max_cardinality_matching, max_weight_matching, WeightedGraph};
use crate::instance::{AgentId, Instance};
use crate::matching::Matching;
use crate::problem::{verify_solution, Budget, DeviatorProblem, Objective, SizeRegime, SolveOutcome};

/// The part of a candidate configuration that bounds the objective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockedSet {
    /// Canonical `(min, max)` pairs, sorted.
    Pairs(Vec<(AgentId, AgentId)>),
    /// Deviators, sorted.
    Agents(Vec<AgentId>),
}

impl BlockedSet {
    pub fn len(&self) -> usize {
        match self {
            BlockedSet::Pairs(v) => v.len(),
            BlockedSet::Agents(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateConfiguration {
    /// `M_C`: every pair contains a deviator.
    pub candidate_matching: Matching,
    pub blocked_set: BlockedSet,
    /// Position in the enumeration order, from 0.
    pub index: usize,
}

/// Truncation lengths and the must-match set `Q` for one configuration.
///
/// Only agents of `Q` have their lists cut; `cut[a]` is the number of leading
/// entries of `a`'s list that survive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationResult {
    pub cut: Vec<usize>,
    pub must_match: Vec<AgentId>,
    pub rejected: Option<String>,
}

impl TruncationResult {
    /// Whether `b` survives on `a`'s truncated list.
    pub fn retains(&self, inst: &Instance, a: AgentId, b: AgentId) -> bool {
        inst.rank(a, b).is_some_and(|r| r < self.cut[a.index()])
    }

    pub fn truncated_instance(&self, inst: &Instance) -> Instance {
        inst.filter_edges(|a, b| self.retains(inst, a, b) && self.retains(inst, b, a))
    }

    pub fn is_rejected(&self) -> bool {
        self.rejected.is_some()
    }
}

/// Records which agents' preference lists a solver reads.
#[derive(Debug)]
pub struct AccessLog {
    touched: Vec<AtomicBool>,
}

impl AccessLog {
    pub fn new(num_agents: usize) -> Self {
        AccessLog {
            touched: (0..num_agents).map(|_| AtomicBool::new(false)).collect(),
        }
    }

    fn record(&self, a: AgentId) {
        self.touched[a.index()].store(true, Ordering::Relaxed);
    }

    pub fn touched(&self) -> Vec<AgentId> {
        (0..self.touched.len())
            .filter(|&i| self.touched[i].load(Ordering::Relaxed))
            .map(AgentId::from_index)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct FptOptions<'a> {
    /// Worker threads for configuration evaluation; 0 or 1 runs inline.
    pub threads: usize,
    pub access_log: Option<&'a AccessLog>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FptError {
    #[error("the instance admits no perfect matching")]
    PerfectInfeasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("dropping conformist pairs does not leave a bipartite graph")]
pub struct NotApplicable;

/// Problem-level data shared by every configuration.
struct Ctx<'a> {
    inst: &'a Instance,
    d: &'a DeviatorSet,
    objective: Objective,
    /// `Some(|M_S|)` under the maximum-cardinality and perfect regimes.
    target: Option<usize>,
    /// Any regime: agents within distance 2 of `D`, outside `D`.
    near: Vec<bool>,
    log: Option<&'a AccessLog>,
}

impl<'a> Ctx<'a> {
    fn new(p: &'a DeviatorProblem, log: Option<&'a AccessLog>) -> Self {
        let inst = &p.instance;
        let n = inst.num_agents();
        let mut ctx = Ctx {
            inst,
            d: &p.deviators,
            objective: p.objective,
            target: None,
            near: vec![false; n],
            log,
        };
        match p.regime {
            SizeRegime::Any => ctx.near = ctx.within_two(),
            SizeRegime::MaxCardinality | SizeRegime::Perfect => {
                ctx.target = Some(max_cardinality_matching(inst).len());
            }
        }
        ctx
    }

    /// Agents at distance 1 or 2 from `D`.
    fn within_two(&self) -> Vec<bool> {
        let n = self.inst.num_agents();
        let mut dist = vec![u8::MAX; n];
        for &a in self.d.members() {
            dist[a.index()] = 0;
        }
        let mut ring = Vec::new();
        for &a in self.d.members() {
            for &b in self.list(a) {
                if dist[b.index()] > 1 {
                    dist[b.index()] = 1;
                    ring.push(b);
                }
            }
        }
        for b in ring {
            for &c in self.list(b) {
                if dist[c.index()] > 2 {
                    dist[c.index()] = 2;
                }
            }
        }
        dist.iter().map(|d| (1..=2).contains(d)).collect()
    }

    fn list(&self, a: AgentId) -> &'a [AgentId] {
        if let Some(log) = self.log {
            log.record(a);
        }
        self.inst.prefs(a)
    }

    fn rank(&self, a: AgentId, b: AgentId) -> Option<usize> {
        if let Some(log) = self.log {
            log.record(a);
        }
        self.inst.rank(a, b)
    }

    /// Entries of `a`'s list strictly better than `partner`.
    fn better_than(&self, a: AgentId, partner: Option<AgentId>) -> &'a [AgentId] {
        let list = self.list(a);
        match partner.and_then(|p| self.rank(a, p)) {
            Some(r) => &list[..r],
            None => list,
        }
    }

    fn prefers(&self, a: AgentId, b: AgentId, current: Option<AgentId>) -> bool {
        match (self.rank(a, b), current.and_then(|c| self.rank(a, c))) {
            (None, _) => false,
            (Some(_), None) => true,
            (Some(rb), Some(rc)) => rb < rc,
        }
    }

    /// Pairs or deviators that can block once `mc` is fixed.
    fn admissible(&self, mc: &Matching) -> Vec<Blocked> {
        match self.objective {
            Objective::BlockingPairs => {
                let mut pairs = BTreeSet::new();
                for &a in self.d.members() {
                    for &r in self.better_than(a, mc.partner(a)) {
                        if !self.d.contains(r) || self.prefers(r, a, mc.partner(r)) {
                            pairs.insert((a.min(r), a.max(r)));
                        }
                    }
                }
                pairs.into_iter().map(|(a, b)| Blocked::Pair(a, b)).collect()
            }
            Objective::BlockingAgents => self
                .d
                .members()
                .iter()
                .copied()
                .filter(|&a| {
                    self.better_than(a, mc.partner(a))
                        .iter()
                        .any(|&r| !self.d.contains(r) || self.prefers(r, a, mc.partner(r)))
                })
                .map(Blocked::Agent)
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Blocked {
    Pair(AgentId, AgentId),
    Agent(AgentId),
}

fn blocked_set(objective: Objective, items: &[Blocked]) -> BlockedSet {
    match objective {
        Objective::BlockingPairs => BlockedSet::Pairs(
            items
                .iter()
                .map(|b| match *b {
                    Blocked::Pair(x, y) => (x, y),
                    Blocked::Agent(_) => unreachable!(),
                })
                .collect(),
        ),
        Objective::BlockingAgents => BlockedSet::Agents(
            items
                .iter()
                .map(|b| match *b {
                    Blocked::Agent(a) => a,
                    Blocked::Pair(..) => unreachable!(),
                })
                .collect(),
        ),
    }
}

/// Candidate matchings `M_C` in lexicographic order: deviators by id, each
/// choosing a partner by preference rank and finally "unmatched".
struct CandidateMatchings<'c, 'a> {
    ctx: &'c Ctx<'a>,
    digits: Vec<usize>,
    done: bool,
}

impl<'c, 'a> CandidateMatchings<'c, 'a> {
    fn new(ctx: &'c Ctx<'a>) -> Self {
        CandidateMatchings {
            ctx,
            digits: vec![0; ctx.d.len()],
            done: false,
        }
    }

    fn advance(&mut self) {
        let members = self.ctx.d.members();
        for pos in (0..members.len()).rev() {
            let options = self.ctx.list(members[pos]).len() + 1;
            self.digits[pos] += 1;
            if self.digits[pos] < options {
                return;
            }
            self.digits[pos] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Option<Matching> {
        let members = self.ctx.d.members();
        let choice = |pos: usize| self.ctx.list(members[pos]).get(self.digits[pos]).copied();
        let mut m = Matching::empty(self.ctx.inst.num_agents());
        for pos in 0..members.len() {
            let a = members[pos];
            let Some(b) = choice(pos) else { continue };
            if self.ctx.d.contains(b) {
                let bpos = members.binary_search(&b).expect("deviator is a member");
                if choice(bpos) != Some(a) {
                    return None;
                }
                if a < b {
                    m.insert(a, b);
                }
            } else {
                if m.is_matched(b) {
                    return None;
                }
                m.insert(a, b);
            }
        }
        Some(m)
    }
}

impl Iterator for CandidateMatchings<'_, '_> {
    type Item = Matching;

    fn next(&mut self) -> Option<Matching> {
        while !self.done {
            let m = self.current();
            self.advance();
            if m.is_some() {
                return m;
            }
        }
        None
    }
}

/// Index combinations of `size` out of `len`, lexicographic.
fn combinations(len: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (size <= len).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = size;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < len - size + i {
                next[i] += 1;
                for j in i + 1..size {
                    next[j] = next[j - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every configuration with `M_C` a candidate matching and `B` an admissible
/// blocked set whose size lies in `sizes`.
fn configurations<'c, 'a>(
    ctx: &'c Ctx<'a>,
    sizes: std::ops::RangeInclusive<usize>,
) -> impl Iterator<Item = CandidateConfiguration> + 'c {
    let mut index = 0;
    CandidateMatchings::new(ctx).flat_map(move |mc| {
        let items = ctx.admissible(&mc);
        let objective = ctx.objective;
        let items = std::rc::Rc::new(items);
        let combos: Vec<Vec<usize>> =
            sizes.clone().flat_map(|s| combinations(items.len(), s)).collect();
        let start = index;
        index += combos.len();
        combos.into_iter().enumerate().map(move |(j, combo)| {
            let chosen: Vec<Blocked> = combo.iter().map(|&i| items[i]).collect();
            CandidateConfiguration {
                candidate_matching: mc.clone(),
                blocked_set: blocked_set(objective, &chosen),
                index: start + j,
            }
        })
    })
}

/// All configurations with `|B| ≤ k`, in the solver's order.
pub fn enumerate_configurations(p: &DeviatorProblem, k: usize) -> Vec<CandidateConfiguration> {
    let ctx = Ctx::new(p, None);
    configurations(&ctx, 0..=k).collect()
}

fn truncate(ctx: &Ctx<'_>, cfg: &CandidateConfiguration) -> TruncationResult {
    let inst = ctx.inst;
    let n = inst.num_agents();
    let mc = &cfg.candidate_matching;
    let mut res = TruncationResult {
        cut: inst.agents().map(|a| inst.prefs(a).len()).collect(),
        must_match: Vec::new(),
        rejected: None,
    };
    if let BlockedSet::Pairs(b) = &cfg.blocked_set {
        if let Some(&(x, y)) = b.iter().find(|&&(x, y)| mc.contains(x, y)) {
            res.rejected = Some(format!("pair {{{x}, {y}}} is both matched and blocking"));
            return res;
        }
    }
    let exempt = |a: AgentId, r: AgentId| match &cfg.blocked_set {
        BlockedSet::Pairs(b) => b.binary_search(&(a.min(r), a.max(r))).is_ok(),
        BlockedSet::Agents(b) => b.binary_search(&a).is_ok(),
    };
    // every trigger is collected before any list is cut
    let mut in_q = vec![false; n];
    for &a in ctx.d.members() {
        for &r in ctx.better_than(a, mc.partner(a)) {
            if exempt(a, r) {
                continue;
            }
            let ra = ctx.rank(r, a).expect("acceptability is symmetric");
            let c = &mut res.cut[r.index()];
            *c = (*c).min(ra);
            in_q[r.index()] = true;
        }
    }
    res.must_match = (0..n).filter(|&i| in_q[i]).map(AgentId::from_index).collect();
    for (x, y) in mc.pairs() {
        let keeps = |a: AgentId, b: AgentId| ctx.rank(a, b).is_some_and(|r| r < res.cut[a.index()]);
        if !keeps(x, y) || !keeps(y, x) {
            res.rejected = Some(format!("matched pair {{{x}, {y}}} fell off a truncated list"));
            return res;
        }
    }
    res
}

pub fn truncate_and_collect(p: &DeviatorProblem, cfg: &CandidateConfiguration) -> TruncationResult {
    truncate(&Ctx::new(p, None), cfg)
}

/// Completes `M_C` over the agents outside `D ∪ A(M_C)`. Returns the whole
/// matching `M_C ∪ M_mw`, or `None` on rejection.
fn extend(ctx: &Ctx<'_>, cfg: &CandidateConfiguration, trunc: &TruncationResult) -> Option<Matching> {
    let inst = ctx.inst;
    let n = inst.num_agents();
    let mc = &cfg.candidate_matching;
    let in_g = |a: AgentId| {
        !ctx.d.contains(a) && !mc.is_matched(a) && (ctx.target.is_some() || ctx.near[a.index()])
    };
    let mut in_q = vec![false; n];
    for &q in &trunc.must_match {
        if mc.is_matched(q) {
            continue;
        }
        if !in_g(q) {
            // an unmatched deviator cannot be matched by the extension
            return None;
        }
        in_q[q.index()] = true;
    }
    let q_in_g = in_q.iter().filter(|&&b| b).count();

    let mut m = mc.clone();
    if q_in_g == 0 && ctx.target.is_none() {
        return Some(m);
    }

    let vertices: Vec<AgentId> = match ctx.target {
        Some(_) => inst.agents().filter(|&a| in_g(a)).collect(),
        None => inst.agents().filter(|&a| ctx.near[a.index()] && in_g(a)).collect(),
    };
    let base = n as u64;
    let mut edges = Vec::new();
    for &v in &vertices {
        for (rv, &w) in ctx.list(v).iter().enumerate() {
            if w <= v || !in_g(w) || rv >= trunc.cut[v.index()] {
                continue;
            }
            if ctx.rank(w, v).expect("symmetric") >= trunc.cut[w.index()] {
                continue;
            }
            let bonus = in_q[v.index()] as u64 + in_q[w.index()] as u64;
            match ctx.target {
                Some(_) => edges.push((v, w, base + bonus)),
                None if bonus > 0 => edges.push((v, w, bonus)),
                None => {}
            }
        }
    }
    let g = WeightedGraph::new(n, vertices, edges).expect("simple graph on G");
    let (mw, _) = max_weight_matching(&g);
    if in_q.iter().enumerate().any(|(i, &q)| q && !mw.is_matched(AgentId::from_index(i))) {
        return None;
    }
    for (a, b) in mw.pairs() {
        m.insert(a, b);
    }
    if let Some(target) = ctx.target {
        if m.len() < target {
            return None;
        }
    }
    Some(m)
}

/// `target_size` is `|M_S|` for the maximum-cardinality regimes and `None`
/// for the any-size regime.
pub fn extend_via_weighted_matching(
    p: &DeviatorProblem,
    cfg: &CandidateConfiguration,
    trunc: &TruncationResult,
    target_size: Option<usize>,
) -> Option<Matching> {
    if trunc.is_rejected() {
        return None;
    }
    let mut ctx = Ctx::new(p, None);
    ctx.target = target_size;
    if target_size.is_none() && p.regime != SizeRegime::Any {
        ctx.near = ctx.within_two();
    }
    extend(&ctx, cfg, trunc)
}

fn regime_label(p: &DeviatorProblem) -> String {
    format!("fpt-{}-{}", p.regime, p.objective)
}

/// Evaluates one configuration end to end; verified matchings only.
fn evaluate(
    ctx: &Ctx<'_>,
    p: &DeviatorProblem,
    k: usize,
    cfg: &CandidateConfiguration,
) -> Option<(Matching, usize, usize)> {
    let trunc = truncate(ctx, cfg);
    if trunc.is_rejected() {
        return None;
    }
    let m = extend(ctx, cfg, &trunc)?;
    match verify_solution(&p.with_budget(Budget::AtMost(k)), &m, p.value(&m)) {
        Ok(v) => Some((m, v, trunc.must_match.len())),
        Err(e) => {
            debug_assert!(false, "configuration {} accepted an invalid matching: {e}", cfg.index);
            None
        }
    }
}

fn search(
    p: &DeviatorProblem,
    k: usize,
    sizes: std::ops::RangeInclusive<usize>,
    opts: FptOptions<'_>,
) -> SolveOutcome {
    let label = regime_label(p);
    let n = p.instance.num_agents();
    if p.regime == SizeRegime::Perfect {
        let size = max_cardinality_matching(&p.instance).len();
        if 2 * size != n {
            return SolveOutcome::infeasible(format!("{label}: no perfect matching exists"));
        }
    }
    let ctx = Ctx::new(p, opts.access_log);
    let found = if opts.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .expect("thread pool");
        let mut found = None;
        let mut iter = configurations(&ctx, sizes).peekable();
        while found.is_none() && iter.peek().is_some() {
            let batch: Vec<CandidateConfiguration> = iter.by_ref().take(512).collect();
            found = pool.install(|| {
                batch
                    .par_iter()
                    .find_map_first(|cfg| evaluate(&ctx, p, k, cfg).map(|r| (cfg.clone(), r)))
            });
        }
        found
    } else {
        configurations(&ctx, sizes).find_map(|cfg| evaluate(&ctx, p, k, &cfg).map(|r| (cfg, r)))
    };
    match found {
        Some((cfg, (m, value, q))) => SolveOutcome::solution(
            m,
            value,
            format!(
                "{label}: configuration #{} (|M_C|={}, |B|={}, |Q|={})",
                cfg.index,
                cfg.candidate_matching.len(),
                cfg.blocked_set.len(),
                q
            ),
        ),
        None => SolveOutcome::infeasible(format!("{label}: every configuration with |B| <= {k} rejected")),
    }
}

/// Decides the problem at budget `k`: the first accepted configuration with
/// `|B| ≤ k`, or infeasible. An `Optimize` budget is treated as unbounded.
pub fn solve_fpt(p: &DeviatorProblem) -> SolveOutcome {
    solve_fpt_with(p, FptOptions::default())
}

pub fn solve_fpt_with(p: &DeviatorProblem, opts: FptOptions<'_>) -> SolveOutcome {
    match p.budget {
        Budget::AtMost(k) => search(p, k, 0..=k, opts),
        Budget::Optimize => match optimize_fpt_with(p, opts) {
            Ok(out) => out,
            Err(e) => SolveOutcome::infeasible(format!("{}: {e}", regime_label(p))),
        },
    }
}

fn upper_bound(p: &DeviatorProblem) -> usize {
    match p.objective {
        Objective::BlockingPairs => p.deviators.len() * p.instance.d_max(),
        Objective::BlockingAgents => p.deviators.len(),
    }
}

/// The smallest `k` at which a solution exists, by trying `k = 0, 1, …`.
pub fn optimize_fpt(p: &DeviatorProblem) -> Result<SolveOutcome, FptError> {
    optimize_fpt_with(p, FptOptions::default())
}

pub fn optimize_fpt_with(p: &DeviatorProblem, opts: FptOptions<'_>) -> Result<SolveOutcome, FptError> {
    if p.regime == SizeRegime::Perfect {
        let size = max_cardinality_matching(&p.instance).len();
        if 2 * size != p.instance.num_agents() {
            return Err(FptError::PerfectInfeasible);
        }
    }
    for k in 0..=upper_bound(p) {
        // smaller blocked sets were already rejected at earlier k
        let out = search(p, k, k..=k, opts);
        if out.is_feasible() {
            debug_assert_eq!(out.value(), Some(k));
            return Ok(out);
        }
    }
    unreachable!("a blocked set of every admissible pair always succeeds")
}

/// Upper bound on the configurations examined at budget `k`.
pub fn configuration_bound(p: &DeviatorProblem, k: usize) -> usize {
    let d = p.deviators.len();
    let dm = p.instance.d_max();
    let mc = (dm + 1).saturating_pow(d as u32);
    let pool = match p.objective {
        Objective::BlockingPairs => d * dm,
        Objective::BlockingAgents => d,
    };
    mc.saturating_mul((0..=k).map(|r| binomial(pool, r)).fold(0usize, |a, b| a.saturating_add(b)))
}

/// Zero deviator blocking pairs in polynomial time when the graph without
/// conformist–conformist edges is bipartite: any stable matching of that
/// restricted instance works.
pub fn solve_bipartite_restriction(p: &DeviatorProblem) -> Result<Matching, NotApplicable> {
    let d = &p.deviators;
    let restricted = p.instance.filter_edges(|a, b| d.contains(a) || d.contains(b));
    let sides = restricted.two_colouring().ok_or(NotApplicable)?;
    let tagged = restricted.with_sides(sides).expect("a proper colouring separates every pair");
    let m = gale_shapley(&tagged).expect("sides attached");
    Ok(Matching::from_pairs(&p.instance, m.pairs()).expect("restricted pairs are acceptable"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, GenSpec, Model};
    use crate::instance::agent;
    use crate::oracle::oracle_solve;

    fn problem(inst: Instance, d: &[u32], obj: Objective, regime: SizeRegime, budget: Budget) -> DeviatorProblem {
        let n = inst.num_agents();
        DeviatorProblem::new(inst, DeviatorSet::from_raw(n, d), obj, regime, budget)
    }

    fn ordered_triangle() -> Instance {
        Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap()
    }

    #[test]
    fn configuration_counts() {
        let inst = ordered_triangle();
        let p = problem(inst.clone(), &[], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        assert_eq!(enumerate_configurations(&p, 0).len(), 1);
        let p = problem(inst.clone(), &[1], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        assert_eq!(enumerate_configurations(&p, 0).len(), 3);
    }

    #[test]
    fn two_adjacent_deviators_count_by_direct_filtering() {
        // path 3 - 1 - 2 - 4, D = {1, 2}
        let inst = Instance::from_lists(&[&[2, 3], &[1, 4], &[1], &[2]]).unwrap();
        let p = problem(inst.clone(), &[1, 2], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let mut expected = 0;
        let opts = |a: u32| -> Vec<Option<u32>> {
            inst.prefs(agent(a)).iter().map(|b| Some(b.get())).chain([None]).collect()
        };
        for c1 in opts(1) {
            for c2 in opts(2) {
                let ok = match (c1, c2) {
                    (Some(2), c) => c == Some(1),
                    (c, Some(1)) => c == Some(2),
                    _ => true,
                };
                expected += ok as usize;
            }
        }
        assert_eq!(expected, 5);
        assert_eq!(enumerate_configurations(&p, 0).len(), expected);
    }

    #[test]
    fn truncation_rules() {
        // 1 is the deviator; 1: 2 3, 2: 1 3 4, 3: 4 1 2 (complete on 4 would be larger)
        let inst = Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap();
        let p = problem(inst.clone(), &[1], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let cfgs = enumerate_configurations(&p, 0);
        // first choice: nobody better, nothing triggered
        let t = truncate_and_collect(&p, &cfgs[0]);
        assert!(t.must_match.is_empty() && !t.is_rejected());
        // unmatched: everyone on 1's list must beat 1
        let last = cfgs.last().unwrap();
        assert!(last.candidate_matching.is_empty());
        let t = truncate_and_collect(&p, last);
        assert_eq!(t.must_match, vec![agent(2), agent(3)]);
        assert_eq!(t.cut[1], inst.rank(agent(2), agent(1)).unwrap());
        assert_eq!(t.cut[2], inst.rank(agent(3), agent(1)).unwrap());
    }

    #[test]
    fn best_ranked_trigger_wins() {
        // deviators 1 and 2 both unmatched and both on 3's list: 3: 1 2 4
        let inst = Instance::from_lists(&[&[3], &[3], &[1, 2, 4], &[3]]).unwrap();
        let p = problem(inst.clone(), &[1, 2], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let cfg = enumerate_configurations(&p, 0)
            .into_iter()
            .find(|c| c.candidate_matching.is_empty())
            .unwrap();
        let t = truncate_and_collect(&p, &cfg);
        assert_eq!(t.must_match, vec![agent(3)]);
        assert_eq!(t.cut[2], 0);
    }

    #[test]
    fn weighting_matches_interior_q_agent() {
        // path 1-2-3-4 with conformists only and Q = {2}; any-size extension
        let inst = Instance::from_lists(&[&[2], &[1, 3], &[2, 4], &[3]]).unwrap();
        let p = problem(inst.clone(), &[], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let cfg = CandidateConfiguration {
            candidate_matching: Matching::empty(4),
            blocked_set: BlockedSet::Pairs(vec![]),
            index: 0,
        };
        let trunc = TruncationResult {
            cut: vec![1, 2, 2, 1],
            must_match: vec![agent(2)],
            rejected: None,
        };
        let mut ctx = Ctx::new(&p, None);
        ctx.near = vec![true; 4];
        let m = extend(&ctx, &cfg, &trunc).unwrap();
        assert!(m.is_matched(agent(2)));
        // maximum-cardinality target: both pairs, 2 still matched
        let m = extend_via_weighted_matching(&p, &cfg, &trunc, Some(2)).unwrap();
        assert_eq!(m.len(), 2);
        assert!(m.is_matched(agent(2)));
    }

    #[test]
    fn ordered_triangle_optima() {
        let bp = problem(ordered_triangle(), &[1, 2, 3], Objective::BlockingPairs, SizeRegime::Any, Budget::Optimize);
        assert_eq!(optimize_fpt(&bp).unwrap().value(), Some(1));
        let ba = bp.with_objective(Objective::BlockingAgents);
        assert_eq!(optimize_fpt(&ba).unwrap().value(), Some(2));
        assert!(!solve_fpt(&bp.with_budget(Budget::AtMost(0))).is_feasible());
    }

    #[test]
    fn perfect_infeasible() {
        let p = problem(ordered_triangle(), &[1], Objective::BlockingPairs, SizeRegime::Perfect, Budget::Optimize);
        assert_eq!(optimize_fpt(&p), Err(FptError::PerfectInfeasible));
    }

    #[test]
    fn bipartite_restriction_cases() {
        let inst = ordered_triangle();
        let p = problem(inst.clone(), &[], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        assert!(solve_bipartite_restriction(&p).unwrap().is_empty());
        let p = problem(inst, &[1, 2, 3], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        assert_eq!(solve_bipartite_restriction(&p), Err(NotApplicable));
    }

    #[test]
    fn agrees_with_oracle_on_random_instances() {
        for seed in 0..60u64 {
            let spec = GenSpec {
                n: 4 + (seed as usize % 5),
                model: Model::SriUniform,
                list_cap: 3,
                deviator_count: Some(1 + seed as usize % 3),
                edge_probability: 0.6,
                seed,
                ..GenSpec::default()
            };
            let base = generate(&spec).unwrap();
            for regime in [SizeRegime::Any, SizeRegime::MaxCardinality, SizeRegime::Perfect] {
                for obj in [Objective::BlockingPairs, Objective::BlockingAgents] {
                    let p = DeviatorProblem { regime, objective: obj, ..base.clone() };
                    let want = oracle_solve(&p).unwrap().optimum(obj);
                    match optimize_fpt(&p) {
                        Ok(out) => assert_eq!(out.value(), want, "seed {seed} {regime} {obj}"),
                        Err(FptError::PerfectInfeasible) => assert_eq!(want, None),
                    }
                    for k in 0..=2 {
                        let got = solve_fpt(&p.with_budget(Budget::AtMost(k))).is_feasible();
                        assert_eq!(got, want.is_some_and(|w| w <= k), "seed {seed} {regime} {obj} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn any_regime_stays_local() {
        // long path 1-2-...-12 with the deviator at the end
        let lists: Vec<Vec<u32>> = (1..=12u32)
            .map(|i| [i.checked_sub(1).filter(|&x| x > 0), Some(i + 1).filter(|&x| x <= 12)]
                .into_iter()
                .flatten()
                .collect())
            .collect();
        let inst = Instance::new(lists, None).unwrap();
        let p = problem(inst, &[1], Objective::BlockingPairs, SizeRegime::Any, Budget::AtMost(0));
        let log = AccessLog::new(12);
        let out = solve_fpt_with(&p, FptOptions { threads: 1, access_log: Some(&log) });
        assert!(out.is_feasible());
        assert!(log.touched().iter().all(|a| a.get() <= 3), "{:?}", log.touched());
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        for seed in 0..10 {
            let spec = GenSpec {
                n: 10,
                list_cap: 4,
                deviator_count: Some(4),
                seed,
                ..GenSpec::default()
            };
            let p = generate(&spec).unwrap().with_budget(Budget::AtMost(1));
            let a = solve_fpt(&p);
            let b = solve_fpt_with(&p, FptOptions { threads: 4, access_log: None });
            assert_eq!(a, b);
        }
    }
}
