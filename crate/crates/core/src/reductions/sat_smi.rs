//! (2,2)-E3-SAT to perfect SMI with deviators.
//!
//! Each variable gets an 8-agent gadget whose two perfect matchings encode its
//! value, each clause an 8-agent gadget whose three perfect matchings pick a
//! literal, and each variable occurrence a 12-agent connector that stands in
//! for the direct variable–clause edge. Only the two ends of every connector
//! (`t^{r,1}` towards the clause, `t^{r,7}` towards the variable) deviate.
//!
//! Agent ids: variable gadgets first (`x_i^1..x_i^4, y_i^1..y_i^4` for each
//! `i`), then clause gadgets (`c_j^1..c_j^3, p_j^1..p_j^3, q_j, z_j`), then
//! connectors in `(i, r)` order (`t_i^{r,1}..t_i^{r,12}`).

use thiserror::Error;

use super::cnf::{literal_true, CnfFormula};
use crate::blocking::DeviatorSet;
use crate::instance::{agent, AgentId, Instance};
use crate::matching::Matching;
use crate::problem::{Budget, DeviatorProblem, Objective, SizeRegime};

/// Maps gadget-local names to global ids and records the wiring. All indices
/// (`i`, `r`, `j`, `s`, `kappa`) are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetIndex {
    n: usize,
    m: usize,
    /// `(i, r)` consumed by literal `s` of clause `j`, at `3(j-1) + s-1`.
    slot_of_literal: Vec<(usize, usize)>,
    /// `(j, s)` wired to `x_i^r`, at `4(i-1) + r-1`.
    literal_of_slot: Vec<(usize, usize)>,
}

impl GadgetIndex {
    /// Reads the formula left to right: the first and second unnegated
    /// occurrences of `V_i` take slots 1 and 2, the negated ones 3 and 4.
    pub fn new(f: &CnfFormula) -> Self {
        let n = f.num_vars();
        let m = f.num_clauses();
        let mut seen_pos = vec![0usize; n + 1];
        let mut seen_neg = vec![0usize; n + 1];
        let mut slot_of_literal = Vec::with_capacity(3 * m);
        let mut literal_of_slot = vec![(0, 0); 4 * n];
        for (j0, clause) in f.clauses().iter().enumerate() {
            for (s0, &l) in clause.iter().enumerate() {
                let i = l.unsigned_abs() as usize;
                let r = if l > 0 {
                    seen_pos[i] += 1;
                    seen_pos[i]
                } else {
                    seen_neg[i] += 1;
                    2 + seen_neg[i]
                };
                slot_of_literal.push((i, r));
                literal_of_slot[4 * (i - 1) + r - 1] = (j0 + 1, s0 + 1);
            }
        }
        GadgetIndex { n, m, slot_of_literal, literal_of_slot }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_clauses(&self) -> usize {
        self.m
    }

    /// `56n + 8m`
    pub fn num_agents(&self) -> usize {
        56 * self.n + 8 * self.m
    }

    /// Agents of the instance without connectors, `8n + 8m`.
    pub fn num_direct_agents(&self) -> usize {
        8 * self.n + 8 * self.m
    }

    fn id(raw: usize) -> AgentId {
        agent(raw as u32)
    }

    pub fn x(&self, i: usize, r: usize) -> AgentId {
        Self::id(8 * (i - 1) + r)
    }

    pub fn y(&self, i: usize, r: usize) -> AgentId {
        Self::id(8 * (i - 1) + 4 + r)
    }

    pub fn c(&self, j: usize, s: usize) -> AgentId {
        Self::id(8 * self.n + 8 * (j - 1) + s)
    }

    pub fn p(&self, j: usize, s: usize) -> AgentId {
        Self::id(8 * self.n + 8 * (j - 1) + 3 + s)
    }

    pub fn q(&self, j: usize) -> AgentId {
        Self::id(8 * self.n + 8 * (j - 1) + 7)
    }

    pub fn z(&self, j: usize) -> AgentId {
        Self::id(8 * self.n + 8 * (j - 1) + 8)
    }

    pub fn t(&self, i: usize, r: usize, kappa: usize) -> AgentId {
        Self::id(8 * self.n + 8 * self.m + 12 * (4 * (i - 1) + r - 1) + kappa)
    }

    /// The variable slot `(i, r)` that literal `s` of clause `j` is wired to.
    pub fn slot_of(&self, j: usize, s: usize) -> (usize, usize) {
        self.slot_of_literal[3 * (j - 1) + s - 1]
    }

    /// The clause literal `(j, s)` wired to `x_i^r`.
    pub fn literal_of(&self, i: usize, r: usize) -> (usize, usize) {
        self.literal_of_slot[4 * (i - 1) + r - 1]
    }

    pub fn variable_agents(&self, i: usize) -> Vec<AgentId> {
        (1..=4).map(|r| self.x(i, r)).chain((1..=4).map(|r| self.y(i, r))).collect()
    }

    pub fn clause_agents(&self, j: usize) -> Vec<AgentId> {
        let mut v: Vec<AgentId> = (1..=3).map(|s| self.c(j, s)).collect();
        v.extend((1..=3).map(|s| self.p(j, s)));
        v.push(self.q(j));
        v.push(self.z(j));
        v
    }

    pub fn connector_agents(&self, i: usize, r: usize) -> Vec<AgentId> {
        (1..=12).map(|k| self.t(i, r, k)).collect()
    }

    pub fn is_connector(&self, a: AgentId) -> bool {
        a.index() >= self.num_direct_agents()
    }

    /// Gadget-local name, e.g. `x_2^3`, `q_1`, `t_1^{4,7}`.
    pub fn label(&self, a: AgentId) -> String {
        let k = a.index();
        let (vn, cn) = (8 * self.n, 8 * self.m);
        if k < vn {
            let (i, off) = (k / 8 + 1, k % 8);
            if off < 4 {
                format!("x_{i}^{}", off + 1)
            } else {
                format!("y_{i}^{}", off - 3)
            }
        } else if k < vn + cn {
            let (j, off) = ((k - vn) / 8 + 1, (k - vn) % 8);
            match off {
                0..=2 => format!("c_{j}^{}", off + 1),
                3..=5 => format!("p_{j}^{}", off - 2),
                6 => format!("q_{j}"),
                _ => format!("z_{j}"),
            }
        } else {
            let rest = k - vn - cn;
            let (slot, kappa) = (rest / 12, rest % 12 + 1);
            format!("t_{}^{{{},{kappa}}}", slot / 4 + 1, slot % 4 + 1)
        }
    }
}

type Lists = Vec<Vec<u32>>;

fn set(lists: &mut Lists, a: AgentId, entries: &[Option<AgentId>]) {
    lists[a.index()] = entries.iter().flatten().map(|b| b.get()).collect();
}

/// `comm[r-1]` is the entry between the two `y` agents on `x^r`'s list.
fn put_variable(lists: &mut Lists, x: [AgentId; 4], y: [AgentId; 4], comm: [Option<AgentId>; 4]) {
    set(lists, x[0], &[Some(y[0]), comm[0], Some(y[1])]);
    set(lists, x[1], &[Some(y[1]), comm[1], Some(y[2])]);
    set(lists, x[2], &[Some(y[3]), comm[2], Some(y[2])]);
    set(lists, x[3], &[Some(y[0]), comm[3], Some(y[3])]);
    set(lists, y[0], &[Some(x[0]), Some(x[3])]);
    set(lists, y[1], &[Some(x[0]), Some(x[1])]);
    set(lists, y[2], &[Some(x[1]), Some(x[2])]);
    set(lists, y[3], &[Some(x[2]), Some(x[3])]);
}

fn put_clause(lists: &mut Lists, c: [AgentId; 3], p: [AgentId; 3], q: AgentId, z: AgentId, comm: [Option<AgentId>; 3]) {
    for s in 0..3 {
        set(lists, c[s], &[Some(p[s]), comm[s], Some(q)]);
        set(lists, p[s], &[Some(c[s]), Some(z)]);
    }
    set(lists, z, &[Some(p[0]), Some(p[1]), Some(p[2])]);
    set(lists, q, &[Some(c[0]), Some(c[1]), Some(c[2])]);
}

fn put_connector(lists: &mut Lists, t: [AgentId; 12], clause: Option<AgentId>, var: Option<AgentId>) {
    let t = |k: usize| Some(t[k - 1]);
    let ids = |k: usize| t(k).unwrap();
    set(lists, ids(1), &[t(2), clause, t(12)]);
    for k in 2..=5 {
        set(lists, ids(k), &[t(k + 1), t(k - 1)]);
    }
    set(lists, ids(6), &[t(5), t(7)]);
    set(lists, ids(7), &[t(6), var, t(8)]);
    for k in 8..=11 {
        set(lists, ids(k), &[t(k - 1), t(k + 1)]);
    }
    set(lists, ids(12), &[t(11), t(1)]);
}

fn arr<const N: usize>(f: impl Fn(usize) -> AgentId) -> [AgentId; N] {
    std::array::from_fn(|k| f(k + 1))
}

/// Which gadget to build on its own.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    Variable,
    Clause,
    Connector,
}

/// A gadget with its outside entries removed. Ids: variable `x^1..x^4` then
/// `y^1..y^4`; clause `c^1..c^3, p^1..p^3, q, z`; connector `t^1..t^12`.
pub fn gadget(kind: GadgetKind) -> Instance {
    let id = |k: usize| agent(k as u32);
    match kind {
        GadgetKind::Variable => {
            let mut l = vec![Vec::new(); 8];
            put_variable(&mut l, arr(id), arr(|r| id(4 + r)), [None; 4]);
            Instance::new(l, Some(vec![0, 0, 0, 0, 1, 1, 1, 1])).expect("valid gadget")
        }
        GadgetKind::Clause => {
            let mut l = vec![Vec::new(); 8];
            put_clause(&mut l, arr(id), arr(|s| id(3 + s)), id(7), id(8), [None; 3]);
            Instance::new(l, Some(vec![0, 0, 0, 1, 1, 1, 1, 0])).expect("valid gadget")
        }
        GadgetKind::Connector => {
            let mut l = vec![Vec::new(); 12];
            put_connector(&mut l, arr(id), None, None);
            Instance::new(l, Some((1..=12).map(|k| (k % 2) as u8).collect())).expect("valid gadget")
        }
    }
}

/// The instance with direct variable–clause edges and no connectors, over
/// the first `8n + 8m` ids of the full construction.
pub fn sat_to_direct_smi(f: &CnfFormula) -> (Instance, GadgetIndex) {
    let idx = GadgetIndex::new(f);
    let mut lists = vec![Vec::new(); idx.num_direct_agents()];
    for i in 1..=idx.n {
        let comm = std::array::from_fn(|r0| {
            let (j, s) = idx.literal_of(i, r0 + 1);
            Some(idx.c(j, s))
        });
        put_variable(&mut lists, arr(|r| idx.x(i, r)), arr(|r| idx.y(i, r)), comm);
    }
    for j in 1..=idx.m {
        let comm = std::array::from_fn(|s0| {
            let (i, r) = idx.slot_of(j, s0 + 1);
            Some(idx.x(i, r))
        });
        put_clause(&mut lists, arr(|s| idx.c(j, s)), arr(|s| idx.p(j, s)), idx.q(j), idx.z(j), comm);
    }
    // x, p, q on one side; y, c, z on the other
    let mut sides = vec![0u8; lists.len()];
    for i in 1..=idx.n {
        for r in 1..=4 {
            sides[idx.y(i, r).index()] = 1;
        }
    }
    for j in 1..=idx.m {
        for s in 1..=3 {
            sides[idx.c(j, s).index()] = 1;
        }
        sides[idx.z(j).index()] = 1;
    }
    let inst = Instance::new(lists, Some(sides)).expect("construction is a valid bipartite instance");
    (inst, idx)
}

fn connected_instance(idx: &GadgetIndex) -> Instance {
    let mut lists = vec![Vec::new(); idx.num_agents()];
    for i in 1..=idx.n {
        let comm = std::array::from_fn(|r0| Some(idx.t(i, r0 + 1, 7)));
        put_variable(&mut lists, arr(|r| idx.x(i, r)), arr(|r| idx.y(i, r)), comm);
        for r in 1..=4 {
            let (j, s) = idx.literal_of(i, r);
            put_connector(&mut lists, arr(|k| idx.t(i, r, k)), Some(idx.c(j, s)), Some(idx.x(i, r)));
        }
    }
    for j in 1..=idx.m {
        let comm = std::array::from_fn(|s0| {
            let (i, r) = idx.slot_of(j, s0 + 1);
            Some(idx.t(i, r, 1))
        });
        put_clause(&mut lists, arr(|s| idx.c(j, s)), arr(|s| idx.p(j, s)), idx.q(j), idx.z(j), comm);
    }
    // x, c, z and even t on one side; y, p, q and odd t on the other
    let mut sides = vec![0u8; lists.len()];
    for i in 1..=idx.n {
        for r in 1..=4 {
            sides[idx.y(i, r).index()] = 1;
            for k in (1..=12).step_by(2) {
                sides[idx.t(i, r, k).index()] = 1;
            }
        }
    }
    for j in 1..=idx.m {
        for s in 1..=3 {
            sides[idx.p(j, s).index()] = 1;
        }
        sides[idx.q(j).index()] = 1;
    }
    Instance::new(lists, Some(sides)).expect("construction is a valid bipartite instance")
}

fn connector_deviators(idx: &GadgetIndex) -> DeviatorSet {
    let members = (1..=idx.n).flat_map(|i| (1..=4).flat_map(move |r| [(i, r, 1), (i, r, 7)]));
    DeviatorSet::new(idx.num_agents(), members.map(|(i, r, k)| idx.t(i, r, k)))
}

/// The full construction: perfect regime, blocking pairs, budget 0, with its
/// bipartition attached.
pub fn sat_to_perfect_smi(f: &CnfFormula) -> (DeviatorProblem, GadgetIndex) {
    let idx = GadgetIndex::new(f);
    let inst = connected_instance(&idx);
    let d = connector_deviators(&idx);
    let p = DeviatorProblem::new(inst, d, Objective::BlockingPairs, SizeRegime::Perfect, Budget::AtMost(0));
    (p, idx)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the assignment does not satisfy the formula")]
    UnsatisfiedAssignment,
    #[error("assignment has {got} values for {want} variables")]
    WrongLength { got: usize, want: usize },
}

fn gadget_pairs(f: &CnfFormula, assignment: &[bool], idx: &GadgetIndex) -> Result<Vec<(AgentId, AgentId)>, WitnessError> {
    if assignment.len() != f.num_vars() {
        return Err(WitnessError::WrongLength { got: assignment.len(), want: f.num_vars() });
    }
    if !f.is_satisfied_by(assignment) {
        return Err(WitnessError::UnsatisfiedAssignment);
    }
    let mut pairs = Vec::new();
    for i in 1..=idx.n {
        let partner = if assignment[i - 1] { [1, 2, 3, 4] } else { [2, 3, 4, 1] };
        for r in 1..=4 {
            pairs.push((idx.x(i, r), idx.y(i, partner[r - 1])));
        }
    }
    for (j0, clause) in f.clauses().iter().enumerate() {
        let j = j0 + 1;
        let chosen = clause.iter().position(|&l| literal_true(l, assignment)).expect("satisfied") + 1;
        for s in 1..=3 {
            if s == chosen {
                pairs.push((idx.c(j, s), idx.q(j)));
                pairs.push((idx.p(j, s), idx.z(j)));
            } else {
                pairs.push((idx.c(j, s), idx.p(j, s)));
            }
        }
    }
    Ok(pairs)
}

/// The perfect matching of the direct instance that the assignment induces:
/// the true/false matching per variable and, per clause, the matching that
/// picks its first true literal.
pub fn direct_witness(f: &CnfFormula, assignment: &[bool], idx: &GadgetIndex) -> Result<Matching, WitnessError> {
    let (inst, _) = sat_to_direct_smi(f);
    let pairs = gadget_pairs(f, assignment, idx)?;
    Ok(Matching::from_pairs(&inst, pairs).expect("witness pairs are acceptable"))
}

/// Extends [`direct_witness`] with one of the two perfect matchings of
/// every connector: the first when `x_i^r` prefers its partner to its clause
/// agent, the second otherwise.
pub fn witness_matching(f: &CnfFormula, assignment: &[bool], idx: &GadgetIndex) -> Result<Matching, WitnessError> {
    let (direct, _) = sat_to_direct_smi(f);
    let mut pairs = gadget_pairs(f, assignment, idx)?;
    let dm = Matching::from_pairs(&direct, pairs.iter().copied()).expect("witness pairs are acceptable");
    for i in 1..=idx.n {
        for r in 1..=4 {
            let x = idx.x(i, r);
            let (j, s) = idx.literal_of(i, r);
            let t = |k| idx.t(i, r, k);
            if direct.prefers(x, dm.partner_of(x), Some(idx.c(j, s))) {
                pairs.extend((1..=11).step_by(2).map(|k| (t(k), t(k + 1))));
            } else {
                pairs.push((t(1), t(12)));
                pairs.extend((2..=10).step_by(2).map(|k| (t(k), t(k + 1))));
            }
        }
    }
    let inst = connected_instance(idx);
    Ok(Matching::from_pairs(&inst, pairs).expect("witness pairs are acceptable"))
}

/// Drops every pair that touches a connector, leaving a matching over the
/// direct instance's ids.
pub fn strip_connectors(m: &Matching, idx: &GadgetIndex) -> Vec<(AgentId, AgentId)> {
    m.pairs().filter(|&(a, b)| !idx.is_connector(a) && !idx.is_connector(b)).collect()
}

/// One communication path: variable gadget `i`, the clause gadget of slot
/// `r`, and (in the connected version) the connector between them, each
/// induced from the full instances.
#[derive(Clone, Debug)]
pub struct PathSubinstance {
    /// 28 agents: the 16 of `direct` in the same order, then `t^{r,1..12}`.
    pub connected: DeviatorProblem,
    /// 16 agents: the variable gadget then the clause gadget.
    pub direct: Instance,
    /// Ids of the communication edge in `direct`.
    pub x: AgentId,
    pub c: AgentId,
    /// Local id to global id.
    pub globals: Vec<AgentId>,
}

pub fn path_subinstance(f: &CnfFormula, idx: &GadgetIndex, i: usize, r: usize) -> PathSubinstance {
    let (j, s) = idx.literal_of(i, r);
    let mut keep = idx.variable_agents(i);
    keep.extend(idx.clause_agents(j));
    let (direct_full, _) = sat_to_direct_smi(f);
    let (direct, _) = direct_full.induced(&keep);
    keep.extend(idx.connector_agents(i, r));
    let full = connected_instance(idx);
    let (inst, globals) = full.induced(&keep);
    let n = inst.num_agents();
    let d = DeviatorSet::new(n, [agent(17), agent(23)]);
    let connected = DeviatorProblem::new(inst, d, Objective::BlockingPairs, SizeRegime::Perfect, Budget::AtMost(0));
    let local = |g: AgentId| agent(globals.iter().position(|&a| a == g).expect("kept") as u32 + 1);
    PathSubinstance {
        x: local(idx.x(i, r)),
        c: local(idx.c(j, s)),
        connected,
        direct,
        globals,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocking::blocking_report;
    use crate::problem::verify_solution;
    use crate::reductions::cnf::formula_b;

    #[test]
    fn formula_b_sizes_and_wiring() {
        let f = formula_b();
        let (p, idx) = sat_to_perfect_smi(&f);
        assert_eq!(p.instance.num_agents(), 200);
        assert_eq!(p.deviators.len(), 24);
        assert_eq!(p.instance.d_max(), 3);
        assert!(p.instance.sides().is_some());
        // clause 3 = (V1 ∨ ¬V2 ∨ V3): second unnegated V1, second negated V2, second unnegated V3
        assert_eq!(idx.slot_of(3, 1), (1, 2));
        assert_eq!(idx.slot_of(3, 2), (2, 4));
        assert_eq!(idx.slot_of(3, 3), (3, 2));
        assert_eq!(idx.literal_of(2, 3), (2, 2));
        assert_eq!(idx.label(idx.t(1, 4, 7)), "t_1^{4,7}");
        assert_eq!(idx.label(idx.y(3, 2)), "y_3^2");
        assert_eq!(idx.label(idx.z(4)), "z_4");
        assert_eq!(p.instance.prefs(idx.x(1, 3)), &[idx.y(1, 4), idx.t(1, 3, 7), idx.y(1, 3)]);
        assert_eq!(p.instance.prefs(idx.t(2, 3, 1)), &[idx.t(2, 3, 2), idx.c(2, 2), idx.t(2, 3, 12)]);
    }

    #[test]
    fn direct_instance_is_bipartite() {
        let (inst, idx) = sat_to_direct_smi(&formula_b());
        assert_eq!(inst.num_agents(), idx.num_direct_agents());
        assert_eq!(inst.prefs(idx.c(1, 1)), &[idx.p(1, 1), idx.x(1, 1), idx.q(1)]);
    }

    #[test]
    fn witness_for_formula_b() {
        let f = formula_b();
        let (p, idx) = sat_to_perfect_smi(&f);
        let m = witness_matching(&f, &[true, false, false], &idx).unwrap();
        assert!(m.is_perfect());
        assert_eq!(verify_solution(&p, &m, 0), Ok(0));
        assert!(m.contains(idx.x(1, 1), idx.y(1, 1)));
        assert!(m.contains(idx.x(2, 1), idx.y(2, 2)));
        assert_eq!(
            witness_matching(&f, &[true, true, true], &idx),
            Err(WitnessError::UnsatisfiedAssignment)
        );
        // the connector-free part never blocks along a communication edge
        let dm = direct_witness(&f, &[true, false, false], &idx).unwrap();
        let (direct, _) = sat_to_direct_smi(&f);
        let report = blocking_report(&direct, &dm, &DeviatorSet::all(direct.num_agents()));
        let vars = 8 * idx.num_vars();
        assert!(report.blocking_pairs.iter().all(|&(a, b)| a.index() >= vars || b.index() < vars));
        assert_eq!(report.blocking_pairs.len(), 3 + 4);
        assert_eq!(strip_connectors(&m, &idx), dm.pairs().collect::<Vec<_>>());
    }

    #[test]
    fn path_subinstance_layout() {
        let f = formula_b();
        let idx = GadgetIndex::new(&f);
        let path = path_subinstance(&f, &idx, 2, 3);
        assert_eq!(path.connected.instance.num_agents(), 28);
        assert_eq!(path.direct.num_agents(), 16);
        assert_eq!(path.globals[16], idx.t(2, 3, 1));
        assert!(path.direct.is_acceptable(path.x, path.c));
        assert_eq!(path.x, agent(3));
    }
}
