//! Preference instances (SRI, and SMI when a bipartition tag is attached).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// A 1-based agent identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(u32);

impl AgentId {
    /// Panics on `0`; ids are 1-based.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "agent ids are 1-based");
        AgentId(id)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// Zero-based position, for indexing dense tables.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    #[inline]
    pub fn from_index(index: usize) -> Self {
        AgentId(index as u32 + 1)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand used heavily in tests and examples.
pub fn agent(id: u32) -> AgentId {
    AgentId::new(id)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("agent {agent} ranks unknown agent {entry}")]
    UnknownAgent { agent: u32, entry: u32 },
    #[error("agent {agent} ranks itself")]
    SelfRank { agent: u32 },
    #[error("agent {agent} ranks agent {entry} more than once")]
    DuplicateEntry { agent: u32, entry: u32 },
    #[error("agent {ranker} ranks agent {ranked} but not vice versa")]
    AsymmetricAcceptability { ranker: u32, ranked: u32 },
    #[error("acceptable pair {{{a}, {b}}} does not cross the bipartition")]
    SidedPairViolation { a: u32, b: u32 },
    #[error("agent {agent} has side label {label}, expected 0 or 1")]
    BadSideLabel { agent: u32, label: u8 },
    #[error("bipartition tag covers {found} agents, instance has {expected}")]
    SideCountMismatch { expected: usize, found: usize },
}

/// A validated instance: strict, symmetric, possibly incomplete preference lists.
///
/// Rank lookups go through a per-agent table sorted by neighbour id, so the
/// blocking test never scans a preference list.
#[derive(Clone, PartialEq, Eq)]
pub struct Instance {
    prefs: Vec<Vec<AgentId>>,
    ranks: Vec<Vec<(u32, u32)>>,
    sides: Option<Vec<u8>>,
    d_max: usize,
}

impl fmt::Debug for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut dbg = f.debug_struct("Instance");
        dbg.field("agents", &self.prefs.len());
        let lists: Vec<Vec<u32>> = self
            .prefs
            .iter()
            .map(|l| l.iter().map(|a| a.get()).collect())
            .collect();
        dbg.field("prefs", &lists);
        if let Some(s) = &self.sides {
            dbg.field("sides", s);
        }
        dbg.finish()
    }
}

impl Instance {
    /// Validates raw preference lists (entry `i` is the list of agent `i + 1`).
    pub fn new(prefs: Vec<Vec<u32>>, sides: Option<Vec<u8>>) -> Result<Self, InstanceError> {
        let n = prefs.len();
        let mut ranks = Vec::with_capacity(n);
        for (i, list) in prefs.iter().enumerate() {
            let me = i as u32 + 1;
            let mut table: Vec<(u32, u32)> = Vec::with_capacity(list.len());
            for (pos, &entry) in list.iter().enumerate() {
                if entry == 0 || entry as usize > n {
                    return Err(InstanceError::UnknownAgent { agent: me, entry });
                }
                if entry == me {
                    return Err(InstanceError::SelfRank { agent: me });
                }
                table.push((entry, pos as u32));
            }
            table.sort_unstable();
            if let Some(w) = table.windows(2).find(|w| w[0].0 == w[1].0) {
                return Err(InstanceError::DuplicateEntry { agent: me, entry: w[0].0 });
            }
            ranks.push(table);
        }
        for (i, list) in prefs.iter().enumerate() {
            let me = i as u32 + 1;
            for &entry in list {
                let other = &ranks[entry as usize - 1];
                if other.binary_search_by_key(&me, |&(a, _)| a).is_err() {
                    return Err(InstanceError::AsymmetricAcceptability {
                        ranker: me,
                        ranked: entry,
                    });
                }
            }
        }
        if let Some(s) = &sides {
            if s.len() != n {
                return Err(InstanceError::SideCountMismatch {
                    expected: n,
                    found: s.len(),
                });
            }
            for (i, &label) in s.iter().enumerate() {
                if label > 1 {
                    return Err(InstanceError::BadSideLabel {
                        agent: i as u32 + 1,
                        label,
                    });
                }
            }
            for (i, list) in prefs.iter().enumerate() {
                for &entry in list {
                    if s[i] == s[entry as usize - 1] {
                        let (a, b) = (i as u32 + 1, entry);
                        return Err(InstanceError::SidedPairViolation {
                            a: a.min(b),
                            b: a.max(b),
                        });
                    }
                }
            }
        }
        let d_max = prefs.iter().map(Vec::len).max().unwrap_or(0);
        let prefs = prefs
            .into_iter()
            .map(|l| l.into_iter().map(AgentId).collect())
            .collect();
        Ok(Instance {
            prefs,
            ranks,
            sides,
            d_max,
        })
    }

    /// Convenience constructor from borrowed lists.
    pub fn from_lists(lists: &[&[u32]]) -> Result<Self, InstanceError> {
        Instance::new(lists.iter().map(|l| l.to_vec()).collect(), None)
    }

    pub fn empty() -> Self {
        Instance {
            prefs: Vec::new(),
            ranks: Vec::new(),
            sides: None,
            d_max: 0,
        }
    }

    pub fn num_agents(&self) -> usize {
        self.prefs.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        (0..self.prefs.len()).map(AgentId::from_index)
    }

    /// Most-preferred first.
    #[inline]
    pub fn prefs(&self, a: AgentId) -> &[AgentId] {
        &self.prefs[a.index()]
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    /// Zero-based position of `b` in `a`'s list.
    #[inline]
    pub fn rank(&self, a: AgentId, b: AgentId) -> Option<usize> {
        let table = &self.ranks[a.index()];
        table
            .binary_search_by_key(&b.0, |&(x, _)| x)
            .ok()
            .map(|pos| table[pos].1 as usize)
    }

    #[inline]
    pub fn is_acceptable(&self, a: AgentId, b: AgentId) -> bool {
        self.rank(a, b).is_some()
    }

    /// Whether `a` strictly prefers `b` to `current` (`None` = unmatched,
    /// which ranks below every list entry).
    #[inline]
    pub fn prefers(&self, a: AgentId, b: AgentId, current: Option<AgentId>) -> bool {
        let Some(rb) = self.rank(a, b) else {
            return false;
        };
        match current {
            None => true,
            Some(c) => match self.rank(a, c) {
                Some(rc) => rb < rc,
                None => true,
            },
        }
    }

    pub fn sides(&self) -> Option<&[u8]> {
        self.sides.as_deref()
    }

    pub fn side(&self, a: AgentId) -> Option<u8> {
        self.sides.as_ref().map(|s| s[a.index()])
    }

    /// Acceptable pairs `(i, j)` with `i < j`, ordered lexicographically.
    pub fn edges(&self) -> Vec<(AgentId, AgentId)> {
        let mut out = Vec::new();
        for (i, table) in self.ranks.iter().enumerate() {
            let me = i as u32 + 1;
            for &(other, _) in table {
                if other > me {
                    out.push((AgentId(me), AgentId(other)));
                }
            }
        }
        out
    }

    pub fn num_edges(&self) -> usize {
        self.prefs.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Raw 1-based lists, the inverse of [`Instance::new`].
    pub fn raw_lists(&self) -> Vec<Vec<u32>> {
        self.prefs
            .iter()
            .map(|l| l.iter().map(|a| a.0).collect())
            .collect()
    }

    /// Same lists with the given bipartition tag (validated).
    pub fn with_sides(&self, sides: Vec<u8>) -> Result<Self, InstanceError> {
        Instance::new(self.raw_lists(), Some(sides))
    }

    pub fn without_sides(&self) -> Self {
        let mut out = self.clone();
        out.sides = None;
        out
    }

    /// Keeps exactly the acceptable pairs for which `keep` holds, preserving
    /// list order. Agent ids are unchanged.
    pub fn filter_edges(&self, mut keep: impl FnMut(AgentId, AgentId) -> bool) -> Self {
        let lists: Vec<Vec<u32>> = self
            .agents()
            .map(|a| {
                self.prefs(a)
                    .iter()
                    .filter(|&&b| {
                        let (x, y) = if a < b { (a, b) } else { (b, a) };
                        keep(x, y)
                    })
                    .map(|b| b.0)
                    .collect()
            })
            .collect();
        Instance::new(lists, None).expect("edge filtering preserves validity")
    }

    /// Sub-instance induced by `keep` (relabelled densely in the given order);
    /// the returned vector maps new index to original id.
    pub fn induced(&self, keep: &[AgentId]) -> (Instance, Vec<AgentId>) {
        // sized by `keep`, so many small sub-instances stay linear overall
        let local: HashMap<AgentId, u32> = keep.iter().enumerate().map(|(i, &a)| (a, i as u32 + 1)).collect();
        let lists = keep
            .iter()
            .map(|&a| self.prefs(a).iter().filter_map(|b| local.get(b).copied()).collect())
            .collect();
        let sides = self
            .sides
            .as_ref()
            .map(|s| keep.iter().map(|a| s[a.index()]).collect());
        let inst = Instance::new(lists, sides).expect("induced sub-instance stays valid");
        (inst, keep.to_vec())
    }

    /// Proper 2-colouring of the acceptability graph, if one exists. Each
    /// component's smallest agent gets colour 0.
    pub fn two_colouring(&self) -> Option<Vec<u8>> {
        let n = self.num_agents();
        let mut colour = vec![u8::MAX; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if colour[start] != u8::MAX {
                continue;
            }
            colour[start] = 0;
            stack.push(start);
            while let Some(v) = stack.pop() {
                for b in &self.prefs[v] {
                    let w = b.index();
                    if colour[w] == u8::MAX {
                        colour[w] = colour[v] ^ 1;
                        stack.push(w);
                    } else if colour[w] == colour[v] {
                        return None;
                    }
                }
            }
        }
        Some(colour)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_symmetric_instance() {
        let inst = Instance::from_lists(&[&[2], &[1]]).unwrap();
        assert_eq!(inst.num_agents(), 2);
        assert_eq!(inst.d_max(), 1);
        assert_eq!(inst.edges(), vec![(agent(1), agent(2))]);
    }

    #[test]
    fn one_sided_acceptability_is_rejected() {
        let err = Instance::from_lists(&[&[2], &[]]).unwrap_err();
        assert_eq!(
            err,
            InstanceError::AsymmetricAcceptability { ranker: 1, ranked: 2 }
        );
    }

    #[test]
    fn self_rank_and_duplicates() {
        assert_eq!(
            Instance::from_lists(&[&[1]]).unwrap_err(),
            InstanceError::SelfRank { agent: 1 }
        );
        assert_eq!(
            Instance::from_lists(&[&[2, 2], &[1]]).unwrap_err(),
            InstanceError::DuplicateEntry { agent: 1, entry: 2 }
        );
        assert_eq!(
            Instance::from_lists(&[&[3], &[1]]).unwrap_err(),
            InstanceError::UnknownAgent { agent: 1, entry: 3 }
        );
    }

    #[test]
    fn sides_must_separate_pairs() {
        let lists = vec![vec![2], vec![1]];
        assert!(Instance::new(lists.clone(), Some(vec![0, 1])).is_ok());
        assert_eq!(
            Instance::new(lists.clone(), Some(vec![1, 1])).unwrap_err(),
            InstanceError::SidedPairViolation { a: 1, b: 2 }
        );
        assert_eq!(
            Instance::new(lists, Some(vec![0])).unwrap_err(),
            InstanceError::SideCountMismatch { expected: 2, found: 1 }
        );
    }

    #[test]
    fn rank_and_preference() {
        let inst = Instance::from_lists(&[&[2, 3], &[1], &[1]]).unwrap();
        assert_eq!(inst.rank(agent(1), agent(3)), Some(1));
        assert!(inst.prefers(agent(1), agent(2), Some(agent(3))));
        assert!(!inst.prefers(agent(1), agent(3), Some(agent(2))));
        assert!(inst.prefers(agent(1), agent(3), None));
        assert!(!inst.prefers(agent(2), agent(3), None));
    }

    #[test]
    fn odd_cycle_has_no_colouring() {
        let tri = Instance::from_lists(&[&[2, 3], &[3, 1], &[1, 2]]).unwrap();
        assert!(tri.two_colouring().is_none());
        let path = Instance::from_lists(&[&[2], &[1, 3], &[2]]).unwrap();
        assert_eq!(path.two_colouring(), Some(vec![0, 1, 0]));
    }
}
