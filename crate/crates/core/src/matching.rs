use std::fmt;

use thiserror::Error;

use crate::instance::{AgentId, Instance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatchingError {
    #[error("agent {0} does not exist in the instance")]
    UnknownAgent(u32),
    #[error("agent {0} cannot be paired with itself")]
    SelfPair(u32),
    #[error("agent {0} appears in more than one pair")]
    AlreadyMatched(u32),
    #[error("pair {{{0}, {1}}} is not mutually acceptable")]
    NotAcceptable(u32, u32),
}

/// A set of disjoint, mutually acceptable pairs over agents `1..=n`.
///
/// Stored as a dense partner table; an unmatched agent is its own partner in
/// [`Matching::partner_of`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matching {
    partner: Vec<Option<AgentId>>,
    size: usize,
}

impl fmt::Debug for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(u32, u32)> = self.pairs().map(|(a, b)| (a.get(), b.get())).collect();
        f.debug_tuple("Matching").field(&pairs).finish()
    }
}

impl Matching {
    pub fn empty(num_agents: usize) -> Self {
        Matching {
            partner: vec![None; num_agents],
            size: 0,
        }
    }

    /// Builds a matching of `inst`, checking disjointness and acceptability.
    pub fn from_pairs(
        inst: &Instance,
        pairs: impl IntoIterator<Item = (AgentId, AgentId)>,
    ) -> Result<Self, MatchingError> {
        let n = inst.num_agents();
        let mut m = Matching::empty(n);
        for (a, b) in pairs {
            for x in [a, b] {
                if x.index() >= n {
                    return Err(MatchingError::UnknownAgent(x.get()));
                }
            }
            if a == b {
                return Err(MatchingError::SelfPair(a.get()));
            }
            if !inst.is_acceptable(a, b) {
                return Err(MatchingError::NotAcceptable(a.get().min(b.get()), a.get().max(b.get())));
            }
            for x in [a, b] {
                if m.partner[x.index()].is_some() {
                    return Err(MatchingError::AlreadyMatched(x.get()));
                }
            }
            m.insert(a, b);
        }
        Ok(m)
    }

    /// Like [`Matching::from_pairs`] but over raw ids.
    pub fn from_raw(inst: &Instance, pairs: &[(u32, u32)]) -> Result<Self, MatchingError> {
        for &(a, b) in pairs {
            if a == 0 {
                return Err(MatchingError::UnknownAgent(a));
            }
            if b == 0 {
                return Err(MatchingError::UnknownAgent(b));
            }
        }
        Matching::from_pairs(inst, pairs.iter().map(|&(a, b)| (AgentId::new(a), AgentId::new(b))))
    }

    /// Inserts a pair without acceptability checks. Both agents must be free.
    pub(crate) fn insert(&mut self, a: AgentId, b: AgentId) {
        debug_assert!(a != b);
        debug_assert!(self.partner[a.index()].is_none() && self.partner[b.index()].is_none());
        self.partner[a.index()] = Some(b);
        self.partner[b.index()] = Some(a);
        self.size += 1;
    }

    pub(crate) fn remove(&mut self, a: AgentId) {
        if let Some(b) = self.partner[a.index()].take() {
            self.partner[b.index()] = None;
            self.size -= 1;
        }
    }

    pub fn num_agents(&self) -> usize {
        self.partner.len()
    }

    #[inline]
    pub fn partner(&self, a: AgentId) -> Option<AgentId> {
        self.partner[a.index()]
    }

    /// `M(a)`, which is `a` itself when unmatched.
    pub fn partner_of(&self, a: AgentId) -> AgentId {
        self.partner[a.index()].unwrap_or(a)
    }

    pub fn is_matched(&self, a: AgentId) -> bool {
        self.partner[a.index()].is_some()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Every agent matched. The empty matching on zero agents counts.
    pub fn is_perfect(&self) -> bool {
        2 * self.size == self.partner.len()
    }

    pub fn contains(&self, a: AgentId, b: AgentId) -> bool {
        self.partner[a.index()] == Some(b)
    }

    /// Pairs `(i, j)` with `i < j`, in increasing order of `i`.
    pub fn pairs(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.partner.iter().enumerate().filter_map(|(i, p)| {
            let a = AgentId::from_index(i);
            match p {
                Some(b) if a < *b => Some((a, *b)),
                _ => None,
            }
        })
    }

    pub fn matched_agents(&self) -> Vec<AgentId> {
        (0..self.partner.len())
            .filter(|&i| self.partner[i].is_some())
            .map(AgentId::from_index)
            .collect()
    }

    /// Whether every pair is acceptable in `inst` (and sizes agree).
    pub fn is_valid_for(&self, inst: &Instance) -> bool {
        self.partner.len() == inst.num_agents()
            && self.pairs().all(|(a, b)| inst.is_acceptable(a, b))
    }
}

/// `|M|`.
pub fn matching_size(m: &Matching) -> usize {
    m.len()
}

pub fn is_perfect(inst: &Instance, m: &Matching) -> bool {
    m.num_agents() == inst.num_agents() && m.is_perfect()
}
