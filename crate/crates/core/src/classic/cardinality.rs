use std::collections::VecDeque;

use crate::instance::{AgentId, Instance};
use crate::matching::Matching;

const NONE: usize = usize::MAX;

struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl Blossom<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut on_path = vec![false; self.mate.len()];
        loop {
            a = self.base[a];
            on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the exposed endpoint of
    /// an augmenting path if one exists.
    fn find_path(&mut self, root: usize) -> usize {
        let n = self.mate.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        NONE
    }
}

/// Maximum-cardinality matching of the acceptability graph (Edmonds' blossom
/// algorithm, cubic time).
pub fn max_cardinality_matching(inst: &Instance) -> Matching {
    let n = inst.num_agents();
    let adj: Vec<Vec<usize>> = inst
        .agents()
        .map(|a| inst.prefs(a).iter().map(|b| b.index()).collect())
        .collect();
    let mut state = Blossom {
        adj: &adj,
        mate: vec![NONE; n],
        parent: vec![NONE; n],
        base: (0..n).collect(),
        used: vec![false; n],
        in_blossom: vec![false; n],
        queue: VecDeque::new(),
    };

    // greedy warm start
    for (v, nbrs) in adj.iter().enumerate() {
        if state.mate[v] == NONE {
            if let Some(&u) = nbrs.iter().find(|&&u| state.mate[u] == NONE) {
                state.mate[v] = u;
                state.mate[u] = v;
            }
        }
    }

    for root in 0..n {
        if state.mate[root] != NONE {
            continue;
        }
        let mut v = state.find_path(root);
        while v != NONE {
            let pv = state.parent[v];
            let ppv = state.mate[pv];
            state.mate[v] = pv;
            state.mate[pv] = v;
            v = ppv;
        }
    }

    let mut m = Matching::empty(n);
    for v in 0..n {
        let u = state.mate[v];
        if u != NONE && v < u {
            m.insert(AgentId::from_index(v), AgentId::from_index(u));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_max(inst: &Instance) -> usize {
        fn go(used: &mut [bool], edges: &[(AgentId, AgentId)], i: usize) -> usize {
            if i == edges.len() {
                return 0;
            }
            let skip = go(used, edges, i + 1);
            let (a, b) = edges[i];
            if used[a.index()] || used[b.index()] {
                return skip;
            }
            used[a.index()] = true;
            used[b.index()] = true;
            let take = 1 + go(used, edges, i + 1);
            used[a.index()] = false;
            used[b.index()] = false;
            skip.max(take)
        }
        let edges = inst.edges();
        go(&mut vec![false; inst.num_agents()], &edges, 0)
    }

    #[test]
    fn odd_cycle_with_pendant_needs_blossom() {
        // 5-cycle 1..5 plus pendant 6 attached to 3 and 7 attached to 1
        let inst = Instance::from_lists(&[
            &[2, 5, 7],
            &[1, 3],
            &[2, 4, 6],
            &[3, 5],
            &[4, 1],
            &[3],
            &[1],
        ])
        .unwrap();
        let m = max_cardinality_matching(&inst);
        assert!(m.is_valid_for(&inst));
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..=9);
            let mut lists = vec![Vec::new(); n];
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.35) {
                        lists[i].push(j as u32 + 1);
                        lists[j].push(i as u32 + 1);
                    }
                }
            }
            let inst = Instance::new(lists, None).unwrap();
            let m = max_cardinality_matching(&inst);
            assert!(m.is_valid_for(&inst));
            assert_eq!(m.len(), brute_force_max(&inst));
        }
    }
}
