use std::collections::VecDeque;

use thiserror::Error;

use crate::instance::{AgentId, Instance};
use crate::matching::Matching;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("instance carries no bipartition tag")]
pub struct NotBipartite;

/// Deferred acceptance on an SMI instance. The side containing agent 1
/// proposes.
pub fn gale_shapley(inst: &Instance) -> Result<Matching, NotBipartite> {
    let sides = inst.sides().ok_or(NotBipartite)?;
    let n = inst.num_agents();
    let mut m = Matching::empty(n);
    if n == 0 {
        return Ok(m);
    }
    let proposing = sides[0];
    let mut next = vec![0usize; n];
    let mut queue: VecDeque<AgentId> = inst
        .agents()
        .filter(|a| sides[a.index()] == proposing)
        .collect();

    while let Some(p) = queue.pop_front() {
        let list = inst.prefs(p);
        while next[p.index()] < list.len() {
            let r = list[next[p.index()]];
            next[p.index()] += 1;
            match m.partner(r) {
                None => {
                    m.insert(p, r);
                    break;
                }
                Some(held) if inst.prefers(r, p, Some(held)) => {
                    m.remove(r);
                    m.insert(p, r);
                    queue.push_back(held);
                    break;
                }
                Some(_) => {}
            }
        }
    }
    Ok(m)
}
