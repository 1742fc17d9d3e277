use std::collections::VecDeque;

use crate::instance::{AgentId, Instance};
use crate::matching::Matching;

/// Reduced preference table with symmetric deletion.
struct Table<'a> {
    inst: &'a Instance,
    alive: Vec<Vec<bool>>,
    head: Vec<usize>,
    tail: Vec<usize>,
    count: Vec<usize>,
    emptied: bool,
}

impl<'a> Table<'a> {
    fn new(inst: &'a Instance) -> Self {
        let alive: Vec<Vec<bool>> = inst.agents().map(|a| vec![true; inst.prefs(a).len()]).collect();
        let tail = alive.iter().map(Vec::len).collect::<Vec<_>>();
        Table {
            inst,
            head: vec![0; alive.len()],
            count: tail.clone(),
            tail,
            alive,
            emptied: false,
        }
    }

    fn delete_one_side(&mut self, a: AgentId, b: AgentId) {
        let r = self.inst.rank(a, b).expect("deleting a non-entry");
        let slot = &mut self.alive[a.index()][r];
        if *slot {
            *slot = false;
            self.count[a.index()] -= 1;
            if self.count[a.index()] == 0 {
                self.emptied = true;
            }
        }
    }

    fn delete(&mut self, a: AgentId, b: AgentId) {
        self.delete_one_side(a, b);
        self.delete_one_side(b, a);
    }

    fn first(&mut self, a: AgentId) -> Option<AgentId> {
        let i = a.index();
        while self.head[i] < self.alive[i].len() && !self.alive[i][self.head[i]] {
            self.head[i] += 1;
        }
        self.inst.prefs(a).get(self.head[i]).copied()
    }

    fn second(&mut self, a: AgentId) -> Option<AgentId> {
        self.first(a)?;
        let i = a.index();
        (self.head[i] + 1..self.alive[i].len())
            .find(|&p| self.alive[i][p])
            .map(|p| self.inst.prefs(a)[p])
    }

    fn last(&mut self, a: AgentId) -> Option<AgentId> {
        let i = a.index();
        while self.tail[i] > 0 && !self.alive[i][self.tail[i] - 1] {
            self.tail[i] -= 1;
        }
        if self.tail[i] == 0 {
            None
        } else {
            Some(self.inst.prefs(a)[self.tail[i] - 1])
        }
    }

    /// Deletes every pair `{a, w}` with `w` ranked below `b` by `a`.
    fn delete_after(&mut self, a: AgentId, b: AgentId) {
        let r = self.inst.rank(a, b).expect("cut point must be an entry");
        let worse: Vec<AgentId> = (r + 1..self.alive[a.index()].len())
            .filter(|&p| self.alive[a.index()][p])
            .map(|p| self.inst.prefs(a)[p])
            .collect();
        for w in worse {
            self.delete(a, w);
        }
    }
}

/// Irving's algorithm for stable roommates with incomplete lists. Returns
/// `None` when no stable matching exists.
pub fn irving_sr(inst: &Instance) -> Option<Matching> {
    let n = inst.num_agents();
    let mut table = Table::new(inst);

    // phase 1: proposals and rejections
    let mut holder: Vec<Option<AgentId>> = vec![None; n];
    let mut queue: VecDeque<AgentId> = inst.agents().collect();
    while let Some(x) = queue.pop_front() {
        let Some(y) = table.first(x) else { continue };
        // anyone y held before ranks below x and is cut by delete_after
        if let Some(z) = holder[y.index()] {
            queue.push_back(z);
        }
        holder[y.index()] = Some(x);
        table.delete_after(y, x);
    }
    table.emptied = false;

    // phase 2: rotation elimination
    let mut position = vec![usize::MAX; n];
    let mut cursor = 0;
    loop {
        while cursor < n && table.count[cursor] < 2 {
            cursor += 1;
        }
        if cursor == n {
            break;
        }
        let start = AgentId::from_index(cursor);
        let mut seq = vec![start];
        position[start.index()] = 0;
        let rotation_start = loop {
            let cur = *seq.last().unwrap();
            let y = table.second(cur).expect("agent with two entries has a second choice");
            let next = table.last(y).expect("second choice has a non-empty list");
            if position[next.index()] != usize::MAX {
                break position[next.index()];
            }
            position[next.index()] = seq.len();
            seq.push(next);
        };
        for &x in &seq {
            position[x.index()] = usize::MAX;
        }
        let cuts: Vec<(AgentId, AgentId)> = seq[rotation_start..]
            .iter()
            .map(|&x| (table.second(x).unwrap(), x))
            .collect();
        for (y, x) in cuts {
            table.delete_after(y, x);
        }
        if table.emptied {
            return None;
        }
    }

    let mut m = Matching::empty(n);
    for a in inst.agents() {
        if table.count[a.index()] == 1 {
            let b = table.first(a).unwrap();
            if a < b {
                m.insert(a, b);
            }
        }
    }
    Some(m)
}
