//! Seeded random instances.
//!
//! The RNG is `rand_chacha::ChaCha8Rng::seed_from_u64(seed)` (rand 0.8 /
//! rand_chacha 0.3). Edges are sampled first and each agent's list is then a
//! uniform shuffle of its neighbours, so acceptability is symmetric by
//! construction. Deviators are drawn last.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::blocking::DeviatorSet;
use crate::instance::{AgentId, Instance};
use crate::problem::{Budget, DeviatorProblem, Objective, SizeRegime};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    /// Arbitrary acceptability graph with degrees capped at `list_cap`.
    SriUniform,
    /// Bipartite graph; sides are a balanced random split, attached as a tag.
    SmiUniform,
    /// Disjoint random paths and cycles (`list_cap ≤ 2`).
    PathCycleOnly,
    /// A bipartite graph, then extra edges between conformists only, so that
    /// dropping conformist–conformist edges leaves a bipartite graph.
    DeviatorCore,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DeviatorSpec {
    /// Each agent independently with this probability.
    Fraction(f64),
    /// Exactly this many agents, uniformly.
    Exact(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub model: Model,
    pub list_cap: usize,
    pub deviator_fraction: f64,
    pub seed: u64,
    /// Acceptance probability of each candidate edge.
    pub edge_probability: f64,
    /// Overrides `deviator_fraction` with an exact deviator count.
    pub deviator_count: Option<usize>,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            n: 0,
            model: Model::SriUniform,
            list_cap: 3,
            deviator_fraction: 0.5,
            seed: 0,
            edge_probability: 1.0,
            deviator_count: None,
        }
    }
}

impl GenSpec {
    pub fn deviators(&self) -> DeviatorSpec {
        match self.deviator_count {
            Some(c) => DeviatorSpec::Exact(c),
            None => DeviatorSpec::Fraction(self.deviator_fraction),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("infeasible spec: {0}")]
    InfeasibleSpec(String),
}

fn infeasible(msg: impl Into<String>) -> GenError {
    GenError::InfeasibleSpec(msg.into())
}

fn check(spec: &GenSpec) -> Result<(), GenError> {
    if !(0.0..=1.0).contains(&spec.deviator_fraction) {
        return Err(infeasible(format!("deviator fraction {} outside [0, 1]", spec.deviator_fraction)));
    }
    if !(0.0..=1.0).contains(&spec.edge_probability) {
        return Err(infeasible(format!("edge probability {} outside [0, 1]", spec.edge_probability)));
    }
    if spec.list_cap == 0 {
        return Err(infeasible("list cap must be at least 1"));
    }
    if spec.model == Model::PathCycleOnly && spec.list_cap > 2 {
        return Err(infeasible("path/cycle model needs list cap at most 2"));
    }
    if let Some(c) = spec.deviator_count {
        if c > spec.n {
            return Err(infeasible(format!("{c} deviators requested among {} agents", spec.n)));
        }
    }
    if u32::try_from(spec.n).is_err() {
        return Err(infeasible("too many agents"));
    }
    Ok(())
}

struct Builder {
    adj: Vec<Vec<u32>>,
    cap: usize,
}

impl Builder {
    fn new(n: usize, cap: usize) -> Self {
        Builder {
            adj: vec![Vec::new(); n],
            cap,
        }
    }

    fn try_add(&mut self, i: usize, j: usize) -> bool {
        if i == j
            || self.adj[i].len() >= self.cap
            || self.adj[j].len() >= self.cap
            || self.adj[i].contains(&(j as u32 + 1))
        {
            return false;
        }
        self.adj[i].push(j as u32 + 1);
        self.adj[j].push(i as u32 + 1);
        true
    }

    /// Offers candidate pairs allowed by `ok`: all of them in random order for
    /// small `n`, random attempts otherwise.
    fn sample(&mut self, rng: &mut ChaCha8Rng, p: f64, mut ok: impl FnMut(usize, usize) -> bool) {
        let n = self.adj.len();
        if n < 2 {
            return;
        }
        if n <= 64 {
            let mut pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| ok(i, j)).collect();
            pairs.shuffle(rng);
            for (i, j) in pairs {
                if rng.gen_bool(p) {
                    self.try_add(i, j);
                }
            }
        } else {
            for _ in 0..2 * n * self.cap {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i != j && ok(i.min(j), i.max(j)) && rng.gen_bool(p) {
                    self.try_add(i, j);
                }
            }
        }
    }

    fn finish(mut self, rng: &mut ChaCha8Rng, sides: Option<Vec<u8>>) -> Instance {
        for list in &mut self.adj {
            list.shuffle(rng);
        }
        Instance::new(self.adj, sides).expect("generated lists are symmetric")
    }
}

fn balanced_sides(n: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut sides: Vec<u8> = (0..n).map(|i| (i % 2) as u8).collect();
    sides.shuffle(rng);
    sides
}

fn path_cycle(n: usize, cap: usize, rng: &mut ChaCha8Rng) -> Instance {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut b = Builder::new(n, cap);
    let mut start = 0;
    while start < n {
        let max_len = if cap == 1 { 2 } else { (n - start).min(12) };
        let len = rng.gen_range(1..=max_len.min(n - start));
        let seg = &order[start..start + len];
        for w in seg.windows(2) {
            b.try_add(w[0], w[1]);
        }
        if cap == 2 && len >= 3 && rng.gen_bool(0.5) {
            b.try_add(seg[0], seg[len - 1]);
        }
        start += len;
    }
    b.finish(rng, None)
}

pub fn generate(spec: &GenSpec) -> Result<DeviatorProblem, GenError> {
    check(spec)?;
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // deviators of the core model are drawn before its edges
    let mut core_d = None;
    let instance = match spec.model {
        Model::SriUniform => {
            let mut b = Builder::new(n, spec.list_cap);
            b.sample(&mut rng, spec.edge_probability, |_, _| true);
            b.finish(&mut rng, None)
        }
        Model::SmiUniform => {
            let sides = balanced_sides(n, &mut rng);
            let mut b = Builder::new(n, spec.list_cap);
            b.sample(&mut rng, spec.edge_probability, |i, j| sides[i] != sides[j]);
            b.finish(&mut rng, Some(sides))
        }
        Model::PathCycleOnly => path_cycle(n, spec.list_cap, &mut rng),
        Model::DeviatorCore => {
            let d = draw_deviators(spec, &mut rng);
            let sides = balanced_sides(n, &mut rng);
            let mut b = Builder::new(n, spec.list_cap);
            b.sample(&mut rng, spec.edge_probability, |i, j| {
                sides[i] != sides[j] && (d.contains(AgentId::from_index(i)) || d.contains(AgentId::from_index(j)))
            });
            b.sample(&mut rng, spec.edge_probability, |i, j| {
                !d.contains(AgentId::from_index(i)) && !d.contains(AgentId::from_index(j))
            });
            core_d = Some(d);
            b.finish(&mut rng, None)
        }
    };
    let deviators = match core_d {
        Some(d) => d,
        None => draw_deviators(spec, &mut rng),
    };
    Ok(DeviatorProblem::new(
        instance,
        deviators,
        Objective::BlockingPairs,
        SizeRegime::Any,
        Budget::Optimize,
    ))
}

fn draw_deviators(spec: &GenSpec, rng: &mut ChaCha8Rng) -> DeviatorSet {
    let n = spec.n;
    match spec.deviators() {
        DeviatorSpec::Exact(c) => {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(rng);
            DeviatorSet::new(n, all[..c].iter().map(|&i| AgentId::from_index(i)))
        }
        DeviatorSpec::Fraction(f) => {
            DeviatorSet::new(n, (0..n).filter(|_| rng.gen_bool(f)).map(AgentId::from_index).collect::<Vec<_>>())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_instance() {
        let p = generate(&GenSpec::default()).unwrap();
        assert_eq!(p.instance.num_agents(), 0);
    }

    #[test]
    fn same_seed_same_output() {
        for model in [Model::SriUniform, Model::SmiUniform, Model::PathCycleOnly, Model::DeviatorCore] {
            let spec = GenSpec {
                n: 90,
                model,
                list_cap: 2,
                seed: 42,
                ..GenSpec::default()
            };
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }

    #[test]
    fn caps_and_models_respected() {
        for seed in 0..50 {
            for (model, cap) in [
                (Model::SriUniform, 4),
                (Model::SmiUniform, 3),
                (Model::PathCycleOnly, 2),
                (Model::PathCycleOnly, 1),
                (Model::DeviatorCore, 3),
            ] {
                let spec = GenSpec {
                    n: 9 + seed as usize,
                    model,
                    list_cap: cap,
                    seed,
                    ..GenSpec::default()
                };
                let p = generate(&spec).unwrap();
                assert!(p.instance.d_max() <= cap);
                if model == Model::SmiUniform {
                    assert!(p.instance.sides().is_some());
                }
                if model == Model::DeviatorCore {
                    let core = p
                        .instance
                        .filter_edges(|a, b| p.deviators.contains(a) || p.deviators.contains(b));
                    assert!(core.two_colouring().is_some());
                }
            }
        }
    }

    #[test]
    fn exact_deviator_count() {
        let spec = GenSpec {
            n: 10,
            deviator_count: Some(4),
            seed: 3,
            ..GenSpec::default()
        };
        assert_eq!(generate(&spec).unwrap().deviators.len(), 4);
    }

    #[test]
    fn infeasible_specs() {
        let bad = [
            GenSpec {
                deviator_fraction: 1.5,
                ..GenSpec::default()
            },
            GenSpec {
                list_cap: 0,
                ..GenSpec::default()
            },
            GenSpec {
                model: Model::PathCycleOnly,
                list_cap: 3,
                ..GenSpec::default()
            },
            GenSpec {
                n: 2,
                deviator_count: Some(3),
                ..GenSpec::default()
            },
        ];
        for spec in bad {
            assert!(matches!(generate(&spec), Err(GenError::InfeasibleSpec(_))));
        }
    }
}
