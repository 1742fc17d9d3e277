//! Polynomial solvers for instances whose lists hold at most two agents.

use deviator_matching::generators::{generate, GenSpec, Model};
use deviator_matching::shortlist::{decompose, solve_shortlist, solve_shortlist_any_detailed};
use deviator_matching::{Objective, SizeRegime};

fn main() {
    let spec = GenSpec { n: 40, model: Model::PathCycleOnly, list_cap: 2, deviator_fraction: 0.6, seed: 7, ..GenSpec::default() };
    let p = generate(&spec).unwrap();

    let dec = decompose(&p.instance).unwrap();
    println!("{} paths, {} even cycles, {} odd cycles", dec.paths.len(), dec.even_cycles.len(), dec.odd_cycles.len());

    let (out, cycles) = solve_shortlist_any_detailed(&p).unwrap();
    for t in &cycles {
        println!("odd cycle {:?}: {:?}, unmatched {:?}", t.cycle.iter().map(|a| a.get()).collect::<Vec<_>>(), t.case, t.unmatched);
    }
    println!("any size, pairs: {:?}", out.value());

    for objective in [Objective::BlockingPairs, Objective::BlockingAgents] {
        let q = p.with_regime(SizeRegime::MaxCardinality).with_objective(objective);
        let out = solve_shortlist(&q).unwrap();
        println!("max cardinality, {objective}: {:?} ({})", out.value(), out.certificate_note);
    }
}
