//! When the graph without conformist-conformist edges is bipartite, a
//! stable matching of that graph leaves no blocking pair with a deviator.

use deviator_matching::fpt::solve_bipartite_restriction;
use deviator_matching::generators::{generate, GenSpec, Model};

fn main() {
    let spec = GenSpec { n: 500, model: Model::DeviatorCore, list_cap: 5, deviator_fraction: 0.3, seed: 3, ..GenSpec::default() };
    let p = generate(&spec).unwrap();
    match solve_bipartite_restriction(&p) {
        Ok(m) => println!("{} pairs, {} deviator blocking pairs", m.len(), p.value(&m)),
        Err(e) => println!("not applicable: {e}"),
    }
}
