//! Random instances from each generator model, reproducible by seed.

use deviator_matching::generators::{generate, GenSpec, Model};

fn main() {
    for model in [Model::SriUniform, Model::SmiUniform, Model::PathCycleOnly, Model::DeviatorCore] {
        let cap = if model == Model::PathCycleOnly { 2 } else { 4 };
        let spec = GenSpec { n: 30, model, list_cap: cap, deviator_fraction: 0.25, edge_probability: 0.8, seed: 42, ..GenSpec::default() };
        let p = generate(&spec).unwrap();
        let pairs: usize = p.instance.agents().map(|a| p.instance.prefs(a).len()).sum::<usize>() / 2;
        println!("{model:?}: {pairs} acceptable pairs, d_max {}, {} deviators", p.instance.d_max(), p.deviators.len());
        assert_eq!(generate(&spec).unwrap(), p);
    }
}
