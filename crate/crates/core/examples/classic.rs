//! Textbook baselines: Gale-Shapley, Irving's roommates algorithm, maximum
//! cardinality and maximum weight matchings.

use deviator_matching::classic::{gale_shapley, irving_sr, max_cardinality_matching};
use deviator_matching::generators::{generate, GenSpec, Model};
use deviator_matching::blocking::is_stable;

fn main() {
    let smi = generate(&GenSpec { n: 20, model: Model::SmiUniform, list_cap: 4, seed: 1, ..GenSpec::default() }).unwrap();
    let m = gale_shapley(&smi.instance).unwrap();
    println!("gale-shapley: {} pairs, stable {}", m.len(), is_stable(&smi.instance, &m));

    for seed in 0..5 {
        let sri = generate(&GenSpec { n: 12, list_cap: 4, seed, ..GenSpec::default() }).unwrap();
        let max = max_cardinality_matching(&sri.instance).len();
        match irving_sr(&sri.instance) {
            Some(m) => println!("seed {seed}: stable matching of size {} (maximum {max})", m.len()),
            None => println!("seed {seed}: no stable matching (maximum size {max})"),
        }
    }
}
