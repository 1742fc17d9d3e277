//! Build an instance by hand, pick deviators, and find a matching with the
//! fewest blocking pairs among deviators.

use deviator_matching::fpt::optimize_fpt;
use deviator_matching::{blocking_report, Budget, DeviatorProblem, DeviatorSet, Instance, Objective, SizeRegime};

fn main() {
    // five agents on a ring, each preferring its clockwise neighbour
    let inst = Instance::from_lists(&[&[2, 5], &[3, 1], &[4, 2], &[5, 3], &[1, 4]]).unwrap();
    let d = DeviatorSet::from_raw(5, &[1, 3]);
    let p = DeviatorProblem::new(inst, d, Objective::BlockingPairs, SizeRegime::MaxCardinality, Budget::Optimize);

    let out = optimize_fpt(&p).expect("max-cardinality regime is always feasible");
    let m = out.matching().unwrap();
    for (a, b) in m.pairs() {
        println!("{a} - {b}");
    }
    println!("deviator blocking pairs: {}", out.value().unwrap());

    let all = blocking_report(&p.instance, m, &p.deviators);
    println!("blocking pairs overall: {:?}", all.blocking_pairs);
    println!("those with a deviator: {:?}", all.deviator_pairs);
    println!("{}", out.certificate_note);
}
