//! Companion agents turning the perfect regime into the any-size regime,
//! and the two list completions.

use deviator_matching::reductions::{complete_lists, minba_complete, minba_label, smi_to_sri};
use deviator_matching::{Budget, DeviatorProblem, DeviatorSet, Instance, Objective, SizeRegime};

fn main() {
    let inst = Instance::new(vec![vec![3, 4], vec![3], vec![1, 2], vec![1]], Some(vec![0, 0, 1, 1])).unwrap();
    let p = DeviatorProblem::new(inst, DeviatorSet::from_raw(4, &[1]), Objective::BlockingPairs, SizeRegime::Perfect, Budget::AtMost(0));

    let q = smi_to_sri(&p).unwrap();
    println!("with companions: {} agents, {} deviators, regime {}", q.instance.num_agents(), q.deviators.len(), q.regime);
    println!("lists: {:?}", q.instance.raw_lists());

    let c = complete_lists(&p);
    println!("completed: {:?}", c.instance.raw_lists());

    let small = Instance::from_lists(&[&[3], &[], &[1]]).unwrap();
    let k = 1;
    let done = minba_complete(&small, k);
    for a in done.agents() {
        let names: Vec<String> = done.prefs(a).iter().map(|&b| minba_label(3, k, b)).collect();
        println!("{}: {}", minba_label(3, k, a), names.join(", "));
    }
}
