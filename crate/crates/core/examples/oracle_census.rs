//! Exhaustive search over small instances: optima for both objectives, and
//! which agents the stable matchings cover.

use deviator_matching::oracle::{enumerate_matchings, oracle_solve};
use deviator_matching::{Budget, DeviatorProblem, DeviatorSet, Instance, Objective, SizeRegime};

fn main() {
    let inst = Instance::from_lists(&[&[2, 3, 4], &[3, 1, 4], &[1, 2, 4], &[1, 2, 3]]).unwrap();
    for regime in [SizeRegime::Any, SizeRegime::MaxCardinality, SizeRegime::Perfect] {
        println!("{regime}: {} matchings", enumerate_matchings(&inst, regime).unwrap().len());
    }
    for d in [vec![], vec![4], vec![1, 2, 3, 4]] {
        let p = DeviatorProblem::new(
            inst.clone(),
            DeviatorSet::from_raw(4, &d),
            Objective::BlockingPairs,
            SizeRegime::Perfect,
            Budget::Optimize,
        );
        let r = oracle_solve(&p).unwrap();
        println!("deviators {d:?}: optimum pairs {:?}, agents {:?}", r.optimum_bp, r.optimum_ba);
        println!("  stable matching exists: {:?}, matched sets {:?}", r.stable_exists, r.stable_matched_sets);
    }
}
