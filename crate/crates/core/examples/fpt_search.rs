//! The search parameterised by the number of deviators and the list
//! length: its pieces one at a time, then the whole search.

use deviator_matching::fpt::{
    configuration_bound, enumerate_configurations, extend_via_weighted_matching, solve_fpt_with, truncate_and_collect,
    AccessLog, FptOptions,
};
use deviator_matching::generators::{generate, GenSpec};
use deviator_matching::{Budget, Objective, SizeRegime};

fn main() {
    let spec = GenSpec { n: 60, list_cap: 3, deviator_count: Some(3), seed: 11, ..GenSpec::default() };
    let p = generate(&spec).unwrap().with_budget(Budget::AtMost(1)).with_regime(SizeRegime::MaxCardinality);
    println!("deviators {:?}, d_max {}", p.deviators.members(), p.instance.d_max());

    let configs = enumerate_configurations(&p, 1);
    println!("{} configurations with at most one blocked pair (bound {})", configs.len(), configuration_bound(&p, 1));
    for cfg in configs.iter().take(5) {
        let trunc = truncate_and_collect(&p, cfg);
        let extended = if trunc.is_rejected() { None } else { extend_via_weighted_matching(&p, cfg, &trunc, None) };
        println!(
            "#{}: |M_C| {}, blocked {:?}, must match {:?}, rejected {:?}, extended {}",
            cfg.index,
            cfg.candidate_matching.len(),
            cfg.blocked_set,
            trunc.must_match,
            trunc.rejected,
            extended.is_some()
        );
    }

    // multi-threaded, with a record of which lists were read; the
    // max-cardinality extension looks at the whole instance
    let log = AccessLog::new(p.instance.num_agents());
    for objective in [Objective::BlockingPairs, Objective::BlockingAgents] {
        let out = solve_fpt_with(&p.with_objective(objective), FptOptions { threads: 4, access_log: Some(&log) });
        println!("{objective}: value {:?}; {}", out.value(), out.certificate_note);
    }
    println!("lists read: {} of {}", log.touched().len(), p.instance.num_agents());

    // any size: only agents near the deviators are consulted
    let log = AccessLog::new(p.instance.num_agents());
    let out = solve_fpt_with(&p.with_regime(SizeRegime::Any), FptOptions { threads: 1, access_log: Some(&log) });
    println!("any size: value {:?}, lists read: {}", out.value(), log.touched().len());
}
