//! Builds the perfect-matching instance of a formula where every literal
//! occurs twice, and turns a satisfying assignment into a matching with no
//! blocking pair among its deviators.

use deviator_matching::reductions::{
    formula_b, gadget, sat_to_perfect_smi, strip_connectors, witness_matching, GadgetIndex, GadgetKind,
};
use deviator_matching::{verify_solution, AgentId};

fn main() {
    let f = formula_b();
    print!("{}", f.to_dimacs());
    let (p, idx) = sat_to_perfect_smi(&f);
    println!("{} agents, {} deviators, d_max {}", p.instance.num_agents(), p.deviators.len(), p.instance.d_max());

    let label = |idx: &GadgetIndex, a: AgentId| idx.label(a);
    print!("list of {}:", label(&idx, idx.t(1, 1, 1)));
    for &b in p.instance.prefs(idx.t(1, 1, 1)) {
        print!(" {}", label(&idx, b));
    }
    println!();

    let a = f.find_satisfying_assignment().expect("satisfiable");
    println!("assignment {a:?}");
    let m = witness_matching(&f, &a, &idx).unwrap();
    println!("witness verified with value {:?}", verify_solution(&p, &m, 0));
    println!("{} pairs outside the connectors", strip_connectors(&m, &idx).len());

    for kind in [GadgetKind::Variable, GadgetKind::Clause, GadgetKind::Connector] {
        println!("{kind:?} gadget: {} agents", gadget(kind).num_agents());
    }
}
