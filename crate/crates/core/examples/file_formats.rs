//! Reading and writing instance and matching files.

use deviator_matching::format::{parse_instance, parse_matching, serialize_instance, serialize_matching};
use deviator_matching::fpt::optimize_fpt;
use deviator_matching::{Budget, DeviatorProblem, Objective, SizeRegime};

const TEXT: &str = "\
# three agents who each prefer the next one
dsm 1
agents 3
deviators 1 3
prefs 1: 2 3
prefs 2: 3 1
prefs 3: 1 2
";

fn main() {
    let f = parse_instance(TEXT).unwrap();
    print!("{}", serialize_instance(&f.instance, &f.deviators));

    let p = DeviatorProblem::new(f.instance, f.deviators, Objective::BlockingAgents, SizeRegime::Any, Budget::Optimize);
    let out = optimize_fpt(&p).unwrap();
    let text = serialize_matching(out.matching().unwrap());
    print!("matching file:\n{text}");
    assert_eq!(parse_matching(&text, &p.instance).unwrap(), *out.matching().unwrap());

    match parse_instance("dsm 1\nagents 2\nprefs 1: 2\nprefs 2: 2\n") {
        Ok(_) => unreachable!(),
        Err(e) => println!("error: {e}"),
    }
}
