//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`). A FAIL line does not change the
//! exit status; the report is the output.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use deviator_matching::blocking::{blocks, deviator_agent_count, deviator_pair_count};
use deviator_matching::classic::{gale_shapley, irving_sr};
use deviator_matching::fpt::{optimize_fpt, solve_bipartite_restriction, solve_fpt, FptError};
use deviator_matching::generators::{generate, GenSpec, Model};
use deviator_matching::oracle::{enumerate_matchings_with, for_each_matching, oracle_solve, OracleLimits};
use deviator_matching::reductions::{
    formula_b, gadget, minba_complete, minba_label, path_subinstance, random_22e3, sat_to_perfect_smi, smi_to_sri,
    witness_matching, CnfFormula, GadgetIndex, GadgetKind,
};
use deviator_matching::shortlist::{solve_shortlist, solve_shortlist_any_detailed, solve_shortlist_max, OddCycleCase};
use deviator_matching::{
    agent, blocking_report, verify_solution, AgentId, Budget, DeviatorProblem, DeviatorSet, Instance, Matching,
    Objective, SizeRegime,
};

const OBJECTIVES: [Objective; 2] = [Objective::BlockingPairs, Objective::BlockingAgents];
const REGIMES: [SizeRegime; 3] = [SizeRegime::Any, SizeRegime::MaxCardinality, SizeRegime::Perfect];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn with(p: &DeviatorProblem, objective: Objective, regime: SizeRegime, budget: Budget) -> DeviatorProblem {
    DeviatorProblem { objective, regime, budget, ..p.clone() }
}

fn random_problem(seed: u64) -> DeviatorProblem {
    let n = 2 + (seed % 9) as usize;
    let spec = GenSpec {
        n,
        model: if seed % 10 < 3 { Model::SmiUniform } else { Model::SriUniform },
        list_cap: 1 + (seed / 9 % 4) as usize,
        deviator_count: Some((seed / 36 % 5) as usize % (n + 1)),
        edge_probability: 0.4 + 0.6 * ((seed * 37 % 11) as f64 / 10.0),
        seed,
        ..GenSpec::default()
    };
    generate(&spec).expect("valid spec")
}

fn oracle_equivalence() -> Outcome {
    let instances = 500u64;
    let mut checks = 0;
    for seed in 0..instances {
        let base = random_problem(seed);
        for regime in REGIMES {
            let report = oracle_solve(&base.with_regime(regime)).expect("small");
            for objective in OBJECTIVES {
                let want = report.optimum(objective);
                for k in 0..=3 {
                    let p = with(&base, objective, regime, Budget::AtMost(k));
                    let got = solve_fpt(&p).is_feasible();
                    checks += 1;
                    if got != want.is_some_and(|w| w <= k) {
                        return outcome(false, format!("seed {seed} {regime} {objective} k={k}: fpt {got}, oracle {want:?}"));
                    }
                }
                let p = with(&base, objective, regime, Budget::Optimize);
                let got = match optimize_fpt(&p) {
                    Ok(out) => out.value(),
                    Err(FptError::PerfectInfeasible) => None,
                };
                checks += 1;
                if got != want {
                    return outcome(false, format!("seed {seed} {regime} {objective}: optimum {got:?}, oracle {want:?}"));
                }
            }
        }
    }
    outcome(true, format!("{instances} instances, {checks} decisions and optima equal to the oracle"))
}

/// Objective values of `m` restricted to the agents of `comp`.
fn local_costs(p: &DeviatorProblem, comp: &[AgentId], m: &Matching) -> (usize, usize) {
    let (inst, map) = p.instance.induced(comp);
    let d = DeviatorSet::new(comp.len(), (0..comp.len()).filter(|&i| p.deviators.contains(map[i])).map(AgentId::from_index));
    let pairs: Vec<(AgentId, AgentId)> = m
        .pairs()
        .filter_map(|(a, b)| {
            let la = comp.iter().position(|&x| x == a)?;
            let lb = comp.iter().position(|&x| x == b)?;
            Some((AgentId::from_index(la), AgentId::from_index(lb)))
        })
        .collect();
    let lm = Matching::from_pairs(&inst, pairs).expect("component pairs");
    (deviator_pair_count(&inst, &lm, &d), deviator_agent_count(&inst, &lm, &d))
}

fn shortlist_exactness() -> Outcome {
    let instances = 500u64;
    let mut cycles = [0usize; 4];
    for seed in 0..instances {
        let spec = GenSpec {
            n: 1 + (seed % 12) as usize,
            model: Model::PathCycleOnly,
            list_cap: 2,
            deviator_fraction: [0.2, 0.5, 0.8, 1.0][(seed % 4) as usize],
            seed: 10_000 + seed,
            ..GenSpec::default()
        };
        let base = generate(&spec).expect("valid");
        for regime in [SizeRegime::Any, SizeRegime::MaxCardinality] {
            let report = oracle_solve(&base.with_regime(regime)).expect("small");
            for objective in OBJECTIVES {
                let p = with(&base, objective, regime, Budget::Optimize);
                let got = solve_shortlist(&p).expect("short lists").value();
                if got != report.optimum(objective) {
                    return outcome(false, format!("seed {seed} {regime} {objective}: {got:?} vs oracle {:?}", report.optimum(objective)));
                }
            }
        }
        let (out, treatments) = solve_shortlist_any_detailed(&base).expect("short lists");
        let m = out.matching().expect("any-size regime is always feasible");
        for t in treatments {
            let costs = local_costs(&base, &t.cycle, m);
            let (expected, slot) = match t.case {
                OddCycleCase::Stable => ((0, 0), 0),
                OddCycleCase::ConformistPair => ((0, 0), 1),
                OddCycleCase::ConformistThenDeviator => ((1, 1), 2),
                OddCycleCase::AllDeviators => ((1, 2), 3),
            };
            cycles[slot] += 1;
            // the case cost must also be the cycle's own optimum
            let (inst, map) = base.instance.induced(&t.cycle);
            let ld = DeviatorSet::new(map.len(), (0..map.len()).filter(|&i| base.deviators.contains(map[i])).map(AgentId::from_index));
            let local = DeviatorProblem::new(inst, ld, Objective::BlockingPairs, SizeRegime::Any, Budget::Optimize);
            let r = oracle_solve(&local).expect("small");
            let optima = (r.optimum_bp.unwrap(), r.optimum_ba.unwrap());
            if costs != expected || optima != expected {
                return outcome(
                    false,
                    format!("seed {seed} cycle {:?}: case {:?} costs {costs:?}, optimum {optima:?}", t.cycle, t.case),
                );
            }
        }
    }
    outcome(
        true,
        format!(
            "{instances} instances x 2 regimes x 2 objectives; odd cycles stable/conformist pair/1 pair 1 agent/1 pair 2 agents: {}/{}/{}/{}",
            cycles[0], cycles[1], cycles[2], cycles[3]
        ),
    )
}

/// A perfect matching and its blocking pairs, as raw id pairs.
type Census<'a> = (&'a [(u32, u32)], &'a [(u32, u32)]);

fn census(kind: GadgetKind, expected: &[Census]) -> Result<(), String> {
    let inst = gadget(kind);
    let found = enumerate_matchings_with(&inst, SizeRegime::Perfect, OracleLimits::with_cap(16)).map_err(|e| e.to_string())?;
    let mut got: Vec<_> = found
        .iter()
        .map(|m| {
            let r = blocking_report(&inst, m, &DeviatorSet::all(inst.num_agents()));
            (
                m.pairs().map(|(a, b)| (a.get(), b.get())).collect::<BTreeSet<_>>(),
                r.blocking_pairs.iter().map(|(a, b)| (a.get(), b.get())).collect::<BTreeSet<_>>(),
            )
        })
        .collect();
    let mut want: Vec<_> = expected
        .iter()
        .map(|(m, bp)| (m.iter().copied().collect::<BTreeSet<_>>(), bp.iter().copied().collect::<BTreeSet<_>>()))
        .collect();
    got.sort();
    want.sort();
    if got == want {
        Ok(())
    } else {
        Err(format!("{kind:?}: found {got:?}"))
    }
}

fn gadget_census() -> Outcome {
    // variable: x^1..x^4 = 1..4, y^1..y^4 = 5..8
    let var = census(
        GadgetKind::Variable,
        &[(&[(1, 5), (2, 6), (3, 7), (4, 8)], &[(3, 8)]), (&[(1, 6), (2, 7), (3, 8), (4, 5)], &[(1, 5)])],
    );
    // clause: c^1..c^3 = 1..3, p^1..p^3 = 4..6, q = 7, z = 8
    let clause = census(
        GadgetKind::Clause,
        &[
            (&[(1, 7), (2, 5), (3, 6), (4, 8)], &[(1, 4)]),
            (&[(1, 4), (2, 7), (3, 6), (5, 8)], &[(2, 5)]),
            (&[(1, 4), (2, 5), (3, 7), (6, 8)], &[(3, 6)]),
        ],
    );
    let conn = census(
        GadgetKind::Connector,
        &[
            (&[(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12)], &[]),
            (&[(1, 12), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11)], &[(5, 6)]),
        ],
    );
    match (var, clause, conn) {
        (Ok(()), Ok(()), Ok(())) => outcome(true, "variable 2, clause 3, connector 2 perfect matchings with the stated blocking pairs"),
        (a, b, c) => outcome(false, [a, b, c].into_iter().filter_map(Result::err).collect::<Vec<_>>().join("; ")),
    }
}

fn size_identities() -> Outcome {
    let (p, _) = sat_to_perfect_smi(&formula_b());
    let n = p.instance.num_agents();
    let tripled = smi_to_sri(&p).expect("perfect regime, k = 0").instance.num_agents();
    let small = Instance::from_lists(&[&[3], &[], &[1]]).unwrap();
    let mut sizes_ok = true;
    for k in 0..=3 {
        sizes_ok &= minba_complete(&small, k).num_agents() == (k + 1) * 3;
    }
    let done = minba_complete(&small, 1);
    let list: Vec<String> = done.prefs(agent(1)).iter().map(|&a| minba_label(3, 1, a)).collect();
    let list = list.join(", ");
    let pass = n == 200 && p.instance.d_max() == 3 && tripled == 600 && sizes_ok && list == "a3, a1^1, a2, a2^1, a3^1";
    outcome(pass, format!("agents {n}, d_max {}, companions {tripled}, (k+1)|A| {sizes_ok}, a1: {list}", p.instance.d_max()))
}

/// Single communication-path check: the direct path has a perfect matching
/// whose communication edge does not block iff the connected path has a
/// perfect matching with no deviator blocking pair, and stripping the
/// connector from any such matching gives one of the former.
fn check_path(f: &CnfFormula, idx: &GadgetIndex, i: usize, r: usize) -> Result<(), String> {
    let path = path_subinstance(f, idx, i, r);
    let mut direct_yes = false;
    for_each_matching(&path.direct, SizeRegime::Perfect, OracleLimits::with_cap(16), |m| {
        direct_yes |= !blocks(&path.direct, m, path.x, path.c);
    })
    .map_err(|e| e.to_string())?;
    let cp = &path.connected;
    let mut connected_yes = false;
    let mut extraction_ok = true;
    for_each_matching(&cp.instance, SizeRegime::Perfect, OracleLimits::with_cap(28), |m| {
        if deviator_pair_count(&cp.instance, m, &cp.deviators) == 0 {
            connected_yes = true;
            let stripped: Vec<(AgentId, AgentId)> = m.pairs().filter(|&(a, b)| a.index() < 16 && b.index() < 16).collect();
            match Matching::from_pairs(&path.direct, stripped) {
                Ok(dm) => extraction_ok &= dm.is_perfect() && !blocks(&path.direct, &dm, path.x, path.c),
                Err(_) => extraction_ok = false,
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if direct_yes == connected_yes && extraction_ok {
        Ok(())
    } else {
        Err(format!("slot ({i}, {r}): direct {direct_yes}, connected {connected_yes}, extraction {extraction_ok}"))
    }
}

fn end_to_end_witness() -> Outcome {
    let mut sat = 0usize;
    let mut unsat: Vec<CnfFormula> = Vec::new();
    let mut sampled = 0usize;
    let mut seed = 0u64;
    let mut paths = 0usize;
    let mut sat_paths = 0usize;
    for &n in &[3usize, 6, 9] {
        for _ in 0..4000 {
            seed += 1;
            sampled += 1;
            let f = random_22e3(n, seed);
            match f.find_satisfying_assignment() {
                Some(a) => {
                    if sat < 30 {
                        let (p, idx) = sat_to_perfect_smi(&f);
                        let m = witness_matching(&f, &a, &idx).expect("satisfying");
                        if verify_solution(&p, &m, 0) != Ok(0) {
                            return outcome(false, format!("witness for seed {seed} (n={n}) rejected"));
                        }
                        if sat < 3 {
                            for i in 1..=n {
                                for r in 1..=4 {
                                    if let Err(e) = check_path(&f, &idx, i, r) {
                                        return outcome(false, format!("seed {seed}: {e}"));
                                    }
                                    sat_paths += 1;
                                }
                            }
                        }
                        sat += 1;
                    }
                }
                None => {
                    let idx = GadgetIndex::new(&f);
                    for i in 1..=n {
                        for r in 1..=4 {
                            if let Err(e) = check_path(&f, &idx, i, r) {
                                return outcome(false, format!("unsatisfiable seed {seed}: {e}"));
                            }
                            paths += 1;
                        }
                    }
                    unsat.push(f);
                }
            }
        }
    }
    let pass = sat >= 20 && unsat.len() >= 20;
    outcome(
        pass,
        format!(
            "{sat} satisfiable formulas with verified witnesses ({sat_paths} of their paths checked); \
             {} unsatisfiable among {sampled} sampled with n <= 9 ({paths} paths checked){}",
            unsat.len(),
            if unsat.len() < 20 { "; needs 20, and counting rules them out for n <= 6" } else { "" }
        ),
    )
}

fn bipartite_fast_path() -> Outcome {
    let mut applicable = 0;
    let total = 250u64;
    for seed in 0..total {
        let spec = GenSpec {
            n: 6 + (seed % 40) as usize,
            model: Model::DeviatorCore,
            list_cap: 2 + (seed % 4) as usize,
            deviator_fraction: 0.3,
            edge_probability: 0.7,
            seed: 20_000 + seed,
            ..GenSpec::default()
        };
        let p = generate(&spec).expect("valid");
        if let Ok(m) = solve_bipartite_restriction(&p) {
            applicable += 1;
            let bp = deviator_pair_count(&p.instance, &m, &p.deviators);
            if bp != 0 {
                return outcome(false, format!("seed {seed}: {bp} deviator blocking pairs"));
            }
        }
    }
    outcome(applicable >= 200, format!("{applicable}/{total} applicable, all with zero deviator blocking pairs"))
}

fn stability_baselines() -> Outcome {
    for seed in 0..500u64 {
        let spec = GenSpec {
            n: 2 + (seed % 49) as usize,
            model: Model::SmiUniform,
            list_cap: 1 + (seed % 6) as usize,
            edge_probability: 0.6,
            seed: 30_000 + seed,
            ..GenSpec::default()
        };
        let p = generate(&spec).expect("valid");
        let m = gale_shapley(&p.instance).expect("sides attached");
        if !blocking_report(&p.instance, &m, &DeviatorSet::none(p.instance.num_agents())).is_stable() {
            return outcome(false, format!("gale-shapley seed {seed} not stable"));
        }
    }
    let mut solvable = 0;
    for seed in 0..500u64 {
        let spec = GenSpec {
            n: 1 + (seed % 10) as usize,
            list_cap: 1 + (seed % 5) as usize,
            edge_probability: 0.7,
            seed: 40_000 + seed,
            ..GenSpec::default()
        };
        let p = generate(&spec).expect("valid");
        let r = oracle_solve(&p).expect("small");
        let irving = irving_sr(&p.instance);
        if irving.is_some() != (r.stable_exists == Some(true)) {
            return outcome(false, format!("irving seed {seed}: {} vs oracle {:?}", irving.is_some(), r.stable_exists));
        }
        if let Some(m) = irving {
            solvable += 1;
            let set: BTreeSet<AgentId> = m.matched_agents().into_iter().collect();
            if r.stable_matched_sets.iter().any(|s| *s != set) {
                return outcome(false, format!("seed {seed}: stable matchings cover different agents"));
            }
        }
    }
    outcome(true, format!("500 SMI stable; 500 SRI verdicts match ({solvable} solvable, one matched set each)"))
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn slope(ns: &[f64], ts: &[f64]) -> f64 {
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

/// Sum over the problems of the fastest of `reps` runs of `f` on each.
fn time_shortlist(ps: &[DeviatorProblem], reps: usize, f: fn(&DeviatorProblem) -> bool) -> f64 {
    ps.iter()
        .map(|p| {
            (0..reps)
                .map(|_| {
                    let t = Instant::now();
                    assert!(f(p));
                    t.elapsed().as_secs_f64()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .sum()
}

fn scaling() -> Outcome {
    let mut fpt_times = Vec::new();
    for seed in 0..11u64 {
        let spec = GenSpec {
            n: 200,
            list_cap: 4,
            deviator_count: Some(3),
            edge_probability: 1.0,
            seed: 50_000 + seed,
            ..GenSpec::default()
        };
        let p = generate(&spec).expect("valid").with_budget(Budget::AtMost(0));
        for regime in [SizeRegime::Any, SizeRegime::MaxCardinality] {
            let t = Instant::now();
            let _ = solve_fpt(&p.with_regime(regime));
            fpt_times.push(t.elapsed());
        }
    }
    let fpt_median = median(fpt_times);

    let sizes = [1000usize, 2000, 4000];
    let (mut any_t, mut max_t) = (Vec::new(), Vec::new());
    for &n in &sizes {
        let ps: Vec<DeviatorProblem> = (0..5u64)
            .map(|s| {
                let spec = GenSpec {
                    n,
                    model: Model::PathCycleOnly,
                    list_cap: 2,
                    seed: 60_000 + s,
                    ..GenSpec::default()
                };
                generate(&spec).expect("valid")
            })
            .collect();
        any_t.push(time_shortlist(&ps, 15, |p| solve_shortlist_any_detailed(p).is_ok()));
        let maxed: Vec<DeviatorProblem> = ps.iter().map(|p| p.with_regime(SizeRegime::MaxCardinality)).collect();
        max_t.push(time_shortlist(&maxed, 15, |p| solve_shortlist_max(p).is_ok()));
    }
    let ns: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let (s_any, s_max) = (slope(&ns, &any_t), slope(&ns, &max_t));
    let pass = fpt_median < Duration::from_secs(1) && (0.7..=1.3).contains(&s_any) && s_max <= 2.3;
    outcome(
        pass,
        format!("fpt median {:.1} ms at n=200; any-size slope {s_any:.2}, max-cardinality slope {s_max:.2}", fpt_median.as_secs_f64() * 1e3),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("short-list exactness", shortlist_exactness),
        ("gadget census", gadget_census),
        ("reduction size identities", size_identities),
        ("end-to-end witness", end_to_end_witness),
        ("bipartite fast path", bipartite_fast_path),
        ("stability baselines", stability_baselines),
        ("scaling sanity", scaling),
    ];
    let mut passed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        passed += o.pass as usize;
        println!(
            "{} {}. {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!("{passed}/{} criteria passed", criteria.len());
}
