//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{
    indistinguishable, naive, random_formula, rho_close, rho_of_state, single_qubit_rho, F,
};
use qnetk::logic::{Evidence, RigidState};
use qnetk::protocols::{DEFAULT_SAMPLES, SC_FORMULAS, SC_NETWORK, TP_FORMULAS, TP_NETWORK};
use qnetk::{
    build_graph, parse_formula, parse_formula_file, parse_network, parse_selector,
    possibility_partition, BuildOptions, ConfigGraph, ModelChecker, Network, NodeId, QubitId,
    Sample,
};

const STATE_TOL: f64 = 1e-9;
const PROB_TOL: f64 = 1e-9;
const RANDOM_SEED: u64 = 0x5eed_2024;
const RANDOM_CASES: usize = 200;
const BITS: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 0), (1, 1)];

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn(Fixture) -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

struct Fixture {
    sc_net: Network,
    sc: ConfigGraph,
    tp_net: Network,
    tp: ConfigGraph,
}

impl Fixture {
    fn new() -> Self {
        let sc_net: Network = parse_network(SC_NETWORK).unwrap();
        let tp_net: Network = parse_network(TP_NETWORK).unwrap();
        let samples: Vec<Sample> = DEFAULT_SAMPLES
            .iter()
            .map(|s| Sample::named(s).unwrap())
            .collect();
        let sc = build_graph(&sc_net, &[], &BuildOptions::default()).unwrap();
        let tp = build_graph(&tp_net, &samples, &BuildOptions::default()).unwrap();
        Self {
            sc_net,
            sc,
            tp_net,
            tp,
        }
    }
}

fn select(g: &ConfigGraph, text: &str) -> Vec<NodeId> {
    parse_selector(text).unwrap().resolve(g).unwrap()
}

fn one(g: &ConfigGraph, text: &str) -> NodeId {
    let v = select(g, text);
    assert_eq!(v.len(), 1, "{text} should pick one node");
    v[0]
}

fn decoded() -> &'static str {
    "B.s1 == A.x1 & B.s2 == A.x2"
}

fn holds(g: &ConfigGraph, net: &Network, f: &str, n: NodeId) -> bool {
    let f = parse_formula(f, net).unwrap();
    ModelChecker::new(g, STATE_TOL).holds(&f, n).unwrap()
}

fn c1_sc(x: Fixture) -> Outcome {
    for (a, b) in BITS {
        let c1 = one(&x.sc, &format!("initial[x1={a},x2={b}]"));
        let c3 = one(&x.sc, &format!("C3[x1={a},x2={b}]"));
        ensure(
            holds(&x.sc, &x.sc_net, &format!("AF ({})", decoded()), c1),
            || format!("AF at C1 {a}{b}"),
        )?;
        ensure(
            holds(&x.sc, &x.sc_net, &format!("AX ({})", decoded()), c3),
            || format!("AX at C3 {a}{b}"),
        )?;
    }
    Ok(())
}

fn c2_sc(x: Fixture) -> Outcome {
    for (a, b) in BITS {
        let c1 = one(&x.sc, &format!("initial[x1={a},x2={b}]"));
        let f = format!("AG K[A] (A.x1 == {a} & A.x2 == {b})");
        ensure(holds(&x.sc, &x.sc_net, &f, c1), || f.clone())?;
    }
    Ok(())
}

fn c3_sc(x: Fixture) -> Outcome {
    let f = format!("K[B] ({})", decoded());
    for (a, b) in BITS {
        for stage in 1..=4 {
            let n = one(&x.sc, &format!("C{stage}[x1={a},x2={b}]"));
            let got = holds(&x.sc, &x.sc_net, &f, n);
            ensure(got == (stage == 4), || {
                format!("{f} at C{stage} {a}{b} gave {got}")
            })?;
        }
    }
    Ok(())
}

fn c4_sc(x: Fixture) -> Outcome {
    let f = format!("AF K[A] K[B] ({})", decoded());
    for n in select(&x.sc, "all-initial") {
        ensure(!holds(&x.sc, &x.sc_net, &f, n), || {
            format!("{f} held at {}", x.sc.node_label(n))
        })?;
    }
    Ok(())
}

fn c5_sc(x: Fixture) -> Outcome {
    let bodies = [
        decoded().to_string(),
        format!("K[B] ({})", decoded()),
        format!("K[A] K[B] ({})", decoded()),
        "K[A] (A.x1 == 1 & A.x2 == 0)".to_string(),
    ];
    let mut mc = ModelChecker::new(&x.sc, STATE_TOL);
    for body in &bodies {
        for (a, e) in [("AF", "EF"), ("AG", "EG"), ("AX", "EX")] {
            let fa = parse_formula(&format!("{a} ({body})"), &x.sc_net).unwrap();
            let fe = parse_formula(&format!("{e} ({body})"), &x.sc_net).unwrap();
            ensure(mc.labels(&fa).unwrap() == mc.labels(&fe).unwrap(), || {
                format!("{a}/{e} differ on {body}")
            })?;
        }
    }
    Ok(())
}

fn c6_tp(x: Fixture) -> Outcome {
    for s in DEFAULT_SAMPLES {
        let c1 = one(&x.tp, &format!("initial[psi={s}]"));
        ensure(
            holds(&x.tp, &x.tp_net, "AF (terminal & q3 == init(q1))", c1),
            || format!("sample {s}"),
        )?;
    }
    Ok(())
}

fn c7_tp(x: Fixture) -> Outcome {
    let mut mc = ModelChecker::new(&x.tp, STATE_TOL);
    for s in DEFAULT_SAMPLES {
        let c1 = one(&x.tp, &format!("initial[psi={s}]"));
        for agent in ["A", "B"] {
            let f = parse_formula(&format!("K[{agent}] (q1 == state[{s}])"), &x.tp_net).unwrap();
            let r = mc.check(&f, c1).unwrap();
            ensure(!r.holds, || format!("{f} held for sample {s}"))?;
            let Evidence::Violation(w) = r.evidence else {
                return Err(format!("{f}: missing evidence"));
            };
            let other = &x.tp.run_of(w).samples[0].1;
            ensure(other != s, || {
                format!("{f}: evidence uses the same sample {s}")
            })?;
            let lit = RigidState::named(s).unwrap();
            ensure(
                !rho_close(
                    &single_qubit_rho(&x.tp, w, QubitId(1)),
                    &rho_of_state(&lit),
                    STATE_TOL,
                ),
                || format!("{f}: evidence node satisfies the body"),
            )?;
        }
    }
    Ok(())
}

fn c8_tp(x: Fixture) -> Outcome {
    for s in DEFAULT_SAMPLES {
        let c1 = one(&x.tp, &format!("initial[psi={s}]"));
        for agent in ["A", "B"] {
            let f = format!("EF K[{agent}] (q3 == state[{s}])");
            ensure(!holds(&x.tp, &x.tp_net, &f, c1), || format!("{f} held"))?;
        }
    }
    Ok(())
}

fn c9_tp(x: Fixture) -> Outcome {
    for n in select(&x.tp, "all-initial") {
        ensure(
            holds(&x.tp, &x.tp_net, "AF K[B] (q3 == init(q1))", n),
            || x.tp.node_label(n),
        )?;
    }
    Ok(())
}

fn c10_tp(x: Fixture) -> Outcome {
    let f = "K[A] (q3 == init(q1))";
    for stage in 2..=4 {
        for (a, b) in BITS {
            for n in select(&x.tp, &format!("C{stage}[s1={a},s2={b}]")) {
                let got = holds(&x.tp, &x.tp_net, f, n);
                ensure(got == ((a, b) == (0, 0)), || {
                    format!("{f} at {} gave {got}", x.tp.node_label(n))
                })?;
            }
        }
    }
    for n in select(&x.tp, "all-initial") {
        ensure(holds(&x.tp, &x.tp_net, &format!("EF {f}"), n), || {
            format!("EF at {}", x.tp.node_label(n))
        })?;
    }
    Ok(())
}

fn c11_probability(x: Fixture) -> Outcome {
    for g in [&x.sc, &x.tp] {
        for grp in g.groups() {
            let total: f64 = grp.edges.iter().map(|&e| g.edges()[e].probability).sum();
            ensure((total - 1.0).abs() <= PROB_TOL, || {
                format!("group `{}` sums to {total}", grp.label.text)
            })?;
        }
        for n in 0..g.len() {
            let norm: f64 = g
                .node(n)
                .config
                .state
                .amplitudes()
                .iter()
                .map(|a| a.norm_sqr())
                .sum::<f64>()
                .sqrt();
            ensure((norm - 1.0).abs() <= PROB_TOL, || {
                format!("{} has norm {norm}", g.node_label(n))
            })?;
        }
    }
    Ok(())
}

fn atoms(net: &Network, texts: &[&str]) -> Vec<F> {
    texts
        .iter()
        .map(|t| parse_formula(t, net).unwrap())
        .collect()
}

fn sc_atoms(net: &Network) -> Vec<F> {
    atoms(
        net,
        &[
            "B.s1 == A.x1",
            "B.s2 == A.x2",
            "A.x1 == 1",
            "A.x2 == 0",
            "defined(B.s1)",
            "terminal",
            "q1 == state[0]",
            "q2 == init(q2)",
        ],
    )
}

fn tp_atoms(net: &Network) -> Vec<F> {
    atoms(
        net,
        &[
            "q3 == init(q1)",
            "q1 == state[plus]",
            "q3 == state[0]",
            "A.s1 == 0",
            "B.x2 == 1",
            "defined(B.x1)",
            "terminal",
            "A.s2 == B.x2",
        ],
    )
}

fn c12_s5(x: Fixture) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    for (g, at) in [(&x.sc, sc_atoms(&x.sc_net)), (&x.tp, tp_atoms(&x.tp_net))] {
        let mut mc = ModelChecker::new(g, STATE_TOL);
        for _ in 0..RANDOM_CASES {
            use rand::Rng;
            let f = random_formula(&mut rng, &at, &["A", "B"], 3);
            let n = rng.gen_range(0..g.len());
            let agent = if rng.gen_bool(0.5) { "A" } else { "B" };
            let k = F::know(agent, f.clone());
            let kf = mc.holds(&k, n).unwrap();
            ensure(!kf || mc.holds(&f, n).unwrap(), || {
                format!("factivity: {k} at {n}")
            })?;
            ensure(
                !kf || mc.holds(&F::know(agent, k.clone()), n).unwrap(),
                || format!("positive: {k} at {n}"),
            )?;
            let nk = F::not(k.clone());
            ensure(kf || mc.holds(&F::know(agent, nk), n).unwrap(), || {
                format!("negative: {k} at {n}")
            })?;
        }
    }
    Ok(())
}

fn c13_paths(x: Fixture) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 1);
    for (g, at) in [(&x.sc, sc_atoms(&x.sc_net)), (&x.tp, tp_atoms(&x.tp_net))] {
        let mut mc = ModelChecker::new(g, STATE_TOL);
        for _ in 0..RANDOM_CASES {
            let f = random_formula(&mut rng, &at, &["A", "B"], 3);
            let l = |mc: &mut ModelChecker, h: F| mc.labels(&h).unwrap();
            let ag = l(&mut mc, F::ag(f.clone()));
            let eg = l(&mut mc, F::eg(f.clone()));
            let af = l(&mut mc, F::af(f.clone()));
            let ef = l(&mut mc, F::ef(f.clone()));
            let ax = l(&mut mc, F::ax(f.clone()));
            let ex = l(&mut mc, F::ex(f.clone()));
            let not_ag_not = l(&mut mc, F::not(F::ag(F::not(f.clone()))));
            let not_af_not = l(&mut mc, F::not(F::af(F::not(f.clone()))));
            for n in 0..g.len() {
                let bad = [
                    (ag[n] && !eg[n], "AG->EG"),
                    (af[n] && !ef[n], "AF->EF"),
                    (ax[n] && !ex[n], "AX->EX"),
                    (ag[n] && !af[n], "AG->AF"),
                    (eg[n] && !ef[n], "EG->EF"),
                    (ef[n] != not_ag_not[n], "EF<->!AG!"),
                    (eg[n] != not_af_not[n], "EG<->!AF!"),
                ];
                if let Some((_, name)) = bad.iter().find(|(b, _)| *b) {
                    return Err(format!("{name} violated for {f} at node {n}"));
                }
            }
        }
    }
    Ok(())
}

fn c14_oracle(x: Fixture) -> Outcome {
    let mut checked = 0usize;
    for (net, g, text) in [
        (&x.sc_net, &x.sc, SC_FORMULAS),
        (&x.tp_net, &x.tp, TP_FORMULAS),
    ] {
        let file = parse_formula_file("golden.qf", text, net).unwrap();
        let mut mc = ModelChecker::new(g, STATE_TOL);
        for e in &file.entries {
            for sub in e.formula.subformulas() {
                let labels = mc.labels(sub).unwrap();
                for (n, &label) in labels.iter().enumerate() {
                    ensure(naive(g, sub, n, STATE_TOL) == label, || {
                        format!("{sub} at {}", g.node_label(n))
                    })?;
                    checked += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + 2);
    for (g, at) in [(&x.sc, sc_atoms(&x.sc_net)), (&x.tp, tp_atoms(&x.tp_net))] {
        let mut mc = ModelChecker::new(g, STATE_TOL);
        for _ in 0..RANDOM_CASES {
            let f = random_formula(&mut rng, &at, &["A", "B"], 3);
            let labels = mc.labels(&f).unwrap();
            for (n, &label) in labels.iter().enumerate() {
                ensure(naive(g, &f, n, STATE_TOL) == label, || {
                    format!("{f} at {}", g.node_label(n))
                })?;
                checked += 1;
            }
        }
    }
    ensure(checked > 0, || "nothing checked".into())
}

/// Bloch vector of a 2x2 density matrix.
fn bloch(r: &[[Complex64; 2]; 2]) -> [f64; 3] {
    [2.0 * r[0][1].re, -2.0 * r[0][1].im, (r[0][0] - r[1][1]).re]
}

fn c15_channel(x: Fixture) -> Outcome {
    let terminals = select(&x.tp, "terminal");
    ensure(terminals.len() == 16, || {
        format!("{} terminal nodes", terminals.len())
    })?;
    for &n in &terminals {
        let label = &x.tp.run_of(n).samples[0].1;
        let input = rho_of_state(&RigidState::named(label).unwrap());
        let out = single_qubit_rho(&x.tp, n, QubitId(3));
        ensure(rho_close(&out, &input, STATE_TOL), || {
            format!("q3 differs at {}", x.tp.node_label(n))
        })?;
    }
    // Affine Bloch map of each branch, reconstructed from |0>, |1>, |+>, |+i>.
    for (a, b) in BITS {
        let out = |s: &str| {
            let n = one(&x.tp, &format!("C4[psi={s},s1={a},s2={b}]"));
            let p = path_probability(&x.tp, n);
            ensure((p - 0.25).abs() <= PROB_TOL, || {
                format!("branch {a}{b} on {s} has probability {p}")
            })?;
            Ok::<_, String>(bloch(&single_qubit_rho(&x.tp, n, QubitId(3))))
        };
        let (r0, r1, rp, ri) = (out("0")?, out("1")?, out("plus")?, out("plusi")?);
        let t: Vec<f64> = (0..3).map(|k| (r0[k] + r1[k]) / 2.0).collect();
        let cols = [
            (0..3).map(|k| rp[k] - t[k]).collect::<Vec<_>>(),
            (0..3).map(|k| ri[k] - t[k]).collect(),
            (0..3).map(|k| (r0[k] - r1[k]) / 2.0).collect(),
        ];
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                let want = if r == c { 1.0 } else { 0.0 };
                ensure((v - want).abs() <= STATE_TOL, || {
                    format!("branch {a}{b}: map entry ({r},{c}) = {v}")
                })?;
            }
        }
        ensure(t.iter().all(|v| v.abs() <= STATE_TOL), || {
            format!("branch {a}{b}: offset {t:?}")
        })?;
    }
    Ok(())
}

/// Product of edge probabilities along the unique path from the run's initial
/// node.
fn path_probability(g: &ConfigGraph, n: NodeId) -> f64 {
    let mut p = 1.0;
    let mut cur = n;
    while cur != g.run_of(n).initial {
        let e = g
            .edges()
            .iter()
            .find(|e| e.to == cur)
            .expect("node has a parent");
        p *= e.probability;
        cur = e.from;
    }
    p
}

fn c16_partitions(x: Fixture) -> Outcome {
    for (agent, ai, want) in [("A", 0, 12), ("B", 1, 6)] {
        let p = possibility_partition(&x.sc, agent).unwrap();
        ensure(p.classes().len() == want, || {
            format!("{agent}: {} classes", p.classes().len())
        })?;
        for a in 0..x.sc.len() {
            for b in 0..x.sc.len() {
                ensure(
                    p.equivalent(a, b) == indistinguishable(&x.sc, ai, a, b),
                    || format!("{agent}: nodes {a} and {b}"),
                )?;
            }
        }
    }
    let stages = |agent: &str| -> Vec<Vec<usize>> {
        let p = possibility_partition(&x.sc, agent).unwrap();
        let mut v: Vec<Vec<usize>> = p
            .classes()
            .iter()
            .map(|c| {
                let mut s: Vec<usize> = c.members.iter().map(|&m| x.sc.node(m).stage).collect();
                s.sort();
                s
            })
            .collect();
        v.sort();
        v
    };
    let mut a_want: Vec<Vec<usize>> = (0..4)
        .flat_map(|_| [vec![1], vec![2], vec![3, 4]])
        .collect();
    a_want.sort();
    ensure(stages("A") == a_want, || {
        format!("A clusters {:?}", stages("A"))
    })?;
    let mut b_want = vec![
        vec![1, 1, 1, 1, 2, 2, 2, 2],
        vec![3, 3, 3, 3],
        vec![4],
        vec![4],
        vec![4],
        vec![4],
    ];
    b_want.sort();
    ensure(stages("B") == b_want, || {
        format!("B clusters {:?}", stages("B"))
    })
}

fn main() {
    let criteria: [Criterion; 16] = [
        ("SC: AF decoded at C1 and AX decoded at C3", c1_sc),
        ("SC: A always knows its inputs", c2_sc),
        ("SC: B knows the decoding only at C4", c3_sc),
        ("SC: A never comes to know that B knows", c4_sc),
        ("SC: A and E path quantifiers coincide", c5_sc),
        ("TP: q3 finally equals the input", c6_tp),
        ("TP: nobody knows the input state", c7_tp),
        ("TP: nobody ever knows the output state", c8_tp),
        ("TP: B eventually knows q3 carries the input", c9_tp),
        (
            "TP: A's knowledge of the correlation is branch-dependent",
            c10_tp,
        ),
        ("probability conservation and unit norm", c11_probability),
        ("S5 factivity and introspection on random formulas", c12_s5),
        ("path-quantifier entailments on random formulas", c13_paths),
        ("memoized checker agrees with naive evaluator", c14_oracle),
        ("teleportation channel is the identity", c15_channel),
        ("SC partition counts and clusters", c16_partitions),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let fixture = Fixture::new();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(fixture))).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {}/{} passed in {:.2?}",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
