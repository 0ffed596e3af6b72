use std::collections::BTreeSet;

use super::*;
use crate::protocols::{superdense_coding, teleportation, DEFAULT_SAMPLES};
use crate::qsim::{Gate, QubitId};
use crate::scalar::Tolerance;

type Net = Network<f64>;

fn q(i: u32) -> QubitId {
    QubitId(i)
}

fn samples() -> Vec<Sample<f64>> {
    DEFAULT_SAMPLES
        .iter()
        .map(|s| Sample::named(s).unwrap())
        .collect()
}

fn sc() -> Net {
    superdense_coding().unwrap()
}

fn tp() -> Net {
    teleportation().unwrap()
}

fn tol() -> Tolerance<f64> {
    Tolerance::default()
}

/// One agent owning qubit 1 in |0⟩ with the given program.
fn solo(program: Vec<Event>) -> Result<Net, ModelError> {
    let mut a = Agent::new("A");
    a.owns.insert(q(1));
    a.program = program;
    Network::new(
        "solo",
        1,
        vec![ResourceDecl::Amplitudes {
            qubits: vec![q(1)],
            amplitudes: vec![
                num_complex::Complex::new(1.0, 0.0),
                num_complex::Complex::new(0.0, 0.0),
            ],
        }],
        vec![a],
    )
}

#[test]
fn sc_initial_configurations_enumerate_inputs() {
    let init = initial_configurations(&sc(), &[]).unwrap();
    assert_eq!(init.len(), 4);
    let seen: Vec<(u8, u8)> = init
        .iter()
        .map(|i| {
            let s = &i.config.agents[0].store;
            (s.get("x1").unwrap(), s.get("x2").unwrap())
        })
        .collect();
    assert_eq!(seen, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
    for i in &init {
        assert!(i.config.agents[1].store.is_empty());
        assert!(i.config.agents.iter().all(|a| a.pc == 0));
    }
}

#[test]
fn tp_initial_configurations_per_sample() {
    let init = initial_configurations(&tp(), &samples()).unwrap();
    assert_eq!(init.len(), 4);
    for (i, alias) in init.iter().zip(DEFAULT_SAMPLES) {
        assert_eq!(i.samples, vec![(q(1), alias.to_string())]);
        let rho = i.config.state.reduced_density(&[q(1)]).unwrap();
        let psi = crate::qsim::named_state::<f64>(alias, q(1)).unwrap();
        assert!(rho.approx_eq(&psi.density(), 1e-9).unwrap());
        assert_eq!(i.config.state.qubits(), &[q(1), q(2), q(3)]);
    }
    assert_eq!(
        initial_configurations(&tp(), &[]),
        Err(ModelError::MissingSamples)
    );
}

#[test]
fn sample_must_be_single_qubit() {
    let two = Sample::new("pair", crate::qsim::StateVector::ebit(q(1), q(2)).unwrap());
    assert!(matches!(
        initial_configurations(&tp(), &[two]),
        Err(ModelError::SampleMismatch { qubits: 2, .. })
    ));
}

#[test]
fn input_free_network_has_one_initial_configuration() {
    let net = solo(vec![Event::Gate {
        gate: Gate::H,
        targets: vec![q(1)],
    }])
    .unwrap();
    assert_eq!(initial_configurations(&net, &[]).unwrap().len(), 1);
}

#[test]
fn sc_second_stage_only_enables_the_quantum_rendezvous() {
    let net = sc();
    let c1 = initial_configurations(&net, &[]).unwrap().remove(2).config;
    let steps = enabled_steps(&net, &c1, &tol()).unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].label.text, "A: condZ(1, x1); condX(1, x2)");
    let c2 = steps[0].successors[0].config.clone();

    let steps = enabled_steps(&net, &c2, &tol()).unwrap();
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].label.text, "A: qsend 1 -> B | B: qrecv 1 <- A");
    let c3 = &steps[0].successors[0].config;
    assert!(c3.agents[0].owned.is_empty());
    assert_eq!(c3.agents[1].owned, BTreeSet::from([q(1), q(2)]));
    assert_eq!(c3.remaining(&net, 1).len(), 1);
}

#[test]
fn tp_bell_measurement_branches_four_ways() {
    let net = tp();
    let c1 = initial_configurations(&net, &samples())
        .unwrap()
        .remove(0)
        .config;
    let steps = enabled_steps(&net, &c1, &tol()).unwrap();
    assert_eq!(steps.len(), 1);
    let succ = &steps[0].successors;
    assert_eq!(succ.len(), 4);
    for (s, (j1, j2)) in succ.iter().zip([(0, 0), (0, 1), (1, 0), (1, 1)]) {
        assert!((s.probability - 0.25).abs() < 1e-9);
        assert_eq!(s.config.agents[0].store.get("s1"), Some(j1));
        assert_eq!(s.config.agents[0].store.get("s2"), Some(j2));
        assert_eq!(
            s.outcome,
            vec![("A".into(), "s1".into(), j1), ("A".into(), "s2".into(), j2)]
        );
    }
}

#[test]
fn classical_rendezvous_binds_positionally() {
    let net = tp();
    let g = build_graph(&net, &samples(), &BuildOptions::default()).unwrap();
    for n in g.nodes().iter().filter(|n| n.stage >= 3) {
        let a = &n.config.agents[0].store;
        let b = &n.config.agents[1].store;
        assert_eq!(b.get("x1"), a.get("s1"));
        assert_eq!(b.get("x2"), a.get("s2"));
    }
}

#[test]
fn terminal_configuration_has_no_steps() {
    let net = sc();
    let g = build_graph(&net, &[], &BuildOptions::default()).unwrap();
    for n in g.nodes().iter().filter(|n| n.kind == NodeKind::Terminal) {
        assert!(enabled_steps(&net, &n.config, &tol()).unwrap().is_empty());
        assert_eq!(n.stage, 4);
    }
}

#[test]
fn graph_sizes() {
    let g = build_graph(&sc(), &[], &BuildOptions::default()).unwrap();
    assert_eq!(
        g.stats(),
        GraphStats {
            nodes: 16,
            edges: 12,
            terminals: 4,
            deadlocks: 0
        }
    );
    let g = build_graph(&tp(), &samples(), &BuildOptions::default()).unwrap();
    assert_eq!(g.len(), 52);
    assert_eq!(g.stats().terminals, 16);
    for r in 0..4 {
        assert_eq!(g.nodes().iter().filter(|n| n.config.run == r).count(), 13);
    }

    let net = solo(vec![Event::Gate {
        gate: Gate::X,
        targets: vec![q(1)],
    }])
    .unwrap();
    let g = build_graph(&net, &[], &BuildOptions::default()).unwrap();
    assert_eq!((g.len(), g.edges().len()), (2, 1));
    assert_eq!(g.successors(1), &[1]);
}

#[test]
fn node_labels() {
    let g = build_graph(&sc(), &[], &BuildOptions::default()).unwrap();
    let labels: Vec<String> = (0..g.len()).map(|n| g.node_label(n)).collect();
    assert!(labels.contains(&"C1[x1=1,x2=0]".to_string()));
    assert!(labels.contains(&"C4{s1=1,s2=0}[x1=1,x2=0]".to_string()));
    let g = build_graph(&tp(), &samples(), &BuildOptions::default()).unwrap();
    let labels: Vec<String> = (0..g.len()).map(|n| g.node_label(n)).collect();
    assert!(labels.contains(&"C1[psi=plus]".to_string()));
    assert!(labels.contains(&"C3{s1=0,s2=1}[psi=plusi]".to_string()));
}

#[test]
fn interleaving_merges_identical_worlds() {
    let mut a = Agent::new("A");
    a.owns.insert(q(1));
    a.program = vec![Event::Gate {
        gate: Gate::X,
        targets: vec![q(1)],
    }];
    let mut b = Agent::new("B");
    b.owns.insert(q(2));
    b.program = vec![Event::Gate {
        gate: Gate::H,
        targets: vec![q(2)],
    }];
    let net: Net = Network::new(
        "diamond",
        2,
        vec![ResourceDecl::Ebit(q(1), q(2))],
        vec![a, b],
    )
    .unwrap();
    let g = build_graph(&net, &[], &BuildOptions::default()).unwrap();
    assert_eq!(g.len(), 4);
    assert_eq!(g.edges().len(), 4);
    assert_eq!(g.successors(0).len(), 2);
    assert_eq!(g.stats().terminals, 1);
}

#[test]
fn unmatched_rendezvous_is_a_deadlock() {
    let mut a = Agent::new("A");
    a.owns.insert(q(1));
    a.program = vec![Event::QuantumSend {
        peer: "B".into(),
        qubit: q(1),
    }];
    let mut b = Agent::new("B");
    b.owns.insert(q(2));
    let net: Net =
        Network::new("stuck", 2, vec![ResourceDecl::Ebit(q(1), q(2))], vec![a, b]).unwrap();
    let g = build_graph(&net, &[], &BuildOptions::default()).unwrap();
    assert_eq!(g.len(), 1);
    assert_eq!(g.deadlocks(), vec![0]);
    assert_eq!(g.stats().deadlocks, 1);
    assert!(!g.is_terminal(0));
    assert_eq!(g.successors(0), &[0]);
}

#[test]
fn operating_on_foreign_qubit_is_a_model_error() {
    let mut a = Agent::new("A");
    a.owns.insert(q(1));
    a.program = vec![Event::Gate {
        gate: Gate::X,
        targets: vec![q(2)],
    }];
    let mut b = Agent::new("B");
    b.owns.insert(q(2));
    let net: Net =
        Network::new("thief", 2, vec![ResourceDecl::Ebit(q(1), q(2))], vec![a, b]).unwrap();
    let err = build_graph(&net, &[], &BuildOptions::default()).unwrap_err();
    assert_eq!(
        err,
        ModelError::QubitNotOwned {
            agent: "A".into(),
            event: 0,
            qubit: q(2)
        }
    );
}

#[test]
fn node_limit_is_enforced() {
    let opts = BuildOptions {
        max_nodes: 10,
        ..BuildOptions::default()
    };
    assert_eq!(
        build_graph(&sc(), &[], &opts).unwrap_err(),
        ModelError::NodeLimit(10)
    );
}

#[test]
fn static_validation_errors() {
    let mut a = Agent::new("A");
    a.owns.insert(q(1));
    let mut b = Agent::new("B");
    b.owns.insert(q(1));
    let err = Net::new("x", 1, vec![], vec![a.clone(), b]).unwrap_err();
    assert!(matches!(
        err,
        ModelError::OwnershipOverlap {
            qubit: QubitId(1),
            ..
        }
    ));

    let err = Net::new("x", 2, vec![], vec![a.clone()]).unwrap_err();
    assert_eq!(err, ModelError::UnownedQubit(q(2)));

    let err = Net::new("x", 1, vec![], vec![a.clone()]).unwrap_err();
    assert_eq!(err, ModelError::ResourceCoverage(q(1)));

    let err = Net::new("x", 1, vec![], vec![a.clone(), a.clone()]).unwrap_err();
    assert_eq!(err, ModelError::DuplicateAgent("A".into()));

    let mut c = a.clone();
    c.quantum_inputs.push(q(1));
    c.program.push(Event::CondPauli {
        pauli: Pauli::X,
        target: q(1),
        condition: "m".into(),
    });
    c.program.push(Event::MeasureComp {
        target: q(1),
        outcome: "m".into(),
    });
    let err = Net::new("x", 1, vec![], vec![c]).unwrap_err();
    assert!(matches!(
        err,
        ModelError::UndefinedVariable { event: 0, .. }
    ));

    let mut d = a.clone();
    d.quantum_inputs.push(q(1));
    d.program = vec![
        Event::MeasureComp {
            target: q(1),
            outcome: "m".into(),
        },
        Event::MeasureComp {
            target: q(1),
            outcome: "m".into(),
        },
    ];
    let err = Net::new("x", 1, vec![], vec![d]).unwrap_err();
    assert!(matches!(
        err,
        ModelError::VariableRedefined { event: Some(1), .. }
    ));
}

#[test]
fn rendezvous_arity_is_checked_statically() {
    let mut net_agents = tp().agents().to_vec();
    net_agents[1].program[0] = Event::ClassicalRecv {
        peer: "A".into(),
        vars: vec!["x2".into(), "x1".into(), "x3".into()],
    };
    let err = Net::new("TP", 3, vec![ResourceDecl::Ebit(q(2), q(3))], net_agents).unwrap_err();
    assert!(matches!(err, ModelError::RendezvousMismatch { .. }));
}

/// Graph-wide structural invariants of the small-step relation.
fn check_invariants(g: &ConfigGraph<f64>) {
    let net = g.network();
    for node in g.nodes() {
        assert!((node.config.state.norm() - 1.0).abs() < 1e-9);
        let mut owned: Vec<QubitId> = node
            .config
            .agents
            .iter()
            .flat_map(|a| a.owned.iter().copied())
            .collect();
        owned.sort();
        assert_eq!(owned, node.config.state.qubits());
    }
    for e in g.edges() {
        let (src, dst) = (&g.node(e.from).config, &g.node(e.to).config);
        for (i, (s, d)) in src.agents.iter().zip(&dst.agents).enumerate() {
            for (k, v) in s.store.iter() {
                assert_eq!(d.store.get(k), Some(v), "store monotone");
            }
            assert!(d.pc >= s.pc, "suffix shrinks");
            assert!(d.pc <= net.agents()[i].program.len());
        }
        let label = &g.groups()[e.group].label;
        let moved = label.parts.iter().any(|&(a, start, _)| {
            matches!(net.agents()[a].program[start], Event::QuantumSend { .. })
        });
        if !moved {
            for (s, d) in src.agents.iter().zip(&dst.agents) {
                assert_eq!(
                    s.owned, d.owned,
                    "ownership changes only on quantum rendezvous"
                );
            }
        }
    }
    for group in g.groups() {
        let total: f64 = group.edges.iter().map(|&e| g.edges()[e].probability).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
    // every maximal path ends in a sink: the graph minus self-loops is acyclic
    let mut depth = vec![None; g.len()];
    fn longest(
        g: &ConfigGraph<f64>,
        n: usize,
        memo: &mut Vec<Option<usize>>,
        guard: usize,
    ) -> usize {
        assert!(guard <= g.len(), "cycle");
        if let Some(d) = memo[n] {
            return d;
        }
        let d = g
            .successors(n)
            .iter()
            .filter(|&&s| s != n)
            .map(|&s| 1 + longest(g, s, memo, guard + 1))
            .max()
            .unwrap_or(0);
        memo[n] = Some(d);
        d
    }
    for n in g.initial_nodes() {
        longest(g, n, &mut depth, 0);
    }
    assert!(
        depth.iter().all(Option::is_some),
        "all nodes reachable from an initial node"
    );
}

#[test]
fn bundled_graphs_satisfy_structural_invariants() {
    let sc = build_graph(&sc(), &[], &BuildOptions::default()).unwrap();
    check_invariants(&sc);
    for n in 0..sc.len() {
        let groups = &sc.node(n).groups;
        assert!(groups.len() <= 1);
        assert!(groups.iter().all(|&g| sc.groups()[g].edges.len() == 1));
    }
    check_invariants(&build_graph(&tp(), &samples(), &BuildOptions::default()).unwrap());
}
