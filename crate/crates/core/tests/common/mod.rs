//! Test-side oracles that share no code with the checker: a recursive
//! evaluator without memoization, a pairwise indistinguishability test, and a
//! direct single-qubit partial trace.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use qnetk::logic::{Formula, RigidState, Term};
use qnetk::netsem::NodeKind;
use qnetk::{ConfigGraph, NodeId, QubitId};

pub type F = Formula<f64>;

/// Proper successors, read straight from the edge list; sinks loop on
/// themselves.
pub fn succ(g: &ConfigGraph, n: NodeId) -> Vec<NodeId> {
    let out: Vec<NodeId> = g
        .edges()
        .iter()
        .filter(|e| e.from == n)
        .map(|e| e.to)
        .collect();
    if out.is_empty() {
        vec![n]
    } else {
        out
    }
}

fn is_sink(g: &ConfigGraph, n: NodeId) -> bool {
    g.edges().iter().all(|e| e.from != n)
}

/// Agent `ai` cannot tell `a` from `b`: same store entries and same
/// remaining events.
pub fn indistinguishable(g: &ConfigGraph, ai: usize, a: NodeId, b: NodeId) -> bool {
    let prog = &g.network().agents()[ai].program;
    let (sa, sb) = (&g.node(a).config.agents[ai], &g.node(b).config.agents[ai]);
    let ea: Vec<_> = sa.store.iter().collect();
    let eb: Vec<_> = sb.store.iter().collect();
    ea == eb && prog[sa.pc..] == prog[sb.pc..]
}

/// 2x2 reduced density matrix of `q`, by summing over the other bits.
pub fn single_qubit_rho(g: &ConfigGraph, n: NodeId, q: QubitId) -> [[Complex64; 2]; 2] {
    let st = &g.node(n).config.state;
    let k = st.num_qubits();
    let pos = st
        .qubits()
        .iter()
        .position(|x| *x == q)
        .expect("qubit present");
    let bit = 1usize << (k - 1 - pos);
    let amps = st.amplitudes();
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..amps.len() {
        for j in 0..amps.len() {
            if i & !bit == j & !bit {
                let (r, c) = (usize::from(i & bit != 0), usize::from(j & bit != 0));
                rho[r][c] += amps[i] * amps[j].conj();
            }
        }
    }
    rho
}

pub fn rho_of_state(s: &RigidState<f64>) -> [[Complex64; 2]; 2] {
    let a = s.state.amplitudes();
    [
        [a[0] * a[0].conj(), a[0] * a[1].conj()],
        [a[1] * a[0].conj(), a[1] * a[1].conj()],
    ]
}

pub fn rho_close(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2], tol: f64) -> bool {
    (0..2).all(|r| (0..2).all(|c| (a[r][c] - b[r][c]).norm() <= tol))
}

enum Val {
    Bit(Option<u8>),
    Rho([[Complex64; 2]; 2]),
}

fn term(g: &ConfigGraph, n: NodeId, t: &Term<f64>) -> Val {
    let net = g.network();
    match t {
        Term::Var { agent, var } => {
            let ai = net.agent_index(agent).unwrap();
            Val::Bit(g.node(n).config.agents[ai].store.get(var))
        }
        Term::Bit(b) => Val::Bit(Some(*b)),
        Term::Qubit(q) => Val::Rho(single_qubit_rho(g, n, *q)),
        Term::InitQubit(q) => Val::Rho(single_qubit_rho(g, g.run_of(n).initial, *q)),
        Term::State(s) => Val::Rho(rho_of_state(s)),
    }
}

/// Direct recursive semantics. Relies on the graph being acyclic apart from
/// sink self-loops, which it asserts through a depth bound.
pub fn naive(g: &ConfigGraph, f: &F, n: NodeId, tol: f64) -> bool {
    naive_at(g, f, n, tol, 0)
}

fn naive_at(g: &ConfigGraph, f: &F, n: NodeId, tol: f64, depth: usize) -> bool {
    assert!(depth <= g.len() + 1, "cycle through a non-sink node");
    let rec = |f: &F, m: NodeId| naive_at(g, f, m, tol, depth + 1);
    let sink = is_sink(g, n);
    let next: Vec<NodeId> = if sink { vec![] } else { succ(g, n) };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Terminal => g.node(n).kind == NodeKind::Terminal,
        Formula::Defined { agent, var } => {
            let ai = g.network().agent_index(agent).unwrap();
            g.node(n).config.agents[ai].store.get(var).is_some()
        }
        Formula::Eq(a, b) => match (term(g, n, a), term(g, n, b)) {
            (Val::Bit(Some(x)), Val::Bit(Some(y))) => x == y,
            (Val::Rho(x), Val::Rho(y)) => rho_close(&x, &y, tol),
            _ => false,
        },
        Formula::Not(a) => !naive_at(g, a, n, tol, depth),
        Formula::And(a, b) => naive_at(g, a, n, tol, depth) && naive_at(g, b, n, tol, depth),
        Formula::Or(a, b) => naive_at(g, a, n, tol, depth) || naive_at(g, b, n, tol, depth),
        Formula::Know(agent, a) => {
            let ai = g.network().agent_index(agent).unwrap();
            (0..g.len())
                .filter(|&m| indistinguishable(g, ai, n, m))
                .all(|m| naive_at(g, a, m, tol, 0))
        }
        Formula::EX(a) => succ(g, n).iter().any(|&m| rec(a, m)),
        Formula::AX(a) => succ(g, n).iter().all(|&m| rec(a, m)),
        Formula::EF(a) => naive_at(g, a, n, tol, depth) || next.iter().any(|&m| rec(f, m)),
        Formula::AF(a) => {
            naive_at(g, a, n, tol, depth) || (!sink && next.iter().all(|&m| rec(f, m)))
        }
        Formula::AG(a) => naive_at(g, a, n, tol, depth) && next.iter().all(|&m| rec(f, m)),
        Formula::EG(a) => {
            naive_at(g, a, n, tol, depth) && (sink || next.iter().any(|&m| rec(f, m)))
        }
    }
}

/// Random well-scoped formula over the given atoms and agents.
pub fn random_formula(rng: &mut ChaCha8Rng, atoms: &[F], agents: &[&str], depth: usize) -> F {
    if depth == 0 || rng.gen_bool(0.25) {
        return atoms[rng.gen_range(0..atoms.len())].clone();
    }
    let op = rng.gen_range(0..10);
    let a = random_formula(rng, atoms, agents, depth - 1);
    match op {
        0 => F::not(a),
        1 => F::and(a, random_formula(rng, atoms, agents, depth - 1)),
        2 => F::or(a, random_formula(rng, atoms, agents, depth - 1)),
        3 => F::know(agents[rng.gen_range(0..agents.len())], a),
        4 => F::ag(a),
        5 => F::eg(a),
        6 => F::af(a),
        7 => F::ef(a),
        8 => F::ax(a),
        _ => F::ex(a),
    }
}
