use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Event, ModelError, Network};
use crate::qsim::{QubitId, StateVector};
use crate::scalar::{Scalar, Tolerance};

/// An agent's classical memory: inputs, measurement outcomes and received values.
/// Entries are written once per run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalStore(BTreeMap<String, u8>);

impl LocalStore {
    pub fn get(&self, var: &str) -> Option<u8> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u8)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Returns `false` (and leaves the store unchanged) if `var` is already set.
    pub fn assign(&mut self, var: &str, value: u8) -> bool {
        if self.0.contains_key(var) {
            return false;
        }
        self.0.insert(var.to_string(), value);
        true
    }
}

impl fmt::Display for LocalStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        f.write_str("]")
    }
}

/// Per-agent part of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AgentState {
    pub store: LocalStore,
    /// Index of the first remaining event; the remaining program is
    /// `program[pc..]`.
    pub pc: usize,
    pub owned: BTreeSet<QubitId>,
}

/// One world: the branch quantum state plus every agent's classical store,
/// remaining program and owned qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<T> {
    pub state: StateVector<T>,
    pub agents: Vec<AgentState>,
    /// Index of the run (input assignment × quantum sample) this world belongs to.
    pub run: usize,
}

impl<T: Scalar> Configuration<T> {
    pub fn remaining<'n>(&self, network: &'n Network<T>, agent: usize) -> &'n [Event] {
        &network.agents()[agent].program[self.agents[agent].pc..]
    }

    /// All programs exhausted.
    pub fn is_terminal(&self, network: &Network<T>) -> bool {
        self.agents
            .iter()
            .zip(network.agents())
            .all(|(s, a)| s.pc >= a.program.len())
    }

    /// Same run, stores, suffixes and ownership; states equal within `tol`.
    pub fn same_world(&self, other: &Self, tol: T) -> bool {
        self.run == other.run
            && self.agents == other.agents
            && self.state.approx_eq(&other.state, tol)
    }
}

/// Which agents acted and which events they consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepLabel {
    /// `(agent index, event range start, event range end)` per participant.
    pub parts: Vec<(usize, usize, usize)>,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Successor<T> {
    pub probability: T,
    /// Measurement outcomes written by this transition, as `(agent, var, bit)`.
    pub outcome: Vec<(String, String, u8)>,
    pub config: Configuration<T>,
}

/// One enabled transition and its successor(s); measurements yield one
/// successor per surviving branch.
#[derive(Clone, Debug, PartialEq)]
pub struct Step<T> {
    pub label: StepLabel,
    pub successors: Vec<Successor<T>>,
}

fn label_text<T: Scalar>(network: &Network<T>, parts: &[(usize, usize, usize)]) -> String {
    parts
        .iter()
        .map(|&(a, start, end)| {
            let agent = &network.agents()[a];
            let events: Vec<String> = agent.program[start..end]
                .iter()
                .map(|e| e.to_string())
                .collect();
            format!("{}: {}", agent.name, events.join("; "))
        })
        .collect::<Vec<_>>()
        .join(" | ")
}

fn require_owned<T: Scalar>(
    network: &Network<T>,
    config: &Configuration<T>,
    agent: usize,
    event: usize,
    qubits: &[QubitId],
) -> Result<(), ModelError> {
    for q in qubits {
        if !config.agents[agent].owned.contains(q) {
            return Err(ModelError::QubitNotOwned {
                agent: network.agents()[agent].name.clone(),
                event,
                qubit: *q,
            });
        }
    }
    Ok(())
}

fn read_var<T: Scalar>(
    network: &Network<T>,
    config: &Configuration<T>,
    agent: usize,
    event: usize,
    var: &str,
) -> Result<u8, ModelError> {
    config.agents[agent]
        .store
        .get(var)
        .ok_or_else(|| ModelError::UnassignedVariable {
            agent: network.agents()[agent].name.clone(),
            event,
            var: var.to_string(),
        })
}

fn write_var<T: Scalar>(
    network: &Network<T>,
    config: &mut Configuration<T>,
    agent: usize,
    event: usize,
    var: &str,
    value: u8,
) -> Result<(), ModelError> {
    if config.agents[agent].store.assign(var, value) {
        Ok(())
    } else {
        Err(ModelError::VariableRedefined {
            agent: network.agents()[agent].name.clone(),
            event: Some(event),
            var: var.to_string(),
        })
    }
}

/// Every transition enabled in `config`. Empty iff the configuration is
/// terminal or deadlocked.
pub fn enabled_steps<T: Scalar>(
    network: &Network<T>,
    config: &Configuration<T>,
    tol: &Tolerance<T>,
) -> Result<Vec<Step<T>>, ModelError> {
    let mut steps = Vec::new();
    for (ai, agent) in network.agents().iter().enumerate() {
        let pc = config.agents[ai].pc;
        let Some(head) = agent.program.get(pc) else {
            continue;
        };
        let end = agent.step_end(pc);
        match head {
            Event::Gate { .. } | Event::CondPauli { .. } => {
                let mut next = config.clone();
                for (i, ev) in agent.program[pc..end].iter().enumerate() {
                    let idx = pc + i;
                    require_owned(network, config, ai, idx, &ev.qubits())?;
                    next.state = match ev {
                        Event::Gate { gate, targets } => next.state.apply_gate(*gate, targets)?,
                        Event::CondPauli {
                            pauli,
                            target,
                            condition,
                        } => {
                            if read_var(network, config, ai, idx, condition)? % 2 == 1 {
                                next.state.apply_gate(pauli.gate(), &[*target])?
                            } else {
                                next.state
                            }
                        }
                        _ => unreachable!("unitary block"),
                    };
                }
                next.agents[ai].pc = end;
                let parts = vec![(ai, pc, end)];
                steps.push(Step {
                    label: StepLabel {
                        text: label_text(network, &parts),
                        parts,
                    },
                    successors: vec![Successor {
                        probability: T::one(),
                        outcome: vec![],
                        config: next,
                    }],
                });
            }
            Event::MeasureComp { .. } | Event::MeasureBell { .. } => {
                require_owned(network, config, ai, pc, &head.qubits())?;
                let (branches, vars) = match head {
                    Event::MeasureComp { target, outcome } => (
                        config.state.measure_computational(*target, tol)?,
                        vec![outcome.as_str()],
                    ),
                    Event::MeasureBell { targets, outcomes } => (
                        config.state.measure_bell(targets.0, targets.1, tol)?,
                        vec![outcomes.0.as_str(), outcomes.1.as_str()],
                    ),
                    _ => unreachable!("measurement"),
                };
                let mut successors = Vec::with_capacity(branches.len());
                for branch in branches {
                    let mut next = config.clone();
                    next.state = branch.post_state;
                    next.agents[ai].pc = end;
                    let mut outcome = Vec::with_capacity(vars.len());
                    for (var, bit) in vars.iter().zip(&branch.outcome) {
                        write_var(network, &mut next, ai, pc, var, *bit)?;
                        outcome.push((agent.name.clone(), var.to_string(), *bit));
                    }
                    successors.push(Successor {
                        probability: branch.probability,
                        outcome,
                        config: next,
                    });
                }
                let parts = vec![(ai, pc, end)];
                steps.push(Step {
                    label: StepLabel {
                        text: label_text(network, &parts),
                        parts,
                    },
                    successors,
                });
            }
            Event::ClassicalSend { peer, vars } => {
                let bi = network.agent_index(peer).expect("validated peer");
                let bpc = config.agents[bi].pc;
                let Some(Event::ClassicalRecv {
                    peer: from,
                    vars: into,
                }) = network.agents()[bi].program.get(bpc)
                else {
                    continue;
                };
                if *from != agent.name || into.len() != vars.len() {
                    continue;
                }
                let mut next = config.clone();
                for (src, dst) in vars.iter().zip(into) {
                    let v = read_var(network, config, ai, pc, src)?;
                    write_var(network, &mut next, bi, bpc, dst, v)?;
                }
                next.agents[ai].pc = end;
                next.agents[bi].pc = bpc + 1;
                let parts = vec![(ai, pc, end), (bi, bpc, bpc + 1)];
                steps.push(Step {
                    label: StepLabel {
                        text: label_text(network, &parts),
                        parts,
                    },
                    successors: vec![Successor {
                        probability: T::one(),
                        outcome: vec![],
                        config: next,
                    }],
                });
            }
            Event::QuantumSend { peer, qubit } => {
                let bi = network.agent_index(peer).expect("validated peer");
                let bpc = config.agents[bi].pc;
                let Some(Event::QuantumRecv {
                    peer: from,
                    qubit: rq,
                }) = network.agents()[bi].program.get(bpc)
                else {
                    continue;
                };
                if *from != agent.name || rq != qubit {
                    continue;
                }
                require_owned(network, config, ai, pc, &[*qubit])?;
                let mut next = config.clone();
                next.agents[ai].owned.remove(qubit);
                next.agents[bi].owned.insert(*qubit);
                next.agents[ai].pc = end;
                next.agents[bi].pc = bpc + 1;
                let parts = vec![(ai, pc, end), (bi, bpc, bpc + 1)];
                steps.push(Step {
                    label: StepLabel {
                        text: label_text(network, &parts),
                        parts,
                    },
                    successors: vec![Successor {
                        probability: T::one(),
                        outcome: vec![],
                        config: next,
                    }],
                });
            }
            // receives fire only together with the matching send
            Event::ClassicalRecv { .. } | Event::QuantumRecv { .. } => {}
        }
    }
    Ok(steps)
}
