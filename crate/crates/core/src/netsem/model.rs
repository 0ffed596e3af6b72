use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex;

use super::ModelError;
use crate::qsim::{Gate, QubitId, StateVector};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    X,
    Z,
}

impl Pauli {
    pub fn gate(self) -> Gate {
        match self {
            Pauli::X => Gate::X,
            Pauli::Z => Gate::Z,
        }
    }
}

/// One entry of an agent's program, in execution order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    Gate {
        gate: Gate,
        targets: Vec<QubitId>,
    },
    /// Applies the Pauli iff `condition` holds 1.
    CondPauli {
        pauli: Pauli,
        target: QubitId,
        condition: String,
    },
    MeasureComp {
        target: QubitId,
        outcome: String,
    },
    MeasureBell {
        targets: (QubitId, QubitId),
        outcomes: (String, String),
    },
    ClassicalSend {
        peer: String,
        vars: Vec<String>,
    },
    ClassicalRecv {
        peer: String,
        vars: Vec<String>,
    },
    QuantumSend {
        peer: String,
        qubit: QubitId,
    },
    QuantumRecv {
        peer: String,
        qubit: QubitId,
    },
}

impl Event {
    /// Deterministic local quantum operation. Consecutive unitary events of one
    /// agent execute together as a single transition.
    pub fn is_unitary(&self) -> bool {
        matches!(self, Event::Gate { .. } | Event::CondPauli { .. })
    }

    pub fn is_measurement(&self) -> bool {
        matches!(self, Event::MeasureComp { .. } | Event::MeasureBell { .. })
    }

    pub fn qubits(&self) -> Vec<QubitId> {
        match self {
            Event::Gate { targets, .. } => targets.clone(),
            Event::CondPauli { target, .. } | Event::MeasureComp { target, .. } => vec![*target],
            Event::MeasureBell { targets, .. } => vec![targets.0, targets.1],
            Event::QuantumSend { qubit, .. } | Event::QuantumRecv { qubit, .. } => vec![*qubit],
            Event::ClassicalSend { .. } | Event::ClassicalRecv { .. } => vec![],
        }
    }

    /// Variables read from the acting agent's store.
    pub fn reads(&self) -> Vec<&str> {
        match self {
            Event::CondPauli { condition, .. } => vec![condition],
            Event::ClassicalSend { vars, .. } => vars.iter().map(String::as_str).collect(),
            _ => vec![],
        }
    }

    /// Variables written into the acting agent's store.
    pub fn writes(&self) -> Vec<&str> {
        match self {
            Event::MeasureComp { outcome, .. } => vec![outcome],
            Event::MeasureBell { outcomes, .. } => vec![&outcomes.0, &outcomes.1],
            Event::ClassicalRecv { vars, .. } => vars.iter().map(String::as_str).collect(),
            _ => vec![],
        }
    }

    pub fn peer(&self) -> Option<&str> {
        match self {
            Event::ClassicalSend { peer, .. }
            | Event::ClassicalRecv { peer, .. }
            | Event::QuantumSend { peer, .. }
            | Event::QuantumRecv { peer, .. } => Some(peer),
            _ => None,
        }
    }
}

fn write_list<D: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[D]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Gate { gate, targets } => {
                write!(f, "{gate}(")?;
                write_list(f, targets)?;
                f.write_str(")")
            }
            Event::CondPauli {
                pauli,
                target,
                condition,
            } => {
                let name = match pauli {
                    Pauli::X => "condX",
                    Pauli::Z => "condZ",
                };
                write!(f, "{name}({target}, {condition})")
            }
            Event::MeasureComp { target, outcome } => write!(f, "{outcome} := measure({target})"),
            Event::MeasureBell { targets, outcomes } => write!(
                f,
                "({}, {}) := bell({}, {})",
                outcomes.0, outcomes.1, targets.0, targets.1
            ),
            Event::ClassicalSend { peer, vars } => {
                f.write_str("csend (")?;
                write_list(f, vars)?;
                write!(f, ") -> {peer}")
            }
            Event::ClassicalRecv { peer, vars } => {
                f.write_str("crecv (")?;
                write_list(f, vars)?;
                write!(f, ") <- {peer}")
            }
            Event::QuantumSend { peer, qubit } => write!(f, "qsend {qubit} -> {peer}"),
            Event::QuantumRecv { peer, qubit } => write!(f, "qrecv {qubit} <- {peer}"),
        }
    }
}

/// Value domain of a classical input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Bit,
}

impl Domain {
    pub fn values(self) -> &'static [u8] {
        match self {
            Domain::Bit => &[0, 1],
        }
    }

    pub fn contains(self, v: u8) -> bool {
        self.values().contains(&v)
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Bit => f.write_str("bit"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassicalInput {
    pub name: String,
    pub domain: Domain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agent {
    pub name: String,
    pub owns: BTreeSet<QubitId>,
    pub inputs: Vec<ClassicalInput>,
    pub quantum_inputs: Vec<QubitId>,
    pub program: Vec<Event>,
}

impl Agent {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            owns: BTreeSet::new(),
            inputs: Vec::new(),
            quantum_inputs: Vec::new(),
            program: Vec::new(),
        }
    }

    /// End (exclusive) of the transition starting at program counter `pc`.
    pub fn step_end(&self, pc: usize) -> usize {
        match self.program.get(pc) {
            Some(ev) if ev.is_unitary() => {
                pc + self.program[pc..]
                    .iter()
                    .take_while(|e| e.is_unitary())
                    .count()
            }
            Some(_) => pc + 1,
            None => pc,
        }
    }

    /// Every variable that can appear in this agent's store.
    pub fn variables(&self) -> BTreeSet<&str> {
        self.inputs
            .iter()
            .map(|i| i.name.as_str())
            .chain(self.program.iter().flat_map(Event::writes))
            .collect()
    }

    pub fn input(&self, name: &str) -> Option<&ClassicalInput> {
        self.inputs.iter().find(|i| i.name == name)
    }

    /// Variables written by measurement events.
    pub fn outcome_variables(&self) -> Vec<&str> {
        self.program
            .iter()
            .filter(|e| e.is_measurement())
            .flat_map(Event::writes)
            .collect()
    }
}

/// A declared piece of the shared initial resource.
#[derive(Clone, Debug, PartialEq)]
pub enum ResourceDecl<T> {
    Ebit(QubitId, QubitId),
    Amplitudes {
        qubits: Vec<QubitId>,
        amplitudes: Vec<Complex<T>>,
    },
}

impl<T: Scalar> ResourceDecl<T> {
    pub fn qubits(&self) -> Vec<QubitId> {
        match self {
            ResourceDecl::Ebit(a, b) => vec![*a, *b],
            ResourceDecl::Amplitudes { qubits, .. } => qubits.clone(),
        }
    }

    pub fn state(&self) -> Result<StateVector<T>, ModelError> {
        Ok(match self {
            ResourceDecl::Ebit(a, b) => StateVector::ebit(*a, *b)?,
            ResourceDecl::Amplitudes { qubits, amplitudes } => {
                StateVector::new(qubits, amplitudes.clone())?
            }
        })
    }
}

/// Static protocol description: agents running in parallel over a shared
/// entanglement resource.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<T> {
    name: String,
    qubit_count: u32,
    resources: Vec<ResourceDecl<T>>,
    agents: Vec<Agent>,
    resource: StateVector<T>,
}

impl<T: Scalar> Network<T> {
    /// Validates and assembles a network. Qubits are `1..=qubit_count`.
    pub fn new(
        name: impl Into<String>,
        qubit_count: u32,
        resources: Vec<ResourceDecl<T>>,
        agents: Vec<Agent>,
    ) -> Result<Self, ModelError> {
        let resource = validate(qubit_count, &resources, &agents)?;
        Ok(Self {
            name: name.into(),
            qubit_count,
            resources,
            agents,
            resource,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn qubit_count(&self) -> u32 {
        self.qubit_count
    }

    pub fn resources(&self) -> &[ResourceDecl<T>] {
        &self.resources
    }

    /// Joint state of all declared resources (σ without the quantum inputs).
    pub fn resource(&self) -> &StateVector<T> {
        &self.resource
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, name: &str) -> Option<&Agent> {
        self.agents.iter().find(|a| a.name == name)
    }

    pub fn agent_index(&self, name: &str) -> Option<usize> {
        self.agents.iter().position(|a| a.name == name)
    }

    pub fn quantum_inputs(&self) -> Vec<QubitId> {
        self.agents
            .iter()
            .flat_map(|a| a.quantum_inputs.iter().copied())
            .collect()
    }

    pub fn has_qubit(&self, q: QubitId) -> bool {
        (1..=self.qubit_count).contains(&q.0)
    }
}

fn validate<T: Scalar>(
    qubit_count: u32,
    resources: &[ResourceDecl<T>],
    agents: &[Agent],
) -> Result<StateVector<T>, ModelError> {
    let in_range = |q: QubitId| (1..=qubit_count).contains(&q.0);

    let mut names = BTreeSet::new();
    for a in agents {
        if !names.insert(a.name.as_str()) {
            return Err(ModelError::DuplicateAgent(a.name.clone()));
        }
    }

    let mut owner: BTreeMap<QubitId, &str> = BTreeMap::new();
    for a in agents {
        for &q in &a.owns {
            if !in_range(q) {
                return Err(ModelError::QubitOutOfRange {
                    qubit: q,
                    count: qubit_count,
                });
            }
            if let Some(first) = owner.insert(q, &a.name) {
                return Err(ModelError::OwnershipOverlap {
                    qubit: q,
                    first: first.to_string(),
                    second: a.name.clone(),
                });
            }
        }
        for &q in &a.quantum_inputs {
            if !a.owns.contains(&q) {
                return Err(ModelError::QuantumInputNotOwned {
                    agent: a.name.clone(),
                    qubit: q,
                });
            }
        }
    }
    if let Some(q) = (1..=qubit_count)
        .map(QubitId)
        .find(|q| !owner.contains_key(q))
    {
        return Err(ModelError::UnownedQubit(q));
    }

    let inputs: BTreeSet<QubitId> = agents
        .iter()
        .flat_map(|a| a.quantum_inputs.iter().copied())
        .collect();
    let mut resource = StateVector::new(&[], vec![Complex::new(T::one(), T::zero())])?;
    for decl in resources {
        for q in decl.qubits() {
            if !in_range(q) {
                return Err(ModelError::QubitOutOfRange {
                    qubit: q,
                    count: qubit_count,
                });
            }
            if inputs.contains(&q) {
                return Err(ModelError::ResourceOnInput(q));
            }
        }
        let part = decl.state()?;
        if let Some(q) = part.qubits().iter().find(|q| resource.contains(**q)) {
            return Err(ModelError::ResourceOverlap(*q));
        }
        resource = resource.tensor(&part)?;
    }
    if let Some(q) = (1..=qubit_count)
        .map(QubitId)
        .find(|q| !inputs.contains(q) && !resource.contains(*q))
    {
        return Err(ModelError::ResourceCoverage(q));
    }

    for a in agents {
        let mut defined: BTreeSet<&str> = BTreeSet::new();
        for input in &a.inputs {
            if !defined.insert(&input.name) {
                return Err(ModelError::VariableRedefined {
                    agent: a.name.clone(),
                    event: None,
                    var: input.name.clone(),
                });
            }
        }
        for (i, ev) in a.program.iter().enumerate() {
            for q in ev.qubits() {
                if !in_range(q) {
                    return Err(ModelError::QubitOutOfRange {
                        qubit: q,
                        count: qubit_count,
                    });
                }
            }
            if let Event::Gate { gate, targets } = ev {
                if targets.len() != gate.arity() {
                    return Err(ModelError::GateArity {
                        agent: a.name.clone(),
                        event: i,
                        gate: *gate,
                        found: targets.len(),
                    });
                }
                if targets.len() == 2 && targets[0] == targets[1] {
                    return Err(ModelError::RepeatedTarget {
                        agent: a.name.clone(),
                        event: i,
                        qubit: targets[0],
                    });
                }
            }
            if let Event::MeasureBell { targets, .. } = ev {
                if targets.0 == targets.1 {
                    return Err(ModelError::RepeatedTarget {
                        agent: a.name.clone(),
                        event: i,
                        qubit: targets.0,
                    });
                }
            }
            if let Some(peer) = ev.peer() {
                if peer == a.name {
                    return Err(ModelError::SelfCommunication {
                        agent: a.name.clone(),
                        event: i,
                    });
                }
                if !names.contains(peer) {
                    return Err(ModelError::UnknownPeer {
                        agent: a.name.clone(),
                        event: i,
                        peer: peer.to_string(),
                    });
                }
            }
            for var in ev.reads() {
                if !defined.contains(var) {
                    return Err(ModelError::UndefinedVariable {
                        agent: a.name.clone(),
                        event: i,
                        var: var.to_string(),
                    });
                }
            }
            for var in ev.writes() {
                if !defined.insert(var) {
                    return Err(ModelError::VariableRedefined {
                        agent: a.name.clone(),
                        event: Some(i),
                        var: var.to_string(),
                    });
                }
            }
        }
    }

    check_rendezvous(agents)?;
    Ok(resource)
}

/// The k-th send from A to B can only ever pair with the k-th receive in B
/// from A, so arities (and qubit names) must agree pairwise.
fn check_rendezvous(agents: &[Agent]) -> Result<(), ModelError> {
    for sender in agents {
        for receiver in agents.iter().filter(|r| r.name != sender.name) {
            let sends = sender
                .program
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    matches!(e, Event::ClassicalSend { peer, .. } | Event::QuantumSend { peer, .. } if *peer == receiver.name)
                });
            let recvs = receiver
                .program
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    matches!(e, Event::ClassicalRecv { peer, .. } | Event::QuantumRecv { peer, .. } if *peer == sender.name)
                });
            for ((si, s), (ri, r)) in sends.zip(recvs) {
                let detail = match (s, r) {
                    (
                        Event::ClassicalSend { vars: sv, .. },
                        Event::ClassicalRecv { vars: rv, .. },
                    ) => {
                        if sv.len() == rv.len() {
                            continue;
                        }
                        format!(
                            "sends {} value(s) but receiver expects {}",
                            sv.len(),
                            rv.len()
                        )
                    }
                    (
                        Event::QuantumSend { qubit: sq, .. },
                        Event::QuantumRecv { qubit: rq, .. },
                    ) => {
                        if sq == rq {
                            continue;
                        }
                        format!("sends qubit {sq} but receiver expects qubit {rq}")
                    }
                    (Event::ClassicalSend { .. }, _) => {
                        "classical send meets a quantum receive".to_string()
                    }
                    _ => "quantum send meets a classical receive".to_string(),
                };
                return Err(ModelError::RendezvousMismatch {
                    sender: sender.name.clone(),
                    send_event: si,
                    receiver: receiver.name.clone(),
                    recv_event: ri,
                    detail,
                });
            }
        }
    }
    Ok(())
}
