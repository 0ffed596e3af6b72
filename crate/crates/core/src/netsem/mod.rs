//! Protocol model and small-step operational semantics.
//!
//! Agents run their programs concurrently. Local events of one agent execute
//! atomically (a maximal run of consecutive unitary events counts as one
//! local operation), measurements branch once per surviving outcome, and
//! classical and quantum communication are synchronous rendezvous between a
//! send at the head of one program and the matching receive at the head of
//! the peer's program.

mod config;
mod graph;
mod model;

use thiserror::Error;

pub use config::{
    enabled_steps, AgentState, Configuration, LocalStore, Step, StepLabel, Successor,
};
pub use graph::{
    build_graph, initial_configurations, BuildOptions, ConfigGraph, Edge, GraphStats,
    InitialConfiguration, InputValue, Node, NodeId, NodeKind, RunInfo, Sample, StepGroup,
};
pub use model::{Agent, ClassicalInput, Domain, Event, Network, Pauli, ResourceDecl};

use crate::qsim::{Gate, QsimError, QubitId};

/// Static validation failures and run-time model errors. `event` indexes the
/// agent's program.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("agent name {0} used more than once")]
    DuplicateAgent(String),
    #[error("qubit {qubit} owned by both {first} and {second}")]
    OwnershipOverlap {
        qubit: QubitId,
        first: String,
        second: String,
    },
    #[error("qubit {qubit} outside the declared range 1..={count}")]
    QubitOutOfRange { qubit: QubitId, count: u32 },
    #[error("qubit {0} is not owned by any agent")]
    UnownedQubit(QubitId),
    #[error("agent {agent} declares quantum input {qubit} it does not own")]
    QuantumInputNotOwned { agent: String, qubit: QubitId },
    #[error("qubit {0} is a quantum input and cannot be part of the resource")]
    ResourceOnInput(QubitId),
    #[error("qubit {0} appears in more than one resource")]
    ResourceOverlap(QubitId),
    #[error("qubit {0} is neither a quantum input nor covered by the resource")]
    ResourceCoverage(QubitId),
    #[error("agent {agent}, event {event}: {gate} takes {} qubit(s), {found} given", gate.arity())]
    GateArity {
        agent: String,
        event: usize,
        gate: Gate,
        found: usize,
    },
    #[error("agent {agent}, event {event}: qubit {qubit} used twice")]
    RepeatedTarget {
        agent: String,
        event: usize,
        qubit: QubitId,
    },
    #[error("agent {agent}, event {event}: communicates with itself")]
    SelfCommunication { agent: String, event: usize },
    #[error("agent {agent}, event {event}: unknown peer {peer}")]
    UnknownPeer {
        agent: String,
        event: usize,
        peer: String,
    },
    #[error("agent {agent}, event {event}: variable {var} read before it is assigned")]
    UndefinedVariable {
        agent: String,
        event: usize,
        var: String,
    },
    #[error("agent {agent}: variable {var} assigned more than once")]
    VariableRedefined {
        agent: String,
        event: Option<usize>,
        var: String,
    },
    #[error("rendezvous {sender}[{send_event}] -> {receiver}[{recv_event}]: {detail}")]
    RendezvousMismatch {
        sender: String,
        send_event: usize,
        receiver: String,
        recv_event: usize,
        detail: String,
    },
    #[error("agent {agent}, event {event}: condition variable {var} is unassigned")]
    UnassignedVariable {
        agent: String,
        event: usize,
        var: String,
    },
    #[error("agent {agent}, event {event}: qubit {qubit} is not owned by the acting agent")]
    QubitNotOwned {
        agent: String,
        event: usize,
        qubit: QubitId,
    },
    #[error("network has quantum inputs but no samples were supplied")]
    MissingSamples,
    #[error("sample {label} has {qubits} qubits; quantum input samples must be single-qubit")]
    SampleMismatch { label: String, qubits: usize },
    #[error("configuration graph exceeds {0} nodes")]
    NodeLimit(usize),
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

impl ModelError {
    /// Agent and program index the error points at, when it has one.
    pub fn location(&self) -> Option<(&str, Option<usize>)> {
        match self {
            ModelError::GateArity { agent, event, .. }
            | ModelError::RepeatedTarget { agent, event, .. }
            | ModelError::SelfCommunication { agent, event }
            | ModelError::UnknownPeer { agent, event, .. }
            | ModelError::UndefinedVariable { agent, event, .. }
            | ModelError::UnassignedVariable { agent, event, .. }
            | ModelError::QubitNotOwned { agent, event, .. } => Some((agent, Some(*event))),
            ModelError::VariableRedefined { agent, event, .. } => Some((agent, *event)),
            ModelError::RendezvousMismatch {
                receiver,
                recv_event,
                ..
            } => Some((receiver, Some(*recv_event))),
            ModelError::QuantumInputNotOwned { agent, .. } => Some((agent, None)),
            ModelError::DuplicateAgent(agent) => Some((agent, None)),
            ModelError::OwnershipOverlap { second, .. } => Some((second, None)),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
