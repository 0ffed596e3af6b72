//! The bundled protocol corpus: superdense coding and teleportation.
//!
//! Programs are written in execution order (top to bottom). Protocol
//! descriptions in the measurement-calculus style list a sequence right to
//! left, so `[(qc!1) X_1^{x2} Z_1^{x1}]` becomes `condZ(1, x1); condX(1, x2);
//! qsend 1 -> B`.

use std::collections::BTreeSet;

use crate::netsem::{
    Agent, ClassicalInput, Domain, Event, ModelError, Network, Pauli, ResourceDecl,
};
use crate::qsim::QubitId;
use crate::scalar::Scalar;

pub const SC_NETWORK: &str = include_str!("../protocols/sc.qnet");
pub const SC_FORMULAS: &str = include_str!("../protocols/sc.qf");
pub const TP_NETWORK: &str = include_str!("../protocols/tp.qnet");
pub const TP_FORMULAS: &str = include_str!("../protocols/tp.qf");

/// Default quantum-input samples: a tomographically complete single-qubit set.
pub const DEFAULT_SAMPLES: [&str; 4] = ["0", "1", "plus", "plusi"];

fn q(i: u32) -> QubitId {
    QubitId(i)
}

fn bit(name: &str) -> ClassicalInput {
    ClassicalInput {
        name: name.to_string(),
        domain: Domain::Bit,
    }
}

/// A sends two classical bits to B by encoding them on half of a shared ebit.
pub fn superdense_coding<T: Scalar>() -> Result<Network<T>, ModelError> {
    let alice = Agent {
        name: "A".into(),
        owns: BTreeSet::from([q(1)]),
        inputs: vec![bit("x1"), bit("x2")],
        quantum_inputs: vec![],
        program: vec![
            Event::CondPauli {
                pauli: Pauli::Z,
                target: q(1),
                condition: "x1".into(),
            },
            Event::CondPauli {
                pauli: Pauli::X,
                target: q(1),
                condition: "x2".into(),
            },
            Event::QuantumSend {
                peer: "B".into(),
                qubit: q(1),
            },
        ],
    };
    let bob = Agent {
        name: "B".into(),
        owns: BTreeSet::from([q(2)]),
        inputs: vec![],
        quantum_inputs: vec![],
        program: vec![
            Event::QuantumRecv {
                peer: "A".into(),
                qubit: q(1),
            },
            Event::MeasureBell {
                targets: (q(1), q(2)),
                outcomes: ("s1".into(), "s2".into()),
            },
        ],
    };
    Network::new(
        "SC",
        2,
        vec![ResourceDecl::Ebit(q(1), q(2))],
        vec![alice, bob],
    )
}

/// A teleports its unknown input qubit 1 to B's qubit 3.
pub fn teleportation<T: Scalar>() -> Result<Network<T>, ModelError> {
    let alice = Agent {
        name: "A".into(),
        owns: BTreeSet::from([q(1), q(2)]),
        inputs: vec![],
        quantum_inputs: vec![q(1)],
        program: vec![
            Event::MeasureBell {
                targets: (q(1), q(2)),
                outcomes: ("s1".into(), "s2".into()),
            },
            Event::ClassicalSend {
                peer: "B".into(),
                vars: vec!["s2".into(), "s1".into()],
            },
        ],
    };
    let bob = Agent {
        name: "B".into(),
        owns: BTreeSet::from([q(3)]),
        inputs: vec![],
        quantum_inputs: vec![],
        program: vec![
            Event::ClassicalRecv {
                peer: "A".into(),
                vars: vec!["x2".into(), "x1".into()],
            },
            Event::CondPauli {
                pauli: Pauli::Z,
                target: q(3),
                condition: "x1".into(),
            },
            Event::CondPauli {
                pauli: Pauli::X,
                target: q(3),
                condition: "x2".into(),
            },
        ],
    };
    Network::new(
        "TP",
        3,
        vec![ResourceDecl::Ebit(q(2), q(3))],
        vec![alice, bob],
    )
}
