//! Formulas over configuration graphs: atomic facts about stores and qubits,
//! Boolean connectives, per-agent knowledge and CTL path operators.
//!
//! Truth is possibilistic. Edge probabilities are ignored.

mod check;
mod eval;

use std::fmt;

use thiserror::Error;

use crate::netsem::Network;
use crate::qsim::{QsimError, QubitId, StateVector};
use crate::scalar::Scalar;

pub use check::{CheckResult, Evidence, ModelChecker};
pub use eval::eval_atomic;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("unknown agent {0}")]
    UnknownAgent(String),
    #[error("agent {agent} has no variable {var}")]
    UnknownVariable { agent: String, var: String },
    #[error("qubit {0} is not declared")]
    UnknownQubit(QubitId),
    #[error("cannot compare classical term {classical} with quantum term {quantum}")]
    SortMismatch { classical: String, quantum: String },
    #[error("state literal must describe exactly one qubit, found {0}")]
    StateArity(usize),
    #[error("bit literal must be 0 or 1, found {0}")]
    BitLiteral(u8),
    #[error("{0} is not an atomic formula")]
    NotAtomic(String),
    #[error("node {node} out of range (graph has {len} nodes)")]
    NodeOutOfRange { node: usize, len: usize },
    #[error(transparent)]
    Qsim(#[from] QsimError),
}

/// A fixed state that means the same thing in every world.
#[derive(Clone, Debug, PartialEq)]
pub struct RigidState<T> {
    /// Sample alias the literal was written with, if any.
    pub label: Option<String>,
    pub state: StateVector<T>,
}

impl<T: Scalar> RigidState<T> {
    pub fn named(alias: &str) -> Option<Self> {
        crate::qsim::named_state(alias, QubitId(0)).map(|state| Self {
            label: Some(alias.to_string()),
            state,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Term<T> {
    Var {
        agent: String,
        var: String,
    },
    Bit(u8),
    Qubit(QubitId),
    /// The qubit's value in the initial configuration of the world's own run.
    InitQubit(QubitId),
    State(RigidState<T>),
}

impl<T> Term<T> {
    pub fn var(agent: impl Into<String>, var: impl Into<String>) -> Self {
        Term::Var {
            agent: agent.into(),
            var: var.into(),
        }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, Term::Qubit(_) | Term::InitQubit(_) | Term::State(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Formula<T> {
    True,
    False,
    Eq(Term<T>, Term<T>),
    Defined { agent: String, var: String },
    Terminal,
    Not(Box<Formula<T>>),
    And(Box<Formula<T>>, Box<Formula<T>>),
    Or(Box<Formula<T>>, Box<Formula<T>>),
    Know(String, Box<Formula<T>>),
    AG(Box<Formula<T>>),
    EG(Box<Formula<T>>),
    AF(Box<Formula<T>>),
    EF(Box<Formula<T>>),
    AX(Box<Formula<T>>),
    EX(Box<Formula<T>>),
}

#[allow(clippy::should_implement_trait)]
impl<T> Formula<T> {
    pub fn eq(a: Term<T>, b: Term<T>) -> Self {
        Formula::Eq(a, b)
    }

    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn know(agent: impl Into<String>, f: Self) -> Self {
        Formula::Know(agent.into(), Box::new(f))
    }

    pub fn ag(f: Self) -> Self {
        Formula::AG(Box::new(f))
    }

    pub fn eg(f: Self) -> Self {
        Formula::EG(Box::new(f))
    }

    pub fn af(f: Self) -> Self {
        Formula::AF(Box::new(f))
    }

    pub fn ef(f: Self) -> Self {
        Formula::EF(Box::new(f))
    }

    pub fn ax(f: Self) -> Self {
        Formula::AX(Box::new(f))
    }

    pub fn ex(f: Self) -> Self {
        Formula::EX(Box::new(f))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::True
                | Formula::False
                | Formula::Eq(..)
                | Formula::Defined { .. }
                | Formula::Terminal
        )
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula<T>> {
        match self {
            Formula::True
            | Formula::False
            | Formula::Eq(..)
            | Formula::Defined { .. }
            | Formula::Terminal => vec![],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
            Formula::Not(f)
            | Formula::Know(_, f)
            | Formula::AG(f)
            | Formula::EG(f)
            | Formula::AF(f)
            | Formula::EF(f)
            | Formula::AX(f)
            | Formula::EX(f) => vec![f],
        }
    }

    /// Every subformula including `self`, children before parents.
    pub fn subformulas(&self) -> Vec<&Formula<T>> {
        let mut out = Vec::new();
        fn walk<'a, T>(f: &'a Formula<T>, out: &mut Vec<&'a Formula<T>>) {
            for c in f.children() {
                walk(c, out);
            }
            out.push(f);
        }
        walk(self, &mut out);
        out
    }

    fn prefix(&self) -> Option<String> {
        Some(match self {
            Formula::Not(_) => "!".to_string(),
            Formula::Know(a, _) => format!("K[{a}] "),
            Formula::AG(_) => "AG ".into(),
            Formula::EG(_) => "EG ".into(),
            Formula::AF(_) => "AF ".into(),
            Formula::EF(_) => "EF ".into(),
            Formula::AX(_) => "AX ".into(),
            Formula::EX(_) => "EX ".into(),
            _ => return None,
        })
    }
}

impl<T: Scalar> Formula<T> {
    /// Checks that every agent, variable and qubit exists in `network` and
    /// that equalities do not mix classical and quantum terms.
    pub fn validate(&self, network: &Network<T>) -> Result<(), LogicError> {
        match self {
            Formula::Eq(a, b) => {
                validate_term(a, network)?;
                validate_term(b, network)?;
                match (a.is_quantum(), b.is_quantum()) {
                    (false, true) => Err(LogicError::SortMismatch {
                        classical: a.to_string(),
                        quantum: b.to_string(),
                    }),
                    (true, false) => Err(LogicError::SortMismatch {
                        classical: b.to_string(),
                        quantum: a.to_string(),
                    }),
                    _ => Ok(()),
                }
            }
            Formula::Defined { agent, var } => validate_var(agent, var, network),
            Formula::Know(agent, f) => {
                if network.agent(agent).is_none() {
                    return Err(LogicError::UnknownAgent(agent.clone()));
                }
                f.validate(network)
            }
            other => other
                .children()
                .into_iter()
                .try_for_each(|c| c.validate(network)),
        }
    }
}

fn validate_var<T: Scalar>(agent: &str, var: &str, network: &Network<T>) -> Result<(), LogicError> {
    let a = network
        .agent(agent)
        .ok_or_else(|| LogicError::UnknownAgent(agent.to_string()))?;
    if a.variables().contains(var) {
        Ok(())
    } else {
        Err(LogicError::UnknownVariable {
            agent: agent.to_string(),
            var: var.to_string(),
        })
    }
}

fn validate_term<T: Scalar>(t: &Term<T>, network: &Network<T>) -> Result<(), LogicError> {
    match t {
        Term::Var { agent, var } => validate_var(agent, var, network),
        Term::Bit(b) if *b > 1 => Err(LogicError::BitLiteral(*b)),
        Term::Bit(_) => Ok(()),
        Term::Qubit(q) | Term::InitQubit(q) => {
            if network.has_qubit(*q) {
                Ok(())
            } else {
                Err(LogicError::UnknownQubit(*q))
            }
        }
        Term::State(s) if s.state.num_qubits() != 1 => {
            Err(LogicError::StateArity(s.state.num_qubits()))
        }
        Term::State(_) => Ok(()),
    }
}

impl<T: Scalar> fmt::Display for Term<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var { agent, var } => write!(f, "{agent}.{var}"),
            Term::Bit(b) => write!(f, "{b}"),
            Term::Qubit(q) => write!(f, "q{q}"),
            Term::InitQubit(q) => write!(f, "init(q{q})"),
            Term::State(RigidState { label: Some(l), .. }) => write!(f, "state[{l}]"),
            Term::State(RigidState { label: None, state }) => {
                f.write_str("state[")?;
                for (i, a) in state.amplitudes().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "({}, {})", a.re, a.im)?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Concrete syntax accepted by the formula parser. `&` binds tighter than
/// `|`, both associate to the left, and prefix operators bind tightest.
impl<T: Scalar> fmt::Display for Formula<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Terminal => f.write_str("terminal"),
            Formula::Defined { agent, var } => write!(f, "defined({agent}.{var})"),
            Formula::Eq(a, b) => write!(f, "{a} == {b}"),
            Formula::Or(a, b) => {
                write!(f, "{a} | ")?;
                if matches!(**b, Formula::Or(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Formula::And(a, b) => {
                if matches!(**a, Formula::Or(..)) {
                    write!(f, "({a}) & ")?;
                } else {
                    write!(f, "{a} & ")?;
                }
                if matches!(**b, Formula::Or(..) | Formula::And(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            other => {
                let op = other
                    .prefix()
                    .expect("remaining variants are prefix operators");
                let body = other.children()[0];
                let bare = body.prefix().is_some()
                    || matches!(
                        body,
                        Formula::True
                            | Formula::False
                            | Formula::Terminal
                            | Formula::Defined { .. }
                    );
                if bare {
                    write!(f, "{op}{body}")
                } else {
                    write!(f, "{op}({body})")
                }
            }
        }
    }
}
