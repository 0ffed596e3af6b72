use super::{Formula, LogicError, Term};
use crate::netsem::{ConfigGraph, NodeId};
use crate::qsim::{dm_equal, DensityMatrix};
use crate::scalar::Scalar;

enum Value<T> {
    Bit(Option<u8>),
    Qubit(DensityMatrix<T>),
}

fn value<T: Scalar>(g: &ConfigGraph<T>, node: NodeId, t: &Term<T>) -> Result<Value<T>, LogicError> {
    let net = g.network();
    Ok(match t {
        Term::Var { agent, var } => {
            let ai = net
                .agent_index(agent)
                .ok_or_else(|| LogicError::UnknownAgent(agent.clone()))?;
            Value::Bit(g.node(node).config.agents[ai].store.get(var))
        }
        Term::Bit(b) => Value::Bit(Some(*b)),
        Term::Qubit(q) => Value::Qubit(g.node(node).config.state.reduced_density(&[*q])?),
        Term::InitQubit(q) => {
            let init = g.initial_of(node);
            Value::Qubit(g.node(init).config.state.reduced_density(&[*q])?)
        }
        Term::State(s) => Value::Qubit(s.state.density()),
    })
}

/// Truth of an atomic formula at `node`. Equalities involving an unassigned
/// variable are false; qubit terms compare as reduced density matrices within
/// `tol`.
pub fn eval_atomic<T: Scalar>(
    g: &ConfigGraph<T>,
    node: NodeId,
    f: &Formula<T>,
    tol: T,
) -> Result<bool, LogicError> {
    if node >= g.len() {
        return Err(LogicError::NodeOutOfRange { node, len: g.len() });
    }
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Terminal => Ok(g.is_terminal(node)),
        Formula::Defined { agent, var } => {
            let ai = g
                .network()
                .agent_index(agent)
                .ok_or_else(|| LogicError::UnknownAgent(agent.clone()))?;
            Ok(g.node(node).config.agents[ai].store.get(var).is_some())
        }
        Formula::Eq(a, b) => match (value(g, node, a)?, value(g, node, b)?) {
            (Value::Bit(Some(x)), Value::Bit(Some(y))) => Ok(x == y),
            (Value::Bit(_), Value::Bit(_)) => Ok(false),
            (Value::Qubit(x), Value::Qubit(y)) => Ok(dm_equal(&x, &y, tol)?),
            _ => Err(LogicError::SortMismatch {
                classical: a.to_string(),
                quantum: b.to_string(),
            }),
        },
        other => Err(LogicError::NotAtomic(other.to_string())),
    }
}
