use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, Cursor, Tok};
use super::ParseError;
use crate::netsem::{ConfigGraph, NodeId};
use crate::qsim::QubitId;
use crate::scalar::Scalar;

/// Restriction on the nodes picked by a [`Selector`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Filter {
    /// `x1=0` or `A.x1=0`; unqualified names must belong to exactly one agent.
    Var {
        agent: Option<String>,
        var: String,
        value: u8,
    },
    /// `psi=plus` (the only quantum input) or `psi1=plus` (input qubit 1).
    Sample {
        qubit: Option<QubitId>,
        label: String,
    },
}

/// Addresses a set of graph nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    All,
    /// Initial configuration of every run.
    AllInitial,
    Initial(Vec<Filter>),
    Terminal(Vec<Filter>),
    /// Nodes at a given stage, `C1` being the initial one.
    Stage(usize, Vec<Filter>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectorError {
    #[error("no agent has a variable named {0}")]
    UnknownVariable(String),
    #[error("variable {var} is ambiguous; qualify it as one of {}", candidates.join(", "))]
    AmbiguousVariable {
        var: String,
        candidates: Vec<String>,
    },
    #[error("value {value} is outside the domain of {var}")]
    OutOfDomain { var: String, value: u8 },
    #[error("no run uses a sample labelled {0}")]
    UnknownSample(String),
    #[error("qubit {0} is not a quantum input")]
    NotQuantumInput(QubitId),
    #[error("`psi` is ambiguous with {0} quantum inputs; use psi<qubit>")]
    AmbiguousSample(usize),
    #[error("selector {0} matches no node")]
    Empty(String),
}

fn write_filters(f: &mut fmt::Formatter<'_>, filters: &[Filter]) -> fmt::Result {
    if filters.is_empty() {
        return Ok(());
    }
    f.write_str("[")?;
    for (i, flt) in filters.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{flt}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::Var {
                agent: Some(a),
                var,
                value,
            } => write!(f, "{a}.{var}={value}"),
            Filter::Var {
                agent: None,
                var,
                value,
            } => write!(f, "{var}={value}"),
            Filter::Sample { qubit: None, label } => write!(f, "psi={label}"),
            Filter::Sample {
                qubit: Some(q),
                label,
            } => write!(f, "psi{q}={label}"),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::All => f.write_str("all"),
            Selector::AllInitial => f.write_str("all-initial"),
            Selector::Initial(fl) => {
                f.write_str("initial")?;
                write_filters(f, fl)
            }
            Selector::Terminal(fl) => {
                f.write_str("terminal")?;
                write_filters(f, fl)
            }
            Selector::Stage(n, fl) => {
                write!(f, "C{n}")?;
                write_filters(f, fl)
            }
        }
    }
}

pub fn parse_selector(text: &str) -> Result<Selector, ParseError> {
    let mut cur = Cursor::new(tokenize(text, "<selector>", 1)?);
    let s = selector(&mut cur)?;
    cur.expect_eof("selector")?;
    Ok(s)
}

fn stage_number(word: &str) -> Option<usize> {
    let digits = word.strip_prefix('C')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().filter(|&n| n >= 1)
}

pub(super) fn selector(cur: &mut Cursor) -> Result<Selector, ParseError> {
    const CTX: &str = "selector";
    let expected = [
        "`all`",
        "`all-initial`",
        "`initial`",
        "`terminal`",
        "`C<n>`",
    ];
    let (word, span) = cur.ident(CTX, &expected.join(" or "))?;
    Ok(match word.as_str() {
        "all" if cur.at_sym("-") => {
            cur.bump();
            cur.expect_keyword("initial", CTX)?;
            Selector::AllInitial
        }
        "all" => Selector::All,
        "initial" => Selector::Initial(filters(cur)?),
        "terminal" => Selector::Terminal(filters(cur)?),
        w => match stage_number(w) {
            Some(n) => Selector::Stage(n, filters(cur)?),
            None => {
                return Err(ParseError::new(
                    span,
                    format!("{CTX}: unknown selector `{w}`"),
                    expected.iter().map(|s| s.to_string()).collect(),
                ))
            }
        },
    })
}

fn filters(cur: &mut Cursor) -> Result<Vec<Filter>, ParseError> {
    let mut out = Vec::new();
    if !cur.eat_sym("[") {
        return Ok(out);
    }
    loop {
        out.push(filter(cur)?);
        if cur.eat_sym("]") {
            return Ok(out);
        }
        cur.expect_sym(",", "selector filter")?;
    }
}

fn filter(cur: &mut Cursor) -> Result<Filter, ParseError> {
    const CTX: &str = "selector filter";
    let (first, _) = cur.ident(CTX, "variable name")?;
    let (agent, name) = if cur.eat_sym(".") {
        (Some(first), cur.ident(CTX, "variable name")?.0)
    } else {
        (None, first)
    };
    cur.expect_sym("=", CTX)?;
    let value_tok = cur.peek().clone();
    let raw = match &value_tok.tok {
        Tok::Number(s) | Tok::Ident(s) => s.clone(),
        _ => return Err(cur.error(CTX, &["value"])),
    };
    cur.bump();
    if agent.is_none() {
        if let Some(rest) = name.strip_prefix("psi") {
            let qubit = if rest.is_empty() {
                None
            } else if let Ok(q) = rest.parse::<u32>() {
                Some(QubitId(q))
            } else {
                return var_filter(None, name, raw, value_tok.span);
            };
            return Ok(Filter::Sample { qubit, label: raw });
        }
    }
    var_filter(agent, name, raw, value_tok.span)
}

fn var_filter(
    agent: Option<String>,
    var: String,
    raw: String,
    span: super::SourceSpan,
) -> Result<Filter, ParseError> {
    match raw.parse::<u8>() {
        Ok(value) => Ok(Filter::Var { agent, var, value }),
        Err(_) => Err(ParseError::new(
            span,
            format!("selector filter: `{raw}` is not a valid value for {var}"),
            vec!["`0`".into(), "`1`".into()],
        )),
    }
}

impl Selector {
    pub fn filters(&self) -> &[Filter] {
        match self {
            Selector::All | Selector::AllInitial => &[],
            Selector::Initial(f) | Selector::Terminal(f) | Selector::Stage(_, f) => f,
        }
    }

    /// Matching node ids in ascending order. An empty match is an error.
    pub fn resolve<T: Scalar>(&self, g: &ConfigGraph<T>) -> Result<Vec<NodeId>, SelectorError> {
        let net = g.network();
        let mut checks: Vec<Box<dyn Fn(NodeId) -> bool + '_>> = Vec::new();
        for flt in self.filters() {
            match flt {
                Filter::Var { agent, var, value } => {
                    let owners: Vec<usize> = net
                        .agents()
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| agent.as_deref().is_none_or(|n| a.name == *n))
                        .filter(|(_, a)| a.variables().contains(var.as_str()))
                        .map(|(i, _)| i)
                        .collect();
                    let ai = match owners.as_slice() {
                        [] => {
                            let shown = match agent {
                                Some(a) => format!("{a}.{var}"),
                                None => var.clone(),
                            };
                            return Err(SelectorError::UnknownVariable(shown));
                        }
                        [one] => *one,
                        many => {
                            return Err(SelectorError::AmbiguousVariable {
                                var: var.clone(),
                                candidates: many
                                    .iter()
                                    .map(|&i| format!("{}.{var}", net.agents()[i].name))
                                    .collect(),
                            })
                        }
                    };
                    let domain_ok = match net.agents()[ai].input(var) {
                        Some(input) => input.domain.contains(*value),
                        None => *value <= 1,
                    };
                    if !domain_ok {
                        return Err(SelectorError::OutOfDomain {
                            var: var.clone(),
                            value: *value,
                        });
                    }
                    let (var, value) = (var.clone(), *value);
                    checks.push(Box::new(move |n| {
                        g.node(n).config.agents[ai].store.get(&var) == Some(value)
                    }));
                }
                Filter::Sample { qubit, label } => {
                    let inputs = net.quantum_inputs();
                    let q = match qubit {
                        Some(q) if inputs.contains(q) => *q,
                        Some(q) => return Err(SelectorError::NotQuantumInput(*q)),
                        None if inputs.len() == 1 => inputs[0],
                        None => return Err(SelectorError::AmbiguousSample(inputs.len())),
                    };
                    let used = g
                        .runs()
                        .iter()
                        .any(|r| r.samples.iter().any(|(rq, l)| *rq == q && l == label));
                    if !used {
                        return Err(SelectorError::UnknownSample(label.clone()));
                    }
                    let label = label.clone();
                    checks.push(Box::new(move |n| {
                        g.run_of(n)
                            .samples
                            .iter()
                            .any(|(rq, l)| *rq == q && *l == label)
                    }));
                }
            }
        }
        let base = |n: NodeId| match self {
            Selector::All => true,
            Selector::AllInitial | Selector::Initial(_) => g.initial_of(n) == n,
            Selector::Terminal(_) => g.is_terminal(n),
            Selector::Stage(s, _) => g.node(n).stage == *s,
        };
        let out: Vec<NodeId> = (0..g.len())
            .filter(|&n| base(n) && checks.iter().all(|c| c(n)))
            .collect();
        if out.is_empty() {
            Err(SelectorError::Empty(self.to_string()))
        } else {
            Ok(out)
        }
    }
}
