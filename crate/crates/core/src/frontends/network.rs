use std::collections::{BTreeSet, HashMap};

use num_complex::Complex;

use super::lexer::{tokenize, Cursor};
use super::{ParseError, SourceSpan};
use crate::netsem::{
    Agent, ClassicalInput, Domain, Event, ModelError, Network, Pauli, ResourceDecl,
};
use crate::qsim::{Gate, QubitId};
use crate::scalar::Scalar;

/// Parses and validates a network description.
pub fn parse_network<T: Scalar>(text: &str) -> Result<Network<T>, ParseError> {
    parse_network_file("<input>", text)
}

/// As [`parse_network`], with `file` used in error spans.
pub fn parse_network_file<T: Scalar>(file: &str, text: &str) -> Result<Network<T>, ParseError> {
    let mut p = NetParser {
        cur: Cursor::new(tokenize(text, file, 1)?),
        agent_spans: HashMap::new(),
    };
    let (name, name_span, qubits, resources, agents) = p.network::<T>()?;
    Network::new(name, qubits, resources, agents).map_err(|e| p.locate(e, name_span))
}

pub(super) fn span_between(a: &SourceSpan, b: &SourceSpan) -> SourceSpan {
    let mut s = a.clone();
    if a.line == b.line && b.column >= a.column {
        s.length = b.column + b.length - a.column;
    }
    s
}

pub(super) fn real<T: Scalar>(
    text: &str,
    span: SourceSpan,
    context: &str,
) -> Result<T, ParseError> {
    text.parse::<f64>().map(T::lit).map_err(|_| {
        ParseError::new(
            span,
            format!("{context}: malformed number `{text}`"),
            vec!["number".into()],
        )
    })
}

/// `(re, im)`.
pub(super) fn complex<T: Scalar>(
    cur: &mut Cursor,
    context: &str,
) -> Result<Complex<T>, ParseError> {
    cur.expect_sym("(", context)?;
    let (re, rs) = cur.number(context, "real part")?;
    cur.expect_sym(",", context)?;
    let (im, is) = cur.number(context, "imaginary part")?;
    cur.expect_sym(")", context)?;
    Ok(Complex::new(
        real(&re, rs, context)?,
        real(&im, is, context)?,
    ))
}

type Parsed<T> = (String, SourceSpan, u32, Vec<ResourceDecl<T>>, Vec<Agent>);

struct NetParser {
    cur: Cursor,
    /// Header span and per-event spans of each agent, for validation errors.
    agent_spans: HashMap<String, (SourceSpan, Vec<SourceSpan>)>,
}

impl NetParser {
    fn locate(&self, e: ModelError, fallback: SourceSpan) -> ParseError {
        let span = e
            .location()
            .and_then(|(agent, event)| {
                let (head, events) = self.agent_spans.get(agent)?;
                Some(match event {
                    Some(i) => events.get(i).unwrap_or(head).clone(),
                    None => head.clone(),
                })
            })
            .unwrap_or(fallback);
        ParseError::new(span, e.to_string(), vec![])
    }

    fn qubit(&mut self, context: &str) -> Result<QubitId, ParseError> {
        Ok(QubitId(self.cur.unsigned(context, "qubit index")?.0))
    }

    fn qubit_list(&mut self, context: &str) -> Result<Vec<QubitId>, ParseError> {
        let mut out = vec![self.qubit(context)?];
        while self.cur.eat_sym(",") {
            out.push(self.qubit(context)?);
        }
        Ok(out)
    }

    fn var_list(&mut self, context: &str) -> Result<Vec<String>, ParseError> {
        self.cur.expect_sym("(", context)?;
        let mut out = vec![self.cur.ident(context, "variable name")?.0];
        while self.cur.eat_sym(",") {
            out.push(self.cur.ident(context, "variable name")?.0);
        }
        self.cur.expect_sym(")", context)?;
        Ok(out)
    }

    fn network<T: Scalar>(&mut self) -> Result<Parsed<T>, ParseError> {
        self.cur.expect_keyword("network", "network header")?;
        let (name, name_span) = self.cur.ident("network header", "network name")?;
        self.cur.expect_sym("{", "network header")?;
        let mut qubits = None;
        let mut resources = Vec::new();
        let mut agents = Vec::new();
        while !self.cur.eat_sym("}") {
            if self.cur.at_ident("qubits") {
                let kw = self.cur.bump().span;
                if qubits.is_some() {
                    return Err(ParseError::new(
                        kw,
                        "qubits declaration: declared twice",
                        vec![],
                    ));
                }
                qubits = Some(self.cur.unsigned("qubits declaration", "qubit count")?.0);
                self.cur.expect_sym(";", "qubits declaration")?;
            } else if self.cur.at_ident("resource") {
                self.cur.bump();
                resources.push(self.resource()?);
                self.cur.expect_sym(";", "resource declaration")?;
            } else if self.cur.at_ident("agent") {
                agents.push(self.agent()?);
            } else {
                return Err(self.cur.error(
                    "network body",
                    &["`qubits`", "`resource`", "`agent`", "`}`"],
                ));
            }
        }
        self.cur.expect_eof("after network")?;
        let qubits = qubits.ok_or_else(|| {
            ParseError::new(
                name_span.clone(),
                "network body: missing `qubits N;`",
                vec!["`qubits`".into()],
            )
        })?;
        Ok((name, name_span, qubits, resources, agents))
    }

    fn resource<T: Scalar>(&mut self) -> Result<ResourceDecl<T>, ParseError> {
        const CTX: &str = "resource declaration";
        if self.cur.at_ident("ebit") {
            self.cur.bump();
            self.cur.expect_sym("(", CTX)?;
            let a = self.qubit(CTX)?;
            self.cur.expect_sym(",", CTX)?;
            let b = self.qubit(CTX)?;
            self.cur.expect_sym(")", CTX)?;
            Ok(ResourceDecl::Ebit(a, b))
        } else if self.cur.at_ident("amps") {
            self.cur.bump();
            self.cur.expect_sym("[", CTX)?;
            let mut amplitudes = vec![complex(&mut self.cur, CTX)?];
            while self.cur.eat_sym(",") {
                amplitudes.push(complex(&mut self.cur, CTX)?);
            }
            self.cur.expect_sym("]", CTX)?;
            self.cur.expect_keyword("on", CTX)?;
            self.cur.expect_sym("(", CTX)?;
            let qubits = self.qubit_list(CTX)?;
            self.cur.expect_sym(")", CTX)?;
            Ok(ResourceDecl::Amplitudes { qubits, amplitudes })
        } else {
            Err(self.cur.error(CTX, &["`ebit`", "`amps`"]))
        }
    }

    fn agent(&mut self) -> Result<Agent, ParseError> {
        const CTX: &str = "agent declaration";
        let start = self.cur.bump().span;
        let (name, name_span) = self.cur.ident(CTX, "agent name")?;
        self.cur.expect_keyword("owns", CTX)?;
        let mut owns = BTreeSet::new();
        if !self.cur.at_sym("{") {
            owns.extend(self.qubit_list(CTX)?);
        }
        self.cur.expect_sym("{", CTX)?;
        let mut agent = Agent::new(name.clone());
        agent.owns = owns;
        let mut events = Vec::new();
        let mut seen_program = false;
        while !self.cur.eat_sym("}") {
            if self.cur.at_ident("input") {
                self.cur.bump();
                let (var, _) = self.cur.ident("input declaration", "variable name")?;
                self.cur.expect_sym(":", "input declaration")?;
                self.cur.expect_keyword("bit", "input declaration")?;
                self.cur.expect_sym(";", "input declaration")?;
                agent.inputs.push(ClassicalInput {
                    name: var,
                    domain: Domain::Bit,
                });
            } else if self.cur.at_ident("qinput") {
                self.cur.bump();
                agent.quantum_inputs.push(self.qubit("qinput declaration")?);
                self.cur.expect_sym(";", "qinput declaration")?;
            } else if self.cur.at_ident("program") && !seen_program {
                seen_program = true;
                self.cur.bump();
                self.cur.expect_sym("{", "program block")?;
                while !self.cur.eat_sym("}") {
                    let first = self.cur.peek().span.clone();
                    agent.program.push(self.event()?);
                    let last = self.cur.expect_sym(";", "event")?;
                    events.push(span_between(&first, &last));
                }
            } else {
                let expected: &[&str] = if seen_program {
                    &["`input`", "`qinput`", "`}`"]
                } else {
                    &["`input`", "`qinput`", "`program`", "`}`"]
                };
                return Err(self.cur.error("agent body", expected));
            }
        }
        self.agent_spans
            .entry(name)
            .or_insert((span_between(&start, &name_span), events));
        Ok(agent)
    }

    fn event(&mut self) -> Result<Event, ParseError> {
        const CTX: &str = "event";
        if self.cur.at_sym("(") {
            self.cur.bump();
            let (a, _) = self.cur.ident("bell measurement", "outcome variable")?;
            self.cur.expect_sym(",", "bell measurement")?;
            let (b, _) = self.cur.ident("bell measurement", "outcome variable")?;
            self.cur.expect_sym(")", "bell measurement")?;
            self.cur.expect_sym(":=", "bell measurement")?;
            self.cur.expect_keyword("bell", "bell measurement")?;
            self.cur.expect_sym("(", "bell measurement")?;
            let q1 = self.qubit("bell measurement")?;
            self.cur.expect_sym(",", "bell measurement")?;
            let q2 = self.qubit("bell measurement")?;
            self.cur.expect_sym(")", "bell measurement")?;
            return Ok(Event::MeasureBell {
                targets: (q1, q2),
                outcomes: (a, b),
            });
        }
        let (word, span) = self.cur.ident(CTX, "event")?;
        if self.cur.at_sym(":=") {
            self.cur.bump();
            self.cur.expect_keyword("measure", "measurement")?;
            self.cur.expect_sym("(", "measurement")?;
            let q = self.qubit("measurement")?;
            self.cur.expect_sym(")", "measurement")?;
            return Ok(Event::MeasureComp {
                target: q,
                outcome: word,
            });
        }
        let ev = match word.as_str() {
            "csend" | "crecv" => {
                let ctx = if word == "csend" {
                    "classical send"
                } else {
                    "classical receive"
                };
                let vars = self.var_list(ctx)?;
                let arrow = if word == "csend" { "->" } else { "<-" };
                self.cur.expect_sym(arrow, ctx)?;
                let (peer, _) = self.cur.ident(ctx, "peer agent")?;
                if word == "csend" {
                    Event::ClassicalSend { peer, vars }
                } else {
                    Event::ClassicalRecv { peer, vars }
                }
            }
            "qsend" | "qrecv" => {
                let ctx = if word == "qsend" {
                    "quantum send"
                } else {
                    "quantum receive"
                };
                let qubit = self.qubit(ctx)?;
                let arrow = if word == "qsend" { "->" } else { "<-" };
                self.cur.expect_sym(arrow, ctx)?;
                let (peer, _) = self.cur.ident(ctx, "peer agent")?;
                if word == "qsend" {
                    Event::QuantumSend { peer, qubit }
                } else {
                    Event::QuantumRecv { peer, qubit }
                }
            }
            "condX" | "condZ" => {
                let ctx = "conditional Pauli";
                self.cur.expect_sym("(", ctx)?;
                let target = self.qubit(ctx)?;
                self.cur.expect_sym(",", ctx)?;
                let (condition, _) = self.cur.ident(ctx, "condition variable")?;
                self.cur.expect_sym(")", ctx)?;
                let pauli = if word == "condX" { Pauli::X } else { Pauli::Z };
                Event::CondPauli {
                    pauli,
                    target,
                    condition,
                }
            }
            other => {
                let Ok(gate) = other.parse::<Gate>() else {
                    let mut expected: Vec<String> =
                        ["csend", "crecv", "qsend", "qrecv", "condX", "condZ"]
                            .iter()
                            .map(|s| format!("`{s}`"))
                            .collect();
                    expected.extend(Gate::ALL.iter().map(|g| format!("`{g}`")));
                    return Err(ParseError::new(
                        span,
                        format!("event: unknown operation `{other}`"),
                        expected,
                    ));
                };
                self.cur.expect_sym("(", "gate")?;
                let targets = self.qubit_list("gate")?;
                self.cur.expect_sym(")", "gate")?;
                Event::Gate { gate, targets }
            }
        };
        Ok(ev)
    }
}
