use super::lexer::{tokenize, Cursor, Tok};
use super::network::{complex, span_between};
use super::selector::{selector, Selector};
use super::{ParseError, SourceSpan};
use crate::logic::{Formula, RigidState, Term};
use crate::netsem::Network;
use crate::qsim::{QubitId, StateVector};
use crate::scalar::Scalar;

const PATH_OPS: [&str; 6] = ["AG", "EG", "AF", "EF", "AX", "EX"];

/// Parses a single formula and checks its scope against `network`.
pub fn parse_formula<T: Scalar>(
    text: &str,
    network: &Network<T>,
) -> Result<Formula<T>, ParseError> {
    let mut p = FormulaParser {
        cur: Cursor::new(tokenize(text, "<formula>", 1)?),
        network,
        depth: 0,
    };
    let f = p.or()?;
    p.cur.expect_eof("formula")?;
    Ok(f)
}

/// One line of a `.qf` file: `NAME : FORMULA @ SELECTOR [expect: BOOL]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FormulaEntry<T> {
    pub name: String,
    pub formula: Formula<T>,
    pub selector: Selector,
    pub expect: Option<bool>,
    pub span: SourceSpan,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaFile<T> {
    pub entries: Vec<FormulaEntry<T>>,
}

/// Parses a formula file. Blank lines and `#` or `//` comment lines are
/// skipped.
pub fn parse_formula_file<T: Scalar>(
    file: &str,
    text: &str,
    network: &Network<T>,
) -> Result<FormulaFile<T>, ParseError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let toks = tokenize(line, file, i + 1)?;
        if toks.len() == 1 {
            continue;
        }
        let mut p = FormulaParser {
            cur: Cursor::new(toks),
            network,
            depth: 0,
        };
        entries.push(p.entry()?);
    }
    Ok(FormulaFile { entries })
}

struct FormulaParser<'n, T> {
    cur: Cursor,
    network: &'n Network<T>,
    depth: usize,
}

const MAX_DEPTH: usize = 64;

impl<T: Scalar> FormulaParser<'_, T> {
    fn entry(&mut self) -> Result<FormulaEntry<T>, ParseError> {
        let (name, span) = self.cur.ident("formula entry", "formula name")?;
        self.cur.expect_sym(":", "formula entry")?;
        let formula = self.or()?;
        self.cur.expect_sym("@", "formula entry")?;
        let selector = selector(&mut self.cur)?;
        let expect = if self.cur.at_ident("expect") {
            self.cur.bump();
            self.cur.expect_sym(":", "expectation")?;
            if self.cur.at_ident("true") {
                self.cur.bump();
                Some(true)
            } else if self.cur.at_ident("false") {
                self.cur.bump();
                Some(false)
            } else {
                return Err(self.cur.error("expectation", &["`true`", "`false`"]));
            }
        } else {
            None
        };
        if !self.cur.at_eof() {
            return Err(self
                .cur
                .error("formula entry", &["`expect`", "end of line"]));
        }
        Ok(FormulaEntry {
            name,
            formula,
            selector,
            expect,
            span,
        })
    }

    fn scoped(&self, f: Formula<T>, span: &SourceSpan) -> Result<Formula<T>, ParseError> {
        match f.validate(self.network) {
            Ok(()) => Ok(f),
            Err(e) => Err(ParseError::new(span.clone(), format!("scope: {e}"), vec![])),
        }
    }

    fn or(&mut self) -> Result<Formula<T>, ParseError> {
        let mut f = self.and()?;
        while self.cur.eat_sym("|") {
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula<T>, ParseError> {
        let mut f = self.unary()?;
        while self.cur.eat_sym("&") {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula<T>, ParseError> {
        if self.depth >= MAX_DEPTH {
            return Err(self.cur.error("formula nested too deeply", &[]));
        }
        self.depth += 1;
        let f = self.unary_inner();
        self.depth -= 1;
        f
    }

    fn unary_inner(&mut self) -> Result<Formula<T>, ParseError> {
        if self.cur.eat_sym("!") {
            return Ok(Formula::not(self.unary()?));
        }
        if let Tok::Ident(word) = &self.cur.peek().tok {
            let word = word.clone();
            if word == "K" && self.cur.peek_at(1) == &Tok::Sym("[") {
                self.cur.bump();
                self.cur.bump();
                let (agent, span) = self.cur.ident("knowledge operator", "agent name")?;
                self.cur.expect_sym("]", "knowledge operator")?;
                if self.network.agent(&agent).is_none() {
                    return Err(ParseError::new(
                        span,
                        format!("scope: unknown agent {agent}"),
                        self.network
                            .agents()
                            .iter()
                            .map(|a| a.name.clone())
                            .collect(),
                    ));
                }
                return Ok(Formula::know(agent, self.unary()?));
            }
            if PATH_OPS.contains(&word.as_str()) && self.cur.peek_at(1) != &Tok::Sym(".") {
                self.cur.bump();
                let body = self.unary()?;
                return Ok(match word.as_str() {
                    "AG" => Formula::ag(body),
                    "EG" => Formula::eg(body),
                    "AF" => Formula::af(body),
                    "EF" => Formula::ef(body),
                    "AX" => Formula::ax(body),
                    _ => Formula::ex(body),
                });
            }
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula<T>, ParseError> {
        if self.cur.eat_sym("(") {
            let f = self.or()?;
            self.cur.expect_sym(")", "parenthesized formula")?;
            return Ok(f);
        }
        if self.cur.peek_at(1) != &Tok::Sym(".") {
            let start = self.cur.peek().span.clone();
            for (kw, f) in [
                ("true", Formula::True),
                ("false", Formula::False),
                ("terminal", Formula::Terminal),
            ] {
                if self.cur.at_ident(kw) {
                    self.cur.bump();
                    return Ok(f);
                }
            }
            if self.cur.at_ident("defined") {
                self.cur.bump();
                self.cur.expect_sym("(", "defined(...)")?;
                let (agent, _) = self.cur.ident("defined(...)", "agent name")?;
                self.cur.expect_sym(".", "defined(...)")?;
                let (var, _) = self.cur.ident("defined(...)", "variable name")?;
                let end = self.cur.expect_sym(")", "defined(...)")?;
                return self.scoped(Formula::Defined { agent, var }, &span_between(&start, &end));
            }
        }
        let start = self.cur.peek().span.clone();
        let a = self.term()?;
        self.cur.expect_sym("==", "equality")?;
        let b = self.term()?;
        let end = self.last_span();
        self.scoped(Formula::Eq(a, b), &span_between(&start, &end))
    }

    fn last_span(&self) -> SourceSpan {
        self.cur.previous().span.clone()
    }

    fn qubit_name(&mut self, context: &str) -> Result<QubitId, ParseError> {
        let (name, span) = self.cur.ident(context, "qubit name `qN`")?;
        parse_qubit_name(&name).ok_or_else(|| {
            ParseError::new(
                span,
                format!("{context}: expected qubit name `qN`, found `{name}`"),
                vec!["qubit name `qN`".into()],
            )
        })
    }

    fn term(&mut self) -> Result<Term<T>, ParseError> {
        const CTX: &str = "term";
        let t = self.cur.peek().clone();
        match &t.tok {
            Tok::Number(n) => {
                self.cur.bump();
                match n.as_str() {
                    "0" => Ok(Term::Bit(0)),
                    "1" => Ok(Term::Bit(1)),
                    _ => Err(ParseError::new(
                        t.span,
                        format!("{CTX}: bit literal must be 0 or 1, found `{n}`"),
                        vec!["`0`".into(), "`1`".into()],
                    )),
                }
            }
            Tok::Ident(word) if self.cur.peek_at(1) == &Tok::Sym(".") => {
                let agent = word.clone();
                self.cur.bump();
                self.cur.bump();
                let (var, _) = self.cur.ident(CTX, "variable name")?;
                Ok(Term::Var { agent, var })
            }
            Tok::Ident(word) if word == "init" && self.cur.peek_at(1) == &Tok::Sym("(") => {
                self.cur.bump();
                self.cur.bump();
                let q = self.qubit_name("init(...)")?;
                self.cur.expect_sym(")", "init(...)")?;
                Ok(Term::InitQubit(q))
            }
            Tok::Ident(word) if word == "state" && self.cur.peek_at(1) == &Tok::Sym("[") => {
                self.cur.bump();
                self.cur.bump();
                let s = self.state_literal()?;
                self.cur.expect_sym("]", "state literal")?;
                Ok(Term::State(s))
            }
            Tok::Ident(word) if parse_qubit_name(word).is_some() => {
                self.cur.bump();
                Ok(Term::Qubit(parse_qubit_name(word).expect("checked")))
            }
            _ => Err(self.cur.error(
                CTX,
                &[
                    "`Agent.var`",
                    "`0`",
                    "`1`",
                    "`qN`",
                    "`init(qN)`",
                    "`state[...]`",
                ],
            )),
        }
    }

    fn state_literal(&mut self) -> Result<RigidState<T>, ParseError> {
        const CTX: &str = "state literal";
        let t = self.cur.peek().clone();
        let alias = match &t.tok {
            Tok::Ident(s) | Tok::Number(s) => Some(s.clone()),
            _ => None,
        };
        if let Some(alias) = alias {
            self.cur.bump();
            return RigidState::named(&alias).ok_or_else(|| {
                ParseError::new(
                    t.span,
                    format!("{CTX}: unknown state alias `{alias}`"),
                    crate::qsim::SAMPLE_ALIASES
                        .iter()
                        .map(|s| s.to_string())
                        .collect(),
                )
            });
        }
        let mut amps = vec![complex(&mut self.cur, CTX)?];
        while self.cur.eat_sym(",") {
            amps.push(complex(&mut self.cur, CTX)?);
        }
        let end = self.last_span();
        let span = span_between(&t.span, &end);
        if !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(ParseError::new(
                span,
                format!(
                    "{CTX}: amplitude count {} is not a power of two",
                    amps.len()
                ),
                vec![],
            ));
        }
        let qubits: Vec<QubitId> = (0..amps.len().trailing_zeros()).map(QubitId).collect();
        let state = StateVector::new(&qubits, amps)
            .map_err(|e| ParseError::new(span, format!("{CTX}: {e}"), vec![]))?;
        Ok(RigidState { label: None, state })
    }
}

fn parse_qubit_name(s: &str) -> Option<QubitId> {
    let digits = s.strip_prefix('q')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok().map(QubitId)
}
