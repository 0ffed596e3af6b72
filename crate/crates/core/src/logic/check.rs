use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{eval_atomic, Formula, LogicError};
use crate::epistemics::{all_partitions, PossibilityPartition};
use crate::netsem::{ConfigGraph, NodeId};
use crate::scalar::Scalar;

/// Why a formula holds or fails at a node, for the outermost operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    None,
    /// A node the agent considers possible where the known formula fails.
    Violation(NodeId),
    /// Path from the checked node showing an existential claim.
    Witness(Vec<NodeId>),
    /// Path from the checked node refuting a universal claim.
    Counterexample(Vec<NodeId>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub holds: bool,
    pub evidence: Evidence,
    /// Every node satisfying the checked formula.
    pub satisfying: Vec<NodeId>,
}

/// Bottom-up labeling checker with one label vector memoized per distinct
/// subformula.
pub struct ModelChecker<'g, T> {
    graph: &'g ConfigGraph<T>,
    partitions: BTreeMap<String, PossibilityPartition>,
    tol: T,
    memo: HashMap<String, Vec<bool>>,
}

impl<'g, T: Scalar> ModelChecker<'g, T> {
    pub fn new(graph: &'g ConfigGraph<T>, tol: T) -> Self {
        Self {
            graph,
            partitions: all_partitions(graph),
            tol,
            memo: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &'g ConfigGraph<T> {
        self.graph
    }

    pub fn partition(&self, agent: &str) -> Option<&PossibilityPartition> {
        self.partitions.get(agent)
    }

    /// Number of distinct subformulas labeled so far.
    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Truth value of `f` at every node.
    pub fn labels(&mut self, f: &Formula<T>) -> Result<Vec<bool>, LogicError> {
        f.validate(self.graph.network())?;
        self.label(f)
    }

    pub fn satisfying(&mut self, f: &Formula<T>) -> Result<Vec<NodeId>, LogicError> {
        Ok(nodes_where(&self.labels(f)?, true))
    }

    pub fn holds(&mut self, f: &Formula<T>, at: NodeId) -> Result<bool, LogicError> {
        self.in_range(at)?;
        Ok(self.labels(f)?[at])
    }

    pub fn check(&mut self, f: &Formula<T>, at: NodeId) -> Result<CheckResult, LogicError> {
        self.in_range(at)?;
        let labels = self.labels(f)?;
        let holds = labels[at];
        let g = self.graph;
        let evidence = match (f, holds) {
            (Formula::Know(agent, body), false) => {
                let body = self.label(body)?;
                let class = self.partitions[agent].possible(at);
                let bad = class.iter().copied().find(|&n| !body[n]);
                Evidence::Violation(bad.expect("some possible world violates the body"))
            }
            (Formula::EX(body), true) => {
                let body = self.label(body)?;
                let next = g.successors(at).iter().copied().find(|&n| body[n]);
                Evidence::Witness(vec![at, next.expect("a successor satisfies the body")])
            }
            (Formula::AX(body), false) => {
                let body = self.label(body)?;
                let next = g.successors(at).iter().copied().find(|&n| !body[n]);
                Evidence::Counterexample(vec![at, next.expect("a successor violates the body")])
            }
            (Formula::EF(body), true) => {
                let body = self.label(body)?;
                Evidence::Witness(path_to(g, at, |n| body[n]).expect("target reachable"))
            }
            (Formula::AG(body), false) => {
                let body = self.label(body)?;
                Evidence::Counterexample(path_to(g, at, |n| !body[n]).expect("violation reachable"))
            }
            (Formula::EG(_), true) => Evidence::Witness(lasso(g, at, &labels)),
            (Formula::AF(_), false) => {
                let stay: Vec<bool> = labels.iter().map(|b| !b).collect();
                Evidence::Counterexample(lasso(g, at, &stay))
            }
            _ => Evidence::None,
        };
        Ok(CheckResult {
            holds,
            evidence,
            satisfying: nodes_where(&labels, true),
        })
    }

    fn in_range(&self, at: NodeId) -> Result<(), LogicError> {
        if at < self.graph.len() {
            Ok(())
        } else {
            Err(LogicError::NodeOutOfRange {
                node: at,
                len: self.graph.len(),
            })
        }
    }

    fn label(&mut self, f: &Formula<T>) -> Result<Vec<bool>, LogicError> {
        let key = f.to_string();
        if let Some(v) = self.memo.get(&key) {
            return Ok(v.clone());
        }
        let g = self.graph;
        let n = g.len();
        let v = match f {
            atomic if atomic.is_atomic() => (0..n)
                .map(|i| eval_atomic(g, i, atomic, self.tol))
                .collect::<Result<_, _>>()?,
            Formula::Not(a) => self.label(a)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let (a, b) = (self.label(a)?, self.label(b)?);
                a.iter().zip(&b).map(|(x, y)| *x && *y).collect()
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.label(a)?, self.label(b)?);
                a.iter().zip(&b).map(|(x, y)| *x || *y).collect()
            }
            Formula::Know(agent, body) => {
                let body = self.label(body)?;
                let p = self
                    .partitions
                    .get(agent)
                    .ok_or_else(|| LogicError::UnknownAgent(agent.clone()))?;
                let class_ok: Vec<bool> = p
                    .classes()
                    .iter()
                    .map(|c| c.members.iter().all(|&m| body[m]))
                    .collect();
                (0..n).map(|i| class_ok[p.class_of(i)]).collect()
            }
            Formula::EX(a) => {
                let a = self.label(a)?;
                (0..n)
                    .map(|i| g.successors(i).iter().any(|&s| a[s]))
                    .collect()
            }
            Formula::AX(a) => {
                let a = self.label(a)?;
                (0..n)
                    .map(|i| g.successors(i).iter().all(|&s| a[s]))
                    .collect()
            }
            Formula::EF(a) => exists_until(g, &self.label(a)?),
            Formula::AG(a) => {
                let neg: Vec<bool> = self.label(a)?.into_iter().map(|b| !b).collect();
                exists_until(g, &neg).into_iter().map(|b| !b).collect()
            }
            Formula::AF(a) => always_eventually(g, &self.label(a)?),
            Formula::EG(a) => exists_globally(g, &self.label(a)?),
            _ => unreachable!("atomic formulas handled above"),
        };
        self.memo.insert(key, v.clone());
        Ok(v)
    }
}

fn nodes_where(labels: &[bool], value: bool) -> Vec<NodeId> {
    (0..labels.len()).filter(|&i| labels[i] == value).collect()
}

/// Least fixpoint of `Z = target ∨ EX Z`, by backward search.
fn exists_until<T: Scalar>(g: &ConfigGraph<T>, target: &[bool]) -> Vec<bool> {
    let mut out = target.to_vec();
    let mut queue: VecDeque<NodeId> = nodes_where(target, true).into();
    while let Some(n) = queue.pop_front() {
        for &p in g.predecessors(n) {
            if !out[p] {
                out[p] = true;
                queue.push_back(p);
            }
        }
    }
    out
}

/// Least fixpoint of `Z = target ∨ AX Z`.
fn always_eventually<T: Scalar>(g: &ConfigGraph<T>, target: &[bool]) -> Vec<bool> {
    let mut out = target.to_vec();
    loop {
        let mut changed = false;
        for i in 0..out.len() {
            if !out[i] && g.successors(i).iter().all(|&s| out[s]) {
                out[i] = true;
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Greatest fixpoint of `Z = target ∧ EX Z`.
fn exists_globally<T: Scalar>(g: &ConfigGraph<T>, target: &[bool]) -> Vec<bool> {
    let mut out = target.to_vec();
    loop {
        let mut changed = false;
        for i in 0..out.len() {
            if out[i] && !g.successors(i).iter().any(|&s| out[s]) {
                out[i] = false;
                changed = true;
            }
        }
        if !changed {
            return out;
        }
    }
}

/// Shortest path from `from` to a node satisfying `goal`.
fn path_to<T: Scalar>(
    g: &ConfigGraph<T>,
    from: NodeId,
    goal: impl Fn(NodeId) -> bool,
) -> Option<Vec<NodeId>> {
    let mut parent: HashMap<NodeId, NodeId> = HashMap::new();
    let mut queue = VecDeque::from([from]);
    parent.insert(from, from);
    while let Some(n) = queue.pop_front() {
        if goal(n) {
            let mut path = vec![n];
            let mut cur = n;
            while cur != from {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for &s in g.successors(n) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(s) {
                e.insert(n);
                queue.push_back(s);
            }
        }
    }
    None
}

/// Path inside `stay` starting at `from`, followed until a node repeats; the
/// last node closes the loop.
fn lasso<T: Scalar>(g: &ConfigGraph<T>, from: NodeId, stay: &[bool]) -> Vec<NodeId> {
    let mut path = vec![from];
    let mut cur = from;
    loop {
        let next = g
            .successors(cur)
            .iter()
            .copied()
            .find(|&s| stay[s])
            .expect("greatest-fixpoint nodes keep a successor inside the set");
        let repeat = path.contains(&next);
        path.push(next);
        if repeat {
            return path;
        }
        cur = next;
    }
}
