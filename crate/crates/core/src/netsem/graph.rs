use std::collections::{HashMap, VecDeque};

use super::{enabled_steps, AgentState, Configuration, LocalStore, ModelError, Network, StepLabel};
use crate::qsim::{QubitId, StateVector};
use crate::scalar::{Scalar, Tolerance};

pub type NodeId = usize;

/// Labeled single-qubit state fed into every quantum input.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample<T> {
    pub label: String,
    pub state: StateVector<T>,
}

impl<T: Scalar> Sample<T> {
    pub fn new(label: impl Into<String>, state: StateVector<T>) -> Self {
        Self {
            label: label.into(),
            state,
        }
    }

    /// Sample from a built-in alias (`0`, `1`, `plus`, `minus`, `plusi`, `minusi`).
    pub fn named(alias: &str) -> Option<Self> {
        crate::qsim::named_state(alias, QubitId(0)).map(|s| Self::new(alias, s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputValue {
    pub agent: String,
    pub var: String,
    pub value: u8,
}

/// One (classical assignment × quantum sample) combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunInfo {
    pub inputs: Vec<InputValue>,
    /// Sample label fed into each quantum input qubit.
    pub samples: Vec<(QubitId, String)>,
    pub initial: NodeId,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InitialConfiguration<T> {
    pub inputs: Vec<InputValue>,
    pub samples: Vec<(QubitId, String)>,
    pub config: Configuration<T>,
}

/// One initial configuration per classical input assignment and per choice of
/// sample for each quantum input. Assignments vary slowest, with the last
/// declared input bit varying fastest.
pub fn initial_configurations<T: Scalar>(
    network: &Network<T>,
    samples: &[Sample<T>],
) -> Result<Vec<InitialConfiguration<T>>, ModelError> {
    let classical: Vec<(usize, &str, &'static [u8])> = network
        .agents()
        .iter()
        .enumerate()
        .flat_map(|(ai, a)| {
            a.inputs
                .iter()
                .map(move |i| (ai, i.name.as_str(), i.domain.values()))
        })
        .collect();
    let qinputs = network.quantum_inputs();
    if !qinputs.is_empty() && samples.is_empty() {
        return Err(ModelError::MissingSamples);
    }
    for s in samples {
        if s.state.num_qubits() != 1 {
            return Err(ModelError::SampleMismatch {
                label: s.label.clone(),
                qubits: s.state.num_qubits(),
            });
        }
    }

    let assignments = odometer(&classical.iter().map(|c| c.2.len()).collect::<Vec<_>>());
    let sample_choices = odometer(&vec![samples.len(); qinputs.len()]);

    let mut out = Vec::with_capacity(assignments.len() * sample_choices.len());
    for assignment in &assignments {
        for choice in &sample_choices {
            let mut state = network.resource().clone();
            let mut labels = Vec::with_capacity(qinputs.len());
            for (&q, &si) in qinputs.iter().zip(choice) {
                let sample = &samples[si];
                let from = sample.state.qubits()[0];
                state = state.tensor(&sample.state.relabel(from, q)?)?;
                labels.push((q, sample.label.clone()));
            }
            let mut agents: Vec<AgentState> = network
                .agents()
                .iter()
                .map(|a| AgentState {
                    store: LocalStore::default(),
                    pc: 0,
                    owned: a.owns.clone(),
                })
                .collect();
            let mut inputs = Vec::with_capacity(classical.len());
            for (&(ai, var, domain), &vi) in classical.iter().zip(assignment) {
                agents[ai].store.assign(var, domain[vi]);
                inputs.push(InputValue {
                    agent: network.agents()[ai].name.clone(),
                    var: var.to_string(),
                    value: domain[vi],
                });
            }
            out.push(InitialConfiguration {
                inputs,
                samples: labels,
                config: Configuration {
                    state,
                    agents,
                    run: out.len(),
                },
            });
        }
    }
    Ok(out)
}

/// All index tuples below `radices`, last position fastest.
fn odometer(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &r in radices {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..r).map(move |i| {
                    let mut p = prefix.clone();
                    p.push(i);
                    p
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BuildOptions<T> {
    pub tol: Tolerance<T>,
    pub max_nodes: usize,
}

impl<T: Scalar> Default for BuildOptions<T> {
    fn default() -> Self {
        Self {
            tol: Tolerance::default(),
            max_nodes: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Active,
    /// Every program exhausted.
    Terminal,
    /// Programs remain but no transition is enabled.
    Deadlocked,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<T> {
    pub config: Configuration<T>,
    /// 1-based distance from the run's initial configuration (`C1`, `C2`, ...).
    pub stage: usize,
    pub kind: NodeKind,
    /// Step groups leaving this node.
    pub groups: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub from: NodeId,
    pub to: NodeId,
    pub group: usize,
    pub probability: T,
    pub outcome: Vec<(String, String, u8)>,
}

/// All edges produced by one enabled step at one node.
#[derive(Clone, Debug, PartialEq)]
pub struct StepGroup {
    pub from: NodeId,
    pub label: StepLabel,
    pub edges: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub terminals: usize,
    pub deadlocks: usize,
}

/// Finite configuration graph of a network. Nodes without proper successors
/// (terminal or deadlocked) carry an implicit self-loop in [`Self::successors`].
#[derive(Clone, Debug)]
pub struct ConfigGraph<T> {
    network: Network<T>,
    runs: Vec<RunInfo>,
    nodes: Vec<Node<T>>,
    edges: Vec<Edge<T>>,
    groups: Vec<StepGroup>,
    succ: Vec<Vec<NodeId>>,
    pred: Vec<Vec<NodeId>>,
}

/// Breadth-first closure of the small-step relation from every initial
/// configuration. Identical worlds within one run are merged.
pub fn build_graph<T: Scalar>(
    network: &Network<T>,
    samples: &[Sample<T>],
    options: &BuildOptions<T>,
) -> Result<ConfigGraph<T>, ModelError> {
    let initial = initial_configurations(network, samples)?;
    let mut g = ConfigGraph {
        network: network.clone(),
        runs: Vec::with_capacity(initial.len()),
        nodes: Vec::new(),
        edges: Vec::new(),
        groups: Vec::new(),
        succ: Vec::new(),
        pred: Vec::new(),
    };
    let mut index: HashMap<(usize, Vec<AgentState>), Vec<NodeId>> = HashMap::new();
    let mut queue = VecDeque::new();

    for init in initial {
        let id = g.intern(init.config, 1, &mut index, options)?.0;
        g.runs.push(RunInfo {
            inputs: init.inputs,
            samples: init.samples,
            initial: id,
        });
        queue.push_back(id);
    }

    while let Some(id) = queue.pop_front() {
        let steps = enabled_steps(network, &g.nodes[id].config, &options.tol)?;
        if steps.is_empty() {
            g.nodes[id].kind = if g.nodes[id].config.is_terminal(network) {
                NodeKind::Terminal
            } else {
                NodeKind::Deadlocked
            };
            continue;
        }
        let stage = g.nodes[id].stage + 1;
        for step in steps {
            let gid = g.groups.len();
            g.groups.push(StepGroup {
                from: id,
                label: step.label,
                edges: Vec::new(),
            });
            g.nodes[id].groups.push(gid);
            for succ in step.successors {
                let (to, fresh) = g.intern(succ.config, stage, &mut index, options)?;
                if fresh {
                    queue.push_back(to);
                }
                let eid = g.edges.len();
                g.edges.push(Edge {
                    from: id,
                    to,
                    group: gid,
                    probability: succ.probability,
                    outcome: succ.outcome,
                });
                g.groups[gid].edges.push(eid);
            }
        }
    }

    g.succ = vec![Vec::new(); g.nodes.len()];
    g.pred = vec![Vec::new(); g.nodes.len()];
    for e in &g.edges {
        if !g.succ[e.from].contains(&e.to) {
            g.succ[e.from].push(e.to);
            g.pred[e.to].push(e.from);
        }
    }
    for n in 0..g.nodes.len() {
        if g.succ[n].is_empty() {
            g.succ[n].push(n);
            g.pred[n].push(n);
        }
    }
    Ok(g)
}

impl<T: Scalar> ConfigGraph<T> {
    fn intern(
        &mut self,
        config: Configuration<T>,
        stage: usize,
        index: &mut HashMap<(usize, Vec<AgentState>), Vec<NodeId>>,
        options: &BuildOptions<T>,
    ) -> Result<(NodeId, bool), ModelError> {
        let bucket = index
            .entry((config.run, config.agents.clone()))
            .or_default();
        if let Some(&id) = bucket.iter().find(|&&id| {
            self.nodes[id]
                .config
                .same_world(&config, options.tol.compare)
        }) {
            return Ok((id, false));
        }
        if self.nodes.len() >= options.max_nodes {
            return Err(ModelError::NodeLimit(options.max_nodes));
        }
        let id = self.nodes.len();
        bucket.push(id);
        self.nodes.push(Node {
            config,
            stage,
            kind: NodeKind::Active,
            groups: Vec::new(),
        });
        Ok((id, true))
    }

    pub fn network(&self) -> &Network<T> {
        &self.network
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &Node<T> {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }

    pub fn groups(&self) -> &[StepGroup] {
        &self.groups
    }

    pub fn runs(&self) -> &[RunInfo] {
        &self.runs
    }

    pub fn run_of(&self, id: NodeId) -> &RunInfo {
        &self.runs[self.nodes[id].config.run]
    }

    /// Initial configuration of the run `id` belongs to.
    pub fn initial_of(&self, id: NodeId) -> NodeId {
        self.run_of(id).initial
    }

    pub fn initial_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.runs.iter().map(|r| r.initial)
    }

    /// Successors, with the implicit self-loop on sink nodes.
    pub fn successors(&self, id: NodeId) -> &[NodeId] {
        &self.succ[id]
    }

    /// Predecessors, including the self-loop on sink nodes.
    pub fn predecessors(&self, id: NodeId) -> &[NodeId] {
        &self.pred[id]
    }

    pub fn is_sink(&self, id: NodeId) -> bool {
        self.nodes[id].kind != NodeKind::Active
    }

    pub fn is_terminal(&self, id: NodeId) -> bool {
        self.nodes[id].kind == NodeKind::Terminal
    }

    pub fn outgoing(&self, id: NodeId) -> impl Iterator<Item = &Edge<T>> + '_ {
        self.nodes[id]
            .groups
            .iter()
            .flat_map(move |&g| self.groups[g].edges.iter().map(move |&e| &self.edges[e]))
    }

    pub fn stats(&self) -> GraphStats {
        GraphStats {
            nodes: self.nodes.len(),
            edges: self.edges.len(),
            terminals: self
                .nodes
                .iter()
                .filter(|n| n.kind == NodeKind::Terminal)
                .count(),
            deadlocks: self
                .nodes
                .iter()
                .filter(|n| n.kind == NodeKind::Deadlocked)
                .count(),
        }
    }

    pub fn deadlocks(&self) -> Vec<NodeId> {
        (0..self.nodes.len())
            .filter(|&n| self.nodes[n].kind == NodeKind::Deadlocked)
            .collect()
    }

    /// Short label such as `C3[x1=1,x2=0]` or `C2{s1=0,s2=1}[psi=plus]`.
    pub fn node_label(&self, id: NodeId) -> String {
        let node = &self.nodes[id];
        let mut out = format!("C{}", node.stage);
        let outcomes: Vec<String> = self
            .network
            .agents()
            .iter()
            .zip(&node.config.agents)
            .flat_map(|(a, s)| {
                a.outcome_variables()
                    .into_iter()
                    .filter_map(|v| s.store.get(v).map(|b| (a.name.as_str(), v, b)))
                    .collect::<Vec<_>>()
            })
            .map(|(a, v, b)| format!("{}={b}", self.display_var(a, v)))
            .collect();
        if !outcomes.is_empty() {
            out.push('{');
            out.push_str(&outcomes.join(","));
            out.push('}');
        }
        out.push_str(&self.run_label(node.config.run));
        out
    }

    /// `[x1=0,x2=1]`, `[psi=plus]`, or empty for input-free networks.
    pub fn run_label(&self, run: usize) -> String {
        let info = &self.runs[run];
        let mut parts: Vec<String> = info
            .inputs
            .iter()
            .map(|iv| format!("{}={}", self.display_var(&iv.agent, &iv.var), iv.value))
            .collect();
        let single = info.samples.len() == 1;
        parts.extend(info.samples.iter().map(|(q, label)| {
            if single {
                format!("psi={label}")
            } else {
                format!("psi{q}={label}")
            }
        }));
        if parts.is_empty() {
            String::new()
        } else {
            format!("[{}]", parts.join(","))
        }
    }

    /// Variable name, qualified with its agent only when another agent uses
    /// the same name.
    pub fn display_var(&self, agent: &str, var: &str) -> String {
        let shared = self
            .network
            .agents()
            .iter()
            .filter(|a| a.variables().contains(var))
            .count()
            > 1;
        if shared {
            format!("{agent}.{var}")
        } else {
            var.to_string()
        }
    }
}
