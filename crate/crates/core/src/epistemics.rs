//! Possibility relations: an agent cannot tell two worlds apart when its
//! classical store and its remaining program are identical.
//!
//! Quantum inputs never enter an agent's store or program, so worlds that
//! differ only in the sampled input state always fall into the same class.
//! The owned-qubit set is not part of the key.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::netsem::{ConfigGraph, Event, LocalStore, NodeId};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpistemicError {
    #[error("unknown agent {0}")]
    UnknownAgent(String),
}

/// Indistinguishability key of an agent in one world.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClassKey {
    pub store: LocalStore,
    pub remaining: Vec<Event>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibilityClass {
    pub key: ClassKey,
    /// Ascending node ids.
    pub members: Vec<NodeId>,
}

/// Partition of all graph nodes into one agent's equivalence classes, ordered
/// by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibilityPartition {
    agent: String,
    classes: Vec<PossibilityClass>,
    class_of: Vec<usize>,
}

impl PossibilityPartition {
    pub fn agent(&self) -> &str {
        &self.agent
    }

    pub fn classes(&self) -> &[PossibilityClass] {
        &self.classes
    }

    pub fn class_of(&self, node: NodeId) -> usize {
        self.class_of[node]
    }

    /// Every world the agent considers possible at `node` (including `node`).
    pub fn possible(&self, node: NodeId) -> &[NodeId] {
        &self.classes[self.class_of[node]].members
    }

    pub fn equivalent(&self, a: NodeId, b: NodeId) -> bool {
        self.class_of[a] == self.class_of[b]
    }
}

pub fn possibility_partition<T: Scalar>(
    graph: &ConfigGraph<T>,
    agent: &str,
) -> Result<PossibilityPartition, EpistemicError> {
    let network = graph.network();
    let ai = network
        .agent_index(agent)
        .ok_or_else(|| EpistemicError::UnknownAgent(agent.to_string()))?;

    let mut by_key: BTreeMap<ClassKey, Vec<NodeId>> = BTreeMap::new();
    for (id, node) in graph.nodes().iter().enumerate() {
        let key = ClassKey {
            store: node.config.agents[ai].store.clone(),
            remaining: node.config.remaining(network, ai).to_vec(),
        };
        by_key.entry(key).or_default().push(id);
    }
    let mut classes: Vec<PossibilityClass> = by_key
        .into_iter()
        .map(|(key, members)| PossibilityClass { key, members })
        .collect();
    classes.sort_by_key(|c| c.members[0]);

    let mut class_of = vec![0; graph.len()];
    for (ci, class) in classes.iter().enumerate() {
        for &m in &class.members {
            class_of[m] = ci;
        }
    }
    Ok(PossibilityPartition {
        agent: agent.to_string(),
        classes,
        class_of,
    })
}

/// Partitions for every agent, keyed by agent name.
pub fn all_partitions<T: Scalar>(graph: &ConfigGraph<T>) -> BTreeMap<String, PossibilityPartition> {
    graph
        .network()
        .agents()
        .iter()
        .map(|a| {
            let p = possibility_partition(graph, &a.name).expect("agent from the same network");
            (a.name.clone(), p)
        })
        .collect()
}
