use anyhow::Result;

use qnetk::{possibility_partition, ConfigGraph, NodeId};

use crate::Loaded;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn node_text(g: &ConfigGraph, n: NodeId) -> String {
    let node = g.node(n);
    let mut lines = vec![g.node_label(n)];
    for (a, s) in g.network().agents().iter().zip(&node.config.agents) {
        lines.push(format!("{} {}", a.name, s.store));
    }
    lines.push(node.config.state.ket_string(4));
    lines
        .iter()
        .map(|l| escape(l))
        .collect::<Vec<_>>()
        .join("\\n")
}

/// Graphviz rendering. Possibility classes with at least two members become
/// clusters; the first requested agent is drawn solid and any later one
/// dashed.
pub(crate) fn render(loaded: &Loaded, classes: &[String]) -> Result<String> {
    let g = &loaded.graph;
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", escape(g.network().name())));
    out.push_str("  rankdir=TB;\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in 0..g.len() {
        let style = if g.is_terminal(n) {
            ", peripheries=2"
        } else if g.is_sink(n) {
            ", style=filled, fillcolor=\"#f4cccc\""
        } else {
            ""
        };
        out.push_str(&format!("  n{n} [label=\"{}\"{style}];\n", node_text(g, n)));
    }
    for e in g.edges() {
        let mut parts = vec![g.groups()[e.group].label.text.clone()];
        parts.extend(e.outcome.iter().map(|(a, v, b)| format!("{a}.{v}={b}")));
        if e.probability < 1.0 {
            parts.push(format!("p={:.4}", e.probability));
        }
        let label: Vec<String> = parts.iter().map(|p| escape(p)).collect();
        out.push_str(&format!(
            "  n{} -> n{} [label=\"{}\"];\n",
            e.from,
            e.to,
            label.join("\\n")
        ));
    }
    for (ai, agent) in classes.iter().enumerate() {
        let p = possibility_partition(g, agent)?;
        let style = if ai == 0 { "solid" } else { "dashed" };
        for (ci, c) in p
            .classes()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.members.len() >= 2)
        {
            out.push_str(&format!(
                "  subgraph \"cluster_{}_{ci}\" {{\n",
                escape(agent)
            ));
            out.push_str(&format!(
                "    label=\"{} class {ci}\";\n    style={style};\n",
                escape(agent)
            ));
            for m in &c.members {
                out.push_str(&format!("    n{m};\n"));
            }
            out.push_str("  }\n");
        }
    }
    out.push_str("}\n");
    Ok(out)
}
