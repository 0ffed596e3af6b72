use std::io::Write;

use anyhow::{Context, Result};

use qnetk::{parse_selector, ConfigGraph, NodeId};

use crate::Loaded;

fn describe(g: &ConfigGraph, n: NodeId) -> String {
    let node = g.node(n);
    let stores: Vec<String> = g
        .network()
        .agents()
        .iter()
        .zip(&node.config.agents)
        .map(|(a, s)| format!("{}{}", a.name, s.store))
        .collect();
    format!(
        "{} {} |psi> = {}",
        g.node_label(n),
        stores.join(" "),
        node.config.state.ket_string(4)
    )
}

/// Depth-first enumeration of maximal paths; the graph is acyclic apart from
/// sink self-loops, which are not followed.
fn paths_from(g: &ConfigGraph, start: NodeId) -> Vec<Vec<usize>> {
    let mut done = Vec::new();
    let mut stack: Vec<(NodeId, Vec<usize>)> = vec![(start, Vec::new())];
    while let Some((n, edges)) = stack.pop() {
        let out: Vec<usize> = g
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.from == n && e.to != n)
            .map(|(i, _)| i)
            .collect();
        if out.is_empty() {
            done.push(edges);
            continue;
        }
        for i in out.into_iter().rev() {
            let mut next = edges.clone();
            next.push(i);
            stack.push((g.edges()[i].to, next));
        }
    }
    done
}

pub(crate) fn write(loaded: &Loaded, selector: &str, out: &mut dyn Write) -> Result<()> {
    let g = &loaded.graph;
    let sel = parse_selector(selector)?;
    let starts = sel
        .resolve(g)
        .with_context(|| format!("selector `{sel}`"))?;
    for start in starts {
        let paths = paths_from(g, start);
        writeln!(out, "from {}: {} path(s)", g.node_label(start), paths.len())?;
        for (pi, path) in paths.iter().enumerate() {
            let p: f64 = path.iter().map(|&i| g.edges()[i].probability).product();
            writeln!(out, "path {pi} (p = {p:.6}, {} steps)", path.len())?;
            writeln!(out, "  {}", describe(g, start))?;
            for &i in path {
                let e = &g.edges()[i];
                let step = &g.groups()[e.group].label.text;
                let outcome: Vec<String> = e
                    .outcome
                    .iter()
                    .map(|(a, v, b)| format!("{a}.{v}={b}"))
                    .collect();
                let outcome = if outcome.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", outcome.join(","))
                };
                writeln!(out, "  -- {step}{outcome} (p = {:.6}) -->", e.probability)?;
                writeln!(out, "  {}", describe(g, e.to))?;
            }
        }
    }
    Ok(())
}
