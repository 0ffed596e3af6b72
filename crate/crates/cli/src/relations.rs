use std::io::Write;

use anyhow::Result;
use serde::Serialize;

use qnetk::possibility_partition;

use crate::Loaded;

#[derive(Serialize)]
struct ClassOut {
    store: String,
    remaining: Vec<String>,
    members: Vec<MemberOut>,
}

#[derive(Serialize)]
struct MemberOut {
    node: usize,
    label: String,
}

#[derive(Serialize)]
struct RelationsOut<'a> {
    agent: &'a str,
    nodes: usize,
    classes: Vec<ClassOut>,
}

pub(crate) fn write(loaded: &Loaded, agent: &str, json: bool, out: &mut dyn Write) -> Result<()> {
    let g = &loaded.graph;
    let p = possibility_partition(g, agent)?;
    let classes: Vec<ClassOut> = p
        .classes()
        .iter()
        .map(|c| ClassOut {
            store: c.key.store.to_string(),
            remaining: c.key.remaining.iter().map(|e| e.to_string()).collect(),
            members: c
                .members
                .iter()
                .map(|&n| MemberOut {
                    node: n,
                    label: g.node_label(n),
                })
                .collect(),
        })
        .collect();
    if json {
        let doc = RelationsOut {
            agent,
            nodes: g.len(),
            classes,
        };
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        return Ok(());
    }
    writeln!(
        out,
        "agent {agent}: {} classes over {} nodes",
        classes.len(),
        g.len()
    )?;
    for (i, c) in classes.iter().enumerate() {
        let rest = if c.remaining.is_empty() {
            "done".to_string()
        } else {
            c.remaining.join("; ")
        };
        writeln!(out, "class {i}: store {} | remaining {rest}", c.store)?;
        let members: Vec<String> = c
            .members
            .iter()
            .map(|m| format!("{}:{}", m.node, m.label))
            .collect();
        writeln!(out, "    {}", members.join(" "))?;
    }
    Ok(())
}
