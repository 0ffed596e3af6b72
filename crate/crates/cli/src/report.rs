use std::io::Write;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use qnetk::{ConfigGraph, Evidence, FormulaFile, ModelChecker, NodeId};

use crate::Loaded;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub network: String,
    pub samples: Vec<String>,
    pub graph: GraphSummary,
    pub formulas: Vec<FormulaReport>,
    pub elapsed_us: u64,
    pub all_passed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub terminals: usize,
    pub deadlocks: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormulaReport {
    pub name: String,
    pub formula: String,
    pub selector: String,
    pub expect: Option<bool>,
    pub verdicts: Vec<NodeVerdict>,
    /// True when the formula holds at every selected node.
    pub holds: bool,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeVerdict {
    pub node: NodeId,
    pub label: String,
    pub holds: bool,
    pub evidence: Option<String>,
}

fn path_text(g: &ConfigGraph, path: &[NodeId]) -> String {
    path.iter()
        .map(|&n| g.node_label(n))
        .collect::<Vec<_>>()
        .join(" -> ")
}

fn evidence_text(g: &ConfigGraph, e: &Evidence) -> Option<String> {
    match e {
        Evidence::None => None,
        Evidence::Violation(n) => Some(format!("violated at {}", g.node_label(*n))),
        Evidence::Witness(p) => Some(format!("witness {}", path_text(g, p))),
        Evidence::Counterexample(p) => Some(format!("counterexample {}", path_text(g, p))),
    }
}

pub(crate) fn run_report(loaded: &Loaded, file: &FormulaFile) -> Result<RunReport> {
    let g = &loaded.graph;
    let mut mc = ModelChecker::new(g, loaded.tol);
    let mut formulas = Vec::with_capacity(file.entries.len());
    for entry in &file.entries {
        let nodes = entry
            .selector
            .resolve(g)
            .with_context(|| format!("{}: formula `{}`", entry.span, entry.name))?;
        let mut verdicts = Vec::with_capacity(nodes.len());
        for n in nodes {
            let r = mc.check(&entry.formula, n)?;
            verdicts.push(NodeVerdict {
                node: n,
                label: g.node_label(n),
                holds: r.holds,
                evidence: evidence_text(g, &r.evidence),
            });
        }
        let holds = verdicts.iter().all(|v| v.holds);
        let passed = match entry.expect {
            Some(b) => verdicts.iter().all(|v| v.holds == b),
            None => true,
        };
        formulas.push(FormulaReport {
            name: entry.name.clone(),
            formula: entry.formula.to_string(),
            selector: entry.selector.to_string(),
            expect: entry.expect,
            verdicts,
            holds,
            passed,
        });
    }
    formulas.sort_by(|a, b| (&a.name, &a.selector).cmp(&(&b.name, &b.selector)));
    let s = g.stats();
    Ok(RunReport {
        network: g.network().name().to_string(),
        samples: loaded.samples.clone(),
        graph: GraphSummary {
            nodes: s.nodes,
            edges: s.edges,
            terminals: s.terminals,
            deadlocks: s.deadlocks,
        },
        all_passed: formulas.iter().all(|f| f.passed),
        formulas,
        elapsed_us: 0,
    })
}

pub(crate) fn write_text(report: &RunReport, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "network {}: {} nodes, {} edges, {} terminal, {} deadlocked",
        report.network,
        report.graph.nodes,
        report.graph.edges,
        report.graph.terminals,
        report.graph.deadlocks
    )?;
    for f in &report.formulas {
        let verdict = match f.expect {
            Some(b) => format!("expected {b}"),
            None => "no expectation".to_string(),
        };
        let tally = f.verdicts.iter().filter(|v| v.holds).count();
        writeln!(
            out,
            "{} {} : {} @ {} ({verdict}; holds at {tally}/{})",
            if f.passed { "PASS" } else { "FAIL" },
            f.name,
            f.formula,
            f.selector,
            f.verdicts.len()
        )?;
        if !f.passed {
            for v in f.verdicts.iter().filter(|v| Some(v.holds) != f.expect) {
                write!(out, "    {} is {}", v.label, v.holds)?;
                match &v.evidence {
                    Some(e) => writeln!(out, ": {e}")?,
                    None => writeln!(out)?,
                }
            }
        }
    }
    let passed = report.formulas.iter().filter(|f| f.passed).count();
    writeln!(
        out,
        "{passed}/{} formulas passed in {:.3} ms",
        report.formulas.len(),
        report.elapsed_us as f64 / 1000.0
    )?;
    Ok(())
}
