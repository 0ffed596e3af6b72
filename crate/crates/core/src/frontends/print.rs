use std::fmt::Write;

use super::FormulaFile;
use crate::netsem::{Network, ResourceDecl};
use crate::scalar::Scalar;

fn join<D: std::fmt::Display>(items: impl IntoIterator<Item = D>) -> String {
    items
        .into_iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Canonical `.qnet` text, accepted by [`super::parse_network`].
pub fn print_network<T: Scalar>(net: &Network<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {} {{", net.name());
    let _ = writeln!(out, "  qubits {};", net.qubit_count());
    for r in net.resources() {
        match r {
            ResourceDecl::Ebit(a, b) => {
                let _ = writeln!(out, "  resource ebit({a}, {b});");
            }
            ResourceDecl::Amplitudes { qubits, amplitudes } => {
                let amps = join(amplitudes.iter().map(|c| format!("({}, {})", c.re, c.im)));
                let _ = writeln!(out, "  resource amps[{amps}] on ({});", join(qubits));
            }
        }
    }
    for a in net.agents() {
        let _ = writeln!(out, "  agent {} owns {} {{", a.name, join(&a.owns));
        for i in &a.inputs {
            let _ = writeln!(out, "    input {}: {};", i.name, i.domain);
        }
        for q in &a.quantum_inputs {
            let _ = writeln!(out, "    qinput {q};");
        }
        out.push_str("    program {\n");
        for ev in &a.program {
            let _ = writeln!(out, "      {ev};");
        }
        out.push_str("    }\n  }\n");
    }
    out.push_str("}\n");
    out
}

/// One `NAME : FORMULA @ SELECTOR [expect: BOOL]` line per entry.
pub fn print_formula_file<T: Scalar>(file: &FormulaFile<T>) -> String {
    let mut out = String::new();
    for e in &file.entries {
        let _ = write!(out, "{} : {} @ {}", e.name, e.formula, e.selector);
        if let Some(b) = e.expect {
            let _ = write!(out, " expect: {b}");
        }
        out.push('\n');
    }
    out
}
