//! The `.nckt` text format.
//!
//! ```text
//! nckt 1
//! n <name> <threshold>
//! e <src> <dst> <weight>
//! I <name>
//! O <name>
//! ```
//!
//! `#` starts a comment. Neuron lines fix the index order; the order of `e`
//! lines into a neuron fixes its parent order. The writer emits all `n` lines,
//! then all `e` lines grouped by destination, then `I` and `O`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::circuit::{valid_name, Circuit, CircuitBuilder, NeuronId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line number, 0 when the problem is not tied to a line.
    pub line: usize,
    pub kind: FormatErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormatErrorKind {
    Syntax(String),
    UnknownNeuron(String),
    Duplicate(String),
    Missing(&'static str),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        }
        match &self.kind {
            FormatErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            FormatErrorKind::UnknownNeuron(name) => write!(f, "unknown neuron {name}"),
            FormatErrorKind::Duplicate(what) => write!(f, "duplicate declaration of {what}"),
            FormatErrorKind::Missing(what) => write!(f, "missing {what}"),
        }
    }
}

impl std::error::Error for FormatError {}

fn err(line: usize, kind: FormatErrorKind) -> FormatError {
    FormatError { line, kind }
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    err(line, FormatErrorKind::Syntax(msg.into()))
}

pub fn write_circuit(circuit: &Circuit) -> String {
    let mut out = String::from("nckt 1\n");
    for n in circuit.neurons() {
        writeln!(out, "n {} {}", n.name, n.threshold).unwrap();
    }
    for (src, dst, w) in circuit.edges() {
        writeln!(out, "e {} {} {}", circuit.name(src), circuit.name(dst), w).unwrap();
    }
    writeln!(out, "I {}", circuit.name(circuit.input())).unwrap();
    writeln!(out, "O {}", circuit.name(circuit.output())).unwrap();
    out
}

pub fn read_circuit(text: &str) -> Result<Circuit, FormatError> {
    let mut header_seen = false;
    let mut neurons: Vec<(usize, &str, i32)> = Vec::new();
    let mut edges: Vec<(usize, &str, &str, i32)> = Vec::new();
    let mut input: Option<(usize, &str)> = None;
    let mut output: Option<(usize, &str)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !header_seen {
            if fields != ["nckt", "1"] {
                return Err(syntax(line_no, "expected header `nckt 1`"));
            }
            header_seen = true;
            continue;
        }
        let arity = |n: usize| {
            if fields.len() == n {
                Ok(())
            } else {
                Err(syntax(line_no, format!("`{}` takes {} fields, got {}", fields[0], n - 1, fields.len() - 1)))
            }
        };
        let int = |s: &str| s.parse::<i32>().map_err(|_| syntax(line_no, format!("expected integer, got {s:?}")));
        let name = |s: &'static str, v: &str| {
            if valid_name(v) {
                Ok(())
            } else {
                Err(syntax(line_no, format!("invalid {s} name {v:?}")))
            }
        };
        match fields[0] {
            "n" => {
                arity(3)?;
                name("neuron", fields[1])?;
                neurons.push((line_no, fields[1], int(fields[2])?));
            }
            "e" => {
                arity(4)?;
                edges.push((line_no, fields[1], fields[2], int(fields[3])?));
            }
            "I" | "O" => {
                arity(2)?;
                let slot = if fields[0] == "I" { &mut input } else { &mut output };
                if slot.is_some() {
                    return Err(err(line_no, FormatErrorKind::Duplicate(format!("{} line", fields[0]))));
                }
                *slot = Some((line_no, fields[1]));
            }
            "nckt" => return Err(err(line_no, FormatErrorKind::Duplicate("header".into()))),
            other => return Err(syntax(line_no, format!("unknown record `{other}`"))),
        }
    }
    if !header_seen {
        return Err(err(0, FormatErrorKind::Missing("header `nckt 1`")));
    }

    let mut b = CircuitBuilder::new();
    let mut ids: HashMap<&str, NeuronId> = HashMap::new();
    for &(line, name, threshold) in &neurons {
        if ids.contains_key(name) {
            return Err(err(line, FormatErrorKind::Duplicate(format!("neuron {name}"))));
        }
        let id = b.neuron(name, threshold).map_err(|e| syntax(line, e.to_string()))?;
        ids.insert(name, id);
    }
    let resolve = |line: usize, name: &str| {
        ids.get(name).copied().ok_or_else(|| err(line, FormatErrorKind::UnknownNeuron(name.to_string())))
    };
    for &(line, src, dst, w) in &edges {
        let (s, d) = (resolve(line, src)?, resolve(line, dst)?);
        b.edge(s, d, w).expect("ids resolved above");
    }
    let (iline, iname) = input.ok_or(err(0, FormatErrorKind::Missing("`I` line")))?;
    let (oline, oname) = output.ok_or(err(0, FormatErrorKind::Missing("`O` line")))?;
    b.set_input(resolve(iline, iname)?);
    b.set_output(resolve(oline, oname)?);
    b.build().map_err(|e| syntax(oline, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "nckt 1\n# a chain\nn I 1\nn A 1\nn O 1\ne I A 1\ne A O 1\nI I\nO O\n";

    #[test]
    fn reads_chain() {
        let c = read_circuit(CHAIN).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.name(c.input()), "I");
        assert_eq!(c.name(c.output()), "O");
        assert_eq!(c.edge_count(), 2);
        assert_eq!(write_circuit(&c), CHAIN.replace("# a chain\n", ""));
    }

    #[test]
    fn undeclared_neuron_is_reported_with_line() {
        let text = "nckt 1\nn I 1\nn O 1\ne I X 1\nI I\nO O\n";
        let e = read_circuit(text).unwrap_err();
        assert_eq!(e.line, 4);
        assert_eq!(e.kind, FormatErrorKind::UnknownNeuron("X".into()));
        assert!(e.to_string().contains("unknown neuron"));
    }

    #[test]
    fn duplicate_declaration() {
        let e = read_circuit("nckt 1\nn I 1\nn I 0\nI I\nO I\n").unwrap_err();
        assert_eq!(e.line, 3);
        assert!(matches!(e.kind, FormatErrorKind::Duplicate(_)));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        assert_eq!(read_circuit("nckt 2\n").unwrap_err().line, 1);
        assert_eq!(read_circuit("nckt 1\nn I one\n").unwrap_err().line, 2);
        assert_eq!(read_circuit("nckt 1\nn I 1\nz\n").unwrap_err().line, 3);
        assert_eq!(read_circuit("nckt 1\nn I 1 2\n").unwrap_err().line, 2);
        assert!(matches!(read_circuit("").unwrap_err().kind, FormatErrorKind::Missing(_)));
        assert!(matches!(read_circuit("nckt 1\nn I 1\nI I\n").unwrap_err().kind, FormatErrorKind::Missing(_)));
    }

    #[test]
    fn parent_order_follows_edge_lines() {
        let text = "nckt 1\nn I 1\nn B 1\nn O 1\ne B O -1\ne I O 2\ne I B 1\nI I\nO O\n";
        let c = read_circuit(text).unwrap();
        let o = c.neuron(c.output());
        let names: Vec<_> = o.parents.iter().map(|&p| c.name(p)).collect();
        assert_eq!(names, ["B", "I"]);
        assert_eq!(o.weights, [-1, 2]);
    }
}
