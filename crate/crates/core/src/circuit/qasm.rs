//! OpenQASM 2 subset reader/writer and the plain-text gate dump.

use std::fmt::Write;

use super::{Gate, Operands, Qubit};
use crate::error::CircuitError;

const ONE_Q: &[&str] = &[
    "h", "x", "y", "z", "s", "sdg", "t", "tdg", "sx", "sxdg", "id", "rx", "ry", "rz", "p", "u", "u1",
    "u2", "u3",
];
const TWO_Q: &[&str] = &["cx", "cz", "swap"];

fn err(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line, msg: msg.into() }
}

/// Split into `;`-terminated statements, each tagged with its 1-based start line.
fn statements(text: &str) -> Result<Vec<(usize, String)>, CircuitError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    let mut last_line = 1;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split("//").next().unwrap_or("");
        for ch in line.chars() {
            if ch == ';' {
                let stmt = cur.trim().to_string();
                if stmt.is_empty() {
                    return Err(err(line_no, "empty statement"));
                }
                out.push((start, stmt));
                cur.clear();
            } else {
                if cur.trim().is_empty() && !ch.is_whitespace() {
                    start = line_no;
                }
                cur.push(ch);
            }
        }
        cur.push(' ');
    }
    if !cur.trim().is_empty() {
        return Err(err(last_line, format!("missing `;` after `{}`", cur.trim())));
    }
    Ok(out)
}

fn parse_index(arg: &str, reg: &str, width: usize, line: usize) -> Result<Qubit, CircuitError> {
    let arg = arg.trim();
    let (name, rest) = arg
        .split_once('[')
        .ok_or_else(|| err(line, format!("expected `{reg}[i]`, found `{arg}`")))?;
    if name.trim() != reg {
        return Err(err(line, format!("unknown register `{}`", name.trim())));
    }
    let idx = rest
        .strip_suffix(']')
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| err(line, format!("bad qubit reference `{arg}`")))?;
    if idx >= width {
        return Err(err(line, format!("qubit index {idx} out of range for `{reg}[{width}]`")));
    }
    Ok(idx)
}

/// Parse the supported OpenQASM 2 subset: one `qreg`, standard 1Q gates,
/// `cx`, `cz` and `swap` (lowered to three `cx`). `measure`, `barrier` and
/// `creg` are skipped.
pub fn parse_qasm(text: &str) -> Result<(Vec<Gate>, usize), CircuitError> {
    let mut qreg: Option<(String, usize)> = None;
    let mut gates = Vec::new();
    for (line, stmt) in statements(text)? {
        let head = stmt.split(|c: char| c.is_whitespace() || c == '(').next().unwrap_or("");
        match head {
            "OPENQASM" | "include" | "creg" | "measure" | "barrier" => continue,
            "qreg" => {
                if qreg.is_some() {
                    return Err(err(line, "multiple quantum registers are not supported"));
                }
                let decl = stmt["qreg".len()..].trim();
                let (name, rest) = decl.split_once('[').ok_or_else(|| err(line, "malformed qreg"))?;
                let size = rest
                    .strip_suffix(']')
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| err(line, "malformed qreg size"))?;
                qreg = Some((name.trim().to_string(), size));
                continue;
            }
            _ => {}
        }
        let (reg, width) = qreg
            .as_ref()
            .map(|(n, w)| (n.as_str(), *w))
            .ok_or_else(|| err(line, "gate before `qreg` declaration"))?;
        let (label, args) = split_gate(&stmt, line)?;
        let name = label.split('(').next().unwrap();
        let qubits = args
            .split(',')
            .map(|a| parse_index(a, reg, width, line))
            .collect::<Result<Vec<_>, _>>()?;
        let arity = if ONE_Q.contains(&name) {
            1
        } else if TWO_Q.contains(&name) {
            2
        } else {
            return Err(err(line, format!("unsupported statement `{name}`")));
        };
        if qubits.len() != arity {
            return Err(err(line, format!("`{name}` takes {arity} qubit(s), got {}", qubits.len())));
        }
        match (name, qubits.as_slice()) {
            (_, [a, b]) if a == b => return Err(err(line, "two-qubit gate on a single qubit")),
            ("swap", &[a, b]) => {
                gates.push(Gate::two("cx", a, b));
                gates.push(Gate::two("cx", b, a));
                gates.push(Gate::two("cx", a, b));
            }
            (_, &[a, b]) => gates.push(Gate::two(label, a, b)),
            (_, &[a]) => gates.push(Gate::one(label, a)),
            _ => unreachable!(),
        }
    }
    let (_, width) = qreg.ok_or_else(|| err(1, "no `qreg` declaration"))?;
    Ok((gates, width))
}

/// `name(params) args` → (normalised label, args).
fn split_gate(stmt: &str, line: usize) -> Result<(String, &str), CircuitError> {
    if let Some(open) = stmt.find('(') {
        let name_end = stmt[..open].trim_end();
        if !name_end.contains(char::is_whitespace) {
            let close = stmt[open..]
                .find(')')
                .map(|i| open + i)
                .ok_or_else(|| err(line, "unclosed parameter list"))?;
            let params: String = stmt[open + 1..close].chars().filter(|c| !c.is_whitespace()).collect();
            return Ok((format!("{}({params})", name_end.trim()), &stmt[close + 1..]));
        }
    }
    let (name, args) = stmt
        .split_once(char::is_whitespace)
        .ok_or_else(|| err(line, format!("statement `{stmt}` has no operands")))?;
    Ok((name.to_string(), args))
}

/// Render gates as OpenQASM 2 on register `q`.
pub fn to_qasm(gates: &[Gate], n_logical: usize) -> String {
    let mut out = format!("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[{n_logical}];\n");
    for g in gates {
        match g.operands {
            Operands::One(a) => writeln!(out, "{} q[{a}];", g.label).unwrap(),
            Operands::Two(a, b) => writeln!(out, "{} q[{a}],q[{b}];", g.label).unwrap(),
        }
    }
    out
}

/// One `GATE <label> q<i> [q<j>]` line per gate.
pub fn to_dump(gates: &[Gate]) -> String {
    let mut out = String::new();
    for g in gates {
        writeln!(out, "GATE {g}").unwrap();
    }
    out
}

pub fn parse_dump(text: &str) -> Result<Vec<Gate>, CircuitError> {
    let mut gates = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut parts = line.split_whitespace();
        match parts.next() {
            None => continue,
            Some("GATE") => {}
            Some(other) => return Err(err(line_no, format!("expected GATE, found `{other}`"))),
        }
        let label = parts.next().ok_or_else(|| err(line_no, "missing label"))?;
        let qs = parts
            .map(|p| {
                p.strip_prefix('q')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| err(line_no, format!("bad qubit `{p}`")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match *qs.as_slice() {
            [a] => gates.push(Gate::one(label, a)),
            [a, b] => gates.push(Gate::two(label, a, b)),
            _ => return Err(err(line_no, "expected one or two qubits")),
        }
    }
    Ok(gates)
}
