//! Replay validator and cost metrics. The validator uses only the flat
//! gate list, the device and the op stream; none of the router's own
//! structures.

use serde::{Deserialize, Serialize};

use crate::arch::{Architecture, SlotId};
use crate::circuit::{Gate, Operands, Qubit};
use crate::layout::Layout;
use crate::program::{RoutedOp, RoutedProgram};
use crate::router::RouterParams;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub epr: usize,
    pub swaps: usize,
    pub cost: u64,
    pub rollbacks: usize,
    pub relief_moves: usize,
    pub runtime_ms: f64,
}

pub fn compute_metrics(program: &RoutedProgram, params: &RouterParams, runtime_ms: f64) -> Metrics {
    let epr = program.ops.iter().filter(|o| matches!(o, RoutedOp::Teleport { .. })).count();
    let swaps = program.ops.iter().filter(|o| matches!(o, RoutedOp::Swap { .. })).count();
    Metrics {
        epr,
        swaps,
        cost: params.cost(swaps, epr),
        rollbacks: program.rollbacks,
        relief_moves: program.relief_moves,
        runtime_ms,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    UnknownGate,
    Adjacency,
    Occupant,
    NotAnEdge,
    BadTeleport,
    WireOrder,
    Duplicate,
    Missing,
    FinalLayout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub op_index: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    /// `[{op_index, kind, detail}, ...]`
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.violations).expect("violations serialise")
    }
}

struct Shadow {
    at: Vec<Option<Qubit>>,
    pos: Vec<SlotId>,
}

impl Shadow {
    fn swap(&mut self, a: SlotId, b: SlotId) {
        self.at.swap(a, b);
        for s in [a, b] {
            if let Some(q) = self.at[s] {
                self.pos[q] = s;
            }
        }
    }
}

/// Replay `program` from `initial` and check legality, wire order, gate
/// multiset and the final placement. Each op reports at most one
/// legality violation (its first failed check); a gate op still counts as
/// executed for the order and multiset checks.
pub fn validate(
    program: &RoutedProgram,
    arch: &Architecture,
    gates: &[Gate],
    n_logical: usize,
    initial: &Layout,
    final_layout: &Layout,
) -> ValidationReport {
    let mut violations = Vec::new();
    let mut v = |op_index, kind, detail: String| violations.push(Violation { op_index, kind, detail });

    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); n_logical];
    for (i, g) in gates.iter().enumerate() {
        for q in g.operands.qubits() {
            wires[q].push(i);
        }
    }
    let mut cursor = vec![0usize; n_logical];
    let mut seen = vec![false; gates.len()];
    let mut sh = Shadow {
        at: (0..arch.num_slots()).map(|s| initial.logical(s)).collect(),
        pos: initial.placement().to_vec(),
    };

    for (i, op) in program.ops.iter().enumerate() {
        let gate = match *op {
            RoutedOp::Gate1 { gate, .. } | RoutedOp::Gate2 { gate, .. } => Some(gate),
            _ => None,
        };
        if let Some(g) = gate {
            if g >= gates.len() {
                v(i, ViolationKind::UnknownGate, format!("gate {g} not in circuit"));
                continue;
            }
        }
        match *op {
            RoutedOp::Gate1 { gate, slot } => {
                if let Some((kind, msg)) = check_gate1(arch, &sh, &gates[gate], gate, slot) {
                    v(i, kind, msg);
                }
            }
            RoutedOp::Gate2 { gate, a, b } => {
                if let Some((kind, msg)) = check_gate2(arch, &sh, &gates[gate], gate, a, b) {
                    v(i, kind, msg);
                }
            }
            RoutedOp::Swap { a, b } => {
                if !arch.are_adjacent(a, b) {
                    v(i, ViolationKind::NotAnEdge, format!("s{a}-s{b} is not an intra-core edge"));
                    continue;
                }
                sh.swap(a, b);
            }
            RoutedOp::Teleport { qubit, link, from, to } => {
                if let Err(msg) = check_teleport(arch, &sh, qubit, link, from, to, n_logical) {
                    v(i, ViolationKind::BadTeleport, msg);
                    continue;
                }
                sh.at[from] = None;
                sh.at[to] = Some(qubit);
                sh.pos[qubit] = to;
            }
        }
        if let Some(g) = gate {
            if seen[g] {
                v(i, ViolationKind::Duplicate, format!("gate {g} executed twice"));
                continue;
            }
            seen[g] = true;
            for q in gates[g].operands.qubits() {
                if wires[q].get(cursor[q]) != Some(&g) {
                    v(i, ViolationKind::WireOrder, format!("gate {g} out of order on q{q}"));
                }
                cursor[q] += 1;
            }
        }
    }
    let end = program.ops.len();
    for (g, _) in seen.iter().enumerate().filter(|(_, &s)| !s) {
        v(end, ViolationKind::Missing, format!("gate {g} never executed"));
    }
    if sh.pos != final_layout.placement() {
        v(end, ViolationKind::FinalLayout, "replayed placement differs from the reported final layout".into());
    }
    ValidationReport { violations }
}

fn check_gate1(arch: &Architecture, sh: &Shadow, g: &Gate, id: usize, slot: SlotId) -> Option<(ViolationKind, String)> {
    let Operands::One(q) = g.operands else {
        return Some((ViolationKind::UnknownGate, format!("gate {id} is not single-qubit")));
    };
    if slot >= arch.num_slots() || sh.at[slot] != Some(q) {
        return Some((ViolationKind::Occupant, format!("q{q} is not at s{slot}")));
    }
    None
}

fn check_gate2(arch: &Architecture, sh: &Shadow, g: &Gate, id: usize, a: SlotId, b: SlotId) -> Option<(ViolationKind, String)> {
    let Operands::Two(qa, qb) = g.operands else {
        return Some((ViolationKind::UnknownGate, format!("gate {id} is not two-qubit")));
    };
    if !arch.are_adjacent(a, b) {
        return Some((ViolationKind::Adjacency, format!("s{a} and s{b} are not coupled")));
    }
    if sh.at[a] != Some(qa) || sh.at[b] != Some(qb) {
        return Some((ViolationKind::Occupant, format!("q{qa},q{qb} are not at s{a},s{b}")));
    }
    None
}

fn check_teleport(
    arch: &Architecture,
    sh: &Shadow,
    qubit: Qubit,
    link: usize,
    from: SlotId,
    to: SlotId,
    n_logical: usize,
) -> Result<(), String> {
    let l = arch.links().get(link).ok_or(format!("no link {link}"))?;
    if qubit >= n_logical || from >= arch.num_slots() || to >= arch.num_slots() {
        return Err("operand out of range".into());
    }
    if sh.at[from] != Some(qubit) {
        return Err(format!("q{qubit} is not at s{from}"));
    }
    let (ps, pd) = l.oriented(arch.core_of(from)).ok_or(format!("link {link} does not touch s{from}'s core"))?;
    if !arch.are_adjacent(from, ps) {
        return Err(format!("s{from} is not next to port s{ps}"));
    }
    if sh.at[ps].is_some() {
        return Err(format!("source port s{ps} is occupied"));
    }
    if to != pd {
        return Err(format!("s{to} is not the far port s{pd} of link {link}"));
    }
    if sh.at[to].is_some() {
        return Err(format!("landing port s{to} is occupied"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::{build_grid_arch, GridFamily};

    #[test]
    fn empty_program_on_empty_circuit() {
        let a = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
        let l = Layout::new(&a, vec![]).unwrap();
        let r = validate(&RoutedProgram::default(), &a, &[], 0, &l, &l);
        assert!(r.is_ok());
        assert_eq!(r.to_json(), "[]");
    }

    #[test]
    fn moved_gate_slot_is_one_adjacency_violation() {
        let a = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
        let gates = vec![Gate::two("cx", 0, 1), Gate::two("cx", 1, 0)];
        let l = Layout::new(&a, vec![0, 2]).unwrap();
        let mut after = l.clone();
        after.apply_swap(&a, 1, 2).unwrap();
        let good = RoutedProgram::from_ops(vec![
            RoutedOp::Swap { a: 2, b: 1 },
            RoutedOp::Gate2 { gate: 0, a: 0, b: 1 },
            RoutedOp::Gate2 { gate: 1, a: 1, b: 0 },
        ]);
        assert!(validate(&good, &a, &gates, 2, &l, &after).is_ok());
        let mut bad = good.clone();
        bad.ops[1] = RoutedOp::Gate2 { gate: 0, a: 0, b: 5 };
        let r = validate(&bad, &a, &gates, 2, &l, &after);
        assert_eq!(r.violations.len(), 1);
        assert_eq!((r.violations[0].op_index, r.violations[0].kind), (1, ViolationKind::Adjacency));
    }

    #[test]
    fn reordered_wire_is_reported() {
        let a = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
        let gates = vec![Gate::one("h", 0), Gate::two("cx", 0, 1)];
        let l = Layout::new(&a, vec![0, 1]).unwrap();
        let p = RoutedProgram::from_ops(vec![
            RoutedOp::Gate2 { gate: 1, a: 0, b: 1 },
            RoutedOp::Gate1 { gate: 0, slot: 0 },
        ]);
        let r = validate(&p, &a, &gates, 2, &l, &l);
        assert!(r.violations.iter().all(|v| v.kind == ViolationKind::WireOrder));
        assert_eq!(r.violations.len(), 2);
    }

    #[test]
    fn metrics_cost() {
        let p = RoutedProgram::from_ops(
            (0..14).map(|_| RoutedOp::Swap { a: 0, b: 1 }).chain([RoutedOp::Teleport { qubit: 0, link: 0, from: 0, to: 1 }]).collect(),
        );
        let m = compute_metrics(&p, &RouterParams::default(), 0.0);
        assert_eq!((m.epr, m.swaps, m.cost), (1, 14, 52));
    }
}
