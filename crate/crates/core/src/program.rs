//! Routed op stream and its text dump.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::arch::SlotId;
use crate::circuit::{CircuitDag, GateId, Qubit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoutedOp {
    Gate1 { gate: GateId, slot: SlotId },
    /// Slots in operand order.
    Gate2 { gate: GateId, a: SlotId, b: SlotId },
    Swap { a: SlotId, b: SlotId },
    /// `qubit` moves from the staging slot `from` to the landing port `to`
    /// consuming one EPR pair on link `link`.
    Teleport { qubit: Qubit, link: usize, from: SlotId, to: SlotId },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedProgram {
    pub ops: Vec<RoutedOp>,
    pub epr: usize,
    pub swaps: usize,
    pub rollbacks: usize,
    pub relief_moves: usize,
}

impl RoutedProgram {
    pub fn from_ops(ops: Vec<RoutedOp>) -> Self {
        let mut p = RoutedProgram { ops, ..Default::default() };
        p.recount();
        p
    }

    pub fn recount(&mut self) {
        self.epr = self.ops.iter().filter(|o| matches!(o, RoutedOp::Teleport { .. })).count();
        self.swaps = self.ops.iter().filter(|o| matches!(o, RoutedOp::Swap { .. })).count();
    }

    /// SWAPs plus teleports.
    pub fn inserted_ops(&self) -> usize {
        self.epr + self.swaps
    }

    /// `G1 <label> s<slot>`, `G2 <label> s<a> s<b>`, `SW s<u> s<v>`,
    /// `TP q<logical> s<from>->s<to> link<idx>`, one per line.
    pub fn to_text(&self, dag: &CircuitDag) -> String {
        let mut out = String::new();
        for op in &self.ops {
            match *op {
                RoutedOp::Gate1 { gate, slot } => writeln!(out, "G1 {} s{slot}", dag.gate(gate).label),
                RoutedOp::Gate2 { gate, a, b } => writeln!(out, "G2 {} s{a} s{b}", dag.gate(gate).label),
                RoutedOp::Swap { a, b } => writeln!(out, "SW s{a} s{b}"),
                RoutedOp::Teleport { qubit, link, from, to } => {
                    writeln!(out, "TP q{qubit} s{from}->s{to} link{link}")
                }
            }
            .unwrap();
        }
        out
    }
}
