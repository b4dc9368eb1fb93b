//! Gate lists and their per-wire dependency DAG.

mod generate;
mod qasm;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use generate::{gen_ghz, gen_graphstate, gen_qft, gen_random, CircuitFamily};
pub use qasm::{parse_qasm, parse_dump, to_dump, to_qasm};

use crate::error::CircuitError;

pub type GateId = usize;
pub type Qubit = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Operands {
    One(Qubit),
    Two(Qubit, Qubit),
}

impl Operands {
    pub fn qubits(&self) -> impl Iterator<Item = Qubit> {
        let (a, b) = match *self {
            Operands::One(a) => (a, None),
            Operands::Two(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Operands::Two(..))
    }

    pub fn contains(&self, q: Qubit) -> bool {
        match *self {
            Operands::One(a) => a == q,
            Operands::Two(a, b) => a == q || b == q,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    /// Opaque name, parameters included (e.g. `rz(0.5)`).
    pub label: String,
    pub operands: Operands,
}

impl Gate {
    pub fn one(label: impl Into<String>, q: Qubit) -> Self {
        Gate { label: label.into(), operands: Operands::One(q) }
    }

    pub fn two(label: impl Into<String>, a: Qubit, b: Qubit) -> Self {
        Gate { label: label.into(), operands: Operands::Two(a, b) }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.operands {
            Operands::One(a) => write!(f, "{} q{a}", self.label),
            Operands::Two(a, b) => write!(f, "{} q{a} q{b}", self.label),
        }
    }
}

/// Immutable dependency structure. Edge rule: every gate points to the next
/// gate on each of its wires. Mutable execution state lives in [`DagState`].
#[derive(Clone, Debug)]
pub struct CircuitDag {
    gates: Vec<Gate>,
    n_logical: usize,
    /// succ[g][i]: next gate on the wire of operand i.
    succ: Vec<[Option<GateId>; 2]>,
    pred: Vec<[Option<GateId>; 2]>,
    in_degree: Vec<u8>,
    /// Longest-path layer of each gate, counting from 0.
    layer: Vec<u32>,
    /// Gate ids acting on each wire, program order.
    wires: Vec<Vec<GateId>>,
}

impl CircuitDag {
    pub fn new(gates: Vec<Gate>, n_logical: usize) -> Result<Self, CircuitError> {
        let n = gates.len();
        let mut last: Vec<Option<GateId>> = vec![None; n_logical];
        let mut succ = vec![[None; 2]; n];
        let mut pred = vec![[None; 2]; n];
        let mut in_degree = vec![0u8; n];
        let mut layer = vec![0u32; n];
        let mut wires = vec![Vec::new(); n_logical];
        for (g, gate) in gates.iter().enumerate() {
            if let Operands::Two(a, b) = gate.operands {
                if a == b {
                    return Err(CircuitError::RepeatedOperand(g));
                }
            }
            for (i, q) in gate.operands.qubits().enumerate() {
                if q >= n_logical {
                    return Err(CircuitError::QubitOutOfRange { gate: g, qubit: q, width: n_logical });
                }
                if let Some(p) = last[q] {
                    let slot = gates[p].operands.qubits().position(|x| x == q).unwrap();
                    succ[p][slot] = Some(g);
                    pred[g][i] = Some(p);
                    in_degree[g] += 1;
                    layer[g] = layer[g].max(layer[p] + 1);
                }
                last[q] = Some(g);
                wires[q].push(g);
            }
        }
        Ok(CircuitDag { gates, n_logical, succ, pred, in_degree, layer, wires })
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, g: GateId) -> &Gate {
        &self.gates[g]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn n_logical(&self) -> usize {
        self.n_logical
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.operands.is_two()).count()
    }

    /// Distinct successors of `g` (a gate sharing both wires appears once).
    pub fn successors(&self, g: GateId) -> impl Iterator<Item = GateId> + '_ {
        let [a, b] = self.succ[g];
        a.into_iter().chain(b.filter(|&x| Some(x) != a))
    }

    /// Successor edges of `g`, one per wire (a shared successor appears twice).
    pub fn successor_edges(&self, g: GateId) -> impl Iterator<Item = GateId> + '_ {
        self.succ[g].into_iter().flatten()
    }

    pub fn predecessor_edges(&self, g: GateId) -> impl Iterator<Item = GateId> + '_ {
        self.pred[g].into_iter().flatten()
    }

    /// Number of incoming wire edges.
    pub fn in_degree(&self, g: GateId) -> u8 {
        self.in_degree[g]
    }

    /// Longest-path layer index (0 for gates with no predecessors).
    pub fn layer(&self, g: GateId) -> u32 {
        self.layer[g]
    }

    /// Longest path through the DAG, counted in gates.
    pub fn depth(&self) -> usize {
        self.layer.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn wire(&self, q: Qubit) -> &[GateId] {
        &self.wires[q]
    }

    /// All wire edges `(from, to)`, one per shared wire.
    pub fn edges(&self) -> Vec<(GateId, GateId)> {
        (0..self.len())
            .flat_map(|g| self.successor_edges(g).map(move |s| (g, s)))
            .collect()
    }

    /// Gates with no predecessors.
    pub fn initial_front(&self) -> Vec<GateId> {
        (0..self.len()).filter(|&g| self.in_degree[g] == 0).collect()
    }

    /// The same gates in reverse program order.
    pub fn reversed(&self) -> CircuitDag {
        let gates = self.gates.iter().rev().cloned().collect();
        CircuitDag::new(gates, self.n_logical).expect("reversal preserves validity")
    }

    pub fn new_state(&self) -> DagState {
        DagState::new(self)
    }
}

pub fn build_dag(gates: Vec<Gate>, n_logical: usize) -> Result<CircuitDag, CircuitError> {
    CircuitDag::new(gates, n_logical)
}

pub fn reverse_dag(dag: &CircuitDag) -> CircuitDag {
    dag.reversed()
}

/// Execution progress through a [`CircuitDag`]: remaining in-degrees,
/// executed flags and the ordered front layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DagState {
    remaining_in_degree: Vec<u8>,
    executed: Vec<bool>,
    /// Sorted by gate id.
    front: Vec<GateId>,
    remaining: usize,
    /// Per wire, index into `CircuitDag::wire` of the next pending gate.
    wire_cursor: Vec<usize>,
}

impl DagState {
    pub fn new(dag: &CircuitDag) -> Self {
        DagState {
            remaining_in_degree: dag.in_degree.clone(),
            executed: vec![false; dag.len()],
            front: dag.initial_front(),
            remaining: dag.len(),
            wire_cursor: vec![0; dag.n_logical],
        }
    }

    pub fn front(&self) -> &[GateId] {
        &self.front
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_done(&self) -> bool {
        self.remaining == 0
    }

    pub fn is_executed(&self, g: GateId) -> bool {
        self.executed[g]
    }

    pub fn remaining_in_degree(&self, g: GateId) -> u8 {
        self.remaining_in_degree[g]
    }

    /// Next unexecuted gate on wire `q`.
    pub fn next_on_wire(&self, dag: &CircuitDag, q: Qubit) -> Option<GateId> {
        dag.wires[q].get(self.wire_cursor[q]).copied()
    }

    /// Mark a front gate executed. Returns the gates that joined the front.
    pub fn execute(&mut self, dag: &CircuitDag, g: GateId) -> Vec<GateId> {
        let pos = self.front.binary_search(&g).expect("executed gate must be in the front");
        self.front.remove(pos);
        self.executed[g] = true;
        self.remaining -= 1;
        for q in dag.gates[g].operands.qubits() {
            self.wire_cursor[q] += 1;
        }
        let mut released = Vec::new();
        for s in dag.successor_edges(g) {
            self.remaining_in_degree[s] -= 1;
            if self.remaining_in_degree[s] == 0 {
                released.push(s);
            }
        }
        for &s in &released {
            let at = self.front.binary_search(&s).unwrap_err();
            self.front.insert(at, s);
        }
        released
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> CircuitDag {
        CircuitDag::new(
            vec![Gate::two("cx", 0, 1), Gate::one("h", 2), Gate::two("cx", 1, 2)],
            3,
        )
        .unwrap()
    }

    #[test]
    fn three_gate_example() {
        let d = fig1();
        assert_eq!(d.initial_front(), vec![0, 1]);
        assert_eq!(d.depth(), 2);
        assert_eq!(d.in_degree(2), 2);
        let mut s = d.new_state();
        assert!(s.execute(&d, 0).is_empty());
        assert_eq!(s.execute(&d, 1), vec![2]);
        assert_eq!(s.front(), &[2]);
    }

    #[test]
    fn empty_circuit() {
        let d = CircuitDag::new(vec![], 4).unwrap();
        assert!(d.initial_front().is_empty());
        assert_eq!(d.depth(), 0);
        assert!(d.new_state().is_done());
    }

    #[test]
    fn reversed_front() {
        let r = fig1().reversed();
        assert_eq!(r.initial_front(), vec![0]);
        assert_eq!(r.gate(0), &Gate::two("cx", 1, 2));
        assert_eq!(r.reversed().gates(), fig1().gates());
    }

    #[test]
    fn shared_pair_counts_two_edges() {
        let d = CircuitDag::new(vec![Gate::two("cx", 0, 1), Gate::two("cx", 1, 0)], 2).unwrap();
        assert_eq!(d.in_degree(1), 2);
        assert_eq!(d.successors(0).collect::<Vec<_>>(), vec![1]);
        let mut s = d.new_state();
        assert_eq!(s.execute(&d, 0), vec![1]);
    }

    #[test]
    fn rejects_bad_operands() {
        assert_eq!(
            CircuitDag::new(vec![Gate::one("h", 3)], 2).unwrap_err(),
            CircuitError::QubitOutOfRange { gate: 0, qubit: 3, width: 2 }
        );
        assert_eq!(
            CircuitDag::new(vec![Gate::two("cx", 1, 1)], 2).unwrap_err(),
            CircuitError::RepeatedOperand(0)
        );
    }

    #[test]
    fn wire_cursor_tracks_next_gate() {
        let d = fig1();
        let mut s = d.new_state();
        assert_eq!(s.next_on_wire(&d, 1), Some(0));
        s.execute(&d, 0);
        assert_eq!(s.next_on_wire(&d, 1), Some(2));
        assert_eq!(s.next_on_wire(&d, 0), None);
    }
}
