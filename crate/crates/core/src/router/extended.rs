//! Lookahead windows beyond the front layer.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Router;
use crate::arch::CoreId;
use crate::circuit::{GateId, Operands};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtendedSetEntry {
    pub gate: GateId,
    pub dep: u32,
    /// `gamma^dep`
    pub weight: f64,
}

impl Router<'_> {
    fn entry(&self, gate: GateId, dep: u32) -> ExtendedSetEntry {
        ExtendedSetEntry { gate, dep, weight: self.params.gamma.powi(dep as i32) }
    }

    /// Per-core lookahead: 2Q gates reachable from the core's front gates
    /// in topological order whose wires have stayed inside `core`. A gate
    /// that would leave the core taints its wires, so nothing behind it on
    /// those wires is ever admitted. `dep` counts 2Q gates on the longest
    /// wire path from the front (front = 0).
    pub fn intra_extended_set(&self, core: CoreId, front_c: &[GateId]) -> Vec<ExtendedSetEntry> {
        let cap = self.params.ext_cap;
        let mut out = Vec::new();
        if cap == 0 {
            return out;
        }
        let mut pending: HashMap<GateId, u8> = HashMap::new();
        let mut dep: HashMap<GateId, u32> = front_c.iter().map(|&g| (g, 0)).collect();
        let mut queue: VecDeque<GateId> = front_c.iter().copied().collect();
        while let Some(g) = queue.pop_front() {
            let dg = dep[&g];
            for s in self.dag.successor_edges(g) {
                let two = self.dag.gate(s).operands.is_two();
                let d = dep.entry(s).or_insert(0);
                *d = (*d).max(dg + two as u32);
                let left = pending.entry(s).or_insert_with(|| self.state.remaining_in_degree(s));
                *left -= 1;
                if *left > 0 {
                    continue;
                }
                match self.dag.gate(s).operands {
                    Operands::Two(a, b) => {
                        if self.core_of_qubit(a) != core || self.core_of_qubit(b) != core {
                            continue;
                        }
                        out.push(self.entry(s, dep[&s]));
                        if out.len() == cap {
                            return out;
                        }
                        queue.push_back(s);
                    }
                    Operands::One(_) => queue.push_back(s),
                }
            }
        }
        out
    }

    /// Global lookahead for teleport scoring, cached until a gate executes.
    pub fn inter_extended_set(&mut self) -> Vec<ExtendedSetEntry> {
        if let Some(cached) = &self.ext_cache {
            return cached.clone();
        }
        let set = if self.params.topo_extended_set {
            self.topo_extended_set()
        } else {
            self.bfs_extended_set()
        };
        self.ext_cache = Some(set.clone());
        set
    }

    /// Peel zero-in-degree 2Q gates layer by layer (1Q gates are peeled
    /// transparently). Within a layer, gates sharing a qubit with the front
    /// come first, then by id. Truncation happens at a layer boundary unless
    /// the first layer alone exceeds the capacity.
    pub fn bfs_extended_set(&self) -> Vec<ExtendedSetEntry> {
        let cap = self.params.ext_cap;
        let mut out = Vec::new();
        if cap == 0 {
            return out;
        }
        let mut on_front = vec![false; self.dag.n_logical()];
        for &g in self.state.front() {
            for q in self.dag.gate(g).operands.qubits() {
                on_front[q] = true;
            }
        }
        let mut pending: HashMap<GateId, u8> = HashMap::new();
        let mut current: Vec<GateId> = self.state.front().to_vec();
        let mut k = 0;
        loop {
            k += 1;
            let mut layer = Vec::new();
            let mut stack = current;
            while let Some(g) = stack.pop() {
                for s in self.dag.successor_edges(g) {
                    let left = pending.entry(s).or_insert_with(|| self.state.remaining_in_degree(s));
                    *left -= 1;
                    if *left == 0 {
                        if self.dag.gate(s).operands.is_two() {
                            layer.push(s);
                        } else {
                            stack.push(s);
                        }
                    }
                }
            }
            if layer.is_empty() {
                return out;
            }
            layer.sort_by_key(|&g| (!self.dag.gate(g).operands.qubits().any(|q| on_front[q]), g));
            if out.len() + layer.len() > cap {
                if out.is_empty() {
                    out.extend(layer[..cap].iter().map(|&g| self.entry(g, k)));
                }
                return out;
            }
            out.extend(layer.iter().map(|&g| self.entry(g, k)));
            if out.len() == cap {
                return out;
            }
            current = layer;
        }
    }

    /// Plain topological fill (lowest ready gate id first) beyond the
    /// front; `dep` is the longest 2Q wire path from the front.
    pub fn topo_extended_set(&self) -> Vec<ExtendedSetEntry> {
        let cap = self.params.ext_cap;
        let mut out = Vec::new();
        if cap == 0 {
            return out;
        }
        let mut pending: HashMap<GateId, u8> = HashMap::new();
        let mut dep: HashMap<GateId, u32> = self.state.front().iter().map(|&g| (g, 0)).collect();
        let mut heap: BinaryHeap<Reverse<GateId>> = self.state.front().iter().map(|&g| Reverse(g)).collect();
        while let Some(Reverse(g)) = heap.pop() {
            let in_front = self.state.front().binary_search(&g).is_ok();
            if !in_front && self.dag.gate(g).operands.is_two() {
                out.push(self.entry(g, dep[&g]));
                if out.len() == cap {
                    return out;
                }
            }
            let dg = dep[&g];
            for s in self.dag.successor_edges(g) {
                let two = self.dag.gate(s).operands.is_two();
                let d = dep.entry(s).or_insert(0);
                *d = (*d).max(dg + two as u32);
                let left = pending.entry(s).or_insert_with(|| self.state.remaining_in_degree(s));
                *left -= 1;
                if *left == 0 {
                    heap.push(Reverse(s));
                }
            }
        }
        out
    }
}
