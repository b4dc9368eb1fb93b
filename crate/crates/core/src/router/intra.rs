//! Intra-core SWAP selection.

use super::{ExtendedSetEntry, Router};
use crate::arch::{CoreId, SlotId};
use crate::circuit::{GateId, Operands};

impl Router<'_> {
    fn gate_pair(&self, g: GateId) -> (SlotId, SlotId) {
        match self.dag.gate(g).operands {
            Operands::Two(a, b) => (self.layout.phys(a), self.layout.phys(b)),
            Operands::One(_) => unreachable!("scored gates are two-qubit"),
        }
    }

    /// `ΔF/|F_c| + w_e·ΔẼ/|E_c|` for swapping `u` and `v`, with gains
    /// measured on the intra-core distance table. Higher is better.
    pub fn score_intra_swap(&self, front_c: &[GateId], ext: &[ExtendedSetEntry], u: SlotId, v: SlotId) -> f64 {
        let moved = |s: SlotId| {
            if s == u {
                v
            } else if s == v {
                u
            } else {
                s
            }
        };
        let gain = |g: GateId| {
            let (a, b) = self.gate_pair(g);
            self.tables.d_intra(a, b) as f64 - self.tables.d_intra(moved(a), moved(b)) as f64
        };
        let front: f64 = front_c.iter().map(|&g| gain(g)).sum();
        let mut score = if front_c.is_empty() { 0.0 } else { front / front_c.len() as f64 };
        let w_e = self.params.eff_w_e();
        if !ext.is_empty() && w_e != 0.0 {
            let look: f64 = ext.iter().map(|e| e.weight * gain(e.gate)).sum();
            score += w_e * look / ext.len() as f64;
        }
        score
    }

    /// Candidate swaps of one core: its edges, in declaration order, that
    /// touch a qubit of the front or lookahead gates.
    pub fn intra_swap_candidates(&self, core: CoreId, front_c: &[GateId], ext: &[ExtendedSetEntry]) -> Vec<(SlotId, SlotId)> {
        let mut relevant = vec![false; self.arch.num_slots()];
        for g in front_c.iter().copied().chain(ext.iter().map(|e| e.gate)) {
            let (a, b) = self.gate_pair(g);
            relevant[a] = true;
            relevant[b] = true;
        }
        self.arch.cores()[core]
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| relevant[u] || relevant[v])
            .collect()
    }

    /// Best swap over all cores with same-core front gates: highest score,
    /// ties by core index then edge order.
    pub fn best_intra_swap(&mut self, f_intra: &[GateId]) -> Option<(SlotId, SlotId, f64)> {
        let mut by_core: Vec<(CoreId, Vec<GateId>)> = Vec::new();
        for &g in f_intra {
            let (a, _) = self.gate_pair(g);
            let c = self.arch.core_of(a);
            match by_core.iter_mut().find(|(core, _)| *core == c) {
                Some((_, gs)) => gs.push(g),
                None => by_core.push((c, vec![g])),
            }
        }
        by_core.sort_by_key(|(c, _)| *c);
        let mut best: Option<(SlotId, SlotId, f64)> = None;
        let mut scored = 0;
        for (core, front_c) in &by_core {
            let ext = self.intra_extended_set(*core, front_c);
            for (u, v) in self.intra_swap_candidates(*core, front_c, &ext) {
                let s = self.score_intra_swap(front_c, &ext, u, v);
                scored += 1;
                if best.is_none_or(|(_, _, b)| s > b) {
                    best = Some((u, v, s));
                }
            }
        }
        self.note_scored(scored);
        best
    }

    pub(super) fn intra_move(&mut self, f_intra: &[GateId]) -> bool {
        match self.best_intra_swap(f_intra) {
            Some((u, v, _)) => {
                self.emit_swap(u, v);
                self.stats.swap_moves += 1;
                true
            }
            None => false,
        }
    }
}
