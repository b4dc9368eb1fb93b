//! Forced progress after a rollback: push the longest-stalled front gate
//! through along shortest paths, ignoring the heuristic scores.

use super::paths::intra_path;
use super::teleport::CandidateKind;
use super::Router;
use crate::arch::CoreId;
use crate::circuit::{GateId, Operands};

impl Router<'_> {
    /// Front gate that has waited longest, ties to the lowest id.
    pub fn most_stuck_gate(&self) -> Option<GateId> {
        self.state
            .front()
            .iter()
            .copied()
            .filter(|&g| self.dag.gate(g).operands.is_two())
            .min_by_key(|&g| (self.front_since[g], g))
    }

    pub(super) fn force_progress(&mut self) {
        let Some(g) = self.most_stuck_gate() else { return };
        let Operands::Two(a, b) = self.dag.gate(g).operands else { return };
        for _ in 0..=self.arch.num_cores() {
            if self.core_of_qubit(a) == self.core_of_qubit(b) {
                break;
            }
            if !self.forced_hop(g, a, b) {
                return;
            }
        }
        if self.core_of_qubit(a) != self.core_of_qubit(b) {
            return;
        }
        if let Some(path) = intra_path(self.arch, self.layout.phys(a), self.layout.phys(b), &[]) {
            for i in 0..path.len().saturating_sub(2) {
                self.emit_swap(path[i], path[i + 1]);
            }
        }
    }

    /// Move one endpoint of `g` one core closer to the other. The endpoint
    /// and link with the cheapest staging go first; if nothing fits, room is
    /// made in the blocked landing core and the hop retried once.
    fn forced_hop(&mut self, g: GateId, a: usize, b: usize) -> bool {
        let mut options = Vec::new();
        for (x, y) in [(a, b), (b, a)] {
            let (cx, cy) = (self.core_of_qubit(x), self.core_of_qubit(y));
            let next = self.tables.core_next_hop(cx, cy);
            for link in self.arch.links_between(cx, next).collect::<Vec<_>>() {
                let cand = self.build_candidate(CandidateKind::GateDriven, Some(g), x, link, &[], 0.0);
                options.push((cand.d_prep.unwrap_or(u32::MAX), cand));
            }
        }
        options.sort_by_key(|(d, _)| *d);
        for _attempt in 0..2 {
            for (_, cand) in &options {
                if !cand.is_feasible() {
                    continue;
                }
                if let Some(plan) = self.plan_teleport(cand) {
                    self.apply_plan(plan);
                    return true;
                }
            }
            let Some((_, first)) = options.first() else { return false };
            let blocked = first.next_core;
            if !self.make_room(blocked, &[a, b]) {
                return false;
            }
            for (_, cand) in options.iter_mut() {
                *cand = self.build_candidate(CandidateKind::GateDriven, Some(g), cand.qubit, cand.link, &[], 0.0);
            }
        }
        false
    }

    /// Free a slot in `core` by shifting one idle qubit per hop along the
    /// core path to the nearest core with at least two free slots, starting
    /// at the far end. Qubits in `keep` never move.
    fn make_room(&mut self, core: CoreId, keep: &[usize]) -> bool {
        let Some(path) = self.path_to_spare_core(core) else { return false };
        let mut exclude = vec![false; self.dag.n_logical()];
        for &q in keep {
            exclude[q] = true;
        }
        for i in (0..path.len() - 1).rev() {
            if !self.shift_one(path[i], path[i + 1], &exclude) {
                return false;
            }
        }
        true
    }

    fn path_to_spare_core(&self, core: CoreId) -> Option<Vec<CoreId>> {
        let k = self.arch.num_cores();
        let mut parent = vec![usize::MAX; k];
        parent[core] = core;
        let mut queue = std::collections::VecDeque::from([core]);
        while let Some(c) = queue.pop_front() {
            if c != core && self.layout.free_count(c) >= 2 {
                let mut path = vec![c];
                let mut cur = c;
                while cur != core {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for n in self.arch.neighbor_cores(c) {
                if parent[n] == usize::MAX {
                    parent[n] = c;
                    queue.push_back(n);
                }
            }
        }
        None
    }

    /// Teleport the most idle movable resident of `from` into `to`.
    fn shift_one(&mut self, from: CoreId, to: CoreId, exclude: &[bool]) -> bool {
        let links: Vec<usize> = self.arch.links_between(from, to).collect();
        for v in self.idle_residents(from, exclude, usize::MAX) {
            for &link in &links {
                let cand = self.build_candidate(CandidateKind::Relief, None, v, link, &[], 0.0);
                if !cand.is_feasible() {
                    continue;
                }
                if let Some(plan) = self.plan_teleport(&cand) {
                    self.apply_plan(plan);
                    return true;
                }
            }
        }
        false
    }
}
