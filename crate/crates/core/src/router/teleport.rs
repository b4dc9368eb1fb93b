//! Inter-core teleport candidates: enumeration, scoring, congestion relief
//! and execution plans.

use std::cmp::Reverse;

use serde::{Deserialize, Serialize};

use super::paths::{evict_distance, intra_path, path_to_free};
use super::Router;
use crate::arch::{CoreId, SlotId};
use crate::circuit::{GateId, Operands, Qubit};
use crate::layout::Layout;
use crate::program::RoutedOp;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    GateDriven,
    Relief,
}

/// One `(qubit, next core, link)` triple with its score breakdown.
/// `d_prep == None` marks an infeasible candidate (infinite score).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TeleportCandidate {
    pub kind: CandidateKind,
    pub gate: Option<GateId>,
    pub qubit: Qubit,
    pub src_core: CoreId,
    pub next_core: CoreId,
    pub link: usize,
    pub source_port: SlotId,
    pub landing_port: SlotId,
    pub staging_slot: SlotId,
    pub d_prep: Option<u32>,
    /// Free slots of the landing core before the move.
    pub f_dst: usize,
    pub c_cap: f64,
    pub g_hop: f64,
    pub delta_f: f64,
    pub delta_e_weighted: f64,
    pub relief_bonus: f64,
    pub score: f64,
}

impl TeleportCandidate {
    pub fn is_feasible(&self) -> bool {
        self.score.is_finite()
    }
}

/// Ops and resulting layout of a teleport move.
#[derive(Clone, Debug)]
pub(super) struct Plan {
    pub ops: Vec<RoutedOp>,
    pub layout: Layout,
}

impl Router<'_> {
    fn partner(&self, g: GateId, q: Qubit) -> Qubit {
        match self.dag.gate(g).operands {
            Operands::Two(a, b) if a == q => b,
            Operands::Two(a, _) => a,
            Operands::One(a) => a,
        }
    }

    /// Score one `(q, link)` move out of `q`'s core. `gate` is the front
    /// gate driving it, if any; `bonus` is the relief bonus.
    pub(super) fn build_candidate(
        &self,
        kind: CandidateKind,
        gate: Option<GateId>,
        q: Qubit,
        link: usize,
        ext: &[super::ExtendedSetEntry],
        bonus: f64,
    ) -> TeleportCandidate {
        let p1 = self.layout.phys(q);
        let src_core = self.arch.core_of(p1);
        let l = self.arch.links()[link];
        let (source_port, landing_port) = l.oriented(src_core).expect("link touches the source core");
        let next_core = l.other_core(src_core);
        let staging_slot = self
            .arch
            .neighbors(source_port)
            .iter()
            .copied()
            .min_by_key(|&n| (self.tables.d_intra(p1, n), n))
            .expect("ports have an intra-core neighbour");

        let evict = |port: SlotId| {
            if self.layout.logical(port) == Some(q) {
                Some(0)
            } else {
                evict_distance(self.arch, self.tables, &self.layout, port)
            }
        };
        let d_prep = match (evict(source_port), evict(landing_port)) {
            (Some(es), Some(ed)) => Some(self.tables.d_intra(p1, staging_slot) + es + ed),
            _ => None,
        };
        let f_dst = self.layout.free_count(next_core);
        let c_cap = self.params.eff_c_pen() * (self.params.tau as f64 - f_dst as f64).max(0.0);

        let (g_hop, delta_f) = match (kind, gate) {
            (CandidateKind::GateDriven, Some(g)) => {
                let p2 = self.layout.phys(self.partner(g, q));
                let tgt = self.arch.core_of(p2);
                let hops = self.tables.core_hops(src_core, tgt) as f64 - self.tables.core_hops(next_core, tgt) as f64;
                let df = self.tables.d_phys(p1, p2) as f64 - self.tables.d_phys(landing_port, p2) as f64;
                (self.params.eff_w_h() * hops, df)
            }
            _ => (0.0, 0.0),
        };
        let delta_e_weighted: f64 = ext
            .iter()
            .filter(|e| self.dag.gate(e.gate).operands.is_two() && self.dag.gate(e.gate).operands.contains(q))
            .map(|e| {
                let p2 = self.layout.phys(self.partner(e.gate, q));
                e.weight * (self.tables.d_phys(p1, p2) as f64 - self.tables.d_phys(landing_port, p2) as f64)
            })
            .sum();

        // Landing must leave the core a free slot, or it could never send or
        // receive again.
        let score = match d_prep {
            Some(d) if f_dst >= 2 => {
                d as f64 + c_cap - g_hop - delta_f - self.params.eff_w_e() * delta_e_weighted - bonus
            }
            _ => f64::INFINITY,
        };
        TeleportCandidate {
            kind,
            gate,
            qubit: q,
            src_core,
            next_core,
            link,
            source_port,
            landing_port,
            staging_slot,
            d_prep,
            f_dst,
            c_cap,
            g_hop,
            delta_f,
            delta_e_weighted,
            relief_bonus: bonus,
            score,
        }
    }

    /// Gate-driven candidates in enumeration order: front gates by id, first
    /// operand before second, neighbour cores ascending, links ascending.
    pub fn teleport_candidates(&mut self, f_inter: &[GateId]) -> Vec<TeleportCandidate> {
        let ext = self.inter_extended_set();
        let mut out = Vec::new();
        for &g in f_inter {
            let Operands::Two(a, b) = self.dag.gate(g).operands else { continue };
            for q in [a, b] {
                let src = self.core_of_qubit(q);
                for n in self.arch.neighbor_cores(src) {
                    for link in self.arch.links_between(src, n) {
                        out.push(self.build_candidate(CandidateKind::GateDriven, Some(g), q, link, &ext, 0.0));
                    }
                }
            }
        }
        out
    }

    /// Per-core count of upcoming cross-core gates (front and extended set)
    /// whose canonical core path passes through the core.
    pub fn demand_vector(&mut self) -> Vec<u32> {
        let ext = self.inter_extended_set();
        let mut d = vec![0; self.arch.num_cores()];
        let gates = self.state.front().iter().copied().chain(ext.iter().map(|e| e.gate)).collect::<Vec<_>>();
        for g in gates {
            let Operands::Two(a, b) = self.dag.gate(g).operands else { continue };
            let (ca, cb) = (self.core_of_qubit(a), self.core_of_qubit(b));
            if ca != cb {
                for c in self.tables.core_path(ca, cb) {
                    d[c] += 1;
                }
            }
        }
        d
    }

    /// Cores with `d ≥ θ_d` and `free ≤ θ_f`.
    pub fn flagged_cores(&mut self) -> Vec<bool> {
        let d = self.demand_vector();
        (0..self.arch.num_cores())
            .map(|c| d[c] >= self.params.theta_d && self.layout.free_count(c) <= self.params.theta_f as usize)
            .collect()
    }

    /// Up to `k` residents of `core`, most idle first, skipping `exclude`.
    /// Idleness is the DAG layer of the qubit's next pending gate; a qubit
    /// with nothing left is maximally idle. Ties go to the lower index.
    pub fn idle_residents(&self, core: CoreId, exclude: &[bool], k: usize) -> Vec<Qubit> {
        let mut residents: Vec<(Reverse<u32>, Qubit)> = self
            .arch
            .core_slots(core)
            .iter()
            .filter_map(|&s| self.layout.logical(s))
            .filter(|&q| !exclude[q])
            .map(|q| {
                let idle = self.state.next_on_wire(self.dag, q).map_or(u32::MAX, |g| self.dag.layer(g));
                (Reverse(idle), q)
            })
            .collect();
        residents.sort_unstable();
        residents.into_iter().take(k).map(|(_, q)| q).collect()
    }

    fn front_qubits(&self) -> Vec<bool> {
        let mut on_front = vec![false; self.dag.n_logical()];
        for &g in self.state.front() {
            for q in self.dag.gate(g).operands.qubits() {
                on_front[q] = true;
            }
        }
        on_front
    }

    /// Relief moves out of flagged cores into neighbours that are not
    /// flagged and stay above `θ_f` free slots after the move.
    pub fn relief_candidates(&mut self) -> Vec<TeleportCandidate> {
        if self.params.disable_relief {
            return Vec::new();
        }
        let d = self.demand_vector();
        let flagged = self.flagged_cores();
        if !flagged.iter().any(|&f| f) {
            return Vec::new();
        }
        let ext = self.inter_extended_set();
        let on_front = self.front_qubits();
        // The landing core must stay above the free-slot threshold, or the
        // move would flag it and invite the same move straight back.
        let theta_f = self.params.theta_f as usize;
        let relief_target = |n: CoreId| !flagged[n] && self.layout.free_count(n) > theta_f + 1;
        let mut out = Vec::new();
        for c in (0..self.arch.num_cores()).filter(|&c| flagged[c]) {
            let bonus = self.params.b_r * (d[c] as f64 - self.layout.free_count(c) as f64);
            for v in self.idle_residents(c, &on_front, 3) {
                for n in self.arch.neighbor_cores(c).into_iter().filter(|&n| relief_target(n)) {
                    for link in self.arch.links_between(c, n) {
                        out.push(self.build_candidate(CandidateKind::Relief, None, v, link, &ext, bonus));
                    }
                }
            }
        }
        out
    }

    /// Stage, evict, teleport, on a scratch layout. `None` if some step has
    /// no legal path.
    pub(super) fn plan_teleport(&self, cand: &TeleportCandidate) -> Option<Plan> {
        let mut layout = self.layout.clone();
        let mut ops = Vec::new();
        let (ps, pd, ns) = (cand.source_port, cand.landing_port, cand.staging_slot);

        let stage = intra_path(self.arch, layout.phys(cand.qubit), ns, &[ps])?;
        for w in stage.windows(2) {
            swap(self.arch, &mut layout, &mut ops, w[0], w[1]);
        }
        if !layout.is_free(ps) {
            let path = path_to_free(self.arch, &layout, ps, &[ns])?;
            bubble(self.arch, &mut layout, &mut ops, &path);
        }
        if !layout.is_free(pd) {
            let path = path_to_free(self.arch, &layout, pd, &[])?;
            bubble(self.arch, &mut layout, &mut ops, &path);
        }
        layout.apply_teleport(self.arch, cand.qubit, pd).ok()?;
        ops.push(RoutedOp::Teleport { qubit: cand.qubit, link: cand.link, from: ns, to: pd });
        Some(Plan { ops, layout })
    }

    pub(super) fn apply_plan(&mut self, plan: Plan) {
        self.ops.extend(plan.ops);
        self.layout = plan.layout;
        self.stats.teleport_moves += 1;
    }

    /// Feasible candidates in selection order: lowest score, gate-driven
    /// before relief, then enumeration order.
    pub fn ranked_candidates(&mut self, f_inter: &[GateId]) -> Vec<TeleportCandidate> {
        let mut pool = self.teleport_candidates(f_inter);
        let any_flagged = self.flagged_cores().contains(&true);
        if any_flagged {
            self.stats.flagged_iterations += 1;
        }
        // Relief only enters the pool when no gate-driven move gains ground.
        if any_flagged && !pool.iter().any(|c| c.score < 0.0) {
            pool.extend(self.relief_candidates());
        }
        self.note_scored(pool.len());
        pool.retain(|c| c.is_feasible());
        pool.sort_by(|a, b| a.score.total_cmp(&b.score));
        pool
    }

    /// The candidate the router would apply: the best-ranked one whose
    /// plan succeeds.
    pub fn best_teleport(&mut self, f_inter: &[GateId]) -> Option<TeleportCandidate> {
        self.ranked_candidates(f_inter)
            .into_iter()
            .find(|c| self.plan_teleport(c).is_some())
    }

    pub(super) fn inter_move(&mut self, f_inter: &[GateId]) -> bool {
        for cand in self.ranked_candidates(f_inter) {
            if let Some(plan) = self.plan_teleport(&cand) {
                self.apply_plan(plan);
                if cand.kind == CandidateKind::Relief {
                    self.relief_moves += 1;
                }
                return true;
            }
        }
        false
    }
}

fn swap(arch: &crate::arch::Architecture, layout: &mut Layout, ops: &mut Vec<RoutedOp>, a: SlotId, b: SlotId) {
    if layout.is_free(a) && layout.is_free(b) {
        return;
    }
    layout.apply_swap(arch, a, b).expect("path steps are intra-core edges");
    ops.push(RoutedOp::Swap { a, b });
}

/// Shift every occupant along `path` one step toward its free end, which
/// leaves `path[0]` empty.
fn bubble(arch: &crate::arch::Architecture, layout: &mut Layout, ops: &mut Vec<RoutedOp>, path: &[SlotId]) {
    for k in (1..path.len()).rev() {
        swap(arch, layout, ops, path[k - 1], path[k]);
    }
}
