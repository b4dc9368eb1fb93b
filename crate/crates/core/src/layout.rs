//! Logical↔physical placement and initial-layout search.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arch::{Architecture, CoreId, DistanceTables, SlotId};
use crate::circuit::{CircuitDag, Qubit};
use crate::error::LayoutError;
use crate::router::{route, RouteStatus, RouterParams};

/// Injective map from logical qubits to slots, with its inverse and
/// per-core free-slot counts kept in sync.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    to_phys: Vec<SlotId>,
    to_logical: Vec<Option<Qubit>>,
    free_count: Vec<usize>,
}

/// One entry of the JSON layout dump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Placement {
    pub logical: Qubit,
    pub core: CoreId,
    pub slot: SlotId,
}

impl Layout {
    /// `to_phys[q]` is the slot of logical qubit `q`.
    pub fn new(arch: &Architecture, to_phys: Vec<SlotId>) -> Result<Self, LayoutError> {
        let mut to_logical = vec![None; arch.num_slots()];
        let mut free_count: Vec<usize> = arch.cores().iter().map(|c| c.slots.len()).collect();
        for (q, &s) in to_phys.iter().enumerate() {
            if s >= arch.num_slots() {
                return Err(LayoutError::NoSuchSlot(s));
            }
            if let Some(other) = to_logical[s] {
                return Err(LayoutError::Collision(other, q, s));
            }
            to_logical[s] = Some(q);
            free_count[arch.core_of(s)] -= 1;
        }
        Ok(Layout { to_phys, to_logical, free_count })
    }

    pub fn n_logical(&self) -> usize {
        self.to_phys.len()
    }

    pub fn num_slots(&self) -> usize {
        self.to_logical.len()
    }

    pub fn phys(&self, q: Qubit) -> SlotId {
        self.to_phys[q]
    }

    pub fn logical(&self, s: SlotId) -> Option<Qubit> {
        self.to_logical[s]
    }

    pub fn is_free(&self, s: SlotId) -> bool {
        self.to_logical[s].is_none()
    }

    pub fn free_count(&self, core: CoreId) -> usize {
        self.free_count[core]
    }

    pub fn placement(&self) -> &[SlotId] {
        &self.to_phys
    }

    /// Exchange the occupants of two slots; either may be empty.
    pub fn apply_swap(&mut self, arch: &Architecture, u: SlotId, v: SlotId) -> Result<(), LayoutError> {
        if u == v {
            return Err(LayoutError::SameSlot(u));
        }
        for s in [u, v] {
            if s >= self.num_slots() {
                return Err(LayoutError::NoSuchSlot(s));
            }
        }
        let (a, b) = (self.to_logical[u], self.to_logical[v]);
        self.to_logical[u] = b;
        self.to_logical[v] = a;
        if let Some(q) = a {
            self.to_phys[q] = v;
        }
        if let Some(q) = b {
            self.to_phys[q] = u;
        }
        let (cu, cv) = (arch.core_of(u), arch.core_of(v));
        if cu != cv && a.is_some() != b.is_some() {
            // One qubit crossed cores with an empty slot moving the other way.
            let (from, to) = if a.is_some() { (cu, cv) } else { (cv, cu) };
            self.free_count[from] += 1;
            self.free_count[to] -= 1;
        }
        Ok(())
    }

    /// Relocate `q` into the empty slot `dst` of another core.
    pub fn apply_teleport(&mut self, arch: &Architecture, q: Qubit, dst: SlotId) -> Result<(), LayoutError> {
        if q >= self.n_logical() {
            return Err(LayoutError::NoSuchQubit(q));
        }
        if dst >= self.num_slots() {
            return Err(LayoutError::NoSuchSlot(dst));
        }
        if self.to_logical[dst].is_some() {
            return Err(LayoutError::Occupied(dst));
        }
        let src = self.to_phys[q];
        let (cs, cd) = (arch.core_of(src), arch.core_of(dst));
        if cs == cd {
            return Err(LayoutError::SameCore(dst));
        }
        self.to_logical[src] = None;
        self.to_logical[dst] = Some(q);
        self.to_phys[q] = dst;
        self.free_count[cs] += 1;
        self.free_count[cd] -= 1;
        Ok(())
    }

    pub fn placements(&self, arch: &Architecture) -> Vec<Placement> {
        self.to_phys
            .iter()
            .enumerate()
            .map(|(logical, &slot)| Placement { logical, core: arch.core_of(slot), slot })
            .collect()
    }

    pub fn to_json(&self, arch: &Architecture) -> String {
        serde_json::to_string_pretty(&self.placements(arch)).expect("layout serialises")
    }

    /// Load a `[{logical, core, slot}]` dump. Entries may come in any order
    /// but must cover logical qubits `0..n` exactly once.
    pub fn from_placements(arch: &Architecture, entries: &[Placement]) -> Result<Self, LayoutError> {
        let n = entries.len();
        let mut to_phys = vec![usize::MAX; n];
        for e in entries {
            if e.logical >= n || to_phys[e.logical] != usize::MAX {
                return Err(LayoutError::NoSuchQubit(e.logical));
            }
            if e.slot >= arch.num_slots() || arch.core_of(e.slot) != e.core {
                return Err(LayoutError::NoSuchSlot(e.slot));
            }
            to_phys[e.logical] = e.slot;
        }
        Layout::new(arch, to_phys)
    }

    /// Map a layout on a sub-device back through its new→old slot map.
    pub fn lift(&self, arch: &Architecture, slot_map: &[SlotId]) -> Result<Self, LayoutError> {
        Layout::new(arch, self.to_phys.iter().map(|&s| slot_map[s]).collect())
    }
}

/// Corner slots (intra-degree 2, not a port) excluded from initial
/// placement. A core keeps its corners when removing them would disconnect
/// it or leave it empty.
pub fn corner_removed_slots(arch: &Architecture) -> Vec<SlotId> {
    let mut removed = Vec::new();
    for core in arch.cores() {
        let corners: Vec<SlotId> = core
            .slots
            .iter()
            .copied()
            .filter(|&s| arch.neighbors(s).len() == 2 && !arch.is_port(s))
            .collect();
        if corners.is_empty() || corners.len() == core.slots.len() {
            continue;
        }
        let kept: Vec<SlotId> = core.slots.iter().copied().filter(|s| !corners.contains(s)).collect();
        if connected_within(arch, &kept) {
            removed.extend(corners);
        }
    }
    removed.sort_unstable();
    removed
}

fn connected_within(arch: &Architecture, slots: &[SlotId]) -> bool {
    let mut seen = vec![slots[0]];
    let mut stack = vec![slots[0]];
    while let Some(s) = stack.pop() {
        for &n in arch.neighbors(s) {
            if slots.contains(&n) && !seen.contains(&n) {
                seen.push(n);
                stack.push(n);
            }
        }
    }
    seen.len() == slots.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutOptions {
    /// Independent random starting placements; the best is kept.
    pub trials: usize,
    /// Forward routing passes per trial, with one reversed pass between
    /// consecutive forward passes.
    pub passes: usize,
    pub corner_removal: bool,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions { trials: 3, passes: 2, corner_removal: true }
    }
}

/// SplitMix64 step, used to derive per-trial seeds from one base seed.
pub fn split_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(index + 1));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random injective placement onto `usable` slots.
pub fn random_layout(arch: &Architecture, usable: &[SlotId], n_logical: usize, seed: u64) -> Result<Layout, LayoutError> {
    if n_logical > usable.len() {
        return Err(LayoutError::Capacity { needed: n_logical, usable: usable.len() });
    }
    let mut slots = usable.to_vec();
    slots.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    slots.truncate(n_logical);
    Layout::new(arch, slots)
}

/// Qubits in order of first two-qubit use, laid along a nearest-neighbour
/// walk of each core, cores visited nearest first. Each core keeps two
/// slots free while the circuit still fits that way.
pub fn greedy_layout(dag: &CircuitDag, arch: &Architecture, tables: &DistanceTables) -> Result<Layout, LayoutError> {
    let n = dag.n_logical();
    if n > arch.num_slots() {
        return Err(LayoutError::Capacity { needed: n, usable: arch.num_slots() });
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for g in dag.gates() {
        if g.operands.is_two() {
            for q in g.operands.qubits() {
                if !placed[q] {
                    placed[q] = true;
                    order.push(q);
                }
            }
        }
    }
    order.extend((0..n).filter(|&q| !placed[q]));

    let k = arch.num_cores();
    let mut cores = vec![0];
    while cores.len() < k {
        let last = *cores.last().expect("non-empty");
        let next = (0..k).filter(|c| !cores.contains(c)).min_by_key(|&c| (tables.core_hops(last, c), c));
        cores.push(next.expect("unvisited core"));
    }
    let reserve = if (0..k).map(|c| arch.core_slots(c).len().saturating_sub(2)).sum::<usize>() >= n { 2 } else { 0 };
    let mut slots = Vec::with_capacity(n);
    for &c in &cores {
        let walk = core_walk(arch, tables, c);
        let take = walk.len().saturating_sub(reserve).min(n - slots.len());
        slots.extend_from_slice(&walk[..take]);
    }
    for &c in &cores {
        let walk = core_walk(arch, tables, c);
        let rest = n - slots.len();
        slots.extend(walk.iter().copied().filter(|s| !slots.contains(s)).take(rest).collect::<Vec<_>>());
    }
    let mut to_phys = vec![0; n];
    for (&q, &s) in order.iter().zip(&slots) {
        to_phys[q] = s;
    }
    Layout::new(arch, to_phys)
}

/// Greedy walk through a core from its lowest slot, always stepping to the
/// nearest unvisited slot (ties to the lower id).
fn core_walk(arch: &Architecture, tables: &DistanceTables, core: CoreId) -> Vec<SlotId> {
    let mut left: Vec<SlotId> = arch.core_slots(core).to_vec();
    left.sort_unstable();
    let mut walk = vec![left.remove(0)];
    while !left.is_empty() {
        let cur = *walk.last().expect("non-empty");
        let i = (0..left.len()).min_by_key(|&i| (tables.d_intra(cur, left[i]), left[i])).expect("non-empty");
        walk.push(left.remove(i));
    }
    walk
}

/// Bidirectional layout search: the greedy placement and one random
/// placement per trial are each refined by alternating forward and
/// reversed routing passes; the starting layout of the forward pass with
/// the fewest teleports wins. Layout passes route on the corner-removed sub-device so
/// no qubit is ever placed on a removed slot.
pub fn initial_layout(
    dag: &CircuitDag,
    arch: &Architecture,
    tables: &DistanceTables,
    params: &RouterParams,
    seed: u64,
    options: &LayoutOptions,
) -> Result<Layout, LayoutError> {
    let mut keep = vec![true; arch.num_slots()];
    if options.corner_removal {
        for s in corner_removed_slots(arch) {
            keep[s] = false;
        }
    }
    let usable = keep.iter().filter(|&&k| k).count();
    if dag.n_logical() > usable {
        return Err(LayoutError::Capacity { needed: dag.n_logical(), usable });
    }
    let sub = if options.corner_removal {
        let (sub_arch, map) = arch.induced(&keep).expect("corner removal keeps ports");
        let sub_tables = DistanceTables::new(&sub_arch).expect("corner removal keeps cores connected");
        Some((sub_arch, sub_tables, map))
    } else {
        None
    };
    let (work_arch, work_tables) = match &sub {
        Some((a, t, _)) => (a, t),
        None => (arch, tables),
    };
    let all_slots: Vec<SlotId> = (0..work_arch.num_slots()).collect();
    let reversed = dag.reversed();

    let mut starts = vec![greedy_layout(dag, work_arch, work_tables)?];
    for trial in 0..options.trials.max(1) {
        starts.push(random_layout(work_arch, &all_slots, dag.n_logical(), split_seed(seed, trial as u64))?);
    }
    let mut best: Option<(usize, Layout)> = None;
    for start in starts {
        let mut current = start;
        for pass in 0..options.passes.max(1) {
            let forward = route(dag, &current, work_arch, work_tables, params).expect("layout matches device");
            let epr = match forward.status {
                RouteStatus::Complete => forward.program.epr,
                RouteStatus::Aborted => usize::MAX,
            };
            if best.as_ref().is_none_or(|(e, _)| epr < *e) {
                best = Some((epr, current.clone()));
            }
            if pass + 1 == options.passes.max(1) {
                break;
            }
            let backward = route(&reversed, &forward.final_layout, work_arch, work_tables, params)
                .expect("layout matches device");
            current = backward.final_layout;
        }
    }
    let (_, layout) = best.expect("at least one trial");
    match &sub {
        Some((_, _, map)) => layout.lift(arch, map),
        None => Ok(layout),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::{build_grid_arch, GridFamily};

    fn bgrid() -> Architecture {
        build_grid_arch(GridFamily::B, 2, 2, 4, 10).unwrap()
    }

    #[test]
    fn swap_is_an_involution() {
        let a = bgrid();
        let mut l = Layout::new(&a, vec![0, 1, 5]).unwrap();
        let orig = l.clone();
        l.apply_swap(&a, 1, 2).unwrap();
        assert_eq!(l.phys(1), 2);
        assert!(l.is_free(1));
        assert_eq!(l.free_count(0), 13);
        l.apply_swap(&a, 1, 2).unwrap();
        assert_eq!(l, orig);
        assert_eq!(l.apply_swap(&a, 3, 3), Err(LayoutError::SameSlot(3)));
    }

    #[test]
    fn teleport_conserves_free_slots() {
        let a = bgrid();
        let mut l = Layout::new(&a, vec![0, 1]).unwrap();
        let orig = l.clone();
        l.apply_teleport(&a, 0, 20).unwrap();
        assert_eq!(l.free_count(0), 15);
        assert_eq!(l.free_count(1), 15);
        assert_eq!(l.apply_teleport(&a, 1, 20), Err(LayoutError::Occupied(20)));
        assert_eq!(l.apply_teleport(&a, 1, 2), Err(LayoutError::SameCore(2)));
        l.apply_teleport(&a, 0, 0).unwrap();
        assert_eq!(l, orig);
    }

    #[test]
    fn placement_dump_roundtrip() {
        let a = bgrid();
        let l = Layout::new(&a, vec![17, 3, 40]).unwrap();
        let entries: Vec<Placement> = serde_json::from_str(&l.to_json(&a)).unwrap();
        assert_eq!(entries[0], Placement { logical: 0, core: 1, slot: 17 });
        assert_eq!(Layout::from_placements(&a, &entries).unwrap(), l);
    }

    #[test]
    fn rejects_collisions() {
        let a = bgrid();
        assert_eq!(Layout::new(&a, vec![4, 4]), Err(LayoutError::Collision(0, 1, 4)));
    }

    #[test]
    fn corners_of_a_four_by_four_core() {
        let a = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
        assert_eq!(corner_removed_slots(&a), vec![0, 3, 12, 15]);
        let tiny = build_grid_arch(GridFamily::B, 1, 1, 1, 10).unwrap();
        assert!(corner_removed_slots(&tiny).is_empty());
    }

    #[test]
    fn corner_removal_spares_ports() {
        for arch in [bgrid(), build_grid_arch(GridFamily::H, 2, 3, 4, 10).unwrap()] {
            let removed = corner_removed_slots(&arch);
            assert_eq!(removed.len(), 4 * arch.num_cores());
            for s in removed {
                assert!(!arch.is_port(s));
            }
        }
    }

    #[test]
    fn seed_splitter_is_stable() {
        assert_ne!(split_seed(7, 0), split_seed(7, 1));
        assert_eq!(split_seed(7, 2), split_seed(7, 2));
    }
}
