//! Deterministic intra-core path helpers. Neighbour lists are sorted, so
//! BFS parents (and hence paths) are reproducible.

use std::collections::VecDeque;

use crate::arch::{Architecture, CoreId, DistanceTables, SlotId};
use crate::layout::Layout;

/// Shortest path `from → to` inside one core, never entering `avoid`.
pub(crate) fn intra_path(arch: &Architecture, from: SlotId, to: SlotId, avoid: &[SlotId]) -> Option<Vec<SlotId>> {
    if from == to {
        return Some(vec![from]);
    }
    let core = arch.core_of(from);
    if arch.core_of(to) != core {
        return None;
    }
    let n = arch.core_slots(core).len();
    let mut parent = vec![usize::MAX; n];
    parent[arch.local_index(from)] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &v in arch.neighbors(u) {
            let lv = arch.local_index(v);
            if parent[lv] != usize::MAX || avoid.contains(&v) {
                continue;
            }
            parent[lv] = u;
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[arch.local_index(cur)];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back(v);
        }
    }
    None
}

/// Path from `start` to the nearest free slot of its core, preferring
/// non-port slots; ties go to the lowest slot id.
pub(crate) fn path_to_free(arch: &Architecture, layout: &Layout, start: SlotId, avoid: &[SlotId]) -> Option<Vec<SlotId>> {
    let core = arch.core_of(start);
    let n = arch.core_slots(core).len();
    let mut dist = vec![u32::MAX; n];
    let mut parent = vec![usize::MAX; n];
    dist[arch.local_index(start)] = 0;
    let mut queue = VecDeque::from([start]);
    let mut order = Vec::new();
    while let Some(u) = queue.pop_front() {
        let du = dist[arch.local_index(u)];
        for &v in arch.neighbors(u) {
            let lv = arch.local_index(v);
            if dist[lv] != u32::MAX || avoid.contains(&v) {
                continue;
            }
            dist[lv] = du + 1;
            parent[lv] = u;
            order.push(v);
            queue.push_back(v);
        }
    }
    let pick = |want_port: bool| {
        order
            .iter()
            .copied()
            .filter(|&s| layout.is_free(s) && arch.is_port(s) == want_port)
            .min_by_key(|&s| (dist[arch.local_index(s)], s))
    };
    let target = pick(false).or_else(|| pick(true))?;
    let mut path = vec![target];
    let mut cur = target;
    while cur != start {
        cur = parent[arch.local_index(cur)];
        path.push(cur);
    }
    path.reverse();
    Some(path)
}

/// Eviction distance for a slot: 0 when free, otherwise the hop count to
/// the nearest free slot of the same core (non-port preferred, ties by id).
/// `None` when the core has no free slot.
pub(crate) fn evict_distance(
    arch: &Architecture,
    tables: &DistanceTables,
    layout: &Layout,
    slot: SlotId,
) -> Option<u32> {
    if layout.is_free(slot) {
        return Some(0);
    }
    nearest_free(arch, tables, layout, arch.core_of(slot), slot).map(|(_, d)| d)
}

pub(crate) fn nearest_free(
    arch: &Architecture,
    tables: &DistanceTables,
    layout: &Layout,
    core: CoreId,
    from: SlotId,
) -> Option<(SlotId, u32)> {
    let best = |want_port: bool| {
        arch.core_slots(core)
            .iter()
            .copied()
            .filter(|&s| s != from && layout.is_free(s) && arch.is_port(s) == want_port)
            .map(|s| (tables.d_intra(from, s), s))
            .min()
    };
    best(false).or_else(|| best(true)).map(|(d, s)| (s, d))
}
