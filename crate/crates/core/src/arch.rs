//! Multi-core device model and the distance tables the router queries.
//!
//! Physical slots are numbered globally. Every slot belongs to exactly one
//! core; intra-core edges have unit weight and inter-core links connect one
//! port slot in each of two cores with weight `w_link`.

use std::collections::{BinaryHeap, VecDeque};
use std::cmp::Reverse;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ArchError;

pub type SlotId = usize;
pub type CoreId = usize;

/// Sentinel for "unreachable" in the distance tables.
pub const UNREACHABLE: u32 = u32::MAX;

/// Slot count above which `d_phys` is recovered on demand instead of stored.
pub const DENSE_PHYS_LIMIT: usize = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Core {
    pub slots: Vec<SlotId>,
    pub edges: Vec<(SlotId, SlotId)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterLink {
    pub core_a: CoreId,
    pub port_a: SlotId,
    pub core_b: CoreId,
    pub port_b: SlotId,
}

impl InterLink {
    /// The port on `core`, and the port on the far side.
    pub fn oriented(&self, core: CoreId) -> Option<(SlotId, SlotId)> {
        if core == self.core_a {
            Some((self.port_a, self.port_b))
        } else if core == self.core_b {
            Some((self.port_b, self.port_a))
        } else {
            None
        }
    }

    pub fn other_core(&self, core: CoreId) -> CoreId {
        if core == self.core_a {
            self.core_b
        } else {
            self.core_a
        }
    }
}

/// Which grid-of-grids port layout to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GridFamily {
    B,
    H,
}

/// Grid placement metadata, present for generated grid-of-grids devices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridGeometry {
    pub family: GridFamily,
    pub core_rows: usize,
    pub core_cols: usize,
    pub m: usize,
}

impl GridGeometry {
    /// (core row, core col, row in core, col in core) of a slot.
    pub fn coords(&self, slot: SlotId) -> (usize, usize, usize, usize) {
        let per_core = self.m * self.m;
        let core = slot / per_core;
        let local = slot % per_core;
        (core / self.core_cols, core % self.core_cols, local / self.m, local % self.m)
    }

    pub fn slot(&self, core: CoreId, row: usize, col: usize) -> SlotId {
        core * self.m * self.m + row * self.m + col
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Architecture {
    cores: Vec<Core>,
    links: Vec<InterLink>,
    w_link: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    grid: Option<GridGeometry>,
    #[serde(skip)]
    slot_core: Vec<CoreId>,
    #[serde(skip)]
    local_index: Vec<usize>,
    #[serde(skip)]
    neighbors: Vec<Vec<SlotId>>,
    #[serde(skip)]
    is_port: Vec<bool>,
    #[serde(skip)]
    core_links: Vec<Vec<usize>>,
}

impl PartialEq for Architecture {
    fn eq(&self, other: &Self) -> bool {
        self.cores == other.cores && self.links == other.links && self.w_link == other.w_link
    }
}

impl Architecture {
    /// Build and validate a device. Slot ids must be exactly `0..total`.
    pub fn new(cores: Vec<Core>, links: Vec<InterLink>, w_link: u32) -> Result<Self, ArchError> {
        if w_link == 0 {
            return Err(ArchError::ZeroLinkWeight);
        }
        let total: usize = cores.iter().map(|c| c.slots.len()).sum();
        let mut slot_core = vec![usize::MAX; total];
        let mut local_index = vec![0; total];
        for (ci, core) in cores.iter().enumerate() {
            if core.slots.is_empty() {
                return Err(ArchError::EmptyCore(ci));
            }
            for (li, &s) in core.slots.iter().enumerate() {
                if s >= total || slot_core[s] != usize::MAX {
                    return Err(ArchError::BadSlot(s));
                }
                slot_core[s] = ci;
                local_index[s] = li;
            }
        }
        let mut neighbors = vec![Vec::new(); total];
        for (ci, core) in cores.iter().enumerate() {
            for &(u, v) in &core.edges {
                if u >= total || v >= total || slot_core[u] != ci || slot_core[v] != ci || u == v {
                    return Err(ArchError::BadEdge(u, v, ci));
                }
                if !neighbors[u].contains(&v) {
                    neighbors[u].push(v);
                    neighbors[v].push(u);
                }
            }
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }
        let mut is_port = vec![false; total];
        let mut core_links = vec![Vec::new(); cores.len()];
        for (li, link) in links.iter().enumerate() {
            for (c, p) in [(link.core_a, link.port_a), (link.core_b, link.port_b)] {
                if c >= cores.len() || p >= total || slot_core[p] != c {
                    return Err(ArchError::BadPort { link: li, slot: p, core: c });
                }
                if cores[c].slots.len() > 1 && neighbors[p].is_empty() {
                    return Err(ArchError::IsolatedPort { link: li, slot: p });
                }
                is_port[p] = true;
            }
            if link.core_a == link.core_b {
                return Err(ArchError::SelfLink(li));
            }
            core_links[link.core_a].push(li);
            core_links[link.core_b].push(li);
        }
        let arch = Architecture {
            cores,
            links,
            w_link,
            grid: None,
            slot_core,
            local_index,
            neighbors,
            is_port,
            core_links,
        };
        for ci in 0..arch.cores.len() {
            if !arch.core_connected(ci) {
                return Err(ArchError::DisconnectedCore(ci));
            }
        }
        Ok(arch)
    }

    fn core_connected(&self, core: CoreId) -> bool {
        let slots = &self.cores[core].slots;
        let mut seen = vec![false; slots.len()];
        let mut queue = VecDeque::from([slots[0]]);
        seen[0] = true;
        let mut count = 1;
        while let Some(s) = queue.pop_front() {
            for &n in &self.neighbors[s] {
                let li = self.local_index[n];
                if !seen[li] {
                    seen[li] = true;
                    count += 1;
                    queue.push_back(n);
                }
            }
        }
        count == slots.len()
    }

    /// Rebuild the derived lookup tables after deserialising.
    pub fn revalidate(self) -> Result<Self, ArchError> {
        let grid = self.grid;
        let mut arch = Architecture::new(self.cores, self.links, self.w_link)?;
        arch.grid = grid;
        Ok(arch)
    }

    pub fn num_slots(&self) -> usize {
        self.slot_core.len()
    }

    pub fn num_cores(&self) -> usize {
        self.cores.len()
    }

    pub fn cores(&self) -> &[Core] {
        &self.cores
    }

    pub fn core_slots(&self, core: CoreId) -> &[SlotId] {
        &self.cores[core].slots
    }

    pub fn links(&self) -> &[InterLink] {
        &self.links
    }

    pub fn w_link(&self) -> u32 {
        self.w_link
    }

    pub fn grid(&self) -> Option<&GridGeometry> {
        self.grid.as_ref()
    }

    pub fn core_of(&self, slot: SlotId) -> CoreId {
        self.slot_core[slot]
    }

    pub fn local_index(&self, slot: SlotId) -> usize {
        self.local_index[slot]
    }

    pub fn neighbors(&self, slot: SlotId) -> &[SlotId] {
        &self.neighbors[slot]
    }

    pub fn is_port(&self, slot: SlotId) -> bool {
        self.is_port[slot]
    }

    /// Link indices touching `core`, in ascending order.
    pub fn core_links(&self, core: CoreId) -> &[usize] {
        &self.core_links[core]
    }

    pub fn are_adjacent(&self, a: SlotId, b: SlotId) -> bool {
        a < self.num_slots() && self.neighbors[a].binary_search(&b).is_ok()
    }

    /// Neighbouring cores of `core`, ascending and deduplicated.
    pub fn neighbor_cores(&self, core: CoreId) -> Vec<CoreId> {
        let mut out: Vec<CoreId> = self.core_links[core]
            .iter()
            .map(|&l| self.links[l].other_core(core))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Links between two cores, in link-index order.
    pub fn links_between(&self, a: CoreId, b: CoreId) -> impl Iterator<Item = usize> + '_ {
        self.core_links[a]
            .iter()
            .copied()
            .filter(move |&l| self.links[l].other_core(a) == b)
    }

    /// Copy with a different inter-core link weight.
    pub fn with_link_weight(&self, w_link: u32) -> Result<Self, ArchError> {
        let mut arch = Architecture::new(self.cores.clone(), self.links.clone(), w_link)?;
        arch.grid = self.grid;
        Ok(arch)
    }

    /// Sub-device keeping only the slots flagged in `keep`. Slots are
    /// renumbered densely; returns the device and the new→old slot map.
    pub fn induced(&self, keep: &[bool]) -> Result<(Architecture, Vec<SlotId>), ArchError> {
        let mut old_to_new = vec![usize::MAX; self.num_slots()];
        let mut new_to_old = Vec::new();
        for core in &self.cores {
            for &s in &core.slots {
                if keep[s] {
                    old_to_new[s] = new_to_old.len();
                    new_to_old.push(s);
                }
            }
        }
        let cores = self
            .cores
            .iter()
            .map(|core| Core {
                slots: core.slots.iter().filter(|&&s| keep[s]).map(|&s| old_to_new[s]).collect(),
                edges: core
                    .edges
                    .iter()
                    .filter(|&&(u, v)| keep[u] && keep[v])
                    .map(|&(u, v)| (old_to_new[u], old_to_new[v]))
                    .collect(),
            })
            .collect();
        let links = self
            .links
            .iter()
            .map(|l| {
                if !keep[l.port_a] || !keep[l.port_b] {
                    return Err(ArchError::BadPort { link: 0, slot: l.port_a, core: l.core_a });
                }
                Ok(InterLink {
                    core_a: l.core_a,
                    port_a: old_to_new[l.port_a],
                    core_b: l.core_b,
                    port_b: old_to_new[l.port_b],
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((Architecture::new(cores, links, self.w_link)?, new_to_old))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("architecture serialises")
    }
}

/// `bgrid:RxS:mxm` / `hgrid:RxS:mxm`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchSpec {
    pub family: GridFamily,
    pub core_rows: usize,
    pub core_cols: usize,
    pub m: usize,
}

impl ArchSpec {
    pub fn build(&self, w_link: u32) -> Result<Architecture, ArchError> {
        build_grid_arch(self.family, self.core_rows, self.core_cols, self.m, w_link)
    }
}

impl fmt::Display for ArchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.family {
            GridFamily::B => "bgrid",
            GridFamily::H => "hgrid",
        };
        write!(f, "{tag}:{}x{}:{}x{}", self.core_rows, self.core_cols, self.m, self.m)
    }
}

impl FromStr for ArchSpec {
    type Err = ArchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArchError::BadSpec(s.to_string());
        let mut parts = s.split(':');
        let family = match parts.next().ok_or_else(bad)? {
            "bgrid" => GridFamily::B,
            "hgrid" => GridFamily::H,
            other => return Err(ArchError::UnknownFamily(other.to_string())),
        };
        let pair = |p: Option<&str>| -> Result<(usize, usize), ArchError> {
            let (a, b) = p.ok_or_else(bad)?.split_once('x').ok_or_else(bad)?;
            Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
        };
        let (core_rows, core_cols) = pair(parts.next())?;
        let (m, m2) = pair(parts.next())?;
        if parts.next().is_some() || m != m2 {
            return Err(bad());
        }
        if core_rows == 0 || core_cols == 0 || m == 0 {
            return Err(bad());
        }
        Ok(ArchSpec { family, core_rows, core_cols, m })
    }
}

impl FromStr for GridFamily {
    type Err = ArchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" | "b" | "bgrid" => Ok(GridFamily::B),
            "H" | "h" | "hgrid" => Ok(GridFamily::H),
            other => Err(ArchError::UnknownFamily(other.to_string())),
        }
    }
}

/// Grid-of-grids device: `core_rows × core_cols` cores, each an `m × m`
/// nearest-neighbour grid, one link per adjacent core pair.
///
/// Horizontal links join `(r, m-1)` to `(r, 0)` with `r = 1` on even core
/// rows and `r = m-2` on odd ones. Vertical links leave the upper core at
/// `(m-1, 1)` in core column 0 and `(m-1, m-2)` elsewhere. They land on the
/// lower core at the same column for the B family; the H family lands at
/// column 1 except in the last core column, which lands at `m-2`.
pub fn build_grid_arch(
    family: GridFamily,
    core_rows: usize,
    core_cols: usize,
    m: usize,
    w_link: u32,
) -> Result<Architecture, ArchError> {
    if core_rows == 0 || core_cols == 0 || m == 0 {
        return Err(ArchError::BadSpec(format!("{core_rows}x{core_cols}:{m}x{m}")));
    }
    let k = core_rows * core_cols;
    if k > 1 && m < 2 {
        return Err(ArchError::CoreTooSmall(m));
    }
    let geom = GridGeometry { family, core_rows, core_cols, m };
    let mut cores = Vec::with_capacity(k);
    for c in 0..k {
        let slots: Vec<SlotId> = (0..m * m).map(|i| c * m * m + i).collect();
        let mut edges = Vec::new();
        for r in 0..m {
            for col in 0..m {
                let s = geom.slot(c, r, col);
                if col + 1 < m {
                    edges.push((s, s + 1));
                }
                if r + 1 < m {
                    edges.push((s, s + m));
                }
            }
        }
        cores.push(Core { slots, edges });
    }
    let inner = |i: usize| i.min(m - 1);
    let mut links = Vec::new();
    for cr in 0..core_rows {
        for cc in 0..core_cols {
            let c = cr * core_cols + cc;
            if cc + 1 < core_cols {
                let row = if cr % 2 == 0 { inner(1) } else { m.saturating_sub(2) };
                links.push(InterLink {
                    core_a: c,
                    port_a: geom.slot(c, row, m - 1),
                    core_b: c + 1,
                    port_b: geom.slot(c + 1, row, 0),
                });
            }
            if cr + 1 < core_rows {
                let below = c + core_cols;
                let up_col = if cc == 0 { inner(1) } else { m.saturating_sub(2) };
                let down_col = match family {
                    GridFamily::B => up_col,
                    GridFamily::H if cc + 1 == core_cols && cc > 0 => m.saturating_sub(2),
                    GridFamily::H => inner(1),
                };
                links.push(InterLink {
                    core_a: c,
                    port_a: geom.slot(c, m - 1, up_col),
                    core_b: below,
                    port_b: geom.slot(below, 0, down_col),
                });
            }
        }
    }
    let mut arch = Architecture::new(cores, links, w_link)?;
    arch.grid = Some(geom);
    Ok(arch)
}

/// Precomputed distances: per-core hop tables, core-graph hops with a
/// canonical predecessor tree, and port-to-port distances from which
/// `d_phys` is recovered.
#[derive(Clone, Debug)]
pub struct DistanceTables {
    w_link: u32,
    slot_core: Vec<CoreId>,
    local_index: Vec<usize>,
    /// intra[core][a * size + b]
    intra: Vec<Vec<u32>>,
    core_size: Vec<usize>,
    core_hops: Vec<Vec<u32>>,
    /// core_pred[src][dst]: predecessor of dst on the canonical path from src.
    core_pred: Vec<Vec<CoreId>>,
    ports: Vec<SlotId>,
    ports_of_core: Vec<Vec<usize>>,
    port_dist: Vec<Vec<u32>>,
    phys: Option<Vec<u32>>,
    diameter: u32,
}

impl DistanceTables {
    pub fn new(arch: &Architecture) -> Result<Self, ArchError> {
        let k = arch.num_cores();
        let mut intra = Vec::with_capacity(k);
        let mut core_size = Vec::with_capacity(k);
        for core in arch.cores() {
            let n = core.slots.len();
            let mut table = vec![UNREACHABLE; n * n];
            for (li, &s) in core.slots.iter().enumerate() {
                let row = &mut table[li * n..(li + 1) * n];
                row[li] = 0;
                let mut queue = VecDeque::from([s]);
                while let Some(u) = queue.pop_front() {
                    let du = row[arch.local_index(u)];
                    for &v in arch.neighbors(u) {
                        let lv = arch.local_index(v);
                        if row[lv] == UNREACHABLE {
                            row[lv] = du + 1;
                            queue.push_back(v);
                        }
                    }
                }
            }
            intra.push(table);
            core_size.push(n);
        }

        // Core graph: unit hops, canonical predecessor = lowest-index core
        // among those on some shortest path.
        let core_adj: Vec<Vec<CoreId>> = (0..k).map(|c| arch.neighbor_cores(c)).collect();
        let mut core_hops = vec![vec![UNREACHABLE; k]; k];
        let mut core_pred = vec![vec![usize::MAX; k]; k];
        for src in 0..k {
            let hops = &mut core_hops[src];
            hops[src] = 0;
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &core_adj[u] {
                    if hops[v] == UNREACHABLE {
                        hops[v] = hops[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            for dst in 0..k {
                if hops[dst] == UNREACHABLE {
                    return Err(ArchError::UnreachableCores(src, dst));
                }
                if dst != src {
                    core_pred[src][dst] = core_adj[dst]
                        .iter()
                        .copied()
                        .find(|&p| hops[p] + 1 == hops[dst])
                        .expect("bfs predecessor exists");
                }
            }
        }

        // Port graph: link edges (w_link) plus intra-core port-to-port hops.
        let mut ports: Vec<SlotId> = arch
            .links()
            .iter()
            .flat_map(|l| [l.port_a, l.port_b])
            .collect();
        ports.sort_unstable();
        ports.dedup();
        let mut port_id = vec![usize::MAX; arch.num_slots()];
        let mut ports_of_core = vec![Vec::new(); k];
        for (i, &p) in ports.iter().enumerate() {
            port_id[p] = i;
            ports_of_core[arch.core_of(p)].push(i);
        }
        let np = ports.len();
        let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); np];
        for l in arch.links() {
            let (a, b) = (port_id[l.port_a], port_id[l.port_b]);
            adj[a].push((b, arch.w_link()));
            adj[b].push((a, arch.w_link()));
        }
        for (c, members) in ports_of_core.iter().enumerate() {
            let n = core_size[c];
            for &a in members {
                for &b in members {
                    if a != b {
                        let d = intra[c][arch.local_index(ports[a]) * n + arch.local_index(ports[b])];
                        adj[a].push((b, d));
                    }
                }
            }
        }
        let port_dist: Vec<Vec<u32>> = (0..np).map(|s| dijkstra(&adj, s)).collect();

        let mut tables = DistanceTables {
            w_link: arch.w_link(),
            slot_core: (0..arch.num_slots()).map(|s| arch.core_of(s)).collect(),
            local_index: (0..arch.num_slots()).map(|s| arch.local_index(s)).collect(),
            intra,
            core_size,
            core_hops,
            core_pred,
            ports,
            ports_of_core,
            port_dist,
            phys: None,
            diameter: 0,
        };
        let n = arch.num_slots();
        if n <= DENSE_PHYS_LIMIT {
            let mut dense = vec![0; n * n];
            for p in 0..n {
                for q in 0..n {
                    dense[p * n + q] = tables.recover_phys(p, q);
                }
            }
            tables.diameter = dense.iter().copied().max().unwrap_or(0);
            tables.phys = Some(dense);
        } else {
            tables.diameter = tables.estimate_diameter(arch);
        }
        Ok(tables)
    }

    fn estimate_diameter(&self, arch: &Architecture) -> u32 {
        // Exact over ports and one corner per core; sufficient for grids.
        let probes: Vec<SlotId> = arch.cores().iter().map(|c| c.slots[0]).chain(self.ports.iter().copied()).collect();
        let mut best = 0;
        for &p in &probes {
            for q in 0..arch.num_slots() {
                best = best.max(self.recover_phys(p, q));
            }
        }
        best
    }

    fn recover_phys(&self, p: SlotId, q: SlotId) -> u32 {
        let (cp, cq) = (self.slot_core[p], self.slot_core[q]);
        let mut best = if cp == cq { self.d_intra(p, q) } else { UNREACHABLE };
        for &a in &self.ports_of_core[cp] {
            let to_a = self.d_intra(p, self.ports[a]);
            for &b in &self.ports_of_core[cq] {
                if cp == cq && a == b {
                    continue;
                }
                let mid = self.port_dist[a][b];
                if mid == UNREACHABLE {
                    continue;
                }
                let d = to_a + mid + self.d_intra(self.ports[b], q);
                best = best.min(d);
            }
        }
        best
    }

    pub fn w_link(&self) -> u32 {
        self.w_link
    }

    pub fn num_slots(&self) -> usize {
        self.slot_core.len()
    }

    pub fn num_cores(&self) -> usize {
        self.core_hops.len()
    }

    /// Unit-hop distance inside one core. Panics on slots from different cores.
    pub fn d_intra(&self, p: SlotId, q: SlotId) -> u32 {
        let c = self.slot_core[p];
        assert_eq!(c, self.slot_core[q], "d_intra across cores");
        let n = self.core_size[c];
        self.intra[c][self.local_index[p] * n + self.local_index[q]]
    }

    /// Weighted core-graph distance (hops × w_link).
    pub fn d_core(&self, a: CoreId, b: CoreId) -> u32 {
        self.core_hops[a][b] * self.w_link
    }

    /// Number of inter-core links on the shortest core path.
    pub fn core_hops(&self, a: CoreId, b: CoreId) -> u32 {
        self.core_hops[a][b]
    }

    /// Shortest weighted distance on the full device graph.
    pub fn d_phys(&self, p: SlotId, q: SlotId) -> u32 {
        match &self.phys {
            Some(dense) => dense[p * self.num_slots() + q],
            None => self.recover_phys(p, q),
        }
    }

    /// Largest `d_phys` over the device.
    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Canonical shortest core path from `a` to `b`, both ends included.
    pub fn core_path(&self, a: CoreId, b: CoreId) -> Vec<CoreId> {
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = self.core_pred[a][cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// First core after `a` on the canonical path towards `b`.
    pub fn core_next_hop(&self, a: CoreId, b: CoreId) -> CoreId {
        if a == b {
            return a;
        }
        let mut cur = b;
        loop {
            let pred = self.core_pred[a][cur];
            if pred == a {
                return cur;
            }
            cur = pred;
        }
    }
}

fn dijkstra(adj: &[Vec<(usize, u32)>], src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    dist[src] = 0;
    let mut heap = BinaryHeap::from([Reverse((0u32, src))]);
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((nd, v)));
            }
        }
    }
    dist
}

pub fn precompute_distances(arch: &Architecture) -> Result<DistanceTables, ArchError> {
    DistanceTables::new(arch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hgrid() -> Architecture {
        build_grid_arch(GridFamily::H, 2, 3, 4, 10).unwrap()
    }

    #[test]
    fn published_sizes() {
        let b = build_grid_arch(GridFamily::B, 2, 2, 4, 10).unwrap();
        assert_eq!((b.num_cores(), b.num_slots(), b.links().len()), (4, 64, 4));
        let h = hgrid();
        assert_eq!((h.num_cores(), h.num_slots(), h.links().len()), (6, 96, 7));
        let single = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
        assert_eq!((single.num_cores(), single.num_slots(), single.links().len()), (1, 16, 0));
    }

    #[test]
    fn hgrid_ports_match_drawn_layout() {
        let h = hgrid();
        let g = *h.grid().unwrap();
        let expect = [
            ((0, 1, 3), (1, 1, 0)),
            ((0, 3, 1), (3, 0, 1)),
            ((1, 1, 3), (2, 1, 0)),
            ((1, 3, 2), (4, 0, 1)),
            ((2, 3, 2), (5, 0, 2)),
            ((3, 2, 3), (4, 2, 0)),
            ((4, 2, 3), (5, 2, 0)),
        ];
        let mut got: Vec<_> = h
            .links()
            .iter()
            .map(|l| {
                let (_, _, ra, ca) = g.coords(l.port_a);
                let (_, _, rb, cb) = g.coords(l.port_b);
                ((l.core_a, ra, ca), (l.core_b, rb, cb))
            })
            .collect();
        got.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn bgrid_ports_match_drawn_layout() {
        let b = build_grid_arch(GridFamily::B, 2, 2, 4, 10).unwrap();
        let g = *b.grid().unwrap();
        let mut got: Vec<_> = b
            .links()
            .iter()
            .map(|l| {
                let (_, _, ra, ca) = g.coords(l.port_a);
                let (_, _, rb, cb) = g.coords(l.port_b);
                ((l.core_a, ra, ca), (l.core_b, rb, cb))
            })
            .collect();
        got.sort();
        assert_eq!(
            got,
            [
                ((0, 1, 3), (1, 1, 0)),
                ((0, 3, 1), (2, 0, 1)),
                ((1, 3, 2), (3, 0, 2)),
                ((2, 2, 3), (3, 2, 0)),
            ]
        );
    }

    #[test]
    fn running_example_distance() {
        let h = hgrid();
        let t = DistanceTables::new(&h).unwrap();
        let g = *h.grid().unwrap();
        let p1 = g.slot(1, 0, 2);
        let p2 = g.slot(5, 1, 1);
        assert_eq!(t.d_phys(p1, p2), 28);
        assert_eq!(t.core_hops(1, 5), 2);
        assert_eq!(t.d_core(1, 5), 20);
        assert_eq!(t.core_path(1, 5), vec![1, 2, 5]);
        assert_eq!(t.core_next_hop(1, 5), 2);
        assert_eq!(t.core_path(3, 3), vec![3]);
    }

    #[test]
    fn adjacent_slots_are_one_apart() {
        let h = hgrid();
        let t = DistanceTables::new(&h).unwrap();
        assert_eq!(t.d_phys(0, 1), 1);
        assert_eq!(t.d_intra(0, 15), 6);
    }

    #[test]
    fn spec_strings() {
        let s: ArchSpec = "hgrid:2x3:4x4".parse().unwrap();
        assert_eq!(s, ArchSpec { family: GridFamily::H, core_rows: 2, core_cols: 3, m: 4 });
        assert_eq!(s.to_string(), "hgrid:2x3:4x4");
        assert!(matches!("qgrid:2x2:4x4".parse::<ArchSpec>(), Err(ArchError::UnknownFamily(_))));
        assert!("bgrid:2x2:4x5".parse::<ArchSpec>().is_err());
        assert!("bgrid:0x2:4x4".parse::<ArchSpec>().is_err());
    }

    #[test]
    fn disconnected_core_graph_is_rejected() {
        let cores = vec![
            Core { slots: vec![0, 1], edges: vec![(0, 1)] },
            Core { slots: vec![2, 3], edges: vec![(2, 3)] },
        ];
        let arch = Architecture::new(cores, vec![], 10).unwrap();
        assert!(matches!(DistanceTables::new(&arch), Err(ArchError::UnreachableCores(0, 1))));
    }

    #[test]
    fn json_roundtrip_revalidates() {
        let h = hgrid();
        let back: Architecture = serde_json::from_str(&h.to_json()).unwrap();
        let back = back.revalidate().unwrap();
        assert_eq!(back, h);
        assert_eq!(back.grid(), h.grid());
        assert!(back.is_port(h.links()[0].port_a));
    }

    #[test]
    fn induced_subdevice_renumbers() {
        let b = build_grid_arch(GridFamily::B, 1, 1, 3, 10).unwrap();
        let mut keep = vec![true; 9];
        keep[0] = false;
        let (sub, map) = b.induced(&keep).unwrap();
        assert_eq!(sub.num_slots(), 8);
        assert_eq!(map[0], 1);
        assert!(sub.are_adjacent(0, 1));
    }
}
