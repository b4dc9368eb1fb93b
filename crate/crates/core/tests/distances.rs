use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use distroute::arch::{build_grid_arch, Architecture, DistanceTables, GridFamily};
use distroute::fixtures::running_example;

/// Single-level Dijkstra over every slot: unit intra edges, `w_link` per link.
fn flat_dijkstra(arch: &Architecture) -> Vec<Vec<u32>> {
    let n = arch.num_slots();
    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); n];
    for core in arch.cores() {
        for &(a, b) in &core.edges {
            adj[a].push((b, 1));
            adj[b].push((a, 1));
        }
    }
    for l in arch.links() {
        adj[l.port_a].push((l.port_b, arch.w_link()));
        adj[l.port_b].push((l.port_a, arch.w_link()));
    }
    (0..n)
        .map(|src| {
            let mut dist = vec![u32::MAX; n];
            dist[src] = 0;
            let mut heap = BinaryHeap::from([Reverse((0u32, src))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for &(v, w) in &adj[u] {
                    if d + w < dist[v] {
                        dist[v] = d + w;
                        heap.push(Reverse((d + w, v)));
                    }
                }
            }
            dist
        })
        .collect()
}

fn core_bfs(arch: &Architecture, from: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; arch.num_cores()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(c) = queue.pop_front() {
        for l in arch.links() {
            if l.oriented(c).is_some() {
                let n = l.other_core(c);
                if dist[n] == u32::MAX {
                    dist[n] = dist[c] + 1;
                    queue.push_back(n);
                }
            }
        }
    }
    dist
}

fn assert_matches_flat(arch: &Architecture) {
    let t = DistanceTables::new(arch).unwrap();
    let flat = flat_dijkstra(arch);
    for (p, row) in flat.iter().enumerate() {
        for (q, &want) in row.iter().enumerate() {
            assert_eq!(t.d_phys(p, q), want, "d_phys({p},{q})");
        }
    }
}

#[test]
fn hierarchical_distances_equal_flat_dijkstra() {
    for w in [1, 3, 10] {
        assert_matches_flat(&build_grid_arch(GridFamily::B, 2, 2, 4, w).unwrap());
        assert_matches_flat(&build_grid_arch(GridFamily::H, 2, 3, 4, w).unwrap());
    }
    assert_matches_flat(&build_grid_arch(GridFamily::H, 2, 3, 5, 10).unwrap());
}

#[test]
fn running_example_pair_is_28_apart() {
    let ex = running_example(10);
    let t = DistanceTables::new(&ex.arch).unwrap();
    let (p1, p2) = (ex.layout.phys(0), ex.layout.phys(1));
    assert_eq!(t.d_phys(p1, p2), 28);
    assert_eq!(flat_dijkstra(&ex.arch)[p1][p2], 28);
}

#[test]
fn core_paths_match_bfs() {
    for family in [GridFamily::B, GridFamily::H] {
        for (rows, cols) in [(2, 3), (3, 3), (4, 4)] {
            let a = build_grid_arch(family, rows, cols, 4, 10).unwrap();
            let t = DistanceTables::new(&a).unwrap();
            for c1 in 0..a.num_cores() {
                let hops = core_bfs(&a, c1);
                for (c2, &h) in hops.iter().enumerate() {
                    let path = t.core_path(c1, c2);
                    assert_eq!(t.core_hops(c1, c2), h);
                    assert_eq!(path.len() as u32, h + 1);
                    assert_eq!((path[0], *path.last().unwrap()), (c1, c2));
                    for w in path.windows(2) {
                        assert!(a.neighbor_cores(w[0]).contains(&w[1]));
                    }
                    if c1 != c2 {
                        assert_eq!(t.core_next_hop(c1, c2), path[1]);
                    }
                }
            }
        }
    }
}
