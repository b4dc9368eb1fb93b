use distroute::arch::{build_grid_arch, DistanceTables, GridFamily};
use distroute::circuit::{gen_ghz, gen_random, CircuitDag, Gate};
use distroute::fixtures::running_example;
use distroute::router::{CandidateKind, RouteStatus, Router, RouterParams};
use distroute::{route, validate, Layout, RoutedOp};

#[test]
fn running_example_scores() {
    let ex = running_example(10);
    let tables = DistanceTables::new(&ex.arch).unwrap();
    let params = RouterParams::default();
    let mut r = Router::new(&ex.dag, &ex.layout, &ex.arch, &tables, &params).unwrap();
    assert!(r.drain_front().is_empty());
    let (intra, inter) = r.partition_front();
    assert!(intra.is_empty());
    assert_eq!(inter, vec![0]);

    let cands = r.teleport_candidates(&inter);
    assert_eq!(cands.len(), 5);
    let q0: Vec<_> = cands.iter().filter(|c| c.qubit == 0).collect();
    let by_core = |core| q0.iter().find(|c| c.next_core == core).unwrap();
    // (next core, d_prep, c_cap, g_hop, delta_f, score)
    for (core, d_prep, c_cap, g_hop, delta_f, score) in
        [(2, 1, 0.0, 5.0, 12.0, -16.0), (0, 2, 0.0, -5.0, -11.0, 18.0), (4, 3, 15.0, 5.0, 12.0, 1.0)]
    {
        let c = by_core(core);
        assert_eq!(c.d_prep, Some(d_prep), "core {core}");
        assert_eq!((c.c_cap, c.g_hop, c.delta_f, c.score), (c_cap, g_hop, delta_f, score), "core {core}");
        assert_eq!(c.delta_e_weighted, 0.0);
    }
    assert!(r.relief_candidates().is_empty());

    let best = r.best_teleport(&inter).unwrap();
    assert_eq!((best.kind, best.qubit, best.next_core), (CandidateKind::GateDriven, 0, 2));
}

#[test]
fn running_example_move_is_one_swap_one_teleport() {
    let ex = running_example(10);
    let tables = DistanceTables::new(&ex.arch).unwrap();
    let params = RouterParams::default();
    let mut r = Router::new(&ex.dag, &ex.layout, &ex.arch, &tables, &params).unwrap();
    r.step();
    let ops = r.ops();
    assert_eq!(ops.len(), 2);
    assert!(matches!(ops[0], RoutedOp::Swap { .. }));
    assert!(matches!(ops[1], RoutedOp::Teleport { qubit: 0, .. }));

    let out = route(&ex.dag, &ex.layout, &ex.arch, &tables, &params).unwrap();
    assert_eq!(out.status, RouteStatus::Complete);
    let rep = validate(&out.program, &ex.arch, ex.dag.gates(), ex.dag.n_logical(), &ex.layout, &out.final_layout);
    assert!(rep.is_ok(), "{}", rep.to_json());
}

#[test]
fn already_staged_qubit_teleports_without_swaps() {
    let a = build_grid_arch(GridFamily::B, 1, 2, 3, 10).unwrap();
    let t = DistanceTables::new(&a).unwrap();
    let link = a.links()[0];
    let (ps, pd) = link.oriented(0).unwrap();
    let ns = a.neighbors(ps)[0];
    let far = a.core_slots(1).iter().copied().find(|&s| s != pd && !a.neighbors(pd).contains(&s)).unwrap();
    let l = Layout::new(&a, vec![ns, far]).unwrap();
    let dag = CircuitDag::new(vec![Gate::two("cx", 0, 1)], 2).unwrap();
    let p = RouterParams::default();
    let mut r = Router::new(&dag, &l, &a, &t, &p).unwrap();
    let (_, inter) = r.partition_front();
    let best = r.best_teleport(&inter).unwrap();
    if best.qubit == 0 {
        assert_eq!(best.staging_slot, ns);
        assert_eq!(best.d_prep, Some(0));
        r.step();
        assert_eq!(r.ops().len(), 1);
        assert!(matches!(r.ops()[0], RoutedOp::Teleport { .. }));
    }
}

#[test]
fn single_core_ghz_needs_no_teleports() {
    let a = build_grid_arch(GridFamily::B, 1, 1, 4, 10).unwrap();
    let t = DistanceTables::new(&a).unwrap();
    let gates = gen_ghz(10).unwrap();
    let dag = CircuitDag::new(gates, 10).unwrap();
    let l = Layout::new(&a, (0..10).rev().collect()).unwrap();
    let out = route(&dag, &l, &a, &t, &RouterParams::default()).unwrap();
    assert_eq!(out.status, RouteStatus::Complete);
    assert_eq!(out.program.epr, 0);
    assert!(validate(&out.program, &a, dag.gates(), 10, &l, &out.final_layout).is_ok());
}

#[test]
fn deterministic_program() {
    let a = build_grid_arch(GridFamily::H, 2, 3, 4, 10).unwrap();
    let t = DistanceTables::new(&a).unwrap();
    let gates = gen_random(40, 400, 11).unwrap();
    let dag = CircuitDag::new(gates, 40).unwrap();
    let l = distroute::layout::random_layout(&a, &(0..96).collect::<Vec<_>>(), 40, 5).unwrap();
    let p = RouterParams::default();
    let x = route(&dag, &l, &a, &t, &p).unwrap();
    let y = route(&dag, &l, &a, &t, &p).unwrap();
    assert_eq!(x.program.to_text(&dag), y.program.to_text(&dag));
    assert_eq!(x.program, y.program);
}

#[test]
fn random_runs_validate() {
    for (family, rows, cols) in [(GridFamily::B, 2, 2), (GridFamily::H, 2, 3)] {
        let a = build_grid_arch(family, rows, cols, 4, 10).unwrap();
        let t = DistanceTables::new(&a).unwrap();
        let usable = distroute::layout::corner_removed_slots(&a);
        let usable: Vec<usize> = (0..a.num_slots()).filter(|s| !usable.contains(s)).collect();
        for seed in 0..6u64 {
            let n = 10 + (seed as usize * 7) % 30;
            let gates = gen_random(n, 60 + 40 * seed as usize, seed).unwrap();
            let dag = CircuitDag::new(gates, n).unwrap();
            let l = distroute::layout::random_layout(&a, &usable, n, seed).unwrap();
            let out = route(&dag, &l, &a, &t, &RouterParams::default()).unwrap();
            if out.status == RouteStatus::Complete {
                let rep = validate(&out.program, &a, dag.gates(), n, &l, &out.final_layout);
                assert!(rep.is_ok(), "{family:?} seed {seed}: {}", rep.to_json());
            }
            assert_eq!(out.status, RouteStatus::Complete, "{family:?} seed {seed}");
        }
    }
}
