//! Exit criteria. One PASS/FAIL line per criterion; the process fails if
//! any criterion fails.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use distroute::arch::{build_grid_arch, Architecture, DistanceTables, GridFamily};
use distroute::fixtures::running_example;
use distroute::layout::split_seed;
use distroute::router::CandidateKind;
use distroute::{ArchSpec, CircuitDag, LayoutOptions, RouteStatus, Router, RouterParams};
use distroute_cli::{
    ablation_configs, cost_sweep, flagged_gmean, gmean, run_one, run_suite, Config, Device, Run, RunRecord, Workload,
    DEFAULT_C_TELE,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, format!("took {:.2?}, limit {:.0?}", t, limit))
}

fn c1_running_example() -> Outcome {
    let start = Instant::now();
    let ex = running_example(10);
    let tables = DistanceTables::new(&ex.arch).map_err(|e| e.to_string())?;
    let params = RouterParams::default();
    let mut r = Router::new(&ex.dag, &ex.layout, &ex.arch, &tables, &params).map_err(|e| e.to_string())?;
    let (_, inter) = r.partition_front();
    let cands = r.teleport_candidates(&inter);
    let mut scores = Vec::new();
    for core in [2, 0, 4] {
        let c = cands
            .iter()
            .find(|c| c.qubit == 0 && c.next_core == core)
            .ok_or(format!("no candidate toward core {core}"))?;
        scores.push(c.score);
    }
    check(scores == [-16.0, 18.0, 1.0], format!("scores {scores:?}, want [-16, 18, 1]"))?;
    let best = r.best_teleport(&inter).ok_or("no move selected")?;
    check(
        best.kind == CandidateKind::GateDriven && best.qubit == 0 && best.next_core == 2,
        format!("selected q{} toward core {}", best.qubit, best.next_core),
    )?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("A/B/C = {scores:?}, A selected"))
}

fn flat_distances(arch: &Architecture) -> Vec<Vec<u32>> {
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

fn c2_distance_oracle() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for (family, rows, cols) in [(GridFamily::B, 2, 2), (GridFamily::H, 2, 3)] {
        let a = build_grid_arch(family, rows, cols, 4, 10).map_err(|e| e.to_string())?;
        let t = DistanceTables::new(&a).map_err(|e| e.to_string())?;
        let flat = flat_distances(&a);
        for (p, row) in flat.iter().enumerate() {
            for (q, &want) in row.iter().enumerate() {
                check(t.d_phys(p, q) == want, format!("{family:?}: d_phys({p},{q}) = {} vs {want}", t.d_phys(p, q)))?;
                pairs += 1;
            }
        }
    }
    let ex = running_example(10);
    let t = DistanceTables::new(&ex.arch).map_err(|e| e.to_string())?;
    let d = t.d_phys(ex.layout.phys(0), ex.layout.phys(1));
    check(d == 28, format!("running-example pair at {d}, want 28"))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!("{pairs} pairs equal, running-example pair = 28"))
}

fn c3_ghz25() -> Outcome {
    let start = Instant::now();
    let spec: ArchSpec = "bgrid:2x2:4x4".parse().map_err(|e| format!("{e:?}"))?;
    let works = [Workload::generated("ghz:25")?];
    let cfg = [Config::new("full", RouterParams::default(), LayoutOptions::default())];
    let runs = run_suite(&works, spec, &[0, 1, 2], &cfg, None, None)?;
    let eprs: Vec<usize> = runs.iter().map(|r| r.record.metrics.epr).collect();
    for r in &runs {
        check(r.record.status == RouteStatus::Complete, format!("seed {} aborted", r.record.seed))?;
        check(r.record.valid, format!("seed {} failed validation", r.record.seed))?;
        check(r.record.metrics.epr <= 3, format!("seed {} used {} EPR pairs", r.record.seed, r.record.metrics.epr))?;
    }
    within(start, Duration::from_secs(5))?;
    Ok(format!("EPR per seed {eprs:?}"))
}

/// 200 random circuits, 10..=60 qubits and 50..=600 CX, alternating
/// devices. Widths on the B-grid stop at its 48 corner-free slots.
fn fuzz_corpus() -> Vec<(Workload, ArchSpec, u64)> {
    let specs: [ArchSpec; 2] = ["bgrid:2x2:4x4".parse().unwrap(), "hgrid:2x3:4x4".parse().unwrap()];
    (0..200u64)
        .map(|i| {
            let r = split_seed(0x00AC_CE55, i);
            let spec = specs[(i % 2) as usize];
            let max_n = if i % 2 == 0 { 48 } else { 60 };
            let n = 10 + (r % (max_n - 9)) as usize;
            let cx = 50 + ((r >> 16) % 551) as usize;
            let seed = r >> 32;
            (Workload::generated(&format!("random:{n}:{cx}:{seed}")).unwrap(), spec, seed)
        })
        .collect()
}

struct Corpus {
    bfs: Vec<(Run, usize, usize, ArchSpec)>,
    topo: Vec<Run>,
}

fn run_corpus() -> Result<Corpus, String> {
    let base = RouterParams::default();
    let topo = RouterParams { topo_extended_set: true, ..RouterParams::default() };
    let layout = LayoutOptions::default();
    let mut out = Corpus { bfs: Vec::new(), topo: Vec::new() };
    for (w, spec, seed) in fuzz_corpus() {
        let cfgs = [Config::new("full", base.clone(), layout), Config::new("topo_ext", topo.clone(), layout)];
        let mut runs = run_suite(std::slice::from_ref(&w), spec, &[seed], &cfgs, None, None)?;
        out.topo.push(runs.pop().expect("two runs"));
        out.bfs.push((runs.pop().expect("two runs"), w.n_logical, w.gates.len(), spec));
    }
    Ok(out)
}

fn c4_fuzz(corpus: &Corpus, elapsed: Duration) -> Outcome {
    let mut complete = 0;
    for (run, ..) in &corpus.bfs {
        let r = &run.record;
        check(r.metrics.rollbacks <= r.params.max_rollbacks as usize, format!("{}: {} rollbacks", r.circuit, r.metrics.rollbacks))?;
        if r.status == RouteStatus::Complete {
            complete += 1;
            check(r.valid, format!("{} on {} seed {}: {} violations", r.circuit, r.arch, r.seed, r.violations.len()))?;
        }
    }
    check(elapsed < Duration::from_secs(120), format!("corpus took {elapsed:.2?}"))?;
    Ok(format!("{} runs, {complete} complete and valid, {:.1?}", corpus.bfs.len(), elapsed))
}

fn c5_determinism() -> Outcome {
    let spec: ArchSpec = "hgrid:2x3:4x4".parse().map_err(|e| format!("{e:?}"))?;
    let works = [Workload::generated("random:40:500:9")?, Workload::generated("qft:24")?];
    let cfg = [Config::new("full", RouterParams::default(), LayoutOptions::default())];
    let text = |runs: &[Run]| -> Result<Vec<String>, String> {
        runs.iter()
            .map(|r| {
                let w = works.iter().find(|w| w.name == r.record.circuit).expect("known circuit");
                let dag = CircuitDag::new(w.gates.clone(), w.n_logical).map_err(|e| e.to_string())?;
                Ok(r.program.to_text(&dag) + &serde_json::to_string(&r.record.metrics.epr).unwrap())
            })
            .collect()
    };
    let a = text(&run_suite(&works, spec, &[0, 1], &cfg, None, Some(1))?)?;
    let b = text(&run_suite(&works, spec, &[0, 1], &cfg, None, Some(1))?)?;
    let c = text(&run_suite(&works, spec, &[0, 1], &cfg, None, Some(4))?)?;
    check(a == b, "two single-thread invocations differ")?;
    check(a == c, "1 vs 4 threads differ")?;
    Ok(format!("{} programs identical across invocations and thread counts", a.len()))
}

fn c6_ablation() -> Outcome {
    let start = Instant::now();
    let spec: ArchSpec = "hgrid:2x3:4x4".parse().map_err(|e| format!("{e:?}"))?;
    let works = [(32, 11), (40, 12), (48, 13), (56, 14), (64, 15), (64, 16)]
        .iter()
        .map(|&(n, s)| Workload::generated(&format!("random:{n}:{}:{s}", 25 * n)))
        .collect::<Result<Vec<_>, _>>()?;
    let cfgs: Vec<Config> = ablation_configs(&RouterParams::default(), LayoutOptions::default())
        .into_iter()
        .filter(|c| ["full", "c_pen=0", "no_relief"].contains(&c.name.as_str()))
        .collect();
    let runs = run_suite(&works, spec, &[0, 1], &cfgs, None, None)?;
    let records: Vec<RunRecord> = runs.into_iter().map(|r| r.record).collect();
    let all = |name: &str| gmean(records.iter().filter(|r| r.config == name).map(|r| r.metrics.epr as f64)).unwrap_or(f64::NAN);
    let (full, no_cap) = (all("full"), all("c_pen=0"));
    let flagged = records.iter().filter(|r| r.config == "full" && r.flagged_iterations > 0).count();
    let (ff, fr) = (flagged_gmean(&records, "full").unwrap_or(f64::NAN), flagged_gmean(&records, "no_relief").unwrap_or(f64::NAN));
    let detail = format!(
        "gmean EPR: defaults {full:.1}, c_pen=0 {no_cap:.1}; over {flagged} flagged runs: defaults {ff:.1}, relief off {fr:.1}"
    );
    check(flagged > 0, format!("no core ever flagged; {detail}"))?;
    check(no_cap >= full, format!("c_pen=0 beats defaults; {detail}"))?;
    check(fr >= ff, format!("relief off beats defaults; {detail}"))?;
    within(start, Duration::from_secs(300))?;
    Ok(detail)
}

fn c7_extended_sets(corpus: &Corpus) -> Outcome {
    let done = |runs: &mut dyn Iterator<Item = &Run>| runs.filter(|r| r.record.status == RouteStatus::Complete && r.record.valid).count();
    let bfs = done(&mut corpus.bfs.iter().map(|(r, ..)| r));
    let topo = done(&mut corpus.topo.iter());
    let gb = gmean(corpus.bfs.iter().map(|(r, ..)| r.record.metrics.epr as f64)).unwrap_or(f64::NAN);
    let gt = gmean(corpus.topo.iter().map(|r| r.record.metrics.epr as f64)).unwrap_or(f64::NAN);
    println!("      extended set   complete   gmean EPR");
    println!("      bfs layers     {bfs:>8}   {gb:>9.2}");
    println!("      topological    {topo:>8}   {gt:>9.2}   ({:+.1}% vs bfs)", (gt / gb - 1.0) * 100.0);
    let n = corpus.bfs.len();
    check(bfs == n && topo == n, format!("bfs {bfs}/{n}, topo {topo}/{n} complete"))?;
    Ok(format!("both complete {n}/{n}"))
}

fn c8_cost_sweep(corpus: &Corpus) -> Outcome {
    let start = Instant::now();
    let records: Vec<RunRecord> = corpus.bfs.iter().map(|(r, ..)| r.record.clone()).collect();
    let pts = cost_sweep(&records, &DEFAULT_C_TELE);
    for (i, r) in records.iter().enumerate() {
        let c: Vec<i64> = pts.iter().map(|p| p.costs[i] as i64).collect();
        let x: Vec<i64> = DEFAULT_C_TELE.iter().map(|&v| v as i64).collect();
        let slope = (c[1] - c[0]) / (x[1] - x[0]);
        let intercept = c[0] - slope * x[0];
        for k in 0..x.len() {
            check(c[k] == intercept + slope * x[k], format!("{}: not affine", r.circuit))?;
        }
        check(slope == r.metrics.epr as i64, format!("{}: slope {slope} vs EPR {}", r.circuit, r.metrics.epr))?;
        check(intercept == 3 * r.metrics.swaps as i64, format!("{}: intercept {intercept} vs 3·SWAPs", r.circuit))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("{} records affine, slope = EPR, intercept = 3·SWAPs", records.len()))
}

fn c9_qft100() -> Outcome {
    let spec: ArchSpec = "hgrid:2x3:5x5".parse().map_err(|e| format!("{e:?}"))?;
    let dev = Device::new(spec, 10)?;
    let w = Workload::generated("qft:100")?;
    let dag = CircuitDag::new(w.gates.clone(), w.n_logical).map_err(|e| e.to_string())?;
    let params = RouterParams::default();
    let run = run_one(&w, &dag, &dev, "full", 0, &params, &LayoutOptions::default(), None)?;
    let r = &run.record;
    check(r.status == RouteStatus::Complete, "aborted")?;
    check(r.valid, "failed validation")?;
    let secs = r.timing.total_ms / 1e3;
    check(secs < 120.0, format!("took {secs:.1} s"))?;
    Ok(format!("EPR {}, SWAPs {}, {secs:.2} s including layout search", r.metrics.epr, r.metrics.swaps))
}

fn c10_guardrails(corpus: &Corpus) -> Outcome {
    let (mut worst_scored, mut worst_ops) = (0.0f64, 0.0f64);
    for (run, n, gates, spec) in &corpus.bfs {
        let dev = Device::new(*spec, run.record.params.w_link)?;
        let per_core = dev.arch.core_slots(0).len();
        let p = dev.arch.num_slots();
        let scored_bound = 4 * (per_core * n + p);
        let ops_bound = 8 * gates * dev.tables.diameter() as usize;
        let scored = run.record.max_scored_per_iteration;
        let ops = run.program.inserted_ops();
        check(scored <= scored_bound, format!("{}: {scored} scored in one iteration, bound {scored_bound}", run.record.circuit))?;
        check(ops <= ops_bound, format!("{}: {ops} inserted ops, bound {ops_bound}", run.record.circuit))?;
        worst_scored = worst_scored.max(scored as f64 / scored_bound as f64);
        worst_ops = worst_ops.max(ops as f64 / ops_bound as f64);
    }
    Ok(format!("peak use of bound: scored {:.1}%, inserted {:.2}%", worst_scored * 100.0, worst_ops * 100.0))
}

fn report(id: u32, name: &str, outcome: Outcome, failures: &mut u32) {
    match outcome {
        Ok(detail) => println!("PASS  {id:>2}  {name}: {detail}"),
        Err(why) => {
            *failures += 1;
            println!("FAIL  {id:>2}  {name}: {why}");
        }
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    report(1, "running-example candidate scores", c1_running_example(), &mut failures);
    report(2, "hierarchical distances equal flat Dijkstra", c2_distance_oracle(), &mut failures);
    report(3, "GHZ-25 on bgrid:2x2:4x4", c3_ghz25(), &mut failures);

    let start = Instant::now();
    let corpus = run_corpus();
    let elapsed = start.elapsed();
    match &corpus {
        Ok(c) => report(4, "fuzz corpus legality", c4_fuzz(c, elapsed), &mut failures),
        Err(e) => report(4, "fuzz corpus legality", Err(e.clone()), &mut failures),
    }
    report(5, "determinism", c5_determinism(), &mut failures);
    report(6, "ablation direction", c6_ablation(), &mut failures);
    let with_corpus = |f: fn(&Corpus) -> Outcome| corpus.as_ref().map_err(|e| e.clone()).and_then(f);
    report(7, "BFS vs topological extended set", with_corpus(c7_extended_sets), &mut failures);
    report(8, "cost sweep is affine", with_corpus(c8_cost_sweep), &mut failures);
    report(9, "QFT-100 on hgrid:2x3:5x5", c9_qft100(), &mut failures);
    report(10, "work and output guardrails", with_corpus(c10_guardrails), &mut failures);

    println!("{} of 10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
