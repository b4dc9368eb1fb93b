//! Browser bindings. Every export takes and returns JSON strings; the
//! `*_json` functions hold the logic so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use distroute::circuit::CircuitFamily;
use distroute::fixtures::running_example;
use distroute::layout::corner_removed_slots;
use distroute::router::TeleportCandidate;
use distroute::{
    compute_metrics, initial_layout, route, validate, ArchSpec, Architecture, CircuitDag, DistanceTables, LayoutOptions,
    Metrics, RouteStatus, RoutedOp, Router, RouterParams,
};

/// Largest circuit the page will route.
const MAX_GATES: usize = 20_000;

#[derive(Serialize)]
struct SlotView {
    slot: usize,
    core: usize,
    x: usize,
    y: usize,
    port: bool,
    corner_removed: bool,
    /// `d_phys` from the probe slot.
    d: u32,
}

#[derive(Serialize)]
struct DeviceView {
    spec: String,
    width: usize,
    height: usize,
    diameter: u32,
    slots: Vec<SlotView>,
    edges: Vec<(usize, usize)>,
    links: Vec<(usize, usize)>,
}

fn device_view(arch: &Architecture, tables: &DistanceTables, spec: String, from: usize) -> Result<DeviceView, String> {
    let g = *arch.grid().ok_or("not a grid device")?;
    if from >= arch.num_slots() {
        return Err(format!("slot {from} out of range"));
    }
    let removed = corner_removed_slots(arch);
    let slots = (0..arch.num_slots())
        .map(|s| {
            let (cr, cc, r, c) = g.coords(s);
            SlotView {
                slot: s,
                core: arch.core_of(s),
                x: cc * (g.m + 1) + c,
                y: cr * (g.m + 1) + r,
                port: arch.is_port(s),
                corner_removed: removed.contains(&s),
                d: tables.d_phys(from, s),
            }
        })
        .collect();
    Ok(DeviceView {
        spec,
        width: g.core_cols * (g.m + 1) - 1,
        height: g.core_rows * (g.m + 1) - 1,
        diameter: tables.diameter(),
        slots,
        edges: arch.cores().iter().flat_map(|c| c.edges.iter().copied()).collect(),
        links: arch.links().iter().map(|l| (l.port_a, l.port_b)).collect(),
    })
}

fn build(spec: &str, w_link: u32) -> Result<(ArchSpec, Architecture, DistanceTables), String> {
    let spec: ArchSpec = spec.parse().map_err(|e| format!("{e}"))?;
    let arch = spec.build(w_link).map_err(|e| format!("{e}"))?;
    let tables = DistanceTables::new(&arch).map_err(|e| format!("{e}"))?;
    Ok((spec, arch, tables))
}

fn params_from(json: &str) -> Result<RouterParams, String> {
    let p: RouterParams = if json.trim().is_empty() {
        RouterParams::default()
    } else {
        serde_json::from_str(json).map_err(|e| e.to_string())?
    };
    p.validate()?;
    Ok(p)
}

/// Device layout with `d_phys` from `from` to every slot.
pub fn device_json(spec: &str, w_link: u32, from: usize) -> Result<String, String> {
    let (spec, arch, tables) = build(spec, w_link)?;
    let view = device_view(&arch, &tables, spec.to_string(), from)?;
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ScoreView {
    params: RouterParams,
    device: DeviceView,
    q0: usize,
    q1: usize,
    candidates: Vec<TeleportCandidate>,
    /// Index into `candidates` of the move the router applies.
    selected: Option<usize>,
}

/// Gate-driven and relief candidates for the six-core running example,
/// scored under `params_json` (missing fields take their defaults).
pub fn score_example_json(params_json: &str) -> Result<String, String> {
    let params = params_from(params_json)?;
    let ex = running_example(params.w_link);
    let tables = DistanceTables::new(&ex.arch).map_err(|e| format!("{e}"))?;
    let mut r = Router::new(&ex.dag, &ex.layout, &ex.arch, &tables, &params).map_err(|e| format!("{e}"))?;
    let (_, inter) = r.partition_front();
    let mut candidates = r.teleport_candidates(&inter);
    candidates.extend(r.relief_candidates());
    let best = r.best_teleport(&inter);
    let selected = best.and_then(|b| candidates.iter().position(|c| *c == b));
    let q0 = ex.layout.phys(0);
    let view = ScoreView {
        params: params.clone(),
        device: device_view(&ex.arch, &tables, "hgrid:2x3:4x4".into(), q0)?,
        q0,
        q1: ex.layout.phys(1),
        candidates,
        selected,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum OpView {
    Gate1 { gate: usize, label: String, slot: usize },
    Gate2 { gate: usize, label: String, a: usize, b: usize },
    Swap { a: usize, b: usize },
    Teleport { qubit: usize, link: usize, from: usize, to: usize },
}

#[derive(Serialize)]
struct RouteView {
    device: DeviceView,
    circuit: String,
    n_logical: usize,
    /// Slot of each logical qubit before the first op.
    initial: Vec<usize>,
    ops: Vec<OpView>,
    metrics: Metrics,
    complete: bool,
    valid: bool,
}

/// Lay out and route a generated circuit; the page replays `ops` one at a
/// time on top of `initial`.
pub fn route_json(spec: &str, circuit: &str, seed: u64, params_json: &str) -> Result<String, String> {
    let params = params_from(params_json)?;
    let (spec, arch, tables) = build(spec, params.w_link)?;
    let family: CircuitFamily = circuit.parse().map_err(|e| format!("{e}"))?;
    let (gates, n) = family.generate().map_err(|e| format!("{e}"))?;
    if gates.len() > MAX_GATES {
        return Err(format!("{} gates is more than this page routes ({MAX_GATES})", gates.len()));
    }
    let dag = CircuitDag::new(gates, n).map_err(|e| format!("{e}"))?;
    let layout = initial_layout(&dag, &arch, &tables, &params, seed, &LayoutOptions::default()).map_err(|e| format!("{e}"))?;
    let out = route(&dag, &layout, &arch, &tables, &params).map_err(|e| format!("{e}"))?;
    let valid = validate(&out.program, &arch, dag.gates(), n, &layout, &out.final_layout).is_ok();
    let label = |g: usize| dag.gate(g).label.clone();
    let ops = out
        .program
        .ops
        .iter()
        .map(|op| match *op {
            RoutedOp::Gate1 { gate, slot } => OpView::Gate1 { gate, label: label(gate), slot },
            RoutedOp::Gate2 { gate, a, b } => OpView::Gate2 { gate, label: label(gate), a, b },
            RoutedOp::Swap { a, b } => OpView::Swap { a, b },
            RoutedOp::Teleport { qubit, link, from, to } => OpView::Teleport { qubit, link, from, to },
        })
        .collect();
    let view = RouteView {
        device: device_view(&arch, &tables, spec.to_string(), 0)?,
        circuit: family.to_string(),
        n_logical: n,
        initial: layout.placement().to_vec(),
        ops,
        metrics: compute_metrics(&out.program, &params, 0.0),
        complete: out.status == RouteStatus::Complete,
        valid,
    };
    serde_json::to_string(&view).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn device(spec: &str, w_link: u32, from: usize) -> Result<String, JsValue> {
    js(device_json(spec, w_link, from))
}

#[wasm_bindgen]
pub fn score_example(params_json: &str) -> Result<String, JsValue> {
    js(score_example_json(params_json))
}

#[wasm_bindgen]
pub fn route_circuit(spec: &str, circuit: &str, seed: u64, params_json: &str) -> Result<String, JsValue> {
    js(route_json(spec, circuit, seed, params_json))
}
