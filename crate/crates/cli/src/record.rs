//! One routing run and its JSON record.

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use distroute::circuit::{parse_qasm, CircuitFamily};
use distroute::{
    compute_metrics, initial_layout, route, validate, ArchSpec, Architecture, CircuitDag, DistanceTables, Gate, Layout,
    LayoutOptions, Metrics, RouteStatus, RoutedProgram, RouterParams, Violation,
};

/// A named circuit ready to route.
#[derive(Clone, Debug)]
pub struct Workload {
    pub name: String,
    pub gates: Vec<Gate>,
    pub n_logical: usize,
}

impl Workload {
    /// `ghz:25`, `qft:64`, `graphstate:30` or `random:n:cx[:seed]`.
    pub fn generated(spec: &str) -> Result<Self, String> {
        let family: CircuitFamily = spec.parse().map_err(|e| format!("{e}"))?;
        let (gates, n_logical) = family.generate().map_err(|e| format!("{e}"))?;
        Ok(Workload { name: family.to_string(), gates, n_logical })
    }

    pub fn from_qasm(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let (gates, n_logical) = parse_qasm(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(Workload { name: path.display().to_string(), gates, n_logical })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    /// Layout search, all of its routing passes included.
    pub layout_ms: f64,
    /// The final routing pass.
    pub route_ms: f64,
    pub validate_ms: f64,
    pub total_ms: f64,
}

/// Everything needed to reproduce a run, plus what it produced.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub circuit: String,
    pub arch: String,
    pub config: String,
    pub seed: u64,
    pub params: RouterParams,
    pub layout: LayoutOptions,
    /// The initial placement came from `--layout-file`.
    pub fixed_layout: bool,
    pub metrics: Metrics,
    pub status: RouteStatus,
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub flagged_iterations: u64,
    pub max_scored_per_iteration: usize,
    pub timing: Timing,
}

/// A device built for one link weight.
pub struct Device {
    pub spec: ArchSpec,
    pub arch: Architecture,
    pub tables: DistanceTables,
}

impl Device {
    pub fn new(spec: ArchSpec, w_link: u32) -> Result<Self, String> {
        let arch = spec.build(w_link).map_err(|e| format!("{e}"))?;
        let tables = DistanceTables::new(&arch).map_err(|e| format!("{e}"))?;
        Ok(Device { spec, arch, tables })
    }
}

pub struct Run {
    pub record: RunRecord,
    pub program: RoutedProgram,
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

/// Lay out (unless `fixed` is given), route and validate one circuit.
#[allow(clippy::too_many_arguments)]
pub fn run_one(
    work: &Workload,
    dag: &CircuitDag,
    device: &Device,
    config: &str,
    seed: u64,
    params: &RouterParams,
    layout: &LayoutOptions,
    fixed: Option<&Layout>,
) -> Result<Run, String> {
    let start = Instant::now();
    let initial = match fixed {
        Some(l) => l.clone(),
        None => initial_layout(dag, &device.arch, &device.tables, params, seed, layout).map_err(|e| format!("{e}"))?,
    };
    let layout_ms = ms(start);
    let t = Instant::now();
    let out = route(dag, &initial, &device.arch, &device.tables, params).map_err(|e| format!("{e}"))?;
    let route_ms = ms(t);
    let t = Instant::now();
    let report = validate(&out.program, &device.arch, dag.gates(), dag.n_logical(), &initial, &out.final_layout);
    let validate_ms = ms(t);
    let record = RunRecord {
        circuit: work.name.clone(),
        arch: device.spec.to_string(),
        config: config.to_string(),
        seed,
        params: params.clone(),
        layout: *layout,
        fixed_layout: fixed.is_some(),
        metrics: compute_metrics(&out.program, params, route_ms),
        status: out.status,
        valid: report.is_ok(),
        violations: report.violations,
        flagged_iterations: out.stats.flagged_iterations,
        max_scored_per_iteration: out.stats.max_scored_per_iteration,
        timing: Timing { layout_ms, route_ms, validate_ms, total_ms: ms(start) },
    };
    Ok(Run { record, program: out.program })
}
