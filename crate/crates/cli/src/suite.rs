//! Batch runs over circuits × seeds × configurations.

use std::collections::BTreeMap;
use std::fmt::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use distroute::{ArchSpec, CircuitDag, Layout, LayoutOptions, RouteStatus, RouterParams};

use crate::record::{run_one, Device, Run, RunRecord, Workload};

#[derive(Clone, Debug)]
pub struct Config {
    pub name: String,
    pub params: RouterParams,
    pub layout: LayoutOptions,
}

impl Config {
    pub fn new(name: &str, params: RouterParams, layout: LayoutOptions) -> Self {
        Config { name: name.to_string(), params, layout }
    }
}

/// Geometric mean with zeros counted as 1. `None` when empty.
pub fn gmean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (mut sum, mut n) = (0.0, 0usize);
    for v in values {
        sum += v.max(1.0).ln();
        n += 1;
    }
    (n > 0).then(|| (sum / n as f64).exp())
}

/// Every (config, circuit, seed) run, in that nesting order no matter how
/// many threads do the work. `threads = None` uses the global pool.
pub fn run_suite(
    works: &[Workload],
    spec: ArchSpec,
    seeds: &[u64],
    configs: &[Config],
    fixed: Option<&Layout>,
    threads: Option<usize>,
) -> Result<Vec<Run>, String> {
    let dags = works
        .iter()
        .map(|w| CircuitDag::new(w.gates.clone(), w.n_logical).map_err(|e| format!("{}: {e}", w.name)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut devices: BTreeMap<u32, Device> = BTreeMap::new();
    for c in configs {
        c.params.validate()?;
        if let std::collections::btree_map::Entry::Vacant(e) = devices.entry(c.params.w_link) {
            e.insert(Device::new(spec, c.params.w_link)?);
        }
    }
    let jobs: Vec<(usize, usize, u64)> = (0..configs.len())
        .flat_map(|c| (0..works.len()).flat_map(move |w| seeds.iter().map(move |&s| (c, w, s))))
        .collect();
    let work = || {
        jobs.par_iter()
            .map(|&(c, w, seed)| {
                let cfg = &configs[c];
                let dev = &devices[&cfg.params.w_link];
                run_one(&works[w], &dags[w], dev, &cfg.name, seed, &cfg.params, &cfg.layout, fixed)
            })
            .collect::<Result<Vec<Run>, String>>()
    };
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| e.to_string())?
            .install(work),
        None => work(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSummary {
    pub config: String,
    pub circuit: String,
    /// Best EPR over the seeds that completed.
    pub best_epr: Option<usize>,
    pub best_seed: Option<u64>,
    pub aborted_seeds: Vec<u64>,
    /// False when every seed aborted.
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigSummary {
    pub config: String,
    /// Over converged circuits' best-of-seeds EPR, zeros counted as 1.
    pub gmean_epr: Option<f64>,
    pub non_convergent: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub circuits: Vec<CircuitSummary>,
    pub configs: Vec<ConfigSummary>,
}

/// Best-of-seeds per (config, circuit) and suite gmeans per config, in
/// first-seen order.
pub fn summarize(records: &[RunRecord]) -> Summary {
    let mut circuits: Vec<CircuitSummary> = Vec::new();
    for r in records {
        let i = match circuits.iter().position(|c| c.config == r.config && c.circuit == r.circuit) {
            Some(i) => i,
            None => {
                circuits.push(CircuitSummary {
                    config: r.config.clone(),
                    circuit: r.circuit.clone(),
                    best_epr: None,
                    best_seed: None,
                    aborted_seeds: Vec::new(),
                    converged: false,
                });
                circuits.len() - 1
            }
        };
        let c = &mut circuits[i];
        if r.status == RouteStatus::Aborted {
            c.aborted_seeds.push(r.seed);
            continue;
        }
        c.converged = true;
        if c.best_epr.is_none_or(|b| r.metrics.epr < b) {
            c.best_epr = Some(r.metrics.epr);
            c.best_seed = Some(r.seed);
        }
    }
    let mut configs: Vec<ConfigSummary> = Vec::new();
    for c in &circuits {
        if !configs.iter().any(|s| s.config == c.config) {
            let rows = circuits.iter().filter(|x| x.config == c.config);
            configs.push(ConfigSummary {
                config: c.config.clone(),
                gmean_epr: gmean(rows.clone().filter_map(|x| x.best_epr).map(|e| e as f64)),
                non_convergent: rows.filter(|x| !x.converged).map(|x| x.circuit.clone()).collect(),
            });
        }
    }
    Summary { circuits, configs }
}

pub fn records_table(records: &[RunRecord]) -> String {
    let mut out = format!(
        "{:<24} {:<10} {:>6} {:>7} {:>7} {:>8} {:>4} {:>6} {:>9} {:<8} {}\n",
        "circuit", "config", "seed", "epr", "swaps", "cost", "rb", "relief", "route_ms", "status", "valid"
    );
    for r in records {
        let m = &r.metrics;
        let status = match r.status {
            RouteStatus::Complete => "complete",
            RouteStatus::Aborted => "ABORTED",
        };
        let _ = writeln!(
            out,
            "{:<24} {:<10} {:>6} {:>7} {:>7} {:>8} {:>4} {:>6} {:>9.1} {:<8} {}",
            r.circuit, r.config, r.seed, m.epr, m.swaps, m.cost, m.rollbacks, m.relief_moves, r.timing.route_ms, status, r.valid
        );
    }
    out
}

pub fn summary_table(s: &Summary) -> String {
    let mut out = format!("{:<24} {:<10} {:>8} {:>9} {}\n", "circuit", "config", "best_epr", "best_seed", "aborted");
    for c in &s.circuits {
        let best = c.best_epr.map_or("-".into(), |e| e.to_string());
        let seed = c.best_seed.map_or("-".into(), |e| e.to_string());
        let note = if c.converged { String::new() } else { " (non-convergent)".into() };
        let _ = writeln!(out, "{:<24} {:<10} {:>8} {:>9} {:?}{note}", c.circuit, c.config, best, seed, c.aborted_seeds);
    }
    for g in &s.configs {
        let gm = g.gmean_epr.map_or("-".into(), |v| format!("{v:.2}"));
        let _ = writeln!(out, "gmean EPR [{}] = {gm} (zero EPR counted as 1)", g.config);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gmean_of_eight_and_two_is_four() {
        assert!((gmean([8.0, 2.0]).unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(gmean([0.0, 1.0]), Some(1.0));
        assert_eq!(gmean(std::iter::empty()), None);
    }
}
