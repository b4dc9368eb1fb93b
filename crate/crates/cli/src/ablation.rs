//! One mechanism off per row, everything else at its default.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use distroute::{LayoutOptions, RouteStatus, RouterParams};

use crate::record::RunRecord;
use crate::suite::{gmean, summarize, Config};

/// full, w_e=0, c_pen=0, w_h=0, relief off, topological extended set.
pub fn ablation_configs(base: &RouterParams, layout: LayoutOptions) -> Vec<Config> {
    let with = |name: &str, f: &dyn Fn(&mut RouterParams)| {
        let mut p = base.clone();
        f(&mut p);
        Config::new(name, p, layout)
    };
    vec![
        with("full", &|_| {}),
        with("w_e=0", &|p| p.w_e = 0.0),
        with("c_pen=0", &|p| p.c_pen = 0.0),
        with("w_h=0", &|p| p.w_h = 0.0),
        with("no_relief", &|p| p.disable_relief = true),
        with("topo_ext", &|p| p.topo_extended_set = true),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationRow {
    pub config: String,
    pub gmean_epr: Option<f64>,
    /// Relative to the `full` row, in percent.
    pub delta_pct: Option<f64>,
}

pub fn ablation_rows(records: &[RunRecord]) -> Vec<AblationRow> {
    let s = summarize(records);
    let full = s.configs.iter().find(|c| c.config == "full").and_then(|c| c.gmean_epr);
    s.configs
        .iter()
        .map(|c| AblationRow {
            config: c.config.clone(),
            gmean_epr: c.gmean_epr,
            delta_pct: match (c.gmean_epr, full) {
                (Some(x), Some(f)) if f > 0.0 => Some((x / f - 1.0) * 100.0),
                _ => None,
            },
        })
        .collect()
}

/// gmean EPR of `config` over the (circuit, seed) runs whose `full` run saw
/// a flagged core and where both runs completed.
pub fn flagged_gmean(records: &[RunRecord], config: &str) -> Option<f64> {
    let flagged = |r: &RunRecord| r.config == "full" && r.flagged_iterations > 0 && r.status == RouteStatus::Complete;
    gmean(records.iter().filter(|r| flagged(r)).filter_map(|f| {
        records
            .iter()
            .find(|r| r.config == config && r.circuit == f.circuit && r.seed == f.seed && r.status == RouteStatus::Complete)
            .map(|r| r.metrics.epr as f64)
    }))
}

pub fn ablation_table(rows: &[AblationRow]) -> String {
    let mut out = format!("{:<10} {:>10} {:>8}\n", "config", "gmean_epr", "delta");
    for r in rows {
        let g = r.gmean_epr.map_or("-".into(), |v| format!("{v:.2}"));
        let d = r.delta_pct.map_or("-".into(), |v| format!("{v:+.1}%"));
        let _ = writeln!(out, "{:<10} {:>10} {:>8}", r.config, g, d);
    }
    out
}
