//! Teleport-cost sensitivity from stored counts; nothing is re-routed.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::record::RunRecord;
use crate::suite::gmean;

pub const DEFAULT_C_TELE: [u32; 4] = [10, 20, 50, 100];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub c_tele: u32,
    /// Per record, in input order.
    pub costs: Vec<u64>,
    pub gmean_cost: Option<f64>,
}

/// `c_swap·swaps + c_tele·epr` for every record at every `c_tele`, with
/// `c_swap` taken from each record's params.
pub fn cost_sweep(records: &[RunRecord], c_tele_values: &[u32]) -> Vec<SweepPoint> {
    c_tele_values
        .iter()
        .map(|&c_tele| {
            let costs: Vec<u64> = records
                .iter()
                .map(|r| r.params.c_swap as u64 * r.metrics.swaps as u64 + c_tele as u64 * r.metrics.epr as u64)
                .collect();
            let gmean_cost = gmean(costs.iter().map(|&c| c as f64));
            SweepPoint { c_tele, costs, gmean_cost }
        })
        .collect()
}

/// Percentage by which `ours` beats `theirs` at each sweep point, from the
/// ratio of gmean costs (positive means `ours` is cheaper).
pub fn sweep_deltas(ours: &[SweepPoint], theirs: &[SweepPoint]) -> Vec<Option<f64>> {
    ours.iter()
        .zip(theirs)
        .map(|(a, b)| match (a.gmean_cost, b.gmean_cost) {
            (Some(x), Some(y)) if y > 0.0 => Some((1.0 - x / y) * 100.0),
            _ => None,
        })
        .collect()
}

pub fn sweep_table(points: &[SweepPoint]) -> String {
    let mut out = String::from("c_tele ");
    for p in points {
        let _ = write!(out, "{:>10}", p.c_tele);
    }
    out.push_str("\ngmean  ");
    for p in points {
        let _ = write!(out, "{:>10}", p.gmean_cost.map_or("-".into(), |v| format!("{v:.1}")));
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use distroute::{LayoutOptions, Metrics, RouteStatus, RouterParams};

    fn record(epr: usize, swaps: usize) -> RunRecord {
        RunRecord {
            circuit: "c".into(),
            arch: "bgrid:2x2:4x4".into(),
            config: "full".into(),
            seed: 0,
            params: RouterParams::default(),
            layout: LayoutOptions::default(),
            fixed_layout: false,
            metrics: Metrics { epr, swaps, ..Metrics::default() },
            status: RouteStatus::Complete,
            valid: true,
            violations: Vec::new(),
            flagged_iterations: 0,
            max_scored_per_iteration: 0,
            timing: Default::default(),
        }
    }

    #[test]
    fn zero_epr_cost_is_flat() {
        let pts = cost_sweep(&[record(0, 7)], &DEFAULT_C_TELE);
        assert!(pts.iter().all(|p| p.costs == vec![21]));
    }

    #[test]
    fn deltas_are_gmean_cost_ratios() {
        // ours: costs 3+10=13 and 6+20=26 at c_tele 10, gmean sqrt(338)
        // theirs: 3+20=23 and 6+40=46, gmean sqrt(1058)
        let ours = cost_sweep(&[record(1, 1), record(2, 2)], &[10]);
        let theirs = cost_sweep(&[record(2, 1), record(4, 2)], &[10]);
        let d = sweep_deltas(&ours, &theirs)[0].unwrap();
        let expected = (1.0 - (338f64).sqrt() / (1058f64).sqrt()) * 100.0;
        assert!((d - expected).abs() < 1e-9);
    }
}
