use serde::{Deserialize, Serialize};

/// Cost model and heuristic knobs. Defaults follow the published table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RouterParams {
    pub c_swap: u32,
    pub c_tele: u32,
    /// Free-slot threshold below which the capacity penalty applies.
    pub tau: u32,
    pub c_pen: f64,
    pub w_link: u32,
    pub w_h: f64,
    pub w_e: f64,
    /// Extended-set capacity `L`.
    pub ext_cap: usize,
    pub gamma: f64,
    /// Stalled iterations before a rollback.
    pub deadlock: u32,
    pub max_rollbacks: u32,
    pub theta_d: u32,
    pub theta_f: u32,
    /// Relief bonus per unit of demand–capacity imbalance.
    pub b_r: f64,
    pub disable_lookahead: bool,
    pub disable_capacity: bool,
    pub disable_hop: bool,
    pub disable_relief: bool,
    /// Fill the inter-core extended set in plain topological order instead
    /// of BFS layers.
    pub topo_extended_set: bool,
}

impl Default for RouterParams {
    fn default() -> Self {
        RouterParams {
            c_swap: 3,
            c_tele: 10,
            tau: 3,
            c_pen: 15.0,
            w_link: 10,
            w_h: 5.0,
            w_e: 0.25,
            ext_cap: 20,
            gamma: 0.9,
            deadlock: 50,
            max_rollbacks: 50,
            theta_d: 3,
            theta_f: 2,
            b_r: 10.0,
            disable_lookahead: false,
            disable_capacity: false,
            disable_hop: false,
            disable_relief: false,
            topo_extended_set: false,
        }
    }
}

impl RouterParams {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [("c_pen", self.c_pen), ("w_h", self.w_h), ("w_e", self.w_e), ("b_r", self.b_r)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(format!("{name} must be a finite non-negative number"));
            }
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err("gamma must lie in (0, 1]".into());
        }
        if self.w_link == 0 {
            return Err("w_link must be positive".into());
        }
        if self.deadlock == 0 {
            return Err("deadlock limit must be positive".into());
        }
        Ok(())
    }

    pub(crate) fn eff_w_e(&self) -> f64 {
        if self.disable_lookahead {
            0.0
        } else {
            self.w_e
        }
    }

    pub(crate) fn eff_c_pen(&self) -> f64 {
        if self.disable_capacity {
            0.0
        } else {
            self.c_pen
        }
    }

    pub(crate) fn eff_w_h(&self) -> f64 {
        if self.disable_hop {
            0.0
        } else {
            self.w_h
        }
    }

    /// `c_swap·swaps + c_tele·epr`.
    pub fn cost(&self, swaps: usize, epr: usize) -> u64 {
        self.c_swap as u64 * swaps as u64 + self.c_tele as u64 * epr as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_table() {
        let p = RouterParams::default();
        assert_eq!((p.c_swap, p.c_tele, p.tau, p.w_link, p.ext_cap), (3, 10, 3, 10, 20));
        assert_eq!((p.c_pen, p.w_h, p.w_e, p.gamma), (15.0, 5.0, 0.25, 0.9));
        assert_eq!((p.deadlock, p.max_rollbacks, p.theta_d, p.theta_f), (50, 50, 3, 2));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_bad_gamma() {
        let p = RouterParams { gamma: 0.0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = RouterParams { gamma: 1.0, ..Default::default() };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn cost_formula() {
        let p = RouterParams::default();
        assert_eq!(p.cost(16, 2), 68);
        assert_eq!(p.cost(14, 1), 52);
    }

    #[test]
    fn partial_json_uses_defaults() {
        let p: RouterParams = serde_json::from_str(r#"{"c_tele": 50}"#).unwrap();
        assert_eq!(p.c_tele, 50);
        assert_eq!(p.tau, 3);
    }
}
