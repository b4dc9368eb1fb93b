//! Command-line knobs shared by every subcommand.

use clap::Args;

use distroute::{LayoutOptions, RouterParams};

/// Router parameters and ablation switches. Unset flags keep the defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct ParamArgs {
    #[arg(long)]
    pub no_relief: bool,
    #[arg(long)]
    pub no_cap_penalty: bool,
    #[arg(long)]
    pub no_hop: bool,
    #[arg(long)]
    pub no_lookahead: bool,
    /// Plain topological extended set instead of BFS layers.
    #[arg(long)]
    pub topo_extset: bool,
    #[arg(long)]
    pub no_corner_removal: bool,
    #[arg(long)]
    pub c_tele: Option<u32>,
    #[arg(long)]
    pub c_swap: Option<u32>,
    #[arg(long)]
    pub tau: Option<u32>,
    #[arg(long)]
    pub c_pen: Option<f64>,
    #[arg(long)]
    pub w_link: Option<u32>,
    #[arg(long)]
    pub w_h: Option<f64>,
    #[arg(long)]
    pub w_e: Option<f64>,
    /// Extended-set capacity.
    #[arg(long)]
    pub ext_cap: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Stalled iterations before a rollback.
    #[arg(long)]
    pub deadlock: Option<u32>,
    #[arg(long)]
    pub max_rollbacks: Option<u32>,
    #[arg(long)]
    pub theta_d: Option<u32>,
    #[arg(long)]
    pub theta_f: Option<u32>,
    #[arg(long)]
    pub b_r: Option<f64>,
    /// Random starting placements tried by the layout search.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Forward routing passes per layout trial.
    #[arg(long)]
    pub passes: Option<usize>,
}

impl ParamArgs {
    pub fn params(&self) -> Result<RouterParams, String> {
        let mut p = RouterParams::default();
        macro_rules! set {
            ($($f:ident),*) => { $(if let Some(v) = self.$f { p.$f = v; })* };
        }
        set!(c_tele, c_swap, tau, c_pen, w_link, w_h, w_e, ext_cap, gamma, deadlock, max_rollbacks, theta_d, theta_f, b_r);
        p.disable_relief = self.no_relief;
        p.disable_capacity = self.no_cap_penalty;
        p.disable_hop = self.no_hop;
        p.disable_lookahead = self.no_lookahead;
        p.topo_extended_set = self.topo_extset;
        p.validate()?;
        Ok(p)
    }

    pub fn layout(&self) -> LayoutOptions {
        let d = LayoutOptions::default();
        LayoutOptions {
            trials: self.trials.unwrap_or(d.trials),
            passes: self.passes.unwrap_or(d.passes),
            corner_removal: !self.no_corner_removal,
        }
    }
}
