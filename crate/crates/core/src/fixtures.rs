//! The six-core running example: q0 at (0,2) of core 1, q1 at (1,1) of
//! core 5, one pending CX between them, and core 4 packed except for
//! (0,0) and (0,3).

use crate::arch::{ArchSpec, Architecture, GridFamily};
use crate::circuit::{CircuitDag, Gate};
use crate::layout::Layout;

pub struct RunningExample {
    pub arch: Architecture,
    pub dag: CircuitDag,
    pub layout: Layout,
}

pub fn running_example(w_link: u32) -> RunningExample {
    let spec = ArchSpec { family: GridFamily::H, core_rows: 2, core_cols: 3, m: 4 };
    let arch = spec.build(w_link).expect("published topology");
    let grid = *arch.grid().expect("grid device");
    let mut slots = vec![grid.slot(1, 0, 2), grid.slot(5, 1, 1)];
    for r in 0..4 {
        for c in 0..4 {
            if (r, c) != (0, 0) && (r, c) != (0, 3) {
                slots.push(grid.slot(4, r, c));
            }
        }
    }
    let n = slots.len();
    let layout = Layout::new(&arch, slots).expect("distinct slots");
    let dag = CircuitDag::new(vec![Gate::two("cx", 0, 1)], n).expect("valid gate");
    RunningExample { arch, dag, layout }
}
