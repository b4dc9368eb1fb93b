//! The routing loop: drain the front, partition it, apply one intra-core
//! SWAP or one teleport, and checkpoint on progress. After `deadlock`
//! stalled iterations the last checkpoint is restored and the oldest front
//! gate is forced through along shortest paths.

mod extended;
mod intra;
mod params;
mod paths;
mod recovery;
mod teleport;

use serde::{Deserialize, Serialize};

pub use extended::ExtendedSetEntry;
pub use params::RouterParams;
pub use teleport::{CandidateKind, TeleportCandidate};

use crate::arch::{Architecture, CoreId, DistanceTables};
use crate::circuit::{CircuitDag, DagState, GateId, Operands};
use crate::error::RouteError;
use crate::layout::Layout;
use crate::program::{RoutedOp, RoutedProgram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteStatus {
    Complete,
    Aborted,
}

/// Work counters, mostly for complexity guardrails.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteStats {
    pub iterations: u64,
    pub swap_moves: u64,
    pub teleport_moves: u64,
    pub forced_recoveries: u64,
    /// Teleport-scoring iterations that saw at least one flagged core.
    pub flagged_iterations: u64,
    pub scored_candidates: u64,
    /// Largest number of candidates scored in one iteration.
    pub max_scored_per_iteration: usize,
}

#[derive(Clone, Debug)]
pub struct RouteOutcome {
    pub program: RoutedProgram,
    pub final_layout: Layout,
    pub status: RouteStatus,
    pub stats: RouteStats,
}

/// Result of one loop iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Continue,
    Done,
    Aborted,
}

#[derive(Clone, Debug)]
struct Checkpoint {
    layout: Layout,
    state: DagState,
    op_count: usize,
    relief_moves: usize,
}

/// Single-run routing state. `route` drives it to completion; the
/// phase methods are public so individual decisions can be inspected.
pub struct Router<'a> {
    dag: &'a CircuitDag,
    arch: &'a Architecture,
    tables: &'a DistanceTables,
    params: &'a RouterParams,
    state: DagState,
    layout: Layout,
    ops: Vec<RoutedOp>,
    relief_moves: usize,
    rollbacks: usize,
    iteration: u64,
    front_since: Vec<u64>,
    stall: u32,
    checkpoint: Checkpoint,
    ext_cache: Option<Vec<ExtendedSetEntry>>,
    aborted: bool,
    stats: RouteStats,
}

impl<'a> Router<'a> {
    pub fn new(
        dag: &'a CircuitDag,
        layout: &Layout,
        arch: &'a Architecture,
        tables: &'a DistanceTables,
        params: &'a RouterParams,
    ) -> Result<Self, RouteError> {
        if layout.n_logical() != dag.n_logical() {
            return Err(RouteError::WidthMismatch { layout: layout.n_logical(), circuit: dag.n_logical() });
        }
        if layout.num_slots() != arch.num_slots() || tables.num_slots() != arch.num_slots() {
            return Err(RouteError::DeviceMismatch { layout: layout.num_slots(), device: arch.num_slots() });
        }
        let state = dag.new_state();
        let checkpoint = Checkpoint { layout: layout.clone(), state: state.clone(), op_count: 0, relief_moves: 0 };
        Ok(Router {
            dag,
            arch,
            tables,
            params,
            state,
            layout: layout.clone(),
            ops: Vec::new(),
            relief_moves: 0,
            rollbacks: 0,
            iteration: 0,
            front_since: vec![0; dag.len()],
            stall: 0,
            checkpoint,
            ext_cache: None,
            aborted: false,
            stats: RouteStats::default(),
        })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn state(&self) -> &DagState {
        &self.state
    }

    pub fn ops(&self) -> &[RoutedOp] {
        &self.ops
    }

    pub fn stats(&self) -> &RouteStats {
        &self.stats
    }

    pub fn rollbacks(&self) -> usize {
        self.rollbacks
    }

    pub(crate) fn core_of_qubit(&self, q: usize) -> CoreId {
        self.arch.core_of(self.layout.phys(q))
    }

    fn executable(&self, g: GateId) -> bool {
        match self.dag.gate(g).operands {
            Operands::One(_) => true,
            Operands::Two(a, b) => self.arch.are_adjacent(self.layout.phys(a), self.layout.phys(b)),
        }
    }

    fn execute(&mut self, g: GateId) {
        let op = match self.dag.gate(g).operands {
            Operands::One(a) => RoutedOp::Gate1 { gate: g, slot: self.layout.phys(a) },
            Operands::Two(a, b) => RoutedOp::Gate2 { gate: g, a: self.layout.phys(a), b: self.layout.phys(b) },
        };
        self.ops.push(op);
        for r in self.state.execute(self.dag, g) {
            self.front_since[r] = self.iteration;
        }
        self.ext_cache = None;
    }

    /// Execute 1Q gates and adjacent same-core 2Q gates until none remain
    /// in the front. Returns the executed gates in emission order.
    pub fn drain_front(&mut self) -> Vec<GateId> {
        let mut executed = Vec::new();
        loop {
            let ready: Vec<GateId> = self.state.front().iter().copied().filter(|&g| self.executable(g)).collect();
            if ready.is_empty() {
                return executed;
            }
            for g in ready {
                self.execute(g);
                executed.push(g);
            }
        }
    }

    /// Split the 2Q front into same-core and cross-core gates.
    pub fn partition_front(&self) -> (Vec<GateId>, Vec<GateId>) {
        let mut intra = Vec::new();
        let mut inter = Vec::new();
        for &g in self.state.front() {
            if let Operands::Two(a, b) = self.dag.gate(g).operands {
                if self.core_of_qubit(a) == self.core_of_qubit(b) {
                    intra.push(g);
                } else {
                    inter.push(g);
                }
            }
        }
        (intra, inter)
    }

    fn emit_swap(&mut self, a: usize, b: usize) {
        self.layout.apply_swap(self.arch, a, b).expect("router swaps distinct slots");
        self.ops.push(RoutedOp::Swap { a, b });
    }

    fn save_checkpoint(&mut self) {
        self.checkpoint = Checkpoint {
            layout: self.layout.clone(),
            state: self.state.clone(),
            op_count: self.ops.len(),
            relief_moves: self.relief_moves,
        };
    }

    fn restore_checkpoint(&mut self) {
        self.layout = self.checkpoint.layout.clone();
        self.state = self.checkpoint.state.clone();
        self.ops.truncate(self.checkpoint.op_count);
        self.relief_moves = self.checkpoint.relief_moves;
        self.ext_cache = None;
    }

    fn note_scored(&mut self, n: usize) {
        self.stats.scored_candidates += n as u64;
        self.stats.max_scored_per_iteration = self.stats.max_scored_per_iteration.max(n);
    }

    /// One loop iteration (drain, partition, move, checkpoint).
    pub fn step(&mut self) -> Step {
        if self.aborted {
            return Step::Aborted;
        }
        if self.state.is_done() {
            return Step::Done;
        }
        self.iteration += 1;
        self.stats.iterations += 1;
        self.drain_front();
        if self.state.is_done() {
            return Step::Done;
        }
        let (intra, inter) = self.partition_front();
        let moved = if !intra.is_empty() {
            self.intra_move(&intra)
        } else {
            self.inter_move(&inter)
        };
        self.checkpoint_cycle(moved)
    }

    /// Progress bookkeeping. An iteration with no legal move counts as a
    /// full stall.
    fn checkpoint_cycle(&mut self, moved: bool) -> Step {
        if self.state.remaining() < self.checkpoint.state.remaining() {
            self.save_checkpoint();
            self.stall = 0;
            return Step::Continue;
        }
        self.stall = if moved { self.stall + 1 } else { self.params.deadlock };
        if self.stall < self.params.deadlock {
            return Step::Continue;
        }
        self.stall = 0;
        if self.rollbacks >= self.params.max_rollbacks as usize {
            self.aborted = true;
            return Step::Aborted;
        }
        self.restore_checkpoint();
        self.rollbacks += 1;
        self.stats.forced_recoveries += 1;
        self.force_progress();
        self.drain_front();
        if self.state.remaining() < self.checkpoint.state.remaining() {
            self.save_checkpoint();
        }
        if self.state.is_done() {
            Step::Done
        } else {
            Step::Continue
        }
    }

    /// Run to completion or abort.
    pub fn run(mut self) -> RouteOutcome {
        let status = loop {
            match self.step() {
                Step::Continue => {}
                Step::Done => break RouteStatus::Complete,
                Step::Aborted => break RouteStatus::Aborted,
            }
        };
        self.finish(status)
    }

    fn finish(self, status: RouteStatus) -> RouteOutcome {
        let mut program = RoutedProgram::from_ops(self.ops);
        program.rollbacks = self.rollbacks;
        program.relief_moves = self.relief_moves;
        RouteOutcome { program, final_layout: self.layout, status, stats: self.stats }
    }
}

/// Route `dag` from `layout`. Never loops forever: the run completes or
/// aborts once the rollback budget is spent.
pub fn route(
    dag: &CircuitDag,
    layout: &Layout,
    arch: &Architecture,
    tables: &DistanceTables,
    params: &RouterParams,
) -> Result<RouteOutcome, RouteError> {
    Ok(Router::new(dag, layout, arch, tables, params)?.run())
}
