//! Routing for multi-core quantum devices: a grid-of-grids device model
//! with hierarchical distances, a gate DAG, a SABRE-style router that
//! mixes intra-core SWAPs with inter-core teleports, initial layout search
//! and a replay validator.

pub mod arch;
pub mod circuit;
pub mod error;
pub mod fixtures;
pub mod layout;
pub mod program;
pub mod router;
pub mod verify;

pub use arch::{build_grid_arch, precompute_distances, ArchSpec, Architecture, DistanceTables, GridFamily};
pub use circuit::{build_dag, CircuitDag, CircuitFamily, DagState, Gate, Operands};
pub use error::{ArchError, CircuitError, LayoutError, RouteError};
pub use layout::{initial_layout, Layout, LayoutOptions};
pub use program::{RoutedOp, RoutedProgram};
pub use router::{route, RouteOutcome, RouteStatus, Router, RouterParams};
pub use verify::{compute_metrics, validate, Metrics, ValidationReport, Violation, ViolationKind};
