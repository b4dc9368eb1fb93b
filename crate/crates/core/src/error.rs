use thiserror::Error;

use crate::arch::{CoreId, SlotId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArchError {
    #[error("unsupported architecture family `{0}`")]
    UnknownFamily(String),
    #[error("malformed architecture spec `{0}` (expected bgrid:RxS:mxm or hgrid:RxS:mxm)")]
    BadSpec(String),
    #[error("multi-core grids need m >= 2 so every port has a staging neighbour (got m = {0})")]
    CoreTooSmall(usize),
    #[error("inter-core link weight must be positive")]
    ZeroLinkWeight,
    #[error("core {0} has no slots")]
    EmptyCore(CoreId),
    #[error("slot {0} is out of range or assigned to more than one core")]
    BadSlot(SlotId),
    #[error("edge ({0}, {1}) is not an intra-core edge of core {2}")]
    BadEdge(SlotId, SlotId, CoreId),
    #[error("link {link}: port slot {slot} is not in core {core}")]
    BadPort { link: usize, slot: SlotId, core: CoreId },
    #[error("link {link}: port slot {slot} has no intra-core neighbour")]
    IsolatedPort { link: usize, slot: SlotId },
    #[error("link {0} joins a core to itself")]
    SelfLink(usize),
    #[error("core {0} is not internally connected")]
    DisconnectedCore(CoreId),
    #[error("core graph is disconnected: core {1} unreachable from core {0}")]
    UnreachableCores(CoreId, CoreId),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("gate {gate}: qubit index {qubit} out of range for width {width}")]
    QubitOutOfRange { gate: usize, qubit: usize, width: usize },
    #[error("gate {0}: two-qubit gate acts twice on the same qubit")]
    RepeatedOperand(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("circuit generators need at least 2 qubits (got {0})")]
    TooNarrow(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("swap endpoints must differ (slot {0})")]
    SameSlot(SlotId),
    #[error("slot {0} is occupied")]
    Occupied(SlotId),
    #[error("teleport destination {0} is in the qubit's current core")]
    SameCore(SlotId),
    #[error("slot {0} does not exist")]
    NoSuchSlot(SlotId),
    #[error("logical qubit {0} is not placed")]
    NoSuchQubit(usize),
    #[error("logical qubits {0} and {1} share slot {2}")]
    Collision(usize, usize, SlotId),
    #[error("circuit needs {needed} slots but only {usable} are usable")]
    Capacity { needed: usize, usable: usize },
}

#[derive(Debug, Error)]
pub enum RouteError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("layout covers {layout} logical qubits but the circuit has {circuit}")]
    WidthMismatch { layout: usize, circuit: usize },
    #[error("layout was built for {layout} slots but the device has {device}")]
    DeviceMismatch { layout: usize, device: usize },
}
