//! Classical-reversible circuits on real state vectors.

mod circuit;
mod comparator;
mod gate;
mod projector;
mod sparse;
mod state;

pub use circuit::{CircuitSpec, OracleRegistry, WireLayout};
pub(crate) use circuit::{parse_gate, write_gate};
pub use comparator::{comparator_gates, comparator_oracle, ComparatorWires};
pub use gate::{expand_elementary, ClassicalFunction, Gate, OracleGate};
pub(crate) use gate::bit;
pub use projector::{ProjectorSpec, ProjectorTarget, Target};
pub use sparse::{acceptance_over_register, RegisterClass, SparseState};
pub use state::{prepare_input, qubit_cap, StateVector, WitnessFile, DEFAULT_QUBIT_CAP};
