//! QAOA for weighted MaxCut on complete graphs.

mod circuit;
mod energy;
mod graph;
mod optimize;
mod statevector;

pub use circuit::{build_qaoa_circuit, run_circuit, CircuitOp, EdgeOrder, EeSnapshot, GateSequence, QaoaParams, Sites};
pub use energy::{classical_cost, classical_ground_energy, energy_expectation, energy_expectation_complex};
pub use graph::{generate_complete_graph, Edge, GraphInstance};
pub use optimize::{optimize, Evaluation, ObjectiveBackend, OptimizeResult, OptimizerConfig};
pub use statevector::QaoaStatevector;
