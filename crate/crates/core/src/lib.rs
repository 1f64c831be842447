//! Matrix-product-state simulation of QAOA circuits with controllable
//! bond-dimension truncation, plus a brute-force state-vector reference.
//!
//! The simulators are generic over the real scalar ([`Real`], implemented for
//! `f32` and `f64`); the `*64` / `*32` aliases below fix the precision.

pub mod dense;
pub mod entropy;
mod error;
pub mod gate;
pub mod linalg;
pub mod mps;
pub mod qaoa;
mod scalar;

pub use dense::{dense_bond_entropy, dense_energy, dense_run, DenseState};
pub use entropy::{
    bond_entropies, bond_entropy, entropy_bits, floor_log2, max_space_sum, max_space_sum_truncated,
    schmidt_spectrum, space_sum, unnormalized_entropy_bits, BondSpectrum,
};
pub use error::{Error, Result};
pub use gate::{Gate, GateKind};
pub use linalg::{svd_truncate, SvdResult};
pub use mps::{CompressionReport, MpsState};
pub use qaoa::{
    build_qaoa_circuit, classical_cost, classical_ground_energy, energy_expectation, generate_complete_graph,
    optimize, run_circuit, EdgeOrder, EeSnapshot, GateSequence, GraphInstance, ObjectiveBackend,
    OptimizeResult, OptimizerConfig, QaoaParams,
};
pub use scalar::{Real, C};

pub type MpsState64 = MpsState<f64>;
pub type MpsState32 = MpsState<f32>;
pub type DenseState64 = DenseState<f64>;
pub type DenseState32 = DenseState<f32>;
pub type Gate64 = Gate<f64>;
pub type Gate32 = Gate<f32>;
pub type SvdResult64 = SvdResult<f64>;
pub type EeSnapshot64 = EeSnapshot<f64>;
pub type BondSpectrum64 = BondSpectrum<f64>;
