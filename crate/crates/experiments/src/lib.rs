//! Sampled scaling experiments on top of [`qaoa_mps`]: random complete-graph
//! instances are optimized once, then simulated with and without a
//! bond-dimension cap, and the resulting entropy and energy ratios are
//! aggregated, persisted and plotted.

pub mod config;
pub mod csvio;
mod error;
pub mod experiments;
pub mod plot;
pub mod sample;
pub mod stats;
pub mod theory;
pub mod verify;

pub use config::{default_chi_grid, sample_seed, ExperimentConfig, OptimizerSettings};
pub use error::{ConfigError, ExperimentError, Result};
pub use experiments::{
    alpha_ratio, alpha_reports, ee_scaling_points, ee_time_series, energy_scaling_points, halves_ratio, halves_reports,
    run_ee_scaling, run_energy_scaling, run_single_bond_ratio, single_bond_points, split_index, time_series_reports,
    AlphaReport, HalvesReport, ScalingPoint, TimeSeries,
};
pub use sample::{run_campaign, simulate_sample, Campaign, SampleOutcome};
pub use theory::{theory_curve, theory_ratio_floor, theory_space_time_sums, x_of};
pub use verify::{run_verify, Check, VerifyOptions};
