//! MPS-versus-state-vector equivalence checks on random QAOA circuits.

use std::f64::consts::PI;
use std::fmt::Write;

use qaoa_mps::{
    bond_entropies, build_qaoa_circuit, dense_bond_entropy, dense_energy, dense_run, energy_expectation,
    generate_complete_graph, run_circuit, EdgeOrder, MpsState64, QaoaParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::sample_seed;
use crate::error::Result;

pub const AMPLITUDE_TOL: f64 = 1e-9;
pub const ENERGY_TOL: f64 = 1e-8;
pub const ENTROPY_TOL: f64 = 1e-7;
pub const FIDELITY_TOL: f64 = 1e-9;
pub const ROUND_TRIP_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
#[derive(Default)]
pub struct VerifyOptions {
    /// Fewer sizes and instances.
    pub quick: bool,
    /// Overrides the MPS singular-value cutoff (fault injection).
    pub svd_cutoff: Option<f64>,
    pub seed: u64,
}


impl VerifyOptions {
    pub fn sizes(&self) -> &'static [usize] {
        if self.quick {
            &[4, 6]
        } else {
            &[4, 6, 8]
        }
    }

    pub fn instances(&self) -> usize {
        if self.quick {
            3
        } else {
            10
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    /// Largest deviation seen.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: String, cases: usize, worst: f64, tolerance: f64) -> Self {
        Check { name, cases, worst, tolerance, passed: worst <= tolerance }
    }
}

fn fresh_state(n: usize, cutoff: Option<f64>) -> Result<MpsState64> {
    let mut s = MpsState64::plus_state(n)?;
    if let Some(c) = cutoff {
        s.set_svd_cutoff(c)?;
    }
    Ok(s)
}

/// Runs the suite; never fails on a mismatch, only on simulation errors.
pub fn run_verify(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for &n in opts.sizes() {
        let (mut amp, mut energy, mut entropy, mut fidelity, mut round_trip) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for k in 0..opts.instances() {
            let seed = sample_seed(opts.seed, n, k);
            let graph = generate_complete_graph(n, seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = QaoaParams::new(vec![rng.random_range(-PI..=PI)], vec![rng.random_range(-PI..=PI)])?;
            let circuit = build_qaoa_circuit(&graph, &params, &EdgeOrder::Lexicographic);

            let dense = dense_run::<f64>(&circuit, n)?;
            let (mut mps, _) = run_circuit(fresh_state(n, opts.svd_cutoff)?, &circuit, None, false)?;
            let amps = mps.to_amplitudes();
            for (a, b) in amps.iter().zip(dense.amplitudes()) {
                amp = amp.max((a - b).norm());
            }
            let overlap: num_complex::Complex64 = amps.iter().zip(dense.amplitudes()).map(|(a, b)| a.conj() * b).sum();
            fidelity = fidelity.max(1.0 - overlap.norm_sqr());
            energy = energy.max((energy_expectation(&mps, &graph)? - dense_energy(&dense, &graph)?).abs());
            for (cut, s) in bond_entropies(&mut mps)?.into_iter().enumerate() {
                entropy = entropy.max((s - dense_bond_entropy(&dense, cut)?).abs());
            }

            let (back, _) = run_circuit(mps, &circuit.inverse(), None, false)?;
            let plus = MpsState64::plus_state(n)?;
            round_trip = round_trip.max(1.0 - back.fidelity(&plus)?);
        }
        let cases = opts.instances();
        checks.push(Check::new(format!("N={n} amplitudes"), cases, amp, AMPLITUDE_TOL));
        checks.push(Check::new(format!("N={n} fidelity"), cases, fidelity, FIDELITY_TOL));
        checks.push(Check::new(format!("N={n} energy"), cases, energy, ENERGY_TOL));
        checks.push(Check::new(format!("N={n} bond entropies"), cases, entropy, ENTROPY_TOL));
        checks.push(Check::new(format!("N={n} inverse round trip"), cases, round_trip, ROUND_TRIP_TOL));
    }
    Ok(checks)
}

pub fn format_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
    let mut out = format!("{:<width$}  {:>5}  {:>12}  {:>9}  result\n", "check", "cases", "worst", "tolerance");
    for c in checks {
        let _ = writeln!(
            out,
            "{:<width$}  {:>5}  {:>12.3e}  {:>9.0e}  {}",
            c.name,
            c.cases,
            c.worst,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        );
    }
    out
}
