#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use qaoa_mps::{dense_run, GateKind, GateSequence, MpsState64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random circuit of `layers` rounds: a random single-qubit gate on every
/// qubit followed by CNOTs between random (possibly distant) pairs.
pub fn random_circuit(n: usize, layers: usize, seed: u64) -> GateSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = GateSequence::default();
    for _ in 0..layers {
        for q in 0..n {
            let kind = match rng.random_range(0..3) {
                0 => GateKind::H,
                1 => GateKind::Rx(rng.random_range(-3.0..3.0)),
                _ => GateKind::Rz(rng.random_range(-3.0..3.0)),
            };
            c.push_single(kind, q);
        }
        for _ in 0..n {
            let a = rng.random_range(0..n);
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            c.push_two(GateKind::Cnot, a, b, false);
        }
    }
    c
}

pub fn run_mps(n: usize, circuit: &GateSequence, chi: Option<usize>) -> MpsState64 {
    qaoa_mps::run_circuit(MpsState64::plus_state(n).unwrap(), circuit, chi, false).unwrap().0
}

pub fn run_dense(n: usize, circuit: &GateSequence) -> Vec<Complex64> {
    dense_run::<f64>(circuit, n).unwrap().amplitudes().to_vec()
}

pub fn max_dev(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn overlap_sqr(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>().norm_sqr()
}

/// Singular values of the `2^(bond+1) × 2^(N-bond-1)` reshape, qubit 0 most significant.
pub fn reshape_singular_values(amps: &[Complex64], n: usize, bond: usize) -> Vec<f64> {
    let rows = 1usize << (bond + 1);
    let cols = 1usize << (n - bond - 1);
    let m = DMatrix::from_fn(rows, cols, |r, c| amps[r * cols + c]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn entropy_from_singular_values(s: &[f64]) -> f64 {
    s.iter().map(|v| v * v).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum()
}
