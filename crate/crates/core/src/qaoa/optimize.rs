use std::cell::RefCell;
use std::f64::consts::PI;

use cobyla::{RhoBeg, StopTols, SuccessStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::circuit::{build_qaoa_circuit, run_circuit, EdgeOrder, QaoaParams};
use super::energy::energy_expectation;
use super::graph::GraphInstance;
use super::statevector::QaoaStatevector;
use crate::error::{Error, Result};
use crate::mps::MpsState;

/// How the objective `F_p(γ, β)` is evaluated. Both are exact (untruncated).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveBackend {
    /// Diagonal-phase state vector; fastest for `N ≤ 24`.
    #[default]
    Statevector,
    /// Untruncated MPS run of the gate-level circuit.
    Mps,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Final trust-region radius (COBYLA `rhoend`).
    pub tol: f64,
    /// Initial trust-region radius (COBYLA `rhobeg`).
    pub rhobeg: f64,
    /// Objective evaluations allowed per restart.
    pub max_evals: usize,
    pub restarts: usize,
    /// Seeds the initial angles, drawn uniformly from `[-π, π]`.
    pub seed: u64,
    pub backend: ObjectiveBackend,
    pub edge_order: EdgeOrder,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            tol: 1e-13,
            rhobeg: 1.0,
            max_evals: 1000,
            restarts: 1,
            seed: 0,
            backend: ObjectiveBackend::Statevector,
            edge_order: EdgeOrder::Lexicographic,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub params: Vec<f64>,
    pub energy: f64,
    pub best_so_far: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizeResult {
    pub params: QaoaParams,
    pub energy: f64,
    /// Best energy among the all-zero candidate and the first starting point.
    pub initial_energy: f64,
    pub trace: Vec<Evaluation>,
    /// False when any restart ran out of evaluations or stopped abnormally.
    pub converged: bool,
}

enum Objective<'a> {
    Statevector(QaoaStatevector),
    Mps { graph: &'a GraphInstance, order: &'a EdgeOrder },
}

impl Objective<'_> {
    fn eval(&self, flat: &[f64]) -> f64 {
        let Ok(params) = QaoaParams::from_flat(flat) else {
            return f64::INFINITY;
        };
        match self {
            Objective::Statevector(sv) => sv.energy(&params),
            Objective::Mps { graph, order } => {
                let circuit = build_qaoa_circuit(graph, &params, order);
                MpsState::<f64>::plus_state(graph.num_vertices())
                    .and_then(|s| run_circuit(s, &circuit, None, false))
                    .and_then(|(s, _)| energy_expectation(&s, graph))
                    .unwrap_or(f64::INFINITY)
            }
        }
    }
}

/// Minimizes `F_p(γ, β)` with COBYLA. The all-zero point is evaluated first,
/// so the returned energy never exceeds `F_p(0, 0) = 0`.
pub fn optimize(graph: &GraphInstance, p: usize, config: &OptimizerConfig) -> Result<OptimizeResult> {
    if p == 0 {
        return Err(Error::InvalidArgument("QAOA depth p must be at least 1".into()));
    }
    if config.restarts == 0 || config.max_evals == 0 {
        return Err(Error::InvalidArgument("need at least one restart and one evaluation".into()));
    }
    let objective = match config.backend {
        ObjectiveBackend::Statevector => Objective::Statevector(QaoaStatevector::new(graph)?),
        ObjectiveBackend::Mps => Objective::Mps { graph, order: &config.edge_order },
    };
    let trace: RefCell<Vec<Evaluation>> = RefCell::new(Vec::new());
    let record = |x: &[f64]| -> f64 {
        let energy = objective.eval(x);
        let mut t = trace.borrow_mut();
        let best_so_far = t.last().map_or(energy, |prev: &Evaluation| prev.best_so_far.min(energy));
        t.push(Evaluation { params: x.to_vec(), energy, best_so_far });
        energy
    };

    let dim = 2 * p;
    record(&vec![0.0; dim]);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut converged = true;
    let mut initial_energy = None;
    for _ in 0..config.restarts {
        let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-PI..=PI)).collect();
        let start_energy = record(&x0);
        initial_energy.get_or_insert(trace.borrow()[0].energy.min(start_energy));
        let stop = StopTols { xtol_abs: vec![config.tol; dim], ..StopTols::default() };
        let bounds = vec![(f64::NEG_INFINITY, f64::INFINITY); dim];
        let no_constraints: &[fn(&[f64], &mut ()) -> f64] = &[];
        let outcome = cobyla::minimize(
            |x: &[f64], _: &mut ()| record(x),
            &x0,
            &bounds,
            no_constraints,
            (),
            config.max_evals,
            RhoBeg::All(config.rhobeg),
            Some(stop),
        );
        converged &= matches!(outcome, Ok((status, _, _)) if !matches!(status, SuccessStatus::MaxEvalReached));
    }

    let trace = trace.into_inner();
    let best = trace
        .iter()
        .min_by(|a, b| a.energy.total_cmp(&b.energy))
        .expect("trace holds at least the zero point");
    Ok(OptimizeResult {
        params: QaoaParams::from_flat(&best.params)?,
        energy: best.energy,
        initial_energy: initial_energy.unwrap_or(0.0),
        converged,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qaoa::{classical_ground_energy, generate_complete_graph};

    #[test]
    fn best_so_far_is_monotone_and_bounded() {
        let g = generate_complete_graph(6, 11).unwrap();
        let res = optimize(&g, 1, &OptimizerConfig { seed: 4, ..Default::default() }).unwrap();
        assert!(res.trace.windows(2).all(|w| w[1].best_so_far <= w[0].best_so_far));
        assert_eq!(res.trace[0].params, vec![0.0, 0.0]);
        assert!(res.energy <= 0.0);
        assert!(res.energy <= res.initial_energy);
        let (ground, _) = classical_ground_energy(&g).unwrap();
        assert!(res.energy >= ground - 1e-12);
    }

    #[test]
    fn deterministic_trace() {
        let g = generate_complete_graph(5, 2).unwrap();
        let cfg = OptimizerConfig { seed: 9, restarts: 2, ..Default::default() };
        let a = optimize(&g, 1, &cfg).unwrap();
        let b = optimize(&g, 1, &cfg).unwrap();
        let ea: Vec<u64> = a.trace.iter().map(|e| e.energy.to_bits()).collect();
        let eb: Vec<u64> = b.trace.iter().map(|e| e.energy.to_bits()).collect();
        assert_eq!(ea, eb);
    }

    #[test]
    fn budget_exhaustion_flags_non_convergence() {
        let g = generate_complete_graph(5, 2).unwrap();
        let res = optimize(&g, 1, &OptimizerConfig { max_evals: 5, ..Default::default() }).unwrap();
        assert!(!res.converged);
        assert!(res.energy <= 0.0);
    }

    #[test]
    fn mps_backend_agrees_with_statevector() {
        let g = generate_complete_graph(5, 8).unwrap();
        let cfg = OptimizerConfig { seed: 1, max_evals: 40, ..Default::default() };
        let sv = optimize(&g, 1, &cfg).unwrap();
        let mps = optimize(&g, 1, &OptimizerConfig { backend: ObjectiveBackend::Mps, ..cfg }).unwrap();
        for (a, b) in sv.trace.iter().zip(&mps.trace).take(10) {
            assert!((a.energy - b.energy).abs() < 1e-9, "{a:?} {b:?}");
        }
    }

    #[test]
    fn rejects_zero_depth() {
        let g = generate_complete_graph(4, 0).unwrap();
        assert!(optimize(&g, 0, &OptimizerConfig::default()).is_err());
    }
}
