use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::graph::GraphInstance;
use crate::entropy::{bond_entropies, unnormalized_entropy_bits};
use crate::error::{Error, Result};
use crate::gate::GateKind;
use crate::mps::MpsState;
use crate::scalar::Real;

/// Angles of a depth-`p` QAOA ansatz.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QaoaParams {
    gamma: Vec<f64>,
    beta: Vec<f64>,
}

impl QaoaParams {
    pub fn new(gamma: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        if gamma.len() != beta.len() || gamma.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "need equal, nonzero gamma/beta lengths, got {} and {}",
                gamma.len(),
                beta.len()
            )));
        }
        if gamma.iter().chain(&beta).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("QAOA angles must be finite".into()));
        }
        Ok(QaoaParams { gamma, beta })
    }

    pub fn zeros(p: usize) -> Self {
        QaoaParams { gamma: vec![0.0; p], beta: vec![0.0; p] }
    }

    /// `[γ₁ … γ_p, β₁ … β_p]`.
    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("flat parameter vector must have even length".into()));
        }
        let p = flat.len() / 2;
        Self::new(flat[..p].to_vec(), flat[p..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.gamma.iter().chain(&self.beta).copied().collect()
    }

    pub fn p(&self) -> usize {
        self.gamma.len()
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }
}

/// Order in which the `e^{-iγ w Z Z}` terms of one layer are emitted. All
/// orders give the same final state but different intermediate states.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeOrder {
    /// `(i, j)` ascending, `i < j`.
    #[default]
    Lexicographic,
    ReverseLexicographic,
    /// Lexicographic order shuffled with ChaCha8 seeded by `seed`.
    Shuffled { seed: u64 },
}

impl EdgeOrder {
    fn apply(&self, graph: &GraphInstance) -> Vec<(usize, usize, f64)> {
        let mut edges: Vec<_> = graph.edges().iter().map(|e| (e.i, e.j, e.weight)).collect();
        match self {
            EdgeOrder::Lexicographic => {}
            EdgeOrder::ReverseLexicographic => edges.reverse(),
            EdgeOrder::Shuffled { seed } => edges.shuffle(&mut ChaCha8Rng::seed_from_u64(*seed)),
        }
        edges
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sites {
    One(usize),
    /// `(first, second)`; for CNOT the first qubit is the control.
    Two(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitOp {
    pub kind: GateKind,
    pub sites: Sites,
    /// Present on logical CNOTs only; consecutive from 0.
    pub snapshot: Option<usize>,
}

/// Ordered gate list with snapshot markers on logical CNOTs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GateSequence {
    ops: Vec<CircuitOp>,
    num_snapshots: usize,
}

impl GateSequence {
    pub fn push_single(&mut self, kind: GateKind, site: usize) {
        debug_assert_eq!(kind.arity(), 1);
        self.ops.push(CircuitOp { kind, sites: Sites::One(site), snapshot: None });
    }

    /// Appends a two-qubit gate; `snapshot` tags it with the next snapshot id.
    pub fn push_two(&mut self, kind: GateKind, first: usize, second: usize, snapshot: bool) {
        debug_assert_eq!(kind.arity(), 2);
        let id = snapshot.then(|| {
            self.num_snapshots += 1;
            self.num_snapshots - 1
        });
        self.ops.push(CircuitOp { kind, sites: Sites::Two(first, second), snapshot: id });
    }

    pub fn ops(&self) -> &[CircuitOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn num_snapshots(&self) -> usize {
        self.num_snapshots
    }

    /// Reversed sequence of inverse gates, without snapshot tags.
    pub fn inverse(&self) -> GateSequence {
        let ops = self
            .ops
            .iter()
            .rev()
            .map(|op| CircuitOp { kind: op.kind.inverse(), sites: op.sites, snapshot: None })
            .collect();
        GateSequence { ops, num_snapshots: 0 }
    }
}

/// Depth-`p` QAOA circuit (the `|+⟩^⊗N` preparation is not included). Per
/// layer and per edge `(i, j)`: `CNOT(i,j)`, `RZ(2γw)` on `j`, `CNOT(i,j)`,
/// both CNOTs snapshot-tagged; then `RX(2β)` on every qubit.
pub fn build_qaoa_circuit(graph: &GraphInstance, params: &QaoaParams, order: &EdgeOrder) -> GateSequence {
    let n = graph.num_vertices();
    let edges = order.apply(graph);
    let mut seq = GateSequence::default();
    for (&gamma, &beta) in params.gamma().iter().zip(params.beta()) {
        for &(i, j, w) in &edges {
            seq.push_two(GateKind::Cnot, i, j, true);
            seq.push_single(GateKind::Rz(2.0 * gamma * w), j);
            seq.push_two(GateKind::Cnot, i, j, true);
        }
        for q in 0..n {
            seq.push_single(GateKind::Rx(2.0 * beta), q);
        }
    }
    seq
}

/// Bond entropies of the state right after one logical CNOT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EeSnapshot<T> {
    pub snapshot_id: usize,
    /// Renormalized-spectrum entropies, one per bond.
    pub bond_entropies: Vec<T>,
    pub space_sum: T,
    /// Bond dimensions of the MPS at the time of the snapshot.
    pub bond_dims: Vec<usize>,
    /// Squared norm the state would have without renormalization.
    pub retained_weight: T,
}

impl<T: Real> EeSnapshot<T> {
    pub fn new(snapshot_id: usize, bond_entropies: Vec<T>, bond_dims: Vec<usize>, retained_weight: T) -> Self {
        let space_sum = bond_entropies.iter().fold(T::zero(), |a, &b| a + b);
        EeSnapshot { snapshot_id, bond_entropies, space_sum, bond_dims, retained_weight }
    }

    /// Entropies of the spectra before renormalization.
    pub fn unnormalized_entropies(&self) -> Vec<T> {
        self.bond_entropies.iter().map(|&s| unnormalized_entropy_bits(s, self.retained_weight)).collect()
    }

    pub fn unnormalized_space_sum(&self) -> T {
        self.unnormalized_entropies().into_iter().fold(T::zero(), |a, b| a + b)
    }
}

/// Applies `circuit` to `state` with bond cap `chi_cap` (`None` = exact up to
/// the SVD cutoff). When `record_snapshots` is set, bond entropies are taken
/// after every snapshot-tagged CNOT, once any routing SWAPs are undone.
pub fn run_circuit<T: Real>(
    mut state: MpsState<T>,
    circuit: &GateSequence,
    chi_cap: Option<usize>,
    record_snapshots: bool,
) -> Result<(MpsState<T>, Vec<EeSnapshot<T>>)> {
    state.set_chi_cap(chi_cap)?;
    let mut snapshots = Vec::with_capacity(if record_snapshots { circuit.num_snapshots() } else { 0 });
    for op in circuit.ops() {
        let gate = op.kind.gate::<T>();
        match op.sites {
            Sites::One(q) => state.apply_single_qubit_gate(q, &gate)?,
            Sites::Two(a, b) => state.apply_two_qubit_gate(a, b, &gate)?,
        }
        if let (true, Some(id)) = (record_snapshots, op.snapshot) {
            let entropies = bond_entropies(&mut state)?;
            snapshots.push(EeSnapshot::new(id, entropies, state.bond_dims(), state.retained_weight()));
        }
    }
    Ok((state, snapshots))
}
