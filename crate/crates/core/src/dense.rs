//! Brute-force state-vector reference simulator.
//!
//! Deliberately naive: every gate is applied by looping over all `2^N`
//! amplitudes. Qubit 0 is the most significant bit of the amplitude index,
//! matching [`MpsState::to_amplitudes`](crate::MpsState::to_amplitudes).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::linalg::svd_truncate;
use crate::qaoa::{classical_cost, GateSequence, GraphInstance, Sites};
use crate::scalar::{cplx, Real, C};

pub const MAX_DENSE_QUBITS: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState<T: Real> {
    num_qubits: usize,
    amplitudes: Vec<C<T>>,
}

impl<T: Real> DenseState<T> {
    fn check_size(n: usize) -> Result<()> {
        if n == 0 || n > MAX_DENSE_QUBITS {
            return Err(Error::InvalidSize { n, reason: "dense simulation supports 1..=24 qubits" });
        }
        Ok(())
    }

    pub fn plus_state(n: usize) -> Result<Self> {
        Self::check_size(n)?;
        let a = T::lit((0.5f64).powf(n as f64 / 2.0));
        Ok(DenseState { num_qubits: n, amplitudes: vec![cplx(a, T::zero()); 1 << n] })
    }

    pub fn basis_state(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        Self::check_size(n)?;
        let mut amps = vec![cplx(T::zero(), T::zero()); 1 << n];
        amps[bits_to_index(bits)] = cplx(T::one(), T::zero());
        Ok(DenseState { num_qubits: n, amplitudes: amps })
    }

    /// Wraps the given amplitudes after normalizing them.
    pub fn from_amplitudes(n: usize, amplitudes: Vec<C<T>>) -> Result<Self> {
        Self::check_size(n)?;
        if amplitudes.len() != 1 << n {
            return Err(Error::LengthMismatch { got: amplitudes.len(), expected: 1 << n });
        }
        let norm = amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if norm <= T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let inv = cplx(T::one() / norm, T::zero());
        Ok(DenseState { num_qubits: n, amplitudes: amplitudes.into_iter().map(|z| z * inv).collect() })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr())
    }

    fn mask(&self, q: usize) -> Result<usize> {
        if q >= self.num_qubits {
            return Err(Error::SiteOutOfRange { site: q, num_sites: self.num_qubits });
        }
        Ok(1 << (self.num_qubits - 1 - q))
    }

    pub fn apply_single(&mut self, q: usize, gate: &Gate<T>) -> Result<()> {
        if gate.arity() != 1 {
            return Err(Error::WrongArity { label: gate.label().into(), arity: gate.arity(), expected: 1 });
        }
        let m = self.mask(q)?;
        let g = gate.matrix();
        for i in 0..self.amplitudes.len() {
            if i & m == 0 {
                let (a0, a1) = (self.amplitudes[i], self.amplitudes[i | m]);
                self.amplitudes[i] = g[(0, 0)] * a0 + g[(0, 1)] * a1;
                self.amplitudes[i | m] = g[(1, 0)] * a0 + g[(1, 1)] * a1;
            }
        }
        Ok(())
    }

    /// `qa` is the gate's first qubit.
    pub fn apply_two(&mut self, qa: usize, qb: usize, gate: &Gate<T>) -> Result<()> {
        if gate.arity() != 2 {
            return Err(Error::WrongArity { label: gate.label().into(), arity: gate.arity(), expected: 2 });
        }
        if qa == qb {
            return Err(Error::SameSite(qa));
        }
        let (ma, mb) = (self.mask(qa)?, self.mask(qb)?);
        let g = gate.matrix();
        for i in 0..self.amplitudes.len() {
            if i & ma == 0 && i & mb == 0 {
                let idx = [i, i | mb, i | ma, i | ma | mb];
                let x = idx.map(|k| self.amplitudes[k]);
                for (t, &k) in idx.iter().enumerate() {
                    let mut acc = cplx(T::zero(), T::zero());
                    for (s, &xs) in x.iter().enumerate() {
                        acc += g[(t, s)] * xs;
                    }
                    self.amplitudes[k] = acc;
                }
            }
        }
        Ok(())
    }

    /// Applies every gate of `circuit` in order; snapshot tags are ignored.
    pub fn run(&mut self, circuit: &GateSequence) -> Result<()> {
        for op in circuit.ops() {
            let gate = op.kind.gate::<T>();
            match op.sites {
                Sites::One(q) => self.apply_single(q, &gate)?,
                Sites::Two(a, b) => self.apply_two(a, b, &gate)?,
            }
        }
        Ok(())
    }

    pub fn inner(&self, other: &DenseState<T>) -> C<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(cplx(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }
}

pub fn bits_to_index(bits: &[u8]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | (b as usize & 1))
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|q| ((index >> (n - 1 - q)) & 1) as u8).collect()
}

/// Runs `circuit` on `|+⟩^⊗N`.
pub fn dense_run<T: Real>(circuit: &GateSequence, n: usize) -> Result<DenseState<T>> {
    let mut state = DenseState::plus_state(n)?;
    state.run(circuit)?;
    Ok(state)
}

/// Schmidt values across `cut` from an SVD of the `2^(cut+1) × 2^(N-cut-1)` reshape.
pub fn dense_schmidt_values<T: Real>(state: &DenseState<T>, cut: usize) -> Result<Vec<T>> {
    let n = state.num_qubits;
    if cut + 1 >= n {
        return Err(Error::BondOutOfRange { bond: cut, num_sites: n });
    }
    let rows = 1 << (cut + 1);
    let cols = 1 << (n - cut - 1);
    let m = DMatrix::from_row_slice(rows, cols, &state.amplitudes);
    Ok(svd_truncate(&m, None, T::zero())?.singular_values)
}

/// Entanglement entropy in bits across `cut`.
pub fn dense_bond_entropy<T: Real>(state: &DenseState<T>, cut: usize) -> Result<T> {
    let values = dense_schmidt_values(state, cut)?;
    Ok(crate::entropy::entropy_bits(&values))
}

/// `Σ_z |a_z|² C(z)`.
pub fn dense_energy<T: Real>(state: &DenseState<T>, graph: &GraphInstance) -> Result<T> {
    if state.num_qubits != graph.num_vertices() {
        return Err(Error::SizeMismatch { state: state.num_qubits, graph: graph.num_vertices() });
    }
    let n = state.num_qubits;
    let mut e = 0.0f64;
    for (i, a) in state.amplitudes.iter().enumerate() {
        let p = a.norm_sqr().as_f64();
        if p != 0.0 {
            e += p * classical_cost(graph, &index_to_bits(i, n));
        }
    }
    Ok(T::lit(e))
}
