use num_complex::Complex64;

use super::circuit::QaoaParams;
use super::energy::classical_cost;
use super::graph::GraphInstance;
use crate::dense::index_to_bits;
use crate::error::{Error, Result};

/// Fast exact QAOA evaluator: the cost layer is a diagonal phase
/// `e^{-iγ C(z)}` and the mixer a product of `RX(2β)`.
#[derive(Clone, Debug)]
pub struct QaoaStatevector {
    num_qubits: usize,
    costs: Vec<f64>,
}

impl QaoaStatevector {
    pub fn new(graph: &GraphInstance) -> Result<Self> {
        let n = graph.num_vertices();
        if n > crate::dense::MAX_DENSE_QUBITS {
            return Err(Error::InvalidSize { n, reason: "state-vector evaluation supports at most 24 qubits" });
        }
        let costs = (0..1usize << n).map(|i| classical_cost(graph, &index_to_bits(i, n))).collect();
        Ok(QaoaStatevector { num_qubits: n, costs })
    }

    /// Final QAOA state; qubit 0 is the most significant bit.
    pub fn state(&self, params: &QaoaParams) -> Vec<Complex64> {
        let n = self.num_qubits;
        let dim = 1usize << n;
        let amp = (dim as f64).sqrt().recip();
        let mut psi = vec![Complex64::new(amp, 0.0); dim];
        for (&gamma, &beta) in params.gamma().iter().zip(params.beta()) {
            for (a, &c) in psi.iter_mut().zip(&self.costs) {
                *a *= Complex64::from_polar(1.0, -gamma * c);
            }
            let (s, co) = beta.sin_cos();
            let (cb, isb) = (Complex64::new(co, 0.0), Complex64::new(0.0, -s));
            for q in 0..n {
                let m = 1usize << (n - 1 - q);
                for i in 0..dim {
                    if i & m == 0 {
                        let (a0, a1) = (psi[i], psi[i | m]);
                        psi[i] = cb * a0 + isb * a1;
                        psi[i | m] = isb * a0 + cb * a1;
                    }
                }
            }
        }
        psi
    }

    pub fn energy(&self, params: &QaoaParams) -> f64 {
        self.state(params).iter().zip(&self.costs).map(|(a, &c)| a.norm_sqr() * c).sum()
    }
}
