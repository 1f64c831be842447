use super::graph::GraphInstance;
use crate::error::{Error, Result};
use crate::mps::MpsState;
use crate::scalar::{Real, C};

/// `C(z) = Σ w_ij z_i z_j` with `z = 1 - 2·bit` (so `|0⟩ ↦ +1`).
pub fn classical_cost(graph: &GraphInstance, bits: &[u8]) -> f64 {
    graph
        .edges()
        .iter()
        .map(|e| {
            let zz = if bits[e.i] == bits[e.j] { 1.0 } else { -1.0 };
            e.weight * zz
        })
        .sum()
}

/// `⟨Ψ|H_C|Ψ⟩` including its (numerically zero) imaginary part.
pub fn energy_expectation_complex<T: Real>(state: &MpsState<T>, graph: &GraphInstance) -> Result<C<T>> {
    if state.num_sites() != graph.num_vertices() {
        return Err(Error::SizeMismatch { state: state.num_sites(), graph: graph.num_vertices() });
    }
    let zz = state.zz_correlations();
    let mut e = C::new(T::zero(), T::zero());
    for edge in graph.edges() {
        e += zz[edge.i][edge.j] * C::new(T::lit(edge.weight), T::zero());
    }
    Ok(e)
}

/// `⟨Ψ|H_C|Ψ⟩` with `H_C = Σ w_ij Z_i Z_j`.
pub fn energy_expectation<T: Real>(state: &MpsState<T>, graph: &GraphInstance) -> Result<T> {
    energy_expectation_complex(state, graph).map(|z| z.re)
}

/// Exact minimum of `C(z)` and one minimizing spin assignment (`±1` per
/// vertex). Only assignments with `z_0 = +1` are visited, in Gray-code order.
pub fn classical_ground_energy(graph: &GraphInstance) -> Result<(f64, Vec<i8>)> {
    let n = graph.num_vertices();
    if n > 24 {
        return Err(Error::InvalidSize { n, reason: "exhaustive search is limited to 24 vertices" });
    }
    let mut w = vec![0.0f64; n * n];
    for e in graph.edges() {
        w[e.i * n + e.j] = e.weight;
        w[e.j * n + e.i] = e.weight;
    }
    let mut z = vec![1i8; n];
    // local field h_k = Σ_j w_kj z_j
    let mut h: Vec<f64> = (0..n).map(|k| (0..n).map(|j| w[k * n + j]).sum()).collect();
    let mut cost = graph.total_weight();
    let mut best = (cost, z.clone());
    for step in 1u64..(1u64 << (n - 1)) {
        let k = 1 + step.trailing_zeros() as usize;
        let zk = z[k] as f64;
        cost -= 2.0 * zk * h[k];
        z[k] = -z[k];
        for j in 0..n {
            if j != k {
                h[j] -= 2.0 * w[j * n + k] * zk;
            }
        }
        if cost < best.0 {
            best = (cost, z.clone());
        }
    }
    // recompute exactly for the reported argmin
    let bits: Vec<u8> = best.1.iter().map(|&s| u8::from(s < 0)).collect();
    Ok((classical_cost(graph, &bits), best.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::Gate;
    use crate::qaoa::generate_complete_graph;

    #[test]
    fn plus_state_energy_is_zero() {
        let g = generate_complete_graph(6, 1).unwrap();
        let s = MpsState::<f64>::plus_state(6).unwrap();
        assert!(energy_expectation(&s, &g).unwrap().abs() < 1e-14);
    }

    #[test]
    fn basis_state_energy_is_classical_cost() {
        let g = generate_complete_graph(7, 2).unwrap();
        for idx in [0usize, 5, 77, 127] {
            let bits: Vec<u8> = (0..7).map(|q| ((idx >> (6 - q)) & 1) as u8).collect();
            let s = MpsState::<f64>::basis_state(&bits).unwrap();
            let direct: f64 = g
                .edges()
                .iter()
                .map(|e| e.weight * f64::from(1 - 2 * bits[e.i] as i32) * f64::from(1 - 2 * bits[e.j] as i32))
                .sum();
            assert!((energy_expectation(&s, &g).unwrap() - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn single_edge_ground_state() {
        let g = GraphInstance::from_edges(2, 0, [(0, 1, 1.0)]).unwrap();
        let (e, z) = classical_ground_energy(&g).unwrap();
        assert_eq!(e, -1.0);
        assert_eq!(z, vec![1, -1]);
    }

    #[test]
    fn uniform_k4_ground_energy() {
        let edges = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j, 1.0)));
        let g = GraphInstance::from_edges(4, 0, edges).unwrap();
        // enumerate all 16 assignments
        let brute = (0..16u8)
            .map(|m| classical_cost(&g, &[(m >> 3) & 1, (m >> 2) & 1, (m >> 1) & 1, m & 1]))
            .fold(f64::INFINITY, f64::min);
        assert_eq!(brute, -2.0);
        assert_eq!(classical_ground_energy(&g).unwrap().0, -2.0);
    }

    #[test]
    fn gray_code_matches_brute_force() {
        for seed in 0..5 {
            let g = generate_complete_graph(9, seed).unwrap();
            let brute = (0..512usize)
                .map(|m| classical_cost(&g, &(0..9).map(|q| ((m >> q) & 1) as u8).collect::<Vec<_>>()))
                .fold(f64::INFINITY, f64::min);
            let (e, z) = classical_ground_energy(&g).unwrap();
            assert!((e - brute).abs() < 1e-12);
            let bits: Vec<u8> = z.iter().map(|&s| u8::from(s < 0)).collect();
            assert_eq!(classical_cost(&g, &bits), e);
        }
    }

    #[test]
    fn energy_within_spectral_bounds_after_entangling() {
        let g = generate_complete_graph(5, 3).unwrap();
        let mut s = MpsState::<f64>::plus_state(5).unwrap();
        s.apply_two_qubit_gate(0, 3, &Gate::cnot()).unwrap();
        s.apply_single_qubit_gate(3, &Gate::rx(0.7)).unwrap();
        let e = energy_expectation_complex(&s, &g).unwrap();
        assert!(e.im.abs() < 1e-12);
        assert!(e.re.abs() <= g.total_weight());
    }

    #[test]
    fn size_mismatch_rejected() {
        let g = generate_complete_graph(5, 3).unwrap();
        let s = MpsState::<f64>::plus_state(4).unwrap();
        assert!(matches!(energy_expectation(&s, &g), Err(Error::SizeMismatch { .. })));
    }
}
