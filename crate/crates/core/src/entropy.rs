//! Entanglement entropy of bipartitions and its closed-form maxima.
//!
//! All entropies are in bits. Spectra always come from a canonicalized MPS,
//! never from reduced density matrices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mps::MpsState;
use crate::scalar::{neg_p_log2_p, Real};

/// Schmidt values below this contribute nothing to an entropy.
pub const SCHMIDT_FLOOR: f64 = 1e-12;

/// Schmidt spectrum across one bond.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondSpectrum<T> {
    pub bond_index: usize,
    /// Nonincreasing, `Σ λ² = 1`.
    pub schmidt_values: Vec<T>,
    pub entropy_bits: T,
}

/// `-Σ λ² log₂ λ²` over a normalized spectrum.
pub fn entropy_bits<T: Real>(schmidt_values: &[T]) -> T {
    let floor = T::lit(SCHMIDT_FLOOR);
    schmidt_values
        .iter()
        .filter(|&&l| l >= floor)
        .fold(T::zero(), |acc, &l| acc + neg_p_log2_p(l * l))
}

/// Entropy of the same spectrum scaled by `retained_weight` (so that
/// `Σ λ² = retained_weight`), i.e. `w·(S - log₂ w)`.
pub fn unnormalized_entropy_bits<T: Real>(normalized_entropy: T, retained_weight: T) -> T {
    if retained_weight <= T::zero() {
        return T::zero();
    }
    retained_weight * (normalized_entropy - retained_weight.log2())
}

pub fn schmidt_spectrum<T: Real>(state: &mut MpsState<T>, bond: usize) -> Result<BondSpectrum<T>> {
    let values = state.bond_spectrum(bond)?;
    let entropy = entropy_bits(&values);
    Ok(BondSpectrum { bond_index: bond, schmidt_values: values, entropy_bits: entropy })
}

/// Entropy of qubits `{0..=bond}` versus the rest.
pub fn bond_entropy<T: Real>(state: &mut MpsState<T>, bond: usize) -> Result<T> {
    Ok(entropy_bits(&state.bond_spectrum(bond)?))
}

/// Entropies of all `N - 1` bonds, in bond order.
pub fn bond_entropies<T: Real>(state: &mut MpsState<T>) -> Result<Vec<T>> {
    Ok(state.all_spectra()?.iter().map(|s| entropy_bits(s)).collect())
}

/// Sum of the entropies of all bonds.
pub fn space_sum<T: Real>(state: &mut MpsState<T>) -> Result<T> {
    Ok(bond_entropies(state)?.into_iter().fold(T::zero(), |a, b| a + b))
}

fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidSize { n, reason: "closed-form maxima need an even N >= 2" });
    }
    Ok(())
}

/// Largest possible bond-entropy sum of an `N`-qubit chain: bond dimensions
/// `2, 4, …, 2^(N/2), …, 4, 2`, each bond at `log₂ χ_k`. Equals `N²/4`.
pub fn max_space_sum(n: usize) -> Result<f64> {
    check_even(n)?;
    let half = n / 2;
    let summed = 2.0 * (1..half).map(|k| k as f64).sum::<f64>() + half as f64;
    let closed = (n * n) as f64 / 4.0;
    debug_assert_eq!(summed, closed);
    Ok(summed)
}

/// Largest possible bond-entropy sum when every bond is capped at `chi`:
/// `⌊log₂χ⌋(⌊log₂χ⌋+1) + log₂χ·(N − 2⌊log₂χ⌋ − 1)`.
pub fn max_space_sum_truncated(n: usize, chi: usize) -> Result<f64> {
    check_even(n)?;
    if chi < 1 || (n / 2 < usize::BITS as usize && chi > 1usize << (n / 2)) {
        return Err(Error::InvalidBondDim { chi, reason: "need 1 <= chi <= 2^(N/2)" });
    }
    let f = floor_log2(chi) as f64;
    let l = (chi as f64).log2();
    Ok(f * (f + 1.0) + l * (n as f64 - 2.0 * f - 1.0))
}

/// `⌊log₂ chi⌋` for `chi ≥ 1`.
pub fn floor_log2(chi: usize) -> usize {
    (usize::BITS - 1 - chi.leading_zeros()) as usize
}
