//! Truncated singular value decomposition.

use faer::{c64, Mat};
use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real, C};

/// Output of [`svd_truncate`]: `M ≈ U · diag(singular_values) · V†`.
#[derive(Clone, Debug)]
pub struct SvdResult<T: Real> {
    /// `m × k` with orthonormal columns.
    pub u: DMatrix<C<T>>,
    /// Nonincreasing, nonnegative; length `k`.
    pub singular_values: Vec<T>,
    /// `k × n` with orthonormal rows.
    pub v_dag: DMatrix<C<T>>,
    /// Sum of squares of the dropped singular values.
    pub discarded_weight: T,
}

impl<T: Real> SvdResult<T> {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// Sum of squares of the retained singular values.
    pub fn kept_weight(&self) -> T {
        self.singular_values.iter().fold(T::zero(), |acc, &s| acc + s * s)
    }

    /// `U · diag(s) · V†`.
    pub fn reconstruct(&self) -> DMatrix<C<T>> {
        let mut us = self.u.clone();
        for (j, &s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * &self.v_dag
    }
}

/// Full SVD followed by truncation: singular values `< cutoff`, and all beyond
/// the first `chi`, are dropped. At least one value is always kept.
pub fn svd_truncate<T: Real>(
    matrix: &DMatrix<C<T>>,
    chi: Option<usize>,
    cutoff: T,
) -> Result<SvdResult<T>> {
    let (rows, cols) = matrix.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidArgument(format!("cannot decompose a {rows}x{cols} matrix")));
    }
    if cutoff < T::zero() {
        return Err(Error::InvalidArgument("negative SVD cutoff".into()));
    }
    if chi == Some(0) {
        return Err(Error::InvalidBondDim { chi: 0, reason: "truncation rank must be at least 1" });
    }

    // Decomposed in double precision whatever `T` is.
    let m = Mat::<c64>::from_fn(rows, cols, |r, c| {
        let z = matrix[(r, c)];
        c64::new(z.re.as_f64(), z.im.as_f64())
    });
    let svd = m.thin_svd().map_err(|_| Error::SvdNonConvergence { rows, cols })?;
    let (u_full, s_full, v_full) = (svd.U(), svd.S().column_vector(), svd.V());
    let values: Vec<T> = (0..s_full.nrows()).map(|i| T::lit(s_full[i].re)).collect();
    let to_t = |z: c64| cplx(T::lit(z.re), T::lit(z.im));

    // faer sorts nonincreasingly already; keep the sort for robustness.
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap_or(std::cmp::Ordering::Equal));

    let above_cutoff = order.iter().take_while(|&&i| values[i] >= cutoff).count();
    let keep = above_cutoff.min(chi.unwrap_or(usize::MAX)).max(1);

    let mut discarded = T::zero();
    for &i in &order[keep..] {
        discarded += values[i] * values[i];
    }

    let u = DMatrix::from_fn(rows, keep, |r, c| to_t(u_full[(r, order[c])]));
    let v_dag = DMatrix::from_fn(keep, cols, |r, c| to_t(v_full[(c, order[r])].conj()));
    let singular_values = order[..keep].iter().map(|&i| values[i].max(T::zero())).collect();

    Ok(SvdResult { u, singular_values, v_dag, discarded_weight: discarded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rows: usize, cols: usize, seed: u64) -> DMatrix<C<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        DMatrix::from_fn(rows, cols, |_, _| cplx(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let id = DMatrix::<C<f64>>::identity(2, 2);
        let res = svd_truncate(&id, None, 0.0).unwrap();
        assert_eq!(res.singular_values.len(), 2);
        for s in &res.singular_values {
            assert!((s - 1.0).abs() < 1e-14);
        }
        assert_eq!(res.discarded_weight, 0.0);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = random_matrix(5, 1, 1);
        let v = random_matrix(4, 1, 2);
        let m = &u * v.adjoint();
        let res = svd_truncate(&m, None, 1e-12).unwrap();
        assert_eq!(res.rank(), 1);
    }

    #[test]
    fn frobenius_error_equals_discarded_weight() {
        let m = random_matrix(8, 8, 3);
        let res = svd_truncate(&m, Some(3), 0.0).unwrap();
        assert_eq!(res.rank(), 3);
        let diff = &m - res.reconstruct();
        let err2: f64 = diff.iter().map(|z| z.norm_sqr()).sum();
        assert!((err2 - res.discarded_weight).abs() < 1e-10, "{err2} vs {}", res.discarded_weight);
    }

    #[test]
    fn values_sorted_and_isometries() {
        let m = random_matrix(6, 9, 4);
        let res = svd_truncate(&m, None, 0.0).unwrap();
        assert!(res.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let utu = res.u.adjoint() * &res.u;
        let vvt = &res.v_dag * res.v_dag.adjoint();
        let k = res.rank();
        assert!((utu - DMatrix::identity(k, k)).norm() < 1e-12);
        assert!((vvt - DMatrix::identity(k, k)).norm() < 1e-12);
    }

    #[test]
    fn rejects_zero_chi_and_empty() {
        let m = random_matrix(2, 2, 5);
        assert!(svd_truncate(&m, Some(0), 0.0).is_err());
        let empty = DMatrix::<C<f64>>::zeros(0, 3);
        assert!(svd_truncate(&empty, None, 0.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let m = DMatrix::<C<f32>>::identity(3, 3);
        let res = svd_truncate(&m, Some(2), 1e-6).unwrap();
        assert_eq!(res.rank(), 2);
        assert!((res.discarded_weight - 1.0).abs() < 1e-6);
    }
}
