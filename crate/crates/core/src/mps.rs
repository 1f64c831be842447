//! Matrix product states in mixed canonical form.
//!
//! Site `n` holds a rank-3 tensor `A[α, s, β]` of shape
//! `(left_bond, 2, right_bond)`; bond `k` joins sites `k` and `k + 1` and
//! always separates qubits `{0..=k}` from `{k+1..N-1}`.
//!
//! Tensors left of the orthogonality center are left-orthonormal and tensors
//! to its right are right-orthonormal, so the singular values of any split
//! performed at the center are the Schmidt values of the whole state. The
//! center is moved lazily toward wherever the next operation happens.
//!
//! Every truncation renormalizes the retained spectrum, so the state is kept
//! at unit norm. The discarded weight is accumulated in
//! [`MpsState::cumulative_truncation_error`], and the product of retained
//! weights in [`MpsState::retained_weight`]; the latter is the squared norm
//! the state would have had without renormalization.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::linalg::svd_truncate;
use crate::scalar::{cone, czero, Real, C};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct SiteTensor<T: Real> {
    left: usize,
    right: usize,
    /// Row-major `(α, s, β)`: index `(α·2 + s)·right + β`.
    data: Vec<C<T>>,
}

impl<T: Real> SiteTensor<T> {
    fn from_local(amps: [C<T>; 2]) -> Self {
        SiteTensor { left: 1, right: 1, data: amps.to_vec() }
    }

    #[inline]
    fn get(&self, a: usize, s: usize, b: usize) -> C<T> {
        self.data[(a * 2 + s) * self.right + b]
    }

    /// `(2·left) × right`, rows `(α, s)`.
    fn left_matrix(&self) -> DMatrix<C<T>> {
        DMatrix::from_row_slice(2 * self.left, self.right, &self.data)
    }

    /// `left × (2·right)`, columns `(s, β)`.
    fn right_matrix(&self) -> DMatrix<C<T>> {
        DMatrix::from_row_slice(self.left, 2 * self.right, &self.data)
    }

    fn from_left_matrix(m: &DMatrix<C<T>>) -> Self {
        debug_assert_eq!(m.nrows() % 2, 0);
        Self::from_row_major(m.nrows() / 2, m.ncols(), m)
    }

    fn from_right_matrix(m: &DMatrix<C<T>>) -> Self {
        debug_assert_eq!(m.ncols() % 2, 0);
        Self::from_row_major(m.nrows(), m.ncols() / 2, m)
    }

    fn from_row_major(left: usize, right: usize, m: &DMatrix<C<T>>) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for r in 0..m.nrows() {
            data.extend(m.row(r).iter().copied());
        }
        SiteTensor { left, right, data }
    }

    /// The `left × right` matrix for physical index `s`.
    fn slice(&self, s: usize) -> DMatrix<C<T>> {
        DMatrix::from_fn(self.left, self.right, |a, b| self.get(a, s, b))
    }
}

/// An `N`-qubit pure state as a chain of rank-3 tensors.
#[derive(Clone, Debug)]
pub struct MpsState<T: Real> {
    sites: Vec<SiteTensor<T>>,
    center: usize,
    chi_cap: Option<usize>,
    svd_cutoff: T,
    truncation_error: T,
    retained_weight: T,
    /// Normalized Schmidt values per bond, when known to be current.
    spectra: Vec<Option<Vec<T>>>,
}

/// Per-bond discarded weights produced by [`MpsState::compress_with_report`].
#[derive(Clone, Debug)]
pub struct CompressionReport<T: Real> {
    /// Relative weight discarded at each bond, indexed by bond.
    pub discarded: Vec<T>,
}

impl<T: Real> CompressionReport<T> {
    pub fn total(&self) -> T {
        self.discarded.iter().fold(T::zero(), |a, &b| a + b)
    }

    /// `Π (1 - w_k)`: the fraction of norm kept across the whole sweep.
    pub fn retained(&self) -> T {
        self.discarded.iter().fold(T::one(), |a, &w| a * (T::one() - w))
    }
}

impl<T: Real> MpsState<T> {
    fn from_sites(sites: Vec<SiteTensor<T>>) -> Self {
        let n = sites.len();
        let mut spectra = vec![None; n - 1];
        if sites.iter().all(|s| s.right == 1) {
            spectra.iter_mut().for_each(|s| *s = Some(vec![T::one()]));
        }
        MpsState {
            sites,
            center: 0,
            chi_cap: None,
            svd_cutoff: T::lit(T::DEFAULT_SVD_CUTOFF),
            truncation_error: T::zero(),
            retained_weight: T::one(),
            spectra,
        }
    }

    /// `|+⟩^⊗N`.
    pub fn plus_state(num_sites: usize) -> Result<Self> {
        let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        Self::product_state(&vec![[C::new(h, T::zero()), C::new(h, T::zero())]; num_sites])
    }

    /// Computational basis state; `bits[k]` is the value of qubit `k`.
    pub fn basis_state(bits: &[u8]) -> Result<Self> {
        let locals: Vec<_> = bits
            .iter()
            .map(|&b| if b == 0 { [cone(), czero()] } else { [czero(), cone()] })
            .collect();
        Self::product_state(&locals)
    }

    /// Product of single-qubit states; each factor is normalized.
    pub fn product_state(locals: &[[C<T>; 2]]) -> Result<Self> {
        if locals.len() < 2 {
            return Err(Error::InvalidSize { n: locals.len(), reason: "need at least 2 sites" });
        }
        let mut sites = Vec::with_capacity(locals.len());
        for amps in locals {
            let norm = (amps[0].norm_sqr() + amps[1].norm_sqr()).sqrt();
            if norm <= T::zero() {
                return Err(Error::InvalidArgument("zero local state".into()));
            }
            let inv = C::new(T::one() / norm, T::zero());
            sites.push(SiteTensor::from_local([amps[0] * inv, amps[1] * inv]));
        }
        Ok(Self::from_sites(sites))
    }

    /// Exact MPS of a dense state vector (qubit 0 is the most significant bit).
    /// The input is normalized first.
    pub fn from_amplitudes(num_sites: usize, amplitudes: &[C<T>]) -> Result<Self> {
        if num_sites < 2 {
            return Err(Error::InvalidSize { n: num_sites, reason: "need at least 2 sites" });
        }
        if amplitudes.len() != 1 << num_sites {
            return Err(Error::LengthMismatch { got: amplitudes.len(), expected: 1 << num_sites });
        }
        let norm = amplitudes.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
        if norm <= T::zero() {
            return Err(Error::InvalidArgument("zero state vector".into()));
        }
        let cutoff = T::lit(T::DEFAULT_SVD_CUTOFF);
        let mut sites = Vec::with_capacity(num_sites);
        let mut spectra = Vec::with_capacity(num_sites - 1);
        // remainder: (left bond) × (remaining physical dims)
        let mut rest = DMatrix::from_row_slice(1, amplitudes.len(), amplitudes) / C::new(norm, T::zero());
        for _ in 0..num_sites - 1 {
            let left = rest.nrows();
            let cols = rest.ncols() / 2;
            // regroup (α, s·rest) -> (α·2 + s, rest)
            let m = DMatrix::from_fn(left * 2, cols, |r, c| rest[(r / 2, (r % 2) * cols + c)]);
            let svd = svd_truncate(&m, None, cutoff)?;
            let kept = svd.kept_weight().sqrt();
            let s: Vec<T> = svd.singular_values.iter().map(|&v| v / kept).collect();
            sites.push(SiteTensor::from_left_matrix(&svd.u));
            let mut sv = svd.v_dag;
            for (i, &v) in s.iter().enumerate() {
                sv.row_mut(i).scale_mut(v);
            }
            rest = sv;
            spectra.push(Some(s));
        }
        sites.push(SiteTensor::from_right_matrix(&rest));
        let mut state = Self::from_sites(sites);
        state.center = num_sites - 1;
        state.spectra = spectra;
        Ok(state)
    }

    pub fn num_sites(&self) -> usize {
        self.sites.len()
    }

    /// Dimension of each of the `N - 1` internal bonds.
    pub fn bond_dims(&self) -> Vec<usize> {
        self.sites[..self.sites.len() - 1].iter().map(|s| s.right).collect()
    }

    pub fn max_bond_dim(&self) -> usize {
        self.bond_dims().into_iter().max().unwrap_or(1)
    }

    pub fn chi_cap(&self) -> Option<usize> {
        self.chi_cap
    }

    /// Caps the bond dimension of every subsequent split. Bonds already above
    /// the new cap are compressed right away.
    pub fn set_chi_cap(&mut self, chi_cap: Option<usize>) -> Result<()> {
        if let Some(chi) = chi_cap {
            if chi == 0 {
                return Err(Error::InvalidBondDim { chi, reason: "cap must be at least 1" });
            }
            if self.max_bond_dim() > chi {
                *self = self.compress(chi)?;
            }
        }
        self.chi_cap = chi_cap;
        Ok(())
    }

    pub fn with_chi_cap(mut self, chi_cap: Option<usize>) -> Result<Self> {
        self.set_chi_cap(chi_cap)?;
        Ok(self)
    }

    pub fn svd_cutoff(&self) -> T {
        self.svd_cutoff
    }

    pub fn set_svd_cutoff(&mut self, cutoff: T) -> Result<()> {
        if !(cutoff >= T::zero()) {
            return Err(Error::InvalidArgument("SVD cutoff must be nonnegative".into()));
        }
        self.svd_cutoff = cutoff;
        Ok(())
    }

    /// Sum of the relative weights discarded by every truncation so far.
    pub fn cumulative_truncation_error(&self) -> T {
        self.truncation_error
    }

    /// Product of `(1 - w)` over every truncation so far.
    pub fn retained_weight(&self) -> T {
        self.retained_weight
    }

    /// Current orthogonality center.
    pub fn center(&self) -> usize {
        self.center
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.num_sites() {
            return Err(Error::SiteOutOfRange { site, num_sites: self.num_sites() });
        }
        Ok(())
    }

    fn check_bond(&self, bond: usize) -> Result<()> {
        if bond + 1 >= self.num_sites() {
            return Err(Error::BondOutOfRange { bond, num_sites: self.num_sites() });
        }
        Ok(())
    }

    pub fn apply_single_qubit_gate(&mut self, site: usize, gate: &Gate<T>) -> Result<()> {
        self.check_site(site)?;
        if gate.arity() != 1 {
            return Err(Error::WrongArity { label: gate.label().into(), arity: gate.arity(), expected: 1 });
        }
        let g = gate.matrix();
        let t = &mut self.sites[site];
        let r = t.right;
        for a in 0..t.left {
            for b in 0..r {
                let x0 = t.data[(a * 2) * r + b];
                let x1 = t.data[(a * 2 + 1) * r + b];
                t.data[(a * 2) * r + b] = g[(0, 0)] * x0 + g[(0, 1)] * x1;
                t.data[(a * 2 + 1) * r + b] = g[(1, 0)] * x0 + g[(1, 1)] * x1;
            }
        }
        Ok(())
    }

    /// Applies a two-qubit gate; `site_i` is the gate's first qubit. Sites
    /// further apart than one are brought together with SWAPs that are undone
    /// afterwards, each going through the same truncating split.
    pub fn apply_two_qubit_gate(&mut self, site_i: usize, site_j: usize, gate: &Gate<T>) -> Result<()> {
        self.check_site(site_i)?;
        self.check_site(site_j)?;
        if site_i == site_j {
            return Err(Error::SameSite(site_i));
        }
        if gate.arity() != 2 {
            return Err(Error::WrongArity { label: gate.label().into(), arity: gate.arity(), expected: 2 });
        }
        let swap = Gate::swap();
        if site_i < site_j {
            for k in site_i..site_j - 1 {
                self.apply_adjacent(k, &swap, true)?;
            }
            self.apply_adjacent(site_j - 1, gate, false)?;
            for k in (site_i..site_j - 1).rev() {
                self.apply_adjacent(k, &swap, false)?;
            }
        } else {
            for k in (site_j + 1..site_i).rev() {
                self.apply_adjacent(k, &swap, false)?;
            }
            self.apply_adjacent(site_j, &gate.reversed(), true)?;
            for k in site_j + 1..site_i {
                self.apply_adjacent(k, &swap, true)?;
            }
        }
        Ok(())
    }

    /// Contract sites `k`, `k+1`, apply `gate` (first qubit on `k`), and split
    /// again. The center ends on `k + 1` if `center_right`, else on `k`.
    fn apply_adjacent(&mut self, k: usize, gate: &Gate<T>, center_right: bool) -> Result<()> {
        if self.center < k {
            self.move_center(k);
        } else if self.center > k + 1 {
            self.move_center(k + 1);
        }
        let left = self.sites[k].left;
        let right = self.sites[k + 1].right;
        let theta = self.sites[k].left_matrix() * self.sites[k + 1].right_matrix();
        // theta: rows (α, s1), cols (s2, β)
        let g = gate.matrix();
        let mut out = DMatrix::from_element(2 * left, 2 * right, czero::<T>());
        for a in 0..left {
            for b in 0..right {
                let x = [
                    theta[(2 * a, b)],
                    theta[(2 * a, right + b)],
                    theta[(2 * a + 1, b)],
                    theta[(2 * a + 1, right + b)],
                ];
                for t in 0..4 {
                    let mut acc = czero::<T>();
                    for (s, &xs) in x.iter().enumerate() {
                        acc += g[(t, s)] * xs;
                    }
                    out[(2 * a + (t >> 1), (t & 1) * right + b)] = acc;
                }
            }
        }
        self.split_two_site(k, &out, center_right)
    }

    /// SVD-split a `(2·left) × (2·right)` two-site block back into sites `k`, `k+1`.
    fn split_two_site(&mut self, k: usize, theta: &DMatrix<C<T>>, center_right: bool) -> Result<()> {
        let svd = svd_truncate(theta, self.chi_cap, self.svd_cutoff)?;
        let kept = svd.kept_weight();
        let total = kept + svd.discarded_weight;
        let discarded = svd.discarded_weight / total;
        let scale = kept.sqrt();
        let s: Vec<T> = svd.singular_values.iter().map(|&v| v / scale).collect();

        let (mut u, mut vd) = (svd.u, svd.v_dag);
        if center_right {
            for (i, &v) in s.iter().enumerate() {
                vd.row_mut(i).scale_mut(v);
            }
        } else {
            for (i, &v) in s.iter().enumerate() {
                u.column_mut(i).scale_mut(v);
            }
        }
        self.sites[k] = SiteTensor::from_left_matrix(&u);
        self.sites[k + 1] = SiteTensor::from_right_matrix(&vd);
        self.center = if center_right { k + 1 } else { k };
        self.record_truncation(discarded, Some(k));
        self.spectra[k] = Some(s);
        Ok(())
    }

    fn record_truncation(&mut self, discarded: T, exempt: Option<usize>) {
        if discarded > T::zero() {
            self.truncation_error += discarded;
            self.retained_weight *= T::one() - discarded;
        }
        // Dust below machine epsilon cannot move any other bond's spectrum
        // by a measurable amount.
        if discarded > T::default_epsilon() {
            for (b, s) in self.spectra.iter_mut().enumerate() {
                if Some(b) != exempt {
                    *s = None;
                }
            }
        }
    }

    /// Moves the orthogonality center with QR steps; spectra are unaffected.
    fn move_center(&mut self, target: usize) {
        while self.center < target {
            let c = self.center;
            let qr = self.sites[c].left_matrix().qr();
            let (q, r) = (qr.q(), qr.r());
            self.sites[c] = SiteTensor::from_left_matrix(&q);
            let next = r * self.sites[c + 1].right_matrix();
            self.sites[c + 1] = SiteTensor::from_right_matrix(&next);
            self.center += 1;
        }
        while self.center > target {
            let c = self.center;
            let qr = self.sites[c].right_matrix().adjoint().qr();
            let (q, r) = (qr.q(), qr.r());
            self.sites[c] = SiteTensor::from_right_matrix(&q.adjoint());
            let prev = self.sites[c - 1].left_matrix() * r.adjoint();
            self.sites[c - 1] = SiteTensor::from_left_matrix(&prev);
            self.center -= 1;
        }
    }

    /// Moves the center from `c` to `c + 1` with an SVD, recording bond `c`'s spectrum.
    fn svd_step_right(&mut self, c: usize) -> Result<()> {
        debug_assert_eq!(self.center, c);
        let m = self.sites[c].left_matrix();
        let svd = svd_truncate(&m, self.chi_cap, self.svd_cutoff)?;
        let kept = svd.kept_weight();
        let discarded = svd.discarded_weight / (kept + svd.discarded_weight);
        let scale = kept.sqrt();
        let s: Vec<T> = svd.singular_values.iter().map(|&v| v / scale).collect();
        let mut sv = svd.v_dag;
        for (i, &v) in s.iter().enumerate() {
            sv.row_mut(i).scale_mut(v);
        }
        self.sites[c] = SiteTensor::from_left_matrix(&svd.u);
        let next = sv * self.sites[c + 1].right_matrix();
        self.sites[c + 1] = SiteTensor::from_right_matrix(&next);
        self.center = c + 1;
        self.record_truncation(discarded, Some(c));
        self.spectra[c] = Some(s);
        Ok(())
    }

    /// Normalized Schmidt values across `bond`, nonincreasing.
    pub fn bond_spectrum(&mut self, bond: usize) -> Result<Vec<T>> {
        self.check_bond(bond)?;
        if let Some(s) = &self.spectra[bond] {
            return Ok(s.clone());
        }
        self.move_center(bond);
        self.svd_step_right(bond)?;
        Ok(self.spectra[bond].clone().expect("spectrum just computed"))
    }

    /// Schmidt spectra of every bond, recomputing only the stale ones.
    pub fn all_spectra(&mut self) -> Result<Vec<Vec<T>>> {
        let stale: Vec<usize> = (0..self.spectra.len()).filter(|&b| self.spectra[b].is_none()).collect();
        if let (Some(&lo), Some(&hi)) = (stale.first(), stale.last()) {
            self.move_center(lo);
            for c in lo..=hi {
                self.svd_step_right(c)?;
            }
        }
        Ok(self.spectra.iter().map(|s| s.clone().expect("all spectra current")).collect())
    }

    /// Copy of the state with every bond truncated to at most `chi`, the result
    /// renormalized. `self` is left untouched.
    pub fn compress(&self, chi: usize) -> Result<Self> {
        self.compress_with_report(chi).map(|(s, _)| s)
    }

    pub fn compress_with_report(&self, chi: usize) -> Result<(Self, CompressionReport<T>)> {
        if chi < 1 {
            return Err(Error::InvalidBondDim { chi, reason: "compression rank must be at least 1" });
        }
        let mut out = self.clone();
        let n = out.num_sites();
        out.move_center(n - 1);
        let mut discarded = vec![T::zero(); n - 1];
        for c in (1..n).rev() {
            let m = out.sites[c].right_matrix();
            let svd = svd_truncate(&m, Some(chi), out.svd_cutoff)?;
            let kept = svd.kept_weight();
            let w = svd.discarded_weight / (kept + svd.discarded_weight);
            let scale = kept.sqrt();
            let mut us = svd.u;
            for (i, &v) in svd.singular_values.iter().enumerate() {
                us.column_mut(i).scale_mut(v / scale);
            }
            out.sites[c] = SiteTensor::from_right_matrix(&svd.v_dag);
            let prev = out.sites[c - 1].left_matrix() * us;
            out.sites[c - 1] = SiteTensor::from_left_matrix(&prev);
            out.center = c - 1;
            discarded[c - 1] = w;
            out.record_truncation(w, None);
            out.spectra[c - 1] = None;
        }
        Ok((out, CompressionReport { discarded }))
    }

    /// Amplitude `⟨bits|Ψ⟩`.
    pub fn amplitude(&self, bits: &[u8]) -> Result<C<T>> {
        if bits.len() != self.num_sites() {
            return Err(Error::LengthMismatch { got: bits.len(), expected: self.num_sites() });
        }
        let mut v = DMatrix::from_element(1, 1, cone::<T>());
        for (site, &b) in self.sites.iter().zip(bits) {
            if b > 1 {
                return Err(Error::InvalidArgument(format!("bit value {b}")));
            }
            v *= site.slice(b as usize);
        }
        Ok(v[(0, 0)])
    }

    /// All `2^N` amplitudes; qubit 0 is the most significant bit of the index.
    pub fn to_amplitudes(&self) -> Vec<C<T>> {
        let mut cur = DMatrix::from_element(1, 1, cone::<T>());
        for site in &self.sites {
            let parts = [cur.clone() * site.slice(0), cur * site.slice(1)];
            let rows = parts[0].nrows();
            cur = DMatrix::from_fn(rows * 2, site.right, |r, c| parts[r % 2][(r / 2, c)]);
        }
        cur.column(0).iter().copied().collect()
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &MpsState<T>) -> Result<C<T>> {
        if self.num_sites() != other.num_sites() {
            return Err(Error::LengthMismatch { got: other.num_sites(), expected: self.num_sites() });
        }
        let mut env = DMatrix::from_element(1, 1, cone::<T>());
        for (a, b) in self.sites.iter().zip(&other.sites) {
            env = a.slice(0).adjoint() * &env * b.slice(0) + a.slice(1).adjoint() * &env * b.slice(1);
        }
        Ok(env[(0, 0)])
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &MpsState<T>) -> Result<T> {
        Ok(self.overlap(other)?.norm_sqr())
    }

    pub fn norm(&self) -> T {
        self.overlap(self).map(|z| z.re.max(T::zero()).sqrt()).unwrap_or_else(|_| T::zero())
    }

    /// `⟨Z_i Z_j⟩` for every `i < j`, as an upper-triangular `N × N` table
    /// (entries with `i ≥ j` are zero).
    pub fn zz_correlations(&self) -> Vec<Vec<C<T>>> {
        let n = self.num_sites();
        let slices: Vec<[DMatrix<C<T>>; 2]> = self.sites.iter().map(|t| [t.slice(0), t.slice(1)]).collect();
        let transfer = |env: &DMatrix<C<T>>, k: usize, signs: [T; 2]| -> DMatrix<C<T>> {
            let [a0, a1] = &slices[k];
            let t0 = a0.adjoint() * env * a0;
            let t1 = a1.adjoint() * env * a1;
            t0 * C::new(signs[0], T::zero()) + t1 * C::new(signs[1], T::zero())
        };
        let plain = [T::one(), T::one()];
        let z = [T::one(), -T::one()];

        let mut left = Vec::with_capacity(n + 1);
        left.push(DMatrix::from_element(1, 1, cone::<T>()));
        for k in 0..n {
            let next = transfer(&left[k], k, plain);
            left.push(next);
        }
        let mut right = vec![DMatrix::from_element(1, 1, cone::<T>()); n + 1];
        for k in (0..n).rev() {
            let [a0, a1] = &slices[k];
            right[k] = a0 * &right[k + 1] * a0.adjoint() + a1 * &right[k + 1] * a1.adjoint();
        }
        let norm2 = left[n][(0, 0)].re;
        let inv = C::new(T::one() / norm2, T::zero());

        let mut out = vec![vec![czero::<T>(); n]; n];
        for i in 0..n {
            let mut env = transfer(&left[i], i, z);
            for j in i + 1..n {
                let with_z = transfer(&env, j, z);
                out[i][j] = (with_z * &right[j + 1]).trace() * inv;
                if j + 1 < n {
                    env = transfer(&env, j, plain);
                }
            }
        }
        out
    }

    /// Checks chain consistency, exact-rank bounds, the cap, and unit norm.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.num_sites();
        if self.sites[0].left != 1 || self.sites[n - 1].right != 1 {
            return Err(Error::InvalidArgument("boundary bonds must have dimension 1".into()));
        }
        for k in 0..n - 1 {
            let d = self.sites[k].right;
            if d != self.sites[k + 1].left {
                return Err(Error::InvalidArgument(format!("bond {k} mismatch")));
            }
            let exact = 1usize.checked_shl((k + 1).min(n - k - 1) as u32).unwrap_or(usize::MAX);
            if d > exact {
                return Err(Error::InvalidArgument(format!("bond {k} dim {d} exceeds exact rank {exact}")));
            }
            if let Some(cap) = self.chi_cap.filter(|&cap| d > cap) {
                return Err(Error::InvalidArgument(format!("bond {k} dim {d} exceeds cap {cap}")));
            }
        }
        let norm = self.norm();
        if (norm - T::one()).abs() > T::lit(1e-10).max(T::default_epsilon() * T::lit(1e3)) {
            return Err(Error::InvalidArgument(format!("norm {norm} deviates from 1")));
        }
        Ok(())
    }
}
