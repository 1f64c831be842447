//! Unitary gates and their symbolic labels.
//!
//! Two-qubit matrices act on `|a b⟩` with basis index `2a + b`, where `a` is
//! the qubit passed first (the control, for CNOT).

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cone, cplx, czero, Real, C};

/// Symbolic gate, independent of the scalar type.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", content = "angle", rename_all = "lowercase")]
pub enum GateKind {
    I,
    H,
    X,
    Z,
    /// `exp(-i θ X / 2)`
    Rx(f64),
    /// `exp(-i θ Z / 2)`
    Rz(f64),
    Cnot,
    Swap,
}

impl GateKind {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            _ => 1,
        }
    }

    pub fn gate<T: Real>(&self) -> Gate<T> {
        match *self {
            GateKind::I => Gate::identity(),
            GateKind::H => Gate::h(),
            GateKind::X => Gate::x(),
            GateKind::Z => Gate::z(),
            GateKind::Rx(theta) => Gate::rx(theta),
            GateKind::Rz(theta) => Gate::rz(theta),
            GateKind::Cnot => Gate::cnot(),
            GateKind::Swap => Gate::swap(),
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::Rx(t) => GateKind::Rx(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            other => other,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::I => write!(f, "I"),
            GateKind::H => write!(f, "H"),
            GateKind::X => write!(f, "X"),
            GateKind::Z => write!(f, "Z"),
            GateKind::Rx(t) => write!(f, "RX({t})"),
            GateKind::Rz(t) => write!(f, "RZ({t})"),
            GateKind::Cnot => write!(f, "CNOT"),
            GateKind::Swap => write!(f, "SWAP"),
        }
    }
}

/// A validated 2×2 or 4×4 unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate<T: Real> {
    matrix: DMatrix<C<T>>,
    label: String,
}

impl<T: Real> Gate<T> {
    /// Wraps `matrix`, rejecting wrong shapes and non-unitary input.
    pub fn new(matrix: DMatrix<C<T>>, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let (rows, cols) = matrix.shape();
        if rows != cols || !(rows == 2 || rows == 4) {
            return Err(Error::BadGateShape { rows, cols });
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= T::UNITARITY_TOL) {
            return Err(Error::NonUnitary { label, deviation });
        }
        Ok(Gate { matrix, label })
    }

    fn known(rows: usize, entries: &[(f64, f64)], label: &str) -> Self {
        let m = DMatrix::from_row_iterator(
            rows,
            rows,
            entries.iter().map(|&(re, im)| cplx(T::lit(re), T::lit(im))),
        );
        Gate { matrix: m, label: label.to_string() }
    }

    pub fn arity(&self) -> usize {
        if self.matrix.nrows() == 2 {
            1
        } else {
            2
        }
    }

    pub fn matrix(&self) -> &DMatrix<C<T>> {
        &self.matrix
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn identity() -> Self {
        Gate { matrix: DMatrix::identity(2, 2), label: "I".into() }
    }

    pub fn h() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::known(2, &[(s, 0.0), (s, 0.0), (s, 0.0), (-s, 0.0)], "H")
    }

    pub fn x() -> Self {
        Self::known(2, &[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)], "X")
    }

    pub fn z() -> Self {
        Self::known(2, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)], "Z")
    }

    pub fn rx(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::known(2, &[(c, 0.0), (0.0, -s), (0.0, -s), (c, 0.0)], &format!("RX({theta})"))
    }

    pub fn rz(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Self::known(2, &[(c, -s), (0.0, 0.0), (0.0, 0.0), (c, s)], &format!("RZ({theta})"))
    }

    pub fn cnot() -> Self {
        let mut m = DMatrix::from_element(4, 4, czero());
        m[(0, 0)] = cone();
        m[(1, 1)] = cone();
        m[(2, 3)] = cone();
        m[(3, 2)] = cone();
        Gate { matrix: m, label: "CNOT".into() }
    }

    pub fn swap() -> Self {
        let mut m = DMatrix::from_element(4, 4, czero());
        m[(0, 0)] = cone();
        m[(1, 2)] = cone();
        m[(2, 1)] = cone();
        m[(3, 3)] = cone();
        Gate { matrix: m, label: "SWAP".into() }
    }

    /// The same two-qubit operation with the roles of its qubits exchanged.
    pub fn reversed(&self) -> Self {
        if self.arity() == 1 {
            return self.clone();
        }
        let flip = |i: usize| ((i & 1) << 1) | (i >> 1);
        let m = DMatrix::from_fn(4, 4, |r, c| self.matrix[(flip(r), flip(c))]);
        Gate { matrix: m, label: format!("{}~", self.label) }
    }

    pub fn adjoint(&self) -> Self {
        Gate { matrix: self.matrix.adjoint(), label: format!("{}†", self.label) }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Gate<T>) -> Result<Self> {
        if self.arity() != other.arity() {
            return Err(Error::WrongArity {
                label: other.label.clone(),
                arity: other.arity(),
                expected: self.arity(),
            });
        }
        Ok(Gate {
            matrix: &self.matrix * &other.matrix,
            label: format!("{}·{}", self.label, other.label),
        })
    }
}

fn unitarity_deviation<T: Real>(m: &DMatrix<C<T>>) -> f64 {
    let prod = m.adjoint() * m;
    let n = m.nrows();
    let mut dev = 0.0f64;
    for r in 0..n {
        for c in 0..n {
            let target = if r == c { cone() } else { czero() };
            dev = dev.max((prod[(r, c)] - target).norm_sqr().sqrt().as_f64());
        }
    }
    dev
}
