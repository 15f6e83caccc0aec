//! Dense complex linear algebra for the small fixed dimensions used by the
//! models (2, 4 and 9).
//!
//! Matrices are stored row-major in a flat `Vec`. Everything here is a value
//! type: operations return new matrices and never mutate their inputs.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Entrywise bound on `|A - A†|` for a matrix to count as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Entrywise bound on `|U†U - I|` for a matrix to count as unitary.
pub const UNITARY_TOL: f64 = 1e-10;
/// Bound on `|‖ψ‖ - 1|` for a normalized state.
pub const NORM_TOL: f64 = 1e-10;

/// Largest scaled norm accepted by the truncated Taylor series before
/// squaring kicks in.
const TAYLOR_NORM_BOUND: f64 = 0.5;
const TAYLOR_MAX_ORDER: usize = 40;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Self { dim, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = C64::new(d, 0.0);
        }
        m
    }

    /// Builds a matrix from rows; every row must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(LinalgError::NotSquare);
        }
        Ok(Self {
            dim,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim).map(<[C64]>::to_vec).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|k| self[(k, k)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum. Bounds the spectral norm from above.
    pub fn one_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest `|A_rc - conj(A_cr)|` together with its location.
    pub fn hermiticity_defect(&self) -> (f64, usize, usize) {
        let mut worst = (0.0, 0, 0);
        for r in 0..self.dim {
            for c in r..self.dim {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect().0 <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        unitarity_defect(self) <= tol
    }

    /// Submatrix on the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<C64>> {
        rows.iter()
            .map(|&r| cols.iter().map(|&c| self[(r, c)]).collect())
            .collect()
    }

    /// Square submatrix on `indices` (rows and columns alike).
    pub fn principal_block(&self, indices: &[usize]) -> Self {
        Self::from_fn(indices.len(), |r, c| self[(indices[r], indices[c])])
    }

    pub fn column(&self, c: usize) -> StateVector {
        StateVector::new((0..self.dim).map(|r| self[(r, c)]).collect())
    }

    pub fn apply(&self, v: &StateVector) -> StateVector {
        assert_eq!(self.dim, v.dim(), "matrix/vector dimension mismatch");
        let amps = self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v.amplitudes()).map(|(a, b)| a * b).sum())
            .collect();
        StateVector::new(amps)
    }

    /// Largest entrywise difference to `other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for r in 0..n {
            let row = &self.data[r * n..(r + 1) * n];
            let dst = &mut out[r * n..(r + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let src = &rhs.data[k * n..(k + 1) * n];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        Self { dim: n, data: out }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A ket over a small basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[k] = ONE;
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            amps: self.amps.iter().map(|&a| a * s).collect(),
        }
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        }
    }

    /// Per-basis-state `|c_k|`.
    pub fn abs_amplitudes(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm()).collect()
    }
}

/// `exp(-i H dt)` for Hermitian `H`.
///
/// Scaling and squaring on a truncated Taylor series. The scaled generator
/// is kept below [`TAYLOR_NORM_BOUND`] in the 1-norm and the series runs
/// until the next term drops under machine precision, which keeps the
/// result unitary to ~1e-14 at the model dimensions.
pub fn hermitian_exp(h: &ComplexMatrix, dt: f64) -> Result<ComplexMatrix, LinalgError> {
    hermitian_exp_with_tol(h, dt, HERMITIAN_TOL)
}

pub fn hermitian_exp_with_tol(
    h: &ComplexMatrix,
    dt: f64,
    hermitian_tol: f64,
) -> Result<ComplexMatrix, LinalgError> {
    if !dt.is_finite() {
        return Err(LinalgError::NonFiniteStep(dt));
    }
    let (defect, row, col) = h.hermiticity_defect();
    if defect > hermitian_tol || defect.is_nan() {
        return Err(LinalgError::NotHermitian {
            row,
            col,
            defect,
            tol: hermitian_tol,
        });
    }
    Ok(expm_skew(h, dt))
}

/// Unchecked kernel of [`hermitian_exp`]; the propagators call this on
/// generators they built Hermitian by construction.
pub(crate) fn expm_skew(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let n = h.dim();
    let gen = h.scale(C64::new(0.0, -dt));
    let norm = gen.one_norm();
    if norm == 0.0 {
        return ComplexMatrix::identity(n);
    }
    let squarings = if norm > TAYLOR_NORM_BOUND {
        (norm / TAYLOR_NORM_BOUND).log2().ceil() as u32
    } else {
        0
    };
    let x = gen.scale(C64::new(0.5f64.powi(squarings as i32), 0.0));
    let xnorm = x.one_norm();

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut bound = 1.0;
    for k in 1..=TAYLOR_MAX_ORDER {
        term = (&term * &x).scale(C64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        bound *= xnorm / k as f64;
        if bound < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// Max entrywise `|U†U - I|`.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let gram = &u.adjoint() * u;
    gram.max_diff(&ComplexMatrix::identity(u.dim()))
}

/// Nearest unitary to a 2×2 matrix in the polar sense, `A (A†A)^{-1/2}`.
///
/// Returns `None` for singular input.
pub fn polar_unitary_2x2(a: &ComplexMatrix) -> Option<ComplexMatrix> {
    assert_eq!(a.dim(), 2, "polar projection is only implemented for 2x2");
    let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
    if det.norm() < 1e-14 {
        return None;
    }
    // Newton iteration U <- (U + U^{-†}) / 2; quadratically convergent for
    // nonsingular A.
    let mut u = a.clone();
    for _ in 0..100 {
        let d = u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        let inv = ComplexMatrix::from_fn(2, |r, c| {
            let adj = match (r, c) {
                (0, 0) => u[(1, 1)],
                (0, 1) => -u[(0, 1)],
                (1, 0) => -u[(1, 0)],
                _ => u[(0, 0)],
            };
            adj / d
        });
        let next = (&u + &inv.adjoint()).scale(C64::new(0.5, 0.0));
        let step = next.max_diff(&u);
        u = next;
        if step < 1e-15 {
            break;
        }
    }
    Some(u)
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |r, c| if r != c { ONE } else { ZERO })
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |r, c| match (r, c) {
        (0, 1) => -I,
        (1, 0) => I,
        _ => ZERO,
    })
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diagonal(&[1.0, -1.0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_generator_gives_identity() {
        let u = hermitian_exp(&ComplexMatrix::zeros(4), 1.0).unwrap();
        assert_eq!(u, ComplexMatrix::identity(4));
    }

    #[test]
    fn diagonal_phases() {
        let h = ComplexMatrix::from_real_diagonal(&[0.0, 0.0, 10.0, -10.0]);
        let u = hermitian_exp(&h, PI / 10.0).unwrap();
        let expected = ComplexMatrix::from_real_diagonal(&[1.0, 1.0, -1.0, -1.0]);
        assert!(u.max_diff(&expected) < 1e-13, "{u:?}");
    }

    #[test]
    fn rejects_non_hermitian_with_location() {
        let mut h = ComplexMatrix::zeros(3);
        h[(0, 2)] = C64::new(1.0, 0.0);
        match hermitian_exp(&h, 1.0) {
            Err(LinalgError::NotHermitian { row, col, defect, .. }) => {
                assert_eq!((row, col), (0, 2));
                assert!((defect - 1.0).abs() < 1e-15);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_finite_step() {
        assert!(hermitian_exp(&ComplexMatrix::zeros(2), f64::NAN).is_err());
    }

    #[test]
    fn unitarity_defect_examples() {
        assert_eq!(unitarity_defect(&ComplexMatrix::identity(3)), 0.0);
        let two = ComplexMatrix::identity(2).scale(C64::new(2.0, 0.0));
        assert!((unitarity_defect(&two) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn large_generator_uses_squaring() {
        let h = ComplexMatrix::from_real_diagonal(&[9000.0, -3000.0, 1.0]);
        let u = hermitian_exp(&h, 0.01).unwrap();
        for (k, e) in [9000.0f64, -3000.0, 1.0].iter().enumerate() {
            let expect = C64::from_polar(1.0, -e * 0.01);
            assert!((u[(k, k)] - expect).norm() < 1e-10);
        }
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn polar_projection_of_scaled_unitary() {
        let u = hermitian_exp(&pauli_x().scale(C64::new(0.3, 0.0)), 1.0).unwrap();
        let a = u.scale(C64::new(0.8, 0.0));
        let p = polar_unitary_2x2(&a).unwrap();
        assert!(p.max_diff(&u) < 1e-13);
        assert!(polar_unitary_2x2(&ComplexMatrix::zeros(2)).is_none());
    }

    #[test]
    fn trace_adjoint_identity() {
        let a = ComplexMatrix::from_fn(3, |r, c| C64::new(r as f64 + 0.5, c as f64 - 1.0));
        let b = ComplexMatrix::from_fn(3, |r, c| C64::new((r * c) as f64, 1.0 + r as f64));
        let lhs = (&a.adjoint() * &b).trace();
        let rhs = (&b.adjoint() * &a).trace().conj();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn pauli_algebra() {
        let xy = &pauli_x() * &pauli_y();
        assert!(xy.max_diff(&pauli_z().scale(I)) < 1e-15);
    }
}
