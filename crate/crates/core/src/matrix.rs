//! Dense complex matrices and the linear algebra the rest of the crate is
//! built on.
//!
//! Tensor products follow one global index convention: the composite index
//! of `H_A ⊗ H_B` is `a * dim(B) + b`, so the first factor is index-major.
//! The eigensolver and the SVD are cyclic Jacobi methods; their accuracy
//! contract is the reconstruction residual.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Relative tolerance used when a caller does not supply one.
pub const DEFAULT_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                1.0.into()
            } else {
                Complex64::zero()
            }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let n = values.len();
        Self::from_fn(
            n,
            n,
            |i, j| if i == j { values[i] } else { Complex64::zero() },
        )
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                values[i].into()
            } else {
                Complex64::zero()
            }
        })
    }

    /// Column vector from a slice.
    pub fn column(v: &[Complex64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    /// Rank-one operator `|u⟩⟨v|`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    /// Projector `|v⟩⟨v|` (not normalized).
    pub fn projector(v: &[Complex64]) -> Self {
        Self::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Transpose in the computational basis.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus, `‖M‖_max`.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖_max`; panics on shape mismatch.
    pub fn max_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in max_diff");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut dev = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol * self.max_abs().max(1.0)
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `U X U†`.
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    /// `‖U†U − I‖_max`.
    pub fn unitarity_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_diff(&Self::identity(self.cols))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in matrix sum");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(
            self.shape(),
            rhs.shape(),
            "shape mismatch in matrix difference"
        );
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in matrix sum");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Kronecker product `A ⊗ B` with the first factor index-major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Kronecker product of two vectors.
pub fn kron_vec(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter()
        .flat_map(|&a| v.iter().map(move |&b| a * b))
        .collect()
}

/// Which tensor factor [`partial_trace`] removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on `H_A ⊗ H_B` over one factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
    which: Subsystem,
) -> Result<ComplexMatrix> {
    let n = dim_a * dim_b;
    if m.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: m.shape(),
        });
    }
    Ok(match which {
        Subsystem::First => ComplexMatrix::from_fn(dim_b, dim_b, |k, l| {
            (0..dim_a).map(|a| m[(a * dim_b + k, a * dim_b + l)]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(dim_a, dim_a, |a, b| {
            (0..dim_b).map(|k| m[(a * dim_b + k, b * dim_b + k)]).sum()
        }),
    })
}

/// Reshapes a vector on `H_D ⊗ H_d` into the `D × d` matrix `Φ` with
/// `(Φ ⊗ I)|Ψ₊⟩ = φ`.
pub fn vec_reshape(phi: &[Complex64], anc_dim: usize, d: usize) -> Result<ComplexMatrix> {
    if phi.len() != anc_dim * d {
        return Err(Error::LengthMismatch {
            expected: anc_dim * d,
            found: phi.len(),
        });
    }
    ComplexMatrix::from_vec(anc_dim, d, phi.to_vec())
}

/// Unnormalized maximally entangled vector `Σ_j |j⟩⊗|j⟩`.
pub fn psi_plus_vec(d: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::zero(); d * d];
    for j in 0..d {
        v[j * d + j] = 1.0.into();
    }
    v
}

/// Unnormalized maximally entangled operator `Ψ₊ = |Ψ₊⟩⟨Ψ₊|`, trace `d`.
pub fn psi_plus(d: usize) -> ComplexMatrix {
    ComplexMatrix::projector(&psi_plus_vec(d))
}

/// Hilbert–Schmidt inner product `Tr(A†B)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x.conj() * y).sum())
}

/// `Tr(AB)` without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols, b.rows, "shape mismatch in trace_product");
    assert_eq!(a.rows, b.cols, "shape mismatch in trace_product");
    let mut s = Complex64::zero();
    for i in 0..a.rows {
        for k in 0..a.cols {
            s += a[(i, k)] * b[(k, i)];
        }
    }
    s
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.col(k)
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Unitary `[[c, s], [−s e^{−iφ}, c e^{−iφ}]]` that diagonalizes the
/// Hermitian 2×2 block `[[a, b], [b*, d]]` with `b = |b| e^{iφ}`.
fn jacobi_rotation(a: f64, d: f64, b: Complex64) -> (f64, f64, Complex64) {
    let babs = b.norm();
    let phase = if babs > 0.0 {
        b / babs
    } else {
        Complex64::new(1.0, 0.0)
    };
    let theta = (d - a) / (2.0 * babs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase.conj())
}

/// Right-multiplies columns `p, q` of `m` by the rotation block.
fn rotate_cols(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, e: Complex64) {
    for k in 0..m.rows {
        let mp = m[(k, p)];
        let mq = m[(k, q)];
        m[(k, p)] = mp * c - mq * e * s;
        m[(k, q)] = mp * s + mq * e * c;
    }
}

/// Left-multiplies rows `p, q` of `m` by the adjoint of the rotation block.
fn rotate_rows_adj(m: &mut ComplexMatrix, p: usize, q: usize, c: f64, s: f64, e: Complex64) {
    let ec = e.conj();
    for k in 0..m.cols {
        let mp = m[(p, k)];
        let mq = m[(q, k)];
        m[(p, k)] = mp * c - mq * ec * s;
        m[(q, k)] = mp * s + mq * ec * c;
    }
}

/// Makes the first largest-modulus entry of each column real and positive.
fn fix_column_phases(v: &mut ComplexMatrix) {
    for k in 0..v.cols {
        let max = (0..v.rows).map(|i| v[(i, k)].norm()).fold(0.0, f64::max);
        if max == 0.0 {
            continue;
        }
        let pivot = (0..v.rows)
            .find(|&i| v[(i, k)].norm() >= max * (1.0 - 1e-9))
            .unwrap_or(0);
        let z = v[(pivot, k)];
        let ph = z.conj() / z.norm();
        for i in 0..v.rows {
            v[(i, k)] *= ph;
        }
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// The input is symmetrized to `(M + M†)/2` after checking that its
/// deviation from Hermiticity is within `1e−9·‖M‖_max`.
pub fn herm_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let scale = m.max_abs();
    let deviation = m.hermiticity_deviation();
    if deviation > DEFAULT_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let frob = a.frobenius_norm();
    let mut converged = n < 2 || frob == 0.0;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * frob * 1e-2 {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                if b.norm() <= f64::EPSILON * 1e-3 * (a[(p, p)].re.abs() + a[(q, q)].re.abs()) {
                    a[(p, q)] = Complex64::zero();
                    a[(q, p)] = Complex64::zero();
                    continue;
                }
                let (c, s, e) = jacobi_rotation(a[(p, p)].re, a[(q, q)].re, b);
                rotate_cols(&mut a, p, q, c, s, e);
                rotate_rows_adj(&mut a, p, q, c, s, e);
                a[(p, q)] = Complex64::zero();
                a[(q, p)] = Complex64::zero();
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
                rotate_cols(&mut v, p, q, c, s, e);
            }
        }
        sweep += 1;
    }
    if !converged {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off > 1e-12 * frob {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    fix_column_phases(&mut vectors);
    Ok(HermitianEigen { values, vectors })
}

/// Positive square root of a Hermitian PSD matrix. Eigenvalues down to
/// `−1e−9·λ_max` are clamped to zero.
pub fn mat_sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(m)?;
    let max = eig.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let min = eig.values.first().copied().unwrap_or(0.0);
    if min < -DEFAULT_TOL * max {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Singular value decomposition `M = U Σ V†` with `U` of shape `m × k`,
/// `V` of shape `n × k`, `k = min(m, n)`, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &ComplexMatrix) -> Result<Svd> {
    if m.rows < m.cols {
        let t = svd(&m.adjoint())?;
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    let (rows, n) = m.shape();
    let mut w = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let mut converged = n < 2;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::zero();
                for i in 0..rows {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, e) = jacobi_rotation(alpha, beta, gamma);
                rotate_cols(&mut w, p, q, c, s, e);
                rotate_cols(&mut v, p, q, c, s, e);
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let u = ComplexMatrix::from_fn(rows, n, |i, k| {
        let j = order[k];
        if norms[j] > 0.0 {
            w[(i, j)] / norms[j]
        } else {
            Complex64::zero()
        }
    });
    let v = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Svd {
        u,
        singular_values,
        v,
    })
}

/// Moore–Penrose pseudo-inverse; singular values at or below
/// `tol·σ_max` are treated as zero.
pub fn pinv(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let Svd {
        u,
        singular_values,
        v,
    } = svd(m)?;
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let mut out = ComplexMatrix::zeros(m.cols, m.rows);
    for (k, &s) in singular_values.iter().enumerate() {
        if s <= tol * smax || s == 0.0 {
            continue;
        }
        for i in 0..m.cols {
            let vi = v[(i, k)] / s;
            for j in 0..m.rows {
                out[(i, j)] += vi * u[(j, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Numerical rank of a general matrix: singular values above `tol·σ_max`.
pub fn matrix_rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    let s = svd(m)?.singular_values;
    let smax = s.first().copied().unwrap_or(0.0);
    Ok(s.iter().filter(|&&x| x > tol * smax && x > 0.0).count())
}

/// Rank of a Hermitian matrix and the orthogonal projector onto its support.
pub fn rank_and_support(m: &ComplexMatrix, tol: f64) -> Result<(usize, ComplexMatrix)> {
    let eig = herm_eig(m)?;
    let max = eig.values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cutoff = tol * max;
    let mut rank = 0;
    let p = eig.reconstruct_with(|x| {
        if max > 0.0 && x.abs() > cutoff {
            rank += 1;
            1.0
        } else {
            0.0
        }
    });
    Ok((rank, p))
}
