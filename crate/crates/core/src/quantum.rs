//! States, effects, POVMs and completely positive maps, together with the
//! Choi correspondence between qudit channels and two-qudit operators.
//!
//! Channels always act on the second tensor factor: the process state of a
//! channel `E` is `ω = (I ⊗ E)[Ψ₊]` with the unnormalized
//! `|Ψ₊⟩ = Σ_j |j⟩⊗|j⟩`, so `Tr ω = d` and `Tr₂ ω = I` for trace-preserving
//! maps.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{
    self, herm_eig, kron, partial_trace, psi_plus, vec_reshape, ComplexMatrix, Subsystem,
    DEFAULT_TOL,
};

/// Kraus operators whose weight falls below this fraction of the largest
/// eigenvalue are dropped when extracting a Kraus list from an operator.
pub const KRAUS_CUTOFF: f64 = 1e-12;

fn check_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermiticity_deviation();
    if deviation > tol * m.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

/// Smallest and largest eigenvalue of a Hermitian matrix.
pub(crate) fn spectrum_bounds(m: &ComplexMatrix) -> Result<(f64, f64)> {
    let eig = herm_eig(m)?;
    let lo = eig.values.first().copied().unwrap_or(0.0);
    let hi = eig.values.last().copied().unwrap_or(0.0);
    Ok((lo, hi))
}

/// Density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tol(matrix, DEFAULT_TOL)
    }

    pub fn with_tol(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        check_hermitian(&matrix, tol)?;
        let (lo, hi) = spectrum_bounds(&matrix)?;
        if lo < -tol * hi.abs().max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: lo });
        }
        let tr = matrix.trace().re;
        if (tr - 1.0).abs() > tol {
            return Err(Error::TraceMismatch {
                expected: 1.0,
                found: tr,
            });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|/⟨ψ|ψ⟩`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".to_string()));
        }
        Self::new(ComplexMatrix::projector(psi).scale(1.0 / norm))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Effect `0 ≤ F ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: ComplexMatrix,
}

impl Effect {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tol(matrix, DEFAULT_TOL, 0)
    }

    /// Validates an effect; `index` is reported in errors.
    pub fn with_tol(matrix: ComplexMatrix, tol: f64, index: usize) -> Result<Self> {
        check_hermitian(&matrix, tol)?;
        let (lo, hi) = spectrum_bounds(&matrix)?;
        if lo < -tol {
            return Err(Error::EffectNotPsd {
                index,
                min_eigenvalue: lo,
            });
        }
        if hi > 1.0 + tol {
            return Err(Error::EffectExceedsIdentity {
                index,
                max_eigenvalue: hi,
            });
        }
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Labeled collection of effects summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<Effect>,
    labels: Vec<String>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Vec<String>) -> Result<Self> {
        Self::with_tol(effects, labels, DEFAULT_TOL)
    }

    pub fn with_tol(effects: Vec<ComplexMatrix>, labels: Vec<String>, tol: f64) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Empty("POVM has no effects"));
        }
        if labels.len() != effects.len() {
            return Err(Error::LengthMismatch {
                expected: effects.len(),
                found: labels.len(),
            });
        }
        let dim = effects[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        let mut checked = Vec::with_capacity(effects.len());
        for (i, m) in effects.into_iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::ShapeMismatch {
                    expected: (dim, dim),
                    found: m.shape(),
                });
            }
            sum += &m;
            checked.push(Effect::with_tol(m, tol, i)?);
        }
        let residual = sum.max_diff(&ComplexMatrix::identity(dim));
        if residual > tol {
            return Err(Error::PovmIncomplete { residual });
        }
        Ok(Self {
            effects: checked,
            labels,
        })
    }

    /// POVM with labels `"0", "1", ...`.
    pub fn unlabeled(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let labels = (0..effects.len()).map(|i| i.to_string()).collect();
        Self::new(effects, labels)
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.effects.iter().map(Effect::matrix)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Born-rule probabilities `Tr[ρ F_k]`.
    pub fn probabilities(&self, state: &ComplexMatrix) -> Vec<f64> {
        self.effects()
            .map(|f| matrix::trace_product(state, f).re)
            .collect()
    }
}

/// Completely positive map `X ↦ Σ_k A_k X A_k†` from `dim_in × dim_in` to
/// `dim_out × dim_out` operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty("Kraus list is empty"))?;
        let (dim_out, dim_in) = first.shape();
        for k in &kraus {
            if k.shape() != (dim_out, dim_in) {
                return Err(Error::ShapeMismatch {
                    expected: (dim_out, dim_in),
                    found: k.shape(),
                });
            }
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: alloc::vec![ComplexMatrix::identity(d)],
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `‖Σ A†A − I‖_max`.
    pub fn tp_residual(&self) -> f64 {
        let mut sum = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum += &(&k.adjoint() * k);
        }
        sum.max_diff(&ComplexMatrix::identity(self.dim_in))
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.tp_residual() <= DEFAULT_TOL
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::ShapeMismatch {
                expected: (self.dim_in, self.dim_in),
                found: x.shape(),
            });
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &x.conjugate_by(k);
        }
        Ok(out)
    }

    /// `(I_anc ⊗ E)[X]` for `X` on `H_anc ⊗ H_in`.
    pub fn apply_on_second(&self, x: &ComplexMatrix, anc_dim: usize) -> Result<ComplexMatrix> {
        let n = anc_dim * self.dim_in;
        if x.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                found: x.shape(),
            });
        }
        let id = ComplexMatrix::identity(anc_dim);
        let m = anc_dim * self.dim_out;
        let mut out = ComplexMatrix::zeros(m, m);
        for k in &self.kraus {
            out += &x.conjugate_by(&kron(&id, k));
        }
        Ok(out)
    }

    /// `(E ⊗ I_d)[X]` for `X` on `H_in ⊗ H_d`.
    pub fn apply_on_first(&self, x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
        let n = self.dim_in * d;
        if x.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                found: x.shape(),
            });
        }
        let id = ComplexMatrix::identity(d);
        let m = self.dim_out * d;
        let mut out = ComplexMatrix::zeros(m, m);
        for k in &self.kraus {
            out += &x.conjugate_by(&kron(k, &id));
        }
        Ok(out)
    }

    /// Dual map with Kraus operators `A_k†`, satisfying
    /// `Tr{B† E[A]} = Tr{(E*[B])† A}`.
    pub fn dual(&self) -> KrausChannel {
        KrausChannel {
            dim_in: self.dim_out,
            dim_out: self.dim_in,
            kraus: self.kraus.iter().map(ComplexMatrix::adjoint).collect(),
        }
    }

    /// `(I ⊗ E)[Ψ₊] = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, for any CP map.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        let (din, dout) = (self.dim_in, self.dim_out);
        let n = din * dout;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            // v[i·dout + m] = K[m, i]
            let v: Vec<Complex64> = (0..n).map(|idx| k[(idx % dout, idx / dout)]).collect();
            out += &ComplexMatrix::projector(&v);
        }
        out
    }
}

/// Choi operator `ω` of a qudit channel: PSD, `Tr ω = d`, `Tr₂ ω = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessState {
    d: usize,
    matrix: ComplexMatrix,
}

impl ProcessState {
    pub fn new(matrix: ComplexMatrix, d: usize) -> Result<Self> {
        Self::with_tol(matrix, d, DEFAULT_TOL)
    }

    pub fn with_tol(matrix: ComplexMatrix, d: usize, tol: f64) -> Result<Self> {
        let n = d * d;
        if matrix.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                found: matrix.shape(),
            });
        }
        check_hermitian(&matrix, tol)?;
        let (lo, hi) = spectrum_bounds(&matrix)?;
        if lo < -tol * hi.abs().max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: lo });
        }
        let tr = matrix.trace().re;
        if (tr - d as f64).abs() > tol * d as f64 {
            return Err(Error::TraceMismatch {
                expected: d as f64,
                found: tr,
            });
        }
        let residual =
            partial_trace(&matrix, d, d, Subsystem::Second)?.max_diff(&ComplexMatrix::identity(d));
        if residual > tol {
            return Err(Error::MarginalMismatch { residual });
        }
        Ok(Self { d, matrix })
    }

    pub(crate) fn new_unchecked(matrix: ComplexMatrix, d: usize) -> Self {
        Self { d, matrix }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Process state `(I ⊗ E)[Ψ₊]` of a trace-preserving qudit channel.
///
/// Non-trace-preserving maps are rejected with their residual; the raw
/// operator is still available from [`KrausChannel::choi_matrix`].
pub fn choi_of_channel(ch: &KrausChannel) -> Result<ProcessState> {
    if ch.dim_in != ch.dim_out {
        return Err(Error::ShapeMismatch {
            expected: (ch.dim_in, ch.dim_in),
            found: (ch.dim_out, ch.dim_in),
        });
    }
    let residual = ch.tp_residual();
    if residual > DEFAULT_TOL {
        return Err(Error::NotTracePreserving { residual });
    }
    Ok(ProcessState::new_unchecked(ch.choi_matrix(), ch.dim_in))
}

/// Kraus operators from the eigendecomposition of a Choi-type operator on
/// `H_in ⊗ H_out`: `K_k[m, i] = √s_k · v_k[i·dim_out + m]`.
pub fn kraus_of_choi_matrix(
    m: &ComplexMatrix,
    dim_in: usize,
    dim_out: usize,
) -> Result<KrausChannel> {
    let n = dim_in * dim_out;
    if m.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: m.shape(),
        });
    }
    let eig = herm_eig(m)?;
    let smax = eig.values.last().copied().unwrap_or(0.0);
    let mut kraus = Vec::new();
    for (k, &s) in eig.values.iter().enumerate().rev() {
        if s <= KRAUS_CUTOFF * smax || s <= 0.0 {
            continue;
        }
        let root = s.sqrt();
        kraus.push(ComplexMatrix::from_fn(dim_out, dim_in, |row, i| {
            eig.vectors[(i * dim_out + row, k)] * root
        }));
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(dim_out, dim_in));
    }
    KrausChannel::new(kraus)
}

/// Channel whose process state is `omega`.
pub fn channel_of_choi(omega: &ProcessState) -> Result<KrausChannel> {
    kraus_of_choi_matrix(&omega.matrix, omega.d, omega.d)
}

/// CP map `R: B(H_d) → B(H_anc)` with `(R ⊗ I)[Ψ₊] = m` for a positive
/// operator `m` on `H_anc ⊗ H_d`. Kraus operators are `√λ_j Φ_j` where
/// `Φ_j` reshapes the eigenvector `φ_j` of `m`.
pub fn cp_map_of_operator(m: &ComplexMatrix, anc_dim: usize, d: usize) -> Result<KrausChannel> {
    let n = anc_dim * d;
    if m.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: m.shape(),
        });
    }
    let eig = herm_eig(m)?;
    let smax = eig.values.last().copied().unwrap_or(0.0);
    if let Some(&lo) = eig.values.first() {
        if lo < -DEFAULT_TOL * smax.max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: lo });
        }
    }
    let mut kraus = Vec::new();
    for (k, &s) in eig.values.iter().enumerate().rev() {
        if s <= KRAUS_CUTOFF * smax || s <= 0.0 {
            continue;
        }
        kraus.push(vec_reshape(&eig.vector(k), anc_dim, d)?.scale(s.sqrt()));
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(anc_dim, d));
    }
    KrausChannel::new(kraus)
}

/// The map `R_ρ` representing a test state `ρ` on `H_anc ⊗ H_d`.
pub fn lemma1_map(rho: &DensityOperator, anc_dim: usize, d: usize) -> Result<KrausChannel> {
    cp_map_of_operator(rho.matrix(), anc_dim, d)
}

/// Factories for the channels used throughout the examples.
#[derive(Debug, Clone, PartialEq)]
pub enum StandardChannel {
    Identity,
    Unitary(ComplexMatrix),
    /// Replaces every input by the pure target state.
    Contraction(Vec<Complex64>),
    /// `ρ ↦ (1 − p)ρ + p·Tr(ρ)·I/d`.
    Depolarizing(f64),
}

/// Generalized Pauli (Weyl) operators `X^a Z^b`, `a, b ∈ 0..d`.
pub fn weyl_operators(d: usize) -> Vec<ComplexMatrix> {
    let omega =
        |k: usize| Complex64::from_polar(1.0, 2.0 * core::f64::consts::PI * k as f64 / d as f64);
    let mut ops = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            // (X^a Z^b)|j⟩ = ω^{bj} |j + a⟩
            ops.push(ComplexMatrix::from_fn(d, d, |row, col| {
                if row == (col + a) % d {
                    omega((b * col) % d)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
    }
    ops
}

pub fn make_standard(kind: &StandardChannel, d: usize) -> Result<KrausChannel> {
    if d == 0 {
        return Err(Error::InvalidParameter(
            "dimension must be positive".to_string(),
        ));
    }
    match kind {
        StandardChannel::Identity => Ok(KrausChannel::identity(d)),
        StandardChannel::Unitary(u) => {
            if u.shape() != (d, d) {
                return Err(Error::ShapeMismatch {
                    expected: (d, d),
                    found: u.shape(),
                });
            }
            let residual = u.unitarity_residual();
            if residual > DEFAULT_TOL {
                return Err(Error::NotUnitary { residual });
            }
            KrausChannel::new(alloc::vec![u.clone()])
        }
        StandardChannel::Contraction(target) => {
            if target.len() != d {
                return Err(Error::LengthMismatch {
                    expected: d,
                    found: target.len(),
                });
            }
            let norm = target.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return Err(Error::InvalidParameter(
                    "contraction target is zero".to_string(),
                ));
            }
            let t: Vec<Complex64> = target.iter().map(|z| z / norm).collect();
            let kraus = (0..d)
                .map(|j| {
                    ComplexMatrix::from_fn(d, d, |row, col| {
                        if col == j {
                            t[row]
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                    })
                })
                .collect();
            KrausChannel::new(kraus)
        }
        StandardChannel::Depolarizing(p) => {
            if !(0.0..=1.0).contains(p) {
                return Err(Error::InvalidParameter(format!(
                    "depolarizing parameter {p} outside [0, 1]"
                )));
            }
            let mut kraus = Vec::new();
            if *p < 1.0 {
                kraus.push(ComplexMatrix::identity(d).scale((1.0 - p).sqrt()));
            }
            if *p > 0.0 {
                let w = p.sqrt() / d as f64;
                kraus.extend(weyl_operators(d).into_iter().map(|op| op.scale(w)));
            }
            KrausChannel::new(kraus)
        }
    }
}

/// Unnormalized `Ψ₊` as a process state (the identity channel's).
pub fn identity_process_state(d: usize) -> ProcessState {
    ProcessState::new_unchecked(psi_plus(d), d)
}
