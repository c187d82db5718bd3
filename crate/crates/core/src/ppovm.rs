//! Process effects and process POVMs.
//!
//! A process measurement probes the unknown channel with test states
//! `ρ_j` on `H_anc ⊗ H_d` (chosen with probability `p_j`) and measures the
//! output with POVMs `{F_jk}`. Every outcome is described by a process
//! effect `M_jk = p_j (R*_{ρ_j} ⊗ I)[F_jk]` on `H_d ⊗ H_d`, and the outcome
//! probability for a channel with process state `ω` is `Tr[ω M_jk]`. The
//! effects sum to `ρᵀ ⊗ I` with `ρ = Σ_j p_j Tr_anc ρ_j`.
//!
//! [`realize`] goes the other way: any such collection of effects is
//! produced by a single pure test state `|Ξ⟩` on `H_r ⊗ H_d` with
//! `r = rank ρ` and a POVM on the same space.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{herm_eig, kron, partial_trace, ComplexMatrix, Subsystem, DEFAULT_TOL};
use crate::quantum::{
    choi_of_channel, lemma1_map, spectrum_bounds, DensityOperator, KrausChannel, Povm, ProcessState,
};

/// Weighted pair of a test state on `H_anc ⊗ H_d` and the POVM measured on
/// the output.
#[derive(Debug, Clone, PartialEq)]
pub struct TestCouple {
    weight: f64,
    anc_dim: usize,
    state: DensityOperator,
    povm: Povm,
    label: Option<String>,
}

impl TestCouple {
    pub fn new(weight: f64, anc_dim: usize, state: DensityOperator, povm: Povm) -> Result<Self> {
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "couple weight {weight} is not a probability"
            )));
        }
        if anc_dim == 0 || !state.dim().is_multiple_of(anc_dim) {
            return Err(Error::InvalidParameter(format!(
                "state dimension {} is not a multiple of ancilla dimension {anc_dim}",
                state.dim()
            )));
        }
        if povm.dim() != state.dim() {
            return Err(Error::ShapeMismatch {
                expected: (state.dim(), state.dim()),
                found: (povm.dim(), povm.dim()),
            });
        }
        Ok(Self {
            weight,
            anc_dim,
            state,
            povm,
            label: None,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn anc_dim(&self) -> usize {
        self.anc_dim
    }

    /// Qudit dimension the couple probes.
    pub fn qudit_dim(&self) -> usize {
        self.state.dim() / self.anc_dim
    }

    pub fn state(&self) -> &DensityOperator {
        &self.state
    }

    pub fn povm(&self) -> &Povm {
        &self.povm
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Born-rule probabilities `Tr{(I ⊗ E)[ρ] F_k}` of the physical experiment.
    pub fn born_probabilities(&self, ch: &KrausChannel) -> Result<Vec<f64>> {
        let out = ch.apply_on_second(self.state.matrix(), self.anc_dim)?;
        Ok(self.povm.probabilities(&out))
    }
}

/// One element `M` of a process POVM, acting on `H_d ⊗ H_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessEffect {
    pub label: String,
    pub matrix: ComplexMatrix,
}

impl ProcessEffect {
    pub fn new(label: impl Into<String>, matrix: ComplexMatrix) -> Self {
        Self {
            label: label.into(),
            matrix,
        }
    }
}

/// Validated process POVM: effects `0 ≤ M_α ≤ I` with `Σ M_α = ρᵀ ⊗ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct Ppovm {
    d: usize,
    effects: Vec<ProcessEffect>,
    norm_state: DensityOperator,
}

/// Residuals measured while validating a PPOVM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpovmDiagnostics {
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub product_residual: f64,
    pub norm_state_trace: f64,
}

impl Ppovm {
    pub fn validate(effects: Vec<ProcessEffect>, d: usize) -> Result<Self> {
        Self::validate_with_tol(effects, d, DEFAULT_TOL)
    }

    /// Checks each effect, verifies that the sum factorizes as `σ ⊗ I` and
    /// that `ρ = σᵀ` is a density operator.
    pub fn validate_with_tol(effects: Vec<ProcessEffect>, d: usize, tol: f64) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Empty("PPOVM has no effects"));
        }
        let n = d * d;
        let mut sum = ComplexMatrix::zeros(n, n);
        for (index, e) in effects.iter().enumerate() {
            if e.matrix.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: (n, n),
                    found: e.matrix.shape(),
                });
            }
            let deviation = e.matrix.hermiticity_deviation();
            if deviation > tol {
                return Err(Error::NotHermitian { deviation });
            }
            let (lo, hi) = spectrum_bounds(&e.matrix)?;
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
            sum += &e.matrix;
        }
        let sigma = partial_trace(&sum, d, d, Subsystem::Second)?.scale(1.0 / d as f64);
        let residual = kron(&sigma, &ComplexMatrix::identity(d)).max_diff(&sum);
        if residual > tol {
            return Err(Error::NotProductNormalization { residual });
        }
        let norm_state = DensityOperator::with_tol(sigma.transpose().hermitian_part(), tol)
            .map_err(|e| Error::NormStateInvalid {
                reason: e.to_string(),
            })?;
        Ok(Self {
            d,
            effects,
            norm_state,
        })
    }

    /// Measured residuals for reporting, without failing.
    pub fn diagnostics(effects: &[ProcessEffect], d: usize) -> Result<PpovmDiagnostics> {
        let n = d * d;
        let mut sum = ComplexMatrix::zeros(n, n);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for e in effects {
            if e.matrix.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: (n, n),
                    found: e.matrix.shape(),
                });
            }
            let (l, h) = spectrum_bounds(&e.matrix.hermitian_part())?;
            lo = lo.min(l);
            hi = hi.max(h);
            sum += &e.matrix;
        }
        let sigma = partial_trace(&sum, d, d, Subsystem::Second)?.scale(1.0 / d as f64);
        Ok(PpovmDiagnostics {
            min_eigenvalue: lo,
            max_eigenvalue: hi,
            product_residual: kron(&sigma, &ComplexMatrix::identity(d)).max_diff(&sum),
            norm_state_trace: sigma.trace().re,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn effects(&self) -> &[ProcessEffect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// The qudit state `ρ` with `Σ M_α = ρᵀ ⊗ I`.
    pub fn norm_state(&self) -> &DensityOperator {
        &self.norm_state
    }

    pub fn sum(&self) -> ComplexMatrix {
        let n = self.d * self.d;
        let mut s = ComplexMatrix::zeros(n, n);
        for e in &self.effects {
            s += &e.matrix;
        }
        s
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.effects.iter().map(|e| e.label.as_str())
    }

    /// `Tr[ω M_α]` for every effect, clamped to `[0, 1]`.
    pub fn probabilities(&self, omega: &ProcessState) -> Result<Vec<f64>> {
        if omega.d() != self.d {
            return Err(Error::ShapeMismatch {
                expected: (self.d * self.d, self.d * self.d),
                found: omega.matrix().shape(),
            });
        }
        Ok(self
            .effects
            .iter()
            .map(|e| {
                crate::matrix::trace_product(omega.matrix(), &e.matrix)
                    .re
                    .clamp(0.0, 1.0)
            })
            .collect())
    }

    /// Equality as multisets of matrices, ignoring labels and order. Each
    /// effect is greedily matched to the first unused effect within `tol`
    /// in max-norm.
    pub fn multiset_eq(&self, other: &Ppovm, tol: f64) -> bool {
        if self.d != other.d || self.len() != other.len() {
            return false;
        }
        let mut used = alloc::vec![false; other.len()];
        for e in &self.effects {
            let hit = other
                .effects
                .iter()
                .enumerate()
                .find(|(i, o)| !used[*i] && o.matrix.max_diff(&e.matrix) < tol);
            match hit {
                Some((i, _)) => used[i] = true,
                None => return false,
            }
        }
        true
    }
}

pub fn validate_ppovm(effects: Vec<ProcessEffect>, d: usize) -> Result<Ppovm> {
    Ppovm::validate(effects, d)
}

/// Process effects `p (R*_ρ ⊗ I)[F_k]` of a single couple.
fn couple_effects(couple: &TestCouple, d: usize) -> Result<Vec<ComplexMatrix>> {
    let dual = lemma1_map(&couple.state, couple.anc_dim, d)?.dual();
    let id = ComplexMatrix::identity(d);
    let lifted: Vec<ComplexMatrix> = dual.kraus().iter().map(|k| kron(k, &id)).collect();
    Ok(couple
        .povm
        .effects()
        .map(|f| {
            let n = d * d;
            let mut m = ComplexMatrix::zeros(n, n);
            for k in &lifted {
                m += &f.conjugate_by(k);
            }
            m.scale(couple.weight).hermitian_part()
        })
        .collect())
}

fn effect_label(couples: &[TestCouple], j: usize, povm_label: &str) -> String {
    if couples.len() == 1 {
        return povm_label.to_string();
    }
    match couples[j].label() {
        Some(l) => format!("{l}|{povm_label}"),
        None => format!("{j}|{povm_label}"),
    }
}

/// Process POVM of an experiment given as weighted test couples.
pub fn build_ppovm(couples: &[TestCouple], d: usize) -> Result<Ppovm> {
    if couples.is_empty() {
        return Err(Error::Empty("no test couples"));
    }
    let mut total = 0.0;
    for (index, c) in couples.iter().enumerate() {
        if c.weight == 0.0 {
            return Err(Error::ZeroWeight { index });
        }
        if c.qudit_dim() != d {
            return Err(Error::ShapeMismatch {
                expected: (c.anc_dim * d, c.anc_dim * d),
                found: (c.state.dim(), c.state.dim()),
            });
        }
        total += c.weight;
    }
    if (total - 1.0).abs() > DEFAULT_TOL {
        return Err(Error::WeightSum { sum: total });
    }
    let mut effects = Vec::new();
    for (j, c) in couples.iter().enumerate() {
        for (m, label) in couple_effects(c, d)?.into_iter().zip(c.povm.labels()) {
            effects.push(ProcessEffect::new(effect_label(couples, j, label), m));
        }
    }
    Ppovm::validate(effects, d)
}

/// Average qudit marginal `Σ_j p_j Tr_anc ρ_j` of an experiment.
pub fn average_marginal(couples: &[TestCouple], d: usize) -> Result<ComplexMatrix> {
    let mut out = ComplexMatrix::zeros(d, d);
    for c in couples {
        out += &partial_trace(c.state.matrix(), c.anc_dim, d, Subsystem::First)?.scale(c.weight);
    }
    Ok(out)
}

/// Embeds an operator on `H_small ⊗ H_d` into `H_big ⊗ H_d` through the
/// first `small` basis vectors of the ancilla.
fn pad_ancilla(m: &ComplexMatrix, small: usize, big: usize, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(big * d, big * d, |r, c| {
        let (ar, qr) = (r / d, r % d);
        let (ac, qc) = (c / d, c % d);
        if ar < small && ac < small {
            m[(ar * d + qr, ac * d + qc)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Merges an experiment into a single couple with test state
/// `Ξ = Σ_j p_j |j⟩⟨j| ⊗ ρ_j` and POVM `{|j⟩⟨j| ⊗ F_jk}`. Ancillas are padded
/// to the largest one; the padding complement is folded into the first
/// effect of each couple, where the test state has no weight.
pub fn merge_couples(couples: &[TestCouple]) -> Result<TestCouple> {
    let first = couples.first().ok_or(Error::Empty("no test couples"))?;
    let d = first.qudit_dim();
    if couples.iter().any(|c| c.qudit_dim() != d) {
        return Err(Error::InvalidParameter(
            "couples probe different qudit dimensions".to_string(),
        ));
    }
    let m = couples.len();
    let big = couples.iter().map(|c| c.anc_dim).max().unwrap_or(1);
    let anc = m * big;
    let n = anc * d;
    let flag = |j: usize| {
        ComplexMatrix::from_fn(m, m, |a, b| {
            if a == j && b == j {
                1.0.into()
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };

    let mut xi = ComplexMatrix::zeros(n, n);
    let mut effects = Vec::new();
    let mut labels = Vec::new();
    for (j, c) in couples.iter().enumerate() {
        let padded = pad_ancilla(c.state.matrix(), c.anc_dim, big, d);
        xi += &kron(&flag(j), &padded).scale(c.weight);
        let complement = &ComplexMatrix::identity(big * d)
            - &pad_ancilla(&ComplexMatrix::identity(c.anc_dim * d), c.anc_dim, big, d);
        for (k, (f, label)) in c.povm.effects().zip(c.povm.labels()).enumerate() {
            let mut fp = pad_ancilla(f, c.anc_dim, big, d);
            if k == 0 {
                fp += &complement;
            }
            effects.push(kron(&flag(j), &fp));
            labels.push(effect_label(couples, j, label));
        }
    }
    let state = DensityOperator::new(xi.hermitian_part())?;
    let povm = Povm::new(effects, labels)?;
    TestCouple::new(1.0, anc, state, povm)
}

/// Outcome probabilities `Tr[ω_E M_α]` of a PPOVM applied to a channel.
pub fn outcome_probabilities(pp: &Ppovm, ch: &KrausChannel) -> Result<Vec<f64>> {
    if ch.dim_in() != pp.d {
        return Err(Error::ShapeMismatch {
            expected: (pp.d, pp.d),
            found: (ch.dim_out(), ch.dim_in()),
        });
    }
    pp.probabilities(&choi_of_channel(ch)?)
}

/// The uninformative outcome `(I − ρᵀ) ⊗ I` that completes a PPOVM to a
/// POVM on process states; it fires at rate `d − 1` for every channel.
pub fn extra_effect(pp: &Ppovm) -> ComplexMatrix {
    let d = pp.d;
    let a = &ComplexMatrix::identity(d) - &pp.norm_state.matrix().transpose();
    kron(&a, &ComplexMatrix::identity(d))
}

/// A process measurement implementing a PPOVM: pure test state
/// `|Ξ⟩ ∈ H_r ⊗ H_d` and a POVM on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub r: usize,
    pub d: usize,
    pub test_vector: Vec<Complex64>,
    pub povm: Povm,
}

impl Realization {
    pub fn test_state(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.test_vector)
    }

    pub fn to_couple(&self) -> Result<TestCouple> {
        TestCouple::new(
            1.0,
            self.r,
            DensityOperator::new(self.test_state())?,
            self.povm.clone(),
        )
    }

    /// Output-state probabilities `Tr[F_α (I ⊗ E)[|Ξ⟩⟨Ξ|]]`.
    pub fn probabilities(&self, ch: &KrausChannel) -> Result<Vec<f64>> {
        let out = ch.apply_on_second(&self.test_state(), self.r)?;
        Ok(self.povm.probabilities(&out))
    }
}

/// Canonical realization of a PPOVM with the minimal ancilla `r = rank ρ`.
///
/// With `ρᵀ = Σ s_a |v_a⟩⟨v_a|` restricted to its support,
/// `A = Σ_a √s_a |a⟩⟨v_a|` (or `A = √ρᵀ` when `ρ` has full rank), `|Ξ⟩ = (A ⊗ I)|Ψ₊⟩` and
/// `F_α = (A⁺† ⊗ I) M_α (A⁺ ⊗ I)`.
pub fn realize(pp: &Ppovm) -> Result<Realization> {
    realize_with_tol(pp, DEFAULT_TOL)
}

pub fn realize_with_tol(pp: &Ppovm, tol: f64) -> Result<Realization> {
    let d = pp.d;
    let eig = herm_eig(&pp.norm_state.matrix().transpose())?;
    let smax = eig.values.last().copied().unwrap_or(0.0);
    let support: Vec<usize> = (0..d).filter(|&k| eig.values[k] > tol * smax).collect();
    let r = support.len();

    // Full rank: ancilla basis aligned with the eigenbasis, A = √ρᵀ.
    let (a, a_pinv) = if r == d {
        (
            eig.reconstruct_with(|s| s.max(0.0).sqrt()),
            eig.reconstruct_with(|s| 1.0 / s.sqrt()),
        )
    } else {
        (
            ComplexMatrix::from_fn(r, d, |row, j| {
                let k = support[row];
                eig.vectors[(j, k)].conj() * eig.values[k].sqrt()
            }),
            ComplexMatrix::from_fn(d, r, |j, col| {
                let k = support[col];
                eig.vectors[(j, k)] / eig.values[k].sqrt()
            }),
        )
    };
    let test_vector = a.as_slice().to_vec();

    let id = ComplexMatrix::identity(d);
    let proj = kron(&(&a_pinv * &a), &id);
    let left = kron(&a_pinv.adjoint(), &id);
    let right = kron(&a_pinv, &id);
    let mut effects = Vec::with_capacity(pp.len());
    let mut labels = Vec::with_capacity(pp.len());
    for (index, e) in pp.effects.iter().enumerate() {
        let restricted = &(&proj * &e.matrix) * &proj;
        let residual = restricted.max_diff(&e.matrix);
        if residual > tol.max(1e-9) {
            return Err(Error::SupportViolation { index, residual });
        }
        effects.push((&(&left * &e.matrix) * &right).hermitian_part());
        labels.push(e.label.clone());
    }
    let povm = Povm::new(effects, labels)?;
    Ok(Realization {
        r,
        d,
        test_vector,
        povm,
    })
}
