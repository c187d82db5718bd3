//! Process tomography: informational completeness of a PPOVM, linear
//! inversion of outcome statistics, projection onto valid process states
//! and finite-shot simulation.

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::matrix::{
    herm_eig, kron, matrix_rank, partial_trace, pinv, trace_product, ComplexMatrix, Subsystem,
    DEFAULT_TOL,
};
use crate::ppovm::{Ppovm, Realization};
use crate::quantum::{KrausChannel, ProcessState};

/// Relative singular-value cutoff of the least-squares solve.
pub const LSTSQ_CUTOFF: f64 = 1e-10;
/// Default number of alternating-projection rounds.
pub const PROJECTION_ITERS: usize = 50;
/// Name of the generator recorded in every [`ShotRecord`].
pub const GENERATOR: &str = "ChaCha20Rng::seed_from_u64";

/// Orthonormal (under `Tr A†B`) basis of Hermitian matrices.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl HermitianBasis {
    /// Normalized generalized Gell-Mann matrices of size `n`; the first
    /// element is `I/√n`, the rest are traceless.
    pub fn gell_mann(n: usize) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let mut elements = Vec::with_capacity(n * n);
        elements.push(ComplexMatrix::identity(n).scale(1.0 / (n as f64).sqrt()));
        for l in 1..n {
            let w = 1.0 / ((l * (l + 1)) as f64).sqrt();
            elements.push(ComplexMatrix::from_fn(n, n, |i, j| {
                if i != j {
                    zero
                } else if i < l {
                    w.into()
                } else if i == l {
                    (-(l as f64) * w).into()
                } else {
                    zero
                }
            }));
        }
        for j in 0..n {
            for k in j + 1..n {
                elements.push(ComplexMatrix::from_fn(n, n, |a, b| {
                    if (a, b) == (j, k) || (a, b) == (k, j) {
                        h.into()
                    } else {
                        zero
                    }
                }));
                elements.push(ComplexMatrix::from_fn(n, n, |a, b| {
                    if (a, b) == (j, k) {
                        Complex64::new(0.0, -h)
                    } else if (a, b) == (k, j) {
                        Complex64::new(0.0, h)
                    } else {
                        zero
                    }
                }));
            }
        }
        Self { dim: n, elements }
    }

    /// Basis of `d² × d²` matrices made of products `X_a ⊗ Y_b` of qudit
    /// Gell-Mann elements, element index `a·d² + b`. Elements with `b ≠ 0`
    /// span the Hermitian operators with `Tr₂ = 0`.
    pub fn process(d: usize) -> Self {
        let gm = Self::gell_mann(d);
        let mut elements = Vec::with_capacity(d * d * d * d);
        for x in &gm.elements {
            for y in &gm.elements {
                elements.push(kron(x, y));
            }
        }
        Self {
            dim: d * d,
            elements,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Real coordinates `Tr(B_k M)` of a Hermitian matrix.
    pub fn coordinates(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.elements
            .iter()
            .map(|b| trace_product(b, m).re)
            .collect()
    }
}

/// Indices of [`HermitianBasis::process`] spanning `{Δ = Δ†, Tr₂ Δ = 0}`.
fn marginal_free_indices(d: usize) -> impl Iterator<Item = usize> {
    let d2 = d * d;
    (0..d2 * d2).filter(move |k| k % d2 != 0)
}

/// Informational-completeness verdict of a PPOVM.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IcReport {
    /// Outcome statistics determine the channel uniquely.
    pub complete: bool,
    /// `d⁴ − d² − rank` of the effects restricted to `{Tr₂ Δ = 0}`.
    pub deficiency: usize,
    /// Rank of the restricted design matrix.
    pub difference_rank: usize,
    /// Dimension of the real span of the effects themselves.
    pub span_rank: usize,
}

fn design_matrix(pp: &Ppovm, basis: &HermitianBasis, columns: &[usize]) -> ComplexMatrix {
    let rows: Vec<Vec<f64>> = pp
        .effects()
        .iter()
        .map(|e| basis.coordinates(&e.matrix))
        .collect();
    ComplexMatrix::from_fn(rows.len(), columns.len(), |i, j| rows[i][columns[j]].into())
}

/// A PPOVM distinguishes all channels iff no nonzero Hermitian `Δ` with
/// `Tr₂ Δ = 0` is orthogonal to every effect.
pub fn ic_check(pp: &Ppovm) -> Result<IcReport> {
    let d = pp.d();
    let basis = HermitianBasis::process(d);
    let free: Vec<usize> = marginal_free_indices(d).collect();
    let all: Vec<usize> = (0..basis.len()).collect();
    let difference_rank = matrix_rank(&design_matrix(pp, &basis, &free), DEFAULT_TOL)?;
    let span_rank = matrix_rank(&design_matrix(pp, &basis, &all), DEFAULT_TOL)?;
    let deficiency = free.len() - difference_rank;
    Ok(IcReport {
        complete: deficiency == 0,
        deficiency,
        difference_rank,
        span_rank,
    })
}

/// Output of [`psd_project`].
#[derive(Debug, Clone)]
pub struct Projection {
    pub state: ProcessState,
    pub iterations: usize,
    pub converged: bool,
}

/// Alternating projections onto `{ω ≥ 0, Tr ω = d}` and `{Tr₂ ω = I}`.
///
/// Each round clamps negative eigenvalues and rescales the trace to `d`,
/// then adds `(I − Tr₂ω) ⊗ I / d`. Rounds stop once the change drops below
/// `1e−10`. Any negativity left after the last round is removed by mixing
/// with `I ⊗ I / d`, which keeps `Tr₂ ω = I`.
pub fn psd_project(omega_raw: &ComplexMatrix, d: usize, iters: usize) -> Result<Projection> {
    let n = d * d;
    if omega_raw.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: omega_raw.shape(),
        });
    }
    let id_d = ComplexMatrix::identity(d);
    let mixed = ComplexMatrix::identity(n).scale(1.0 / d as f64);
    let mut w = omega_raw.hermitian_part();
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..iters {
        iterations += 1;
        let prev = w.clone();
        let clamped = herm_eig(&w)?.reconstruct_with(|x| x.max(0.0));
        let tr = clamped.trace().re;
        w = if tr > 0.0 {
            clamped.scale(d as f64 / tr)
        } else {
            mixed.clone()
        };
        let marginal = partial_trace(&w, d, d, Subsystem::Second)?;
        w += &kron(&(&id_d - &marginal), &id_d).scale(1.0 / d as f64);
        w = w.hermitian_part();
        if w.max_diff(&prev) < 1e-10 {
            converged = true;
            break;
        }
    }
    let lo = herm_eig(&w)?.values.first().copied().unwrap_or(0.0);
    if lo < 0.0 {
        let t = -lo / (1.0 / d as f64 - lo);
        w = &w.scale(1.0 - t) + &mixed.scale(t);
    }
    let state = ProcessState::with_tol(w, d, 1e-6)?;
    Ok(Projection {
        state,
        iterations,
        converged,
    })
}

/// Linear-inversion estimate of a channel from PPOVM statistics.
#[derive(Debug, Clone)]
pub struct TomographyResult {
    /// Least-squares solution with `Tr₂ = I`, possibly indefinite.
    pub omega_raw: ComplexMatrix,
    pub omega_projected: ProcessState,
    /// Euclidean misfit `‖(Tr[ω M_α])_α − p‖`.
    pub residual: f64,
    pub hs_error: Option<f64>,
    pub ic: IcReport,
    pub projection_converged: bool,
}

impl TomographyResult {
    /// Human-readable warnings (deficient PPOVM, projection not converged).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.ic.complete {
            out.push(alloc::format!(
                "PPOVM is not informationally complete: deficiency = {}; minimum-norm solution reported",
                self.ic.deficiency
            ));
        }
        if !self.projection_converged {
            out.push(String::from(
                "positivity projection did not converge; best iterate reported",
            ));
        }
        out
    }
}

/// Least-squares reconstruction `ω = I⊗I/d + Σ c_k B_k` over the
/// marginal-free basis, followed by [`psd_project`].
pub fn linear_inversion(pp: &Ppovm, probs: &[f64]) -> Result<TomographyResult> {
    if probs.len() != pp.len() {
        return Err(Error::LengthMismatch {
            expected: pp.len(),
            found: probs.len(),
        });
    }
    let d = pp.d();
    let n = d * d;
    let basis = HermitianBasis::process(d);
    let free: Vec<usize> = marginal_free_indices(d).collect();
    let g = design_matrix(pp, &basis, &free);
    let target: Vec<Complex64> = pp
        .effects()
        .iter()
        .zip(probs)
        .map(|(e, &p)| (p - e.matrix.trace().re / d as f64).into())
        .collect();
    let coeffs = pinv(&g, LSTSQ_CUTOFF)?.mul_vec(&target);
    let fitted = g.mul_vec(&coeffs);
    let residual = fitted
        .iter()
        .zip(&target)
        .map(|(a, b)| (a.re - b.re).powi(2))
        .sum::<f64>()
        .sqrt();

    let mut omega_raw = ComplexMatrix::identity(n).scale(1.0 / d as f64);
    for (&k, c) in free.iter().zip(&coeffs) {
        omega_raw += &basis.elements[k].scale(c.re);
    }
    let difference_rank = matrix_rank(&g, DEFAULT_TOL)?;
    let all: Vec<usize> = (0..basis.len()).collect();
    let span_rank = matrix_rank(&design_matrix(pp, &basis, &all), DEFAULT_TOL)?;
    let ic = IcReport {
        complete: difference_rank == free.len(),
        deficiency: free.len() - difference_rank,
        difference_rank,
        span_rank,
    };
    let projection = psd_project(&omega_raw, d, PROJECTION_ITERS)?;
    Ok(TomographyResult {
        omega_raw,
        omega_projected: projection.state,
        residual,
        hs_error: None,
        ic,
        projection_converged: projection.converged,
    })
}

/// Hilbert–Schmidt distance `√Tr[(A − B)†(A − B)]`.
pub fn hs_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            expected: a.shape(),
            found: b.shape(),
        });
    }
    Ok((a - b).frobenius_norm())
}

/// Hilbert–Schmidt distance of the projected estimate from the truth.
pub fn reconstruction_error(result: &TomographyResult, truth: &ProcessState) -> Result<f64> {
    hs_distance(result.omega_projected.matrix(), truth.matrix())
}

/// Sampled outcome counts of a simulated process measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    /// `(label, count)` in effect order.
    pub counts: Vec<(String, u64)>,
    pub shots: u64,
    pub seed: u64,
    pub generator: String,
}

impl ShotRecord {
    pub fn frequencies(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|(_, n)| *n as f64 / self.shots as f64)
            .collect()
    }
}

/// Draws a multinomial sample of `shots` outcomes with probabilities
/// `probs` through conditional binomials.
pub fn sample_counts(probs: &[f64], shots: u64, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(Error::ProbabilitySum { sum });
    }
    let clamped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let mut mass: f64 = clamped.iter().sum();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut remaining = shots;
    let mut counts = Vec::with_capacity(probs.len());
    for (i, &p) in clamped.iter().enumerate() {
        if i + 1 == clamped.len() {
            counts.push(remaining);
            break;
        }
        let k = if remaining == 0 || p <= 0.0 {
            0
        } else {
            let cond = (p / mass).clamp(0.0, 1.0);
            Binomial::new(remaining, cond)
                .map_err(|_| Error::InvalidParameter(alloc::format!("binomial parameter {cond}")))?
                .sample(&mut rng)
        };
        counts.push(k);
        remaining -= k;
        mass -= p;
    }
    Ok(counts)
}

/// Runs the realized experiment `shots` times on a channel.
pub fn simulate_counts(
    ch: &KrausChannel,
    real: &Realization,
    shots: u64,
    seed: u64,
) -> Result<ShotRecord> {
    let probs = real.probabilities(ch)?;
    let counts = sample_counts(&probs, shots, seed)?;
    Ok(ShotRecord {
        counts: real.povm.labels().iter().cloned().zip(counts).collect(),
        shots,
        seed,
        generator: String::from(GENERATOR),
    })
}
