//! Perfect and unambiguous discrimination of channel pairs, with the
//! complete theory for unitary channels: eigenphases of `U†V`, the
//! zero-in-hull criterion, probe construction and multi-copy search.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{herm_eig, rank_and_support, ComplexMatrix, DEFAULT_TOL};
use crate::ppovm::{build_ppovm, Ppovm, TestCouple};
use crate::quantum::{
    choi_of_channel, make_standard, DensityOperator, KrausChannel, Povm, ProcessState,
    StandardChannel,
};

/// Angular tolerance of the hull test.
pub const ANGLE_TOL: f64 = 1e-9;
/// Required eigenvector residual `‖Wu − e^{iθ}u‖`.
pub const EIGEN_RESIDUAL: f64 = 1e-8;
/// Phases closer than this are merged in the multi-copy search.
pub const DEDUP_TOL: f64 = 1e-12;
/// Misidentification rates at or below this count as zero.
pub const PERFECT_TOL: f64 = 1e-9;

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let residual = u.unitarity_residual();
    if residual > DEFAULT_TOL {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

fn check_pair(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<()> {
    check_unitary(u)?;
    check_unitary(v)?;
    if u.shape() != v.shape() {
        return Err(Error::ShapeMismatch {
            expected: u.shape(),
            found: v.shape(),
        });
    }
    Ok(())
}

fn wrap_phase(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Eigenphases in `[0, 2π)`, sorted ascending, repeated by multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSet {
    phases: Vec<f64>,
}

impl PhaseSet {
    pub fn new(phases: Vec<f64>) -> Self {
        let mut phases: Vec<f64> = phases.into_iter().map(wrap_phase).collect();
        phases.sort_by(f64::total_cmp);
        Self { phases }
    }

    /// Eigenphases of `U†V`.
    pub fn of_pair(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<Self> {
        check_pair(u, v)?;
        Ok(unitary_eigen(&(&u.adjoint() * v))?.phase_set())
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Largest angular gap between circularly consecutive phases.
    pub fn max_gap(&self) -> f64 {
        let p = &self.phases;
        match p.len() {
            0 => TAU,
            n => {
                let wrap = TAU - p[n - 1] + p[0];
                p.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max)
            }
        }
    }

    /// All sums of one phase from `self` and one from `other`, merged at
    /// [`DEDUP_TOL`].
    fn sumset(&self, other: &PhaseSet) -> PhaseSet {
        let mut all = Vec::with_capacity(self.len() * other.len());
        for a in &self.phases {
            for b in &other.phases {
                all.push(wrap_phase(a + b));
            }
        }
        all.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::with_capacity(all.len());
        for t in all {
            if out.last().is_none_or(|&l| t - l > DEDUP_TOL) {
                out.push(t);
            }
        }
        if out.len() > 1 && out[0] + TAU - out[out.len() - 1] <= DEDUP_TOL {
            out.pop();
        }
        PhaseSet { phases: out }
    }

    /// Distinct eigenphases of `W^{⊗n}`: all sums of `n` phases.
    pub fn tensor_power(&self, n: usize) -> PhaseSet {
        let base = self.distinct();
        let mut out = PhaseSet { phases: vec![0.0] };
        for _ in 0..n {
            out = out.sumset(&base);
        }
        out
    }

    /// Phases merged at [`DEDUP_TOL`].
    fn distinct(&self) -> PhaseSet {
        self.sumset(&PhaseSet { phases: vec![0.0] })
    }
}

/// Spectral decomposition of a unitary: `W = Σ e^{iθ_k} |u_k⟩⟨u_k|`,
/// phases ascending and eigenvectors in the matching columns.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryEigen {
    pub fn phase_set(&self) -> PhaseSet {
        PhaseSet {
            phases: self.phases.clone(),
        }
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.col(k)
    }
}

/// Diagonalizes a unitary through the Hermitian pencil
/// `(W + W†)/2 + c (W − W†)/2i`, whose eigenvalues `cos θ + c sin θ`
/// separate distinct phases for generic `c`.
pub fn unitary_eigen(w: &ComplexMatrix) -> Result<UnitaryEigen> {
    check_unitary(w)?;
    let n = w.rows();
    let wd = w.adjoint();
    let re = (w + &wd).scale(0.5);
    let im = (w - &wd).scale(Complex64::new(0.0, -0.5));
    let mut best: Option<(f64, UnitaryEigen)> = None;
    for c in [0.371_293, 1.613_877, -0.582_941, 2.931_457, -4.217_603] {
        let h = &re + &im.scale(c);
        let eig = herm_eig(&h)?;
        let mut pairs: Vec<(f64, Vec<Complex64>)> = Vec::with_capacity(n);
        let mut worst = 0.0f64;
        for k in 0..n {
            let u = eig.vector(k);
            let wu = w.mul_vec(&u);
            let lambda: Complex64 = u.iter().zip(&wu).map(|(a, b)| a.conj() * b).sum();
            let lambda = if lambda.norm() > 0.0 {
                lambda / lambda.norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let res = wu
                .iter()
                .zip(&u)
                .map(|(x, y)| (x - lambda * y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst = worst.max(res);
            pairs.push((wrap_phase(lambda.arg()), u));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| pairs[j].1[i]);
        let candidate = UnitaryEigen {
            phases: pairs.iter().map(|p| p.0).collect(),
            vectors,
        };
        if worst <= EIGEN_RESIDUAL {
            return Ok(candidate);
        }
        if best.as_ref().is_none_or(|(r, _)| worst < *r) {
            best = Some((worst, candidate));
        }
    }
    match best {
        Some((r, _)) => Err(Error::NotUnitary { residual: r }),
        None => Err(Error::Empty("unitary")),
    }
}

/// Failure rate of unambiguous discrimination of `U` and `V`: `|Tr U†V|`.
pub fn overlap(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    check_pair(u, v)?;
    Ok(crate::matrix::trace_product(&u.adjoint(), v).norm())
}

/// `|Tr U†V| ≤ d − 1`, necessary for perfect discrimination.
pub fn necessary_condition(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<bool> {
    let d = u.rows() as f64;
    Ok(overlap(u, v)? <= d - 1.0 + 1e-9)
}

/// Whether `0` lies in the convex hull of `{e^{iθ_k}}`: no open half-plane
/// holds every point. Points on a boundary diameter count as inside.
pub fn zero_in_hull(ph: &PhaseSet, tol: f64) -> bool {
    !ph.is_empty() && ph.max_gap() <= PI + tol
}

fn residual(ph: &[f64], q: &[f64]) -> f64 {
    ph.iter()
        .zip(q)
        .map(|(&t, &w)| Complex64::from_polar(w, t))
        .sum::<Complex64>()
        .norm()
}

/// Convex weights with `Σ_k q_k e^{iθ_k} = 0`, supported on at most three
/// phases. Antipodal pairs are tried first, then triangles in index order.
pub fn hull_weights(ph: &PhaseSet, tol: f64) -> Result<Vec<f64>> {
    if !zero_in_hull(ph, tol) {
        return Err(Error::NoHull);
    }
    let p = ph.phases();
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            if ((p[j] - p[i]) - PI).abs() <= tol {
                let mut q = vec![0.0; n];
                q[i] = 0.5;
                q[j] = 0.5;
                return Ok(q);
            }
        }
    }
    let pt = |k: usize| (p[k].cos(), p[k].sin());
    let cross = |a: (f64, f64), b: (f64, f64)| a.0 * b.1 - a.1 * b.0;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (pt(i), pt(j), pt(k));
                // twice the signed areas of the sub-triangles opposite each vertex
                let wa = cross(b, c);
                let wb = cross(c, a);
                let wc = cross(a, b);
                let total = wa + wb + wc;
                if total.abs() < 1e-14 {
                    continue;
                }
                let (qa, qb, qc) = (wa / total, wb / total, wc / total);
                if qa < -1e-12 || qb < -1e-12 || qc < -1e-12 {
                    continue;
                }
                let (qa, qb, qc) = (qa.max(0.0), qb.max(0.0), qc.max(0.0));
                let s = qa + qb + qc;
                let mut q = vec![0.0; n];
                q[i] = qa / s;
                q[j] = qb / s;
                q[k] = qc / s;
                if residual(p, &q) <= 1e-9 {
                    return Ok(q);
                }
            }
        }
    }
    Err(Error::NoHull)
}

/// A two-outcome test: probe `|φ⟩` sent through the channel, then `{P₁, P₂}`.
/// Outcome 1 names the first channel, outcome 2 the second.
#[derive(Debug, Clone)]
pub struct DiscriminationPlan {
    pub probe: Vec<Complex64>,
    pub povm: Povm,
    pub ppovm: Ppovm,
    /// `(p(2 | first), p(1 | second))`.
    pub error_rates: (f64, f64),
}

impl DiscriminationPlan {
    /// Plan for an arbitrary probe and two-outcome POVM, with rates evaluated
    /// on the given channels.
    pub fn for_channels(
        probe: &[Complex64],
        povm: Povm,
        first: &KrausChannel,
        second: &KrausChannel,
    ) -> Result<Self> {
        let plan = Self::unevaluated(probe, povm)?;
        let error_rates = verify_plan(first, second, &plan)?;
        Ok(Self {
            error_rates,
            ..plan
        })
    }

    fn unevaluated(probe: &[Complex64], povm: Povm) -> Result<Self> {
        if povm.len() != 2 {
            return Err(Error::LengthMismatch {
                expected: 2,
                found: povm.len(),
            });
        }
        let state = DensityOperator::pure(probe)?;
        let d = state.dim();
        let couple = TestCouple::new(1.0, 1, state, povm.clone())?;
        let ppovm = build_ppovm(&[couple], d)?;
        Ok(Self {
            probe: probe.to_vec(),
            povm,
            ppovm,
            error_rates: (f64::NAN, f64::NAN),
        })
    }

    pub fn is_perfect(&self) -> bool {
        self.error_rates.0 <= PERFECT_TOL && self.error_rates.1 <= PERFECT_TOL
    }
}

/// Zero-error plan for unitaries `U` and `V` whose `U†V` has `0` in the
/// convex hull of its spectrum.
pub fn build_plan(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<DiscriminationPlan> {
    check_pair(u, v)?;
    let eig = unitary_eigen(&(&u.adjoint() * v))?;
    let ph = eig.phase_set();
    if !zero_in_hull(&ph, ANGLE_TOL) {
        return Err(Error::NotPerfectlyDiscriminable);
    }
    let q = hull_weights(&ph, ANGLE_TOL).map_err(|_| Error::NotPerfectlyDiscriminable)?;
    let d = u.rows();
    let mut probe = vec![Complex64::new(0.0, 0.0); d];
    for (k, &w) in q.iter().enumerate() {
        if w > 0.0 {
            for (p, x) in probe.iter_mut().zip(eig.vector(k)) {
                *p += x * w.sqrt();
            }
        }
    }
    let image = u.mul_vec(&probe);
    let p1 = ComplexMatrix::projector(&image);
    let p2 = &ComplexMatrix::identity(d) - &p1;
    let povm = Povm::new(
        vec![p1, p2.hermitian_part()],
        vec![String::from("U"), String::from("V")],
    )?;
    let first = make_standard(&StandardChannel::Unitary(u.clone()), d)?;
    let second = make_standard(&StandardChannel::Unitary(v.clone()), d)?;
    DiscriminationPlan::for_channels(&probe, povm, &first, &second)
}

/// Misidentification rates `(Tr[M₂ ω₁], Tr[M₁ ω₂])` of a plan.
pub fn verify_plan(
    first: &KrausChannel,
    second: &KrausChannel,
    plan: &DiscriminationPlan,
) -> Result<(f64, f64)> {
    let d = plan.ppovm.d();
    for ch in [first, second] {
        if ch.dim_in() != d || ch.dim_out() != d {
            return Err(Error::ShapeMismatch {
                expected: (d, d),
                found: (ch.dim_out(), ch.dim_in()),
            });
        }
    }
    let p1 = plan.ppovm.probabilities(&choi_of_channel(first)?)?;
    let p2 = plan.ppovm.probabilities(&choi_of_channel(second)?)?;
    Ok((p1[1], p2[0]))
}

/// Sufficient test for perfect discrimination: the supports of the two
/// process states are orthogonal.
pub fn support_orthogonal(a: &ProcessState, b: &ProcessState, tol: f64) -> Result<bool> {
    if a.d() != b.d() {
        return Err(Error::ShapeMismatch {
            expected: a.matrix().shape(),
            found: b.matrix().shape(),
        });
    }
    let (_, pa) = rank_and_support(a.matrix(), DEFAULT_TOL)?;
    let (_, pb) = rank_and_support(b.matrix(), DEFAULT_TOL)?;
    Ok((&pa * &pb).max_abs() <= tol)
}

/// Smallest `n ≤ n_max` for which `U^{⊗n}` and `V^{⊗n}` are perfectly
/// discriminable, or `None` if none is.
pub fn min_copies(u: &ComplexMatrix, v: &ComplexMatrix, n_max: usize) -> Result<Option<usize>> {
    if n_max == 0 {
        return Err(Error::InvalidParameter(String::from(
            "n_max must be at least 1",
        )));
    }
    let base = PhaseSet::of_pair(u, v)?.distinct();
    if base.len() <= 1 {
        return Err(Error::AlwaysIndistinguishable);
    }
    let mut current = base.clone();
    for n in 1..=n_max {
        if n > 1 {
            current = current.sumset(&base);
        }
        if zero_in_hull(&current, ANGLE_TOL) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Closed form for qubits whose two eigenphases differ by `Δ ∈ (0, π]`.
pub fn qubit_min_copies(delta: f64) -> usize {
    (PI / delta - 1e-9).ceil().max(1.0) as usize
}

/// Everything known about a unitary pair.
#[derive(Debug, Clone)]
pub struct DiscriminationReport {
    pub overlap: f64,
    pub necessary: bool,
    pub zero_in_hull: bool,
    pub phases: PhaseSet,
    pub min_copies: Option<usize>,
    pub plan: Option<DiscriminationPlan>,
}

/// Analyzes a unitary pair; the multi-copy search runs only when `n_max`
/// is given.
pub fn analyze(
    u: &ComplexMatrix,
    v: &ComplexMatrix,
    n_max: Option<usize>,
) -> Result<DiscriminationReport> {
    let phases = PhaseSet::of_pair(u, v)?;
    let hull = zero_in_hull(&phases, ANGLE_TOL);
    let plan = if hull { Some(build_plan(u, v)?) } else { None };
    let min_copies = match n_max {
        Some(n) => min_copies(u, v, n)?,
        None => None,
    };
    Ok(DiscriminationReport {
        overlap: overlap(u, v)?,
        necessary: necessary_condition(u, v)?,
        zero_in_hull: hull,
        phases,
        min_copies,
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{hs_inner, kron};
    use crate::quantum::identity_process_state;
    use crate::random::random_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phase_diag(phases: &[f64]) -> ComplexMatrix {
        ComplexMatrix::diag(
            &phases
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect::<Vec<_>>(),
        )
    }

    fn sigma_z() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, -1.0])
    }

    #[test]
    fn overlap_examples() {
        let id2 = ComplexMatrix::identity(2);
        assert!((overlap(&id2, &id2).unwrap() - 2.0).abs() < 1e-15);
        assert!(overlap(&id2, &sigma_z()).unwrap() < 1e-15);
        let v = phase_diag(&[0.0, PI / 3.0, -PI / 3.0]);
        assert!((overlap(&ComplexMatrix::identity(3), &v).unwrap() - 2.0).abs() < 1e-12);
        assert!(matches!(
            overlap(&id2, &ComplexMatrix::diag_real(&[1.0, 0.5])),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn overlap_matches_process_state_inner_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for d in [2, 3] {
            for _ in 0..10 {
                let u = random_unitary(d, &mut rng);
                let v = random_unitary(d, &mut rng);
                let wu = make_standard(&StandardChannel::Unitary(u.clone()), d).unwrap();
                let wv = make_standard(&StandardChannel::Unitary(v.clone()), d).unwrap();
                let ip = hs_inner(
                    choi_of_channel(&wu).unwrap().matrix(),
                    choi_of_channel(&wv).unwrap().matrix(),
                )
                .unwrap();
                // rank-one process states: ⟨ω_U, ω_V⟩ = |Tr U†V|²
                assert!((ip.norm().sqrt() - overlap(&u, &v).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn necessary_condition_examples() {
        let id2 = ComplexMatrix::identity(2);
        assert!(necessary_condition(&id2, &sigma_z()).unwrap());
        assert!(!necessary_condition(&id2, &phase_diag(&[0.0, 1e-3])).unwrap());
        let v = phase_diag(&[0.0, PI / 3.0, -PI / 3.0]);
        assert!(necessary_condition(&ComplexMatrix::identity(3), &v).unwrap());
        // the boundary case is not sufficient: phases {0, ±π/3} lie in a half-plane
        assert!(!zero_in_hull(
            &PhaseSet::of_pair(&ComplexMatrix::identity(3), &v).unwrap(),
            ANGLE_TOL
        ));
    }

    #[test]
    fn hull_examples() {
        assert!(zero_in_hull(&PhaseSet::new(vec![0.0, PI]), ANGLE_TOL));
        assert!(!zero_in_hull(
            &PhaseSet::new(vec![0.0, PI / 4.0]),
            ANGLE_TOL
        ));
        assert!(zero_in_hull(
            &PhaseSet::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]),
            ANGLE_TOL
        ));
        assert!(!zero_in_hull(&PhaseSet::new(vec![1.0]), ANGLE_TOL));
    }

    #[test]
    fn hull_weight_examples() {
        let q = hull_weights(&PhaseSet::new(vec![0.0, PI]), ANGLE_TOL).unwrap();
        assert_eq!(q, vec![0.5, 0.5]);

        let ph = PhaseSet::new(vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0]);
        let q = hull_weights(&ph, ANGLE_TOL).unwrap();
        for w in &q {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(residual(ph.phases(), &q) < 1e-12);

        // {0, π/2, π}: the antipodal pair wins; (¼, ½, ¼) would leave i/2
        let ph = PhaseSet::new(vec![0.0, PI / 2.0, PI]);
        let q = hull_weights(&ph, ANGLE_TOL).unwrap();
        assert_eq!(q, vec![0.5, 0.0, 0.5]);
        assert!(residual(ph.phases(), &q) < 1e-15);
        assert!((residual(ph.phases(), &[0.25, 0.5, 0.25]) - 0.5).abs() < 1e-15);

        assert!(matches!(
            hull_weights(&PhaseSet::new(vec![0.0, 0.1]), ANGLE_TOL),
            Err(Error::NoHull)
        ));
    }

    #[test]
    fn unitary_eigen_handles_degenerate_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let q = random_unitary(4, &mut rng);
        let w = phase_diag(&[0.3, 0.3, 2.0, 5.0]).conjugate_by(&q);
        let eig = unitary_eigen(&w).unwrap();
        let expected = [0.3, 0.3, 2.0, 5.0];
        for (a, b) in eig.phases.iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
        for k in 0..4 {
            let u = eig.vector(k);
            let wu = w.mul_vec(&u);
            let lam = Complex64::from_polar(1.0, eig.phases[k]);
            let r: f64 = wu
                .iter()
                .zip(&u)
                .map(|(x, y)| (x - lam * y).norm_sqr())
                .sum();
            assert!(r.sqrt() < EIGEN_RESIDUAL);
        }
    }

    #[test]
    fn plan_identity_vs_sigma_z() {
        let id2 = ComplexMatrix::identity(2);
        let plan = build_plan(&id2, &sigma_z()).unwrap();
        assert!(plan.is_perfect());
        let h = core::f64::consts::FRAC_1_SQRT_2;
        // the probe is (|0⟩ + |1⟩)/√2 up to a phase on each component
        for z in &plan.probe {
            assert!((z.norm() - h).abs() < 1e-12);
        }
        let zphi = sigma_z().mul_vec(&plan.probe);
        let ip: Complex64 = plan
            .probe
            .iter()
            .zip(&zphi)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(ip.norm() < 1e-12);
    }

    #[test]
    fn plan_rejects_identical_unitaries() {
        let id2 = ComplexMatrix::identity(2);
        assert!(matches!(
            build_plan(&id2, &id2),
            Err(Error::NotPerfectlyDiscriminable)
        ));
    }

    #[test]
    fn plan_for_three_phases() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let u = random_unitary(3, &mut rng);
        let q = random_unitary(3, &mut rng);
        let w = phase_diag(&[0.0, TAU / 3.0, 2.0 * TAU / 3.0]).conjugate_by(&q);
        let v = &u * &w;
        let plan = build_plan(&u, &v).unwrap();
        assert!(plan.error_rates.0 <= 1e-9 && plan.error_rates.1 <= 1e-9);
        let out_u = u.mul_vec(&plan.probe);
        let out_v = v.mul_vec(&plan.probe);
        let ip: Complex64 = out_u.iter().zip(&out_v).map(|(a, b)| a.conj() * b).sum();
        assert!(ip.norm() < 1e-9);
        let rho_t = ComplexMatrix::projector(&plan.probe).transpose();
        let target = kron(&rho_t, &ComplexMatrix::identity(3));
        assert!(plan.ppovm.sum().max_diff(&target) < 1e-12);
    }

    fn identity_vs_contraction_plan(probe: [Complex64; 2]) -> (f64, f64) {
        let povm = Povm::new(
            vec![
                ComplexMatrix::diag_real(&[0.0, 1.0]),
                ComplexMatrix::diag_real(&[1.0, 0.0]),
            ],
            vec![String::from("identity"), String::from("contraction")],
        )
        .unwrap();
        let id = KrausChannel::identity(2);
        let a0 = make_standard(
            &StandardChannel::Contraction(vec![c(1.0, 0.0), c(0.0, 0.0)]),
            2,
        )
        .unwrap();
        DiscriminationPlan::for_channels(&probe, povm, &id, &a0)
            .unwrap()
            .error_rates
    }

    #[test]
    fn verify_identity_vs_contraction() {
        let (x, y) = identity_vs_contraction_plan([c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(x.abs() < 1e-12 && y.abs() < 1e-12);
        // probe |0⟩: both outputs are |0⟩, so the identity is always misread
        let (x, y) = identity_vs_contraction_plan([c(1.0, 0.0), c(0.0, 0.0)]);
        assert!((x - 1.0).abs() < 1e-12 && y.abs() < 1e-12);
    }

    #[test]
    fn verify_rejects_dimension_mismatch() {
        let plan = build_plan(&ComplexMatrix::identity(2), &sigma_z()).unwrap();
        let id3 = KrausChannel::identity(3);
        assert!(matches!(
            verify_plan(&id3, &id3, &plan),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn support_examples() {
        let wi = identity_process_state(2);
        let wz = choi_of_channel(&make_standard(&StandardChannel::Unitary(sigma_z()), 2).unwrap())
            .unwrap();
        assert!(support_orthogonal(&wi, &wz, 1e-9).unwrap());
        let w0 = ProcessState::new(
            kron(
                &ComplexMatrix::identity(2),
                &ComplexMatrix::diag_real(&[1.0, 0.0]),
            ),
            2,
        )
        .unwrap();
        assert!(!support_orthogonal(&wi, &w0, 1e-9).unwrap());
        assert!(!support_orthogonal(&wz, &wz, 1e-9).unwrap());
    }

    #[test]
    fn min_copies_examples() {
        let id2 = ComplexMatrix::identity(2);
        assert_eq!(min_copies(&id2, &sigma_z(), 10).unwrap(), Some(1));
        for (delta, n) in [(PI / 3.0, 3), (2.0 * PI / 5.0, 3), (PI / 5.0, 5)] {
            let v = phase_diag(&[0.0, delta]);
            assert_eq!(min_copies(&id2, &v, 20).unwrap(), Some(n));
            assert_eq!(qubit_min_copies(delta), n);
        }
        assert_eq!(
            min_copies(&id2, &phase_diag(&[0.0, PI / 7.0]), 6).unwrap(),
            None
        );
        assert!(matches!(
            min_copies(&id2, &id2, 5),
            Err(Error::AlwaysIndistinguishable)
        ));
        let global = ComplexMatrix::identity(2).scale(Complex64::from_polar(1.0, 0.7));
        assert!(matches!(
            min_copies(&id2, &global, 5),
            Err(Error::AlwaysIndistinguishable)
        ));
    }

    #[test]
    fn analyze_reports() {
        let id2 = ComplexMatrix::identity(2);
        let r = analyze(&id2, &sigma_z(), None).unwrap();
        assert!(r.zero_in_hull && r.necessary && r.plan.is_some());
        let r = analyze(&id2, &phase_diag(&[0.0, PI / 5.0]), Some(10)).unwrap();
        assert!(!r.zero_in_hull && r.plan.is_none());
        assert_eq!(r.min_copies, Some(5));
    }
}
