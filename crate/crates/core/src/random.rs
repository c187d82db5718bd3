//! Random states, unitaries, channels and measurements for property tests,
//! examples and simulation.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::matrix::{herm_eig, kron, mat_sqrt_psd, ComplexMatrix};
use crate::ppovm::{Ppovm, ProcessEffect};
use crate::quantum::{DensityOperator, KrausChannel, Povm};

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn random_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Haar-random unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(d, d, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.col(j);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// Random density operator of dimension `n` and rank at most `rank`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(n, rank.max(1), rng);
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityOperator::new(m.scale(1.0 / tr).hermitian_part())
        .expect("Wishart matrix is a valid state")
}

/// Random trace-preserving channel with `n_kraus` Kraus operators, from a
/// Haar-random isometry `H_d → H_env ⊗ H_d`.
pub fn random_channel<R: Rng + ?Sized>(d: usize, n_kraus: usize, rng: &mut R) -> KrausChannel {
    let k = n_kraus.max(1);
    let u = random_unitary(d * k, rng);
    let kraus = (0..k)
        .map(|e| ComplexMatrix::from_fn(d, d, |row, col| u[(e * d + row, col)]))
        .collect();
    KrausChannel::new(kraus).expect("isometry blocks share a shape")
}

/// Random effect `0 ≤ F ≤ I`, largest eigenvalue uniform in `(0, 1]`.
pub fn random_effect<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let m = (&g * &g.adjoint()).hermitian_part();
    let top = herm_eig(&m)
        .expect("Hermitian")
        .values
        .last()
        .copied()
        .unwrap_or(1.0);
    let scale: f64 = rng.random_range(0.05..=1.0);
    m.scale(scale / top)
}

/// `S^{-1/2} G S^{-1/2}` normalization of random positive operators.
fn normalize_to_sum(ops: Vec<ComplexMatrix>, target: &ComplexMatrix) -> Vec<ComplexMatrix> {
    let n = target.rows();
    let mut sum = ComplexMatrix::zeros(n, n);
    for op in &ops {
        sum += op;
    }
    let inv_sqrt = herm_eig(&sum).expect("Hermitian").reconstruct_with(|x| {
        if x > 0.0 {
            1.0 / x.sqrt()
        } else {
            0.0
        }
    });
    let root = mat_sqrt_psd(target).expect("PSD target");
    let t = &root * &inv_sqrt;
    ops.iter()
        .map(|op| (&(&t * op) * &t.adjoint()).hermitian_part())
        .collect()
}

pub fn random_povm<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> Povm {
    let ops = (0..count.max(1))
        .map(|k| {
            // the first operator has full rank so the sum is invertible
            let rank = if k == 0 {
                n
            } else {
                1 + rng.random_range(0..n)
            };
            let g = ginibre(n, rank, rng);
            &g * &g.adjoint()
        })
        .collect();
    let effects = normalize_to_sum(ops, &ComplexMatrix::identity(n));
    Povm::unlabeled(effects).expect("normalized effects form a POVM")
}

/// Random PPOVM whose normalization state has the given rank:
/// `M_α = (√ρᵀ ⊗ I) G_α (√ρᵀ ⊗ I)` for a random two-qudit POVM `{G_α}`.
pub fn random_ppovm<R: Rng + ?Sized>(d: usize, rank: usize, count: usize, rng: &mut R) -> Ppovm {
    let rho = random_density(d, rank.clamp(1, d), rng);
    let povm = random_povm(d * d, count, rng);
    let eig = herm_eig(&rho.matrix().transpose()).expect("Hermitian");
    let top = eig.values.last().copied().unwrap_or(1.0);
    // exact zeros off the support, not square roots of round-off
    let sqrt = eig.reconstruct_with(|x| if x > 1e-12 * top { x.sqrt() } else { 0.0 });
    let root = kron(&sqrt, &ComplexMatrix::identity(d));
    let effects = povm
        .effects()
        .enumerate()
        .map(|(i, g)| ProcessEffect::new(i.to_string(), (&(&root * g) * &root).hermitian_part()))
        .collect();
    Ppovm::validate(effects, d).expect("random PPOVM is valid")
}
