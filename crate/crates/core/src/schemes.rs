//! Ready-made qubit experiments: Pauli-probe and six-state tomography and
//! the identity-versus-contraction discrimination setup.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::matrix::{kron, psi_plus_vec, ComplexMatrix};
use crate::ppovm::{build_ppovm, Ppovm, TestCouple};
use crate::quantum::{DensityOperator, Povm};

/// Eigenvectors of σx, σy, σz labeled `+x, -x, +y, -y, +z, -z`.
pub fn pauli_eigenstates() -> Vec<(String, Vec<Complex64>)> {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let c = Complex64::new;
    [
        ("+x", [c(h, 0.0), c(h, 0.0)]),
        ("-x", [c(h, 0.0), c(-h, 0.0)]),
        ("+y", [c(h, 0.0), c(0.0, h)]),
        ("-y", [c(h, 0.0), c(0.0, -h)]),
        ("+z", [c(1.0, 0.0), c(0.0, 0.0)]),
        ("-z", [c(0.0, 0.0), c(1.0, 0.0)]),
    ]
    .into_iter()
    .map(|(l, v)| (l.to_string(), v.to_vec()))
    .collect()
}

/// Complete qubit state tomography: the six Pauli projectors, each with
/// weight 1/3.
pub fn pauli_tomography_povm() -> Povm {
    let (labels, effects): (Vec<String>, Vec<ComplexMatrix>) = pauli_eigenstates()
        .into_iter()
        .map(|(l, v)| (l, ComplexMatrix::projector(&v).scale(1.0 / 3.0)))
        .unzip();
    Povm::new(effects, labels).expect("Pauli projectors over three bases sum to 3I")
}

/// Normalized maximally entangled probe measured with all 36 products
/// `F_ab = |a⟩⟨a| ⊗ |b⟩⟨b| / 9`.
pub fn pauli_probe_couple() -> TestCouple {
    let states = pauli_eigenstates();
    let mut effects = Vec::with_capacity(36);
    let mut labels = Vec::with_capacity(36);
    for (la, a) in &states {
        for (lb, b) in &states {
            effects.push(
                kron(&ComplexMatrix::projector(a), &ComplexMatrix::projector(b)).scale(1.0 / 9.0),
            );
            labels.push(format!("{la},{lb}"));
        }
    }
    let psi: Vec<Complex64> = psi_plus_vec(2)
        .iter()
        .map(|z| z * core::f64::consts::FRAC_1_SQRT_2)
        .collect();
    let state = DensityOperator::pure(&psi).expect("normalized vector");
    let povm = Povm::new(effects, labels).expect("product of two tomographic POVMs");
    TestCouple::new(1.0, 2, state, povm).expect("dimensions agree")
}

pub fn pauli_probe() -> Ppovm {
    build_ppovm(&[pauli_probe_couple()], 2).expect("valid experiment")
}

/// Six ancilla-free test states with probability 1/6 each, followed by
/// Pauli tomography of the output.
pub fn six_state_couples() -> Vec<TestCouple> {
    pauli_eigenstates()
        .into_iter()
        .map(|(label, v)| {
            let state = DensityOperator::pure(&v).expect("normalized vector");
            TestCouple::new(1.0 / 6.0, 1, state, pauli_tomography_povm())
                .expect("dimensions agree")
                .with_label(label)
        })
        .collect()
}

pub fn six_state() -> Ppovm {
    build_ppovm(&six_state_couples(), 2).expect("valid experiment")
}

/// Probe `|1⟩` and measure `{I − |0⟩⟨0|, |0⟩⟨0|}`: the first outcome
/// identifies the identity channel, the second the contraction to `|0⟩`.
pub fn identity_vs_contraction_couple() -> TestCouple {
    let c = Complex64::new;
    let state = DensityOperator::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).expect("normalized vector");
    let povm = Povm::new(
        alloc::vec![
            ComplexMatrix::diag_real(&[0.0, 1.0]),
            ComplexMatrix::diag_real(&[1.0, 0.0])
        ],
        alloc::vec!["identity".to_string(), "contraction".to_string()],
    )
    .expect("complementary projectors");
    TestCouple::new(1.0, 1, state, povm).expect("dimensions agree")
}

pub fn identity_vs_contraction() -> Ppovm {
    build_ppovm(&[identity_vs_contraction_couple()], 2).expect("valid experiment")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_probe_effects_are_halved_povm() {
        let couple = pauli_probe_couple();
        let pp = pauli_probe();
        assert_eq!(pp.len(), 36);
        for (e, f) in pp.effects().iter().zip(couple.povm().effects()) {
            assert!(e.matrix.max_diff(&f.scale(0.5)) < 1e-12);
        }
        assert!(pp.sum().max_diff(&ComplexMatrix::identity(4).scale(0.5)) < 1e-12);
    }

    #[test]
    fn schemes_coincide() {
        assert!(pauli_probe().multiset_eq(&six_state(), 1e-12));
    }

    #[test]
    fn transposition_swaps_y_eigenstates() {
        let s = pauli_eigenstates();
        let proj = |i: usize| ComplexMatrix::projector(&s[i].1);
        assert!(proj(0).transpose().max_diff(&proj(0)) < 1e-15);
        assert!(proj(2).transpose().max_diff(&proj(3)) < 1e-15);
        assert!(proj(3).transpose().max_diff(&proj(2)) < 1e-15);
        assert!(proj(4).transpose().max_diff(&proj(4)) < 1e-15);
    }
}
