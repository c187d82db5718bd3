//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test -p ppovm-core --test acceptance`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::process::ExitCode;

use num_complex::Complex64;
use ppovm_core::discrim::{build_plan, min_copies, overlap};
use ppovm_core::matrix::{kron, psi_plus_vec, trace_product, ComplexMatrix};
use ppovm_core::ppovm::{build_ppovm, extra_effect, outcome_probabilities, realize, TestCouple};
use ppovm_core::quantum::{choi_of_channel, make_standard, KrausChannel, StandardChannel};
use ppovm_core::random::{
    random_channel, random_density, random_povm, random_ppovm, random_unitary,
};
use ppovm_core::schemes;
use ppovm_core::tomo::{hs_distance, linear_inversion, reconstruction_error, simulate_counts};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

fn pauli_vectors() -> [[Complex64; 2]; 6] {
    let h = FRAC_1_SQRT_2;
    [
        [c(h, 0.0), c(h, 0.0)],
        [c(h, 0.0), c(-h, 0.0)],
        [c(h, 0.0), c(0.0, h)],
        [c(h, 0.0), c(0.0, -h)],
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0)],
    ]
}

fn pauli_probe_effects() -> Outcome {
    let pp = schemes::pauli_probe();
    let vs = pauli_vectors();
    let mut worst: f64 = 0.0;
    let mut k = 0;
    for a in &vs {
        for b in &vs {
            let f =
                kron(&ComplexMatrix::projector(a), &ComplexMatrix::projector(b)).scale(1.0 / 9.0);
            worst = worst.max(pp.effects()[k].matrix.max_diff(&f.scale(0.5)));
            k += 1;
        }
    }
    let sum_dev = pp.sum().max_diff(&ComplexMatrix::identity(4).scale(0.5));
    check(
        pp.len() == 36 && worst <= 1e-12 && sum_dev <= 1e-12,
        format!(
            "{} effects, max |M − F/2| = {worst:.1e}, |ΣM − I/2| = {sum_dev:.1e} (tol 1e-12)",
            pp.len()
        ),
    )
}

fn scheme_coincidence() -> Outcome {
    let vs = pauli_vectors();
    let p = |i: usize| ComplexMatrix::projector(&vs[i]);
    let swap = p(2)
        .transpose()
        .max_diff(&p(3))
        .max(p(3).transpose().max_diff(&p(2)));
    let equal = schemes::six_state().multiset_eq(&schemes::pauli_probe(), 1e-12);
    check(
        equal && swap <= 1e-12,
        format!("multiset equal = {equal}, |(|±y⟩⟨±y|)ᵀ − |∓y⟩⟨∓y|| = {swap:.1e} (tol 1e-12)"),
    )
}

fn fundamental_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0003);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for anc in [1, 2, 4] {
        for d in [2, 3] {
            for _ in 0..40 {
                let n = anc * d;
                let rho = random_density(n, 1 + rng.random_range(0..n), &mut rng);
                let povm = random_povm(n, 2 + rng.random_range(0..3), &mut rng);
                let ch = random_channel(d, 1 + rng.random_range(0..d * d), &mut rng);
                let out = ch.apply_on_second(rho.matrix(), anc).unwrap();
                let direct: Vec<f64> = povm.effects().map(|f| trace_product(f, &out).re).collect();
                let pp = build_ppovm(&[TestCouple::new(1.0, anc, rho, povm).unwrap()], d).unwrap();
                let omega = ch.choi_matrix();
                for (e, p) in pp.effects().iter().zip(&direct) {
                    worst = worst.max((trace_product(&omega, &e.matrix).re - p).abs());
                }
                count += 1;
            }
        }
    }
    check(
        count >= 200 && worst <= 1e-9,
        format!("{count} instances over D ∈ {{1,2,4}}, d ∈ {{2,3}}, max deviation {worst:.1e} (tol 1e-9)"),
    )
}

fn realization_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0004);
    let mut effect_dev: f64 = 0.0;
    let mut sum_dev: f64 = 0.0;
    let mut deficient = 0;
    let mut count = 0;
    for d in [2, 3] {
        for rank in 1..=d {
            for _ in 0..12 {
                let pp = random_ppovm(d, rank, 2 + rng.random_range(0..6), &mut rng);
                let real = realize(&pp).unwrap();
                if real.r < d {
                    deficient += 1;
                }
                let rebuilt = build_ppovm(&[real.to_couple().unwrap()], d).unwrap();
                for (a, b) in pp.effects().iter().zip(rebuilt.effects()) {
                    effect_dev = effect_dev.max(a.matrix.max_diff(&b.matrix));
                }
                let mut total = ComplexMatrix::zeros(real.r * d, real.r * d);
                for f in real.povm.effects() {
                    total += f;
                }
                sum_dev = sum_dev.max(total.max_diff(&ComplexMatrix::identity(real.r * d)));
                count += 1;
            }
        }
    }
    check(
        count >= 50 && deficient > 0 && effect_dev <= 1e-8 && sum_dev <= 1e-9,
        format!(
            "{count} PPOVMs ({deficient} rank-deficient), max effect deviation {effect_dev:.1e} (tol 1e-8), |ΣF − I| = {sum_dev:.1e} (tol 1e-9)"
        ),
    )
}

fn identity_vs_contraction() -> Outcome {
    let pp = schemes::identity_vs_contraction();
    let id = KrausChannel::identity(2);
    let a0 = make_standard(
        &StandardChannel::Contraction(vec![c(1.0, 0.0), c(0.0, 0.0)]),
        2,
    )
    .unwrap();
    let w_id = choi_of_channel(&id).unwrap();
    let w_0 = choi_of_channel(&a0).unwrap();
    let m = |k: usize| &pp.effects()[k].matrix;
    let hit_id = trace_product(m(0), w_id.matrix()).re;
    let hit_0 = trace_product(m(1), w_0.matrix()).re;
    let miss_id = trace_product(m(1), w_id.matrix()).re;
    let miss_0 = trace_product(m(0), w_0.matrix()).re;
    let dev = (hit_id - 1.0)
        .abs()
        .max((hit_0 - 1.0).abs())
        .max(miss_id.abs())
        .max(miss_0.abs());
    check(
        dev <= 1e-12,
        format!("Tr[M_I ω_I] = {hit_id}, Tr[M_0 ω_0] = {hit_0}, misidentification ({miss_id:.1e}, {miss_0:.1e}) (tol 1e-12)"),
    )
}

fn extra_effect_rate() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0006);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in [2, 3] {
        for _ in 0..50 {
            let pp = random_ppovm(d, 1 + rng.random_range(0..d), 3, &mut rng);
            let ch = random_channel(d, 1 + rng.random_range(0..d * d), &mut rng);
            let omega = choi_of_channel(&ch).unwrap();
            let rate = trace_product(&extra_effect(&pp), omega.matrix()).re;
            worst = worst.max((rate - (d as f64 - 1.0)).abs());
            count += 1;
        }
    }
    check(
        worst <= 1e-9,
        format!("{count} channels at d ∈ {{2,3}}, max |rate − (d−1)| = {worst:.1e} (tol 1e-9)"),
    )
}

fn overlap_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0007);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for d in [2, 3] {
        for _ in 0..50 {
            let u = random_unitary(d, &mut rng);
            let v = random_unitary(d, &mut rng);
            let psi = psi_plus_vec(d);
            let lift = |w: &ComplexMatrix| kron(&ComplexMatrix::identity(d), w).mul_vec(&psi);
            let (wu, wv) = (lift(&u), lift(&v));
            let ip: Complex64 = wu.iter().zip(&wv).map(|(a, b)| a.conj() * b).sum();
            worst = worst.max((ip.norm() - overlap(&u, &v).unwrap()).abs());
            count += 1;
        }
    }
    check(
        worst <= 1e-10,
        format!("{count} unitary pairs at d ∈ {{2,3}}, max deviation {worst:.1e} (tol 1e-10)"),
    )
}

fn qubit_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0008);
    let mut agree = 0;
    let mut orthogonal = 0;
    let total = 200;
    for i in 0..total {
        let u = random_unitary(2, &mut rng);
        let v = if i % 2 == 0 {
            random_unitary(2, &mut rng)
        } else {
            // V = U·W with W a traceless unitary
            let q = random_unitary(2, &mut rng);
            let phase = Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI));
            &u * &ComplexMatrix::diag_real(&[1.0, -1.0])
                .conjugate_by(&q)
                .scale(phase)
        };
        let traceless = trace_product(&u.adjoint(), &v).norm() < 1e-9;
        if traceless {
            orthogonal += 1;
        }
        if build_plan(&u, &v).is_ok() == traceless {
            agree += 1;
        }
    }
    check(
        agree == total && orthogonal > 0 && orthogonal < total,
        format!("{agree}/{total} pairs agree ({orthogonal} orthogonal)"),
    )
}

fn minimal_copies() -> Outcome {
    let cases = [
        (PI / 2.0, 2),
        (PI / 3.0, 3),
        (2.0 * PI / 5.0, 3),
        (PI / 7.0, 7),
    ];
    let mut lines = Vec::new();
    let mut pass = true;
    for (delta, expected) in cases {
        let oracle = (PI / delta - 1e-9).ceil() as usize;
        let v = ComplexMatrix::diag(&[c(1.0, 0.0), Complex64::from_polar(1.0, delta)]);
        let found = min_copies(&ComplexMatrix::identity(2), &v, 20).unwrap();
        pass &= found == Some(oracle) && oracle == expected;
        lines.push(format!("Δ={delta:.4}: {found:?} vs {oracle}"));
    }
    check(pass, lines.join(", "))
}

fn tomography_pipeline() -> Outcome {
    let pp = schemes::pauli_probe();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE_0010);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let ch = random_channel(2, 1 + rng.random_range(0..4), &mut rng);
        let truth = choi_of_channel(&ch).unwrap();
        let res = linear_inversion(&pp, &outcome_probabilities(&pp, &ch).unwrap()).unwrap();
        worst = worst.max(reconstruction_error(&res, &truth).unwrap());
    }

    let real = realize(&pp).unwrap();
    let ch = random_channel(2, 2, &mut rng);
    let truth = choi_of_channel(&ch).unwrap();
    let errors = |shots: u64| -> Vec<f64> {
        (0..20u64)
            .map(|seed| {
                let rec = simulate_counts(&ch, &real, shots, seed).unwrap();
                let res = linear_inversion(&pp, &rec.frequencies()).unwrap();
                hs_distance(res.omega_projected.matrix(), truth.matrix()).unwrap()
            })
            .collect()
    };
    let low = median(errors(10_000));
    let high = median(errors(1_000_000));
    check(
        worst < 1e-7 && high < low,
        format!("exact max HS error {worst:.1e} (tol 1e-7); median HS error 1e4 shots {low:.2e}, 1e6 shots {high:.2e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("pauli-probe effects and sum", pauli_probe_effects),
        ("six-state and pauli-probe coincide", scheme_coincidence),
        ("fundamental equivalence", fundamental_equivalence),
        ("realization round trip", realization_round_trip),
        ("identity vs contraction", identity_vs_contraction),
        ("extra-effect rate", extra_effect_rate),
        ("overlap identity", overlap_identity),
        ("qubit discrimination criterion", qubit_criterion),
        ("minimal copies", minimal_copies),
        ("tomography pipeline", tomography_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let out = run();
        let tag = if out.pass { "PASS" } else { "FAIL" };
        if !out.pass {
            failed += 1;
        }
        println!("[{tag}] {:>2}. {name}: {}", i + 1, out.detail);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
