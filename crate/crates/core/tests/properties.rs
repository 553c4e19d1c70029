use antideph::liouvillian::standard_form::{gell_mann_basis, project, standard_form};
use antideph::liouvillian::{build_liouvillian, sandwich};
use antideph::observables::{fidelity_general, fidelity_qubit, purity, purity_rate, variance};
use antideph::operator::{devectorize, pauli, spectrum_distance, vectorize};
use antideph::sdq::{cardano_spectrum, purity_rate_sdq, BlochState};
use antideph::{ComplexMatrix, DensityMatrix, SdqParams, StochNhModel, C64};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| C64::new(a, b))
}

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(|v| ComplexMatrix::from_row_major(v).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(|m| m.hermitian_part())
}

fn psd(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n).prop_map(|m| &m * &m.adjoint())
}

fn state(n: usize) -> impl Strategy<Value = DensityMatrix> {
    psd(n).prop_map(|m| {
        let tr = m.trace().re;
        DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
    })
}

fn pure_state(n: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(complex(), n)
        .prop_filter("nonzero", |v| v.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| DensityMatrix::pure(&v).unwrap())
}

fn model(n: usize) -> impl Strategy<Value = StochNhModel> {
    (hermitian(n), psd(n), 0.0..2.0f64).prop_map(|(h, l, g)| StochNhModel::build(h, l, g).unwrap())
}

fn qubit_state() -> impl Strategy<Value = DensityMatrix> {
    (0.0..1.0f64, 0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(r, t, p)| {
        DensityMatrix::from_bloch(r * t.sin() * p.cos(), r * t.sin() * p.sin(), r * t.cos()).unwrap()
    })
}

fn sdq_params() -> impl Strategy<Value = SdqParams> {
    (-3.0..1.0f64, -1.0..2.0f64, 0.1..3.0f64).prop_map(|(lg, lb, j)| {
        SdqParams::new(j, 10f64.powf(lb) * j, 10f64.powf(lg) / j).unwrap()
    })
}

proptest! {
    #[test]
    fn vectorized_sandwich(x in matrix(3), y in matrix(3), rho in matrix(3)) {
        let direct = &(&x * &rho) * &y;
        let v = sandwich(&x, &y).matvec(vectorize(&rho).as_slice());
        for (a, b) in direct.as_slice().iter().zip(&v) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn vectorize_round_trip(x in matrix(4)) {
        prop_assert_eq!(devectorize(&vectorize(&x)), x);
    }

    #[test]
    fn liouvillian_preserves_hermiticity(m in model(3), rho in state(3)) {
        let out = m.apply_liouvillian(rho.matrix()).unwrap();
        prop_assert!(out.hermiticity_defect().0 < 1e-12);
        let sop = build_liouvillian(&m).apply(rho.matrix()).unwrap();
        prop_assert!((&sop - &out).max_abs() < 1e-12);
        prop_assert!((m.trace_rate(&rho) - out.trace().re).abs() < 1e-12);
    }

    #[test]
    fn normalized_dynamics_is_gauge_invariant(
        m in model(2), rho in state(2), a in -3.0..3.0f64, b in -2.0..2.0f64
    ) {
        let base = m.nonlinear_rhs(rho.matrix()).unwrap();
        let shifted = m.gauge_shift_identity(a).gauge_shift_stochastic(b);
        let other = shifted.nonlinear_rhs(rho.matrix()).unwrap();
        prop_assert!((&base - &other).max_abs() < 1e-10 * (1.0 + base.max_abs()));
        let back = shifted.gauge_shift_stochastic(-b).gauge_shift_identity(-a);
        prop_assert_eq!(back.effective_l_det(), m.effective_l_det());
    }

    #[test]
    fn pure_state_purity_rate_is_noise_variance(m in model(3), psi in pure_state(3)) {
        let want = -4.0 * m.gamma() * variance(m.l_stoch(), psi.matrix());
        prop_assert!((purity_rate(psi.matrix(), &m) - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn sdq_purity_rate_matches_general(p in sdq_params(), rho in qubit_state()) {
        let [x, y, z] = rho.bloch().unwrap();
        let s = BlochState::new(x, y, z).unwrap();
        let general = purity_rate(rho.matrix(), &p.model());
        prop_assert!((purity_rate_sdq(&s, &p) - general).abs() < 1e-12 * (1.0 + general.abs()));
    }

    #[test]
    fn qubit_fidelity_matches_uhlmann(a in qubit_state(), b in qubit_state()) {
        let f = fidelity_general(a.matrix(), b.matrix()).unwrap();
        let g = fidelity_qubit(a.matrix(), b.matrix()).unwrap();
        let h = fidelity_general(b.matrix(), a.matrix()).unwrap();
        prop_assert!((f - g).abs() < 1e-10);
        prop_assert!((f - h).abs() < 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
    }

    #[test]
    fn fidelity_one_only_for_equal_states(a in state(3), b in state(3)) {
        let f = fidelity_general(a.matrix(), b.matrix()).unwrap();
        prop_assert!(f <= 1.0 + 1e-12);
        if f > 1.0 - 1e-12 {
            prop_assert!((a.matrix() - b.matrix()).max_abs() < 1e-5);
        }
        prop_assert!((fidelity_general(a.matrix(), a.matrix()).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn purity_bounds(rho in state(3)) {
        let p = purity(rho.matrix());
        prop_assert!(p >= 1.0 / 3.0 - 1e-12 && p <= 1.0 + 1e-12);
    }

    #[test]
    fn cardano_matches_dense_spectrum(p in sdq_params()) {
        let dense = antideph::operator::eig(p.liouvillian().matrix()).unwrap();
        let d = spectrum_distance(&cardano_spectrum(&p).eigenvalues(), &dense.values);
        prop_assert!(d < 1e-9 * p.j.max(p.gamma_decay), "distance {}", d);
    }

    #[test]
    fn standard_form_round_trip(m in model(2)) {
        let sop = build_liouvillian(&m);
        let basis = gell_mann_basis(2);
        let proj = project(&sop, &basis).unwrap();
        let sf = standard_form(&proj.h, &proj.g, &proj.a_coeffs, &proj.ops).unwrap();
        prop_assert!((sf.generator.matrix() - sop.matrix()).max_abs() < 1e-10);
        prop_assert!((sf.diagonal_generator().matrix() - sop.matrix()).max_abs() < 1e-10);
    }
}

#[test]
fn closed_qubit_has_zero_purity_rate() {
    let m = StochNhModel::build(pauli::y(), ComplexMatrix::zeros(2), 0.0).unwrap();
    let rho = DensityMatrix::from_bloch(0.3, -0.1, 0.5).unwrap();
    assert_eq!(purity_rate(rho.matrix(), &m), 0.0);
}
