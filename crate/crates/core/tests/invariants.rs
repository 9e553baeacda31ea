use polent::transfer::{entangled_mixing, euler_su2};
use polent::{
    bounds, herm_eig, p_out_analytic, s_max, svd2, transmit, Mat2, TransmissionMatrix,
    TwoPhotonState, C64,
};
use proptest::prelude::*;

fn complex() -> impl Strategy<Value = C64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn matrix() -> impl Strategy<Value = Mat2> {
    (complex(), complex(), complex(), complex()).prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
}

fn unitary() -> impl Strategy<Value = Mat2> {
    (-3.2..3.2f64, 0.0..3.2f64, -3.2..3.2f64, -3.2..3.2f64)
        .prop_map(|(a, b, g, phase)| euler_su2(a, b, g).scale(C64::from_polar(1.0, phase)))
}

fn state() -> impl Strategy<Value = TwoPhotonState> {
    matrix()
        .prop_filter("nonzero", |m| m.norm_sqr() > 1e-6)
        .prop_map(|m| TwoPhotonState::new(m).unwrap())
}

fn medium() -> impl Strategy<Value = TransmissionMatrix> {
    (unitary(), unitary(), 0.02..1.0f64, 0.02..1.0f64).prop_map(|(u, w, s1, s2)| {
        TransmissionMatrix::new(u * Mat2::diag_real(s1, s2) * w).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn svd_reconstructs(m in matrix()) {
        let s = svd2(&m);
        prop_assert!((s.reconstruct() - m).frobenius() < 1e-12);
        prop_assert!(s.left.unitarity_defect() < 1e-12);
        prop_assert!(s.right.unitarity_defect() < 1e-12);
        prop_assert!(s.singular_values[0] >= s.singular_values[1]);
        prop_assert!(s.singular_values[1] >= 0.0);
    }

    #[test]
    fn herm_eig_reconstructs(m in matrix()) {
        let h = m + m.adjoint();
        let e = herm_eig(&h).unwrap();
        prop_assert!((e.reconstruct() - h).frobenius() < 1e-12);
        prop_assert!(e.vectors.unitarity_defect() < 1e-12);
        prop_assert!(e.values[0] >= e.values[1]);
        // Roots of λ² − tr·λ + det.
        let (tr, det) = (h.trace().re, h.det().re);
        prop_assert!((e.values[0] + e.values[1] - tr).abs() < 1e-12);
        prop_assert!((e.values[0] * e.values[1] - det).abs() < 1e-12);
    }

    #[test]
    fn determinant_and_trace_identities(a in matrix(), b in matrix(), k in complex()) {
        prop_assert!((a.adjoint().det() - a.det().conj()).norm() < 1e-14);
        prop_assert!(((a + b.scale(k)).trace() - a.trace() - k * b.trace()).norm() < 1e-14);
        prop_assert!(((a * b).det() - a.det() * b.det()).norm() < 1e-13);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(s in state(), u in unitary(), v in unitary()) {
        let out = s.apply_local(&u, &v).unwrap();
        prop_assert!((out.concurrence() - s.concurrence()).abs() < 1e-12);
        prop_assert!((out.matrix().norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn canonical_state_round_trips(p in 0.0..=1.0f64) {
        let s = TwoPhotonState::canonical(p).unwrap();
        prop_assert!((s.concurrence() - p).abs() < 1e-12);
        prop_assert!((s.matrix().norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn polar_params_round_trip(s in state(), u in unitary(), v in unitary()) {
        let p = s.polar_params(&u, &v).unwrap();
        prop_assert!((p.reconstruct(1.0) - u * *s.matrix() * v).frobenius() < 1e-10);
        prop_assert!((p.lambda_plus + p.lambda_minus - 1.0).abs() < 1e-10);
        prop_assert!(p.u.abs() <= 0.5 && p.v.abs() <= 0.5);
        let p_in = s.concurrence();
        prop_assert!((4.0 * p.lambda_plus * p.lambda_minus - p_in * p_in).abs() < 1e-10);
    }

    #[test]
    fn transmission_is_passive(s in state(), t1 in medium(), t2 in medium()) {
        let r = transmit(&s, &t1, &t2).unwrap();
        prop_assert!(r.z > 0.0 && r.z <= 1.0 + 1e-12);
        prop_assert!(r.z * r.p_out <= s.concurrence() + 1e-12);
        prop_assert!((r.state_out.matrix().norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert!((r.p_out - p_out_analytic(&s, &t1, &t2).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn entangled_input_stays_within_bounds(u in unitary(), v in unitary(), t1 in medium(), t2 in medium()) {
        let s = TwoPhotonState::bell().apply_local(&u, &v).unwrap();
        let r = transmit(&s, &t1, &t2).unwrap();
        let b = bounds(t1.eigs().unwrap().tau().unwrap(), t2.eigs().unwrap().tau().unwrap()).unwrap();
        prop_assert!(r.p_out >= b.p_min - 1e-10 && r.p_out <= b.p_max + 1e-10);
    }

    #[test]
    fn mixing_parameter_is_bounded(u in -0.5..=0.5f64, v in -0.5..=0.5f64, phi in -4.0..4.0f64) {
        prop_assert!(entangled_mixing(u, v, phi).abs() <= 0.25 + 1e-15);
    }

    #[test]
    fn s_max_decreases_with_mismatch(a in 0.0..3.0f64, b in 0.0..3.0f64) {
        prop_assume!((a - b).abs() > 1e-9);
        let (sa, sb) = (s_max(a.exp()).unwrap(), s_max(b.exp()).unwrap());
        prop_assert_eq!(sa > sb, a < b);
        prop_assert!((s_max((-a).exp()).unwrap() - sa).abs() < 1e-12);
    }
}

#[test]
fn unitary_media_give_unit_coincidence() {
    let u1 = TransmissionMatrix::new(euler_su2(0.3, 1.1, -0.4)).unwrap();
    let u2 = TransmissionMatrix::new(euler_su2(-1.3, 0.2, 2.4).scale(C64::from_polar(1.0, 0.7)))
        .unwrap();
    let r = transmit(&TwoPhotonState::canonical(0.4).unwrap(), &u1, &u2).unwrap();
    assert!((r.z - 1.0).abs() < 1e-14);
    assert!((r.p_out - 0.4).abs() < 1e-14);
}
