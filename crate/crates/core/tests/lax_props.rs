use calogero::laxdyn::{
    build_lax, integrate, noether_spectrum, trace_integrals, trace_p3_explicit, PhasePoint,
};
use proptest::prelude::*;

fn phase_point(n: usize) -> impl Strategy<Value = PhasePoint> {
    (
        -3.0f64..3.0,
        prop::collection::vec(0.3f64..2.0, n - 1),
        prop::collection::vec(-2.0f64..2.0, n),
    )
        .prop_map(|(start, gaps, p)| {
            let mut x = vec![start];
            for g in gaps {
                x.push(x.last().unwrap() + g);
            }
            PhasePoint::unit_coupling(x, p)
        })
}

#[test]
fn second_trace_is_the_hamiltonian() {
    let s = PhasePoint::unit_coupling(vec![0.0, 1.0, 3.0], vec![1.0, 0.0, -1.0]);
    let i = trace_integrals(&s, 2).unwrap();
    assert_eq!(i[0], 0.0);
    let direct = 2.0 + 2.0 * (1.0 + 1.0 / 9.0 + 1.0 / 4.0);
    assert!((i[1] - direct).abs() < 1e-14);
    assert!((i[1] - 2.0 * s.energy()).abs() < 1e-14);
}

#[test]
fn noether_spectrum_up_to_eight() {
    for n in 2..=8usize {
        assert_eq!(
            noether_spectrum(n).unwrap(),
            vec![(1, n - 1), (1 - n as i64, 1)]
        );
    }
    assert!(noether_spectrum(1).is_err());
}

#[test]
fn unordered_start_is_rejected() {
    let s = PhasePoint::unit_coupling(vec![1.0, 0.0], vec![0.0, 0.0]);
    assert!(integrate(&s, 1.0, 1e-3, 1).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn explicit_cubic_trace_matches_matrix(s in (2usize..=5).prop_flat_map(phase_point)) {
        let m = trace_integrals(&s, 3).unwrap()[2];
        prop_assert!((trace_p3_explicit(&s) - m).abs() <= 1e-12 * m.abs().max(1.0));
    }

    #[test]
    fn lax_is_hermitian(s in (2usize..=5).prop_flat_map(phase_point)) {
        let lax = build_lax(&s).unwrap();
        prop_assert_eq!(lax.adjoint(), lax);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn traces_conserved_along_trajectories(s in phase_point(3)) {
        let tr = integrate(&s, 1.0, 1e-3, 100).unwrap();
        for sample in &tr.samples {
            let lax = build_lax(&PhasePoint::unit_coupling(sample.x.clone(), sample.p.clone())).unwrap();
            prop_assert_eq!(lax.adjoint(), lax);
        }
        prop_assert!(tr.drift.traces.iter().all(|&d| d < 1e-7), "{:?}", tr.drift);
    }
}
