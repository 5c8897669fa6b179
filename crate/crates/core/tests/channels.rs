use proptest::prelude::*;
use qsep_core::eb::{
    condition_number, ebp_reduce, fano_decode, fano_encode, jamiolkowski, kappa_bound, kraus_from_choi,
    marker_map_phi, ChoiOperator, KrausSet,
};
use qsep_core::linalg::{c, matrix_unit, max_abs_diff, partial_trace_first, CMatrix};
use qsep_core::oracles::ppt_test;
use qsep_core::random::{random_density, random_kraus_tp, rng_for};
use qsep_core::HermitianOperator;

fn choi_of(kraus: &[CMatrix]) -> ChoiOperator {
    ChoiOperator::from_kraus(&KrausSet::new(kraus.to_vec()).unwrap()).unwrap()
}

#[test]
fn sub_normalized_kraus_set_is_not_trace_preserving() {
    let mut rng = rng_for(3, 0);
    let ks: Vec<CMatrix> = random_kraus_tp(2, 3, 3, &mut rng).into_iter().map(|k| k * c(0.9, 0.0)).collect();
    let choi = choi_of(&ks);
    assert!(choi.cp);
    assert!(!choi.tp);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_channels_are_cp_tp_and_round_trip(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=3, count in 2usize..=4) {
        let mut rng = rng_for(seed, 0);
        let ks = random_kraus_tp(m, n, count.max(n.div_ceil(m)), &mut rng);
        let choi = choi_of(&ks);
        prop_assert!(choi.cp && choi.tp);
        prop_assert!((choi.j.trace() - 1.0).abs() <= 1e-10);

        let rebuilt = kraus_from_choi(&choi).unwrap();
        prop_assert!(rebuilt.completeness_defect() <= 1e-9);
        let original = KrausSet::new(ks).unwrap();
        for k in 0..n {
            for l in 0..n {
                let e = matrix_unit(n, k, l);
                prop_assert!(max_abs_diff(&original.apply(&e), &rebuilt.apply(&e)) <= 1e-10);
            }
        }
        let via_choi = jamiolkowski(|x| choi.apply(x), m, n).unwrap();
        prop_assert!(max_abs_diff(via_choi.j.matrix(), choi.j.matrix()) <= 1e-12);

        let flat = fano_encode(&choi.j, m, n).unwrap();
        let back = fano_decode(&flat).unwrap();
        prop_assert!(back.max_abs_diff(&choi.j) <= 1e-12);
    }

    #[test]
    fn marker_map_conditioning_and_filter_output(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=5, rank in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let d = m * n;
        let rho = random_density(d, rank.min(d), &mut rng);
        let phi = marker_map_phi(&rho, m, n).unwrap();
        let kappa = condition_number(&reduced_b(&phi, 2 * m, n)).unwrap().kappa;
        prop_assert!(kappa <= kappa_bound(n) * (1.0 + 1e-9));
        prop_assert!(kappa_bound(n) <= 3.0);

        let out = ebp_reduce(&rho, m, n).unwrap();
        let reduced = partial_trace_first(out.matrix(), 2 * m, n);
        let target = CMatrix::identity(n, n) * c(1.0 / n as f64, 0.0);
        prop_assert!(max_abs_diff(&reduced, &target) <= 1e-10);
        prop_assert!(fano_encode(&out, 2 * m, n).is_ok());
    }

    #[test]
    fn ppt_status_survives_the_reduction(seed in any::<u64>(), rank in 1usize..=4) {
        let mut rng = rng_for(seed, 0);
        let rho = random_density(4, rank, &mut rng);
        let before = ppt_test(&rho, 2, 2).unwrap();
        let out = ebp_reduce(&rho, 2, 2).unwrap();
        let after = ppt_test(&out, 4, 2).unwrap();
        // Skip samples whose partial transpose sits at the tolerance edge.
        prop_assume!(before.min_pt_eigenvalue.abs() > 1e-7);
        prop_assert_eq!(before.passes, after.passes);
    }
}

fn reduced_b(op: &HermitianOperator, a: usize, b: usize) -> HermitianOperator {
    HermitianOperator::from_hermitian_part(&partial_trace_first(op.matrix(), a, b))
}
