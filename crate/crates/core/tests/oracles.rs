use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qsep_core::bloch::{bloch_distance_pair, density_to_bloch, sep_set_geometry, BlochVector, GeneratorBasis};
use qsep_core::graphs::{Answer, CliqueInstance, Graph};
use qsep_core::linalg::{c, CVector};
use qsep_core::oracles::{
    eval_g_for_clique, motzkin_straus_closed_form, motzkin_straus_max, ppt_test, seesaw_product_max,
    wmem_ppt_oracle, wopt_via_membership, MembershipBudget, MembershipVerdict, OptimizerConfig, PptOracle,
};
use qsep_core::random::{random_density, random_pure_product, random_separable, rng_for};
use qsep_core::reduction::clique_to_wopt;
use qsep_core::{Error, HermitianOperator};

fn phi_plus() -> HermitianOperator {
    let s = 0.5f64.sqrt();
    HermitianOperator::pure(&CVector::from_vec(vec![c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]))
}

#[test]
fn separable_mixtures_pass_ppt() {
    let mut rng = rng_for(11, 0);
    for (m, n) in [(2, 2), (2, 3)] {
        for _ in 0..1000 {
            let rho = random_separable(m, n, 4, &mut rng);
            let v = ppt_test(&rho, m, n).unwrap();
            assert!(v.passes, "separable mixture failed PPT with {}", v.min_pt_eigenvalue);
        }
    }
}

#[test]
fn ppt_examples() {
    let mixed = ppt_test(&HermitianOperator::maximally_mixed(4), 2, 2).unwrap();
    assert!(mixed.passes);
    assert_abs_diff_eq!(mixed.min_pt_eigenvalue, 0.25, epsilon = 1e-12);
    let bell = ppt_test(&phi_plus(), 2, 2).unwrap();
    assert!(!bell.passes);
    assert_abs_diff_eq!(bell.min_pt_eigenvalue, -0.5, epsilon = 1e-12);
}

#[test]
fn weak_membership_examples() {
    let basis = GeneratorBasis::structured(4).unwrap();
    assert_eq!(wmem_ppt_oracle(&BlochVector::zeros(4), 0.05, 2, 2).unwrap(), Answer::Yes);
    let bell = density_to_bloch(&phi_plus(), &basis).unwrap();
    assert_eq!(wmem_ppt_oracle(&bell, 0.01, 2, 2).unwrap(), Answer::No);
    let far = BlochVector::new(4, (0..15).map(|i| if i == 0 { 2.0 } else { 0.0 }).collect()).unwrap();
    assert_eq!(wmem_ppt_oracle(&far, 0.01, 2, 2).unwrap(), Answer::No);
    assert!(matches!(PptOracle::new(3, 3, 0.01), Err(Error::Unsupported(_))));
}

#[test]
fn geometry_examples() {
    let g = sep_set_geometry(2, 2).unwrap();
    assert_abs_diff_eq!(g.outer_radius, 1.5f64.sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(g.inner_radius, (1.0f64 / 6.0).sqrt(), epsilon = 1e-15);
    assert_eq!(g.m, 15);
    let g = sep_set_geometry(2, 3).unwrap();
    assert_abs_diff_eq!(g.outer_radius, (5.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    assert_abs_diff_eq!(g.inner_radius, (1.0f64 / 15.0).sqrt(), epsilon = 1e-15);
    assert_eq!(g.m, 35);
}

#[test]
fn motzkin_straus_examples() {
    let cfg = OptimizerConfig::default();
    assert_abs_diff_eq!(motzkin_straus_max(&Graph::complete(3), &cfg).unwrap().value, 1.0 / 3.0, epsilon = 1e-9);
    assert_abs_diff_eq!(motzkin_straus_max(&Graph::complete(2), &cfg).unwrap().value, 0.25, epsilon = 1e-9);
    assert_eq!(motzkin_straus_max(&Graph::empty(4), &cfg).unwrap().value, 0.0);
    assert_eq!(motzkin_straus_closed_form(1), 0.0);
}

#[test]
fn sphere_and_product_maxima_agree_on_small_gadgets() {
    let cfg = OptimizerConfig::default();
    for (g, c) in [(Graph::complete(2), 2), (Graph::complete(3), 3), (Graph::path(3), 2)] {
        let g_val = eval_g_for_clique(&g, &cfg).unwrap().value;
        let (_, w) = clique_to_wopt(&CliqueInstance::new(g.clone(), c).unwrap(), None).unwrap();
        let op = w.c_matrix.as_ref().unwrap();
        let seesaw = seesaw_product_max(op, w.m_dim, w.n_dim, &[], &cfg).unwrap();
        assert_abs_diff_eq!(seesaw.value, g_val.sqrt(), epsilon = 1e-6);
    }
}

#[test]
fn membership_search_examples() {
    let budget = MembershipBudget::default();
    let oracle = PptOracle::new(2, 2, 1e-3).unwrap();
    let mut rng = rng_for(5, 1);
    let product = random_pure_product(2, 2, &mut rng);
    let op = HermitianOperator::from_hermitian_part(product.matrix());
    let mut w = qsep_core::reduction::WoptInstance::from_objective(&op, 2, 2, 0.1, 0.02).unwrap();
    let out = wopt_via_membership(&w, &oracle, &budget).unwrap();
    assert_eq!(out.verdict, MembershipVerdict::Yes);

    w.gamma = 2.0;
    let out = wopt_via_membership(&w, &oracle, &budget).unwrap();
    assert_eq!(out.verdict, MembershipVerdict::No);
    assert_eq!(out.queries, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bloch_distance_factor(seed in any::<u64>(), d in 2usize..=6) {
        let basis = GeneratorBasis::structured(d).unwrap();
        let mut rng = rng_for(seed, 0);
        let a = random_density(d, d, &mut rng);
        let b = random_density(d, 1, &mut rng);
        let (frob, bloch) = bloch_distance_pair(&a, &b, &basis).unwrap();
        prop_assert!((bloch - 2f64.sqrt() * frob).abs() <= 1e-12);
    }

    #[test]
    fn product_states_pass_ppt(seed in any::<u64>(), m in 2usize..=3, n in 2usize..=3) {
        let mut rng = rng_for(seed, 0);
        let rho = random_pure_product(m, n, &mut rng);
        prop_assert!(ppt_test(&rho, m, n).unwrap().passes);
    }
}
