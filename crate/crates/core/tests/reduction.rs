use approx::assert_relative_eq;
use num_rational::Rational64;
use proptest::prelude::*;
use qsep_core::graphs::{parse_graph, CliqueInstance, Graph};
use qsep_core::reduction::io::{parse_document, InstanceDocument};
use qsep_core::reduction::{
    beta_formula, build_c_matrix, clique_thresholds, clique_to_rsdf, clique_to_wopt, epsilon_case2, sqrt_gap,
    worst_case_epsilon, worst_case_ln_beta, wopt_to_wmem_params, RsdfInstance, WmemParams, WoptInstance,
};
use qsep_core::Error;

fn k3() -> CliqueInstance {
    CliqueInstance::new(Graph::complete(3), 3).unwrap()
}

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}

#[test]
fn triangle_thresholds_and_matrices() {
    let rsdf = clique_to_rsdf(&k3()).unwrap();
    assert_eq!((rsdf.k(), rsdf.l()), (3, 3));
    assert_eq!(rsdf.zeta(), Rational64::new(7, 6));
    assert_eq!(rsdf.eta(), Rational64::new(1, 6));
    for b in rsdf.matrices() {
        assert!(b.is_symmetric());
        assert_eq!(b.nonzero_count(), 2);
    }
    assert_eq!(rsdf.delta_sq().unwrap(), Rational64::from_integer(12));
}

#[test]
fn single_edge_thresholds() {
    let inst = CliqueInstance::new(Graph::complete(2), 2).unwrap();
    let rsdf = clique_to_rsdf(&inst).unwrap();
    assert_eq!(rsdf.k(), 1);
    assert_eq!(rsdf.zeta(), Rational64::new(1, 2));
    assert_eq!(rsdf.eta(), Rational64::new(1, 2));
    let gadget = build_c_matrix(&rsdf, None).unwrap();
    assert_eq!((gadget.m_dim, gadget.n_dim), (2, 2));
    let ones = gadget.matrix.matrix().iter().filter(|z| (z.re - 1.0).abs() < 1e-15 && z.im == 0.0).count();
    let zeros = gadget.matrix.matrix().iter().filter(|z| z.norm() == 0.0).count();
    assert_eq!((ones, zeros), (4, 12));
}

#[test]
fn triangle_gadget_dimensions_and_norms() {
    let rsdf = clique_to_rsdf(&k3()).unwrap();
    let gadget = build_c_matrix(&rsdf, None).unwrap();
    assert_eq!((gadget.m_dim, gadget.n_dim), (4, 4));
    assert_relative_eq!(gadget.matrix.frobenius_norm(), 2.0 * 3f64.sqrt(), max_relative = 1e-15);

    let padded = build_c_matrix(&rsdf, Some(6)).unwrap();
    assert_eq!(padded.matrix.dim(), 24);
    assert_relative_eq!(padded.matrix.frobenius_norm(), 2.0 * 3f64.sqrt(), max_relative = 1e-15);
    assert!(build_c_matrix(&rsdf, Some(3)).is_err());
}

#[test]
fn triangle_wopt_goldens() {
    let (_, w) = clique_to_wopt(&k3(), None).unwrap();
    assert_eq!((w.m_dim, w.n_dim, w.m), (4, 4, 255));
    assert_relative_eq!(w.c_hat_norm, 6f64.sqrt(), max_relative = 1e-15);
    assert_relative_eq!(w.gamma, 0.4398264056274473496500551, max_relative = 1e-15);
    assert_relative_eq!(w.epsilon, 0.001045490179147250726207107, max_relative = 1e-14);
    let closed_gamma = ((4.0f64 / 3.0).sqrt() + 1.0) / (2.0 * 6f64.sqrt());
    let closed_eps = ((4.0f64 / 3.0).sqrt() - 1.0) / (60.0 * 6f64.sqrt() + 1.0);
    assert_relative_eq!(w.gamma, closed_gamma, max_relative = 1e-15);
    assert_relative_eq!(w.epsilon, closed_eps, max_relative = 1e-13);
}

#[test]
fn single_edge_wopt_goldens() {
    let inst = CliqueInstance::new(Graph::complete(2), 2).unwrap();
    let (_, w) = clique_to_wopt(&inst, None).unwrap();
    assert_relative_eq!(w.c_hat_norm, 2f64.sqrt(), max_relative = 1e-15);
    assert_relative_eq!(w.gamma, 0.3535533905932737622004222, max_relative = 1e-15);
    assert_relative_eq!(w.epsilon, 0.05564656009922348636104622, max_relative = 1e-14);
}

#[test]
fn reduction_refuses_degenerate_inputs() {
    let edgeless = CliqueInstance::new(Graph::empty(3), 2).unwrap();
    assert!(matches!(clique_to_rsdf(&edgeless), Err(Error::Degenerate(_))));
    assert!(clique_thresholds(1).is_err());
}

#[test]
fn dimacs_examples() {
    let g = parse_graph("p edge 3 3\ne 1 2\ne 2 3\ne 1 3\n").unwrap();
    assert_eq!(g.edge_count(), 3);
    assert_eq!(parse_graph("p edge 2 0\n").unwrap().edge_count(), 0);
    assert!(parse_graph("p edge 2 1\ne 1 1\n").is_err());
}

#[test]
fn beta_example_at_half() {
    let (r, big_r) = ((1.0f64 / 6.0).sqrt(), 1.5f64.sqrt());
    let by_hand = (1.0f64 / 6.0).powf(1.5) * 0.125
        / (8192.0 * 27.0 * 15f64.powi(5) * 2.25 * (big_r + r));
    assert_relative_eq!(beta_formula(r, big_r, 15, 0.5), by_hand, max_relative = 1e-14);
}

#[test]
fn worst_case_epsilon_and_beta_strictly_decrease() {
    let mut prev = (worst_case_epsilon(3).unwrap(), worst_case_ln_beta(3).unwrap());
    for n in 4..=200 {
        let next = (worst_case_epsilon(n).unwrap(), worst_case_ln_beta(n).unwrap());
        assert!(next.0 < prev.0, "ε did not decrease at n = {n}");
        assert!(next.1 < prev.1, "β did not decrease at n = {n}");
        prev = next;
    }
}

#[test]
fn documents_round_trip() {
    let inst = k3();
    let (rsdf, w) = clique_to_wopt(&inst, None).unwrap();
    let params = wopt_to_wmem_params(&w).unwrap();

    let text = InstanceDocument::Rsdf(rsdf.to_document(None)).to_json().unwrap();
    let InstanceDocument::Rsdf(doc) = parse_document(&text).unwrap() else { panic!("wrong kind") };
    assert_eq!(RsdfInstance::from_document(&doc).unwrap(), rsdf);

    let text = InstanceDocument::Wopt(w.to_document(true)).to_json().unwrap();
    let InstanceDocument::Wopt(doc) = parse_document(&text).unwrap() else { panic!("wrong kind") };
    assert_eq!(WoptInstance::from_document(&doc).unwrap(), w);

    let text = InstanceDocument::WmemParams(params.to_document()).to_json().unwrap();
    let InstanceDocument::WmemParams(doc) = parse_document(&text).unwrap() else { panic!("wrong kind") };
    assert_eq!(WmemParams::from_document(&doc).unwrap(), params);
}

#[test]
fn unknown_schema_version_is_rejected() {
    let (rsdf, _) = clique_to_wopt(&k3(), None).unwrap();
    let text = InstanceDocument::Rsdf(rsdf.to_document(None)).to_json().unwrap();
    let bumped = text.replace("\"schema_version\": 1", "\"schema_version\": 2");
    assert!(matches!(parse_document(&bumped), Err(Error::Unsupported(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipeline_invariants(n in 2usize..=6, mask in any::<u32>(), c_pick in 0usize..6) {
        let g = graph_from_mask(n, mask);
        prop_assume!(g.edge_count() > 0);
        let c = 2 + c_pick % (n - 1);
        let (rsdf, w) = clique_to_wopt(&CliqueInstance::new(g.clone(), c).unwrap(), None).unwrap();

        let c_norm = w.c.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((c_norm - 1.0).abs() <= 1e-12);
        prop_assert!((w.c_hat_norm - (2.0 * g.edge_count() as f64).sqrt()).abs() <= 1e-10);
        let fro = w.c_matrix.as_ref().unwrap().frobenius_norm();
        prop_assert!((fro - rsdf.delta().unwrap()).abs() <= 1e-12);

        let (zeta, eta) = (w.exact.unwrap().zeta, w.exact.unwrap().eta);
        let gap = sqrt_gap(*zeta.numer() as f64 / *zeta.denom() as f64, *eta.numer() as f64 / *eta.denom() as f64);
        prop_assert!(w.epsilon > 0.0);
        prop_assert!(w.epsilon < epsilon_case2(gap, w.c_hat_norm));

        let params = wopt_to_wmem_params(&w).unwrap();
        prop_assert!(params.beta > 0.0 && params.beta < w.epsilon);
    }

    #[test]
    fn beta_is_cubic_in_epsilon(m_dim in 2usize..40, n_dim in 2usize..40, eps in 1e-9f64..0.9) {
        let d = (m_dim * n_dim) as f64;
        let r = (2.0 / (d * (d - 1.0))).sqrt();
        let big_r = (2.0 * (d - 1.0) / d).sqrt();
        let m = m_dim * m_dim * n_dim * n_dim - 1;
        let full = beta_formula(r, big_r, m, eps);
        let half = beta_formula(r, big_r, m, eps / 2.0);
        prop_assert!((half * 8.0 - full).abs() <= 1e-15 * full);
    }
}
