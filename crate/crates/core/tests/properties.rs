use ergm_cluster::ensemble::{partition_normalized, ExactEnsemble};
use ergm_cluster::expansion::{kp_certify, optimal_m, region_bound, truncated_log_partition, TailBound};
use ergm_cluster::graph::site_count;
use ergm_cluster::{
    build_interaction, enumerate_graphs, hamiltonian, weighted_density, ErgmModel, Motif, ParameterVector,
    SpinConfiguration,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn three_motifs() -> Vec<Motif> {
    vec![Motif::edge(), Motif::two_star(), Motif::triangle()]
}

#[test]
fn norm_bound_over_seeded_beta_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..200 {
        let betas: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let n = rng.gen_range(3..=6);
        let model = ErgmModel::new(three_motifs(), ParameterVector(betas)).unwrap();
        let k = build_interaction(&model, n).unwrap();
        let bound = (model.m_max() * (model.m_max() - 1)) as f64 * model.betas().l1();
        assert!(k.banach_norm() <= bound * (1.0 + 1e-12), "{} > {bound}", k.banach_norm());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn hamiltonian_is_minus_n_squared_t(b1 in -1.0f64..1.0, b2 in -1.0f64..1.0, b3 in -1.0f64..1.0, n in 2usize..5) {
        let model = ErgmModel::new(three_motifs(), ParameterVector(vec![b1, b2, b3])).unwrap();
        let k = build_interaction(&model, n).unwrap();
        for g in enumerate_graphs(n).unwrap() {
            let h = hamiltonian(&k, &SpinConfiguration::from_graph(&g)).unwrap();
            let t = weighted_density(&model, &g);
            prop_assert!((h + (n * n) as f64 * t).abs() <= 1e-12);
        }
    }

    #[test]
    fn psi_is_convex_along_segments(
        a in proptest::collection::vec(-1.0f64..1.0, 3),
        b in proptest::collection::vec(-1.0f64..1.0, 3),
        n in 3usize..6,
    ) {
        let ens = ExactEnsemble::new(&three_motifs(), n).unwrap();
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let psi = |v: &[f64]| ens.psi_n(&ParameterVector(v.to_vec())).unwrap();
        prop_assert!(psi(&mid) <= 0.5 * (psi(&a) + psi(&b)) + 1e-12);
    }

    #[test]
    fn psi_gradient_is_expected_density(b in proptest::collection::vec(-1.0f64..1.0, 3), i in 0usize..3) {
        let ens = ExactEnsemble::new(&three_motifs(), 4).unwrap();
        let (fd, e) = ens.derivative_check(&ParameterVector(b), i, 1e-4).unwrap();
        prop_assert!((fd - e).abs() <= 1e-6, "{fd} vs {e}");
    }

    #[test]
    fn certified_gaps_respect_tail_bound(scale in 0.05f64..1.0, sign in prop::bool::ANY) {
        let m = optimal_m(2).unwrap();
        let beta = scale * region_bound(2, 3, m).unwrap() * if sign { 1.0 } else { -1.0 };
        let k = build_interaction(&ErgmModel::single(Motif::two_star(), beta).unwrap(), 4).unwrap();
        prop_assert!(kp_certify(&k, m, 3).unwrap().passed());
        let exact = partition_normalized(&k).unwrap();
        let tail = TailBound::new(2, k.banach_norm(), m).unwrap();
        for t in truncated_log_partition(&k, 3, 3).unwrap().orders {
            prop_assert!((t.partial_sum - exact).abs() <= site_count(4) as f64 * tail.tail(t.order));
        }
    }
}
