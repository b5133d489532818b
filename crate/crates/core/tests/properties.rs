use mquant_core::bounds;
use mquant_core::metrics;
use mquant_core::{
    bound_report, informational_divergence, make_target, oracle_min, prefix_allocation,
    quantize_id, quantize_vd, variational_distance, Criterion, MTypeApprox, Method, Target,
};
use proptest::prelude::*;

fn weights(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![1e-4..1.0f64, (1u32..=6).prop_map(f64::from), Just(0.0),],
        1..=max_len,
    )
    .prop_filter("some mass", |v| v.iter().any(|&x| x > 0.0))
}

fn target(max_len: usize) -> impl Strategy<Value = Target> {
    weights(max_len).prop_map(|v| make_target(&v, true).unwrap())
}

fn d(p: &MTypeApprox, t: &Target) -> f64 {
    informational_divergence(p, t).unwrap().nats()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn both_match_exhaustive_search(t in target(5), m in 1u64..=9) {
        let vd = quantize_vd(&t, m).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        let (_, best_vd) = oracle_min(&t, m, Criterion::Vd).unwrap();
        let (_, best_id) = oracle_min(&t, m, Criterion::Id).unwrap();
        prop_assert!((variational_distance(&vd, &t).unwrap() - best_vd).abs() <= 1e-12);
        prop_assert!((d(&id, &t) - best_id).abs() <= 1e-12);
    }

    #[test]
    fn each_method_wins_its_own_criterion(t in target(40), m in 1u64..=300) {
        let vd = quantize_vd(&t, m).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        prop_assert!(d(&id, &t) <= d(&vd, &t) + 1e-12);
        prop_assert!(variational_distance(&vd, &t).unwrap() <= variational_distance(&id, &t).unwrap() + 1e-12);
    }

    #[test]
    fn outputs_are_valid_prefix_supported_types(t in target(40), m in 1u64..=300) {
        let vd = quantize_vd(&t, m).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        for p in [&vd, &id] {
            prop_assert_eq!(p.counts().iter().sum::<u64>(), m);
            prop_assert!(p.check_against(&t).is_ok());
        }
        let expanded = t.expand_counts(vd.counts()).unwrap();
        prop_assert_eq!(expanded.len(), t.input_len());
        prop_assert_eq!(expanded.iter().sum::<u64>(), m);
    }

    #[test]
    fn elementwise_guarantees(t in target(40), m in 1u64..=300) {
        let vd = quantize_vd(&t, m).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        prop_assert!(bounds::check_elementwise(&vd, &t).unwrap().uniform);
        prop_assert!(bounds::check_elementwise(&id, &t).unwrap().ratio_bounded);
    }

    #[test]
    fn every_applicable_bound_holds(t in target(50), m in 1u64..=500) {
        let vd = quantize_vd(&t, m).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        let r = bound_report(&t, &vd, &id).unwrap();
        let bad: Vec<_> = r.violations().map(|e| e.name.clone()).collect();
        prop_assert!(bad.is_empty(), "violated {:?}", bad);
    }

    #[test]
    fn trace_prefixes_are_optimal(t in target(4), m in 1u64..=8) {
        let (full, trace) = quantize_id(&t, 8).unwrap();
        let p = prefix_allocation(&trace, m).unwrap();
        let (_, best) = oracle_min(&t, m, Criterion::Id).unwrap();
        prop_assert!((d(&p, &t) - best).abs() <= 1e-12);
        prop_assert_eq!(prefix_allocation(&trace, 8).unwrap(), full);
        // the greedy run at m reproduces the prefix exactly
        prop_assert_eq!(quantize_id(&t, m).unwrap().0, p);
    }

    #[test]
    fn quantizers_are_deterministic(v in weights(30), m in 1u64..=200) {
        let a = make_target(&v, true).unwrap();
        let b = make_target(&v, true).unwrap();
        prop_assert_eq!(quantize_vd(&a, m).unwrap(), quantize_vd(&b, m).unwrap());
        prop_assert_eq!(quantize_id(&a, m).unwrap().0, quantize_id(&b, m).unwrap().0);
    }

    #[test]
    fn metric_inequalities(v in weights(20), m in 1u64..=50) {
        let t = make_target(&v, true).unwrap();
        let (id, _) = quantize_id(&t, m).unwrap();
        let l1 = variational_distance(&id, &t).unwrap();
        let kl = d(&id, &t);
        prop_assert!(l1 <= 2.0 + 1e-12);
        prop_assert!(kl >= -1e-15);
        prop_assert!(l1 <= metrics::pinsker_floor(&id, &t).unwrap() + 1e-12);
        prop_assert!(kl <= metrics::reverse_pinsker_bound(&id, &t).unwrap() + 1e-12);
        prop_assert!(kl <= metrics::chi_square(&id, &t).unwrap().ln_1p() + 1e-12);
    }

    #[test]
    fn increment_costs_grow_with_count(t in 1e-6..1.0f64, k in 1u64..10_000) {
        let a = mquant_core::increment_cost(t, k).unwrap();
        let b = mquant_core::increment_cost(t, k + 1).unwrap();
        prop_assert!(a < b);
    }
}

#[test]
fn exact_representation_has_zero_error() {
    let t = make_target(&[0.5, 0.5], false).unwrap();
    let vd = quantize_vd(&t, 2).unwrap();
    let (id, _) = quantize_id(&t, 2).unwrap();
    assert_eq!(vd.counts(), &[1, 1]);
    assert_eq!(id.counts(), &[1, 1]);
    assert_eq!(variational_distance(&vd, &t).unwrap(), 0.0);
    assert_eq!(d(&id, &t), 0.0);
}

#[test]
fn distance_ties_resolve_to_lower_index() {
    let t = make_target(&[0.75, 0.25], false).unwrap();
    let vd = quantize_vd(&t, 2).unwrap();
    assert_eq!(vd.counts(), &[2, 0]);
    let (_, best) = oracle_min(&t, 2, Criterion::Vd).unwrap();
    assert!((best - 0.5).abs() < 1e-15);
    let other = MTypeApprox::new(2, vec![1, 1], Method::Vd).unwrap();
    assert!((variational_distance(&other, &t).unwrap() - 0.5).abs() < 1e-15);
}
