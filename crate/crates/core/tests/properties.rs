use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_orbits::verify::{compare_routes, random_unimodular, Fault};
use toric_orbits::weights::weights_from_json;
use toric_orbits::{
    classify_structural, complexity, effective_reduction, face_poset, independence_complex,
    parse_weights, poset_cardinality, snf_canonical_form, IntMatrix, VerdictKind, WeightSystem,
};

fn weight_system() -> impl Strategy<Value = WeightSystem> {
    (1usize..=3, 0usize..=2).prop_flat_map(|(k, l)| {
        prop::collection::vec(prop::collection::vec(-3i64..=3, k), 0..=6)
            .prop_map(move |w| WeightSystem::new(k, w, l).unwrap())
    })
}

fn leontief_type() -> impl Strategy<Value = (usize, Vec<usize>, usize)> {
    (
        0usize..=2,
        prop::collection::vec(2usize..=4, 0..=2),
        0usize..=2,
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routes_agree(ws in weight_system()) {
        let agreement = compare_routes(&ws, Fault::None);
        prop_assert!(agreement.is_ok(), "{:?}", agreement);
    }

    #[test]
    fn complexity_is_weak_equivalence_invariant(ws in weight_system(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(&mut rng, ws.lattice_rank(), 6);
        let moved = ws.transformed(&u).unwrap();
        prop_assert_eq!(complexity(&ws), complexity(&moved));
        let a = classify_structural(&ws).unwrap();
        let b = classify_structural(&moved).unwrap();
        prop_assert_eq!(a.kind, b.kind);
        prop_assert_eq!(a.model_dim, b.model_dim);
    }

    #[test]
    fn reduction_keeps_complexity_and_trivial_part(ws in weight_system()) {
        let (reduced, report) = effective_reduction(&ws);
        prop_assert!(reduced.is_effective());
        prop_assert_eq!(complexity(&reduced), complexity(&ws));
        prop_assert_eq!(reduced.trivial_dim(), ws.trivial_dim());
        prop_assert_eq!(report.effective_rank, ws.rank());
    }

    #[test]
    fn json_round_trip(ws in weight_system()) {
        let back = weights_from_json(&ws.to_json()).unwrap();
        prop_assert_eq!(back, ws.clone());
        let text = serde_json::to_string(&ws.to_json()).unwrap();
        prop_assert_eq!(parse_weights(&text).unwrap(), ws);
    }

    #[test]
    fn matroid_complexes_are_torsion_free(ws in weight_system()) {
        let k = independence_complex(&ws).unwrap();
        let top = ws.rank() as isize - 1;
        for g in k.reduced_homology() {
            prop_assert!(g.torsion.is_empty());
            prop_assert!(g.free_rank == 0 || g.degree == top);
        }
    }

    #[test]
    fn leontief_models_round_trip((d, blocks, l) in leontief_type()) {
        let ws = WeightSystem::leontief_model(d, &blocks, l);
        let v = classify_structural(&ws).unwrap();
        let lt = v.leontief.unwrap();
        let mut sorted = blocks.clone();
        sorted.sort_unstable();
        prop_assert_eq!(lt.signature(), (d, sorted, l));
        let expected = if d == 0 { VerdictKind::ClosedManifold } else { VerdictKind::ManifoldWithBoundary };
        prop_assert_eq!(v.kind, expected);
        prop_assert_eq!(v.model_dim, l + d + blocks.iter().map(|n| n + 1).sum::<usize>());
        prop_assert_eq!(face_poset(&ws).unwrap().len() as u128, poset_cardinality(&lt));
    }

    #[test]
    fn snf_form_multiplies_to_the_index(a in 1i64..=12, b in 1i64..=12) {
        // Diagonal weights (a, 0), (0, b) span a sublattice of index a·b.
        let ws = WeightSystem::new(2, vec![vec![a, 0], vec![0, b]], 0).unwrap();
        let form = snf_canonical_form(&ws).unwrap();
        prop_assert_eq!(&form[0] * &form[1], (a * b).into());
        prop_assert!((&form[1] % &form[0]) == 0.into());
    }
}

#[test]
fn unimodular_generator_is_unimodular() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..=5 {
        let u: IntMatrix = random_unimodular(&mut rng, k, 10);
        assert!(u.is_unimodular());
    }
}
