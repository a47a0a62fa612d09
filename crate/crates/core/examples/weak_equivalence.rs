//! Weakly equivalent representations differ by a unimodular change of the
//! lattice basis. Everything the crate computes is invariant under it.
//!
//! cargo run --example weak_equivalence

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toric_orbits::verify::{random_system, random_unimodular};
use toric_orbits::{
    classify_structural, complexity, face_poset, independence_complex, snf_canonical_form,
    WeightSystem,
};

fn fingerprint(ws: &WeightSystem) -> String {
    let v = classify_structural(ws).unwrap();
    let signature = v.leontief.as_ref().map(|lt| lt.signature());
    let faces = face_poset(ws).unwrap().len();
    let betti: Vec<usize> = independence_complex(ws)
        .unwrap()
        .reduced_homology()
        .iter()
        .map(|g| g.free_rank)
        .collect();
    format!(
        "{} dim {}, type {signature:?}, complexity {}, {faces} faces, betti {betti:?}",
        v.kind,
        v.model_dim,
        complexity(ws)
    )
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..5 {
        let ws = random_system(&mut rng, 3, 5, 2);
        let u = random_unimodular(&mut rng, ws.lattice_rank(), 6);
        let moved = ws.transformed(&u).unwrap();
        println!("{:?}", ws.weights());
        println!("  -> {:?}", moved.weights());
        let (a, b) = (fingerprint(&ws), fingerprint(&moved));
        assert_eq!(a, b);
        println!("  {a}");
    }

    // In complexity zero the invariant factors pin down the system.
    let a = WeightSystem::new(2, vec![vec![2, 0], vec![0, 3]], 0).unwrap();
    let b = WeightSystem::new(2, vec![vec![1, 0], vec![0, 6]], 0).unwrap();
    let c = WeightSystem::new(2, vec![vec![1, 1], vec![1, -1]], 0).unwrap();
    for ws in [&a, &b, &c] {
        println!("{:?}: {:?}", ws.weights(), snf_canonical_form(ws).unwrap());
    }
}
