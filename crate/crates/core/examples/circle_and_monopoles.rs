//! Circle actions: quotients of `C^n` by `S^1`, the charge of fixed points
//! of circle actions on 4-manifolds, and the relation among the weights of a
//! general-position block.
//!
//! cargo run --example circle_and_monopoles

use toric_orbits::{circle_classify, fixed_point_charge, general_position_relation, WeightSystem};

fn main() {
    for exps in [
        vec![3],
        vec![1, 1],
        vec![2, -5],
        vec![1, 1, 1],
        vec![1, 2, 3, 4],
    ] {
        println!(
            "S^1 on C^{} with exponents {exps:?}: {:?}",
            exps.len(),
            circle_classify(&exps).unwrap()
        );
    }

    // Hopf action on C^2 = R^4: weights (1, 1) give a charge +, (1, -1) a charge -.
    for (k, l) in [(1, 1), (1, -1), (-1, -1), (1, 2)] {
        println!(
            "tangent weights ({k}, {l}): {:?}",
            fixed_point_charge(k, l).unwrap()
        );
    }

    let block = WeightSystem::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], 0).unwrap();
    let rel = general_position_relation(&block).unwrap();
    println!(
        "relation on {:?}: coefficients {:?}, flipped {:?}",
        block.weights(),
        rel.coefficients,
        rel.flipped
    );
    let block = WeightSystem::new(2, vec![vec![2, 1], vec![1, 3], vec![1, -1]], 0).unwrap();
    let rel = general_position_relation(&block).unwrap();
    println!(
        "relation on {:?}: coefficients {:?}, flipped {:?}",
        block.weights(),
        rel.coefficients,
        rel.flipped
    );
}
