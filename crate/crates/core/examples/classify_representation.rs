//! Decides whether `V/T` is a closed manifold, a manifold with boundary, or
//! neither, for a handful of representations.
//!
//! cargo run --example classify_representation

use toric_orbits::{classify_pseudomanifold, classify_structural, WeightSystem};

fn show(name: &str, ws: &WeightSystem) {
    let structural = classify_structural(ws).expect("valid system");
    let pseudo = classify_pseudomanifold(ws).expect("valid system");
    assert_eq!(structural.kind, pseudo.kind);
    assert_eq!(structural.model_dim, pseudo.model_dim);

    println!("{name}");
    println!("  {}", structural.model());
    if let Some(lt) = &structural.leontief {
        println!(
            "  Leontief type: d = {}, blocks = {:?}, l = {}",
            lt.d, lt.blocks, lt.l
        );
    }
    if let Some(w) = &pseudo.witness {
        println!(
            "  ridge {:?} of K(α) lies in {} facets; flat {:?}",
            w.ridge, w.facet_count, w.flat
        );
    }
}

fn main() {
    let ws = |k: usize, w: &[&[i64]], l: usize| {
        WeightSystem::new(k, w.iter().map(|v| v.to_vec()).collect(), l).unwrap()
    };

    show(
        "T^2 on C^3 in general position",
        &ws(2, &[&[1, 0], &[0, 1], &[1, 1]], 0),
    );
    show("T^2 on C^2, standard", &ws(2, &[&[1, 0], &[0, 1]], 0));
    show(
        "T^2 on C^2 x C x R",
        &ws(2, &[&[1, 0], &[0, 1], &[1, 0]], 1),
    );
    show(
        "T^1 on C^3 with exponents 1, 2, 3",
        &ws(1, &[&[1], &[2], &[3]], 0),
    );
    show(
        "four weights of T^2, no three dependent",
        &ws(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]], 0),
    );
    // Not effective: the second coordinate acts trivially.
    show(
        "T^2 acting through a circle",
        &ws(2, &[&[1, 0], &[-1, 0]], 0),
    );
    show(
        "type (1, {3}, 2)",
        &WeightSystem::leontief_model(1, &[3], 2),
    );
}
