//! The face poset of a Leontief representation and its product encoding
//! `B_d × Sp_{n_1-1} × ... × Sp_{n_s-1}`.
//!
//! cargo run --example face_lattice

use toric_orbits::poset::face_type_census;
use toric_orbits::{
    classify_structural, face_leontief_type, face_poset, poset_cardinality,
    product_structure_check, WeightSystem,
};

fn main() {
    let ws = WeightSystem::leontief_model(1, &[3], 0);
    let lt = classify_structural(&ws).unwrap().leontief.unwrap();
    let poset = face_poset(&ws).unwrap();
    let iso = product_structure_check(&ws, &lt).unwrap();

    println!("weights {:?}", ws.weights());
    println!(
        "{} faces, product formula gives {}",
        poset.len(),
        poset_cardinality(&lt)
    );
    println!("{:>4}  {:<12} {:<20} face type", "rank", "flat", "string");
    for (i, flat) in poset.elements.iter().enumerate() {
        let face = face_leontief_type(&ws, &lt, flat).unwrap();
        println!(
            "{:>4}  {:<12} {:<20} d = {}, blocks = {:?}",
            poset.ranks[i],
            format!("{flat:?}"),
            format!("{:?}", iso.strings[i]),
            face.d,
            face.blocks
        );
    }

    println!("\nface types of (2, {{2, 3}}, 0):");
    let ws = WeightSystem::leontief_model(2, &[2, 3], 0);
    let lt = classify_structural(&ws).unwrap().leontief.unwrap();
    for ((d, blocks, l), count) in face_type_census(&ws, &lt).unwrap() {
        println!("  {count:>3} x (d = {d}, blocks = {blocks:?}, l = {l})");
    }
}
