//! Leontief substitution systems `Ax = b, x >= 0`: vertices, boundedness,
//! the nerve of the facets, and the torus representation they define.
//!
//! cargo run --example leontief_polyhedra

use toric_orbits::leontief::vertex_to_json;
use toric_orbits::{
    block_system, check_leontief, classify_structural, enumerate_vertices, nerve_complex,
    restrict_standard_weights, LeontiefSystem,
};

fn report(name: &str, sys: &LeontiefSystem) {
    let status = check_leontief(sys).unwrap();
    let poly = enumerate_vertices(sys).unwrap();
    println!(
        "{name}: {status:?}, dim {:?}, simple {}",
        poly.dim, poly.simple
    );
    for v in &poly.vertices {
        println!("  vertex {}", vertex_to_json(v));
    }
    match nerve_complex(sys) {
        Ok(nerve) => println!("  nerve facets {:?}", nerve.facets()),
        Err(e) => println!("  no nerve: {e}"),
    }
    let ws = restrict_standard_weights(sys);
    let verdict = classify_structural(&ws).unwrap();
    println!(
        "  restricted weights {:?}: {}",
        ws.weights(),
        verdict.model()
    );
}

fn main() {
    // Δ² × Δ¹
    report("blocks [3, 2]", &block_system(&[3, 2], 0).unwrap());
    // Δ¹ × R_{>=0}
    report(
        "blocks [2] with a free column",
        &block_system(&[2], 1).unwrap(),
    );

    // Column 2 feeds row 0 from row 1.
    let sys = LeontiefSystem::from_ints(&[vec![1, 1, -1], vec![0, 0, 1]], 3, &[0, 1]).unwrap();
    report("a two-stage system", &sys);

    // Degenerate: one vertex lies on three facets of a polygon.
    let sys =
        LeontiefSystem::from_ints(&[vec![1, 1, 0, 0], vec![0, -1, 1, 1]], 4, &[1, 0]).unwrap();
    report("a degenerate system", &sys);

    let sys = LeontiefSystem::from_ints(&[vec![1, 1]], 2, &[-1]).unwrap();
    println!(
        "negative right-hand side: {:?}",
        check_leontief(&sys).unwrap()
    );
}
