//! Reduced homology of independence complexes. Matroid complexes are wedges
//! of spheres of dimension `k - 1`; the count depends on the verdict.
//!
//! cargo run --example independence_homology

use toric_orbits::{classify_structural, independence_complex, SimplicialComplex, WeightSystem};

fn describe(k: &SimplicialComplex) -> String {
    let parts: Vec<String> = k
        .reduced_homology()
        .iter()
        .filter(|g| !g.is_trivial())
        .map(|g| {
            let mut s = format!("H~_{} = Z^{}", g.degree, g.free_rank);
            for t in &g.torsion {
                s.push_str(&format!(" + Z/{t}"));
            }
            s
        })
        .collect();
    if parts.is_empty() {
        "acyclic".into()
    } else {
        parts.join(", ")
    }
}

fn main() {
    let systems = [
        (
            "T^2 on C^3",
            WeightSystem::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]], 0),
        ),
        (
            "T^2 on C^2",
            WeightSystem::new(2, vec![vec![1, 0], vec![0, 1]], 0),
        ),
        (
            "U(2,4)",
            WeightSystem::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]], 0),
        ),
        (
            "T^1, three weights",
            WeightSystem::new(1, vec![vec![1], vec![2], vec![3]], 0),
        ),
        (
            "T^3, two triangles glued",
            WeightSystem::new(
                3,
                vec![
                    vec![1, 0, 0],
                    vec![0, 1, 0],
                    vec![1, 1, 0],
                    vec![0, 0, 1],
                    vec![1, 0, 1],
                ],
                0,
            ),
        ),
    ];
    for (name, ws) in systems {
        let ws = ws.unwrap();
        let k = independence_complex(&ws).unwrap();
        let verdict = classify_structural(&ws).unwrap();
        println!(
            "{name}: {} facets of dimension {}",
            k.facets().len(),
            k.dim()
        );
        println!("  {}", describe(&k));
        println!("  minimal non-faces {:?}", k.minimal_non_faces());
        println!("  {}", verdict.kind);
    }

    let sphere = SimplicialComplex::boundary_of_simplex(&[0, 1, 2])
        .unwrap()
        .join(&SimplicialComplex::boundary_of_simplex(&[3, 4]).unwrap())
        .unwrap();
    println!("∂Δ² * ∂Δ¹: {}", describe(&sphere));
}
