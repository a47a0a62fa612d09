//! Smith normal form with transforms, effective reduction, and the
//! weak-equivalence invariant of complexity-zero systems.
//!
//! cargo run --example smith_canonical_form

use toric_orbits::linalg::smith_normal_form;
use toric_orbits::{effective_reduction, snf_canonical_form, IntMatrix, WeightSystem};

fn print_matrix(name: &str, m: &IntMatrix) {
    println!("{name} =");
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:>4}")).collect();
        println!("  [{}]", cells.join(""));
    }
}

fn main() {
    let m =
        IntMatrix::from_rows(&[vec![2i64, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap();
    let snf = smith_normal_form(&m);
    print_matrix("M", &m);
    print_matrix("U", &snf.u);
    print_matrix("V", &snf.v);
    print_matrix("D = U·M·V", &snf.d);
    assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.d);
    println!("invariant factors {:?}\n", snf.invariant_factors());

    // Weights (2,0) and (0,3) generate a sublattice of index 6.
    let ws = WeightSystem::new(2, vec![vec![2, 0], vec![0, 3]], 0).unwrap();
    println!(
        "snf_canonical_form of {{(2,0), (0,3)}}: {:?}",
        snf_canonical_form(&ws).unwrap()
    );
    let ws = WeightSystem::new(2, vec![vec![1, 1], vec![1, -1]], 0).unwrap();
    println!(
        "snf_canonical_form of {{(1,1), (1,-1)}}: {:?}",
        snf_canonical_form(&ws).unwrap()
    );

    let ws = WeightSystem::new(3, vec![vec![1, 1, 0], vec![2, 2, 0], vec![1, 1, 0]], 1).unwrap();
    let (reduced, report) = effective_reduction(&ws);
    println!(
        "\nT^3 with weights spanning a line: kernel of dimension {}, reduced to T^{} with weights {:?}",
        report.kernel_dim,
        reduced.lattice_rank(),
        reduced.weights()
    );
}
