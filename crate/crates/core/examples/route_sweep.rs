//! Cross-checks the two classification routes over every small weight system.
//!
//! cargo run --release --example route_sweep -- [max_k] [max_r] [bound]

use std::time::Instant;

use toric_orbits::verify::{exhaustive_sweep, Fault};

fn main() {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("numeric arguments"))
        .collect();
    let max_k = args.first().copied().unwrap_or(3);
    let max_r = args.get(1).copied().unwrap_or(6);
    let bound = args.get(2).copied().unwrap_or(2) as i64;

    let start = Instant::now();
    let report = exhaustive_sweep(max_k, max_r, bound, None, Fault::None);
    println!(
        "k <= {max_k}, r <= {max_r}, entries in [-{bound}, {bound}]: {} effective orbit representatives",
        report.systems
    );
    println!(
        "  closed {}, with boundary {}, not a manifold {}",
        report.closed, report.with_boundary, report.not_manifold
    );
    println!("  route mismatches: {}", report.mismatches.len());
    for m in report.mismatches.iter().take(5) {
        println!(
            "    {} | {} vs {}",
            m.system, m.structural, m.pseudomanifold
        );
    }
    println!("  {:.1}s", start.elapsed().as_secs_f64());
}
