//! Looks for nondegenerate Leontief systems where "bounded" and "the
//! restricted orbit space is a closed manifold" disagree. Known to hold for
//! block systems; here it is only probed on random instances.
//!
//! cargo run --release --example bridge_search -- [count] [seed]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toric_orbits::{
    check_leontief, classify_structural, enumerate_vertices, restrict_standard_weights,
    LeontiefStatus, LeontiefSystem, VerdictKind,
};

/// Columns with at most one positive entry, `b >= 0`.
fn random_leontief(rng: &mut impl Rng) -> LeontiefSystem {
    let rows = rng.gen_range(1..=3);
    let cols = rng.gen_range(rows..=6);
    let mut a = vec![vec![0i64; cols]; rows];
    for c in 0..cols {
        let producer = rng.gen_range(0..=rows);
        for (r, row) in a.iter_mut().enumerate() {
            row[c] = if r == producer {
                rng.gen_range(1..=2)
            } else if rng.gen_bool(0.3) {
                -rng.gen_range(1..=2)
            } else {
                0
            };
        }
    }
    let b: Vec<i64> = (0..rows).map(|_| rng.gen_range(0..=2)).collect();
    LeontiefSystem::from_ints(&a, cols, &b).expect("shapes agree")
}

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("numbers")).collect();
    let count = args.first().copied().unwrap_or(20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(args.get(1).copied().unwrap_or(0));

    let (mut tried, mut agree, mut disagree) = (0, 0, 0);
    while tried < count {
        let sys = random_leontief(&mut rng);
        let Ok(status @ (LeontiefStatus::Totally | LeontiefStatus::NonTotally)) = check_leontief(&sys) else {
            continue;
        };
        let poly = enumerate_vertices(&sys).unwrap();
        if !poly.simple {
            continue;
        }
        tried += 1;
        let verdict = classify_structural(&restrict_standard_weights(&sys)).unwrap();
        let expected = match status {
            LeontiefStatus::Totally => VerdictKind::ClosedManifold,
            _ => VerdictKind::ManifoldWithBoundary,
        };
        if verdict.kind == expected {
            agree += 1;
        } else {
            disagree += 1;
            if disagree <= 5 {
                println!("{} | {status:?} but {}", sys.to_json(), verdict.kind);
            }
        }
    }
    println!("{tried} nondegenerate systems: {agree} agree, {disagree} disagree");
}
