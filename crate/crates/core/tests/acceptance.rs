//! Acceptance run. Prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_orbits::linalg::smith_normal_form;
use toric_orbits::verify::{
    exhaustive_sweep, random_matrix, random_sweep, random_system, random_unimodular, Fault,
    OrbitSweep,
};
use toric_orbits::{
    block_system, check_leontief, circle_classify, classify_pseudomanifold, classify_structural,
    enumerate_vertices, face_leontief_type, face_poset, independence_complex, nerve_complex,
    poset_cardinality, product_structure_check, restrict_standard_weights, snf_canonical_form,
    CircleQuotient, IntMatrix, LeontiefStatus, SimplicialComplex, VerdictKind, WeightSystem,
};

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// Fraction-free determinant, exact for the small entries used here.
fn det(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for j in c + 1..n {
                m[r][j] = (m[r][j] * m[c][c] - m[r][c] * m[c][j]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    sign * m[n - 1][n - 1]
}

fn small_rows(ws: &WeightSystem) -> Vec<Vec<i128>> {
    ws.weights()
        .iter()
        .map(|w| {
            w.iter()
                .map(|x| x.to_i128().expect("small entries"))
                .collect()
        })
        .collect()
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Bases of an effective system: `k`-subsets with nonzero determinant.
fn bases(rows: &[Vec<i128>], k: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = subsets(rows.len(), k)
        .into_iter()
        .filter(|s| det(s.iter().map(|&i| rows[i].clone()).collect()) != 0)
        .collect();
    out.sort();
    out
}

// Fraction-free row echelon form; every entry stays a minor, so the
// divisions are exact.
fn rank_of(rows: &[Vec<i128>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(p, rank);
        for r in rank + 1..m.len() {
            for j in c + 1..cols {
                m[r][j] = (m[r][j] * m[rank][c] - m[r][c] * m[rank][j]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    rank
}

fn report(n: u32, name: &str, elapsed: Duration, outcome: &Outcome) -> bool {
    let secs = elapsed.as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("criterion {n} ({name}): PASS [{secs:.1}s] {detail}");
            true
        }
        Err(why) => {
            println!("criterion {n} ({name}): FAIL [{secs:.1}s] {why}");
            false
        }
    }
}

fn route_equivalence() -> Outcome {
    let start = Instant::now();
    let sweep = exhaustive_sweep(3, 6, 2, None, Fault::None);
    ensure!(sweep.complete, "sweep did not complete");
    ensure!(
        sweep.covered == sweep.total,
        "covered {} of {} multisets",
        sweep.covered,
        sweep.total
    );
    ensure!(
        sweep.mismatches.is_empty(),
        "{} mismatches, first {:?}",
        sweep.mismatches.len(),
        sweep.mismatches[0]
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let random = random_sweep(&mut rng, 10_000, 4, 7, 3, Fault::None);
    ensure!(
        random.mismatches.is_empty(),
        "{} random mismatches, first {:?}",
        random.mismatches.len(),
        random.mismatches[0]
    );
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(120),
        "took {:.1}s",
        elapsed.as_secs_f64()
    );
    Ok(format!(
        "{} exhaustive orbit representatives ({} multisets) and {} random systems agree",
        sweep.systems, sweep.total, random.systems
    ))
}

fn landmarks() -> Outcome {
    let check =
        |name: &str, ws: &WeightSystem, kind: VerdictKind, dim: usize| -> Result<(), String> {
            for (route, v) in [
                (
                    "structural",
                    classify_structural(ws).map_err(|e| e.to_string())?,
                ),
                (
                    "pseudomanifold",
                    classify_pseudomanifold(ws).map_err(|e| e.to_string())?,
                ),
            ] {
                ensure!(
                    v.kind == kind && v.model_dim == dim,
                    "{name}, {route}: {} of dimension {}, expected {kind} of dimension {dim}",
                    v.kind,
                    v.model_dim
                );
            }
            Ok(())
        };
    let mut cases = 0;
    for n in 2..=5usize {
        // e_1, ..., e_{n-1} and minus their sum, and a skewed realization.
        let mut w: Vec<Vec<i64>> = (0..n - 1)
            .map(|i| (0..n - 1).map(|j| i64::from(i == j)).collect())
            .collect();
        w.push(vec![-1; n - 1]);
        let ws = WeightSystem::new(n - 1, w.clone(), 0).unwrap();
        check(
            &format!("T^{} on C^{n}", n - 1),
            &ws,
            VerdictKind::ClosedManifold,
            n + 1,
        )?;
        let mut skew = w;
        skew[n - 1] = (1..n as i64).collect();
        let ws = WeightSystem::new(n - 1, skew, 0).unwrap();
        check(
            &format!("skewed T^{} on C^{n}", n - 1),
            &ws,
            VerdictKind::ClosedManifold,
            n + 1,
        )?;

        let std: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let ws = WeightSystem::new(n, std, 0).unwrap();
        check(
            &format!("T^{n} on C^{n}"),
            &ws,
            VerdictKind::ManifoldWithBoundary,
            n,
        )?;
        cases += 3;
    }
    for exps in [
        vec![1i64, 1, 1],
        vec![1, 2, 3],
        vec![2, -3, 5],
        vec![1, 1, 1, 1],
        vec![1, -1, 2, 7, 3],
    ] {
        let n = exps.len();
        let ws = WeightSystem::new(1, exps.iter().map(|&e| vec![e]).collect(), 0).unwrap();
        check(
            &format!("S^1 with exponents {exps:?}"),
            &ws,
            VerdictKind::NotManifold,
            2 * n - 1,
        )?;
        ensure!(
            circle_classify(&exps).unwrap() == CircleQuotient::NotHomologyManifold,
            "circle_classify({exps:?})"
        );
        cases += 1;
    }
    Ok(format!("{cases} landmark systems exact"))
}

fn homology_signature(k: &SimplicialComplex) -> Vec<(isize, usize, Vec<BigInt>)> {
    k.reduced_homology()
        .into_iter()
        .map(|g| (g.degree, g.free_rank, g.torsion))
        .collect()
}

fn wedge_homology() -> Outcome {
    // One homology computation per distinct labelled matroid.
    let mut seen: HashMap<(usize, Vec<Vec<usize>>), VerdictKind> = HashMap::new();
    let mut systems = 0u64;
    let mut visit = |ws: &WeightSystem| -> Result<(), String> {
        systems += 1;
        let rows = small_rows(ws);
        let k = ws.lattice_rank();
        let key = (rows.len(), bases(&rows, k));
        if seen.contains_key(&key) {
            return Ok(());
        }
        let verdict = classify_structural(ws).map_err(|e| e.to_string())?.kind;
        let complex = independence_complex(ws).map_err(|e| e.to_string())?;
        ensure!(
            complex.facets() == key.1.as_slice(),
            "independence complex of {:?} has facets {:?}, expected {:?}",
            ws.weights(),
            complex.facets(),
            key.1
        );
        let h = homology_signature(&complex);
        let top = k as isize - 1;
        for (deg, free, torsion) in &h {
            ensure!(
                torsion.is_empty(),
                "torsion {torsion:?} in degree {deg} for {:?}",
                ws.weights()
            );
            ensure!(
                *free == 0 || *deg == top,
                "H~_{deg} = Z^{free} for {:?}",
                ws.weights()
            );
        }
        let top_rank = h.iter().find(|g| g.0 == top).map_or(0, |g| g.1);
        // Reduced Euler characteristic from the face numbers.
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for b in &key.1 {
            for m in 0u32..1 << b.len() {
                faces.insert(
                    (0..b.len())
                        .filter(|i| m >> i & 1 == 1)
                        .map(|i| b[i])
                        .collect(),
                );
            }
        }
        let euler: i64 = faces
            .iter()
            .map(|f| if f.len() % 2 == 1 { 1 } else { -1 })
            .sum::<i64>();
        let expected = if top % 2 == 0 {
            top_rank as i64
        } else {
            -(top_rank as i64)
        };
        ensure!(
            euler == expected,
            "Euler characteristic {euler} vs {expected} for {:?}",
            ws.weights()
        );
        match verdict {
            VerdictKind::ClosedManifold => ensure!(top_rank == 1, "closed but top rank {top_rank}"),
            VerdictKind::ManifoldWithBoundary => {
                ensure!(top_rank == 0, "boundary but top rank {top_rank}")
            }
            VerdictKind::NotManifold => {}
        }
        seen.insert(key, verdict);
        Ok(())
    };

    for k in 1..=3 {
        let sweep = OrbitSweep::new(k, 2);
        let mut failure = None;
        sweep.walk(6, |item| {
            if sweep.is_effective(item.indices) {
                if let Err(e) = visit(&sweep.system(item.indices, 0)) {
                    failure = Some(e);
                    return false;
                }
            }
            true
        });
        if let Some(e) = failure {
            return Err(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10_000 {
        visit(&random_system(&mut rng, 4, 7, 3))?;
    }
    // Larger random systems up to eight weights.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..2_000 {
        let ws = random_system(&mut rng, 4, 8, 2);
        visit(&ws)?;
    }
    Ok(format!(
        "{systems} systems, {} distinct matroid complexes",
        seen.len()
    ))
}

fn flats_by_brute_force(ws: &WeightSystem) -> BTreeSet<Vec<usize>> {
    let rows = small_rows(ws);
    let r = rows.len();
    let k = ws.lattice_rank();
    let rank = |s: &[usize]| rank_of(&s.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>(), k);
    (0u32..1 << r)
        .map(|m| (0..r).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
        .filter(|s| {
            let base = rank(s);
            (0..r).filter(|e| !s.contains(e)).all(|e| {
                let mut t = s.clone();
                t.push(e);
                rank(&t) > base
            })
        })
        .collect()
}

fn face_posets() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let block_sets: Vec<Vec<usize>> = {
        let mut v = vec![vec![]];
        for a in 2..=4 {
            v.push(vec![a]);
            for b in a..=4 {
                v.push(vec![a, b]);
            }
        }
        v
    };
    let mut types = 0;
    let mut flats_checked = 0;
    for d in 0..=2 {
        for blocks in &block_sets {
            for l in 0..=2 {
                let model = WeightSystem::leontief_model(d, blocks, l);
                // A scrambled realization of the same type.
                let k = model.lattice_rank();
                let u = random_unimodular(&mut rng, k, 4);
                let mut perm: Vec<usize> = (0..model.len()).collect();
                perm.sort_by_key(|_| rng.gen::<u32>());
                let ws = model.transformed(&u).unwrap().permuted(&perm);

                let verdict = classify_structural(&ws).map_err(|e| e.to_string())?;
                let lt = verdict.leontief.ok_or("no Leontief type")?;
                ensure!(
                    lt.signature() == (d, blocks.clone(), l),
                    "type {:?} for ({d}, {blocks:?}, {l})",
                    lt.signature()
                );
                let expected = (1u128 << d)
                    * blocks
                        .iter()
                        .map(|&n| (1u128 << n) - n as u128)
                        .product::<u128>();
                ensure!(poset_cardinality(&lt) == expected, "cardinality formula");
                let poset = face_poset(&ws).map_err(|e| e.to_string())?;
                let brute = flats_by_brute_force(&ws);
                let listed: BTreeSet<Vec<usize>> = poset.elements.iter().cloned().collect();
                ensure!(
                    listed == brute,
                    "flats differ from brute force for ({d}, {blocks:?}, {l})"
                );
                ensure!(
                    poset.len() as u128 == expected,
                    "{} flats, expected {expected}",
                    poset.len()
                );
                let iso = product_structure_check(&ws, &lt).map_err(|e| e.to_string())?;
                ensure!(iso.strings.len() == poset.len(), "encoding size");
                for flat in &poset.elements {
                    let face = face_leontief_type(&ws, &lt, flat).map_err(|e| e.to_string())?;
                    let direct =
                        classify_structural(&ws.subsystem(flat)).map_err(|e| e.to_string())?;
                    let direct = direct
                        .leontief
                        .ok_or_else(|| format!("face {flat:?} is not Leontief"))?;
                    ensure!(
                        face.signature() == direct.signature(),
                        "face {flat:?} of ({d}, {blocks:?}, {l}): {:?} vs {:?}",
                        face.signature(),
                        direct.signature()
                    );
                    flats_checked += 1;
                }
                types += 1;
            }
        }
    }
    Ok(format!(
        "{types} Leontief types, {flats_checked} faces reclassified"
    ))
}

fn block_systems() -> Outcome {
    let start = Instant::now();
    let mut lists: Vec<Vec<usize>> = Vec::new();
    for a in 1..=4 {
        lists.push(vec![a]);
        for b in a..=4 {
            lists.push(vec![a, b]);
            for c in b..=4 {
                lists.push(vec![a, b, c]);
            }
        }
    }
    let mut count = 0;
    for list in &lists {
        for d in 0..=2usize {
            let sys = block_system(list, d).map_err(|e| e.to_string())?;
            let poly = enumerate_vertices(&sys).map_err(|e| e.to_string())?;
            let product: usize = list.iter().product();
            ensure!(
                poly.vertices.len() == product,
                "{list:?}, d={d}: {} vertices",
                poly.vertices.len()
            );
            ensure!(
                poly.bounded == (d == 0),
                "{list:?}, d={d}: bounded = {}",
                poly.bounded
            );

            // Facets of the expected join: all but one column of each block,
            // plus every free column. Size-one blocks never vanish.
            let mut expected: Vec<Vec<usize>> = vec![Vec::new()];
            let mut col = 0;
            for &k in list {
                let cols: Vec<usize> = (col..col + k).collect();
                col += k;
                if k < 2 {
                    continue;
                }
                let mut next = Vec::new();
                for f in &expected {
                    for &skip in &cols {
                        let mut g = f.clone();
                        g.extend(cols.iter().copied().filter(|&c| c != skip));
                        next.push(g);
                    }
                }
                expected = next;
            }
            for f in &mut expected {
                f.extend(col..col + d);
                f.sort_unstable();
            }
            // A point has no facets: its nerve is the complex {∅}.
            expected.sort();
            let nerve = nerve_complex(&sys).map_err(|e| e.to_string())?;
            ensure!(
                nerve.facets() == expected.as_slice(),
                "{list:?}, d={d}: nerve {:?}",
                nerve.facets()
            );

            let status = check_leontief(&sys).map_err(|e| e.to_string())?;
            let ws = restrict_standard_weights(&sys);
            let a = classify_structural(&ws).map_err(|e| e.to_string())?;
            let b = classify_pseudomanifold(&ws).map_err(|e| e.to_string())?;
            ensure!(
                a.kind == b.kind && a.model_dim == b.model_dim,
                "routes disagree on {list:?}, d={d}"
            );
            let totally = status == LeontiefStatus::Totally;
            ensure!(totally == (d == 0), "{list:?}, d={d}: {status:?}");
            ensure!(
                totally == (a.kind == VerdictKind::ClosedManifold),
                "bridge fails for {list:?}, d={d}: {status:?} vs {}",
                a.kind
            );
            ensure!(
                (status == LeontiefStatus::NonTotally)
                    == (a.kind == VerdictKind::ManifoldWithBoundary),
                "bridge fails for {list:?}, d={d}: {status:?} vs {}",
                a.kind
            );
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure!(
        elapsed < Duration::from_secs(60),
        "took {:.1}s",
        elapsed.as_secs_f64()
    );
    Ok(format!("{count} block systems"))
}

fn unimodular_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let fingerprint = |ws: &WeightSystem| -> Result<_, String> {
        let v = classify_structural(ws).map_err(|e| e.to_string())?;
        let poset = face_poset(ws).map_err(|e| e.to_string())?;
        let k = independence_complex(ws).map_err(|e| e.to_string())?;
        Ok((
            v.kind,
            v.model_dim,
            v.leontief.map(|lt| lt.signature()),
            poset.len(),
            homology_signature(&k),
        ))
    };
    let mut kinds: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..1000 {
        let ws = random_system(&mut rng, 4, 7, 3);
        let u = random_unimodular(&mut rng, ws.lattice_rank(), 8);
        ensure!(u.is_unimodular(), "not unimodular");
        let moved = ws.transformed(&u).map_err(|e| e.to_string())?;
        let (a, b) = (fingerprint(&ws)?, fingerprint(&moved)?);
        ensure!(
            a == b,
            "{:?} -> {:?}: {a:?} vs {b:?}",
            ws.weights(),
            moved.weights()
        );
        *kinds.entry(a.0.to_string()).or_default() += 1;
    }
    Ok(format!("1000 pairs unchanged, verdicts {kinds:?}"))
}

fn gcd_of_minors(m: &IntMatrix, size: usize) -> BigInt {
    let rows: Vec<Vec<i128>> = m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_i128().unwrap()).collect())
        .collect();
    let mut g = BigInt::zero();
    for rs in subsets(m.rows(), size) {
        for cs in subsets(m.cols(), size) {
            let minor = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| rows[i][j]).collect())
                .collect();
            g = g.gcd(&BigInt::from(det(minor)));
        }
    }
    g
}

fn snf_contract() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let m = random_matrix(&mut rng, 6, 9);
        let snf = smith_normal_form(&m);
        let product = snf
            .u
            .mul(&m)
            .and_then(|x| x.mul(&snf.v))
            .map_err(|e| e.to_string())?;
        ensure!(product == snf.d, "U·M·V != D for {m:?}");
        for t in [&snf.u, &snf.v] {
            let det = t.determinant().ok_or("transform not square")?;
            ensure!(det.abs().is_one(), "determinant {det} for {m:?}");
        }
        let n = m.rows().min(m.cols());
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                ensure!(
                    i == j || snf.d[(i, j)].is_zero(),
                    "off-diagonal entry in D for {m:?}"
                );
            }
        }
        let diag: Vec<BigInt> = (0..n).map(|i| snf.d[(i, i)].clone()).collect();
        for w in diag.windows(2) {
            ensure!(
                !w[0].is_negative() && !w[1].is_negative(),
                "negative entry in {diag:?}"
            );
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            ensure!(divides, "divisibility fails in {diag:?}");
        }
        // d_1 ... d_i is the gcd of the i x i minors.
        let mut prefix = BigInt::one();
        for (i, d) in diag.iter().enumerate() {
            prefix *= d;
            let g = gcd_of_minors(&m, i + 1);
            ensure!(prefix.abs() == g, "{diag:?} against minors of {m:?}");
        }
    }
    let ws = WeightSystem::new(2, vec![vec![2, 0], vec![0, 3]], 0).unwrap();
    let form = snf_canonical_form(&ws).map_err(|e| e.to_string())?;
    ensure!(
        form == vec![BigInt::from(1), BigInt::from(6)],
        "canonical form {form:?}"
    );
    Ok("1000 matrices, canonical form of {(2,0),(0,3)} is (1, 6)".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "route equivalence", route_equivalence),
        (2, "landmark cases", landmarks),
        (3, "wedge homology", wedge_homology),
        (4, "face posets", face_posets),
        (5, "block systems", block_systems),
        (6, "unimodular invariance", unimodular_invariance),
        (7, "Smith normal form", snf_contract),
    ];
    // ACCEPTANCE_ONLY=3,5 runs a subset.
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut all = true;
    for (n, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        all &= report(n, name, start.elapsed(), &outcome);
    }
    if !all {
        std::process::exit(1);
    }
}
