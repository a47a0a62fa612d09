//! Exhaustive and randomized cross-checks of the two classification routes.
//!
//! The exhaustive sweep walks weight multisets with entries in `[-b, b]` up to
//! signed permutations of coordinates, which are unimodular changes of the
//! lattice basis. Multisets are generated in orderly fashion: a sorted index
//! sequence is kept iff it is lexicographically least in its orbit, and each
//! kept sequence is only extended by elements no smaller than its last one.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classify::{classify_pseudomanifold, classify_structural, VerdictKind};
use crate::complex::SimplicialComplex;
use crate::leontief::{
    block_system, check_leontief, enumerate_vertices, nerve_complex, restrict_standard_weights,
    LeontiefStatus,
};
use crate::linalg::{small, smith_normal_form, IntMatrix};
use crate::weights::WeightSystem;

/// Nonzero vectors of `[-bound, bound]^k` with first nonzero entry positive,
/// in lexicographic order.
pub fn candidate_vectors(k: usize, bound: i64) -> Vec<Vec<i64>> {
    let side = (2 * bound + 1) as usize;
    let mut out = Vec::new();
    for code in 0..side.pow(k as u32) {
        let mut c = code;
        let mut v = vec![0i64; k];
        for x in v.iter_mut().rev() {
            *x = (c % side) as i64 - bound;
            c /= side;
        }
        if v.iter().find(|x| **x != 0).is_some_and(|x| *x > 0) {
            out.push(v);
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn sign_normalized(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Orderly enumeration of weight multisets up to signed coordinate permutations.
pub struct OrbitSweep {
    pub k: usize,
    pub candidates: Vec<Vec<i64>>,
    /// `action[g][c]`: index of the image of candidate `c` under group element `g`.
    action: Vec<Vec<usize>>,
}

/// A canonical multiset together with the size of its orbit.
pub struct SweepItem<'a> {
    pub indices: &'a [usize],
    pub orbit_size: usize,
}

impl OrbitSweep {
    pub fn new(k: usize, bound: i64) -> Self {
        let candidates = candidate_vectors(k, bound);
        let mut action = Vec::new();
        for perm in permutations(k) {
            for signs in 0..1u32 << k {
                let row = candidates
                    .iter()
                    .map(|v| {
                        let image: Vec<i64> = (0..k)
                            .map(|i| {
                                let x = v[perm[i]];
                                if signs >> i & 1 == 1 {
                                    -x
                                } else {
                                    x
                                }
                            })
                            .collect();
                        let image = sign_normalized(image);
                        candidates
                            .binary_search(&image)
                            .expect("closed under the group")
                    })
                    .collect();
                action.push(row);
            }
        }
        // Signs only matter up to a global flip, which acts trivially.
        action.sort();
        action.dedup();
        OrbitSweep {
            k,
            candidates,
            action,
        }
    }

    pub fn group_order(&self) -> usize {
        self.action.len()
    }

    /// Stabilizer size if `seq` is canonical, `None` otherwise.
    fn canonical(&self, seq: &[usize], scratch: &mut Vec<usize>) -> Option<usize> {
        let mut stab = 0;
        for g in &self.action {
            scratch.clear();
            scratch.extend(seq.iter().map(|&c| g[c]));
            scratch.sort_unstable();
            match scratch.as_slice().cmp(seq) {
                std::cmp::Ordering::Less => return None,
                std::cmp::Ordering::Equal => stab += 1,
                std::cmp::Ordering::Greater => {}
            }
        }
        Some(stab)
    }

    /// Visits every canonical multiset of size `1..=max_r`. The callback
    /// returns `false` to stop the walk; the return value says whether the
    /// walk ran to completion.
    pub fn walk(&self, max_r: usize, mut visit: impl FnMut(SweepItem<'_>) -> bool) -> bool {
        let mut seq = Vec::with_capacity(max_r);
        let mut scratch = Vec::with_capacity(max_r);
        self.extend(&mut seq, max_r, &mut scratch, &mut visit)
    }

    /// Splits the walk into independent pieces: canonical prefixes of length
    /// one, visited alone, and of length two, visited with all extensions.
    /// Running the pieces in order reproduces [`OrbitSweep::walk`].
    pub fn tasks(&self, max_r: usize) -> Vec<Vec<usize>> {
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        if max_r == 0 {
            return out;
        }
        for a in 0..self.candidates.len() {
            if self.canonical(&[a], &mut scratch).is_none() {
                continue;
            }
            out.push(vec![a]);
            if max_r < 2 {
                continue;
            }
            for b in a..self.candidates.len() {
                if self.canonical(&[a, b], &mut scratch).is_some() {
                    out.push(vec![a, b]);
                }
            }
        }
        out
    }

    /// Runs one piece from [`OrbitSweep::tasks`].
    pub fn walk_task(
        &self,
        prefix: &[usize],
        max_r: usize,
        mut visit: impl FnMut(SweepItem<'_>) -> bool,
    ) -> bool {
        let mut seq = Vec::with_capacity(max_r);
        seq.extend_from_slice(prefix);
        let mut scratch = Vec::with_capacity(max_r);
        let Some(stab) = self.canonical(&seq, &mut scratch) else {
            return true;
        };
        let item = SweepItem {
            indices: &seq,
            orbit_size: self.group_order() / stab,
        };
        if !visit(item) {
            return false;
        }
        prefix.len() < 2 || self.extend(&mut seq, max_r, &mut scratch, &mut visit)
    }

    fn extend(
        &self,
        seq: &mut Vec<usize>,
        max_r: usize,
        scratch: &mut Vec<usize>,
        visit: &mut impl FnMut(SweepItem<'_>) -> bool,
    ) -> bool {
        if seq.len() == max_r {
            return true;
        }
        let start = seq.last().copied().unwrap_or(0);
        for c in start..self.candidates.len() {
            seq.push(c);
            if let Some(stab) = self.canonical(seq, scratch) {
                let item = SweepItem {
                    indices: seq,
                    orbit_size: self.group_order() / stab,
                };
                if !visit(item) || !self.extend(seq, max_r, scratch, visit) {
                    seq.pop();
                    return false;
                }
            }
            seq.pop();
        }
        true
    }

    /// Whether the chosen candidates span `Q^k`.
    pub fn is_effective(&self, indices: &[usize]) -> bool {
        let rows: Vec<&[i64]> = indices
            .iter()
            .map(|&c| self.candidates[c].as_slice())
            .collect();
        small::rank_checked(&rows, self.k) == Some(self.k)
    }

    pub fn system(&self, indices: &[usize], trivial_dim: usize) -> WeightSystem {
        let weights = indices
            .iter()
            .map(|&c| self.candidates[c].clone())
            .collect();
        WeightSystem::new(self.k, weights, trivial_dim).expect("candidates have length k")
    }

    /// Number of multisets of size `1..=max_r`, before the symmetry reduction.
    pub fn raw_count(&self, max_r: usize) -> u128 {
        let n = self.candidates.len() as u128;
        (1..=max_r as u128).map(|r| binomial(n + r - 1, r)).sum()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Outcome of running both routes on one system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RouteAgreement {
    pub kind: VerdictKind,
    pub model_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteMismatch {
    pub system: Value,
    pub structural: String,
    pub pseudomanifold: String,
}

/// Deliberate corruption of the structural route, for testing the checkers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Fault {
    #[default]
    None,
    /// Report closed manifolds as manifolds with boundary.
    MislabelClosed,
}

pub fn compare_routes(ws: &WeightSystem, fault: Fault) -> Result<RouteAgreement, RouteMismatch> {
    let describe = |r: &Result<(VerdictKind, usize), String>| match r {
        Ok((kind, dim)) => format!("{kind} of dimension {dim}"),
        Err(e) => format!("error: {e}"),
    };
    let structural = classify_structural(ws)
        .map(|v| (v.kind, v.model_dim))
        .map(|(kind, dim)| match (fault, kind) {
            (Fault::MislabelClosed, VerdictKind::ClosedManifold) => {
                (VerdictKind::ManifoldWithBoundary, dim)
            }
            _ => (kind, dim),
        })
        .map_err(|e| e.to_string());
    let pseudo = classify_pseudomanifold(ws)
        .map(|v| (v.kind, v.model_dim))
        .map_err(|e| e.to_string());
    match (&structural, &pseudo) {
        (Ok(a), Ok(b)) if a == b => Ok(RouteAgreement {
            kind: a.0,
            model_dim: a.1,
        }),
        _ => Err(RouteMismatch {
            system: ws.to_json(),
            structural: describe(&structural),
            pseudomanifold: describe(&pseudo),
        }),
    }
}

/// Random effective system with `1 <= k <= max_k`, `k <= r <= max_r` and
/// entries in `[-bound, bound]`; the trivial dimension is drawn from `0..=2`.
pub fn random_system(rng: &mut impl Rng, max_k: usize, max_r: usize, bound: i64) -> WeightSystem {
    loop {
        let k = rng.gen_range(1..=max_k);
        if k > max_r {
            continue;
        }
        let r = rng.gen_range(k..=max_r);
        let weights: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..k).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let ws = WeightSystem::new(k, weights, rng.gen_range(0..=2)).expect("lengths agree");
        if ws.is_effective() {
            return ws;
        }
    }
}

/// Random matrix in `GL_k(Z)`: a signed permutation times elementary
/// row additions.
pub fn random_unimodular(rng: &mut impl Rng, k: usize, steps: usize) -> IntMatrix {
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(rng);
    let mut m = IntMatrix::zeros(k, k);
    for (i, &p) in perm.iter().enumerate() {
        m[(i, p)] = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
    }
    if k < 2 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..k);
        let mut j = rng.gen_range(0..k - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        for col in 0..k {
            let v = &m[(j, col)] * &c;
            m[(i, col)] += v;
        }
    }
    m
}

/// Tally of a sweep or random run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub systems: u64,
    pub closed: u64,
    pub with_boundary: u64,
    pub not_manifold: u64,
    pub mismatches: Vec<RouteMismatch>,
    /// Raw multisets accounted for, and the total in the search space.
    pub covered: u128,
    pub total: u128,
    pub complete: bool,
}

impl SweepReport {
    fn record(&mut self, outcome: Result<RouteAgreement, RouteMismatch>) {
        self.systems += 1;
        match outcome {
            Ok(a) => match a.kind {
                VerdictKind::ClosedManifold => self.closed += 1,
                VerdictKind::ManifoldWithBoundary => self.with_boundary += 1,
                VerdictKind::NotManifold => self.not_manifold += 1,
            },
            Err(m) => self.mismatches.push(m),
        }
    }

    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            1.0
        } else {
            self.covered as f64 / self.total as f64
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "systems": self.systems,
            "closed": self.closed,
            "with_boundary": self.with_boundary,
            "not_manifold": self.not_manifold,
            "mismatches": self.mismatches,
            "coverage": self.coverage(),
            "complete": self.complete,
        })
    }
}

/// Compares the routes on every effective orbit representative with
/// `k <= max_k`, `r <= max_r`, entries in `[-bound, bound]`. Stops early once
/// `deadline` passes; `covered` then counts the multisets already accounted for.
pub fn exhaustive_sweep(
    max_k: usize,
    max_r: usize,
    bound: i64,
    deadline: Option<Instant>,
    fault: Fault,
) -> SweepReport {
    let mut report = SweepReport {
        complete: true,
        ..Default::default()
    };
    let sweeps: Vec<OrbitSweep> = (1..=max_k).map(|k| OrbitSweep::new(k, bound)).collect();
    report.total = sweeps.iter().map(|s| s.raw_count(max_r)).sum();
    let jobs: Vec<(&OrbitSweep, Vec<usize>)> = sweeps
        .iter()
        .flat_map(|s| s.tasks(max_r).into_iter().map(move |t| (s, t)))
        .collect();
    let expired = || deadline.is_some_and(|d| Instant::now() >= d);
    let run_job = |(sweep, prefix): &(&OrbitSweep, Vec<usize>)| {
        let mut part = SweepReport {
            complete: true,
            ..Default::default()
        };
        let mut ticks = 0u32;
        part.complete = sweep.walk_task(prefix, max_r, |item| {
            ticks = ticks.wrapping_add(1);
            if ticks.is_multiple_of(256) && expired() {
                return false;
            }
            part.covered += item.orbit_size as u128;
            if sweep.is_effective(item.indices) {
                part.record(compare_routes(&sweep.system(item.indices, 0), fault));
            }
            true
        });
        part
    };

    let threads = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let mut parts: Vec<(usize, SweepReport)> = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|_| {
                scope.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, AtomicOrdering::Relaxed);
                        if i >= jobs.len() || expired() {
                            break;
                        }
                        done.push((i, run_job(&jobs[i])));
                    }
                    done
                })
            })
            .collect();
        workers
            .into_iter()
            .flat_map(|w| w.join().expect("sweep worker panicked"))
            .collect()
    });
    parts.sort_by_key(|(i, _)| *i);

    report.complete = parts.len() == jobs.len();
    for (_, part) in parts {
        report.systems += part.systems;
        report.closed += part.closed;
        report.with_boundary += part.with_boundary;
        report.not_manifold += part.not_manifold;
        report.mismatches.extend(part.mismatches);
        report.covered += part.covered;
        report.complete &= part.complete;
    }
    report
}

/// Compares the routes on `count` random systems.
pub fn random_sweep(
    rng: &mut impl Rng,
    count: usize,
    max_k: usize,
    max_r: usize,
    bound: i64,
    fault: Fault,
) -> SweepReport {
    let mut report = SweepReport {
        complete: true,
        total: count as u128,
        ..Default::default()
    };
    for _ in 0..count {
        let ws = random_system(rng, max_k, max_r, bound);
        report.record(compare_routes(&ws, fault));
        report.covered += 1;
    }
    report
}

/// Splits a time budget between the exhaustive sweep and the random phase.
pub fn budget_deadline(start: Instant, budget: Duration, share: f64) -> Instant {
    start + budget.mul_f64(share)
}

/// Checks the Smith normal form contract on one matrix: `U·M·V = D`, `U` and
/// `V` unimodular, `D` diagonal with nonnegative entries `d_1 | d_2 | ...`.
pub fn check_snf(m: &IntMatrix) -> Result<(), String> {
    let snf = smith_normal_form(m);
    let product = snf
        .u
        .mul(m)
        .and_then(|um| um.mul(&snf.v))
        .map_err(|e| e.to_string())?;
    if product != snf.d {
        return Err(format!("U·M·V differs from D for {m:?}"));
    }
    if !snf.u.is_unimodular() || !snf.v.is_unimodular() {
        return Err(format!("transform is not unimodular for {m:?}"));
    }
    for i in 0..snf.d.rows() {
        for j in 0..snf.d.cols() {
            if i != j && !snf.d[(i, j)].is_zero() {
                return Err(format!("D has an off-diagonal entry at ({i}, {j})"));
            }
        }
    }
    let diag: Vec<BigInt> = (0..snf.d.rows().min(snf.d.cols()))
        .map(|i| snf.d[(i, i)].clone())
        .collect();
    if diag.iter().any(Signed::is_negative) {
        return Err(format!("negative diagonal entry in {diag:?}"));
    }
    for w in diag.windows(2) {
        let divides = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        };
        if !divides {
            return Err(format!("divisibility fails in {diag:?}"));
        }
    }
    Ok(())
}

/// Random integer matrix with both dimensions in `1..=max_dim`.
pub fn random_matrix(rng: &mut impl Rng, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let entries = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::new(rows, cols, entries).expect("sized")
}

/// Expected nerve of a block system: the join of the simplex boundaries on
/// each block with the full simplex on the free columns. Blocks of size one
/// contribute nothing, since their coordinate never vanishes.
pub fn expected_block_nerve(k_list: &[usize], d: usize) -> SimplicialComplex {
    let mut nerve = SimplicialComplex::new([], []).expect("empty complex");
    let mut col = 0;
    for &k in k_list {
        let labels: Vec<usize> = (col..col + k).collect();
        col += k;
        if k >= 2 {
            let part = SimplicialComplex::boundary_of_simplex(&labels).expect("nonempty");
            nerve = nerve.join(&part).expect("disjoint labels");
        }
    }
    if d > 0 {
        let free: Vec<usize> = (col..col + d).collect();
        nerve = nerve
            .join(&SimplicialComplex::full_simplex(&free).expect("nonempty"))
            .expect("disjoint labels");
    }
    nerve
}

/// Vertex count, boundedness, nerve and the bridge to the orbit verdict for
/// one block system.
pub fn check_block_system(k_list: &[usize], d: usize, fault: Fault) -> Result<(), String> {
    let sys = block_system(k_list, d).map_err(|e| e.to_string())?;
    let report = enumerate_vertices(&sys).map_err(|e| e.to_string())?;
    let expected_vertices: usize = k_list.iter().product();
    if report.vertices.len() != expected_vertices {
        return Err(format!(
            "{k_list:?}, d={d}: {} vertices, expected {expected_vertices}",
            report.vertices.len()
        ));
    }
    if report.bounded != (d == 0) {
        return Err(format!("{k_list:?}, d={d}: bounded = {}", report.bounded));
    }
    let nerve = nerve_complex(&sys).map_err(|e| e.to_string())?;
    if nerve.facets() != expected_block_nerve(k_list, d).facets() {
        return Err(format!("{k_list:?}, d={d}: nerve {:?}", nerve.facets()));
    }
    let status = check_leontief(&sys).map_err(|e| e.to_string())?;
    let weights = restrict_standard_weights(&sys);
    let verdict = compare_routes(&weights, fault).map_err(|m| {
        format!(
            "{k_list:?}, d={d}: routes disagree: {} vs {}",
            m.structural, m.pseudomanifold
        )
    })?;
    let consistent = match status {
        LeontiefStatus::Totally => verdict.kind == VerdictKind::ClosedManifold,
        LeontiefStatus::NonTotally => verdict.kind == VerdictKind::ManifoldWithBoundary,
        LeontiefStatus::NotLeontief(_) => false,
    };
    if !consistent {
        return Err(format!(
            "{k_list:?}, d={d}: {status:?} but the orbit space is {}",
            verdict.kind
        ));
    }
    Ok(())
}

/// Block sizes `k_i` in `1..=max_k` for `1 <= s <= max_s` blocks, as
/// nondecreasing lists.
pub fn block_lists(max_s: usize, max_k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_s {
        let mut next = Vec::new();
        for list in &frontier {
            let start = list.last().copied().unwrap_or(1);
            for k in start..=max_k {
                let mut l = list.clone();
                l.push(k);
                next.push(l);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// The landmark systems: general position `T^{n-1}` on `C^n`, the standard
/// representation of `T^n`, and a circle with three exponents.
pub fn landmark_cases() -> Vec<(String, WeightSystem, VerdictKind, usize)> {
    let mut out = Vec::new();
    for n in 2..=5usize {
        out.push((
            format!("general position T^{} on C^{n}", n - 1),
            WeightSystem::leontief_model(0, &[n], 0),
            VerdictKind::ClosedManifold,
            n + 1,
        ));
        out.push((
            format!("standard T^{n} on C^{n}"),
            WeightSystem::leontief_model(n, &[], 0),
            VerdictKind::ManifoldWithBoundary,
            n,
        ));
    }
    for exps in [vec![1i64, 2, 3], vec![1, 1, 1, 1], vec![1, -2, 5]] {
        let n = exps.len();
        out.push((
            format!("circle with exponents {exps:?}"),
            WeightSystem::new(1, exps.iter().map(|&e| vec![e]).collect(), 0).expect("k = 1"),
            VerdictKind::NotManifold,
            2 * n - 1,
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: Vec<String>,
}

impl SuiteResult {
    fn new(name: &str) -> Self {
        SuiteResult {
            name: name.to_string(),
            passed: true,
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, outcome: Result<(), String>) {
        self.checked += 1;
        if let Err(e) = outcome {
            self.passed = false;
            if self.failures.len() < 10 {
                self.failures.push(e);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfcheckReport {
    pub suites: Vec<SuiteResult>,
    pub sweep: Value,
    pub coverage: f64,
    pub complete: bool,
}

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }
}

/// Landmarks, small block systems and the SNF contract first, then the
/// exhaustive route sweep (`k <= 3`, `r <= 6`, entries in `[-2, 2]`) until
/// most of the budget is used, then random systems if time is left.
pub fn selfcheck(budget: Duration, fault: Fault) -> SelfcheckReport {
    let start = Instant::now();
    let mut suites = Vec::new();

    let mut landmarks = SuiteResult::new("landmarks");
    for (name, ws, kind, dim) in landmark_cases() {
        landmarks.record(match compare_routes(&ws, fault) {
            Ok(a) if a.kind == kind && a.model_dim == dim => Ok(()),
            Ok(a) => Err(format!("{name}: {} of dimension {}", a.kind, a.model_dim)),
            Err(m) => Err(format!("{name}: {} vs {}", m.structural, m.pseudomanifold)),
        });
    }
    suites.push(landmarks);

    let mut blocks = SuiteResult::new("block_systems");
    for list in block_lists(2, 3) {
        for d in 0..=1 {
            blocks.record(check_block_system(&list, d, fault));
        }
    }
    suites.push(blocks);

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut snf = SuiteResult::new("smith_normal_form");
    for _ in 0..200 {
        snf.record(check_snf(&random_matrix(&mut rng, 6, 9)));
    }
    suites.push(snf);

    let deadline = budget_deadline(start, budget, 0.9);
    let sweep = exhaustive_sweep(3, 6, 2, Some(deadline), fault);
    let mut sweep_suite = SuiteResult::new("route_sweep");
    sweep_suite.checked = sweep.systems;
    for m in &sweep.mismatches {
        sweep_suite.record(Err(format!(
            "{} | {} vs {}",
            m.system, m.structural, m.pseudomanifold
        )));
    }
    sweep_suite.checked = sweep.systems;
    suites.push(sweep_suite);

    if sweep.complete && Instant::now() < start + budget {
        let random = random_sweep(&mut rng, 1000, 4, 7, 2, fault);
        let mut suite = SuiteResult::new("random_routes");
        for m in &random.mismatches {
            suite.record(Err(format!(
                "{} | {} vs {}",
                m.system, m.structural, m.pseudomanifold
            )));
        }
        suite.checked = random.systems;
        suites.push(suite);
    }

    SelfcheckReport {
        coverage: sweep.coverage(),
        complete: sweep.complete,
        sweep: sweep.to_json(),
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_counts() {
        assert_eq!(candidate_vectors(1, 2), vec![vec![1], vec![2]]);
        assert_eq!(candidate_vectors(2, 2).len(), 12);
        assert_eq!(candidate_vectors(3, 2).len(), 62);
    }

    #[test]
    fn group_orders() {
        assert_eq!(OrbitSweep::new(1, 2).group_order(), 1);
        assert_eq!(OrbitSweep::new(2, 2).group_order(), 4);
        assert_eq!(OrbitSweep::new(3, 2).group_order(), 24);
    }

    #[test]
    fn orbit_sizes_account_for_every_multiset() {
        for (k, r) in [(1, 4), (2, 4), (3, 3)] {
            let sweep = OrbitSweep::new(k, 2);
            let mut covered = 0u128;
            assert!(sweep.walk(r, |item| {
                covered += item.orbit_size as u128;
                true
            }));
            assert_eq!(covered, sweep.raw_count(r), "k={k} r={r}");
        }
    }

    #[test]
    fn small_sweep_agrees() {
        let report = exhaustive_sweep(2, 4, 2, None, Fault::None);
        assert!(report.complete);
        assert!(report.mismatches.is_empty(), "{:?}", report.mismatches);
        assert!(report.closed > 0 && report.with_boundary > 0 && report.not_manifold > 0);
    }

    #[test]
    fn injected_fault_is_caught() {
        let report = exhaustive_sweep(2, 3, 1, None, Fault::MislabelClosed);
        assert!(!report.mismatches.is_empty());
    }

    #[test]
    fn unimodular_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..5 {
            assert!(random_unimodular(&mut rng, k, 10).is_unimodular());
        }
    }

    #[test]
    fn tasks_reproduce_the_walk() {
        for k in 1..=3 {
            let sweep = OrbitSweep::new(k, 1);
            let mut whole = Vec::new();
            sweep.walk(4, |item| {
                whole.push((item.indices.to_vec(), item.orbit_size));
                true
            });
            let mut pieces = Vec::new();
            for t in sweep.tasks(4) {
                sweep.walk_task(&t, 4, |item| {
                    pieces.push((item.indices.to_vec(), item.orbit_size));
                    true
                });
            }
            assert_eq!(whole, pieces);
        }
    }

    #[test]
    fn snf_checker_accepts_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            check_snf(&random_matrix(&mut rng, 5, 9)).unwrap();
        }
    }

    #[test]
    fn block_suite_small() {
        assert_eq!(
            block_lists(2, 2),
            vec![vec![1], vec![2], vec![1, 1], vec![1, 2], vec![2, 2]]
        );
        for list in block_lists(2, 3) {
            for d in 0..=1 {
                check_block_system(&list, d, Fault::None).unwrap();
            }
        }
    }

    #[test]
    fn landmarks_hold() {
        for (name, ws, kind, dim) in landmark_cases() {
            let a = compare_routes(&ws, Fault::None).unwrap();
            assert_eq!((a.kind, a.model_dim), (kind, dim), "{name}");
        }
    }

    #[test]
    fn short_selfcheck() {
        let report = selfcheck(Duration::from_millis(300), Fault::None);
        assert!(report.passed(), "{:?}", report.suites);
        assert!(!report.complete && report.coverage > 0.0 && report.coverage < 1.0);
        let faulty = selfcheck(Duration::from_millis(300), Fault::MislabelClosed);
        assert!(!faulty.passed());
    }

    #[test]
    fn random_systems_are_effective() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let ws = random_system(&mut rng, 4, 7, 2);
            assert!(ws.is_effective() && ws.len() <= 7);
        }
    }
}
