//! Simplicial complexes stored by their facets.
//!
//! Faces are generated on demand. Ghost vertices (labels that belong to no
//! simplex) are tracked separately so that joins with a ghost complex are
//! representable.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::{smith_diagonal, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("complex is not pure: facet sizes {0:?}")]
    NotPure(Vec<usize>),
    #[error("vertex {0} appears in both complexes of a join")]
    LabelCollision(usize),
    #[error("ghost vertex {0} appears in a facet")]
    GhostInFacet(usize),
    #[error("a simplex needs at least one label")]
    EmptyLabels,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    vertices: BTreeSet<usize>,
    ghosts: BTreeSet<usize>,
    facets: Vec<Vec<usize>>,
}

/// A ridge and the number of facets containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RidgeReport {
    pub ridge: Vec<usize>,
    pub containing_facet_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PseudomanifoldStatus {
    Closed,
    WithBoundary,
    Neither,
}

/// Outcome of the ridge scan. The witness is the first ridge in
/// lexicographic order whose facet count is not 2 (for `WithBoundary`) or
/// not in {1, 2} (for `Neither`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PseudomanifoldReport {
    pub status: PseudomanifoldStatus,
    pub witness: Option<RidgeReport>,
}

/// Reduced homology in one degree: `Z^free_rank ⊕ ⊕ Z/t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: isize,
    pub free_rank: usize,
    #[serde(serialize_with = "crate::weights::ser_ints")]
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

fn subsets_of_size(set: &[usize], size: usize, out: &mut BTreeSet<Vec<usize>>) {
    fn go(
        set: &[usize],
        size: usize,
        start: usize,
        cur: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if cur.len() == size {
            out.insert(cur.clone());
            return;
        }
        for i in start..set.len() {
            if set.len() - i < size - cur.len() {
                break;
            }
            cur.push(set[i]);
            go(set, size, i + 1, cur, out);
            cur.pop();
        }
    }
    if size <= set.len() {
        go(set, size, 0, &mut Vec::with_capacity(size), out);
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

impl SimplicialComplex {
    /// Builds a complex from (possibly redundant) facets. Non-maximal and
    /// duplicate facets are dropped. With no nonempty facet the result is the
    /// complex `{∅}`.
    pub fn new(
        facets: impl IntoIterator<Item = Vec<usize>>,
        ghosts: impl IntoIterator<Item = usize>,
    ) -> Result<Self, ComplexError> {
        let mut sorted: Vec<Vec<usize>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        let ghosts: BTreeSet<usize> = ghosts.into_iter().collect();
        let mut vertices: BTreeSet<usize> = sorted.iter().flatten().copied().collect();
        if let Some(&g) = ghosts.iter().find(|g| vertices.contains(g)) {
            return Err(ComplexError::GhostInFacet(g));
        }
        vertices.extend(ghosts.iter().copied());

        // Largest first, so containment only needs checking against kept facets.
        sorted.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        sorted.dedup();
        let uniform = sorted.windows(2).all(|w| w[0].len() == w[1].len());
        let mut kept: Vec<Vec<usize>> = if uniform {
            sorted
        } else {
            let mut kept: Vec<Vec<usize>> = Vec::new();
            for f in sorted {
                if !kept.iter().any(|k| is_subset(&f, k)) {
                    kept.push(f);
                }
            }
            kept
        };
        if kept.is_empty() {
            kept.push(Vec::new());
        }
        kept.sort();
        Ok(SimplicialComplex {
            vertices,
            ghosts,
            facets: kept,
        })
    }

    /// The full simplex on `labels`.
    pub fn full_simplex(labels: &[usize]) -> Result<Self, ComplexError> {
        if labels.is_empty() {
            return Err(ComplexError::EmptyLabels);
        }
        Self::new([labels.to_vec()], [])
    }

    /// All proper subsets of `labels`. On one label this is the ghost complex.
    pub fn boundary_of_simplex(labels: &[usize]) -> Result<Self, ComplexError> {
        if labels.is_empty() {
            return Err(ComplexError::EmptyLabels);
        }
        if labels.len() == 1 {
            return Self::new([], labels.iter().copied());
        }
        let facets = (0..labels.len()).map(|skip| {
            labels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        });
        Self::new(facets, [])
    }

    /// `{∅}` on the given labels, all of them ghosts.
    pub fn ghost_complex(labels: &[usize]) -> Self {
        Self::new([], labels.iter().copied()).expect("no facets")
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn ghosts(&self) -> &BTreeSet<usize> {
        &self.ghosts
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    /// Dimension; `-1` for `{∅}`.
    pub fn dim(&self) -> isize {
        self.facets
            .iter()
            .map(|f| f.len() as isize - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn is_pure(&self) -> bool {
        let n = self.facets[0].len();
        self.facets.iter().all(|f| f.len() == n)
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        self.facets.iter().any(|g| is_subset(&f, g))
    }

    /// Faces with `size` vertices, sorted.
    pub fn faces_of_size(&self, size: usize) -> Vec<Vec<usize>> {
        let mut out = BTreeSet::new();
        for f in &self.facets {
            subsets_of_size(f, size, &mut out);
        }
        out.into_iter().collect()
    }

    /// Number of facets containing each ridge, keyed by ridge.
    pub fn ridge_counts(&self) -> Result<BTreeMap<Vec<usize>, usize>, ComplexError> {
        Ok(self.sorted_ridge_counts()?.into_iter().collect())
    }

    fn sorted_ridge_counts(&self) -> Result<Vec<(Vec<usize>, usize)>, ComplexError> {
        if !self.is_pure() {
            let sizes: BTreeSet<usize> = self.facets.iter().map(Vec::len).collect();
            return Err(ComplexError::NotPure(sizes.into_iter().collect()));
        }
        let mut ridges: Vec<Vec<usize>> =
            Vec::with_capacity(self.facets.len() * self.facets[0].len());
        for f in &self.facets {
            for skip in 0..f.len() {
                let mut ridge = f.clone();
                ridge.remove(skip);
                ridges.push(ridge);
            }
        }
        ridges.sort_unstable();
        let mut counts: Vec<(Vec<usize>, usize)> = Vec::new();
        for r in ridges {
            match counts.last_mut() {
                Some((last, c)) if *last == r => *c += 1,
                _ => counts.push((r, 1)),
            }
        }
        Ok(counts)
    }

    /// Closed if every ridge lies in exactly two facets, with boundary if every
    /// ridge lies in one or two and at least one lies in one.
    pub fn pseudomanifold_status(&self) -> Result<PseudomanifoldReport, ComplexError> {
        if self.vertices.last().is_some_and(|&v| v < 64) && self.is_pure() {
            return Ok(self.pseudomanifold_status_masked());
        }
        let counts = self.sorted_ridge_counts()?;
        let report = |(ridge, count): &(Vec<usize>, usize)| RidgeReport {
            ridge: ridge.clone(),
            containing_facet_count: *count,
        };
        if let Some(bad) = counts.iter().find(|(_, c)| *c > 2) {
            return Ok(PseudomanifoldReport {
                status: PseudomanifoldStatus::Neither,
                witness: Some(report(bad)),
            });
        }
        let status = match counts.iter().find(|(_, c)| *c == 1) {
            Some(boundary) => PseudomanifoldReport {
                status: PseudomanifoldStatus::WithBoundary,
                witness: Some(report(boundary)),
            },
            None => PseudomanifoldReport {
                status: PseudomanifoldStatus::Closed,
                witness: None,
            },
        };
        Ok(status)
    }

    /// Ridge scan with faces as bitmasks. Among sets of equal size,
    /// lexicographic order is descending order of the bit-reversed masks, so
    /// the witness matches the generic scan.
    fn pseudomanifold_status_masked(&self) -> PseudomanifoldReport {
        let mut ridges: Vec<u64> = Vec::with_capacity(self.facets.len() * self.facets[0].len());
        for f in &self.facets {
            let mask = f.iter().fold(0u64, |m, &v| m | 1 << v);
            let mut rest = mask;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                ridges.push((mask ^ low).reverse_bits());
                rest ^= low;
            }
        }
        ridges.sort_unstable_by(|a, b| b.cmp(a));
        let mut first_bad = None;
        let mut first_boundary = None;
        let mut i = 0;
        while i < ridges.len() {
            let j = i + ridges[i..].iter().take_while(|&&r| r == ridges[i]).count();
            let count = j - i;
            if count > 2 && first_bad.is_none() {
                first_bad = Some((ridges[i], count));
                break;
            }
            if count == 1 && first_boundary.is_none() {
                first_boundary = Some((ridges[i], count));
            }
            i = j;
        }
        let report = |(rev, count): (u64, usize)| {
            let mask = rev.reverse_bits();
            RidgeReport {
                ridge: (0..64).filter(|b| mask >> b & 1 == 1).collect(),
                containing_facet_count: count,
            }
        };
        match (first_bad, first_boundary) {
            (Some(bad), _) => PseudomanifoldReport {
                status: PseudomanifoldStatus::Neither,
                witness: Some(report(bad)),
            },
            (None, Some(boundary)) => PseudomanifoldReport {
                status: PseudomanifoldStatus::WithBoundary,
                witness: Some(report(boundary)),
            },
            (None, None) => PseudomanifoldReport {
                status: PseudomanifoldStatus::Closed,
                witness: None,
            },
        }
    }

    /// Join with a complex on disjoint labels.
    pub fn join(&self, other: &SimplicialComplex) -> Result<Self, ComplexError> {
        if let Some(&v) = self.vertices.intersection(&other.vertices).next() {
            return Err(ComplexError::LabelCollision(v));
        }
        let mut facets = Vec::with_capacity(self.facets.len() * other.facets.len());
        for a in &self.facets {
            for b in &other.facets {
                let mut f = a.clone();
                f.extend(b);
                facets.push(f);
            }
        }
        let ghosts = self.ghosts.union(&other.ghosts).copied();
        Self::new(facets, ghosts)
    }

    /// Inclusion-minimal vertex sets that are not faces, sorted.
    pub fn minimal_non_faces(&self) -> Vec<Vec<usize>> {
        let verts: Vec<usize> = self
            .vertices
            .iter()
            .copied()
            .filter(|v| !self.ghosts.contains(v))
            .collect();
        let max_size = (self.dim() + 2).max(1) as usize;
        if verts.len() <= 24 {
            return self.minimal_non_faces_masked(&verts, max_size);
        }
        let mut out = Vec::new();
        for size in 1..=max_size.min(verts.len()) {
            let mut candidates = BTreeSet::new();
            subsets_of_size(&verts, size, &mut candidates);
            for s in candidates {
                if self.contains_face(&s) {
                    continue;
                }
                let minimal = (0..s.len()).all(|skip| {
                    let mut t = s.clone();
                    t.remove(skip);
                    self.contains_face(&t)
                });
                if minimal {
                    out.push(s);
                }
            }
        }
        out.sort();
        out
    }

    /// Same as above with vertex sets as bitmasks over `verts`.
    fn minimal_non_faces_masked(&self, verts: &[usize], max_size: usize) -> Vec<Vec<usize>> {
        let bit = |v: &usize| 1u32 << verts.binary_search(v).expect("facet vertex");
        let facets: Vec<u32> = self
            .facets
            .iter()
            .map(|f| f.iter().map(bit).fold(0, |a, b| a | b))
            .collect();
        let is_face = |m: u32| facets.iter().any(|&f| m & !f == 0);
        let mut out: Vec<Vec<usize>> = Vec::new();
        for m in 1u32..1 << verts.len() {
            if m.count_ones() as usize > max_size || is_face(m) {
                continue;
            }
            let mut rest = m;
            let mut minimal = true;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                if !is_face(m ^ low) {
                    minimal = false;
                    break;
                }
                rest ^= low;
            }
            if minimal {
                out.push(
                    (0..verts.len())
                        .filter(|i| m >> i & 1 == 1)
                        .map(|i| verts[i])
                        .collect(),
                );
            }
        }
        out.sort();
        out
    }

    /// Reduced simplicial homology with integer coefficients in degrees
    /// `-1..=dim`, read off the Smith forms of the boundary matrices.
    pub fn reduced_homology(&self) -> Vec<HomologyGroup> {
        let top = self.dim();
        // chains[q + 1] = faces of dimension q
        let chains: Vec<Vec<Vec<usize>>> = (0..=top + 1)
            .map(|q| self.faces_of_size(q as usize))
            .collect();
        // factors[q + 1] = invariant factors of the boundary C_q -> C_{q-1}
        let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); chains.len() + 1];
        for q in 0..=top {
            let lower = &chains[q as usize];
            let upper = &chains[q as usize + 1];
            let index: BTreeMap<&Vec<usize>, usize> =
                lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
            let mut m = IntMatrix::zeros(lower.len(), upper.len());
            for (j, face) in upper.iter().enumerate() {
                for skip in 0..face.len() {
                    let mut b = face.clone();
                    b.remove(skip);
                    let sign = if skip % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                    m[(index[&b], j)] = sign;
                }
            }
            factors[q as usize + 1] = smith_diagonal(&m);
        }
        (-1..=top)
            .map(|q| {
                let n = chains[(q + 1) as usize].len();
                let out_rank = factors[(q + 1) as usize].len();
                let incoming = &factors[(q + 2) as usize];
                HomologyGroup {
                    degree: q,
                    free_rank: n - out_rank - incoming.len(),
                    torsion: incoming.iter().filter(|t| !t.is_one()).cloned().collect(),
                }
            })
            .collect()
    }

    /// Same complex with labels passed through `f`.
    pub fn relabeled(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::new(
            self.facets
                .iter()
                .map(|x| x.iter().map(|&v| f(v)).collect()),
            self.ghosts.iter().map(|&g| f(g)),
        )
        .expect("relabeling keeps ghosts out of facets")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vertices": self.vertices,
            "ghost_vertices": self.ghosts,
            "facets": self.facets,
            "dim": self.dim(),
        })
    }
}
