//! Face posets of representations.
//!
//! The face submanifolds of `V` are the sums `⊕_{i∈A} V(α_i) ⊕ R^l` over flats
//! `A` of the weight matroid, so the face poset is the geometric lattice of
//! flats. For a Leontief type `(d, {n_1..n_s}, l)` each face is encoded by a
//! string `(A_0, A_1, ..., A_s)` with `A_0 ⊆ D`, `A_i ⊆ N_i`, `|A_i| ≠ n_i - 1`,
//! giving `B_d × Sp_{n_1-1} × ... × Sp_{n_s-1}`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::matroid::{LinearMatroid, MatroidError};
use crate::weights::{effective_reduction, LeontiefType, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error("{0:?} is not a flat of the weight matroid")]
    NotAFlat(Vec<usize>),
    #[error("Leontief type does not match the weight system: {0}")]
    TypeMismatch(String),
    #[error("face poset is not isomorphic to the product poset: {0}")]
    NoIsomorphism(String),
}

/// Finite graded poset stored densely with its cover relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedPoset {
    /// Elements as sorted index sets, ordered by rank then lexicographically.
    pub elements: Vec<Vec<usize>>,
    pub ranks: Vec<usize>,
    /// `(i, j)`: element `j` covers element `i`.
    pub covers: Vec<(usize, usize)>,
}

impl GradedPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the greatest element.
    pub fn top(&self) -> Option<usize> {
        let n = self.len();
        (n > 0).then_some(n - 1)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        is_subset(&self.elements[i], &self.elements[j])
    }

    pub fn to_json(&self, encoding: Option<&ProductIsomorphism>) -> Value {
        json!({
            "elements": self.elements,
            "ranks": self.ranks,
            "covers": self.covers,
            "encoding": encoding.map(|e| &e.strings),
        })
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.any(|y| y == x))
}

/// Lattice of flats of the weights, graded by rank. A non-effective system
/// is reduced first; this does not change its matroid.
pub fn face_poset(ws: &WeightSystem) -> Result<GradedPoset, PosetError> {
    let (ws, _) = effective_reduction(ws);
    let m = LinearMatroid::from_weights(&ws)?;
    let flats = m.flats();
    let elements: Vec<Vec<usize>> = flats.iter().map(|f| f.indices.clone()).collect();
    let ranks: Vec<usize> = flats.iter().map(|f| f.flat_rank).collect();
    let mut covers = Vec::new();
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            // In a geometric lattice the covers are the containments of corank one.
            if ranks[j] == ranks[i] + 1 && is_subset(a, b) {
                covers.push((i, j));
            }
        }
    }
    Ok(GradedPoset {
        elements,
        ranks,
        covers,
    })
}

/// `2^d · Π (2^{n_i} - n_i)`.
pub fn poset_cardinality(lt: &LeontiefType) -> u128 {
    lt.blocks
        .iter()
        .fold(1u128 << lt.d, |acc, &n| acc * ((1u128 << n) - n as u128))
}

/// Explicit isomorphism from the face poset to `B_d × Π Sp_{n_i - 1}`:
/// `strings[e]` is the encoding `(A_0, A_1, ..., A_s)` of element `e`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductIsomorphism {
    pub strings: Vec<Vec<Vec<usize>>>,
}

fn parts_of(lt: &LeontiefType) -> Vec<Vec<usize>> {
    (0..=lt.blocks.len())
        .map(|label| lt.members(label))
        .collect()
}

fn encode(flat: &[usize], parts: &[Vec<usize>]) -> Vec<Vec<usize>> {
    parts
        .iter()
        .map(|p| flat.iter().copied().filter(|i| p.contains(i)).collect())
        .collect()
}

fn string_rank(s: &[Vec<usize>], blocks: &[usize]) -> usize {
    let zero = s[0].len();
    zero + s[1..]
        .iter()
        .zip(blocks)
        .map(|(a, &n)| if a.len() == n { n - 1 } else { a.len() })
        .sum::<usize>()
}

fn check_type_shape(ws: &WeightSystem, lt: &LeontiefType) -> Result<Vec<Vec<usize>>, PosetError> {
    let parts = parts_of(lt);
    let covered: BTreeSet<usize> = lt.assignment.keys().copied().collect();
    if covered != (0..ws.len()).collect() {
        return Err(PosetError::TypeMismatch(format!(
            "assignment covers {:?}, expected indices 0..{}",
            covered,
            ws.len()
        )));
    }
    if parts[0].len() != lt.d {
        return Err(PosetError::TypeMismatch(format!(
            "{} indices labelled 0 but d = {}",
            parts[0].len(),
            lt.d
        )));
    }
    for (i, (p, &n)) in parts[1..].iter().zip(&lt.blocks).enumerate() {
        if p.len() != n {
            return Err(PosetError::TypeMismatch(format!(
                "block {} has {} members but n = {}",
                i + 1,
                p.len(),
                n
            )));
        }
    }
    Ok(parts)
}

/// Checks that the string encoding is a graded poset isomorphism between the
/// lattice of flats and the abstract product.
pub fn product_structure_check(
    ws: &WeightSystem,
    lt: &LeontiefType,
) -> Result<ProductIsomorphism, PosetError> {
    let parts = check_type_shape(ws, lt)?;
    let poset = face_poset(ws)?;
    let expected = poset_cardinality(lt);
    if poset.len() as u128 != expected {
        return Err(PosetError::NoIsomorphism(format!(
            "{} flats but the product has {} elements",
            poset.len(),
            expected
        )));
    }
    let strings: Vec<Vec<Vec<usize>>> = poset.elements.iter().map(|f| encode(f, &parts)).collect();
    for (e, s) in strings.iter().enumerate() {
        for (a, &n) in s[1..].iter().zip(&lt.blocks) {
            if a.len() + 1 == n {
                return Err(PosetError::NoIsomorphism(format!(
                    "flat {:?} meets a block of size {} in {} elements",
                    poset.elements[e],
                    n,
                    a.len()
                )));
            }
        }
        if string_rank(s, &lt.blocks) != poset.ranks[e] {
            return Err(PosetError::NoIsomorphism(format!(
                "flat {:?} has rank {} but its string has rank {}",
                poset.elements[e],
                poset.ranks[e],
                string_rank(s, &lt.blocks)
            )));
        }
    }
    // The encoding is injective on subsets of the ground set, so counting
    // distinct strings against the product size gives bijectivity.
    let distinct: BTreeSet<&Vec<Vec<usize>>> = strings.iter().collect();
    if distinct.len() as u128 != expected {
        return Err(PosetError::NoIsomorphism(
            "encoding is not injective".into(),
        ));
    }
    for i in 0..poset.len() {
        for j in 0..poset.len() {
            let product_leq = strings[i]
                .iter()
                .zip(&strings[j])
                .all(|(a, b)| is_subset(a, b));
            if poset.leq(i, j) != product_leq {
                return Err(PosetError::NoIsomorphism(format!(
                    "order disagrees on {:?} and {:?}",
                    poset.elements[i], poset.elements[j]
                )));
            }
        }
    }
    Ok(ProductIsomorphism { strings })
}

/// Leontief type of the face submanifold indexed by `flat`: blocks met fully
/// survive, blocks met in at most `n_i - 2` elements join the complexity-zero
/// part.
pub fn face_leontief_type(
    ws: &WeightSystem,
    lt: &LeontiefType,
    flat: &[usize],
) -> Result<LeontiefType, PosetError> {
    let parts = check_type_shape(ws, lt)?;
    let (reduced, _) = effective_reduction(ws);
    let m = LinearMatroid::from_weights(&reduced)?;
    let mut sorted = flat.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if !m.is_flat(&sorted)? {
        return Err(PosetError::NotAFlat(sorted));
    }
    let s = encode(&sorted, &parts);
    let mut coloops = s[0].clone();
    let mut blocks = Vec::new();
    for (a, &n) in s[1..].iter().zip(&lt.blocks) {
        if a.len() == n {
            blocks.push(a.clone());
        } else {
            assert!(
                a.len() + 2 <= n,
                "a flat never meets a general-position block in n - 1 elements"
            );
            coloops.extend(a);
        }
    }
    coloops.sort_unstable();
    Ok(LeontiefType::from_parts(&coloops, blocks, lt.l))
}

/// Face count per type signature `(d, blocks, l)`.
pub type FaceCensus = BTreeMap<(usize, Vec<usize>, usize), usize>;

/// Groups flats by the signature of their face type; handy for reports.
pub fn face_type_census(ws: &WeightSystem, lt: &LeontiefType) -> Result<FaceCensus, PosetError> {
    let poset = face_poset(ws)?;
    let mut census = BTreeMap::new();
    for flat in &poset.elements {
        let t = face_leontief_type(ws, lt, flat)?;
        *census.entry(t.signature()).or_insert(0) += 1;
    }
    Ok(census)
}
