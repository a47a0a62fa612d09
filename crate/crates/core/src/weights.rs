//! Weight systems of torus representations.
//!
//! A representation of `T^k` on `R^m` splits as a sum of two-dimensional
//! pieces `V(α_i)`, one per nonzero weight `α_i ∈ Z^k`, plus a trivial part.
//! A [`WeightSystem`] stores the weights (each up to sign) together with the
//! real dimension of the trivial part.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::linalg::{self, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("malformed weight-system JSON: {0}")]
    Malformed(String),
    #[error("inconsistent vector lengths: weight {index} has length {found}, lattice rank is {expected}")]
    InconsistentLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("trivial_dim must be nonnegative, got {0}")]
    NegativeTrivialDim(String),
    #[error("weight system has positive complexity {0}")]
    PositiveComplexity(usize),
    #[error("weight system is not effective: weights span rank {rank} in a lattice of rank {lattice_rank}")]
    NotEffective { rank: usize, lattice_rank: usize },
    #[error("transform is {rows}x{cols}, expected a unimodular {k}x{k} matrix")]
    BadTransform { rows: usize, cols: usize, k: usize },
}

/// Canonicalized weight data of a torus representation.
///
/// Invariants: every weight is nonzero, has length `lattice_rank`, and has its
/// first nonzero entry positive. Magnitudes are kept as given.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightSystem {
    lattice_rank: usize,
    weights: Vec<Vec<BigInt>>,
    trivial_dim: usize,
}

fn sign_normalize(mut w: Vec<BigInt>) -> Vec<BigInt> {
    if w.iter()
        .find(|x| !x.is_zero())
        .is_some_and(Signed::is_negative)
    {
        for x in &mut w {
            *x = -&*x;
        }
    }
    w
}

impl WeightSystem {
    /// Canonicalizes: zero weights are folded into the trivial part (two real
    /// dimensions each) and signs are normalized.
    pub fn new<T: Into<BigInt>>(
        lattice_rank: usize,
        weights: Vec<Vec<T>>,
        trivial_dim: usize,
    ) -> Result<Self, WeightError> {
        let mut trivial_dim = trivial_dim;
        let mut kept = Vec::with_capacity(weights.len());
        for (index, w) in weights.into_iter().enumerate() {
            if w.len() != lattice_rank {
                return Err(WeightError::InconsistentLength {
                    index,
                    expected: lattice_rank,
                    found: w.len(),
                });
            }
            let w: Vec<BigInt> = w.into_iter().map(Into::into).collect();
            if w.iter().all(Zero::is_zero) {
                trivial_dim += 2;
            } else {
                kept.push(sign_normalize(w));
            }
        }
        Ok(WeightSystem {
            lattice_rank,
            weights: kept,
            trivial_dim,
        })
    }

    /// The trivial representation on `R^l`.
    pub fn trivial(trivial_dim: usize) -> Self {
        WeightSystem {
            lattice_rank: 0,
            weights: Vec::new(),
            trivial_dim,
        }
    }

    /// A representative Leontief representation of type `(d, blocks, l)`:
    /// coordinate vectors for the complexity-zero part, and for each block of
    /// size `n` the vectors `e_1, ..., e_{n-1}, e_1 + ... + e_{n-1}`.
    ///
    /// Panics if a block has size below 2.
    pub fn leontief_model(d: usize, blocks: &[usize], trivial_dim: usize) -> Self {
        assert!(blocks.iter().all(|&n| n >= 2), "blocks need n_i >= 2");
        let k = d + blocks.iter().map(|n| n - 1).sum::<usize>();
        let unit = |i: usize| -> Vec<i64> {
            let mut v = vec![0; k];
            v[i] = 1;
            v
        };
        let mut weights: Vec<Vec<i64>> = (0..d).map(unit).collect();
        let mut offset = d;
        for &n in blocks {
            let mut sum = vec![0; k];
            for i in offset..offset + n - 1 {
                weights.push(unit(i));
                sum[i] = 1;
            }
            weights.push(sum);
            offset += n - 1;
        }
        WeightSystem::new(k, weights, trivial_dim).expect("lengths agree")
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn weights(&self) -> &[Vec<BigInt>] {
        &self.weights
    }

    /// Number of nonzero weights, `r`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn trivial_dim(&self) -> usize {
        self.trivial_dim
    }

    /// Real dimension `m = 2r + l` of the representation space.
    pub fn real_dim(&self) -> usize {
        2 * self.weights.len() + self.trivial_dim
    }

    /// Whether weight `i` has coprime entries.
    pub fn is_primitive(&self, i: usize) -> bool {
        self.weights[i]
            .iter()
            .fold(BigInt::zero(), |g, x| g.gcd(x))
            .is_one()
    }

    /// The `k × r` matrix whose columns are the weights.
    pub fn weight_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(&self.weights, self.lattice_rank).expect("canonical lengths")
    }

    /// Rank of the weights over Q.
    pub fn rank(&self) -> usize {
        linalg::rank_of_rows(&self.weights, self.lattice_rank)
    }

    pub fn is_effective(&self) -> bool {
        self.rank() == self.lattice_rank
    }

    /// Subsystem on the given weight indices, same lattice and trivial part.
    pub fn subsystem(&self, indices: &[usize]) -> WeightSystem {
        WeightSystem {
            lattice_rank: self.lattice_rank,
            weights: indices.iter().map(|&i| self.weights[i].clone()).collect(),
            trivial_dim: self.trivial_dim,
        }
    }

    /// Reorders weights: the new `i`-th weight is the old `perm[i]`-th.
    pub fn permuted(&self, perm: &[usize]) -> WeightSystem {
        self.subsystem(perm)
    }

    /// Applies a change of lattice coordinates `α ↦ U·α`.
    pub fn transformed(&self, u: &IntMatrix) -> Result<WeightSystem, WeightError> {
        let k = self.lattice_rank;
        if u.rows() != k || u.cols() != k || !u.is_unimodular() {
            return Err(WeightError::BadTransform {
                rows: u.rows(),
                cols: u.cols(),
                k,
            });
        }
        let image = u.mul(&self.weight_matrix()).expect("shapes agree");
        let cols: Vec<Vec<BigInt>> = (0..image.cols()).map(|c| image.column(c)).collect();
        WeightSystem::new(k, cols, self.trivial_dim)
    }

    /// Direct sum: weights of `other` placed in the second summand of `Z^k ⊕ Z^k'`.
    pub fn direct_sum(&self, other: &WeightSystem) -> WeightSystem {
        let k = self.lattice_rank + other.lattice_rank;
        let pad = |w: &Vec<BigInt>, before: usize, after: usize| -> Vec<BigInt> {
            std::iter::repeat_n(BigInt::zero(), before)
                .chain(w.iter().cloned())
                .chain(std::iter::repeat_n(BigInt::zero(), after))
                .collect()
        };
        let mut weights: Vec<Vec<BigInt>> = self
            .weights
            .iter()
            .map(|w| pad(w, 0, other.lattice_rank))
            .collect();
        weights.extend(other.weights.iter().map(|w| pad(w, self.lattice_rank, 0)));
        WeightSystem {
            lattice_rank: k,
            weights,
            trivial_dim: self.trivial_dim + other.trivial_dim,
        }
    }

    /// Serialized form: the input schema plus `complexity` and `effective`.
    pub fn to_json(&self) -> Value {
        let weights: Vec<Vec<Value>> = self
            .weights
            .iter()
            .map(|w| w.iter().map(int_to_json).collect())
            .collect();
        json!({
            "lattice_rank": self.lattice_rank,
            "weights": weights,
            "trivial_dim": self.trivial_dim,
            "complexity": complexity(self),
            "effective": self.is_effective(),
        })
    }
}

/// Integers that fit `i64` serialize as JSON numbers, larger ones as strings.
pub(crate) fn int_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub(crate) fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(int_to_json).collect::<Vec<_>>().serialize(s)
}

pub(crate) fn int_from_json(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from)),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

fn count_field(doc: &Value, key: &str) -> Result<usize, WeightError> {
    let v = doc
        .get(key)
        .ok_or_else(|| WeightError::Malformed(format!("missing field `{key}`")))?;
    let n = int_from_json(v)
        .ok_or_else(|| WeightError::Malformed(format!("`{key}` must be an integer")))?;
    if n.is_negative() {
        return Err(if key == "trivial_dim" {
            WeightError::NegativeTrivialDim(n.to_string())
        } else {
            WeightError::Malformed(format!("`{key}` must be nonnegative"))
        });
    }
    n.to_usize()
        .ok_or_else(|| WeightError::Malformed(format!("`{key}` is too large")))
}

/// Parses `{"lattice_rank": k, "weights": [[...], ...], "trivial_dim": l}`.
/// Unknown fields (such as the serialized `complexity`) are ignored.
pub fn parse_weights(raw: &str) -> Result<WeightSystem, WeightError> {
    let doc: Value =
        serde_json::from_str(raw).map_err(|e| WeightError::Malformed(e.to_string()))?;
    weights_from_json(&doc)
}

pub fn weights_from_json(doc: &Value) -> Result<WeightSystem, WeightError> {
    if !doc.is_object() {
        return Err(WeightError::Malformed("expected a JSON object".into()));
    }
    let lattice_rank = count_field(doc, "lattice_rank")?;
    let trivial_dim = count_field(doc, "trivial_dim")?;
    let list = doc
        .get("weights")
        .and_then(Value::as_array)
        .ok_or_else(|| WeightError::Malformed("`weights` must be an array".into()))?;
    let mut weights = Vec::with_capacity(list.len());
    for (i, w) in list.iter().enumerate() {
        let entries = w
            .as_array()
            .ok_or_else(|| WeightError::Malformed(format!("weight {i} is not an array")))?;
        let v: Option<Vec<BigInt>> = entries.iter().map(int_from_json).collect();
        weights.push(v.ok_or_else(|| {
            WeightError::Malformed(format!("weight {i} has a non-integer entry"))
        })?);
    }
    WeightSystem::new(lattice_rank, weights, trivial_dim)
}

/// `r - rank(α)`.
pub fn complexity(ws: &WeightSystem) -> usize {
    ws.len() - ws.rank()
}

/// What [`effective_reduction`] did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectiveReport {
    pub original_lattice_rank: usize,
    pub effective_rank: usize,
    /// Dimension of the noneffective kernel torus.
    pub kernel_dim: usize,
}

impl EffectiveReport {
    pub fn was_effective(&self) -> bool {
        self.kernel_dim == 0
    }
}

/// Re-expresses the weights in a basis of the saturation of their integer span.
///
/// With `U·W·V = D` the Smith form of the weight matrix, the rows of `U·W`
/// past the rank vanish, so the leading rows give coordinates in a lattice
/// basis of the saturated span.
pub fn effective_reduction(ws: &WeightSystem) -> (WeightSystem, EffectiveReport) {
    let (reduced, report) = effective_part(ws);
    (reduced.into_owned(), report)
}

/// As [`effective_reduction`], borrowing when nothing changes.
pub(crate) fn effective_part(ws: &WeightSystem) -> (Cow<'_, WeightSystem>, EffectiveReport) {
    let k = ws.lattice_rank;
    let rank = ws.rank();
    let report = EffectiveReport {
        original_lattice_rank: k,
        effective_rank: rank,
        kernel_dim: k - rank,
    };
    if rank == k {
        return (Cow::Borrowed(ws), report);
    }
    let w = ws.weight_matrix();
    let snf = linalg::smith_normal_form(&w);
    let coords = snf.u.mul(&w).expect("shapes agree");
    let weights: Vec<Vec<BigInt>> = (0..coords.cols())
        .map(|c| (0..rank).map(|r| coords[(r, c)].clone()).collect())
        .collect();
    let reduced = WeightSystem::new(rank, weights, ws.trivial_dim).expect("lengths agree");
    (Cow::Owned(reduced), report)
}

/// The Smith diagonal `(d_1, ..., d_n)` of a complexity-zero effective system.
/// Up to weak equivalence the system is `α_i = d_i e_i` with `d_1 | ... | d_n`.
pub fn snf_canonical_form(ws: &WeightSystem) -> Result<Vec<BigInt>, WeightError> {
    let rank = ws.rank();
    let c = ws.len() - rank;
    if c > 0 {
        return Err(WeightError::PositiveComplexity(c));
    }
    if rank != ws.lattice_rank {
        return Err(WeightError::NotEffective {
            rank,
            lattice_rank: ws.lattice_rank,
        });
    }
    Ok(linalg::smith_diagonal(&ws.weight_matrix()))
}

/// Type `(d, {n_1, ..., n_s}, l)` of a Leontief representation with the
/// assignment of weight indices to parts: label 0 is the complexity-zero part,
/// label `i >= 1` is the `i`-th complexity-one block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeontiefType {
    pub d: usize,
    pub blocks: Vec<usize>,
    pub l: usize,
    pub assignment: BTreeMap<usize, usize>,
}

impl LeontiefType {
    /// Builds a type from the complexity-zero indices and the block index sets.
    /// Blocks are ordered by size, then by smallest member.
    pub fn from_parts(coloops: &[usize], mut blocks: Vec<Vec<usize>>, l: usize) -> Self {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let mut assignment = BTreeMap::new();
        for &i in coloops {
            assignment.insert(i, 0);
        }
        for (label, block) in blocks.iter().enumerate() {
            for &i in block {
                assignment.insert(i, label + 1);
            }
        }
        LeontiefType {
            d: coloops.len(),
            blocks: blocks.iter().map(Vec::len).collect(),
            l,
            assignment,
        }
    }

    pub fn is_totally(&self) -> bool {
        self.d == 0
    }

    /// Indices assigned to the complexity-zero part.
    pub fn coloop_indices(&self) -> Vec<usize> {
        self.members(0)
    }

    /// Indices of the `i`-th block (1-based, matching the labels).
    pub fn members(&self, label: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .filter(|&(_, &lab)| lab == label)
            .map(|(&i, _)| i)
            .collect()
    }

    /// `(d, sorted blocks, l)`, forgetting the assignment.
    pub fn signature(&self) -> (usize, Vec<usize>, usize) {
        let mut b = self.blocks.clone();
        b.sort_unstable();
        (self.d, b, self.l)
    }

    pub fn to_json(&self) -> Value {
        let assignment: serde_json::Map<String, Value> = self
            .assignment
            .iter()
            .map(|(i, lab)| (i.to_string(), Value::from(*lab)))
            .collect();
        json!({
            "d": self.d,
            "blocks": self.blocks,
            "l": self.l,
            "assignment": assignment,
        })
    }
}
