//! Leontief substitution systems `Ax = b, x >= 0`.
//!
//! Everything here is decided by exact basis enumeration, which is fine for
//! the small systems this crate targets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::linalg::{self, IntMatrix, RatVector};
use crate::weights::{int_from_json, int_to_json, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("A has {rows} rows but b has length {b_len}")]
    DimensionMismatch { rows: usize, b_len: usize },
    #[error("malformed LP JSON: {0}")]
    Malformed(String),
    #[error("system is degenerate at vertex {vertex:?}: {zeros} zero coordinates, polyhedron has dimension {dim}")]
    Degenerate {
        vertex: Vec<String>,
        zeros: usize,
        dim: usize,
    },
    #[error("polyhedron is empty")]
    Infeasible,
    #[error("block system needs at least one block")]
    NoBlocks,
    #[error("block sizes must be positive, got {0:?}")]
    EmptyBlock(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeontiefSystem {
    pub a: IntMatrix,
    pub b: Vec<BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason")]
pub enum LeontiefStatus {
    Totally,
    NonTotally,
    NotLeontief(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyhedronReport {
    pub feasible: bool,
    /// Sorted lexicographically.
    pub vertices: Vec<RatVector>,
    pub bounded: bool,
    /// Dimension of the affine hull; `None` when empty.
    pub dim: Option<usize>,
    pub simple: bool,
    /// Coordinates vanishing on all of `P`.
    pub implicit_zeros: Vec<usize>,
}

impl LeontiefSystem {
    pub fn new(a: IntMatrix, b: Vec<BigInt>) -> Self {
        LeontiefSystem { a, b }
    }

    pub fn from_ints(rows: &[Vec<i64>], cols: usize, b: &[i64]) -> Result<Self, LpError> {
        let a = IntMatrix::from_rows(rows, cols).map_err(|e| LpError::Malformed(e.to_string()))?;
        Ok(LeontiefSystem {
            a,
            b: b.iter().map(|&x| BigInt::from(x)).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    fn check_shape(&self) -> Result<(), LpError> {
        if self.a.rows() != self.b.len() {
            return Err(LpError::DimensionMismatch {
                rows: self.a.rows(),
                b_len: self.b.len(),
            });
        }
        Ok(())
    }

    fn rhs(&self) -> RatVector {
        RatVector::from_ints(self.b.iter().cloned())
    }

    pub fn to_json(&self) -> Value {
        let a: Vec<Vec<Value>> = self
            .a
            .to_rows()
            .iter()
            .map(|r| r.iter().map(int_to_json).collect())
            .collect();
        let b: Vec<Value> = self.b.iter().map(int_to_json).collect();
        json!({ "A": a, "b": b })
    }
}

/// Parses `{"A": [[...], ...], "b": [...]}`. An empty `A` needs an explicit
/// `"cols"` field to know the number of variables.
pub fn parse_lp(raw: &str) -> Result<LeontiefSystem, LpError> {
    let doc: Value = serde_json::from_str(raw).map_err(|e| LpError::Malformed(e.to_string()))?;
    lp_from_json(&doc)
}

pub fn lp_from_json(doc: &Value) -> Result<LeontiefSystem, LpError> {
    let ints = |v: &Value, what: &str| -> Result<Vec<BigInt>, LpError> {
        v.as_array()
            .ok_or_else(|| LpError::Malformed(format!("{what} must be an array")))?
            .iter()
            .map(|x| {
                int_from_json(x)
                    .ok_or_else(|| LpError::Malformed(format!("{what} has a non-integer entry")))
            })
            .collect()
    };
    let rows = doc
        .get("A")
        .and_then(Value::as_array)
        .ok_or_else(|| LpError::Malformed("`A` must be an array of rows".into()))?;
    let rows: Vec<Vec<BigInt>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| ints(r, &format!("row {i} of `A`")))
        .collect::<Result<_, _>>()?;
    let cols = match (rows.first(), doc.get("cols").and_then(Value::as_u64)) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c as usize,
        (None, None) => 0,
    };
    let a = IntMatrix::from_rows(&rows, cols).map_err(|e| LpError::Malformed(e.to_string()))?;
    let b = ints(
        doc.get("b")
            .ok_or_else(|| LpError::Malformed("missing field `b`".into()))?,
        "`b`",
    )?;
    Ok(LeontiefSystem { a, b })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Basic feasible solutions of `Ax = b, x >= 0`, sorted and deduplicated.
fn basic_feasible_solutions(a: &IntMatrix, b: &RatVector) -> Vec<RatVector> {
    let rank = linalg::rational_rank(a);
    let f = a.cols();
    let mut found = BTreeSet::new();
    for basis in subsets(f, rank) {
        if linalg::rational_rank(&a.select_columns(&basis)) != rank {
            continue;
        }
        let zero: BTreeSet<usize> = (0..f).filter(|i| !basis.contains(i)).collect();
        if let Some(x) = linalg::solve_affine(a, b, &zero).expect("shapes checked") {
            if x.0.iter().all(|q| !q.is_negative()) {
                found.insert(x);
            }
        }
    }
    found.into_iter().collect()
}

/// Extreme rays of `{Ax = 0, x >= 0}`, normalized to `Σx = 1`.
fn extreme_rays(a: &IntMatrix) -> Vec<RatVector> {
    let f = a.cols();
    let mut rows = a.to_rows();
    rows.push(vec![BigInt::from(1); f]);
    let stacked = IntMatrix::from_rows(&rows, f).expect("rectangular");
    let mut rhs = vec![BigInt::zero(); a.rows()];
    rhs.push(BigInt::from(1));
    basic_feasible_solutions(&stacked, &RatVector::from_ints(rhs))
}

pub fn enumerate_vertices(sys: &LeontiefSystem) -> Result<PolyhedronReport, LpError> {
    sys.check_shape()?;
    let f = sys.cols();
    let vertices = basic_feasible_solutions(&sys.a, &sys.rhs());
    let rays = extreme_rays(&sys.a);
    let bounded = rays.is_empty();
    if vertices.is_empty() {
        return Ok(PolyhedronReport {
            feasible: false,
            vertices,
            bounded,
            dim: None,
            simple: false,
            implicit_zeros: Vec::new(),
        });
    }
    let implicit_zeros: Vec<usize> = (0..f)
        .filter(|&i| vertices.iter().chain(&rays).all(|v| v.0[i].is_zero()))
        .collect();
    let live: Vec<usize> = (0..f).filter(|i| !implicit_zeros.contains(i)).collect();
    let dim = live.len() - linalg::rational_rank(&sys.a.select_columns(&live));
    let simple = vertices
        .iter()
        .all(|v| zero_set(v, &implicit_zeros).len() == dim);
    Ok(PolyhedronReport {
        feasible: true,
        vertices,
        bounded,
        dim: Some(dim),
        simple,
        implicit_zeros,
    })
}

fn zero_set(v: &RatVector, skip: &[usize]) -> Vec<usize> {
    (0..v.dim())
        .filter(|i| v.0[*i].is_zero() && !skip.contains(i))
        .collect()
}

pub fn check_leontief(sys: &LeontiefSystem) -> Result<LeontiefStatus, LpError> {
    sys.check_shape()?;
    if let Some(i) = sys.b.iter().position(Signed::is_negative) {
        return Ok(LeontiefStatus::NotLeontief(format!(
            "b has a negative entry at row {i}"
        )));
    }
    for c in 0..sys.cols() {
        let positives = sys.a.column(c).iter().filter(|x| x.is_positive()).count();
        if positives >= 2 {
            return Ok(LeontiefStatus::NotLeontief(format!(
                "column {c} has {positives} positive entries"
            )));
        }
    }
    let report = enumerate_vertices(sys)?;
    Ok(if !report.feasible {
        LeontiefStatus::NotLeontief("the polyhedron is empty".into())
    } else if report.bounded {
        LeontiefStatus::Totally
    } else {
        LeontiefStatus::NonTotally
    })
}

/// Nerve of the facets `P ∩ {x_i = 0}`: a set of coordinates spans a simplex
/// iff some vertex vanishes on all of them. Coordinates that vanish on all of
/// `P` or never vanish are left out.
pub fn nerve_complex(sys: &LeontiefSystem) -> Result<SimplicialComplex, LpError> {
    let report = enumerate_vertices(sys)?;
    let dim = report.dim.ok_or(LpError::Infeasible)?;
    for v in &report.vertices {
        let zeros = zero_set(v, &report.implicit_zeros).len();
        if zeros != dim {
            return Err(LpError::Degenerate {
                vertex: v.0.iter().map(ToString::to_string).collect(),
                zeros,
                dim,
            });
        }
    }
    let facets = report
        .vertices
        .iter()
        .map(|v| zero_set(v, &report.implicit_zeros));
    Ok(SimplicialComplex::new(facets, std::iter::empty()).expect("facets carry no ghosts"))
}

/// The system whose polyhedron is `Δ^{k_1-1} × ... × Δ^{k_s-1} × R^d_{≥0}`:
/// block `i` has a row of ones over its `k_i` columns, the last `d` columns
/// are zero.
pub fn block_system(k_list: &[usize], d: usize) -> Result<LeontiefSystem, LpError> {
    if k_list.is_empty() {
        return Err(LpError::NoBlocks);
    }
    if k_list.contains(&0) {
        return Err(LpError::EmptyBlock(k_list.to_vec()));
    }
    let f: usize = k_list.iter().sum::<usize>() + d;
    let mut a = IntMatrix::zeros(k_list.len(), f);
    let mut col = 0;
    for (row, &k) in k_list.iter().enumerate() {
        for c in col..col + k {
            a[(row, c)] = BigInt::from(1);
        }
        col += k;
    }
    Ok(LeontiefSystem {
        a,
        b: vec![BigInt::from(1); k_list.len()],
    })
}

/// Restriction of the standard representation of `T^f` to the subtorus with
/// Lie algebra `ker A`. With `U·A·V = D`, the last `f - rank` columns of `V`
/// are a lattice basis of `ker A ∩ Z^f`, so `e_i` restricts to row `i` of `V`
/// over those columns.
pub fn restrict_standard_weights(sys: &LeontiefSystem) -> WeightSystem {
    let f = sys.cols();
    let snf = linalg::smith_normal_form(&sys.a);
    let rank = snf.rank();
    let weights: Vec<Vec<BigInt>> = (0..f)
        .map(|i| (rank..f).map(|j| snf.v[(i, j)].clone()).collect())
        .collect();
    WeightSystem::new(f - rank, weights, 0).expect("rows of V have equal length")
}

/// Vertex as exact integers if possible, otherwise as reduced fractions.
pub fn vertex_to_json(v: &RatVector) -> Value {
    match v.to_integers() {
        Some(ints) => Value::from(ints.iter().map(int_to_json).collect::<Vec<_>>()),
        None => serde_json::to_value(v).expect("serializable"),
    }
}

impl PolyhedronReport {
    pub fn to_json(&self) -> Value {
        json!({
            "feasible": self.feasible,
            "vertices": self.vertices.iter().map(vertex_to_json).collect::<Vec<_>>(),
            "bounded": self.bounded,
            "dim": self.dim,
            "simple": self.simple,
            "implicit_zeros": self.implicit_zeros,
        })
    }
}

/// Sum of a vertex's coordinates, handy for sanity checks on simplices.
pub fn coordinate_sum(v: &RatVector) -> BigRational {
    v.0.iter().fold(BigRational::zero(), |acc, q| acc + q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::PseudomanifoldStatus;

    fn sys(rows: &[&[i64]], b: &[i64]) -> LeontiefSystem {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        LeontiefSystem::from_ints(&rows, cols, b).unwrap()
    }

    #[test]
    fn check_examples() {
        assert_eq!(
            check_leontief(&sys(&[&[1, 1, 1]], &[1])).unwrap(),
            LeontiefStatus::Totally
        );
        assert_eq!(
            check_leontief(&sys(&[&[1, 1, 0]], &[1])).unwrap(),
            LeontiefStatus::NonTotally
        );
        assert!(matches!(
            check_leontief(&sys(&[&[1, 0], &[1, 1]], &[1, 1])).unwrap(),
            LeontiefStatus::NotLeontief(r) if r.contains("column 0")
        ));
        assert!(matches!(
            check_leontief(&sys(&[&[1, 1]], &[-1])).unwrap(),
            LeontiefStatus::NotLeontief(_)
        ));
        // Feasibility fails even though the sign pattern is fine.
        assert!(matches!(
            check_leontief(&sys(&[&[-1, -1]], &[1])).unwrap(),
            LeontiefStatus::NotLeontief(r) if r.contains("empty")
        ));
        let bad = LeontiefSystem::new(IntMatrix::zeros(1, 2), vec![]);
        assert!(matches!(
            check_leontief(&bad),
            Err(LpError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simplex_vertices() {
        let r = enumerate_vertices(&sys(&[&[1, 1, 1]], &[1])).unwrap();
        assert_eq!(r.vertices.len(), 3);
        assert!(r.bounded && r.simple);
        assert_eq!(r.dim, Some(2));
        assert_eq!(r.vertices[2], RatVector::from_ints([1, 0, 0]));
    }

    #[test]
    fn fractional_vertex() {
        let r = enumerate_vertices(&sys(&[&[2, 3]], &[1])).unwrap();
        assert_eq!(r.vertices.len(), 2);
        assert!(r.vertices.iter().any(|v| v.to_integers().is_none()));
    }

    #[test]
    fn block_product_vertices() {
        let s = block_system(&[2, 2], 1).unwrap();
        assert_eq!((s.rows(), s.cols()), (2, 5));
        let r = enumerate_vertices(&s).unwrap();
        assert_eq!(r.vertices.len(), 4);
        assert!(!r.bounded);
        assert_eq!(r.dim, Some(3));
        assert!(block_system(&[], 2).is_err());
        assert!(block_system(&[2, 0], 0).is_err());
    }

    #[test]
    fn nerve_examples() {
        let n = nerve_complex(&sys(&[&[1, 1, 1]], &[1])).unwrap();
        assert_eq!(n.facets(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);

        let n = nerve_complex(&sys(&[&[1, 1, 0]], &[1])).unwrap();
        assert_eq!(n.facets(), &[vec![0, 2], vec![1, 2]]);
        assert_eq!(
            n.pseudomanifold_status().unwrap().status,
            PseudomanifoldStatus::WithBoundary
        );

        let n = nerve_complex(&block_system(&[2, 2], 0).unwrap()).unwrap();
        assert_eq!(n.facets().len(), 4);
        assert_eq!(
            n.pseudomanifold_status().unwrap().status,
            PseudomanifoldStatus::Closed
        );
    }

    #[test]
    fn degenerate_nerve_is_rejected() {
        // Segment from (1,0,0) to (0,1,1): the first vertex sits on two facets.
        let s = sys(&[&[1, 1, 0], &[1, 0, 1]], &[1, 1]);
        let report = enumerate_vertices(&s).unwrap();
        assert_eq!(report.dim, Some(1));
        assert!(!report.simple);
        assert!(matches!(
            nerve_complex(&s),
            Err(LpError::Degenerate { zeros: 2, .. })
        ));
    }

    #[test]
    fn restricted_weights() {
        let w = restrict_standard_weights(&block_system(&[3], 0).unwrap());
        assert_eq!((w.lattice_rank(), w.len(), w.rank()), (2, 3, 2));

        let w = restrict_standard_weights(&block_system(&[2], 1).unwrap());
        assert_eq!((w.lattice_rank(), w.len(), w.rank()), (2, 3, 2));

        let id = LeontiefSystem::new(IntMatrix::identity(3), vec![BigInt::from(1); 3]);
        let w = restrict_standard_weights(&id);
        assert_eq!((w.lattice_rank(), w.len(), w.trivial_dim()), (0, 0, 6));
    }

    #[test]
    fn json_roundtrip() {
        let s = block_system(&[2, 1], 1).unwrap();
        let back = lp_from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(parse_lp(r#"{"A": [[1, "x"]], "b": [1]}"#).is_err());
    }
}
