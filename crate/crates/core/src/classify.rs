//! Deciding whether `V/T` is a closed manifold, a manifold with boundary, or
//! neither.
//!
//! Two independent routes are provided:
//!
//! * [`classify_structural`] splits the weight matroid into connected
//!   components. Coloops form the complexity-zero part, components that are
//!   single circuits form complexity-one blocks in general position, and any
//!   other component rules out a manifold quotient.
//! * [`classify_pseudomanifold`] builds the independence complex `K(α)`,
//!   counts facets around each ridge, and factors the complex as a join of
//!   simplex boundaries and a simplex by its minimal non-faces.
//!
//! Both routes reduce a non-effective system to its effective part first.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::complex::{ComplexError, PseudomanifoldStatus, SimplicialComplex};
use crate::linalg;
use crate::matroid::{mask_to_vec, LinearMatroid, MatroidError};
use crate::weights::{effective_part, EffectiveReport, LeontiefType, WeightSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Matroid(#[from] MatroidError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("zero exponent at position {0}; zero weights belong to the trivial part")]
    ZeroExponent(usize),
    #[error("charge needs nonzero weights, got ({0}, {1})")]
    ZeroChargeWeight(i64, i64),
    #[error("not a complexity-one block in general position: {0}")]
    NotGeneralPosition(String),
    #[error(
        "independence complex does not factor as a join of simplex boundaries and a simplex: {0}"
    )]
    JoinFactorization(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum VerdictKind {
    ClosedManifold,
    ManifoldWithBoundary,
    NotManifold,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            VerdictKind::ClosedManifold => "ClosedManifold",
            VerdictKind::ManifoldWithBoundary => "ManifoldWithBoundary",
            VerdictKind::NotManifold => "NotManifold",
        };
        f.write_str(s)
    }
}

/// A ridge `J` of `K(α)` lying in a number of facets other than 1 or 2,
/// with the flat `A_J` of weights inside the hyperplane spanned by `J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub ridge: Vec<usize>,
    pub facet_count: usize,
    pub flat: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitVerdict {
    pub kind: VerdictKind,
    /// Dimension of the orbit space `V/T`.
    pub model_dim: usize,
    pub leontief: Option<LeontiefType>,
    pub witness: Option<Witness>,
    pub reduction: EffectiveReport,
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl OrbitVerdict {
    pub fn has_boundary(&self) -> bool {
        self.kind == VerdictKind::ManifoldWithBoundary
    }

    /// Homeomorphism type of the orbit space.
    pub fn model(&self) -> String {
        match self.kind {
            VerdictKind::ClosedManifold => {
                format!("closed manifold ℝ{}", superscript(self.model_dim))
            }
            VerdictKind::ManifoldWithBoundary => {
                let rest = self.model_dim - 1;
                format!(
                    "manifold with boundary: half-space ℝ≥0 × ℝ{} of dimension {}",
                    superscript(rest),
                    self.model_dim
                )
            }
            VerdictKind::NotManifold => {
                "not a topological manifold (not even a homology manifold)".to_string()
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.to_string(),
            "model": self.model(),
            "model_dim": self.model_dim,
            "boundary": self.has_boundary(),
            "leontief": self.leontief.as_ref().map(LeontiefType::to_json),
            "witness": self.witness,
            "effective_reduction": self.reduction,
        })
    }
}

fn leontief_dim(lt: &LeontiefType) -> usize {
    lt.l + lt.d + lt.blocks.iter().map(|n| n + 1).sum::<usize>()
}

fn trivial_verdict(ws: &WeightSystem, reduction: EffectiveReport) -> OrbitVerdict {
    OrbitVerdict {
        kind: VerdictKind::ClosedManifold,
        model_dim: ws.trivial_dim(),
        leontief: Some(LeontiefType::from_parts(&[], Vec::new(), ws.trivial_dim())),
        witness: None,
        reduction,
    }
}

/// Structural route: decompose the weight matroid into connected components.
pub fn classify_structural(ws: &WeightSystem) -> Result<OrbitVerdict, ClassifyError> {
    let (ws, reduction) = effective_part(ws);
    let ws: &WeightSystem = &ws;
    if ws.is_empty() {
        return Ok(trivial_verdict(ws, reduction));
    }
    let m = LinearMatroid::from_weights(ws)?;
    let mut coloops = Vec::new();
    let mut blocks = Vec::new();
    let mut bad = None;
    for part in m.connected_components() {
        let mask = m.mask_of(&part)?;
        if part.len() == 1 {
            coloops.push(part[0]);
        } else if m.is_circuit_mask(mask) {
            blocks.push(part);
        } else if bad.is_none() {
            bad = Some(mask);
        }
    }
    let orbit_dim = ws.real_dim() - ws.lattice_rank();
    if let Some(component) = bad {
        return Ok(OrbitVerdict {
            kind: VerdictKind::NotManifold,
            model_dim: orbit_dim,
            leontief: None,
            witness: Some(structural_witness(&m, component)),
            reduction,
        });
    }
    let lt = LeontiefType::from_parts(&coloops, blocks, ws.trivial_dim());
    let kind = if lt.is_totally() {
        VerdictKind::ClosedManifold
    } else {
        VerdictKind::ManifoldWithBoundary
    };
    Ok(OrbitVerdict {
        kind,
        model_dim: leontief_dim(&lt),
        leontief: Some(lt),
        witness: None,
        reduction,
    })
}

/// In a connected component that is not a circuit, find a hyperplane of the
/// component missing at least three of its elements. Completing a basis of
/// that hyperplane by bases of the other components gives a ridge of `K(α)`
/// with at least three facets.
fn structural_witness(m: &LinearMatroid, component: u32) -> Witness {
    let full = ((1u64 << m.size()) - 1) as u32;
    let others = full & !component;
    let other_basis = greedy_basis(m, others);
    let comp_rank = m.rank_mask(component);
    let mut sub = component;
    // Walk independent subsets of the component of size rank - 1.
    let mut best: Option<Witness> = None;
    loop {
        if sub.count_ones() as usize == comp_rank - 1 && m.is_independent_mask(sub) {
            let hyper = m.closure_mask(sub) & component;
            let missing = (component & !hyper).count_ones() as usize;
            if missing >= 3 {
                let ridge = sub | other_basis;
                let candidate = Witness {
                    ridge: mask_to_vec(ridge),
                    facet_count: missing,
                    flat: mask_to_vec(m.closure_mask(ridge)),
                };
                if best.as_ref().is_none_or(|b| candidate.ridge < b.ridge) {
                    best = Some(candidate);
                }
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & component;
    }
    best.expect("a connected non-circuit component has a cocircuit of size at least 3")
}

fn greedy_basis(m: &LinearMatroid, set: u32) -> u32 {
    (0..m.size())
        .map(|i| 1u32 << i)
        .filter(|b| set & b != 0)
        .fold(0, |acc, b| {
            if m.is_independent_mask(acc | b) {
                acc | b
            } else {
                acc
            }
        })
}

/// The independence complex `K(α)`: facets are the bases of the weight matroid.
pub fn independence_complex(ws: &WeightSystem) -> Result<SimplicialComplex, ClassifyError> {
    let m = LinearMatroid::from_weights(ws)?;
    Ok(SimplicialComplex::new(m.bases(), [])?)
}

/// Pseudomanifold route: ridge counts of `K(α)` decide the kind, and the
/// Leontief type is read off the join factorization of the complex.
pub fn classify_pseudomanifold(ws: &WeightSystem) -> Result<OrbitVerdict, ClassifyError> {
    let (ws, reduction) = effective_part(ws);
    let ws: &WeightSystem = &ws;
    if ws.is_empty() {
        return Ok(trivial_verdict(ws, reduction));
    }
    let k = independence_complex(ws)?;
    let report = k.pseudomanifold_status()?;
    let orbit_dim = ws.real_dim() - ws.lattice_rank();
    if report.status == PseudomanifoldStatus::Neither {
        let ridge = report.witness.expect("Neither carries a witness");
        // A_J: weights that cannot complete J to a facet.
        let completing: BTreeSet<usize> = k
            .facets()
            .iter()
            .filter(|f| ridge.ridge.iter().all(|v| f.contains(v)))
            .flat_map(|f| f.iter().copied().filter(|v| !ridge.ridge.contains(v)))
            .collect();
        let flat = (0..ws.len()).filter(|v| !completing.contains(v)).collect();
        return Ok(OrbitVerdict {
            kind: VerdictKind::NotManifold,
            model_dim: orbit_dim,
            leontief: None,
            witness: Some(Witness {
                ridge: ridge.ridge,
                facet_count: ridge.containing_facet_count,
                flat,
            }),
            reduction,
        });
    }

    let lt = factor_join(&k, ws.len(), ws.trivial_dim())?;
    let kind = match report.status {
        PseudomanifoldStatus::Closed => VerdictKind::ClosedManifold,
        _ => VerdictKind::ManifoldWithBoundary,
    };
    if lt.is_totally() != (kind == VerdictKind::ClosedManifold) {
        return Err(ClassifyError::JoinFactorization(format!(
            "ridge scan says {kind} but the factorization has d = {}",
            lt.d
        )));
    }
    Ok(OrbitVerdict {
        kind,
        model_dim: leontief_dim(&lt),
        leontief: Some(lt),
        witness: None,
        reduction,
    })
}

/// Reads `K = ∂Δ_{A_1} * ... * ∂Δ_{A_s} * Δ_D` off the minimal non-faces
/// (which must be the disjoint sets `A_i`) and checks the rebuilt join
/// against `K`.
fn factor_join(k: &SimplicialComplex, r: usize, l: usize) -> Result<LeontiefType, ClassifyError> {
    let mnf = k.minimal_non_faces();
    let mut seen = BTreeSet::new();
    for set in &mnf {
        for &v in set {
            if !seen.insert(v) {
                return Err(ClassifyError::JoinFactorization(format!(
                    "minimal non-faces overlap at vertex {v}"
                )));
            }
        }
    }
    let cone: Vec<usize> = (0..r).filter(|v| !seen.contains(v)).collect();
    let mut rebuilt = if cone.is_empty() {
        SimplicialComplex::new([], [])?
    } else {
        SimplicialComplex::full_simplex(&cone)?
    };
    for set in &mnf {
        rebuilt = rebuilt.join(&SimplicialComplex::boundary_of_simplex(set)?)?;
    }
    if rebuilt.facets() != k.facets() {
        return Err(ClassifyError::JoinFactorization(
            "rebuilt join differs from the complex".into(),
        ));
    }
    Ok(LeontiefType::from_parts(&cone, mnf, l))
}

/// Orbit space of a circle acting on `C^n` with the given exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CircleQuotient {
    /// `n = 1`: the half-line.
    HalfLine,
    /// `n = 2`: `R^3`.
    R3,
    /// `n >= 3`: not a homology manifold.
    NotHomologyManifold,
}

pub fn circle_classify(exponents: &[i64]) -> Result<CircleQuotient, ClassifyError> {
    if let Some(i) = exponents.iter().position(|&e| e == 0) {
        return Err(ClassifyError::ZeroExponent(i));
    }
    Ok(match exponents.len() {
        0 | 1 => CircleQuotient::HalfLine,
        2 => CircleQuotient::R3,
        _ => CircleQuotient::NotHomologyManifold,
    })
}

/// Charge of an isolated fixed point of a circle action on an oriented
/// 4-manifold, from its oriented tangent weights `(k, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Charge {
    Plus,
    Minus,
    /// Some weight has absolute value above 1.
    DisconnectedStabilizers,
}

pub fn fixed_point_charge(k: i64, l: i64) -> Result<Charge, ClassifyError> {
    if k == 0 || l == 0 {
        return Err(ClassifyError::ZeroChargeWeight(k, l));
    }
    if k.unsigned_abs() > 1 || l.unsigned_abs() > 1 {
        return Ok(Charge::DisconnectedStabilizers);
    }
    Ok(if k == l { Charge::Plus } else { Charge::Minus })
}

/// The primitive linear relation `Σ c_i α_i = 0` of a general-position
/// complexity-one block, with weights flipped so every `c_i > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralPositionRelation {
    #[serde(serialize_with = "crate::weights::ser_ints")]
    pub coefficients: Vec<BigInt>,
    /// `flipped[i]` is true when `α_i` had to be replaced by `-α_i`.
    pub flipped: Vec<bool>,
}

pub fn general_position_relation(
    ws: &WeightSystem,
) -> Result<GeneralPositionRelation, ClassifyError> {
    let r = ws.len();
    let rank = ws.rank();
    if r != rank + 1 {
        return Err(ClassifyError::NotGeneralPosition(format!(
            "complexity is {}, expected 1",
            r - rank
        )));
    }
    let kernel = linalg::kernel_basis(&ws.weight_matrix());
    let relation = kernel[0].primitive();
    if let Some(i) = relation.iter().position(Zero::is_zero) {
        return Err(ClassifyError::NotGeneralPosition(format!(
            "weight {i} does not take part in the relation"
        )));
    }
    debug_assert!(relation
        .iter()
        .fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c))
        .is_one());
    Ok(GeneralPositionRelation {
        flipped: relation.iter().map(Signed::is_negative).collect(),
        coefficients: relation.iter().map(Signed::abs).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(k: usize, w: &[&[i64]], l: usize) -> WeightSystem {
        WeightSystem::new(k, w.iter().map(|v| v.to_vec()).collect(), l).unwrap()
    }

    fn both(s: &WeightSystem) -> (OrbitVerdict, OrbitVerdict) {
        (
            classify_structural(s).unwrap(),
            classify_pseudomanifold(s).unwrap(),
        )
    }

    #[test]
    fn torus_on_c3_is_r4() {
        let s = ws(2, &[&[1, 0], &[0, 1], &[1, 1]], 0);
        let (a, b) = both(&s);
        for v in [&a, &b] {
            assert_eq!(v.kind, VerdictKind::ClosedManifold);
            assert_eq!(v.model_dim, 4);
            assert_eq!(v.leontief.as_ref().unwrap().blocks, vec![3]);
        }
        assert_eq!(a.model(), "closed manifold ℝ⁴");
    }

    #[test]
    fn standard_torus_is_half_space() {
        let s = ws(2, &[&[1, 0], &[0, 1]], 0);
        let (a, b) = both(&s);
        for v in [&a, &b] {
            assert_eq!(v.kind, VerdictKind::ManifoldWithBoundary);
            assert_eq!(v.model_dim, 2);
            assert_eq!(v.leontief.as_ref().unwrap().d, 2);
        }
    }

    #[test]
    fn uniform_two_four_is_not_a_manifold() {
        let s = ws(2, &[&[1, 0], &[0, 1], &[1, 1], &[1, 2]], 0);
        let (a, b) = both(&s);
        assert_eq!(a.kind, VerdictKind::NotManifold);
        assert_eq!(b.kind, VerdictKind::NotManifold);
        assert_eq!(a.model_dim, b.model_dim);
        let w = b.witness.unwrap();
        assert_eq!(w.ridge, vec![0]);
        assert_eq!(w.facet_count, 3);
        assert_eq!(w.flat, vec![0]);
        let w = a.witness.unwrap();
        assert!(w.facet_count >= 3);
        assert_eq!(w.ridge.len(), 1);
    }

    #[test]
    fn witness_flat_collects_parallel_weights() {
        // three parallel lines plus an independent direction
        let s = ws(2, &[&[1, 0], &[2, 0], &[3, 0], &[0, 1]], 0);
        let (a, b) = both(&s);
        assert_eq!(a.kind, VerdictKind::NotManifold);
        let w = b.witness.unwrap();
        assert_eq!(w.ridge, vec![3]);
        assert_eq!(w.flat, vec![3]);
        assert_eq!(w.facet_count, 3);
        assert_eq!(a.witness.unwrap().flat, vec![3]);
    }

    #[test]
    fn trivial_and_noneffective_inputs() {
        let (a, b) = both(&WeightSystem::trivial(3));
        assert_eq!(a, b);
        assert_eq!(a.kind, VerdictKind::ClosedManifold);
        assert_eq!(a.model_dim, 3);

        let s = ws(3, &[&[1, 0, 0], &[1, 0, 0]], 1);
        let (a, b) = both(&s);
        assert_eq!(a.kind, VerdictKind::ClosedManifold);
        assert_eq!(a.model_dim, 4);
        assert_eq!(a.reduction.kernel_dim, 2);
        assert_eq!(b.model_dim, 4);
    }

    #[test]
    fn circle_trichotomy() {
        assert_eq!(circle_classify(&[5]).unwrap(), CircleQuotient::HalfLine);
        assert_eq!(circle_classify(&[1, -1]).unwrap(), CircleQuotient::R3);
        assert_eq!(
            circle_classify(&[1, 1, 2]).unwrap(),
            CircleQuotient::NotHomologyManifold
        );
        assert_eq!(
            circle_classify(&[1, 0]),
            Err(ClassifyError::ZeroExponent(1))
        );
    }

    #[test]
    fn charges() {
        assert_eq!(fixed_point_charge(1, 1).unwrap(), Charge::Plus);
        assert_eq!(fixed_point_charge(-1, -1).unwrap(), Charge::Plus);
        assert_eq!(fixed_point_charge(-1, 1).unwrap(), Charge::Minus);
        assert_eq!(fixed_point_charge(1, -1).unwrap(), Charge::Minus);
        assert_eq!(
            fixed_point_charge(2, 1).unwrap(),
            Charge::DisconnectedStabilizers
        );
        assert!(fixed_point_charge(0, 1).is_err());
    }

    #[test]
    fn relations() {
        let r = general_position_relation(&ws(2, &[&[1, 0], &[0, 1], &[1, 1]], 0)).unwrap();
        assert_eq!(r.coefficients, vec![BigInt::one(); 3]);
        assert_eq!(r.flipped, vec![false, false, true]);

        let r = general_position_relation(&ws(1, &[&[1], &[1]], 0)).unwrap();
        assert_eq!(r.coefficients, vec![BigInt::one(); 2]);
        assert_eq!(r.flipped, vec![false, true]);

        let r = general_position_relation(&ws(1, &[&[2], &[3]], 0)).unwrap();
        assert_eq!(r.coefficients, vec![BigInt::from(3), BigInt::from(2)]);

        assert!(general_position_relation(&ws(2, &[&[1, 0], &[0, 1]], 0)).is_err());
        assert!(general_position_relation(&ws(2, &[&[1, 0], &[2, 0], &[0, 1]], 0)).is_err());
    }
}
