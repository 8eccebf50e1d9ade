//! Vertex-to-facet conversion and exact facet certification.
//!
//! The facet enumerator is a double description run over exact integers;
//! see [`dd`]. Certification ([`is_facet`]) is independent of the
//! enumerator: validity over every vertex plus affine rank `dim - 1` of
//! the saturating set.

pub mod dd;

use std::path::PathBuf;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exact::{affine_rank, affine_rank_binary, IntegerInequality, Rational, RationalVector};
use crate::scenario::{vertex_matrix, Scenario};

pub use dd::{checkpoint_candidates, DdOptions, InsertionOrder};

#[derive(Debug, Error)]
pub enum PolytopeError {
    #[error("vertex list is empty")]
    EmptyInput,
    #[error("duplicate vertex at index {0}")]
    DuplicateVertex(usize),
    #[error("vertex set is not full-dimensional: affine rank {rank} < dimension {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("vertices have inconsistent lengths")]
    RaggedInput,
    #[error("dimension mismatch: inequality has {ineq}, polytope has {dim}")]
    DimensionMismatch { ineq: usize, dim: usize },
    #[error(
        "budget exceeded after inserting {inserted}/{total} constraints{}",
        checkpoint.as_ref().map(|p| format!(" (checkpoint: {})", p.display())).unwrap_or_default()
    )]
    BudgetExceeded {
        inserted: usize,
        total: usize,
        checkpoint: Option<PathBuf>,
    },
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}

/// V-representation of a full-dimensional polytope.
#[derive(Clone, Debug)]
pub struct VRep {
    vertices: Vec<RationalVector>,
    binary: Option<Vec<Vec<u8>>>,
    dim: usize,
}

impl VRep {
    /// Validates and wraps a vertex list: non-empty, no duplicates, equal
    /// lengths, and full-dimensional (affine rank equals the ambient
    /// dimension).
    pub fn new(vertices: Vec<RationalVector>) -> Result<Self, PolytopeError> {
        if vertices.is_empty() {
            return Err(PolytopeError::EmptyInput);
        }
        let dim = vertices[0].len();
        if vertices.iter().any(|v| v.len() != dim) {
            return Err(PolytopeError::RaggedInput);
        }
        let mut seen = std::collections::HashSet::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if !seen.insert(v.clone()) {
                return Err(PolytopeError::DuplicateVertex(i));
            }
        }
        let rank = affine_rank(&vertices);
        if rank != dim {
            return Err(PolytopeError::NotFullDimensional { rank, dim });
        }
        let binary = vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|r| {
                        if r.is_zero() {
                            Some(0u8)
                        } else if r.is_integer() && *r.numer() == BigInt::from(1) {
                            Some(1u8)
                        } else {
                            None
                        }
                    })
                    .collect::<Option<Vec<u8>>>()
            })
            .collect::<Option<Vec<Vec<u8>>>>();
        Ok(VRep { vertices, binary, dim })
    }

    /// Builds from 0/1 coordinate rows.
    pub fn from_binary(rows: Vec<Vec<u8>>) -> Result<Self, PolytopeError> {
        let vertices = rows
            .iter()
            .map(|r| RationalVector::from_integers(&r.iter().map(|&v| v as i64).collect::<Vec<_>>()))
            .collect();
        VRep::new(vertices)
    }

    /// All deterministic strategies of a scenario as a V-representation.
    pub fn from_scenario(scenario: &Scenario) -> Result<Self, PolytopeError> {
        VRep::from_binary(vertex_matrix(scenario))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    /// 0/1 coordinate rows, when every vertex is a 0/1 vector.
    pub fn binary_rows(&self) -> Option<&[Vec<u8>]> {
        self.binary.as_deref()
    }

    /// Sub-polytope on a vertex subset (input order preserved).
    pub fn select(&self, indices: &[usize]) -> Result<Self, PolytopeError> {
        VRep::new(indices.iter().map(|&i| self.vertices[i].clone()).collect())
    }
}

/// Facet of a polytope: the inequality plus the indices of the vertices
/// that saturate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub ineq: IntegerInequality,
    pub saturators: Vec<usize>,
}

/// Outcome of exact facet certification.
#[derive(Clone, Debug)]
pub struct FacetCertificate {
    /// Every vertex satisfies the inequality.
    pub valid: bool,
    /// Indices of vertices with `coeffs . v = bound`.
    pub saturators: Vec<usize>,
    /// Affine rank of the saturating vertex set (0 when empty).
    pub saturator_rank: usize,
    /// Rank a facet must reach: `dim - 1`.
    pub required_rank: usize,
}

impl FacetCertificate {
    pub fn is_facet(&self) -> bool {
        self.valid && !self.saturators.is_empty() && self.saturator_rank == self.required_rank
    }
}

/// Certifies whether `ineq` supports a facet of the polytope: all
/// vertices satisfy it and the saturating set has affine rank `dim - 1`.
pub fn is_facet(ineq: &IntegerInequality, vrep: &VRep) -> Result<FacetCertificate, PolytopeError> {
    if ineq.dim() != vrep.dim() {
        return Err(PolytopeError::DimensionMismatch {
            ineq: ineq.dim(),
            dim: vrep.dim(),
        });
    }
    let mut valid = true;
    let mut saturators = Vec::new();
    if let Some(rows) = vrep.binary_rows() {
        for (i, row) in rows.iter().enumerate() {
            let value = ineq.evaluate_binary(row);
            match value.cmp(&ineq.bound) {
                std::cmp::Ordering::Greater => valid = false,
                std::cmp::Ordering::Equal => saturators.push(i),
                std::cmp::Ordering::Less => {}
            }
        }
    } else {
        let bound = Rational::from(ineq.bound.clone());
        for (i, v) in vrep.vertices().iter().enumerate() {
            let value = ineq.evaluate(v).expect("dimension already checked");
            match value.cmp(&bound) {
                std::cmp::Ordering::Greater => valid = false,
                std::cmp::Ordering::Equal => saturators.push(i),
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let saturator_rank = if saturators.is_empty() {
        0
    } else if let Some(rows) = vrep.binary_rows() {
        let selected: Vec<&[u8]> = saturators.iter().map(|&i| rows[i].as_slice()).collect();
        affine_rank_binary(&selected)
    } else {
        let selected: Vec<RationalVector> =
            saturators.iter().map(|&i| vrep.vertices()[i].clone()).collect();
        affine_rank(&selected)
    };
    Ok(FacetCertificate {
        valid,
        saturators,
        saturator_rank,
        required_rank: vrep.dim() - 1,
    })
}

/// Exact maximum of `coeffs . v` over a vertex list, with every index
/// attaining it.
pub fn max_over_vertices(
    ineq: &IntegerInequality,
    vertices: &[RationalVector],
) -> (Rational, Vec<usize>) {
    assert!(!vertices.is_empty());
    let mut best: Option<Rational> = None;
    let mut argmax = Vec::new();
    for (i, v) in vertices.iter().enumerate() {
        let value = ineq.evaluate(v).expect("dimension mismatch in max_over_vertices");
        match &best {
            None => {
                best = Some(value);
                argmax.push(i);
            }
            Some(b) => match value.cmp(b) {
                std::cmp::Ordering::Greater => {
                    best = Some(value);
                    argmax.clear();
                    argmax.push(i);
                }
                std::cmp::Ordering::Equal => argmax.push(i),
                std::cmp::Ordering::Less => {}
            },
        }
    }
    (best.expect("non-empty vertex list"), argmax)
}

/// `max_over_vertices` for 0/1 coordinate rows.
pub fn max_over_binary_rows(ineq: &IntegerInequality, rows: &[Vec<u8>]) -> (BigInt, Vec<usize>) {
    assert!(!rows.is_empty());
    let mut best: Option<BigInt> = None;
    let mut argmax = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let value = ineq.evaluate_binary(row);
        match &best {
            None => {
                best = Some(value);
                argmax.push(i);
            }
            Some(b) => match value.cmp(b) {
                std::cmp::Ordering::Greater => {
                    best = Some(value);
                    argmax.clear();
                    argmax.push(i);
                }
                std::cmp::Ordering::Equal => argmax.push(i),
                std::cmp::Ordering::Less => {}
            },
        }
    }
    (best.expect("non-empty row list"), argmax)
}

/// Complete irredundant facet list of the convex hull of the vertex set.
pub fn enumerate_facets(vrep: &VRep, opts: &DdOptions) -> Result<Vec<Facet>, PolytopeError> {
    dd::run(vrep, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntegerInequality;

    fn square() -> VRep {
        VRep::from_binary(vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn vrep_rejects_duplicates_and_degenerate_input() {
        let dup = VRep::from_binary(vec![vec![0, 0], vec![0, 1], vec![0, 0]]);
        assert!(matches!(dup, Err(PolytopeError::DuplicateVertex(2))));
        let flat = VRep::from_binary(vec![vec![0, 0], vec![1, 1]]);
        assert!(matches!(flat, Err(PolytopeError::NotFullDimensional { rank: 1, dim: 2 })));
    }

    #[test]
    fn unit_square_facet_certificates() {
        let v = square();
        // x0 <= 1 is a facet
        let f = is_facet(&IntegerInequality::from_i64(&[1, 0], 1).unwrap(), &v).unwrap();
        assert!(f.is_facet());
        assert_eq!(f.saturators, vec![2, 3]);
        // x0 + x1 <= 2 is valid but only supports a vertex
        let c = is_facet(&IntegerInequality::from_i64(&[1, 1], 2).unwrap(), &v).unwrap();
        assert!(c.valid && !c.is_facet());
        assert_eq!(c.saturators, vec![3]);
        // x0 <= 0 is violated
        let w = is_facet(&IntegerInequality::from_i64(&[1, 0], 0).unwrap(), &v).unwrap();
        assert!(!w.valid && !w.is_facet());
    }

    #[test]
    fn max_over_vertices_reports_all_argmax() {
        let v = square();
        let ineq = IntegerInequality::from_i64(&[1, 0], 5).unwrap();
        let (max, argmax) = max_over_vertices(&ineq, v.vertices());
        assert_eq!(max, Rational::from(BigInt::from(1)));
        assert_eq!(argmax, vec![2, 3]);
        let (bmax, bargmax) = max_over_binary_rows(&ineq, v.binary_rows().unwrap());
        assert_eq!(bmax, BigInt::from(1));
        assert_eq!(bargmax, argmax);
    }
}
