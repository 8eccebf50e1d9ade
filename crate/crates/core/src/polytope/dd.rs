//! Double description: incremental conversion of a V-representation into
//! the complete facet list.
//!
//! Vertices are homogenized to generators `(1, v)`. The engine maintains
//! the extreme rays of the dual cone `{ y : y . (1, v_i) >= 0 }` while the
//! generator constraints are inserted one at a time; the surviving rays
//! `(c0, c)` are exactly the facets `(-c) . p <= c0` of the polytope.
//!
//! Arithmetic is exact throughout: rays are gcd-reduced integer vectors,
//! adjacency is decided by a fraction-free rank check on the common tight
//! set. The run starts on `i128` and restarts on `BigInt` in the unlikely
//! event of an overflow. Insertion steps are sequential; within a step,
//! candidate-pair tests and new-ray bookkeeping run in parallel over
//! immutable snapshots, so results do not depend on the parallel schedule.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exact::{rank_flat, reduce_by_gcd, solve_square, ExactInt, IntegerInequality, Overflow, Rational, RationalVector};

use super::{Facet, PolytopeError, VRep};

/// Order in which vertex constraints are inserted.
///
/// Lexicographic is the default: on 0/1 strategy polytopes it keeps the
/// intermediate cones small, while max-cutoff blows them up by orders of
/// magnitude.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InsertionOrder {
    /// Constraints sorted lexicographically by coordinate row.
    #[default]
    Lexicographic,
    /// At each step pick the constraint violated by the most current rays.
    MaxCutoff,
    /// Input order.
    Input,
}

#[derive(Clone, Debug, Default)]
pub struct DdOptions {
    pub ordering: InsertionOrder,
    /// Wall-clock budget for the insertion loop.
    pub budget: Option<Duration>,
    /// Where to persist resumable state. Written after every insertion
    /// step (subject to `checkpoint_min_secs`) and on budget exhaustion.
    pub checkpoint: Option<PathBuf>,
    /// Minimum seconds between periodic checkpoint writes.
    pub checkpoint_min_secs: f64,
    /// Resume from `checkpoint` if it exists.
    pub resume: bool,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    input_sha256: String,
    dim: usize,
    constraints: usize,
    backend: String,
    ordering: InsertionOrder,
    inserted: Vec<usize>,
    rays: Vec<Vec<String>>,
}

const CHECKPOINT_FORMAT: &str = "dd-checkpoint";
const CHECKPOINT_VERSION: u32 = 1;

struct Ray<T> {
    coeffs: Vec<T>,
    /// Constraints with zero dot product (over all constraints).
    zero: FixedBitSet,
    /// Constraints with negative dot product.
    neg: FixedBitSet,
}

impl<T: ExactInt> Ray<T> {
    fn classify(coeffs: Vec<T>, rows: &[Vec<T>]) -> Result<Self, Overflow> {
        let mut zero = FixedBitSet::with_capacity(rows.len());
        let mut neg = FixedBitSet::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            match dot(row, &coeffs)?.signum() {
                0 => zero.insert(i),
                -1 => neg.insert(i),
                _ => {}
            }
        }
        Ok(Ray { coeffs, zero, neg })
    }
}

fn dot<T: ExactInt>(a: &[T], b: &[T]) -> Result<T, Overflow> {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc = acc.checked_add(&x.checked_mul(y)?)?;
    }
    Ok(acc)
}

/// Homogenized constraint rows `(1, v_i)` with denominators cleared.
fn homogenized_rows(vrep: &VRep) -> Vec<Vec<BigInt>> {
    vrep.vertices()
        .iter()
        .map(|v| {
            let (scale, ints) = v.cleared();
            let mut row = Vec::with_capacity(v.len() + 1);
            row.push(scale);
            row.extend(ints);
            row
        })
        .collect()
}

fn input_hash(rows: &[Vec<BigInt>]) -> String {
    let mut h = Sha256::new();
    for row in rows {
        for c in row {
            h.update(c.to_string().as_bytes());
            h.update(b",");
        }
        h.update(b";");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

pub(super) fn run(vrep: &VRep, opts: &DdOptions) -> Result<Vec<Facet>, PolytopeError> {
    let rows_big = homogenized_rows(vrep);
    let hash = input_hash(&rows_big);

    let rows_small: Option<Vec<Vec<i128>>> = rows_big
        .iter()
        .map(|r| r.iter().map(|c| i128::from_bigint(c)).collect())
        .collect();
    if let Some(rows) = rows_small {
        match Engine::<i128>::run(vrep, &rows, &rows_big, &hash, opts, "i128") {
            Ok(facets) => return Ok(facets),
            Err(EngineError::Overflow) => {
                // fall through to the unbounded backend
            }
            Err(EngineError::Polytope(e)) => return Err(e),
        }
    }
    match Engine::<BigInt>::run(vrep, &rows_big, &rows_big, &hash, opts, "bigint") {
        Ok(facets) => Ok(facets),
        Err(EngineError::Overflow) => unreachable!("BigInt arithmetic cannot overflow"),
        Err(EngineError::Polytope(e)) => Err(e),
    }
}

enum EngineError {
    Overflow,
    Polytope(PolytopeError),
}

impl From<Overflow> for EngineError {
    fn from(_: Overflow) -> Self {
        EngineError::Overflow
    }
}

impl From<PolytopeError> for EngineError {
    fn from(e: PolytopeError) -> Self {
        EngineError::Polytope(e)
    }
}

struct Engine<'a, T: ExactInt> {
    dim: usize, // homogenized dimension d + 1
    rows: &'a [Vec<T>],
    rays: Vec<Ray<T>>,
    inserted: FixedBitSet,
    inserted_order: Vec<usize>,
    /// Current rays violating each constraint (maintained for max-cutoff).
    neg_counts: Vec<u32>,
    backend: &'static str,
}

impl<'a, T: ExactInt> Engine<'a, T> {
    fn run(
        vrep: &VRep,
        rows: &'a [Vec<T>],
        rows_big: &[Vec<BigInt>],
        hash: &str,
        opts: &DdOptions,
        backend: &'static str,
    ) -> Result<Vec<Facet>, EngineError> {
        let start = Instant::now();
        let dim = vrep.dim() + 1;
        let mut engine = Engine {
            dim,
            rows,
            rays: Vec::new(),
            inserted: FixedBitSet::with_capacity(rows.len()),
            inserted_order: Vec::new(),
            neg_counts: vec![0; rows.len()],
            backend,
        };

        let resumed = if opts.resume {
            engine.try_resume(opts, hash)?
        } else {
            false
        };
        if !resumed {
            engine.initial_cone(rows_big)?;
        }

        let mut last_checkpoint = Instant::now();
        loop {
            let Some(next) = engine.next_constraint(opts.ordering) else {
                break;
            };
            engine.insert_constraint(next)?;

            if let Some(path) = &opts.checkpoint {
                if last_checkpoint.elapsed().as_secs_f64() >= opts.checkpoint_min_secs {
                    engine.write_checkpoint(path, hash, opts.ordering)?;
                    last_checkpoint = Instant::now();
                }
            }
            if let Some(budget) = opts.budget {
                if start.elapsed() > budget && engine.inserted_order.len() < rows.len() {
                    if let Some(path) = &opts.checkpoint {
                        engine.write_checkpoint(path, hash, opts.ordering)?;
                    }
                    return Err(PolytopeError::BudgetExceeded {
                        inserted: engine.inserted_order.len(),
                        total: rows.len(),
                        checkpoint: opts.checkpoint.clone(),
                    }
                    .into());
                }
            }
        }

        let mut facets = engine.extract_facets();
        facets.sort_by(|a, b| a.ineq.cmp(&b.ineq));
        Ok(facets)
    }

    /// Picks a maximal linearly independent constraint subset (in input
    /// order) and seeds the simplicial cone it bounds.
    fn initial_cone(&mut self, rows_big: &[Vec<BigInt>]) -> Result<(), EngineError> {
        let mut basis: Vec<usize> = Vec::with_capacity(self.dim);
        let mut selected: Vec<Vec<BigInt>> = Vec::with_capacity(self.dim);
        for (i, row) in rows_big.iter().enumerate() {
            if basis.len() == self.dim {
                break;
            }
            selected.push(row.clone());
            let rank = crate::exact::rank_bigint_rows(&selected, None);
            if rank == selected.len() {
                basis.push(i);
            } else {
                selected.pop();
            }
        }
        debug_assert_eq!(basis.len(), self.dim, "VRep guarantees full rank");

        // rays of the simplicial cone: solve A r = e_k for each basis row k
        let a: Vec<Vec<Rational>> = selected
            .iter()
            .map(|row| row.iter().map(|c| Rational::from(c.clone())).collect())
            .collect();
        for k in 0..self.dim {
            let mut e = vec![Rational::from(BigInt::from(0)); self.dim];
            e[k] = Rational::from(BigInt::from(1));
            let sol = solve_square(&a, &e).expect("basis matrix is nonsingular");
            let (_, mut ints) = RationalVector(sol).cleared();
            reduce_by_gcd(&mut ints);
            let coeffs: Option<Vec<T>> = ints.iter().map(|c| T::from_bigint(c)).collect();
            let Some(coeffs) = coeffs else {
                return Err(EngineError::Overflow);
            };
            let ray = Ray::classify(coeffs, self.rows)?;
            debug_assert!(basis.iter().all(|&i| !ray.neg.contains(i)));
            self.add_ray(ray);
        }
        for &i in &basis {
            self.inserted.insert(i);
            self.inserted_order.push(i);
        }
        Ok(())
    }

    fn add_ray(&mut self, ray: Ray<T>) {
        for c in ray.neg.ones() {
            self.neg_counts[c] += 1;
        }
        self.rays.push(ray);
    }

    fn next_constraint(&self, ordering: InsertionOrder) -> Option<usize> {
        let remaining = (0..self.rows.len()).filter(|&i| !self.inserted.contains(i));
        match ordering {
            InsertionOrder::Input => remaining.min(),
            InsertionOrder::Lexicographic => {
                remaining.min_by(|&a, &b| self.rows[a].cmp(&self.rows[b]).then(a.cmp(&b)))
            }
            InsertionOrder::MaxCutoff => remaining
                .max_by(|&a, &b| self.neg_counts[a].cmp(&self.neg_counts[b]).then(b.cmp(&a))),
        }
    }

    fn insert_constraint(&mut self, idx: usize) -> Result<(), EngineError> {
        let row = &self.rows[idx];
        if self.neg_counts[idx] == 0 {
            // every current ray already satisfies the constraint
            self.inserted.insert(idx);
            self.inserted_order.push(idx);
            return Ok(());
        }

        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for (i, ray) in self.rays.iter().enumerate() {
            if ray.neg.contains(idx) {
                neg.push(i);
            } else if !ray.zero.contains(idx) {
                pos.push(i);
            }
        }

        // exact dot values for the rays taking part in combinations
        let mut values: Vec<Option<T>> = vec![None; self.rays.len()];
        for &i in pos.iter().chain(neg.iter()) {
            values[i] = Some(dot(row, &self.rays[i].coeffs)?);
        }

        let required = self.dim - 2;
        let rays = &self.rays;
        let rows = self.rows;
        let inserted = &self.inserted;
        let nbits = rows.len();

        struct Scratch<T> {
            zp: FixedBitSet,
            common: FixedBitSet,
            mat: Vec<T>,
        }
        let new_rays: Vec<Ray<T>> = pos
            .par_iter()
            .map_init(
                || Scratch {
                    zp: FixedBitSet::with_capacity(nbits),
                    common: FixedBitSet::with_capacity(nbits),
                    mat: Vec::new(),
                },
                |scratch, &p| -> Result<Vec<Ray<T>>, Overflow> {
                    scratch.zp.clone_from(&rays[p].zero);
                    scratch.zp.intersect_with(inserted);
                    let vp = values[p].as_ref().expect("positive ray has a dot value");
                    let mut out = Vec::new();
                    for &n in &neg {
                        scratch.common.clone_from(&scratch.zp);
                        scratch.common.intersect_with(&rays[n].zero);
                        if scratch.common.count_ones(..) < required {
                            continue;
                        }
                        // exact adjacency: constraints tight at both rays
                        // must span a (dim - 2)-dimensional space
                        scratch.mat.clear();
                        for i in scratch.common.ones() {
                            scratch.mat.extend_from_slice(&rows[i]);
                        }
                        if rank_flat(&mut scratch.mat, self.dim, required)? != required {
                            continue;
                        }
                        let vn = values[n].as_ref().expect("negative ray has a dot value");
                        // positive combination lying on the new hyperplane
                        let mut coeffs = Vec::with_capacity(self.dim);
                        for (cp, cn) in rays[p].coeffs.iter().zip(rays[n].coeffs.iter()) {
                            let a = vp.checked_mul(cn)?;
                            let b = vn.checked_mul(cp)?;
                            coeffs.push(a.checked_sub(&b)?);
                        }
                        reduce_by_gcd(&mut coeffs);
                        out.push(Ray::classify(coeffs, rows)?);
                    }
                    Ok(out)
                },
            )
            .collect::<Result<Vec<_>, Overflow>>()?
            .into_iter()
            .flatten()
            .collect();

        // drop cut-off rays, keep order, then append the new ones
        let neg_set: std::collections::HashSet<usize> = neg.into_iter().collect();
        let mut kept = Vec::with_capacity(self.rays.len() - neg_set.len() + new_rays.len());
        for (i, ray) in std::mem::take(&mut self.rays).into_iter().enumerate() {
            if neg_set.contains(&i) {
                for c in ray.neg.ones() {
                    self.neg_counts[c] -= 1;
                }
            } else {
                kept.push(ray);
            }
        }
        self.rays = kept;
        for ray in new_rays {
            debug_assert!(ray.zero.contains(idx));
            self.add_ray(ray);
        }
        self.inserted.insert(idx);
        self.inserted_order.push(idx);
        Ok(())
    }

    fn extract_facets(&self) -> Vec<Facet> {
        self.rays
            .iter()
            .map(|ray| {
                let bound = ray.coeffs[0].to_bigint();
                let coeffs: Vec<BigInt> =
                    ray.coeffs[1..].iter().map(|c| -c.to_bigint()).collect();
                let ineq = IntegerInequality::from_integers(coeffs, bound)
                    .expect("far-face ray cannot be extreme for full-dimensional input");
                Facet {
                    ineq,
                    saturators: ray.zero.ones().collect(),
                }
            })
            .collect()
    }

    fn write_checkpoint(
        &self,
        path: &Path,
        hash: &str,
        ordering: InsertionOrder,
    ) -> Result<(), PolytopeError> {
        let file = CheckpointFile {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            input_sha256: hash.to_string(),
            dim: self.dim,
            constraints: self.rows.len(),
            backend: self.backend.to_string(),
            ordering,
            inserted: self.inserted_order.clone(),
            rays: self
                .rays
                .iter()
                .map(|r| r.coeffs.iter().map(|c| c.to_bigint().to_string()).collect())
                .collect(),
        };
        let tmp = path.with_extension("tmp");
        let io_err = |e: std::io::Error| PolytopeError::Checkpoint(e.to_string());
        let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
        serde_json::to_writer(&mut f, &file)
            .map_err(|e| PolytopeError::Checkpoint(e.to_string()))?;
        f.flush().map_err(io_err)?;
        std::fs::rename(&tmp, path).map_err(io_err)?;
        Ok(())
    }

    fn try_resume(&mut self, opts: &DdOptions, hash: &str) -> Result<bool, EngineError> {
        let Some(path) = &opts.checkpoint else {
            return Ok(false);
        };
        if !path.exists() {
            return Ok(false);
        }
        let file = load_checkpoint(path)?;
        if file.input_sha256 != hash {
            return Err(PolytopeError::Checkpoint(
                "checkpoint does not match the input vertex set".to_string(),
            )
            .into());
        }
        if file.dim != self.dim || file.constraints != self.rows.len() {
            return Err(
                PolytopeError::Checkpoint("checkpoint shape mismatch".to_string()).into(),
            );
        }
        for ray in &file.rays {
            let coeffs: Option<Vec<T>> = ray
                .iter()
                .map(|s| {
                    s.parse::<BigInt>()
                        .ok()
                        .and_then(|b| T::from_bigint(&b))
                })
                .collect();
            let Some(coeffs) = coeffs else {
                return Err(EngineError::Overflow);
            };
            let ray = Ray::classify(coeffs, self.rows)?;
            self.add_ray(ray);
        }
        for &i in &file.inserted {
            if i >= self.rows.len() {
                return Err(
                    PolytopeError::Checkpoint("constraint index out of range".to_string()).into(),
                );
            }
            self.inserted.insert(i);
            self.inserted_order.push(i);
        }
        Ok(true)
    }
}

fn load_checkpoint(path: &Path) -> Result<CheckpointFile, PolytopeError> {
    let data = std::fs::read(path).map_err(|e| PolytopeError::Checkpoint(e.to_string()))?;
    let file: CheckpointFile =
        serde_json::from_slice(&data).map_err(|e| PolytopeError::Checkpoint(e.to_string()))?;
    if file.format != CHECKPOINT_FORMAT || file.version != CHECKPOINT_VERSION {
        return Err(PolytopeError::Checkpoint(format!(
            "unsupported checkpoint format {}/{}",
            file.format, file.version
        )));
    }
    Ok(file)
}

/// Candidate inequalities held by a checkpointed (possibly unfinished)
/// run. They are valid for the constraints inserted so far; certification
/// against the full vertex set is the caller's job.
pub fn checkpoint_candidates(path: &Path) -> Result<Vec<IntegerInequality>, PolytopeError> {
    let file = load_checkpoint(path)?;
    let mut out = Vec::with_capacity(file.rays.len());
    for ray in &file.rays {
        let coeffs: Result<Vec<BigInt>, _> = ray.iter().map(|s| s.parse::<BigInt>()).collect();
        let coeffs = coeffs.map_err(|e| PolytopeError::Checkpoint(e.to_string()))?;
        if coeffs.len() < 2 {
            return Err(PolytopeError::Checkpoint("ray too short".to_string()));
        }
        let bound = coeffs[0].clone();
        let neg: Vec<BigInt> = coeffs[1..].iter().map(|c| -c).collect();
        if neg.iter().all(|c| c.is_zero()) {
            continue;
        }
        out.push(
            IntegerInequality::from_integers(neg, bound)
                .expect("nonzero coefficient vector"),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::enumerate_facets;

    fn facet_set(facets: &[Facet]) -> Vec<(Vec<i64>, i64)> {
        use num_traits::ToPrimitive;
        let mut out: Vec<(Vec<i64>, i64)> = facets
            .iter()
            .map(|f| {
                (
                    f.ineq.coeffs.iter().map(|c| c.to_i64().unwrap()).collect(),
                    f.ineq.bound.to_i64().unwrap(),
                )
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn unit_square_has_four_facets() {
        let v = VRep::from_binary(vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let facets = enumerate_facets(&v, &DdOptions::default()).unwrap();
        assert_eq!(facets.len(), 4);
        assert_eq!(
            facet_set(&facets),
            vec![
                (vec![-1, 0], 0),
                (vec![0, -1], 0),
                (vec![0, 1], 1),
                (vec![1, 0], 1),
            ]
        );
        for f in &facets {
            assert_eq!(f.saturators.len(), 2);
        }
    }

    #[test]
    fn all_orderings_agree_on_the_cube() {
        let mut rows = Vec::new();
        for m in 0..8u8 {
            rows.push(vec![m & 1, m >> 1 & 1, m >> 2 & 1]);
        }
        let v = VRep::from_binary(rows).unwrap();
        let mut reference = None;
        for ordering in [
            InsertionOrder::MaxCutoff,
            InsertionOrder::Lexicographic,
            InsertionOrder::Input,
        ] {
            let facets = enumerate_facets(
                &v,
                &DdOptions {
                    ordering,
                    ..DdOptions::default()
                },
            )
            .unwrap();
            assert_eq!(facets.len(), 6);
            let set = facet_set(&facets);
            if let Some(r) = &reference {
                assert_eq!(&set, r);
            } else {
                reference = Some(set);
            }
        }
    }

    #[test]
    fn simplex_with_interior_point() {
        // interior points must not produce facets
        let v = VRep::new(vec![
            RationalVector::from_integers(&[0, 0]),
            RationalVector::from_integers(&[4, 0]),
            RationalVector::from_integers(&[0, 4]),
            RationalVector::from_integers(&[1, 1]),
        ])
        .unwrap();
        let facets = enumerate_facets(&v, &DdOptions::default()).unwrap();
        assert_eq!(facets.len(), 3);
        for f in &facets {
            assert!(!f.saturators.contains(&3));
        }
    }

    #[test]
    fn facets_carry_exact_saturator_sets() {
        let v = VRep::from_binary(vec![
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![1, 1, 1],
        ])
        .unwrap();
        let facets = enumerate_facets(&v, &DdOptions::default()).unwrap();
        for f in &facets {
            let cert = super::super::is_facet(&f.ineq, &v).unwrap();
            assert!(cert.is_facet());
            assert_eq!(cert.saturators, f.saturators);
        }
    }

    #[test]
    fn budget_error_carries_resumable_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let ckpt = dir.path().join("run.ckpt.json");
        let mut rows = Vec::new();
        for m in 0..32u8 {
            rows.push((0..5).map(|i| m >> i & 1).collect::<Vec<u8>>());
        }
        let v = VRep::from_binary(rows).unwrap();

        let tight = DdOptions {
            budget: Some(Duration::ZERO),
            checkpoint: Some(ckpt.clone()),
            ..DdOptions::default()
        };
        let err = enumerate_facets(&v, &tight).unwrap_err();
        match err {
            PolytopeError::BudgetExceeded { inserted, total, checkpoint } => {
                assert!(inserted < total);
                assert_eq!(checkpoint.as_deref(), Some(ckpt.as_path()));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(ckpt.exists());
        let partial = checkpoint_candidates(&ckpt).unwrap();
        assert!(!partial.is_empty());

        // resuming completes the run and agrees with a fresh one
        let resumed = enumerate_facets(
            &v,
            &DdOptions {
                checkpoint: Some(ckpt.clone()),
                resume: true,
                ..DdOptions::default()
            },
        )
        .unwrap();
        let fresh = enumerate_facets(&v, &DdOptions::default()).unwrap();
        assert_eq!(facet_set(&resumed), facet_set(&fresh));
        assert_eq!(resumed.len(), 10); // 5-cube
    }

    #[test]
    fn rational_vertices_are_handled_exactly() {
        // triangle with a fractional vertex
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let v = VRep::new(vec![
            RationalVector::from_integers(&[0, 0]),
            RationalVector::from_integers(&[1, 0]),
            RationalVector(vec![half.clone(), Rational::from(BigInt::from(3))]),
        ])
        .unwrap();
        let facets = enumerate_facets(&v, &DdOptions::default()).unwrap();
        assert_eq!(facets.len(), 3);
        for f in &facets {
            assert!(!f.ineq.bound.is_zero() || f.ineq.coeffs.iter().any(|c| !c.is_zero()));
            let cert = super::super::is_facet(&f.ineq, &v).unwrap();
            assert!(cert.is_facet());
        }
    }
}
