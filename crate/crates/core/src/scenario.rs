//! Scenarios, deterministic strategies, and their exact coordinate
//! vectors.
//!
//! A scenario has `X` inputs for Alice and `Y` for Bob, binary outcomes on
//! both sides, and optionally one bit of one-way communication from Alice
//! to Bob. Outcomes are encoded as indicators of outcome 0 throughout:
//! the coordinates are `p(00|xy)`, Bob's marginals, and Alice's marginals.
//!
//! Coordinate layout (fixed, also used by the file formats):
//!
//! * with communication (dimension `X + 2XY`):
//!   `[p(00|xy) x-major] ++ [p^B(0|xy) x-major] ++ [p^A(0|x)]`
//! * without (dimension `X + Y + XY`):
//!   `[p(00|xy) x-major] ++ [p^B(0|y)] ++ [p^A(0|x)]`

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::RationalVector;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("scenario requires at least two inputs per party (got X={x}, Y={y})")]
    TooFewInputs { x: usize, y: usize },
    #[error("comm_bits must be 0 or 1 (got {0})")]
    BadCommBits(u8),
    #[error("scenario is too large for enumeration (X={x}, Y={y})")]
    TooLarge { x: usize, y: usize },
}

/// Bipartite binary-outcome scenario, optionally with one bit of
/// Alice-to-Bob communication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    pub x: usize,
    pub y: usize,
    pub comm_bits: u8,
}

impl Scenario {
    pub fn new(x: usize, y: usize, comm_bits: u8) -> Result<Self, ScenarioError> {
        if x < 2 || y < 2 {
            return Err(ScenarioError::TooFewInputs { x, y });
        }
        if comm_bits > 1 {
            return Err(ScenarioError::BadCommBits(comm_bits));
        }
        // keeps bitmask-based strategy tables comfortably in range
        if x > 16 || y > 16 {
            return Err(ScenarioError::TooLarge { x, y });
        }
        Ok(Scenario { x, y, comm_bits })
    }

    pub fn local(x: usize, y: usize) -> Result<Self, ScenarioError> {
        Scenario::new(x, y, 0)
    }

    pub fn one_bit(x: usize, y: usize) -> Result<Self, ScenarioError> {
        Scenario::new(x, y, 1)
    }

    pub fn has_comm(&self) -> bool {
        self.comm_bits == 1
    }

    /// Dimension of the strategy polytope: `X + 2XY` with the bit,
    /// `X + Y + XY` without.
    pub fn dimension(&self) -> usize {
        if self.has_comm() {
            self.x + 2 * self.x * self.y
        } else {
            self.x + self.y + self.x * self.y
        }
    }

    /// Number of distinct deterministic strategies.
    pub fn vertex_count(&self) -> u64 {
        let x = self.x as u32;
        let y = self.y as u32;
        if self.has_comm() {
            2u64.pow(x) * (2u64.pow(y) + stirling2(self.x) * (2u64.pow(2 * y) - 2u64.pow(y)))
        } else {
            2u64.pow(x) * 2u64.pow(y)
        }
    }

    /// Index of `p(00|xy)` in the coordinate layout.
    pub fn joint_index(&self, x: usize, y: usize) -> usize {
        x * self.y + y
    }

    /// Index of `p^B(0|xy)` (with comm) or `p^B(0|y)` (without).
    pub fn bob_index(&self, x: usize, y: usize) -> usize {
        if self.has_comm() {
            self.x * self.y + x * self.y + y
        } else {
            self.x * self.y + y
        }
    }

    /// Index of `p^A(0|x)`.
    pub fn alice_index(&self, x: usize) -> usize {
        if self.has_comm() {
            2 * self.x * self.y + x
        } else {
            self.x * self.y + self.y + x
        }
    }
}

/// Number of ways to split a set of `x` labelled elements into two
/// non-empty unlabelled blocks: `S(x, 2) = 2^(x-1) - 1`.
pub fn stirling2(x: usize) -> u64 {
    2u64.pow(x as u32 - 1) - 1
}

/// Two-block partition of Alice's inputs selecting the communication bit:
/// `c(x) = 0` for `x` in `block0`, `1` in `block1`.
///
/// Canonical labelling puts input 0 in `block0`, which removes the
/// two-block label swap so the partition count equals `S(X, 2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CommPartition {
    block0: Vec<usize>,
    block1: Vec<usize>,
}

impl CommPartition {
    /// Builds from the set of inputs mapped to bit 1. `block1` must be a
    /// non-empty, non-full subset of `0..x` that does not contain 0.
    pub fn new(x: usize, block1: &[usize]) -> Option<Self> {
        if block1.is_empty() || block1.len() >= x {
            return None;
        }
        let mut seen = vec![false; x];
        for &i in block1 {
            if i == 0 || i >= x || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        let block0 = (0..x).filter(|&i| !seen[i]).collect();
        let mut block1 = block1.to_vec();
        block1.sort_unstable();
        Some(CommPartition { block0, block1 })
    }

    pub fn block0(&self) -> &[usize] {
        &self.block0
    }

    pub fn block1(&self) -> &[usize] {
        &self.block1
    }

    /// Communication bit sent on input `x`.
    pub fn bit(&self, x: usize) -> u8 {
        u8::from(self.block1.binary_search(&x).is_ok())
    }
}

/// All canonical two-block partitions of `0..x`, in a fixed order
/// (exactly `S(x, 2)` of them).
pub fn comm_partitions(x: usize) -> Vec<CommPartition> {
    assert!(x >= 2);
    let mut out = Vec::with_capacity(stirling2(x) as usize);
    // enumerate non-empty subsets of {1, .., x-1} as block1
    for mask in 1u32..(1 << (x - 1)) {
        let block1: Vec<usize> = (0..x - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        out.push(CommPartition::new(x, &block1).expect("mask enumerates valid block1 sets"));
    }
    out
}

/// Deterministic strategy together with its exact coordinate vector.
///
/// `alice_zero[x]` is the indicator of Alice outputting 0 on input `x`;
/// `bob_zero[y]` holds the indicators for communication bit 0 and 1. When
/// `partition` is absent the two bit columns are equal and the bit is
/// ignored; when present they differ somewhere (communication-independent
/// Bob tables are stored without a partition, which makes the vertex list
/// duplicate-free by construction).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StrategyVertex {
    pub alice_zero: Vec<bool>,
    pub partition: Option<CommPartition>,
    pub bob_zero: Vec<(bool, bool)>,
    coords: Vec<u8>,
}

impl StrategyVertex {
    pub fn new(
        scenario: &Scenario,
        alice_zero: Vec<bool>,
        partition: Option<CommPartition>,
        bob_zero: Vec<(bool, bool)>,
    ) -> Self {
        assert_eq!(alice_zero.len(), scenario.x);
        assert_eq!(bob_zero.len(), scenario.y);
        if partition.is_some() {
            assert!(scenario.has_comm());
            assert!(
                bob_zero.iter().any(|&(c0, c1)| c0 != c1),
                "bit-independent Bob tables must be stored without a partition"
            );
        } else {
            assert!(
                bob_zero.iter().all(|&(c0, c1)| c0 == c1),
                "a partition is required when Bob's table depends on the bit"
            );
        }
        let coords = compute_coords(scenario, &alice_zero, partition.as_ref(), &bob_zero);
        StrategyVertex {
            alice_zero,
            partition,
            bob_zero,
            coords,
        }
    }

    /// Indicator of Bob outputting 0 on input `y` given communication
    /// bit `c`.
    pub fn bob_out(&self, y: usize, c: u8) -> bool {
        if c == 0 {
            self.bob_zero[y].0
        } else {
            self.bob_zero[y].1
        }
    }

    /// Coordinate vector entries (each 0 or 1) in the fixed layout.
    pub fn coords(&self) -> &[u8] {
        &self.coords
    }

    pub fn coords_rational(&self) -> RationalVector {
        RationalVector::from_integers(&self.coords.iter().map(|&v| v as i64).collect::<Vec<_>>())
    }

    /// Embeds a no-communication vertex into the one-bit coordinate space
    /// by repeating Bob's marginal for every Alice input.
    pub fn embed_coords(&self, local: &Scenario, comm: &Scenario) -> Vec<u8> {
        assert_eq!(local.comm_bits, 0);
        assert!(comm.has_comm());
        assert_eq!((local.x, local.y), (comm.x, comm.y));
        let mut out = vec![0u8; comm.dimension()];
        for x in 0..local.x {
            for y in 0..local.y {
                out[comm.joint_index(x, y)] = self.coords[local.joint_index(x, y)];
                out[comm.bob_index(x, y)] = self.coords[local.bob_index(x, y)];
            }
            out[comm.alice_index(x)] = self.coords[local.alice_index(x)];
        }
        out
    }
}

fn compute_coords(
    scenario: &Scenario,
    alice_zero: &[bool],
    partition: Option<&CommPartition>,
    bob_zero: &[(bool, bool)],
) -> Vec<u8> {
    let mut coords = vec![0u8; scenario.dimension()];
    for x in 0..scenario.x {
        let bit = partition.map_or(0, |p| p.bit(x));
        for y in 0..scenario.y {
            let bob = if bit == 0 { bob_zero[y].0 } else { bob_zero[y].1 };
            coords[scenario.joint_index(x, y)] = u8::from(alice_zero[x] && bob);
            coords[scenario.bob_index(x, y)] = u8::from(bob);
        }
        coords[scenario.alice_index(x)] = u8::from(alice_zero[x]);
    }
    coords
}

/// Enumerates all deterministic strategies of the scenario in a fixed
/// order: bit-unused strategies first (Alice-major), then partitioned
/// strategies by partition, Alice table, and Bob table.
///
/// The list length matches [`Scenario::vertex_count`] and all coordinate
/// vectors are distinct.
pub fn enumerate_vertices(scenario: &Scenario) -> Vec<StrategyVertex> {
    let x = scenario.x;
    let y = scenario.y;
    let mut out = Vec::with_capacity(scenario.vertex_count() as usize);

    let alice_tables = 1u32 << x;
    let bob_tables = 1u32 << y;

    for a_mask in 0..alice_tables {
        let alice_zero: Vec<bool> = (0..x).map(|i| a_mask >> i & 1 == 1).collect();
        for b_mask in 0..bob_tables {
            let bob_zero: Vec<(bool, bool)> = (0..y)
                .map(|i| {
                    let v = b_mask >> i & 1 == 1;
                    (v, v)
                })
                .collect();
            out.push(StrategyVertex::new(scenario, alice_zero.clone(), None, bob_zero));
        }
    }

    if scenario.has_comm() {
        for partition in comm_partitions(x) {
            for a_mask in 0..alice_tables {
                let alice_zero: Vec<bool> = (0..x).map(|i| a_mask >> i & 1 == 1).collect();
                for c0_mask in 0..bob_tables {
                    for c1_mask in 0..bob_tables {
                        if c0_mask == c1_mask {
                            continue;
                        }
                        let bob_zero: Vec<(bool, bool)> = (0..y)
                            .map(|i| (c0_mask >> i & 1 == 1, c1_mask >> i & 1 == 1))
                            .collect();
                        out.push(StrategyVertex::new(
                            scenario,
                            alice_zero.clone(),
                            Some(partition.clone()),
                            bob_zero,
                        ));
                    }
                }
            }
        }
    }

    out
}

/// Coordinate rows of all vertices (row-major, entries 0/1).
pub fn vertex_matrix(scenario: &Scenario) -> Vec<Vec<u8>> {
    enumerate_vertices(scenario)
        .into_iter()
        .map(|v| v.coords().to_vec())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn dimensions() {
        assert_eq!(Scenario::one_bit(3, 3).unwrap().dimension(), 21);
        assert_eq!(Scenario::one_bit(3, 2).unwrap().dimension(), 15);
        assert_eq!(Scenario::local(3, 3).unwrap().dimension(), 15);
        assert_eq!(Scenario::local(2, 2).unwrap().dimension(), 8);
    }

    #[test]
    fn partition_counts() {
        assert_eq!(comm_partitions(2).len(), 1);
        assert_eq!(comm_partitions(3).len(), 3);
        assert_eq!(comm_partitions(4).len(), 7);
        let p = &comm_partitions(2)[0];
        assert_eq!(p.block0(), &[0]);
        assert_eq!(p.block1(), &[1]);
        // canonical labelling: 0 always maps to bit 0, no duplicates
        for x in 2..=6 {
            let parts = comm_partitions(x);
            assert_eq!(parts.len() as u64, stirling2(x));
            let set: HashSet<_> = parts.iter().collect();
            assert_eq!(set.len(), parts.len());
            for p in &parts {
                assert_eq!(p.bit(0), 0);
                assert!(!p.block1().is_empty());
            }
        }
    }

    #[test]
    fn vertex_counts_match_closed_form() {
        for (x, y, comm, expected) in [
            (2, 2, 1, 64u64),
            (3, 2, 1, 320),
            (3, 3, 1, 1408),
            (4, 2, 1, 1408),
            (2, 2, 0, 16),
            (3, 3, 0, 64),
        ] {
            let s = Scenario::new(x, y, comm).unwrap();
            assert_eq!(s.vertex_count(), expected, "closed form for {x}{y}+{comm}");
            assert_eq!(enumerate_vertices(&s).len() as u64, expected, "enumeration for {x}{y}+{comm}");
        }
    }

    #[test]
    fn coordinate_vectors_are_distinct() {
        for s in [
            Scenario::one_bit(2, 2).unwrap(),
            Scenario::one_bit(3, 2).unwrap(),
            Scenario::one_bit(3, 3).unwrap(),
            Scenario::local(3, 3).unwrap(),
        ] {
            let rows = vertex_matrix(&s);
            let set: HashSet<_> = rows.iter().collect();
            assert_eq!(set.len(), rows.len());
        }
    }

    #[test]
    fn brute_force_dedup_oracle_agrees() {
        // generate strategies without the structural duplicate elimination:
        // every (partition, alice table, arbitrary bob table) pair, then
        // deduplicate coordinate vectors
        let s = Scenario::one_bit(3, 2).unwrap();
        let mut raw: HashSet<Vec<u8>> = HashSet::new();
        for partition in comm_partitions(s.x) {
            for a_mask in 0..(1u32 << s.x) {
                let alice_zero: Vec<bool> = (0..s.x).map(|i| a_mask >> i & 1 == 1).collect();
                for c0_mask in 0..(1u32 << s.y) {
                    for c1_mask in 0..(1u32 << s.y) {
                        let bob_zero: Vec<(bool, bool)> = (0..s.y)
                            .map(|i| (c0_mask >> i & 1 == 1, c1_mask >> i & 1 == 1))
                            .collect();
                        raw.insert(compute_coords(&s, &alice_zero, Some(&partition), &bob_zero));
                    }
                }
            }
        }
        let structured: HashSet<Vec<u8>> = vertex_matrix(&s).into_iter().collect();
        assert_eq!(raw, structured);
    }

    #[test]
    fn local_vertices_embed_into_comm_list() {
        let local = Scenario::local(2, 2).unwrap();
        let comm = Scenario::one_bit(2, 2).unwrap();
        let comm_rows: HashSet<Vec<u8>> = vertex_matrix(&comm).into_iter().collect();
        for v in enumerate_vertices(&local) {
            let embedded = v.embed_coords(&local, &comm);
            assert!(comm_rows.contains(&embedded));
        }
    }

    #[test]
    fn coords_of_named_strategies() {
        let s = Scenario::one_bit(2, 2).unwrap();
        // all outputs 0, no partition: every coordinate is 1
        let v = StrategyVertex::new(
            &s,
            vec![true, true],
            None,
            vec![(true, true), (true, true)],
        );
        assert!(v.coords().iter().all(|&c| c == 1));

        // Alice outputs 0 iff x = 0; Bob outputs 0 iff the received bit
        // is 0; partition {0},{1}: all three blocks indicate x = 0
        let v = StrategyVertex::new(
            &s,
            vec![true, false],
            Some(CommPartition::new(2, &[1]).unwrap()),
            vec![(true, false), (true, false)],
        );
        for x in 0..2 {
            for y in 0..2 {
                let expected = u8::from(x == 0);
                assert_eq!(v.coords()[s.joint_index(x, y)], expected);
                assert_eq!(v.coords()[s.bob_index(x, y)], expected);
            }
            assert_eq!(v.coords()[s.alice_index(x)], u8::from(x == 0));
        }
    }

    #[test]
    fn joint_probability_dominated_by_marginals() {
        let s = Scenario::one_bit(3, 3).unwrap();
        for v in enumerate_vertices(&s) {
            let c = v.coords();
            for x in 0..s.x {
                for y in 0..s.y {
                    let joint = c[s.joint_index(x, y)];
                    assert!(joint <= c[s.bob_index(x, y)]);
                    assert!(joint <= c[s.alice_index(x)]);
                }
            }
        }
    }
}
