//! Named inequalities used as cut generators and benchmarks.
//!
//! Coefficients follow the block layout of [`crate::bridge`]: joint terms
//! `d_xy` (x-major), Bob marginal coefficients, Alice marginal
//! coefficients, bound.

use crate::bridge::{BellInequality, CommInequality};
use crate::scenario::Scenario;

/// CHSH in lifted (Collins-Gisin) coordinates:
/// `p(00|00)+p(00|01)+p(00|10)-p(00|11)-p^A(0|0)-p^B(0|0) <= 0`.
pub fn chsh() -> BellInequality {
    BellInequality::from_i64(2, 2, &[1, 1, 1, -1], &[-1, 0], &[-1, 0], 0)
}

/// The facet class of the 33 local polytope beyond CHSH.
pub fn i3322() -> BellInequality {
    BellInequality::from_i64(
        3,
        3,
        &[1, 1, 1, 1, 1, -1, 1, -1, 0],
        &[-1, 0, 0],
        &[-2, -1, 0],
        0,
    )
}

/// Symmetrized version of [`i3322`].
pub fn i3322_sym() -> BellInequality {
    BellInequality::from_i64(
        3,
        3,
        &[0, 1, 1, 1, -1, 1, 1, 1, -1],
        &[-1, -1, 0],
        &[-1, -1, 0],
        0,
    )
}

/// Party-permuted [`i3322`] (Alice and Bob exchanged). The joint block of
/// `i3322` is symmetric, so only the marginal coefficient blocks swap.
pub fn i3322_perm() -> BellInequality {
    BellInequality::from_i64(
        3,
        3,
        &[1, 1, 1, 1, 1, -1, 1, -1, 0],
        &[-2, -1, 0],
        &[-1, 0, 0],
        0,
    )
}

/// Embeds a Bell inequality into a larger scenario: input `i` of the
/// small inequality becomes `alice_map[i]` (resp. `bob_map[j]`), all
/// other coefficients are zero.
pub fn embed_bell(
    b: &BellInequality,
    x: usize,
    y: usize,
    alice_map: &[usize],
    bob_map: &[usize],
) -> BellInequality {
    assert_eq!(alice_map.len(), b.x);
    assert_eq!(bob_map.len(), b.y);
    assert!(alice_map.iter().all(|&i| i < x));
    assert!(bob_map.iter().all(|&j| j < y));
    let mut out = BellInequality::from_i64(
        x,
        y,
        &vec![0; x * y],
        &vec![0; y],
        &vec![0; x],
        0,
    );
    for (i, &xi) in alice_map.iter().enumerate() {
        for (j, &yj) in bob_map.iter().enumerate() {
            out.d[xi * y + yj] = b.d[i * b.y + j].clone();
        }
        out.f[xi] = b.f[i].clone();
    }
    for (j, &yj) in bob_map.iter().enumerate() {
        out.e_prime[yj] = b.e_prime[j].clone();
    }
    out.bound = b.bound.clone();
    out
}

/// CHSH embedded on the first two inputs of each party.
pub fn chsh_embedded(x: usize, y: usize) -> BellInequality {
    embed_bell(&chsh(), x, y, &[0, 1], &[0, 1])
}

/// Resolves a generator name (`chsh`, `i3322`, `i3322-sym`, `i3322-perm`)
/// for the given scenario shape. CHSH embeds on the first two inputs of
/// each party; the I3322 family requires a 33 scenario.
pub fn generator_by_name(name: &str, scenario: &Scenario) -> Option<BellInequality> {
    match name {
        "chsh" => {
            if scenario.x == 2 && scenario.y == 2 {
                Some(chsh())
            } else {
                Some(chsh_embedded(scenario.x, scenario.y))
            }
        }
        "i3322" if scenario.x == 3 && scenario.y == 3 => Some(i3322()),
        "i3322-sym" if scenario.x == 3 && scenario.y == 3 => Some(i3322_sym()),
        "i3322-perm" if scenario.x == 3 && scenario.y == 3 => Some(i3322_perm()),
        _ => None,
    }
}

pub const GENERATOR_NAMES: [&str; 4] = ["chsh", "i3322", "i3322-sym", "i3322-perm"];

/// 33+1 facet whose quantum bound sits halfway between the local and
/// one-bit bounds; its NS projection is a sum of the two I3322 party
/// variants.
pub fn halfway_facet_a() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[2, 2, 2, 2, 2, -2, 2, -2, 0],
        &[-1, -1, -1, -1, -1, 1, -1, 1, 0],
        &[-3, -1, 0],
        1,
    )
}

/// Second halfway facet; its NS projection also contains the sum of the
/// two I3322 variants plus terms that do not contribute to the quantum
/// bound.
pub fn halfway_facet_b() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[2, 2, 2, 2, -2, 1, 2, 1, -2],
        &[-1, -1, -1, -1, 1, 0, -1, -1, 1],
        &[-3, -1, 0],
        1,
    )
}

/// 33+1 facet whose NS projection is a sum of two CHSH embeddings
/// (quantum bound twice the CHSH violation).
pub fn double_chsh_facet() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[-1, 0, 1, 0, 1, -1, 1, 1, 2],
        &[0, 0, 0, 0, 0, 0, 0, -1, -1],
        &[0, 0, -2],
        1,
    )
}

/// 33+1 facet whose NS projection is a single relabeled I3322.
pub fn single_i3322_facet() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[0, 1, 1, 1, 1, -1, 1, -1, 1],
        &[0, 0, -1, -1, -1, 1, 0, 0, 0],
        &[-1, 0, -1],
        1,
    )
}

/// 33+1 facet whose NS projection is a CHSH embedding plus terms that do
/// not contribute to the quantum bound.
pub fn chsh_plus_terms_facet() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[-1, 1, 0, 0, 2, 2, 1, 1, 0],
        &[0, -1, 1, 1, -1, -1, -1, 0, -1],
        &[0, -2, -1],
        1,
    )
}

/// 33+1 facet whose NS projection is the sum of a symmetrized I3322 and a
/// CHSH embedding; maximized by a partially entangled state.
pub fn i3322_plus_chsh_facet() -> CommInequality {
    CommInequality::from_i64(
        3,
        3,
        &[0, 1, 1, 2, -1, 2, 2, 1, -2],
        &[0, 0, 0, -1, 0, -1, -1, -1, 1],
        &[-1, -2, 0],
        1,
    )
}

/// The published 33+1 facets used as certification benchmarks, with the
/// float quantum bound each reaches on its NS projection.
pub fn benchmark_one_bit_facets() -> Vec<(&'static str, CommInequality, f64)> {
    vec![
        ("halfway-a", halfway_facet_a(), 0.5),
        ("halfway-b", halfway_facet_b(), 0.5),
        ("double-chsh", double_chsh_facet(), std::f64::consts::SQRT_2 - 1.0),
        ("single-i3322", single_i3322_facet(), 0.25),
        ("chsh-plus-terms", chsh_plus_terms_facet(), 0.5 * (std::f64::consts::SQRT_2 - 1.0)),
        ("i3322-plus-chsh", i3322_plus_chsh_facet(), 0.4158),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge::ns_project;
    use num_bigint::BigInt;

    #[test]
    fn halfway_projection_is_sum_of_i3322_variants() {
        let projected = ns_project(&halfway_facet_a());
        let sum = i3322().add(&i3322_perm());
        assert_eq!(projected.d, sum.d);
        assert_eq!(projected.e_prime, sum.e_prime);
        assert_eq!(projected.f, sum.f);
        // the projection carries the one-bit bound, not the summed local bounds
        assert_eq!(projected.bound, BigInt::from(1));
        assert_eq!(sum.bound, BigInt::from(0));
    }

    #[test]
    fn mixed_projection_is_i3322_sym_plus_chsh() {
        let projected = ns_project(&i3322_plus_chsh_facet());
        let chsh_part = embed_bell(&chsh(), 3, 3, &[1, 2], &[0, 2]);
        let sum = i3322_sym().add(&chsh_part);
        assert_eq!(projected.d, sum.d);
        assert_eq!(projected.e_prime, sum.e_prime);
        assert_eq!(projected.f, sum.f);
    }

    #[test]
    fn double_chsh_projection_blocks() {
        let projected = ns_project(&double_chsh_facet());
        assert_eq!(
            projected.e_prime,
            vec![BigInt::from(0), BigInt::from(-1), BigInt::from(-1)]
        );
        assert_eq!(projected.bound, BigInt::from(1));
    }

    #[test]
    fn generator_lookup() {
        let s33 = Scenario::one_bit(3, 3).unwrap();
        let s32 = Scenario::one_bit(3, 2).unwrap();
        assert!(generator_by_name("chsh", &s32).is_some());
        assert!(generator_by_name("i3322", &s33).is_some());
        assert!(generator_by_name("i3322", &s32).is_none());
        assert!(generator_by_name("unknown", &s33).is_none());
        let emb = generator_by_name("chsh", &s32).unwrap();
        assert_eq!(emb.x, 3);
        assert_eq!(emb.y, 2);
        assert_eq!(*emb.d_at(2, 0), BigInt::from(0));
    }
}
