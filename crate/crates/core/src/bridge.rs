//! Moving inequalities between the Bell (no-signalling) coordinate space
//! and the one-bit communication space.
//!
//! A Bell inequality lives in dimension `X + Y + XY` with Bob-marginal
//! coefficients `e'_y`; a one-bit inequality lives in dimension `X + 2XY`
//! with coefficients `e_xy`. The two spaces are linked by the orthogonal
//! extension (`e_xy = e'_y / X`, cleared to integers) and by the NS
//! projection (`e'_y = sum_x e_xy`). On any point whose Bob marginals do
//! not depend on `x`, an inequality and its NS projection evaluate
//! identically.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{ExactError, IntegerInequality, Rational, RationalVector};
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error("inequality shape ({x}, {y}) does not match scenario ({sx}, {sy})")]
    ShapeMismatch { x: usize, y: usize, sx: usize, sy: usize },
    #[error("flat inequality has wrong length {got} for the {space:?} space (expected {expected})")]
    FlatLength { got: usize, expected: usize, space: Space },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Coordinate space an inequality or point lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    /// No-communication coordinates of dimension `X + Y + XY`.
    Bell,
    /// One-bit coordinates of dimension `X + 2XY`.
    Comm,
}

/// Bell inequality in no-signalling coordinates:
/// `sum d_xy p(00|xy) + sum e'_y p^B(0|y) + sum f_x p^A(0|x) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BellInequality {
    pub x: usize,
    pub y: usize,
    /// Joint coefficients, x-major (`d[x * y_count + y]`).
    pub d: Vec<BigInt>,
    /// Bob marginal coefficients, one per `y`.
    pub e_prime: Vec<BigInt>,
    /// Alice marginal coefficients, one per `x`.
    pub f: Vec<BigInt>,
    pub bound: BigInt,
}

/// One-bit inequality in communication coordinates:
/// `sum d_xy p(00|xy) + sum e_xy p^B(0|xy) + sum f_x p^A(0|x) <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommInequality {
    pub x: usize,
    pub y: usize,
    pub d: Vec<BigInt>,
    /// Bob marginal coefficients, x-major (`e[x * y_count + y]`).
    pub e: Vec<BigInt>,
    pub f: Vec<BigInt>,
    pub bound: BigInt,
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

impl BellInequality {
    pub fn from_i64(x: usize, y: usize, d: &[i64], e_prime: &[i64], f: &[i64], bound: i64) -> Self {
        assert_eq!(d.len(), x * y);
        assert_eq!(e_prime.len(), y);
        assert_eq!(f.len(), x);
        BellInequality {
            x,
            y,
            d: d.iter().copied().map(big).collect(),
            e_prime: e_prime.iter().copied().map(big).collect(),
            f: f.iter().copied().map(big).collect(),
            bound: big(bound),
        }
    }

    pub fn d_at(&self, x: usize, y: usize) -> &BigInt {
        &self.d[x * self.y + y]
    }

    /// Flat coefficient vector in the Bell layout `[d (x-major) | e' | f]`.
    pub fn to_flat(&self) -> IntegerInequality {
        let mut coeffs = Vec::with_capacity(self.x + self.y + self.x * self.y);
        coeffs.extend(self.d.iter().cloned());
        coeffs.extend(self.e_prime.iter().cloned());
        coeffs.extend(self.f.iter().cloned());
        IntegerInequality {
            coeffs,
            bound: self.bound.clone(),
            scale_note: None,
        }
    }

    pub fn from_flat(flat: &IntegerInequality, x: usize, y: usize) -> Result<Self, BridgeError> {
        let expected = x + y + x * y;
        if flat.coeffs.len() != expected {
            return Err(BridgeError::FlatLength {
                got: flat.coeffs.len(),
                expected,
                space: Space::Bell,
            });
        }
        Ok(BellInequality {
            x,
            y,
            d: flat.coeffs[..x * y].to_vec(),
            e_prime: flat.coeffs[x * y..x * y + y].to_vec(),
            f: flat.coeffs[x * y + y..].to_vec(),
            bound: flat.bound.clone(),
        })
    }

    pub fn evaluate(&self, point: &RationalVector) -> Result<Rational, BridgeError> {
        Ok(self.to_flat().evaluate(point)?)
    }

    /// Coefficient-wise sum (bounds add as well).
    pub fn add(&self, other: &BellInequality) -> BellInequality {
        assert_eq!((self.x, self.y), (other.x, other.y));
        BellInequality {
            x: self.x,
            y: self.y,
            d: self.d.iter().zip(&other.d).map(|(a, b)| a + b).collect(),
            e_prime: self
                .e_prime
                .iter()
                .zip(&other.e_prime)
                .map(|(a, b)| a + b)
                .collect(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| a + b).collect(),
            bound: &self.bound + &other.bound,
        }
    }

    /// Coefficient-wise difference of the d/e'/f blocks; the bound is
    /// carried from `self` (used for decomposition residuals, where the
    /// bounds do not participate).
    pub fn sub_coeffs(&self, other: &BellInequality) -> BellInequality {
        assert_eq!((self.x, self.y), (other.x, other.y));
        BellInequality {
            x: self.x,
            y: self.y,
            d: self.d.iter().zip(&other.d).map(|(a, b)| a - b).collect(),
            e_prime: self
                .e_prime
                .iter()
                .zip(&other.e_prime)
                .map(|(a, b)| a - b)
                .collect(),
            f: self.f.iter().zip(&other.f).map(|(a, b)| a - b).collect(),
            bound: self.bound.clone(),
        }
    }

    pub fn coeffs_are_zero(&self) -> bool {
        self.d
            .iter()
            .chain(&self.e_prime)
            .chain(&self.f)
            .all(|c| Zero::is_zero(c))
    }
}

impl CommInequality {
    pub fn from_i64(x: usize, y: usize, d: &[i64], e: &[i64], f: &[i64], bound: i64) -> Self {
        assert_eq!(d.len(), x * y);
        assert_eq!(e.len(), x * y);
        assert_eq!(f.len(), x);
        CommInequality {
            x,
            y,
            d: d.iter().copied().map(big).collect(),
            e: e.iter().copied().map(big).collect(),
            f: f.iter().copied().map(big).collect(),
            bound: big(bound),
        }
    }

    /// Flat coefficient vector in the one-bit layout
    /// `[d (x-major) | e (x-major) | f]`, matching the vertex coordinate
    /// ordering.
    pub fn to_flat(&self) -> IntegerInequality {
        let mut coeffs = Vec::with_capacity(self.x + 2 * self.x * self.y);
        coeffs.extend(self.d.iter().cloned());
        coeffs.extend(self.e.iter().cloned());
        coeffs.extend(self.f.iter().cloned());
        IntegerInequality {
            coeffs,
            bound: self.bound.clone(),
            scale_note: None,
        }
    }

    pub fn from_flat(flat: &IntegerInequality, x: usize, y: usize) -> Result<Self, BridgeError> {
        let expected = x + 2 * x * y;
        if flat.coeffs.len() != expected {
            return Err(BridgeError::FlatLength {
                got: flat.coeffs.len(),
                expected,
                space: Space::Comm,
            });
        }
        Ok(CommInequality {
            x,
            y,
            d: flat.coeffs[..x * y].to_vec(),
            e: flat.coeffs[x * y..2 * x * y].to_vec(),
            f: flat.coeffs[2 * x * y..].to_vec(),
            bound: flat.bound.clone(),
        })
    }

    pub fn evaluate(&self, point: &RationalVector) -> Result<Rational, BridgeError> {
        Ok(self.to_flat().evaluate(point)?)
    }
}

/// Orthogonal extension of a Bell inequality into the one-bit space: the
/// unique extension whose difference from any other extension with the
/// same projection is orthogonal to the NS subspace. `d`, `f` and the
/// bound are copied, `e_xy = e'_y / X`; everything is scaled by `X` and
/// gcd-reduced to keep the data integer.
pub fn orthogonal_extension(
    bell: &BellInequality,
    scenario: &Scenario,
) -> Result<CommInequality, BridgeError> {
    Ok(orthogonal_extension_with_scale(bell, scenario)?.0)
}

/// [`orthogonal_extension`] plus the positive factor by which the result
/// is scaled relative to `bell` (so bounds remain comparable).
pub fn orthogonal_extension_with_scale(
    bell: &BellInequality,
    scenario: &Scenario,
) -> Result<(CommInequality, Rational), BridgeError> {
    if bell.x != scenario.x || bell.y != scenario.y {
        return Err(BridgeError::ShapeMismatch {
            x: bell.x,
            y: bell.y,
            sx: scenario.x,
            sy: scenario.y,
        });
    }
    let x_factor = BigInt::from(bell.x as i64);
    let d: Vec<BigInt> = bell.d.iter().map(|c| c * &x_factor).collect();
    let mut e = Vec::with_capacity(bell.x * bell.y);
    for _ in 0..bell.x {
        e.extend(bell.e_prime.iter().cloned());
    }
    let f: Vec<BigInt> = bell.f.iter().map(|c| c * &x_factor).collect();
    let bound = &bell.bound * &x_factor;

    // gcd-reduce jointly so the result stays coprime
    let mut g: BigInt = Zero::zero();
    for c in d.iter().chain(e.iter()).chain(f.iter()).chain(std::iter::once(&bound)) {
        g = num_integer::Integer::gcd(&g, c);
    }
    if Zero::is_zero(&g) {
        g = One::one();
    }
    let scale = Rational::new(x_factor, g.clone());
    let ext = CommInequality {
        x: bell.x,
        y: bell.y,
        d: d.iter().map(|c| c / &g).collect(),
        e: e.iter().map(|c| c / &g).collect(),
        f: f.iter().map(|c| c / &g).collect(),
        bound: &bound / &g,
    };
    Ok((ext, scale))
}

/// Intersection with the NS subspace: Bob's marginal coefficients are
/// summed over `x`, everything else is copied verbatim. The bound keeps
/// the semantics of the source inequality (for a facet, its one-bit
/// bound).
pub fn ns_project(comm: &CommInequality) -> BellInequality {
    let mut e_prime = vec![BigInt::from(0); comm.y];
    for x in 0..comm.x {
        for (y, e) in e_prime.iter_mut().enumerate() {
            *e += &comm.e[x * comm.y + y];
        }
    }
    BellInequality {
        x: comm.x,
        y: comm.y,
        d: comm.d.clone(),
        e_prime,
        f: comm.f.clone(),
        bound: comm.bound.clone(),
    }
}

/// A one-bit coefficient vector belongs to the NS subspace iff `e_xy` is
/// independent of `x` for every `y`.
pub fn is_ns(comm: &CommInequality) -> bool {
    for y in 0..comm.y {
        let first = &comm.e[y];
        for x in 1..comm.x {
            if &comm.e[x * comm.y + y] != first {
                return false;
            }
        }
    }
    true
}

/// White-noise point: `p(00|xy) = 1/4`, all marginals `1/2`.
pub fn white_noise_point(scenario: &Scenario) -> RationalVector {
    let quarter = Rational::new(BigInt::from(1), BigInt::from(4));
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let xy = scenario.x * scenario.y;
    let mut out = vec![quarter; xy];
    let marginals = if scenario.has_comm() { xy } else { scenario.y };
    out.extend(std::iter::repeat_n(half, marginals + scenario.x));
    RationalVector(out)
}

/// Embeds a Bell-space point into the one-bit space by repeating Bob's
/// marginals for every Alice input (`p^B(0|xy) := p^B(0|y)`).
pub fn embed_ns_point(point: &RationalVector, x: usize, y: usize) -> RationalVector {
    assert_eq!(point.len(), x + y + x * y);
    let mut out = Vec::with_capacity(x + 2 * x * y);
    out.extend(point.0[..x * y].iter().cloned());
    for _ in 0..x {
        out.extend(point.0[x * y..x * y + y].iter().cloned());
    }
    out.extend(point.0[x * y + y..].iter().cloned());
    RationalVector(out)
}

/// One term of a decomposition: a library generator taken through a
/// relabeling.
#[derive(Clone, Debug)]
pub struct DecompositionTerm {
    pub library_index: usize,
    pub name: String,
    pub relabeling: crate::symmetry::Relabeling,
    pub image: BellInequality,
}

/// Sum decomposition of a Bell inequality over relabeled library members.
/// The residual's coefficient blocks are zero for exact matches.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub terms: Vec<DecompositionTerm>,
    pub residual: BellInequality,
}

impl Decomposition {
    pub fn residual_is_zero(&self) -> bool {
        self.residual.coeffs_are_zero()
    }
}

/// Searches for an exact coefficient-wise decomposition of `target` as a
/// relabeled library member or a sum of two (bounds do not participate:
/// the target carries a one-bit bound, the generators their local
/// bounds). The search is exhaustive over orbit singles and orbit pairs,
/// in deterministic library/orbit order.
pub fn decompose_as_sum(
    target: &BellInequality,
    library: &[(String, BellInequality)],
    scenario: &Scenario,
) -> Option<Decomposition> {
    use std::collections::HashMap;

    let orbits: Vec<Vec<(crate::symmetry::Relabeling, BellInequality)>> = library
        .iter()
        .map(|(_, b)| crate::symmetry::bell_orbit_with_elements(b, scenario))
        .collect();

    type Key = (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>);
    let key = |b: &BellInequality| -> Key { (b.d.clone(), b.e_prime.clone(), b.f.clone()) };

    // single relabeled generator
    for (i, orbit) in orbits.iter().enumerate() {
        for (g, image) in orbit {
            if key(image) == key(target) {
                let residual = target.sub_coeffs(image);
                return Some(Decomposition {
                    terms: vec![DecompositionTerm {
                        library_index: i,
                        name: library[i].0.clone(),
                        relabeling: g.clone(),
                        image: image.clone(),
                    }],
                    residual,
                });
            }
        }
    }

    // pairs: hash the second orbit by coefficient blocks
    for i in 0..orbits.len() {
        for j in i..orbits.len() {
            let by_coeffs: HashMap<Key, usize> = orbits[j]
                .iter()
                .enumerate()
                .map(|(k, (_, image))| (key(image), k))
                .collect();
            for (gi, image_i) in &orbits[i] {
                let need = target.sub_coeffs(image_i);
                if let Some(&k) = by_coeffs.get(&key(&need)) {
                    let (gj, image_j) = &orbits[j][k];
                    let residual = need.sub_coeffs(image_j);
                    return Some(Decomposition {
                        terms: vec![
                            DecompositionTerm {
                                library_index: i,
                                name: library[i].0.clone(),
                                relabeling: gi.clone(),
                                image: image_i.clone(),
                            },
                            DecompositionTerm {
                                library_index: j,
                                name: library[j].0.clone(),
                                relabeling: gj.clone(),
                                image: image_j.clone(),
                            },
                        ],
                        residual,
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn i3322() -> BellInequality {
        crate::known::i3322()
    }

    #[test]
    fn extension_of_i3322_matches_tabulated_form() {
        let s = Scenario::one_bit(3, 3).unwrap();
        let (ext, scale) = orthogonal_extension_with_scale(&i3322(), &s).unwrap();
        // everything times 3, every e row equal to e' = (-1, 0, 0)
        assert_eq!(ext.d, i3322().d.iter().map(|c| c * 3).collect::<Vec<_>>());
        assert_eq!(ext.f, i3322().f.iter().map(|c| c * 3).collect::<Vec<_>>());
        assert_eq!(ext.bound, BigInt::from(0));
        for x in 0..3 {
            assert_eq!(ext.e[x * 3], BigInt::from(-1));
            assert_eq!(ext.e[x * 3 + 1], BigInt::from(0));
            assert_eq!(ext.e[x * 3 + 2], BigInt::from(0));
        }
        assert_eq!(scale, Rational::from(BigInt::from(3)));
        assert!(is_ns(&ext));
    }

    #[test]
    fn extension_with_zero_bob_marginals_is_trivial_embedding() {
        let b = BellInequality::from_i64(2, 2, &[1, 0, 0, -1], &[0, 0], &[1, -1], 1);
        let s = Scenario::one_bit(2, 2).unwrap();
        let ext = orthogonal_extension(&b, &s).unwrap();
        assert!(ext.e.iter().all(|c| Zero::is_zero(c)));
        assert_eq!(ext.d, b.d.iter().map(|c| c * 2).collect::<Vec<_>>());
    }

    #[test]
    fn projection_of_extension_recovers_input() {
        let s = Scenario::one_bit(3, 3).unwrap();
        for b in [
            i3322(),
            crate::known::i3322_sym(),
            BellInequality::from_i64(3, 3, &[2, -1, 0, 0, 1, 1, -2, 0, 3], &[1, -2, 0], &[0, -1, 2], 4),
        ] {
            let ext = orthogonal_extension(&b, &s).unwrap();
            let back = ns_project(&ext);
            // equal up to the positive scale of the extension
            let flat_b = b.to_flat();
            let flat_back = back.to_flat();
            let normalized_b = crate::exact::normalize(
                &flat_b.coeffs.iter().map(|c| Rational::from(c.clone())).collect::<Vec<_>>(),
                &Rational::from(flat_b.bound.clone()),
            )
            .unwrap();
            let normalized_back = crate::exact::normalize(
                &flat_back.coeffs.iter().map(|c| Rational::from(c.clone())).collect::<Vec<_>>(),
                &Rational::from(flat_back.bound.clone()),
            )
            .unwrap();
            assert_eq!(normalized_b, normalized_back);
        }
    }

    #[test]
    fn is_ns_flags_row_dependence() {
        let halfway = crate::known::halfway_facet_a();
        assert!(!is_ns(&halfway));
        let s = Scenario::one_bit(3, 3).unwrap();
        let ext = orthogonal_extension(&i3322(), &s).unwrap();
        assert!(is_ns(&ext));
    }

    #[test]
    fn white_noise_values() {
        let chsh = crate::known::chsh();
        let wn = white_noise_point(&Scenario::local(2, 2).unwrap());
        let v = chsh.evaluate(&wn).unwrap();
        assert_eq!(v, Rational::new(BigInt::from(-1), BigInt::from(2)));
        let wn33 = white_noise_point(&Scenario::local(3, 3).unwrap());
        assert_eq!(i3322().evaluate(&wn33).unwrap(), Rational::from(BigInt::from(-1)));
    }

    #[test]
    fn inequality_and_projection_agree_on_ns_points() {
        let facet = crate::known::halfway_facet_a();
        let projected = ns_project(&facet);
        let wn_bell = white_noise_point(&Scenario::local(3, 3).unwrap());
        let embedded = embed_ns_point(&wn_bell, 3, 3);
        assert_eq!(
            facet.evaluate(&embedded).unwrap(),
            projected.evaluate(&wn_bell).unwrap()
        );
    }
}
