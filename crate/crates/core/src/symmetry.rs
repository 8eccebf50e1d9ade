//! Relabeling group (inputs and outputs of both parties, no party swap),
//! canonical forms, and reduction of inequality lists to equivalence
//! classes.
//!
//! Output flips act affinely on Collins-Gisin style coefficients, so all
//! transformations route through a full probability-table form: lift,
//! permute/flip indices, project back. The hot path runs on scaled `i64`
//! tables (exact, overflow-checked) with a `BigInt` fallback; the lift
//! scale cancels in the projection.

use itertools::Itertools;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};

use crate::bridge::{BellInequality, CommInequality, Space};
use crate::exact::{ExactInt, IntegerInequality, Overflow, Rational};
use crate::scenario::Scenario;

/// Relabeling of inputs and outputs. Output flips are indexed by the
/// *original* input label; inputs map through `x -> alice_input_perm[x]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Relabeling {
    pub alice_input_perm: Vec<usize>,
    pub bob_input_perm: Vec<usize>,
    pub alice_output_flips: Vec<bool>,
    pub bob_output_flips: Vec<bool>,
}

impl Relabeling {
    pub fn identity(x: usize, y: usize) -> Self {
        Relabeling {
            alice_input_perm: (0..x).collect(),
            bob_input_perm: (0..y).collect(),
            alice_output_flips: vec![false; x],
            bob_output_flips: vec![false; y],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.alice_input_perm.iter().enumerate().all(|(i, &v)| i == v)
            && self.bob_input_perm.iter().enumerate().all(|(i, &v)| i == v)
            && !self.alice_output_flips.iter().any(|&f| f)
            && !self.bob_output_flips.iter().any(|&f| f)
    }

    pub fn validate(&self, x: usize, y: usize) -> bool {
        let perm_ok = |p: &[usize], n: usize| {
            p.len() == n && {
                let mut seen = vec![false; n];
                p.iter().all(|&v| v < n && !std::mem::replace(&mut seen[v], true))
            }
        };
        perm_ok(&self.alice_input_perm, x)
            && perm_ok(&self.bob_input_perm, y)
            && self.alice_output_flips.len() == x
            && self.bob_output_flips.len() == y
    }
}

/// Order of the relabeling group: `X! 2^X Y! 2^Y`.
pub fn group_order(x: usize, y: usize) -> u64 {
    fn fact(n: usize) -> u64 {
        (1..=n as u64).product()
    }
    fact(x) * (1u64 << x) * fact(y) * (1u64 << y)
}

/// Every group element, in a fixed deterministic order.
pub fn group_elements(x: usize, y: usize) -> Vec<Relabeling> {
    let alice_perms: Vec<Vec<usize>> = (0..x).permutations(x).collect();
    let bob_perms: Vec<Vec<usize>> = (0..y).permutations(y).collect();
    let mut out = Vec::with_capacity(group_order(x, y) as usize);
    for ap in &alice_perms {
        for am in 0..(1u32 << x) {
            for bp in &bob_perms {
                for bm in 0..(1u32 << y) {
                    out.push(Relabeling {
                        alice_input_perm: ap.clone(),
                        bob_input_perm: bp.clone(),
                        alice_output_flips: (0..x).map(|i| am >> i & 1 == 1).collect(),
                        bob_output_flips: (0..y).map(|i| bm >> i & 1 == 1).collect(),
                    });
                }
            }
        }
    }
    out
}

/// Full probability-table coefficients `c[a][b][x][y]` (scaled integers
/// internally; see [`FullTableForm`] for the rational public form).
struct Table<T> {
    x: usize,
    y: usize,
    c: Vec<T>,
    constant: T,
}

#[inline]
fn t_idx(x_count: usize, y_count: usize, a: usize, b: usize, x: usize, y: usize) -> usize {
    ((a * 2 + b) * x_count + x) * y_count + y
}

impl<T: ExactInt> Table<T> {
    fn zeroed(x: usize, y: usize) -> Self {
        Table {
            x,
            y,
            c: vec![T::zero(); 4 * x * y],
            constant: T::zero(),
        }
    }

    fn apply_into(&self, g: &Relabeling, dst: &mut Table<T>) {
        debug_assert_eq!((self.x, self.y), (dst.x, dst.y));
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..self.x {
                    let a2 = a ^ usize::from(g.alice_output_flips[x]);
                    let x2 = g.alice_input_perm[x];
                    for y in 0..self.y {
                        let b2 = b ^ usize::from(g.bob_output_flips[y]);
                        let y2 = g.bob_input_perm[y];
                        dst.c[t_idx(self.x, self.y, a2, b2, x2, y2)] =
                            self.c[t_idx(self.x, self.y, a, b, x, y)].clone();
                    }
                }
            }
        }
        dst.constant = self.constant.clone();
    }
}

/// Lift of a one-bit inequality, scaled by `Y` to stay integer:
/// `c = Y * (CG expression - bound)` using
/// `p^B(0|xy) = p(00|xy) + p(10|xy)` and
/// `p^A(0|x) = (1/Y) sum_y (p(00|xy) + p(01|xy))`.
fn lift_comm<T: ExactInt>(c: &CommInequality) -> Result<Option<Table<T>>, Overflow> {
    let (x_count, y_count) = (c.x, c.y);
    let conv = |v: &BigInt| T::from_bigint(v);
    let y_scale = T::from_i64(y_count as i64);
    let mut t = Table::zeroed(x_count, y_count);
    for x in 0..x_count {
        let Some(f) = conv(&c.f[x]) else { return Ok(None) };
        for y in 0..y_count {
            let Some(d) = conv(&c.d[x * y_count + y]) else { return Ok(None) };
            let Some(e) = conv(&c.e[x * y_count + y]) else { return Ok(None) };
            let de = y_scale.checked_mul(&d.checked_add(&e)?)?;
            t.c[t_idx(x_count, y_count, 0, 0, x, y)] = de.checked_add(&f)?;
            t.c[t_idx(x_count, y_count, 0, 1, x, y)] = f.clone();
            t.c[t_idx(x_count, y_count, 1, 0, x, y)] = y_scale.checked_mul(&e)?;
        }
    }
    let Some(bound) = conv(&c.bound) else { return Ok(None) };
    t.constant = y_scale.checked_mul(&bound)?.neg();
    Ok(Some(t))
}

/// Projection of a (scaled) table back to one-bit CG coefficients in the
/// flat layout `[d | e | f]`, dividing out the lift scale `Y`.
fn project_comm<T: ExactInt>(
    t: &Table<T>,
    coeffs: &mut Vec<T>,
    bound: &mut T,
) -> Result<(), Overflow> {
    let (xc, yc) = (t.x, t.y);
    let scale = T::from_i64(yc as i64);
    coeffs.clear();
    let at = |a: usize, b: usize, x: usize, y: usize| &t.c[t_idx(xc, yc, a, b, x, y)];
    for x in 0..xc {
        for y in 0..yc {
            let v = at(0, 0, x, y)
                .checked_sub(at(0, 1, x, y))?
                .checked_sub(at(1, 0, x, y))?
                .checked_add(at(1, 1, x, y))?;
            coeffs.push(v.exact_div(&scale));
        }
    }
    for x in 0..xc {
        for y in 0..yc {
            let v = at(1, 0, x, y).checked_sub(at(1, 1, x, y))?;
            coeffs.push(v.exact_div(&scale));
        }
    }
    let mut c11_total = T::zero();
    for x in 0..xc {
        let mut acc = T::zero();
        for y in 0..yc {
            acc = acc.checked_add(&at(0, 1, x, y).checked_sub(at(1, 1, x, y))?)?;
            c11_total = c11_total.checked_add(at(1, 1, x, y))?;
        }
        coeffs.push(acc.exact_div(&scale));
    }
    *bound = t.constant.checked_add(&c11_total)?.neg().exact_div(&scale);
    Ok(())
}

/// Lift of a Bell inequality, scaled by `X * Y`, using the NS gauges
/// `p^B(0|y) = (1/X) sum_x (p(00|xy) + p(10|xy))` and the same Alice
/// marginal average as the one-bit lift.
fn lift_bell<T: ExactInt>(b: &BellInequality) -> Result<Option<Table<T>>, Overflow> {
    let (x_count, y_count) = (b.x, b.y);
    let conv = |v: &BigInt| T::from_bigint(v);
    let xs = T::from_i64(x_count as i64);
    let ys = T::from_i64(y_count as i64);
    let xy = xs.checked_mul(&ys)?;
    let mut t = Table::zeroed(x_count, y_count);
    for x in 0..x_count {
        let Some(f) = conv(&b.f[x]) else { return Ok(None) };
        let xf = xs.checked_mul(&f)?;
        for y in 0..y_count {
            let Some(d) = conv(&b.d[x * y_count + y]) else { return Ok(None) };
            let Some(e) = conv(&b.e_prime[y]) else { return Ok(None) };
            let ye = ys.checked_mul(&e)?;
            t.c[t_idx(x_count, y_count, 0, 0, x, y)] =
                xy.checked_mul(&d)?.checked_add(&ye)?.checked_add(&xf)?;
            t.c[t_idx(x_count, y_count, 0, 1, x, y)] = xf.clone();
            t.c[t_idx(x_count, y_count, 1, 0, x, y)] = ye;
        }
    }
    let Some(bound) = conv(&b.bound) else { return Ok(None) };
    t.constant = xy.checked_mul(&bound)?.neg();
    Ok(Some(t))
}

/// Projection back to Bell CG coefficients `[d | e' | f]`, dividing out
/// the lift scale `X * Y`.
fn project_bell<T: ExactInt>(
    t: &Table<T>,
    coeffs: &mut Vec<T>,
    bound: &mut T,
) -> Result<(), Overflow> {
    let (xc, yc) = (t.x, t.y);
    let scale = T::from_i64((xc * yc) as i64);
    coeffs.clear();
    let at = |a: usize, b: usize, x: usize, y: usize| &t.c[t_idx(xc, yc, a, b, x, y)];
    for x in 0..xc {
        for y in 0..yc {
            let v = at(0, 0, x, y)
                .checked_sub(at(0, 1, x, y))?
                .checked_sub(at(1, 0, x, y))?
                .checked_add(at(1, 1, x, y))?;
            coeffs.push(v.exact_div(&scale));
        }
    }
    for y in 0..yc {
        let mut acc = T::zero();
        for x in 0..xc {
            acc = acc.checked_add(&at(1, 0, x, y).checked_sub(at(1, 1, x, y))?)?;
        }
        coeffs.push(acc.exact_div(&scale));
    }
    let mut c11_total = T::zero();
    for x in 0..xc {
        let mut acc = T::zero();
        for y in 0..yc {
            acc = acc.checked_add(&at(0, 1, x, y).checked_sub(at(1, 1, x, y))?)?;
            c11_total = c11_total.checked_add(at(1, 1, x, y))?;
        }
        coeffs.push(acc.exact_div(&scale));
    }
    *bound = t.constant.checked_add(&c11_total)?.neg().exact_div(&scale);
    Ok(())
}

fn normalize_in_place<T: ExactInt>(coeffs: &mut [T], bound: &mut T) {
    let mut g = bound.abs();
    for c in coeffs.iter() {
        g = g.gcd(c);
        if g == T::one() {
            return;
        }
    }
    if g.is_zero() || g == T::one() {
        return;
    }
    for c in coeffs.iter_mut() {
        *c = c.exact_div(&g);
    }
    *bound = bound.exact_div(&g);
}

/// Image of a one-bit inequality under a relabeling. Linear in the
/// inequality: no gcd normalization is applied, so sums of images remain
/// meaningful (the image of a coprime inequality is coprime anyway).
pub fn apply_to_comm(c: &CommInequality, g: &Relabeling) -> CommInequality {
    assert!(g.validate(c.x, c.y));
    match apply_to_comm_generic::<i64>(c, g) {
        Ok(Some(out)) => out,
        _ => apply_to_comm_generic::<BigInt>(c, g)
            .expect("BigInt cannot overflow")
            .expect("BigInt conversion is total"),
    }
}

fn apply_to_comm_generic<T: ExactInt>(
    c: &CommInequality,
    g: &Relabeling,
) -> Result<Option<CommInequality>, Overflow> {
    let Some(table) = lift_comm::<T>(c)? else {
        return Ok(None);
    };
    let mut dst = Table::zeroed(c.x, c.y);
    table.apply_into(g, &mut dst);
    let mut coeffs = Vec::new();
    let mut bound = T::zero();
    project_comm(&dst, &mut coeffs, &mut bound)?;
    let flat = IntegerInequality {
        coeffs: coeffs.iter().map(|v| v.to_bigint()).collect(),
        bound: bound.to_bigint(),
        scale_note: None,
    };
    Ok(Some(CommInequality::from_flat(&flat, c.x, c.y).expect("projection preserves shape")))
}

/// Image of a Bell inequality under a relabeling (same conventions as
/// [`apply_to_comm`]).
pub fn apply_to_bell(b: &BellInequality, g: &Relabeling) -> BellInequality {
    assert!(g.validate(b.x, b.y));
    match apply_to_bell_generic::<i64>(b, g) {
        Ok(Some(out)) => out,
        _ => apply_to_bell_generic::<BigInt>(b, g)
            .expect("BigInt cannot overflow")
            .expect("BigInt conversion is total"),
    }
}

fn apply_to_bell_generic<T: ExactInt>(
    b: &BellInequality,
    g: &Relabeling,
) -> Result<Option<BellInequality>, Overflow> {
    let Some(table) = lift_bell::<T>(b)? else {
        return Ok(None);
    };
    let mut dst = Table::zeroed(b.x, b.y);
    table.apply_into(g, &mut dst);
    let mut coeffs = Vec::new();
    let mut bound = T::zero();
    project_bell(&dst, &mut coeffs, &mut bound)?;
    let flat = IntegerInequality {
        coeffs: coeffs.iter().map(|v| v.to_bigint()).collect(),
        bound: bound.to_bigint(),
        scale_note: None,
    };
    Ok(Some(BellInequality::from_flat(&flat, b.x, b.y).expect("projection preserves shape")))
}

/// Spec-facing relabeling of a flat one-bit inequality; the result is
/// gcd-normalized.
pub fn apply_relabeling(
    ineq: &IntegerInequality,
    g: &Relabeling,
    scenario: &Scenario,
) -> IntegerInequality {
    let comm = CommInequality::from_flat(ineq, scenario.x, scenario.y)
        .expect("inequality must live in the scenario's one-bit space");
    let image = apply_to_comm(&comm, g);
    IntegerInequality::from_integers(image.to_flat().coeffs, image.bound)
        .expect("relabeling images are nonzero")
}

fn canonical_generic<T: ExactInt>(
    space: Space,
    x: usize,
    y: usize,
    flat: &IntegerInequality,
    group: &[Relabeling],
) -> Result<Option<IntegerInequality>, Overflow> {
    let table = match space {
        Space::Comm => {
            let c = CommInequality::from_flat(flat, x, y).expect("shape checked by caller");
            match lift_comm::<T>(&c)? {
                Some(t) => t,
                None => return Ok(None),
            }
        }
        Space::Bell => {
            let b = BellInequality::from_flat(flat, x, y).expect("shape checked by caller");
            match lift_bell::<T>(&b)? {
                Some(t) => t,
                None => return Ok(None),
            }
        }
    };
    let mut dst = Table::zeroed(x, y);
    let mut coeffs = Vec::new();
    let mut bound = T::zero();
    let mut best: Option<(Vec<T>, T)> = None;
    for g in group {
        table.apply_into(g, &mut dst);
        match space {
            Space::Comm => project_comm(&dst, &mut coeffs, &mut bound)?,
            Space::Bell => project_bell(&dst, &mut coeffs, &mut bound)?,
        }
        normalize_in_place(&mut coeffs, &mut bound);
        let better = match &best {
            None => true,
            Some((bc, bb)) => match coeffs.cmp(bc) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => bound < *bb,
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some((coeffs.clone(), bound.clone()));
        }
    }
    let (coeffs, bound) = best.expect("group is never empty");
    Ok(Some(IntegerInequality {
        coeffs: coeffs.iter().map(|v| v.to_bigint()).collect(),
        bound: bound.to_bigint(),
        scale_note: None,
    }))
}

/// Lexicographically minimal gcd-normalized representative of the orbit
/// of `flat` under the full relabeling group. Two inequalities are
/// relabeling-equivalent iff their canonical forms are equal.
pub fn canonical_form(
    flat: &IntegerInequality,
    scenario: &Scenario,
    space: Space,
) -> IntegerInequality {
    let group = group_elements(scenario.x, scenario.y);
    canonical_form_with_group(flat, scenario, space, &group)
}

/// [`canonical_form`] against a pre-materialized group (avoids rebuilding
/// the group when canonicalizing many inequalities).
pub fn canonical_form_with_group(
    flat: &IntegerInequality,
    scenario: &Scenario,
    space: Space,
    group: &[Relabeling],
) -> IntegerInequality {
    match canonical_generic::<i64>(space, scenario.x, scenario.y, flat, group) {
        Ok(Some(out)) => out,
        _ => canonical_generic::<BigInt>(space, scenario.x, scenario.y, flat, group)
            .expect("BigInt cannot overflow")
            .expect("BigInt conversion is total"),
    }
}

/// Distinct images of a Bell inequality, each with the first group
/// element producing it (deterministic group order).
pub fn bell_orbit_with_elements(
    b: &BellInequality,
    scenario: &Scenario,
) -> Vec<(Relabeling, BellInequality)> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for g in group_elements(scenario.x, scenario.y) {
        let image = apply_to_bell(b, &g);
        if seen.insert(image.to_flat()) {
            out.push((g, image));
        }
    }
    out
}

/// Number of distinct relabeling images of a flat inequality.
pub fn orbit_size(flat: &IntegerInequality, scenario: &Scenario, space: Space) -> usize {
    let group = group_elements(scenario.x, scenario.y);
    let mut seen: HashSet<IntegerInequality> = HashSet::new();
    match space {
        Space::Comm => {
            let c = CommInequality::from_flat(flat, scenario.x, scenario.y)
                .expect("shape checked by caller");
            for g in &group {
                let image = apply_to_comm(&c, g);
                seen.insert(image.to_flat());
            }
        }
        Space::Bell => {
            let b = BellInequality::from_flat(flat, scenario.x, scenario.y)
                .expect("shape checked by caller");
            for g in &group {
                let image = apply_to_bell(&b, g);
                seen.insert(image.to_flat());
            }
        }
    }
    seen.len()
}

/// One relabeling-equivalence class of a reduced inequality list.
#[derive(Clone, Debug)]
pub struct EquivClass {
    /// Canonical representative (lexicographically minimal orbit member).
    pub canonical: IntegerInequality,
    /// Indices into the input list.
    pub members: Vec<usize>,
    pub orbit_size: usize,
}

/// Groups inequalities by canonical form. Classes are ordered by their
/// canonical representative, so the output is stable under permutation of
/// the input list.
pub fn reduce_to_classes(
    ineqs: &[IntegerInequality],
    scenario: &Scenario,
    space: Space,
) -> Vec<EquivClass> {
    let group = group_elements(scenario.x, scenario.y);
    let mut by_canonical: BTreeMap<IntegerInequality, Vec<usize>> = BTreeMap::new();
    for (i, ineq) in ineqs.iter().enumerate() {
        let canonical = canonical_form_with_group(ineq, scenario, space, &group);
        by_canonical.entry(canonical).or_default().push(i);
    }
    by_canonical
        .into_iter()
        .map(|(canonical, members)| {
            let orbit_size = orbit_size(&canonical, scenario, space);
            EquivClass {
                canonical,
                members,
                orbit_size,
            }
        })
        .collect()
}

/// Full probability-table form with rational coefficients: the public,
/// unscaled counterpart of the internal transform tables. `functional =
/// sum c_abxy p(ab|xy) + constant`, inequality `functional <= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullTableForm {
    pub x: usize,
    pub y: usize,
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

impl FullTableForm {
    pub fn coeff(&self, a: usize, b: usize, x: usize, y: usize) -> &Rational {
        &self.coeffs[t_idx(self.x, self.y, a, b, x, y)]
    }

    pub fn from_comm(c: &CommInequality) -> Self {
        let table = lift_comm::<BigInt>(c)
            .expect("BigInt cannot overflow")
            .expect("BigInt conversion is total");
        Self::from_scaled(table, BigInt::from(c.y as i64))
    }

    pub fn from_bell(b: &BellInequality) -> Self {
        let table = lift_bell::<BigInt>(b)
            .expect("BigInt cannot overflow")
            .expect("BigInt conversion is total");
        Self::from_scaled(table, BigInt::from((b.x * b.y) as i64))
    }

    fn from_scaled(table: Table<BigInt>, scale: BigInt) -> Self {
        FullTableForm {
            x: table.x,
            y: table.y,
            coeffs: table
                .c
                .iter()
                .map(|c| Rational::new(c.clone(), scale.clone()))
                .collect(),
            constant: Rational::new(table.constant, scale),
        }
    }

    pub fn apply(&self, g: &Relabeling) -> FullTableForm {
        assert!(g.validate(self.x, self.y));
        let mut out = FullTableForm {
            x: self.x,
            y: self.y,
            coeffs: vec![Rational::from(BigInt::from(0)); self.coeffs.len()],
            constant: self.constant.clone(),
        };
        for a in 0..2 {
            for b in 0..2 {
                for x in 0..self.x {
                    let a2 = a ^ usize::from(g.alice_output_flips[x]);
                    let x2 = g.alice_input_perm[x];
                    for y in 0..self.y {
                        let b2 = b ^ usize::from(g.bob_output_flips[y]);
                        let y2 = g.bob_input_perm[y];
                        out.coeffs[t_idx(self.x, self.y, a2, b2, x2, y2)] =
                            self.coeffs[t_idx(self.x, self.y, a, b, x, y)].clone();
                    }
                }
            }
        }
        out
    }

    /// Projects back to one-bit CG coefficients under the normalization
    /// and one-way-signalling gauges.
    pub fn to_comm(&self) -> CommInequality {
        let (coeffs, bound) = self.project(true);
        let flat = IntegerInequality {
            coeffs,
            bound,
            scale_note: None,
        };
        CommInequality::from_flat(&flat, self.x, self.y).expect("projection preserves shape")
    }

    /// Projects back to Bell CG coefficients under the NS gauges.
    pub fn to_bell(&self) -> BellInequality {
        let (coeffs, bound) = self.project(false);
        let flat = IntegerInequality {
            coeffs,
            bound,
            scale_note: None,
        };
        BellInequality::from_flat(&flat, self.x, self.y).expect("projection preserves shape")
    }

    fn project(&self, comm: bool) -> (Vec<BigInt>, BigInt) {
        // clear denominators, run the integer projection, undo the scale
        let mut lcm = BigInt::from(1);
        for c in self.coeffs.iter().chain(std::iter::once(&self.constant)) {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let lift_scale = BigInt::from(if comm { self.y } else { self.x * self.y } as i64);
        let full_scale = &lcm * &lift_scale;
        let table = Table {
            x: self.x,
            y: self.y,
            c: self
                .coeffs
                .iter()
                .map(|c| c.numer() * (&full_scale / c.denom()))
                .collect(),
            constant: self.constant.numer() * (&full_scale / self.constant.denom()),
        };
        let mut coeffs = Vec::new();
        let mut bound = BigInt::from(0);
        if comm {
            project_comm(&table, &mut coeffs, &mut bound).expect("BigInt cannot overflow");
        } else {
            project_bell(&table, &mut coeffs, &mut bound).expect("BigInt cannot overflow");
        }
        // the projection divided by lift_scale; still scaled by lcm
        let coeffs = coeffs.iter().map(|c| c / &lcm).collect();
        (coeffs, &bound / &lcm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::known;

    #[test]
    fn group_sizes() {
        assert_eq!(group_order(3, 3), 2304);
        assert_eq!(group_elements(2, 2).len(), 64);
        assert_eq!(group_elements(3, 3).len(), 2304);
    }

    #[test]
    fn identity_fixes_inequalities() {
        let id = Relabeling::identity(3, 3);
        let b = known::i3322();
        assert_eq!(apply_to_bell(&b, &id), b);
        let c = known::halfway_facet_a();
        assert_eq!(apply_to_comm(&c, &id), c);
    }

    #[test]
    fn full_table_round_trip() {
        let c = known::halfway_facet_a();
        assert_eq!(FullTableForm::from_comm(&c).to_comm(), c);
        let b = known::i3322();
        assert_eq!(FullTableForm::from_bell(&b).to_bell(), b);
    }

    #[test]
    fn full_table_route_matches_integer_route() {
        let b = known::i3322();
        let c = known::single_i3322_facet();
        for g in group_elements(3, 3).iter().step_by(97) {
            assert_eq!(FullTableForm::from_bell(&b).apply(g).to_bell(), apply_to_bell(&b, g));
            assert_eq!(FullTableForm::from_comm(&c).apply(g).to_comm(), apply_to_comm(&c, g));
        }
    }

    #[test]
    fn output_flip_mixes_bound() {
        // flipping Alice's outcome on one input moves coefficients into
        // the bound; the local bound of CHSH stays invariant
        let mut g = Relabeling::identity(2, 2);
        g.alice_output_flips[0] = true;
        let image = apply_to_bell(&known::chsh(), &g);
        assert_ne!(image, known::chsh());
        let s = Scenario::local(2, 2).unwrap();
        let vrep = crate::polytope::VRep::from_scenario(&s).unwrap();
        let (max_orig, _) =
            crate::polytope::max_over_binary_rows(&known::chsh().to_flat(), vrep.binary_rows().unwrap());
        let (max_image, _) =
            crate::polytope::max_over_binary_rows(&image.to_flat(), vrep.binary_rows().unwrap());
        use num_traits::ToPrimitive;
        assert_eq!(max_orig.to_i64(), Some(0));
        assert_eq!(
            (&max_image - &image.bound).to_i64(),
            Some((&max_orig - &known::chsh().bound).to_i64().unwrap())
        );
    }

    #[test]
    fn i3322_and_sym_are_equivalent() {
        let s = Scenario::local(3, 3).unwrap();
        let a = canonical_form(&known::i3322().to_flat(), &s, Space::Bell);
        let b = canonical_form(&known::i3322_sym().to_flat(), &s, Space::Bell);
        assert_eq!(a, b);
    }

    #[test]
    fn chsh_variants_collapse_to_one_class() {
        let s = Scenario::local(2, 2).unwrap();
        let group = group_elements(2, 2);
        let base = known::chsh();
        let mut canonicals = HashSet::new();
        for g in &group {
            let image = apply_to_bell(&base, g).to_flat();
            canonicals.insert(canonical_form_with_group(&image, &s, Space::Bell, &group));
        }
        assert_eq!(canonicals.len(), 1);
        assert_eq!(orbit_size(&base.to_flat(), &s, Space::Bell), 8);
    }

    #[test]
    fn positivity_facets_form_one_orbit() {
        // p(00|00) >= 0 as <=-form: -p(00|00) <= 0
        let s = Scenario::local(2, 2).unwrap();
        let mut coeffs = vec![0i64; 8];
        coeffs[0] = -1;
        let pos = IntegerInequality::from_i64(&coeffs, 0).unwrap();
        let canon = canonical_form(&pos, &s, Space::Bell);
        // all 16 positivity facets of the 22 local polytope share it
        let vrep = crate::polytope::VRep::from_scenario(&s).unwrap();
        let facets =
            crate::polytope::enumerate_facets(&vrep, &crate::polytope::DdOptions::default()).unwrap();
        let mut in_class = 0;
        for f in &facets {
            if canonical_form(&f.ineq, &s, Space::Bell) == canon {
                in_class += 1;
            }
        }
        assert_eq!(in_class, 16);
        assert_eq!(orbit_size(&pos, &s, Space::Bell), 16);
    }

    #[test]
    fn reduce_classes_of_22_local_polytope() {
        let s = Scenario::local(2, 2).unwrap();
        let vrep = crate::polytope::VRep::from_scenario(&s).unwrap();
        let facets =
            crate::polytope::enumerate_facets(&vrep, &crate::polytope::DdOptions::default()).unwrap();
        let ineqs: Vec<IntegerInequality> = facets.into_iter().map(|f| f.ineq).collect();
        let classes = reduce_to_classes(&ineqs, &s, Space::Bell);
        assert_eq!(classes.len(), 2);
        let sizes: Vec<usize> = classes.iter().map(|c| c.members.len()).collect();
        assert!(sizes.contains(&16) && sizes.contains(&8));
    }

    #[test]
    fn canonical_form_is_orbit_invariant_on_22() {
        let s = Scenario::local(2, 2).unwrap();
        let group = group_elements(2, 2);
        let base = known::chsh().to_flat();
        let canon = canonical_form_with_group(&base, &s, Space::Bell, &group);
        for g in &group {
            let image = apply_to_bell(&known::chsh(), g).to_flat();
            assert_eq!(canonical_form_with_group(&image, &s, Space::Bell, &group), canon);
        }
    }
}
