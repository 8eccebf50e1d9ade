//! Exact rational arithmetic kernels: inequality normalization, rank,
//! affine hull dimension, and small linear solves.
//!
//! Everything on the polytope side of the crate runs on exact integers or
//! rationals; floating point is confined to [`crate::quantum`]. The hot
//! paths (double description, rank certificates) are generic over
//! [`ExactInt`] so they can run on `i128` and fall back to [`BigInt`] when
//! a computation overflows.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar used throughout the polytope-side code.
pub type Rational = BigRational;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("inequality has an all-zero coefficient vector")]
    ZeroInequality,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// Signals that an `i64`/`i128` computation left the representable range;
/// callers rerun on `BigInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

/// Integer scalar for the exact kernels. `i128` is the fast path; `BigInt`
/// the unbounded fallback.
pub trait ExactInt: Clone + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// -1, 0, or 1.
    fn signum(&self) -> i8;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow>;
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow>;
    fn gcd(&self, other: &Self) -> Self;
    /// Division known to be exact (remainder zero).
    fn exact_div(&self, other: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
    fn from_bigint(b: &BigInt) -> Option<Self>;
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i8 {
        match self.cmp(&0) {
            std::cmp::Ordering::Less => -1,
            std::cmp::Ordering::Equal => 0,
            std::cmp::Ordering::Greater => 1,
        }
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_add(*self, *other).ok_or(Overflow)
    }
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_sub(*self, *other).ok_or(Overflow)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        i128::checked_mul(*self, *other).ok_or(Overflow)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl ExactInt for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i8 {
        i64::signum(*self) as i8
    }
    fn neg(&self) -> Self {
        -*self
    }
    fn abs(&self) -> Self {
        i64::abs(*self)
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        i64::checked_add(*self, *other).ok_or(Overflow)
    }
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow> {
        i64::checked_sub(*self, *other).ok_or(Overflow)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        i64::checked_mul(*self, *other).ok_or(Overflow)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert_eq!(self % other, 0);
        self / other
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i64()
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i8 {
        if Zero::is_zero(self) {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn checked_add(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self + other)
    }
    fn checked_sub(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self - other)
    }
    fn checked_mul(&self, other: &Self) -> Result<Self, Overflow> {
        Ok(self * other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)));
        self / other
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

/// Point with exact rational entries. Entries are kept in lowest terms
/// with positive denominator by `BigRational` itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalVector(pub Vec<Rational>);

impl RationalVector {
    pub fn from_integers(entries: &[i64]) -> Self {
        RationalVector(entries.iter().map(|&v| Rational::from(BigInt::from(v))).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    /// Entries as integers, or `None` if any entry has a denominator.
    pub fn as_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|r| if r.denom().is_one() { Some(r.numer().clone()) } else { None })
            .collect()
    }

    /// Clears denominators: returns `(scale, integer entries)` with
    /// `scale > 0` and `entries = scale * self`.
    pub fn cleared(&self) -> (BigInt, Vec<BigInt>) {
        let mut lcm: BigInt = One::one();
        for r in &self.0 {
            lcm = lcm.lcm(r.denom());
        }
        let ints = self
            .0
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()))
            .collect();
        (lcm, ints)
    }
}

impl From<Vec<Rational>> for RationalVector {
    fn from(v: Vec<Rational>) -> Self {
        RationalVector(v)
    }
}

/// Linear inequality `coeffs · p <= bound` with coprime integer data.
///
/// `scale_note` records the positive rational multiplier applied when the
/// inequality was normalized from rational input; it does not participate
/// in equality or ordering.
#[derive(Clone, Debug)]
pub struct IntegerInequality {
    pub coeffs: Vec<BigInt>,
    pub bound: BigInt,
    pub scale_note: Option<Rational>,
}

impl PartialEq for IntegerInequality {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.bound == other.bound
    }
}

impl Eq for IntegerInequality {}

impl std::hash::Hash for IntegerInequality {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
        self.bound.hash(state);
    }
}

impl PartialOrd for IntegerInequality {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntegerInequality {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.coeffs
            .cmp(&other.coeffs)
            .then_with(|| self.bound.cmp(&other.bound))
    }
}

impl IntegerInequality {
    /// Builds from raw integers and gcd-normalizes.
    pub fn from_integers(coeffs: Vec<BigInt>, bound: BigInt) -> Result<Self, ExactError> {
        normalize_integer(coeffs, bound)
    }

    pub fn from_i64(coeffs: &[i64], bound: i64) -> Result<Self, ExactError> {
        normalize_integer(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::from(bound),
        )
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Exact value of `coeffs · point` (no bound comparison).
    pub fn evaluate(&self, point: &RationalVector) -> Result<Rational, ExactError> {
        if point.len() != self.coeffs.len() {
            return Err(ExactError::DimensionMismatch {
                expected: self.coeffs.len(),
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (c, p) in self.coeffs.iter().zip(point.iter()) {
            acc += Rational::from(c.clone()) * p;
        }
        Ok(acc)
    }

    /// Fast path for 0/1 coordinate rows: sums the coefficients selected
    /// by nonzero entries.
    pub fn evaluate_binary(&self, row: &[u8]) -> BigInt {
        debug_assert_eq!(row.len(), self.coeffs.len());
        let mut acc: BigInt = Zero::zero();
        for (c, &bit) in self.coeffs.iter().zip(row.iter()) {
            if bit != 0 {
                acc += c;
            }
        }
        acc
    }
}

/// Scales a rational inequality `coeffs · p <= bound` to coprime integers.
///
/// The applied multiplier is positive, so the solution set is unchanged;
/// it is recorded in `scale_note`. The all-zero coefficient vector is
/// rejected.
pub fn normalize(coeffs: &[Rational], bound: &Rational) -> Result<IntegerInequality, ExactError> {
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(ExactError::ZeroInequality);
    }
    let mut lcm: BigInt = One::one();
    for c in coeffs.iter().chain(std::iter::once(bound)) {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    let int_bound = bound.numer() * (&lcm / bound.denom());

    let mut g: BigInt = Zero::zero();
    for c in ints.iter().chain(std::iter::once(&int_bound)) {
        g = Integer::gcd(&g, c);
    }
    debug_assert!(!Zero::is_zero(&g));
    let coeffs: Vec<BigInt> = ints.iter().map(|c| c / &g).collect();
    let bound = &int_bound / &g;
    let scale = Rational::new(lcm, g);
    Ok(IntegerInequality {
        coeffs,
        bound,
        scale_note: Some(scale),
    })
}

fn normalize_integer(coeffs: Vec<BigInt>, bound: BigInt) -> Result<IntegerInequality, ExactError> {
    if coeffs.iter().all(|c| Zero::is_zero(c)) {
        return Err(ExactError::ZeroInequality);
    }
    let mut g: BigInt = Zero::zero();
    for c in coeffs.iter().chain(std::iter::once(&bound)) {
        g = Integer::gcd(&g, c);
    }
    if g.is_one() {
        return Ok(IntegerInequality {
            coeffs,
            bound,
            scale_note: None,
        });
    }
    let scale = Rational::new(One::one(), g.clone());
    Ok(IntegerInequality {
        coeffs: coeffs.iter().map(|c| c / &g).collect(),
        bound: &bound / &g,
        scale_note: Some(scale),
    })
}

/// Divides a vector by the gcd of its entries (no-op for the zero vector).
pub fn reduce_by_gcd<T: ExactInt>(v: &mut [T]) {
    let mut g = T::zero();
    for e in v.iter() {
        g = g.gcd(e);
        if g == T::one() {
            return;
        }
    }
    if g.is_zero() || g == T::one() {
        return;
    }
    for e in v.iter_mut() {
        *e = e.exact_div(&g);
    }
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Pivots take the largest-magnitude entry of the current column to keep
/// coefficient growth in check. With `stop_at = Some(r)` the elimination
/// exits early once rank `r` is certain.
pub fn rank_int<T: ExactInt>(rows: &[Vec<T>], stop_at: Option<usize>) -> Result<usize, Overflow> {
    if rows.is_empty() {
        return Ok(0);
    }
    let ncols = rows[0].len();
    let mut m: Vec<Vec<T>> = rows.to_vec();
    let nrows = m.len();
    let mut rank = 0usize;
    let mut prev = T::one();
    for col in 0..ncols {
        if rank >= nrows {
            break;
        }
        if let Some(s) = stop_at {
            if rank >= s {
                break;
            }
        }
        // pivot: largest |entry| in this column at or below `rank`
        let mut pivot_row = None;
        let mut pivot_abs = T::zero();
        for (i, row) in m.iter().enumerate().skip(rank) {
            let a = row[col].abs();
            if !a.is_zero() && (pivot_row.is_none() || a > pivot_abs) {
                pivot_row = Some(i);
                pivot_abs = a;
            }
        }
        let Some(p) = pivot_row else { continue };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        let (above, below) = m.split_at_mut(rank + 1);
        let pivot_row_ref = &above[rank];
        for row in below.iter_mut() {
            if row[col].is_zero() {
                // still must rescale for Bareiss consistency
                for j in (col + 1)..ncols {
                    let t = row[j].checked_mul(&pivot)?;
                    row[j] = t.exact_div(&prev);
                }
                row[col] = T::zero();
                continue;
            }
            let factor = row[col].clone();
            for j in (col + 1)..ncols {
                let a = row[j].checked_mul(&pivot)?;
                let b = pivot_row_ref[j].checked_mul(&factor)?;
                row[j] = a.checked_sub(&b)?.exact_div(&prev);
            }
            row[col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// In-place Bareiss rank on a row-major flat matrix, stopping as soon as
/// `stop_at` is reached. Allocation-free; the buffer is destroyed.
pub fn rank_flat<T: ExactInt>(
    mat: &mut [T],
    ncols: usize,
    stop_at: usize,
) -> Result<usize, Overflow> {
    if ncols == 0 || mat.is_empty() {
        return Ok(0);
    }
    debug_assert_eq!(mat.len() % ncols, 0);
    let nrows = mat.len() / ncols;
    let mut rank = 0usize;
    let mut prev = T::one();
    for col in 0..ncols {
        if rank >= nrows || rank >= stop_at {
            break;
        }
        let mut pivot_row = None;
        let mut pivot_abs = T::zero();
        for i in rank..nrows {
            let a = mat[i * ncols + col].abs();
            if !a.is_zero() && (pivot_row.is_none() || a > pivot_abs) {
                pivot_row = Some(i);
                pivot_abs = a;
            }
        }
        let Some(p) = pivot_row else { continue };
        if p != rank {
            for j in 0..ncols {
                mat.swap(rank * ncols + j, p * ncols + j);
            }
        }
        let pivot = mat[rank * ncols + col].clone();
        for i in (rank + 1)..nrows {
            let factor = mat[i * ncols + col].clone();
            if factor.is_zero() {
                for j in (col + 1)..ncols {
                    let t = mat[i * ncols + j].checked_mul(&pivot)?;
                    mat[i * ncols + j] = t.exact_div(&prev);
                }
            } else {
                for j in (col + 1)..ncols {
                    let a = mat[i * ncols + j].checked_mul(&pivot)?;
                    let b = mat[rank * ncols + j].checked_mul(&factor)?;
                    mat[i * ncols + j] = a.checked_sub(&b)?.exact_div(&prev);
                }
            }
            mat[i * ncols + col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Rank of a rational matrix (rows cleared to integers first).
pub fn rank_rational(rows: &[RationalVector]) -> usize {
    let cleared: Vec<Vec<BigInt>> = rows.iter().map(|r| r.cleared().1).collect();
    rank_bigint_rows(&cleared, None)
}

/// Rank of integer rows, trying the `i128` fast path first.
pub fn rank_bigint_rows(rows: &[Vec<BigInt>], stop_at: Option<usize>) -> usize {
    let small: Option<Vec<Vec<i128>>> = rows
        .iter()
        .map(|r| r.iter().map(|c| c.to_i128()).collect())
        .collect();
    if let Some(small) = small {
        if let Ok(rank) = rank_int(&small, stop_at) {
            return rank;
        }
    }
    rank_int(rows, stop_at).expect("BigInt rank cannot overflow")
}

/// Dimension of the affine hull of a non-empty point set, computed exactly.
///
/// Invariant under translation of all points and permutation of the list.
pub fn affine_rank(points: &[RationalVector]) -> usize {
    assert!(!points.is_empty(), "affine_rank of an empty point set");
    let base = &points[0];
    let diffs: Vec<RationalVector> = points[1..]
        .iter()
        .map(|p| {
            RationalVector(
                p.iter()
                    .zip(base.iter())
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    if diffs.is_empty() {
        return 0;
    }
    rank_rational(&diffs)
}

/// Affine rank of 0/1 coordinate rows (fast path used by facet
/// certification against strategy vertex sets).
pub fn affine_rank_binary(rows: &[&[u8]]) -> usize {
    assert!(!rows.is_empty(), "affine_rank of an empty point set");
    if rows.len() == 1 {
        return 0;
    }
    let base = rows[0];
    let diffs: Vec<Vec<i128>> = rows[1..]
        .iter()
        .map(|r| {
            r.iter()
                .zip(base.iter())
                .map(|(&a, &b)| a as i128 - b as i128)
                .collect()
        })
        .collect();
    match rank_int(&diffs, None) {
        Ok(r) => r,
        Err(Overflow) => {
            let big: Vec<Vec<BigInt>> = diffs
                .iter()
                .map(|r| r.iter().map(|&c| BigInt::from(c)).collect())
                .collect();
            rank_int(&big, None).expect("BigInt rank cannot overflow")
        }
    }
}

/// Solves the square rational system `a · x = b` by Gaussian elimination.
/// Returns `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&i| !m[i][col].is_zero())?;
        m.swap(col, pivot_row);
        let pivot = m[col][col].clone();
        for j in col..=n {
            let v = &m[col][j] / &pivot;
            m[col][j] = v;
        }
        for i in 0..n {
            if i == col || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            for j in col..=n {
                let v = &m[i][j] - &factor * &m[col][j];
                m[i][j] = v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn normalize_clears_denominators() {
        // (1/3, 1/3, -2/3) <= 1/3 -> (1, 1, -2) <= 1
        let ineq = normalize(&[rat(1, 3), rat(1, 3), rat(-2, 3)], &rat(1, 3)).unwrap();
        assert_eq!(ineq.coeffs, vec![BigInt::from(1), BigInt::from(1), BigInt::from(-2)]);
        assert_eq!(ineq.bound, BigInt::from(1));
        assert_eq!(ineq.scale_note, Some(rat(3, 1)));
    }

    #[test]
    fn normalize_divides_by_gcd() {
        // (2, 4) <= 6 -> (1, 2) <= 3
        let ineq = IntegerInequality::from_i64(&[2, 4], 6).unwrap();
        assert_eq!(ineq.coeffs, vec![BigInt::from(1), BigInt::from(2)]);
        assert_eq!(ineq.bound, BigInt::from(3));
    }

    #[test]
    fn normalize_rejects_zero_vector() {
        assert!(matches!(
            normalize(&[rat(0, 1), rat(0, 1)], &rat(1, 1)),
            Err(ExactError::ZeroInequality)
        ));
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant() {
        let base = normalize(&[rat(3, 2), rat(-9, 4)], &rat(3, 4)).unwrap();
        // normalize(k*v <= k*b) = normalize(v <= b) for positive rational k
        for k in [rat(2, 1), rat(7, 3), rat(1, 5)] {
            let scaled: Vec<Rational> = [rat(3, 2), rat(-9, 4)].iter().map(|c| c * &k).collect();
            let again = normalize(&scaled, &(rat(3, 4) * &k)).unwrap();
            assert_eq!(again, base);
        }
        let re = normalize(
            &base.coeffs.iter().map(|c| Rational::from(c.clone())).collect::<Vec<_>>(),
            &Rational::from(base.bound.clone()),
        )
        .unwrap();
        assert_eq!(re, base);
    }

    #[test]
    fn rank_of_collinear_points_is_one() {
        let pts = vec![
            RationalVector::from_integers(&[0, 0]),
            RationalVector::from_integers(&[1, 1]),
            RationalVector::from_integers(&[2, 2]),
        ];
        assert_eq!(affine_rank(&pts), 1);
    }

    #[test]
    fn affine_rank_translation_and_permutation_invariant() {
        let pts = vec![
            RationalVector::from_integers(&[0, 0, 1]),
            RationalVector::from_integers(&[1, 0, 3]),
            RationalVector::from_integers(&[0, 1, 0]),
            RationalVector::from_integers(&[1, 1, 2]),
        ];
        let r = affine_rank(&pts);
        let shifted: Vec<RationalVector> = pts
            .iter()
            .map(|p| {
                RationalVector(
                    p.iter()
                        .zip([rat(5, 1), rat(-7, 2), rat(1, 3)].iter())
                        .map(|(a, b)| a + b)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        assert_eq!(affine_rank(&shifted), r);
        let mut perm = pts.clone();
        perm.reverse();
        assert_eq!(affine_rank(&perm), r);
    }

    #[test]
    fn rank_early_exit_matches_full_rank() {
        let rows: Vec<Vec<i128>> = vec![
            vec![1, 0, 0, 2],
            vec![0, 1, 0, 3],
            vec![1, 1, 0, 5],
            vec![0, 0, 1, 1],
        ];
        assert_eq!(rank_int(&rows, None).unwrap(), 3);
        assert_eq!(rank_int(&rows, Some(2)).unwrap(), 2);
    }

    #[test]
    fn solve_square_small_system() {
        let a = vec![
            vec![rat(2, 1), rat(1, 1)],
            vec![rat(1, 1), rat(-1, 1)],
        ];
        let b = vec![rat(4, 1), rat(-1, 1)];
        let x = solve_square(&a, &b).unwrap();
        assert_eq!(x, vec![rat(1, 1), rat(2, 1)]);
        let singular = vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(2, 1), rat(4, 1)],
        ];
        assert!(solve_square(&singular, &b).is_none());
    }
}
