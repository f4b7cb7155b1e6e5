//! The coefficient lattice of a set `A = {a_1 < ... < a_k}`: integer vectors
//! orthogonal to both the all-ones vector and `(a_1, ..., a_k)`. It has rank
//! `k - 2`, every nonzero element has even L1 norm at least 4, and its
//! successive L1 minima govern the early sumset sizes of `A`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::scalar::{add, mul, sub};
use crate::{decimal, Error, IntegerSet, Result, Scalar};

/// An element of the coefficient lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LatticeVector<T: Scalar> {
    #[serde(with = "decimal::int_vec")]
    pub coords: Vec<T>,
    #[serde(with = "decimal::int")]
    pub l1_norm: T,
}

impl<T: Scalar> LatticeVector<T> {
    pub fn new(coords: Vec<T>) -> Self {
        let l1_norm = coords.iter().fold(T::zero(), |acc, c| acc + c.abs());
        LatticeVector { coords, l1_norm }
    }

    /// Flips the sign so the first nonzero coordinate is positive.
    pub fn normalized(mut self) -> Self {
        if let Some(first) = self.coords.iter().find(|c| !c.is_zero()) {
            if first.is_negative() {
                for c in &mut self.coords {
                    *c = -c.clone();
                }
            }
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Whether the vector is orthogonal to `1` and to the elements of `set`.
    pub fn is_in_lattice_of(&self, set: &IntegerSet<T>) -> bool {
        if self.coords.len() != set.k() {
            return false;
        }
        let sum = self.coords.iter().fold(BigInt::zero(), |s, c| s + c.to_bigint());
        let dot = self
            .coords
            .iter()
            .zip(set.elements())
            .fold(BigInt::zero(), |s, (c, a)| s + c.to_bigint() * a.to_bigint());
        sum.is_zero() && dot.is_zero()
    }

    fn norm_u64(&self) -> u64 {
        self.l1_norm.to_u64().expect("norms are bounded by the u64 cap")
    }
}

/// A lattice basis of the coefficient lattice, in row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LatticeBasis<T: Scalar> {
    pub rows: Vec<LatticeVector<T>>,
    pub set: IntegerSet<T>,
}

impl<T: Scalar> LatticeBasis<T> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Integer coordinates of `v` in this basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        if v.len() != self.set.k() {
            return None;
        }
        let mut residual: Vec<BigInt> = v.iter().map(Scalar::to_bigint).collect();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let row: Vec<BigInt> = row.coords.iter().map(Scalar::to_bigint).collect();
            let p = row.iter().position(|x| !x.is_zero())?;
            let (z, rem) = residual[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            for (r, b) in residual.iter_mut().zip(&row) {
                *r -= &z * b;
            }
            coeffs.push(T::from_bigint(&z)?);
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[T]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// An exact integer basis of `{c in Z^k : c.1 = 0, c.a = 0}`.
///
/// Unimodular column operations reduce the 2 x k constraint matrix to
/// `[H | 0]`; the trailing `k - 2` columns of the accumulated transform span the
/// kernel over `Z`. The result is then put in row Hermite normal form.
pub fn coefficient_lattice_basis<T: Scalar>(set: &IntegerSet<T>) -> Result<LatticeBasis<T>> {
    let k = set.k();
    if k < 3 {
        return Err(Error::invalid("the coefficient lattice is trivial for k <= 2"));
    }
    // columns of [M; U], M = [1 ... 1; a_1 ... a_k], U = I
    let mut cols: Vec<Vec<T>> = (0..k)
        .map(|j| {
            let mut col = vec![T::one(), set.elements()[j].clone()];
            col.extend((0..k).map(|i| if i == j { T::one() } else { T::zero() }));
            col
        })
        .collect();

    for r in 0..2 {
        loop {
            let pivot = (r..k)
                .filter(|&j| !cols[j][r].is_zero())
                .min_by(|&i, &j| cols[i][r].abs().cmp(&cols[j][r].abs()));
            let Some(pivot) = pivot else {
                return Err(Error::invalid("constraint rows are dependent"));
            };
            cols.swap(r, pivot);
            let mut done = true;
            for j in r + 1..k {
                if cols[j][r].is_zero() {
                    continue;
                }
                let q = cols[j][r].div_floor(&cols[r][r]);
                let (head, tail) = cols.split_at_mut(j);
                for (t, p) in tail[0].iter_mut().zip(&head[r]) {
                    *t = sub(t, &mul(&q, p)?)?;
                }
                if !cols[j][r].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
    }

    let rows: Vec<Vec<T>> = cols[2..].iter().map(|c| c[2..].to_vec()).collect();
    let rows = hermite_normal_form(rows)?;
    let rows: Vec<LatticeVector<T>> = rows.into_iter().map(LatticeVector::new).collect();
    debug_assert!(rows.iter().all(|r| r.is_in_lattice_of(set)));
    Ok(LatticeBasis { rows, set: set.clone() })
}

/// Row Hermite normal form of a full-row-rank integer matrix.
fn hermite_normal_form<T: Scalar>(mut rows: Vec<Vec<T>>) -> Result<Vec<Vec<T>>> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for c in 0..n {
        if pivot_row == m {
            break;
        }
        loop {
            let best = (pivot_row..m)
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&i, &j| rows[i][c].abs().cmp(&rows[j][c].abs()));
            let Some(best) = best else { break };
            rows.swap(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..m {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[pivot_row][c]);
                row_axpy(&mut rows, i, pivot_row, &q)?;
                if !rows[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[pivot_row][c].is_zero() {
            continue;
        }
        if rows[pivot_row][c].is_negative() {
            for x in &mut rows[pivot_row] {
                *x = -x.clone();
            }
        }
        for i in 0..pivot_row {
            let q = rows[i][c].div_floor(&rows[pivot_row][c]);
            if !q.is_zero() {
                row_axpy(&mut rows, i, pivot_row, &q)?;
            }
        }
        pivot_row += 1;
    }
    Ok(rows)
}

/// `rows[target] -= q * rows[source]`.
fn row_axpy<T: Scalar>(rows: &mut [Vec<T>], target: usize, source: usize, q: &T) -> Result<()> {
    for j in 0..rows[target].len() {
        let delta = mul(q, &rows[source][j])?;
        rows[target][j] = sub(&rows[target][j], &delta)?;
    }
    Ok(())
}

/// All nonzero lattice vectors with L1 norm at most `cap`, one per `±` pair,
/// normalized and sorted by (norm, coordinates).
///
/// The first `k - 2` coordinates are enumerated under the remaining norm
/// budget; the last two are then forced by the two linear constraints.
pub fn lattice_vectors_within<T: Scalar>(set: &IntegerSet<T>, cap: u64) -> Result<Vec<LatticeVector<T>>> {
    let k = set.k();
    if k < 3 {
        return Err(Error::invalid("the coefficient lattice is trivial for k <= 2"));
    }
    let a = set.elements();
    let denom = sub(&a[k - 1], &a[k - 2])?;
    let mut search = Search {
        a,
        denom,
        cap: T::from_u64(cap).ok_or(Error::Overflow)?,
        coords: vec![T::zero(); k],
        out: Vec::new(),
    };
    search.descend(0, T::zero(), T::zero(), T::zero())?;
    let mut out = search.out;
    out.sort_by(compare_vectors);
    Ok(out)
}

fn compare_vectors<T: Scalar>(x: &LatticeVector<T>, y: &LatticeVector<T>) -> Ordering {
    x.l1_norm.cmp(&y.l1_norm).then_with(|| x.coords.cmp(&y.coords))
}

struct Search<'a, T: Scalar> {
    a: &'a [T],
    denom: T,
    cap: T,
    coords: Vec<T>,
    out: Vec<LatticeVector<T>>,
}

impl<T: Scalar> Search<'_, T> {
    fn descend(&mut self, pos: usize, sum: T, dot: T, used: T) -> Result<()> {
        let k = self.a.len();
        if pos == k - 2 {
            // c_{k-1} + c_k = -sum,  a_{k-1} c_{k-1} + a_k c_k = -dot
            let num = sub(&mul(&self.a[k - 2], &sum)?, &dot)?;
            let (last, rem) = num.div_rem(&self.denom);
            if !rem.is_zero() {
                return Ok(());
            }
            let prev = sub(&-sum, &last)?;
            let norm = add(&add(&used, &prev.abs())?, &last.abs())?;
            if norm > self.cap || norm.is_zero() {
                return Ok(());
            }
            self.coords[k - 2] = prev;
            self.coords[k - 1] = last;
            let first = self.coords.iter().find(|c| !c.is_zero()).expect("nonzero norm");
            if first.is_positive() {
                self.out.push(LatticeVector {
                    coords: self.coords.clone(),
                    l1_norm: norm,
                });
            }
            return Ok(());
        }
        let remaining = sub(&self.cap, &used)?;
        let mut c = -remaining.clone();
        while c <= remaining {
            let left = sub(&remaining, &c.abs())?;
            let new_sum = add(&sum, &c)?;
            // the trailing coordinates must cancel new_sum
            if new_sum.abs() <= left {
                let new_dot = add(&dot, &mul(&c, &self.a[pos])?)?;
                let new_used = add(&used, &c.abs())?;
                self.coords[pos] = c.clone();
                self.descend(pos + 1, new_sum, new_dot, new_used)?;
            }
            c = c + T::one();
        }
        self.coords[pos] = T::zero();
        Ok(())
    }
}

/// Incremental exact rank test using fraction-free elimination.
#[derive(Default, Clone, Debug)]
pub struct IndependenceTracker {
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl IndependenceTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            let pivot = &row[*p];
            for (x, r) in v.iter_mut().zip(row) {
                *x = &*x * pivot - &factor * r;
            }
            let content = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !content.is_zero() {
                for x in &mut v {
                    *x /= &content;
                }
            }
        }
        v
    }

    pub fn is_independent(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().any(|x| !x.is_zero())
    }

    /// Adds `v` if it is independent of the tracked vectors; returns whether it was added.
    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        let r = self.reduce(v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Successive L1 minima `2h_1 <= 2h_2 <= ...` with their minimizers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MinimaReport<T: Scalar> {
    pub minima: Vec<u64>,
    #[serde(with = "decimal::int_matrix")]
    pub minimizers: Vec<Vec<T>>,
    pub cap: u64,
    pub truncated: bool,
}

impl<T: Scalar> MinimaReport<T> {
    /// `h_i = λ_i / 2`, 1-based.
    pub fn h(&self, i: usize) -> Option<u64> {
        self.minima.get(i.checked_sub(1)?).map(|m| m / 2)
    }

    pub fn h1(&self) -> Option<u64> {
        self.h(1)
    }

    pub fn h2(&self) -> Option<u64> {
        self.h(2)
    }
}

/// The first `count` successive L1 minima of the coefficient lattice, searching
/// norms up to `cap`.
///
/// Minimizers have their first nonzero coordinate positive; among candidates of
/// equal norm the lexicographically smallest independent one is chosen.
pub fn successive_minima<T: Scalar>(set: &IntegerSet<T>, count: usize, cap: u64) -> Result<MinimaReport<T>> {
    let k = set.k();
    if k < 3 {
        return Err(Error::invalid("successive minima need k >= 3"));
    }
    if count == 0 || count > k - 2 {
        return Err(Error::invalid(format!("count must lie in 1..={}", k - 2)));
    }
    if cap < 4 || cap % 2 == 1 {
        return Err(Error::invalid("cap must be even and at least 4"));
    }

    // grow the search radius geometrically; minima found below the radius are final
    let mut radius = cap.min(16);
    loop {
        let vectors = lattice_vectors_within(set, radius)?;
        let (minima, minimizers) = greedy_minima(&vectors, count);
        if minima.len() == count || radius == cap {
            let truncated = minima.len() < count;
            return Ok(MinimaReport { minima, minimizers, cap, truncated });
        }
        radius = radius.saturating_mul(2).min(cap);
    }
}

fn greedy_minima<T: Scalar>(sorted: &[LatticeVector<T>], count: usize) -> (Vec<u64>, Vec<Vec<T>>) {
    let mut tracker = IndependenceTracker::new();
    let mut minima = Vec::new();
    let mut minimizers = Vec::new();
    for v in sorted {
        if minima.len() == count {
            break;
        }
        let big: Vec<BigInt> = v.coords.iter().map(Scalar::to_bigint).collect();
        if tracker.insert(&big) {
            minima.push(v.norm_u64());
            minimizers.push(v.coords.clone());
        }
    }
    (minima, minimizers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet<i64> {
        IntegerSet::from_i64s(v).unwrap()
    }

    #[test]
    fn basis_has_rank_k_minus_2_and_contains_known_vectors() {
        let b = coefficient_lattice_basis(&set(&[1, 5, 96, 100])).unwrap();
        assert_eq!(b.rank(), 2);
        assert!(b.contains(&[1, -1, -1, 1]));
        assert!(b.contains(&[0, -4, 95, -91]));
        assert!(!b.contains(&[1, -1, 0, 0]));

        let b = coefficient_lattice_basis(&set(&[0, 1, 3, 4])).unwrap();
        assert_eq!(b.rank(), 2);
        assert_eq!(b.coordinates(&[1, -1, -1, 1]).map(|c| c.len()), Some(2));

        let b = coefficient_lattice_basis(&set(&[3, 8, 20, 21, 57])).unwrap();
        assert_eq!(b.rank(), 3);
        for row in &b.rows {
            assert!(row.is_in_lattice_of(&b.set));
        }
        assert!(coefficient_lattice_basis(&set(&[0, 1])).is_err());
    }

    #[test]
    fn basis_is_canonical_hnf() {
        let b = coefficient_lattice_basis(&set(&[0, 2, 18, 25])).unwrap();
        let pivots: Vec<usize> = b
            .rows
            .iter()
            .map(|r| r.coords.iter().position(|x| *x != 0).unwrap())
            .collect();
        assert!(pivots.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in pivots.iter().enumerate() {
            assert!(b.rows[i].coords[p] > 0);
            for j in 0..i {
                let x = b.rows[j].coords[p];
                assert!(0 <= x && x < b.rows[i].coords[p]);
            }
        }
    }

    #[test]
    fn minima_golden_values() {
        let r = successive_minima(&set(&[0, 2, 18, 25]), 2, 40).unwrap();
        assert_eq!(r.minima, vec![8, 18]);
        assert!(!r.truncated);

        let r = successive_minima(&set(&[1, 5, 96, 100]), 2, 200).unwrap();
        assert_eq!(r.minima, vec![4, 190]);
        assert_eq!(r.minimizers, vec![vec![1, -1, -1, 1], vec![0, 4, -95, 91]]);
    }

    #[test]
    fn truncation_is_reported() {
        let r = successive_minima(&set(&[1, 5, 96, 100]), 2, 100).unwrap();
        assert!(r.truncated);
        assert_eq!(r.minima, vec![4]);
    }

    #[test]
    fn argument_validation() {
        let a = set(&[0, 2, 18, 25]);
        assert!(successive_minima(&a, 2, 41).is_err());
        assert!(successive_minima(&a, 3, 40).is_err());
        assert!(successive_minima(&a, 0, 40).is_err());
        assert!(successive_minima(&a, 1, 2).is_err());
    }

    #[test]
    fn enumerated_vectors_are_lattice_members() {
        let a = set(&[0, 3, 7, 19, 30]);
        let vs = lattice_vectors_within(&a, 14).unwrap();
        assert!(!vs.is_empty());
        for v in &vs {
            assert!(v.is_in_lattice_of(&a));
            assert!(v.l1_norm >= 4 && v.l1_norm % 2 == 0);
            assert_eq!(v.clone().normalized(), *v);
        }
    }

    #[test]
    fn independence_tracker() {
        let mut t = IndependenceTracker::new();
        let v = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(t.insert(&v(&[1, -1, -1, 1])));
        assert!(!t.insert(&v(&[-3, 3, 3, -3])));
        assert!(t.insert(&v(&[0, 4, -95, 91])));
        assert!(!t.is_independent(&v(&[1, 3, -96, 92])));
        assert_eq!(t.rank(), 2);
    }

    #[test]
    fn generic_over_big_integers() {
        let a = IntegerSet::<BigInt>::from_i64s(&[0, 2, 18, 25]).unwrap();
        let r = successive_minima(&a, 2, 40).unwrap();
        assert_eq!(r.minima, vec![8, 18]);
    }
}
