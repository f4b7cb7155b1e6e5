//! h-fold sumsets, size profiles and deficit tables.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::composition_count;
use crate::{decimal, Error, IntegerSet, RationalSet, Result, Scalar};

/// Default bound on `|hA|` for a single sumset.
pub const DEFAULT_SUMSET_CAP: u64 = 100_000_000;

/// Walks `1A, 2A, 3A, ...` by repeatedly forming `(h-1)A + A`.
///
/// Each step is a k-way merge of the sorted shifts `(h-1)A + a_i` with
/// duplicates dropped, so the cost of a step is `O(|(h-1)A| * k^2)`
/// comparisons and no sorting.
pub struct SumsetSequence<V> {
    base: Vec<V>,
    current: Vec<V>,
    scratch: Vec<V>,
    h: u32,
    cap: u64,
}

impl<V: Clone + Ord + CheckedAdd> SumsetSequence<V> {
    /// `base` must be sorted and duplicate free.
    pub fn new(base: Vec<V>, cap: u64) -> Self {
        debug_assert!(base.windows(2).all(|w| w[0] < w[1]));
        SumsetSequence {
            current: base.clone(),
            base,
            scratch: Vec::new(),
            h: 1,
            cap,
        }
    }

    /// The current `hA`.
    pub fn current(&self) -> &[V] {
        &self.current
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    /// Advances from `hA` to `(h+1)A`.
    pub fn step(&mut self) -> Result<()> {
        let k = self.base.len();
        let out = &mut self.scratch;
        out.clear();
        let mut heads = vec![0usize; k];
        let mut cands: Vec<Option<V>> = Vec::with_capacity(k);
        for b in &self.base {
            cands.push(Some(self.current[0].checked_add(b).ok_or(Error::Overflow)?));
        }
        loop {
            let mut best: Option<usize> = None;
            for (i, c) in cands.iter().enumerate() {
                if let Some(v) = c {
                    match best {
                        Some(j) if cands[j].as_ref().unwrap() <= v => {}
                        _ => best = Some(i),
                    }
                }
            }
            let Some(i) = best else { break };
            let v = cands[i].take().unwrap();
            heads[i] += 1;
            if let Some(next) = self.current.get(heads[i]) {
                cands[i] = Some(next.checked_add(&self.base[i]).ok_or(Error::Overflow)?);
            }
            if out.last() != Some(&v) {
                out.push(v);
                if out.len() as u64 > self.cap {
                    return Err(Error::ResourceLimit {
                        what: "sumset size",
                        requested: format!("more than {}", self.cap),
                        limit: self.cap,
                    });
                }
            }
        }
        std::mem::swap(&mut self.current, &mut self.scratch);
        self.h += 1;
        Ok(())
    }

    /// Steps until the current set is `hA`.
    pub fn advance_to(&mut self, h: u32) -> Result<&[V]> {
        if h < self.h {
            return Err(Error::invalid("sumset sequence cannot move backwards"));
        }
        while self.h < h {
            self.step()?;
        }
        Ok(&self.current)
    }
}

/// Sorted distinct elements of `hA` for any ordered additive type.
pub fn iterated_sumset<V: Clone + Ord + CheckedAdd>(sorted: &[V], h: u32, cap: u64) -> Result<Vec<V>> {
    if h == 0 {
        return Err(Error::invalid("h must be at least 1"));
    }
    if sorted.is_empty() {
        return Err(Error::invalid("empty set"));
    }
    let mut seq = SumsetSequence::new(sorted.to_vec(), cap);
    seq.advance_to(h)?;
    Ok(seq.current)
}

/// `hA` as a set.
pub fn h_fold_sumset<T: Scalar>(set: &IntegerSet<T>, h: u32) -> Result<IntegerSet<T>> {
    h_fold_sumset_with_cap(set, h, DEFAULT_SUMSET_CAP)
}

pub fn h_fold_sumset_with_cap<T: Scalar>(set: &IntegerSet<T>, h: u32, cap: u64) -> Result<IntegerSet<T>> {
    iterated_sumset(set.elements(), h, cap).map(IntegerSet::from_sorted_unchecked)
}

/// `hX` for a set of rationals, sorted.
pub fn rational_sumset<T: Scalar>(set: &RationalSet<T>, h: u32) -> Result<Vec<Ratio<T>>> {
    iterated_sumset(set.elements(), h, DEFAULT_SUMSET_CAP)
}

/// `(|hA|)` for `h = 1..=horizon`.
pub fn sumset_sizes<T: Scalar>(set: &IntegerSet<T>, horizon: u32) -> Result<Vec<usize>> {
    sumset_sizes_of(set.elements(), horizon, DEFAULT_SUMSET_CAP)
}

pub fn sumset_sizes_of<V: Clone + Ord + CheckedAdd>(sorted: &[V], horizon: u32, cap: u64) -> Result<Vec<usize>> {
    if horizon == 0 {
        return Ok(Vec::new());
    }
    let mut seq = SumsetSequence::new(sorted.to_vec(), cap);
    let mut sizes = vec![seq.current().len()];
    for _ in 1..horizon {
        seq.step()?;
        sizes.push(seq.current().len());
    }
    Ok(sizes)
}

/// Whether all h-fold sums of `A` are distinct.
pub fn is_bh_set<T: Scalar>(set: &IntegerSet<T>, h: u32) -> Result<bool> {
    let size = h_fold_sumset(set, h)?.k();
    Ok(BigInt::from(size) == composition_count(h as u64, set.k()))
}

/// Sizes of `hA` for `h = 1..=H` together with the missing-sum counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SumsetProfile<T: Scalar> {
    pub set: IntegerSet<T>,
    pub horizon: u32,
    /// `sizes[h-1] = |hA|`.
    pub sizes: Vec<usize>,
    /// `C(h+k-1, k-1) - |hA|`.
    #[serde(with = "decimal::int_vec")]
    pub deficits: Vec<BigInt>,
    /// `deficits[h] - deficits[h-1]` for `h = 2..=H`.
    #[serde(with = "decimal::int_vec")]
    pub deficit_first_differences: Vec<BigInt>,
    /// Largest `h <= H` with zero deficit, 0 if none.
    pub bh_threshold: u32,
    /// `C_0` with `|hA| = diam(A) h + C_0` on the observed tail. Heuristic:
    /// only says the tail inside the horizon looks linear.
    #[serde(with = "decimal::opt_int")]
    pub linear_intercept: Option<T>,
    pub linear_intercept_method: String,
}

pub fn sumset_profile<T: Scalar>(set: &IntegerSet<T>, horizon: u32) -> Result<SumsetProfile<T>> {
    if horizon == 0 {
        return Err(Error::invalid("horizon must be at least 1"));
    }
    if set.k() < 2 {
        return Err(Error::invalid("a sumset profile needs k >= 2"));
    }
    let k = set.k();
    let sizes = sumset_sizes(set, horizon)?;
    let deficits: Vec<BigInt> = sizes
        .iter()
        .enumerate()
        .map(|(i, &s)| composition_count(i as u64 + 1, k) - BigInt::from(s))
        .collect();
    let deficit_first_differences = deficits.windows(2).map(|w| &w[1] - &w[0]).collect();
    let bh_threshold = deficits
        .iter()
        .rposition(|d| d.is_zero())
        .map_or(0, |i| i as u32 + 1);

    let diam = set.diam()?.to_bigint();
    let window = k.max(3);
    let diffs: Vec<i64> = sizes.windows(2).map(|w| w[1] as i64 - w[0] as i64).collect();
    let linear_intercept = if diffs.len() >= window
        && diffs[diffs.len() - window..].iter().all(|&d| BigInt::from(d) == diam)
    {
        let last = BigInt::from(*sizes.last().unwrap()) - &diam * BigInt::from(horizon);
        Some(T::from_bigint(&last).ok_or(Error::Overflow)?)
    } else {
        None
    };

    Ok(SumsetProfile {
        set: set.clone(),
        horizon,
        sizes,
        deficits,
        deficit_first_differences,
        bh_threshold,
        linear_intercept,
        linear_intercept_method: "heuristic: last max(3,k) size differences equal diam(A)".into(),
    })
}

impl<T: Scalar> SumsetProfile<T> {
    pub fn size_at(&self, h: u32) -> Option<usize> {
        self.sizes.get(h.checked_sub(1)? as usize).copied()
    }

    pub fn deficit_at(&self, h: u32) -> Option<u64> {
        self.deficits.get(h.checked_sub(1)? as usize)?.to_u64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> IntegerSet<i64> {
        IntegerSet::from_i64s(v).unwrap()
    }

    /// Every ordered h-tuple, summed.
    fn tuple_oracle(a: &[i64], h: u32) -> Vec<i64> {
        let mut sums = vec![0i64];
        for _ in 0..h {
            sums = sums.iter().flat_map(|s| a.iter().map(move |x| s + x)).collect();
        }
        sums.sort();
        sums.dedup();
        sums
    }

    #[test]
    fn sumset_examples() {
        let a = set(&[0, 2, 18, 25]);
        assert_eq!(h_fold_sumset(&a, 2).unwrap().k(), 10);
        assert_eq!(h_fold_sumset(&a, 1).unwrap(), a);
        let ap = h_fold_sumset(&set(&[0, 1, 2]), 3).unwrap();
        assert_eq!(ap.elements(), &[0, 1, 2, 3, 4, 5, 6]);
        assert!(h_fold_sumset(&a, 0).is_err());
    }

    #[test]
    fn profile_of_ap() {
        let p = sumset_profile(&set(&[0, 1, 2, 3]), 5).unwrap();
        assert_eq!(p.sizes, vec![4, 7, 10, 13, 16]);
        assert_eq!(p.linear_intercept, Some(1));
        assert_eq!(p.bh_threshold, 1);
        assert!(p.deficits.windows(2).all(|w| w[0] < w[1] || w[0].is_zero()));
    }

    #[test]
    fn short_horizon_has_no_intercept() {
        let p = sumset_profile(&set(&[0, 1, 2, 3]), 3).unwrap();
        assert_eq!(p.linear_intercept, None);
        assert!(sumset_profile(&set(&[4]), 3).is_err());
    }

    #[test]
    fn cap_and_overflow_errors() {
        let a = set(&[0, 1, 5, 17, 40]);
        assert!(matches!(
            h_fold_sumset_with_cap(&a, 4, 20),
            Err(Error::ResourceLimit { .. })
        ));
        let huge = IntegerSet::<i64>::new(vec![0, i64::MAX / 2 + 1]).unwrap();
        assert!(matches!(h_fold_sumset(&huge, 2), Err(Error::Overflow)));
    }

    #[test]
    fn rational_sums() {
        let x = RationalSet::new(vec![Ratio::from_integer(0i64), Ratio::new(1, 2), Ratio::from_integer(2)]).unwrap();
        let s = rational_sumset(&x, 2).unwrap();
        assert_eq!(
            s,
            vec![
                Ratio::from_integer(0),
                Ratio::new(1, 2),
                Ratio::from_integer(1),
                Ratio::from_integer(2),
                Ratio::new(5, 2),
                Ratio::from_integer(4)
            ]
        );
    }

    #[test]
    fn matches_tuple_oracle_on_small_sets() {
        let sets: &[&[i64]] = &[&[0, 2, 18, 25], &[1, 5, 96, 100], &[-3, 0, 7], &[0, 1, 3, 7, 12], &[5]];
        for a in sets {
            for h in 1..=5 {
                let fast = h_fold_sumset(&set(a), h).unwrap();
                assert_eq!(fast.elements(), tuple_oracle(a, h).as_slice(), "{a:?} h={h}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_set() -> impl Strategy<Value = Vec<i64>> {
            proptest::collection::btree_set(0i64..=60, 2..=5).prop_map(|s| s.into_iter().collect())
        }

        proptest! {
            #[test]
            fn agrees_with_ordered_tuples(a in small_set(), h in 1u32..=6) {
                let fast = h_fold_sumset(&set(&a), h).unwrap();
                let expected = tuple_oracle(&a, h);
                prop_assert_eq!(fast.elements(), expected.as_slice());
            }

            #[test]
            fn profile_invariants(a in small_set(), horizon in 1u32..=8) {
                let s = set(&a);
                let p = sumset_profile(&s, horizon).unwrap();
                let diam = s.diam().unwrap();
                for (i, &size) in p.sizes.iter().enumerate() {
                    let h = i as i64 + 1;
                    prop_assert!(size as i64 <= h * diam + 1);
                    prop_assert!(BigInt::from(size) <= composition_count(h as u64, s.k()));
                    prop_assert!(p.deficits[i] >= BigInt::zero());
                }
                prop_assert!(p.sizes.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(p.deficits.windows(2).all(|w| w[0] <= w[1]));
                // B_h' implies B_h for smaller h
                for h in 1..=p.bh_threshold as usize {
                    prop_assert!(p.deficits[h - 1].is_zero());
                }
            }

            #[test]
            fn sizes_survive_normalization(a in small_set(), h in 1u32..=6) {
                let s = set(&a);
                let n = crate::normalize(&s).unwrap();
                prop_assert_eq!(h_fold_sumset(&s, h).unwrap().k(), h_fold_sumset(&n, h).unwrap().k());
                prop_assert_eq!(crate::normalize(&n).unwrap(), n);
            }
        }
    }
}
