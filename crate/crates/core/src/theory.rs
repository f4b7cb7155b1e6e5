//! Closed-form sumset sizes below the second lattice minimum, their
//! verification against brute force, and explicit sets with prescribed minima.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinatorics::composition_count;
use crate::lattice::successive_minima;
use crate::sumset::sumset_sizes;
use crate::{decimal, normalize, Error, IntegerSet, Result, Scalar};

/// Default horizon for [`verify_main_theorem`]; minima are searched up to `2H + 2`.
pub const DEFAULT_VERIFY_HORIZON: u64 = 1000;

/// `|hA|` for a set of size `k` whose first minimum is `2 h1`, valid for `h < h2`.
///
/// Equals `C(h+k-1, k-1) - C(h-h1+k-1, k-1)`, where the second term vanishes for `h < h1`.
pub fn predicted_size(h: u64, k: usize, h1: u64) -> Result<BigInt> {
    if h == 0 || k < 4 || h1 < 2 {
        return Err(Error::invalid("predicted_size needs h >= 1, k >= 4, h1 >= 2"));
    }
    let full = composition_count(h, k);
    let lost = match h.checked_sub(h1) {
        Some(t) => composition_count(t, k),
        None => BigInt::from(0),
    };
    Ok(full - lost)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisRow {
    pub h: u64,
    pub brute_size: u64,
    #[serde(with = "decimal::int")]
    pub predicted_size: BigInt,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VerificationReport<T: Scalar> {
    pub set: IntegerSet<T>,
    pub h1: u64,
    pub h2: u64,
    /// One row per `1 <= h < h2`.
    pub per_h: Vec<HypothesisRow>,
    pub all_match: bool,
}

/// Checks the closed form against brute-force sumsets for every `1 <= h < h2`.
pub fn verify_main_theorem<T: Scalar>(set: &IntegerSet<T>) -> Result<VerificationReport<T>> {
    verify_main_theorem_with_horizon(set, DEFAULT_VERIFY_HORIZON)
}

pub fn verify_main_theorem_with_horizon<T: Scalar>(
    set: &IntegerSet<T>,
    horizon: u64,
) -> Result<VerificationReport<T>> {
    let k = set.k();
    if k < 4 {
        return Err(Error::invalid("the closed form needs k >= 4"));
    }
    let cap = 2 * horizon + 2;
    let reduced = normalize(set)?;
    let minima = successive_minima(&reduced, 2, cap)?;
    if minima.truncated {
        return Err(Error::Truncated {
            requested: 2,
            found: minima.minima.len(),
            cap,
        });
    }
    let (h1, h2) = (minima.h1().unwrap(), minima.h2().unwrap());
    let last = u32::try_from(h2 - 1).map_err(|_| Error::Overflow)?;
    let sizes = sumset_sizes(&reduced, last)?;
    let per_h = sizes
        .iter()
        .enumerate()
        .map(|(i, &brute)| {
            let h = i as u64 + 1;
            let predicted = predicted_size(h, k, h1)?;
            Ok(HypothesisRow {
                h,
                brute_size: brute as u64,
                matches: predicted == BigInt::from(brute),
                predicted_size: predicted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_match = per_h.iter().all(|r| r.matches);
    Ok(VerificationReport {
        set: set.clone(),
        h1,
        h2,
        per_h,
        all_match,
    })
}

/// A `k`-element set whose coefficient lattice has minima `2a` and `2b`.
///
/// The base is `{0, 1, (a-1)(b-1)+1, (a-1)(b-1)+a}`; further elements follow
/// `a_{i+1} = 2b * a_i`.
pub fn construct_lemma_set<T: Scalar>(a: u64, b: u64, k: usize) -> Result<IntegerSet<T>> {
    if a < 2 || b < a || k < 4 {
        return Err(Error::invalid("construct_lemma_set needs 2 <= a <= b and k >= 4"));
    }
    let a = BigInt::from(a);
    let b = BigInt::from(b);
    let one = BigInt::from(1);
    let c = (&a - &one) * (&b - &one);
    let mut elements = vec![BigInt::from(0), one.clone(), &c + &one, &c + &a];
    while elements.len() < k {
        let next = BigInt::from(2) * &b * elements.last().unwrap();
        elements.push(next);
    }
    let elements = elements
        .iter()
        .map(|x| T::from_bigint(x).ok_or(Error::Overflow))
        .collect::<Result<Vec<T>>>()?;
    IntegerSet::new(elements)
}

/// `{0, 1, 3b+1, 3b+4}`, which has `|hA| = 2(h^2+1)` for `1 <= h <= b`.
pub fn construct_cute_set<T: Scalar>(b: u64) -> Result<IntegerSet<T>> {
    if b < 2 {
        return Err(Error::invalid("construct_cute_set needs b >= 2"));
    }
    IntegerSet::from_i64s(&[0, 1, 3 * b as i64 + 1, 3 * b as i64 + 4])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RealizableSize<T: Scalar> {
    #[serde(with = "decimal::int")]
    pub size: BigInt,
    /// Lemma parameters of the witness; `a = h + 1` marks the `B_h` witness.
    pub a: u64,
    pub b: u64,
    pub witness: IntegerSet<T>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Extremes<T: Scalar> {
    pub h: u64,
    pub k: usize,
    /// Smallest possible `|hA|`, attained by arithmetic progressions.
    #[serde(with = "decimal::int")]
    pub min_size: BigInt,
    /// Largest possible `|hA|`, attained by `B_h` sets.
    #[serde(with = "decimal::int")]
    pub max_size: BigInt,
    /// Sizes `M - C(h-a+k-1, k-1)` for `2 <= a <= h`, then `M` itself.
    pub realizable: Vec<RealizableSize<T>>,
}

/// Extreme sumset sizes and the sizes realized by lemma sets with `b = h + 1`.
pub fn extreme_and_realizable<T: Scalar>(h: u64, k: usize) -> Result<Extremes<T>> {
    if h == 0 || k < 2 {
        return Err(Error::invalid("extremes need h >= 1 and k >= 2"));
    }
    let min_size = BigInt::from(h) * BigInt::from(k) - BigInt::from(h) + 1;
    let max_size = composition_count(h, k);
    let mut realizable = Vec::new();
    // lemma witnesses need at least four elements
    if k >= 4 {
        let b = h + 1;
        for a in 2..=h {
            realizable.push(RealizableSize {
                size: predicted_size(h, k, a)?,
                a,
                b,
                witness: construct_lemma_set(a, b, k)?,
            });
        }
        realizable.push(RealizableSize {
            size: max_size.clone(),
            a: b,
            b,
            witness: construct_lemma_set(b, b, k)?,
        });
    }
    Ok(Extremes {
        h,
        k,
        min_size,
        max_size,
        realizable,
    })
}

/// The popular sizes `M - C(h-a+k-1, k-1)`, `2 <= a <= h`, without witnesses.
pub fn popular_sizes(h: u64, k: usize) -> Vec<BigInt> {
    let max = composition_count(h, k);
    (2..=h)
        .map(|a| &max - composition_count(h - a, k))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sumset::h_fold_sumset;

    #[test]
    fn predicted_size_examples() {
        assert_eq!(predicted_size(3, 4, 4).unwrap(), BigInt::from(20));
        assert_eq!(predicted_size(5, 4, 4).unwrap(), BigInt::from(52));
        assert_eq!(predicted_size(6, 4, 4).unwrap(), BigInt::from(74));
        assert!(predicted_size(3, 3, 4).is_err());
    }

    #[test]
    fn zero_convention_below_first_minimum() {
        for k in 4..=8 {
            for h1 in 2..=10u64 {
                for h in 1..h1 {
                    assert_eq!(predicted_size(h, k, h1).unwrap(), composition_count(h, k));
                }
            }
        }
    }

    #[test]
    fn first_difference_identity() {
        // deficit(h) - deficit(h-1) = C(h-h1+k-2, k-2) for h > h1
        for k in 4..=8usize {
            for h1 in 2..=10u64 {
                for h in (h1 + 1)..=30 {
                    let deficit = |h: u64| composition_count(h, k) - predicted_size(h, k, h1).unwrap();
                    let diff = deficit(h) - deficit(h - 1);
                    let expected = crate::binomial(&BigInt::from(h - h1 + k as u64 - 2), k as u64 - 2);
                    assert_eq!(diff, expected, "k={k} h1={h1} h={h}");
                }
            }
        }
    }

    #[test]
    fn lemma_set_examples() {
        assert_eq!(construct_lemma_set::<i64>(2, 3, 4).unwrap().elements(), &[0, 1, 3, 4]);
        assert_eq!(construct_lemma_set::<i64>(3, 5, 4).unwrap().elements(), &[0, 1, 9, 11]);
        assert_eq!(construct_lemma_set::<i64>(2, 3, 5).unwrap().elements(), &[0, 1, 3, 4, 24]);
        assert!(construct_lemma_set::<i64>(1, 3, 4).is_err());
        assert!(construct_lemma_set::<i64>(4, 3, 4).is_err());
    }

    #[test]
    fn cute_set_examples() {
        let a = construct_cute_set::<i64>(5).unwrap();
        assert_eq!(a.elements(), &[0, 1, 16, 19]);
        for h in 1..=5u32 {
            let h64 = h as usize;
            assert_eq!(h_fold_sumset(&a, h).unwrap().k(), 2 * (h64 * h64 + 1));
        }
        assert_eq!(construct_cute_set::<i64>(2).unwrap().elements(), &[0, 1, 7, 10]);
        assert!(construct_cute_set::<i64>(1).is_err());
    }

    #[test]
    fn extremes_examples() {
        let e = extreme_and_realizable::<i64>(10, 4).unwrap();
        assert_eq!(e.min_size, BigInt::from(31));
        assert_eq!(e.max_size, BigInt::from(286));
        let sizes: Vec<BigInt> = e.realizable.iter().map(|r| r.size.clone()).collect();
        for s in [285, 282, 276, 266, 251, 230, 202, 166, 121, 286] {
            assert!(sizes.contains(&BigInt::from(s)), "{s}");
        }
        let e = extreme_and_realizable::<i64>(2, 3).unwrap();
        assert_eq!((e.min_size, e.max_size), (BigInt::from(5), BigInt::from(6)));
    }

    #[test]
    fn witnesses_realize_their_sizes() {
        for k in 4..=5 {
            for h in 1..=6u64 {
                let e = extreme_and_realizable::<i64>(h, k).unwrap();
                for r in &e.realizable {
                    let brute = h_fold_sumset(&r.witness, h as u32).unwrap().k();
                    assert_eq!(BigInt::from(brute), r.size, "h={h} k={k} a={}", r.a);
                }
            }
        }
    }

    #[test]
    fn verify_golden_sets() {
        let r = verify_main_theorem(&IntegerSet::<i64>::from_i64s(&[0, 2, 18, 25]).unwrap()).unwrap();
        assert_eq!((r.h1, r.h2), (4, 9));
        assert_eq!(r.per_h.len(), 8);
        assert!(r.all_match);

        let r = verify_main_theorem(&IntegerSet::<i64>::from_i64s(&[1, 5, 96, 100]).unwrap()).unwrap();
        assert_eq!((r.h1, r.h2), (2, 95));
        assert_eq!(r.per_h.len(), 94);
        assert!(r.all_match);
    }

    #[test]
    fn verify_reports_truncation() {
        let a = IntegerSet::<i64>::from_i64s(&[1, 5, 96, 100]).unwrap();
        assert!(matches!(
            verify_main_theorem_with_horizon(&a, 50),
            Err(Error::Truncated { found: 1, .. })
        ));
        assert!(verify_main_theorem(&IntegerSet::<i64>::from_i64s(&[0, 1, 3]).unwrap()).is_err());
    }
}
