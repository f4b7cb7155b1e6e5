//! Binomial coefficients and the compositions `X_{t,k}`: nonnegative integer
//! vectors of length `k` whose coordinates sum to `t`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Default bound on the number of composition vectors materialized at once.
pub const DEFAULT_COMPOSITION_CAP: u64 = 10_000_000;

/// `C(n, r)` with the convention that it is 0 whenever `n < r` (including negative `n`).
pub fn binomial<T: Scalar>(n: &T, r: u64) -> BigInt {
    let n = n.to_bigint();
    let r_big = BigInt::from(r);
    if n.is_negative() || n < r_big {
        return BigInt::zero();
    }
    // symmetric form keeps the loop short
    let r = {
        let other = (&n - &r_big).to_u64();
        match other {
            Some(o) if o < r => o,
            _ => r,
        }
    };
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= &n - BigInt::from(i);
        acc /= BigInt::from(i + 1);
    }
    acc
}

/// `C(n, r)` as a `u64`, or `None` if it does not fit.
pub fn binomial_u64(n: u64, r: u64) -> Option<u64> {
    binomial(&BigInt::from(n), r).to_u64()
}

/// Number of compositions of `t` into `k` nonnegative parts, `C(t+k-1, k-1)`.
pub fn composition_count(t: u64, k: usize) -> BigInt {
    if k == 0 {
        return if t == 0 { BigInt::one() } else { BigInt::zero() };
    }
    binomial(&BigInt::from(t + k as u64 - 1), k as u64 - 1)
}

/// One element of `X_{t,k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompositionVector {
    coords: Vec<u32>,
    t: u32,
}

impl CompositionVector {
    pub fn new(coords: Vec<u32>) -> Self {
        let t = coords.iter().sum();
        CompositionVector { coords, t }
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn k(&self) -> usize {
        self.coords.len()
    }
}

/// All of `X_{t,k}` packed row-major, in canonical order.
///
/// Canonical order is lexicographic with larger coordinates first, so the first
/// row is `(t, 0, ..., 0)` and the last is `(0, ..., 0, t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompositionTable {
    t: u32,
    k: usize,
    data: Vec<u32>,
}

impl CompositionTable {
    pub fn new(t: u32, k: usize) -> Result<Self> {
        Self::with_cap(t, k, DEFAULT_COMPOSITION_CAP)
    }

    pub fn with_cap(t: u32, k: usize, cap: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("compositions need k >= 1"));
        }
        let count = composition_count(t as u64, k);
        if count > BigInt::from(cap) {
            return Err(Error::ResourceLimit {
                what: "composition count",
                requested: count.to_string(),
                limit: cap,
            });
        }
        let count = count.to_usize().expect("bounded by cap");
        let mut data = Vec::with_capacity(count * k);
        let mut current = vec![0u32; k];
        fill(&mut data, &mut current, 0, t);
        debug_assert_eq!(data.len(), count * k);
        Ok(CompositionTable { t, k, data })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.k
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, u32> {
        self.data.chunks_exact(self.k)
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.k..(i + 1) * self.k]
    }

    pub fn to_vectors(&self) -> Vec<CompositionVector> {
        self.rows()
            .map(|r| CompositionVector { coords: r.to_vec(), t: self.t })
            .collect()
    }
}

fn fill(out: &mut Vec<u32>, current: &mut [u32], pos: usize, remaining: u32) {
    let k = current.len();
    if pos == k - 1 {
        current[pos] = remaining;
        out.extend_from_slice(current);
        return;
    }
    for c in (0..=remaining).rev() {
        current[pos] = c;
        fill(out, current, pos + 1, remaining - c);
    }
    current[pos] = 0;
}

/// Every element of `X_{t,k}` in canonical order.
pub fn enumerate_compositions(t: u32, k: usize) -> Result<Vec<CompositionVector>> {
    Ok(CompositionTable::new(t, k)?.to_vectors())
}
