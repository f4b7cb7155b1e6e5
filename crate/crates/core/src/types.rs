//! Weak types of h-fold addition and multiplication tables.
//!
//! The h-type of `A` is the partition of `X_{h,k}` (compositions of `h` into
//! `k` parts) by the value of `c . a`. Two sets with the same h-type have
//! sumsets of the same size. This module computes types, the separation of a
//! rational set, and the constructive maps that carry a type from the
//! rationals to the nonnegative integers and between sums and products.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{CompositionTable, DEFAULT_COMPOSITION_CAP};
use crate::scalar::{mul, ratio_add, ratio_mul, ratio_sub};
use crate::sumset::rational_sumset;
use crate::{decimal, Error, IntegerSet, RationalSet, Result, Scalar};

/// A canonical labeling of `X_{h,k}`: `class_ids[i]` is the class of the i-th
/// composition in canonical order, with ids numbered by first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr")]
pub struct TypePartition {
    pub h: u32,
    pub k: usize,
    pub class_ids: Vec<u32>,
    #[serde(skip_serializing)]
    pub class_count: usize,
}

#[derive(Deserialize)]
struct PartitionRepr {
    h: u32,
    k: usize,
    class_ids: Vec<u32>,
}

impl TryFrom<PartitionRepr> for TypePartition {
    type Error = String;

    fn try_from(r: PartitionRepr) -> std::result::Result<Self, String> {
        let mut next = 0u32;
        for &id in &r.class_ids {
            if id > next {
                return Err("class ids are not in first-occurrence order".into());
            }
            if id == next {
                next += 1;
            }
        }
        Ok(TypePartition {
            h: r.h,
            k: r.k,
            class_ids: r.class_ids,
            class_count: next as usize,
        })
    }
}

impl TypePartition {
    /// Labels a sequence of values by first occurrence.
    pub fn from_values<V: Hash + Eq>(h: u32, k: usize, values: impl IntoIterator<Item = V>) -> Self {
        let mut seen: HashMap<V, u32> = HashMap::new();
        let class_ids: Vec<u32> = values
            .into_iter()
            .map(|v| {
                let next = seen.len() as u32;
                *seen.entry(v).or_insert(next)
            })
            .collect();
        TypePartition {
            h,
            k,
            class_ids,
            class_count: seen.len(),
        }
    }
}

/// A set whose h-fold sums can be formed exactly.
pub trait SumTable {
    type Value: Clone + Hash + Eq;

    /// Number of elements.
    fn k(&self) -> usize;

    /// `sum_i coeffs[i] * x_i`.
    fn weighted_sum(&self, coeffs: &[u32]) -> Result<Self::Value>;
}

impl<T: Scalar> SumTable for IntegerSet<T> {
    type Value = T;

    fn k(&self) -> usize {
        self.elements().len()
    }

    fn weighted_sum(&self, coeffs: &[u32]) -> Result<T> {
        let mut acc = T::zero();
        for (c, a) in coeffs.iter().zip(self.elements()) {
            if *c != 0 {
                let term = mul(&T::from_u32(*c).ok_or(Error::Overflow)?, a)?;
                acc = crate::scalar::add(&acc, &term)?;
            }
        }
        Ok(acc)
    }
}

impl<T: Scalar> SumTable for RationalSet<T> {
    type Value = Ratio<T>;

    fn k(&self) -> usize {
        self.elements().len()
    }

    fn weighted_sum(&self, coeffs: &[u32]) -> Result<Ratio<T>> {
        let mut acc = Ratio::zero();
        for (c, x) in coeffs.iter().zip(self.elements()) {
            if *c != 0 {
                let c = Ratio::from_integer(T::from_u32(*c).ok_or(Error::Overflow)?);
                acc = ratio_add(&acc, &ratio_mul(&c, x)?)?;
            }
        }
        Ok(acc)
    }
}

/// The h-type of an integer or rational set.
pub fn h_type<S: SumTable + ?Sized>(set: &S, h: u32) -> Result<TypePartition> {
    let table = CompositionTable::with_cap(h, set.k(), DEFAULT_COMPOSITION_CAP)?;
    h_type_with_table(set, &table)
}

/// [`h_type`] with a precomputed composition table, for scanning many sets.
pub fn h_type_with_table<S: SumTable + ?Sized>(set: &S, table: &CompositionTable) -> Result<TypePartition> {
    if table.k() != set.k() {
        return Err(Error::invalid("composition table has the wrong width"));
    }
    let values = table.rows().map(|c| set.weighted_sum(c)).collect::<Result<Vec<_>>>()?;
    Ok(TypePartition::from_values(table.t(), table.k(), values))
}

/// The type of the h-fold product table of a set of positive integers.
pub fn product_type<T: Scalar>(set: &IntegerSet<T>, h: u32) -> Result<TypePartition> {
    if set.min() < &T::one() {
        return Err(Error::invalid("product types need positive elements"));
    }
    let table = CompositionTable::with_cap(h, set.k(), DEFAULT_COMPOSITION_CAP)?;
    // p^c for every element and exponent, so each product is k - 1 multiplications
    let mut powers: Vec<Vec<T>> = Vec::with_capacity(set.k());
    for p in set.elements() {
        let mut row = vec![T::one()];
        for _ in 0..h {
            let next = mul(row.last().unwrap(), p)?;
            row.push(next);
        }
        powers.push(row);
    }
    let values = table
        .rows()
        .map(|c| {
            c.iter()
                .zip(&powers)
                .try_fold(T::one(), |acc, (&e, pw)| mul(&acc, &pw[e as usize]))
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(TypePartition::from_values(h, set.k(), values))
}

/// The smallest gap between distinct h-fold sums of `X`.
pub fn separation<T: Scalar>(set: &RationalSet<T>, h: u32) -> Result<Ratio<T>> {
    let sums = rational_sumset(set, h)?;
    sums.windows(2)
        .map(|w| ratio_sub(&w[1], &w[0]))
        .try_fold(None::<Ratio<T>>, |best, gap| {
            let gap = gap?;
            Ok(Some(match best {
                Some(b) if b <= gap => b,
                _ => gap,
            }))
        })?
        .ok_or_else(|| Error::invalid("separation needs at least two distinct h-fold sums"))
}

/// Record of one run of the rational-to-integer embedding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EmbeddingTrace<T: Scalar> {
    /// Smallest integer with `sep_h(X) * q0 >= 2`, for `X` rescaled to `[0, 1]`.
    #[serde(with = "decimal::int")]
    pub q0: T,
    /// The dilation `Q`, a multiple of `q0`.
    #[serde(with = "decimal::int")]
    pub dilation: T,
    /// `Q x_i - a_i`, each strictly inside `(-1/(2h), 1/(2h))`.
    #[serde(with = "decimal::ratio_vec")]
    pub epsilons: Vec<Ratio<T>>,
    /// Pigeon indices `q' < q''` whose fractional-part vectors share a box.
    pub collision: (u64, u64),
    pub result: IntegerSet<T>,
}

fn floor_ratio<T: Scalar>(x: &Ratio<T>) -> T {
    x.numer().div_floor(x.denom())
}

fn nearest_integer<T: Scalar>(x: &Ratio<T>) -> Result<T> {
    let half = Ratio::new(T::one(), T::one() + T::one());
    Ok(floor_ratio(&ratio_add(x, &half)?))
}

fn ceil_ratio<T: Scalar>(x: &Ratio<T>) -> T {
    let f = floor_ratio(x);
    if x.is_integer() {
        f
    } else {
        f + T::one()
    }
}

/// Finds `q' < q''` such that the vectors of fractional parts of `q * step * x_i`
/// land in the same box of side `1/(2h)`. Boxes are half-open `[j/(2h), (j+1)/(2h))`.
///
/// At most `(2h)^d + 1` pigeons are needed for `d` coordinates; the search stops
/// at the first collision.
fn first_box_collision<T: Scalar>(coords: &[Ratio<T>], step: &T, h: u32) -> Result<(u64, u64)> {
    let sides = 2 * h as u64;
    let bound = u32::try_from(coords.len()).ok().and_then(|d| sides.checked_pow(d));
    let sides_r = Ratio::from_integer(T::from_u64(sides).ok_or(Error::Overflow)?);
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut q: u64 = 0;
    loop {
        let scale = Ratio::from_integer(mul(&T::from_u64(q).ok_or(Error::Overflow)?, step)?);
        let mut cell = Vec::with_capacity(coords.len());
        for x in coords {
            let y = ratio_mul(&scale, x)?;
            let frac = ratio_sub(&y, &Ratio::from_integer(floor_ratio(&y)))?;
            let j = floor_ratio(&ratio_mul(&frac, &sides_r)?);
            cell.push(j.to_u64().expect("box index lies in [0, 2h)"));
        }
        if let Some(&earlier) = seen.get(&cell) {
            return Ok((earlier, q));
        }
        seen.insert(cell, q);
        if let Some(b) = bound {
            assert!(q <= b, "pigeonhole bound exceeded");
        }
        q += 1;
    }
}

/// A set of nonnegative integers with the same h-type as the rational set `X`.
///
/// `X` is rescaled to `0 = x_1 < ... < x_k = 1`. With `q0 = ceil(2 / sep_h(X))`,
/// the pigeonhole principle gives `Q = (q'' - q') q0` such that every `Q x_i` is
/// within `1/(2h)` of an integer `a_i`; rounding errors then cancel in every
/// h-fold sum relation, so the types agree. The result starts at 0.
pub fn embed_real_to_integers<T: Scalar>(
    set: &RationalSet<T>,
    h: u32,
) -> Result<(IntegerSet<T>, EmbeddingTrace<T>)> {
    if set.k() < 2 {
        return Err(Error::invalid("embedding needs k >= 2"));
    }
    if h == 0 {
        return Err(Error::invalid("h must be at least 1"));
    }
    let unit = set.unit_interval()?;
    let sep = separation(&unit, h)?;
    let two = Ratio::from_integer(T::one() + T::one());
    let q0 = ceil_ratio(&crate::scalar::ratio_div(&two, &sep)?);
    let xs = unit.elements();
    let k = xs.len();
    let (q1, q2) = first_box_collision(&xs[1..k - 1], &q0, h)?;
    let dilation = mul(&T::from_u64(q2 - q1).ok_or(Error::Overflow)?, &q0)?;
    let dil_r = Ratio::from_integer(dilation.clone());

    let mut elements = Vec::with_capacity(k);
    let mut epsilons = Vec::with_capacity(k);
    for x in xs {
        let scaled = ratio_mul(&dil_r, x)?;
        let a = nearest_integer(&scaled)?;
        epsilons.push(ratio_sub(&scaled, &Ratio::from_integer(a.clone()))?);
        elements.push(a);
    }
    let result = IntegerSet::new(elements)?;
    let trace = EmbeddingTrace {
        q0,
        dilation,
        epsilons,
        collision: (q1, q2),
        result: result.clone(),
    };
    Ok((result, trace))
}

/// Largest exponent accepted by [`sum_to_product`].
pub const MAX_POWER_EXPONENT: u64 = 1 << 20;

/// `{2^s : s in S}`; its product type equals the sum type of `S`.
pub fn sum_to_product<T: Scalar>(set: &IntegerSet<T>) -> Result<IntegerSet<T>> {
    if set.min().is_negative() {
        return Err(Error::invalid("exponents must be nonnegative"));
    }
    let top = set.max().to_bigint();
    if top > BigInt::from(MAX_POWER_EXPONENT) {
        return Err(Error::ResourceLimit {
            what: "power-of-two exponent",
            requested: top.to_string(),
            limit: MAX_POWER_EXPONENT,
        });
    }
    let elements = set
        .elements()
        .iter()
        .map(|s| {
            let e = s.to_u64().expect("bounded above");
            T::from_bigint(&(BigInt::one() << e)).ok_or(Error::Overflow)
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(IntegerSet::from_sorted_unchecked(elements))
}

/// Precisions (fractional bits of `log2`) tried by [`product_to_sum`].
pub const LOG_PRECISION_SCHEDULE: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

/// `floor(log2(p) * 2^bits)` up to a few units in the last place, for `p >= 1`.
pub fn log2_fixed(p: &BigInt, bits: u32) -> BigInt {
    assert!(p.is_positive(), "log2 of a nonpositive number");
    const GUARD: u32 = 32;
    let w = bits + GUARD;
    let int_part = p.bits() - 1;
    let mut y: BigInt = (p << w) >> int_part;
    let two = BigInt::one() << (w + 1);
    let mut acc = BigInt::from(int_part) << w;
    for i in 1..=w {
        y = (&y * &y) >> w;
        if y >= two {
            y >>= 1;
            acc += BigInt::one() << (w - i);
        }
    }
    acc >> GUARD
}

/// A set of nonnegative integers whose h-type equals the product type of `P`.
///
/// The sum type of `{log2 p}` is the product type of `P`. Exact equalities among
/// h-fold products are read off the products themselves, which bounds the
/// separation of the logarithms below by `min (v - u) / v` over consecutive
/// distinct products `u < v`. The same pigeonhole dilation as
/// [`embed_real_to_integers`] is then run on `log2` approximations, and each
/// candidate is checked exactly; precision doubles until a candidate passes.
pub fn product_to_sum<T: Scalar>(set: &IntegerSet<T>, h: u32) -> Result<IntegerSet<T>> {
    if set.k() < 2 {
        return Err(Error::invalid("product_to_sum needs k >= 2"));
    }
    if h == 0 {
        return Err(Error::invalid("h must be at least 1"));
    }
    if set.min() < &T::one() {
        return Err(Error::invalid("product_to_sum needs positive elements"));
    }
    let big = set.cast::<BigInt>()?;
    let target = product_type(&big, h)?;

    let table = CompositionTable::with_cap(h, big.k(), DEFAULT_COMPOSITION_CAP)?;
    let mut products: Vec<BigInt> = table
        .rows()
        .map(|c| {
            c.iter()
                .zip(big.elements())
                .fold(BigInt::one(), |acc, (&e, p)| acc * p.pow(e))
        })
        .collect();
    products.sort();
    products.dedup();
    let sep_lower = products
        .windows(2)
        .map(|w| Ratio::new(&w[1] - &w[0], w[1].clone()))
        .min()
        .expect("distinct positive elements give distinct products");
    let q0 = ceil_ratio(&(Ratio::from_integer(BigInt::from(2)) / sep_lower));

    let mut attempted = Vec::new();
    for bits in LOG_PRECISION_SCHEDULE {
        attempted.push(bits);
        let denom = BigInt::one() << bits;
        let logs: Vec<BigInt> = big.elements().iter().map(|p| log2_fixed(p, bits)).collect();
        let coords: Vec<Ratio<BigInt>> = logs[1..]
            .iter()
            .map(|l| Ratio::new(l - &logs[0], denom.clone()))
            .collect();
        let (q1, q2) = first_box_collision(&coords, &q0, h)?;
        let dilation = Ratio::from_integer(BigInt::from(q2 - q1) * &q0);
        let mut elements = vec![BigInt::zero()];
        for x in &coords {
            elements.push(nearest_integer(&(&dilation * x))?);
        }
        let Ok(candidate) = IntegerSet::new(elements) else {
            continue;
        };
        if h_type(&candidate, h)? == target {
            return candidate.cast();
        }
    }
    Err(Error::PrecisionExhausted { attempted })
}
