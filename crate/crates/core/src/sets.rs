use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{cast, sub};
use crate::{decimal, Error, Result, Scalar};

/// A finite set of integers `a_1 < a_2 < ... < a_k`, stored sorted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerSet<T> {
    elements: Vec<T>,
}

impl<T: Scalar> IntegerSet<T> {
    /// Builds a set from elements in any order. Duplicates and the empty set are rejected.
    pub fn new(mut elements: Vec<T>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("a set needs at least one element"));
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("set elements must be distinct"));
        }
        Ok(IntegerSet { elements })
    }

    pub fn from_i64s(values: &[i64]) -> Result<Self> {
        let elements = values.iter().map(cast).collect::<Result<Vec<T>>>()?;
        Self::new(elements)
    }

    /// `elements` must already be strictly increasing and nonempty.
    pub(crate) fn from_sorted_unchecked(elements: Vec<T>) -> Self {
        debug_assert!(!elements.is_empty());
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        IntegerSet { elements }
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<T> {
        self.elements
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn min(&self) -> &T {
        &self.elements[0]
    }

    pub fn max(&self) -> &T {
        self.elements.last().expect("nonempty")
    }

    pub fn diam(&self) -> Result<T> {
        sub(self.max(), self.min())
    }

    pub fn translate(&self, offset: &T) -> Result<Self> {
        let elements = self
            .elements
            .iter()
            .map(|a| crate::scalar::add(a, offset))
            .collect::<Result<Vec<_>>>()?;
        Ok(IntegerSet { elements })
    }

    pub fn cast<U: Scalar>(&self) -> Result<IntegerSet<U>> {
        let elements = self.elements.iter().map(cast).collect::<Result<Vec<U>>>()?;
        Ok(IntegerSet { elements })
    }

    pub fn to_rational(&self) -> RationalSet<T> {
        RationalSet {
            elements: self.elements.iter().cloned().map(Ratio::from_integer).collect(),
        }
    }

    pub fn contains(&self, value: &T) -> bool {
        self.elements.binary_search(value).is_ok()
    }
}

impl<T: Scalar> fmt::Display for IntegerSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl<T: Scalar> fmt::Debug for IntegerSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "IntegerSet{self}")
    }
}

impl<T: Scalar> Serialize for IntegerSet<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        decimal::int_vec::serialize(&self.elements, s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for IntegerSet<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elements = decimal::int_vec::deserialize(d)?;
        IntegerSet::new(elements).map_err(serde::de::Error::custom)
    }
}

/// Translates `A` to start at 0 and divides out the gcd of its elements.
///
/// Sumset sizes and h-types are unchanged by this map.
pub fn normalize<T: Scalar>(set: &IntegerSet<T>) -> Result<IntegerSet<T>> {
    if set.k() < 2 {
        return Err(Error::invalid("normalize needs at least two elements"));
    }
    let base = set.min().clone();
    let shifted = set
        .elements
        .iter()
        .map(|a| sub(a, &base))
        .collect::<Result<Vec<T>>>()?;
    let g = shifted.iter().fold(T::zero(), |g, a| g.gcd(a));
    let elements = shifted.into_iter().map(|a| a / g.clone()).collect();
    Ok(IntegerSet::from_sorted_unchecked(elements))
}

/// A finite set of exact rationals `x_1 < ... < x_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSet<T: Clone + num_integer::Integer> {
    elements: Vec<Ratio<T>>,
}

impl<T: Scalar> RationalSet<T> {
    pub fn new(mut elements: Vec<Ratio<T>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("a set needs at least one element"));
        }
        elements.sort();
        if elements.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("set elements must be distinct"));
        }
        Ok(RationalSet { elements })
    }

    pub fn elements(&self) -> &[Ratio<T>] {
        &self.elements
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    /// `Some` when every element is an integer.
    pub fn as_integers(&self) -> Option<IntegerSet<T>> {
        if self.elements.iter().all(|x| x.denom().is_one()) {
            let elements = self.elements.iter().map(|x| x.numer().clone()).collect();
            Some(IntegerSet::from_sorted_unchecked(elements))
        } else {
            None
        }
    }

    /// The affine image with smallest element 0 and largest element 1.
    pub fn unit_interval(&self) -> Result<Self> {
        if self.k() < 2 {
            return Err(Error::invalid("need at least two elements to rescale"));
        }
        let lo = self.elements[0].clone();
        let width = crate::scalar::ratio_sub(self.elements.last().unwrap(), &lo)?;
        let elements = self
            .elements
            .iter()
            .map(|x| crate::scalar::ratio_div(&crate::scalar::ratio_sub(x, &lo)?, &width))
            .collect::<Result<Vec<_>>>()?;
        debug_assert!(elements[0].is_zero() && elements.last().unwrap().is_one());
        Ok(RationalSet { elements })
    }
}

impl<T: Scalar> fmt::Display for RationalSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl<T: Scalar> fmt::Debug for RationalSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "RationalSet{self}")
    }
}

impl<T: Scalar> Serialize for RationalSet<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        decimal::ratio_vec::serialize(&self.elements, s)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for RationalSet<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let elements = decimal::ratio_vec::deserialize(d)?;
        RationalSet::new(elements).map_err(serde::de::Error::custom)
    }
}
