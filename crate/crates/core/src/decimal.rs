//! Serde glue that writes exact integers and rationals in decimal.
//!
//! Integers that fit in an `i64` are emitted as JSON numbers; anything larger is
//! emitted as a decimal string so no precision is lost. Rationals are written as
//! `"p/q"` strings (or as integers when the denominator is 1). Both forms are
//! accepted when reading.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;
use serde::de::{self, SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserializer, Serializer};

use crate::Scalar;

fn write_int<S: Serializer, T: Scalar>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    match value.to_i64() {
        Some(v) => serializer.serialize_i64(v),
        None => serializer.serialize_str(&value.to_string()),
    }
}

struct IntVisitor<T>(PhantomData<T>);

impl<'de, T: Scalar> Visitor<'de> for IntVisitor<T> {
    type Value = T;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<T, E> {
        T::from_bigint(&BigInt::from(v)).ok_or_else(|| E::custom("integer out of range"))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<T, E> {
        T::from_bigint(&BigInt::from(v)).ok_or_else(|| E::custom("integer out of range"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<T, E> {
        let big: BigInt = v.trim().parse().map_err(E::custom)?;
        T::from_bigint(&big).ok_or_else(|| E::custom("integer out of range"))
    }
}

fn read_int<'de, D: Deserializer<'de>, T: Scalar>(deserializer: D) -> Result<T, D::Error> {
    deserializer.deserialize_any(IntVisitor(PhantomData))
}

fn ratio_string<T: Scalar>(value: &Ratio<T>) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

pub(crate) fn parse_ratio<T: Scalar>(s: &str) -> Option<Ratio<T>> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim().parse::<BigInt>().ok()?, q.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if q == BigInt::from(0) {
        return None;
    }
    Some(Ratio::new(T::from_bigint(&p)?, T::from_bigint(&q)?))
}

fn write_ratio<S: Serializer, T: Scalar>(value: &Ratio<T>, serializer: S) -> Result<S::Ok, S::Error> {
    if value.is_integer() {
        write_int(value.numer(), serializer)
    } else {
        serializer.serialize_str(&ratio_string(value))
    }
}

struct RatioVisitor<T>(PhantomData<T>);

impl<'de, T: Scalar> Visitor<'de> for RatioVisitor<T> {
    type Value = Ratio<T>;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        IntVisitor::<T>(PhantomData).visit_i64(v).map(Ratio::from_integer)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        IntVisitor::<T>(PhantomData).visit_u64(v).map(Ratio::from_integer)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        parse_ratio(v).ok_or_else(|| E::custom(format!("not a rational: {v:?}")))
    }
}

struct Wrap<'a, T>(&'a T);

impl<T: Scalar> serde::Serialize for Wrap<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write_int(self.0, s)
    }
}

struct WrapRatio<'a, T>(&'a Ratio<T>);

impl<T: Scalar> serde::Serialize for WrapRatio<'_, T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write_ratio(self.0, s)
    }
}

struct SeqVisitor<T, F>(PhantomData<(T, F)>);

/// Exact integer.
pub mod int {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(value: &T, s: S) -> Result<S::Ok, S::Error> {
        write_int(value, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<T, D::Error> {
        read_int(d)
    }
}

/// Optional exact integer.
pub mod opt_int {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(value: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => write_int(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Option<T>, D::Error> {
        struct OptVisitor<T>(PhantomData<T>);
        impl<'de, T: Scalar> Visitor<'de> for OptVisitor<T> {
            type Value = Option<T>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("null or an integer")
            }
            fn visit_none<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }
            fn visit_unit<E: de::Error>(self) -> Result<Self::Value, E> {
                Ok(None)
            }
            fn visit_some<D: Deserializer<'de>>(self, d: D) -> Result<Self::Value, D::Error> {
                read_int(d).map(Some)
            }
        }
        d.deserialize_option(OptVisitor(PhantomData))
    }
}

/// Exact rational.
pub mod ratio {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(value: &Ratio<T>, s: S) -> Result<S::Ok, S::Error> {
        write_ratio(value, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Ratio<T>, D::Error> {
        d.deserialize_any(RatioVisitor(PhantomData))
    }
}

/// `Vec` of exact integers.
pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer, T: Scalar>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&Wrap(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Vec<T>, D::Error> {
        d.deserialize_seq(SeqVisitor::<T, ()>(PhantomData))
    }

    impl<'de, T: Scalar> Visitor<'de> for SeqVisitor<T, ()> {
        type Value = Vec<T>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a list of integers")
        }
        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some(v) = seq.next_element::<Elem<T>>()? {
                out.push(v.0);
            }
            Ok(out)
        }
    }

    struct Elem<T>(T);

    impl<'de, T: Scalar> serde::Deserialize<'de> for Elem<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            read_int(d).map(Elem)
        }
    }
}

/// `Vec<Vec<_>>` of exact integers.
pub mod int_matrix {
    use super::*;

    struct Row<'a, T>(&'a [T]);

    impl<T: Scalar> serde::Serialize for Row<'_, T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            int_vec::serialize(self.0, s)
        }
    }

    struct RowOwned<T>(Vec<T>);

    impl<'de, T: Scalar> serde::Deserialize<'de> for RowOwned<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            int_vec::deserialize(d).map(RowOwned)
        }
    }

    pub fn serialize<S: Serializer, T: Scalar>(rows: &[Vec<T>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Row(r))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Vec<Vec<T>>, D::Error> {
        struct V<T>(PhantomData<T>);
        impl<'de, T: Scalar> Visitor<'de> for V<T> {
            type Value = Vec<Vec<T>>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of integer lists")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(RowOwned(r)) = seq.next_element::<RowOwned<T>>()? {
                    out.push(r);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V(PhantomData))
    }
}

/// `Vec` of exact rationals.
pub mod ratio_vec {
    use super::*;

    struct Elem<T>(Ratio<T>);

    impl<'de, T: Scalar> serde::Deserialize<'de> for Elem<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            d.deserialize_any(RatioVisitor(PhantomData)).map(Elem)
        }
    }

    pub fn serialize<S: Serializer, T: Scalar>(values: &[Ratio<T>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&WrapRatio(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<Vec<Ratio<T>>, D::Error> {
        struct V<T>(PhantomData<T>);
        impl<'de, T: Scalar> Visitor<'de> for V<T> {
            type Value = Vec<Ratio<T>>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of rationals")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut out = Vec::new();
                while let Some(Elem(r)) = seq.next_element::<Elem<T>>()? {
                    out.push(r);
                }
                Ok(out)
            }
        }
        d.deserialize_seq(V(PhantomData))
    }
}
