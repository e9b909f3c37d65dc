//! Serializes `BigInt` as a decimal string.

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{de::Error, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(value: &BigInt, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<BigInt, D::Error> {
    let s = String::deserialize(deserializer)?;
    BigInt::from_str(&s).map_err(D::Error::custom)
}

pub mod array3 {
    use super::*;
    use serde::ser::SerializeTuple;

    pub fn serialize<S: Serializer>(value: &[BigInt; 3], serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(3)?;
        for v in value {
            tup.serialize_element(&v.to_string())?;
        }
        tup.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<[BigInt; 3], D::Error> {
        let raw = <[String; 3]>::deserialize(deserializer)?;
        let mut out: [BigInt; 3] = Default::default();
        for (slot, s) in out.iter_mut().zip(raw.iter()) {
            *slot = BigInt::from_str(s).map_err(D::Error::custom)?;
        }
        Ok(out)
    }
}
