//! Rationals serialize as exact decimal strings `"p"` or `"p/q"`.

use std::str::FromStr;

use num_rational::BigRational;
use serde::{de, Deserialize, Deserializer, Serializer};

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| BigRational::from_str(t).map_err(de::Error::custom))
            .collect()
    }
}
