//! Float formatting for artifacts: every float is written with 17
//! significant digits so that a re-parse recovers the same bits.
//!
//! Non-finite values (a divergent tail bound is reported as `+inf`) are
//! written as the strings `"inf"`, `"-inf"` and `"nan"` in JSON.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

/// `x` with 17 significant digits, e.g. `2.8125000000000000e-1`.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{:.16e}", x)
    }
}

pub fn parse_f64(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        "nan" => Some(f64::NAN),
        _ => s.parse().ok(),
    }
}

fn serialize_one<S: Serializer>(x: f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_finite() {
        let raw = RawValue::from_string(format_f64(x)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    } else {
        s.serialize_str(&format_f64(x))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum NumOrString {
    Num(f64),
    Str(String),
}

fn decode<E: de::Error>(v: NumOrString) -> Result<f64, E> {
    match v {
        NumOrString::Num(x) => Ok(x),
        NumOrString::Str(s) => {
            parse_f64(&s).ok_or_else(|| E::custom(format!("not a float: {s:?}")))
        }
    }
}

/// `#[serde(with = "f64_17")]`
pub mod f64_17 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        serialize_one(*x, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        decode(NumOrString::deserialize(d)?)
    }
}

/// `#[serde(with = "opt_f64_17")]`
pub mod opt_f64_17 {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => serialize_one(*v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        Option::<NumOrString>::deserialize(d)?.map(decode).transpose()
    }
}

/// `#[serde(with = "vec_f64_17")]`
pub mod vec_f64_17 {
    use super::*;
    use serde::ser::SerializeSeq;

    struct One(f64);

    impl Serialize for One {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_one(self.0, s)
        }
    }

    pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for &x in xs {
            seq.serialize_element(&One(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<NumOrString>::deserialize(d)?
            .into_iter()
            .map(decode)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[derive(Serialize, Deserialize, Debug, PartialEq)]
    struct Row {
        #[serde(with = "f64_17")]
        a: f64,
        #[serde(with = "opt_f64_17")]
        b: Option<f64>,
        #[serde(with = "vec_f64_17")]
        c: Vec<f64>,
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_f64(0.28125), "2.8125000000000000e-1");
        assert_eq!(format_f64(f64::INFINITY), "inf");
        let json = serde_json::to_string(&Row { a: 0.1, b: None, c: vec![1.0, f64::INFINITY] }).unwrap();
        assert_eq!(
            json,
            r#"{"a":1.0000000000000001e-1,"b":null,"c":[1.0000000000000000e0,"inf"]}"#
        );
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(a in proptest::num::f64::ANY, b in proptest::option::of(-1e300f64..1e300)) {
            let row = Row { a, b, c: vec![a] };
            let back: Row = serde_json::from_str(&serde_json::to_string(&row).unwrap()).unwrap();
            if a.is_nan() {
                prop_assert!(back.a.is_nan());
            } else {
                prop_assert_eq!(back.a.to_bits(), a.to_bits());
            }
            prop_assert_eq!(back.b.map(f64::to_bits), b.map(f64::to_bits));
        }
    }
}
