//! The structured input format:
//!
//! ```json
//! {"d": 2, "A": [[0, -1], [1, 0]], "b": [0.5, "1/3"], "x0": [0, 0], "u": [1, 0],
//!  "claim": {"pair": [0, 4]}}
//! ```
//!
//! `d` and `A` are required. Translation and starting-point angles are either
//! radians (JSON numbers) or strings `"p/q"` meaning `2 pi p / q`.

use std::f64::consts::TAU;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use super::CliError;
use crate::exactalg::{serde_int, IntMatrix};

/// An angle given either in radians or as an exact fraction of a full turn.
#[derive(Clone, Debug, PartialEq)]
pub enum Angle {
    Radians(f64),
    Turns { num: BigInt, den: BigInt },
}

impl Angle {
    pub fn to_radians(&self) -> f64 {
        match self {
            Angle::Radians(r) => *r,
            Angle::Turns { num, den } => {
                // reduce to [0, 1) turns first so the float step sees a small numerator
                let r = num.mod_floor(den);
                TAU * (r.to_f64().unwrap_or(0.0) / den.to_f64().unwrap_or(1.0))
            }
        }
    }

    fn parse_turns(s: &str) -> Option<Angle> {
        let (p, q) = s.split_once('/')?;
        let num: BigInt = p.trim().parse().ok()?;
        let den: BigInt = q.trim().parse().ok()?;
        if den <= BigInt::zero() {
            return None;
        }
        Some(Angle::Turns { num, den })
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Radians(r) => write!(f, "{r}"),
            Angle::Turns { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Angle::Radians(r) => s.serialize_f64(*r),
            Angle::Turns { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        angle_from_value(&v).ok_or_else(|| D::Error::custom(format!("invalid angle {v}")))
    }
}

fn angle_from_value(v: &Value) -> Option<Angle> {
    match v {
        Value::Number(n) => n.as_f64().filter(|x| x.is_finite()).map(Angle::Radians),
        Value::String(s) => Angle::parse_turns(s),
        _ => None,
    }
}

/// A claimed certificate to be checked by `certify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Claim {
    Pair([u64; 2]),
    Order(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub d: usize,
    #[serde(rename = "A")]
    pub a: IntMatrix,
    pub b: Vec<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<Angle>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_int_vec")]
    pub u: Option<Vec<BigInt>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claim: Option<Claim>,
}

mod opt_int_vec {
    use super::serde_int::Int;
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(|xs| xs.iter().cloned().map(Int).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        Ok(Option::<Vec<Int>>::deserialize(d)?.map(|xs| xs.into_iter().map(|i| i.0).collect()))
    }
}

impl MapSpec {
    pub fn translation_radians(&self) -> Vec<f64> {
        self.b.iter().map(Angle::to_radians).collect()
    }

    pub fn start_radians(&self) -> Vec<f64> {
        self.x0.as_ref().map(|x| x.iter().map(Angle::to_radians).collect()).unwrap_or_else(|| vec![0.0; self.d])
    }
}

const KNOWN_KEYS: [&str; 6] = ["d", "A", "b", "x0", "u", "claim"];

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::Malformed(msg.into())
}

fn int_from_value(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(i.into())
            } else if let Some(u) = n.as_u64() {
                Ok(u.into())
            } else {
                Err(CliError::NonInteger(format!("{n} is not an integer")))
            }
        }
        Value::String(s) => {
            s.trim().parse::<BigInt>().map_err(|_| CliError::NonInteger(format!("{s:?} is not an integer")))
        }
        other => Err(CliError::NonInteger(format!("{other} is not an integer"))),
    }
}

fn angles(v: &Value, key: &str, d: usize) -> Result<Vec<Angle>, CliError> {
    let arr = v.as_array().ok_or_else(|| malformed(format!("\"{key}\" must be an array")))?;
    if arr.len() != d {
        return Err(CliError::Dimension(format!("\"{key}\" has length {} but d = {d}", arr.len())));
    }
    arr.iter()
        .map(|x| {
            angle_from_value(x).ok_or_else(|| malformed(format!("\"{key}\" entry {x} is neither a number nor \"p/q\"")))
        })
        .collect()
}

/// Parses and validates the structured map description.
pub fn parse_input(text: &str) -> Result<MapSpec, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| malformed(format!("invalid JSON: {e}")))?;
    let obj = root.as_object().ok_or_else(|| malformed("input must be a JSON object"))?;
    if let Some(k) = obj.keys().find(|k| !KNOWN_KEYS.contains(&k.as_str())) {
        return Err(malformed(format!("unknown key \"{k}\"")));
    }

    let d = obj
        .get("d")
        .ok_or_else(|| malformed("missing \"d\""))?
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| malformed("\"d\" must be a positive integer"))? as usize;

    let rows = obj
        .get("A")
        .ok_or_else(|| malformed("missing \"A\""))?
        .as_array()
        .ok_or_else(|| malformed("\"A\" must be an array of rows"))?;
    if rows.len() != d {
        return Err(CliError::Dimension(format!("\"A\" has {} rows but d = {d}", rows.len())));
    }
    let mut parsed_rows = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| malformed(format!("row {i} of \"A\" is not an array")))?;
        if row.len() != d {
            return Err(CliError::Dimension(format!("row {i} of \"A\" has length {} but d = {d}", row.len())));
        }
        parsed_rows.push(row.iter().map(int_from_value).collect::<Result<Vec<_>, _>>()?);
    }
    let a = IntMatrix::from_rows(parsed_rows).map_err(|e| CliError::Dimension(e.to_string()))?;

    let b = match obj.get("b") {
        None | Some(Value::Null) => vec![Angle::Radians(0.0); d],
        Some(v) => angles(v, "b", d)?,
    };
    let x0 = match obj.get("x0") {
        None | Some(Value::Null) => None,
        Some(v) => Some(angles(v, "x0", d)?),
    };
    let u = match obj.get("u") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let arr = v.as_array().ok_or_else(|| malformed("\"u\" must be an array"))?;
            if arr.len() != d {
                return Err(CliError::Dimension(format!("\"u\" has length {} but d = {d}", arr.len())));
            }
            Some(arr.iter().map(int_from_value).collect::<Result<Vec<_>, _>>()?)
        }
    };
    let claim = match obj.get("claim") {
        None | Some(Value::Null) => None,
        Some(v) => {
            Some(serde_json::from_value::<Claim>(v.clone()).map_err(|e| malformed(format!("invalid \"claim\": {e}")))?)
        }
    };
    Ok(MapSpec { d, a, b, x0, u, claim })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_input() {
        let spec = parse_input(r#"{"d":2,"A":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(spec.a, IntMatrix::identity(2));
        assert_eq!(spec.b, vec![Angle::Radians(0.0); 2]);
        assert_eq!(spec.translation_radians(), vec![0.0, 0.0]);
    }

    #[test]
    fn translation_forms() {
        let spec = parse_input(r#"{"d":2,"A":[[1,1],[0,1]],"b":[0.5,"-1/4"]}"#).unwrap();
        assert_eq!(spec.b[0], Angle::Radians(0.5));
        assert_eq!(spec.b[1], Angle::Turns { num: BigInt::from(-1), den: BigInt::from(4) });
        let r = spec.translation_radians();
        assert!((r[1] - 0.75 * TAU).abs() < 1e-15);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(parse_input(r#"{"d":2,"A":[[1,1]]}"#), Err(CliError::Dimension(_))));
        assert!(matches!(parse_input(r#"{"d":2,"A":[[1,1],[1]]}"#), Err(CliError::Dimension(_))));
        assert!(matches!(parse_input(r#"{"d":2,"A":[[1,0],[0,1]],"b":[0]}"#), Err(CliError::Dimension(_))));
        assert!(matches!(parse_input(r#"{"d":2,"A":[[1.5,0],[0,1]]}"#), Err(CliError::NonInteger(_))));
        assert!(matches!(parse_input(r#"{"d":1,"A":[["x"]]}"#), Err(CliError::NonInteger(_))));
        assert!(matches!(parse_input(r#"{"d":2,"A":[[1,0],[0,1]"#), Err(CliError::Malformed(_))));
        assert!(matches!(parse_input(r#"{"A":[[1]]}"#), Err(CliError::Malformed(_))));
        assert!(matches!(parse_input(r#"{"d":0,"A":[]}"#), Err(CliError::Malformed(_))));
        assert!(matches!(parse_input(r#"{"d":1,"A":[[1]],"q":1}"#), Err(CliError::Malformed(_))));
        assert!(matches!(parse_input(r#"{"d":1,"A":[[1]],"b":["1/0"]}"#), Err(CliError::Malformed(_))));
        assert!(matches!(parse_input("[1]"), Err(CliError::Malformed(_))));
    }

    #[test]
    fn big_entries_as_strings() {
        let spec = parse_input(r#"{"d":1,"A":[["123456789012345678901234567890"]]}"#).unwrap();
        assert_eq!(spec.a.get(0, 0).to_string(), "123456789012345678901234567890");
    }

    #[test]
    fn claim_and_u() {
        let spec = parse_input(r#"{"d":2,"A":[[0,-1],[1,0]],"u":[1,0],"claim":{"order":4}}"#).unwrap();
        assert_eq!(spec.claim, Some(Claim::Order(4)));
        assert_eq!(spec.u, Some(vec![BigInt::from(1), BigInt::from(0)]));
        let spec = parse_input(r#"{"d":1,"A":[[1]],"claim":{"pair":[0,1]}}"#).unwrap();
        assert_eq!(spec.claim, Some(Claim::Pair([0, 1])));
    }

    #[test]
    fn spec_serde_round_trip() {
        let spec = parse_input(r#"{"d":2,"A":[[1,1],[0,1]],"b":[0.5,"1/3"],"x0":[1,2]}"#).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<MapSpec>(&s).unwrap(), spec);
        assert_eq!(parse_input(&s).unwrap(), spec);
    }
}
