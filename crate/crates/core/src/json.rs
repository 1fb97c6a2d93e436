//! Fixed float formatting for the JSON and CSV outputs: 17 significant digits in
//! JSON, 12 in CSV, `null` for non-finite JSON values.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub fn json_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".to_string()
    }
}

pub fn csv_float(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn serialize_f64<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(json_float(*x)).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

pub fn serialize_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    serialize_f64(&x.unwrap_or(f64::NAN), s)
}
