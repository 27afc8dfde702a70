//! JSON encodings shared by the report types.
//!
//! Integers that fit in `i64` are emitted as JSON numbers, larger ones as
//! decimal strings so no precision is lost.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::Value;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn rat(x: &BigRational) -> Value {
    if x.denom().is_one() {
        int(x.numer())
    } else {
        Value::String(x.to_string())
    }
}

/// Finite floats as numbers, anything else as a string.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}
