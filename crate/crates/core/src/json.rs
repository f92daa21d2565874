//! Shared JSON helpers.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::Value;

const SAFE_INT: i64 = 1 << 53;

/// An integer as a JSON number when it fits in 53 bits, otherwise as a decimal string.
pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() < SAFE_INT => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

/// Inverse of [`int_value`].
pub fn parse_int_value(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}
