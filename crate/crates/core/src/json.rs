//! Exact JSON numbers for arbitrary-size integers.

use std::fmt::Display;

use serde::{Serialize, Serializer};
use serde_json::{Number, Value};

/// An integer of any size as an exact JSON number.
pub fn number(x: &impl Display) -> Number {
    x.to_string()
        .parse()
        .expect("integer display is a valid JSON number")
}

pub fn value(x: &impl Display) -> Value {
    Value::Number(number(x))
}

pub fn array<T: Display>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(value).collect())
}

pub fn ser_big<S: Serializer, T: Display>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    number(x).serialize(s)
}

pub fn ser_big_vec<S: Serializer, T: Display>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(number))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn big_values_stay_exact() {
        let x: BigInt = "-123456789012345678901234567890".parse().unwrap();
        let text = serde_json::to_string(&array(std::slice::from_ref(&x))).unwrap();
        assert_eq!(text, "[-123456789012345678901234567890]");
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back[0].to_string(), x.to_string());
    }
}
