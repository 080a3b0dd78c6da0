//! Deterministic JSON rendering: sorted keys, floats at 17 significant digits.

use std::str::FromStr;

use serde_json::{Number, Value};

pub const SCHEMA_VERSION: &str = "1";

/// Round-trippable decimal with 17 significant digits; non-finite values become `null`.
pub fn format_f64(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some("0.0".to_string());
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(1) as usize;
        Some(format!("{x:.decimals$}"))
    } else {
        Some(format!("{x:.16e}"))
    }
}

fn canonical(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("float number");
            match format_f64(x) {
                Some(s) => Value::Number(Number::from_str(&s).expect("formatted float parses")),
                None => Value::Null,
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, canonical(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with a trailing newline.
pub fn render(value: Value) -> String {
    let mut out = serde_json::to_string_pretty(&canonical(value)).expect("JSON values serialize");
    out.push('\n');
    out
}

/// `Some(x)` as a number, `None` as `null`.
pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, Value::from)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_use_seventeen_digits() {
        assert_eq!(format_f64(0.6).unwrap(), "0.59999999999999998");
        assert_eq!(format_f64(1.0 / 3.0).unwrap(), "0.33333333333333331");
        assert_eq!(format_f64(2.0).unwrap(), "2.0000000000000000");
        assert_eq!(format_f64(1e-9).unwrap(), "1.0000000000000001e-9");
        assert_eq!(format_f64(f64::NAN), None);
        for x in [0.6, 1.0 / 3.0, 123456.789, 1e-7, 7e20, -0.25] {
            assert_eq!(format_f64(x).unwrap().parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn keys_are_sorted_and_integers_untouched() {
        let s = render(json!({"b": 1, "a": [0.5, 3], "c": f64::INFINITY}));
        let a = s.find("\"a\"").unwrap();
        let b = s.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(s.contains("0.50000000000000000"));
        assert!(s.contains("\"c\": null"));
        assert!(s.contains("\"b\": 1"));
    }
}
