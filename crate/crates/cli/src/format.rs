//! Number formatting shared by the JSON and CSV writers.

use serde_json::Value;

/// 12 significant digits; lowercase scientific notation below 1e-4.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-4 {
        return format!("{x:.11e}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `x` rounded to the precision that [`format_real`] prints.
pub fn round_real(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

/// Rounds every non-integer number in a JSON tree in place.
pub fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            if let Some(r) = serde_json::Number::from_f64(round_real(x)) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

pub fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_real(0.143_155_878_465_832_22), "0.143155878466");
        assert_eq!(format_real(0.5), "0.500000000000");
        assert_eq!(format_real(1.0), "1.00000000000");
        assert_eq!(format_real(-0.25), "-0.250000000000");
        assert_eq!(format_real(12.5), "12.5000000000");
    }

    #[test]
    fn small_values_use_lowercase_scientific() {
        assert_eq!(format_real(1.5e-5), "1.50000000000e-5");
        assert_eq!(format_real(-2.0e-17), "-2.00000000000e-17");
        assert_eq!(format_real(0.0), "0");
    }

    #[test]
    fn json_rounding() {
        let mut v = serde_json::json!({"a": 0.1 + 0.2, "b": [1e-20, 3], "c": "x"});
        round_json(&mut v);
        assert_eq!(v.to_string(), r#"{"a":0.3,"b":[1e-20,3],"c":"x"}"#);
    }
}
