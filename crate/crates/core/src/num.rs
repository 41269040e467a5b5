//! Number rounding and formatting shared by the optimizer, tokenizer and
//! canonical comparison.

use serde_json::{Number, Value};

/// Significant digits used for canonical comparison and quantization.
pub const CANONICAL_DIGITS: u32 = 4;

/// Rounds `x` to `digits` significant figures (0.00123456 -> 0.001235).
///
/// Goes through the decimal exponent formatter so the result is the closest
/// double to the correctly rounded decimal, which makes the operation
/// idempotent.
pub fn round_sig(x: f64, digits: u32) -> f64 {
    assert!(digits >= 1, "significant digits must be >= 1");
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let text = format!("{:.*e}", (digits - 1) as usize, x);
    text.parse().unwrap_or(x)
}

/// Equality after rounding both sides to `digits` significant figures.
pub fn eq_sig(a: f64, b: f64, digits: u32) -> bool {
    round_sig(a, digits) == round_sig(b, digits)
}

/// Shortest decimal text that parses back to `x`.
///
/// Plain positional notation is preferred; exponent notation is used only
/// when it saves at least two characters (`100000` -> `1e5`).
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let plain = format!("{x}");
    let exp = format!("{x:e}");
    if exp.len() + 2 <= plain.len() {
        exp
    } else {
        plain
    }
}

/// JSON number for `x`, written as an integer when `x` is integral.
pub fn json_number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::Number(Number::from(x as i64))
    } else {
        Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

/// Number of characters a digit-splitting host tokenizer spends on `x`.
pub fn digit_cost(x: f64) -> usize {
    format_number(x).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_significant_figures() {
        assert_eq!(round_sig(0.123456, 4), 0.1235);
        assert_eq!(round_sig(0.00123456, 4), 0.001235);
        assert_eq!(round_sig(123456.0, 4), 123500.0);
        assert_eq!(round_sig(-113.4, 4), -113.4);
        assert_eq!(round_sig(0.0, 4), 0.0);
    }

    #[test]
    fn rounding_is_idempotent() {
        for x in [0.333333333, 99999.0, -0.000987654321, 1.0 / 3.0, 2.5e-7] {
            let once = round_sig(x, 4);
            assert_eq!(round_sig(once, 4), once);
        }
    }

    #[test]
    fn formats_compactly() {
        assert_eq!(format_number(30.0), "30");
        assert_eq!(format_number(-10.0), "-10");
        assert_eq!(format_number(0.1235), "0.1235");
        assert_eq!(format_number(100000.0), "1e5");
        assert_eq!(format_number(1000.0), "1000");
        assert_eq!(format_number(0.00001), "1e-5");
        for x in [1.0 / 3.0, -2.79, 1e21, 6.02e-23, 512.0] {
            assert_eq!(format_number(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_numbers_keep_integers_integral() {
        assert_eq!(json_number(30.0).to_string(), "30");
        assert_eq!(json_number(0.5).to_string(), "0.5");
    }
}
