//! Seven-significant-digit text output.

use serde_json::Value;

#[derive(Clone, Copy)]
enum Direction {
    Nearest,
    Down,
    Up,
}

/// `x` to 7 significant digits with trailing zeros dropped.
pub fn sig7(x: f64) -> String {
    render(x, Direction::Nearest)
}

/// Like [`sig7`] but never above `x`, for lower ends of enclosures.
pub fn sig7_down(x: f64) -> String {
    render(x, Direction::Down)
}

/// Like [`sig7`] but never below `x`, for upper ends of enclosures.
pub fn sig7_up(x: f64) -> String {
    render(x, Direction::Up)
}

/// A JSON number, or a string for values JSON cannot hold.
pub fn float_value(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::from(special(x))
    }
}

fn special(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "+inf"
    } else {
        "-inf"
    }
}

fn render(x: f64, dir: Direction) -> String {
    if !x.is_finite() {
        return special(x).to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let text = format!("{:.6e}", x.abs());
    let (mantissa, exp) = text.split_once('e').expect("exponent form");
    let mut digits: i64 = mantissa.replace('.', "").parse().expect("decimal digits");
    let mut exp: i32 = exp.parse().expect("integer exponent");
    let shown: f64 = format!("{}e{}", digits, exp - 6).parse().expect("decimal");
    // Down and Up refer to the signed value
    let magnitude_down = matches!(
        (dir, x < 0.0),
        (Direction::Down, false) | (Direction::Up, true)
    );
    let magnitude_up = matches!(
        (dir, x < 0.0),
        (Direction::Up, false) | (Direction::Down, true)
    );
    if magnitude_down && shown > x.abs() {
        digits -= 1;
        if digits < 1_000_000 {
            digits = 9_999_999;
            exp -= 1;
        }
    } else if magnitude_up && shown < x.abs() {
        digits += 1;
        if digits > 9_999_999 {
            digits = 1_000_000;
            exp += 1;
        }
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let body = if (-5..7).contains(&exp) {
        plain(digits, exp)
    } else {
        let d = digits.to_string();
        let frac = d[1..].trim_end_matches('0');
        if frac.is_empty() {
            format!("{}e{}", &d[..1], exp)
        } else {
            format!("{}.{}e{}", &d[..1], frac, exp)
        }
    };
    format!("{sign}{body}")
}

/// Seven digits `d.dddddd × 10^exp` in positional notation.
fn plain(digits: i64, exp: i32) -> String {
    let d = digits.to_string();
    let point = exp + 1;
    let (int, frac) = if point <= 0 {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat((-point) as usize), d),
        )
    } else {
        let p = point as usize;
        (d[..p].to_string(), d[p..].to_string())
    };
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        int
    } else {
        format!("{int}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_digits() {
        assert_eq!(sig7(0.5), "0.5");
        assert_eq!(sig7(std::f64::consts::FRAC_1_SQRT_2), "0.7071068");
        assert_eq!(sig7(3.0), "3");
        assert_eq!(sig7(-1234.5678), "-1234.568");
        assert_eq!(sig7(1e-9), "1e-9");
        assert_eq!(sig7(123456789.0), "1.234568e8");
        assert_eq!(sig7(0.00012345678), "0.0001234568");
        assert_eq!(sig7(f64::INFINITY), "+inf");
        assert_eq!(sig7(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn directed() {
        let x = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(sig7_down(x), "0.7071067");
        assert_eq!(sig7_up(x), "0.7071068");
        assert_eq!(sig7_down(-x), "-0.7071068");
        assert_eq!(sig7_up(-x), "-0.7071067");
        assert_eq!(sig7_up(9.9999999), "10");
        assert_eq!(sig7_down(0.5), "0.5");
    }
}
