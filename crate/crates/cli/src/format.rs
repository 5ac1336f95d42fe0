//! Deterministic text output.

use std::fmt::Write;

/// `x` to `digits` significant digits in the style of C's `%g`: fixed
/// notation for moderate exponents, scientific otherwise, trailing zeros
/// removed.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV with header `t,P_r,P_fp` and 12 significant digits.
pub fn csv(times: &[f64], restricted: &[f64], density: &[f64]) -> String {
    let mut out = String::from("t,P_r,P_fp\n");
    for ((t, r), f) in times.iter().zip(restricted).zip(density) {
        writeln!(out, "{},{},{}", sig(*t, 12), sig(*r, 12), sig(*f, 12)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_percent_g() {
        assert_eq!(sig(0.0, 12), "0");
        assert_eq!(sig(-0.0, 12), "0");
        assert_eq!(sig(1.0, 12), "1");
        assert_eq!(sig(0.001, 12), "0.001");
        assert_eq!(sig(1.1107207345395915, 12), "1.11072073454");
        assert_eq!(sig(-2.5e-7, 12), "-2.5e-07");
        assert_eq!(sig(1.23456789012345e13, 12), "1.23456789012e+13");
        assert_eq!(sig(0.99999999999999, 12), "1");
        assert_eq!(sig(123.0, 2), "1.2e+02");
    }

    #[test]
    fn csv_layout() {
        let text = csv(&[0.0, 0.5], &[1.0, 0.75], &[0.0, 1.0 / 3.0]);
        assert_eq!(text, "t,P_r,P_fp\n0,1,0\n0.5,0.75,0.333333333333\n");
    }
}
