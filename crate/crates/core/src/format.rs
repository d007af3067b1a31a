//! Number formatting shared by the coefficient dumps and the CLI.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::elliptic::rational_to_f64;

/// Rationals with more digits than this are printed as decimals.
const MAX_RATIONAL_DIGITS: usize = 40;

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// exponent form outside `1e-5 <= |x| < 1e17`. Round-trips every `f64`.
pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (16 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `p/q`, or `p` when the denominator is one.
pub fn rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn fits(r: &BigRational) -> bool {
    r.numer().to_string().len() + r.denom().to_string().len() <= MAX_RATIONAL_DIGITS
}

/// Renders `rational + pi·π + inexact` as e.g. `8/3 - 7/8·π`.
pub fn pi_linear(rat: &BigRational, pi: &BigRational, inexact: f64) -> String {
    let mut parts: Vec<(bool, String)> = Vec::new();
    if !rat.is_zero() {
        let body = if fits(rat) {
            rational(&rat.abs())
        } else {
            sig17(rational_to_f64(&rat.abs()))
        };
        parts.push((rat.is_negative(), body));
    }
    if inexact != 0.0 {
        parts.push((inexact < 0.0, sig17(inexact.abs())));
    }
    if !pi.is_zero() {
        let mag = pi.abs();
        let body = if mag.is_one() {
            "π".to_string()
        } else if fits(&mag) {
            format!("{}·π", rational(&mag))
        } else {
            format!("{}·π", sig17(rational_to_f64(&mag)))
        };
        parts.push((pi.is_negative(), body));
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        match (i, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::ratio;

    #[test]
    fn sig17_matches_printf() {
        assert_eq!(sig17(3.0), "3");
        assert_eq!(sig17(0.1), "0.10000000000000001");
        assert_eq!(sig17(-2.5), "-2.5");
        assert_eq!(sig17(1e-7), "9.9999999999999995e-08");
        assert_eq!(sig17(123456.75), "123456.75");
        assert_eq!(sig17(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(sig17(1e20), "1e+20");
    }

    #[test]
    fn sig17_round_trips() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 6.02e23, -7.25e-6] {
            assert_eq!(sig17(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn pi_linear_forms() {
        assert_eq!(pi_linear(&ratio(8, 3), &ratio(-7, 8), 0.0), "8/3 - 7/8·π");
        assert_eq!(pi_linear(&ratio(0, 1), &ratio(3969, 131072), 0.0), "3969/131072·π");
        assert_eq!(pi_linear(&ratio(0, 1), &ratio(-1, 1), 0.0), "-π");
        assert_eq!(pi_linear(&ratio(0, 1), &ratio(0, 1), 0.0), "0");
        assert_eq!(pi_linear(&ratio(1, 1), &ratio(0, 1), 0.0), "1");
    }
}
