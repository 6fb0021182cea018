//! Exact rationals: parsing from decimal or fraction notation and exact
//! scientific formatting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `3/10`, `-1/2`, `0.3`, `.25`, `7` or `1.5e-3` into an exact rational.
///
/// Decimal input is converted exactly, so `0.1` becomes `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(all_digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    if shift >= 0 {
        value *= Rational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= Rational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Ok(if negative { -value } else { value })
}

/// Parses a comma-separated list of rationals.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(parse_rational).collect()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn round_half_even(x: &Rational) -> BigInt {
    let floor = x.floor();
    let frac = x - &floor;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let base = floor.to_integer();
    if frac > half || (frac == half && base.is_odd()) {
        base + 1
    } else {
        base
    }
}

/// Formats `r` in scientific notation with `digits` significant digits,
/// rounding half-to-even on the exact value (e.g. `7.17960e-9`).
pub fn format_sci(r: &Rational, digits: usize) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return format!("{}e0", pad_mantissa("0".repeat(digits)));
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let x = r.abs();

    // 10^e <= x < 10^(e+1)
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let pow10 = |k: i64| -> Rational {
        if k >= 0 {
            Rational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-k) as usize))
        }
    };
    while x < pow10(e) {
        e -= 1;
    }
    while x >= pow10(e + 1) {
        e += 1;
    }

    let scaled = &x * pow10(digits as i64 - 1 - e);
    let mut n = round_half_even(&scaled);
    let limit = num_traits::pow(BigInt::from(10), digits);
    if n >= limit {
        n /= 10;
        e += 1;
    }
    format!("{sign}{}e{e}", pad_mantissa(n.to_string()))
}

fn pad_mantissa(d: String) -> String {
    if d.len() == 1 {
        d
    } else {
        format!("{}.{}", &d[..1], &d[1..])
    }
}

/// `num/den` string form; integers keep the `/1`.
pub fn exact_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_rational("0.3").unwrap(), parse_rational("3/10").unwrap());
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5e-2").unwrap(), rat(-3, 200));
        assert_eq!(parse_rational("2E3").unwrap(), int(2000));
        assert_eq!(parse_rational(" 6/8 ").unwrap(), rat(3, 4));
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1/0", "abc", "1.2.3", ".", "1e", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn sci_formatting_rounds_half_even() {
        assert_eq!(format_sci(&rat(1, 8), 2), "1.2e-1");
        assert_eq!(format_sci(&rat(3, 8), 2), "3.8e-1");
        assert_eq!(format_sci(&rat(1, 2), 1), "5e-1");
        assert_eq!(format_sci(&int(25), 1), "2e1");
        assert_eq!(format_sci(&int(35), 1), "4e1");
        assert_eq!(format_sci(&rat(999, 1000), 2), "1.0e0");
        assert_eq!(format_sci(&int(0), 3), "0.00e0");
        assert_eq!(format_sci(&rat(-1, 3), 3), "-3.33e-1");
    }
}
