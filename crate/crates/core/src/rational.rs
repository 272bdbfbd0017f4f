//! Exact rational arithmetic helpers.

use num_integer::Integer;
use num_rational::Ratio;

/// Exact rational number used for every score, weight and marginal.
pub type Rational = Ratio<i128>;

/// Shorthand for `numer / denom`.
pub fn ratio(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `"3"`, `"-1/4"`, `"0.25"` or `".5"` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((n, d)) = text.split_once('/') {
        let n: i128 = n.trim().parse().ok()?;
        let d: i128 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if frac_part.len() > 30 {
        return None;
    }
    let mut numer: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        numer = numer.checked_mul(10)?.checked_add(i128::from(b - b'0'))?;
    }
    let denom = 10i128.checked_pow(frac_part.len() as u32)?;
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Nearest `f64`; only used for logarithms and reporting.
pub fn to_f64(value: &Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

/// Least common multiple of the denominators of `values` (1 for an empty set).
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i128 {
    values
        .into_iter()
        .fold(1i128, |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("1/5"), Some(ratio(1, 5)));
        assert_eq!(parse_rational("0.2"), Some(ratio(1, 5)));
        assert_eq!(parse_rational(".25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("3"), Some(ratio(3, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
        assert_eq!(parse_rational(""), None);
    }

    #[test]
    fn common_denominator_is_lcm() {
        let values = [ratio(1, 4), ratio(5, 6), ratio(2, 1)];
        assert_eq!(common_denominator(values.iter()), 12);
        assert_eq!(common_denominator([].iter()), 1);
    }
}
