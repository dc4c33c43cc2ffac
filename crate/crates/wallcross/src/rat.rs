//! Exact rational scalars. Everything in this crate computes over `Rat`;
//! no floating point appears anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` as a rational. Panics on `q = 0`; only used with literal constants.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"p"` or `"p/q"` with optional sign, exactly.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let make = |p: &str, q: &str| -> Result<Rat> {
        let num: BigInt = p
            .parse()
            .map_err(|_| Error::Config(format!("bad rational numerator {p:?}")))?;
        let den: BigInt = q
            .parse()
            .map_err(|_| Error::Config(format!("bad rational denominator {q:?}")))?;
        if den.is_zero() {
            return Err(Error::Config(format!("zero denominator in {s:?}")));
        }
        Ok(Rat::new(num, den))
    };
    match s.split_once('/') {
        Some((p, q)) => make(p, q),
        None => make(s, "1"),
    }
}

/// Renders as `"p"` or `"p/q"`, the parseable inverse of [`parse_rat`].
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Floor of a rational as an `i64`.
pub fn floor_i64(r: &Rat) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("rational floor out of i64 range")
}

/// Factorial as a rational, for coefficient denominators.
pub fn factorial(n: usize) -> Rat {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Rat::from_integer(acc)
}

/// `(-1)^n` as a rational.
pub fn sign_pow(n: usize) -> Rat {
    if n % 2 == 0 {
        rat_int(1)
    } else {
        rat_int(-1)
    }
}

/// True when `r` is a negative rational.
pub fn is_negative(r: &Rat) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-3", "1/2", "-7/3", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert_eq!(parse_rat("2/4").unwrap(), rat(1, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn floor_matches_integer_division() {
        assert_eq!(floor_i64(&rat(7, 2)), 3);
        assert_eq!(floor_i64(&rat(-7, 2)), -4);
        assert_eq!(floor_i64(&rat_int(5)), 5);
    }

    #[test]
    fn factorial_small_values() {
        assert_eq!(factorial(0), rat_int(1));
        assert_eq!(factorial(4), rat_int(24));
        assert_eq!(factorial(6), rat_int(720));
    }
}
