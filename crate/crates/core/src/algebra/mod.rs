//! Exact homogeneous polynomial arithmetic, rational linear algebra and
//! arbitrary-precision complex evaluation.

pub mod complex;
pub(crate) mod lexer;
pub mod matrix;
pub mod monomial;
pub mod poly;

pub use complex::{ComplexValue, DEFAULT_PRECISION, MIN_PRECISION};
pub use matrix::{rational_rank, EchelonBasis, RationalMatrix, SparseRow};
pub use monomial::{monomial_basis, Monomial, MonomialIndex};
pub use poly::{eval_poly, parse_polynomial, poly_product, HomogeneousPolynomial};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact binomial coefficient; saturates at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    binomial_big(n, k).to_u64().unwrap_or(u64::MAX)
}

pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Exact value of a decimal (`0.25`, `-3`, `1e-3`) or fraction (`1/4`) literal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::InvalidInput(format!("`{text}` is not a decimal or fraction"));
    if let Some((a, b)) = t.split_once('/') {
        let num: BigInt = a.trim().parse().map_err(|_| bad())?;
        let den: BigInt = b.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut q = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        q = -q;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_from_text() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(parse_rational("0.5").unwrap(), r(1, 2));
        assert_eq!(parse_rational("-1.25").unwrap(), r(-5, 4));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("1e-3").unwrap(), r(1, 1000));
        assert_eq!(parse_rational(" 2/6 ").unwrap(), r(1, 3));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        for bad in ["", "abc", "1/0", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(52, 5), 2_598_960);
    }
}
