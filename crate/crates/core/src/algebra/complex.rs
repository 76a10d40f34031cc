//! Arbitrary-precision complex numbers backed by `astro-float`.

use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};

pub const MIN_PRECISION: usize = 53;
pub const DEFAULT_PRECISION: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
pub struct ComplexValue {
    re: BigFloat,
    im: BigFloat,
    precision: usize,
}

fn check_precision(p: usize) -> Result<()> {
    if p < MIN_PRECISION {
        return Err(Error::InvalidInput(format!("precision {p} below {MIN_PRECISION} bits")));
    }
    Ok(())
}

fn bigint_to_float(n: &BigInt, p: usize) -> BigFloat {
    let mut cc = Consts::new().expect("astro-float constant cache");
    BigFloat::parse(&n.to_string(), Radix::Dec, p, RM, &mut cc)
}

pub(crate) fn rational_to_float(q: &BigRational, p: usize) -> BigFloat {
    let num = bigint_to_float(q.numer(), p + 8);
    let den = bigint_to_float(q.denom(), p + 8);
    num.div(&den, p, RM)
}

fn float_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut cc = Consts::new().expect("astro-float constant cache");
    let s = x.format(Radix::Dec, RM, &mut cc).unwrap_or_default();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

impl ComplexValue {
    pub fn zero(precision: usize) -> Result<Self> {
        check_precision(precision)?;
        Ok(Self { re: BigFloat::from_word(0, precision), im: BigFloat::from_word(0, precision), precision })
    }

    pub fn from_f64(re: f64, im: f64, precision: usize) -> Result<Self> {
        check_precision(precision)?;
        Ok(Self { re: BigFloat::from_f64(re, precision), im: BigFloat::from_f64(im, precision), precision })
    }

    /// Exact rational parts rounded to the requested precision.
    pub fn from_rationals(re: &BigRational, im: &BigRational, precision: usize) -> Result<Self> {
        check_precision(precision)?;
        Ok(Self { re: rational_to_float(re, precision), im: rational_to_float(im, precision), precision })
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn re(&self) -> f64 {
        float_to_f64(&self.re)
    }

    pub fn im(&self) -> f64 {
        float_to_f64(&self.im)
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re(), self.im())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn abs(&self) -> f64 {
        self.to_complex64().norm()
    }

    pub(crate) fn with_precision(&self, p: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        // set_precision only fails on allocation errors
        let _ = re.set_precision(p, RM);
        let _ = im.set_precision(p, RM);
        Self { re, im, precision: p }
    }

    pub(crate) fn add_at(&self, o: &Self, p: usize) -> Self {
        Self { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), precision: p }
    }

    pub(crate) fn mul_at(&self, o: &Self, p: usize) -> Self {
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self { re, im, precision: p }
    }

    pub(crate) fn scale_at(&self, q: &BigFloat, p: usize) -> Self {
        Self { re: self.re.mul(q, p, RM), im: self.im.mul(q, p, RM), precision: p }
    }

    pub(crate) fn one_at(p: usize) -> Self {
        Self { re: BigFloat::from_word(1, p), im: BigFloat::from_word(0, p), precision: p }
    }
}

impl fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_complex64();
        if z.im >= 0.0 {
            write!(f, "{}+{}i", z.re, z.im)
        } else {
            write!(f, "{}-{}i", z.re, -z.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn precision_floor() {
        assert!(ComplexValue::zero(52).is_err());
        assert!(ComplexValue::zero(53).is_ok());
    }

    #[test]
    fn rational_round_trip() {
        let third = BigRational::new(1.into(), 3.into());
        let z = ComplexValue::from_rationals(&third, &BigRational::one(), 128).unwrap();
        assert!((z.re() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(z.im(), 1.0);
    }

    #[test]
    fn multiplication() {
        let i = ComplexValue::from_f64(0.0, 1.0, 64).unwrap();
        let m = i.mul_at(&i, 64);
        assert_eq!(m.re(), -1.0);
        assert_eq!(m.im(), 0.0);
    }
}
