//! Exact one-variable expressions `sum_i p_i(z) exp(q_i(z))` with
//! Gaussian-rational coefficients.
//!
//! With algebraic coefficients, distinct exponents give linearly independent
//! `exp(q_i)` over `C(z)` (Lindemann-Weierstrass for constant differences,
//! growth for the rest), so an expression is zero exactly when every `p_i`
//! vanishes after merging equal exponents.

use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::lexer::{Cursor, Tok, Token};
use crate::error::{Error, Result};

pub type GaussRat = Complex<BigRational>;

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gauss_int(re: i64, im: i64) -> GaussRat {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}

pub fn gauss_to_c64(c: &GaussRat) -> Complex64 {
    Complex64::new(c.re.to_f64().unwrap_or(f64::NAN), c.im.to_f64().unwrap_or(f64::NAN))
}

fn fmt_rational(f: &mut fmt::Formatter<'_>, q: &BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Writes a Gaussian rational so that it re-parses, e.g. `3`, `-1/2i`, `(1+2i)`.
fn fmt_gauss(f: &mut fmt::Formatter<'_>, c: &GaussRat) -> fmt::Result {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(f, &c.re),
        (true, false) => {
            fmt_rational(f, &c.im)?;
            f.write_str("i")
        }
        (false, false) => {
            f.write_str("(")?;
            fmt_rational(f, &c.re)?;
            f.write_str(if c.im.is_negative() { "-" } else { "+" })?;
            fmt_rational(f, &c.im.abs())?;
            f.write_str("i)")
        }
    }
}

/// Dense polynomial in `z`, coefficients from low to high degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZPoly {
    coeffs: Vec<GaussRat>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussRat::one())
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn z() -> Self {
        Self::from_coeffs(vec![GaussRat::zero(), GaussRat::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<GaussRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|c| gauss(c.clone(), BigRational::zero())).collect())
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> GaussRat {
        self.coeffs.last().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn constant_term(&self) -> GaussRat {
        self.coeffs.first().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = GaussRat::zero();
        Self::from_coeffs(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * gauss(BigRational::from_integer(BigInt::from(k)), BigRational::zero()))
                .collect(),
        )
    }

    /// Quotient and remainder; `o` must be nonzero.
    pub fn divrem(&self, o: &Self) -> (Self, Self) {
        let d = o.degree().expect("division by zero polynomial");
        let lead = o.lead();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![GaussRat::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] / &lead;
            if !c.is_zero() {
                for (j, b) in o.coeffs.iter().enumerate() {
                    let v = &c * b;
                    rem[k + j] -= v;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = GaussRat::one() / self.lead();
        self.scale(&inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factors `(s_i, i)` with `self = lead * prod s_i^i` (Yun).
    pub fn squarefree_decomposition(&self) -> Vec<(ZPoly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let fp = self.derivative();
        let a = self.gcd(&fp);
        let mut b = self.divrem(&a).0;
        let mut c = fp.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while !b.is_constant() {
            let g = b.gcd(&d);
            b = b.divrem(&g).0;
            c = d.divrem(&g).0;
            d = c.sub(&b.derivative());
            if !g.is_constant() {
                out.push((g, i));
            }
            i += 1;
        }
        out
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + gauss_to_c64(c))
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(gauss_to_c64).collect()
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            // pull a real negative sign out front
            let (neg, c) = if c.im.is_zero() && c.re.is_negative() { (true, -c.clone()) } else { (false, c.clone()) };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if k == 0 {
                fmt_gauss(f, &c)?;
                continue;
            }
            if !c.is_one() {
                fmt_gauss(f, &c)?;
                f.write_str("*")?;
            }
            if k == 1 {
                f.write_str("z")?;
            } else {
                write!(f, "z^{k}")?;
            }
        }
        Ok(())
    }
}

/// Finite sum `sum_i p_i(z) exp(q_i(z))`, exponents distinct, every `p_i` nonzero,
/// terms sorted by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPoly {
    terms: Vec<(ZPoly, ZPoly)>,
}

fn exponent_key(q: &ZPoly) -> Vec<(BigRational, BigRational)> {
    q.coeffs.iter().map(|c| (c.re.clone(), c.im.clone())).collect()
}

impl ExpPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn polynomial(p: ZPoly) -> Self {
        Self::from_terms(vec![(ZPoly::zero(), p)])
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::polynomial(ZPoly::constant(c))
    }

    pub fn exp(q: ZPoly) -> Self {
        Self::from_terms(vec![(q, ZPoly::one())])
    }

    pub fn from_terms(raw: Vec<(ZPoly, ZPoly)>) -> Self {
        let mut terms: Vec<(ZPoly, ZPoly)> = Vec::new();
        for (q, p) in raw {
            if let Some(t) = terms.iter_mut().find(|t| t.0 == q) {
                t.1 = t.1.add(&p);
            } else {
                terms.push((q, p));
            }
        }
        terms.retain(|t| !t.1.is_zero());
        terms.sort_by_key(|a| exponent_key(&a.0));
        Self { terms }
    }

    /// `(q_i, p_i)` pairs.
    pub fn terms(&self) -> &[(ZPoly, ZPoly)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|(q, _)| q.is_zero())
    }

    pub fn as_polynomial(&self) -> Option<ZPoly> {
        match self.terms.as_slice() {
            [] => Some(ZPoly::zero()),
            [(q, p)] if q.is_zero() => Some(p.clone()),
            _ => None,
        }
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        self.as_polynomial().filter(ZPoly::is_constant).map(|p| p.constant_term())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&o.terms).cloned().collect())
    }

    pub fn neg(&self) -> Self {
        Self { terms: self.terms.iter().map(|(q, p)| (q.clone(), p.neg())).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        Self::from_terms(self.terms.iter().map(|(q, p)| (q.clone(), p.scale(c))).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (qa, pa) in &self.terms {
            for (qb, pb) in &o.terms {
                raw.push((qa.add(qb), pa.mul(pb)));
            }
        }
        Self::from_terms(raw)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(GaussRat::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(p e^q)' = (p' + p q') e^q`.
    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(q, p)| (q.clone(), p.derivative().add(&p.mul(&q.derivative()))))
                .collect(),
        )
    }

    /// Value as `(mantissa, s)` meaning `mantissa * e^s`, so large exponentials do not overflow.
    pub fn eval_scaled(&self, z: Complex64) -> (Complex64, f64) {
        if self.is_polynomial() {
            return (self.terms.first().map_or(Complex64::zero(), |(_, p)| p.eval(z)), 0.0);
        }
        let qs: Vec<Complex64> = self.terms.iter().map(|(q, _)| q.eval(z)).collect();
        let s = qs.iter().map(|q| q.re).fold(f64::NEG_INFINITY, f64::max);
        let v = self.terms.iter().zip(&qs).map(|((_, p), q)| p.eval(z) * (q - s).exp()).sum();
        (v, s)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (v, s) = self.eval_scaled(z);
        v * s.exp()
    }

    pub fn log_abs(&self, z: Complex64) -> f64 {
        let (v, s) = self.eval_scaled(z);
        v.norm().ln() + s
    }

    /// Parse an expression in `z` such as `z^2 - 2z`, `exp(z) - 1` or `(1+2i) z exp(z^2/2)`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cur = Cursor::new(text)?;
        let e = parse_sum(&mut cur)?;
        if !cur.at_end() {
            return Err(cur.error("unexpected trailing input"));
        }
        Ok(e)
    }
}

fn parse_sum(cur: &mut Cursor) -> Result<ExpPoly> {
    let mut acc = ExpPoly::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            return Ok(acc);
        };
        first = false;
        let t = parse_product(cur)?;
        acc = if negative { acc.sub(&t) } else { acc.add(&t) };
        if !matches!(cur.peek(), Some(Tok::Sym('+' | '-'))) {
            return Ok(acc);
        }
    }
}

fn starts_factor(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Int(_) | Tok::Ident(_) | Tok::Sym('(')))
}

fn parse_product(cur: &mut Cursor) -> Result<ExpPoly> {
    let mut acc = parse_power(cur)?;
    loop {
        if cur.eat('*') {
            acc = acc.mul(&parse_power(cur)?);
        } else if cur.peek() == Some(&Tok::Sym('/')) {
            cur.next();
            let pos = cur.pos();
            let d = parse_power(cur)?;
            match d.as_constant() {
                Some(c) if !c.is_zero() => acc = acc.scale(&(GaussRat::one() / c)),
                _ => return Err(Error::Syntax { pos, msg: "division only by a nonzero constant".into() }),
            }
        } else if starts_factor(cur.peek()) {
            acc = acc.mul(&parse_power(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn parse_power(cur: &mut Cursor) -> Result<ExpPoly> {
    let base = parse_atom(cur)?;
    if cur.eat('^') {
        let e = cur.expect_nat()?;
        return Ok(base.pow(e));
    }
    Ok(base)
}

fn parse_atom(cur: &mut Cursor) -> Result<ExpPoly> {
    let pos = cur.pos();
    match cur.next() {
        Some(Token { tok: Tok::Int(s), .. }) => {
            let v: BigInt = s.parse().expect("digits");
            Ok(ExpPoly::constant(gauss(BigRational::from_integer(v), BigRational::zero())))
        }
        Some(Token { tok: Tok::Ident(s), pos }) => match s.as_str() {
            "z" => Ok(ExpPoly::polynomial(ZPoly::z())),
            "i" => Ok(ExpPoly::constant(gauss_int(0, 1))),
            "exp" => {
                cur.expect('(')?;
                let arg_pos = cur.pos();
                let arg = parse_sum(cur)?;
                cur.expect(')')?;
                match arg.as_polynomial() {
                    Some(q) => Ok(ExpPoly::exp(q)),
                    None => Err(Error::Syntax { pos: arg_pos, msg: "exp(...) argument must be a polynomial in z".into() }),
                }
            }
            _ => Err(Error::UnknownVariable { name: s, pos }),
        },
        Some(Token { tok: Tok::Sym('('), .. }) => {
            let e = parse_sum(cur)?;
            cur.expect(')')?;
            Ok(e)
        }
        Some(Token { pos, .. }) => Err(Error::Syntax { pos, msg: "expected a number, `z`, `i`, `exp(` or `(`".into() }),
        None => Err(Error::Syntax { pos, msg: "unexpected end of input".into() }),
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (q, p)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if q.is_zero() {
                write!(f, "({p})")?;
            } else if *p == ZPoly::one() {
                write!(f, "exp({q})")?;
            } else {
                write!(f, "({p})*exp({q})")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ExpPoly {
        ExpPoly::parse(s).unwrap()
    }

    #[test]
    fn parse_and_arithmetic() {
        let a = p("z^2 - 2z");
        assert!(a.is_polynomial());
        assert_eq!(a.as_polynomial().unwrap().degree(), Some(2));
        assert!(p("z*(z-2) - z^2 + 2*z").is_zero());
        assert!(p("exp(z)*exp(-z) - 1").is_zero());
        assert!(!p("exp(z+1) - exp(z)").is_zero());
        let e = p("exp(z) - 1");
        assert!(!e.is_polynomial());
        assert_eq!(e.terms().len(), 2);
        assert_eq!(p("(1+2i)*(1-2i)").as_constant(), Some(gauss_int(5, 0)));
        assert_eq!(p("3/2i").as_constant(), Some(gauss(BigRational::zero(), BigRational::new(3.into(), 2.into()))));
        assert!(matches!(ExpPoly::parse("exp(exp(z))"), Err(Error::Syntax { .. })));
        assert!(matches!(ExpPoly::parse("w + 1"), Err(Error::UnknownVariable { pos: 0, .. })));
        assert!(matches!(ExpPoly::parse("z / z"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in ["z^2 - 2z", "exp(z) - 1", "(1+2i)*z*exp(z^2/2) - 1/3", "i*z - exp(-z)", "0"] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} -> {e}");
        }
    }

    #[test]
    fn derivative_and_eval() {
        let e = p("z*exp(2z)");
        assert_eq!(e.derivative(), p("exp(2z) + 2z exp(2z)"));
        let z = Complex64::new(0.3, -0.7);
        let v = e.eval(z);
        let want = z * (2.0 * z).exp();
        assert!((v - want).norm() < 1e-14);
        let big = p("exp(800 z)");
        assert!((big.log_abs(Complex64::new(1.0, 0.0)) - 800.0).abs() < 1e-9);
    }

    #[test]
    fn squarefree() {
        // z^2 (z - 2)
        let f = p("z^3 - 2z^2").as_polynomial().unwrap();
        let parts = f.squarefree_decomposition();
        assert_eq!(parts, vec![(p("z - 2").as_polynomial().unwrap(), 1), (p("z").as_polynomial().unwrap(), 2)]);
        let g = p("(z^2+1)^3 (z-1)").as_polynomial().unwrap();
        let parts = g.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[1].1, 3);
        assert_eq!(parts[1].0, p("z^2+1").as_polynomial().unwrap());
        let one = ZPoly::one();
        assert!(one.squarefree_decomposition().is_empty());
        assert_eq!(p("z^2-1").as_polynomial().unwrap().gcd(&p("z-1").as_polynomial().unwrap()), p("z - 1").as_polynomial().unwrap());
    }
}
