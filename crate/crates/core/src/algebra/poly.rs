use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::complex::ComplexValue;
use super::lexer::{Cursor, Tok, Token};
use super::monomial::Monomial;
use crate::error::{Error, Result};

/// Homogeneous form with exact rational coefficients.
///
/// The zero polynomial keeps an explicit degree so graded arithmetic stays total.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogeneousPolynomial {
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

impl HomogeneousPolynomial {
    pub fn zero(n_vars: usize, degree: u32) -> Self {
        Self { n_vars, degree, terms: BTreeMap::new() }
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, BigRational::one())
    }

    pub fn constant(n_vars: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(n_vars), c);
        }
        Self { n_vars, degree: 0, terms }
    }

    pub fn variable(n_vars: usize, i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::variable(n_vars, i), BigRational::one());
        Self { n_vars, degree: 1, terms }
    }

    pub fn monomial(m: Monomial, c: BigRational) -> Self {
        let n_vars = m.n_vars();
        let degree = m.degree();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { n_vars, degree, terms }
    }

    /// Linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[BigRational]) -> Self {
        let n = coeffs.len();
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(Monomial::variable(n, i), c.clone());
            }
        }
        Self { n_vars: n, degree: 1, terms }
    }

    pub fn from_terms(
        n_vars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(n_vars, degree);
        for (m, c) in terms {
            if m.n_vars() != n_vars {
                return Err(Error::VariableCount { left: n_vars, right: m.n_vars() });
            }
            if m.degree() != degree {
                return Err(Error::NonHomogeneous { expected: degree, found: m.degree(), pos: 0 });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn parse(text: &str, n_vars: usize) -> Result<Self> {
        parse_polynomial(text, n_vars)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars, self.degree);
        }
        Self {
            n_vars: self.n_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n_vars, self.degree + other.degree);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Self {
            n_vars: self.n_vars,
            degree: self.degree + m.degree(),
            terms: self.terms.iter().map(|(a, c)| (a.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(self.n_vars);
        for _ in 0..e {
            out = out.product(self).expect("same ring");
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n_vars != other.n_vars {
            return Err(Error::VariableCount { left: self.n_vars, right: other.n_vars });
        }
        Ok(())
    }

    /// Coefficients of a linear form, indexed by variable.
    pub fn linear_coefficients(&self) -> Option<Vec<BigRational>> {
        if self.degree != 1 {
            return None;
        }
        let mut out = vec![BigRational::zero(); self.n_vars];
        for (m, c) in &self.terms {
            let i = m.exponents().iter().position(|&e| e == 1)?;
            out[i] = c.clone();
        }
        Some(out)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                v * v
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn eval_f64(&self, point: &[Complex64]) -> Complex64 {
        debug_assert_eq!(point.len(), self.n_vars);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= z.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Guard bits used by [`eval_poly`]: `ceil(log2(terms)) + 4`.
    pub fn guard_bits(&self) -> usize {
        let t = self.terms.len().max(1);
        (usize::BITS - (t - 1).leading_zeros()) as usize + 4
    }

    /// Evaluate at a point given in arbitrary precision.
    pub fn eval(&self, point: &[ComplexValue], precision: usize) -> Result<ComplexValue> {
        eval_poly(self, point, precision)
    }
}

/// Parse a homogeneous form over `x0 .. x{n_vars-1}`.
pub fn parse_polynomial(text: &str, n_vars: usize) -> Result<HomogeneousPolynomial> {
    let mut cur = Cursor::new(text)?;
    if cur.at_end() {
        return Err(cur.error("empty polynomial"));
    }
    let mut degree: Option<u32> = None;
    let mut out_terms: Vec<(Monomial, BigRational)> = Vec::new();
    let mut first = true;
    loop {
        let term_pos = cur.pos();
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') {
            if first {
                return Err(Error::Syntax { pos: term_pos, msg: "unexpected `+`".into() });
            }
            false
        } else if first {
            false
        } else {
            return Err(cur.error("expected `+` or `-`"));
        };
        first = false;
        let pos = cur.pos();
        let (mono, mut coeff) = parse_term(&mut cur, n_vars)?;
        if negative {
            coeff = -coeff;
        }
        match degree {
            None => degree = Some(mono.degree()),
            Some(d) if d != mono.degree() => {
                return Err(Error::NonHomogeneous { expected: d, found: mono.degree(), pos });
            }
            _ => {}
        }
        out_terms.push((mono, coeff));
        if cur.at_end() {
            break;
        }
    }
    HomogeneousPolynomial::from_terms(n_vars, degree.unwrap_or(0), out_terms)
}

fn parse_term(cur: &mut Cursor, n_vars: usize) -> Result<(Monomial, BigRational)> {
    let mut exps = vec![0u32; n_vars];
    let mut coeff = BigRational::one();
    if let Some(Tok::Int(_)) = cur.peek() {
        coeff = parse_coeff(cur)?;
        if !cur.eat('*') {
            return Ok((Monomial::new(exps), coeff));
        }
    }
    let mut need_factor = true;
    while need_factor {
        parse_factor(cur, n_vars, &mut exps)?;
        need_factor = cur.eat('*');
    }
    Ok((Monomial::new(exps), coeff))
}

fn parse_coeff(cur: &mut Cursor) -> Result<BigRational> {
    let num = match cur.next() {
        Some(Token { tok: Tok::Int(s), .. }) => s.parse::<BigInt>().expect("digits"),
        _ => return Err(cur.error("expected integer")),
    };
    if cur.eat('/') {
        let pos = cur.pos();
        let den = match cur.next() {
            Some(Token { tok: Tok::Int(s), .. }) => s.parse::<BigInt>().expect("digits"),
            _ => return Err(Error::Syntax { pos, msg: "expected denominator".into() }),
        };
        if den.is_zero() {
            return Err(Error::Syntax { pos, msg: "zero denominator".into() });
        }
        Ok(BigRational::new(num, den))
    } else {
        Ok(BigRational::from_integer(num))
    }
}

fn parse_factor(cur: &mut Cursor, n_vars: usize, exps: &mut [u32]) -> Result<()> {
    let pos = cur.pos();
    let name = match cur.next() {
        Some(Token { tok: Tok::Ident(s), .. }) => s,
        Some(t) => return Err(Error::Syntax { pos: t.pos, msg: "expected a variable".into() }),
        None => return Err(cur.error("expected a variable, found end of input")),
    };
    let idx = variable_index(&name)
        .filter(|&i| i < n_vars)
        .ok_or_else(|| Error::UnknownVariable { name: name.clone(), pos })?;
    let e = if cur.eat('^') { cur.expect_nat()? } else { 1 };
    exps[idx] += e;
    Ok(())
}

fn variable_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

pub fn poly_product(p: &HomogeneousPolynomial, q: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    p.product(q)
}

/// Evaluate with `precision + guard_bits` working bits, rounding the result to `precision`.
pub fn eval_poly(p: &HomogeneousPolynomial, point: &[ComplexValue], precision: usize) -> Result<ComplexValue> {
    if point.len() != p.n_vars {
        return Err(Error::VariableCount { left: p.n_vars, right: point.len() });
    }
    let mut acc = ComplexValue::zero(precision)?;
    let w = precision + p.guard_bits();
    let pt: Vec<ComplexValue> = point.iter().map(|z| z.with_precision(w)).collect();
    acc = acc.with_precision(w);
    for (m, c) in &p.terms {
        let mut t = ComplexValue::one_at(w);
        for (z, &e) in pt.iter().zip(m.exponents()) {
            for _ in 0..e {
                t = t.mul_at(z, w);
            }
        }
        let cf = super::complex::rational_to_float(c, w);
        acc = acc.add_at(&t.scale_at(&cf, w), w);
    }
    Ok(acc.with_precision(precision))
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.degree() == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parse_examples() {
        let p = parse_polynomial("x0^2 + 2*x0*x1", 3).unwrap();
        assert_eq!(p.degree(), 2);
        assert_eq!(p.num_terms(), 2);
        let p = parse_polynomial("3/2*x0*x1*x2", 3).unwrap();
        assert_eq!(p.degree(), 3);
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&Monomial::new(vec![1, 1, 1])), q(3, 2));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_polynomial("x0 + x1^2", 2), Err(Error::NonHomogeneous { pos: 5, .. })));
        assert!(matches!(parse_polynomial("x0 + x3", 3), Err(Error::UnknownVariable { pos: 5, .. })));
        assert!(matches!(parse_polynomial("x0 + y", 3), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_polynomial("x0 +* x1", 3), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_polynomial("x0 x1", 3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("", 3), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("1/0*x0", 3), Err(Error::Syntax { .. })));
    }

    #[test]
    fn leading_sign_and_cancellation() {
        let p = parse_polynomial("-x0*x1 + x1*x0", 2).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.degree(), 2);
        let p = parse_polynomial("- x0 + 1/3*x1", 2).unwrap();
        assert_eq!(p.to_string(), "-x0 + 1/3*x1");
    }

    #[test]
    fn products() {
        let a = parse_polynomial("x0 + x1", 2).unwrap();
        let b = parse_polynomial("x0 - x1", 2).unwrap();
        assert_eq!(a.product(&b).unwrap(), parse_polynomial("x0^2 - x1^2", 2).unwrap());
        assert_eq!(a.product(&HomogeneousPolynomial::one(2)).unwrap(), a);
        let s = parse_polynomial("x0 + x1 + x2", 3).unwrap();
        assert_eq!(s.pow(2).num_terms(), 6);
        assert!(a.product(&s).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let p = parse_polynomial("x0^2 + x1^2", 2).unwrap();
        let pt = [ComplexValue::from_f64(1.0, 0.0, 128).unwrap(), ComplexValue::from_f64(0.0, 1.0, 128).unwrap()];
        assert!(p.eval(&pt, 128).unwrap().is_zero());
        let pt = [ComplexValue::from_f64(3.0, 0.0, 128).unwrap(), ComplexValue::from_f64(4.0, 0.0, 128).unwrap()];
        assert_eq!(p.eval(&pt, 128).unwrap().re(), 25.0);
        let p = parse_polynomial("x0*x1", 2).unwrap();
        let pt = [ComplexValue::from_f64(2.0, 0.0, 128).unwrap(), ComplexValue::from_f64(0.5, 0.0, 128).unwrap()];
        let v = p.eval(&pt, 128).unwrap();
        assert_eq!((v.re(), v.im()), (1.0, 0.0));
    }

    #[test]
    fn guard_bits() {
        let p = parse_polynomial("x0 + x1 + x2", 3).unwrap();
        assert_eq!(p.guard_bits(), 2 + 4);
        assert_eq!(HomogeneousPolynomial::variable(2, 0).guard_bits(), 4);
    }
}
