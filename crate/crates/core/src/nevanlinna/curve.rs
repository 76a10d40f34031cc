use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::expr::{gauss, ExpPoly, ZPoly};
use crate::algebra::HomogeneousPolynomial;
use crate::error::{Error, Result};
use crate::variety::VarietyDescriptor;

/// A curve `f : C -> P^n` given by a representation `(f_0, .., f_n)` of entire functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntireCurve {
    components: Vec<ExpPoly>,
}

impl EntireCurve {
    /// Components must not all vanish; polynomial components must be coprime.
    pub fn new(components: Vec<ExpPoly>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::InvalidInput("a curve needs at least two components".into()));
        }
        if components.iter().all(ExpPoly::is_zero) {
            return Err(Error::InvalidInput("all components vanish identically".into()));
        }
        let c = Self { components };
        if let Some(polys) = c.polynomial_components() {
            let g = polys.iter().fold(ZPoly::zero(), |acc, p| acc.gcd(p));
            if !g.is_constant() {
                return Err(Error::Precondition(format!("components share the factor {g}; the representation is not reduced")));
            }
        }
        Ok(c)
    }

    pub fn parse(components: &[&str]) -> Result<Self> {
        Self::new(components.iter().map(|s| ExpPoly::parse(s)).collect::<Result<Vec<_>>>()?)
    }

    /// Target dimension `n`.
    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[ExpPoly] {
        &self.components
    }

    pub fn is_polynomial(&self) -> bool {
        self.components.iter().all(ExpPoly::is_polynomial)
    }

    fn polynomial_components(&self) -> Option<Vec<ZPoly>> {
        self.components.iter().map(ExpPoly::as_polynomial).collect()
    }

    /// `Q(f_0, .., f_n)` as an exact expression.
    pub fn compose(&self, q: &HomogeneousPolynomial) -> Result<ExpPoly> {
        if q.n_vars() != self.components.len() {
            return Err(Error::InvalidInput(format!(
                "form in {} variables applied to a curve with {} components",
                q.n_vars(),
                self.components.len()
            )));
        }
        let mut powers: HashMap<(usize, u32), ExpPoly> = HashMap::new();
        let mut acc = ExpPoly::zero();
        for (mono, c) in q.terms() {
            let mut t = ExpPoly::constant(gauss(c.clone(), BigRational::zero()));
            for (i, &e) in mono.exponents().iter().enumerate() {
                if e > 0 {
                    let p = powers.entry((i, e)).or_insert_with(|| self.components[i].pow(e));
                    t = t.mul(p);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Whether every generator of `v` vanishes identically on the curve (exact).
    pub fn lies_in(&self, v: &VarietyDescriptor) -> Result<bool> {
        for g in v.generators() {
            if !self.compose(g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `log ||f(z)||` with the Euclidean norm.
    pub fn log_norm(&self, z: Complex64) -> f64 {
        let vals: Vec<(Complex64, f64)> = self.components.iter().map(|c| c.eval_scaled(z)).collect();
        let s = vals.iter().filter(|(v, _)| !v.is_zero()).map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);
        let sum: f64 = vals.iter().map(|(v, si)| v.norm_sqr() * (2.0 * (si - s)).exp()).sum();
        0.5 * sum.ln() + s
    }
}

impl fmt::Display for EntireCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" : "))
    }
}

/// `det (f_j^{(i)})_{0 <= i, j <= n}`, simplified; zero exactly when the
/// components are linearly dependent.
pub fn wronskian(f: &EntireCurve) -> ExpPoly {
    let size = f.components.len();
    let mut rows = vec![f.components.clone()];
    for i in 1..size {
        rows.push(rows[i - 1].iter().map(ExpPoly::derivative).collect());
    }
    // Laplace expansion along rows, memoized on the set of columns still free
    fn minor(rows: &[Vec<ExpPoly>], row: usize, cols: u32, memo: &mut HashMap<u32, ExpPoly>) -> ExpPoly {
        if row == rows.len() {
            return ExpPoly::constant(gauss(BigRational::from_integer(1.into()), BigRational::zero()));
        }
        if let Some(v) = memo.get(&cols) {
            return v.clone();
        }
        let mut acc = ExpPoly::zero();
        let mut sign_neg = false;
        for j in 0..rows.len() {
            if cols & (1 << j) == 0 {
                continue;
            }
            let entry = &rows[row][j];
            if !entry.is_zero() {
                let sub = minor(rows, row + 1, cols & !(1 << j), memo);
                let t = entry.mul(&sub);
                acc = if sign_neg { acc.sub(&t) } else { acc.add(&t) };
            }
            sign_neg = !sign_neg;
        }
        memo.insert(cols, acc.clone());
        acc
    }
    let mut memo = HashMap::new();
    let full = if size >= 32 { u32::MAX } else { (1u32 << size) - 1 };
    minor(&rows, 0, full, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wronskian_examples() {
        let f = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        assert_eq!(wronskian(&f), ExpPoly::parse("2").unwrap());
        let g = EntireCurve::parse(&["1", "z", "2z"]).unwrap();
        assert!(wronskian(&g).is_zero());
        let h = EntireCurve::parse(&["1", "exp(z)"]).unwrap();
        assert_eq!(wronskian(&h), ExpPoly::parse("exp(z)").unwrap());
        let k = EntireCurve::parse(&["exp(z)", "exp(2z)", "exp(3z)"]).unwrap();
        // Vandermonde in 1, 2, 3 times exp(6z)
        assert_eq!(wronskian(&k), ExpPoly::parse("2 exp(6z)").unwrap());
    }

    #[test]
    fn construction_and_composition() {
        assert!(matches!(EntireCurve::parse(&["z", "z^2"]), Err(Error::Precondition(_))));
        assert!(EntireCurve::parse(&["0", "0"]).is_err());
        assert!(EntireCurve::parse(&["z"]).is_err());
        let f = EntireCurve::parse(&["1", "z", "z^2"]).unwrap();
        let conic = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap();
        assert!(f.lies_in(&conic).unwrap());
        let other = VarietyDescriptor::parse(2, &["x0*x1 - x2^2"]).unwrap();
        assert!(!f.lies_in(&other).unwrap());
        let q = HomogeneousPolynomial::parse("x0 + x1 + x2", 3).unwrap();
        assert_eq!(f.compose(&q).unwrap(), ExpPoly::parse("1 + z + z^2").unwrap());
        let z = Complex64::new(3.0, 4.0);
        let want = (1.0f64 + 25.0 + 625.0).sqrt().ln();
        assert!((f.log_norm(z) - want).abs() < 1e-14);
        let e = EntireCurve::parse(&["1", "exp(1000 z)"]).unwrap();
        assert!((e.log_norm(Complex64::new(1.0, 0.0)) - 1000.0).abs() < 1e-9);
    }
}
