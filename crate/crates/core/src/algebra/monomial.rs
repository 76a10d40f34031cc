use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Exponent vector of a monomial `x0^a0 * ... * xn^an`.
///
/// The ordering is graded-lexicographic with `x0` heaviest: a monomial of
/// larger degree is greater, and within a degree the one with the larger
/// leading exponent wins. Bases are listed in *descending* order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self { exponents }
    }

    pub fn one(n_vars: usize) -> Self {
        Self { exponents: vec![0; n_vars] }
    }

    pub fn variable(n_vars: usize, i: usize) -> Self {
        let mut exponents = vec![0; n_vars];
        exponents[i] = 1;
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn n_vars(&self) -> usize {
        self.exponents.len()
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.n_vars(), other.n_vars());
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// Dot product `a . c` with an integer weight vector.
    pub fn weight(&self, c: &[u64]) -> u64 {
        self.exponents.iter().zip(c).map(|(&a, &w)| a as u64 * w).sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.exponents.cmp(&other.exponents))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{i}")?,
                _ => write!(f, "x{i}^{e}")?,
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All degree-`m` monomials in `n_vars` variables, heaviest first.
pub fn monomial_basis(n_vars: usize, m: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    if n_vars == 0 {
        if m == 0 {
            out.push(Monomial::new(Vec::new()));
        }
        return out;
    }
    let mut current = vec![0u32; n_vars];
    fill(&mut current, 0, m, &mut out);
    out
}

fn fill(current: &mut [u32], pos: usize, remaining: u32, out: &mut Vec<Monomial>) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(Monomial::new(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(current, pos + 1, remaining - e, out);
    }
    current[pos] = 0;
}

/// A monomial basis of one graded piece together with its reverse index.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    basis: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialIndex {
    pub fn new(n_vars: usize, m: u32) -> Self {
        let basis = monomial_basis(n_vars, m);
        let index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        Self { basis, index }
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::binomial;

    #[test]
    fn basis_sizes() {
        assert_eq!(monomial_basis(3, 2).len(), 6);
        assert_eq!(monomial_basis(2, 3).len(), 4);
        for n in 1..5 {
            for m in 0..7 {
                assert_eq!(
                    monomial_basis(n, m).len() as u64,
                    binomial(m as u64 + n as u64 - 1, n as u64 - 1)
                );
            }
        }
    }

    #[test]
    fn basis_order_is_descending() {
        let b = monomial_basis(3, 4);
        assert_eq!(b[0], Monomial::new(vec![4, 0, 0]));
        assert_eq!(*b.last().unwrap(), Monomial::new(vec![0, 0, 4]));
        assert!(b.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn display() {
        assert_eq!(Monomial::new(vec![2, 0, 1]).to_string(), "x0^2*x2");
        assert_eq!(Monomial::one(2).to_string(), "1");
    }
}
