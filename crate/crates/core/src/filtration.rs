//! Filtration of `C[x]_u` by the spaces
//! `W_(i) = sum_{(j) >= (i)} P_1^{j_1} .. P_n^{j_n} * C[x]_{u - d sigma(j)}`
//! for `n` forms of common degree `d` in `n+1` variables.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{binomial, binomial_big, monomial_basis, EchelonBasis, HomogeneousPolynomial, MonomialIndex};
use crate::error::{Error, Result};
use crate::variety::{Emptiness, VarietyDescriptor};

#[derive(Clone, Debug)]
pub struct FiltrationParams {
    pub n: usize,
    pub d: u32,
    pub u: u32,
    pub p: Vec<HomogeneousPolynomial>,
}

impl FiltrationParams {
    pub fn new(n: usize, d: u32, u: u32, p: Vec<HomogeneousPolynomial>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("d must be at least 1".into()));
        }
        if !u.is_multiple_of(d) {
            return Err(Error::InvalidInput(format!("u = {u} is not divisible by d = {d}")));
        }
        if n == 0 || p.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} forms, got {}", p.len())));
        }
        for (t, f) in p.iter().enumerate() {
            if f.n_vars() != n + 1 || f.degree() != d || f.is_zero() {
                return Err(Error::InvalidInput(format!(
                    "form {} must be a nonzero form of degree {d} in {} variables",
                    t + 1,
                    n + 1
                )));
            }
        }
        Ok(Self { n, d, u, p })
    }

    pub fn parse(n: usize, u: u32, forms: &[&str]) -> Result<Self> {
        let p = forms
            .iter()
            .map(|s| HomogeneousPolynomial::parse(s, n + 1))
            .collect::<Result<Vec<_>>>()?;
        let d = p.first().map_or(1, |f| f.degree());
        Self::new(n, d, u, p)
    }

    /// Coordinate powers `x0^d, .., x_{n-1}^d`.
    pub fn coordinate_powers(n: usize, d: u32, u: u32) -> Result<Self> {
        let p = (0..n).map(|i| HomogeneousPolynomial::variable(n + 1, i).pow(d)).collect();
        Self::new(n, d, u, p)
    }

    /// `n` forms of degree `d` with seeded random integer coefficients in `[-9, 9]`.
    pub fn random_forms(n: usize, d: u32, u: u32, seed: u64) -> Result<Self> {
        Self::random_forms_bounded(n, d, u, 9, seed)
    }

    /// Seeded nonzero forms with integer coefficients in `[-bound, bound]`.
    pub fn random_forms_bounded(n: usize, d: u32, u: u32, bound: i64, seed: u64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::InvalidInput("coefficient bound must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = Vec::with_capacity(n);
        while p.len() < n {
            let terms: Vec<_> = monomial_basis(n + 1, d)
                .into_iter()
                .map(|m| (m, BigRational::from_integer(rng.random_range(-bound..=bound).into())))
                .collect();
            let f = HomogeneousPolynomial::from_terms(n + 1, d, terms)?;
            if !f.is_zero() {
                p.push(f);
            }
        }
        Self::new(n, d, u, p)
    }

    /// Certify that the forms cut out finitely many points, by checking that
    /// one more seeded random linear form leaves an empty intersection.
    pub fn general_position(&self, seed: u64) -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs: Vec<BigRational> = (0..=self.n)
            .map(|_| BigRational::from_integer(rng.random_range(1i64..=97).into()))
            .collect();
        let mut gens = self.p.clone();
        gens.push(HomogeneousPolynomial::linear(&coeffs));
        let v = VarietyDescriptor::new(self.n, gens)?;
        Ok(matches!(v.certify_empty(), Emptiness::CertifiedEmpty { .. }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationTable {
    pub n: usize,
    pub d: u32,
    pub u: u32,
    /// Indices `(i)` with `d sigma(i) <= u`, in increasing lexicographic order.
    pub indices: Vec<Vec<u32>>,
    pub dims: Vec<u64>,
    /// Successive quotient dimensions; the last entry is `dim W_(last)`.
    pub m: Vec<u64>,
}

impl FiltrationTable {
    pub fn k(&self) -> usize {
        self.indices.len()
    }
}

/// All `(i) in N^n` with `sigma(i) <= s`, lexicographically increasing.
pub fn filtration_indices(n: usize, s: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..=left {
            prefix.push(i);
            rec(n, left - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, s, &mut Vec::new(), &mut out);
    out
}

/// Dimensions of every `W_(i)` and the successive quotients.
pub fn filtration_dims(params: &FiltrationParams) -> Result<FiltrationTable> {
    let (n, d, u) = (params.n, params.d, params.u);
    if !u.is_multiple_of(d) {
        return Err(Error::InvalidInput(format!("u = {u} is not divisible by d = {d}")));
    }
    let indices = filtration_indices(n, u / d);
    let idx = MonomialIndex::new(n + 1, u);
    let mut basis = EchelonBasis::new(idx.len());
    let mut dims = vec![0u64; indices.len()];
    // W_(i) grows as (i) decreases, so sweep from the last index backwards.
    for (pos, i) in indices.iter().enumerate().rev() {
        let mut prod = HomogeneousPolynomial::one(n + 1);
        for (t, &e) in i.iter().enumerate() {
            prod = prod.product(&params.p[t].pow(e))?;
        }
        let rest = u - prod.degree();
        for a in monomial_basis(n + 1, rest) {
            if basis.is_full() {
                break;
            }
            let row: Vec<(usize, BigRational)> = prod
                .mul_monomial(&a)
                .terms()
                .map(|(mono, c)| (idx.position(mono).expect("degree u monomial"), c.clone()))
                .collect();
            basis.insert_rational(&row);
        }
        dims[pos] = basis.rank() as u64;
    }
    let mut m: Vec<u64> = dims.windows(2).map(|w| w[0] - w[1]).collect();
    m.push(*dims.last().expect("at least one index"));
    let last = *m.last().expect("nonempty");
    if last != 1 {
        return Err(Error::Precondition(format!("last filtration piece has dimension {last}, expected 1")));
    }
    debug_assert_eq!(m.iter().sum::<u64>(), binomial(u as u64 + n as u64, n as u64));
    Ok(FiltrationTable { n, d, u, indices, dims, m })
}

/// Indices with `d sigma(i) < u - n d` whose quotient dimension differs from `d^n`.
pub fn filtration_quotient_violations(table: &FiltrationTable) -> Vec<Vec<u32>> {
    let dn = (table.d as u64).pow(table.n as u32);
    let limit = table.u as i64 - table.n as i64 * table.d as i64;
    table
        .indices
        .iter()
        .zip(&table.m)
        .filter(|(i, &m)| {
            let s: u32 = i.iter().sum();
            ((table.d * s) as i64) < limit && m != dn
        })
        .map(|(i, _)| i.clone())
        .collect()
}

pub fn check_filtration_quotients(params: &FiltrationParams) -> Result<Vec<Vec<u32>>> {
    Ok(filtration_quotient_violations(&filtration_dims(params)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSums {
    pub b: Vec<BigRational>,
    pub bound: BigRational,
    /// `b_j - bound` for each `j`.
    pub margins: Vec<BigRational>,
}

impl BSums {
    pub fn all_nonnegative(&self) -> bool {
        self.margins.iter().all(|m| *m >= BigRational::zero())
    }
}

/// `b_j = sum_(i) m_(i) i_j` and their lower bound `d^n (u - n d) / ((n+1) d) * C(u/d, n)`.
pub fn compute_b(table: &FiltrationTable) -> BSums {
    let (n, d, u) = (table.n, table.d as i64, table.u as i64);
    let b: Vec<BigRational> = (0..n)
        .map(|j| {
            let s: u64 = table.indices.iter().zip(&table.m).map(|(i, &m)| m * i[j] as u64).sum();
            BigRational::from_integer(s.into())
        })
        .collect();
    let dn = BigRational::from_integer(d.pow(n as u32).into());
    let bound = dn * BigRational::new((u - n as i64 * d).into(), ((n as i64 + 1) * d).into())
        * BigRational::from_integer(binomial_big((u / d) as u64, n as u64).into());
    let margins = b.iter().map(|bj| bj - &bound).collect();
    BSums { b, bound, margins }
}

/// `K = C(u/d + n, n)`, the number of filtration indices.
pub fn count_k(u: u32, d: u32, n: usize) -> Result<u64> {
    if d == 0 || !u.is_multiple_of(d) {
        return Err(Error::InvalidInput(format!("u = {u} is not divisible by d = {d}")));
    }
    Ok(binomial((u / d) as u64 + n as u64, n as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn single_linear_form() {
        let p = FiltrationParams::parse(1, 4, &["x0"]).unwrap();
        let t = filtration_dims(&p).unwrap();
        assert_eq!(t.dims, vec![5, 4, 3, 2, 1]);
        assert_eq!(t.m, vec![1; 5]);
        assert!(filtration_quotient_violations(&t).is_empty());
        let b = compute_b(&t);
        assert_eq!(b.b, vec![r(10, 1)]);
        assert_eq!(b.bound, r(6, 1));
        assert_eq!(b.margins, vec![r(4, 1)]);
    }

    #[test]
    fn two_coordinates() {
        let p = FiltrationParams::parse(2, 2, &["x0", "x1"]).unwrap();
        let t = filtration_dims(&p).unwrap();
        assert_eq!(t.indices, vec![vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 0], vec![1, 1], vec![2, 0]]);
        assert_eq!(t.dims[0], 6);
        assert_eq!(t.m.iter().sum::<u64>(), 6);
        assert!(t.dims.windows(2).all(|w| w[0] > w[1]));
        let b = compute_b(&t);
        assert_eq!(b.b[0], b.b[1]);
    }

    #[test]
    fn quadric_quotients() {
        let p = FiltrationParams::parse(1, 8, &["x0^2"]).unwrap();
        let t = filtration_dims(&p).unwrap();
        assert_eq!(t.dims, vec![9, 7, 5, 3, 1]);
        assert_eq!(t.m, vec![2, 2, 2, 2, 1]);
        assert!(filtration_quotient_violations(&t).is_empty());
        let b = compute_b(&FiltrationParams::parse(1, 2, &["x0^2"]).and_then(|p| filtration_dims(&p)).unwrap());
        assert_eq!(b.b, vec![r(1, 1)]);
    }

    #[test]
    fn exempt_indices_and_errors() {
        // the final index has m = 1 != d^n but sits outside the hypothesis
        let p = FiltrationParams::coordinate_powers(2, 2, 4).unwrap();
        let t = filtration_dims(&p).unwrap();
        assert!(filtration_quotient_violations(&t).is_empty());
        assert_eq!(*t.m.last().unwrap(), 1);
        assert!(FiltrationParams::parse(1, 5, &["x0^2"]).is_err());
        assert!(FiltrationParams::parse(2, 4, &["x0", "x1^2"]).is_err());
        assert_eq!(count_k(4, 1, 1).unwrap(), 5);
        assert_eq!(count_k(6, 2, 2).unwrap(), 10);
        assert_eq!(count_k(3, 3, 4).unwrap(), 5);
        assert!(count_k(5, 2, 1).is_err());
    }

    #[test]
    fn generic_forms() {
        for (n, d) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let p = FiltrationParams::random_forms(n, d, 4 * d, 7).unwrap();
            assert!(p.general_position(0).unwrap());
            let t = filtration_dims(&p).unwrap();
            assert_eq!(t.k() as u64, count_k(t.u, d, n).unwrap());
            assert!(filtration_quotient_violations(&t).is_empty(), "{n} {d}");
            assert!(compute_b(&t).all_nonnegative());
        }
        let degenerate = FiltrationParams::parse(2, 2, &["x0", "x0"]).unwrap();
        assert!(!degenerate.general_position(0).unwrap());
    }
}
