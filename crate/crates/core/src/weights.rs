//! Chow weights of bracket-form Chow forms and Hilbert weights of graded
//! quotients.
//!
//! Chow forms are inputs: only coordinate linear subspaces have a built-in
//! form. Weight vectors are non-negative integers so every quantity stays
//! an exact rational.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::lexer::{Cursor, Tok, Token};
use crate::algebra::{EchelonBasis, HomogeneousPolynomial, Monomial};
use crate::error::{Error, Result};
use crate::variety::{ideal_piece, subsets, Emptiness, VarietyDescriptor};

/// Non-negative integer weight tuple `c = (c_0, .., c_n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(pub Vec<u64>);

impl WeightVector {
    pub fn new(c: Vec<u64>) -> Self {
        Self(c)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn min(&self) -> u64 {
        self.0.iter().copied().min().unwrap_or(0)
    }

    pub fn scaled(&self, lambda: u64) -> Self {
        Self(self.0.iter().map(|c| c * lambda).collect())
    }

    fn subset_sum(&self, j: &[usize]) -> u64 {
        j.iter().map(|&i| self.0[i]).sum()
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// One term `coefficient * [J_1][J_2]...[J_Δ]`; brackets kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerm {
    pub coefficient: BigRational,
    pub brackets: Vec<Vec<usize>>,
}

/// Polynomial in the brackets `[J] = det(u_{i, j_t})` of `k+1` blocks of `n+1` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketPolynomial {
    n: usize,
    k: usize,
    terms: Vec<BracketTerm>,
}

/// Sort a bracket's indices, returning the permutation sign (0 on a repeated index).
fn normalize_bracket(j: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 0..j.len() {
        for l in 0..j.len() - 1 - i {
            if j[l] > j[l + 1] {
                j.swap(l, l + 1);
                sign = -sign;
            }
        }
    }
    if j.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

impl BracketPolynomial {
    pub fn new(n: usize, k: usize, raw: Vec<(BigRational, Vec<Vec<usize>>)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<Vec<usize>>, BigRational> = BTreeMap::new();
        let mut delta = None;
        for (c, brackets) in raw {
            let mut sign = 1;
            let mut bs = Vec::with_capacity(brackets.len());
            for mut j in brackets {
                if j.len() != k + 1 {
                    return Err(Error::InvalidInput(format!("bracket of size {} in a form with k+1 = {}", j.len(), k + 1)));
                }
                if let Some(&bad) = j.iter().find(|&&i| i > n) {
                    return Err(Error::InvalidInput(format!("bracket index {bad} exceeds n = {n}")));
                }
                sign *= normalize_bracket(&mut j);
                bs.push(j);
            }
            match delta {
                None => delta = Some(bs.len()),
                Some(d) if d != bs.len() => {
                    return Err(Error::InvalidInput("bracket terms of different degrees".into()));
                }
                _ => {}
            }
            if sign == 0 || c.is_zero() {
                continue;
            }
            bs.sort();
            let c = if sign < 0 { -c } else { c };
            *merged.entry(bs).or_insert_with(BigRational::zero) += c;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(brackets, coefficient)| BracketTerm { coefficient, brackets })
            .collect();
        Ok(Self { n, k, terms })
    }

    /// Parse text such as `3/2 * [0,1][1,2] - [0,2]^2`.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let mut cur = Cursor::new(text)?;
        let mut raw = Vec::new();
        let mut first = true;
        let mut k = None;
        while !cur.at_end() || first {
            let negative = if cur.eat('-') {
                true
            } else if cur.eat('+') || first {
                false
            } else {
                return Err(cur.error("expected `+` or `-`"));
            };
            first = false;
            let mut coeff = BigRational::one();
            if let Some(Tok::Int(_)) = cur.peek() {
                coeff = parse_rational(&mut cur)?;
                cur.eat('*');
            }
            let mut brackets = Vec::new();
            while cur.peek() == Some(&Tok::Sym('[')) {
                let pos = cur.pos();
                cur.expect('[')?;
                let mut j = vec![cur.expect_nat()? as usize];
                while cur.eat(',') {
                    j.push(cur.expect_nat()? as usize);
                }
                cur.expect(']')?;
                match k {
                    None => k = Some(j.len() - 1),
                    Some(kk) if kk + 1 != j.len() => {
                        return Err(Error::Syntax { pos, msg: "brackets of different sizes".into() });
                    }
                    _ => {}
                }
                let e = if cur.eat('^') { cur.expect_nat()? } else { 1 };
                brackets.extend(std::iter::repeat_n(j, e as usize));
                cur.eat('*');
            }
            if brackets.is_empty() {
                return Err(cur.error("expected a bracket `[..]`"));
            }
            raw.push((if negative { -coeff } else { coeff }, brackets));
        }
        Self::new(n, k.unwrap_or(0), raw)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> &[BracketTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of brackets per term (the degree `Δ` in each block).
    pub fn bracket_degree(&self) -> usize {
        self.terms.first().map_or(0, |t| t.brackets.len())
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.k != other.k {
            return Err(Error::InvalidInput("bracket polynomials over different spaces".into()));
        }
        let mut raw = Vec::new();
        for a in &self.terms {
            for b in &other.terms {
                let mut bs = a.brackets.clone();
                bs.extend(b.brackets.iter().cloned());
                raw.push((&a.coefficient * &b.coefficient, bs));
            }
        }
        Self::new(self.n, self.k, raw)
    }

    /// Expand into a polynomial in the `(k+1)(n+1)` variables `u_ij`
    /// (variable index `i*(n+1)+j`).
    pub fn expand(&self) -> UPoly {
        let mut out = UPoly::zero();
        for t in &self.terms {
            out = out.add(&self.expand_term(t));
        }
        out
    }

    fn expand_term(&self, t: &BracketTerm) -> UPoly {
        let nv = (self.k + 1) * (self.n + 1);
        let mut acc = UPoly::constant(nv, t.coefficient.clone());
        for j in &t.brackets {
            acc = acc.mul(&bracket_determinant(j, self.n, nv));
        }
        acc
    }
}

impl fmt::Display for BracketPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coefficient.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = t.coefficient.abs();
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            for j in &t.brackets {
                let parts: Vec<String> = j.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))?;
            }
        }
        Ok(())
    }
}

fn parse_rational(cur: &mut Cursor) -> Result<BigRational> {
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
        return Ok(BigRational::new(num, den));
    }
    Ok(BigRational::from_integer(num))
}

/// Sparse polynomial in the Chow-form variables `u_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl UPoly {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    fn constant(nv: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nv], c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u16]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let v = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *v += c;
            if v.is_zero() {
                terms.remove(e);
            }
        }
        Self { terms }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u16>, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u16> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Self { terms }
    }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        // insert k-1 at every position; each shift from the end is a transposition
        for pos in (0..=p.len()).rev() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let sign = if (p.len() - pos) % 2 == 0 { s } else { -s };
            out.push((q, sign));
        }
    }
    out
}

fn bracket_determinant(j: &[usize], n: usize, nv: usize) -> UPoly {
    let mut terms = BTreeMap::new();
    for (perm, sign) in permutations(j.len()) {
        let mut e = vec![0u16; nv];
        for (row, &col) in perm.iter().enumerate() {
            e[row * (n + 1) + j[col]] += 1;
        }
        *terms.entry(e).or_insert_with(BigRational::zero) += BigRational::from_integer(sign.into());
    }
    terms.retain(|_, c: &mut BigRational| !c.is_zero());
    UPoly { terms }
}

/// The Chow form `[J]` of the coordinate plane `{x_j = 0 : j ∉ J}`.
pub fn coordinate_subspace_chow_form(j: &[usize], n: usize) -> Result<BracketPolynomial> {
    if j.is_empty() {
        return Err(Error::InvalidInput("empty index set".into()));
    }
    BracketPolynomial::new(n, j.len() - 1, vec![(BigRational::one(), vec![j.to_vec()])])
}

/// Both computation routes of a Chow weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowWeight {
    pub value: u64,
    /// Largest bracket weight whose terms do not cancel symbolically.
    pub combinatorial: u64,
    /// Leading `t`-exponent after substituting `u_ij <- t^{c_j} r_ij`.
    pub substitution: u64,
    pub samples: usize,
}

pub const SUBSTITUTION_RETRIES: usize = 12;
const SAMPLE_BOUND: i64 = 997;

fn combinatorial_weight(f: &BracketPolynomial, c: &WeightVector) -> Option<u64> {
    let mut levels: BTreeMap<u64, Vec<&BracketTerm>> = BTreeMap::new();
    for t in &f.terms {
        let w: u64 = t.brackets.iter().map(|j| c.subset_sum(j)).sum();
        levels.entry(w).or_default().push(t);
    }
    for (w, group) in levels.into_iter().rev() {
        let sum = group.iter().fold(UPoly::zero(), |acc, t| acc.add(&f.expand_term(t)));
        if !sum.is_zero() {
            return Some(w);
        }
    }
    None
}

fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !a[i][col].is_zero()) else {
            return BigRational::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pv = a[col][col].clone();
        det *= &pv;
        for i in col + 1..n {
            let f = &a[i][col] / &pv;
            if f.is_zero() {
                continue;
            }
            for j in col..n {
                let v = &a[col][j] * &f;
                a[i][j] -= v;
            }
        }
    }
    det
}

fn leading_exponent_sample(f: &BracketPolynomial, c: &WeightVector, rng: &mut ChaCha8Rng) -> Option<u64> {
    let r: Vec<Vec<BigRational>> = (0..=f.k)
        .map(|_| {
            (0..=f.n)
                .map(|_| {
                    let num = rng.random_range(1..=SAMPLE_BOUND);
                    let den = rng.random_range(1..=SAMPLE_BOUND);
                    BigRational::new(num.into(), den.into())
                })
                .collect()
        })
        .collect();
    let mut minors: BTreeMap<Vec<usize>, BigRational> = BTreeMap::new();
    let mut by_exponent: BTreeMap<u64, BigRational> = BTreeMap::new();
    for t in &f.terms {
        let mut v = t.coefficient.clone();
        let mut w = 0;
        for j in &t.brackets {
            let m = minors
                .entry(j.clone())
                .or_insert_with(|| det_rational(r.iter().map(|row| j.iter().map(|&jj| row[jj].clone()).collect()).collect()));
            v *= &*m;
            // [J](t^c u) = t^{sum_J c_j} [J](u)
            w += c.subset_sum(j);
        }
        *by_exponent.entry(w).or_insert_with(BigRational::zero) += v;
    }
    by_exponent.into_iter().rev().find(|(_, v)| !v.is_zero()).map(|(e, _)| e)
}

/// Chow weight `e_X(c)`, cross-checked by two independent routes.
pub fn chow_weight_report(f: &BracketPolynomial, c: &WeightVector, seed: u64) -> Result<ChowWeight> {
    if f.is_zero() {
        return Err(Error::Precondition("Chow form is zero".into()));
    }
    if c.len() != f.n + 1 {
        return Err(Error::InvalidInput(format!("weight vector has {} entries, expected {}", c.len(), f.n + 1)));
    }
    let combinatorial =
        combinatorial_weight(f, c).ok_or_else(|| Error::Precondition("Chow form expands to zero".into()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = 0;
    let mut substitution = None;
    for _ in 0..SUBSTITUTION_RETRIES {
        let a = leading_exponent_sample(f, c, &mut rng);
        let b = leading_exponent_sample(f, c, &mut rng);
        samples += 2;
        if a.is_some() && a == b {
            substitution = a;
            break;
        }
    }
    let substitution = substitution.ok_or(Error::DegenerateSamples { samples })?;
    if substitution != combinatorial {
        return Err(Error::ChowRouteDisagreement {
            combinatorial: combinatorial as i64,
            substitution: substitution as i64,
        });
    }
    Ok(ChowWeight { value: substitution, combinatorial, substitution, samples })
}

pub fn chow_weight(f: &BracketPolynomial, c: &WeightVector, seed: u64) -> Result<u64> {
    chow_weight_report(f, c, seed).map(|r| r.value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertWeightResult {
    pub s: u64,
    /// Monomials whose residues form the selected basis of `C[x]_m / I_m`.
    pub basis: Vec<Monomial>,
    /// Rank of `I_m` plus selected residues after each accepted monomial.
    pub rank_profile: Vec<usize>,
    pub ideal_rank: usize,
}

impl HilbertWeightResult {
    pub fn s_rational(&self) -> BigRational {
        BigRational::from_integer(self.s.into())
    }
}

/// Hilbert weight `S_X(m, c)` by matroid greedy selection.
///
/// Monomial sets whose residues are independent in the quotient form a
/// linear matroid, so scanning monomials by decreasing `a.c` (ties broken by
/// the global monomial order) and keeping each one that raises the rank
/// yields a maximum-weight basis.
pub fn hilbert_weight(v: &VarietyDescriptor, m: u32, c: &WeightVector) -> Result<HilbertWeightResult> {
    if m < 1 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if c.len() != v.n_vars() {
        return Err(Error::InvalidInput(format!("weight vector has {} entries, expected {}", c.len(), v.n_vars())));
    }
    let (idx, mut echelon) = ideal_piece(v.n_vars(), v.generators(), m);
    let ideal_rank = echelon.rank();
    let mut order: Vec<usize> = (0..idx.len()).collect();
    order.sort_by(|&a, &b| idx.basis()[b].weight(&c.0).cmp(&idx.basis()[a].weight(&c.0)).then(a.cmp(&b)));
    let mut basis = Vec::new();
    let mut rank_profile = Vec::new();
    let mut s = 0;
    for col in order {
        if echelon.is_full() {
            break;
        }
        if echelon.insert_unit(col) {
            let mono = idx.basis()[col].clone();
            s += mono.weight(&c.0);
            basis.push(mono);
            rank_profile.push(echelon.rank());
        }
    }
    Ok(HilbertWeightResult { s, basis, rank_profile, ideal_rank })
}

/// Maximum of `sum a_i . c` over all monomial bases of the quotient, by exhaustive enumeration.
///
/// Independent of the greedy route; intended for small quotients.
pub fn hilbert_weight_brute_force(v: &VarietyDescriptor, m: u32, c: &WeightVector) -> Result<u64> {
    let (idx, echelon) = ideal_piece(v.n_vars(), v.generators(), m);
    let h = idx.len() - echelon.rank();
    let count = crate::algebra::binomial(idx.len() as u64, h as u64);
    if count > 2_000_000 {
        return Err(Error::InvalidInput(format!("{count} candidate bases is too many to enumerate")));
    }
    let mut best = None;
    for subset in subsets(idx.len(), h) {
        let mut e: EchelonBasis = echelon.clone();
        if subset.iter().all(|&col| e.insert_unit(col)) {
            let w: u64 = subset.iter().map(|&col| idx.basis()[col].weight(&c.0)).sum();
            best = Some(best.map_or(w, |b: u64| b.max(w)));
        }
    }
    best.ok_or_else(|| Error::Precondition("quotient has no monomial basis".into()))
}

fn rat(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Margin of the Hilbert/Chow weight inequality
/// `S/(m H) >= e/((n+1) Δ) - (2n+1) Δ / m * max c`, as LHS minus RHS.
pub fn hilbert_chow_margin(
    v: &VarietyDescriptor,
    f: &BracketPolynomial,
    m: u32,
    c: &WeightVector,
    seed: u64,
) -> Result<BigRational> {
    let delta = v.degree()?;
    let k = v.dimension()? as usize;
    if f.n() != v.n() || f.k() != k {
        return Err(Error::InvalidInput(format!(
            "Chow form lives on (n={}, k={}), variety has (n={}, k={k})",
            f.n(),
            f.k(),
            v.n()
        )));
    }
    if f.bracket_degree() as u64 != delta {
        return Err(Error::InvalidInput(format!(
            "Chow form has bracket degree {}, variety has degree {delta}",
            f.bracket_degree()
        )));
    }
    if (m as u64) <= delta {
        return Err(Error::Precondition(format!("m = {m} must exceed the degree {delta}")));
    }
    let hw = hilbert_weight(v, m, c)?;
    let h = hw.basis.len() as u64;
    let e = chow_weight(f, c, seed)?;
    let n = v.n() as u64;
    let lhs = hw.s_rational() / rat(m as u64 * h);
    let rhs = rat(e) / rat((n + 1) * delta) - rat((2 * n + 1) * delta * c.max()) / rat(m as u64);
    Ok(lhs - rhs)
}

/// Margin `e_Y(c) - (c_{i_0} + .. + c_{i_n}) Δ` of the Chow weight lower bound,
/// after certifying that the coordinate subspace of `subset` misses `Y`.
pub fn chow_lower_bound_margin(
    y: &VarietyDescriptor,
    f: &BracketPolynomial,
    c: &WeightVector,
    subset: &[usize],
    seed: u64,
) -> Result<BigRational> {
    if c.0.contains(&0) {
        return Err(Error::Precondition("weights must be positive".into()));
    }
    let dim = y.dimension()? as usize;
    if subset.len() != dim + 1 {
        return Err(Error::Precondition(format!("subset must have dim Y + 1 = {} elements", dim + 1)));
    }
    let coords: Vec<HomogeneousPolynomial> =
        subset.iter().map(|&i| HomogeneousPolynomial::variable(y.n_vars(), i)).collect();
    match y.intersect(&coords)?.certify_empty() {
        Emptiness::CertifiedEmpty { .. } => {}
        other => {
            return Err(Error::Precondition(format!("coordinate subspace meets Y ({other})")));
        }
    }
    let delta = y.degree()?;
    let e = chow_weight(f, c, seed)?;
    let bound: u64 = subset.iter().map(|&i| c.0[i]).sum::<u64>() * delta;
    Ok(rat(e) - rat(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn coordinate_forms_expand_to_determinants() {
        let f = coordinate_subspace_chow_form(&[0, 1], 2).unwrap();
        let u = f.expand();
        // variables: u00 u01 u02 u10 u11 u12
        assert_eq!(u.num_terms(), 2);
        assert_eq!(u.coefficient(&[1, 0, 0, 0, 1, 0]), BigRational::one());
        assert_eq!(u.coefficient(&[0, 1, 0, 1, 0, 0]), -BigRational::one());
        let p = coordinate_subspace_chow_form(&[0], 2).unwrap().expand();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.coefficient(&[1, 0, 0]), BigRational::one());
        let big = coordinate_subspace_chow_form(&[0, 1, 2, 3], 4).unwrap().expand();
        assert_eq!(big.num_terms(), 24);
        assert!(coordinate_subspace_chow_form(&[], 2).is_err());
    }

    #[test]
    fn parse_and_normalize() {
        let f = BracketPolynomial::parse("3/2 * [0,1][1,2] - [0,2]^2", 2).unwrap();
        assert_eq!(f.k(), 1);
        assert_eq!(f.bracket_degree(), 2);
        assert_eq!(f.terms().len(), 2);
        let g = BracketPolynomial::parse("[1,0] + [0,1]", 2).unwrap();
        assert!(g.is_zero());
        assert!(BracketPolynomial::parse("[0,1][0,1,2]", 2).is_err());
        assert!(BracketPolynomial::parse("[0,1] + [0,1][1,2]", 2).is_err());
        assert!(BracketPolynomial::parse("[0,5]", 2).is_err());
        let back = BracketPolynomial::parse(&f.to_string(), 2).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn chow_weight_examples() {
        let f = coordinate_subspace_chow_form(&[0, 1], 2).unwrap();
        let r = chow_weight_report(&f, &WeightVector::new(vec![3, 2, 1]), 0).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.combinatorial, r.substitution);
        assert_eq!(chow_weight(&f, &WeightVector::new(vec![0, 0, 0]), 0).unwrap(), 0);
        let g = BracketPolynomial::parse("[0,1][1,2]", 2).unwrap();
        assert_eq!(chow_weight(&g, &WeightVector::new(vec![3, 2, 1]), 1).unwrap(), 5 + 3);
    }

    #[test]
    fn cancelling_top_terms_are_skipped() {
        // [0,1][2,3] - [0,2][1,3] + [0,3][1,2] vanishes identically, so the
        // top-weight group below cancels and only [2,3]^2 [0,1] survives
        let f = BracketPolynomial::parse("[0,1][2,3][0,1] - [0,2][1,3][0,1] + [0,3][1,2][0,1] + [2,3]^2[0,1]", 3)
            .unwrap();
        let g = BracketPolynomial::parse("[2,3]^2[0,1]", 3).unwrap();
        assert_eq!(f.expand(), g.expand());
        let c = WeightVector::new(vec![5, 5, 0, 0]);
        let r = chow_weight_report(&f, &c, 3).unwrap();
        assert_eq!(r.combinatorial, 10);
        assert_eq!(r.substitution, 10);
        let naive = f.terms().iter().map(|t| t.brackets.iter().map(|j| c.subset_sum(j)).sum::<u64>()).max();
        assert_eq!(naive, Some(20));
    }

    #[test]
    fn hilbert_weight_examples() {
        let p1 = VarietyDescriptor::projective_space(1);
        let r = hilbert_weight(&p1, 2, &WeightVector::new(vec![1, 0])).unwrap();
        assert_eq!(r.s, 3);
        assert_eq!(r.basis.len(), 3);
        let conic = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap();
        let r = hilbert_weight(&conic, 2, &WeightVector::new(vec![1, 0, 0])).unwrap();
        assert_eq!(r.s, 4);
        assert!(!r.basis.contains(&Monomial::new(vec![0, 2, 0])));
        assert_eq!(hilbert_weight_brute_force(&conic, 2, &WeightVector::new(vec![1, 0, 0])).unwrap(), 4);
        let r = hilbert_weight(&conic, 3, &WeightVector::new(vec![1, 1, 1])).unwrap();
        assert_eq!(r.s, 3 * conic.hilbert_function(3));
        assert!(hilbert_weight(&conic, 0, &WeightVector::new(vec![1, 1, 1])).is_err());
    }

    #[test]
    fn margin_examples() {
        let line = VarietyDescriptor::parse(2, &["x2"]).unwrap();
        let f = coordinate_subspace_chow_form(&[0, 1], 2).unwrap();
        let margin = hilbert_chow_margin(&line, &f, 3, &WeightVector::new(vec![2, 1, 0]), 0).unwrap();
        assert!(margin >= BigRational::zero());
        let zero = hilbert_chow_margin(&line, &f, 3, &WeightVector::new(vec![0, 0, 0]), 0).unwrap();
        assert!(zero.is_zero());
        assert!(hilbert_chow_margin(&line, &f, 1, &WeightVector::new(vec![1, 1, 1]), 0).is_err());

        let y = VarietyDescriptor::parse(3, &["x2", "x3"]).unwrap();
        let fy = coordinate_subspace_chow_form(&[0, 1], 3).unwrap();
        let m = chow_lower_bound_margin(&y, &fy, &WeightVector::new(vec![4, 3, 2, 1]), &[0, 1], 0).unwrap();
        assert!(m.is_zero());
        let m = chow_lower_bound_margin(&y, &fy, &WeightVector::new(vec![1, 1, 1, 1]), &[0, 1], 0).unwrap();
        assert!(m.is_zero());
        assert!(matches!(
            chow_lower_bound_margin(&y, &fy, &WeightVector::new(vec![4, 3, 2, 1]), &[0, 2], 0),
            Err(Error::Precondition(_))
        ));
    }

    fn small_varieties() -> Vec<VarietyDescriptor> {
        vec![
            VarietyDescriptor::projective_space(1),
            VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap(),
            VarietyDescriptor::parse(2, &["x0*x1"]).unwrap(),
            VarietyDescriptor::parse(2, &["x2"]).unwrap(),
            VarietyDescriptor::parse(2, &["x0^2 + x1*x2"]).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn greedy_matches_brute_force(which in 0usize..5, m in 1u32..4, c in prop::collection::vec(0u64..6, 3)) {
            let v = &small_varieties()[which];
            let c = WeightVector::new(c[..v.n_vars()].to_vec());
            let (idx, e) = ideal_piece(v.n_vars(), v.generators(), m);
            prop_assume!(idx.len() - e.rank() <= 6);
            let g = hilbert_weight(v, m, &c).unwrap();
            prop_assert_eq!(g.s, hilbert_weight_brute_force(v, m, &c).unwrap());
        }

        #[test]
        fn weights_scale_linearly(which in 0usize..5, m in 1u32..5, lambda in 1u64..5, c in prop::collection::vec(0u64..6, 3)) {
            let v = &small_varieties()[which];
            let c = WeightVector::new(c[..v.n_vars()].to_vec());
            let a = hilbert_weight(v, m, &c).unwrap();
            let b = hilbert_weight(v, m, &c.scaled(lambda)).unwrap();
            prop_assert_eq!(b.s, lambda * a.s);
            prop_assert_eq!(&a.basis, &b.basis);
            let h = a.basis.len() as u64;
            prop_assert!(a.s <= m as u64 * c.max() * h);
            prop_assert!(a.s >= m as u64 * c.min() * h);
            let f = coordinate_subspace_chow_form(&[0, 1], 2).unwrap();
            if v.n_vars() == 3 {
                let e1 = chow_weight(&f, &c, 0).unwrap();
                let e2 = chow_weight(&f, &c.scaled(lambda), 0).unwrap();
                prop_assert_eq!(e2, lambda * e1);
            }
        }
    }
}
