//! Graded-piece computations for homogeneous ideals.
//!
//! Everything here works with the ideal *generated* by the given forms, not
//! its saturation. Both agree in large degrees, and every certificate below
//! (emptiness at some degree, finite-difference dimension and degree) only
//! looks at large-degree behaviour.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::{binomial, EchelonBasis, HomogeneousPolynomial, MonomialIndex, SparseRow};
use crate::error::{Error, Result};

/// Rows `x^a * g` for every generator of degree at most `m`, in the basis `idx`.
pub(crate) fn multiple_rows<'a>(
    gens: &'a [HomogeneousPolynomial],
    idx: &'a MonomialIndex,
    m: u32,
) -> impl Iterator<Item = SparseRow> + 'a {
    let n_vars = gens.first().map_or(0, |g| g.n_vars());
    gens.iter()
        .filter(move |g| !g.is_zero() && g.degree() <= m)
        .flat_map(move |g| {
            let m = m;
            crate::algebra::monomial_basis(n_vars, m - g.degree())
                .into_iter()
                .map(move |a| {
                    let terms: Vec<(usize, BigRational)> = g
                        .terms()
                        .map(|(mono, c)| (idx.position(&mono.mul(&a)).expect("degree m monomial"), c.clone()))
                        .collect();
                    crate::algebra::matrix::sparse_from_rational(&terms)
                })
        })
}

/// Echelon basis of the degree-`m` piece of the ideal generated by `gens`.
pub(crate) fn ideal_piece(n_vars: usize, gens: &[HomogeneousPolynomial], m: u32) -> (MonomialIndex, EchelonBasis) {
    let idx = MonomialIndex::new(n_vars, m);
    let mut basis = EchelonBasis::new(idx.len());
    for row in multiple_rows(gens, &idx, m) {
        basis.insert(row);
        if basis.is_full() {
            break;
        }
    }
    (idx, basis)
}

/// Dimension of the degree-`m` piece of the ideal generated by `gens`.
pub fn ideal_graded_dim(n_vars: usize, gens: &[HomogeneousPolynomial], m: u32) -> u64 {
    ideal_piece(n_vars, gens, m).1.rank() as u64
}

/// `dim C[x]_m / I_m` for the ideal generated by `gens`.
pub fn ideal_hilbert(n_vars: usize, gens: &[HomogeneousPolynomial], m: u32) -> u64 {
    let total = binomial(m as u64 + n_vars as u64 - 1, n_vars as u64 - 1);
    total - ideal_graded_dim(n_vars, gens, m)
}

/// Default degree cap `max(sum deg g, 2 max deg g + n + 2)`.
pub fn default_degree_cap(n: usize, gens: &[HomogeneousPolynomial]) -> u32 {
    let sum: u32 = gens.iter().map(|g| g.degree()).sum();
    let max = gens.iter().map(|g| g.degree()).max().unwrap_or(0);
    sum.max(2 * max + n as u32 + 2)
}

/// Projective dimension, with the empty set below every dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjDim {
    Empty,
    Dim(u32),
}

impl fmt::Display for ProjDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjDim::Empty => f.write_str("EMPTY"),
            ProjDim::Dim(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    /// `H(m_star) = 0`: the ideal contains every form of degree `m_star`.
    CertifiedEmpty { m_star: u32 },
    /// Hilbert values stayed positive and followed a polynomial pattern over the top window.
    NonemptyLikely { tail: Vec<u64> },
    Inconclusive { cap: u32 },
}

impl Emptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, Emptiness::CertifiedEmpty { .. })
    }
}

impl fmt::Display for Emptiness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Emptiness::CertifiedEmpty { m_star } => write!(f, "CertifiedEmpty({m_star})"),
            Emptiness::NonemptyLikely { .. } => f.write_str("NonemptyLikely"),
            Emptiness::Inconclusive { cap } => write!(f, "Inconclusive(cap={cap})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionEstimate {
    Empty { m_star: u32 },
    Dim { k: u32, degree: u64 },
    Unstable { cap: u32 },
}

impl DimensionEstimate {
    pub fn proj_dim(&self) -> Option<ProjDim> {
        match self {
            DimensionEstimate::Empty { .. } => Some(ProjDim::Empty),
            DimensionEstimate::Dim { k, .. } => Some(ProjDim::Dim(*k)),
            DimensionEstimate::Unstable { .. } => None,
        }
    }
}

impl fmt::Display for DimensionEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionEstimate::Empty { .. } => f.write_str("EMPTY"),
            DimensionEstimate::Dim { k, .. } => write!(f, "{k}"),
            DimensionEstimate::Unstable { cap } => write!(f, "UNSTABLE(cap={cap})"),
        }
    }
}

/// Finite-difference analysis of Hilbert values over a window of consecutive degrees.
///
/// Returns `(t, constant)` for the smallest `t` whose `t`-th difference is
/// constant across at least two entries.
fn stabilized_difference(values: &[u64]) -> Option<(u32, i128)> {
    let mut row: Vec<i128> = values.iter().map(|&v| v as i128).collect();
    let mut t = 0;
    while row.len() >= 2 {
        if row.windows(2).all(|w| w[0] == w[1]) {
            return Some((t, row[0]));
        }
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
        t += 1;
    }
    None
}

/// Generator list of a projective variety `X ⊂ P^n` with cached Hilbert data.
#[derive(Debug)]
pub struct VarietyDescriptor {
    n: usize,
    generators: Vec<HomogeneousPolynomial>,
    degree_cap: u32,
    window: usize,
    cache: RwLock<BTreeMap<u32, u64>>,
}

impl Clone for VarietyDescriptor {
    fn clone(&self) -> Self {
        Self {
            n: self.n,
            generators: self.generators.clone(),
            degree_cap: self.degree_cap,
            window: self.window,
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl VarietyDescriptor {
    pub fn new(n: usize, generators: Vec<HomogeneousPolynomial>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.n_vars() != n + 1) {
            return Err(Error::VariableCount { left: n + 1, right: g.n_vars() });
        }
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let degree_cap = default_degree_cap(n, &generators);
        Ok(Self { n, generators, degree_cap, window: n + 3, cache: RwLock::new(BTreeMap::new()) })
    }

    /// The whole projective space `P^n`.
    pub fn projective_space(n: usize) -> Self {
        Self::new(n, Vec::new()).expect("no generators")
    }

    pub fn parse(n: usize, generators: &[&str]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|s| HomogeneousPolynomial::parse(s, n + 1))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, gens)
    }

    pub fn with_degree_cap(mut self, cap: u32) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.window = window;
        self
    }

    /// Same ambient space and settings with extra generators appended.
    pub fn intersect(&self, extra: &[HomogeneousPolynomial]) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.extend(extra.iter().cloned());
        let v = Self::new(self.n, gens)?;
        let cap = v.degree_cap.max(self.degree_cap);
        Ok(v.with_degree_cap(cap).with_window(self.window))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_vars(&self) -> usize {
        self.n + 1
    }

    pub fn generators(&self) -> &[HomogeneousPolynomial] {
        &self.generators
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn hilbert_function(&self, m: u32) -> u64 {
        if let Some(&h) = self.cache.read().expect("cache lock").get(&m) {
            return h;
        }
        let h = ideal_hilbert(self.n + 1, &self.generators, m);
        let mut cache = self.cache.write().expect("cache lock");
        // racing writers compute the same value
        if let Some(&prev) = cache.get(&m) {
            assert_eq!(prev, h, "Hilbert cache disagreement at degree {m}");
        }
        if h > 0 {
            assert!(
                !cache.range(..m).any(|(_, &v)| v == 0),
                "Hilbert function revived after vanishing (degree {m})"
            );
        } else {
            assert!(
                !cache.range(m + 1..).any(|(_, &v)| v > 0),
                "Hilbert function vanished below a positive value (degree {m})"
            );
        }
        cache.insert(m, h);
        h
    }

    /// Smallest `m <= cap` with `H(m) = 0`, using monotone vanishing.
    fn first_vanishing(&self, cap: u32) -> Option<u32> {
        if self.hilbert_function(cap) != 0 {
            return None;
        }
        let (mut lo, mut hi) = (0u32, cap);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.hilbert_function(mid) == 0 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo)
    }

    fn window_values(&self, window: usize) -> Vec<u64> {
        let cap = self.degree_cap;
        let start = cap.saturating_sub(window as u32 - 1);
        (start..=cap).map(|m| self.hilbert_function(m)).collect()
    }

    pub fn certify_empty(&self) -> Emptiness {
        if let Some(m_star) = self.first_vanishing(self.degree_cap) {
            return Emptiness::CertifiedEmpty { m_star };
        }
        let tail = self.window_values(self.window.max(2));
        match stabilized_difference(&tail) {
            Some((_, c)) if c > 0 => Emptiness::NonemptyLikely { tail },
            _ => Emptiness::Inconclusive { cap: self.degree_cap },
        }
    }

    /// Dimension from the stabilized finite differences of `H` over the top `window` degrees.
    pub fn estimate_dimension_with(&self, window: usize) -> Result<DimensionEstimate> {
        if window < self.n + 2 {
            return Err(Error::Precondition(format!("window {window} smaller than n+2 = {}", self.n + 2)));
        }
        if let Some(m_star) = self.first_vanishing(self.degree_cap) {
            return Ok(DimensionEstimate::Empty { m_star });
        }
        let values = self.window_values(window);
        if values.len() < window {
            return Ok(DimensionEstimate::Unstable { cap: self.degree_cap });
        }
        Ok(match stabilized_difference(&values) {
            Some((t, c)) if c > 0 && t as usize <= self.n => DimensionEstimate::Dim { k: t, degree: c as u64 },
            _ => DimensionEstimate::Unstable { cap: self.degree_cap },
        })
    }

    pub fn estimate_dimension(&self) -> Result<DimensionEstimate> {
        self.estimate_dimension_with(self.window)
    }

    /// Dimension `k`, failing on empty or unstable data.
    pub fn dimension(&self) -> Result<u32> {
        match self.estimate_dimension()? {
            DimensionEstimate::Dim { k, .. } => Ok(k),
            DimensionEstimate::Empty { .. } => Err(Error::Precondition("variety is empty".into())),
            DimensionEstimate::Unstable { cap } => Err(Error::UnstableHilbert { cap }),
        }
    }

    /// Degree `Δ`: the `k`-th finite difference of `H` over the stabilized window.
    pub fn degree(&self) -> Result<u64> {
        match self.estimate_dimension()? {
            DimensionEstimate::Dim { degree, .. } => Ok(degree),
            DimensionEstimate::Empty { .. } => Err(Error::Precondition("variety is empty".into())),
            DimensionEstimate::Unstable { cap } => Err(Error::UnstableHilbert { cap }),
        }
    }
}

pub fn hilbert_function(v: &VarietyDescriptor, m: u32) -> u64 {
    v.hilbert_function(m)
}

/// Emptiness certificate for the union of several generator lists.
pub fn certify_empty(n_vars: usize, gen_sets: &[Vec<HomogeneousPolynomial>], m_cap: u32) -> Result<Emptiness> {
    if m_cap < 1 {
        return Err(Error::Precondition("degree cap must be at least 1".into()));
    }
    let gens: Vec<_> = gen_sets.iter().flatten().cloned().collect();
    let v = VarietyDescriptor::new(n_vars - 1, gens)?.with_degree_cap(m_cap);
    Ok(v.certify_empty())
}

pub fn estimate_dimension(v: &VarietyDescriptor, window: usize) -> Result<DimensionEstimate> {
    v.estimate_dimension_with(window)
}

pub fn variety_degree(v: &VarietyDescriptor) -> Result<u64> {
    v.degree()
}

/// All `size`-subsets of `0..q` in lexicographic order.
pub fn subsets(q: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if size > q {
        return out;
    }
    let mut cur: Vec<usize> = (0..size).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..size).rev().find(|&i| cur[i] < q - size + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..size {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PositionVerdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct PositionReport {
    pub level: usize,
    pub verdict: PositionVerdict,
    /// First (lexicographic) subset whose common zero set meets `V`; 0-based indices.
    pub witness: Option<Vec<usize>>,
    pub certificates: Vec<(Vec<usize>, Emptiness)>,
}

impl PositionReport {
    pub fn holds(&self) -> bool {
        self.verdict == PositionVerdict::Holds
    }
}

/// Check that every `N+1` of the hypersurfaces have empty common intersection with `V`.
pub fn check_position(v: &VarietyDescriptor, q: &[HomogeneousPolynomial], level: usize) -> Result<PositionReport> {
    if q.len() < level + 1 {
        return Err(Error::Precondition(format!("need at least N+1 = {} hypersurfaces, got {}", level + 1, q.len())));
    }
    if let Some(h) = q.iter().find(|h| h.n_vars() != v.n_vars()) {
        return Err(Error::VariableCount { left: v.n_vars(), right: h.n_vars() });
    }
    let k = v.dimension()?;
    if (level as u32) < k {
        return Err(Error::Precondition(format!("N = {level} is below dim V = {k}")));
    }
    let subs = subsets(q.len(), level + 1);
    let certificates: Vec<(Vec<usize>, Emptiness)> = subs
        .into_par_iter()
        .map(|s| {
            let extra: Vec<_> = s.iter().map(|&i| q[i].clone()).collect();
            let w = v.intersect(&extra)?;
            Ok((s, w.certify_empty()))
        })
        .collect::<Result<_>>()?;
    let witness = certificates
        .iter()
        .find(|(_, e)| matches!(e, Emptiness::NonemptyLikely { .. }))
        .map(|(s, _)| s.clone());
    let verdict = if witness.is_some() {
        PositionVerdict::Fails
    } else if certificates.iter().all(|(_, e)| e.is_empty()) {
        PositionVerdict::Holds
    } else {
        PositionVerdict::Inconclusive
    };
    Ok(PositionReport { level, verdict, witness, certificates })
}

/// Hypersurfaces `P_1 = Q_1, P_t = sum_{j=2}^{N-k+t} c_tj Q_j` whose
/// successive intersections with `V` drop dimension by one each step.
#[derive(Clone, Debug)]
pub struct ReplacementSystem {
    pub polys: Vec<HomogeneousPolynomial>,
    /// Row `t-2` holds `c_{t,2} .. c_{t,N+1}`; entries past `N-k+t` are zero.
    pub coefficients: Vec<Vec<i64>>,
    /// Verified dimension of `(P_1 ∩ .. ∩ P_t) ∩ V` for `t = 1..=k+1`.
    pub chain_dims: Vec<ProjDim>,
    /// Attempts used at each step `t = 2..=k+1`.
    pub attempts: Vec<usize>,
}

pub const DEFAULT_COEFF_BOUND: i64 = 10;
pub const DEFAULT_MAX_RETRIES: usize = 8;

fn draw_nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let c = rng.random_range(-bound..=bound);
        if c != 0 {
            return c;
        }
    }
}

/// Construct the replacement system for `N+1` equal-degree hypersurfaces
/// with empty common intersection on `V`, verifying each step.
pub fn construct_replacement(
    v: &VarietyDescriptor,
    q: &[HomogeneousPolynomial],
    seed: u64,
    max_retries: usize,
) -> Result<ReplacementSystem> {
    if q.is_empty() {
        return Err(Error::Precondition("no hypersurfaces".into()));
    }
    let d = q[0].degree();
    if q.iter().any(|h| h.degree() != d || h.is_zero()) {
        return Err(Error::Precondition("hypersurfaces must be nonzero and of equal degree".into()));
    }
    let n_level = q.len() - 1;
    let k = v.dimension()? as usize;
    if n_level < k {
        return Err(Error::Precondition(format!("N = {n_level} below dim V = {k}")));
    }
    let all = v.intersect(q)?;
    match all.certify_empty() {
        Emptiness::CertifiedEmpty { .. } => {}
        other => {
            return Err(Error::Precondition(format!("common intersection with V not certified empty: {other}")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut polys = vec![q[0].clone()];
    let first = v.intersect(&polys)?.estimate_dimension()?;
    let target = |t: usize| if t == k + 1 { ProjDim::Empty } else { ProjDim::Dim((k - t) as u32) };
    let ok = |est: &DimensionEstimate, t: usize| match est.proj_dim() {
        Some(ProjDim::Empty) => true,
        Some(p) => t <= k && p <= target(t),
        None => false,
    };
    if !ok(&first, 1) {
        return Err(Error::RetriesExhausted { step: 1, last_dims: first.to_string() });
    }
    let mut chain_dims = vec![first.proj_dim().expect("checked")];
    let mut coefficients = Vec::new();
    let mut attempts = Vec::new();
    for t in 2..=k + 1 {
        let upper = n_level - k + t; // 1-based index of the last Q used
        let mut bound = DEFAULT_COEFF_BOUND;
        let mut last = String::new();
        let mut done = false;
        for attempt in 1..=max_retries.max(1) {
            let mut row = vec![0i64; n_level];
            let mut p = HomogeneousPolynomial::zero(v.n_vars(), d);
            for j in 2..=upper {
                let c = draw_nonzero(&mut rng, bound);
                row[j - 2] = c;
                p = p.add(&q[j - 1].scale(&BigRational::from_integer(BigInt::from(c))))?;
            }
            bound *= 2;
            if p.is_zero() {
                last = "zero combination".into();
                continue;
            }
            let mut trial = polys.clone();
            trial.push(p.clone());
            let est = v.intersect(&trial)?.estimate_dimension()?;
            last = est.to_string();
            if ok(&est, t) {
                polys = trial;
                chain_dims.push(est.proj_dim().expect("checked"));
                coefficients.push(row);
                attempts.push(attempt);
                done = true;
                break;
            }
        }
        if !done {
            let mut dims: Vec<String> = chain_dims.iter().map(ToString::to_string).collect();
            dims.push(last);
            return Err(Error::RetriesExhausted { step: t, last_dims: dims.join(", ") });
        }
    }
    Ok(ReplacementSystem { polys, coefficients, chain_dims, attempts })
}

/// Re-verify a replacement system independently of its construction.
pub fn verify_replacement(v: &VarietyDescriptor, q: &[HomogeneousPolynomial], sys: &ReplacementSystem) -> Result<bool> {
    let k = v.dimension()? as usize;
    let n_level = q.len() - 1;
    if sys.polys.len() != k + 1 || sys.polys[0] != q[0] {
        return Ok(false);
    }
    for t in 2..=k + 1 {
        let row = &sys.coefficients[t - 2];
        if row.iter().enumerate().any(|(j, &c)| j + 2 > n_level - k + t && c != 0) {
            return Ok(false);
        }
        let mut p = HomogeneousPolynomial::zero(v.n_vars(), q[0].degree());
        for (j, &c) in row.iter().enumerate() {
            p = p.add(&q[j + 1].scale(&BigRational::from_integer(BigInt::from(c))))?;
        }
        if p != sys.polys[t - 1] {
            return Ok(false);
        }
    }
    for t in 1..=k + 1 {
        let est = v.intersect(&sys.polys[..t])?.estimate_dimension()?;
        let good = match est.proj_dim() {
            Some(ProjDim::Empty) => true,
            Some(ProjDim::Dim(dim)) => t <= k && dim as usize <= k - t,
            None => false,
        };
        if !good {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(n_vars: usize, src: &[&str]) -> Vec<HomogeneousPolynomial> {
        src.iter().map(|s| HomogeneousPolynomial::parse(s, n_vars).unwrap()).collect()
    }

    #[test]
    fn graded_dims() {
        let conic = polys(3, &["x0*x2 - x1^2"]);
        assert_eq!(ideal_graded_dim(3, &conic, 2), 1);
        assert_eq!(ideal_graded_dim(3, &conic, 3), 3);
        assert_eq!(ideal_graded_dim(3, &[], 5), 0);
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(VarietyDescriptor::projective_space(2).hilbert_function(3), 10);
        let conic = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap();
        assert_eq!(conic.hilbert_function(3), 7);
        let pt = VarietyDescriptor::parse(2, &["x0", "x1", "x2"]).unwrap();
        assert_eq!(pt.hilbert_function(2), 0);
    }

    #[test]
    fn emptiness_examples() {
        let e = certify_empty(3, &[polys(3, &["x0", "x1", "x2"])], 10).unwrap();
        assert_eq!(e, Emptiness::CertifiedEmpty { m_star: 1 });
        let e = certify_empty(3, &[polys(3, &["x0", "x1"])], 10).unwrap();
        assert!(matches!(e, Emptiness::NonemptyLikely { .. }));
        let e = certify_empty(3, &[polys(3, &["x0^2", "x1^2"]), polys(3, &["x2^2"])], 10).unwrap();
        assert_eq!(e, Emptiness::CertifiedEmpty { m_star: 4 });
        assert!(certify_empty(3, &[], 0).is_err());
    }

    #[test]
    fn inconclusive_when_cap_too_small() {
        // H(1) = 3 - 0, H(2) = 6 - 3: no stabilized pattern and no vanishing by degree 2
        let e = certify_empty(3, &[polys(3, &["x0^2", "x1^2", "x2^2"])], 2).unwrap();
        assert!(matches!(e, Emptiness::Inconclusive { cap: 2 }));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(VarietyDescriptor::projective_space(2).dimension().unwrap(), 2);
        assert_eq!(VarietyDescriptor::parse(2, &["x0"]).unwrap().dimension().unwrap(), 1);
        let conic = VarietyDescriptor::parse(2, &["x0*x2 - x1^2"]).unwrap();
        assert_eq!(conic.dimension().unwrap(), 1);
        assert_eq!(conic.degree().unwrap(), 2);
        assert_eq!(VarietyDescriptor::projective_space(3).degree().unwrap(), 1);
        assert_eq!(VarietyDescriptor::parse(2, &["x0*x1"]).unwrap().degree().unwrap(), 2);
        let v = VarietyDescriptor::projective_space(2);
        assert!(v.estimate_dimension_with(3).is_err());
    }

    #[test]
    fn position_examples() {
        let p2 = VarietyDescriptor::projective_space(2);
        let four = polys(3, &["x0", "x1", "x2", "x0 + x1 + x2"]);
        let r = check_position(&p2, &four, 2).unwrap();
        assert!(r.holds());
        assert!(r.witness.is_none());
        assert_eq!(r.certificates.len(), 4);
        assert!(check_position(&p2, &four, 3).unwrap().holds());

        let pencil = polys(3, &["x0", "x1", "x0 + x1"]);
        let r = check_position(&p2, &pencil, 2).unwrap();
        assert_eq!(r.verdict, PositionVerdict::Fails);
        assert_eq!(r.witness, Some(vec![0, 1, 2]));
        assert!(check_position(&p2, &pencil, 3).is_err());
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(subsets(4, 2), vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 3), vec![vec![0, 1, 2]]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn replacement_four_lines() {
        let p2 = VarietyDescriptor::projective_space(2);
        let four = polys(3, &["x0", "x1", "x2", "x0 + x1 + x2"]);
        let sys = construct_replacement(&p2, &four, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert_eq!(sys.chain_dims, vec![ProjDim::Dim(1), ProjDim::Dim(0), ProjDim::Empty]);
        assert_eq!(sys.polys[0], four[0]);
        // P_2 uses Q_2..Q_3 only
        assert_eq!(sys.coefficients[0][2], 0);
        assert!(verify_replacement(&p2, &four, &sys).unwrap());
        let again = construct_replacement(&p2, &four, 0, DEFAULT_MAX_RETRIES).unwrap();
        assert_eq!(again.coefficients, sys.coefficients);
    }

    #[test]
    fn replacement_general_position_input() {
        let p2 = VarietyDescriptor::projective_space(2);
        let three = polys(3, &["x0 + x1", "x1 - x2", "x0 + 2*x2"]);
        let sys = construct_replacement(&p2, &three, 7, DEFAULT_MAX_RETRIES).unwrap();
        // N = k: P_t combines Q_2..Q_t
        assert_eq!(sys.coefficients[0][1], 0);
        assert_eq!(sys.chain_dims.last(), Some(&ProjDim::Empty));
    }

    #[test]
    fn replacement_requires_empty_intersection() {
        let p2 = VarietyDescriptor::projective_space(2);
        let pencil = polys(3, &["x0", "x1", "x0 + x1"]);
        assert!(matches!(construct_replacement(&p2, &pencil, 0, 8), Err(Error::Precondition(_))));
        let mixed = polys(3, &["x0", "x1^2", "x2"]);
        assert!(matches!(construct_replacement(&p2, &mixed, 0, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn hilbert_bounded_by_ambient() {
        let v = VarietyDescriptor::parse(2, &["x0^2*x1", "x1*x2"]).unwrap();
        for m in 0..6 {
            let full = binomial(m as u64 + 2, 2);
            let h = v.hilbert_function(m);
            assert!(h <= full);
            assert_eq!(h == full, m < 2);
        }
    }
}
